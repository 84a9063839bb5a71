import json

import pytest

from gcrystal import cli
from gcrystal.harness import (
    REGISTRY,
    SUITES,
    SuiteError,
    all_pass,
    report_json,
    run_suite,
)
from gcrystal.ledger import emit_ledger

FAST = {"trials": 5}


def test_unknown_suite_rejected():
    with pytest.raises(SuiteError):
        run_suite("nope")


def test_out_of_range_params_rejected():
    with pytest.raises(SuiteError):
        run_suite("verma", {"n": 9})
    with pytest.raises(SuiteError):
        run_suite("uniqueness", {"n": 1})
    with pytest.raises(SuiteError):
        run_suite("axioms", {"model": "not-a-model"})


def test_results_sorted_and_tagged():
    results = run_suite("verma", {"n": 2, **FAST})
    assert results == sorted(results, key=lambda r: (r.check, r.subject))
    assert all(r.suite == "verma" for r in results)
    assert all(REGISTRY[r.check].suite == "verma" for r in results)
    assert all(r.identity == REGISTRY[r.check].identity for r in results)


def test_reports_reproducible_bit_for_bit():
    a = report_json("rmap", {"n": 1, **FAST})
    b = report_json("rmap", {"n": 1, **FAST})
    assert a == b
    parsed = json.loads(a)
    assert parsed["suite"] == "rmap" and parsed["results"]


def test_different_seeds_change_sampled_points_not_verdicts():
    a = run_suite("verma", {"n": 2, **FAST}, seed=1)
    b = run_suite("verma", {"n": 2, **FAST}, seed=2)
    assert [r.verdict for r in a] == [r.verdict for r in b]


def test_failing_check_is_collected_not_raised(monkeypatch):
    import gcrystal.harness as h

    def broken(*args, **kwargs):
        raise RuntimeError("synthetic breakage")

    monkeypatch.setattr(h, "check_composition_relation", broken)
    results = run_suite("verma", {"n": 2, **FAST})
    fails = [r for r in results if r.verdict == "fail"]
    assert fails and all("synthetic breakage" in r.note for r in fails)
    assert all(r.counterexample is not None for r in fails)  # fail => evidence
    assert not all_pass(results)


def test_vacuous_checks_are_skips():
    results = run_suite("verma", {"n": 1, **FAST})
    assert {r.verdict for r in results} == {"skip"}
    assert all_pass(results)


def test_uniqueness_suite_reports_assumption():
    results = run_suite("uniqueness", {})
    by_check = {r.check: r for r in results}
    assert by_check["uniq-orbit-density"].verdict == "assumed"
    assert by_check["uniq-fixed-point"].verdict == "pass"
    assert by_check["uniq-forced"].verdict == "pass"
    assert all_pass(results)


def test_every_registered_check_runs_in_its_suite():
    # ledger rows and executed checks are the same set
    seen: dict[str, set] = {name: set() for name in SUITES}
    params = {
        "verma": {"trials": 3},
        "axioms": {"trials": 3},
        "epsilon": {"trials": 3},
        "product": {"trials": 3},
        "borel-oracle": {"trials": 3},
        "rmap": {"trials": 3},
        "invariance": {"trials": 3},
        "uniqueness": {},
        "ud": {"trials": 20},
    }
    for name in SUITES:
        for result in run_suite(name, params[name]):
            assert REGISTRY[result.check].suite == name
            seen[name].add(result.check)
    for check, info in REGISTRY.items():
        assert check in seen[info.suite], f"{check} never ran in suite {info.suite}"


def test_counterexamples_serialize():
    # force a failure by monkeypatching nothing: craft a result through report
    # of a suite with a deliberately tiny domain is overkill; instead check the
    # JSON encoder on a synthetic result embedded in a report structure
    from gcrystal.harness import _jsonable
    from fractions import Fraction

    blob = _jsonable({"x": Fraction(3, 2), "nested": [Fraction(1), {"y": Fraction(-5, 7)}]})
    assert blob == {"x": "3/2", "nested": ["1", {"y": "-5/7"}]}
    json.dumps(blob)


# --- ledger ---------------------------------------------------------------------------


def test_ledger_contains_every_check_once():
    doc = emit_ledger()
    for check in REGISTRY:
        assert doc.count(f"| `{check}` |") == 1
    for suite in SUITES:
        assert f"## Suite `{suite}`" in doc


def test_ledger_has_catalog_and_dsl_reference():
    doc = emit_ledger()
    assert "# Model catalog" in doc
    assert "# Expression DSL" in doc
    assert "`l1`" in doc


# --- command-line interface -------------------------------------------------------------


def test_cli_verify_pass(capsys):
    code = cli.main(["verify", "verma", "--n", "2", "--trials", "5"])
    out = capsys.readouterr().out
    assert code == 0
    assert "verma: " in out and "0 failed" in out


def test_cli_verify_writes_report(tmp_path, capsys):
    out_file = tmp_path / "report.json"
    code = cli.main(
        ["verify", "rmap", "--n", "1", "--trials", "3", "--json", str(out_file)]
    )
    assert code == 0
    payload = json.loads(out_file.read_text())
    assert payload["suite"] == "rmap"
    assert all(r["verdict"] in ("pass", "fail", "skip", "assumed") for r in payload["results"])


def test_cli_verify_unknown_model(capsys):
    code = cli.main(["verify", "axioms", "--model", "bogus"])
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_cli_rmap_apply(capsys):
    code = cli.main(["rmap", "apply", "--n", "1", "--l", "[1, 4]", "--m", "[2, 3]"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["l"] == ["9/8", "16/3"]
    assert payload["m"] == ["16/9", "9/4"]
    assert payload["levels"] == ["6", "4"]


def test_cli_rmap_apply_accepts_fraction_strings(capsys):
    code = cli.main(["rmap", "apply", "--n", "1", "--l", '["1/2", "8"]', "--m", "[2, 3]"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    from fractions import Fraction

    assert Fraction(payload["l"][0]) * Fraction(payload["l"][1]) == 6


def test_cli_rmap_apply_bad_point():
    with pytest.raises(SystemExit):
        cli.main(["rmap", "apply", "--n", "1", "--l", "[1]", "--m", "[2, 3]"])


def test_cli_ud_trop(capsys):
    code = cli.main(["ud", "trop", "--expr", "l1*l2 + m1"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["tropical"] == "max(l1 + l2, m1)"
    assert payload["tree"]["op"] == "max"


def test_cli_ud_trop_rejects_subtraction(capsys):
    code = cli.main(["ud", "trop", "--expr", "x - y"])
    assert code == 2
    assert "blocked" in capsys.readouterr().err


def test_cli_ud_rmap_integer_tuples(capsys):
    code = cli.main(["ud", "rmap", "--n", "1", "--l", "[5, -2]", "--m", "[0, 9]"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert sum(payload["l"]) == 9 and sum(payload["m"]) == 3  # sums swap


def test_cli_ud_rmap_rejects_non_integers():
    with pytest.raises(SystemExit):
        cli.main(["ud", "rmap", "--n", "1", "--l", "[1.5, 2]", "--m", "[0, 1]"])


def test_cli_model_show_json(capsys):
    code = cli.main(["model", "show", "borel", "--n", "2", "--json"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["name"] == "borel-sl3"
    assert "u12" in payload["variables"]


def test_cli_model_show_text(capsys):
    code = cli.main(["model", "show", "a-affine", "--n", "1", "--L", "4"])
    assert code == 0
    out = capsys.readouterr().out
    assert "l1*l2 = 4" in out


def test_cli_ledger(capsys):
    code = cli.main(["ledger"])
    assert code == 0
    assert "# Identity ledger" in capsys.readouterr().out
