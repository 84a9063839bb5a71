"""Geometric crystals over exact rationals.

A crystal model is a named variety (variable list plus exact product
constraints) carrying Cartan data and, for each index ``i``, three pieces
of expression data:

* ``gamma[i]`` and ``eps[i]``: rational functions of the coordinates;
* ``actions[i]``: one expression per coordinate, over the coordinates
  plus the distinguished scalar variable ``c``, giving the one-parameter
  action ``e_i^c``.

Everything is an immutable expression tree, so the same data feeds exact
pointwise checking here and the tropicalization pass elsewhere.  All the
axiom checkers in this module work by exact evaluation at random rational
points: they sample coordinates and group parameters, push points through
the action, and demand equality of ``Fraction`` values on the nose.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

from .arith import Assignment, DomainTooThinError, SampleSpec, product as fraction_product, sample_point
from .expr import (
    EvalDomainError,
    RatExpr,
    add,
    div,
    evaluate,
    mul,
    rename_variables,
    substitute,
    var,
)

SCALAR = "c"  # reserved action-parameter name; never a coordinate


class CartanError(ValueError):
    """Matrix fails the generalized-Cartan conditions, or labels mismatch."""


@dataclass(frozen=True)
class CartanData:
    """An index set with a generalized Cartan matrix over it."""

    labels: tuple[int, ...]
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.labels)
        if len(set(self.labels)) != n:
            raise CartanError("duplicate labels")
        if len(self.rows) != n or any(len(r) != n for r in self.rows):
            raise CartanError("matrix shape does not match the label count")
        for p in range(n):
            if self.rows[p][p] != 2:
                raise CartanError("diagonal entries must equal 2")
            for q in range(n):
                if p != q and self.rows[p][q] > 0:
                    raise CartanError("off-diagonal entries must be nonpositive")
                if (self.rows[p][q] == 0) != (self.rows[q][p] == 0):
                    raise CartanError("zero pattern must be symmetric")

    def a(self, i: int, j: int) -> int:
        return self.rows[self.labels.index(i)][self.labels.index(j)]


def cartan_finite_a(n: int) -> CartanData:
    """Type-A chain on labels 1..n."""
    labels = tuple(range(1, n + 1))
    rows = tuple(
        tuple(2 if p == q else (-1 if abs(p - q) == 1 else 0) for q in range(n))
        for p in range(n)
    )
    return CartanData(labels, rows)


def cartan_affine_a(n: int) -> CartanData:
    """Affine (cyclic) type-A data on labels 0..n; n = 1 is the doubled-bond case."""
    if n < 1:
        raise CartanError("affine type A needs n >= 1")
    labels = tuple(range(n + 1))
    if n == 1:
        return CartanData(labels, ((2, -2), (-2, 2)))
    rows = []
    for p in range(n + 1):
        row = []
        for q in range(n + 1):
            if p == q:
                row.append(2)
            elif (p - q) % (n + 1) in (1, n):
                row.append(-1)
            else:
                row.append(0)
        rows.append(tuple(row))
    return CartanData(labels, tuple(rows))


_D5_EDGES = ((0, 2), (1, 2), (2, 3), (3, 4), (3, 5))


def cartan_affine_d5() -> CartanData:
    """Affine D-type data on labels 0..5 (two forks glued to a short chain)."""
    labels = tuple(range(6))
    adjacency = {frozenset(e) for e in _D5_EDGES}
    rows = tuple(
        tuple(
            2 if p == q else (-1 if frozenset((p, q)) in adjacency else 0)
            for q in labels
        )
        for p in labels
    )
    return CartanData(labels, rows)


@dataclass(frozen=True)
class CrystalModel:
    """A variety with per-index actions and the functions gamma_i, eps_i."""

    name: str
    cartan: CartanData
    variables: tuple[str, ...]
    constraints: tuple[tuple[tuple[str, ...], Fraction], ...]
    positive: bool
    gamma: Mapping[int, RatExpr]
    eps: Mapping[int, RatExpr]
    actions: Mapping[int, tuple[RatExpr, ...]]

    def __post_init__(self):
        if SCALAR in self.variables:
            raise ValueError(f"{SCALAR!r} is reserved for the action parameter")
        for i in self.cartan.labels:
            if len(self.actions[i]) != len(self.variables):
                raise ValueError(f"action for index {i} must cover every variable")

    def domain_spec(self, seed: int, extra: tuple[str, ...] = ()) -> SampleSpec:
        """Sampling spec for the model's domain, optionally with scalar slots.

        Extra names (action parameters like ``c``) are sampled positive along
        with the coordinates: positive points are dense in the domain and keep
        the rational actions pole-free almost always.
        """
        return SampleSpec(
            variables=self.variables + tuple(extra),
            positive=self.positive,
            constraints=self.constraints,
            seed=seed,
        )

    def sample(self, seed: int) -> Assignment:
        return sample_point(self.domain_spec(seed))


def apply_e(model: CrystalModel, i: int, c: Fraction, x: Assignment) -> Assignment:
    """One-parameter action: evaluate the action family at ``c`` and ``x``."""
    if c == 0:
        raise ValueError("the action parameter must be nonzero")
    env = dict(x)
    env[SCALAR] = c
    return {v: evaluate(e, env) for v, e in zip(model.variables, model.actions[i])}


def apply_word(model: CrystalModel, word, x: Assignment) -> Assignment:
    """Apply a sequence of ``(index, parameter)`` actions, first entry first."""
    for i, c in word:
        x = apply_e(model, i, c, x)
    return x


# --- pointwise checking ---------------------------------------------------------


@dataclass(frozen=True)
class CheckOutcome:
    """Result of a sampled exact check; ``witness`` explains the first failure."""

    ok: bool
    trials: int
    witness: dict | None = None

    def __bool__(self):
        return self.ok


MAX_POLE_RETRIES = 100


def pointwise_check(
    fn: Callable[[Assignment], dict | None],
    spec: SampleSpec,
    trials: int,
) -> CheckOutcome:
    """Run ``fn`` at ``trials`` sampled points, resampling on poles.

    ``fn`` returns ``None`` on success and a witness dict on failure; it may
    raise :class:`EvalDomainError` to request a fresh point.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = random.Random(spec.seed)
    done = 0
    failures = 0
    while done < trials:
        point = sample_point(spec, rng)
        try:
            witness = fn(point)
        except EvalDomainError:
            failures += 1
            if failures > MAX_POLE_RETRIES:
                raise DomainTooThinError(
                    f"no pole-free point found after {MAX_POLE_RETRIES} resamples"
                ) from None
            continue
        failures = 0
        if witness is not None:
            return CheckOutcome(False, done + 1, witness)
        done += 1
    return CheckOutcome(True, trials)


def _split_scalars(point: Assignment, names: tuple[str, ...]) -> tuple[Assignment, list[Fraction]]:
    scalars = [point[s] for s in names]
    x = {k: v for k, v in point.items() if k not in names}
    return x, scalars


def check_action_identity(model: CrystalModel, i: int, trials: int = 100, seed: int = 0) -> CheckOutcome:
    """e_i^1 must fix every point."""

    def fn(point):
        y = apply_e(model, i, Fraction(1), point)
        if y != point:
            return {"i": i, "x": point, "e1(x)": y}
        return None

    return pointwise_check(fn, model.domain_spec(seed), trials)


def check_group_law(model: CrystalModel, i: int, trials: int = 100, seed: int = 0) -> CheckOutcome:
    """e_i^{c1} e_i^{c2} = e_i^{c1 c2}."""

    def fn(point):
        x, (c1, c2) = _split_scalars(point, ("s1", "s2"))
        lhs = apply_e(model, i, c1, apply_e(model, i, c2, x))
        rhs = apply_e(model, i, c1 * c2, x)
        if lhs != rhs:
            return {"i": i, "c1": c1, "c2": c2, "x": x, "lhs": lhs, "rhs": rhs}
        return None

    return pointwise_check(fn, model.domain_spec(seed, extra=("s1", "s2")), trials)


def check_domain_preserved(model: CrystalModel, i: int, trials: int = 100, seed: int = 0) -> CheckOutcome:
    """Every product constraint of the domain survives e_i^c exactly."""

    def fn(point):
        x, (c,) = _split_scalars(point, ("s1",))
        y = apply_e(model, i, c, x)
        for subset, target in model.constraints:
            got = fraction_product(y[v] for v in subset)
            if got != target:
                return {"i": i, "c": c, "constraint": subset, "expected": target, "got": got}
        if any(v == 0 for v in y.values()):
            return {"i": i, "c": c, "x": x, "zero coordinate in": y}
        return None

    return pointwise_check(fn, model.domain_spec(seed, extra=("s1",)), trials)


def check_gamma_scaling(model: CrystalModel, i: int, j: int, trials: int = 100, seed: int = 0) -> CheckOutcome:
    """gamma_j(e_i^c x) = c^{a_ij} gamma_j(x)."""
    a_ij = model.cartan.a(i, j)

    def fn(point):
        x, (c,) = _split_scalars(point, ("s1",))
        lhs = evaluate(model.gamma[j], apply_e(model, i, c, x))
        rhs = c**a_ij * evaluate(model.gamma[j], x)
        if lhs != rhs:
            return {"i": i, "j": j, "c": c, "x": x, "lhs": lhs, "rhs": rhs}
        return None

    return pointwise_check(fn, model.domain_spec(seed, extra=("s1",)), trials)


def check_eps_scaling(model: CrystalModel, i: int, j: int, trials: int = 100, seed: int = 0) -> CheckOutcome:
    """eps_i(e_i^c x) = c^{-1} eps_i(x); eps_i(e_j^c x) = eps_i(x) when a_ij = a_ji = 0.

    For pairs that are neither equal nor mutually orthogonal there is no
    clause to check, and the outcome is vacuously true with zero trials.
    """
    if i != j and not (model.cartan.a(i, j) == 0 and model.cartan.a(j, i) == 0):
        return CheckOutcome(True, 0)

    def fn(point):
        x, (c,) = _split_scalars(point, ("s1",))
        lhs = evaluate(model.eps[i], apply_e(model, j, c, x))
        rhs = evaluate(model.eps[i], x) / c if i == j else evaluate(model.eps[i], x)
        if lhs != rhs:
            return {"i": i, "j": j, "c": c, "x": x, "lhs": lhs, "rhs": rhs}
        return None

    return pointwise_check(fn, model.domain_spec(seed, extra=("s1",)), trials)


# --- composition relations -------------------------------------------------------

# Composition words for the supported Cartan patterns, written in
# application order (first pair acts first).  Each entry is
# (index place, (exponent of c1, exponent of c2)).
_LEFT_WORDS = {
    (0, 0): (("j", (0, 1)), ("i", (1, 0))),
    (-1, -1): (("i", (0, 1)), ("j", (1, 1)), ("i", (1, 0))),
    (-2, -1): (("j", (0, 1)), ("i", (1, 1)), ("j", (2, 1)), ("i", (1, 0))),
    (-3, -1): (
        ("j", (0, 1)),
        ("i", (1, 1)),
        ("j", (3, 2)),
        ("i", (2, 1)),
        ("j", (3, 1)),
        ("i", (1, 0)),
    ),
}
_RIGHT_WORDS = {
    (0, 0): (("i", (1, 0)), ("j", (0, 1))),
    (-1, -1): (("j", (1, 0)), ("i", (1, 1)), ("j", (0, 1))),
    (-2, -1): (("i", (1, 0)), ("j", (2, 1)), ("i", (1, 1)), ("j", (0, 1))),
    (-3, -1): (
        ("i", (1, 0)),
        ("j", (3, 1)),
        ("i", (2, 1)),
        ("j", (3, 2)),
        ("i", (1, 1)),
        ("j", (0, 1)),
    ),
}

SUPPORTED_PATTERNS = tuple(sorted(_LEFT_WORDS))


class UnsupportedCartanPattern(ValueError):
    """(a_ij, a_ji) matches none of the four supported composition patterns."""


def composition_words(i: int, j: int, a_ij: int, a_ji: int):
    """Both sides of the composition relation for the pattern (a_ij, a_ji).

    Returns two tuples of ``(index, (p, q))`` meaning "act with e_index at
    parameter c1^p c2^q", in application order.
    """
    pattern = (a_ij, a_ji)
    if pattern not in _LEFT_WORDS:
        raise UnsupportedCartanPattern(f"no composition relation for (a_ij, a_ji) = {pattern}")
    place = {"i": i, "j": j}
    left = tuple((place[p], e) for p, e in _LEFT_WORDS[pattern])
    right = tuple((place[p], e) for p, e in _RIGHT_WORDS[pattern])
    return left, right


def check_composition_relation(
    model: CrystalModel, i: int, j: int, trials: int = 100, seed: int = 0
) -> CheckOutcome:
    """The braid-like relation between e_i and e_j dictated by the Cartan entries."""
    left, right = composition_words(i, j, model.cartan.a(i, j), model.cartan.a(j, i))

    def fn(point):
        x, (c1, c2) = _split_scalars(point, ("s1", "s2"))
        lhs = apply_word(model, [(k, c1**p * c2**q) for k, (p, q) in left], x)
        rhs = apply_word(model, [(k, c1**p * c2**q) for k, (p, q) in right], x)
        if lhs != rhs:
            return {"i": i, "j": j, "c1": c1, "c2": c2, "x": x, "lhs": lhs, "rhs": rhs}
        return None

    return pointwise_check(fn, model.domain_spec(seed, extra=("s1", "s2")), trials)


def applicable_pairs(cartan: CartanData):
    """Ordered pairs (i, j), i != j, whose Cartan pattern has a composition relation."""
    out = []
    for i in cartan.labels:
        for j in cartan.labels:
            if i != j and (cartan.a(i, j), cartan.a(j, i)) in _LEFT_WORDS:
                out.append((i, j))
    return out


# --- product of crystals ----------------------------------------------------------

LEFT_SUFFIX = ".x"
RIGHT_SUFFIX = ".y"


def _rename_map(variables: tuple[str, ...], suffix: str) -> dict[str, str]:
    return {v: v + suffix for v in variables}


def pack_pair(x: Assignment, y: Assignment) -> Assignment:
    out = {k + LEFT_SUFFIX: v for k, v in x.items()}
    out.update({k + RIGHT_SUFFIX: v for k, v in y.items()})
    return out


def split_pair(point: Assignment, left_vars: tuple[str, ...], right_vars: tuple[str, ...]):
    x = {v: point[v + LEFT_SUFFIX] for v in left_vars}
    y = {v: point[v + RIGHT_SUFFIX] for v in right_vars}
    return x, y


def product(x_model: CrystalModel, y_model: CrystalModel) -> CrystalModel:
    """Product crystal on the disjoint union of coordinates.

    Left coordinates get suffix ``.x``, right ones ``.y``.  The action
    splits the parameter ``c`` into c1 (left factor) and c2 = c/c1 (right
    factor) through the eps/gamma data of the left factor.
    """
    if x_model.cartan != y_model.cartan:
        raise CartanError("factors must share the same Cartan data")
    left = _rename_map(x_model.variables, LEFT_SUFFIX)
    right = _rename_map(y_model.variables, RIGHT_SUFFIX)
    variables = tuple(left[v] for v in x_model.variables) + tuple(
        right[v] for v in y_model.variables
    )
    constraints = tuple(
        (tuple(left[v] for v in subset), target) for subset, target in x_model.constraints
    ) + tuple((tuple(right[v] for v in subset), target) for subset, target in y_model.constraints)

    gamma = {}
    eps = {}
    actions = {}
    for i in x_model.cartan.labels:
        gx = rename_variables(x_model.gamma[i], left)
        gy = rename_variables(y_model.gamma[i], right)
        ex = rename_variables(x_model.eps[i], left)
        ey = rename_variables(y_model.eps[i], right)
        gamma[i] = mul(gx, gy)
        eps[i] = add(ex, div(ey, gx))
        c1, c2 = product_split_exprs(x_model, y_model, i)
        row = [
            substitute(rename_variables(e, left), {SCALAR: c1})
            for e in x_model.actions[i]
        ] + [
            substitute(rename_variables(e, right), {SCALAR: c2})
            for e in y_model.actions[i]
        ]
        actions[i] = tuple(row)

    return CrystalModel(
        name=f"({x_model.name} x {y_model.name})",
        cartan=x_model.cartan,
        variables=variables,
        constraints=constraints,
        positive=x_model.positive and y_model.positive,
        gamma=gamma,
        eps=eps,
        actions=actions,
    )


def product_split_exprs(x_model: CrystalModel, y_model: CrystalModel, i: int):
    """The (c1, c2) expressions used by :func:`product` for index ``i``."""
    left = _rename_map(x_model.variables, LEFT_SUFFIX)
    right = _rename_map(y_model.variables, RIGHT_SUFFIX)
    ex = rename_variables(x_model.eps[i], left)
    gx = rename_variables(x_model.gamma[i], left)
    ey = rename_variables(y_model.eps[i], right)
    phi = mul(ex, gx)
    c = var(SCALAR)
    c1 = div(add(mul(c, phi), ey), add(phi, ey))
    return c1, div(c, c1)


# --- JSON manifest ----------------------------------------------------------------


def model_manifest(model: CrystalModel) -> dict:
    """JSON-ready description: variables, constraints, Cartan matrix, expression trees."""
    from .expr import to_json_obj

    return {
        "name": model.name,
        "cartan": {"labels": list(model.cartan.labels), "matrix": [list(r) for r in model.cartan.rows]},
        "variables": list(model.variables),
        "domain": {
            "positive": model.positive,
            "products": [
                {"variables": list(subset), "value": str(target)}
                for subset, target in model.constraints
            ],
        },
        "gamma": {str(i): to_json_obj(model.gamma[i]) for i in model.cartan.labels},
        "eps": {str(i): to_json_obj(model.eps[i]) for i in model.cartan.labels},
        "actions": {
            str(i): [to_json_obj(e) for e in model.actions[i]] for i in model.cartan.labels
        },
    }
