"""Exact rational arithmetic and constrained random sampling.

Every numeric value in this package is an exact rational: ``ExactScalar``
is the standard-library ``fractions.Fraction``, which is always kept in
lowest terms with a positive denominator and never rounds.  All identity
testing downstream relies on this exactness; nothing in the package ever
touches a float.

Sampling of evaluation points is driven by a :class:`SampleSpec`: a list
of variables, an optional positivity flag, and "the product of these
variables must equal this value" constraints.  Constrained subsets are
sampled by choosing all but one variable freely and solving for the last
one, so the constraint holds exactly, not approximately.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

ExactScalar = Fraction

Assignment = dict[str, Fraction]


class ConstraintConflictError(ValueError):
    """Product constraints overlap in a way that admits no direct solution."""


class DomainTooThinError(RuntimeError):
    """Repeated sampling kept hitting poles; the usable domain looks empty."""


def rat(numerator: int, denominator: int = 1) -> Fraction:
    """Build an exact rational; shorthand used throughout the test-suite."""
    return Fraction(numerator, denominator)


def product(values) -> Fraction:
    out = Fraction(1)
    for v in values:
        out *= v
    return out


@dataclass(frozen=True)
class SampleSpec:
    """Recipe for sampling exact rational points.

    variables:   names to assign, in a fixed order (order matters for
                 reproducibility).
    positive:    when set, all samples are drawn from the positive rationals.
    constraints: tuples ``(subset, target)`` requiring the product of the
                 subset's values to equal ``target`` exactly.  Subsets must
                 be pairwise disjoint (identical duplicates are tolerated);
                 anything else raises :class:`ConstraintConflictError`.
    magnitude:   bound on sampled numerators and denominators.  Kept small
                 by default so products of many samples stay tractable.
    seed:        64-bit seed; the same spec and seed always reproduce the
                 same assignment.
    """

    variables: tuple[str, ...]
    positive: bool = False
    constraints: tuple[tuple[tuple[str, ...], Fraction], ...] = ()
    magnitude: int = 1000
    seed: int = 0

    def __post_init__(self):
        names = set(self.variables)
        if len(names) != len(self.variables):
            raise ValueError("duplicate variable names in SampleSpec")
        if self.magnitude < 1:
            raise ValueError("magnitude bound must be a positive integer")
        seen: set[str] = set()
        dedup: set[tuple[tuple[str, ...], Fraction]] = set()
        for subset, target in self.constraints:
            if not set(subset) <= names:
                raise ValueError(f"constraint subset {subset} is not a subset of the variables")
            if target == 0:
                raise ValueError("a product constraint with target 0 is unsatisfiable on nonzero values")
            if (subset, target) in dedup:
                continue
            dedup.add((subset, target))
            overlap = seen & set(subset)
            if overlap:
                raise ConstraintConflictError(
                    f"constraint subsets overlap on {sorted(overlap)}; cannot solve independently"
                )
            seen |= set(subset)

    def with_seed(self, seed: int) -> "SampleSpec":
        return SampleSpec(self.variables, self.positive, self.constraints, self.magnitude, seed)


def _random_rational(rng: random.Random, magnitude: int, positive: bool) -> Fraction:
    num = rng.randint(1, magnitude)
    den = rng.randint(1, magnitude)
    if not positive and rng.random() < 0.5:
        num = -num
    return Fraction(num, den)


def sample_point(spec: SampleSpec, rng: random.Random | None = None) -> Assignment:
    """Draw one assignment satisfying every constraint of ``spec`` exactly.

    Deterministic given ``spec.seed``.  For each constrained subset, all
    variables but the last are sampled freely and the last is solved for,
    so the required product is reproduced exactly.
    """
    if rng is None:
        rng = random.Random(spec.seed)
    out: Assignment = {}
    solved: dict[str, tuple[tuple[str, ...], Fraction]] = {}
    for subset, target in spec.constraints:
        solved[subset[-1]] = (subset, target)
    for name in spec.variables:
        if name not in solved:
            out[name] = _random_rational(rng, spec.magnitude, spec.positive)
    for last, (subset, target) in solved.items():
        rest = product(out[v] for v in subset[:-1])
        out[last] = target / rest
    return {name: out[name] for name in spec.variables}


def sample_points(spec: SampleSpec, count: int) -> list[Assignment]:
    """A deterministic stream of ``count`` independent samples from one seed."""
    rng = random.Random(spec.seed)
    return [sample_point(spec, rng) for _ in range(count)]
