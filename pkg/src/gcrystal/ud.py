"""Ultra-discretization: subtraction-free expressions become max-plus programs.

The compilation rules are the (max, +) convention: products map to sums,
quotients to differences, sums to maxima, positive constants to 0, and an
integer power to a repeated sum or difference.  Named parameters stay
variables.  (The (min, +) mirror is this composed with negation; see
:func:`negate_convention`.)  Only subtraction-free expressions compile;
anything containing a difference or a negative constant is refused with
the path of the offending node.

Compiled programs are total piecewise-linear maps on integer points and
all identity checking down here is exact integer sampling over a box.
The crystal-flavored derivations (one-parameter operators, the parameter
split on products, the combinatorial R) are obtained by compiling the
corresponding rational expressions from the model layer rather than by
re-coding their shapes, so the two layers cannot drift apart.
"""

from __future__ import annotations

import functools
import random
import warnings
from dataclasses import dataclass
from fractions import Fraction

from .crystal import LEFT_SUFFIX, RIGHT_SUFFIX, SCALAR, product_split_exprs
from .expr import (
    Add,
    Const,
    Div,
    Mul,
    Pow,
    RatExpr,
    Var,
    certify_subtraction_free,
)
from .models import affine_a_model
from .rmap import build_r_map

TropPoint = dict[str, int]


class TropicalizationError(ValueError):
    """The expression is not subtraction-free; carries the blocking path."""

    def __init__(self, path: tuple[int, ...]):
        super().__init__(f"expression blocked for tropicalization at node path {path}")
        self.path = path


class NonUnitConstantWarning(UserWarning):
    """A positive constant other than 1 was flattened to tropical 0."""


@dataclass(frozen=True)
class TropExpr:
    def __str__(self):
        return trop_pretty(self)


@dataclass(frozen=True)
class TVar(TropExpr):
    name: str


@dataclass(frozen=True)
class TConst(TropExpr):
    value: int


@dataclass(frozen=True)
class TMax(TropExpr):
    left: TropExpr
    right: TropExpr


@dataclass(frozen=True)
class TAdd(TropExpr):
    left: TropExpr
    right: TropExpr


@dataclass(frozen=True)
class TSub(TropExpr):
    left: TropExpr
    right: TropExpr


def trop_eval(t: TropExpr, point: TropPoint) -> int:
    if isinstance(t, TVar):
        return point[t.name]
    if isinstance(t, TConst):
        return t.value
    if isinstance(t, TMax):
        return max(trop_eval(t.left, point), trop_eval(t.right, point))
    if isinstance(t, TAdd):
        return trop_eval(t.left, point) + trop_eval(t.right, point)
    if isinstance(t, TSub):
        return trop_eval(t.left, point) - trop_eval(t.right, point)
    raise TypeError(f"unknown tropical node {t!r}")


def trop_free_variables(t: TropExpr) -> set[str]:
    if isinstance(t, TVar):
        return {t.name}
    if isinstance(t, TConst):
        return set()
    return trop_free_variables(t.left) | trop_free_variables(t.right)


def trop_pretty(t: TropExpr) -> str:
    if isinstance(t, TVar):
        return t.name
    if isinstance(t, TConst):
        return str(t.value)
    if isinstance(t, TMax):
        return f"max({trop_pretty(t.left)}, {trop_pretty(t.right)})"
    op = " + " if isinstance(t, TAdd) else " - "
    left = trop_pretty(t.left)
    right = trop_pretty(t.right)
    if isinstance(t.left, (TAdd, TSub)):
        left = f"({left})"
    if isinstance(t.right, (TAdd, TSub, TMax)) and not isinstance(t.right, TMax):
        right = f"({right})"
    return f"{left}{op}{right}"


def trop_to_json_obj(t: TropExpr):
    if isinstance(t, TVar):
        return {"op": "var", "name": t.name}
    if isinstance(t, TConst):
        return {"op": "int", "value": t.value}
    kind = {TMax: "max", TAdd: "add", TSub: "sub"}[type(t)]
    return {"op": kind, "args": [trop_to_json_obj(t.left), trop_to_json_obj(t.right)]}


def negate_convention(t: TropExpr) -> TropExpr:
    """Mirror into the (min, +) reading: min(a, b) = -max(-a, -b).

    Applying this to a compiled program and negating inputs/outputs gives
    the opposite convention; exposed as a flag rather than a second
    compiler.
    """
    if isinstance(t, TVar) or isinstance(t, TConst):
        return t
    if isinstance(t, TMax):
        return TMax(negate_convention(t.left), negate_convention(t.right))
    return type(t)(negate_convention(t.left), negate_convention(t.right))


def trop_substitute(t: TropExpr, mapping: dict[str, TropExpr]) -> TropExpr:
    """Plug programs in for variables; lets compiled maps compose symbolically."""
    if isinstance(t, TVar):
        return mapping.get(t.name, t)
    if isinstance(t, TConst):
        return t
    return type(t)(trop_substitute(t.left, mapping), trop_substitute(t.right, mapping))


# --- the compiler -----------------------------------------------------------------


def tropicalize(e: RatExpr) -> TropExpr:
    """Compile a subtraction-free rational expression to a max-plus program."""
    cert = certify_subtraction_free(e)
    if not cert:
        raise TropicalizationError(cert.blocked_path)

    def compile_(node: RatExpr) -> TropExpr:
        if isinstance(node, Var):
            return TVar(node.name)
        if isinstance(node, Const):
            if node.value != 1:
                warnings.warn(
                    f"constant {node.value} becomes tropical 0",
                    NonUnitConstantWarning,
                    stacklevel=3,
                )
            return TConst(0)
        if isinstance(node, Add):
            return TMax(compile_(node.left), compile_(node.right))
        if isinstance(node, Mul):
            return TAdd(compile_(node.left), compile_(node.right))
        if isinstance(node, Div):
            return TSub(compile_(node.left), compile_(node.right))
        if isinstance(node, Pow):
            if node.exponent == 0:
                return TConst(0)
            base = compile_(node.base)
            acc = base
            for _ in range(abs(node.exponent) - 1):
                acc = TAdd(acc, base)
            return acc if node.exponent > 0 else TSub(TConst(0), acc)
        raise TypeError(f"unknown node {node!r}")

    return compile_(e)


@dataclass(frozen=True)
class TropVerdict:
    equal: bool
    samples: int
    counterexample: tuple[TropPoint, int, int] | None = None

    def __bool__(self):
        return self.equal


def sample_box(variables: tuple[str, ...], lo: int, hi: int, samples: int, seed: int = 0):
    rng = random.Random(seed)
    for _ in range(samples):
        yield {v: rng.randint(lo, hi) for v in variables}


def check_tropical_identity(
    t1: TropExpr,
    t2: TropExpr,
    lo: int = -50,
    hi: int = 50,
    samples: int = 1000,
    seed: int = 0,
) -> TropVerdict:
    """Exact integer agreement of two programs on a sampled box."""
    variables = tuple(sorted(trop_free_variables(t1) | trop_free_variables(t2)))
    for point in sample_box(variables, lo, hi, samples, seed):
        a, b = trop_eval(t1, point), trop_eval(t2, point)
        if a != b:
            return TropVerdict(False, samples, (point, a, b))
    return TropVerdict(True, samples)


# --- crystal shadows ---------------------------------------------------------------

UD_SCALAR = SCALAR  # the tropicalized action parameter keeps its name


@dataclass(frozen=True)
class TropMap:
    """A piecewise-linear coordinate map: one program per output coordinate."""

    exprs: dict[str, TropExpr]

    def apply(self, point: TropPoint, **params: int) -> TropPoint:
        env = dict(point)
        env.update(params)
        return {name: trop_eval(t, env) for name, t in self.exprs.items()}


def _silent_tropicalize(e: RatExpr) -> TropExpr:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonUnitConstantWarning)
        return tropicalize(e)


@functools.lru_cache(maxsize=None)
def ud_crystal_operator(n: int, i: int) -> TropMap:
    """Tropical shadow of the torus-model action: add the parameter at slot i,
    subtract it at slot i+1 (cyclically); the coordinate sum is preserved."""
    model = affine_a_model(n, Fraction(1))
    exprs = {
        v: _silent_tropicalize(e) for v, e in zip(model.variables, model.actions[i])
    }
    return TropMap(exprs)


@functools.lru_cache(maxsize=None)
def ud_gamma(n: int, i: int) -> TropExpr:
    return _silent_tropicalize(affine_a_model(n, Fraction(1)).gamma[i])


@functools.lru_cache(maxsize=None)
def ud_eps(n: int, i: int) -> TropExpr:
    return _silent_tropicalize(affine_a_model(n, Fraction(1)).eps[i])


@functools.lru_cache(maxsize=None)
def ud_tensor_coeffs(n: int, i: int) -> tuple[TropExpr, TropExpr]:
    """Tropical split of the action parameter on a product.

    Compiles to C1 = max(C + Phi_i(x), E_i(y)) - max(Phi_i(x), E_i(y)) and
    C2 = C - C1, so C1 + C2 = C identically; at C = 1 whichever of
    Phi_i(x), E_i(y) is strictly larger receives the whole increment, ties
    going to the left factor.
    """
    model = affine_a_model(n, Fraction(1))
    c1, c2 = product_split_exprs(model, model, i)
    return _silent_tropicalize(c1), _silent_tropicalize(c2)


def ud_product_operator(n: int, i: int) -> "TropPairMap":
    return TropPairMap(n, ud_tensor_coeffs(n, i), ud_crystal_operator(n, i))


@dataclass(frozen=True)
class TropPairMap:
    """Tropical action on a pair of torus points via the parameter split."""

    n: int
    coeffs: tuple[TropExpr, TropExpr]
    factor_op: TropMap

    def split(self, x: TropPoint, y: TropPoint, c: int) -> tuple[int, int]:
        env = {f"{k}{LEFT_SUFFIX}": v for k, v in x.items()}
        env.update({f"{k}{RIGHT_SUFFIX}": v for k, v in y.items()})
        env[UD_SCALAR] = c
        c1 = trop_eval(self.coeffs[0], env)
        c2 = trop_eval(self.coeffs[1], env)
        return c1, c2

    def apply(self, x: TropPoint, y: TropPoint, c: int) -> tuple[TropPoint, TropPoint]:
        c1, c2 = self.split(x, y, c)
        return self.factor_op.apply(x, **{UD_SCALAR: c1}), self.factor_op.apply(
            y, **{UD_SCALAR: c2}
        )


@functools.lru_cache(maxsize=None)
def combinatorial_r(n: int) -> tuple[TropMap, TropMap]:
    """Tropical shadow of the birational R map, as (left outputs, right outputs).

    Components are l'_i = m_i + UDP_i - UDP_{i-1} and m'_i = l_i + UDP_{i-1}
    - UDP_i where UDP_i is the max over the window sums of the rational P_i.
    """
    inst = build_r_map(n, Fraction(1), Fraction(1))
    l_out = {
        f"l{k}": _silent_tropicalize(inst.l_out[k - 1]) for k in range(1, n + 2)
    }
    m_out = {
        f"l{k}": _silent_tropicalize(inst.m_out[k - 1]) for k in range(1, n + 2)
    }
    return TropMap(l_out), TropMap(m_out)


def apply_combinatorial_r(n: int, l: TropPoint, m: TropPoint) -> tuple[TropPoint, TropPoint]:
    left, right = combinatorial_r(n)
    env = {f"l{k}": l[f"l{k}"] for k in range(1, n + 2)}
    env.update({f"m{k}": m[f"l{k}"] for k in range(1, n + 2)})
    l_new = {name: trop_eval(t, env) for name, t in left.exprs.items()}
    m_new = {name: trop_eval(t, env) for name, t in right.exprs.items()}
    return l_new, m_new
