"""Rational-expression IR: a small tree language over exact rationals.

Node kinds are ``Var``, ``Const`` (nonzero rational), the binary operators
``Add``/``Sub``/``Mul``/``Div``, and ``Pow`` with an integer exponent.
Trees are immutable and compare structurally.  Expressions are built
through the smart constructors :func:`add`, :func:`sub`, :func:`mul`,
:func:`div`, :func:`pow_`, :func:`var`, :func:`const`, which fold
constant-on-constant operations (and nothing else).  The text DSL and the
random generators in the test-suite go through the same constructors, so
parse/print round-trips are structural identities.

DSL grammar (whitespace-insensitive)::

    expr   := term (('+' | '-') term)*          # left associative
    term   := factor (('*' | '/') factor)*      # left associative
    factor := '-' factor | power
    power  := atom ('^' exponent)*
    atom   := integer | identifier | '(' expr ')'
    exponent := ['-'] integer | '(' ['-'] integer ')'

Identifiers start with a letter or underscore and may contain letters,
digits, underscores and dots (dots appear in product-crystal coordinate
names such as ``l1.x``).  Integer division of two literals folds into a
rational constant, so ``5/7`` is the literal five-sevenths.

Identity testing is exact evaluation at random rational points: two
expressions are declared equal on a domain when they agree exactly at
every sampled point, and a single exact mismatch is a counterexample.
There is no simplifier; exactness does all the work.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction

from .arith import Assignment, DomainTooThinError, SampleSpec, sample_point


class ExprError(ValueError):
    """Malformed expression (bad constant, bad exponent, ...)."""


class ParseError(ExprError):
    """Syntax error in the text DSL, with line/column information."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class EvalDomainError(ArithmeticError):
    """Evaluation hit a pole (division by zero).

    Identity tests treat this as a "resample" signal: the expressions are
    rational maps, defined only off a measure-zero locus.
    """


class UnboundVariableError(KeyError):
    """A free variable of the expression is missing from the assignment."""


# --- node types --------------------------------------------------------------


@dataclass(frozen=True)
class RatExpr:
    """Base class; every node is one of the subclasses below."""

    def __add__(self, other):
        return add(self, _coerce(other))

    def __radd__(self, other):
        return add(_coerce(other), self)

    def __sub__(self, other):
        return sub(self, _coerce(other))

    def __rsub__(self, other):
        return sub(_coerce(other), self)

    def __mul__(self, other):
        return mul(self, _coerce(other))

    def __rmul__(self, other):
        return mul(_coerce(other), self)

    def __truediv__(self, other):
        return div(self, _coerce(other))

    def __rtruediv__(self, other):
        return div(_coerce(other), self)

    def __pow__(self, exponent: int):
        return pow_(self, exponent)

    def __str__(self):
        return pretty(self)


@dataclass(frozen=True)
class Var(RatExpr):
    name: str


@dataclass(frozen=True)
class Const(RatExpr):
    value: Fraction

    def __post_init__(self):
        if self.value == 0:
            raise ExprError("zero constants are not representable; build the expression differently")


@dataclass(frozen=True)
class Add(RatExpr):
    left: RatExpr
    right: RatExpr


@dataclass(frozen=True)
class Sub(RatExpr):
    left: RatExpr
    right: RatExpr


@dataclass(frozen=True)
class Mul(RatExpr):
    left: RatExpr
    right: RatExpr


@dataclass(frozen=True)
class Div(RatExpr):
    left: RatExpr
    right: RatExpr


@dataclass(frozen=True)
class Pow(RatExpr):
    base: RatExpr
    exponent: int

    def __post_init__(self):
        if not isinstance(self.exponent, int):
            raise ExprError("exponents must be integers")


# --- smart constructors -------------------------------------------------------


def _coerce(x) -> RatExpr:
    if isinstance(x, RatExpr):
        return x
    if isinstance(x, (int, Fraction)):
        return const(x)
    raise TypeError(f"cannot use {x!r} in an expression")


def var(name: str) -> Var:
    return Var(name)


def const(value) -> Const:
    return Const(Fraction(value))


def add(a: RatExpr, b: RatExpr) -> RatExpr:
    if isinstance(a, Const) and isinstance(b, Const) and a.value + b.value != 0:
        return Const(a.value + b.value)
    return Add(a, b)


def sub(a: RatExpr, b: RatExpr) -> RatExpr:
    if isinstance(a, Const) and isinstance(b, Const) and a.value - b.value != 0:
        return Const(a.value - b.value)
    return Sub(a, b)


def mul(a: RatExpr, b: RatExpr) -> RatExpr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    return Mul(a, b)


def div(a: RatExpr, b: RatExpr) -> RatExpr:
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value / b.value)
    return Div(a, b)


def pow_(base: RatExpr, exponent: int) -> RatExpr:
    if not isinstance(exponent, int):
        raise ExprError("exponents must be integers")
    if isinstance(base, Const):
        return Const(base.value**exponent)
    return Pow(base, exponent)


def summation(terms: list[RatExpr]) -> RatExpr:
    """Left-associated sum of one or more terms."""
    if not terms:
        raise ExprError("empty sum has no nonzero representation")
    out = terms[0]
    for t in terms[1:]:
        out = add(out, t)
    return out


def prod(factors: list[RatExpr]) -> RatExpr:
    """Left-associated product; the empty product is the constant 1."""
    if not factors:
        return const(1)
    out = factors[0]
    for f in factors[1:]:
        out = mul(out, f)
    return out


# --- traversal helpers --------------------------------------------------------


def children(e: RatExpr) -> tuple[RatExpr, ...]:
    if isinstance(e, (Add, Sub, Mul, Div)):
        return (e.left, e.right)
    if isinstance(e, Pow):
        return (e.base,)
    return ()


def free_variables(e: RatExpr) -> set[str]:
    if isinstance(e, Var):
        return {e.name}
    out: set[str] = set()
    for c in children(e):
        out |= free_variables(c)
    return out


def substitute(e: RatExpr, mapping: dict[str, RatExpr]) -> RatExpr:
    """Replace variables by expressions, rebuilding through the constructors."""
    if isinstance(e, Var):
        return mapping.get(e.name, e)
    if isinstance(e, Const):
        return e
    if isinstance(e, Add):
        return add(substitute(e.left, mapping), substitute(e.right, mapping))
    if isinstance(e, Sub):
        return sub(substitute(e.left, mapping), substitute(e.right, mapping))
    if isinstance(e, Mul):
        return mul(substitute(e.left, mapping), substitute(e.right, mapping))
    if isinstance(e, Div):
        return div(substitute(e.left, mapping), substitute(e.right, mapping))
    if isinstance(e, Pow):
        return pow_(substitute(e.base, mapping), e.exponent)
    raise TypeError(f"unknown node {e!r}")


def rename_variables(e: RatExpr, mapping: dict[str, str]) -> RatExpr:
    return substitute(e, {old: Var(new) for old, new in mapping.items()})


# --- evaluation ---------------------------------------------------------------


def evaluate(e: RatExpr, point: Assignment) -> Fraction:
    """Exact value of ``e`` at ``point``; raises on poles and unbound names."""
    if isinstance(e, Var):
        try:
            return point[e.name]
        except KeyError:
            raise UnboundVariableError(e.name) from None
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Add):
        return evaluate(e.left, point) + evaluate(e.right, point)
    if isinstance(e, Sub):
        return evaluate(e.left, point) - evaluate(e.right, point)
    if isinstance(e, Mul):
        return evaluate(e.left, point) * evaluate(e.right, point)
    if isinstance(e, Div):
        denom = evaluate(e.right, point)
        if denom == 0:
            raise EvalDomainError("division by zero")
        return evaluate(e.left, point) / denom
    if isinstance(e, Pow):
        base = evaluate(e.base, point)
        if base == 0 and e.exponent < 0:
            raise EvalDomainError("zero raised to a negative power")
        return base**e.exponent
    raise TypeError(f"unknown node {e!r}")


# --- identity testing ---------------------------------------------------------


@dataclass(frozen=True)
class Counterexample:
    point: Assignment
    lhs: Fraction
    rhs: Fraction


@dataclass(frozen=True)
class Verdict:
    """Outcome of an exact identity test.

    ``equal`` means every sampled point agreed exactly.  A single exact
    mismatch produces ``equal=False`` with the witnessing point, so false
    negatives are impossible; a false "equal" would require every sampled
    point to land on a proper subvariety.
    """

    equal: bool
    trials: int
    counterexample: Counterexample | None = None

    def __bool__(self):
        return self.equal


MAX_POLE_RETRIES = 100


def sampled_values(exprs, spec: SampleSpec, trials: int):
    """Yield ``trials`` tuples ``(point, values)`` avoiding poles.

    Points where any expression is undefined are discarded and resampled,
    up to :data:`MAX_POLE_RETRIES` consecutive failures, after which the
    domain is declared too thin.
    """
    rng = random.Random(spec.seed)
    produced = 0
    failures = 0
    while produced < trials:
        point = sample_point(spec, rng)
        try:
            values = [evaluate(e, point) for e in exprs]
        except EvalDomainError:
            failures += 1
            if failures > MAX_POLE_RETRIES:
                raise DomainTooThinError(
                    f"no pole-free point found after {MAX_POLE_RETRIES} resamples"
                ) from None
            continue
        failures = 0
        produced += 1
        yield point, values


def identical_on_domain(e1: RatExpr, e2: RatExpr, spec: SampleSpec, trials: int = 100) -> Verdict:
    """Exact-evaluation equality test for two rational expressions."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    for point, (lhs, rhs) in sampled_values([e1, e2], spec, trials):
        if lhs != rhs:
            return Verdict(False, trials, Counterexample(point, lhs, rhs))
    return Verdict(True, trials)


def vanishes_on_domain(e: RatExpr, spec: SampleSpec, trials: int = 100) -> Verdict:
    """Check that ``e`` evaluates to exactly zero at every sampled point."""
    for point, (value,) in sampled_values([e], spec, trials):
        if value != 0:
            return Verdict(False, trials, Counterexample(point, value, Fraction(0)))
    return Verdict(True, trials)


# --- subtraction-freeness ------------------------------------------------------


@dataclass(frozen=True)
class PositivityVerdict:
    free: bool
    blocked_path: tuple[int, ...] | None = None

    def __bool__(self):
        return self.free


def certify_subtraction_free(e: RatExpr) -> PositivityVerdict:
    """Certify that ``e`` contains no ``Sub`` node and no negative constant.

    Subtraction-freeness is the precondition for tropicalization; the
    verdict carries the path (child indices from the root) of the first
    offending node.
    """

    def walk(node: RatExpr, path: tuple[int, ...]) -> tuple[int, ...] | None:
        if isinstance(node, Sub):
            return path
        if isinstance(node, Const) and node.value < 0:
            return path
        for k, child in enumerate(children(node)):
            hit = walk(child, path + (k,))
            if hit is not None:
                return hit
        return None

    blocked = walk(e, ())
    if blocked is None:
        return PositivityVerdict(True)
    return PositivityVerdict(False, blocked)


# --- parser --------------------------------------------------------------------


def _is_ident_start(ch: str) -> bool:
    return ch.isalpha() or ch == "_"


def _is_ident_char(ch: str) -> bool:
    return ch.isalnum() or ch in "_."


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str):
        line = self.text.count("\n", 0, self.pos) + 1
        column = self.pos - (self.text.rfind("\n", 0, self.pos) + 1) + 1
        raise ParseError(message, line, column)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def eat(self, ch: str) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def expect(self, ch: str):
        if not self.eat(ch):
            self.error(f"expected {ch!r}")

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected an integer")
        return int(self.text[start : self.pos])

    def identifier(self) -> str:
        self.skip_ws()
        start = self.pos
        self.pos += 1
        while self.pos < len(self.text) and _is_ident_char(self.text[self.pos]):
            self.pos += 1
        return self.text[start : self.pos]

    def exponent(self) -> int:
        if self.eat("("):
            sign = -1 if self.eat("-") else 1
            value = self.integer()
            self.expect(")")
            return sign * value
        sign = -1 if self.eat("-") else 1
        return sign * self.integer()

    def atom(self) -> RatExpr:
        ch = self.peek()
        if ch == "(":
            self.eat("(")
            e = self.expr()
            self.expect(")")
            return e
        if ch.isdigit():
            value = self.integer()
            if value == 0:
                self.error("zero constant literal")
            return const(value)
        if _is_ident_start(ch):
            return var(self.identifier())
        self.error("expected a number, identifier or parenthesized expression")

    def power(self) -> RatExpr:
        e = self.atom()
        while self.eat("^"):
            e = pow_(e, self.exponent())
        return e

    def factor(self) -> RatExpr:
        if self.eat("-"):
            inner = self.factor()
            if isinstance(inner, Const):
                if inner.value == 0:
                    self.error("zero constant literal")
                return Const(-inner.value)
            return mul(const(-1), inner)
        return self.power()

    def term(self) -> RatExpr:
        e = self.factor()
        while True:
            if self.eat("*"):
                e = mul(e, self.factor())
            elif self.eat("/"):
                e = div(e, self.factor())
            else:
                return e

    def expr(self) -> RatExpr:
        e = self.term()
        while True:
            if self.eat("+"):
                e = add(e, self.term())
            elif self.eat("-"):
                e = sub(e, self.term())
            else:
                return e

    def parse(self) -> RatExpr:
        e = self.expr()
        self.skip_ws()
        if self.pos != len(self.text):
            self.error("unexpected trailing input")
        return e


def parse(text: str) -> RatExpr:
    """Parse the text DSL into an expression tree."""
    return _Parser(text).parse()


# --- pretty printer -------------------------------------------------------------

_PREC_ADD, _PREC_MUL, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4


def _prec(e: RatExpr) -> int:
    if isinstance(e, (Add, Sub)):
        return _PREC_ADD
    if isinstance(e, (Mul, Div)):
        return _PREC_MUL
    if isinstance(e, Pow):
        return _PREC_POW
    if isinstance(e, Const) and (e.value < 0 or e.value.denominator != 1):
        # prints as -p or p/q, which only reparses as one token inside parens
        return _PREC_MUL
    return _PREC_ATOM


def _wrap(child: RatExpr, limit: int) -> str:
    text = pretty(child)
    return f"({text})" if _prec(child) < limit else text


def pretty(e: RatExpr) -> str:
    """Render with the fewest parentheses that still round-trip structurally."""
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Const):
        return str(e.value)
    if isinstance(e, Add):
        return f"{_wrap(e.left, _PREC_ADD)} + {_wrap(e.right, _PREC_ADD + 1)}"
    if isinstance(e, Sub):
        return f"{_wrap(e.left, _PREC_ADD)} - {_wrap(e.right, _PREC_ADD + 1)}"
    if isinstance(e, Mul):
        return f"{_wrap(e.left, _PREC_MUL)}*{_wrap(e.right, _PREC_MUL + 1)}"
    if isinstance(e, Div):
        return f"{_wrap(e.left, _PREC_MUL)}/{_wrap(e.right, _PREC_MUL + 1)}"
    if isinstance(e, Pow):
        return f"{_wrap(e.base, _PREC_ATOM)}^{e.exponent}"
    raise TypeError(f"unknown node {e!r}")


# --- JSON tree form --------------------------------------------------------------

_OPS = {Add: "add", Sub: "sub", Mul: "mul", Div: "div"}
_OPS_INV = {"add": add, "sub": sub, "mul": mul, "div": div}


def to_json_obj(e: RatExpr):
    if isinstance(e, Var):
        return {"op": "var", "name": e.name}
    if isinstance(e, Const):
        return {"op": "const", "value": str(e.value)}
    if isinstance(e, Pow):
        return {"op": "pow", "args": [to_json_obj(e.base)], "exponent": e.exponent}
    return {"op": _OPS[type(e)], "args": [to_json_obj(e.left), to_json_obj(e.right)]}


def from_json_obj(obj) -> RatExpr:
    op = obj["op"]
    if op == "var":
        return var(obj["name"])
    if op == "const":
        return const(Fraction(obj["value"]))
    if op == "pow":
        return pow_(from_json_obj(obj["args"][0]), int(obj["exponent"]))
    if op in _OPS_INV:
        left, right = obj["args"]
        return _OPS_INV[op](from_json_obj(left), from_json_obj(right))
    raise ExprError(f"unknown op {op!r} in JSON expression")


def to_json(e: RatExpr) -> str:
    return json.dumps(to_json_obj(e))


def from_json(text: str) -> RatExpr:
    return from_json_obj(json.loads(text))
