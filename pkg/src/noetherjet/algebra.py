"""Exact polynomial algebra over jet variables.

Every quantity handled by the engine is a multivariate polynomial with
rational coefficients over the coordinates x, y, t and the derivative
symbols u, u_x, u_xy, ...  Expressions are kept in a unique canonical form
(sorted terms, no zero coefficients, reduced fractions), so equality of
canonical forms is exact zero-testing.  Coefficients are
:class:`fractions.Fraction`, which already guarantees a positive
denominator in lowest terms and arbitrary-precision integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

Scalar = Union[int, Fraction]

COORDS = ("x", "y", "t")

#: Default cap on the total derivative order of any jet variable.  Flux
#: components are order 1, their divergences order 2, and prolongation or
#: Euler intermediates stay within order 3.
DEFAULT_MAX_ORDER = 3


class JetAlgebraError(Exception):
    """Base class for all engine errors."""

    code = "engine-error"


class OrderOverflowError(JetAlgebraError):
    """A derivative symbol would exceed the configured maximum order."""

    code = "order-overflow"


class MissingAssignmentError(JetAlgebraError):
    """A point assignment does not cover some variable of the expression."""

    code = "missing-assignment"

    def __init__(self, var: "JetVar"):
        self.var = var
        super().__init__(f"no value assigned to {var.name}")


@dataclass(frozen=True)
class JetVar:
    """A coordinate (x, y, t) or a derivative u_J of the dependent variable.

    ``coord`` names the coordinate and is None for derivatives; ``index``
    is the symmetric multi-index (a, b, c) meaning
    d^(a+b+c) u / dx^a dy^b dt^c and is None for coordinates.  Mixed
    partials are identified symmetrically: u_xt and u_tx are the same
    variable (1, 0, 1).
    """

    coord: str | None
    index: tuple[int, int, int] | None

    def __post_init__(self) -> None:
        if (self.coord is None) == (self.index is None):
            raise ValueError("JetVar is either a coordinate or a derivative")
        if self.coord is not None and self.coord not in COORDS:
            raise ValueError(f"unknown coordinate {self.coord!r}")
        if self.index is not None and (len(self.index) != 3 or min(self.index) < 0):
            raise ValueError(f"bad multi-index {self.index!r}")

    @staticmethod
    def coordinate(name: str) -> "JetVar":
        return JetVar(name, None)

    @staticmethod
    def derivative(a: int, b: int, c: int) -> "JetVar":
        return JetVar(None, (a, b, c))

    @staticmethod
    def from_name(name: str) -> "JetVar":
        """Build the variable named ``x``, ``u`` or ``u_<suffix>``.

        Suffix letters are counted, not ordered: ``u_tx`` and ``u_xt``
        both name the multi-index (1, 0, 1).
        """
        if name in COORDS:
            return JetVar.coordinate(name)
        if name == "u":
            return JetVar.derivative(0, 0, 0)
        if name.startswith("u_") and len(name) > 2:
            suffix = name[2:]
            if set(suffix) <= {"x", "y", "t"}:
                return JetVar.derivative(
                    suffix.count("x"), suffix.count("y"), suffix.count("t")
                )
        raise ValueError(f"not a jet variable name: {name!r}")

    @property
    def order(self) -> int:
        """Total derivative order; coordinates and u itself have order 0."""
        return 0 if self.index is None else sum(self.index)

    @property
    def is_derivative(self) -> bool:
        """True for u and its derivatives, False for coordinates."""
        return self.index is not None

    @property
    def name(self) -> str:
        if self.coord is not None:
            return self.coord
        a, b, c = self.index  # type: ignore[misc]
        if a == b == c == 0:
            return "u"
        return "u_" + "x" * a + "y" * b + "t" * c

    @property
    def sort_key(self) -> tuple:
        # Coordinates x < y < t, then derivatives by graded-lex multi-index.
        if self.coord is not None:
            return (0, COORDS.index(self.coord), ())
        a, b, c = self.index  # type: ignore[misc]
        return (1, a + b + c, (-a, -b, -c))

    def differentiated(self, coord: str) -> "JetVar":
        """u_J -> u_{J+coord}; not defined for coordinate variables."""
        if self.index is None:
            raise ValueError("cannot differentiate a coordinate symbol")
        a, b, c = self.index
        i = COORDS.index(coord)
        return JetVar(None, (a + (i == 0), b + (i == 1), c + (i == 2)))

    def __repr__(self) -> str:
        return f"JetVar({self.name})"


X = JetVar.coordinate("x")
Y = JetVar.coordinate("y")
T = JetVar.coordinate("t")
U = JetVar.derivative(0, 0, 0)


@dataclass(frozen=True)
class Monomial:
    """A product of jet variables with positive integer exponents.

    ``factors`` is sorted by the global variable order and stores no zero
    exponents, so structural equality is monomial equality.
    """

    factors: tuple[tuple[JetVar, int], ...]

    @staticmethod
    def from_pairs(pairs: Iterable[tuple[JetVar, int]]) -> "Monomial":
        merged: dict[JetVar, int] = {}
        for var, exp in pairs:
            if exp < 0:
                raise ValueError("negative exponent")
            if exp:
                merged[var] = merged.get(var, 0) + exp
        ordered = tuple(
            sorted(merged.items(), key=lambda item: item[0].sort_key)
        )
        return Monomial(ordered)

    @property
    def degree(self) -> int:
        return sum(exp for _, exp in self.factors)

    @property
    def order(self) -> int:
        return max((var.order for var, _ in self.factors), default=0)

    @property
    def sort_key(self) -> tuple:
        return (
            self.degree,
            tuple((var.sort_key, -exp) for var, exp in self.factors),
        )

    def exponent(self, var: JetVar) -> int:
        for v, exp in self.factors:
            if v == var:
                return exp
        return 0

    def without(self, var: JetVar) -> "Monomial":
        return Monomial(tuple((v, e) for v, e in self.factors if v != var))

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial.from_pairs(self.factors + other.factors)

    def __repr__(self) -> str:
        if not self.factors:
            return "Monomial(1)"
        body = "*".join(
            f"{var.name}^{exp}" if exp > 1 else var.name
            for var, exp in self.factors
        )
        return f"Monomial({body})"


_MONOMIAL_ONE = Monomial(())


@dataclass(frozen=True)
class Expr:
    """Canonical polynomial: sorted terms mapping monomials to nonzero rationals.

    Two expressions are equal iff their term tuples are identical; the
    canonical form is unique, so ``a == b`` is exact mathematical equality
    and ``a.is_zero`` is an exact zero test.
    """

    terms: tuple[tuple[Monomial, Fraction], ...]

    @staticmethod
    def from_dict(terms: Mapping[Monomial, Fraction]) -> "Expr":
        kept = [(m, q) for m, q in terms.items() if q != 0]
        kept.sort(key=lambda item: item[0].sort_key)
        return Expr(tuple(kept))

    @staticmethod
    def constant(value: Scalar) -> "Expr":
        q = Fraction(value)
        return Expr(((_MONOMIAL_ONE, q),)) if q else Expr(())

    @staticmethod
    def variable(var: JetVar) -> "Expr":
        return Expr(((Monomial(((var, 1),)), Fraction(1)),))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def order(self) -> int:
        """Max total derivative order of any jet variable occurring here."""
        return max((m.order for m, _ in self.terms), default=0)

    def variables(self) -> set[JetVar]:
        return {var for m, _ in self.terms for var, _ in m.factors}

    def coefficient(self, monomial: Monomial) -> Fraction:
        for m, q in self.terms:
            if m == monomial:
                return q
        return Fraction(0)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "Expr | Scalar") -> "Expr":
        other = _as_expr(other)
        if other is None:
            return NotImplemented
        acc = dict(self.terms)
        for m, q in other.terms:
            s = acc.get(m, Fraction(0)) + q
            if s:
                acc[m] = s
            else:
                acc.pop(m, None)
        return Expr.from_dict(acc)

    __radd__ = __add__

    def __neg__(self) -> "Expr":
        return Expr(tuple((m, -q) for m, q in self.terms))

    def __sub__(self, other: "Expr | Scalar") -> "Expr":
        other = _as_expr(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: "Expr | Scalar") -> "Expr":
        other = _as_expr(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other: "Expr | Scalar") -> "Expr":
        other = _as_expr(other)
        if other is None:
            return NotImplemented
        acc: dict[Monomial, Fraction] = {}
        for m1, q1 in self.terms:
            for m2, q2 in other.terms:
                m = m1 * m2
                s = acc.get(m, Fraction(0)) + q1 * q2
                if s:
                    acc[m] = s
                else:
                    acc.pop(m, None)
        return Expr.from_dict(acc)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Expr":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Expr.constant(1)
        for _ in range(exponent):
            result = result * self
        return result

    # -- calculus primitives ------------------------------------------------

    def partial(self, var: JetVar) -> "Expr":
        """Formal partial derivative: every other jet variable held fixed."""
        acc: dict[Monomial, Fraction] = {}
        for m, q in self.terms:
            exp = m.exponent(var)
            if not exp:
                continue
            reduced = Monomial.from_pairs(
                [(v, e - 1 if v == var else e) for v, e in m.factors]
            )
            s = acc.get(reduced, Fraction(0)) + q * exp
            if s:
                acc[reduced] = s
            else:
                acc.pop(reduced, None)
        return Expr.from_dict(acc)

    def substitute(
        self, var: JetVar, replacement: "Expr", max_order: int = DEFAULT_MAX_ORDER
    ) -> "Expr":
        """Replace every occurrence of ``var`` by ``replacement`` and renormalize."""
        if replacement == Expr.variable(var):
            return self
        result = Expr.constant(0)
        for m, q in self.terms:
            exp = m.exponent(var)
            base = Expr(((m.without(var), q),))
            result = result + (base * replacement**exp if exp else base)
        if result.order > max_order:
            raise OrderOverflowError(
                f"substitution result has order {result.order} > {max_order}"
            )
        return result

    def evaluate(self, point: Mapping[JetVar, Fraction]) -> Fraction:
        """Exact value at a rational point covering every variable present."""
        total = Fraction(0)
        for m, q in self.terms:
            value = q
            for var, exp in m.factors:
                try:
                    value *= point[var] ** exp
                except KeyError:
                    raise MissingAssignmentError(var) from None
            total += value
        return total

    def __str__(self) -> str:
        from .parsing import print_expr

        return print_expr(self)

    def __repr__(self) -> str:
        return f"Expr({self})"

    def __iter__(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(self.terms)


def _as_expr(value: "Expr | Scalar") -> Expr | None:
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, Fraction)):
        return Expr.constant(value)
    return None


ZERO = Expr.constant(0)
ONE = Expr.constant(1)


def var_expr(name: str) -> Expr:
    """Shorthand: the expression consisting of the single named variable."""
    return Expr.variable(JetVar.from_name(name))
