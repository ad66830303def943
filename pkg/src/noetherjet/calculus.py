"""Total derivatives, prolongation, the Euler-Lagrange operator and Lie brackets.

A point symmetry generator is

    v = xi_x d/dx + xi_y d/dy + xi_t d/dt + eta d/du

with all four components of order 0.  Its characteristic is
q = eta - xi_x*u_x - xi_y*u_y - xi_t*u_t, and the prolongation coefficients
are eta_J = D_J q + xi_x*u_{J+x} + xi_y*u_{J+y} + xi_t*u_{J+t}, which is the
standard recursion eta_{J,i} = D_i eta_J - (D_i xi_j) u_{J,j} in closed form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import (
    COORDS,
    DEFAULT_MAX_ORDER,
    U,
    Expr,
    JetAlgebraError,
    JetVar,
    OrderOverflowError,
    Scalar,
    ZERO,
)


class OrderMismatchError(JetAlgebraError):
    """An expression contains derivatives above the prolongation order."""

    code = "order-mismatch"


class PointSymmetryViolation(JetAlgebraError):
    """A vector field component depends on derivatives of u."""

    code = "point-symmetry"


@dataclass(frozen=True)
class VectorField:
    """A point symmetry generator; all components depend on x, y, t, u only."""

    xi_x: Expr
    xi_y: Expr
    xi_t: Expr
    eta: Expr

    def __post_init__(self) -> None:
        for name, component in zip(("xi_x", "xi_y", "xi_t", "eta"), self.components):
            if component.order > 0:
                raise PointSymmetryViolation(
                    f"{name} depends on derivatives of u; not a point symmetry"
                )

    @property
    def components(self) -> tuple[Expr, Expr, Expr, Expr]:
        return (self.xi_x, self.xi_y, self.xi_t, self.eta)

    @property
    def xi(self) -> tuple[Expr, Expr, Expr]:
        return (self.xi_x, self.xi_y, self.xi_t)

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.components)

    @staticmethod
    def zero() -> "VectorField":
        return VectorField(ZERO, ZERO, ZERO, ZERO)

    def apply_to(self, f: Expr) -> Expr:
        """Act as a first-order derivation in x, y, t, u on an order-0 expression."""
        if f.order > 0:
            raise OrderMismatchError("point fields act on order-0 expressions")
        return (
            self.xi_x * f.partial(JetVar.coordinate("x"))
            + self.xi_y * f.partial(JetVar.coordinate("y"))
            + self.xi_t * f.partial(JetVar.coordinate("t"))
            + self.eta * f.partial(U)
        )

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(
            self.xi_x + other.xi_x,
            self.xi_y + other.xi_y,
            self.xi_t + other.xi_t,
            self.eta + other.eta,
        )

    def __sub__(self, other: "VectorField") -> "VectorField":
        return self + other.scaled(-1)

    def scaled(self, c: Scalar) -> "VectorField":
        q = Fraction(c)
        return VectorField(
            self.xi_x * q, self.xi_y * q, self.xi_t * q, self.eta * q
        )


@dataclass(frozen=True)
class FluxVector:
    """An ordered triple of expressions (P1, P2, P3)."""

    p1: Expr
    p2: Expr
    p3: Expr

    @property
    def components(self) -> tuple[Expr, Expr, Expr]:
        return (self.p1, self.p2, self.p3)

    @property
    def order(self) -> int:
        return max(c.order for c in self.components)

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.components)

    @staticmethod
    def zero() -> "FluxVector":
        return FluxVector(ZERO, ZERO, ZERO)

    def __add__(self, other: "FluxVector") -> "FluxVector":
        return FluxVector(
            self.p1 + other.p1, self.p2 + other.p2, self.p3 + other.p3
        )

    def __sub__(self, other: "FluxVector") -> "FluxVector":
        return FluxVector(
            self.p1 - other.p1, self.p2 - other.p2, self.p3 - other.p3
        )

    def scaled(self, c: Scalar) -> "FluxVector":
        q = Fraction(c)
        return FluxVector(self.p1 * q, self.p2 * q, self.p3 * q)


@dataclass(frozen=True)
class SymmetryRecord:
    """A named generator with an optional potential and optional tabulated flux.

    ``field`` may be None only in errata overlays, which override individual
    pieces of an existing record.
    """

    name: str
    field: VectorField | None
    potential: FluxVector | None = None
    paper_flux: FluxVector | None = None


@dataclass(frozen=True, eq=False)
class ProlongedField:
    """A point field extended to derivative variables up to ``order``."""

    base: VectorField
    order: int
    eta_j: dict[tuple[int, int, int], Expr]


def total_derivative(
    e: Expr, coord: str, max_order: int = DEFAULT_MAX_ORDER
) -> Expr:
    """D_coord e = de/dcoord + sum_J u_{J+coord} * de/du_J."""
    if e.order > max_order - 1:
        raise OrderOverflowError(
            f"total derivative of an order-{e.order} expression exceeds"
            f" max order {max_order}"
        )
    result = e.partial(JetVar.coordinate(coord))
    for var in e.variables():
        if not var.is_derivative:
            continue
        result = result + Expr.variable(var.differentiated(coord)) * e.partial(var)
    return result


def divergence(p: FluxVector, max_order: int = DEFAULT_MAX_ORDER) -> Expr:
    """D_x p1 + D_y p2 + D_t p3."""
    return sum(
        (total_derivative(c, coord, max_order) for c, coord in zip(p.components, COORDS)),
        ZERO,
    )


def characteristic(v: VectorField) -> Expr:
    """q = eta - xi_x*u_x - xi_y*u_y - xi_t*u_t."""
    result = v.eta
    for xi, coord in zip(v.xi, COORDS):
        result = result - xi * Expr.variable(U.differentiated(coord))
    return result


def multi_indices(order: int) -> list[tuple[int, int, int]]:
    """All multi-indices (a, b, c) with a+b+c == order, in graded-lex order."""
    found = [
        (a, b, order - a - b)
        for a in range(order, -1, -1)
        for b in range(order - a, -1, -1)
    ]
    return found


def _iterated_total_derivative(
    e: Expr, index: tuple[int, int, int], max_order: int
) -> Expr:
    for coord, count in zip(COORDS, index):
        for _ in range(count):
            e = total_derivative(e, coord, max_order)
    return e


def prolong(
    v: VectorField, k: int, max_order: int = DEFAULT_MAX_ORDER
) -> ProlongedField:
    """Extend a point field to derivatives of order <= k (k in {1, 2})."""
    if k not in (1, 2):
        raise ValueError("prolongation implemented for orders 1 and 2 only")
    q = characteristic(v)
    eta_j: dict[tuple[int, int, int], Expr] = {}
    for order in range(1, k + 1):
        for index in multi_indices(order):
            coeff = _iterated_total_derivative(q, index, max_order)
            u_index = JetVar(None, index)
            for xi, coord in zip(v.xi, COORDS):
                coeff = coeff + xi * Expr.variable(u_index.differentiated(coord))
            eta_j[index] = coeff
    return ProlongedField(base=v, order=k, eta_j=eta_j)


def apply_prolonged(pv: ProlongedField, e: Expr) -> Expr:
    """sum xi_i de/dx_i + eta de/du + sum_J eta_J de/du_J (formal partials)."""
    if e.order > pv.order:
        raise OrderMismatchError(
            f"expression has order {e.order} > prolongation order {pv.order}"
        )
    result = ZERO
    for xi, coord in zip(pv.base.xi, COORDS):
        result = result + xi * e.partial(JetVar.coordinate(coord))
    result = result + pv.base.eta * e.partial(U)
    for index, coeff in pv.eta_j.items():
        result = result + coeff * e.partial(JetVar(None, index))
    return result


def euler_operator(L: Expr, max_order: int = DEFAULT_MAX_ORDER) -> Expr:
    """E(L) = dL/du - D_i(dL/du_i) + D_i D_j (dL/du_ij).

    Each canonical symmetric variable u_ij is counted once, with the
    multi-index sign (-1)^|J|; this makes E annihilate total divergences
    and gives euler_operator(1/2*u_x^2) = -u_xx exactly.
    """
    if L.order > 2:
        raise OrderOverflowError(
            "Euler-Lagrange operator is defined for expressions of order <= 2"
        )
    result = L.partial(U)
    for index in multi_indices(1):
        p = L.partial(JetVar(None, index))
        if not p.is_zero:
            result = result - _iterated_total_derivative(p, index, max_order)
    for index in multi_indices(2):
        p = L.partial(JetVar(None, index))
        if not p.is_zero:
            result = result + _iterated_total_derivative(p, index, max_order)
    return result


def lie_bracket(v: VectorField, w: VectorField) -> VectorField:
    """[v, w]_i = v(w_i) - w(v_i), acting as derivations in x, y, t, u."""
    return VectorField(
        v.apply_to(w.xi_x) - w.apply_to(v.xi_x),
        v.apply_to(w.xi_y) - w.apply_to(v.xi_y),
        v.apply_to(w.xi_t) - w.apply_to(v.xi_t),
        v.apply_to(w.eta) - w.apply_to(v.eta),
    )
