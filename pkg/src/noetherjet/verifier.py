"""Conservation-law verification for the critical Kohn-Laplace equation.

The equation is F = u_xx + u_yy + 4(x^2+y^2) u_tt + 4y u_xt - 4x u_yt + u^3 = 0,
which is the Euler-Lagrange equation (up to sign) of

    L = 1/2 u_x^2 + 1/2 u_y^2 + 2(x^2+y^2) u_t^2 + 2y u_x u_t - 2x u_y u_t - u^4/4.

For every symmetry v with potential phi this module checks the divergence-
symmetry condition pr(v)L + L Div(xi) = Div(phi), builds the Noether flux
P_i = xi_i L + q dL/du_i - phi_i, and reduces Div(P) modulo the equation by
eliminating u_xx (F is monic in u_xx, so the elimination is an exact
ideal-membership test for order-2 expressions).
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from .algebra import (
    COORDS,
    DEFAULT_MAX_ORDER,
    U,
    Expr,
    JetAlgebraError,
    JetVar,
    OrderOverflowError,
    ZERO,
)
from .calculus import (
    FluxVector,
    SymmetryRecord,
    VectorField,
    apply_prolonged,
    characteristic,
    divergence,
    lie_bracket,
    multi_indices,
    prolong,
    total_derivative,
)

#: Report order of the built-in symmetries.
CATALOG_NAMES = ("T", "R", "Xt", "Yt", "Z", "V1", "V2", "V3")

_U_XX = JetVar.derivative(2, 0, 0)


class UnknownSymmetryError(JetAlgebraError):
    code = "unknown-symmetry"


class NotInSpanError(JetAlgebraError):
    """A Lie bracket is not a rational combination of the catalog fields."""

    code = "not-in-span"


@lru_cache(maxsize=None)
def equation_expr() -> Expr:
    """F = u_xx + u_yy + 4(x^2+y^2)u_tt + 4y u_xt - 4x u_yt + u^3."""
    from .parsing import parse_expr

    return parse_expr(
        "u_xx + u_yy + 4*(x^2 + y^2)*u_tt + 4*y*u_xt - 4*x*u_yt + u^3"
    )


@lru_cache(maxsize=None)
def lagrangian_expr() -> Expr:
    """The first-order Lagrangian whose Euler-Lagrange equation is -F = 0."""
    from .parsing import parse_expr

    return parse_expr(
        "1/2*u_x^2 + 1/2*u_y^2 + 2*(x^2 + y^2)*u_t^2"
        " + 2*y*u_x*u_t - 2*x*u_y*u_t - 1/4*u^4"
    )


@lru_cache(maxsize=None)
def _u_xx_solved() -> Expr:
    # F is monic in u_xx: u_xx = u_xx - F on solutions.
    return Expr.variable(_U_XX) - equation_expr()


@lru_cache(maxsize=None)
def catalog() -> tuple[SymmetryRecord, ...]:
    """The eight built-in symmetries with potentials and tabulated fluxes."""
    from .parsing import parse_symmetry_file

    text = resources.files("noetherjet").joinpath("data/catalog.sym").read_text()
    records = tuple(parse_symmetry_file(text))
    assert tuple(r.name for r in records) == CATALOG_NAMES
    return records


def catalog_record(name: str) -> SymmetryRecord:
    for record in catalog():
        if record.name == name:
            return record
    raise UnknownSymmetryError(
        f"unknown symmetry {name!r}; catalog has {', '.join(CATALOG_NAMES)}"
    )


def divergence_symmetry_defect(
    v: VectorField,
    L: Expr,
    phi: FluxVector,
    max_order: int = DEFAULT_MAX_ORDER,
) -> Expr:
    """pr(v)L + L*(D_x xi_x + D_y xi_y + D_t xi_t) - Div(phi).

    Zero exactly when v changes the Lagrangian by the divergence of phi.
    """
    if L.order > 1:
        raise OrderOverflowError("the defect check needs a first-order Lagrangian")
    action = apply_prolonged(prolong(v, 1, max_order), L)
    stretch = sum(
        (total_derivative(xi, coord, max_order) for xi, coord in zip(v.xi, COORDS)),
        ZERO,
    )
    return action + L * stretch - divergence(phi, max_order)


def noether_flux(v: VectorField, L: Expr, phi: FluxVector) -> FluxVector:
    """P_i = xi_i * L + q * dL/du_i - phi_i with q the characteristic of v."""
    if L.order > 1:
        raise OrderOverflowError("the flux construction needs a first-order Lagrangian")
    q = characteristic(v)
    components = []
    for xi, coord, phi_i in zip(v.xi, COORDS, phi.components):
        w = q * L.partial(U.differentiated(coord))
        components.append(xi * L + w - phi_i)
    return FluxVector(*components)


def on_shell_reduce(e: Expr, max_order: int = DEFAULT_MAX_ORDER) -> Expr:
    """Eliminate u_xx via u_xx = -(u_yy + 4(x^2+y^2)u_tt + 4y u_xt - 4x u_yt + u^3).

    The result is 0 iff e is a multiple of the equation within order-2
    expressions; reduction is not defined above order 2.
    """
    if e.order > 2:
        raise OrderOverflowError(
            f"on-shell reduction is defined through order 2, got order {e.order}"
        )
    while _U_XX in e.variables():
        e = e.substitute(_U_XX, _u_xx_solved(), max_order)
    return e


def flux_equivalent(
    p: FluxVector, p2: FluxVector, max_order: int = DEFAULT_MAX_ORDER
) -> bool:
    """True iff p and p2 differ by a flux with vanishing on-shell divergence."""
    return on_shell_reduce(divergence(p - p2, max_order), max_order).is_zero


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of the full check for one symmetry."""

    symmetry_name: str
    defect: Expr
    constructed_flux: FluxVector
    constructed_residual: Expr
    paper_residual: Expr | None
    equivalent: bool | None
    #: True when the tabulated flux equals the constructed one term by term.
    componentwise_equal: bool | None
    #: On-shell residual of D_i(paper_i - constructed_i) per component;
    #: nonzero entries localize a transcription discrepancy.
    component_residuals: tuple[Expr, Expr, Expr] | None
    elapsed: float

    @property
    def engine_passed(self) -> bool:
        return self.defect.is_zero and self.constructed_residual.is_zero

    @property
    def paper_passed(self) -> bool | None:
        if self.paper_residual is None:
            return None
        return self.paper_residual.is_zero and bool(self.equivalent)


def verify_record(
    record: SymmetryRecord,
    L: Expr | None = None,
    max_order: int = DEFAULT_MAX_ORDER,
) -> VerificationReport:
    """Run defect, constructed-flux and (when present) tabulated-flux checks."""
    start = time.perf_counter()
    if record.field is None:
        raise UnknownSymmetryError(f"record {record.name!r} has no generator")
    L = lagrangian_expr() if L is None else L
    phi = record.potential if record.potential is not None else FluxVector.zero()

    defect = divergence_symmetry_defect(record.field, L, phi, max_order)
    constructed = noether_flux(record.field, L, phi)
    constructed_residual = on_shell_reduce(divergence(constructed, max_order), max_order)

    paper_residual = None
    equivalent = None
    componentwise = None
    component_residuals = None
    if record.paper_flux is not None:
        paper_residual = on_shell_reduce(
            divergence(record.paper_flux, max_order), max_order
        )
        equivalent = flux_equivalent(constructed, record.paper_flux, max_order)
        componentwise = record.paper_flux == constructed
        component_residuals = tuple(
            on_shell_reduce(total_derivative(pc - cc, coord, max_order), max_order)
            for pc, cc, coord in zip(
                record.paper_flux.components, constructed.components, COORDS
            )
        )

    return VerificationReport(
        symmetry_name=record.name,
        defect=defect,
        constructed_flux=constructed,
        constructed_residual=constructed_residual,
        paper_residual=paper_residual,
        equivalent=equivalent,
        componentwise_equal=componentwise,
        component_residuals=component_residuals,
        elapsed=time.perf_counter() - start,
    )


def verify_symmetry(
    name: str, L: Expr | None = None, max_order: int = DEFAULT_MAX_ORDER
) -> VerificationReport:
    return verify_record(catalog_record(name), L, max_order)


# -- bracket table ------------------------------------------------------------


def _solve_exact(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Solve the overdetermined system rows*c = rhs exactly; None if inconsistent."""
    n = len(rows[0]) if rows else 0
    aug = [row + [b] for row, b in zip(rows, rhs)]
    pivot_row = 0
    pivot_cols = []
    for col in range(n):
        pivot = next(
            (r for r in range(pivot_row, len(aug)) if aug[r][col] != 0), None
        )
        if pivot is None:
            continue
        aug[pivot_row], aug[pivot] = aug[pivot], aug[pivot_row]
        scale = aug[pivot_row][col]
        aug[pivot_row] = [v / scale for v in aug[pivot_row]]
        for r in range(len(aug)):
            if r != pivot_row and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [v - factor * p for v, p in zip(aug[r], aug[pivot_row])]
        pivot_cols.append(col)
        pivot_row += 1
        if pivot_row == len(aug):
            break
    for r in range(pivot_row, len(aug)):
        if aug[r][n] != 0:
            return None
    solution = [Fraction(0)] * n
    for r, col in enumerate(pivot_cols):
        solution[col] = aug[r][n]
    return solution


def express_in_catalog(
    field: VectorField, basis: tuple[SymmetryRecord, ...] | None = None
) -> dict[str, Fraction]:
    """Write a field as an exact rational combination of the catalog fields.

    The coefficients are found by equating polynomial coefficients in every
    component and double-checked by reconstructing the combination.
    """
    basis = catalog() if basis is None else basis
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for idx in range(4):
        monomials = set()
        target = field.components[idx]
        columns = [record.field.components[idx] for record in basis]
        for expr in columns + [target]:
            monomials.update(m for m, _ in expr.terms)
        for monomial in sorted(monomials, key=lambda m: m.sort_key):
            rows.append([col.coefficient(monomial) for col in columns])
            rhs.append(target.coefficient(monomial))
    solution = _solve_exact(rows, rhs)
    if solution is None:
        raise NotInSpanError(
            "bracket is not a combination of the catalog fields"
            " (transcription bug?)"
        )
    combo = {
        record.name: c for record, c in zip(basis, solution) if c != 0
    }
    rebuilt = VectorField.zero()
    for record, c in zip(basis, solution):
        rebuilt = rebuilt + record.field.scaled(c)
    if rebuilt != field:
        raise NotInSpanError("inconsistent solve while matching catalog fields")
    return combo


def format_combination(combo: dict[str, Fraction]) -> str:
    """Render {name: coeff} as e.g. '0', 'Z', '-V2', '4*T'."""
    if not combo:
        return "0"
    pieces = []
    for i, name in enumerate(n for n in CATALOG_NAMES if n in combo):
        coeff = combo[name]
        sign = "-" if coeff < 0 else "+"
        magnitude = abs(coeff)
        body = name if magnitude == 1 else f"{magnitude}*{name}"
        if i == 0:
            pieces.append(body if sign == "+" else f"-{body}")
        else:
            pieces.append(f" {sign} {body}")
    return "".join(pieces)


def bracket_table(
    max_order: int = DEFAULT_MAX_ORDER,
) -> dict[tuple[str, str], dict[str, Fraction]]:
    """All 64 ordered Lie brackets, each expressed in the catalog basis."""
    table: dict[tuple[str, str], dict[str, Fraction]] = {}
    for left in catalog():
        for right in catalog():
            bracket = lie_bracket(left.field, right.field)
            table[(left.name, right.name)] = express_in_catalog(bracket)
    return table


# -- randomized numeric confirmation ------------------------------------------


def random_rational(rng: random.Random, bound: int = 5) -> Fraction:
    """A random fraction in [-bound, bound] with a small denominator."""
    denominator = rng.randint(1, 6)
    numerator = rng.randint(-bound * denominator, bound * denominator)
    return Fraction(numerator, denominator)


def _order2_variables() -> list[JetVar]:
    names = [JetVar.coordinate(c) for c in COORDS]
    for order in (0, 1, 2):
        names.extend(JetVar(None, idx) for idx in multi_indices(order))
    return names


def random_point(
    rng: random.Random, variables: list[JetVar] | None = None, bound: int = 5
) -> dict[JetVar, Fraction]:
    """Random rational values for every jet variable up to order 2."""
    variables = _order2_variables() if variables is None else variables
    return {var: random_rational(rng, bound) for var in variables}


def random_onshell_point(
    rng: random.Random, bound: int = 5
) -> dict[JetVar, Fraction]:
    """A random order-2 point lying on the solution variety F = 0."""
    point = random_point(rng, bound=bound)
    rest = equation_expr() - Expr.variable(_U_XX)
    point[_U_XX] = -rest.evaluate(point)
    return point


def spot_check_onshell_zero(
    e: Expr, points: int, rng: random.Random
) -> bool:
    """Evaluate e at random on-shell points; True if all values are 0."""
    return all(
        e.evaluate(random_onshell_point(rng)) == 0 for _ in range(points)
    )


def spot_check_zero(e: Expr, points: int, rng: random.Random) -> bool:
    """Evaluate e at unconstrained random points; True if all values are 0."""
    return all(e.evaluate(random_point(rng)) == 0 for _ in range(points))


# -- errata overlays -----------------------------------------------------------


def apply_errata(
    records: tuple[SymmetryRecord, ...], overlay: list[SymmetryRecord]
) -> tuple[SymmetryRecord, ...]:
    """Override fields of existing records with those provided in the overlay."""
    by_name = {record.name: record for record in records}
    for patch in overlay:
        if patch.name not in by_name:
            raise UnknownSymmetryError(
                f"errata record {patch.name!r} does not match any symmetry"
            )
        base = by_name[patch.name]
        by_name[patch.name] = SymmetryRecord(
            name=base.name,
            field=patch.field if patch.field is not None else base.field,
            potential=patch.potential if patch.potential is not None else base.potential,
            paper_flux=patch.paper_flux if patch.paper_flux is not None else base.paper_flux,
        )
    return tuple(by_name[record.name] for record in records)
