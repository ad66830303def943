"""Check orchestration shared by the HTTP service and the CLI.

Every check is reduced to a flat :class:`CheckRecord`, rendered either as a
human-readable text report or as the line-delimited machine format

    check-id <TAB> symmetry <TAB> kind <TAB> status <TAB> residual

which is byte-deterministic for a fixed (configuration, catalog, seed).
Alongside each exact symbolic verdict, the defining identity is re-checked
numerically at seeded random rational points (a Schwartz-Zippel style guard
against canonicalization bugs): defects by comparing both sides of the
divergence-symmetry condition off-shell, flux residuals by sampling points
on the solution variety.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .algebra import COORDS, DEFAULT_MAX_ORDER, Expr
from .calculus import FluxVector, SymmetryRecord, divergence, total_derivative
from .parsing import parse_symmetry_file, print_expr
from .verifier import (
    CATALOG_NAMES,
    UnknownSymmetryError,
    VerificationReport,
    apply_errata,
    bracket_table,
    catalog,
    format_combination,
    lagrangian_expr,
    random_onshell_point,
    random_point,
    verify_record,
)

KIND_DEFECT = "defect"
KIND_CONSTRUCTED = "constructed"
KIND_PAPER = "paper"
KIND_BRACKET = "bracket"


@dataclass(frozen=True)
class CheckRecord:
    check_id: str
    symmetry: str
    kind: str
    status: str  # "pass" | "fail"
    residual: str
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"


@dataclass(frozen=True)
class BracketEntry:
    left: str
    right: str
    combination: str


def resolve_records(
    symmetries: list[str] | None = None,
    file_text: str | None = None,
    errata_text: str | None = None,
    max_order: int = DEFAULT_MAX_ORDER,
) -> list[SymmetryRecord]:
    """Select and patch the records a verification run will operate on."""
    records = (
        catalog()
        if file_text is None
        else tuple(parse_symmetry_file(file_text, max_order))
    )
    if errata_text is not None:
        overlay = parse_symmetry_file(errata_text, max_order, partial=True)
        records = apply_errata(records, overlay)
    if symmetries is not None:
        by_name = {record.name: record for record in records}
        missing = [name for name in symmetries if name not in by_name]
        if missing:
            raise UnknownSymmetryError(
                f"unknown symmetry name(s): {', '.join(missing)};"
                f" available: {', '.join(by_name)}"
            )
        records = tuple(by_name[name] for name in symmetries)
    return list(records)


def _rng_for(seed: int, check_id: str) -> random.Random:
    # Child generator per check so filtering does not reshuffle the stream.
    return random.Random(f"{seed}:{check_id}")


def _defect_numeric_ok(
    record: SymmetryRecord,
    L: Expr,
    points: int,
    rng: random.Random,
    max_order: int,
) -> bool:
    """Compare both sides of the divergence-symmetry condition numerically."""
    from .calculus import apply_prolonged, prolong

    phi = record.potential if record.potential is not None else FluxVector.zero()
    action = apply_prolonged(prolong(record.field, 1, max_order), L)
    stretches = [
        total_derivative(xi, coord, max_order)
        for xi, coord in zip(record.field.xi, COORDS)
    ]
    rhs = divergence(phi, max_order)
    for _ in range(points):
        point = random_point(rng)
        lhs_value = action.evaluate(point) + L.evaluate(point) * sum(
            (s.evaluate(point) for s in stretches), Fraction(0)
        )
        if lhs_value != rhs.evaluate(point):
            return False
    return True


def _onshell_numeric_ok(
    flux: FluxVector, points: int, rng: random.Random, max_order: int
) -> bool:
    div = divergence(flux, max_order)
    return all(
        div.evaluate(random_onshell_point(rng)) == 0 for _ in range(points)
    )


def _paper_detail(report: VerificationReport) -> str:
    bits = []
    if report.equivalent is not None:
        bits.append(f"equivalent-to-constructed={str(report.equivalent).lower()}")
    if report.componentwise_equal is not None:
        bits.append(f"componentwise-equal={str(report.componentwise_equal).lower()}")
    if report.component_residuals is not None and not report.paper_residual.is_zero:
        suspects = [
            f"P{i + 1}"
            for i, r in enumerate(report.component_residuals)
            if not r.is_zero
        ]
        bits.append(f"suspect-components={','.join(suspects) or 'none'}")
    return "; ".join(bits)


def run_verify(
    symmetries: list[str] | None = None,
    include_paper: bool = False,
    file_text: str | None = None,
    errata_text: str | None = None,
    max_order: int = DEFAULT_MAX_ORDER,
    seed: int = 0,
    numeric_points: int = 20,
) -> list[CheckRecord]:
    """Run defect and constructed-flux checks, plus tabulated-flux checks on request.

    The two tiers are reported separately so a typo in a tabulated flux can
    never mask an engine bug, and vice versa.
    """
    records = resolve_records(symmetries, file_text, errata_text, max_order)
    L = lagrangian_expr()
    reports = [verify_record(record, L, max_order) for record in records]
    out: list[CheckRecord] = []

    for record, report in zip(records, reports):
        check_id = f"defect:{record.name}"
        ok = report.defect.is_zero
        detail = ""
        if ok and numeric_points:
            rng = _rng_for(seed, check_id)
            if not _defect_numeric_ok(record, L, numeric_points, rng, max_order):
                ok = False
                detail = "numeric spot-check disagrees with symbolic zero"
        out.append(
            CheckRecord(
                check_id,
                record.name,
                KIND_DEFECT,
                "pass" if ok else "fail",
                print_expr(report.defect),
                detail,
            )
        )

    for record, report in zip(records, reports):
        check_id = f"constructed:{record.name}"
        ok = report.constructed_residual.is_zero
        detail = ""
        if ok and numeric_points:
            rng = _rng_for(seed, check_id)
            if not _onshell_numeric_ok(
                report.constructed_flux, numeric_points, rng, max_order
            ):
                ok = False
                detail = "numeric spot-check disagrees with symbolic zero"
        out.append(
            CheckRecord(
                check_id,
                record.name,
                KIND_CONSTRUCTED,
                "pass" if ok else "fail",
                print_expr(report.constructed_residual),
                detail,
            )
        )

    if include_paper:
        for record, report in zip(records, reports):
            if record.paper_flux is None:
                continue
            check_id = f"paper:{record.name}"
            ok = bool(report.paper_passed)
            detail = _paper_detail(report)
            if ok and numeric_points:
                rng = _rng_for(seed, check_id)
                if not _onshell_numeric_ok(
                    record.paper_flux, numeric_points, rng, max_order
                ):
                    ok = False
                    detail = "numeric spot-check disagrees with symbolic zero"
            out.append(
                CheckRecord(
                    check_id,
                    record.name,
                    KIND_PAPER,
                    "pass" if ok else "fail",
                    print_expr(report.paper_residual),
                    detail,
                )
            )
    return out


def run_bracket_table(
    max_order: int = DEFAULT_MAX_ORDER,
    seed: int = 0,
    numeric_points: int = 20,
) -> list[BracketEntry]:
    """All 64 ordered brackets in catalog order, each written in the basis.

    Every entry is reconstructed exactly and re-checked numerically; a
    failure raises, since it can only mean an engine defect.
    """
    from .calculus import lie_bracket

    table = bracket_table(max_order)
    by_name = {record.name: record for record in catalog()}
    entries = []
    for left in CATALOG_NAMES:
        for right in CATALOG_NAMES:
            combo = table[(left, right)]
            if numeric_points:
                rng = _rng_for(seed, f"bracket:{left},{right}")
                bracket = lie_bracket(by_name[left].field, by_name[right].field)
                rebuilt = sum(
                    (by_name[n].field.scaled(c) for n, c in combo.items()),
                    by_name[left].field.scaled(0),
                )
                for _ in range(numeric_points):
                    point = random_point(rng)
                    for b, r in zip(bracket.components, rebuilt.components):
                        if b.evaluate(point) != r.evaluate(point):
                            raise AssertionError(
                                f"numeric bracket check failed for [{left},{right}]"
                            )
            entries.append(BracketEntry(left, right, format_combination(combo)))
    return entries


# -- rendering -----------------------------------------------------------------


def render_machine(records: list[CheckRecord]) -> str:
    lines = [
        "\t".join((r.check_id, r.symmetry, r.kind, r.status, r.residual))
        for r in records
    ]
    return "\n".join(lines) + "\n"


_SECTION_TITLES = {
    KIND_DEFECT: "divergence-symmetry defects",
    KIND_CONSTRUCTED: "constructed Noether fluxes (on-shell divergence)",
    KIND_PAPER: "tabulated fluxes (on-shell divergence)",
}


def render_text(records: list[CheckRecord]) -> str:
    lines: list[str] = []
    current_kind = None
    for record in records:
        if record.kind != current_kind:
            if current_kind is not None:
                lines.append("")
            lines.append(_SECTION_TITLES.get(record.kind, record.kind))
            current_kind = record.kind
        status = "pass" if record.passed else "FAIL"
        lines.append(f"  {record.symmetry:<4} {status:<4} residual = {record.residual}")
        if record.detail:
            lines.append(f"       {record.detail}")
    passed = sum(r.passed for r in records)
    lines.append("")
    lines.append(f"summary: {passed}/{len(records)} checks passed")
    return "\n".join(lines) + "\n"


def render_bracket_machine(entries: list[BracketEntry]) -> str:
    lines = [f"{e.left}\t{e.right}\t{e.combination}" for e in entries]
    return "\n".join(lines) + "\n"


def render_bracket_text(entries: list[BracketEntry]) -> str:
    by_pair = {(e.left, e.right): e.combination for e in entries}
    width = max(
        max(len(c) for c in by_pair.values()), max(len(n) for n in CATALOG_NAMES)
    )
    header = " " * (width + 2) + "  ".join(n.rjust(width) for n in CATALOG_NAMES)
    lines = [header]
    for left in CATALOG_NAMES:
        row = "  ".join(
            by_pair[(left, right)].rjust(width) for right in CATALOG_NAMES
        )
        lines.append(f"{left.rjust(width)}  {row}")
    return "\n".join(lines) + "\n"
