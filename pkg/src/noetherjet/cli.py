"""Command-line client for the verification service.

The CLI builds requests and renders reports; all computation happens in the
service layer (in-process by default, or a remote instance via --server).

Exit codes: 0 all requested checks passed, 1 verification failure,
2 usage error, 3 parse/input error.
"""

from __future__ import annotations

import sys

import click

from .client import ServiceClient, ServiceError
from .reports import (
    BracketEntry,
    CheckRecord,
    render_bracket_machine,
    render_bracket_text,
    render_machine,
    render_text,
)

EXIT_PASS = 0
EXIT_VERIFICATION_FAILURE = 1
EXIT_USAGE = 2
EXIT_PARSE = 3

_PARSE_ERROR_CODES = {
    "parse-error",
    "order-overflow",
    "order-mismatch",
    "point-symmetry",
    "missing-assignment",
    "engine-error",
}
_USAGE_ERROR_CODES = {"unknown-symmetry"}


def _exit_for(error: ServiceError) -> int:
    if error.error in _PARSE_ERROR_CODES:
        return EXIT_PARSE
    if error.error in _USAGE_ERROR_CODES:
        return EXIT_USAGE
    return EXIT_VERIFICATION_FAILURE


def _call(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ServiceError as error:
        click.echo(f"error ({error.error}): {error.message}", err=True)
        sys.exit(_exit_for(error))
    except Exception as error:  # connection failures etc.
        click.echo(f"error: {error}", err=True)
        sys.exit(EXIT_VERIFICATION_FAILURE)


def _records_from_json(payload: dict) -> list[CheckRecord]:
    return [
        CheckRecord(
            check_id=r["check_id"],
            symmetry=r["symmetry"],
            kind=r["kind"],
            status=r["status"],
            residual=r["residual"],
            detail=r.get("detail", ""),
        )
        for r in payload["records"]
    ]


def _read_optional(path: str | None) -> str | None:
    if path is None:
        return None
    with open(path, encoding="utf-8") as handle:
        return handle.read()


server_option = click.option(
    "--server", default=None, metavar="URL", help="Remote service URL (default: in-process)."
)
report_option = click.option(
    "--report",
    type=click.Choice(["text", "machine"]),
    default="text",
    show_default=True,
)
max_order_option = click.option(
    "--max-order", type=click.IntRange(min=2), default=3, show_default=True
)
seed_option = click.option("--seed", type=int, default=0, show_default=True)
points_option = click.option(
    "--numeric-points", type=click.IntRange(min=0), default=20, show_default=True
)


@click.group()
def main() -> None:
    """Verify the conservation laws of the critical Kohn-Laplace equation."""


def _run_verify_command(
    symmetry: str | None,
    all_: bool,
    file: str | None,
    errata: str | None,
    paper: bool,
    report: str,
    max_order: int,
    seed: int,
    numeric_points: int,
    server: str | None,
) -> None:
    if all_ and symmetry:
        raise click.UsageError("--all and --symmetry are mutually exclusive")
    names = [s.strip() for s in symmetry.split(",") if s.strip()] if symmetry else None
    client = ServiceClient(server)
    payload = _call(
        client.verify,
        symmetries=names,
        include_paper=paper,
        file_content=_read_optional(file),
        errata_content=_read_optional(errata),
        max_order=max_order,
        seed=seed,
        numeric_points=numeric_points,
    )
    records = _records_from_json(payload)
    rendered = render_machine(records) if report == "machine" else render_text(records)
    click.echo(rendered, nl=False)
    sys.exit(EXIT_PASS if payload["passed"] else EXIT_VERIFICATION_FAILURE)


@main.command()
@click.option("--all", "all_", is_flag=True, help="Check every catalog symmetry (default).")
@click.option("--symmetry", default=None, metavar="NAME[,NAME...]")
@click.option("--file", default=None, type=click.Path(exists=True, dir_okay=False), help="Symmetry file replacing the catalog.")
@click.option("--errata", default=None, type=click.Path(exists=True, dir_okay=False), help="Errata overlay file.")
@click.option("--paper", is_flag=True, help="Also verify the tabulated fluxes.")
@report_option
@max_order_option
@seed_option
@points_option
@server_option
def verify(symmetry, all_, file, errata, paper, report, max_order, seed, numeric_points, server):
    """Check the divergence-symmetry condition and the constructed fluxes."""
    _run_verify_command(
        symmetry, all_, file, errata, paper, report, max_order, seed, numeric_points, server
    )


@main.command("check-file")
@click.option("--file", required=True, type=click.Path(exists=True, dir_okay=False), help="Symmetry file to verify.")
@click.option("--errata", default=None, type=click.Path(exists=True, dir_okay=False))
@report_option
@max_order_option
@seed_option
@points_option
@server_option
def check_file(file, errata, report, max_order, seed, numeric_points, server):
    """Verify every record of a symmetry file, including any claimed fluxes."""
    _run_verify_command(
        None, False, file, errata, True, report, max_order, seed, numeric_points, server
    )


@main.command("bracket-table")
@report_option
@max_order_option
@seed_option
@points_option
@server_option
def bracket_table_cmd(report, max_order, seed, numeric_points, server):
    """Emit all 64 Lie brackets expressed in the catalog basis."""
    client = ServiceClient(server)
    payload = _call(
        client.bracket_table,
        max_order=max_order,
        seed=seed,
        numeric_points=numeric_points,
    )
    entries = [
        BracketEntry(e["left"], e["right"], e["combination"])
        for e in payload["entries"]
    ]
    rendered = (
        render_bracket_machine(entries)
        if report == "machine"
        else render_bracket_text(entries)
    )
    click.echo(rendered, nl=False)
    sys.exit(EXIT_PASS)


@main.command("euler-lagrange")
@click.argument("expr", required=False, default=None)
@max_order_option
@server_option
def euler_lagrange_cmd(expr, max_order, server):
    """Apply the Euler-Lagrange operator (to EXPR, or the built-in Lagrangian)."""
    client = ServiceClient(server)
    payload = _call(client.euler_lagrange, lagrangian=expr, max_order=max_order)
    click.echo(payload["result"])
    sys.exit(EXIT_PASS)


@main.command()
@click.argument("expr")
@max_order_option
@server_option
def reduce(expr, max_order, server):
    """Reduce EXPR modulo the equation by eliminating u_xx."""
    client = ServiceClient(server)
    payload = _call(client.reduce, expr=expr, max_order=max_order)
    click.echo(payload["result"])
    sys.exit(EXIT_PASS)


@main.command("eval")
@click.argument("expr")
@click.option(
    "--point",
    required=True,
    metavar="NAME=VALUE[,NAME=VALUE...]",
    help="Rational assignment, e.g. 'x=1,y=1/2,u_x=-3'.",
)
@max_order_option
@server_option
def eval_cmd(expr, point, max_order, server):
    """Evaluate EXPR exactly at a rational point."""
    assignments = {}
    for item in point.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise click.UsageError(f"bad assignment {item!r}; use NAME=VALUE")
        name, _, value = item.partition("=")
        assignments[name.strip()] = value.strip()
    client = ServiceClient(server)
    payload = _call(client.eval, expr=expr, point=assignments, max_order=max_order)
    click.echo(payload["value"])
    sys.exit(EXIT_PASS)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Run the verification service with uvicorn."""
    import uvicorn

    uvicorn.run("noetherjet.service:app", host=host, port=port)


if __name__ == "__main__":
    main()
