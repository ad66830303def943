"""FastAPI service exposing the verification engine.

All computations are pure functions over immutable values, so the service
is safe for concurrent clients without any locking.  Engine errors map to
HTTP 400 with a structured body ``{"detail": {"error": <code>, "message": ...}}``.
"""

from __future__ import annotations

from fractions import Fraction

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .algebra import JetAlgebraError, JetVar
from .calculus import euler_operator
from .parsing import parse_expr, print_expr
from .reports import run_bracket_table, run_verify
from .verifier import catalog, lagrangian_expr, on_shell_reduce
from . import schemas

app = FastAPI(
    title="noetherjet",
    description=(
        "Exact jet-space calculus service: verifies the Noether conservation"
        " laws of the critical Kohn-Laplace equation on the Heisenberg group."
    ),
    version="0.1.0",
)


@app.exception_handler(JetAlgebraError)
async def _engine_error_handler(request: Request, exc: JetAlgebraError) -> JSONResponse:
    return JSONResponse(
        status_code=400,
        content={"detail": {"error": exc.code, "message": str(exc)}},
    )


@app.get("/health", response_model=schemas.HealthResponse)
def health() -> schemas.HealthResponse:
    return schemas.HealthResponse()


@app.get("/catalog", response_model=schemas.CatalogResponse)
def get_catalog() -> schemas.CatalogResponse:
    symmetries = []
    for record in catalog():
        symmetries.append(
            schemas.SymmetrySchema(
                name=record.name,
                xi_x=print_expr(record.field.xi_x),
                xi_y=print_expr(record.field.xi_y),
                xi_t=print_expr(record.field.xi_t),
                eta=print_expr(record.field.eta),
                potential=(
                    [print_expr(c) for c in record.potential.components]
                    if record.potential is not None
                    else None
                ),
                tabulated_flux=(
                    [print_expr(c) for c in record.paper_flux.components]
                    if record.paper_flux is not None
                    else None
                ),
            )
        )
    return schemas.CatalogResponse(symmetries=symmetries)


@app.post("/verify", response_model=schemas.VerifyResponse)
def verify(request: schemas.VerifyRequest) -> schemas.VerifyResponse:
    records = run_verify(
        symmetries=request.symmetries,
        include_paper=request.include_paper,
        file_text=request.file_content,
        errata_text=request.errata_content,
        max_order=request.max_order,
        seed=request.seed,
        numeric_points=request.numeric_points,
    )
    models = [
        schemas.CheckRecordSchema(
            check_id=r.check_id,
            symmetry=r.symmetry,
            kind=r.kind,
            status=r.status,
            residual=r.residual,
            detail=r.detail,
        )
        for r in records
    ]
    return schemas.VerifyResponse(
        records=models, passed=all(r.passed for r in records)
    )


@app.post("/bracket-table", response_model=schemas.BracketTableResponse)
def bracket_table_endpoint(
    request: schemas.BracketTableRequest,
) -> schemas.BracketTableResponse:
    entries = run_bracket_table(
        max_order=request.max_order,
        seed=request.seed,
        numeric_points=request.numeric_points,
    )
    return schemas.BracketTableResponse(
        entries=[
            schemas.BracketEntrySchema(
                left=e.left, right=e.right, combination=e.combination
            )
            for e in entries
        ]
    )


@app.post("/euler-lagrange", response_model=schemas.ExprResponse)
def euler_lagrange(request: schemas.EulerLagrangeRequest) -> schemas.ExprResponse:
    L = (
        lagrangian_expr()
        if request.lagrangian is None
        else parse_expr(request.lagrangian, request.max_order)
    )
    return schemas.ExprResponse(
        result=print_expr(euler_operator(L, request.max_order))
    )


@app.post("/reduce", response_model=schemas.ExprResponse)
def reduce_endpoint(request: schemas.ReduceRequest) -> schemas.ExprResponse:
    expr = parse_expr(request.expr, request.max_order)
    return schemas.ExprResponse(
        result=print_expr(on_shell_reduce(expr, request.max_order))
    )


@app.post("/eval", response_model=schemas.EvalResponse)
def eval_endpoint(request: schemas.EvalRequest) -> schemas.EvalResponse:
    expr = parse_expr(request.expr, request.max_order)
    point = {}
    for name, value in request.point.items():
        try:
            var = JetVar.from_name(name)
        except ValueError as exc:
            raise JetAlgebraError(str(exc)) from exc
        try:
            point[var] = Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise JetAlgebraError(
                f"bad rational value {value!r} for {name}"
            ) from exc
    return schemas.EvalResponse(value=str(expr.evaluate(point)))
