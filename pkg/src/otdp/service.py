"""HTTP service exposing the solvers, and the handler functions behind it.

The handlers are plain functions from request models to response models; the
FastAPI routes and the CLI's in-process mode both call them, so the two
front ends cannot drift apart. Solver errors surface as HTTP 422 bodies that
carry the same exit code the CLI would use.
"""

from __future__ import annotations

from fractions import Fraction

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import brute_oracle, knapsack
from .approx import ot_approx
from .dp_solver import ot_exact, plan_descriptor, plan_query
from .errors import (
    BadToleranceError,
    CountMismatchError,
    NotAnAtomError,
    OtdpError,
)
from .model import parse_rational
from .schemas import (
    ApproxRequest,
    BruteRequest,
    CountRequest,
    ErrorResponse,
    InstanceDocument,
    PlanRequest,
    PlanResponse,
    ResultDocument,
    exact_result,
)


def handle_exact(doc: InstanceDocument) -> ResultDocument:
    mu, target = doc.to_model()
    result = ot_exact(mu, target)
    return exact_result(
        result.value,
        mode="exact",
        grid_N=result.grid_points,
        minkowski_size=result.minkowski_points,
        n_t=result.critical_index,
    )


def handle_brute(req: BruteRequest) -> ResultDocument:
    mu, target = req.instance.to_model()
    p = req.p if req.p is not None else req.instance.p
    if p < 1:
        raise OtdpError(f"cost exponent must satisfy p >= 1, got {p}")
    if float(p).is_integer():
        p = int(p)
    result = brute_oracle.ot_closed_form(mu, target, p=p, mode=req.mode, cap=req.cap)
    if req.mode == brute_oracle.EXACT:
        return exact_result(result.value, mode="exact")
    return ResultDocument(value_decimal=result.value, mode="float")


def handle_approx(req: ApproxRequest) -> ResultDocument:
    mu, target = req.instance.to_model()
    eps = parse_rational(req.eps)
    if eps <= 0:
        raise BadToleranceError(f"eps must be positive, got {req.eps!r}")
    result, report = ot_approx(mu, target, eps)
    return exact_result(
        result.value,
        mode="approx",
        grid_N=result.grid_points,
        minkowski_size=result.minkowski_points,
        n_t=result.critical_index,
        error_bound=str(report.guaranteed_error),
    )


def handle_count(req: CountRequest) -> ResultDocument:
    inst = knapsack.KnapsackInstance(weights=req.weights, capacity=req.capacity)
    factory = None
    if req.noise is not None:
        magnitude = parse_rational(req.noise)
        if magnitude < 0:
            raise BadToleranceError(f"noise magnitude must be nonnegative, got {req.noise!r}")

        def factory(mu, y1, y2):
            return knapsack.with_adversarial_noise(
                knapsack.exact_oracle_factory(mu, y1, y2), magnitude
            )

    if req.via == "dp":
        return exact_result(Fraction(knapsack.count_dp(inst)), mode="exact")
    via_ot = knapsack.count_via_ot(inst, oracle_factory=factory)
    if req.via == "both":
        direct = knapsack.count_dp(inst)
        if direct != via_ot.count:
            raise CountMismatchError(
                f"oracle count {via_ot.count} != direct count {direct}"
            )
    return exact_result(
        Fraction(via_ot.count), mode="exact", oracle_calls=via_ot.oracle_calls
    )


def handle_plan(req: PlanRequest) -> PlanResponse:
    mu, target = req.instance.to_model()
    if len(req.atom) != mu.dimension:
        raise NotAnAtomError(
            f"atom needs {mu.dimension} indices, got {len(req.atom)}"
        )
    point = []
    prob = Fraction(1)
    for k, (marginal, index) in enumerate(zip(mu.marginals, req.atom)):
        if not 0 <= index < len(marginal):
            raise NotAnAtomError(
                f"marginal {k} has {len(marginal)} support points; index {index} is out of range"
            )
        point.append(marginal.support[index])
        prob *= marginal.probs[index]
    desc = plan_descriptor(mu, target)
    pi1, pi2 = plan_query(desc, point, prob, target)
    return PlanResponse(
        threshold=str(desc.threshold),
        fraction=str(desc.fraction),
        pi1=str(pi1),
        pi2=str(pi2),
    )


app = FastAPI(
    title="otdp",
    description=(
        "Exact, brute-force, and approximate optimal transport between a "
        "product distribution and a two-point target, plus knapsack counting "
        "through the transport oracle."
    ),
)


@app.exception_handler(OtdpError)
async def otdp_error_handler(_: Request, exc: OtdpError) -> JSONResponse:
    body = ErrorResponse(
        error=type(exc).__name__, message=str(exc), exit_code=exc.exit_code
    )
    return JSONResponse(status_code=422, content=body.model_dump())


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/solve/exact", response_model=ResultDocument, response_model_exclude_none=True)
def solve_exact(doc: InstanceDocument) -> ResultDocument:
    return handle_exact(doc)


@app.post("/solve/brute", response_model=ResultDocument, response_model_exclude_none=True)
def solve_brute(req: BruteRequest) -> ResultDocument:
    return handle_brute(req)


@app.post("/solve/approx", response_model=ResultDocument, response_model_exclude_none=True)
def solve_approx(req: ApproxRequest) -> ResultDocument:
    return handle_approx(req)


@app.post("/count", response_model=ResultDocument, response_model_exclude_none=True)
def count(req: CountRequest) -> ResultDocument:
    return handle_count(req)


@app.post("/plan", response_model=PlanResponse)
def plan(req: PlanRequest) -> PlanResponse:
    return handle_plan(req)
