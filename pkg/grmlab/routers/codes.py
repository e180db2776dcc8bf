from fastapi import APIRouter, Query
from fastapi.concurrency import run_in_threadpool

from ..gf import field_of_size
from ..grm import PunctureCheck, puncture_check, rate
from ..models import PunctureRequest, PunctureResponse, RateResponse
from ..numeric import format_number
from . import analysis_seconds

router = APIRouter(prefix="/codes", tags=["codes"])


@router.get(
    "/rate",
    response_model=RateResponse,
    summary="Exact GRM rate with its normal approximation",
)
def rate_route(
    q: int = Query(..., ge=2), r: int = Query(..., ge=0), m: int = Query(..., ge=1)
) -> RateResponse:
    with analysis_seconds.labels(operation="rate").time():
        field_of_size(q)
        rep = rate(q, r, m)
    return RateResponse(
        q=q,
        r=r,
        m=m,
        exact=str(format_number(rep.exact)),
        gaussian=rep.gaussian,
        be_bound=rep.be_bound,
        error=rep.error,
    )


@router.post(
    "/puncture-check",
    response_model=PunctureResponse,
    summary="Puncture RM_q(r, m) to its first q^(m-k) positions",
)
async def puncture_route(request: PunctureRequest) -> PunctureResponse:
    with analysis_seconds.labels(operation="puncture").time():
        spec = field_of_size(request.q)
        rep: PunctureCheck = await run_in_threadpool(
            puncture_check, spec, request.r, request.m, request.k
        )
    return PunctureResponse(
        q=rep.q,
        r=rep.r,
        m=rep.m,
        k=rep.k,
        row_space_equal=rep.row_space_equal,
        expected_multiplicity=rep.expected_multiplicity,
        multiplicities={str(k): v for k, v in rep.multiplicities.items()},
        passed=rep.passed,
    )
