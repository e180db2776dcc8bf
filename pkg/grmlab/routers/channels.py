from typing import Any, Dict

from fastapi import APIRouter
from fastapi.concurrency import run_in_threadpool

from .. import channel as ch
from ..models import ChannelRequest, SymmetryResponse
from ..numeric import format_number
from . import analysis_seconds

router = APIRouter(prefix="/channels", tags=["channels"])


@router.post(
    "/overlap",
    response_model=Dict[str, Any],
    summary="Overlap matrix, PICs and discrepancy of a channel",
)
async def overlap_route(request: ChannelRequest) -> Dict[str, Any]:
    with analysis_seconds.labels(operation="overlap").time():
        w = request.channel.to_channel()
        rep = await run_in_threadpool(ch.overlap, w)
    body = rep.to_dict()
    body["lambda_min"] = rep.lambda_min
    body["capacity"] = ch.capacity_uniform(w)
    return body


@router.post(
    "/symmetry",
    response_model=SymmetryResponse,
    summary="Symmetry group and the trace constraint",
)
async def symmetry_route(request: ChannelRequest) -> SymmetryResponse:
    with analysis_seconds.labels(operation="symmetry").time():
        w = request.channel.to_channel()
        group = await run_in_threadpool(ch.symmetry_group, w)
        rep = ch.trace_constraint_check(w, group)
    return SymmetryResponse(
        order=group.order,
        elements=[list(s.images) for s in group.elements],
        transitivity=rep.transitivity.value,
        trace=format_number(rep.trace),
        delta=format_number(rep.delta),
        trace_case=rep.case.value,
        distance=format_number(rep.distance),
        bound=format_number(rep.bound),
        inequality_holds=rep.inequality_holds,
    )
