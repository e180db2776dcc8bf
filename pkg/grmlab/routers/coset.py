import json
import logging
import time
from typing import Any, Dict

from fastapi import APIRouter, Depends
from fastapi.concurrency import run_in_threadpool
from prometheus_client import Counter

from ..models import CosetScanRequest
from ..scan import exact_scan
from ..store import REPORT_TTL, get_store, report_key
from . import analysis_seconds

router = APIRouter(prefix="/coset", tags=["coset"])

cache_requests = Counter(
    "grmlab_cache_requests_total",
    "Report store lookups labeled by result (hit or miss)",
    ["result"],
)

logger = logging.getLogger("grmlab")


async def cached(store: Any, key: str) -> Any:
    data = await store.get(key)
    result = "hit" if data else "miss"
    cache_requests.labels(result=result).inc()
    logger.info(json.dumps({"event": f"cache_{result}", "key": key}))
    return json.loads(data) if data else None


@router.post(
    "/scan",
    response_model=Dict[str, Any],
    summary="Exact per-t table of the coset channel",
)
async def scan_route(request: CosetScanRequest, store: Any = Depends(get_store)) -> Dict[str, Any]:
    key = report_key("coset_scan", request.model_dump(mode="json"))
    hit = await cached(store, key)
    if hit is not None:
        return hit
    start = time.perf_counter()
    code = request.code.to_code()
    w = request.channel.to_channel(code.q)
    with analysis_seconds.labels(operation="coset_scan").time():
        result = await run_in_threadpool(exact_scan, code, w, request.grid())
    body = result.to_dict()
    await store.set(key, json.dumps(body), ex=REPORT_TTL)
    logger.info(
        json.dumps(
            {
                "event": "coset_scan",
                "q": code.q,
                "length": code.length,
                "rows": len(result.rows),
                "duration_ms": (time.perf_counter() - start) * 1000,
            }
        )
    )
    return body
