import json
from typing import Any, Dict

from fastapi import APIRouter, Depends
from fastapi.concurrency import run_in_threadpool

from ..models import SuiteConfig
from ..store import REPORT_TTL, get_store, report_key
from ..verify import run_suite
from . import analysis_seconds
from .coset import cached

router = APIRouter(tags=["verification"])


@router.post(
    "/verify",
    response_model=Dict[str, Any],
    summary="Run the property suite",
)
async def verify_route(config: SuiteConfig, store: Any = Depends(get_store)) -> Dict[str, Any]:
    key = report_key("verify", config.model_dump(mode="json"))
    hit = await cached(store, key)
    if hit is not None:
        return hit
    with analysis_seconds.labels(operation="verify").time():
        reports = await run_in_threadpool(run_suite, config)
    body = {
        "passed": all(r.passed for r in reports),
        "reports": [r.to_record() for r in reports],
    }
    await store.set(key, json.dumps(body), ex=REPORT_TTL)
    return body
