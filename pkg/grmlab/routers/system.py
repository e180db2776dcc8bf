from typing import Any, Dict

from fastapi import APIRouter, Depends, status
from fastapi.responses import JSONResponse
from fastapi.responses import Response as PrometheusResponse
from prometheus_client import CONTENT_TYPE_LATEST, generate_latest

from .. import __version__
from ..check_registry import list_checks
from ..config import get_settings
from ..gf import MAX_FIELD_SIZE
from ..store import get_store

router = APIRouter(tags=["system"])


@router.get(
    "/health",
    response_model=Dict[str, Any],
    summary="Service status and supported field sizes",
)
def health() -> JSONResponse:
    return JSONResponse(
        {"status": "ok", "version": __version__, "max_field_size": MAX_FIELD_SIZE},
        status_code=status.HTTP_200_OK,
    )


@router.get(
    "/ready",
    response_model=Dict[str, Any],
    summary="Report store reachable and property checks registered",
)
async def ready(store: Any = Depends(get_store)) -> JSONResponse:
    checks = list_checks()
    body: Dict[str, Any] = {
        "ready": False,
        "checks": len(checks),
        "exact_budget": get_settings().exact_budget,
    }
    try:
        await store.ping()
    except Exception:
        return JSONResponse(body, status_code=status.HTTP_503_SERVICE_UNAVAILABLE)
    body["ready"] = bool(checks)
    code = status.HTTP_200_OK if checks else status.HTTP_503_SERVICE_UNAVAILABLE
    return JSONResponse(body, status_code=code)


@router.get(
    "/metrics",
    summary="Prometheus metrics, including per-analysis timings",
)
def metrics() -> PrometheusResponse:
    return PrometheusResponse(content=generate_latest(), media_type=CONTENT_TYPE_LATEST)
