import logging
from typing import Any, Callable

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__
from .config import get_settings
from .exceptions import AppError
from .logging_config import configure_logging
from .routers.channels import router as channels_router
from .routers.codes import router as codes_router
from .routers.coset import router as coset_router
from .routers.system import router as system_router
from .routers.verification import router as verification_router

settings = get_settings()

logger = configure_logging(settings.log_level)

app = FastAPI(title="grmlab", version=__version__)


@app.get("/", response_model=dict)
async def home() -> dict:
    return {"message": "Generalized Reed-Muller code laboratory", "version": __version__}


@app.middleware("http")
async def catch_exceptions(request: Request, call_next: Callable[[Request], Any]) -> Any:
    try:
        return await call_next(request)
    except AppError as ae:
        logger.info(f"{ae.code}: {ae.message}")
        return JSONResponse(status_code=ae.status_code, content=ae.detail)
    except Exception:
        logger.exception("Unhandled error")
        return JSONResponse(
            status_code=500,
            content={
                "code": "internal_error",
                "message": "An unexpected error occurred",
            },
        )


app.include_router(codes_router)
app.include_router(channels_router)
app.include_router(coset_router)
app.include_router(verification_router)
app.include_router(system_router)
