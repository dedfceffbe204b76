"""FastAPI application exposing the compiler, audits, and the experiment runner."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import InternalCheckError, PwlnetError
from . import schemas
from .handlers import ROUTES, handle_health


def create_app() -> FastAPI:
    application = FastAPI(
        title="pwlnet",
        version=__version__,
        description=(
            "Exact compilation of ReLU networks with clamped outputs into "
            "explicit piecewise-linear (piece, region) form, dominance audits "
            "of the results, and seeded region-counting experiments."
        ),
    )

    @application.exception_handler(InternalCheckError)
    async def internal_error(_: Request, exc: InternalCheckError) -> JSONResponse:
        return JSONResponse(status_code=500, content={"detail": str(exc)})

    @application.exception_handler(PwlnetError)
    async def input_error(_: Request, exc: PwlnetError) -> JSONResponse:
        return JSONResponse(status_code=422, content={"detail": str(exc)})

    @application.get("/health", response_model=schemas.HealthResponse)
    def health() -> schemas.HealthResponse:
        return handle_health()

    def register(path: str, request_cls, response_cls, handler) -> None:
        def endpoint(req):
            return handler(req)

        # resolved classes, not strings: FastAPI reads these to build the route
        endpoint.__annotations__ = {"req": request_cls, "return": response_cls}
        application.post(path, response_model=response_cls, name=handler.__name__)(endpoint)

    for path, (request_cls, response_cls, handler) in ROUTES.items():
        register(path, request_cls, response_cls, handler)

    return application


app = create_app()
