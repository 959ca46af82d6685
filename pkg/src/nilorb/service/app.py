"""HTTP service exposing the experiment runners.

Every endpoint wraps one runner from nilorb.experiments and returns
the same envelope the command line prints.  Package errors map onto
HTTP statuses while keeping the exit-code contract in the body, so a
thin client can exit with the right code without parsing prose."""

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse

from .. import experiments
from ..errors import FalsifiedError, GuardError, NilorbError
from .schemas import Envelope, ErrorRecord, Health

_HTTP_BY_EXIT = {2: 409, 3: 422, 4: 400}


def _http_status(exc: NilorbError) -> int:
    return _HTTP_BY_EXIT.get(getattr(exc, "exit_code", 4), 400)


def create_app() -> FastAPI:
    app = FastAPI(
        title="nilorb service",
        description="Exact nilpotent-orbit experiments over a root datum.",
    )

    @app.exception_handler(NilorbError)
    async def _nilorb_error(request: Request, exc: NilorbError):
        record = ErrorRecord(
            schema_version=experiments.SCHEMA_VERSION,
            error=type(exc).__name__,
            message=str(exc),
            exit_code=getattr(exc, "exit_code", 4),
        )
        return JSONResponse(status_code=_http_status(exc), content=record.model_dump())

    @app.get("/v1/health", response_model=Health)
    def health():
        return Health(status="ok", schema_version=experiments.SCHEMA_VERSION)

    @app.get("/v1/orbits", response_model=Envelope)
    def orbits(type: str, char: int = 0):
        return experiments.run_orbits(type, char)

    @app.get("/v1/optimal", response_model=Envelope)
    def optimal(
        type: str,
        orbit: int,
        bound: int | None = None,
        char: int = 0,
    ):
        return experiments.run_optimal(type, orbit, bound, char)

    @app.get("/v1/uorbit", response_model=Envelope)
    def uorbit(type: str, q: int):
        return experiments.run_uorbit(type, q)

    @app.get("/v1/centralizer", response_model=Envelope)
    def centralizer(type: str, q: int):
        return experiments.run_centralizer(type, q)

    @app.get("/v1/rational", response_model=Envelope)
    def rational(type: str, q: int):
        return experiments.run_rational(type, q)

    @app.get("/v1/c2local", response_model=Envelope)
    def c2local(q: int, prec: int = 16):
        return experiments.run_c2local(q, prec)

    @app.get("/v1/lambda", response_model=Envelope)
    def lambda_map(
        type: str,
        char: int,
        samples: int = 200,
        seed: int = 0,
    ):
        return experiments.run_lambda(type, char, samples, seed)

    @app.get("/v1/artin-schreier", response_model=Envelope)
    def artin_schreier(
        p: int,
        g: str = Query(..., description="Laurent polynomial in t, e.g. t^-1"),
        prec: int = 24,
    ):
        return experiments.run_artin_schreier(p, g, prec)

    @app.get("/v1/rootdatum/{label}", response_model=Envelope)
    def rootdatum(label: str):
        return experiments.run_rootdatum(label)

    return app
