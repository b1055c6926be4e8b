"""FastAPI wiring over the handlers."""

from __future__ import annotations

from fastapi import FastAPI
from fastapi.responses import JSONResponse

from .. import __version__
from ..parser import ParseError
from . import handlers, models

app = FastAPI(
    title="scoh",
    version=__version__,
    description=(
        "Image-chain stabilization indices and strong co-Hopficity verdicts "
        "for abelian groups"
    ),
)


@app.exception_handler(ParseError)
async def _parse_error(_, exc: ParseError):
    return JSONResponse(
        status_code=422,
        content={"detail": {"message": exc.message, "line": exc.line, "col": exc.col}},
    )


@app.exception_handler(ValueError)
async def _value_error(_, exc: ValueError):
    return JSONResponse(
        status_code=422,
        content={"detail": {"message": str(exc), "line": None, "col": None}},
    )


@app.get("/health")
def health():
    return {"status": "ok", "version": __version__}


@app.post("/v1/classify", response_model=models.ClassifyResponse)
def classify(req: models.ClassifyRequest):
    return handlers.handle_classify(req)


@app.post("/v1/chain", response_model=models.ChainResponse)
def chain(req: models.ChainRequest):
    return handlers.handle_chain(req)


@app.post("/v1/spstab", response_model=models.SpStabResponse)
def spstab(req: models.SpStabRequest):
    return handlers.handle_spstab(req)


@app.post("/v1/oracle", response_model=models.OracleResponse)
def oracle(req: models.OracleRequest):
    return handlers.handle_oracle(req)


@app.post("/v1/example", response_model=models.ExampleResponse)
def example(req: models.ExampleRequest):
    return handlers.handle_example(req)
