"""Thin command-line client of the service.

Each subcommand builds a request model, obtains the matching response
either in-process (default) or from a running service (``--url``),
prints the response's report verbatim, and exits with the response's
exit code.  Reports are deterministic, so scripted use can compare them
byte for byte.

Exit codes: 0 definite/success, 1 bound violation or verdict mismatch,
2 usage or input error, 3 the classification is genuinely unknown.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .service import handlers, models


def _read_file(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as err:
        raise ValueError(f"cannot read {path}: {err}") from err


def _parse_matrix(raw: str) -> list[list[int]]:
    try:
        matrix = json.loads(raw)
    except json.JSONDecodeError as err:
        raise ValueError(f"matrix must be JSON like [[2]]: {err}") from err
    if not isinstance(matrix, list) or not all(
        isinstance(row, list) and all(isinstance(x, int) for x in row) for row in matrix
    ):
        raise ValueError("matrix must be a list of integer rows")
    return matrix


_ROUTES = {
    models.ClassifyRequest: ("/v1/classify", handlers.handle_classify),
    models.ChainRequest: ("/v1/chain", handlers.handle_chain),
    models.SpStabRequest: ("/v1/spstab", handlers.handle_spstab),
    models.OracleRequest: ("/v1/oracle", handlers.handle_oracle),
    models.ExampleRequest: ("/v1/example", handlers.handle_example),
}


def _dispatch(req, url: str | None) -> int:
    path, handler = _ROUTES[type(req)]
    if url is None:
        response = handler(req)
        report, code = response.report, response.exit_code
    else:
        import httpx

        http = httpx.post(url.rstrip("/") + path, json=req.model_dump(), timeout=600.0)
        if http.status_code == 422:
            detail = http.json().get("detail", {})
            message = detail.get("message", http.text) if isinstance(detail, dict) else str(detail)
            print(f"error: {message}", file=sys.stderr)
            return 2
        http.raise_for_status()
        body = http.json()
        report, code = body["report"], body["exit_code"]
    print(report, end="")
    return code


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="scoh",
        description="image-chain stabilization and strong co-Hopficity toolkit",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def add_url(p):
        p.add_argument("--url", help="base URL of a running service; default runs in-process")

    p = sub.add_parser("classify", help="three-valued verdicts for a descriptor file")
    p.add_argument("file")
    add_url(p)

    p = sub.add_parser("chain", help="image-chain cardinalities of a finite endomorphism")
    p.add_argument("file")
    p.add_argument("--matrix", required=True, help="endomorphism matrix as JSON, e.g. [[2]]")
    add_url(p)

    p = sub.add_parser("spstab", help="closed-form stabilization of a multiplication")
    p.add_argument("file")
    p.add_argument("--alpha", required=True, help="element literal, e.g. 5 or 0;2=3")
    add_url(p)

    p = sub.add_parser("oracle", help="exhaustive exponent-bound sweep over p-groups")
    p.add_argument("--max-card", type=int, required=True)
    p.add_argument("--primes", required=True, help="comma-separated primes, e.g. 2,3")
    p.add_argument("--cap", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)
    add_url(p)

    p = sub.add_parser("example", help="bundled construction: expected vs computed verdicts")
    p.add_argument("id", choices=("ex0", "ex1", "ex3"))
    add_url(p)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return top


def _request_for(args) -> object:
    if args.command == "classify":
        return models.ClassifyRequest(descriptor=_read_file(args.file))
    if args.command == "chain":
        return models.ChainRequest(
            descriptor=_read_file(args.file), matrix=_parse_matrix(args.matrix)
        )
    if args.command == "spstab":
        return models.SpStabRequest(descriptor=_read_file(args.file), alpha=args.alpha)
    if args.command == "oracle":
        try:
            primes = [int(p) for p in args.primes.split(",") if p.strip()]
        except ValueError as err:
            raise ValueError(f"bad --primes list: {err}") from err
        return models.OracleRequest(
            max_card=args.max_card, primes=primes, cap=args.cap, workers=args.workers
        )
    if args.command == "example":
        return models.ExampleRequest(id=args.id)
    raise AssertionError(args.command)


def run(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "serve":
        import uvicorn

        from .service.app import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0
    try:
        req = _request_for(args)
        return _dispatch(req, args.url)
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
