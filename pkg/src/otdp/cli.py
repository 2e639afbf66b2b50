"""Command-line front end.

Each data command reads a JSON instance document (or knapsack flags), builds
the same request models the HTTP service accepts, and executes them in
process by default; with --server URL the identical JSON is POSTed to a
running service instead. Exactly one JSON object goes to stdout on success;
diagnostics go to stderr.

Exit codes: 0 ok, 2 bad input, 3 grid cap exceeded, 4 atom cap exceeded,
5 count disagreement, 1 unexpected failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from pydantic import BaseModel, ValidationError

from .errors import OtdpError
from .schemas import (
    ApproxRequest,
    BruteRequest,
    CountRequest,
    InstanceDocument,
    PlanRequest,
)
from .service import (
    handle_approx,
    handle_brute,
    handle_count,
    handle_exact,
    handle_plan,
)

_ENDPOINTS = {
    "exact": "/solve/exact",
    "brute": "/solve/brute",
    "approx": "/solve/approx",
    "count": "/count",
    "plan": "/plan",
}

_HANDLERS = {
    "exact": handle_exact,
    "brute": handle_brute,
    "approx": handle_approx,
    "count": handle_count,
    "plan": handle_plan,
}


def _fail(message: str, code: int) -> int:
    print(message, file=sys.stderr)
    return code


def _load_instance(path: str) -> InstanceDocument:
    with open(path, "r", encoding="utf-8") as handle:
        raw = json.load(handle)
    return InstanceDocument.model_validate(raw)


def _parse_int_list(text: str, what: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(part) for part in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad {what} list {text!r}: {exc}") from exc


def _emit(command: str, request: BaseModel, server: Optional[str]) -> int:
    """Run one request in process or against a remote service and print the result."""
    if server is None:
        response = _HANDLERS[command](request)
        print(response.model_dump_json(exclude_none=True))
        return 0

    import httpx

    url = server.rstrip("/") + _ENDPOINTS[command]
    reply = httpx.post(url, json=request.model_dump(mode="json"), timeout=300.0)
    if reply.status_code == 200:
        body = {k: v for k, v in reply.json().items() if v is not None}
        print(json.dumps(body))
        return 0
    try:
        detail = reply.json()
    except ValueError:
        detail = {}
    message = detail.get("message", reply.text)
    code = detail.get("exit_code", 2 if reply.status_code == 422 else 1)
    return _fail(f"server error: {message}", code)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="otdp",
        description=(
            "Optimal transport between a product distribution and a two-point "
            "target: exact DP solver, brute-force oracle, lattice-rounding "
            "approximation, and knapsack counting via the transport oracle."
        ),
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--server",
        metavar="URL",
        default=None,
        help="send the request to a running otdp service instead of solving in process",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_exact = sub.add_parser(
        "exact", parents=[common], help="exact transport value via the DP solver"
    )
    p_exact.add_argument("instance", help="path to an instance JSON document")

    p_brute = sub.add_parser(
        "brute", parents=[common], help="transport value by explicit atom enumeration"
    )
    p_brute.add_argument("instance")
    p_brute.add_argument("--p", type=float, default=None, help="cost exponent (default: instance p or 2)")
    p_brute.add_argument("--mode", choices=["exact", "float"], default="exact")
    p_brute.add_argument("--cap", type=int, default=None, help="atom cap (default 2^20)")

    p_approx = sub.add_parser(
        "approx", parents=[common], help="eps-accurate value via lattice rounding"
    )
    p_approx.add_argument("instance")
    p_approx.add_argument("--eps", required=True, help="positive rational tolerance, e.g. 1/10")

    p_count = sub.add_parser(
        "count", parents=[common], help="count knapsack subsets with weight <= capacity"
    )
    p_count.add_argument("--weights", required=True, help="comma-separated nonnegative integers (may be empty)")
    p_count.add_argument("--capacity", required=True, type=int)
    p_count.add_argument("--via", choices=["ot", "dp", "both"], default="both")
    p_count.add_argument("--noise", default=None, help="perturb the oracle by +-this rational magnitude")

    p_plan = sub.add_parser(
        "plan", parents=[common], help="optimal-plan mass split for one atom"
    )
    p_plan.add_argument("instance")
    p_plan.add_argument(
        "--atom",
        required=True,
        help="comma-separated 0-based support index per marginal, e.g. 0,1,0",
    )

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    return parser


def _build_request(args: argparse.Namespace) -> BaseModel:
    if args.command == "exact":
        return _load_instance(args.instance)
    if args.command == "brute":
        return BruteRequest(
            instance=_load_instance(args.instance),
            p=args.p,
            mode=args.mode,
            cap=args.cap,
        )
    if args.command == "approx":
        return ApproxRequest(instance=_load_instance(args.instance), eps=args.eps)
    if args.command == "count":
        return CountRequest(
            weights=_parse_int_list(args.weights, "weights"),
            capacity=args.capacity,
            via=args.via,
            noise=args.noise,
        )
    if args.command == "plan":
        return PlanRequest(
            instance=_load_instance(args.instance),
            atom=_parse_int_list(args.atom, "atom index"),
        )
    raise AssertionError(f"unhandled command {args.command}")


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "serve":
        import uvicorn

        uvicorn.run("otdp.service:app", host=args.host, port=args.port)
        return 0

    try:
        request = _build_request(args)
    except (OSError, json.JSONDecodeError) as exc:
        return _fail(f"cannot read instance: {exc}", 2)
    except (ValidationError, argparse.ArgumentTypeError, ValueError) as exc:
        return _fail(f"bad input: {exc}", 2)

    try:
        return _emit(args.command, request, args.server)
    except OtdpError as exc:
        return _fail(f"{type(exc).__name__}: {exc}", exc.exit_code)
    except ValidationError as exc:
        return _fail(f"bad input: {exc}", 2)
    except Exception as exc:  # noqa: BLE001 - last-resort CLI guard
        return _fail(f"unexpected failure: {type(exc).__name__}: {exc}", 1)


if __name__ == "__main__":
    sys.exit(main())
