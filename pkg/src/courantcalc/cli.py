"""Command-line client for the verification service.

Every subcommand builds one request and sends it to the service: by default
the FastAPI app is mounted in-process (no server needed); with ``--server
URL`` the same requests go over the network.

Exit codes: 0 all checks pass, 1 a mathematical check failed (or a witness
search was undecided), 2 malformed input.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from pathlib import Path

import httpx

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2


def _load_structure_arg(text: str):
    """A preset name, a path to a JSON file, or inline JSON."""
    path = Path(text)
    if path.exists():
        return json.loads(path.read_text())
    if text.lstrip().startswith("{"):
        return json.loads(text)
    return text  # preset name; the service validates it


def _load_json_arg(text: str):
    path = Path(text)
    if path.exists():
        return json.loads(path.read_text())
    return json.loads(text)


class ServiceClient:
    def __init__(self, server: str | None = None):
        self.server = server

    def post(self, endpoint: str, payload: dict) -> tuple[int, dict]:
        if self.server:
            response = httpx.post(f"{self.server.rstrip('/')}{endpoint}",
                                  json=payload, timeout=None)
            return response.status_code, response.json()

        async def _go():
            from .service.app import app

            transport = httpx.ASGITransport(app=app)
            async with httpx.AsyncClient(transport=transport,
                                         base_url="http://courantcalc",
                                         timeout=None) as client:
                response = await client.post(endpoint, json=payload)
                return response.status_code, response.json()

        return asyncio.run(_go())


def _emit(payload: dict, fmt: str):
    if fmt == "json":
        print(json.dumps(payload, sort_keys=True, separators=(",", ":")))
        return
    _emit_text(payload)


def _emit_text(payload: dict, indent: str = ""):
    for key, value in payload.items():
        if value is None:
            continue
        if isinstance(value, dict):
            print(f"{indent}{key}:")
            _emit_text(value, indent + "  ")
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            print(f"{indent}{key}:")
            for item in value:
                name = item.get("name") or item.get("axiom") or ""
                status = item.get("passed")
                if status is not None:
                    mark = "pass" if status else "FAIL"
                    extra = item.get("details") or item.get("witness") or ""
                    print(f"{indent}  [{mark}] {name}"
                          + (f"  {extra}" if extra else ""))
                else:
                    print(f"{indent}  {json.dumps(item, sort_keys=True)}")
        else:
            print(f"{indent}{key}: {value}")


def _check_exit(status: int, body: dict, ok_keys=("passed", "ok")) -> int:
    if status >= 400:
        return EXIT_INPUT_ERROR
    for key in ok_keys:
        if key in body:
            return EXIT_OK if body[key] else EXIT_CHECK_FAILED
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--server", help="remote service URL (default: in-process)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    parser = argparse.ArgumentParser(
        prog="courantcalc",
        description="Exact symbolic calculus for Courant algebroids",
        parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    def cmd(name, **kwargs):
        p = sub.add_parser(name, parents=[common], **kwargs)
        return p

    p = cmd("check-axioms", help="verify C1-C4, A1, A2 for a structure")
    p.add_argument("structure")
    p.add_argument("--seed", type=int, default=20240401)
    p.add_argument("--samples", type=int, default=3)

    p = cmd("bracket", help="Dorfman bracket of two sections")
    p.add_argument("structure")
    p.add_argument("--a", required=True, help="JSON list of polynomial strings")
    p.add_argument("--b", required=True)

    p = cmd("d", help="differential of a cochain")
    p.add_argument("structure")
    p.add_argument("--cochain", required=True)

    p = cmd("cup", help="cup product of two cochains")
    p.add_argument("structure")
    p.add_argument("--omega", required=True)
    p.add_argument("--tau", required=True)

    p = cmd("evaluate", help="evaluate a cochain on sections")
    p.add_argument("structure")
    p.add_argument("--cochain", required=True)
    p.add_argument("--sections", required=True,
                   help="JSON list of sections (lists of polynomial strings)")

    p = cmd("symbol", help="symbol of a cochain")
    p.add_argument("structure")
    p.add_argument("--cochain", required=True)
    p.add_argument("--sections", default="[]")

    p = cmd("curvature", help="curvature of a connection")
    p.add_argument("structure")
    p.add_argument("--connection", required=True, help="connection JSON (file or inline)")

    p = cmd("bianchi", help="verify the Bianchi identity for a connection")
    p.add_argument("structure")
    p.add_argument("--connection", required=True)

    p = cmd("modular", help="intrinsic modular cocycle")
    p.add_argument("structure")

    p = cmd("unimodular", help="exactness witness for the modular cocycle")
    p.add_argument("structure")
    p.add_argument("--bound", type=int, default=2)

    p = cmd("chern", help="Chern form of a connection")
    p.add_argument("structure")
    p.add_argument("--connection", required=True)
    p.add_argument("--k", type=int, default=1)

    p = cmd("chern-simons", help="Chern-Simons form of a connection path")
    p.add_argument("structure")
    p.add_argument("--path", help="path JSON with t-dependent coefficients")
    p.add_argument("--conn0", help="start connection JSON (straight line)")
    p.add_argument("--conn1", help="end connection JSON (straight line)")
    p.add_argument("--k", type=int, default=1)

    p = cmd("secondary", help="intrinsic secondary class representative")
    p.add_argument("structure")
    p.add_argument("--linear", required=True, help="linear connection JSON (n x r x r)")
    p.add_argument("--metric", required=True, help="positive definite metric JSON")
    p.add_argument("--k", type=int, default=1)

    p = cmd("cohomology", help="point cohomology, or bounded certification")
    p.add_argument("structure")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--cochain", help="certify this cochain instead of computing dims")
    p.add_argument("--bound", type=int, default=2)

    p = cmd("dirac-check", help="verify a Dirac structure candidate")
    p.add_argument("structure")
    p.add_argument("--frame", required=True, help='frame JSON {"sections": [[...]]}')

    p = cmd("restrict", help="restrict a cochain to a Dirac structure")
    p.add_argument("structure")
    p.add_argument("--cochain", required=True)
    p.add_argument("--frame", required=True)

    p = cmd("selftest", help="run the invariant suite on the bundled corpus")
    p.add_argument("--seed", type=int, default=20240401)

    return parser


def _request_for(args) -> tuple[str, dict, tuple[str, ...]]:
    """Map parsed arguments to (endpoint, payload, ok-ness keys)."""
    command = args.command
    if command == "selftest":
        return "/v1/selftest", {"seed": args.seed}, ("passed",)
    structure = _load_structure_arg(args.structure)
    if command == "check-axioms":
        return ("/v1/check-axioms",
                {"structure": structure, "seed": args.seed, "samples": args.samples},
                ("passed",))
    if command == "bracket":
        return ("/v1/bracket",
                {"structure": structure, "a": json.loads(args.a), "b": json.loads(args.b)},
                ())
    if command == "d":
        return "/v1/d", {"structure": structure, "cochain": args.cochain}, ()
    if command == "cup":
        return ("/v1/cup",
                {"structure": structure, "omega": args.omega, "tau": args.tau}, ())
    if command == "evaluate":
        return ("/v1/evaluate",
                {"structure": structure, "cochain": args.cochain,
                 "sections": json.loads(args.sections)}, ())
    if command == "symbol":
        return ("/v1/symbol",
                {"structure": structure, "cochain": args.cochain,
                 "sections": json.loads(args.sections)}, ())
    if command == "curvature":
        return ("/v1/curvature",
                {"structure": structure, "connection": _load_json_arg(args.connection)},
                ())
    if command == "bianchi":
        return ("/v1/bianchi",
                {"structure": structure, "connection": _load_json_arg(args.connection)},
                ("ok",))
    if command == "modular":
        return "/v1/modular", {"structure": structure}, ("closed",)
    if command == "unimodular":
        return ("/v1/unimodular", {"structure": structure, "bound": args.bound},
                ("ok",))
    if command == "chern":
        return ("/v1/chern",
                {"structure": structure, "connection": _load_json_arg(args.connection),
                 "k": args.k}, ("closed",))
    if command == "chern-simons":
        payload = {"structure": structure, "k": args.k}
        if args.path:
            payload["path"] = _load_json_arg(args.path)
        if args.conn0:
            payload["conn0"] = _load_json_arg(args.conn0)
        if args.conn1:
            payload["conn1"] = _load_json_arg(args.conn1)
        return "/v1/chern-simons", payload, ("transgression_ok",)
    if command == "secondary":
        return ("/v1/secondary",
                {"structure": structure, "linear": _load_json_arg(args.linear),
                 "metric": _load_json_arg(args.metric), "k": args.k}, ())
    if command == "cohomology":
        payload = {"structure": structure, "k": args.k, "bound": args.bound}
        if args.cochain:
            payload["cochain"] = args.cochain
        return "/v1/cohomology", payload, ()
    if command == "dirac-check":
        return ("/v1/dirac-check",
                {"structure": structure, "frame": _load_json_arg(args.frame)},
                ("ok",))
    if command == "restrict":
        return ("/v1/restrict",
                {"structure": structure, "cochain": args.cochain,
                 "frame": _load_json_arg(args.frame)}, ())
    raise SystemExit(f"unknown command {command!r}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        endpoint, payload, ok_keys = _request_for(args)
    except (json.JSONDecodeError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    client = ServiceClient(server=args.server)
    try:
        status, body = client.post(endpoint, payload)
    except httpx.HTTPError as exc:
        print(f"service error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    _emit(body, args.format)
    return _check_exit(status, body, ok_keys or ("passed", "ok"))


if __name__ == "__main__":
    sys.exit(main())
