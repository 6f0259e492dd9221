"""Command-line client for the rglab service.

Every subcommand is a thin HTTP client: by default it mounts the service
in-process (no socket involved), with ``--server URL`` it talks to a
running instance instead, and either way the bytes on the wire are the
same.  Exit codes partition outcomes for shell pipelines:

0   success / verdict PropertyT / spectrum certified
1   usage, parse, or validation error
2   infeasible parameters (word space or relator budget exhausted)
3   verdict Inconclusive
4   not enough positive relators for the requested downsampling
"""

from __future__ import annotations

import argparse
import asyncio
import sys
from pathlib import Path
from typing import Optional

import httpx

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_INCONCLUSIVE = 3
EXIT_INSUFFICIENT = 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse, but usage errors raise instead of exiting with code 2
    (2 is reserved for infeasible parameter spaces)."""

    def error(self, message):
        raise UsageError(message)


def _parse_number(text: str) -> float:
    """Density argument: plain float or a fraction like 1/3."""
    text = text.strip()
    if "/" in text:
        numerator, denominator = text.split("/", 1)
        return float(numerator) / float(denominator)
    return float(text)


def _parse_dprime(text: str):
    lowered = text.strip().lower()
    if lowered in ("none", "off"):
        return None
    if lowered == "mid":
        return "mid"
    return _parse_number(text)


def _int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part.strip()]


def _float_list(text: str) -> list[float]:
    return [_parse_number(part) for part in text.split(",") if part.strip()]


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _write_output(path: Optional[str], text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        Path(path).write_text(text)


def _call(server: Optional[str], method: str, path: str, payload=None):
    """One request against a remote server or the in-process app."""
    if server is not None:
        with httpx.Client(base_url=server.rstrip("/"), timeout=600.0) as client:
            response = client.request(method, path, json=payload)
            return response.status_code, response.json()

    from .service import create_app

    async def go():
        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(
            transport=transport, base_url="http://rglab.internal", timeout=None
        ) as client:
            response = await client.request(method, path, json=payload)
            return response.status_code, response.json()

    return asyncio.run(go())


def _error_exit(body) -> int:
    if isinstance(body, dict) and "error" in body:
        kind = body["error"].get("type", "Error")
        message = body["error"].get("message", "")
        print(f"error: {kind}: {message}", file=sys.stderr)
        if kind in ("SpaceExhausted", "OverflowError"):
            return EXIT_INFEASIBLE
        if kind == "InsufficientPositiveRelators":
            return EXIT_INSUFFICIENT
        return EXIT_USAGE
    print(f"error: {body}", file=sys.stderr)
    return EXIT_USAGE


def _cmd_sample(args) -> int:
    payload = {
        "n": args.n,
        "k": args.k,
        "d": args.d,
        "positive": args.positive,
        "seed": args.seed,
    }
    if args.count_override is not None:
        payload["count_override"] = args.count_override
    status, body = _call(args.server, "POST", "/sample", payload)
    if status != 200:
        return _error_exit(body)
    info = f"relators={body['relators']} density_eff={body['effective_density']!r}"
    if args.out is None:
        sys.stdout.write(body["presentation"])
        print(info, file=sys.stderr)
    else:
        Path(args.out).write_text(body["presentation"])
        print(info)
    return EXIT_OK


def _cmd_certify(args) -> int:
    try:
        text = _read_input(args.input)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    payload = {
        "presentation": text,
        "j": args.j,
        "dprime": args.dprime,
        "d0": args.d0,
        "base_k": args.base_k,
        "threshold": args.threshold,
    }
    status, body = _call(args.server, "POST", "/certify", payload)
    if status != 200:
        return _error_exit(body)
    _write_output(args.out, body["certificate"])
    if args.out is not None:
        print(f"verdict={body['verdict']} lambda1={body['lambda1']!r}")
    return EXIT_OK if body["verdict"] == "PropertyT" else EXIT_INCONCLUSIVE


def _cmd_fold(args) -> int:
    if args.wjplus == (args.generators is not None):
        print("error: pass exactly one of --wjplus and --generators", file=sys.stderr)
        return EXIT_USAGE
    payload: dict = {"n": args.n}
    if args.wjplus:
        if args.j is None:
            print("error: --wjplus needs --j", file=sys.stderr)
            return EXIT_USAGE
        payload["wjplus_j"] = args.j
    else:
        try:
            lines = _read_input(args.generators).splitlines()
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE
        payload["generators"] = [
            line for line in (raw.strip() for raw in lines)
            if line and not line.startswith("#")
        ]
    status, body = _call(args.server, "POST", "/fold", payload)
    if status != 200:
        return _error_exit(body)
    if args.out is None:
        sys.stdout.write(body["dump"])
    else:
        Path(args.out).write_text(body["dump"])
    print(f"index={body['index']}")
    return EXIT_OK


def _cmd_lemma_audit(args) -> int:
    payload = {"n": args.n, "j": args.j, "max_len": args.max_len}
    status, body = _call(args.server, "POST", "/lemma-audit", payload)
    if status != 200:
        return _error_exit(body)
    print(body["summary"])
    for word in body["failures"][:20]:
        print(f"counterexample: {word}", file=sys.stderr)
    return EXIT_OK if body["ok"] else EXIT_USAGE


def _cmd_spectrum(args) -> int:
    try:
        text = _read_input(args.input)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    payload = {"presentation": text, "threshold": args.threshold}
    status, body = _call(args.server, "POST", "/spectrum", payload)
    if status != 200:
        return _error_exit(body)
    if args.out is None:
        sys.stdout.write(body["csv"])
    else:
        Path(args.out).write_text(body["csv"])
    print(body["verdict_line"])
    return EXIT_OK if body["verdict"] == "Certified" else EXIT_INCONCLUSIVE


def _cmd_experiment(args) -> int:
    payload = {
        "family": args.model,
        "n": args.n,
        "d": args.d,
        "j": args.j,
        "dprime": args.dprime,
        "trials": args.trials,
        "master_seed": args.seed,
        "timing": args.timing,
    }
    if payload["dprime"] == "mid":
        print("error: experiment takes a numeric --dprime or none", file=sys.stderr)
        return EXIT_USAGE
    status, body = _call(args.server, "POST", "/experiment", payload)
    if status != 200:
        return _error_exit(body)
    if args.out is None:
        sys.stdout.write(body["csv"])
    else:
        Path(args.out).write_text(body["csv"])
    for rate in body["rates"]:
        print(
            f"rate n={rate['n']} d={rate['d']!r} -> {rate['rate']!r}",
            file=sys.stderr,
        )
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="rglab", description=__doc__.split("\n\n")[0])
    common = _Parser(add_help=False)
    common.add_argument(
        "--server",
        default=None,
        help="base URL of a running rglab service (default: run in-process)",
    )
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("sample", parents=[common], help="sample a random presentation")
    p.add_argument("--n", type=int, required=True, help="free-group rank")
    p.add_argument("--k", type=int, required=True, help="relator length")
    p.add_argument("--d", type=_parse_number, required=True,
                   help="density in (0,1); fractions like 1/3 accepted")
    p.add_argument("--seed", type=int, default=0, help="sampling seed (default 0)")
    p.add_argument("--positive", action="store_true",
                   help="positive model M+ instead of mixed-sign M")
    p.add_argument("--count-override", type=int, default=None,
                   help="exact relator count instead of floor((2n-1)^(kd))")
    p.add_argument("--out", default=None, help="presentation file (default stdout)")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("certify", parents=[common],
                       help="run the regrouping chain and certify Property (T)")
    p.add_argument("--in", dest="input", required=True,
                   help="presentation file, - for stdin")
    p.add_argument("--j", type=int, default=1, help="block length (default 1)")
    p.add_argument("--dprime", type=_parse_dprime, default=None,
                   help="downsampling density: number, 'mid', or 'none' (default)")
    p.add_argument("--d0", type=_parse_number, default=1.0 / 3.0,
                   help="assumed threshold density (default 1/3)")
    p.add_argument("--base-k", type=int, default=3,
                   help="relator length of the certified base model (default 3)")
    p.add_argument("--threshold", type=_parse_number, default=0.5,
                   help="spectral-gap threshold (default 0.5)")
    p.add_argument("--out", default=None, help="certificate file (default stdout)")
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("fold", parents=[common],
                       help="fold a generating set, print the graph and index")
    p.add_argument("--n", type=int, required=True, help="ambient free-group rank")
    p.add_argument("--wjplus", action="store_true",
                   help="use all positive length-j words as generators")
    p.add_argument("--j", type=int, default=None, help="block length for --wjplus")
    p.add_argument("--generators", default=None,
                   help="file of generator words, one per line")
    p.add_argument("--out", default=None, help="graph dump file (default stdout)")
    p.set_defaults(func=_cmd_fold)

    p = sub.add_parser("lemma-audit", parents=[common],
                       help="exhaustively audit the transversal rewriting")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--max-len", type=int, required=True,
                   help="audit all reduced words up to this length")
    p.set_defaults(func=_cmd_lemma_audit)

    p = sub.add_parser("spectrum", parents=[common],
                       help="link-graph spectrum of a triangular presentation")
    p.add_argument("--in", dest="input", required=True,
                   help="presentation file, - for stdin")
    p.add_argument("--threshold", type=_parse_number, default=0.5)
    p.add_argument("--out", default=None, help="eigenvalue CSV file (default stdout)")
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("experiment", parents=[common],
                       help="certification-rate sweep over a model grid")
    p.add_argument("--model", required=True,
                   help="model family: pos<k> or m<k>, e.g. pos3")
    p.add_argument("--n", type=_int_list, required=True,
                   help="comma-separated ranks, e.g. 10,20,50")
    p.add_argument("--d", type=_float_list, required=True,
                   help="comma-separated densities")
    p.add_argument("--j", type=int, default=1, help="block length (default 1)")
    p.add_argument("--dprime", type=_parse_dprime, default=None,
                   help="downsampling density (number or 'none', default none)")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True,
                   help="master seed (required: runs must be reproducible)")
    p.add_argument("--timing", action="store_true",
                   help="fill the ms column (off by default; breaks byte-level "
                        "reproducibility between runs)")
    p.add_argument("--out", default=None, help="CSV file (default stdout)")
    p.set_defaults(func=_cmd_experiment)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if getattr(args, "command", None) is None:
        parser.print_help()
        return EXIT_USAGE
    try:
        return args.func(args)
    except httpx.HTTPError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
