"""Command line client for the experiment service.

The client builds a query from the parsed arguments, sends it to the
HTTP service (in process by default, over the network with --server),
and prints the response document.  JSON output is canonical: sorted
keys, no whitespace, one trailing newline, byte-identical across runs
for a fixed configuration and seed.

Exit codes: 0 all assertions pass, 2 a checked property was falsified,
3 a resource guard refused the computation, 4 bad configuration."""

import argparse
import csv
import io
import json
import os
import sys

from .errors import ConfigError, NilorbError
from .experiments import SCHEMA_VERSION


class _Parser(argparse.ArgumentParser):
    """Argument errors follow the package exit-code contract."""

    def error(self, message):
        raise ConfigError(message)


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--server",
        default=None,
        help="base URL of a running service; default runs in process",
    )
    common.add_argument(
        "--format",
        choices=("json", "csv", "pretty"),
        default="json",
        help="output format (default json)",
    )
    common.add_argument("--output", default=None, help="write output to this file")
    common.add_argument(
        "--threads",
        type=int,
        default=1,
        help="worker thread knob; accepted, computations are single-threaded",
    )
    parser = _Parser(
        prog="nilorb",
        description="Exact nilpotent-orbit experiments over a root datum.",
        epilog=(
            "The NILORB_SEED environment variable overrides --seed. "
            "--threads is accepted for interface stability; every "
            "computation currently runs single-threaded."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_parser(name, help):
        return sub.add_parser(name, help=help, parents=[common])

    def typed(p, rank=True):
        p.add_argument("--type", required=True, help="Cartan type label, e.g. C2")
        if rank:
            p.add_argument(
                "--rank",
                type=int,
                default=None,
                help="rank appended to a bare type letter",
            )

    p = add_parser("orbits", "geometric nilpotent orbit table")
    typed(p)
    p.add_argument("--char", type=int, default=0, help="characteristic (default 0)")

    p = add_parser("optimal", "optimality certificate for an associated cocharacter")
    typed(p)
    p.add_argument("--orbit", type=int, required=True, help="orbit index in the table")
    p.add_argument(
        "--bound",
        default="auto",
        help="search-ball norm bound; auto uses nine times the cocharacter norm",
    )
    p.add_argument("--char", type=int, default=0)

    p = add_parser("uorbit", "dense unipotent orbit slice check")
    typed(p)
    p.add_argument("--q", type=int, required=True, help="field size (prime)")

    p = add_parser("centralizer", "centralizer Levi factorization check")
    typed(p)
    p.add_argument("--q", type=int, required=True)

    p = add_parser("rational", "rational nilpotent orbit partition")
    typed(p)
    p.add_argument("--q", type=int, required=True)

    p = add_parser("c2local", "arithmetic orbit census over F_q((t))")
    p.add_argument("--q", type=int, required=True, help="residue field size")
    p.add_argument("--prec", type=int, default=16, help="series precision")

    p = add_parser("lambda", "algebraic-logarithm sampling checks")
    typed(p)
    p.add_argument("--char", type=int, required=True)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)

    p = add_parser("artin-schreier", "solvability of y^p - y = g")
    p.add_argument("--p", type=int, required=True, help="residue characteristic")
    p.add_argument("--g", required=True, help="Laurent polynomial in t, e.g. t^-1")
    p.add_argument("--prec", type=int, default=24)

    p = add_parser("rootdatum", "print a serialized root datum")
    typed(p)

    p = add_parser("serve", "run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def _type_label(args):
    label = args.type
    if getattr(args, "rank", None) is not None:
        label = f"{label}{args.rank}"
    return label


def _request_for(args):
    """Endpoint path and query parameters for the parsed command."""
    cmd = args.command
    if cmd == "orbits":
        return "/v1/orbits", {"type": _type_label(args), "char": args.char}
    if cmd == "optimal":
        params = {
            "type": _type_label(args),
            "orbit": args.orbit,
            "char": args.char,
        }
        if args.bound != "auto":
            try:
                params["bound"] = int(args.bound)
            except ValueError:
                raise ConfigError(f"--bound must be an integer or auto, got {args.bound!r}")
        return "/v1/optimal", params
    if cmd == "uorbit":
        return "/v1/uorbit", {"type": _type_label(args), "q": args.q}
    if cmd == "centralizer":
        return "/v1/centralizer", {"type": _type_label(args), "q": args.q}
    if cmd == "rational":
        return "/v1/rational", {"type": _type_label(args), "q": args.q}
    if cmd == "c2local":
        return "/v1/c2local", {"q": args.q, "prec": args.prec}
    if cmd == "lambda":
        seed = args.seed
        env = os.environ.get("NILORB_SEED")
        if env is not None:
            try:
                seed = int(env)
            except ValueError:
                raise ConfigError(f"NILORB_SEED must be an integer, got {env!r}")
        return "/v1/lambda", {
            "type": _type_label(args),
            "char": args.char,
            "samples": args.samples,
            "seed": seed,
        }
    if cmd == "artin-schreier":
        return "/v1/artin-schreier", {"p": args.p, "g": args.g, "prec": args.prec}
    if cmd == "rootdatum":
        return f"/v1/rootdatum/{_type_label(args)}", {}
    raise ConfigError(f"unknown command {cmd!r}")


_APP = None


def _client(server):
    if server:
        import httpx

        return httpx.Client(base_url=server, timeout=600.0)
    global _APP
    if _APP is None:
        from .service import create_app

        _APP = create_app()
    from fastapi.testclient import TestClient

    return TestClient(_APP)


# -- output formatting ---------------------------------------------------


def canonical_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def _flatten(doc):
    """Depth-first (path, JSON value) pairs; dict keys sorted, list
    indices in order, so the flattening is canonical."""

    def walk(prefix, node):
        if isinstance(node, dict) and node:
            for k in sorted(node):
                yield from walk(f"{prefix}.{k}" if prefix else str(k), node[k])
        elif isinstance(node, list) and node:
            for i, v in enumerate(node):
                yield from walk(f"{prefix}.{i}" if prefix else str(i), v)
        else:
            yield prefix, json.dumps(node, sort_keys=True, separators=(",", ":"))

    yield from walk("", doc)


def to_csv(doc) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["path", "value"])
    for path, value in _flatten(doc):
        writer.writerow([path, value])
    return buf.getvalue()


def from_csv(text):
    """Rebuild the document a to_csv call flattened."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0] != ["path", "value"]:
        raise ConfigError("not a nilorb CSV document")
    root = None

    def ensure(container, key, template):
        if isinstance(container, list):
            if key == len(container):
                container.append(template)
            return container[key]
        if key not in container:
            container[key] = template
        return container[key]

    for path, raw in rows[1:]:
        value = json.loads(raw)
        keys = [int(k) if k.isdigit() else k for k in path.split(".")]
        if root is None:
            root = [] if isinstance(keys[0], int) else {}
        node = root
        for k, nxt in zip(keys, keys[1:]):
            node = ensure(node, k, [] if isinstance(nxt, int) else {})
        if isinstance(node, list):
            node.append(value)
        else:
            node[keys[-1]] = value
    return root


def _pretty_table(rows) -> str:
    cols = sorted({k for r in rows for k in r})
    grid = [cols] + [
        [json.dumps(r.get(c), sort_keys=True) if not isinstance(r.get(c), str) else r[c] for c in cols]
        for r in rows
    ]
    widths = [max(len(row[i]) for row in grid) for i in range(len(cols))]
    lines = []
    for j, row in enumerate(grid):
        lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        if j == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines)


def to_pretty(doc) -> str:
    lines = [f"{doc['command']} (schema v{doc['schema_version']})"]
    config = doc.get("config", {})
    if config:
        pairs = ", ".join(f"{k}={config[k]}" for k in sorted(config))
        lines.append(f"config: {pairs}")
    lines.append("")
    result = doc.get("result", {})
    tables = []
    for key in sorted(result):
        value = result[key]
        if (
            isinstance(value, list)
            and value
            and all(isinstance(v, dict) for v in value)
        ):
            tables.append((key, value))
        else:
            rendered = value if isinstance(value, str) else json.dumps(value, sort_keys=True)
            lines.append(f"{key}: {rendered}")
    for key, rows in tables:
        lines.append("")
        lines.append(f"{key}:")
        lines.append(_pretty_table(rows))
    return "\n".join(lines) + "\n"


def render(doc, fmt) -> str:
    if fmt == "json":
        return canonical_json(doc)
    if fmt == "csv":
        return to_csv(doc)
    return to_pretty(doc)


# -- dispatch ------------------------------------------------------------


def _emit(text, output):
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.threads < 1:
            raise ConfigError("--threads must be at least 1")
        if args.command == "serve":
            import uvicorn

            from .service import create_app

            uvicorn.run(create_app(), host=args.host, port=args.port)
            return 0
        path, params = _request_for(args)
        with _client(args.server) as client:
            response = client.get(path, params=params)
            doc = response.json()
        if response.status_code != 200:
            record = doc if "exit_code" in doc else {
                "schema_version": SCHEMA_VERSION,
                "error": "ServiceError",
                "message": json.dumps(doc, sort_keys=True),
                "exit_code": 4,
            }
            _emit(canonical_json(record), args.output)
            return int(record["exit_code"])
        _emit(render(doc, args.format), args.output)
        return 0
    except NilorbError as exc:
        record = {
            "schema_version": SCHEMA_VERSION,
            "error": type(exc).__name__,
            "message": str(exc),
            "exit_code": getattr(exc, "exit_code", 4),
        }
        sys.stdout.write(canonical_json(record))
        return int(record["exit_code"])


if __name__ == "__main__":
    sys.exit(main())
