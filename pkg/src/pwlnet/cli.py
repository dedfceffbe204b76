"""Command line client for the service.

By default every subcommand builds the same request models the HTTP API
uses and dispatches them to the in-process handlers, so no server is
needed for file-based work. With --server URL the identical requests go
over HTTP instead. Exit codes: 0 success, 1 usage or input problem, 2
internal invariant failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from pydantic import BaseModel, ValidationError

from .errors import InternalCheckError, PwlnetError
from .network import parse_network
from .rationals import format_decimal, parse_rational
from .service import schemas
from .service.handlers import ROUTES

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INTERNAL = 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # exit 1 on usage problems, not argparse's 2
        raise _UsageError(message)


class ServiceClient:
    """Dispatches request models locally or to a remote server."""

    def __init__(self, server: str | None, http_client=None) -> None:
        self.server = server
        self._http = http_client

    def call(self, path: str, request: BaseModel) -> BaseModel:
        request_cls, response_cls, handler = ROUTES[path]
        assert isinstance(request, request_cls)
        if self.server is None and self._http is None:
            return handler(request)
        if self._http is None:
            import httpx

            self._http = httpx.Client(base_url=self.server, timeout=None)
        resp = self._http.post(path, json=request.model_dump())
        if resp.status_code >= 500:
            raise InternalCheckError(_detail(resp))
        if resp.status_code >= 400:
            raise PwlnetError(_detail(resp))
        return response_cls.model_validate(resp.json())


def _detail(resp) -> str:
    try:
        return str(resp.json().get("detail", resp.text))
    except ValueError:
        return resp.text


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc}") from None


def _write_or_print(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _point_tokens(text: str) -> list[str]:
    tokens = [t for t in text.replace(",", " ").split() if t]
    if not tokens:
        raise _UsageError(f"empty point literal: {text!r}")
    return tokens


def _render(value: str, decimal: bool) -> str:
    return format_decimal(parse_rational(value)) if decimal else value


def _network_payload(path: str) -> schemas.NetworkPayload:
    net = parse_network(_read_text(path))
    return schemas.NetworkPayload.from_core(net)


def _regional_payload(path: str) -> schemas.RegionalPayload:
    try:
        doc = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise _UsageError(f"{path}: invalid JSON: {exc}") from None
    try:
        return schemas.RegionalPayload.model_validate(doc)
    except ValidationError as exc:
        raise _UsageError(f"{path}: not a regional document: {exc}") from None


def _regional_json(payload: schemas.RegionalPayload) -> str:
    return json.dumps(payload.model_dump(), indent=1) + "\n"


def cmd_translate(args, client: ServiceClient) -> int:
    req = schemas.TranslateRequest(
        network=_network_payload(args.net_file),
        prune_empty=not args.no_prune_empty,
        classify_hyperplanes=not args.no_classify,
        parallel=args.parallel,
    )
    resp = client.call("/translate", req)
    _write_or_print(_regional_json(resp.regional), args.output)
    counts = ", ".join(
        f"output {k}: {n} pairs ({m} nonempty)"
        for k, (n, m) in enumerate(zip(resp.pair_counts, resp.nonempty_counts))
    )
    print(counts, file=sys.stderr)
    return EXIT_OK


def cmd_eval(args, client: ServiceClient) -> int:
    tokens = _point_tokens(args.point)
    if args.regional:
        req = schemas.EvalRegionalRequest(
            regional=_regional_payload(args.source), point=tokens
        )
        resp = client.call("/regional/eval", req)
    else:
        req = schemas.EvalNetworkRequest(
            network=_network_payload(args.source), point=tokens
        )
        resp = client.call("/network/eval", req)
        if args.trace:
            for i, layer in enumerate(resp.layers, start=1):
                values = " ".join(_render(v, args.decimal) for v in layer)
                print(f"layer {i}: {values}")
    print(" ".join(_render(v, args.decimal) for v in resp.outputs))
    return EXIT_OK


def cmd_check_lattice(args, client: ServiceClient) -> int:
    req = schemas.LatticeCheckRequest(
        regional=_regional_payload(args.regional_file),
        repair=args.repair,
        max_iterations=args.max_iter,
        include_matrix=not args.no_matrix,
    )
    resp = client.call("/lattice/check", req)
    report = resp.model_dump(exclude={"repaired"})
    _write_or_print(json.dumps(report, indent=1), args.output)
    if args.repair and args.repaired_out and resp.repaired is not None:
        Path(args.repaired_out).write_text(_regional_json(resp.repaired))
    worst = max(entry.violation_count for entry in resp.outputs)
    print(
        "lattice property "
        + ("satisfied" if worst == 0 else f"violated ({worst} ordered pairs)"),
        file=sys.stderr,
    )
    return EXIT_OK


def cmd_stats(args, client: ServiceClient) -> int:
    req = schemas.StatsRequest(regional=_regional_payload(args.regional_file))
    resp = client.call("/regional/stats", req)
    print(f"input_dim: {resp.input_dim}")
    print(f"outputs: {resp.output_count}")
    for k, (n, m) in enumerate(zip(resp.pair_counts, resp.nonempty_counts)):
        print(f"output {k}: {n} pairs, {m} nonempty")
    return EXIT_OK


def cmd_generate(args, client: ServiceClient) -> int:
    req = schemas.GenerateRequest(
        inputs=args.inputs,
        hidden_layers=args.hidden_layers,
        hidden_width=args.width,
        outputs=args.outputs,
        seed=args.seed,
        grid=args.grid,
    )
    resp = client.call("/network/generate", req)
    _write_or_print(resp.text, args.output)
    return EXIT_OK


def cmd_experiment(args, client: ServiceClient) -> int:
    req = schemas.ExperimentRequest(
        mode=args.mode,
        fixed=args.fixed,
        classes=args.classes,
        per_class=args.per_class,
        seed=args.seed,
        grid=args.grid,
        workers=args.workers,
    )
    resp = client.call("/experiment", req)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "classes.csv").write_text(resp.classes_csv)
    (out / "violators.csv").write_text(resp.violators_csv)
    (out / "plot_regions.py").write_text(resp.plot_script)
    for cs in resp.classes:
        print(
            f"{cs.mode} fixed={cs.fixed} class={cs.class_value}: "
            f"avg={cs.avg_regions} max={cs.max_regions} min={cs.min_regions} "
            f"violators={len(cs.violators)}"
        )
    print(f"wrote {out / 'classes.csv'}, {out / 'violators.csv'}, {out / 'plot_regions.py'}")
    return EXIT_OK


def cmd_serve(args, _client: ServiceClient) -> int:
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="pwlnet", description=__doc__)
    parser.add_argument("--server", help="base URL of a running service; default is in-process")
    parser.add_argument(
        "--decimal", action="store_true", help="render rational outputs as decimals"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("translate", help="compile a network file to region form")
    p.add_argument("net_file")
    p.add_argument("--no-prune-empty", action="store_true")
    p.add_argument("--no-classify", action="store_true")
    p.add_argument("--parallel", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("eval", help="evaluate a network or a regional document")
    p.add_argument("--regional", action="store_true", help="source is a regional document")
    p.add_argument("--trace", action="store_true", help="also print per-layer values")
    p.add_argument("source")
    p.add_argument("point", help='e.g. "1/8,1/2"')
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("check-lattice", help="audit (and optionally repair) an encoding")
    p.add_argument("regional_file")
    p.add_argument("--repair", action="store_true")
    p.add_argument("--max-iter", type=int, default=1000)
    p.add_argument("--no-matrix", action="store_true", help="omit the above matrix")
    p.add_argument("--repaired-out", help="write the repaired document here")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_check_lattice)

    p = sub.add_parser("stats", help="pair counts of a regional document")
    p.add_argument("regional_file")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("generate", help="generate a seeded random network")
    p.add_argument("--inputs", type=int, required=True)
    p.add_argument("--hidden-layers", type=int, required=True)
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--outputs", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--grid", type=int, default=2**16)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("experiment", help="run a population study and emit CSV reports")
    p.add_argument("--mode", choices=["layers", "width"], required=True)
    p.add_argument("--fixed", type=int, required=True)
    p.add_argument("--classes", type=int, required=True)
    p.add_argument("--per-class", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--grid", type=int, default=2**16)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None, http_client=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        client = ServiceClient(args.server, http_client=http_client)
        return args.func(args, client)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as exc:
        print(f"error: invalid request: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InternalCheckError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except PwlnetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
