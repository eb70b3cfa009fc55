"""Command-line client for the lab service.

Every subcommand posts a JSON config to the service and writes what comes
back; by default the service runs in-process, with ``--server`` it talks to
a remote instance over HTTP.  Exit codes: 0 success, 2 config or validation
error, 3 run terminated early (blowup), 4 property checks failed, 1
anything unexpected.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

import httpx


class ConfigError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cnls-lab",
        description="Numerical lab for standing waves of coupled cubic "
                    "Schrodinger systems.")
    sub = parser.add_subparsers(dest="command", required=True)

    specs = [
        ("spectral-report",
         "eigenvalues and coercivity of the linearized operator family"),
        ("single-run", "integrate one perturbed wave and record diagnostics"),
        ("sweep", "classify a grid of coupling parameters"),
        ("expansion-check",
         "verify the degenerate quartic identity and expansion orders"),
    ]
    for name, help_text in specs:
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--config", required=True,
                        help="JSON config file ('-' for stdin)")
        sp.add_argument("--out", default=None,
                        help="output path (default: stdout); single-run "
                             "treats this as a stem and writes both "
                             "<stem>.csv and <stem>.json")
        sp.add_argument("--server", default=None,
                        help="base URL of a running service (default: "
                             "in-process)")
        if name == "sweep":
            sp.add_argument("--workers", type=int, default=None,
                            help="process count for sweep cells (default: "
                                 "LAB_WORKERS or the CPU count)")

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def _load_config(path: str) -> dict:
    try:
        if path == "-":
            payload = json.load(sys.stdin)
        else:
            with open(path) as fh:
                payload = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ConfigError("config must be a JSON object")
    return payload


def _client(server: str | None):
    if server:
        return httpx.Client(base_url=server.rstrip("/"), timeout=None)
    with warnings.catch_warnings():
        # the in-process client import warns about httpx2; not actionable here
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service import app
    return TestClient(app)


def _error_detail(resp) -> str:
    try:
        detail = resp.json().get("detail")
    except Exception:
        return resp.text[:500]
    if isinstance(detail, str):
        return detail
    return json.dumps(detail)


def _post_checked(client, path: str, payload: dict, params=None) -> dict:
    resp = client.post(path, json=payload, params=params or {})
    if resp.status_code in (400, 422):
        raise ConfigError(_error_detail(resp))
    if resp.status_code != 200:
        raise RuntimeError(
            f"unexpected status {resp.status_code}: {resp.text[:500]}")
    return resp.json()


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_json(payload: dict, out: str | None):
    _emit(json.dumps(payload, indent=2) + "\n", out)


def _run_spectral(client, config: dict, out: str | None) -> int:
    payload = _post_checked(client, "/spectral-report", config)
    _emit_json(payload, out)
    return 0


def _run_single(client, config: dict, out: str | None) -> int:
    payload = _post_checked(client, "/single-run", config)
    if out:
        stem = Path(out)
        if stem.suffix in (".csv", ".json"):
            stem = stem.with_suffix("")
        csv_text = payload.pop("csv")
        _emit(csv_text, str(stem) + ".csv")
        _emit_json(payload, str(stem) + ".json")
    else:
        _emit_json(payload, None)
    if payload["terminated_early"]:
        reason = payload["termination_reason"]
        when = payload["termination_time"]
        print(f"run terminated early ({reason}) at t = {when}",
              file=sys.stderr)
        return 3
    return 0


def _run_sweep(client, config: dict, out: str | None, workers) -> int:
    params = {"workers": workers} if workers is not None else {}
    payload = _post_checked(client, "/sweep", config, params)
    failed = [r for r in payload["rows"] if r.get("error")]
    if failed:
        print(f"warning: {len(failed)} cell(s) failed; see the error column",
              file=sys.stderr)
    _emit(payload["csv"], out)
    return 0


def _run_expansion(client, config: dict, out: str | None) -> int:
    payload = _post_checked(client, "/expansion-check", config)
    _emit_json(payload, out)
    if not payload["passed"]:
        print("expansion checks failed", file=sys.stderr)
        return 4
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "serve":
            import uvicorn

            from .service import app
            uvicorn.run(app, host=args.host, port=args.port)
            return 0
        config = _load_config(args.config)
        with _client(args.server) as client:
            if args.command == "spectral-report":
                return _run_spectral(client, config, args.out)
            if args.command == "single-run":
                return _run_single(client, config, args.out)
            if args.command == "sweep":
                return _run_sweep(client, config, args.out, args.workers)
            return _run_expansion(client, config, args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except httpx.HTTPError as exc:
        print(f"transport error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 -- last-resort exit code
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
