"""Stateless HTTP JSON API serving the what-if console.

Every request carries its full scenario (overrides merged onto the
documented defaults), so the service holds no session state and the same
seed + body always produces a byte-identical response body. Long
optimizations respect an optional per-request compute budget and return
partial results flagged ``budget_exceeded``.
"""

from __future__ import annotations

import json
import mimetypes
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from . import __version__, _kernels
from .config import reference_scenario, scenario_from_dict
from .errors import ConfigError, EnumerationLimitError, WarbenchError
from .report import (
    DEFAULT_SIM_PATHS,
    run_aggregate,
    run_optimize,
    run_simulate,
    run_sweep,
)

_FALLBACK_PAGE = b"""<!doctype html>
<html><head><title>warbench</title></head>
<body><h1>warbench API</h1>
<p>The console bundle is not built. Endpoints live under <code>/api/</code>;
see the README for the build steps.</p></body></html>
"""


def _body_int(body, key, default, lo=1):
    value = body.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int) or value < lo:
        raise ConfigError([{"field": key, "message": f"must be an integer >= {lo}, got {value!r}"}])
    return value


def _body_float(body, key, default, lo=0.0, hi=1.0):
    value = body.get(key, default)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not lo <= value <= hi:
        raise ConfigError([{"field": key, "message": f"must be a number in [{lo}, {hi}], got {value!r}"}])
    return float(value)


def _parse_body(raw: bytes, allowed: set[str]):
    if not raw:
        body = {}
    else:
        try:
            body = json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, ValueError) as exc:
            raise ConfigError([{"field": "$", "message": f"not valid JSON: {exc}"}]) from exc
    if not isinstance(body, dict):
        raise ConfigError([{"field": "$", "message": "body must be a JSON object"}])
    unknown = set(body) - allowed
    if unknown:
        raise ConfigError(
            [{"field": key, "message": "unknown field"} for key in sorted(unknown)]
        )
    overrides = body.get("config", {})
    if not isinstance(overrides, dict):
        raise ConfigError([{"field": "config", "message": "must be an object"}])
    try:
        scenario = scenario_from_dict(overrides)
    except ConfigError as exc:
        raise ConfigError(
            [{"field": f"config.{e['field']}", "message": e["message"]} for e in exc.errors]
        ) from exc
    return scenario, body


class ApiHandler(BaseHTTPRequestHandler):
    server_version = f"warbench/{__version__}"
    protocol_version = "HTTP/1.1"

    # -- plumbing ---------------------------------------------------------
    def log_message(self, fmt, *args):  # quiet by default
        if self.server.verbose:  # type: ignore[attr-defined]
            super().log_message(fmt, *args)

    def _send(self, status: int, payload: bytes, content_type="application/json") -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def _send_json(self, status: int, obj) -> None:
        self._send(status, (json.dumps(obj, indent=2) + "\n").encode())

    def _handle_errors(self, fn) -> None:
        try:
            fn()
        except ConfigError as exc:
            self._send_json(400, {"errors": exc.errors})
        except EnumerationLimitError as exc:
            self._send_json(422, {"error": str(exc)})
        except WarbenchError as exc:
            self._send_json(400, {"errors": [{"field": "$", "message": str(exc)}]})
        except Exception as exc:  # pragma: no cover - defensive
            self._send_json(500, {"error": f"internal error: {exc}"})

    # -- routes -----------------------------------------------------------
    def do_GET(self):
        if self.path == "/api/health":
            self._send_json(
                200,
                {"status": "ok", "version": __version__, "kernel_backend": _kernels.BACKEND},
            )
        elif self.path == "/api/defaults":
            self._send_json(200, reference_scenario().to_dict())
        else:
            self._serve_static()

    def do_POST(self):
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length)
        routes = {
            "/api/simulate": lambda: self._post_simulate(raw),
            "/api/optimize": lambda: self._post_optimize(raw),
            "/api/aggregate": lambda: self._post_aggregate(raw),
            "/api/sweep": lambda: self._post_sweep(raw),
        }
        fn = routes.get(self.path)
        if fn is None:
            self._send_json(404, {"error": f"no such endpoint: {self.path}"})
            return
        self._handle_errors(fn)

    def _post_simulate(self, raw):
        scenario, body = _parse_body(raw, {"config", "paths", "pi"})
        paths = _body_int(body, "paths", DEFAULT_SIM_PATHS)
        pi = _body_float(body, "pi", None)
        result, _ = run_simulate(scenario, n_paths=paths, pi=pi)
        self._send_json(200, result)

    def _post_optimize(self, raw):
        scenario, body = _parse_body(raw, {"config", "paths"})
        paths = _body_int(body, "paths", DEFAULT_SIM_PATHS)
        result = run_optimize(
            scenario, n_paths=paths,
            deadline_seconds=self.server.compute_budget,  # type: ignore[attr-defined]
        )
        self._send_json(200, result)

    def _post_aggregate(self, raw):
        scenario, body = _parse_body(raw, {"config", "pi"})
        pi = _body_float(body, "pi", None)
        self._send_json(200, run_aggregate(scenario, pi=pi))

    def _post_sweep(self, raw):
        scenario, body = _parse_body(raw, {"config", "grid_points"})
        grid_points = _body_int(body, "grid_points", 101, lo=2)
        self._send_json(200, run_sweep(scenario, grid_points=grid_points))

    # -- static console bundle ---------------------------------------------
    def _serve_static(self):
        root = self.server.static_dir  # type: ignore[attr-defined]
        path = self.path.split("?", 1)[0]
        if path.startswith("/api/"):
            self._send_json(404, {"error": f"no such endpoint: {path}"})
            return
        if root is None:
            self._send(200, _FALLBACK_PAGE, "text/html")
            return
        rel = path.lstrip("/") or "index.html"
        target = (root / rel).resolve()
        if not str(target).startswith(str(root.resolve())) or not target.is_file():
            if path == "/":
                self._send(200, _FALLBACK_PAGE, "text/html")
            else:
                self._send(404, b"not found", "text/plain")
            return
        ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
        self._send(200, target.read_bytes(), ctype)


def make_server(
    bind: str,
    static_dir: str | None = None,
    compute_budget: float | None = None,
    verbose: bool = False,
) -> ThreadingHTTPServer:
    host, _, port = bind.rpartition(":")
    server = ThreadingHTTPServer((host or "127.0.0.1", int(port)), ApiHandler)
    resolved = None
    if static_dir:
        resolved = Path(static_dir)
    else:
        default = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        if default.is_dir():
            resolved = default
    server.static_dir = resolved  # type: ignore[attr-defined]
    server.compute_budget = compute_budget  # type: ignore[attr-defined]
    server.verbose = verbose  # type: ignore[attr-defined]
    return server


def serve_forever(bind, static_dir=None, compute_budget=None) -> None:
    server = make_server(bind, static_dir, compute_budget, verbose=True)
    host, port = server.server_address[:2]
    print(f"warbench API listening on http://{host}:{port}/ "
          f"(console: {'yes' if server.static_dir else 'not built'})", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
