"""Stateless HTTP JSON API over the synthesis, root-finding, simulation and
design routines; serves the web frontend.  Stdlib-only threading server."""

from __future__ import annotations

import sys
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from . import serialize
from .ddesim import SCENARIO_NAMES, SimulationSpec, build_scenario, fit_decay_rate, simulate
from .designs import design_second_order, design_wind_tunnel
from .errors import NumericalError, ValidationError
from .quasipoly import RetardedQuasipolynomial
from .rootfinder import Rectangle, find_roots
from .synthesis import synthesize

__all__ = ["serve", "make_server"]


def _handle_synthesize(body: dict) -> dict:
    return synthesize(int(body["n"]), float(body["tau"]), float(body["s0"])).to_json_dict()


def _handle_roots(body: dict) -> dict:
    qp = RetardedQuasipolynomial.from_json_dict(body["qp"])
    r = body["rect"]
    rect = Rectangle(
        float(r["re_min"]), float(r["re_max"]), float(r["im_min"]), float(r["im_max"])
    )
    tol = float(body.get("tol", 1e-8))
    report = find_roots(qp, rect, tol=tol)
    return report.to_json_dict()


def _handle_simulate(body: dict) -> dict:
    if "scenario" in body:
        name = body["scenario"]
        if name not in SCENARIO_NAMES:
            raise ValidationError(f"unknown scenario {name!r}")
        open_spec, closed_spec = build_scenario(
            name, t_end=body.get("t_end"), dt=float(body.get("dt", 0.002))
        )
        open_trace = simulate(open_spec)
        closed_trace = simulate(closed_spec)
        window = (0.2 * closed_spec.t_end, 0.8 * closed_spec.t_end)
        try:
            open_trace = open_trace.with_rate(fit_decay_rate(open_trace, window))
            closed_trace = closed_trace.with_rate(fit_decay_rate(closed_trace, window))
        except ValidationError:
            pass
        return {
            "scenario": name,
            "open": open_trace.to_json_dict(),
            "closed": closed_trace.to_json_dict(),
        }
    spec = SimulationSpec.from_json_dict(body["spec"])
    return simulate(spec).to_json_dict()


def _handle_design_second_order(body: dict) -> dict:
    return design_second_order(
        float(body["zeta"]), float(body["omega"]), float(body["tau"])
    ).to_json_dict()


def _handle_design_wind_tunnel(body: dict) -> dict:
    k = body.get("k_gain", body.get("k"))
    return design_wind_tunnel(
        float(body["kappa"]), float(k), float(body["tau0"]), float(body["tau1"])
    ).to_json_dict()


_POST_ROUTES = {
    "/api/synthesize": _handle_synthesize,
    "/api/roots": _handle_roots,
    "/api/simulate": _handle_simulate,
    "/api/design/second-order": _handle_design_second_order,
    "/api/design/wind-tunnel": _handle_design_wind_tunnel,
}


class _Handler(BaseHTTPRequestHandler):
    server_version = "midpole"

    def log_message(self, fmt, *args):  # quiet by default
        if getattr(self.server, "verbose", False):
            super().log_message(fmt, *args)

    def _send(self, status: int, payload) -> None:
        data = serialize.dumps(payload).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.end_headers()
        self.wfile.write(data)

    def do_OPTIONS(self):
        self._send(204, {})

    def do_GET(self):
        if self.path == "/api/health":
            self._send(200, {"status": "ok"})
        else:
            self._send(404, {"error": f"unknown path {self.path}"})

    def do_POST(self):
        handler = _POST_ROUTES.get(self.path)
        if handler is None:
            self._send(404, {"error": f"unknown path {self.path}"})
            return
        try:
            length = int(self.headers.get("Content-Length", "0"))
            body = serialize.loads(self.rfile.read(length).decode() or "{}")
            self._send(200, handler(body))
        except (ValidationError, KeyError, TypeError, ValueError) as err:
            self._send(400, {"error": str(err), "code": 2})
        except NumericalError as err:
            self._send(500, {"error": str(err), "code": 3})


def make_server(host: str = "127.0.0.1", port: int = 8571) -> ThreadingHTTPServer:
    return ThreadingHTTPServer((host, port), _Handler)


def serve(host: str = "127.0.0.1", port: int = 8571) -> None:
    httpd = make_server(host, port)
    print(f"listening on http://{host}:{port}", file=sys.stderr)
    try:
        httpd.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        httpd.server_close()
