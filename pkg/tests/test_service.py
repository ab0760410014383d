import json
import threading
import urllib.error
import urllib.request

import pytest

from warbench.config import reference_scenario, scenario_from_dict
from warbench.report import run_aggregate, run_optimize, run_simulate, run_sweep
from warbench.service import make_server

FAST_OPT = {"optimizer": {"max_iters": 40, "mc_paths": 32}}


@pytest.fixture(scope="module")
def server_url(tmp_path_factory):
    # an empty static dir isolates these tests from a built console bundle
    empty = tmp_path_factory.mktemp("no-bundle")
    server = make_server("127.0.0.1:0", static_dir=str(empty))
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    host, port = server.server_address[:2]
    yield f"http://{host}:{port}"
    server.shutdown()


def request(url, body=None, method=None):
    data = json.dumps(body).encode() if body is not None else None
    req = urllib.request.Request(
        url, data=data, method=method or ("POST" if data is not None else "GET"),
        headers={"Content-Type": "application/json"} if data is not None else {},
    )
    try:
        with urllib.request.urlopen(req, timeout=300) as resp:
            return resp.status, resp.read()
    except urllib.error.HTTPError as err:
        return err.code, err.read()


class TestBasicEndpoints:
    def test_health(self, server_url):
        status, raw = request(f"{server_url}/api/health")
        assert status == 200
        body = json.loads(raw)
        assert body["status"] == "ok"
        assert body["kernel_backend"] in ("compiled", "fallback")

    def test_defaults_round_trip(self, server_url):
        status, raw = request(f"{server_url}/api/defaults")
        assert status == 200
        assert scenario_from_dict(json.loads(raw)) == reference_scenario()

    def test_unknown_endpoint(self, server_url):
        status, _ = request(f"{server_url}/api/nope", body={})
        assert status == 404

    def test_fallback_page_without_bundle(self, server_url):
        status, raw = request(f"{server_url}/")
        assert status == 200
        assert b"console bundle is not built" in raw


class TestComputeEndpoints:
    def test_simulate(self, server_url):
        status, raw = request(
            f"{server_url}/api/simulate", body={"config": {}, "paths": 64, "pi": 0.7}
        )
        assert status == 200
        body = json.loads(raw)
        assert body["pi"] == 0.7
        assert len(body["fan"]["times"]) == 7
        for side in ("B", "R"):
            fan = body["fan"][side]
            for k in range(7):
                assert fan["q05"][k] <= fan["q25"][k] <= fan["q75"][k] <= fan["q95"][k]

    def test_aggregate_matches_direct_call(self, server_url):
        status, raw = request(f"{server_url}/api/aggregate", body={"config": {}})
        assert status == 200
        assert json.loads(raw) == run_aggregate(reference_scenario())

    def test_sweep_matches_direct_call(self, server_url):
        status, raw = request(
            f"{server_url}/api/sweep", body={"config": {}, "grid_points": 7}
        )
        assert status == 200
        assert json.loads(raw) == run_sweep(reference_scenario(), grid_points=7)

    def test_optimize_matches_direct_call(self, server_url):
        status, raw = request(
            f"{server_url}/api/optimize", body={"config": FAST_OPT, "paths": 32}
        )
        assert status == 200
        direct = run_optimize(scenario_from_dict(FAST_OPT), n_paths=32)
        assert json.loads(raw) == direct

    def test_byte_identical_responses(self, server_url):
        body = {"config": {"seed": 42}, "paths": 32}
        _, first = request(f"{server_url}/api/simulate", body=body)
        _, second = request(f"{server_url}/api/simulate", body=body)
        assert first == second


class TestErrorContract:
    def test_field_level_errors(self, server_url):
        status, raw = request(
            f"{server_url}/api/simulate",
            body={"config": {"weights": [0.5, 0.6], "seed": -1}},
        )
        assert status == 400
        errors = json.loads(raw)["errors"]
        fields = {e["field"] for e in errors}
        assert "config.weights" in fields and "config.seed" in fields

    def test_unknown_body_field(self, server_url):
        status, raw = request(f"{server_url}/api/simulate", body={"config": {}, "bogus": 1})
        assert status == 400
        assert json.loads(raw)["errors"][0]["field"] == "bogus"

    def test_malformed_json_body(self, server_url):
        req = urllib.request.Request(
            f"{server_url}/api/simulate", data=b"{oops", method="POST"
        )
        try:
            with urllib.request.urlopen(req, timeout=60) as resp:
                status = resp.status
        except urllib.error.HTTPError as err:
            status = err.code
        assert status == 400

    def test_enumeration_refusal_maps_to_422(self, server_url):
        body = {
            "config": {
                "grid": {"dt": 0.5, "n_steps": 14},
                "optimizer": {"worstcase_backend": "path"},
            }
        }
        status, raw = request(f"{server_url}/api/aggregate", body=body)
        assert status == 422
        assert "enumeration" in json.loads(raw)["error"]

    def test_bad_paths_count(self, server_url):
        status, raw = request(f"{server_url}/api/simulate", body={"paths": 0})
        assert status == 400
        assert json.loads(raw)["errors"][0]["field"] == "paths"


class TestCliApiParity:
    def test_simulate_parity_with_cli_runner(self, server_url):
        # Both surfaces call the same run function with the same args:
        # identical config + seed must give identical numeric results.
        status, raw = request(
            f"{server_url}/api/simulate", body={"config": {"seed": 7}, "paths": 48}
        )
        assert status == 200
        direct, _ = run_simulate(scenario_from_dict({"seed": 7}), n_paths=48)
        assert json.loads(raw) == direct


class TestStaticBundle:
    def test_serves_built_console_when_present(self, tmp_path):
        (tmp_path / "index.html").write_text("<html><body>console</body></html>")
        (tmp_path / "app.js").write_text("export {};")
        server = make_server("127.0.0.1:0", static_dir=str(tmp_path))
        thread = threading.Thread(target=server.serve_forever, daemon=True)
        thread.start()
        host, port = server.server_address[:2]
        try:
            status, raw = request(f"http://{host}:{port}/")
            assert status == 200 and b"console" in raw
            status, raw = request(f"http://{host}:{port}/app.js")
            assert status == 200
            status, _ = request(f"http://{host}:{port}/missing.js")
            assert status == 404
            status, _ = request(f"http://{host}:{port}/../etc/passwd")
            assert status == 404
        finally:
            server.shutdown()
