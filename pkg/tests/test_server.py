import json
import threading
import urllib.error
import urllib.request

import pytest

from midpole import serialize, synthesize
from midpole.server import make_server


@pytest.fixture(scope="module")
def base_url():
    httpd = make_server(host="127.0.0.1", port=0)
    port = httpd.server_address[1]
    thread = threading.Thread(target=httpd.serve_forever, daemon=True)
    thread.start()
    yield f"http://127.0.0.1:{port}"
    httpd.shutdown()
    httpd.server_close()


def _post(base_url, path, payload):
    data = serialize.dumps(payload).encode()
    req = urllib.request.Request(
        base_url + path, data=data, headers={"Content-Type": "application/json"}
    )
    with urllib.request.urlopen(req, timeout=120) as resp:
        return resp.status, resp.read().decode()


def _post_expect_error(base_url, path, payload):
    try:
        _post(base_url, path, payload)
    except urllib.error.HTTPError as err:
        return err.code, err.read().decode()
    raise AssertionError("expected an HTTP error")


def test_health(base_url):
    with urllib.request.urlopen(base_url + "/api/health", timeout=30) as resp:
        assert resp.status == 200
        assert resp.read().decode() == '{"status":"ok"}'


def test_synthesize_endpoint_matches_library(base_url):
    status, body = _post(base_url, "/api/synthesize", {"n": 2, "tau": 0.5, "s0": -5.2})
    assert status == 200
    expected = serialize.dumps(synthesize(2, 0.5, -5.2).to_json_dict())
    assert body == expected  # byte-for-byte float formatting


def test_roots_endpoint(base_url):
    qp = synthesize(1, 1.0, 0.0).quasipolynomial()
    status, body = _post(
        base_url,
        "/api/roots",
        {
            "qp": qp.to_json_dict(),
            "rect": {"re_min": -8, "re_max": 2, "im_min": -30, "im_max": 30},
        },
    )
    assert status == 200
    d = json.loads(body)
    assert d["total_count"] == 10
    assert "strip_bound" in d


def test_simulate_endpoint_scenario(base_url):
    status, body = _post(
        base_url, "/api/simulate", {"scenario": "wind_tunnel_row1", "t_end": 1.0, "dt": 0.05}
    )
    assert status == 200
    d = json.loads(body)
    assert d["scenario"] == "wind_tunnel_row1"
    assert len(d["open"]["times"]) == len(d["open"]["y"])


def test_simulate_endpoint_spec(base_url):
    qp = synthesize(2, 0.5, -3.0).quasipolynomial()
    spec = {
        "qp": qp.to_json_dict(),
        "history": [[1.0], [0.0]],
        "t_end": 1.0,
        "dt": 0.1,
        "rk_dt": 0.5 / 25,
    }
    status, body = _post(base_url, "/api/simulate", {"spec": spec})
    assert status == 200
    assert len(json.loads(body)["times"]) == 11


def test_design_endpoints(base_url):
    status, body = _post(
        base_url,
        "/api/design/wind-tunnel",
        {"kappa": 1.964, "k": -0.67036, "tau0": 0.33, "tau1": 0.70},
    )
    assert status == 200
    assert abs(json.loads(body)["s0"] - (-4.041)) < 5e-4
    status, body = _post(
        base_url, "/api/design/second-order", {"zeta": 0.2, "omega": 6.0, "tau": 0.5}
    )
    assert status == 200
    assert json.loads(body)["s0"] == -5.2


def test_validation_maps_to_400(base_url):
    code, body = _post_expect_error(base_url, "/api/synthesize", {"n": -1, "tau": 1, "s0": 0})
    assert code == 400
    assert json.loads(body)["code"] == 2
    code, _ = _post_expect_error(base_url, "/api/synthesize", {"tau": 1})
    assert code == 400


def test_unknown_route_404(base_url):
    code, _ = _post_expect_error(base_url, "/api/nope", {})
    assert code == 404
