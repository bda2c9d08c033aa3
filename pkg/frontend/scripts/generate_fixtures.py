#!/usr/bin/env python3
"""Regenerate the golden fixtures in test/fixtures from the backend CLI.

For each of the three bundled studies this captures, verbatim, the CLI JSON
that the frontend's request chain would receive from the HTTP server (the
server and the CLI share one serializer, so the bytes agree):

    design.json  <- midpole design ...
    roots.json   <- midpole roots --input qp.json --rect <default view>
    trace.json   <- midpole simulate --input spec.json

plus manifest.json recording the derived request parameters (view rectangle
and simulation spec) so the tests can assert the frontend issues the same
requests.  Derivations reproduce the frontend's arithmetic exactly: IEEE
doubles from the same tokens through the same operations.
"""

import json
import math
import pathlib
import subprocess
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "test" / "fixtures"

SCENARIOS = [
    {
        "dir": "second_order_velocity_delay",
        "design_args": [
            "design", "second-order", "--zeta", "0.2", "--omega", "6", "--tau", "0.5",
        ],
        "params": {"zeta": "0.2", "omega": "6", "tau": "0.5"},
        "mode": "second_order",
    },
    {
        "dir": "wind_tunnel_row1",
        "design_args": [
            "design", "wind-tunnel",
            "--kappa", "1.964", "--k", "-0.67036", "--tau0", "0.33", "--tau1", "0.33",
        ],
        "params": {"kappa": "1.964", "k_gain": "-0.67036", "tau0": "0.33", "tau1": "0.33"},
        "mode": "wind_tunnel",
    },
    {
        "dir": "wind_tunnel_row2",
        "design_args": [
            "design", "wind-tunnel",
            "--kappa", "1.964", "--k", "-0.67036", "--tau0", "0.33", "--tau1", "0.7",
        ],
        "params": {"kappa": "1.964", "k_gain": "-0.67036", "tau0": "0.33", "tau1": "0.7"},
        "mode": "wind_tunnel",
    },
]


def cli(*args: str) -> str:
    proc = subprocess.run(
        [sys.executable, "-m", "midpole.cli", *args],
        capture_output=True,
        text=True,
        check=True,
    )
    return proc.stdout


def main() -> None:
    for sc in SCENARIOS:
        out = FIXTURES / sc["dir"]
        out.mkdir(parents=True, exist_ok=True)

        design_text = cli(*sc["design_args"])
        (out / "design.json").write_text(design_text)
        design = json.loads(design_text)

        qp = design["closed_loop"]
        s0 = design["s0"]
        tau = qp["tau"]
        n = qp["n"]

        # default view rectangle, as derived client-side from the tokens
        rect = [s0 - 20 / tau, s0 + 5 / tau, -40 / tau, 40 / tau]
        qp_file = out / "qp.json"
        qp_file.write_text(json.dumps(qp))
        roots_text = cli(
            "roots", "--input", str(qp_file), "--rect", *[repr(v) for v in rect]
        )
        (out / "roots.json").write_text(roots_text)

        # simulation spec, as derived client-side
        t_end = 4 / abs(s0)
        dt = t_end / 200
        rk_dt = tau / max(20, math.ceil(tau / dt) + 1)
        spec = {
            "qp": qp,
            "history": [[1.0 if i == 0 else 0.0] for i in range(n)],
            "t_end": t_end,
            "dt": dt,
            "rk_dt": rk_dt,
        }
        spec_file = out / "spec.json"
        spec_file.write_text(json.dumps(spec))
        trace_text = cli("simulate", "--input", str(spec_file))
        (out / "trace.json").write_text(trace_text)

        manifest = {
            "mode": sc["mode"],
            "params": sc["params"],
            "rect": {
                "re_min": rect[0], "re_max": rect[1],
                "im_min": rect[2], "im_max": rect[3],
            },
            "sim": {"t_end": t_end, "dt": dt, "rk_dt": rk_dt},
        }
        (out / "manifest.json").write_text(json.dumps(manifest, indent=2))
        print(f"wrote {out}")


if __name__ == "__main__":
    main()
