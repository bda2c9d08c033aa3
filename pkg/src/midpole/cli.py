"""Command-line interface.

Exit codes: 0 success, 2 validation error (bad arguments or inputs),
3 numerical failure (a procedure that should converge did not).
Diagnostics go to stderr; data goes to stdout or the --out file.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import serialize, svgplot
from .ddesim import SCENARIO_NAMES, SimulationSpec, build_scenario, fit_decay_rate, simulate
from .designs import design_second_order, design_wind_tunnel
from .errors import InvalidParameters, NumericalError, ValidationError
from .hypergeom import factored_delta, normalized_mid_eval
from .quasipoly import RetardedQuasipolynomial
from .rootfinder import Rectangle, apriori_root_radius, find_roots, verify_dominance
from .synthesis import binomial_suite, certify_multiplicity, synthesize

__all__ = ["main", "run"]


def _add_format_flags(p: argparse.ArgumentParser) -> None:
    group = p.add_mutually_exclusive_group()
    group.add_argument("--json", action="store_true", help="JSON output (default)")
    group.add_argument("--csv", action="store_true", help="CSV output")
    p.add_argument("--out", metavar="PATH", help="write data to PATH instead of stdout")


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="midpole",
        description="Maximal-multiplicity dominant pole placement for "
        "single-delay retarded systems",
    )
    sub = p.add_subparsers(dest="subcommand", required=True)

    sp = sub.add_parser("synthesize", help="closed-form maximal-multiplicity gains")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--tau", type=float, required=True)
    sp.add_argument("--s0", type=float, required=True)
    _add_format_flags(sp)

    vp = sub.add_parser("verify", help="certify a placement property")
    vp.add_argument("--n", type=int, required=True)
    vp.add_argument("--tau", type=float, default=1.0)
    vp.add_argument("--s0", type=float, default=0.0)
    vp.add_argument(
        "--what",
        required=True,
        choices=["multiplicity", "dominance", "factorization", "identities"],
    )
    vp.add_argument("--tol", type=float, default=1e-8)
    vp.add_argument("--seed", type=int, default=0)
    _add_format_flags(vp)

    rp = sub.add_parser("roots", help="locate all roots in a rectangle")
    rp.add_argument("--input", required=True, help="quasipolynomial JSON file, - for stdin")
    rp.add_argument(
        "--rect",
        nargs=4,
        type=float,
        required=True,
        metavar=("RE_MIN", "RE_MAX", "IM_MIN", "IM_MAX"),
    )
    rp.add_argument("--tol", type=float, default=1e-8)
    rp.add_argument("--svg", metavar="PATH", help="also write an SVG scatter")
    _add_format_flags(rp)

    mp = sub.add_parser("simulate", help="integrate a scenario or a spec file")
    src = mp.add_mutually_exclusive_group(required=True)
    src.add_argument("--scenario", choices=list(SCENARIO_NAMES))
    src.add_argument("--input", help="SimulationSpec JSON file, - for stdin")
    mp.add_argument("--t-end", dest="t_end", type=float)
    mp.add_argument("--dt", type=float, default=0.002)
    mp.add_argument("--svg", metavar="PATH", help="also write an SVG trace plot")
    _add_format_flags(mp)

    dp = sub.add_parser("design", help="application designs")
    dsub = dp.add_subparsers(dest="design_kind", required=True)
    d2 = dsub.add_parser("second-order")
    d2.add_argument("--zeta", type=float, required=True)
    d2.add_argument("--omega", type=float, required=True)
    d2.add_argument("--tau", type=float, required=True)
    _add_format_flags(d2)
    dw = dsub.add_parser("wind-tunnel")
    dw.add_argument("--kappa", type=float, required=True)
    dw.add_argument("--k", dest="k_gain", type=float, required=True)
    dw.add_argument("--tau0", type=float, required=True)
    dw.add_argument("--tau1", type=float, required=True)
    _add_format_flags(dw)

    hp = sub.add_parser("serve", help="HTTP API for the web frontend")
    hp.add_argument("--port", type=int, default=8571)
    hp.add_argument("--host", default="127.0.0.1")
    return p


def _check_tol(tol: float) -> float:
    if not (0.0 < tol <= 1e-3):
        raise InvalidParameters(f"tol must lie in (0, 1e-3], got {tol}")
    return tol


def _read_json_input(path: str) -> dict:
    text = sys.stdin.read() if path == "-" else open(path).read()
    return serialize.loads(text)


def _emit(args, payload, csv_text: str | None = None) -> None:
    if args.csv:
        if csv_text is None:
            raise InvalidParameters("this subcommand has no CSV form")
        out = csv_text
    else:
        out = serialize.dumps(payload) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _cmd_synthesize(args) -> None:
    result = synthesize(args.n, args.tau, args.s0)
    d = result.to_json_dict()
    csv_lines = ["k,a,alpha"]
    for k in range(args.n):
        csv_lines.append(
            f"{k},{serialize.format_float(result.a[k])},"
            f"{serialize.format_float(result.alpha[k])}"
        )
    _emit(args, d, "\n".join(csv_lines) + "\n")


def _cmd_verify(args) -> None:
    tol = _check_tol(args.tol)
    if args.what == "identities":
        report = binomial_suite(30)
        _emit(args, {"what": "identities", "checks": report, "ok": True})
        return
    result = synthesize(args.n, args.tau, args.s0)
    qp = result.quasipolynomial()
    if args.what == "multiplicity":
        m = certify_multiplicity(qp, args.s0, rel_tol=tol)
        _emit(
            args,
            {
                "what": "multiplicity",
                "multiplicity": m,
                "expected": 2 * args.n,
                "ok": m == 2 * args.n,
            },
        )
    elif args.what == "dominance":
        extent = 40.0 * np.pi / args.tau
        report = verify_dominance(qp, args.s0, extent)
        print(
            f"a-priori radius right of s0: "
            f"{apriori_root_radius(qp, args.s0):.6g}",
            file=sys.stderr,
        )
        _emit(
            args,
            {
                "what": "dominance",
                "ok": bool(report),
                "count_right": report.count_right,
                "rectangle": report.rectangle.to_json_dict(),
                "note": report.note,
            },
        )
    else:  # factorization
        worst = 0.0
        for re in np.linspace(-20.0, 20.0, 20):
            for im in np.linspace(-20.0, 20.0, 20):
                z = complex(re, im)
                lhs = normalized_mid_eval(args.n, z)
                rhs = factored_delta(args.n, z)
                denom = max(abs(lhs), abs(rhs), 1e-300)
                worst = max(worst, abs(lhs - rhs) / denom)
        _emit(
            args,
            {
                "what": "factorization",
                "max_rel_residual": worst,
                "ok": worst <= 1e-8,
            },
        )


def _cmd_roots(args) -> None:
    tol = _check_tol(args.tol)
    qp = RetardedQuasipolynomial.from_json_dict(_read_json_input(args.input))
    rect = Rectangle(*args.rect)
    print(
        f"a-priori root radius for Re >= {rect.re_min}: "
        f"{apriori_root_radius(qp, rect.re_min):.6g}",
        file=sys.stderr,
    )
    report = find_roots(qp, rect, tol=tol)
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(svgplot.spectrum_svg(report))
    _emit(args, report.to_json_dict(), report.to_csv())


def _cmd_simulate(args) -> None:
    if args.scenario:
        open_spec, closed_spec = build_scenario(
            args.scenario, t_end=args.t_end, dt=args.dt
        )
        open_trace = simulate(open_spec)
        closed_trace = simulate(closed_spec)
        window = (0.2 * closed_spec.t_end, 0.8 * closed_spec.t_end)
        for name, tr in (("open", open_trace), ("closed", closed_trace)):
            try:
                rate = fit_decay_rate(tr, window)
            except ValidationError:
                rate = None
            if name == "open":
                open_trace = tr.with_rate(rate)
            else:
                closed_trace = tr.with_rate(rate)
        if args.svg:
            with open(args.svg, "w") as fh:
                fh.write(
                    svgplot.trace_svg(
                        [open_trace, closed_trace], ["open loop", "closed loop"]
                    )
                )
        payload = {
            "scenario": args.scenario,
            "open": open_trace.to_json_dict(),
            "closed": closed_trace.to_json_dict(),
        }
        _emit(args, payload, closed_trace.to_csv())
    else:
        spec = SimulationSpec.from_json_dict(_read_json_input(args.input))
        if args.t_end is not None:
            spec = SimulationSpec(
                qp=spec.qp,
                history=spec.history,
                t_end=args.t_end,
                dt=spec.dt,
                rk_dt=spec.rk_dt,
            )
        trace = simulate(spec)
        if args.svg:
            with open(args.svg, "w") as fh:
                fh.write(svgplot.trace_svg(trace))
        _emit(args, trace.to_json_dict(), trace.to_csv())


def _cmd_design(args) -> None:
    if args.design_kind == "second-order":
        design = design_second_order(args.zeta, args.omega, args.tau)
        d = design.to_json_dict()
        csv_text = (
            "field,value\n"
            + "\n".join(
                f"{k},{serialize.format_float(v)}"
                for k, v in d.items()
                if isinstance(v, float)
            )
            + "\n"
        )
    else:
        design = design_wind_tunnel(args.kappa, args.k_gain, args.tau0, args.tau1)
        d = design.to_json_dict()
        units = d["units"]
        csv_text = (
            "field,value,unit\n"
            + "\n".join(
                f"{k},{serialize.format_float(v)},{units.get(k, '')}"
                for k, v in d.items()
                if isinstance(v, float)
            )
            + "\n"
        )
    _emit(args, d, csv_text)


def run(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        if args.subcommand == "synthesize":
            _cmd_synthesize(args)
        elif args.subcommand == "verify":
            _cmd_verify(args)
        elif args.subcommand == "roots":
            _cmd_roots(args)
        elif args.subcommand == "simulate":
            _cmd_simulate(args)
        elif args.subcommand == "design":
            _cmd_design(args)
        elif args.subcommand == "serve":
            from .server import serve

            serve(host=args.host, port=args.port)
        return 0
    except ValidationError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except NumericalError as err:
        print(f"numerical failure: {err}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
