"""Command-line interface.

Subcommands:

    qexp        print a named q-expansion up to a given exponent
    diff        apply the ring derivation to an expression in g1, g2, g3
    hecke       apply a Hecke operator to an expression in g1, g2, g3
    gm          connection matrices: verify, print, or transport along a path
    periods     period matrix, invariants, and reduced modulus at a point
    flow        integrate the vector field and emit per-sample monitors (CSV)
    verify-all  run the full verification suite

Exit codes: 0 success, 1 failed verification or computation error, 2 bad usage.
JSON outputs carry a schema_version field.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction

import numpy as np

from . import dmf, foliation
from .config import DEFAULTS
from .dmf import DmfElement
from .eisenstein import (
    GEN_FRAME,
    discriminant_series,
    eisenstein_series,
    j_series,
)
from .errors import DmformsError, OnDiscriminant, ParseError, PeriodError
from .gaussmanin import (
    delta_poly,
    matrices,
    picard_fuchs_transport,
    verify_basis_change,
    verify_det_identities,
)
from .parser import parse_expression
from .periods import (
    b_values,
    j_invariant,
    period_matrix_general,
    reduce_tau,
    sl2z_align,
)
from .qseries import QSeries
from .verify import verify_all

SCHEMA_VERSION = 1

#: pinned column layout of the flow CSV output
FLOW_COLUMNS = (
    "s",
    "t1_re", "t1_im",
    "t2_re", "t2_im",
    "t3_re", "t3_im",
    "abs_delta",
    "b2",
    "abs_b3",
    "dist_to_sing",
)


# --------------------------------------------------------------- formatting

def format_qexp(series: QSeries, upto: int) -> str:
    """Human-readable expansion through exponent ``upto`` inclusive.

    Terms are joined with spaced signs and unit coefficients are elided:
    "1 - 24 q - 72 q^2", "q^-1 + 744 + 196884 q".
    """
    pieces = []
    for n in range(series.valuation, upto + 1):
        c = series.coeff(n)
        if c == 0:
            continue
        mag = abs(c)
        if n == 0:
            body = str(mag)
        else:
            qpart = "q" if n == 1 else f"q^{n}"
            body = qpart if mag == 1 else f"{mag} {qpart}"
        pieces.append(("-" if c < 0 else "+", body))
    if not pieces:
        return "0"
    sign0, body0 = pieces[0]
    text = ("-" if sign0 == "-" else "") + body0
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text


def _cfmt(z, digits: int = 12) -> str:
    z = complex(z)
    return f"{z.real:.{digits}g}{z.imag:+.{digits}g}j"


def _cpair(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}")


def _parse_triple(text: str):
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(
            f"expected three comma-separated components, got {text!r}"
        )
    return tuple(_parse_complex(p) for p in parts)


def _emit_json(payload: dict) -> None:
    payload = {"schema_version": SCHEMA_VERSION, **payload}
    json.dump(payload, sys.stdout, indent=2, default=str)
    sys.stdout.write("\n")


def _parse_or_exit(text: str) -> DmfElement:
    try:
        return parse_expression(text)
    except ParseError as exc:
        sys.stderr.write(f"error: {exc}\n")
        if exc.position is not None:
            sys.stderr.write(f"    {text}\n    {' ' * exc.position}^\n")
        raise SystemExit(2)


# --------------------------------------------------------------- qexp

_SERIES_CHOICES = ("E2", "E4", "E6", "delta", "j", "g1", "g2", "g3")


def _resolve_series(name: str, upto: int):
    """Return (series, frame_annotation_or_None) for a qexp name."""
    floor = -1 if name == "j" else 0
    if upto < floor:
        raise SystemExit(f"error: highest exponent for {name} must be >= {floor}")
    order = upto + 1
    if name in ("E2", "E4", "E6"):
        return eisenstein_series(int(name[1]) // 2, order), None
    if name == "delta":
        return discriminant_series(order), None
    if name == "j":
        return j_series(order), None
    k = int(name[1])
    return eisenstein_series(k, order), str(GEN_FRAME[k])


def _cmd_qexp(args) -> int:
    series, frame = _resolve_series(args.series, args.upto)
    if args.json:
        coeffs = [
            [n, str(series.coeff(n))]
            for n in range(series.valuation, args.upto + 1)
        ]
        _emit_json({
            "series": args.series,
            "upto": args.upto,
            "frame": frame,
            "coefficients": coeffs,
        })
        return 0
    text = format_qexp(series, args.upto)
    if frame is not None:
        text = f"{frame} * ({text})"
    print(text)
    return 0


# --------------------------------------------------------------- diff / hecke

def _element_payload(f: DmfElement) -> dict:
    return {
        "text": str(f),
        "terms": [
            [list(exps), str(c)]
            for exps, c in sorted(f.terms.items(), reverse=True)
        ],
    }


def _cmd_diff(args) -> int:
    f = _parse_or_exit(args.expr)
    image = dmf.derivation(f)
    if args.json:
        _emit_json({"input": args.expr, "result": _element_payload(image)})
    else:
        print(image)
    return 0


def _cmd_hecke(args) -> int:
    f = _parse_or_exit(args.expr)
    image = dmf.hecke(f, args.p, n=args.depth, surplus=args.surplus)
    if args.json:
        _emit_json({
            "input": args.expr,
            "p": args.p,
            "result": _element_payload(image),
        })
    else:
        print(image)
    return 0


# --------------------------------------------------------------- gm

def _cmd_gm_verify(args) -> int:
    dets = verify_det_identities()
    change = verify_basis_change()
    cocycle = foliation.delta_cocycle_identity()
    rows = [
        ("stacked classical determinant = 3/4 * t0 * Delta^3", dets["det_b"]),
        ("last canonical determinant = 105/4 * t0^2 * Delta",
         dets["det_a3_canonical"]),
        ("basis change clears all four directions",
         all(change[f"i{i}"] for i in range(4))),
        ("discriminant cocycle d(Delta) = 12 t1 Delta", cocycle),
    ]
    ok = all(passed for _, passed in rows)
    if args.json:
        _emit_json({
            "passed": ok,
            "checks": [{"label": label, "passed": passed}
                       for label, passed in rows],
        })
    else:
        for label, passed in rows:
            print(f"{'PASS' if passed else 'FAIL'}  {label}")
    return 0 if ok else 1


def _cmd_gm_print(args) -> int:
    conn = matrices(args.basis)
    if args.json:
        _emit_json({
            "basis": args.basis,
            "delta": str(conn.delta),
            "numerators": [
                [[str(entry) for entry in row] for row in mat]
                for mat in conn.numerators
            ],
        })
        return 0
    print(f"Delta = {conn.delta}")
    print(f"basis = {args.basis}; connection in direction i is A_i / Delta")
    for i, mat in enumerate(conn.numerators):
        print(f"A_{i}:")
        for row in mat:
            print("  [" + ",  ".join(str(entry) for entry in row) + "]")
    return 0


def _parse_waypoint(raw) -> tuple:
    if not isinstance(raw, list) or len(raw) != 4:
        raise SystemExit(
            "error: each waypoint must be a list of four components "
            "(numbers, 'a+bj' strings, or [re, im] pairs)"
        )
    out = []
    for item in raw:
        if isinstance(item, (int, float)):
            out.append(complex(item))
        elif isinstance(item, str):
            out.append(_parse_complex(item))
        elif isinstance(item, list) and len(item) == 2:
            out.append(complex(item[0], item[1]))
        else:
            raise SystemExit(f"error: bad waypoint component {item!r}")
    return tuple(out)


def _cmd_gm_transport(args) -> int:
    try:
        raw = json.loads(args.path)
    except json.JSONDecodeError as exc:
        raise SystemExit(f"error: --path is not valid JSON: {exc}")
    if not isinstance(raw, list) or len(raw) < 2:
        raise SystemExit("error: --path needs at least two waypoints")
    path = [_parse_waypoint(w) for w in raw]

    start_pm = period_matrix_general(path[0])
    res = picard_fuchs_transport(start_pm.matrix, path, basis_tag=args.basis)

    comparison = None
    try:
        direct = period_matrix_general(path[-1])
        m, residual = sl2z_align(res.matrix, direct.matrix, tol=1e-4)
        gap = float(np.abs(m @ res.matrix - direct.matrix).max())
        comparison = {"relabeling": m.tolist(), "residual": residual,
                      "max_gap": gap}
    except (DmformsError, np.linalg.LinAlgError) as exc:
        comparison = {"unavailable": str(exc)}

    if args.json:
        _emit_json({
            "basis": args.basis,
            "start": [_cpair(v) for v in path[0]],
            "end": [_cpair(v) for v in path[-1]],
            "matrix": [[_cpair(v) for v in row] for row in res.matrix],
            "min_abs_delta": res.min_abs_delta,
            "rhs_evaluations": res.rhs_evaluations,
            "direct_comparison": comparison,
        })
        return 0
    print(f"start = ({', '.join(_cfmt(v) for v in path[0])})")
    print(f"end   = ({', '.join(_cfmt(v) for v in path[-1])})")
    print("transported matrix:")
    for row in res.matrix:
        print("  [" + ", ".join(_cfmt(v) for v in row) + "]")
    print(f"min |Delta| along path = {res.min_abs_delta:.6g}")
    print(f"rhs evaluations = {res.rhs_evaluations}")
    if "unavailable" in comparison:
        print(f"direct comparison unavailable: {comparison['unavailable']}")
    else:
        print(f"vs direct periods at end: relabeling {comparison['relabeling']}, "
              f"max gap = {comparison['max_gap']:.3e}")
    return 0


# --------------------------------------------------------------- periods

def _cmd_periods(args) -> int:
    t = (args.t0, args.t1, args.t2, args.t3)
    pm = period_matrix_general(t)
    b = b_values(pm)
    tau = pm.tau
    reduced, reduction = reduce_tau(tau)
    try:
        j = j_invariant(t)
    except OnDiscriminant:
        j = None

    if args.json:
        _emit_json({
            "t": [_cpair(v) for v in t],
            "matrix": [[_cpair(v) for v in row] for row in pm.matrix],
            "det": _cpair(pm.det),
            "b1": b.b1,
            "b2": b.b2,
            "b3": _cpair(b.b3),
            "abs_b3": abs(b.b3),
            "second_ratio": _cpair(pm.second_ratio),
            "tau": _cpair(tau),
            "tau_reduced": _cpair(reduced),
            "reduction": reduction.tolist(),
            "j": None if j is None else _cpair(j),
        })
        return 0
    print(f"t = ({', '.join(_cfmt(v) for v in t)})")
    print(f"x1 = {_cfmt(pm.x1)}")
    print(f"x2 = {_cfmt(pm.x2)}")
    print(f"x3 = {_cfmt(pm.x3)}")
    print(f"x4 = {_cfmt(pm.x4)}")
    print(f"det = {_cfmt(pm.det)}")
    print(f"b1 = {b.b1:.12g}")
    print(f"b2 = {b.b2:.12g}")
    print(f"b3 = {_cfmt(b.b3)}  (|b3| = {abs(b.b3):.12g})")
    print(f"x2/x1 = {_cfmt(pm.second_ratio)}")
    print(f"tau = {_cfmt(tau)}")
    print(f"tau reduced = {_cfmt(reduced)}  via {reduction.tolist()}")
    if j is not None:
        print(f"j = {_cfmt(j)}")
    return 0


# --------------------------------------------------------------- flow

def _flow_rows(result, samples: int):
    from .periods import period_matrix

    rows = []
    for k in range(samples + 1):
        s = result.length * k / samples if samples else 0.0
        t = result.at(s)
        b = b_values(period_matrix(*t))
        rows.append([
            s,
            t[0].real, t[0].imag,
            t[1].real, t[1].imag,
            t[2].real, t[2].imag,
            abs(foliation.delta3_value(t)),
            b.b2,
            abs(b.b3),
            foliation.dist_to_sing(t),
        ])
    return rows


def _write_flow_plot(rows, out_path: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    data = np.array(rows, dtype=float)
    s = data[:, 0]
    fig, axes = plt.subplots(3, 1, figsize=(7, 9), sharex=True)

    for idx, label in ((1, "t1"), (3, "t2"), (5, "t3")):
        axes[0].plot(s, data[:, idx], label=f"Re {label}")
        axes[0].plot(s, data[:, idx + 1], "--", label=f"Im {label}")
    axes[0].set_ylabel("components")
    axes[0].legend(fontsize=7, ncol=3)

    axes[1].semilogy(s, data[:, 7], label="|Delta|")
    axes[1].semilogy(s, np.maximum(data[:, 10], 1e-300), label="dist to singular curve")
    axes[1].set_ylabel("geometry")
    axes[1].legend(fontsize=8)

    axes[2].plot(s, data[:, 8], label="b2")
    axes[2].plot(s, data[:, 9], label="|b3|")
    axes[2].set_ylabel("invariants")
    axes[2].set_xlabel("s")
    axes[2].legend(fontsize=8)

    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def _cmd_flow(args) -> int:
    result = foliation.flow(args.start, args.length,
                            rtol=args.rtol, atol=args.atol)
    rows = _flow_rows(result, args.samples)

    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(FLOW_COLUMNS)
            for row in rows:
                writer.writerow([f"{v:.15g}" for v in row])
    else:
        writer = csv.writer(sys.stdout)
        writer.writerow(FLOW_COLUMNS)
        for row in rows:
            writer.writerow([f"{v:.15g}" for v in row])

    if args.plot:
        _write_flow_plot(rows, args.plot)

    end = result.end
    sys.stderr.write(
        f"integrated length {args.length:g}: end = "
        f"({', '.join(_cfmt(v, 6) for v in end)})\n"
    )
    return 0


# --------------------------------------------------------------- verify-all

def _cmd_verify_all(args) -> int:
    if args.only is not None:
        from . import verify as verify_module

        report = verify_module.CRITERIA[args.only - 1](seed=args.seed)
        result = {
            "passed": report["passed"],
            "passed_count": int(report["passed"]),
            "total": 1,
            "seed": args.seed,
            "reports": [report],
        }
    else:
        result = verify_all(seed=args.seed)

    if args.json:
        _emit_json(result)
    else:
        for report in result["reports"]:
            flag = "PASS" if report["passed"] else "FAIL"
            print(f"{flag}  criterion {report['index']}: {report['name']} "
                  f"({report['elapsed']:.2f}s) - {report['summary']}")
            for check in report["checks"]:
                if not check["passed"] or args.verbose:
                    mark = "ok" if check["passed"] else "FAILED"
                    detail = f" [{check['detail']}]" if check["detail"] else ""
                    print(f"      {mark}: {check['label']}{detail}")
        print(f"passed {result['passed_count']}/{result['total']} criteria "
              f"(seed {result['seed']})")
    return 0 if result["passed"] else 1


# --------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dmforms",
        description="Differential modular forms, periods, and the Ramanujan "
                    "vector field.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("qexp", help="print a q-expansion")
    p.add_argument("series", choices=_SERIES_CHOICES)
    p.add_argument("upto", type=int,
                   help="highest exponent to print (inclusive)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_qexp)

    p = sub.add_parser("diff", help="apply the ring derivation")
    p.add_argument("expr", help="expression in g1, g2, g3, e.g. 'g1^2 - 1/12*g2'")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_diff)

    p = sub.add_parser("hecke", help="apply a Hecke operator")
    p.add_argument("expr", help="expression in g1, g2, g3")
    p.add_argument("p", type=int, help="operator index (positive integer)")
    p.add_argument("--depth", type=int, default=None,
                   help="ambient depth (default: exact depth of the input)")
    p.add_argument("--surplus", type=int, default=DEFAULTS.hecke_surplus,
                   help="extra verification rows for the reconstruction")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_hecke)

    p = sub.add_parser("gm", help="connection matrices")
    gm_sub = p.add_subparsers(dest="gm_command", required=True)

    g = gm_sub.add_parser("verify", help="check the exact symbolic identities")
    g.add_argument("--json", action="store_true")
    g.set_defaults(func=_cmd_gm_verify)

    g = gm_sub.add_parser("print", help="print Delta and the numerator matrices")
    g.add_argument("--basis", choices=("classical", "canonical"),
                   default="classical")
    g.add_argument("--json", action="store_true")
    g.set_defaults(func=_cmd_gm_print)

    g = gm_sub.add_parser("transport",
                          help="integrate the connection along a path")
    g.add_argument("--path", required=True,
                   help="JSON list of waypoints, each four components "
                        "(t0, t1, t2, t3); components may be numbers, "
                        "'a+bj' strings, or [re, im] pairs")
    g.add_argument("--basis", choices=("classical", "canonical"),
                   default="classical")
    g.add_argument("--json", action="store_true")
    g.set_defaults(func=_cmd_gm_transport)

    p = sub.add_parser("periods", help="period matrix and invariants at a point")
    p.add_argument("--t1", type=_parse_complex, required=True)
    p.add_argument("--t2", type=_parse_complex, required=True)
    p.add_argument("--t3", type=_parse_complex, required=True)
    p.add_argument("--t0", type=_parse_complex, default=complex(1.0))
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_periods)

    p = sub.add_parser("flow", help="integrate the vector field; CSV output")
    p.add_argument("--start", type=_parse_triple, required=True,
                   metavar="T1,T2,T3",
                   help="start point, e.g. '0.1,2+1j,0.5-0.2j'")
    p.add_argument("--length", type=float, required=True)
    p.add_argument("--samples", type=int, default=64,
                   help="number of output intervals (default 64)")
    p.add_argument("--rtol", type=float, default=DEFAULTS.ode_rtol)
    p.add_argument("--atol", type=float, default=DEFAULTS.ode_atol)
    p.add_argument("--csv", metavar="FILE",
                   help="write samples to FILE instead of stdout")
    p.add_argument("--plot", metavar="FILE",
                   help="also render the trajectory and monitors to a PNG")
    p.set_defaults(func=_cmd_flow)

    p = sub.add_parser("verify-all", help="run the verification suite")
    p.add_argument("--seed", type=int, default=DEFAULTS.seed)
    p.add_argument("--only", type=int, choices=range(1, 9), metavar="K",
                   help="run a single criterion (1-8)")
    p.add_argument("--verbose", action="store_true",
                   help="also list passing checks")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_verify_all)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DmformsError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
