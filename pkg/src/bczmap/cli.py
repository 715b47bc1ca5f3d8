"""Command-line front end: every computation as a reproducible CSV/JSON run.

CSV output carries '#'-prefixed metadata lines (command, parameters,
version, seed) above the header row; JSON mirrors the same content as
{"meta": ..., "columns": ..., "rows": ...}.  Identical invocations
(including the seed) produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import __version__
from .core import DomainError, orbit_trace
from .excursions import NAMED_STARTS, excursion_averages, named_start
from .farey import (empirical_integral, farey_cardinality, index_values,
                    moment_sum, normalized_gaps)
from .lattices import (UnimodularBasis, slope_gaps_via_bcz,
                       strip_slopes_bruteforce)
from .measure import (MAX_PEAK_INTEGRAL, MIN_PEAK_INTEGRAL, excursion_integrals,
                      hall_cdf, hall_kinks, integrate_over_section, kappa_moment,
                      moment_integral, roof_integral, roof_region_measure,
                      tile_measure, tile_partition_defect)
from .periodic import (hierarchy_report, orbit_report, period_on_segment,
                       segment_matrix, shear_conjugation_check)

import numpy as np


def _fmt(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def emit(args, command: str, params: dict, columns: list, rows: list) -> None:
    meta = {
        "command": command,
        "params": " ".join(f"{k}={_fmt(v)}" for k, v in params.items()),
        "version": __version__,
        "seed": args.seed if args.seed is not None else "none",
    }
    out = open(args.output, "w") if args.output else sys.stdout
    try:
        if args.format == "json":
            doc = {
                "meta": meta,
                "columns": columns,
                "rows": [[_fmt(v) for v in row] for row in rows],
            }
            json.dump(doc, out, indent=2)
            out.write("\n")
        else:
            for k, v in meta.items():
                out.write(f"# {k}: {v}\n")
            out.write(",".join(columns) + "\n")
            for row in rows:
                out.write(",".join(_fmt(v) for v in row) + "\n")
    finally:
        if args.output:
            out.close()


def parse_scalar(text: str, parser):
    """'p/q' parses exactly; decimal strings become floats (with a warning)."""
    try:
        if "/" in text:
            num, den = text.split("/")
            return Fraction(int(num), int(den))
        if "." in text or "e" in text.lower():
            print(f"warning: {text!r} parsed as float; use p/q for exact runs",
                  file=sys.stderr)
            return float(text)
        return Fraction(int(text))
    except (ValueError, ZeroDivisionError):
        parser.error(f"cannot parse scalar {text!r}")


def _interval(args, parser):
    if args.interval is None:
        return (0, 1)
    lo, hi = (parse_scalar(v, parser) for v in args.interval)
    if not 0 <= lo <= hi <= 1:
        parser.error("interval must satisfy 0 <= A <= B <= 1")
    return (Fraction(lo), Fraction(hi))


# -- subcommands ---------------------------------------------------------------

def cmd_farey(args, parser) -> None:
    if args.Q < 1:
        parser.error("Q must be >= 1")
    interval = _interval(args, parser)
    params = {"Q": args.Q, "interval": f"[{_fmt(interval[0])};{_fmt(interval[1])}]",
              "stat": args.stat}
    if args.stat == "gaps":
        g = normalized_gaps(args.Q, interval)
        lo, hi = args.range
        edges = np.linspace(lo, hi, args.bins + 1)
        counts, _ = np.histogram(g, bins=edges)
        n = len(g)
        params.update(bins=args.bins, range=f"[{lo:g};{hi:g}]", total=n)
        rows = [
            (float(edges[i]), float(edges[i + 1]), int(counts[i]), counts[i] / n)
            for i in range(args.bins)
        ]
        emit(args, "farey", params, ["bin_lo", "bin_hi", "count", "proportion"], rows)
    elif args.stat == "index":
        nu = index_values(args.Q, interval)
        alpha = args.alpha
        emp = float(np.mean(nu.astype(float) ** alpha))
        limit = kappa_moment(alpha) if 0 < alpha < 2 else float("nan")
        params.update(alpha=alpha)
        rows = [(alpha, emp, limit, int(nu.max()), 2 * args.Q)]
        emit(args, "farey", params,
             ["alpha", "empirical_moment", "limit", "max_index", "index_bound"], rows)
    elif args.stat == "moments":
        s, t = args.s, args.t
        emp = moment_sum(args.Q, interval, s, t)
        try:
            limit = moment_integral(s, t)
        except ValueError:
            limit = float("nan")
        params.update(s=s, t=t)
        emit(args, "farey", params, ["s", "t", "empirical", "limit"],
             [(s, t, emp, limit)])
    else:  # excursion
        mn = empirical_integral(args.Q, interval,
                                lambda a, b: np.minimum(np.minimum(1 / a, 1 / b), a + b))
        mx = empirical_integral(args.Q, interval,
                                lambda a, b: np.maximum(np.maximum(a, b), 1 / (a + b)))
        rows = [("min_stat", mn, MIN_PEAK_INTEGRAL),
                ("max_stat", mx, MAX_PEAK_INTEGRAL)]
        emit(args, "farey", params, ["statistic", "empirical", "limit"], rows)


def cmd_hall_cdf(args, parser) -> None:
    if args.step <= 0 or args.d_max < args.d_min:
        parser.error("need step > 0 and d-max >= d-min")
    if not 0 < args.interval_length <= 1:
        parser.error("interval-length must lie in (0, 1]")
    length = args.interval_length
    k1, k2 = hall_kinks(length)
    grid = list(np.arange(args.d_min, args.d_max + args.step / 2, args.step))
    markers = {round(k1, 15), round(k2, 15)}
    for k in (k1, k2):
        if args.d_min < k < args.d_max:
            grid.append(k)
    grid = sorted(set(float(d) for d in grid))
    params = {"d_min": args.d_min, "d_max": args.d_max, "step": args.step,
              "interval_length": length, "oracle": args.oracle,
              "kink_lo": k1, "kink_hi": k2}
    closed = [hall_cdf(d, length) for d in grid]
    columns = ["d", "cdf", "is_kink"]
    if args.oracle in ("quadrature", "both"):
        def quad_at(d):
            if d <= 0:
                return 0.0
            return roof_region_measure(0, math.pi**2 * d / (3 * length),
                                       method="quadrature").value
        if args.threads > 1:
            with ThreadPoolExecutor(max_workers=args.threads) as pool:
                quads = list(pool.map(quad_at, grid))
        else:
            quads = [quad_at(d) for d in grid]
        columns = ["d", "cdf", "quadrature", "abs_diff", "is_kink"]
        rows = [(d, c, q, abs(c - q), int(round(d, 15) in markers))
                for d, c, q in zip(grid, closed, quads)]
    else:
        rows = [(d, c, int(round(d, 15) in markers)) for d, c in zip(grid, closed)]
    emit(args, "hall-cdf", params, columns, rows)


def cmd_orbit(args, parser) -> None:
    a = parse_scalar(args.a, parser)
    b = parse_scalar(args.b, parser)
    try:
        if args.periodic:
            if not (isinstance(a, Fraction) and isinstance(b, Fraction)):
                parser.error("--periodic requires exact (p/q) coordinates")
            rep = orbit_report((a, b))
            m = rep.matrix
            params = {"a": a, "b": b}
            rows = [(rep.discrete_period, rep.continuous_period, _fmt(rep.slope),
                     m.a11, m.a12, m.a21, m.a22)]
            emit(args, "orbit", params,
                 ["period", "flow_period", "slope", "m11", "m12", "m21", "m22"], rows)
            return
        trace = orbit_trace((a, b), args.n)
        rows = [
            (i, p[0], p[1], r, k)
            for i, (p, r, k) in enumerate(zip(trace.points, trace.returns, trace.indices))
        ]
        emit(args, "orbit", {"a": a, "b": b, "n": args.n},
             ["i", "a", "b", "roof", "kappa"], rows)
    except DomainError as exc:
        parser.error(str(exc))


def cmd_excursions(args, parser) -> None:
    if args.start is not None:
        start = tuple(float(parse_scalar(v, parser)) for v in args.start)
    else:
        start = named_start(args.slope_irrational)
    if args.n < 1:
        parser.error("n must be >= 1")
    record = args.record_every or max(1, args.n // 100)
    res = excursion_averages(start, args.n, record_every=record)
    params = {"start_a": start[0], "start_b": start[1], "n": args.n,
              "record_every": record, "repairs": res.repairs}
    rows = list(res.history)
    emit(args, "excursions", params, ["n", "a_N", "l_N", "A_N", "L_N"], rows)


def _basis_from_args(args, parser) -> UnimodularBasis:
    if args.random_basis:
        if args.seed is None:
            parser.error("--random-basis requires --seed")
        rng = random.Random(args.seed)
        m = ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))
        for _ in range(rng.randint(4, 8)):
            x = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
            if rng.random() < 0.5:
                shear = ((Fraction(1), x), (Fraction(0), Fraction(1)))
            else:
                shear = ((Fraction(1), Fraction(0)), (x, Fraction(1)))
            m = (
                (m[0][0] * shear[0][0] + m[0][1] * shear[1][0],
                 m[0][0] * shear[0][1] + m[0][1] * shear[1][1]),
                (m[1][0] * shear[0][0] + m[1][1] * shear[1][0],
                 m[1][0] * shear[0][1] + m[1][1] * shear[1][1]),
            )
        return UnimodularBasis(m[0][0], m[1][0], m[0][1], m[1][1])
    if args.basis is None:
        parser.error("provide --basis M11 M12 M21 M22 or --random-basis")
    e = [parse_scalar(v, parser) for v in args.basis]
    try:
        return UnimodularBasis(e[0], e[2], e[1], e[3])  # row-major input, column storage
    except ValueError as exc:
        parser.error(str(exc))


def cmd_slopes(args, parser) -> None:
    basis = _basis_from_args(args, parser)
    t = parse_scalar(args.t, parser)
    if t <= 0:
        parser.error("t must be positive")
    c1, c2 = basis.columns()
    params = {"basis": f"[{_fmt(c1[0])};{_fmt(c2[0])};{_fmt(c1[1])};{_fmt(c2[1])}]",
              "t": t, "n": args.n}
    if args.bruteforce:
        if args.slope_max is None:
            parser.error("--bruteforce requires --slope-max")
        series = strip_slopes_bruteforce(basis, t, parse_scalar(args.slope_max, parser))
        params["slope_max"] = args.slope_max
    else:
        series = slope_gaps_via_bcz(basis, t, args.n)
    if args.gaps:
        n0 = farey_cardinality(int(t)) if t == int(t) else None
        if n0 is not None:
            params["farey_period_of_integer_width"] = n0
        rows = [(i, g) for i, g in enumerate(series.gaps)]
        if args.c is not None and args.d is not None:
            inside = sum(1 for g in series.gaps if args.c < g < args.d)
            params.update(c=args.c, d=args.d,
                          fraction_in_window=inside / max(1, len(series.gaps)),
                          limit_mass=roof_region_measure(
                              float(t) ** 2 * args.c, float(t) ** 2 * args.d).value)
        emit(args, "slopes", params, ["i", "gap"], rows)
    else:
        rows = [(i, s) for i, s in enumerate(series.slopes)]
        emit(args, "slopes", params, ["i", "slope"], rows)


def cmd_periodic(args, parser) -> None:
    if args.hierarchy is not None:
        recs = hierarchy_report(args.hierarchy)
        rows = [(r["Q"], r["period"], r["jump_to_next"]) for r in recs]
        emit(args, "periodic", {"hierarchy": args.hierarchy},
             ["Q", "period", "jump_to_next"], rows)
        return
    if args.k is None or args.l is None:
        parser.error("provide K L or --hierarchy QMAX")
    k, l = args.k, args.l
    try:
        m = segment_matrix(k, l)
        rows = []
        for r in range(1, k + 1):
            rows.append((r, f"({l}/{l + r};{l}/{l + r - 1}]", period_on_segment(k, l, r)))
        params = {"k": k, "l": l,
                  "matrix": f"[{m.a11};{m.a12};{m.a21};{m.a22}]",
                  "shear_conjugation": shear_conjugation_check(k, l)}
        emit(args, "periodic", params, ["r", "a_range", "period"], rows)
    except ValueError as exc:
        parser.error(str(exc))


def cmd_measure(args, parser) -> None:
    rows = []
    part = tile_partition_defect(10**5)
    rows.append(("tile_partition_defect", part, 0.0, part))
    ri_c, ri_q = roof_integral(), roof_integral("quadrature")
    rows.append(("roof_integral", ri_c, ri_q, abs(ri_c - ri_q)))
    s, t = args.s, args.t
    b_c = moment_integral(s, t)
    b_q, _ = integrate_over_section(lambda a, b: a**s * b**t)
    rows.append((f"B({s:g},{t:g})", b_c, b_q, abs(b_c - b_q)))
    if 0 < args.alpha < 2:
        rows.append((f"kappa_moment({args.alpha:g})", kappa_moment(args.alpha),
                     kappa_moment(args.alpha, head=4000), 0.0))
    eq = excursion_integrals("quadrature")
    rows.append(("min_peak_integral", MIN_PEAK_INTEGRAL, eq[0],
                 abs(MIN_PEAK_INTEGRAL - eq[0])))
    rows.append(("max_peak_integral", MAX_PEAK_INTEGRAL, eq[1],
                 abs(MAX_PEAK_INTEGRAL - eq[1])))
    rows.append(("tile_measure_1", float(tile_measure(1)), 1 / 3, 0.0))
    emit(args, "measure", {"s": s, "t": t, "alpha": args.alpha},
         ["quantity", "closed_form", "cross_check", "abs_diff"], rows)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bczmap",
        description="Farey statistics, gap laws, cusp excursions and slope gaps "
                    "through the BCZ return map.",
    )
    parser.add_argument("--version", action="version", version=f"bczmap {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--output", help="write to a file instead of stdout")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("farey", help="statistics of the level-Q Farey sequence")
    p.add_argument("Q", type=int)
    p.add_argument("--interval", nargs=2, metavar=("A", "B"))
    p.add_argument("--stat", choices=("gaps", "index", "moments", "excursion"),
                   default="gaps")
    p.add_argument("--bins", type=int, default=100)
    p.add_argument("--range", nargs=2, type=float, default=(0.0, 5.0),
                   metavar=("LO", "HI"))
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--t", type=float, default=0.0)
    common(p)
    p.set_defaults(run=cmd_farey)

    p = sub.add_parser("hall-cdf", help="the limiting gap distribution function")
    p.add_argument("--d-min", type=float, default=0.0)
    p.add_argument("--d-max", type=float, default=3.0)
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--interval-length", type=float, default=1.0)
    p.add_argument("--oracle", choices=("closed-form", "quadrature", "both"),
                   default="closed-form")
    common(p)
    p.set_defaults(run=cmd_hall_cdf)

    p = sub.add_parser("orbit", help="iterate the return map from an exact point")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("-n", type=int, default=10)
    p.add_argument("--periodic", action="store_true",
                   help="report period, flow period and cocycle matrix instead")
    common(p)
    p.set_defaults(run=cmd_orbit)

    p = sub.add_parser("excursions", help="long-run averages of cusp excursions")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--slope-irrational", choices=sorted(NAMED_STARTS))
    g.add_argument("--start", nargs=2, metavar=("A", "B"))
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--record-every", type=int, default=0)
    common(p)
    p.set_defaults(run=cmd_excursions)

    p = sub.add_parser("slopes", help="slopes/gaps of lattice vectors in a strip")
    p.add_argument("--basis", nargs=4, metavar=("M11", "M12", "M21", "M22"))
    p.add_argument("--random-basis", action="store_true")
    p.add_argument("-t", default="1")
    p.add_argument("-n", type=int, default=100)
    p.add_argument("--gaps", action="store_true", help="emit gaps instead of slopes")
    p.add_argument("--bruteforce", action="store_true")
    p.add_argument("--slope-max")
    p.add_argument("--c", type=float)
    p.add_argument("--d", type=float)
    common(p)
    p.set_defaults(run=cmd_slopes)

    p = sub.add_parser("periodic", help="periodic-orbit structure of a slope segment")
    p.add_argument("k", nargs="?", type=int)
    p.add_argument("l", nargs="?", type=int)
    p.add_argument("--hierarchy", type=int, metavar="QMAX")
    common(p)
    p.set_defaults(run=cmd_periodic)

    p = sub.add_parser("measure", help="closed-form constants with quadrature checks")
    p.add_argument("--s", type=float, default=1.0)
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--alpha", type=float, default=1.0)
    common(p)
    p.set_defaults(run=cmd_measure)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.run(args, parser)
    except SystemExit:
        raise
    except BrokenPipeError:
        return 0
    except Exception as exc:  # internal error contract: exit code 1
        print(f"bczmap: internal error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
