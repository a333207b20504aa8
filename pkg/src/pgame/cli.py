"""Command line interface.

    pgame run <config.yaml>            Monte Carlo sweep from a config file
    pgame density <pattern> [--r R]    exact density report for a pattern
    pgame oracle <prop> <graph> [...]  property verdict lines
    pgame replay <transcript>          bit-exact transcript verification
    pgame solve <hypergraph> [...]     exact minimax on a tiny board

Exit codes: 0 success, 2 configuration error, 3 replay divergence.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from .density import ZeroDensityError, density_report, threshold_exponent
from .engine import Hypergraph, MinimaxMB, MinimaxWC
from .experiment import (
    ConfigError,
    ExperimentConfig,
    emit_csv,
    emit_svg,
    estimate_crossing,
    NoCrossing,
    run,
    verify_transcript_file,
)
from .graph import load_graph
from .oracles import (
    RegularityParams,
    boosters_exact,
    boosters_posa,
    is_hamiltonian,
    is_k_connected,
    is_r_expander,
    regular_pair_check,
    vertex_connectivity,
)


def _mask_str(mask: int) -> str:
    from .graph import bits

    return "{" + ",".join(str(v) for v in bits(mask)) + "}"


def cmd_run(args) -> int:
    try:
        cfg = ExperimentConfig.load(args.config)
        if args.out:
            cfg.out_dir = args.out
        result = run(cfg)
    except (ConfigError, FileNotFoundError, KeyError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    for pt in result.points:
        print(
            f"{result.axis}={pt.axis_value:.6g} wins={pt.wins}/{pt.trials} "
            f"rate={pt.rate:.3f} ci=[{pt.lo:.3f},{pt.hi:.3f}] "
            f"rounds~{pt.mean_rounds:.1f}"
        )
    if len(result.points) > 1:
        try:
            est, (lo, hi) = estimate_crossing(result)
            print(f"50%-crossing ~ {est:.6g}  ci=[{lo:.6g},{hi:.6g}]")
        except NoCrossing as e:
            print(f"50%-crossing: {e}")
    if cfg.out_dir:
        os.makedirs(cfg.out_dir, exist_ok=True)
        emit_csv(result, os.path.join(cfg.out_dir, f"{cfg.name}.csv"))
        emit_svg(result, os.path.join(cfg.out_dir, f"{cfg.name}.svg"))
        print(f"wrote {cfg.out_dir}/{cfg.name}.csv and .svg")
    return 0


def cmd_density(args) -> int:
    try:
        h = load_graph(args.pattern)
    except (OSError, ValueError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    rs = tuple(args.r) if args.r else (2, 3)
    rep = density_report(h, rs=rs)
    print(f"d   = {rep.d}")
    print(f"m   = {rep.m}   witness {_mask_str(rep.m_witness)}")
    print(f"d2  = {rep.d2}")
    print(f"m2  = {rep.m2}   witness {_mask_str(rep.m2_witness)}")
    for r in rs:
        parts = " | ".join(_mask_str(m) for m in rep.m_r_witness[r])
        print(f"m^({r})  = {rep.m_r[r]}   partition {parts}")
        parts2 = " | ".join(_mask_str(m) for m in rep.m2_r_witness[r])
        print(f"m2^({r}) = {rep.m2_r[r]}   partition {parts2}")
        try:
            exp = threshold_exponent("m2_r", h, r)
            print(f"  threshold exponent (m2^({r})): n^({exp})")
        except ZeroDensityError as e:
            print(f"  threshold exponent (m2^({r})): {e}")
    return 0


def cmd_oracle(args) -> int:
    try:
        g = load_graph(args.graph)
    except (OSError, ValueError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    prop = args.property
    if prop == "ham":
        method = "posa" if (args.heuristic or g.n > 60) else "auto"
        res = is_hamiltonian(g, method=method)
        wit = ",".join(map(str, res.cycle)) if res.cycle else "-"
        print(f"HAMILTONIAN={str(res.hamiltonian).lower()} MODE={res.mode} "
              f"WITNESS={wit}")
    elif prop == "kconn":
        if args.k is not None:
            ok = is_k_connected(g, args.k)
            print(f"K_CONNECTED={str(ok).lower()} MODE=exact WITNESS=k={args.k}")
        else:
            kappa = vertex_connectivity(g)
            print(f"CONNECTIVITY={kappa} MODE=exact WITNESS=-")
    elif prop == "expander":
        res = is_r_expander(g, args.R or 1)
        wit = _mask_str(res.violator) if res.violator is not None else "-"
        print(f"EXPANDER={str(res.is_expander).lower()} MODE={res.mode} "
              f"WITNESS={wit}")
    elif prop == "boosters":
        if args.heuristic or g.n > 16:
            bs = boosters_posa(g)
        else:
            bs = boosters_exact(g)
        lst = ";".join(f"{u}-{v}" for u, v in bs.boosters) or "-"
        extra = " ALREADY_HAMILTONIAN=true" if bs.already_hamiltonian else ""
        print(f"BOOSTERS={len(bs.boosters)} MODE={bs.method} WITNESS={lst}"
              f"{extra}")
    elif prop == "regular":
        n = g.n
        half = (1 << (n // 2)) - 1
        a = args.side_a or half
        b = args.side_b or (g.full_mask & ~half)
        mode = "sampled" if args.heuristic else "exact"
        res = regular_pair_check(
            g, a, b, RegularityParams(args.eps, mode=mode)
        )
        print(
            f"REGULAR={str(res.regular).lower()} MODE={res.mode} "
            f"WITNESS=deviation:{res.worst_deviation:.4f}"
        )
    else:
        print(f"config error: unknown property {prop!r}", file=sys.stderr)
        return 2
    return 0


def cmd_replay(args) -> int:
    try:
        report = verify_transcript_file(args.transcript)
    except (OSError, ValueError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    if report.verified:
        print(f"VERIFIED {report.detail}")
        return 0
    print(f"DIVERGENCE {report.detail}")
    return 3


def read_hypergraph(path: str) -> Hypergraph:
    """Format: `elements e1 e2 ...` then one `set e1 e2 ...` per line."""
    elements = None
    family = []
    with open(path, "r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if parts[0] == "elements":
                elements = parts[1:]
            elif parts[0] == "set":
                family.append(set(parts[1:]))
            else:
                raise ValueError(f"bad hypergraph line: {line!r}")
    if elements is None:
        raise ValueError("missing 'elements' line")
    return Hypergraph(elements, family)


def cmd_solve(args) -> int:
    try:
        hg = read_hypergraph(args.hypergraph)
        if args.wc:
            solver = MinimaxWC(hg, args.bias)
            val = solver.waiter_wins()
            print(f"WAITER_WINS={str(val).lower()} BIAS={args.bias}")
        else:
            solver = MinimaxMB(hg, args.bias, maker_first=not args.breaker_first)
            val = solver.maker_wins()
            print(f"MAKER_WINS={str(val).lower()} BIAS={args.bias}")
            if val and not args.breaker_first:
                mv = solver.best_maker_move(0, 0)
                print(f"BEST_FIRST_MOVE={mv}")
    except (OSError, ValueError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pgame", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("run", help="run a configured Monte Carlo sweep")
    p.add_argument("config")
    p.add_argument("--out", help="output directory override")
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("density", help="exact density report for a pattern")
    p.add_argument("pattern")
    p.add_argument("--r", type=int, action="append",
                   help="partition class count (repeatable)")
    p.set_defaults(fn=cmd_density)

    p = sub.add_parser("oracle", help="graph property verdict")
    p.add_argument("property",
                   choices=["ham", "kconn", "expander", "boosters", "regular"])
    p.add_argument("graph")
    p.add_argument("--k", type=int)
    p.add_argument("--R", type=int)
    p.add_argument("--eps", type=float, default=0.25)
    p.add_argument("--heuristic", action="store_true")
    p.add_argument("--side-a", type=int, dest="side_a")
    p.add_argument("--side-b", type=int, dest="side_b")
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("replay", help="verify a transcript bit-exactly")
    p.add_argument("transcript")
    p.set_defaults(fn=cmd_replay)

    p = sub.add_parser("solve", help="exact minimax on a tiny hypergraph")
    p.add_argument("hypergraph")
    p.add_argument("--bias", type=int, default=1)
    p.add_argument("--wc", action="store_true")
    p.add_argument("--breaker-first", action="store_true")
    p.set_defaults(fn=cmd_solve)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
