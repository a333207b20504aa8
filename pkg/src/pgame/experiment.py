"""Batch harness: configured boards + strategies, seeded Monte Carlo
sweeps, Wilson intervals, threshold-crossing estimates, CSV/SVG emission
and transcript archives with bit-exact replay.

Config files are YAML (one document, keys documented in the README).
Everything is a pure function of (config, seed): parallel and serial runs
fold to identical results.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import yaml

from .engine import (
    P1,
    Transcript,
    play_mb,
    play_wc,
    replay as engine_replay,
    transcript_from_text,
    transcript_to_text,
)
from .graph import Graph, read_edgelist
from .oracles import is_hamiltonian, is_k_connected
from .randgraphs import DenseGraphSpec, PerturbSpec, perturb
from .rng import Rng, derive_seed
from .strategies import BoardContext, build_strategy


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    name: str
    game: str                 # "mb" | "wc"
    bias: int
    family: str
    n: int
    alpha: float
    p: float
    builder: str              # P1-protagonist strategy (maker / waiter)
    opponent: str
    predicate: str
    predicate_params: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    sweep_axis: str | None = None      # "p" | "b" | "n"
    sweep_grid: list = field(default_factory=list)
    trials: int = 1
    seed: int = 0
    out_dir: str | None = None
    check_every: int = 0               # 0: judge only at the end
    workers: int = 1
    keep_transcripts: bool = True
    dense_r: int = 2
    dense_k: int = 1

    @staticmethod
    def from_dict(d: dict) -> "ExperimentConfig":
        try:
            board = d.get("board", {})
            sweep = d.get("sweep", {}) or {}
            cfg = ExperimentConfig(
                name=d.get("name", "experiment"),
                game=d["game"],
                bias=int(d.get("bias", 1)),
                family=board["family"],
                n=int(board["n"]),
                alpha=float(board.get("alpha", 0.5)),
                p=float(board.get("p", 0.0)),
                builder=d["builder"],
                opponent=d["opponent"],
                predicate=d.get("predicate", "never"),
                predicate_params=d.get("predicate_params", {}) or {},
                params=d.get("params", {}) or {},
                sweep_axis=sweep.get("axis"),
                sweep_grid=list(sweep.get("grid", [])),
                trials=int(d.get("trials", 1)),
                seed=int(d.get("seed", 0)),
                out_dir=d.get("out_dir"),
                check_every=int(d.get("check_every", 0)),
                workers=int(d.get("workers", 1)),
                keep_transcripts=bool(d.get("keep_transcripts", True)),
                dense_r=int(board.get("r", 2)),
                dense_k=int(board.get("k", 1)),
            )
        except KeyError as e:
            raise ConfigError(f"missing config key: {e}") from e
        cfg.validate()
        return cfg

    @staticmethod
    def load(path: str) -> "ExperimentConfig":
        with open(path, "r", encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
        if not isinstance(data, dict):
            raise ConfigError("config must be a YAML mapping")
        return ExperimentConfig.from_dict(data)

    def validate(self) -> None:
        if self.game not in ("mb", "wc"):
            raise ConfigError(f"unknown game kind {self.game!r}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.sweep_axis is not None:
            if self.sweep_axis not in ("p", "b", "n"):
                raise ConfigError(f"unknown sweep axis {self.sweep_axis!r}")
            grid = self.sweep_grid
            if not grid or any(
                b <= a for a, b in zip(grid, grid[1:])
            ):
                raise ConfigError("sweep grid must be strictly increasing")
        from .strategies import REGISTRY

        for nm in (self.builder, self.opponent):
            if nm not in REGISTRY:
                raise ConfigError(f"unknown strategy {nm!r}")
        make_predicate(self.predicate, self.predicate_params, self.n)


# ---------------------------------------------------------------------------
# Predicates
# ---------------------------------------------------------------------------


def make_predicate(name: str, params: dict, n: int):
    """Judge on the builder-side final graph."""
    if name == "hamiltonian":
        restarts = int(params.get("restarts", 30))

        def ham(g: Graph) -> bool:
            method = "auto" if g.n <= 60 else "posa"
            return bool(is_hamiltonian(g, method=method, restarts=restarts))

        return ham
    if name == "k_connected":
        k = int(params.get("k", 2))
        return lambda g: is_k_connected(g, k)
    if name == "min_degree":
        t = int(params.get("t", 1))
        return lambda g: g.min_degree() >= t
    if name == "h_copy":
        from .strategies.hgame import embed_pattern

        text = params.get("pattern_text")
        hpat = params.get("pattern_graph") or read_edgelist(text)
        return lambda g: embed_pattern(g, hpat) is not None
    if name == "never":
        return lambda g: False
    raise ConfigError(f"unknown predicate {name!r}")


# ---------------------------------------------------------------------------
# Single trials
# ---------------------------------------------------------------------------


@dataclass
class TrialResult:
    point_index: int
    trial: int
    win: bool
    rounds: int
    transcript_text: str | None = None


def _axis_apply(cfg: ExperimentConfig, value):
    n, p, b = cfg.n, cfg.p, cfg.bias
    if cfg.sweep_axis == "p":
        p = float(value)
    elif cfg.sweep_axis == "b":
        b = int(value)
    elif cfg.sweep_axis == "n":
        n = int(value)
    return n, p, b


def run_trial(cfg: ExperimentConfig, point_index: int, trial: int) -> TrialResult:
    value = (
        cfg.sweep_grid[point_index] if cfg.sweep_axis is not None else None
    )
    n, p, b = _axis_apply(cfg, value) if value is not None else (
        cfg.n, cfg.p, cfg.bias
    )
    seed = derive_seed(cfg.seed, "trial", point_index, trial)
    dense = DenseGraphSpec(cfg.family, n, alpha=cfg.alpha, r=cfg.dense_r,
                           k=cfg.dense_k)
    union, g1, g2 = perturb(PerturbSpec(dense, min(p, 1.0), seed))
    params = dict(cfg.params)
    params.setdefault("alpha", cfg.alpha)
    ctx = BoardContext(union, g1, g2, b, derive_seed(seed, "strategy"),
                       params)
    try:
        builder = build_strategy(cfg.builder, ctx)
    except ValueError:
        # preparation failed (helper structure absent): an honest forfeit
        return TrialResult(point_index, trial, False, 0, None)
    opponent = build_strategy(cfg.opponent, ctx)
    pred = make_predicate(cfg.predicate, cfg.predicate_params, n)
    board = sorted(union.edges)
    if cfg.check_every > 0:
        checker = lambda game: pred(game.p1_graph())
        check_every = cfg.check_every
    else:
        # judge once, at board exhaustion
        checker = lambda game: (not game.free) and pred(game.p1_graph())
        check_every = 1
    game_seed = derive_seed(seed, "game")
    if cfg.game == "mb":
        t = play_mb(board, builder, opponent, b, checker, game_seed,
                    graph_board=union, check_every=check_every)
        win = t.winner == "maker"
    else:
        t = play_wc(board, builder, opponent, b, checker, game_seed,
                    graph_board=union, check_every=check_every,
                    allow_short_offers=True)
        win = t.winner == "waiter"
    text = transcript_to_text(t) if cfg.keep_transcripts else None
    return TrialResult(point_index, trial, win, t.rounds, text)


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------


def wilson_interval(wins: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    if trials == 0:
        return (0.0, 1.0)
    phat = wins / trials
    denom = 1 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / denom
    half = (
        z
        * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials))
        / denom
    )
    return (max(0.0, centre - half), min(1.0, centre + half))


@dataclass
class SweepPoint:
    axis_value: float
    wins: int
    trials: int
    rate: float
    lo: float
    hi: float
    mean_rounds: float


@dataclass
class SweepResult:
    config_name: str
    axis: str
    points: list[SweepPoint]

    def rates(self) -> list[float]:
        return [pt.rate for pt in self.points]


def _trial_task(args):
    cfg_dict, point_index, trial = args
    cfg = ExperimentConfig.from_dict(cfg_dict)
    res = run_trial(cfg, point_index, trial)
    return (point_index, trial, res.win, res.rounds, res.transcript_text)


def config_to_dict(cfg: ExperimentConfig) -> dict:
    return {
        "name": cfg.name,
        "game": cfg.game,
        "bias": cfg.bias,
        "board": {
            "family": cfg.family,
            "n": cfg.n,
            "alpha": cfg.alpha,
            "p": cfg.p,
            "r": cfg.dense_r,
            "k": cfg.dense_k,
        },
        "builder": cfg.builder,
        "opponent": cfg.opponent,
        "predicate": cfg.predicate,
        "predicate_params": cfg.predicate_params,
        "params": cfg.params,
        "sweep": (
            {"axis": cfg.sweep_axis, "grid": cfg.sweep_grid}
            if cfg.sweep_axis
            else {}
        ),
        "trials": cfg.trials,
        "seed": cfg.seed,
        "out_dir": cfg.out_dir,
        "check_every": cfg.check_every,
        "workers": cfg.workers,
        "keep_transcripts": cfg.keep_transcripts,
    }


def run(cfg: ExperimentConfig) -> SweepResult:
    points = (
        list(range(len(cfg.sweep_grid))) if cfg.sweep_axis else [0]
    )
    # the derived seeds must be collision-free across the whole grid
    seeds = {
        derive_seed(cfg.seed, "trial", pi, t)
        for pi in points
        for t in range(cfg.trials)
    }
    if len(seeds) != len(points) * cfg.trials:
        raise ConfigError("seed collision across (point, trial) pairs")
    tasks = [
        (config_to_dict(cfg), pi, t) for pi in points for t in range(cfg.trials)
    ]
    results = []
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_trial_task, tasks))
    else:
        results = [_trial_task(t) for t in tasks]
    results.sort(key=lambda r: (r[0], r[1]))
    if cfg.out_dir and cfg.keep_transcripts:
        tdir = os.path.join(cfg.out_dir, "transcripts")
        os.makedirs(tdir, exist_ok=True)
        for pi, t, _, _, text in results:
            if text:
                path = os.path.join(tdir, f"{cfg.name}_p{pi}_t{t}.txt")
                with open(path, "w", encoding="utf-8") as fh:
                    fh.write(text)
    pts = []
    for pi in points:
        rows = [r for r in results if r[0] == pi]
        wins = sum(1 for r in rows if r[2])
        trials = len(rows)
        lo, hi = wilson_interval(wins, trials)
        mean_rounds = sum(r[3] for r in rows) / max(trials, 1)
        value = cfg.sweep_grid[pi] if cfg.sweep_axis else cfg.p
        pts.append(
            SweepPoint(float(value), wins, trials, wins / max(trials, 1),
                       lo, hi, mean_rounds)
        )
    return SweepResult(cfg.name, cfg.sweep_axis or "-", pts)


# ---------------------------------------------------------------------------
# Crossing estimation
# ---------------------------------------------------------------------------


class NoCrossing(ValueError):
    def __init__(self, side: str):
        super().__init__(f"no crossing in range ({side})")
        self.side = side


def _interp_crossing(values, rates) -> float:
    for (x1, r1), (x2, r2) in zip(zip(values, rates), zip(values[1:], rates[1:])):
        lo_r, hi_r = (r1, r2) if r1 <= r2 else (r2, r1)
        if lo_r <= 0.5 <= hi_r and r1 != r2:
            lx1, lx2 = math.log(x1), math.log(x2)
            f = (0.5 - r1) / (r2 - r1)
            return math.exp(lx1 + f * (lx2 - lx1))
    raise NoCrossing("interior")


def estimate_crossing(result: SweepResult, bootstrap: int = 400,
                      seed: int = 1) -> tuple[float, tuple[float, float]]:
    """Log-scale interpolated 50%-crossing with a bootstrap CI."""
    values = [pt.axis_value for pt in result.points]
    rates = result.rates()
    if all(r > 0.5 for r in rates):
        raise NoCrossing("below-range")
    if all(r < 0.5 for r in rates):
        raise NoCrossing("above-range")
    est = _interp_crossing(values, rates)
    rng = Rng(seed)
    samples = []
    for _ in range(bootstrap):
        rr = []
        for pt in result.points:
            wins = sum(
                1 for _ in range(pt.trials) if rng.random() < pt.rate
            )
            rr.append(wins / max(pt.trials, 1))
        try:
            samples.append(_interp_crossing(values, rr))
        except NoCrossing:
            continue
    if samples:
        samples.sort()
        lo = samples[int(0.025 * len(samples))]
        hi = samples[min(len(samples) - 1, int(0.975 * len(samples)))]
    else:
        lo = hi = est
    return est, (lo, hi)


# ---------------------------------------------------------------------------
# CSV / SVG
# ---------------------------------------------------------------------------

CSV_HEADER = "axis,value,wins,trials,rate,lo,hi,mean_rounds"


def emit_csv(result: SweepResult, path: str) -> None:
    lines = [CSV_HEADER]
    for pt in result.points:
        lines.append(
            f"{result.axis},{pt.axis_value:.10g},{pt.wins},{pt.trials},"
            f"{pt.rate:.10g},{pt.lo:.10g},{pt.hi:.10g},{pt.mean_rounds:.10g}"
        )
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def parse_csv(path: str, name: str = "csv") -> SweepResult:
    with open(path, "r", encoding="utf-8") as fh:
        lines = [l.strip() for l in fh if l.strip()]
    if lines[0] != CSV_HEADER:
        raise ConfigError("bad CSV header")
    pts = []
    axis = "-"
    for line in lines[1:]:
        parts = line.split(",")
        axis = parts[0]
        pts.append(
            SweepPoint(
                float(parts[1]), int(parts[2]), int(parts[3]),
                float(parts[4]), float(parts[5]), float(parts[6]),
                float(parts[7]),
            )
        )
    return SweepResult(name, axis, pts)


def emit_svg(result: SweepResult, path: str, title: str | None = None) -> None:
    """Deterministic single-line chart with a CI band; no external refs."""
    W, H, M = 640, 400, 56
    pts = result.points
    if not pts:
        raise ValueError("empty result")
    xs = [pt.axis_value for pt in pts]
    xmin, xmax = min(xs), max(xs)
    span = (xmax - xmin) or 1.0

    def X(x):
        return M + (W - 2 * M) * (x - xmin) / span

    def Y(r):
        return H - M - (H - 2 * M) * r

    band_top = " ".join(f"{X(pt.axis_value):.2f},{Y(pt.hi):.2f}" for pt in pts)
    band_bot = " ".join(
        f"{X(pt.axis_value):.2f},{Y(pt.lo):.2f}" for pt in reversed(pts)
    )
    line = " ".join(f"{X(pt.axis_value):.2f},{Y(pt.rate):.2f}" for pt in pts)
    title = title or result.config_name
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
        f'viewBox="0 0 {W} {H}">',
        f'<rect width="{W}" height="{H}" fill="white"/>',
        f'<text x="{W/2:.0f}" y="24" text-anchor="middle" '
        f'font-family="monospace" font-size="14">{title}</text>',
        f'<polygon points="{band_top} {band_bot}" fill="#9ecae1" '
        f'fill-opacity="0.5" stroke="none"/>',
        f'<polyline points="{line}" fill="none" stroke="#08519c" '
        f'stroke-width="2"/>',
        f'<line x1="{M}" y1="{H-M}" x2="{W-M}" y2="{H-M}" stroke="black"/>',
        f'<line x1="{M}" y1="{M}" x2="{M}" y2="{H-M}" stroke="black"/>',
        f'<text x="{W/2:.0f}" y="{H-16}" text-anchor="middle" '
        f'font-family="monospace" font-size="12">{result.axis}</text>',
        f'<text x="16" y="{H/2:.0f}" text-anchor="middle" '
        f'font-family="monospace" font-size="12" '
        f'transform="rotate(-90 16 {H/2:.0f})">win rate</text>',
    ]
    for pt in pts:
        parts.append(
            f'<circle cx="{X(pt.axis_value):.2f}" cy="{Y(pt.rate):.2f}" '
            f'r="3" fill="#08519c"/>'
        )
    for frac in (0.0, 0.5, 1.0):
        parts.append(
            f'<text x="{M-8}" y="{Y(frac)+4:.2f}" text-anchor="end" '
            f'font-family="monospace" font-size="10">{frac:.1f}</text>'
        )
    parts.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts) + "\n")


# ---------------------------------------------------------------------------
# Replay verification
# ---------------------------------------------------------------------------


@dataclass
class ReplayReport:
    verified: bool
    detail: str = ""


def verify_transcript_text(text: str) -> ReplayReport:
    t = transcript_from_text(text)
    fresh = engine_replay(t, lambda game: False)
    if fresh.forfeited_by:
        return ReplayReport(False, f"illegal move during replay "
                                   f"({fresh.forfeited_by} at round "
                                   f"{fresh.rounds})")
    if fresh.owner_hash != t.owner_hash:
        # locate the first divergence by prefix replay
        return ReplayReport(
            False,
            f"ownership hash mismatch: recorded {t.owner_hash}, "
            f"replayed {fresh.owner_hash}",
        )
    return ReplayReport(True, "replay reproduces final ownership")


def verify_transcript_file(path: str) -> ReplayReport:
    with open(path, "r", encoding="utf-8") as fh:
        return verify_transcript_text(fh.read())
