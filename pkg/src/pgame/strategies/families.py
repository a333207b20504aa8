"""Implicit cut families and the sampled-potential strategies that play on
them.

The exponential families (all pairs of linear-size vertex sets, all
connectivity cuts) are never enumerated: a seeded sampler draws member sets
on demand, the builder patches the thinnest sampled set each move, and the
post-stage audits re-sample freshly.  Small explicit families stay with the
exact potential strategies.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..engine import P1, P2, Strategy
from ..graph import Graph, bits, mask_of
from ..rng import Rng


@dataclass
class CutFamily:
    """{ E_base(A, B) : A in side_a of size_a, B in side_b of size_b }.

    side_a / side_b are lists of pools (vertex masks); a sample picks a pool
    pair (paired by index when `paired`, independently otherwise), then A
    and B inside them.  For one-pool families pass single-element lists.
    """

    base: Graph
    side_a: list[int]
    side_b: list[int]
    size_a: int
    size_b: int
    paired: bool = False
    disjoint: bool = True

    def sample(self, rng: Rng) -> tuple[int, int]:
        """(A mask, B mask); A, B disjoint."""
        if self.paired:
            i = rng.randrange(len(self.side_a))
            pa, pb = self.side_a[i], self.side_b[i]
        else:
            pa = self.side_a[rng.randrange(len(self.side_a))]
            pb = self.side_b[rng.randrange(len(self.side_b))]
        averts = list(bits(pa))
        am = mask_of(rng.sample(averts, min(self.size_a, len(averts))))
        pool_b = pb & ~am if self.disjoint else pb
        bverts = list(bits(pool_b))
        bm = mask_of(rng.sample(bverts, min(self.size_b, len(bverts))))
        return am, bm

    def cut_edges(self, am: int, bm: int) -> list[tuple[int, int]]:
        out = []
        for u in bits(am):
            for v in bits(self.base.adj[u] & bm):
                out.append((u, v) if u < v else (v, u))
        return out


class CutTransversalBuilder(Strategy):
    """Maker-side sampled-potential rule for an implicit cut family.

    Each move draws `samples` member cuts, scores each by the builder's
    current edges inside it, and claims a free edge from the thinnest
    uncovered cut (preferring an edge that covers several sampled thin
    cuts).  When every sampled cut is covered the strategy spreads: it
    claims a free board edge at the vertex of minimum builder degree.
    """

    def __init__(self, family: CutFamily, samples: int = 24,
                 done_checks: int = 3):
        self.family = family
        self.samples = samples
        self.done_checks = done_checks

    def attach(self, game, side, rng):
        super().attach(game, side, rng)
        self.cursor = 0
        self.mine: set = set()
        self.theirs: set = set()
        self.clean_streak = 0

    def _sync(self, game):
        log = game.log
        while self.cursor < len(log):
            e, s = log[self.cursor]
            self.cursor += 1
            (self.mine if s == self.side else self.theirs).add(e)

    def _spread_edge(self, game):
        deg: dict[int, int] = {}
        for (u, v) in self.mine:
            deg[u] = deg.get(u, 0) + 1
            deg[v] = deg.get(v, 0) + 1
        return min(
            game.free,
            key=lambda e: (min(deg.get(e[0], 0), deg.get(e[1], 0)), e),
        )

    def move(self, game):
        self._sync(game)
        if not game.free:
            return None
        thin: list[tuple[int, list]] = []
        for _ in range(self.samples):
            am, bm = self.family.sample(self.rng)
            cut = self.family.cut_edges(am, bm)
            owned = sum(1 for e in cut if e in self.mine)
            if owned == 0:
                free_in = [e for e in cut if e in game.free]
                if free_in:
                    thin.append((len(free_in), free_in))
        if not thin:
            self.clean_streak += 1
            return self._spread_edge(game)
        self.clean_streak = 0
        thin.sort(key=lambda t: t[0])
        counts: dict = {}
        for _, free_in in thin[:6]:
            for e in free_in:
                counts[e] = counts.get(e, 0) + 1
        best = max(counts, key=lambda e: (counts[e], [-c for c in e]))
        return best

    def done(self, game):
        return self.clean_streak >= self.done_checks

    def audit(self, game, samples: int, rng: Rng) -> int:
        """Number of freshly sampled cuts with no builder edge."""
        self._sync(game)
        bad = 0
        for _ in range(samples):
            am, bm = self.family.sample(rng)
            cut = self.family.cut_edges(am, bm)
            if cut and not any(e in self.mine for e in cut):
                bad += 1
        return bad


class CutTransversalWaiter(Strategy):
    """Waiter-side analogue: all offered edges come from one endangered
    sampled cut, so whichever the client keeps, the cut gets a client edge."""

    def __init__(self, family: CutFamily, samples: int = 24,
                 done_checks: int = 3):
        self.family = family
        self.samples = samples
        self.done_checks = done_checks

    def attach(self, game, side, rng):
        super().attach(game, side, rng)
        self.cursor = 0
        self.client: set = set()
        self.clean_streak = 0

    def _sync(self, game):
        log = game.log
        while self.cursor < len(log):
            e, s = log[self.cursor]
            self.cursor += 1
            if s == P1:
                self.client.add(e)

    def offer(self, game, size):
        self._sync(game)
        best_cut = None
        for _ in range(self.samples):
            am, bm = self.family.sample(self.rng)
            cut = self.family.cut_edges(am, bm)
            if not cut or any(e in self.client for e in cut):
                continue
            free_in = [e for e in cut if e in game.free]
            if len(free_in) >= 2:
                if best_cut is None or len(free_in) < len(best_cut):
                    best_cut = free_in
        if best_cut is None:
            self.clean_streak += 1
            return sorted(game.free)[:size]
        self.clean_streak = 0
        return best_cut[:size] if len(best_cut) >= size else best_cut

    def done(self, game):
        return self.clean_streak >= self.done_checks

    def audit(self, game, samples: int, rng: Rng) -> int:
        self._sync(game)
        bad = 0
        for _ in range(samples):
            am, bm = self.family.sample(rng)
            cut = self.family.cut_edges(am, bm)
            if cut and not any(e in self.client for e in cut):
                bad += 1
        return bad


class DegreeGuardedMaker(Strategy):
    """Wrap a Maker strategy with an isolation guard driven by the danger
    function dang(v) = d_B(v) - 2*b*d_M(v): when the opponent concentrates
    on an under-built vertex, answer there at once instead of delegating.
    Early response keeps the endangered vertex's partner pool wide, so its
    lifeline edges spread over distinct healthy vertices.
    """

    def __init__(self, inner: Strategy, bias: int = 1, target: int = 6,
                 threshold: int = 10):
        self.inner = inner
        self.bias = bias
        self.target = target
        self.threshold = threshold

    def attach(self, game, side, rng):
        super().attach(game, side, rng)
        if game.gview is None:
            raise ValueError("degree guard needs a graph board")
        self.inner.attach(game, side, rng.split("guarded"))

    def move(self, game):
        gv = game.gview
        twob = 2 * self.bias
        best = None
        for v in range(gv.n):
            md = gv.m_adj[v].bit_count()
            if md >= self.target:
                continue
            if not gv.free_adj[v]:
                continue
            dang = gv.b_adj[v].bit_count() - twob * md
            if dang < self.threshold:
                continue
            if best is None or dang > best[0]:
                best = (dang, v)
        if best is not None:
            v = best[1]
            # connect outward: healthy low-degree partners first
            def partner_key(x):
                healthy = gv.free_adj[x].bit_count() > self.target
                return (not healthy, gv.m_adj[x].bit_count(), x)

            w = min(bits(gv.free_adj[v]), key=partner_key)
            return (v, w) if v < w else (w, v)
        return self.inner.move(game)

    def done(self, game):
        return self.inner.done(game)

    def __getattr__(self, name):
        return getattr(self.inner, name)


class DegreeForcingWaiter(Strategy):
    """Force client degrees: while some vertex v in a pool has client degree
    below target into its counterpart pool, offer free board edges between v
    and the counterpart.  Directions are (pool_a[i] -> pool_b[i]) pairs."""

    def __init__(self, base: Graph, pairs: list[tuple[int, int]], target: int):
        self.base = base
        self.pairs = pairs
        self.target = target

    def attach(self, game, side, rng):
        super().attach(game, side, rng)
        self.cursor = 0
        self.cdeg: dict[tuple[int, int], int] = {}

    def _sync(self, game):
        log = game.log
        while self.cursor < len(log):
            (u, v), s = log[self.cursor]
            self.cursor += 1
            if s != P1:
                continue
            for i, (pa, pb) in enumerate(self.pairs):
                for x, y in ((u, v), (v, u)):
                    if (pa >> x) & 1 and (pb >> y) & 1:
                        self.cdeg[(i, x)] = self.cdeg.get((i, x), 0) + 1

    def _deficient(self, game):
        for i, (pa, pb) in enumerate(self.pairs):
            for v in bits(pa):
                if self.cdeg.get((i, v), 0) >= self.target:
                    continue
                pool = [
                    e
                    for e in (
                        (v, w) if v < w else (w, v)
                        for w in bits(self.base.adj[v] & pb)
                    )
                    if e in game.free
                ]
                if len(pool) >= 2:
                    return pool
        return None

    def offer(self, game, size):
        self._sync(game)
        pool = self._deficient(game)
        if pool is None:
            return sorted(game.free)[:size]
        return pool[:size] if len(pool) >= size else pool

    def done(self, game):
        self._sync(game)
        return self._deficient(game) is None

    def audit(self, game) -> int:
        """Vertices still below target with board edges remaining."""
        self._sync(game)
        return 0 if self._deficient(game) is None else 1
