"""Fixed-target (H-) game strategies: odd cycles, books, the regular-pair
assembly for general H, the many-copies random strategy, and the
Waiter-Client pairing induction.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from ..density import TargetPattern, r_partite_two_density
from ..engine import FOLLOW, MultiplexStrategy, P1, P2, Strategy
from ..graph import (
    Graph,
    bits,
    canon_edge,
    graph_union,
    mask_of,
    relabelled_induced,
    set_of,
)
from ..oracles import (
    DensePairConfig,
    common_neighbourhood,
    dependent_random_choice,
    find_dense_pair,
    pair_density,
)
from ..potentials import BalancerStrategy
from ..rng import Rng, derive_seed
from .constants import StrategyConstants
from .hamiltonicity import StageGoal


# ---------------------------------------------------------------------------
# Subgraph embedding (tiny patterns, backtracking)
# ---------------------------------------------------------------------------


def embed_pattern(host: Graph, pattern: Graph, forbidden: int = 0,
                  budget: int = 400_000) -> list[int] | None:
    """An embedding of `pattern` into host avoiding `forbidden` vertices, as
    a list mapping pattern vertex -> host vertex; None if none found within
    the budget."""
    pn = pattern.n
    if pn == 0:
        return []
    order = sorted(range(pn), key=lambda v: -pattern.degree(v))
    pos = [-1] * pn
    state = {"used": forbidden, "steps": 0}

    def rec(i: int) -> bool:
        if i == pn:
            return True
        state["steps"] += 1
        if state["steps"] > budget:
            return False
        v = order[i]
        cand = host.full_mask & ~state["used"]
        for j in range(i):
            w = order[j]
            if pattern.has_edge(v, w):
                cand &= host.adj[pos[w]]
        for hv in bits(cand):
            pos[v] = hv
            state["used"] |= 1 << hv
            if rec(i + 1):
                return True
            state["used"] &= ~(1 << hv)
            pos[v] = -1
        return False

    if rec(0):
        return [pos[v] for v in range(pn)]
    return None


def disjoint_copies(host: Graph, pattern: Graph, count: int,
                    budget: int = 400_000) -> list[list[int]] | None:
    """`count` vertex-disjoint embeddings, greedily; None if short."""
    used = 0
    out = []
    for _ in range(count):
        emb = embed_pattern(host, pattern, forbidden=used, budget=budget)
        if emb is None:
            return None
        out.append(emb)
        used |= mask_of(emb)
    return out


# ---------------------------------------------------------------------------
# Odd cycle Maker
# ---------------------------------------------------------------------------


class MakerOddCycle(Strategy):
    """Unbiased Maker for an odd cycle C_{2l+1}, l >= 2: a dense regular
    pair supplies the even walk, one random edge inside a side supplies the
    parity breaker.  Stage I claims that edge and a star at its endpoint;
    Stage II walks 2l-1 alternating low-Breaker-degree steps."""

    def __init__(self, g_dense: Graph, g_rand: Graph, cycle_len: int,
                 consts: StrategyConstants, seed: int):
        if cycle_len < 5 or cycle_len % 2 == 0:
            raise ValueError("cycle length must be odd and >= 5")
        self.ell = (cycle_len - 1) // 2
        self.consts = consts
        self.seed = seed
        n = g_dense.n
        self.base = g_dense
        found = None
        for attempt in range(6):
            cfg = DensePairConfig(eta=consts.eta, delta=0.2, eps=0.45,
                                  mode="sampled", trials=200,
                                  seed=derive_seed(seed, "densepair", attempt))
            sets = find_dense_pair(g_dense, 2, cfg)
            if sets is None:
                continue
            d12 = pair_density(g_dense, sets[0], sets[1])
            # try either side as the one carrying the random edge
            for v1, v2 in (sets, sets[::-1]):
                v1p = mask_of(
                    v for v in bits(v1)
                    if (g_dense.adj[v] & v2).bit_count()
                    >= 0.6 * d12 * v2.bit_count()
                )
                v2p = mask_of(
                    v for v in bits(v2)
                    if (g_dense.adj[v] & v1).bit_count()
                    >= 0.6 * d12 * v1.bit_count()
                )
                for (u, v) in sorted(g_rand.edges):
                    if (v1p >> u) & 1 and (v1p >> v) & 1:
                        found = (v1, v2, v1p, v2p, (u, v))
                        break
                if found:
                    break
            if found:
                break
        if found is None:
            raise ValueError(
                "no random edge inside a filtered dense-pair side"
            )
        self.v1, self.v2, self.v1p, self.v2p, self.xy = found
        self.star_size = max(
            2 * self.ell, int(0.1 * self.v2p.bit_count()) + 2
        )

    def attach(self, game, side, rng):
        super().attach(game, side, rng)
        self.cursor = 0
        self.bdeg = [0] * self.base.n
        self.phase = "edge"
        self.ny = 0
        self.walk = [self.xy[0]]  # v_1 = x; y anchors the star
        self.step = 0

    def _sync(self, game):
        log = game.log
        while self.cursor < len(log):
            (u, v), s = log[self.cursor]
            self.cursor += 1
            if s != self.side:
                self.bdeg[u] += 1
                self.bdeg[v] += 1

    def move(self, game):
        self._sync(game)
        x, y = self.xy
        if self.phase == "edge":
            self.phase = "star"
            if canon_edge(x, y) in game.free:
                return canon_edge(x, y)
            return None
        if self.phase == "star":
            if self.ny >= self.star_size:
                self.phase = "walk"
            else:
                pool = [
                    canon_edge(y, w)
                    for w in bits(self.base.adj[y] & self.v2p)
                ]
                pool = [e for e in pool if e in game.free]
                if not pool:
                    self.phase = "walk"
                else:
                    self.ny += 1
                    e = pool[self.rng.randrange(len(pool))]
                    self._note_star(e, y)
                    return e
        if self.phase == "walk":
            return self._walk_move(game)
        # goal reached: stay legal
        return min(game.free, key=str) if game.free else None

    def _note_star(self, e, y):
        w = e[0] if e[1] == y else e[1]
        if not hasattr(self, "star_set"):
            self.star_set = 0
        self.star_set |= 1 << w

    def _walk_move(self, game):
        x, y = self.xy
        ny = getattr(self, "star_set", 0)
        need = max(self.ell, ny.bit_count() // 8)
        v1s = mask_of(
            v for v in bits(self.v1p)
            if (self.base.adj[v] & ny).bit_count() >= need
        )
        cap = self.base.n ** 0.5
        k = self.step + 1
        vk = self.walk[-1]
        if k > 2 * self.ell - 1:
            return None
        if k == 2 * self.ell - 1:
            # final step: land on a star vertex adjacent to the walk tip
            tgt = ny
        elif (self.v1 >> vk) & 1:
            tgt = self.v2p if k == 1 else ny
        else:
            tgt = v1s
        used = mask_of(self.walk) | (1 << y) | getattr(self, "star_used", 0)
        cands = []
        for z in bits(self.base.adj[vk] & tgt & ~used):
            e = canon_edge(vk, z)
            if e in game.free and self.bdeg[z] <= cap:
                cands.append((self.bdeg[z], z, e))
        if not cands:
            return None
        cands.sort()
        _, z, e = cands[0]
        self.walk.append(z)
        self.step += 1
        if self.step == 2 * self.ell - 1:
            self.phase = "close"
        return e

    def done(self, game):
        return self.phase == "close"

    def cycle_vertices(self):
        return self.walk + [self.xy[1]]


# ---------------------------------------------------------------------------
# Book Maker
# ---------------------------------------------------------------------------


def find_helper_book_graph(host: Graph, k: int, rng: Rng,
                           tries: int = 60):
    """Two vertex-disjoint k-matchings M1, M2 with all cross edges present:
    returns (M1 edges, M2 edges) or None.

    Greedy biclique growth over a disjoint-edge pool: each pool edge is
    offered to the smaller side first and joins a side only when fully
    cross-adjacent to the whole other side.
    """
    edges = sorted(host.edges)

    def compatible(pair_mask: int, other_side: list) -> bool:
        for (a, b) in other_side:
            need = pair_mask
            if (host.adj[a] & need) != need or (host.adj[b] & need) != need:
                return False
        return True

    # matching edges of the helper join have huge common neighbourhoods
    # (each sees the whole other side); plain cross edges do not
    cn = {
        e: (host.adj[e[0]] & host.adj[e[1]]).bit_count() for e in edges
    }
    for _ in range(tries):
        rng.shuffle(edges)
        edges.sort(key=lambda e: -cn[e])
        used = 0
        pool = []
        for (u, v) in edges:
            if (used >> u) & 1 or (used >> v) & 1:
                continue
            pool.append((u, v))
            used |= (1 << u) | (1 << v)
        m1: list = []
        m2: list = []
        for (u, v) in pool:
            pm = (1 << u) | (1 << v)
            first, second = (m1, m2) if len(m1) <= len(m2) else (m2, m1)
            if len(first) < k and compatible(pm, second):
                first.append((u, v))
            elif len(second) < k and compatible(pm, first):
                second.append((u, v))
            if len(m1) >= k and len(m2) >= k:
                return m1[:k], m2[:k]
    return None


class MakerBook(Strategy):
    """Unbiased Maker for a book with t pages: claim k/3 edges of each
    matching of the helper graph, then win two adjacent edges in each free
    4-edge cross gadget by initiate-and-respond pairing."""

    def __init__(self, union: Graph, pages_t: int, consts: StrategyConstants,
                 seed: int, k: int | None = None):
        self.t = pages_t
        self.k = k if k is not None else 12 * pages_t
        self.union = union
        found = find_helper_book_graph(union, self.k,
                                       Rng(derive_seed(seed, "bookF")))
        if found is None:
            raise ValueError("helper graph (joined matchings) not found")
        self.m1, self.m2 = found

    def attach(self, game, side, rng):
        super().attach(game, side, rng)
        self.cursor = 0
        self.mine: set = set()
        self.theirs: set = set()
        self.m1_own: list = []
        self.m2_own: list = []
        self.gadgets: list | None = None
        self.active_gadget = None

    def _sync(self, game):
        log = game.log
        while self.cursor < len(log):
            e, s = log[self.cursor]
            self.cursor += 1
            (self.mine if s == self.side else self.theirs).add(e)

    def _gadget_edges(self, ei, fj):
        (a, b), (c, d) = ei, fj
        return [canon_edge(x, y) for x in (a, b) for y in (c, d)]

    def move(self, game):
        self._sync(game)
        quota = max(1, self.k // 3)
        for pool, own in ((self.m1, self.m1_own), (self.m2, self.m2_own)):
            if len(own) < quota:
                for e in pool:
                    ce = canon_edge(*e)
                    if ce in self.mine and ce not in own:
                        own.append(ce)
                for e in pool:
                    ce = canon_edge(*e)
                    if ce in game.free and ce not in own:
                        return ce
        if self.gadgets is None:
            # select gadgets currently free of opponent edges
            self.gadgets = []
            for ei in self.m1_own[:quota]:
                for fj in self.m2_own[:quota]:
                    ge = self._gadget_edges(ei, fj)
                    if all(e not in self.theirs for e in ge):
                        self.gadgets.append(ge)
        # respond in the active gadget: claim an edge adjacent to ours
        for ge in self.gadgets:
            ours = [e for e in ge if e in self.mine]
            if len(ours) >= 2:
                continue
            free_in = [e for e in ge if e in game.free]
            if not free_in:
                continue
            if not ours:
                return free_in[0]
            (a, b) = ours[0]
            adj = [e for e in free_in if a in e or b in e]
            if adj:
                return adj[0]
        if game.free:
            return min(game.free, key=str)
        return None

    def page_count(self) -> int:
        """Max number of Maker triangles sharing one edge (the book size)."""
        adj: dict[int, set] = {}
        for (u, v) in self.mine:
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        best = 0
        for (u, v) in self.mine:
            pages = len(adj.get(u, set()) & adj.get(v, set()))
            best = max(best, pages)
        return best

    def done(self, game):
        return self.page_count() >= self.t


# ---------------------------------------------------------------------------
# Many copies (random strategy)
# ---------------------------------------------------------------------------


class ManyCopiesMaker(Strategy):
    """The random strategy: sample a uniformly random board edge not tried
    before; claim it if free, otherwise count a failure and resample (the
    proof-level semantics skip the move; resampling keeps the engine fed
    and records the same failure counter)."""

    def __init__(self, board_edges: list):
        self.board = list(board_edges)

    def attach(self, game, side, rng):
        super().attach(game, side, rng)
        self.pool = list(self.board)
        self.rng.shuffle(self.pool)
        self.failures = 0
        self.at = 0

    def move(self, game):
        while self.at < len(self.pool):
            e = self.pool[self.at]
            self.at += 1
            if e in game.free:
                return e
            self.failures += 1
        return min(game.free, key=str) if game.free else None

    def done(self, game):
        return self.at >= len(self.pool)


# ---------------------------------------------------------------------------
# General H-game Maker
# ---------------------------------------------------------------------------


class MakerHGame(MultiplexStrategy):
    """Unbiased Maker for a fixed H: keep every dense cross pair regular
    (balancer on sampled edge sets) and build H_i-copies inside each class
    at random; assemble the copy afterwards through dependent random
    choice.  FOLLOW policy: she answers on the board Breaker touched."""

    def __init__(self, g_dense: Graph, g_rand: Graph, pattern: TargetPattern,
                 consts: StrategyConstants, seed: int, r: int | None = None):
        h = pattern.h
        if pattern.partition is not None:
            parts = list(pattern.partition)
        else:
            r_eff = r if r is not None else 2
            _, parts = r_partite_two_density(h, r_eff)
        self.pattern_parts = parts
        self.h = h
        self.consts = consts
        self.seed = seed
        r_eff = len(parts)
        cfg = DensePairConfig(eta=consts.eta, delta=0.2, eps=0.45,
                              mode="sampled", trials=150,
                              seed=derive_seed(seed, "hg-pair"))
        sets = find_dense_pair(g_dense, r_eff, cfg)
        if sets is None:
            raise ValueError("no dense regular tuple found")
        self.classes = sets
        self.union_base = graph_union(g_dense, g_rand)

        boards, strategies = [], []
        self.balancers = []
        rng = Rng(derive_seed(seed, "hg-track"))
        for i in range(r_eff):
            for j in range(i + 1, r_eff):
                board = _cross_edges(g_dense, sets[i], sets[j])
                if not board:
                    continue
                tracked = _tracked_subcuts(g_dense, sets[i], sets[j],
                                           consts, rng)
                strat = BalancerStrategy(tracked, consts.balancer_eps, 1,
                                         pool_size=24)
                boards.append(board)
                strategies.append(strat)
                self.balancers.append(strat)
        self.inside_strats = []
        for i in range(r_eff):
            board = sorted(
                e for e in g_rand.edges
                if (sets[i] >> e[0]) & 1 and (sets[i] >> e[1]) & 1
            )
            if board:
                strat = ManyCopiesMaker(board)
                boards.append(board)
                strategies.append(strat)
                self.inside_strats.append(strat)
        super().__init__(boards, strategies, FOLLOW)

    def assemble(self, maker_graph: Graph, rng: Rng | None = None):
        """Search a Maker H-copy along the class structure, classes in
        order: embed H_s inside the surviving pool of class s, shrink the
        later pools to common Maker-neighbourhoods of the placed vertices,
        and refine the next pool by dependent random choice when there are
        classes beyond it.  Returns the vertex embedding or None."""
        rng = rng or Rng(derive_seed(self.seed, "assemble"))
        parts = self.pattern_parts
        r = len(parts)
        mg = maker_graph
        pools = [c for c in self.classes]
        placed: dict[int, int] = {}
        ell = max((p.bit_count() for p in parts), default=1)
        for s in range(r):
            part_vertices = sorted(bits(parts[s]))
            if part_vertices:
                sub_pat = relabelled_induced(self.h, parts[s])
                host = _induced_on(mg, pools[s])
                forbid = host.full_mask & ~pools[s]
                emb = embed_pattern(host, sub_pat, forbidden=forbid,
                                    budget=200_000)
                if emb is None:
                    return None
                for pv, hv in zip(part_vertices, emb):
                    placed[pv] = hv
            taken = mask_of(placed.values())
            # later pools shrink to the copy's common Maker-neighbourhood
            for t in range(s + 1, r):
                cn = pools[t]
                for pv in part_vertices:
                    if any(self.h.has_edge(pv, qv) for qv in bits(parts[t])):
                        cn &= mg.adj[placed[pv]]
                cn &= ~taken
                if cn.bit_count() < parts[t].bit_count():
                    return None
                pools[t] = cn
            # DRC refinement of the next pool against the ones after it
            if s + 2 < r and pools[s + 1].bit_count() > ell:
                u = dependent_random_choice(
                    mg,
                    [pools[t] for t in range(s + 1, r)],
                    ell=min(ell, 3),
                    nu=self.consts.drc_nu,
                    seed=rng.u64(),
                    subset_budget=20_000,
                )
                if u is not None and u.bit_count() >= parts[s + 1].bit_count():
                    pools[s + 1] = u
        for (u, v) in self.h.edges:
            if not mg.has_edge(placed[u], placed[v]):
                return None
        return [placed[v] for v in range(self.h.n)]

    def stage_report(self, game, rng: Rng | None = None) -> list[StageGoal]:
        mg = game.gview.maker_graph()
        emb = self.assemble(mg, rng)
        return [StageGoal("h_copy_assembled", emb is not None)]


def _cross_edges(g: Graph, am: int, bm: int) -> list:
    out = set()
    for u in bits(am):
        for v in bits(g.adj[u] & bm):
            out.add(canon_edge(u, v))
    return sorted(out)


def _induced_on(g: Graph, mask: int) -> Graph:
    return Graph(
        g.n,
        [e for e in g.edges if (mask >> e[0]) & 1 and (mask >> e[1]) & 1],
    )


def _tracked_subcuts(g: Graph, am: int, bm: int, consts: StrategyConstants,
                     rng: Rng, count: int = 30) -> list:
    """Sampled (S,T) sub-cut edge sets the balancer keeps proportional."""
    averts, bverts = sorted(bits(am)), sorted(bits(bm))
    sa = max(2, len(averts) // 3)
    sb = max(2, len(bverts) // 3)
    out = []
    full = _cross_edges(g, am, bm)
    if full:
        out.append(full)
    for _ in range(count - 1):
        s = mask_of(rng.sample(averts, sa))
        t = mask_of(rng.sample(bverts, sb))
        cut = _cross_edges(g, s, t)
        if len(cut) >= 4:
            out.append(cut)
    return out


# ---------------------------------------------------------------------------
# Waiter H-game (pairing induction)
# ---------------------------------------------------------------------------


class WaiterHGame(Strategy):
    """Offer the copies' current-edge in pairs; the picked copy advances,
    the other dies; recurse on H minus that edge with half the copies.
    Wins against every Client within exactly sum_i k(H)/2^i rounds per
    edge-elimination level."""

    def __init__(self, board_host: Graph, pattern: Graph, copies=None,
                 seed: int = 0):
        self.pattern = pattern
        self.k = 2 ** pattern.m
        if copies is None:
            copies = disjoint_copies(board_host, pattern, self.k)
            if copies is None:
                raise ValueError(
                    f"board lacks {self.k} disjoint target copies"
                )
        if len(copies) != self.k:
            raise ValueError("need exactly 2^e(H) copies")
        self.copies = copies
        self.edge_order = sorted(pattern.edges)

    def attach(self, game, side, rng):
        super().attach(game, side, rng)
        self.level = 0
        self.live = list(range(self.k))
        self.cursor = 0
        self.client: set = set()
        self.expected_rounds = sum(
            self.k >> (i + 1) for i in range(len(self.edge_order))
        )

    def _copy_edge(self, ci: int, pe) -> tuple:
        emb = self.copies[ci]
        return canon_edge(emb[pe[0]], emb[pe[1]])

    def _sync(self, game):
        log = game.log
        while self.cursor < len(log):
            e, s = log[self.cursor]
            self.cursor += 1
            if s == P1:
                self.client.add(e)

    def offer(self, game, size):
        self._sync(game)
        while self.level < len(self.edge_order):
            pe = self.edge_order[self.level]
            pending = [
                ci
                for ci in self.live
                if self._copy_edge(ci, pe) not in self.client
                and self._copy_edge(ci, pe) in game.free
            ]
            advanced = [
                ci for ci in self.live if self._copy_edge(ci, pe) in self.client
            ]
            if len(advanced) >= max(1, len(self.live) // 2) or not pending:
                self.live = advanced
                self.level += 1
                continue
            if len(pending) >= 2:
                a, b = pending[0], pending[1]
                return [self._copy_edge(a, pe), self._copy_edge(b, pe)]
            # a single pending copy: pad with an arbitrary free edge
            pool = sorted(game.free, key=str)
            pad = next(
                e for e in pool if e != self._copy_edge(pending[0], pe)
            )
            return [self._copy_edge(pending[0], pe), pad]
        return sorted(game.free, key=str)[:size]

    def done(self, game):
        return self.level >= len(self.edge_order)

    def client_has_copy(self, game) -> bool:
        self._sync(game)
        for ci in range(self.k):
            if all(
                self._copy_edge(ci, pe) in self.client
                for pe in self.edge_order
            ):
                return True
        return False
