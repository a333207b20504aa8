"""k-vertex-connectivity strategies on perturbed boards."""

from __future__ import annotations

from ..engine import MultiplexStrategy, P1, ROUND_ROBIN, Strategy
from ..graph import (
    Graph,
    bits,
    canon_edge,
    connected_components,
    mask_of,
    relabelled_induced,
)
from ..randgraphs import (
    balanced_degree_partition,
    highly_connected_partition,
    random_balanced_partition,
    split_connected,
)
from ..rng import Rng, derive_seed
from .constants import StrategyConstants
from .families import CutFamily, CutTransversalBuilder, DegreeForcingWaiter
from .hamiltonicity import StageGoal, StagedWaiter, block_edges


class ConnCutFamily:
    """{ E(S, V_i \\ (S u K)) : |K| <= k-1, S subset of V_i \\ K }: the cuts
    whose transversal makes Maker's class graph k-connected.  Sampled."""

    def __init__(self, base: Graph, class_mask: int, k: int,
                 max_s_frac: float = 0.5):
        self.base = base
        self.cls = class_mask
        self.k = k
        self.verts = sorted(bits(class_mask))
        self.max_s = max(1, int(len(self.verts) * max_s_frac))

    def sample(self, rng: Rng):
        ksz = rng.randrange(self.k)  # 0..k-1
        kill = set(rng.sample(self.verts, ksz)) if ksz else set()
        rest = [v for v in self.verts if v not in kill]
        ssz = rng.randint(1, min(self.max_s, max(1, len(rest) - 1)))
        s = set(rng.sample(rest, ssz))
        sm = mask_of(s)
        om = self.cls & ~sm & ~mask_of(kill)
        return sm, om

    def cut_edges(self, sm: int, om: int):
        out = []
        for u in bits(sm):
            for v in bits(self.base.adj[u] & om):
                out.append(canon_edge(u, v))
        return out


class ClassConnectivityBuilder(Strategy):
    """Maker play on one class board: patch the thinnest sampled
    connectivity cut (small S samples double as degree forcing)."""

    def __init__(self, family: ConnCutFamily, samples: int = 24,
                 done_checks: int = 4):
        self.family = family
        self.samples = samples
        self.done_checks = done_checks

    def attach(self, game, side, rng):
        super().attach(game, side, rng)
        self.cursor = 0
        self.mine: set = set()
        self.clean_streak = 0

    def _sync(self, game):
        log = game.log
        while self.cursor < len(log):
            e, s = log[self.cursor]
            self.cursor += 1
            if s == self.side:
                self.mine.add(e)

    def move(self, game):
        self._sync(game)
        if not game.free:
            return None
        thin = []
        for _ in range(self.samples):
            sm, om = self.family.sample(self.rng)
            cut = self.family.cut_edges(sm, om)
            if cut and not any(e in self.mine for e in cut):
                free_in = [e for e in cut if e in game.free]
                if free_in:
                    thin.append((len(free_in), free_in))
        if not thin:
            self.clean_streak += 1
            # spread: lowest maker-degree endpoint
            deg: dict[int, int] = {}
            for (u, v) in self.mine:
                deg[u] = deg.get(u, 0) + 1
                deg[v] = deg.get(v, 0) + 1
            return min(
                game.free,
                key=lambda e: (min(deg.get(e[0], 0), deg.get(e[1], 0)), e),
            )
        self.clean_streak = 0
        thin.sort(key=lambda t: t[0])
        return thin[0][1][0]

    def done(self, game):
        return self.clean_streak >= self.done_checks

    def audit(self, game, samples: int, rng: Rng) -> int:
        self._sync(game)
        bad = 0
        for _ in range(samples):
            sm, om = self.family.sample(rng)
            cut = self.family.cut_edges(sm, om)
            if cut and not any(e in self.mine for e in cut):
                bad += 1
        return bad


class MatchingBuilder(Strategy):
    """Claim one edge between each block pair (V_{i,l}, V_{s,l}); the
    thinnest unserved pair first.  Exhausted pair with no Maker edge means
    a forfeit (None)."""

    def __init__(self, base: Graph, pairs: list[tuple[int, int]]):
        self.base = base
        self.pairs = pairs

    def attach(self, game, side, rng):
        super().attach(game, side, rng)
        self.cursor = 0
        self.have = [False] * len(self.pairs)

    def _sync(self, game):
        log = game.log
        while self.cursor < len(log):
            (u, v), s = log[self.cursor]
            self.cursor += 1
            if s != self.side:
                continue
            for i, (am, bm) in enumerate(self.pairs):
                if ((am >> u) & 1 and (bm >> v) & 1) or (
                    (am >> v) & 1 and (bm >> u) & 1
                ):
                    self.have[i] = True

    def _free_in_pair(self, game, i):
        am, bm = self.pairs[i]
        out = []
        for u in bits(am):
            for v in bits(self.base.adj[u] & bm):
                e = canon_edge(u, v)
                if e in game.free:
                    out.append(e)
        return out

    def move(self, game):
        self._sync(game)
        best = None
        for i in range(len(self.pairs)):
            if self.have[i]:
                continue
            pool = self._free_in_pair(game, i)
            if not pool:
                return None  # pair exhausted without a Maker edge: forfeit
            if best is None or len(pool) < len(best[1]):
                best = (i, pool)
        if best is None:
            return min(game.free, key=str) if game.free else None
        return best[1][0]

    def done(self, game):
        self._sync(game)
        return all(self.have)


class MakerKConn(MultiplexStrategy):
    """Maker k-connectivity: highly connected class partition, a
    connectivity-cut transversal per class, and k-matchings from every
    class to the last one; 2s-1 boards round-robin."""

    def __init__(self, union: Graph, g_dense: Graph, g_rand: Graph, b: int,
                 k: int, consts: StrategyConstants, seed: int):
        self.k = k
        self.consts = consts
        kappa = max(k + 1, consts.kconn_kappa_min)
        part = highly_connected_partition(g_dense, kappa)
        if not part.certified:
            part = highly_connected_partition(g_dense, k + 1)
        if not part.certified:
            raise ValueError("no highly connected partition at this kappa")
        self.classes = part.classes
        s = len(self.classes)
        rng = Rng(derive_seed(seed, "kconn"))

        boards, strategies = [], []
        self.class_strats: list[ClassConnectivityBuilder] = []
        for cm in self.classes:
            board = sorted(
                e for e in union.edges
                if (cm >> e[0]) & 1 and (cm >> e[1]) & 1
            )
            fam = ConnCutFamily(union, cm, k)
            strat = ClassConnectivityBuilder(fam, consts.sample_sets)
            boards.append(board)
            strategies.append(strat)
            self.class_strats.append(strat)

        # block split of each class into k parts; cross boards to the last
        self.blocks = []
        for cm in self.classes:
            verts = sorted(bits(cm))
            order = list(verts)
            rng.shuffle(order)
            sz = max(1, len(order) // k)
            blocks = [
                mask_of(order[i * sz : (i + 1) * sz if i < k - 1 else len(order)])
                for i in range(k)
            ]
            self.blocks.append(blocks)
        self.match_strats = []
        for i in range(s - 1):
            pairs = [
                (self.blocks[i][l], self.blocks[s - 1][l]) for l in range(k)
            ]
            board = block_edges(union, self.classes[i], self.classes[s - 1])
            strat = MatchingBuilder(union, pairs)
            boards.append(board)
            strategies.append(strat)
            self.match_strats.append(strat)
        super().__init__(boards, strategies, ROUND_ROBIN)

    def stage_report(self, game, rng: Rng | None = None) -> list[StageGoal]:
        rng = rng or Rng(999)
        self._sync()
        goals = []
        for i, strat in enumerate(self.class_strats):
            bad = strat.audit(self.views[i], self.consts.audit_samples,
                              rng.split("cls", i))
            goals.append(
                StageGoal(f"class{i}_cuts", bad == 0, f"violations={bad}")
            )
        for j, strat in enumerate(self.match_strats):
            goals.append(
                StageGoal(
                    f"matching{j}",
                    strat.done(self.views[len(self.class_strats) + j]),
                )
            )
        return goals


class ComponentMergeWaiter(Strategy):
    """Waiter stage: while Client's graph is disconnected inside a block,
    offer free edges between one component pair (>=2 of them), so the pick
    merges two components."""

    def __init__(self, base: Graph, block_masks: list[int]):
        self.base = base
        self.blocks = block_masks

    def attach(self, game, side, rng):
        super().attach(game, side, rng)
        self.cursor = 0
        self.client_adj = [0] * self.base.n

    def _sync(self, game):
        log = game.log
        while self.cursor < len(log):
            (u, v), s = log[self.cursor]
            self.cursor += 1
            if s == P1:
                self.client_adj[u] |= 1 << v
                self.client_adj[v] |= 1 << u

    def _components(self, bm: int) -> list[int]:
        comps = []
        rest = bm
        while rest:
            seed = rest & -rest
            seen, frontier = seed, seed
            while frontier:
                nxt = 0
                for v in bits(frontier):
                    nxt |= self.client_adj[v]
                nxt &= bm & ~seen
                seen |= nxt
                frontier = nxt
            comps.append(seen)
            rest &= ~seen
        return comps

    def _find_offer(self, game):
        for bm in self.blocks:
            comps = self._components(bm)
            if len(comps) <= 1:
                continue
            for ci in range(len(comps)):
                for cj in range(ci + 1, len(comps)):
                    pool = []
                    for u in bits(comps[ci]):
                        for v in bits(self.base.adj[u] & comps[cj]):
                            e = canon_edge(u, v)
                            if e in game.free:
                                pool.append(e)
                    if len(pool) >= 2:
                        return pool
        return None

    def offer(self, game, size):
        self._sync(game)
        pool = self._find_offer(game)
        if pool is None:
            return sorted(game.free, key=str)[:size]
        return pool[:size]

    def done(self, game):
        self._sync(game)
        return all(len(self._components(bm)) <= 1 for bm in self.blocks)


class PairLinkWaiter(Strategy):
    """One offer per pool pair from a fixed edge pool list (Stage III of
    the Waiter connectivity build: random edges between block pairs)."""

    def __init__(self, pools: list[list]):
        self.pools = [list(p) for p in pools]

    def attach(self, game, side, rng):
        super().attach(game, side, rng)
        self.at = 0
        self.cursor = 0
        self.linked = [False] * len(self.pools)

    def _sync(self, game):
        log = game.log
        while self.cursor < len(log):
            e, s = log[self.cursor]
            self.cursor += 1
            if s == P1:
                for i, pool in enumerate(self.pools):
                    if e in pool:
                        self.linked[i] = True

    def offer(self, game, size):
        self._sync(game)
        for i, pool in enumerate(self.pools):
            if self.linked[i]:
                continue
            free = [e for e in pool if e in game.free]
            if len(free) >= 2:
                return free[:size]
        return sorted(game.free, key=str)[:size]

    def done(self, game):
        self._sync(game)
        for i, pool in enumerate(self.pools):
            if not self.linked[i] and len(
                [e for e in pool if e in game.free]
            ) >= 2:
                return False
        return True


class WaiterKConn(StagedWaiter):
    """Waiter k-connectivity in four stages: expander/degree forcing on one
    half of each block, component merging on the other half, one link per
    block pair on the random edges, then cross-class degree forcing."""

    def __init__(self, union: Graph, g_dense: Graph, g_rand: Graph, b: int,
                 k: int, consts: StrategyConstants, seed: int):
        self.k = k
        self.consts = consts
        n = g_dense.n
        alpha_eff = g_dense.min_degree() / max(n, 1)
        res = balanced_degree_partition(g_dense, k, alpha_eff,
                                        derive_seed(seed, "u"), 150)
        if res.certified:
            self.us = res.classes
        else:
            self.us = random_balanced_partition(
                n, k, Rng(derive_seed(seed, "uf")))
        # split each U_i into highly connected blocks, then halve each block
        self.blocks: list[int] = []
        halves: list[tuple[Graph, Graph]] = []
        for um in self.us:
            sub = relabelled_induced(g_dense, um)
            ids = sorted(bits(um))
            part = highly_connected_partition(sub, max(2, k))
            block_masks = (
                [mask_of(ids[v] for v in bits(bm)) for bm in part.classes]
                if part.certified
                else [um]
            )
            for bm in block_masks:
                self.blocks.append(bm)
                bsub_ids = sorted(bits(bm))
                bsub = relabelled_induced(g_dense, bm)
                got = split_connected(
                    bsub, 1, derive_seed(seed, "half", bm), 40
                )
                if got is None:
                    halves.append((bsub, bsub))
                else:
                    halves.append((got[0], got[1]))
        # stage I: client degree forcing inside first halves
        deg_pairs = []
        h1_edges: set = set()
        h2_edges: set = set()
        for bm, (h1, h2) in zip(self.blocks, halves):
            ids = sorted(bits(bm))
            for (u, v) in h1.edges:
                h1_edges.add(canon_edge(ids[u], ids[v]))
            for (u, v) in h2.edges:
                h2_edges.add(canon_edge(ids[u], ids[v]))
            deg_pairs.append((bm, bm))
        g_h1 = Graph(n, h1_edges)
        self.g_h2 = Graph(n, h2_edges)
        target = max(2, min(4, max(1, g_h1.min_degree()) // 2 + 1))
        stage1 = DegreeForcingWaiter(g_h1, deg_pairs, target)
        stage2 = ComponentMergeWaiter(self.g_h2, self.blocks)
        # stage III pools: random edges between blocks of the same class
        pools = []
        for um in self.us:
            blocks_here = [bm for bm in self.blocks if bm & um]
            for i in range(len(blocks_here)):
                for j in range(i + 1, len(blocks_here)):
                    pool = block_edges(g_rand, blocks_here[i], blocks_here[j])
                    if pool:
                        pools.append(pool)
        stage3 = PairLinkWaiter(pools)
        # stage IV: every vertex of U_i1 gets a client neighbour in U_i2
        cross_pairs = []
        for i1 in range(k):
            for i2 in range(k):
                if i1 != i2:
                    cross_pairs.append((self.us[i1], self.us[i2]))
        stage4 = DegreeForcingWaiter(g_dense, cross_pairs, 1)
        self.merge_stage = stage2
        super().__init__([stage1, stage2, stage3, stage4])

    def stage_report(self, game, rng: Rng | None = None) -> list[StageGoal]:
        goals = [
            StageGoal("degree_forcing", self.stages[0].done(game)),
            StageGoal("blocks_connected", self.merge_stage.done(game)),
            StageGoal("pair_links", self.stages[2].done(game)),
            StageGoal("cross_degrees", self.stages[3].done(game)),
        ]
        return goals
