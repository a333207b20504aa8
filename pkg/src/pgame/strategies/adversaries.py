"""The opponent suite: random, greedy, flooding and exact-minimax players,
plus the experimental clique-game extras.
"""

from __future__ import annotations

from ..engine import (
    Hypergraph,
    MinimaxBreakerStrategy,
    MinimaxClientStrategy,
    MinimaxMakerStrategy,
    MinimaxMB,
    MinimaxWC,
    Strategy,
)
from ..graph import Graph, bits, canon_edge


class RandomOpponent(Strategy):
    """Uniform legal play in every role."""

    def move(self, game):
        return self.rng.choice(sorted(game.free, key=str))

    def moves(self, game, count):
        return self.rng.sample(sorted(game.free, key=str), count)

    def offer(self, game, size):
        return self.rng.sample(sorted(game.free, key=str), size)

    def pick(self, game, offered):
        return self.rng.choice(list(offered))


class GreedyBreaker(Strategy):
    """Graph boards: isolation flooding.  Each claim goes to the vertex
    maximising d_B(v) - 2*d_M(v) among vertices that still have free edges
    and are not already saturated by Maker; the claimed edge is the one
    whose far endpoint has the fewest free edges left.

    Hypergraph boards (explicit family given): claim the element lying in
    the most winning sets that are one element from Maker completion.
    """

    def __init__(self, family: list | None = None, saturation: int = 0):
        self.family = [frozenset(f) for f in family] if family else None
        self.saturation = saturation

    def attach(self, game, side, rng):
        super().attach(game, side, rng)
        self.cursor = 0
        if game.gview is not None:
            n = game.gview.n
            self.dm = [0] * n
            self.db = [0] * n

    def _sync(self, game):
        if game.gview is None:
            return
        log = game.log
        while self.cursor < len(log):
            (u, v), s = log[self.cursor]
            self.cursor += 1
            tgt = self.db if s == self.side else self.dm
            tgt[u] += 1
            tgt[v] += 1

    def _graph_move(self, game, taken):
        gv = game.gview
        best_v, best_score = None, None
        for v in range(gv.n):
            free_adj = gv.free_adj[v]
            if not free_adj:
                continue
            if self.saturation and self.dm[v] >= self.saturation:
                continue
            score = self.db[v] - 2 * self.dm[v]
            if best_score is None or score > best_score:
                best_v, best_score = v, score
        if best_v is None:
            pool = [e for e in sorted(game.free) if e not in taken]
            return pool[0] if pool else None
        cands = []
        for w in bits(gv.free_adj[best_v]):
            e = canon_edge(best_v, w)
            if e in game.free and e not in taken:
                cands.append((gv.free_adj[w].bit_count(), e))
        if not cands:
            pool = [e for e in sorted(game.free) if e not in taken]
            return pool[0] if pool else None
        return min(cands)[1]

    def _threat_move(self, game, taken):
        owned = {e for e, s in game.log if s != self.side}
        mine = {e for e, s in game.log if s == self.side}
        score: dict = {}
        for f in self.family:
            if f & mine:
                continue
            missing = [e for e in f if e not in owned]
            if len(missing) == 1 and missing[0] in game.free:
                e = missing[0]
                score[e] = score.get(e, 0) + 1
        pool = [e for e in sorted(game.free, key=str) if e not in taken]
        if not pool:
            return None
        if score:
            live = [e for e in pool if e in score]
            if live:
                return max(live, key=lambda e: (score[e], str(e)))
        return pool[0]

    def moves(self, game, count):
        self._sync(game)
        out: list = []
        for _ in range(count):
            if game.gview is not None and self.family is None:
                e = self._graph_move(game, set(out))
                if e is not None:
                    u, v = e
                    self.db[u] += 1
                    self.db[v] += 1
            else:
                e = self._threat_move(game, set(out))
            if e is None:
                break
            out.append(e)
        # undo local degree updates; the next _sync replays them
        for (u, v) in out:
            if game.gview is not None and self.family is None:
                self.db[u] -= 1
                self.db[v] -= 1
        return out


class FloodBreaker(Strategy):
    """Claims only inside a fixed target edge set until it is exhausted
    (the lower-bound constructions: e.g. the random edges inside the big
    side of a complete bipartite dense part)."""

    def __init__(self, target_edges):
        self.target = {canon_edge(u, v) for u, v in target_edges}

    def moves(self, game, count):
        pool = sorted(e for e in game.free if e in self.target)
        out = pool[:count]
        if len(out) < count:
            rest = sorted(e for e in game.free if e not in self.target)
            out += rest[: count - len(out)]
        return out


class GreedyClient(Strategy):
    """Adversarial client: concentrates her picks on vertices she already
    owns (hub-hoarding starves spanning structures)."""

    def attach(self, game, side, rng):
        super().attach(game, side, rng)
        self.cursor = 0
        self.deg: dict[int, int] = {}

    def pick(self, game, offered):
        log = game.log
        while self.cursor < len(log):
            e, s = log[self.cursor]
            self.cursor += 1
            if s == self.side and isinstance(e, tuple):
                self.deg[e[0]] = self.deg.get(e[0], 0) + 1
                self.deg[e[1]] = self.deg.get(e[1], 0) + 1

        def score(e):
            if isinstance(e, tuple):
                return self.deg.get(e[0], 0) + self.deg.get(e[1], 0)
            return 0

        return max(offered, key=score)


def minimax_opponent_mb(hg: Hypergraph, bias: int, side: str,
                        canonical=None):
    solver = MinimaxMB(hg, bias, canonical=canonical)
    if side == "maker":
        return MinimaxMakerStrategy(solver)
    return MinimaxBreakerStrategy(solver)


def minimax_opponent_wc(hg: Hypergraph, bias: int):
    return MinimaxClientStrategy(MinimaxWC(hg, bias))


# -- experimental clique-game extras (no acceptance weight) ------------------


class K4StarMaker(Strategy):
    """Experimental: grab 4-edge stars in both classes of a bipartite-ish
    board, then finish a K4 between a clean star pair.  Heuristic only."""

    def attach(self, game, side, rng):
        super().attach(game, side, rng)
        self.cursor = 0
        self.deg: dict[int, int] = {}

    def move(self, game):
        log = game.log
        while self.cursor < len(log):
            (u, v), s = log[self.cursor]
            self.cursor += 1
            if s == self.side:
                self.deg[u] = self.deg.get(u, 0) + 1
                self.deg[v] = self.deg.get(v, 0) + 1
        # extend an existing near-star; otherwise start a new one
        best = None
        for (u, v) in sorted(game.free):
            s = max(self.deg.get(u, 0), self.deg.get(v, 0))
            score = s if s < 4 else -1
            if best is None or score > best[0]:
                best = (score, (u, v))
        return best[1] if best else None


class K4BlockBreaker(Strategy):
    """Experimental: kill Maker cherries (paths of two Maker edges), the
    last step before a triangle; otherwise flood Maker's densest vertex."""

    def moves(self, game, count):
        mine: set = set()
        theirs: set = set()
        for e, s in game.log:
            (theirs if s != self.side else mine).add(e)
        adj: dict[int, set] = {}
        for (u, v) in theirs:
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        out = []
        for (u, v) in sorted(game.free):
            if len(out) >= count:
                break
            if adj.get(u) and adj.get(v) and adj[u] & adj[v]:
                out.append((u, v))  # closes a Maker triangle: kill it
        for e in sorted(game.free):
            if len(out) >= count:
                break
            if e not in out:
                out.append(e)
        return out[:count]
