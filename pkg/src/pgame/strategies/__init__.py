"""Strategy registry: composite board strategies and the adversary suite,
addressable by name for the CLI and experiment configs.

A builder receives a BoardContext (union graph, dense leftovers, random
part, parameters, seed) and returns a fresh Strategy instance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..graph import Graph
from ..engine import Strategy
from ..rng import derive_seed
from .adversaries import (
    FloodBreaker,
    GreedyBreaker,
    GreedyClient,
    K4BlockBreaker,
    K4StarMaker,
    RandomOpponent,
)
from .connectivity import MakerKConn, WaiterKConn
from .constants import StrategyConstants, desk, paper
from .hamiltonicity import (
    BoosterMaker,
    MakerHamLargeBias,
    MakerHamSmallBias,
    WaiterHam,
)
from .hgame import (
    MakerBook,
    MakerHGame,
    MakerOddCycle,
    ManyCopiesMaker,
    WaiterHGame,
    disjoint_copies,
    embed_pattern,
)


@dataclass
class BoardContext:
    union: Graph
    dense_part: Graph       # G_alpha minus the random edges
    random_part: Graph
    bias: int
    seed: int
    params: dict = field(default_factory=dict)

    def consts(self) -> StrategyConstants:
        preset = self.params.get("preset", "desk")
        if preset == "paper":
            alpha = self.params.get("alpha", 0.3)
            return paper(alpha, self.union.n, self.bias)
        c = desk()
        for k, v in self.params.get("consts", {}).items():
            setattr(c, k, v)
        return c


def _maker_ham_small_bias(ctx: BoardContext) -> Strategy:
    from .families import DegreeGuardedMaker

    inner = MakerHamSmallBias(ctx.dense_part, ctx.random_part, ctx.bias,
                              ctx.consts(), ctx.seed)
    return DegreeGuardedMaker(
        inner,
        bias=ctx.bias,
        target=int(ctx.params.get("guard_target", 8)),
        threshold=int(ctx.params.get("guard_threshold", 8)),
    )


def _maker_ham_large_bias(ctx: BoardContext) -> Strategy:
    return MakerHamLargeBias(ctx.dense_part, ctx.random_part, ctx.bias,
                             ctx.consts(), ctx.seed)


def _waiter_ham(ctx: BoardContext) -> Strategy:
    return WaiterHam(ctx.dense_part, ctx.random_part, ctx.bias, ctx.consts(),
                     ctx.seed, case=ctx.params.get("case", "auto"))


def _maker_kconn(ctx: BoardContext) -> Strategy:
    from .families import DegreeGuardedMaker

    k = int(ctx.params.get("k", 2))
    inner = MakerKConn(ctx.union, ctx.dense_part, ctx.random_part, ctx.bias,
                       k, ctx.consts(), ctx.seed)
    return DegreeGuardedMaker(
        inner,
        bias=ctx.bias,
        target=int(ctx.params.get("guard_target", k + 3)),
        threshold=int(ctx.params.get("guard_threshold", 8)),
    )


def _waiter_kconn(ctx: BoardContext) -> Strategy:
    return WaiterKConn(ctx.union, ctx.dense_part, ctx.random_part, ctx.bias,
                       int(ctx.params.get("k", 2)), ctx.consts(), ctx.seed)


def _maker_odd_cycle(ctx: BoardContext) -> Strategy:
    return MakerOddCycle(ctx.dense_part, ctx.random_part,
                         int(ctx.params.get("cycle_len", 5)), ctx.consts(),
                         ctx.seed)


def _maker_book(ctx: BoardContext) -> Strategy:
    return MakerBook(ctx.union, int(ctx.params.get("pages", 1)),
                     ctx.consts(), ctx.seed,
                     k=ctx.params.get("book_k"))


def _maker_h_game(ctx: BoardContext) -> Strategy:
    from ..density import TargetPattern
    from ..graph import read_edgelist

    h = ctx.params.get("pattern_graph")
    if h is None:
        h = read_edgelist(ctx.params["pattern_text"])
    pat = TargetPattern(h, ctx.params.get("pattern_partition"))
    return MakerHGame(ctx.dense_part, ctx.random_part, pat, ctx.consts(),
                      ctx.seed, r=ctx.params.get("r"))


def _maker_many_copies(ctx: BoardContext) -> Strategy:
    return ManyCopiesMaker(sorted(ctx.union.edges))


def _waiter_h_game(ctx: BoardContext) -> Strategy:
    from ..graph import read_edgelist

    h = ctx.params.get("pattern_graph")
    if h is None:
        h = read_edgelist(ctx.params["pattern_text"])
    return WaiterHGame(ctx.union, h, seed=ctx.seed)


def _random_opponent(ctx: BoardContext) -> Strategy:
    return RandomOpponent()


def _greedy_breaker(ctx: BoardContext) -> Strategy:
    return GreedyBreaker()


def _flood_breaker(ctx: BoardContext) -> Strategy:
    target = ctx.params.get("flood_edges")
    if target is None:
        # default lower-bound flood: the random edges inside the big side
        # of a complete-bipartite dense board (vertices past alpha*n)
        alpha = float(ctx.params.get("alpha", 0.3))
        cut = int(alpha * ctx.union.n)
        target = [
            e for e in ctx.random_part.edges if e[0] >= cut and e[1] >= cut
        ]
    return FloodBreaker(target)


def _greedy_client(ctx: BoardContext) -> Strategy:
    return GreedyClient()


def _danger(ctx: BoardContext) -> Strategy:
    from ..potentials import DangerStrategy

    return DangerStrategy(ctx.bias,
                          int(ctx.params.get("degree_target", 16)))


def _k4_star_maker(ctx: BoardContext) -> Strategy:
    return K4StarMaker()


def _k4_block_breaker(ctx: BoardContext) -> Strategy:
    return K4BlockBreaker()


REGISTRY = {
    "maker_ham_small_bias": _maker_ham_small_bias,
    "maker_ham_large_bias": _maker_ham_large_bias,
    "waiter_ham": _waiter_ham,
    "maker_kconn": _maker_kconn,
    "waiter_kconn": _waiter_kconn,
    "maker_odd_cycle": _maker_odd_cycle,
    "maker_book": _maker_book,
    "maker_h_game": _maker_h_game,
    "maker_many_copies": _maker_many_copies,
    "waiter_h_game": _waiter_h_game,
    "random_opponent": _random_opponent,
    "greedy_breaker": _greedy_breaker,
    "flood_breaker": _flood_breaker,
    "greedy_client": _greedy_client,
    "random_client": _random_opponent,
    "danger": _danger,
    "k4_star_maker": _k4_star_maker,          # experimental
    "k4_block_breaker": _k4_block_breaker,    # experimental
}


def build_strategy(name: str, ctx: BoardContext) -> Strategy:
    if name not in REGISTRY:
        raise KeyError(f"unknown strategy {name!r}")
    return REGISTRY[name](ctx)
