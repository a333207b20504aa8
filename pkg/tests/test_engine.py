from math import ceil

import pytest

from pgame.engine import (
    FREE,
    P1,
    P2,
    Hypergraph,
    MakerBreakerGame,
    MinimaxBreakerStrategy,
    MinimaxClientStrategy,
    MinimaxMB,
    MinimaxMakerStrategy,
    MinimaxWC,
    MultiplexStrategy,
    ROUND_ROBIN,
    FOLLOW,
    ScriptedStrategy,
    Strategy,
    Transcript,
    WaiterClientGame,
    fake_moves_mb,
    fake_moves_wc,
    play_mb,
    play_wc,
    replay,
    transcript_from_text,
    transcript_to_text,
    win_graph,
    win_never,
    win_owns_family,
)
from pgame.graph import Graph, complete_graph
from pgame.rng import Rng


class FirstFree(Strategy):
    """Deterministic filler: lowest element(s) by string order."""

    def move(self, game):
        return min(game.free, key=str)

    def moves(self, game, count):
        return sorted(game.free, key=str)[:count]

    def offer(self, game, size):
        return sorted(game.free, key=str)[:size]

    def pick(self, game, offered):
        return min(offered, key=str)


class RandomPlayer(Strategy):
    def move(self, game):
        return self.rng.choice(sorted(game.free, key=str))

    def moves(self, game, count):
        return self.rng.sample(sorted(game.free, key=str), count)

    def offer(self, game, size):
        return self.rng.sample(sorted(game.free, key=str), size)

    def pick(self, game, offered):
        return self.rng.choice(list(offered))


def test_empty_board_game_over_immediately():
    t = play_mb([], FirstFree(), FirstFree(), 1, win_never)
    assert t.winner == "breaker" and t.rounds == 0


def test_three_elements_maker_cannot_take_all():
    hg = Hypergraph([0, 1, 2], [{0, 1, 2}])
    t = play_mb([0, 1, 2], FirstFree(), FirstFree(), 1, win_owns_family(hg))
    assert t.winner == "breaker"


def test_mb_cadence_and_conservation():
    board = list(range(13))
    for b in (1, 2, 3):
        game = MakerBreakerGame(board, RandomPlayer(), RandomPlayer(), b,
                                win_never, seed=b)
        t = game.play()
        maker_claims = [r for r in t.records if r[2] == "M"]
        breaker_claims = [r for r in t.records if r[2] == "B"]
        assert all(len(r[3]) == 1 for r in maker_claims)
        assert all(len(r[3]) <= b for r in breaker_claims)
        # every breaker batch except possibly the last is exactly b
        for r in breaker_claims[:-1]:
            assert len(r[3]) == b
        total = sum(len(r[3]) for r in t.records)
        assert total == len(board)
        owner = t.final_owner_map()
        assert sum(1 for v in owner.values() if v == FREE) == 0


def test_wc_rules_single_element_to_client():
    t = play_wc([7], FirstFree(), FirstFree(), 2, win_never)
    assert t.records == [(1, 0, "C", (7,))]
    assert t.winner == "client"  # no winning family given


def test_wc_waiter_wins_singleton_family():
    hg = Hypergraph(["x", "y"], [{"x"}, {"y"}])
    t = play_wc(["x", "y"], FirstFree(), FirstFree(), 1, win_owns_family(hg))
    assert t.winner == "waiter" and t.win_round == 1


def test_wc_pairing_forces_transversal():
    # two disjoint pairs; waiter offers each pair; client owns one of each
    class PairWaiter(Strategy):
        def offer(self, game, size):
            free = sorted(game.free)
            for a, b in [(0, 1), (2, 3)]:
                if a in game.free and b in game.free:
                    return [a, b]
            return free[:size]

    t = play_wc([0, 1, 2, 3], PairWaiter(), RandomPlayer(), 1, win_never, seed=5)
    owner = t.final_owner_map()
    assert (owner[0] == P1) != (owner[1] == P1)
    assert (owner[2] == P1) != (owner[3] == P1)


def test_wc_cadence():
    board = list(range(11))
    t = play_wc(board, RandomPlayer(), RandomPlayer(), 2, win_never, seed=3)
    ccount = sum(1 for r in t.records if r[2] == "C")
    assert ccount == t.rounds
    # every round has exactly one client element
    for rnd in range(1, t.rounds + 1):
        cs = [r for r in t.records if r[0] == rnd and r[2] == "C"]
        assert len(cs) == 1 and len(cs[0][3]) == 1


def test_illegal_move_forfeits():
    class Cheater(Strategy):
        def move(self, game):
            return "not-an-element"

        def moves(self, game, count):
            return ["nope"] * count

        def offer(self, game, size):
            return ["nope"] * size

    t = play_mb([0, 1, 2, 3], Cheater(), FirstFree(), 1, win_never)
    assert t.winner == "breaker" and t.forfeited_by == "maker"
    t = play_mb([0, 1, 2, 3], FirstFree(), Cheater(), 1, win_never)
    assert t.winner == "maker" and t.forfeited_by == "breaker"
    t = play_wc([0, 1, 2, 3], Cheater(), FirstFree(), 1, win_never)
    assert t.winner == "client" and t.forfeited_by == "waiter"


def test_breaker_first_variant():
    hg = Hypergraph([0, 1], [{0}])
    t = play_mb([0, 1], FirstFree(), FirstFree(), 1, win_owns_family(hg),
                maker_first=False)
    # breaker moves first and takes element 0; maker cannot win
    assert t.winner == "breaker"


def test_transcript_roundtrip_and_replay():
    board = [(u, v) for u in range(5) for v in range(u + 1, 5)]
    g = complete_graph(5)
    t = play_mb(board, RandomPlayer(), RandomPlayer(), 2, win_never,
                seed=17, graph_board=g)
    text = transcript_to_text(t)
    t2 = transcript_from_text(text)
    assert transcript_to_text(t2) == text
    fresh = replay(t2, win_never)
    assert fresh.owner_hash == t.owner_hash
    assert fresh.winner == t.winner


def test_wc_transcript_replay():
    t = play_wc(list(range(9)), RandomPlayer(), RandomPlayer(), 2, win_never,
                seed=23)
    t2 = transcript_from_text(transcript_to_text(t))
    fresh = replay(t2, win_never)
    assert fresh.owner_hash == t.owner_hash


def test_replay_detects_divergence():
    t = play_mb(list(range(8)), RandomPlayer(), RandomPlayer(), 1, win_never,
                seed=2)
    rnd, bid, actor, elems = t.records[0]
    # flip the first maker claim to a different element
    other = next(e for e in t.board if e != elems[0])
    t.records[0] = (rnd, bid, actor, (other,))
    fresh = replay(t, win_never)
    assert fresh.owner_hash != t.owner_hash or fresh.forfeited_by


# -- multiplex ---------------------------------------------------------------


def test_multiplex_single_board_identity():
    hg = Hypergraph(list(range(6)), [{0, 1}])
    inner = FirstFree()
    multi = MultiplexStrategy([list(range(6))], [inner], ROUND_ROBIN)
    t = play_mb(list(range(6)), multi, RandomPlayer(), 1,
                win_owns_family(hg), seed=4)
    direct = play_mb(list(range(6)), FirstFree(), RandomPlayer(), 1,
                     win_owns_family(hg), seed=4)
    assert [r for r in t.records if r[2] == "M"] == [
        r for r in direct.records if r[2] == "M"
    ]


def test_multiplex_round_robin_opponent_gap():
    boards = [list(range(0, 8)), list(range(8, 16))]
    multi = MultiplexStrategy(boards, [FirstFree(), FirstFree()], ROUND_ROBIN)
    t = play_mb(list(range(16)), multi, RandomPlayer(), 1, win_never, seed=9)
    # between two maker visits to the same board, opponent claimed <= 2*b
    last_visit = {}
    claims_since = {0: 0, 1: 0}
    for rnd, bid, actor, elems in t.records:
        for e in elems:
            i = 0 if e < 8 else 1
            if actor == "B":
                claims_since[i] += 1
            else:
                assert claims_since[i] <= 2, t.records
                claims_since[i] = 0


def test_multiplex_follow_policy():
    # opponent plays only the second board; board-1 strategy never invoked
    boards = [list(range(0, 4)), list(range(4, 16))]
    calls = {0: 0, 1: 0}

    class Counting(Strategy):
        def __init__(self, i):
            self.i = i

        def move(self, game):
            calls[self.i] += 1
            return min(game.free, key=str)

    class OnlySecond(Strategy):
        def moves(self, game, count):
            pool = [e for e in sorted(game.free, key=str) if e >= 4]
            if len(pool) < count:
                pool += [e for e in sorted(game.free, key=str) if e < 4]
            return pool[:count]

    multi = MultiplexStrategy(boards, [Counting(0), Counting(1)], FOLLOW)
    six_claims = lambda game: len(game.p1_elements()) >= 6
    t = play_mb(list(range(16)), multi, OnlySecond(), 1, six_claims, seed=1,
                maker_first=False)
    assert calls[0] == 0
    assert calls[1] == 6


def test_multiplex_rejects_overlap():
    with pytest.raises(ValueError):
        MultiplexStrategy([[0, 1], [1, 2]], [FirstFree(), FirstFree()])


# -- minimax ----------------------------------------------------------------


def test_minimax_single_triple_breaker_wins():
    hg = Hypergraph([0, 1, 2], [{0, 1, 2}])
    assert not MinimaxMB(hg, 1).maker_wins()


def test_minimax_two_disjoint_pairs_breaker_wins():
    hg = Hypergraph(list(range(4)), [{0, 1}, {2, 3}])
    assert not MinimaxMB(hg, 1).maker_wins()


def test_minimax_maker_wins_rich_family():
    # all pairs from a triple: maker takes two elements of the triple
    hg = Hypergraph([0, 1, 2], [{0, 1}, {0, 2}, {1, 2}])
    assert MinimaxMB(hg, 1).maker_wins()


def test_minimax_strategies_play_optimal():
    hg = Hypergraph([0, 1, 2], [{0, 1}, {0, 2}, {1, 2}])
    solver = MinimaxMB(hg, 1)
    t = play_mb([0, 1, 2], MinimaxMakerStrategy(solver),
                MinimaxBreakerStrategy(solver), 1, win_owns_family(hg))
    assert t.winner == "maker"


def test_minimax_wc():
    # waiter forces a singleton: offer {x,y} both singleton wins
    hg = Hypergraph([0, 1], [{0}, {1}])
    assert MinimaxWC(hg, 1).waiter_wins()
    hg2 = Hypergraph([0, 1, 2, 3], [{0, 1, 2, 3}])
    assert not MinimaxWC(hg2, 1).waiter_wins()


def test_minimax_client_avoids_when_possible():
    # family {0,1}: client must avoid owning both
    hg = Hypergraph([0, 1, 2, 3], [{0, 1}])
    solver = MinimaxWC(hg, 1)
    assert not solver.waiter_wins()
    t = play_wc([0, 1, 2, 3], RandomPlayer(), MinimaxClientStrategy(solver),
                1, win_owns_family(hg), seed=11)
    assert t.winner == "client"


def test_minimax_guard():
    with pytest.raises(ValueError):
        MinimaxMB(Hypergraph(list(range(17)), []), 1)


# -- fake moves --------------------------------------------------------------


def passes_breaker():
    class Passes(Strategy):
        def moves(self, game, count):
            return sorted(game.free, key=str)[:count]

    return Passes()


def test_fake_moves_identity_when_bias_matches():
    hg = Hypergraph(list(range(6)), [{0, 1}, {2, 3}])
    solver = MinimaxMB(hg, 2)
    inner = MinimaxMakerStrategy(solver)
    wrapped = fake_moves_mb(MinimaxMakerStrategy(solver), 2)
    t1 = play_mb(list(range(6)), inner, FirstFree(), 2, win_owns_family(hg), seed=3)
    t2 = play_mb(list(range(6)), wrapped, FirstFree(), 2, win_owns_family(hg), seed=3)
    assert [r for r in t1.records if r[2] == "M"] == [
        r for r in t2.records if r[2] == "M"
    ]


def test_fake_moves_mb_vs_weaker_real_bias():
    """A bias-2 winning strategy wrapped to face a real bias-1 opponent wins
    every exhaustive opponent line, within the round bound."""
    elements = list(range(6))
    family = [{0, i} for i in range(1, 6)]  # hub 0: first move matters
    hg = Hypergraph(elements, family)
    solver = MinimaxMB(hg, 2)
    assert solver.maker_wins()
    checker = win_owns_family(hg)
    bound = ceil(len(elements) / (2 + 1))

    import itertools

    losses = 0
    trials = 0
    for perm in itertools.permutations(range(6), 3):
        script = [(x,) for x in perm] + [tuple()] * 6
        maker = fake_moves_mb(MinimaxMakerStrategy(MinimaxMB(hg, 2)), 2)
        t = play_mb(elements, maker, _TolerantScript(script), 1, checker, seed=0)
        trials += 1
        if t.winner != "maker":
            losses += 1
        else:
            assert t.win_round is not None and t.win_round <= bound
    assert losses == 0 and trials > 0


class _TolerantScript(Strategy):
    """Plays the scripted element if free, else the lowest free one."""

    def __init__(self, script):
        self.script = list(script)
        self.at = 0

    def moves(self, game, count):
        out = []
        free = sorted(game.free, key=str)
        want = ()
        if self.at < len(self.script):
            want = self.script[self.at]
            self.at += 1
        for w in want:
            if w in game.free and w not in out:
                out.append(w)
        for e in free:
            if len(out) >= count:
                break
            if e not in out:
                out.append(e)
        return out[:count]


def test_fake_moves_wc_identity_b1():
    hg = Hypergraph(list(range(4)), [{0}, {1}, {2}, {3}])
    solver = MinimaxWC(hg, 1)

    class W(Strategy):
        def offer(self, game, size):
            return sorted(game.free)[:size]

    t1 = play_wc(list(range(4)), W(), FirstFree(), 1, win_owns_family(hg), seed=1)
    t2 = play_wc(list(range(4)), fake_moves_wc(W(), 1), FirstFree(), 1,
                 win_owns_family(hg), seed=1, allow_short_offers=True)
    assert t1.records == t2.records


def test_fake_moves_wc_round_bound():
    """Inner bias-3 waiter wrapped into a real bias-1 game: wins within
    ceil(|X|/(b+1)) real rounds (b = inner bias)."""
    elements = list(range(8))
    family = [{0}, {1}, {2}, {3}, {4}, {5}, {6}, {7}]
    hg = Hypergraph(elements, family)
    checker = win_owns_family(hg)

    class InnerWaiter(Strategy):
        def offer(self, game, size):
            return sorted(game.free)[:size]

    wrapped = fake_moves_wc(InnerWaiter(), 3)
    t = play_wc(elements, wrapped, FirstFree(), 1, checker, seed=0,
                allow_short_offers=True)
    assert t.winner == "waiter"
    assert t.win_round <= ceil(len(elements) / 4)
