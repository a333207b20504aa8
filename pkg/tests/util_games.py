"""Shared exhaustive-adversary drivers for the strategy tests.

The potential strategies are pure functions of the current ownership state
(they rebuild their tables from the game log), so an exhaustive adversary
can enumerate the reachable ownership states with memoisation and query a
fresh strategy instance at each node.
"""

from fractions import Fraction

from pgame.engine import P1, P2, Hypergraph
from pgame.rng import Rng


class _StateGame:
    """Minimal game stand-in: a synthetic log plus the free set."""

    def __init__(self, elements, p1_set, p2_set):
        self.log = [(e, P1) for e in sorted(p1_set, key=str)] + [
            (e, P2) for e in sorted(p2_set, key=str)
        ]
        self.free = {e for e in elements if e not in p1_set and e not in p2_set}
        self.annotations = {}


def breaker_survives_all_maker_lines(hg: Hypergraph, breaker_factory,
                                     q: int = 1) -> bool:
    """True iff the deterministic breaker never lets ANY Maker line complete
    a winning set (Maker moves first, bias (1:q))."""
    elems = hg.elements
    fam = [frozenset(f) for f in hg.family]
    seen = set()

    def completes(p1s):
        return any(f <= p1s for f in fam)

    def rec(p1s, p2s) -> bool:
        free = [e for e in elems if e not in p1s and e not in p2s]
        if not free:
            return True
        key = (p1s, p2s)
        if key in seen:
            return True
        for e in free:
            np1 = p1s | {e}
            if completes(np1):
                return False
            rest = [x for x in free if x != e]
            if rest:
                strat = breaker_factory()
                g = _StateGame(elems, np1, p2s)
                strat.attach(g, P2, Rng(0))
                reply = strat.moves(g, min(q, len(rest)))
                if not rec(np1, p2s | set(reply)):
                    return False
            # board exhausted right after maker's move: already checked
        seen.add(key)
        return True

    return rec(frozenset(), frozenset())


def maker_beats_all_breaker_lines(hg: Hypergraph, maker_factory,
                                  success_check, b: int = 1) -> bool:
    """True iff the deterministic maker reaches `success_check(p1_set)` on
    EVERY breaker reply line of the (1:b) game (maker first)."""
    elems = hg.elements
    seen = set()
    from itertools import combinations

    def rec(p1s, p2s) -> bool:
        free = [e for e in elems if e not in p1s and e not in p2s]
        if not free:
            return success_check(p1s)
        key = (p1s, p2s)
        if key in seen:
            return True
        strat = maker_factory()
        g = _StateGame(elems, p1s, p2s)
        strat.attach(g, P1, Rng(0))
        e = strat.move(g)
        if e not in g.free:
            return False
        np1 = p1s | {e}
        rest = [x for x in free if x != e]
        if not rest:
            out = success_check(np1)
        else:
            out = True
            take = min(b, len(rest))
            for combo in combinations(rest, take):
                if not rec(np1, p2s | set(combo)):
                    out = False
                    break
        if out:
            seen.add(key)
        return out

    return rec(frozenset(), frozenset())


def waiter_beats_all_client_lines(hg: Hypergraph, waiter_factory,
                                  b: int = 1, collect=None) -> bool:
    """True iff the deterministic waiter forces a Client transversal of the
    family on EVERY client pick sequence.  `collect(cl, wa, offer, pick)`
    sees every traversed round when given."""
    elems = hg.elements
    fam = [frozenset(f) for f in hg.family]

    def rec(cl, wa) -> bool:
        free = [e for e in elems if e not in cl and e not in wa]
        if not free:
            # waiter goal: no set fully hers <=> every set has a client element
            return all(f & cl for f in fam)
        size = min(b + 1, len(free))
        if size == 1:
            offer = list(free)
        else:
            strat = waiter_factory()
            g = _StateGame(elems, cl, wa)
            strat.attach(g, P2, Rng(0))
            offer = list(strat.offer(g, size))
            if len(set(offer)) != size or any(e not in g.free for e in offer):
                return False
        for c in offer:
            ncl = cl | {c}
            nwa = wa | {e for e in offer if e != c}
            if collect:
                collect(cl, wa, offer, c)
            if not rec(ncl, nwa):
                return False
        return True

    return rec(frozenset(), frozenset())


def random_beck_instance(rng: Rng, nx: int, q: int = 1):
    """Random hypergraph on nx elements satisfying the (1:q) criterion."""
    elems = list(range(nx))
    fam = []
    total = Fraction(0)
    target = rng.randint(2, 7)
    for _ in range(40):
        if len(fam) >= target:
            break
        size = rng.randint(3, min(7, nx))
        f = frozenset(rng.sample(elems, size))
        if f in fam:
            continue
        w = Fraction(1 + q) ** (1 - len(f))
        if total + w < 1:
            fam.append(f)
            total += w
    if not fam:
        return None
    return Hypergraph(elems, fam)
