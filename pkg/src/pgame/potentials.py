"""Criterion-backed generic strategies.

The potential bookkeeping follows the classical weight function: for an
exponent scale s, an alive winning set F (untouched by the protected side)
weighs 2^(-free(F)/s).  With s = 1 all weights are dyadic rationals and the
tables run in exact integer arithmetic (weights scaled by 2^max|F|);
otherwise floats are used, which only play (never audit) relies on.

The ledger fact the audit in the test-suite pins down: in a (1:q) game
where the protected side replies to each opponent move with greedy
element-by-element damage maximisation, the potential measured immediately
AFTER each opponent move is non-increasing, and under the start criterion
its first value is < 1.  (Measured at round boundaries instead, the
sequence can legitimately rise; the after-opponent-move phase is the one
the classical argument proves.)
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, inf, log

from .engine import FREE, P1, P2, Hypergraph, Strategy
from .graph import bits
from .rng import Rng


# ---------------------------------------------------------------------------
# Potential table
# ---------------------------------------------------------------------------


class PotentialTable:
    """Per-set free counts and alive flags with hit-weight queries.

    `protected` is the side whose claims kill sets; opponent claims shrink
    free counts.  Exact integer weights when scale == 1.
    """

    def __init__(self, hg: Hypergraph, scale: int, protected_side: int):
        self.elements = tuple(hg.elements)
        self.order = {e: i for i, e in enumerate(self.elements)}
        self.sets = [frozenset(f) for f in hg.family]
        self.free_of = [len(f) for f in self.sets]
        self.alive = [True] * len(self.sets)
        self.member: dict = {e: [] for e in self.elements}
        for i, f in enumerate(self.sets):
            for e in f:
                self.member[e].append(i)
        self.scale = scale
        self.exact = scale == 1
        self.maxf = max((len(f) for f in self.sets), default=0)

    def weight(self, i: int):
        """Scaled weight of alive set i: 2^(maxf - free) exact, else float."""
        if not self.alive[i]:
            return 0
        if self.exact:
            return 1 << (self.maxf - self.free_of[i]) if self.free_of[i] <= self.maxf else 0
        return 2.0 ** (-self.free_of[i] / self.scale)

    def phi(self):
        """Total potential (scaled by 2^maxf in exact mode)."""
        return sum(self.weight(i) for i in range(len(self.sets)) if self.alive[i])

    def phi_fraction(self) -> Fraction:
        if not self.exact:
            raise ValueError("exact potential needs scale == 1")
        return Fraction(self.phi(), 1 << self.maxf)

    def hit(self, e):
        return sum(self.weight(i) for i in self.member[e] if self.alive[i])

    def on_protected_claim(self, e) -> None:
        for i in self.member[e]:
            self.alive[i] = False

    def on_opponent_claim(self, e) -> None:
        for i in self.member[e]:
            if self.alive[i]:
                self.free_of[i] -= 1

    def opponent_completed(self) -> bool:
        return any(self.alive[i] and self.free_of[i] == 0 for i in range(len(self.sets)))


def beck_criterion_value(hg: Hypergraph, p: int, q: int) -> Fraction | float:
    """sum over F of (1+q)^(-|F|/p + 1); exact when p == 1."""
    if p == 1:
        return sum(
            (Fraction(1 + q) ** (1 - len(f)) for f in hg.family), Fraction(0)
        )
    return sum((1.0 + q) ** (-len(f) / p + 1) for f in hg.family)


def wc_criterion_value(hg: Hypergraph, b: int) -> Fraction | float:
    """sum over F of 2^(-|F|/(2b-1) + 1); exact when b == 1."""
    s = 2 * b - 1
    if s == 1:
        return sum((Fraction(2) ** (1 - len(f)) for f in hg.family), Fraction(0))
    return sum(2.0 ** (-len(f) / s + 1) for f in hg.family)


class _TableStrategy(Strategy):
    """Shared log-cursor syncing for table-driven strategies."""

    def attach(self, game, side, rng):
        super().attach(game, side, rng)
        self.cursor = 0
        self._init_table(game)

    def _init_table(self, game):
        raise NotImplementedError

    def _sync(self, game):
        log = game.log
        while self.cursor < len(log):
            e, s = log[self.cursor]
            self.cursor += 1
            if e not in self.table.member:
                continue
            if s == self.protected:
                self.table.on_protected_claim(e)
            else:
                self.table.on_opponent_claim(e)


class BeckBreakerStrategy(_TableStrategy):
    """Breaker (bias q) running the greedy potential rule: each claimed
    element maximises the destroyed weight, ties to the lowest element."""

    def __init__(self, hg: Hypergraph, q: int):
        self.hg = hg
        self.q = q

    def _init_table(self, game):
        self.protected = self.side
        self.table = PotentialTable(self.hg, 1, self.side)
        val = beck_criterion_value(self.hg, 1, self.q)
        game.annotations["criterion_beck"] = (
            f"{val} {'SATISFIED' if val < 1 else 'VIOLATED'}"
        )

    def moves(self, game, count):
        self._sync(game)
        out = []
        free = set(game.free)
        for _ in range(count):
            best, best_e = -1, None
            for e in sorted(free, key=lambda x: self.table.order.get(x, inf)):
                h = self.table.hit(e) if e in self.table.member else 0
                if h > best:
                    best, best_e = h, e
            out.append(best_e)
            free.discard(best_e)
            self.table.on_protected_claim(best_e)
        return out


class TransversalMakerStrategy(_TableStrategy):
    """Maker (bias 1) aiming to intersect every F: she plays Breaker in the
    F-game, where the real opponent's b claims per round are F-Maker moves.
    Criterion: sum 2^(-|F|/b + 1) < 1."""

    def __init__(self, hg: Hypergraph, b: int):
        self.hg = hg
        self.b = b

    def _init_table(self, game):
        self.protected = self.side
        self.table = PotentialTable(self.hg, self.b, self.side)
        val = beck_criterion_value(self.hg, self.b, 1)
        game.annotations["criterion_transversal"] = (
            f"{val} {'SATISFIED' if val < 1 else 'VIOLATED'}"
        )

    def move(self, game):
        self._sync(game)
        best, best_e = -1, None
        for e in sorted(game.free, key=lambda x: self.table.order.get(x, inf)):
            h = self.table.hit(e) if e in self.table.member else 0
            if h > best:
                best, best_e = h, e
        if best_e is not None:
            self.table.on_protected_claim(best_e)
        return best_e

    def transversal_complete(self, game) -> bool:
        self._sync(game)
        own = {e for e, s in game.log if s == self.side}
        return all(f & own for f in self.table.sets)


class WaiterTransversalStrategy(_TableStrategy):
    """Waiter avoiding full ownership of any F (so Client claims a
    transversal).  Potential weights use the 1/(2b-1) exponent scale.

    Offers: exhaustive minimax over candidate offers against the worst
    Client pick when the count fits `full_search_guard`; otherwise the
    offer is the size highest-hit free elements (greedy, documented desk
    rule).
    """

    def __init__(self, hg: Hypergraph, b: int, full_search_guard: int = 4000):
        self.hg = hg
        self.b = b
        self.guard = full_search_guard

    def _init_table(self, game):
        # Waiter's own claims shrink free counts; CLIENT claims kill sets.
        self.protected = P1  # the client side kills
        self.table = PotentialTable(self.hg, 2 * self.b - 1, self.side)
        val = wc_criterion_value(self.hg, self.b)
        game.annotations["criterion_wc"] = (
            f"{val} {'SATISFIED' if val < 1 else 'VIOLATED'}"
        )

    def _phi_after(self, offer, picked) -> float:
        """Potential if Client keeps `picked` and Waiter gets the rest."""
        t = self.table
        total = 0.0
        dead = set(t.member[picked]) if picked in t.member else set()
        waiter_hits: dict[int, int] = {}
        for e in offer:
            if e is picked:
                continue
            for i in t.member.get(e, ()):
                waiter_hits[i] = waiter_hits.get(i, 0) + 1
        for i in range(len(t.sets)):
            if not t.alive[i] or i in dead:
                continue
            f = t.free_of[i] - waiter_hits.get(i, 0)
            total += 2.0 ** (-f / t.scale)
        return total

    def offer(self, game, size):
        self._sync(game)
        free = sorted(game.free, key=lambda x: self.table.order.get(x, inf))
        if len(free) <= size:
            return list(free)
        n_offers = comb(len(free), size)
        if n_offers <= self.guard:
            import itertools as _it

            best_offer, best_worst = None, None
            for offer in _it.combinations(free, size):
                worst = max(self._phi_after(offer, c) for c in offer)
                if best_worst is None or worst < best_worst:
                    best_offer, best_worst = offer, worst
            return list(best_offer)
        scored = sorted(
            free,
            key=lambda e: (-self.table.hit(e) if e in self.table.member else 0,
                           self.table.order.get(e, inf)),
        )
        return scored[:size]


# ---------------------------------------------------------------------------
# MinBox
# ---------------------------------------------------------------------------


@dataclass
class MinBoxConfig:
    boxes: list            # disjoint element lists
    gamma: Fraction        # target fraction per box
    b: int                 # opponent bias

    def __post_init__(self):
        seen = set()
        for box in self.boxes:
            bs = set(box)
            if bs & seen:
                raise ValueError("boxes must be disjoint")
            seen |= bs
        if not isinstance(self.gamma, Fraction):
            self.gamma = Fraction(self.gamma).limit_denominator(10**9)

    def quota(self, i: int) -> int:
        size = len(self.boxes[i])
        g = self.gamma * size
        q = g.numerator // g.denominator
        if q < g:
            q += 1
        return q

    def hypothesis_holds(self) -> bool:
        n = len(self.boxes)
        d = min(len(b) for b in self.boxes)
        if not self.gamma < Fraction(1, self.b + 1):
            return False
        return d > self.b * (log(n) + 1) / float(1 - self.gamma * (self.b + 1))


class MinBoxMakerStrategy(Strategy):
    """Claim from the active box with the fewest free elements (ties to the
    lowest box index).  A box is active while Maker still owes it elements
    and it has free ones."""

    def __init__(self, cfg: MinBoxConfig):
        self.cfg = cfg

    def attach(self, game, side, rng):
        super().attach(game, side, rng)
        self.cursor = 0
        self.elem_box = {
            e: i for i, box in enumerate(self.cfg.boxes) for e in box
        }
        self.free_cnt = [len(b) for b in self.cfg.boxes]
        self.mine = [0] * len(self.cfg.boxes)
        self.quotas = [self.cfg.quota(i) for i in range(len(self.cfg.boxes))]

    def _sync(self, game):
        log = game.log
        while self.cursor < len(log):
            e, s = log[self.cursor]
            self.cursor += 1
            i = self.elem_box.get(e)
            if i is None:
                continue
            self.free_cnt[i] -= 1
            if s == self.side:
                self.mine[i] += 1

    def _active(self):
        return [
            i
            for i in range(len(self.cfg.boxes))
            if self.mine[i] < self.quotas[i] and self.free_cnt[i] > 0
        ]

    def move(self, game):
        self._sync(game)
        act = self._active()
        if not act:
            # goal reached (or unreachable): stay legal, lowest free element
            return min(game.free, key=str) if game.free else None
        i = min(act, key=lambda j: (self.free_cnt[j], j))
        for e in self.cfg.boxes[i]:
            if e in game.free:
                return e
        return None

    def done(self, game):
        self._sync(game)
        return all(
            self.mine[i] >= self.quotas[i] for i in range(len(self.cfg.boxes))
        )

    def achieved(self, game) -> bool:
        self._sync(game)
        return all(
            self.mine[i] >= self.quotas[i] for i in range(len(self.cfg.boxes))
        )


# ---------------------------------------------------------------------------
# Danger function (minimum-degree builder)
# ---------------------------------------------------------------------------


class DangerStrategy(Strategy):
    """Maker rule: while some vertex has Maker-degree below the target,
    take the one maximising dang(v) = d_B(v) - 2*b*d_M(v) (ties: lowest id)
    and claim a uniformly random free edge at it.

    The random edge choice is exactly what turns the rule into the
    randomized expander builder.  The strategy records, per vertex, the
    Breaker degree at the moment the vertex first reaches the target.
    """

    def __init__(self, b: int, degree_target: int = 16, strict: bool = True):
        self.b = b
        self.target = degree_target
        # strict: a starved chosen vertex forfeits (the lemma says this
        # cannot happen under its hypothesis); non-strict skips to the next
        # deficient vertex, for composite builds outside the hypothesis
        self.strict = strict

    def attach(self, game, side, rng):
        super().attach(game, side, rng)
        if game.gview is None:
            raise ValueError("danger strategy needs a graph board")
        n = game.gview.n
        self.n = n
        self.dm = [0] * n
        self.db = [0] * n
        self.cursor = 0
        self.record: dict[int, int] = {}
        game.annotations.setdefault("danger_record", self.record)

    def _sync(self, game):
        log = game.log
        while self.cursor < len(log):
            (u, v), s = log[self.cursor]
            self.cursor += 1
            if s == self.side:
                for w in (u, v):
                    self.dm[w] += 1
                    if self.dm[w] == self.target and w not in self.record:
                        self.record[w] = self.db[w]
            else:
                self.db[u] += 1
                self.db[v] += 1

    def move(self, game):
        self._sync(game)
        twob = 2 * self.b
        ranked = []
        for v in range(self.n):
            if self.dm[v] >= self.target:
                continue
            ranked.append((self.db[v] - twob * self.dm[v], -v))
        if not ranked:
            return min(game.free, key=str) if game.free else None
        ranked.sort(reverse=True)
        best_v = -ranked[0][1]
        free_mask = game.gview.free_adj[best_v]
        if not free_mask and not self.strict:
            for _, nv in ranked[1:]:
                if game.gview.free_adj[-nv]:
                    best_v = -nv
                    free_mask = game.gview.free_adj[best_v]
                    break
            else:
                return min(game.free, key=str) if game.free else None
        cnt = free_mask.bit_count()
        if cnt == 0:
            return None  # no free edge at the chosen vertex: forfeit, audited
        k = self.rng.randrange(cnt)
        for idx, w in enumerate(bits(free_mask)):
            if idx == k:
                # record target-reaching now: the engine claims after we
                # return, and the game may end before our next sync
                for x in (best_v, w):
                    if self.dm[x] + 1 == self.target and x not in self.record:
                        self.record[x] = self.db[x]
                e = (best_v, w) if best_v < w else (w, best_v)
                return e
        return None

    def done(self, game):
        self._sync(game)
        return all(d >= self.target for d in self.dm)


# ---------------------------------------------------------------------------
# Balancer (discrepancy game)
# ---------------------------------------------------------------------------


class BalancerStrategy(Strategy):
    """Balancer claims b elements per round keeping her share of every
    tracked set within eps of the proportional b/(b+1) split.

    Two-sided exponential potential sum(lam^dev + lam^-dev) over tracked
    sets with dev_A = (b * unbalancer_count - balancer_count) -- greedy
    descent over a bounded candidate pool (the worst set's free elements
    plus a small random sample; exact greedy over everything is only
    affordable on tiny boards, and the audit is on the final counts).
    """

    def __init__(self, tracked_sets: list, eps: float, b: int,
                 lam: float | None = None, pool_size: int = 48):
        self.tracked = [tuple(s) for s in tracked_sets]
        self.eps = eps
        self.b = b
        self.lam = lam if lam is not None else 1.0 + eps / 2
        self.pool_size = pool_size

    def attach(self, game, side, rng):
        super().attach(game, side, rng)
        self.cursor = 0
        self.member: dict = {}
        for i, s in enumerate(self.tracked):
            for e in s:
                self.member.setdefault(e, []).append(i)
        self.bal = [0] * len(self.tracked)
        self.unb = [0] * len(self.tracked)
        self.free_elems = [
            [e for e in s] for s in self.tracked
        ]

    def _sync(self, game):
        log = game.log
        while self.cursor < len(log):
            e, s = log[self.cursor]
            self.cursor += 1
            for i in self.member.get(e, ()):
                if s == self.side:
                    self.bal[i] += 1
                else:
                    self.unb[i] += 1

    def _dev(self, i) -> float:
        # positive when the balancer is behind the proportional split
        return self.b * self.unb[i] - self.bal[i]

    def _score(self, e) -> float:
        """Potential decrease from claiming e (bigger is better)."""
        lam = self.lam
        total = 0.0
        for i in self.member.get(e, ()):
            d = self._dev(i)
            # claiming e moves dev from d to d-1
            total += (lam ** d + lam ** -d) - (lam ** (d - 1) + lam ** (1 - d))
        return total

    def moves(self, game, count):
        self._sync(game)
        out = []
        taken = set()
        for _ in range(count):
            worst = None
            for i in range(len(self.tracked)):
                d = self._dev(i)
                if worst is None or d > worst[0]:
                    worst = (d, i)
            pool = []
            if worst is not None:
                i = worst[1]
                lst = self.free_elems[i]
                # compact the cached list lazily
                lst[:] = [e for e in lst if e in game.free and e not in taken]
                pool.extend(lst[: self.pool_size])
            if len(pool) < self.pool_size // 2:
                free_list = [e for e in game.free if e not in taken]
                extra = self.rng.sample(
                    free_list, min(8, len(free_list))
                )
                pool.extend(extra)
            pool = [e for e in pool if e in game.free and e not in taken]
            if not pool:
                pool = [e for e in game.free if e not in taken][:1]
                if not pool:
                    break
            best = max(pool, key=self._score)
            out.append(best)
            taken.add(best)
            for i in self.member.get(best, ()):
                self.bal[i] += 1
        # the engine will resync us; undo local double counting
        for e in out:
            for i in self.member.get(e, ()):
                self.bal[i] -= 1
        return out

    def move(self, game):
        out = self.moves(game, 1)
        return out[0] if out else None

    def audit(self, game) -> list[int]:
        """Indices of tracked sets violating the discrepancy inequality."""
        self._sync(game)
        bad = []
        for i, s in enumerate(self.tracked):
            share = self.b / (self.b + 1) * len(s)
            if abs(self.bal[i] - share) >= self.eps * len(s):
                bad.append(i)
        return bad


# ---------------------------------------------------------------------------
# Ledger audit
# ---------------------------------------------------------------------------


def potential_trajectory(hg: Hypergraph, transcript, protected_actor: str,
                         scale: int = 1) -> list[Fraction]:
    """Exact potential measured after each opponent claim-batch.

    `protected_actor` is the transcript actor letter of the side whose
    claims kill sets ('B' for a Breaker running the Beck rule, 'M' for a
    transversal Maker).  Requires scale == 1 (dyadic weights).
    """
    table = PotentialTable(hg, scale, P2)
    out = []
    for _, _, actor, elems in transcript.records:
        if actor == protected_actor:
            for e in elems:
                table.on_protected_claim(e)
        else:
            for e in elems:
                table.on_opponent_claim(e)
            out.append(table.phi_fraction())
    return out


def es_ledger_ok(hg: Hypergraph, transcript, protected_actor: str) -> bool:
    """Non-increase of the after-opponent-move potential, plus < 1 start."""
    traj = potential_trajectory(hg, transcript, protected_actor)
    if not traj:
        return True
    if traj[0] >= 1:
        return False
    return all(b <= a for a, b in zip(traj, traj[1:]))
