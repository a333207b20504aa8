"""Game referee: turn sequencing, ownership bookkeeping, bias handling,
board multiplexing, fake-move adapters, transcripts, and an exact minimax
solver for tiny boards.

Rules implemented:
  Maker-Breaker (1:b): Maker claims 1 free element per round, Breaker up to
  b (exactly b except possibly the last round).  Maker wins when she fully
  owns a winning set; otherwise Breaker wins at exhaustion.

  Waiter-Client (1:b): Waiter offers min(b+1, free) elements, Client keeps
  one, the rest go to Waiter.  When a single element remains Client must
  take it.  Short offers (2..b+1) are illegal unless the game is created
  with allow_short_offers=True (the fake-move adapters need them).  Waiter
  wins when Client fully owns a winning set.

An illegal move forfeits the game for the offending player rather than
raising, so adversarial fuzzing of strategies is a test mode, not a crash.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field
from math import comb

from .graph import Graph, canon_edge
from .rng import Rng, derive_seed

FREE, P1, P2 = 0, 1, 2  # P1 = Maker / Client (the builder), P2 = Breaker / Waiter


class Hypergraph:
    """Board elements plus a family of winning sets."""

    def __init__(self, elements, family):
        self.elements = tuple(elements)
        if len(set(self.elements)) != len(self.elements):
            raise ValueError("duplicate board elements")
        uni = set(self.elements)
        fam = []
        seen = set()
        for f in family:
            fs = frozenset(f)
            if not fs <= uni:
                raise ValueError("winning set not contained in the board")
            if fs in seen:
                raise ValueError("duplicate winning set")
            seen.add(fs)
            fam.append(fs)
        self.family = fam

    def __repr__(self):
        return f"Hypergraph(|X|={len(self.elements)}, |F|={len(self.family)})"


# ---------------------------------------------------------------------------
# Strategies
# ---------------------------------------------------------------------------


class Strategy:
    """Base for all players.  One instance per game; attach() resets state.

    Maker/Client/Waiter/Breaker roles implement the matching methods.  All
    randomness must come from the Rng handed to attach, so games replay.
    """

    def attach(self, game, side: int, rng: Rng) -> None:
        self.game = game
        self.side = side
        self.rng = rng

    # Maker in MB games
    def move(self, game):
        raise NotImplementedError

    # Breaker in MB games
    def moves(self, game, count: int):
        raise NotImplementedError

    # Waiter in WC games
    def offer(self, game, size: int):
        raise NotImplementedError

    # Client in WC games
    def pick(self, game, offered):
        raise NotImplementedError

    def done(self, game) -> bool:
        """Composite strategies may declare their goal reached."""
        return False


class ScriptedStrategy(Strategy):
    """Replays a fixed move list; used by transcript verification."""

    def __init__(self, script: list[tuple]):
        self.script = list(script)
        self.at = 0

    def _next(self):
        if self.at >= len(self.script):
            raise IndexError("script exhausted")
        out = self.script[self.at]
        self.at += 1
        return out

    def move(self, game):
        return self._next()[0]

    def moves(self, game, count):
        batch = self._next()
        return list(batch)

    def offer(self, game, size):
        return list(self._next())

    def pick(self, game, offered):
        return self._next()[0]


# ---------------------------------------------------------------------------
# Graph ownership view
# ---------------------------------------------------------------------------


class GraphView:
    """Incremental per-vertex ownership masks for games on graph edges."""

    def __init__(self, board: Graph):
        self.board = board
        n = board.n
        self.n = n
        self.free_adj = list(board.adj)
        self.m_adj = [0] * n
        self.b_adj = [0] * n

    def on_claim(self, edge, side: int) -> None:
        u, v = edge
        bu, bv = 1 << u, 1 << v
        self.free_adj[u] &= ~bv
        self.free_adj[v] &= ~bu
        tgt = self.m_adj if side == P1 else self.b_adj
        tgt[u] |= bv
        tgt[v] |= bu

    def m_degree(self, v: int) -> int:
        return self.m_adj[v].bit_count()

    def b_degree(self, v: int) -> int:
        return self.b_adj[v].bit_count()

    def free_degree(self, v: int) -> int:
        return self.free_adj[v].bit_count()

    def maker_graph(self) -> Graph:
        es = []
        for u in range(self.n):
            m = self.m_adj[u] >> (u + 1)
            while m:
                low = m & -m
                es.append((u, u + 1 + low.bit_length() - 1))
                m ^= low
        return Graph(self.n, es)

    def breaker_graph(self) -> Graph:
        es = []
        for u in range(self.n):
            m = self.b_adj[u] >> (u + 1)
            while m:
                low = m & -m
                es.append((u, u + 1 + low.bit_length() - 1))
                m ^= low
        return Graph(self.n, es)


# ---------------------------------------------------------------------------
# Transcript
# ---------------------------------------------------------------------------


@dataclass
class Transcript:
    kind: str                      # "MB" | "WC"
    bias: int
    seed: int
    maker_first: bool
    board: tuple                   # element tuple, defines element order
    board_n: int | None            # vertex count for graph boards
    records: list = field(default_factory=list)  # (round, board_id, actor, elems)
    winner: str = ""
    win_round: int | None = None
    rounds: int = 0
    forfeited_by: str | None = None
    annotations: dict = field(default_factory=dict)
    owner_hash: str = ""

    def final_owner_map(self) -> dict:
        owner = {e: FREE for e in self.board}
        for _, _, actor, elems in self.records:
            side = P1 if actor in ("M", "C") else P2
            for e in elems:
                owner[e] = side
        return owner

    @staticmethod
    def hash_owner(owner: dict) -> str:
        h = hashlib.sha256()
        for e in sorted(owner, key=_elem_str):
            h.update(f"{_elem_str(e)}:{owner[e]};".encode())
        return h.hexdigest()[:16]


def _elem_str(e) -> str:
    if isinstance(e, tuple) and len(e) == 2:
        return f"{e[0]}-{e[1]}"
    return str(e)


def _elem_parse(tok: str):
    if "-" in tok:
        u, v = tok.split("-")
        return (int(u), int(v))
    try:
        return int(tok)
    except ValueError:
        return tok


def transcript_to_text(t: Transcript) -> str:
    lines = [
        "PGAME-TRANSCRIPT v1",
        f"KIND {t.kind}",
        f"BIAS {t.bias}",
        f"SEED {t.seed}",
        f"FIRST {'M' if t.maker_first else 'B'}",
        f"BOARDN {t.board_n if t.board_n is not None else -1}",
        "ELEMS " + " ".join(_elem_str(e) for e in t.board),
        f"WINNER {t.winner}",
        f"WINROUND {t.win_round if t.win_round is not None else -1}",
        f"ROUNDS {t.rounds}",
        f"FORFEIT {t.forfeited_by or '-'}",
        f"OWNERHASH {t.owner_hash}",
    ]
    for k in sorted(t.annotations):
        lines.append(f"NOTE {k}={t.annotations[k]}")
    for rnd, bid, actor, elems in t.records:
        lines.append(
            f"ROUND {rnd} BOARD {bid} ACTOR {actor} ELEMS "
            + ",".join(_elem_str(e) for e in elems)
        )
    lines.append("END")
    return "\n".join(lines) + "\n"


def transcript_from_text(text: str) -> Transcript:
    lines = [l for l in text.splitlines() if l.strip()]
    if not lines or lines[0] != "PGAME-TRANSCRIPT v1":
        raise ValueError("bad transcript header")
    hdr = {}
    records = []
    notes = {}
    for line in lines[1:]:
        if line == "END":
            break
        key, _, rest = line.partition(" ")
        if key == "ROUND":
            parts = rest.split()
            rnd = int(parts[0])
            bid = int(parts[2])
            actor = parts[4]
            elems = tuple(_elem_parse(x) for x in parts[6].split(",")) if parts[6] else ()
            records.append((rnd, bid, actor, elems))
        elif key == "NOTE":
            k, _, v = rest.partition("=")
            notes[k] = v
        else:
            hdr[key] = rest
    board = tuple(_elem_parse(x) for x in hdr["ELEMS"].split())
    bn = int(hdr["BOARDN"])
    t = Transcript(
        kind=hdr["KIND"],
        bias=int(hdr["BIAS"]),
        seed=int(hdr["SEED"]),
        maker_first=hdr["FIRST"] == "M",
        board=board,
        board_n=None if bn < 0 else bn,
        records=records,
        winner=hdr["WINNER"],
        win_round=None if int(hdr["WINROUND"]) < 0 else int(hdr["WINROUND"]),
        rounds=int(hdr["ROUNDS"]),
        forfeited_by=None if hdr["FORFEIT"] == "-" else hdr["FORFEIT"],
        annotations=notes,
        owner_hash=hdr["OWNERHASH"],
    )
    return t


# ---------------------------------------------------------------------------
# Games
# ---------------------------------------------------------------------------


class GameBase:
    def __init__(self, board, seed: int, graph_board: Graph | None,
                 board_labeler=None):
        self.elements = tuple(board)
        self.element_set = set(self.elements)
        if len(self.element_set) != len(self.elements):
            raise ValueError("duplicate board elements")
        self.owner = {e: FREE for e in self.elements}
        self.free = set(self.elements)
        self.log: list[tuple] = []  # (elem, side)
        self.round_no = 0
        self.seed = seed
        self.gview = GraphView(graph_board) if graph_board is not None else None
        self.board_labeler = board_labeler or (lambda e: 0)
        self.annotations: dict = {}

    def claim(self, elem, side: int) -> None:
        self.owner[elem] = side
        self.free.discard(elem)
        self.log.append((elem, side))
        if self.gview is not None:
            self.gview.on_claim(elem, side)

    def p1_elements(self):
        return [e for e, s in self.log if s == P1]

    def p2_elements(self):
        return [e for e, s in self.log if s == P2]

    def p1_graph(self) -> Graph:
        return self.gview.maker_graph()

    def _legal_batch(self, elems, count) -> bool:
        return (
            len(elems) == count
            and len(set(elems)) == count
            and all(e in self.free for e in elems)
        )


class MakerBreakerGame(GameBase):
    kind = "MB"

    def __init__(self, board, maker: Strategy, breaker: Strategy, bias: int,
                 win_checker, seed: int = 0, maker_first: bool = True,
                 round_cap: int | None = None, check_every: int = 1,
                 graph_board: Graph | None = None, board_labeler=None):
        super().__init__(board, seed, graph_board, board_labeler)
        if bias < 1:
            raise ValueError("bias must be >= 1")
        self.maker, self.breaker = maker, breaker
        self.bias = bias
        self.win_checker = win_checker
        self.maker_first = maker_first
        size = len(self.elements)
        min_cap = -(-size // (bias + 1))
        self.round_cap = round_cap if round_cap is not None else size
        if self.round_cap < min_cap:
            raise ValueError(f"round cap below ceil(|X|/(b+1)) = {min_cap}")
        self.check_every = max(1, check_every)
        maker.attach(self, P1, Rng(derive_seed(seed, "maker")))
        breaker.attach(self, P2, Rng(derive_seed(seed, "breaker")))

    def play(self) -> Transcript:
        t = Transcript("MB", self.bias, self.seed, self.maker_first,
                       self.elements,
                       self.gview.n if self.gview else None)
        won = False

        def maker_turn() -> bool:
            if not self.free:
                return True
            try:
                e = self.maker.move(self)
            except Exception:
                e = None
            if e is None or e not in self.free:
                t.forfeited_by = "maker"
                return True
            self.claim(e, P1)
            t.records.append((self.round_no, self.board_labeler(e), "M", (e,)))
            return False

        def breaker_turn() -> bool:
            if not self.free:
                return True
            count = min(self.bias, len(self.free))
            try:
                es = list(self.breaker.moves(self, count))
            except Exception:
                es = []
            if not self._legal_batch(es, count):
                t.forfeited_by = "breaker"
                return True
            for e in es:
                self.claim(e, P2)
            t.records.append(
                (self.round_no, self.board_labeler(es[0]), "B", tuple(es))
            )
            return False

        while self.free and not won and t.forfeited_by is None:
            self.round_no += 1
            if self.round_no > self.round_cap:
                self.round_no -= 1
                break
            first, second = (
                (maker_turn, breaker_turn)
                if self.maker_first
                else (breaker_turn, maker_turn)
            )
            stop = first()
            if t.forfeited_by is None and not stop:
                if self.maker_first and self._check(t):
                    won = True
                else:
                    stop = second()
                    if t.forfeited_by is None and not self.maker_first:
                        if self._check(t):
                            won = True
        if t.forfeited_by is None and not won:
            # exhaustion / cap: one final exact check
            if self.win_checker(self):
                won = True
                t.win_round = self.round_no
        if t.forfeited_by == "maker":
            t.winner = "breaker"
        elif t.forfeited_by == "breaker":
            t.winner = "maker"
        else:
            t.winner = "maker" if won else "breaker"
        t.rounds = self.round_no
        t.annotations.update(self.annotations)
        t.owner_hash = Transcript.hash_owner(self.owner)
        return t

    def _check(self, t: Transcript) -> bool:
        if self.round_no % self.check_every and self.free:
            return False
        if self.win_checker(self):
            if t.win_round is None:
                t.win_round = self.round_no
            return True
        return False


class WaiterClientGame(GameBase):
    kind = "WC"

    def __init__(self, board, waiter: Strategy, client: Strategy, bias: int,
                 win_checker, seed: int = 0, round_cap: int | None = None,
                 check_every: int = 1, graph_board: Graph | None = None,
                 board_labeler=None, allow_short_offers: bool = False):
        super().__init__(board, seed, graph_board, board_labeler)
        if bias < 1:
            raise ValueError("bias must be >= 1")
        self.waiter, self.client = waiter, client
        self.bias = bias
        self.win_checker = win_checker
        size = len(self.elements)
        self.round_cap = round_cap if round_cap is not None else size
        self.check_every = max(1, check_every)
        self.allow_short_offers = allow_short_offers
        waiter.attach(self, P2, Rng(derive_seed(seed, "waiter")))
        client.attach(self, P1, Rng(derive_seed(seed, "client")))

    def play(self) -> Transcript:
        t = Transcript("WC", self.bias, self.seed, True, self.elements,
                       self.gview.n if self.gview else None)
        won = False
        while self.free and not won and t.forfeited_by is None:
            self.round_no += 1
            if self.round_no > self.round_cap:
                self.round_no -= 1
                break
            max_size = min(self.bias + 1, len(self.free))
            if len(self.free) == 1:
                offered = list(self.free)  # Client must take the last element
            else:
                try:
                    offered = list(self.waiter.offer(self, max_size))
                except Exception:
                    offered = []
                size_ok = (
                    len(offered) == max_size
                    or (self.allow_short_offers and 2 <= len(offered) <= max_size)
                )
                if (
                    not size_ok
                    or len(set(offered)) != len(offered)
                    or any(e not in self.free for e in offered)
                ):
                    t.forfeited_by = "waiter"
                    break
            if len(offered) == 1:
                picked = offered[0]
            else:
                try:
                    picked = self.client.pick(self, list(offered))
                except Exception:
                    picked = None
                if picked not in offered:
                    t.forfeited_by = "client"
                    break
            self.claim(picked, P1)
            t.records.append(
                (self.round_no, self.board_labeler(picked), "C", (picked,))
            )
            rest = tuple(e for e in offered if e != picked)
            for e in rest:
                self.claim(e, P2)
            if rest:
                t.records.append(
                    (self.round_no, self.board_labeler(rest[0]), "W", rest)
                )
            if not self.round_no % self.check_every or not self.free:
                if self.win_checker(self):
                    won = True
                    t.win_round = self.round_no
        if t.forfeited_by is None and not won and self.win_checker(self):
            won = True
            t.win_round = self.round_no
        if t.forfeited_by == "waiter":
            t.winner = "client"
        elif t.forfeited_by == "client":
            t.winner = "waiter"
        else:
            t.winner = "waiter" if won else "client"
        t.rounds = self.round_no
        t.annotations.update(self.annotations)
        t.owner_hash = Transcript.hash_owner(self.owner)
        return t


def play_mb(board, maker, breaker, bias, win_checker, seed=0, **kw) -> Transcript:
    return MakerBreakerGame(board, maker, breaker, bias, win_checker, seed,
                            **kw).play()


def play_wc(board, waiter, client, bias, win_checker, seed=0, **kw) -> Transcript:
    return WaiterClientGame(board, waiter, client, bias, win_checker, seed,
                            **kw).play()


def replay(transcript: Transcript, win_checker) -> Transcript:
    """Re-execute a transcript's moves through the engine.

    Returns the fresh transcript; callers compare owner_hash / winner.
    """
    mm, bb = [], []
    for _, _, actor, elems in transcript.records:
        if actor in ("M", "C"):
            mm.append(tuple(elems))
        else:
            bb.append(tuple(elems))
    if transcript.kind == "MB":
        return play_mb(
            transcript.board, ScriptedStrategy(mm), ScriptedStrategy(bb),
            transcript.bias, win_checker, transcript.seed,
            maker_first=transcript.maker_first,
        )
    # WC: the waiter script must offer pick+rest together, client picks the pick
    offers = []
    picks = []
    by_round: dict[int, dict] = {}
    for rnd, _, actor, elems in transcript.records:
        by_round.setdefault(rnd, {})[actor] = elems
    for rnd in sorted(by_round):
        rec = by_round[rnd]
        pick = rec["C"][0]
        rest = rec.get("W", ())
        offers.append((pick,) + tuple(rest))
        picks.append((pick,))
    return play_wc(
        transcript.board, ScriptedStrategy(offers), ScriptedStrategy(picks),
        transcript.bias, win_checker, transcript.seed,
        allow_short_offers=True,
    )


# ---------------------------------------------------------------------------
# Win checkers
# ---------------------------------------------------------------------------


def win_owns_family(hg: Hypergraph):
    """Builder side wins by fully owning some winning set."""
    fam = [frozenset(f) for f in hg.family]

    def check(game) -> bool:
        owned = {e for e, s in game.log if s == P1}
        return any(f <= owned for f in fam)

    return check


def win_graph(pred):
    """Builder side wins when pred(Maker's graph) is true."""

    def check(game) -> bool:
        return bool(pred(game.p1_graph()))

    return check


def win_never(game) -> bool:
    return False


# ---------------------------------------------------------------------------
# Multiplexing
# ---------------------------------------------------------------------------

ROUND_ROBIN = "round_robin"
FOLLOW = "follow"


class SubBoardView:
    """A filtered, incrementally synced view of one sub-board."""

    def __init__(self, game: GameBase, elements, board_graph: Graph | None = None):
        self.parent = game
        self.elements = tuple(elements)
        self.element_set = set(self.elements)
        self.free = set(e for e in self.elements if game.owner[e] == FREE)
        self.log: list[tuple] = []
        self.owner = {e: game.owner[e] for e in self.elements}
        self.gview = GraphView(board_graph) if board_graph is not None else None
        self.annotations = game.annotations
        self.round_no = 0

    def absorb(self, elem, side) -> None:
        self.owner[elem] = side
        self.free.discard(elem)
        self.log.append((elem, side))
        if self.gview is not None:
            self.gview.on_claim(elem, side)

    def p1_elements(self):
        return [e for e, s in self.log if s == P1]

    def p1_graph(self) -> Graph:
        return self.gview.maker_graph()


class MultiplexStrategy(Strategy):
    """Compose per-board strategies over disjoint sub-boards.

    policy ROUND_ROBIN cycles the boards in order; FOLLOW answers on the
    lowest-indexed board the opponent touched since our previous move.
    Boards whose strategy declares done() (or that ran out of free
    elements) are skipped; if everything is done the lowest free element of
    the whole board is claimed so the engine always gets a legal move.
    """

    def __init__(self, sub_boards: list, sub_strategies: list,
                 policy: str = ROUND_ROBIN, sub_graphs: list | None = None):
        if len(sub_boards) != len(sub_strategies):
            raise ValueError("boards/strategies length mismatch")
        seen = set()
        for b in sub_boards:
            bs = set(b)
            if bs & seen:
                raise ValueError("sub-boards overlap")
            seen |= bs
        self.sub_boards = [tuple(b) for b in sub_boards]
        self.subs = sub_strategies
        self.policy = policy
        self.sub_graphs = sub_graphs or [None] * len(sub_boards)
        self.views: list[SubBoardView] = []
        self.elem_board: dict = {}
        self.cursor = 0
        self.rr_next = 0

    def attach(self, game, side, rng):
        super().attach(game, side, rng)
        self.views = [
            SubBoardView(game, b, g)
            for b, g in zip(self.sub_boards, self.sub_graphs)
        ]
        self.elem_board = {
            e: i for i, b in enumerate(self.sub_boards) for e in b
        }
        self.cursor = 0
        self.rr_next = 0
        for i, s in enumerate(self.subs):
            s.attach(self.views[i], side, rng.split("sub", i))

    def _sync(self):
        """Dispatch new claims from the parent log into the sub-views."""
        touched = []
        log = self.game.log
        while self.cursor < len(log):
            elem, side = log[self.cursor]
            self.cursor += 1
            i = self.elem_board.get(elem)
            if i is not None:
                self.views[i].absorb(elem, side)
                if side != self.side:
                    touched.append(i)
        return touched

    def _board_live(self, i) -> bool:
        return bool(self.views[i].free) and not self.subs[i].done(self.views[i])

    def _choose_board(self, touched) -> int | None:
        k = len(self.views)
        if self.policy == FOLLOW and touched:
            for i in sorted(set(touched)):
                if self._board_live(i):
                    return i
        # round robin (also the FOLLOW fallback)
        for off in range(k):
            i = (self.rr_next + off) % k
            if self._board_live(i):
                self.rr_next = i + 1
                return i
        return None

    def move(self, game):
        touched = self._sync()
        i = self._choose_board(touched)
        if i is None:
            return min(game.free, key=_elem_str) if game.free else None
        view = self.views[i]
        view.round_no += 1
        e = self.subs[i].move(view)
        if e not in view.free:
            return None  # sub-strategy misbehaved; forfeit loudly
        return e

    def done(self, game):
        self._sync()
        return all(not self._board_live(i) for i in range(len(self.views)))


# ---------------------------------------------------------------------------
# Fake-move adapters
# ---------------------------------------------------------------------------


class _OverlayView:
    """Game view in which some free elements look opponent-claimed."""

    def __init__(self, game):
        self.parent = game
        self.virtual: set = set()
        self.log: list[tuple] = []
        self.annotations = game.annotations

    @property
    def free(self):
        return self.parent.free - self.virtual

    @property
    def gview(self):
        return self.parent.gview  # degree info includes virtuals only via log

    def p1_elements(self):
        return [e for e, s in self.log if s == P1]


class FakeMovesMaker(Strategy):
    """Wrap a bias-b Maker strategy so it tolerates 0..b opponent claims per
    round: each opponent round is topped up to exactly b with virtual claims
    on free elements; a virtual element later claimed for real is replaced
    by a fresh virtual claim."""

    def __init__(self, inner: Strategy, bias: int):
        self.inner = inner
        self.bias = bias

    def attach(self, game, side, rng):
        super().attach(game, side, rng)
        self.overlay = _OverlayView(game)
        self.cursor = 0
        self.calls = 0
        self.exhausted = False
        self.inner.attach(self.overlay, side, rng.split("inner"))

    def _top_up(self, need: int) -> bool:
        pool = sorted(self.overlay.free, key=_elem_str)
        if need > len(pool):
            return False
        for e in pool[:need]:
            self.overlay.virtual.add(e)
            self.overlay.log.append((e, P2))
        return True

    def move(self, game):
        opp_new = 0
        log = game.log
        while self.cursor < len(log):
            elem, side = log[self.cursor]
            self.cursor += 1
            if side == self.side:
                continue
            if elem in self.overlay.virtual:
                # real opponent took a virtual element: swap in a fresh one,
                # which counts as this round's visible claim for the inner game
                self.overlay.virtual.discard(elem)
                free = sorted(self.overlay.free, key=_elem_str)
                if free:
                    self.overlay.virtual.add(free[0])
                    self.overlay.log.append((free[0], P2))
                    opp_new += 1
                continue
            opp_new += 1
            self.overlay.log.append((elem, side))
        opp_round_happened = self.calls > 0 or opp_new > 0
        if opp_round_happened and not self.exhausted:
            need = self.bias - opp_new
            if need > 0 and not self._top_up(need):
                self.exhausted = True
        self.calls += 1
        if self.exhausted or not self.overlay.free:
            # inner's virtual game is over; keep playing legally
            pool = sorted(game.free, key=_elem_str)
            return pool[0] if pool else None
        e = self.inner.move(self.overlay)
        if e in self.overlay.free:
            self.overlay.log.append((e, P1))
            return e
        return None

    def done(self, game):
        return self.inner.done(self.overlay)


class FakeMovesWaiter(Strategy):
    """Wrap a bias-b Waiter strategy so it can play rounds with smaller
    offers: unoffered elements of the inner offer become virtual Waiter
    claims (the inner game finishes within ceil(|X|/(b+1)) rounds; the
    wrapper then offers leftovers arbitrarily)."""

    def __init__(self, inner: Strategy, bias: int):
        self.inner = inner
        self.bias = bias

    def attach(self, game, side, rng):
        super().attach(game, side, rng)
        self.overlay = _OverlayView(game)
        self.cursor = 0
        self.finished = False
        self.inner.attach(self.overlay, side, rng.split("inner"))

    def _sync(self):
        log = self.game.log
        while self.cursor < len(log):
            elem, side = log[self.cursor]
            self.cursor += 1
            if elem in self.overlay.virtual:
                # already recorded as Waiter-owned in the inner game
                self.overlay.virtual.discard(elem)
                continue
            self.overlay.log.append((elem, side))

    def offer(self, game, size):
        self._sync()
        if self.finished or len(self.overlay.free) == 0:
            pool = sorted(game.free, key=_elem_str)
            return pool[:size]
        inner_size = min(self.bias + 1, len(self.overlay.free))
        want = self.inner.offer(self.overlay, inner_size)
        want = [e for e in want if e in self.overlay.free]
        if not want:
            self.finished = True
            pool = sorted(game.free, key=_elem_str)
            return pool[:size]
        real = want[:size]
        for e in want[size:]:
            # inner believes these were offered and returned to Waiter
            self.overlay.virtual.add(e)
            self.overlay.log.append((e, P2))
        return real

    def done(self, game):
        return self.inner.done(self.overlay)


def fake_moves_mb(inner: Strategy, bias: int) -> FakeMovesMaker:
    return FakeMovesMaker(inner, bias)


def fake_moves_wc(inner: Strategy, bias: int) -> FakeMovesWaiter:
    return FakeMovesWaiter(inner, bias)


# ---------------------------------------------------------------------------
# Exact minimax for tiny boards
# ---------------------------------------------------------------------------

MB_SOLVE_GUARD = 16
WC_SOLVE_GUARD = 12


class MinimaxMB:
    """Exact (1:b) Maker-Breaker solver over ownership bitmask states.

    `canonical(mmask, bmask) -> key` may be supplied to quotient symmetric
    positions (e.g. interchangeable box elements); values are state
    functions so the quotient is sound, and optimal moves are recovered by
    one-ply search over children.
    """

    def __init__(self, hg: Hypergraph, bias: int, maker_first: bool = True,
                 canonical=None, guard: int = MB_SOLVE_GUARD):
        if len(hg.elements) > guard:
            raise ValueError(f"minimax guard exceeded (|X|={len(hg.elements)})")
        self.elements = hg.elements
        self.index = {e: i for i, e in enumerate(hg.elements)}
        self.fam = [
            sum(1 << self.index[e] for e in f) for f in hg.family
        ]
        self.full = (1 << len(hg.elements)) - 1
        self.bias = bias
        self.maker_first = maker_first
        self.canonical = canonical
        self.memo_m: dict = {}
        self.memo_b: dict = {}

    def _won(self, mmask: int) -> bool:
        return any(fm & mmask == fm for fm in self.fam)

    def _key(self, mmask, bmask):
        if self.canonical:
            return self.canonical(mmask, bmask)
        return (mmask, bmask)

    def maker_wins(self, mmask: int = 0, bmask: int = 0,
                   maker_to_move: bool | None = None) -> bool:
        if maker_to_move is None:
            maker_to_move = self.maker_first
        if maker_to_move:
            return self._maker_turn(mmask, bmask)
        return self._breaker_turn(mmask, bmask)

    def _maker_turn(self, mmask, bmask) -> bool:
        if self._won(mmask):
            return True
        free = self.full & ~mmask & ~bmask
        if not free:
            return False
        key = self._key(mmask, bmask)
        hit = self.memo_m.get(key)
        if hit is not None:
            return hit
        out = False
        f = free
        while f and not out:
            low = f & -f
            f ^= low
            m2 = mmask | low
            if self._won(m2) or self._breaker_turn(m2, bmask):
                out = True
        self.memo_m[key] = out
        return out

    def _breaker_turn(self, mmask, bmask) -> bool:
        """True iff MAKER wins with Breaker to move."""
        free = self.full & ~mmask & ~bmask
        if not free:
            return self._won(mmask)
        key = self._key(mmask, bmask)
        hit = self.memo_b.get(key)
        if hit is not None:
            return hit
        take = min(self.bias, free.bit_count())
        idxs = [i for i in range(len(self.elements)) if (free >> i) & 1]
        out = True
        for combo in itertools.combinations(idxs, take):
            b2 = bmask
            for i in combo:
                b2 |= 1 << i
            if not self._maker_turn(mmask, b2):
                out = False
                break
        self.memo_b[key] = out
        return out

    # -- optimal play ------------------------------------------------------

    def best_maker_move(self, mmask: int, bmask: int):
        free = self.full & ~mmask & ~bmask
        wins, fallback = [], None
        f = free
        while f:
            low = f & -f
            f ^= low
            i = low.bit_length() - 1
            if fallback is None:
                fallback = i
            m2 = mmask | low
            if self._won(m2) or self._breaker_turn(m2, bmask):
                wins.append(i)
        pick = wins[0] if wins else fallback
        return self.elements[pick]

    def best_breaker_move(self, mmask: int, bmask: int, count: int):
        free = self.full & ~mmask & ~bmask
        idxs = [i for i in range(len(self.elements)) if (free >> i) & 1]
        fallback = None
        for combo in itertools.combinations(idxs, count):
            b2 = bmask
            for i in combo:
                b2 |= 1 << i
            if fallback is None:
                fallback = combo
            if not self._maker_turn(mmask, b2):
                return [self.elements[i] for i in combo]
        return [self.elements[i] for i in fallback] if fallback else []

    def masks_from_game(self, game) -> tuple[int, int]:
        mm = bm = 0
        for e, s in game.log:
            if e in self.index:
                if s == P1:
                    mm |= 1 << self.index[e]
                else:
                    bm |= 1 << self.index[e]
        return mm, bm


class MinimaxWC:
    """Exact (1:b) Waiter-Client solver (Waiter wins iff Client is forced
    to complete a set of the family)."""

    def __init__(self, hg: Hypergraph, bias: int, guard: int = WC_SOLVE_GUARD):
        if len(hg.elements) > guard:
            raise ValueError(f"WC minimax guard exceeded")
        self.elements = hg.elements
        self.index = {e: i for i, e in enumerate(hg.elements)}
        self.fam = [sum(1 << self.index[e] for e in f) for f in hg.family]
        self.full = (1 << len(hg.elements)) - 1
        self.bias = bias
        self.memo: dict = {}

    def _client_completed(self, cmask: int) -> bool:
        return any(fm & cmask == fm for fm in self.fam)

    def waiter_wins(self, cmask: int = 0, wmask: int = 0) -> bool:
        if self._client_completed(cmask):
            return True
        free = self.full & ~cmask & ~wmask
        if not free:
            return False
        key = (cmask, wmask)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        idxs = [i for i in range(len(self.elements)) if (free >> i) & 1]
        size = min(self.bias + 1, len(idxs))
        out = False
        if size == 1:
            out = self.waiter_wins(cmask | (1 << idxs[0]), wmask)
        else:
            for offer in itertools.combinations(idxs, size):
                om = 0
                for i in offer:
                    om |= 1 << i
                good = True
                for i in offer:
                    c2 = cmask | (1 << i)
                    w2 = wmask | (om & ~(1 << i))
                    if not self.waiter_wins(c2, w2):
                        good = False
                        break
                if good:
                    out = True
                    break
        self.memo[key] = out
        return out

    def best_client_pick(self, cmask: int, wmask: int, offer_idxs):
        """A pick avoiding a Waiter win when one exists."""
        om = 0
        for i in offer_idxs:
            om |= 1 << i
        fallback = offer_idxs[0]
        for i in offer_idxs:
            c2 = cmask | (1 << i)
            w2 = wmask | (om & ~(1 << i))
            if not self.waiter_wins(c2, w2):
                return i
        return fallback


class MinimaxMakerStrategy(Strategy):
    """Optimal Maker from a MinimaxMB solver."""

    def __init__(self, solver: MinimaxMB):
        self.solver = solver

    def move(self, game):
        mm, bm = self.solver.masks_from_game(game)
        return self.solver.best_maker_move(mm, bm)


class MinimaxBreakerStrategy(Strategy):
    def __init__(self, solver: MinimaxMB):
        self.solver = solver

    def moves(self, game, count):
        mm, bm = self.solver.masks_from_game(game)
        return self.solver.best_breaker_move(mm, bm, count)


class MinimaxClientStrategy(Strategy):
    """Optimal (Waiter-thwarting) Client from a MinimaxWC solver."""

    def __init__(self, solver: MinimaxWC):
        self.solver = solver

    def pick(self, game, offered):
        cm = wm = 0
        for e, s in game.log:
            i = self.solver.index[e]
            if s == P1:
                cm |= 1 << i
            else:
                wm |= 1 << i
        idxs = [self.solver.index[e] for e in offered]
        best = self.solver.best_client_pick(cm, wm, idxs)
        return self.solver.elements[best]
