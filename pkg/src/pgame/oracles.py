"""Graph property verifiers.

Every oracle is exact at desk scale and says so: results that come from
sampling are tagged, because a strategy may consume a heuristic answer but
an acceptance test may not.  Guards (documented defaults below) make the
exponential enumerations refuse rather than silently approximate.

Guards:
    HAM_DP_GUARD       = 20   bitmask DP for Hamiltonicity / longest path
    HAM_BNB_GUARD      = 60   branch-and-bound Hamiltonicity
    BOOSTER_GUARD      = 16   exhaustive booster enumeration
    REGULARITY_GUARD   = 14   exact epsilon-regularity check
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb, log

from .graph import (
    Graph,
    bits,
    canon_edge,
    connected_components,
    external_neighbourhood,
    graph_plus,
    is_connected,
    mask_of,
)
from .rng import Rng

HAM_DP_GUARD = 20
HAM_BNB_GUARD = 60
BOOSTER_GUARD = 16
REGULARITY_GUARD = 14


# ---------------------------------------------------------------------------
# Hamiltonicity and longest paths
# ---------------------------------------------------------------------------


def _ends_dp(adj: tuple[int, ...], n: int) -> list[int]:
    """ends[mask] = bitmask of v such that some path spans mask and ends at v."""
    size = 1 << n
    ends = [0] * size
    for v in range(n):
        ends[1 << v] = 1 << v
    for mask in range(1, size):
        e = ends[mask]
        while e:
            low = e & -e
            e ^= low
            v = low.bit_length() - 1
            ext = adj[v] & ~mask
            while ext:
                lw = ext & -ext
                ext ^= lw
                ends[mask | lw] |= lw
    return ends


def longest_path_order(g: Graph) -> int:
    """Number of vertices on a longest path (exact, n <= HAM_DP_GUARD)."""
    if g.n > HAM_DP_GUARD:
        raise ValueError(f"longest_path_order guard exceeded (n={g.n})")
    if g.n == 0:
        return 0
    ends = _ends_dp(g.adj, g.n)
    best = 1
    for mask in range(1, 1 << g.n):
        if ends[mask]:
            c = mask.bit_count()
            if c > best:
                best = c
    return best


def _ham_cycle_dp(g: Graph) -> list[int] | None:
    """Hamilton cycle as a vertex list, or None.  Paths anchored at vertex 0."""
    n = g.n
    if n < 3:
        return None
    adj = g.adj
    size = 1 << n
    # dp[mask] = endpoints v of paths from 0 spanning mask (0 in mask)
    dp = [0] * size
    dp[1] = 1
    for mask in range(1, size):
        if not (mask & 1):
            continue
        e = dp[mask]
        while e:
            low = e & -e
            e ^= low
            v = low.bit_length() - 1
            ext = adj[v] & ~mask
            while ext:
                lw = ext & -ext
                ext ^= lw
                dp[mask | lw] |= lw
    full = size - 1
    closers = dp[full] & adj[0]
    if not closers:
        return None
    # walk the DP backwards to recover one cycle
    path = []
    v = (closers & -closers).bit_length() - 1
    mask = full
    while mask != 1:
        path.append(v)
        pm = mask & ~(1 << v)
        cand = dp[pm] & adj[v]
        v = (cand & -cand).bit_length() - 1
        mask = pm
    path.append(0)
    path.reverse()
    return path


def _components_within(adj, dom: int) -> list[int]:
    comps = []
    rest = dom
    while rest:
        seed = rest & -rest
        seen = seed
        frontier = seed
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= adj[v]
            nxt &= dom & ~seen
            seen |= nxt
            frontier = nxt
        comps.append(seen)
        rest &= ~seen
    return comps


def _articulation_points(adj, dom: int) -> int:
    """Mask of articulation points of the graph induced on dom (Tarjan)."""
    verts = list(bits(dom))
    if len(verts) <= 2:
        return 0
    index = {v: i for i, v in enumerate(verts)}
    disc = [0] * len(verts)
    low = [0] * len(verts)
    out = 0
    timer = 1
    for root in verts:
        if disc[index[root]]:
            continue
        stack = [(root, -1, iter(bits(adj[root] & dom)))]
        disc[index[root]] = low[index[root]] = timer
        timer += 1
        root_children = 0
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for w in it:
                iw = index[w]
                if not disc[iw]:
                    if v == root:
                        root_children += 1
                    disc[iw] = low[iw] = timer
                    timer += 1
                    stack.append((w, v, iter(bits(adj[w] & dom))))
                    advanced = True
                    break
                elif w != parent:
                    low[index[v]] = min(low[index[v]], disc[iw])
            if not advanced:
                stack.pop()
                if stack:
                    pv = stack[-1][0]
                    ipv, iv = index[pv], index[v]
                    low[ipv] = min(low[ipv], low[iv])
                    if pv != root and low[iv] >= disc[ipv]:
                        out |= 1 << pv
        if root_children >= 2:
            out |= 1 << root
    return out


def _bipartition_within(adj, dom: int) -> tuple[int, int] | None:
    """2-colouring of the graph induced on dom, or None if non-bipartite."""
    colour: dict[int, int] = {}
    a = b = 0
    rest = dom
    while rest:
        root = (rest & -rest).bit_length() - 1
        colour[root] = 0
        a |= 1 << root
        frontier = [root]
        while frontier:
            v = frontier.pop()
            for w in bits(adj[v] & dom):
                if w not in colour:
                    colour[w] = colour[v] ^ 1
                    if colour[w]:
                        b |= 1 << w
                    else:
                        a |= 1 << w
                    frontier.append(w)
                elif colour[w] == colour[v]:
                    return None
        rest = dom & ~(a | b)
    return a, b


_BNB_NODE_BUDGET = 3_000_000


def _ham_bnb(g: Graph) -> list[int] | None:
    """Backtracking Hamilton cycle search with degree, connectivity,
    cut-vertex and bipartite-parity pruning (a path visits a cut vertex
    once, so it covers at most two of the parts the vertex separates; on a
    bipartite remainder the class sizes may differ by at most one).

    Raises RuntimeError if the node budget runs out; never guesses.
    """
    n = g.n
    if n < 3:
        return None
    if g.min_degree() < 2 or not is_connected(g):
        return None
    adj = g.adj
    full = g.full_mask
    start = min(range(n), key=g.degree)
    path = [start]
    nodes = [0]

    def feasible(used_mask: int, tip: int) -> bool:
        rest = full & ~used_mask
        if rest == 0:
            return True
        dom = rest | (1 << tip) | (1 << start)
        # connectivity of the remainder problem
        seen = 1 << tip
        frontier = seen
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= adj[v]
            nxt &= dom & ~seen
            seen |= nxt
            frontier = nxt
        if seen & dom != dom:
            return False
        # unvisited vertices need two usable neighbours
        for v in bits(rest):
            if (adj[v] & dom).bit_count() < 2:
                return False
        # bipartite parity: a spanning tip-start path constrains the sides
        parts = _bipartition_within(adj, dom)
        if parts is not None:
            ca, cb = parts[0].bit_count(), parts[1].bit_count()
            if abs(ca - cb) >= 2:
                return False
            if tip == start:
                # remainder must close into a cycle: sides exactly equal
                if ca != cb:
                    return False
            elif ca == cb:
                if (parts[0] >> tip & 1) == (parts[0] >> start & 1):
                    return False
            else:
                big = parts[0] if ca > cb else parts[1]
                if not (big >> tip & 1) or not (big >> start & 1):
                    return False
        # cut-vertex rule on the remainder graph
        arts = _articulation_points(adj, dom)
        for c in bits(arts):
            comps = _components_within(adj, dom & ~(1 << c))
            if len(comps) < 2:
                continue
            if tip == start:  # root of the cycle search: no cut vertex allowed
                return False
            if c == tip or c == start:
                return False
            if len(comps) >= 3:
                return False
            tcomp = next(i for i, m in enumerate(comps) if m >> tip & 1)
            scomp = next(i for i, m in enumerate(comps) if m >> start & 1)
            if tcomp == scomp:
                return False
        return True

    def rec(tip: int, used_mask: int) -> bool:
        nodes[0] += 1
        if nodes[0] > _BNB_NODE_BUDGET:
            raise RuntimeError("Hamiltonicity branch-and-bound budget exceeded")
        if used_mask == full:
            return bool(adj[tip] & (1 << start))
        if not feasible(used_mask, tip):
            return False
        cand = adj[tip] & ~used_mask
        order = sorted(
            bits(cand), key=lambda w: (adj[w] & ~used_mask).bit_count()
        )
        for w in order:
            path.append(w)
            if rec(w, used_mask | (1 << w)):
                return True
            path.pop()
        return False

    if rec(start, 1 << start):
        return path[:]
    return None


def _rotation_closure(adj, path: list[int], in_path: int, budget: int):
    """All distinct-endpoint rotations of `path` with the head fixed,
    breadth-first, up to `budget` variants (the input path included)."""
    seen = {path[-1]}
    out = [path]
    at = 0
    while at < len(out) and len(out) < budget:
        p = out[at]
        at += 1
        tip = p[-1]
        posmap = {v: i for i, v in enumerate(p)}
        for v in bits(adj[tip] & in_path):
            i = posmap[v]
            if i >= len(p) - 2:
                continue
            np = p[: i + 1] + p[i + 1 :][::-1]
            e = np[-1]
            if e not in seen:
                seen.add(e)
                out.append(np)
    return out


def posa_path(g: Graph, rng: Rng, max_steps: int = 0,
              closure_budget: int = 0, two_level: int = 14,
              stall_tolerance: int = 8) -> tuple[list[int], bool]:
    """Rotation-extension search for a long path.

    Extension is most-constrained-first; when the tip is stuck, the full
    rotation closure of either endpoint is searched breadth-first for an
    extendable (or cycle-closing) variant, then the heads of the first
    `two_level` tail variants.  Returns (path, is_cycle): when is_cycle is
    True the path is a Hamilton cycle.  One-sided: failure to span proves
    nothing.
    """
    n = g.n
    if n == 0:
        return [], False
    adj = g.adj
    if max_steps <= 0:
        max_steps = 60 * n + 400
    start = rng.randrange(n)
    path = [start]
    in_path = 1 << start
    steps = 0
    if closure_budget <= 0:
        closure_budget = max(64, 3 * n)

    def extend_once(p):
        nonlocal in_path
        tip = p[-1]
        ext = adj[tip] & ~in_path
        if not ext:
            return None
        opts = list(bits(ext))
        if len(opts) > 1:
            scored = [
                ((adj[w] & ~in_path).bit_count(), rng.randrange(1 << 16), w)
                for w in opts
            ]
            w = min(scored)[2]
        else:
            w = opts[0]
        p = p + [w]
        in_path |= 1 << w
        return p

    def try_variants(variants):
        """Extend / close / reattach from rotation variants.  Returns
        ("cycle", p) / ("path", p) / None."""
        nonlocal in_path
        for p in variants:
            if len(p) == n and adj[p[-1]] & (1 << p[0]):
                return ("cycle", p)
            grown = extend_once(p)
            if grown is not None:
                return ("path", grown)
        if len(variants[0]) < n:
            for p in variants:
                if not (adj[p[-1]] & (1 << p[0])):
                    continue
                for i, v in enumerate(p):
                    out = adj[v] & ~in_path
                    if out:
                        cyc = p[i + 1 :] + p[: i + 1]
                        w = (out & -out).bit_length() - 1
                        in_path |= 1 << w
                        return ("path", cyc + [w])
        return None

    stalls = 0
    while steps < max_steps:
        steps += 1
        grown = extend_once(path)
        if grown is not None:
            path = grown
            continue
        if len(path) == n and adj[path[-1]] & (1 << path[0]):
            return path, True
        # level 1: rotation closures of both endpoints
        tails = _rotation_closure(adj, path, in_path, closure_budget)
        heads = _rotation_closure(adj, path[::-1], in_path, closure_budget)
        steps += len(tails) + len(heads)
        hit = try_variants(tails) or try_variants(heads)
        # level 2: rotate the head of the first few tail variants
        if hit is None and two_level > 0:
            for p in tails[1 : min(len(tails), two_level + 1)]:
                two = _rotation_closure(adj, p[::-1], in_path, closure_budget)
                steps += len(two)
                hit = try_variants(two)
                if hit is not None or steps >= max_steps:
                    break
        if hit is not None:
            kind, p = hit
            if kind == "cycle":
                return p, True
            path = p
            stalls = 0
            continue
        # perturb: adopt a random variant and keep walking the closure graph
        stalls += 1
        if stalls > stall_tolerance:
            break
        pool = tails + heads
        path = pool[rng.randrange(len(pool))]
    return path, False


@dataclass
class HamResult:
    hamiltonian: bool
    mode: str  # "exact" | "posa"
    cycle: list[int] | None = None

    def __bool__(self) -> bool:
        return self.hamiltonian


def is_hamiltonian(g: Graph, method: str = "auto", seed: int = 0,
                   restarts: int = 24) -> HamResult:
    """Hamiltonicity check.

    method "auto": exact DP for n <= HAM_DP_GUARD, branch-and-bound up to
    HAM_BNB_GUARD, refuses beyond.  method "posa": one-sided rotation
    heuristic (a YES carries a cycle witness and is conclusive; a NO is not).
    """
    n = g.n
    if n < 3 or g.min_degree() < 2 or not is_connected(g):
        return HamResult(False, "exact")
    if method == "posa":
        rng = Rng(seed)
        for _ in range(restarts):
            path, closed = posa_path(g, rng)
            if closed:
                return HamResult(True, "posa", path)
        return HamResult(False, "posa")
    if method not in ("auto", "exact"):
        raise ValueError(f"unknown method {method!r}")
    if n > HAM_BNB_GUARD:
        raise ValueError(
            f"exact Hamiltonicity guard exceeded (n={g.n}); use method='posa'"
        )
    # cheap YES first: rotation usually finds the cycle quickly
    rng = Rng(seed)
    path, closed = posa_path(g, rng)
    if closed:
        return HamResult(True, "exact", path)
    # both branches are exact; the pruned search wins above ~14 vertices
    if n <= 14:
        cyc = _ham_cycle_dp(g)
    else:
        cyc = _ham_bnb(g)
    return HamResult(cyc is not None, "exact", cyc)


def verify_cycle(g: Graph, cycle: list[int]) -> bool:
    """A cycle witness must visit every vertex once along edges of g."""
    if len(cycle) != g.n or len(set(cycle)) != g.n:
        return False
    return all(
        g.has_edge(cycle[i], cycle[(i + 1) % g.n]) for i in range(g.n)
    )


# ---------------------------------------------------------------------------
# Boosters
# ---------------------------------------------------------------------------


@dataclass
class BoosterSet:
    boosters: list[tuple[int, int]]
    method: str  # "exact" | "posa"
    already_hamiltonian: bool = False


def non_edges(g: Graph) -> list[tuple[int, int]]:
    return [
        (u, v)
        for u in range(g.n)
        for v in range(u + 1, g.n)
        if not (g.adj[u] >> v) & 1
    ]


def boosters_exact(g: Graph) -> BoosterSet:
    """All non-edges whose addition makes g Hamiltonian or lengthens the
    longest path.  Exhaustive; n <= BOOSTER_GUARD."""
    if g.n > BOOSTER_GUARD:
        raise ValueError(f"boosters_exact guard exceeded (n={g.n})")
    if is_hamiltonian(g).hamiltonian:
        return BoosterSet([], "exact", already_hamiltonian=True)
    base = longest_path_order(g)
    out = []
    for e in non_edges(g):
        g2 = graph_plus(g, [e])
        if longest_path_order(g2) > base or is_hamiltonian(g2).hamiltonian:
            out.append(e)
    return BoosterSet(out, "exact")


def boosters_posa(g: Graph, seed: int = 0, restarts: int = 12,
                  closure_budget: int = 256, fast: bool = False) -> BoosterSet:
    """Sound subset of the boosters, from Hamilton-path closures.

    Rotation-extension hunts for spanning paths; every returned pair (u,v)
    is the endpoint pair of a witnessed Hamilton path, so g+uv is
    Hamiltonian and the pair is a booster by definition.  Non-spanning
    terminal paths yield nothing (soundness over completeness), so the
    result may be empty.
    """
    if not is_connected(g):
        return BoosterSet([], "posa")
    rng = Rng(seed)
    n = g.n
    found: set[tuple[int, int]] = set()
    hamiltonian = False
    if fast:
        restarts = min(restarts, 3)
        closure_budget = min(closure_budget, 96)
    for _ in range(restarts):
        if fast:
            path, closed = posa_path(g, rng, max_steps=8 * n,
                                     closure_budget=max(24, n),
                                     two_level=4, stall_tolerance=2)
        else:
            path, closed = posa_path(g, rng)
        if closed:
            hamiltonian = True
            break
        if len(path) != n:
            continue
        # explore endpoint pairs reachable by rotations at either end
        seen_paths = {tuple(path)}
        queue = [path]
        while queue and len(seen_paths) < closure_budget:
            p = queue.pop()
            for flipped in (p, p[::-1]):
                tip, head = flipped[-1], flipped[0]
                if not g.has_edge(tip, head):
                    found.add(canon_edge(tip, head))
                posx = {v: i for i, v in enumerate(flipped)}
                for v in bits(g.adj[tip]):
                    i = posx.get(v)
                    if i is None or i >= len(flipped) - 2:
                        continue
                    rotated = flipped[: i + 1] + flipped[i + 1 :][::-1]
                    t = tuple(rotated)
                    if t not in seen_paths:
                        seen_paths.add(t)
                        queue.append(rotated)
    if hamiltonian:
        return BoosterSet([], "posa", already_hamiltonian=True)
    return BoosterSet(sorted(found), "posa")


# ---------------------------------------------------------------------------
# Expanders
# ---------------------------------------------------------------------------


@dataclass
class ExpanderResult:
    is_expander: bool
    mode: str  # "exact" | "sampled"
    violator: int | None = None  # mask of a violating set when found

    def __bool__(self) -> bool:
        return self.is_expander


def is_r_expander(g: Graph, R: int, budget: int = 2_000_000,
                  samples: int = 4000, seed: int = 0) -> ExpanderResult:
    """|N(A)| >= 2|A| for every A with |A| <= R.

    Exact when sum_{i<=R} C(n,i) fits the enumeration budget; otherwise
    sampled (one-sided: a found violation is conclusive, absence is
    statistical).
    """
    n = g.n
    R = min(R, n)
    total = sum(comb(n, i) for i in range(1, R + 1))
    if total <= budget:
        for size in range(1, R + 1):
            for combo in itertools.combinations(range(n), size):
                am = mask_of(combo)
                if external_neighbourhood(g, am).bit_count() < 2 * size:
                    return ExpanderResult(False, "exact", am)
        return ExpanderResult(True, "exact")
    rng = Rng(seed)
    verts = list(range(n))
    # all singletons are cheap and catch low-degree violations first
    for v in verts:
        if g.degree(v) < 2:
            return ExpanderResult(False, "sampled", 1 << v)
    for _ in range(samples):
        size = rng.randint(1, R)
        am = mask_of(rng.sample(verts, size))
        if external_neighbourhood(g, am).bit_count() < 2 * size:
            return ExpanderResult(False, "sampled", am)
    return ExpanderResult(True, "sampled")


# ---------------------------------------------------------------------------
# Vertex connectivity (max-flow on the vertex-split network)
# ---------------------------------------------------------------------------


class _SplitFlow:
    """Unit-capacity max-flow on the standard vertex-split digraph.

    Node 2v is v_in, node 2v+1 is v_out; the v_in->v_out arc carries
    capacity 1, graph edges become infinite-capacity arcs in both
    directions.  Menger: max s-t internally-disjoint paths = max flow.
    """

    INF = 1 << 30

    def __init__(self, g: Graph):
        self.n = g.n
        self.graph: list[dict[int, int]] = [dict() for _ in range(2 * g.n)]
        for v in range(g.n):
            self._add(2 * v, 2 * v + 1, 1)
        for u, v in g.edges:
            self._add(2 * u + 1, 2 * v, self.INF)
            self._add(2 * v + 1, 2 * u, self.INF)

    def _add(self, a: int, b: int, cap: int) -> None:
        self.graph[a][b] = self.graph[a].get(b, 0) + cap
        self.graph[b].setdefault(a, 0)

    def max_flow(self, s: int, t: int, limit: int) -> int:
        """BFS augmentation, stopping once the flow reaches `limit`."""
        residual = [dict(d) for d in self.graph]
        src, snk = 2 * s + 1, 2 * t
        flow = 0
        while flow < limit:
            parent = {src: -1}
            queue = [src]
            while queue and snk not in parent:
                nxt = []
                for a in queue:
                    for b, cap in residual[a].items():
                        if cap > 0 and b not in parent:
                            parent[b] = a
                            nxt.append(b)
                queue = nxt
            if snk not in parent:
                break
            # retrace; all arcs on the path have capacity >= 1
            b = snk
            while b != src:
                a = parent[b]
                residual[a][b] -= 1
                residual[b][a] += 1
                b = a
            flow += 1
        self._last_residual = residual
        self._last_src = src
        return flow

    def cut_vertices(self) -> int:
        """Vertices whose in->out arc crosses the last computed min cut."""
        residual = self._last_residual
        seen = {self._last_src}
        queue = [self._last_src]
        while queue:
            a = queue.pop()
            for b, cap in residual[a].items():
                if cap > 0 and b not in seen:
                    seen.add(b)
                    queue.append(b)
        cut = 0
        for v in range(self.n):
            if 2 * v in seen and 2 * v + 1 not in seen:
                cut |= 1 << v
        return cut


def local_connectivity(g: Graph, s: int, t: int, limit: int | None = None) -> int:
    """Internally vertex-disjoint s-t paths (s,t non-adjacent)."""
    lim = g.n if limit is None else limit
    return _SplitFlow(g).max_flow(s, t, lim)


def vertex_connectivity(g: Graph) -> int:
    """Exact kappa(G); kappa(K_n) = n-1, disconnected -> 0."""
    n = g.n
    if n <= 1:
        return 0
    if g.m == n * (n - 1) // 2:
        return n - 1
    if not is_connected(g):
        return 0
    best = n - 1
    i = 0
    while i <= best and i < n:
        fl = _SplitFlow(g)
        for j in range(n):
            if j != i and not (g.adj[i] >> j) & 1:
                best = min(best, fl.max_flow(i, j, best + 1))
        i += 1
    return best


def is_k_connected(g: Graph, k: int) -> bool:
    """kappa(G) >= k.  Brute subset removal for small k, flow otherwise."""
    n = g.n
    if k <= 0:
        return True
    if n <= k:
        return False
    if g.min_degree() < k:
        return False
    if not is_connected(g):
        return False
    if k == 1:
        return True
    if comb(n, k - 1) <= 200_000:
        for kill in itertools.combinations(range(n), k - 1):
            km = mask_of(kill)
            if not is_connected(g, within=g.full_mask & ~km):
                return False
        return True
    return vertex_connectivity(g) >= k


def min_vertex_cut(g: Graph) -> tuple[int, int]:
    """(kappa, cut mask).  For complete graphs the cut mask is 0."""
    n = g.n
    if not is_connected(g):
        return 0, 0
    if g.m == n * (n - 1) // 2:
        return n - 1, 0
    kappa = vertex_connectivity(g)
    # find a realising pair and extract the crossing vertices
    for i in range(n):
        fl = _SplitFlow(g)
        for j in range(n):
            if j != i and not (g.adj[i] >> j) & 1:
                if fl.max_flow(i, j, kappa + 1) == kappa:
                    return kappa, fl.cut_vertices()
    raise AssertionError("connectivity oracle inconsistency")


# ---------------------------------------------------------------------------
# Hamiltonicity sufficient condition of the expansion/crossing-edge type
# ---------------------------------------------------------------------------


@dataclass
class HksReport:
    passed: bool
    cond_i: bool
    cond_ii: bool
    mode_i: str
    mode_ii: str
    s_bound: int
    pair_size: int
    failure: tuple | None = None


def check_hks(g: Graph, d: int, budget: int = 50_000, samples: int = 400,
              seed: int = 0, enforce_range: bool = True,
              pair_size: int | None = None) -> HksReport:
    """Expansion + crossing-edge sufficient condition for Hamiltonicity.

    (i)  |N(S)| >= d|S| for every S with |S| <= n*log(d)/(d*log(n)),
    (ii) e(A,B) > 0 for all disjoint A, B of size >= n*log(d)/(1035*log(n)).

    Condition (i) is exact up to the enumeration budget and sampled beyond;
    condition (ii) is sampled.  A sampled pass is evidence, not proof, and
    the report says which is which.  The d-range precondition
    12 <= d <= sqrt(n) only has solutions for n >= 144; enforce_range=False
    lets desk-scale callers run the check anyway.
    """
    n = g.n
    if enforce_range and not (12 <= d <= n ** 0.5):
        raise ValueError(f"d={d} outside [12, sqrt(n)] for n={n}")
    if d < 2 or n < 3:
        raise ValueError("check_hks needs d >= 2 and n >= 3")
    rng = Rng(seed)
    s_bound = max(1, int(n * log(d) / (d * log(n))))
    if pair_size is None:
        exact = n * log(d) / (1035 * log(n))
        pair_size = max(1, int(exact) + (0 if exact == int(exact) else 1))
    # condition (i)
    cond_i, mode_i, fail = True, "exact", None
    exact_sizes = 0
    spent = 0
    for size in range(1, s_bound + 1):
        if spent + comb(n, size) > budget:
            break
        exact_sizes = size
        for combo in itertools.combinations(range(n), size):
            am = mask_of(combo)
            if external_neighbourhood(g, am).bit_count() < d * size:
                cond_i, fail = False, ("i", am)
                break
        spent += comb(n, size)
        if not cond_i:
            break
    if cond_i and exact_sizes < s_bound:
        mode_i = "sampled"
        verts = list(range(n))
        for _ in range(samples):
            size = rng.randint(exact_sizes + 1, s_bound)
            am = mask_of(rng.sample(verts, size))
            if external_neighbourhood(g, am).bit_count() < d * size:
                cond_i, fail = False, ("i", am)
                break
    # condition (ii)
    cond_ii, mode_ii = True, "sampled"
    if cond_i:
        verts = list(range(n))
        for _ in range(samples):
            pick = rng.sample(verts, 2 * pair_size)
            am = mask_of(pick[:pair_size])
            bm = mask_of(pick[pair_size:])
            if not any((g.adj[u] & bm) for u in bits(am)):
                cond_ii, fail = False, ("ii", am, bm)
                break
    return HksReport(cond_i and cond_ii, cond_i, cond_ii, mode_i, mode_ii,
                     s_bound, pair_size, fail)


# ---------------------------------------------------------------------------
# Epsilon-regularity
# ---------------------------------------------------------------------------


@dataclass
class RegularityParams:
    eps: float
    mode: str = "exact"  # "exact" | "sampled"
    trials: int = 2000
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.eps < 1:
            raise ValueError("eps must lie in (0,1)")


@dataclass
class RegularityResult:
    regular: bool
    mode: str
    density: float
    worst_deviation: float
    witness: tuple[int, int] | None = None  # (X mask, Y mask)

    def __bool__(self) -> bool:
        return self.regular


def pair_density(g: Graph, a, b) -> float:
    am, bm = mask_of(a), mask_of(b)
    ca, cb = am.bit_count(), bm.bit_count()
    if ca == 0 or cb == 0:
        return 0.0
    e = sum((g.adj[u] & bm).bit_count() for u in bits(am))
    return e / (ca * cb)


def _extreme_y_densities(degs: list[int], q: int, nx: int) -> tuple[float, float, list[int], list[int]]:
    """Given degrees-into-X of the B side, the max/min density over Y with
    |Y| >= q is attained by the top-q / bottom-q prefix (prefix averages of a
    sorted sequence are monotone)."""
    order = sorted(range(len(degs)), key=lambda i: -degs[i])
    top = order[:q]
    bot = order[-q:]
    dmax = sum(degs[i] for i in top) / (nx * q)
    dmin = sum(degs[i] for i in bot) / (nx * q)
    return dmax, dmin, top, bot


def regular_pair_check(g: Graph, a, b, params: RegularityParams) -> RegularityResult:
    """Is (A,B) eps-regular?  Exact mode scans every X subset of A and pairs
    it with its extremal Y (guard |A|,|B| <= REGULARITY_GUARD); sampled mode
    draws X at the extremal size."""
    am, bm = mask_of(a), mask_of(b)
    if am & bm:
        raise ValueError("regular pair requires disjoint sets")
    avs, bvs = sorted(bits(am)), sorted(bits(bm))
    na, nb = len(avs), len(bvs)
    if na == 0 or nb == 0:
        raise ValueError("empty side")
    eps = params.eps
    d_ab = pair_density(g, am, bm)
    qa = _ceil_frac(eps, na)
    qb = _ceil_frac(eps, nb)
    worst = 0.0
    witness = None

    def consider(xm: int, nx: int):
        nonlocal worst, witness
        degs = [(g.adj[v] & xm).bit_count() for v in bvs]
        dmax, dmin, top, bot = _extreme_y_densities(degs, qb, nx)
        for dens, idxs in ((dmax, top), (dmin, bot)):
            dev = abs(dens - d_ab)
            if dev > worst:
                worst = dev
                witness = (xm, mask_of(bvs[i] for i in idxs))

    if params.mode == "exact":
        if na > REGULARITY_GUARD or nb > REGULARITY_GUARD:
            raise ValueError("exact regularity guard exceeded")
        for sub in range(1, 1 << na):
            nx = sub.bit_count()
            if nx < qa:
                continue
            xm = 0
            s = sub
            while s:
                low = s & -s
                s ^= low
                xm |= 1 << avs[low.bit_length() - 1]
            consider(xm, nx)
    elif params.mode == "sampled":
        rng = Rng(params.seed)
        for _ in range(params.trials):
            xm = mask_of(rng.sample(avs, qa))
            consider(xm, qa)
    else:
        raise ValueError(f"unknown regularity mode {params.mode!r}")
    return RegularityResult(worst <= eps, params.mode, d_ab, worst, witness)


def _ceil_frac(eps: float, n: int) -> int:
    q = int(eps * n)
    if q < eps * n:
        q += 1
    return max(1, q)


# ---------------------------------------------------------------------------
# Desk-scale dense regular tuples and dependent random choice
# ---------------------------------------------------------------------------


@dataclass
class DensePairConfig:
    eta: float = 0.1          # each returned set has size >= eta * n
    delta: float = 0.2        # required density margin; pairs need >= delta/2
    eps: float = 0.4          # regularity parameter for the pair checks
    mode: str = "sampled"     # regularity check mode
    trials: int = 400         # regularity sampling trials
    attempts: int = 60        # random restarts
    improve_rounds: int = 120 # local improvement steps per restart
    seed: int = 0


def graph_density(g: Graph) -> float:
    if g.n < 2:
        return 0.0
    return g.m / comb(g.n, 2)


def find_dense_pair(g: Graph, r: int, cfg: DensePairConfig) -> list[int] | None:
    """r pairwise eps-regular dense sets, or None when the search budget
    runs out.

    Desk-scale stand-in for the regularity-lemma + Turan route: seeded
    random balanced tuples with local improvement on the minimum pair
    density, each candidate then validated with regular_pair_check.
    Precondition: overall density >= (r-2)/(r-1) + delta.
    """
    need = (r - 2) / (r - 1) + cfg.delta
    if graph_density(g) < need:
        raise ValueError(
            f"density {graph_density(g):.3f} below required {need:.3f}"
        )
    n = g.n
    size = max(2, int(cfg.eta * n))
    if r * size > n:
        raise ValueError("eta too large for r disjoint sets")
    rng = Rng(cfg.seed)
    verts = list(range(n))

    def min_pair_density(sets: list[list[int]]) -> float:
        best = 1.0
        for i in range(r):
            for j in range(i + 1, r):
                best = min(best, pair_density(g, mask_of(sets[i]), mask_of(sets[j])))
        return best

    for _ in range(cfg.attempts):
        pick = rng.sample(verts, r * size)
        sets = [pick[i * size : (i + 1) * size] for i in range(r)]
        outside = [v for v in verts if v not in set(pick)]
        score = min_pair_density(sets)
        for _ in range(cfg.improve_rounds):
            if score >= cfg.delta / 2 + 0.05:
                break
            # swap a low-contribution vertex with a random outside vertex
            i = rng.randrange(r)
            k = rng.randrange(size)
            others = 0
            for j in range(r):
                if j != i:
                    others |= mask_of(sets[j])
            v = sets[i][k]
            cand = outside[rng.randrange(len(outside))] if outside else None
            if cand is None:
                break
            if (g.adj[cand] & others).bit_count() > (g.adj[v] & others).bit_count():
                sets[i][k], outside[outside.index(cand)] = cand, v
                score = min_pair_density(sets)
        if score < cfg.delta / 2:
            continue
        params = RegularityParams(cfg.eps, mode=cfg.mode, trials=cfg.trials,
                                  seed=rng.u64())
        masks = [mask_of(s) for s in sets]
        ok = True
        for i in range(r):
            for j in range(i + 1, r):
                res = regular_pair_check(g, masks[i], masks[j], params)
                if not res.regular or res.density < cfg.delta / 2:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return masks
    return None


def common_neighbourhood(g: Graph, vertices, within) -> int:
    wm = mask_of(within)
    out = wm
    for v in bits(mask_of(vertices)):
        out &= g.adj[v]
    return out


def dependent_random_choice(g: Graph, v_sets: list[int], ell: int, nu: float,
                            seed: int = 0, picks: int = 2,
                            subset_budget: int = 200_000) -> int | None:
    """A subset U of v_sets[0] in which EVERY ell-subset has >= nu*m common
    neighbours in each other class; the post-condition is verified
    exhaustively before returning.  None when the surviving set is too small
    or the scan budget is exceeded.
    """
    rng = Rng(seed)
    v1 = sorted(bits(mask_of(v_sets[0])))
    others = [mask_of(s) for s in v_sets[1:]]
    m = min(s.bit_count() for s in others) if others else len(v1)
    threshold = nu * m
    # candidates: vertices of V1 adjacent to `picks` random vertices drawn
    # from every other class
    cand = mask_of(v1)
    for om in others:
        pool = list(bits(om))
        for w in rng.sample(pool, min(picks, len(pool))):
            cand &= g.adj[w]
    u = sorted(bits(cand))
    if len(u) < ell:
        return None
    # delete members of violating ell-subsets until the post-condition holds
    while len(u) >= ell:
        if comb(len(u), ell) > subset_budget:
            return None
        bad = None
        for combo in itertools.combinations(u, ell):
            for om in others:
                if common_neighbourhood(g, combo, om).bit_count() < threshold:
                    bad = combo
                    break
            if bad:
                break
        if bad is None:
            return mask_of(u)
        # drop the member of the bad subset with the fewest cross neighbours
        worst = min(
            bad,
            key=lambda v: min((g.adj[v] & om).bit_count() for om in others),
        )
        u.remove(worst)
    return None
