"""Immutable simple graphs over dense integer vertex ids.

Vertices are 0..n-1.  Vertex sets are plain Python ints used as bitmasks
(bit v set <=> vertex v in the set), which makes the subset enumeration the
oracles do cheap.  Helpers accept any iterable of vertex ids where a set is
expected and coerce it.

Graphs are immutable: game-time ownership lives in the game engine, never
here, so transcripts replay deterministically.
"""

from __future__ import annotations

from typing import Iterable, Iterator

Edge = tuple[int, int]


def canon_edge(u: int, v: int) -> Edge:
    """Canonical (min, max) form; an edge has exactly one identity."""
    if u == v:
        raise ValueError(f"self-loop at vertex {u}")
    return (u, v) if u < v else (v, u)


def mask_of(vertices: Iterable[int] | int) -> int:
    if isinstance(vertices, int):
        return vertices
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def bits(mask: int) -> Iterator[int]:
    """Iterate set bit positions of a mask, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def set_of(mask: int) -> set[int]:
    return set(bits(mask))


class Graph:
    """Immutable simple undirected graph."""

    __slots__ = ("n", "edges", "adj", "full_mask")

    def __init__(self, n: int, edges: Iterable[Edge] = ()):
        if n < 0:
            raise ValueError("vertex count must be >= 0")
        object.__setattr__(self, "n", n)
        adj = [0] * n
        es = set()
        for u, v in edges:
            u, v = canon_edge(u, v)
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            es.add((u, v))
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        object.__setattr__(self, "edges", frozenset(es))
        object.__setattr__(self, "adj", tuple(adj))
        object.__setattr__(self, "full_mask", (1 << n) - 1)

    def __setattr__(self, *_):
        raise AttributeError("Graph is immutable")

    # -- basic queries ---------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return canon_edge(u, v) in self.edges

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def min_degree(self) -> int:
        if self.n == 0:
            return 0
        return min(a.bit_count() for a in self.adj)

    def neighbours(self, v: int) -> int:
        """Neighbourhood of v as a mask."""
        return self.adj[v]

    def vertices(self) -> range:
        return range(self.n)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    # -- checked set-valued operations ------------------------------------

    def _check_mask(self, a: int) -> int:
        if a < 0 or a >> self.n:
            raise ValueError("vertex set contains ids out of range")
        return a


def external_neighbourhood(g: Graph, a: Iterable[int] | int) -> int:
    """N_G(A) in the external convention: neighbours of A outside A."""
    am = g._check_mask(mask_of(a))
    nb = 0
    for v in bits(am):
        nb |= g.adj[v]
    return nb & ~am & g.full_mask


def edges_between(g: Graph, a: Iterable[int] | int, b: Iterable[int] | int) -> list[Edge]:
    """All edges with one endpoint in a and the other in b (a, b disjoint)."""
    am = g._check_mask(mask_of(a))
    bm = g._check_mask(mask_of(b))
    if am & bm:
        raise ValueError("edges_between requires disjoint sets")
    out = []
    for u in bits(am):
        for v in bits(g.adj[u] & bm):
            out.append(canon_edge(u, v))
    return out


def count_edges_between(g: Graph, a: Iterable[int] | int, b: Iterable[int] | int) -> int:
    am = g._check_mask(mask_of(a))
    bm = g._check_mask(mask_of(b))
    if am & bm:
        raise ValueError("count_edges_between requires disjoint sets")
    return sum((g.adj[u] & bm).bit_count() for u in bits(am))


def edges_inside(g: Graph, a: Iterable[int] | int) -> list[Edge]:
    am = g._check_mask(mask_of(a))
    return [e for e in g.edges if (1 << e[0]) & am and (1 << e[1]) & am]


def degree_into(g: Graph, v: int, u: Iterable[int] | int) -> int:
    """|N(v) ∩ U|."""
    if not 0 <= v < g.n:
        raise ValueError(f"vertex {v} out of range")
    um = g._check_mask(mask_of(u))
    return (g.adj[v] & um).bit_count()


def graph_union(g1: Graph, g2: Graph) -> Graph:
    if g1.n != g2.n:
        raise ValueError("union requires equal vertex counts")
    return Graph(g1.n, g1.edges | g2.edges)


def graph_minus(g: Graph, edges: Iterable[Edge]) -> Graph:
    removed = {canon_edge(u, v) for u, v in edges}
    return Graph(g.n, g.edges - removed)


def graph_plus(g: Graph, edges: Iterable[Edge]) -> Graph:
    extra = {canon_edge(u, v) for u, v in edges}
    return Graph(g.n, set(g.edges) | extra)


def induced(g: Graph, a: Iterable[int] | int) -> Graph:
    """Subgraph induced by a; original ids kept, outside vertices isolated."""
    am = g._check_mask(mask_of(a))
    keep = [
        e for e in g.edges if ((1 << e[0]) & am) and ((1 << e[1]) & am)
    ]
    return Graph(g.n, keep)


def relabelled_induced(g: Graph, a: Iterable[int] | int) -> Graph:
    """Induced subgraph compacted to vertices 0..|A|-1 (ids in mask order)."""
    vs = sorted(bits(g._check_mask(mask_of(a))))
    pos = {v: i for i, v in enumerate(vs)}
    am = mask_of(vs)
    keep = [
        (pos[u], pos[v])
        for (u, v) in g.edges
        if ((1 << u) & am) and ((1 << v) & am)
    ]
    return Graph(len(vs), keep)


def is_connected(g: Graph, within: int | None = None) -> bool:
    """Connectivity of g, or of g[within] when a mask is given."""
    dom = g.full_mask if within is None else g._check_mask(mask_of(within))
    if dom == 0:
        return True
    start = (dom & -dom).bit_length() - 1
    seen = 1 << start
    frontier = seen
    while frontier:
        nxt = 0
        for v in bits(frontier):
            nxt |= g.adj[v]
        nxt &= dom & ~seen
        seen |= nxt
        frontier = nxt
    return seen == dom


def connected_components(g: Graph, within: int | None = None) -> list[int]:
    """Masks of connected components (of g[within] when given)."""
    dom = g.full_mask if within is None else g._check_mask(mask_of(within))
    comps = []
    rest = dom
    while rest:
        start = (rest & -rest).bit_length() - 1
        seen = 1 << start
        frontier = seen
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= g.adj[v]
            nxt &= dom & ~seen
            seen |= nxt
            frontier = nxt
        comps.append(seen)
        rest &= ~seen
    return comps


# -- small named boards used all over the tests and experiments ----------


def empty_graph(n: int) -> Graph:
    return Graph(n)


def complete_graph(n: int) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def complete_bipartite(a: int, b: int) -> Graph:
    """K_{a,b} with side A = 0..a-1, side B = a..a+b-1."""
    return Graph(a + b, [(u, a + v) for u in range(a) for v in range(b)])


def matching_graph(k: int) -> Graph:
    """Perfect matching on 2k vertices: (0,1), (2,3), ..."""
    return Graph(2 * k, [(2 * i, 2 * i + 1) for i in range(k)])


def star_graph(leaves: int) -> Graph:
    """K_{1,leaves}, centre 0."""
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def turan_graph(n: int, r: int) -> Graph:
    """Complete r-partite graph with balanced classes."""
    cls = [n // r + (1 if i < n % r else 0) for i in range(r)]
    ids, start = [], 0
    for c in cls:
        ids.append(list(range(start, start + c)))
        start += c
    es = []
    for i in range(r):
        for j in range(i + 1, r):
            es.extend((u, v) for u in ids[i] for v in ids[j])
    return Graph(n, es)


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


# -- edge-list text format -------------------------------------------------
#
#   n <vertex-count>
#   u v
#   ...
#
# 0-based ids, whitespace separated, '#' starts a comment.  write_edgelist
# emits sorted edges so read(write(g)) == g and write(read(write(g))) is
# byte-identical.


def write_edgelist(g: Graph) -> str:
    lines = [f"n {g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.sorted_edges())
    return "\n".join(lines) + "\n"


def read_edgelist(text: str) -> Graph:
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "n":
                raise ValueError(f"line {lineno}: expected header 'n <count>'")
            n = int(parts[1])
            continue
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'u v'")
        edges.append((int(parts[0]), int(parts[1])))
    if n is None:
        raise ValueError("missing 'n <count>' header")
    return Graph(n, edges)


def load_graph(path: str) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return read_edgelist(fh.read())


def save_graph(g: Graph, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(write_edgelist(g))
