"""Board generators: random graphs, dense minimum-degree families, perturbed
unions, and the verified partition routines.

Partition "lemmas" are implemented as verified rejection sampling: sample a
random partition, verify the promised property with the exact oracles,
retry.  A repo can guarantee the verification, not the probabilistic
existence argument, so PartitionResult.certified is the contract.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

from .graph import (
    Graph,
    bits,
    connected_components,
    count_edges_between,
    graph_minus,
    graph_union,
    induced,
    mask_of,
    relabelled_induced,
)
from .oracles import is_k_connected, min_vertex_cut
from .rng import Rng, derive_seed

DENSE_FAMILIES = (
    "complete",
    "complete_bipartite",
    "turan",
    "clique_union",
    "k_conn_extremal",
    "random_dense",
    "custom",
)


@dataclass(frozen=True)
class DenseGraphSpec:
    """A named dense board G_alpha with minimum degree >= floor(alpha*n).

    families:
      complete              K_n
      complete_bipartite    K_{alpha*n, (1-alpha)*n}  (Hamiltonicity lower bound)
      turan                 balanced complete r-partite (H-game lower bound)
      clique_union          ~1/alpha disjoint cliques of size ~alpha*n
                            (connectivity lower bound)
      k_conn_extremal       K_{k-1} joined to two cliques (sharp k-connectivity)
      random_dense          G(n,p) resampled until min degree >= alpha*n
      custom                explicit edge list (no degree promise)
    """

    family: str
    n: int
    alpha: float = 0.5
    r: int = 2
    k: int = 1
    edges: tuple = ()

    def __post_init__(self):
        if self.family not in DENSE_FAMILIES:
            raise ValueError(f"unknown dense family {self.family!r}")
        if not (self.family in ("custom",) or 0 < self.alpha < 1):
            raise ValueError("alpha must lie in (0,1)")

    @property
    def promises_min_degree(self) -> bool:
        return self.family != "custom"

    def build(self, seed: int = 0) -> Graph:
        n, a = self.n, self.alpha
        if self.family == "complete":
            return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])
        if self.family == "complete_bipartite":
            side = max(int(a * n), 1)
            return Graph(
                n, [(u, v) for u in range(side) for v in range(side, n)]
            )
        if self.family == "turan":
            from .graph import turan_graph

            return turan_graph(n, self.r)
        if self.family == "clique_union":
            size = max(int(a * n) + 1, 2)
            es = []
            start = 0
            while start < n:
                stop = start + size
                if n - stop < size:
                    stop = n  # fold the remainder into the last clique
                es.extend(
                    (u, v)
                    for u in range(start, stop)
                    for v in range(u + 1, stop)
                )
                start = stop
            return Graph(n, es)
        if self.family == "k_conn_extremal":
            k = self.k
            rest = n - (k - 1)
            a_sz = rest // 2
            hub = list(range(k - 1))
            left = list(range(k - 1, k - 1 + a_sz))
            right = list(range(k - 1 + a_sz, n))
            es = []
            for grp in (hub, left, right):
                es.extend(
                    (grp[i], grp[j])
                    for i in range(len(grp))
                    for j in range(i + 1, len(grp))
                )
            es.extend((h, v) for h in hub for v in left + right)
            return Graph(n, es)
        if self.family == "random_dense":
            floor_deg = int(a * n)
            p = min(0.98, a + 0.12)
            for attempt in range(200):
                g = gen_gnp(n, p, derive_seed(seed, "dense", attempt))
                if g.min_degree() >= floor_deg:
                    return g
            raise RuntimeError("random_dense could not hit the degree floor")
        return Graph(n, list(self.edges))


@dataclass(frozen=True)
class PerturbSpec:
    dense: DenseGraphSpec
    p: float
    seed: int

    def __post_init__(self):
        if not 0 <= self.p <= 1:
            raise ValueError("p must lie in [0,1]")


@dataclass
class PartitionResult:
    classes: list[int]          # vertex masks, pairwise disjoint, covering
    attempts: int
    certified: bool
    note: str = ""

    def __bool__(self) -> bool:
        return self.certified


def gen_gnp(n: int, p: float, seed: int) -> Graph:
    """Binomial random graph, each pair independent with probability p.

    Skip-sampling over the ordered pair list, so the cost is O(m) not O(n^2)
    for sparse p.  Deterministic per (n, p, seed).
    """
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0,1]")
    if p == 0 or n < 2:
        return Graph(n)
    total = comb(n, 2)
    if p == 1:
        return DenseGraphSpec("complete", n).build()
    rng = Rng(derive_seed(seed, "gnp", n))
    edges = []
    idx = -1
    while True:
        idx += 1 + rng.geometric_skip(p)
        if idx >= total:
            break
        edges.append(_pair_from_index(idx, n))
    return Graph(n, edges)


def _pair_from_index(idx: int, n: int) -> tuple[int, int]:
    """idx-th pair in lexicographic order of (u, v), u < v."""
    u = 0
    row = n - 1
    while idx >= row:
        idx -= row
        u += 1
        row -= 1
    return (u, u + 1 + idx)


def gen_gnm(n: int, m: int, seed: int) -> Graph:
    """Uniform graph with exactly m edges (partial Fisher-Yates over pairs)."""
    total = comb(n, 2)
    if not 0 <= m <= total:
        raise ValueError(f"m={m} out of range for n={n}")
    rng = Rng(derive_seed(seed, "gnm", n))
    chosen = rng.sample(range(total), m)
    return Graph(n, [_pair_from_index(i, n) for i in chosen])


def perturb(spec: PerturbSpec) -> tuple[Graph, Graph, Graph]:
    """(union, dense_part, random_part) with dense_part = G_alpha minus the
    random edges, as the Hamiltonicity strategies use it."""
    dense = spec.dense.build(derive_seed(spec.seed, "densepart"))
    random_part = gen_gnp(spec.dense.n, spec.p, derive_seed(spec.seed, "gnp-part"))
    union = graph_union(dense, random_part)
    g1 = graph_minus(dense, random_part.edges)
    return union, g1, random_part


def random_balanced_partition(n: int, k: int, rng: Rng) -> list[int]:
    """Uniform partition into k classes with sizes floor/ceil of n/k."""
    order = list(range(n))
    rng.shuffle(order)
    base, extra = divmod(n, k)
    classes, start = [], 0
    for i in range(k):
        size = base + (1 if i < extra else 0)
        classes.append(mask_of(order[start : start + size]))
        start += size
    return classes


def balanced_degree_partition(g: Graph, k: int, alpha: float, seed: int,
                              max_attempts: int = 200) -> PartitionResult:
    """k near-equal classes such that EVERY vertex has >= (alpha/2)|U_i|
    neighbours in every class.  Verified rejection sampling."""
    n = g.n
    if g.min_degree() < alpha * n - 1e-9:
        raise ValueError(
            f"min degree {g.min_degree()} below alpha*n = {alpha * n:.1f}"
        )
    rng = Rng(derive_seed(seed, "balpart", k))
    for attempt in range(1, max_attempts + 1):
        classes = random_balanced_partition(n, k, rng)
        ok = True
        for um in classes:
            need = (alpha / 2) * um.bit_count()
            for v in range(n):
                if (g.adj[v] & um).bit_count() < need:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return PartitionResult(classes, attempt, True)
    return PartitionResult([], max_attempts, False,
                           "degree concentration failed; n too small for k")


def split_connected(g: Graph, target: int, seed: int,
                    max_attempts: int = 60) -> tuple[Graph, Graph, int] | None:
    """Random edge 2-colouring retried until both colour classes are
    `target`-vertex-connected on V(G).  Returns (G1, G2, achieved) or None."""
    rng = Rng(derive_seed(seed, "split2"))
    edges = g.sorted_edges()
    for _ in range(max_attempts):
        e1, e2 = [], []
        for e in edges:
            (e1 if rng.coin(0.5) else e2).append(e)
        g1, g2 = Graph(g.n, e1), Graph(g.n, e2)
        if target == 0 or (
            is_k_connected(g1, target) and is_k_connected(g2, target)
        ):
            return g1, g2, target
    return None


def highly_connected_partition(g: Graph, kappa: int,
                               max_classes: int = 64) -> PartitionResult:
    """Split V along minimum vertex cuts until every class induces a
    kappa-vertex-connected subgraph.

    The existence proof is delegated to a citation in the source material;
    the algorithm here (iterative min-cut splitting, cut vertices attached
    to their majority side) is a design decision -- any output passing the
    certification is acceptable, and every returned class is re-checked
    with the exact connectivity oracle.
    """
    if kappa < 1:
        raise ValueError("kappa must be >= 1")
    pending = [cm for cm in connected_components(g)]
    done: list[int] = []
    attempts = 0
    while pending:
        attempts += 1
        if len(done) + len(pending) > max_classes:
            return PartitionResult([], attempts, False, "class explosion")
        cm = pending.pop()
        if cm.bit_count() < kappa + 1:
            return PartitionResult([], attempts, False,
                                   f"class below {kappa + 1} vertices")
        sub = relabelled_induced(g, cm)
        ids = sorted(bits(cm))
        if is_k_connected(sub, kappa):
            done.append(cm)
            continue
        size, cut = min_vertex_cut(sub)
        cut_ids = {ids[v] for v in bits(cut)}
        rest = cm & ~mask_of(cut_ids)
        comps = connected_components(g, within=rest)
        if len(comps) < 2:
            return PartitionResult([], attempts, False, "degenerate cut")
        # attach each cut vertex to the side it has most neighbours in
        comps.sort(key=lambda m: -m.bit_count())
        for v in cut_ids:
            best = max(comps, key=lambda m: (g.adj[v] & m).bit_count())
            comps[comps.index(best)] |= 1 << v
        pending.extend(comps)
    # final certification of every class
    for cm in done:
        if not is_k_connected(relabelled_induced(g, cm), kappa):
            return PartitionResult([], attempts, False, "certification failed")
    return PartitionResult(done, attempts, True)
