import math

import pytest

from pgame.graph import (
    Graph,
    bits,
    complete_graph,
    cycle_graph,
    matching_graph,
    path_graph,
    set_of,
)
from pgame.oracles import is_k_connected
from pgame.randgraphs import (
    DenseGraphSpec,
    PerturbSpec,
    balanced_degree_partition,
    gen_gnm,
    gen_gnp,
    highly_connected_partition,
    perturb,
    split_connected,
)
from pgame.rng import Rng, derive_seed


def test_rng_determinism_and_split():
    a, b = Rng(42), Rng(42)
    assert [a.u64() for _ in range(5)] == [b.u64() for _ in range(5)]
    # split streams differ from the parent and from each other
    r = Rng(42)
    s1, s2 = r.split("x"), r.split("y")
    assert s1.u64() != s2.u64()
    assert derive_seed(1, "a", 2) != derive_seed(1, "a", 3)


def test_rng_ranges():
    r = Rng(7)
    vals = [r.randint(3, 5) for _ in range(200)]
    assert set(vals) == {3, 4, 5}
    assert sorted(r.sample(range(10), 10)) == list(range(10))
    with pytest.raises(ValueError):
        r.sample(range(3), 4)


def test_gnp_extremes():
    assert gen_gnp(7, 0.0, 1).m == 0
    assert gen_gnp(7, 1.0, 1) == complete_graph(7)


def test_gnp_determinism():
    assert gen_gnp(50, 0.1, 123) == gen_gnp(50, 0.1, 123)
    assert gen_gnp(50, 0.1, 123) != gen_gnp(50, 0.1, 124)


def test_gnp_edge_count_concentration():
    # mean C(1000,2)*0.01 = 4995, sigma ~ 70.3; every draw within 4 sigma
    mean = math.comb(1000, 2) * 0.01
    sigma = math.sqrt(math.comb(1000, 2) * 0.01 * 0.99)
    for seed in range(100):
        m = gen_gnp(1000, 0.01, seed).m
        assert abs(m - mean) < 4 * sigma


def test_gnm_extremes():
    assert gen_gnm(5, 10, 3) == complete_graph(5)
    assert gen_gnm(5, 0, 3).m == 0
    with pytest.raises(ValueError):
        gen_gnm(5, 11, 3)


def test_gnm_uniformity():
    # each of the 15 possible edges appears with frequency 3/15 +- 0.02
    counts = {}
    trials = 10_000
    for seed in range(trials):
        for e in gen_gnm(6, 3, seed).edges:
            counts[e] = counts.get(e, 0) + 1
    assert len(counts) == 15
    for e, c in counts.items():
        assert abs(c / trials - 0.2) < 0.02, (e, c / trials)


def test_perturb_p0_and_p1():
    spec = PerturbSpec(DenseGraphSpec("complete_bipartite", 20, alpha=0.3), 0.0, 9)
    union, g1, g2 = perturb(spec)
    assert g2.m == 0 and union == g1
    empty = DenseGraphSpec("custom", 8, edges=())
    union, g1, g2 = perturb(PerturbSpec(empty, 1.0, 9))
    assert union == complete_graph(8)


def test_perturb_degree_audit():
    spec = PerturbSpec(DenseGraphSpec("complete_bipartite", 40, alpha=0.3), 0.2, 4)
    union, g1, g2 = perturb(spec)
    dense = spec.dense.build(derive_seed(4, "densepart"))
    max_rand_deg = max(g2.degree(v) for v in range(40))
    assert g1.min_degree() >= dense.min_degree() - max_rand_deg
    # decomposition identities
    assert union.edges == dense.edges | g2.edges
    assert g1.edges == dense.edges - g2.edges


@pytest.mark.parametrize(
    "family,alpha,kw",
    [
        ("complete", 0.5, {}),
        ("complete_bipartite", 0.3, {}),
        ("turan", 0.5, {"r": 2}),
        ("turan", 2 / 3, {"r": 3}),
        ("clique_union", 0.25, {}),
        ("k_conn_extremal", 0.35, {"k": 3}),
    ],
)
def test_dense_families_degree_promise(family, alpha, kw):
    for n in range(10, 201, 19):
        g = DenseGraphSpec(family, n, alpha=alpha, **kw).build(seed=1)
        assert g.n == n
        assert g.min_degree() >= int(alpha * n), (family, n)


def test_random_dense_family():
    g = DenseGraphSpec("random_dense", 60, alpha=0.5).build(seed=3)
    assert g.min_degree() >= 30


def test_balanced_partition_complete_first_try():
    res = balanced_degree_partition(complete_graph(24), 4, 0.9, seed=5)
    assert res.certified and res.attempts == 1
    sizes = sorted(m.bit_count() for m in res.classes)
    assert sizes == [6, 6, 6, 6]


def test_balanced_partition_sizes_always_floor_ceil():
    g = complete_graph(25)
    res = balanced_degree_partition(g, 4, 0.8, seed=5)
    sizes = sorted(m.bit_count() for m in res.classes)
    assert sizes == [6, 6, 6, 7]
    assert sum(res.classes) == g.full_mask  # disjoint cover


def test_balanced_partition_bipartite_concentration():
    g = DenseGraphSpec("complete_bipartite", 60, alpha=0.5).build()
    ok = 0
    for seed in range(100):
        res = balanced_degree_partition(g, 2, 0.5, seed=seed, max_attempts=50)
        ok += bool(res.certified)
    assert ok >= 99


def test_balanced_partition_precondition():
    with pytest.raises(ValueError):
        balanced_degree_partition(matching_graph(5), 2, 0.4, seed=0)


def test_split_connected_k20():
    ok = 0
    for seed in range(100):
        got = split_connected(complete_graph(20), 3, seed, max_attempts=20)
        if got is not None:
            g1, g2, ach = got
            assert is_k_connected(g1, 3) and is_k_connected(g2, 3)
            assert ach == 3
            ok += 1
    assert ok >= 95


def test_split_connected_cycle_fails_honestly():
    assert split_connected(cycle_graph(12), 1, seed=0, max_attempts=15) is None


def test_split_connected_trivial_target():
    got = split_connected(Graph(2, [(0, 1)]), 0, seed=0)
    assert got is not None


def test_highly_connected_partition_two_cliques():
    es = list(complete_graph(10).edges)
    es += [(u + 10, v + 10) for u, v in complete_graph(10).edges]
    es.append((0, 10))
    g = Graph(20, es)
    res = highly_connected_partition(g, 5)
    assert res.certified
    assert {frozenset(set_of(m)) for m in res.classes} == {
        frozenset(range(10)),
        frozenset(range(10, 20)),
    }


def test_highly_connected_partition_complete():
    res = highly_connected_partition(complete_graph(9), 8)
    assert res.certified and len(res.classes) == 1


def test_highly_connected_partition_path_fails():
    res = highly_connected_partition(path_graph(10), 2)
    assert not res.certified
