from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pgame.density import (
    SizeGuardError,
    ZeroDensityError,
    chromatic_number,
    density_report,
    max_density,
    max_density_witnessed,
    r_partite_density,
    r_partite_two_density,
    threshold_exponent,
    two_density,
    two_density_witnessed,
)
from pgame.graph import (
    Graph,
    bits,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    path_graph,
    petersen_graph,
    relabelled_induced,
    star_graph,
)
from pgame.randgraphs import gen_gnp


def helper_two_matchings_joined(k):
    """Two disjoint k-matchings with all cross edges (the book-game helper)."""
    m1 = [(2 * i, 2 * i + 1) for i in range(k)]
    m2 = [(2 * k + 2 * i, 2 * k + 2 * i + 1) for i in range(k)]
    cross = [(u, v) for u in range(2 * k) for v in range(2 * k, 4 * k)]
    return Graph(4 * k, m1 + m2 + cross)


def test_two_density_single_edge_convention():
    assert two_density(Graph(2, [(0, 1)])) == 1
    assert two_density(Graph(1)) == 0
    assert two_density(Graph(3)) == 0


def test_two_density_k4():
    assert two_density(complete_graph(4)) == Fraction(5, 2)


def test_two_density_c5():
    assert two_density(cycle_graph(5)) == Fraction(4, 3)


def test_two_density_brute_matches():
    # independent brute force straight from the definition
    from itertools import combinations

    for seed in range(30):
        g = gen_gnp(7, 0.45, seed)
        best = Fraction(1) if g.m else Fraction(0)
        for size in range(3, 8):
            for combo in combinations(range(7), size):
                sub = relabelled_induced(g, combo)
                best = max(best, Fraction(sub.m - 1, size - 2))
        assert two_density(g) == best


def test_max_density_k4():
    assert max_density(complete_graph(4)) == Fraction(3, 2)


def test_max_density_tree():
    for k in (2, 5, 9):
        g = path_graph(k)
        assert max_density(g) == Fraction(k - 1, k)
    assert max_density(star_graph(6)) == Fraction(6, 7)


def test_max_density_single_vertex():
    assert max_density(Graph(1)) == 0


def test_witnesses_reevaluate():
    for seed in range(20):
        g = gen_gnp(8, 0.4, seed)
        val, wit = max_density_witnessed(g)
        sub = relabelled_induced(g, wit)
        assert Fraction(sub.m, sub.n) == val
        val2, wit2 = two_density_witnessed(g)
        sub2 = relabelled_induced(g, wit2)
        if sub2.n <= 2:
            assert val2 == (1 if sub2.m else 0)
        else:
            assert Fraction(sub2.m - 1, sub2.n - 2) == val2


def test_helper_graph_bipartite_partition_density():
    # the two matchings form the optimal 2-partition: each part has m = 1/2
    for k in (2, 3):
        f = helper_two_matchings_joined(k)
        val, parts = r_partite_density(f, 2)
        assert val == Fraction(1, 2)


def test_r_partite_two_density_k4():
    val, parts = r_partite_two_density(complete_graph(4), 2)
    assert val == 1
    assert sorted(m.bit_count() for m in parts) == [2, 2]


def test_r_partite_two_density_k6():
    val, _ = r_partite_two_density(complete_graph(6), 2)
    assert val == 2  # two triangles; (4,2)/(5,1) splits give 5/2 and 3


def test_r_partite_c5():
    assert r_partite_density(cycle_graph(5), 2)[0] == Fraction(1, 2)
    assert r_partite_two_density(cycle_graph(5), 2)[0] == 1


def test_r_partite_guard():
    with pytest.raises(SizeGuardError):
        r_partite_two_density(complete_graph(13), 2)


def test_threshold_exponents():
    assert threshold_exponent("m2_r", complete_graph(6), 2) == Fraction(-1, 2)
    assert threshold_exponent("m2_r", cycle_graph(5), 2) == Fraction(-1)
    with pytest.raises(ZeroDensityError):
        threshold_exponent("m2_r", complete_bipartite(3, 3), 2)


def test_m2r_kt_r_consistency():
    # m2^(r)(K_{t*r}) = m2(K_t) for t in {2,3}, r in {2,3}
    for t in (2, 3):
        for r in (2, 3):
            val, _ = r_partite_two_density(complete_graph(t * r), r)
            assert val == two_density(complete_graph(t)), (t, r)


def test_chromatic_numbers():
    assert chromatic_number(complete_graph(4)) == 4
    assert chromatic_number(cycle_graph(5)) == 3
    assert chromatic_number(cycle_graph(6)) == 2
    assert chromatic_number(petersen_graph()) == 3
    assert chromatic_number(Graph(3)) == 1
    assert chromatic_number(Graph(0)) == 0


def test_zero_iff_chromatic_spot():
    for g, r, expect_zero in [
        (complete_bipartite(3, 4), 2, True),
        (cycle_graph(5), 2, False),
        (complete_graph(4), 3, False),
        (complete_graph(4), 4, True),
    ]:
        val, _ = r_partite_two_density(g, r)
        assert (val == 0) == expect_zero


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**9))
def test_monotone_under_edge_addition(seed):
    g = gen_gnp(7, 0.35, seed)
    from pgame.oracles import non_edges
    from pgame.graph import graph_plus

    free = non_edges(g)
    if not free:
        return
    g2 = graph_plus(g, [free[seed % len(free)]])
    assert max_density(g2) >= max_density(g)
    assert two_density(g2) >= two_density(g)
    assert r_partite_density(g2, 2)[0] >= r_partite_density(g, 2)[0]
    assert r_partite_two_density(g2, 2)[0] >= r_partite_two_density(g, 2)[0]


def test_density_report_shape():
    rep = density_report(complete_graph(4))
    assert rep.d == Fraction(6, 4)
    assert rep.m == Fraction(3, 2)
    assert rep.m2 == Fraction(5, 2)
    assert rep.m2_r[2] == 1
    assert rep.m_r[2] == Fraction(1, 2)  # K4 split into two single edges
