import pytest

from pgame.graph import Graph
from pgame.randgraphs import gen_gnp
from pgame.rng import Rng


def random_graph_corpus(count, n_lo, n_hi, seed=7, ps=(0.2, 0.35, 0.5, 0.7)):
    """Seeded mixed-density corpus used by several oracle tests."""
    rng = Rng(seed)
    out = []
    for i in range(count):
        n = rng.randint(n_lo, n_hi)
        p = ps[rng.randrange(len(ps))]
        out.append(gen_gnp(n, p, rng.u64()))
    return out


@pytest.fixture(scope="session")
def small_corpus():
    return random_graph_corpus(300, 4, 9)
