import networkx as nx
import numpy as np
import pytest

from hypsc.matching import matching_weight, mwpm


def square(entries):
    return np.array(entries, dtype=np.int64)


def as_pair_set(pairs):
    return {tuple(sorted(p)) for p in pairs}


FOUR_NODE = square(
    [
        [0, 10, 6, 20],
        [10, 0, 20, 6],
        [6, 20, 0, 10],
        [20, 6, 10, 0],
    ]
)


@pytest.mark.parametrize("engine", ["dp", "blossom", "brute"])
def test_four_node_example(engine):
    # pairing the two cheap diagonals beats the two unit edges (12 < 2+20 or 20+2)
    pairs = mwpm(FOUR_NODE, engine=engine)
    assert as_pair_set(pairs) == {(0, 2), (1, 3)}
    assert matching_weight(FOUR_NODE, pairs) == 12


def test_empty_matching():
    pairs = mwpm(np.zeros((0, 0), dtype=np.int64))
    assert pairs == []


def test_two_node_matching():
    pairs = mwpm(square([[0, 7], [7, 0]]))
    assert as_pair_set(pairs) == {(0, 1)}


@pytest.mark.parametrize(
    "weights, message",
    [
        (np.zeros((3, 3), dtype=np.int64), "even node count"),
        (np.zeros((2, 3), dtype=np.int64), "square"),
        (square([[0, -1], [-1, 0]]), "non-negative"),
        (np.array([[0.0, 1.5], [1.5, 0.0]]), "integral"),
    ],
)
def test_invalid_inputs(weights, message):
    with pytest.raises(ValueError, match=message):
        mwpm(weights)


def test_unknown_engine():
    with pytest.raises(ValueError, match="unknown engine"):
        mwpm(np.zeros((2, 2), dtype=np.int64), engine="greedy")


def random_weights(rng, m, high):
    w = rng.integers(0, high, size=(m, m))
    w = w + w.T
    np.fill_diagonal(w, 0)
    return w.astype(np.int64)


def nx_optimum(w):
    g = nx.Graph()
    m = w.shape[0]
    g.add_nodes_from(range(m))
    for i in range(m):
        for j in range(i + 1, m):
            g.add_edge(i, j, cost=int(w[i, j]))
    pairs = nx.min_weight_matching(g, weight="cost")
    return sum(int(w[i, j]) for i, j in pairs)


@pytest.mark.parametrize("m", [2, 4, 6, 8, 10])
def test_engines_agree_on_random_instances(m):
    rng = np.random.default_rng(100 + m)
    for _ in range(40):
        w = random_weights(rng, m, 50)
        totals = {
            engine: matching_weight(w, mwpm(w, engine=engine))
            for engine in ("dp", "blossom", "brute")
        }
        assert len(set(totals.values())) == 1, totals
        assert totals["dp"] == nx_optimum(w)


@pytest.mark.parametrize("m", [12, 14])
def test_dp_blossom_agree_medium(m):
    rng = np.random.default_rng(200 + m)
    for _ in range(15):
        w = random_weights(rng, m, 100)
        a = matching_weight(w, mwpm(w, engine="dp"))
        b = matching_weight(w, mwpm(w, engine="blossom"))
        assert a == b == nx_optimum(w)


def test_blossom_large_instance_is_perfect_and_optimal():
    rng = np.random.default_rng(7)
    w = random_weights(rng, 60, 1000)
    pairs = mwpm(w)  # auto routes to blossom at this size
    used = sorted(i for p in pairs for i in p)
    assert used == list(range(60))
    assert matching_weight(w, pairs) == nx_optimum(w)


def test_zero_weight_ties_still_perfect():
    w = np.zeros((8, 8), dtype=np.int64)
    pairs = mwpm(w)
    used = sorted(i for p in pairs for i in p)
    assert used == list(range(8))
    assert matching_weight(w, pairs) == 0


def test_matching_weight_sums_edges():
    assert matching_weight(FOUR_NODE, [(0, 1), (2, 3)]) == 20
    assert matching_weight(FOUR_NODE, [(0, 3), (1, 2)]) == 40
