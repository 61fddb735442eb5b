import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import all_arc_sets, dfs_count_matrix, dfs_walks, random_arc_set
from walkturan.constructions import JoinConfig, build_join, directed_cycle, transitive_tournament
from walkturan.digraph import Digraph
from walkturan.walks import (
    extract_walks,
    is_free,
    max_pair_walks,
    saturated_power,
    walk_count_matrix,
)


@pytest.fixture
def joint_two_cycles():
    # centre 0 with leaves 1 and 2, both pairs bidirectional
    D, _ = build_join(JoinConfig(2, 2))
    return D


def _matrix(W):
    return [list(r) for r in W.entries]


def test_tt3_square_has_single_entry():
    W = walk_count_matrix(transitive_tournament(3), 2)
    assert _matrix(W) == [[0, 0, 1], [0, 0, 0], [0, 0, 0]]


def test_two_cycle_square_is_identity():
    assert _matrix(walk_count_matrix(directed_cycle(2), 2)) == [[1, 0], [0, 1]]


def test_joint_two_cycles_square(joint_two_cycles):
    assert _matrix(walk_count_matrix(joint_two_cycles, 2)) == [[2, 0, 0], [0, 1, 1], [0, 1, 1]]


def test_zeroth_power_is_identity():
    D = Digraph.from_arcs(3, [(0, 1), (2, 2)])
    assert _matrix(walk_count_matrix(D, 0)) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_counts_are_exact_beyond_int64():
    D = Digraph.from_arcs(3, [(u, v) for u in range(3) for v in range(3)])
    assert walk_count_matrix(D, 60)[0, 0] == 3**59


@pytest.mark.parametrize("n", range(2, 9))
def test_max_pair_tt_hamiltonian(n):
    assert max_pair_walks(transitive_tournament(n), n - 1) == (1, 0, n - 1)


@pytest.mark.parametrize("k", [1, 2, 7])
def test_max_pair_single_loop(k):
    assert max_pair_walks(directed_cycle(1), k) == (1, 0, 0)


def test_max_pair_joint_two_cycles(joint_two_cycles):
    assert max_pair_walks(joint_two_cycles, 2) == (2, 0, 0)


def test_max_pair_ties_row_major():
    assert max_pair_walks(directed_cycle(3), 3) == (1, 0, 0)


@pytest.mark.parametrize("n", range(1, 11))
def test_tt_free_for_long_walks(n):
    for k in (max(n - 1, 1), n, n + 5):
        assert is_free(transitive_tournament(n), k, 1)


def test_joint_two_cycles_not_free(joint_two_cycles):
    assert not is_free(joint_two_cycles, 2, 1)
    assert is_free(joint_two_cycles, 2, 2)


@pytest.mark.parametrize("k, t", [(1, 1), (4, 3), (9, 1)])
def test_empty_digraph_free(k, t):
    assert is_free(Digraph.empty(4), k, t)


def test_is_free_rejects_bad_parameters():
    with pytest.raises(ValueError):
        is_free(Digraph.empty(2), 0, 1)
    with pytest.raises(ValueError):
        is_free(Digraph.empty(2), 1, 0)


def test_is_free_large_t_uses_exact_path():
    D = Digraph.from_arcs(2, [(0, 0), (0, 1), (1, 0), (1, 1)])
    assert is_free(D, 3, 2**62) and not is_free(D, 3, 3)


def test_extract_tt4_hamiltonian():
    assert extract_walks(transitive_tournament(4), 3, 0, 3, 5) == [(0, 1, 2, 3)]


def test_extract_joint_two_cycles(joint_two_cycles):
    assert extract_walks(joint_two_cycles, 2, 0, 0, 3) == [(0, 1, 0), (0, 2, 0)]


def test_extract_none_and_limit():
    assert extract_walks(transitive_tournament(3), 2, 2, 0) == []
    D = Digraph.from_arcs(2, [(0, 0), (0, 1), (1, 0), (1, 1)])
    assert extract_walks(D, 3, 0, 1, 2) == [(0, 0, 0, 1), (0, 0, 1, 1)]
    with pytest.raises(ValueError):
        extract_walks(D, 3, 0, 1, 0)


def test_extract_agrees_with_counts_exhaustive_order_3():
    for arcs in all_arc_sets(3):
        D = Digraph.from_arcs(3, arcs)
        for k in range(7):
            W = walk_count_matrix(D, k)
            for u in range(3):
                for v in range(3):
                    walks = extract_walks(D, k, u, v)
                    assert len(walks) == W[u, v]
                    assert walks == sorted(walks)


def test_extract_agrees_with_dfs_random():
    rng = random.Random(21)
    for _ in range(200):
        n = rng.randint(4, 5)
        arcs = random_arc_set(rng, n, p=rng.uniform(0.1, 0.6))
        D = Digraph.from_arcs(n, arcs)
        k = rng.randint(0, 6)
        u, v = rng.randrange(n), rng.randrange(n)
        expected = sorted(w for w in dfs_walks(n, arcs, k, u) if w[-1] == v)
        assert extract_walks(D, k, u, v) == expected
        assert len(expected) == walk_count_matrix(D, k)[u, v]


def test_counts_match_dfs_small_exhaustive():
    for n in range(1, 4):
        for arcs in all_arc_sets(n):
            D = Digraph.from_arcs(n, arcs)
            for k in range(5):
                assert _matrix(walk_count_matrix(D, k)) == dfs_count_matrix(n, arcs, k)


def test_power_identity_random():
    rng = random.Random(4)
    for _ in range(100):
        n = rng.randint(1, 6)
        D = Digraph.from_arcs(n, random_arc_set(rng, n))
        a, b = rng.randint(0, 8), rng.randint(0, 8)
        left = np.array(_matrix(walk_count_matrix(D, a)), dtype=object)
        right = np.array(_matrix(walk_count_matrix(D, b)), dtype=object)
        assert (left.dot(right) == np.array(_matrix(walk_count_matrix(D, a + b)), dtype=object)).all()


def test_entry_bound():
    rng = random.Random(8)
    for _ in range(200):
        n = rng.randint(1, 6)
        D = Digraph.from_arcs(n, random_arc_set(rng, n))
        k = rng.randint(1, 7)
        top = max(row.bit_count() for row in D.rows)
        assert max(max(r) for r in walk_count_matrix(D, k).entries) <= n ** (k - 1) * top


def test_arc_deletion_is_monotone():
    rng = random.Random(12)
    for _ in range(1000):
        n = rng.randint(1, 5)
        D = Digraph.from_arcs(n, random_arc_set(rng, n))
        if not D.arc_count:
            continue
        u, v = rng.choice(D.arcs())
        E = D.without_arc(u, v)
        k, t = rng.randint(1, 6), rng.randint(1, 3)
        big, small = walk_count_matrix(D, k), walk_count_matrix(E, k)
        assert all(s <= b for rb, rs in zip(big.entries, small.entries) for b, s in zip(rb, rs))
        if is_free(D, k, t):
            assert is_free(E, k, t)


@given(st.integers(1, 5), st.integers(0, 2**25 - 1), st.integers(1, 8), st.integers(1, 5))
def test_saturated_decision_matches_exact(n, code, k, t):
    arcs = [(u, v) for u in range(n) for v in range(n) if code >> (u * n + v) & 1]
    D = Digraph.from_arcs(n, arcs)
    exact = max_pair_walks(D, k)[0]
    assert is_free(D, k, t) == (exact <= t)
    sat = saturated_power(D.to_matrix(), k, t + 1)
    full = np.array(_matrix(walk_count_matrix(D, k)), dtype=object)
    assert (sat == np.minimum(full, t + 1)).all()
