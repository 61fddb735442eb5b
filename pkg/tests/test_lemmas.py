import random
from itertools import product

import pytest

from oracles import dfs_count_matrix, random_arc_set
from walkturan.certificates import WalkCertificate, certificate_problem
from walkturan.constructions import RANDOM, JoinConfig, build_join, transitive_tournament
from walkturan.digraph import Digraph
from walkturan.lemmas import (
    HOLDS,
    VIOLATED,
    cycle_tournament_check,
    degree_bound_check,
    half_arcs_check,
    joint_cycles_certificate,
    joint_cycles_check,
    linked_cycles_check,
    verify_handshake,
)
from walkturan.thresholds import lemma5_k
from walkturan.walks import extract_walks


def _dfs_max(D, k):
    return max(max(r) for r in dfs_count_matrix(D.n, set(D.arcs()), k))


def test_handshake_small_cases():
    assert verify_handshake(Digraph.from_arcs(1, [(0, 0)])).holds
    report = verify_handshake(Digraph.from_arcs(2, [(0, 1), (1, 0)]))
    assert report.holds and report.stats == {"twice_arcs": 4, "degree_sum_plus_loops": 4}


def test_handshake_random():
    rng = random.Random(2)
    for _ in range(1000):
        n = rng.randint(1, 8)
        assert verify_handshake(Digraph.from_arcs(n, random_arc_set(rng, n))).verdict == HOLDS


def test_joint_certificate_two_two():
    cert = joint_cycles_certificate(2, 2, 1, 2)
    assert cert.walks == ((0, 1, 0), (0, 2, 0))
    assert certificate_problem(cert, t=1) is None


def test_joint_certificate_two_three_single_segment():
    cert = joint_cycles_certificate(2, 3, 1, 6)
    assert len(cert.walks) == 2 and certificate_problem(cert, t=1) is None
    every = extract_walks(cert.host, 6, cert.source, cert.target)
    assert set(cert.walks) <= set(every)


def test_joint_certificate_two_segments():
    cert = joint_cycles_certificate(2, 3, 3, 12)
    assert len(cert.walks) == 4 and certificate_problem(cert, t=3) is None
    # masks in lexicographic order: keep-keep first, swap-swap last
    assert cert.walks[0] == (0, 1) * 6 + (0,)
    assert cert.walks[-1] == (0, 2, 3) * 4 + (0,)


def test_joint_certificate_extension_keeps_endpoints():
    cert = joint_cycles_certificate(2, 3, 1, 9)
    assert {w[-1] for w in cert.walks} == {cert.target}
    assert certificate_problem(cert, t=1) is None


def test_joint_certificate_errors():
    with pytest.raises(ValueError):
        joint_cycles_certificate(2, 3, 1, 5)
    with pytest.raises(ValueError):
        joint_cycles_certificate(1, 1, 1, 4)


def test_joint_sweep():
    for m1, m2, t in product(range(1, 6), range(1, 6), range(1, 9)):
        if m1 == m2 == 1:
            continue
        report = joint_cycles_check(m1, m2, t)
        assert report.holds, report.params
        assert report.stats["max_pair_walks"] >= t + 1
        assert certificate_problem(WalkCertificate.from_dict(report.witness), t) is None


@pytest.mark.parametrize("m1, m2, t, k, count", [(1, 1, 1, 2, 2), (2, 2, 1, 3, 2), (2, 3, 2, 13, 3)])
def test_linked_examples(m1, m2, t, k, count):
    report = linked_cycles_check(m1, m2, t)
    assert report.holds and report.params["k"] == k
    assert report.stats["max_pair_walks"] == count
    D, _ = build_join(JoinConfig(m1, m2, "linked-by-arc"))
    assert _dfs_max(D, k) == count


def test_linked_two_loops_walks():
    report = linked_cycles_check(1, 1, 1)
    assert report.witness["walks"] == [[0, 0, 1], [0, 1, 1]]


def test_linked_sweep():
    for m1, m2, t in product(range(1, 5), repeat=3):
        report = linked_cycles_check(m1, m2, t)
        assert report.holds, report.params
        assert certificate_problem(WalkCertificate.from_dict(report.witness), t) is None


@pytest.mark.parametrize("n, labelled", [(2, 2), (3, 20), (4, 924), (5, 184756)])
def test_half_arcs(n, labelled):
    report = half_arcs_check(n)
    assert report.holds and report.stats["labelled"] == labelled


def test_half_arcs_class_count_n3():
    # TT3, C3, and a 2-cycle plus one arc into or out of the third vertex
    assert half_arcs_check(3).stats["classes"] == 4


def test_half_arcs_regime():
    with pytest.raises(ValueError):
        half_arcs_check(6)


def test_degree_bound_tt6():
    report = degree_bound_check(transitive_tournament(6), 6, 1)
    assert report.holds and report.stats["free"] and report.stats["max_incident"] == 5


def test_degree_bound_vacuous():
    D, _ = build_join(JoinConfig(2, 2))
    report = degree_bound_check(D, 2, 1)
    assert report.holds and not report.stats["free"]


def test_degree_bound_threshold_enforced():
    with pytest.raises(ValueError):
        degree_bound_check(transitive_tournament(3), 3, 4)


def test_degree_bound_random():
    rng = random.Random(17)
    for _ in range(1000):
        n = rng.randint(1, 6)
        t = rng.choice((1, 2, 3))
        D = Digraph.from_arcs(n, random_arc_set(rng, n, p=rng.uniform(0.05, 0.5)))
        assert degree_bound_check(D, lemma5_k(t), t).verdict != VIOLATED


@pytest.mark.parametrize("l", [1, 2, 3])
def test_cycle_tournament_t1(l):
    report = cycle_tournament_check(l, 7, 1)
    assert report.holds and report.params["k"] == 3
    assert report.stats["max_pair_walks"] == 22
    assert certificate_problem(WalkCertificate.from_dict(report.witness), 1) is None


@pytest.mark.parametrize("seed", range(5))
def test_cycle_tournament_t2_random(seed):
    report = cycle_tournament_check(3, 9, 2, RANDOM, seed)
    assert report.holds and report.params["k"] == 6


def test_cycle_tournament_size_enforced():
    with pytest.raises(ValueError):
        cycle_tournament_check(3, 6, 1)


def test_violated_report_carries_witness(monkeypatch):
    import walkturan.lemmas as lemmas

    monkeypatch.setattr(lemmas, "max_pair_walks", lambda D, k: (1, 0, 0))
    report = lemmas.linked_cycles_check(2, 2, 1)
    assert report.verdict == VIOLATED and "digraph" in report.witness
