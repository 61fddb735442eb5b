import math
import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import all_arc_sets, random_arc_set, topological_order
from walkturan.constructions import directed_cycle, transitive_tournament
from walkturan.digraph import (
    Digraph,
    DigraphFormatError,
    degrees,
    girth,
    induced_subgraph,
    is_transitive_tournament,
    parse_digraph,
    render_digraph,
)


@st.composite
def digraphs(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    rows = draw(st.lists(st.integers(0, (1 << n) - 1), min_size=n, max_size=n))
    return Digraph(n, tuple(rows))


def test_parse_single_loop():
    D = parse_digraph("1\n1\n")
    assert D.n == 1 and D.loop_count == 1


def test_parse_transitive_tournament():
    assert parse_digraph("3\n011\n001\n000\n") == transitive_tournament(3)


def test_parse_two_cycle():
    assert parse_digraph("2\n01\n10\n").arcs() == [(0, 1), (1, 0)]


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("x\n0\n", 1, 1),
        ("0\n", 1, 1),
        ("2\n01\n1\n", 3, 2),
        ("2\n012\n10\n", 2, 3),
        ("2\n01\n1a\n", 3, 2),
        ("2\n01 \n10\n", 2, 3),
        ("2\n01\n10", 3, 3),
        ("2\n01\n", 3, 1),
        ("1\n0\n0\n", 3, 1),
        ("2\r\n01\n10\n", 1, 2),
    ],
)
def test_parse_errors_carry_position(text, line, column):
    with pytest.raises(DigraphFormatError) as info:
        parse_digraph(text)
    assert (info.value.line, info.value.column) == (line, column)


@given(digraphs())
def test_render_parse_round_trip(D):
    text = render_digraph(D)
    assert parse_digraph(text) == D
    assert render_digraph(parse_digraph(text)) == text


def test_degrees_loop_plus_arc():
    D = Digraph.from_arcs(2, [(0, 0), (0, 1)])
    r = degrees(D, 0)
    assert (r.outdeg, r.indeg, r.incident) == (2, 1, 2)


def test_degrees_two_cycle():
    D = directed_cycle(2)
    for u in (0, 1):
        r = degrees(D, u)
        assert (r.outdeg, r.indeg, r.incident) == (1, 1, 2)


def test_degrees_isolated_vertex():
    r = degrees(Digraph.empty(3), 1)
    assert (r.outdeg, r.indeg, r.incident) == (0, 0, 0)


def test_degrees_out_of_range():
    with pytest.raises(IndexError):
        degrees(Digraph.empty(2), 2)


@given(digraphs(max_n=8))
def test_degree_report_bounds(D):
    for u in range(D.n):
        r = degrees(D, u)
        assert r.incident == r.outdeg + r.indeg - D.has_arc(u, u)
        assert 0 <= r.incident <= 2 * D.n - 1


def test_handshake_exhaustive_small():
    for n in range(1, 5):
        for arcs in all_arc_sets(n):
            D = Digraph.from_arcs(n, arcs)
            assert 2 * D.arc_count == sum(degrees(D, u).incident for u in range(D.n)) + D.loop_count


def test_handshake_random():
    rng = random.Random(11)
    for _ in range(10_000):
        n = rng.randint(1, 8)
        D = Digraph.from_arcs(n, random_arc_set(rng, n))
        assert 2 * D.arc_count == sum(degrees(D, u).incident for u in range(n)) + D.loop_count


@pytest.mark.parametrize("n", range(1, 8))
def test_girth_transitive_tournament(n):
    assert girth(transitive_tournament(n)) == math.inf


def test_girth_small_cases():
    assert girth(directed_cycle(1)) == 1
    assert girth(directed_cycle(3)) == 3
    assert girth(Digraph.from_arcs(5, [(0, 1), (1, 2), (2, 3), (3, 0), (2, 4), (4, 2)])) == 2


def _girth_oracle(D):
    # shortest closed walk length is the girth; try lengths 1..n by repeated relation composition
    reach = {(u, v) for u, v in D.arcs()}
    cur = set(reach)
    for length in range(1, D.n + 1):
        if any(u == v for u, v in cur):
            return length
        cur = {(u, w) for u, v in cur for (x, w) in reach if x == v}
    return math.inf


@given(digraphs(max_n=6))
def test_girth_matches_closed_walk_oracle(D):
    assert girth(D) == _girth_oracle(D)


def test_is_transitive_tournament_cases():
    assert is_transitive_tournament(transitive_tournament(5))
    assert not is_transitive_tournament(directed_cycle(3))
    assert not is_transitive_tournament(transitive_tournament(3).with_arc(1, 1))
    assert not is_transitive_tournament(transitive_tournament(4).without_arc(0, 3))
    assert is_transitive_tournament(Digraph.empty(1))


def test_is_transitive_tournament_relabelled():
    rng = random.Random(3)
    for _ in range(50):
        perm = list(range(4))
        rng.shuffle(perm)
        D = transitive_tournament(4).relabel(perm)
        assert topological_order(4, set(D.arcs())) is not None
        assert is_transitive_tournament(D)


def test_is_transitive_tournament_against_topological_oracle():
    for arcs in all_arc_sets(3):
        D = Digraph.from_arcs(3, arcs)
        pairs_ok = all(D.has_arc(u, v) != D.has_arc(v, u) for u in range(3) for v in range(u + 1, 3))
        expected = pairs_ok and topological_order(3, set(arcs)) is not None
        assert is_transitive_tournament(D) == expected


def test_induced_full_set_is_identity():
    D = Digraph.from_arcs(3, [(0, 1), (1, 1), (2, 0)])
    assert induced_subgraph(D, range(3)) == D


def test_induced_tt_minus_source():
    assert induced_subgraph(transitive_tournament(4), [1, 2, 3]) == transitive_tournament(3)


def test_induced_errors():
    D = Digraph.empty(3)
    with pytest.raises(ValueError):
        induced_subgraph(D, [])
    with pytest.raises(IndexError):
        induced_subgraph(D, [0, 3])


def test_degree_equals_arc_loss_exhaustive():
    for n in range(2, 5):
        for arcs in all_arc_sets(n):
            D = Digraph.from_arcs(n, arcs)
            for u in range(n):
                rest = induced_subgraph(D, [x for x in range(n) if x != u])
                assert degrees(D, u).incident == D.arc_count - rest.arc_count


@settings(max_examples=300)
@given(digraphs(max_n=5), st.data())
def test_degree_equals_arc_loss_order_5(D, data):
    u = data.draw(st.integers(0, D.n - 1))
    if D.n == 1:
        assert degrees(D, 0).incident == D.arc_count
        return
    rest = induced_subgraph(D, [x for x in range(D.n) if x != u])
    assert degrees(D, u).incident == D.arc_count - rest.arc_count


def test_digraph_rejects_bad_rows():
    with pytest.raises(ValueError):
        Digraph(2, (0b100, 0))
    with pytest.raises(ValueError):
        Digraph(2, (0,))
    with pytest.raises(ValueError):
        Digraph.from_arcs(2, [(0, 2)])


def test_loopless_arc_bound():
    for n in range(1, 5):
        full = Digraph.from_arcs(n, [(u, v) for u, v in product(range(n), repeat=2) if u != v])
        assert full.arc_count == n * (n - 1)
