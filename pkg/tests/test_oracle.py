import itertools
import random

import pytest

from heuberger.cayley import CapExceeded, circulant_graph, finite_quotient_graph, from_edges
from heuberger.classify import CirculantSpec, classify
from heuberger.intmat import HeubergerMatrix
from heuberger.oracle import (
    ChiBounds,
    LoopsPresent,
    chi_bounds_infinite,
    exact_chi,
    exact_coloring,
    greedy_clique,
    independence_number,
    k_colorable,
    reference_verdict,
    verify_coloring,
)

H = HeubergerMatrix.parse


def complete(n):
    return from_edges(n, itertools.combinations(range(n), 2))


def brute_chi(G):
    for k in range(1, G.order + 1):
        for col in itertools.product(range(k), repeat=G.order):
            if all(col[u] != col[v] for u, v in G.edges()):
                return k
    return G.order


def brute_alpha(G):
    best = 0
    for mask in range(1 << G.order):
        vs = [v for v in range(G.order) if mask >> v & 1]
        if all(not G.adjacent(u, v) for u, v in itertools.combinations(vs, 2)):
            best = max(best, len(vs))
    return best


def test_k5():
    K5 = complete(5)
    assert k_colorable(K5, 4) is None
    assert verify_coloring(K5, k_colorable(K5, 5), 5)
    assert exact_chi(K5) == 5
    assert independence_number(K5) == 1


def test_c13():
    C = circulant_graph(CirculantSpec(13, 1, 5))
    assert k_colorable(C, 3) is None
    col = k_colorable(C, 4)
    assert verify_coloring(C, col, 4)
    assert exact_chi(C) == 4
    assert independence_number(C) == 4


def test_bipartite_quotient():
    G = finite_quotient_graph(H("4 0; 2 4"))
    assert verify_coloring(G, k_colorable(G, 2), 2)


def test_block_example():
    assert exact_chi(finite_quotient_graph(H("1 0 0; -2 5 0; 0 0 3"))) == 5


def test_c7():
    assert exact_chi(circulant_graph(CirculantSpec(7, 1, 4))) == 4


def test_trivial_graphs():
    assert exact_chi(from_edges(1, [])) == 1
    assert independence_number(from_edges(6, [])) == 6
    assert k_colorable(from_edges(0, []), 3) == []
    with pytest.raises(ValueError):
        exact_chi(from_edges(0, []))


def test_loops_rejected():
    G = finite_quotient_graph(H("2 0; 1 1"))
    with pytest.raises(LoopsPresent):
        k_colorable(G, 3)
    assert not verify_coloring(G, [0] * G.order)


def test_independence_cap():
    with pytest.raises(CapExceeded):
        independence_number(from_edges(70, []))


def test_node_cap():
    with pytest.raises(CapExceeded):
        k_colorable(complete(12), 11, node_cap=5)


def test_against_brute_force():
    rng = random.Random(21)
    for _ in range(150):
        n = rng.randint(1, 8)
        edges = [e for e in itertools.combinations(range(n), 2) if rng.random() < 0.45]
        G = from_edges(n, edges)
        chi = exact_chi(G)
        assert chi == brute_chi(G)
        assert verify_coloring(G, exact_coloring(G), chi)
        if chi > 1:
            assert k_colorable(G, chi - 1) is None
        assert independence_number(G) == brute_alpha(G)
        clique = greedy_clique(G)
        assert all(G.adjacent(u, v) for u, v in itertools.combinations(clique, 2))


def test_deterministic_witness():
    G = circulant_graph(CirculantSpec(13, 1, 5))
    assert k_colorable(G, 4) == k_colorable(G, 4)


def test_bounds_examples():
    b = chi_bounds_infinite(H("1 0; 0 1; 2 6"), radius=7, moduli=[9, 12, 15])
    assert b.lower >= 4 and b.upper == 4
    b = chi_bounds_infinite(H("2 0; -1 2; 0 5"), radius=6, moduli=[10, 12])
    assert (b.lower, b.upper) == (3, 3)
    b = chi_bounds_infinite(H("1 0; 0 1; 3 5"))
    assert (b.lower, b.upper) == (2, 2)
    assert b.collapsed
    assert b.to_json()["upper_evidence"]["kind"] == "quotient"


def test_bounds_preconditions():
    with pytest.raises(LoopsPresent):
        chi_bounds_infinite(H("1 0; 0 1; 0 2"))
    with pytest.raises(ValueError):
        chi_bounds_infinite(H("2 4; 1 2; 3 6"))
    with pytest.raises(ValueError):
        ChiBounds(4, 3)


def test_bounds_monotone_in_radius():
    M = H("1 0; -1 2; -4 5")
    lows = [chi_bounds_infinite(M, radius=r).lower for r in range(1, 6)]
    assert lows == sorted(lows)


def test_bounds_contain_classifier():
    rng = random.Random(77)
    done = 0
    while done < 40:
        M = HeubergerMatrix.from_rows([[rng.randint(-4, 4) for _ in range(2)] for _ in range(3)])
        v = classify(M)
        if v.status != "Chromatic":
            continue
        b = chi_bounds_infinite(M)
        assert b.lower <= v.chi <= b.upper, (M, v, b)
        done += 1


def test_reference_verdict():
    assert reference_verdict(H("2 0; 1 1")).status == "Loops"
    assert reference_verdict(H("4 0; 2 4")).chi == 2
    r = reference_verdict(H("1 0; 0 1; 2 6"))
    assert r.chi == 4 and r.consistent_with("Chromatic", 4)
    assert reference_verdict(H("0 0; 0 0")).chi == 2
    M = H("1 0 2; 0 1 3; 2 3 13")
    v = classify(M)
    assert reference_verdict(M).consistent_with(v.status, v.chi)
