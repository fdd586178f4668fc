import random

import pytest

from heuberger.cayley import circulant_graph, finite_quotient_graph
from heuberger.classify import (
    CirculantSpec,
    Verdict,
    chi_1xr,
    chi_2x2,
    chi_3x2_mhnf,
    chi_3x2_minors,
    chi_first_column_ones,
    chi_I_on_top,
    chi_L_shaped,
    choose_q,
    circulant_chi,
    classify,
    det3_shortcut,
    loops_2x2,
    match_family,
    mhnf_loops,
    triangle_relation,
)
from heuberger.intmat import HeubergerMatrix, columns_dependent, minors_3x2
from heuberger.normalform import mhnf_3x2
from heuberger.oracle import chi_bounds_infinite, exact_chi, has_loops

H = HeubergerMatrix.parse


def key(status, chi=None):
    return (status, chi)


@pytest.mark.parametrize(
    "row, want",
    [((1, 5), key("Loops")), ((2, 4), key("Chromatic", 2)), ((0, 0, 0), key("Chromatic", 2)),
     ((3, 9), key("Chromatic", 3)), ((-6,), key("Chromatic", 2))],
)
def test_chi_1xr(row, want):
    assert chi_1xr(row).key() == want


def test_circulant_spec_validation():
    with pytest.raises(ValueError):
        CirculantSpec(6, 2, 4)
    with pytest.raises(ValueError):
        CirculantSpec(5, 5, 1)
    with pytest.raises(ValueError):
        CirculantSpec(0, 1, 1)
    CirculantSpec(-5, 1, 2)


@pytest.mark.parametrize(
    "n, a, b, chi", [(4, 1, 3, 2), (5, 1, 2, 5), (13, 1, 5, 4), (7, 1, 4, 4), (6, 1, 2, 3), (-5, 2, 1, 5)]
)
def test_circulant_chi_examples(n, a, b, chi):
    c = CirculantSpec(n, a, b)
    assert circulant_chi(c) == chi
    assert exact_chi(circulant_graph(c)) == chi


def test_circulant_chi_small_sweep():
    for n in range(2, 16):
        for a in range(n):
            for b in range(n):
                try:
                    c = CirculantSpec(n, a, b)
                except ValueError:
                    continue
                assert circulant_chi(c) == exact_chi(circulant_graph(c)), c


@pytest.mark.parametrize(
    "text, loops", [("1 0; 0 1", True), ("2 0; 1 1", True), ("0 0; 0 0", False), ("4 0; 2 4", False),
                    ("0 0; 2 3", True), ("2 4; 0 0", False)]
)
def test_loops_2x2(text, loops):
    M = H(text)
    assert loops_2x2(M) is loops
    assert has_loops(M) is loops


@pytest.mark.parametrize("args, q", [((2, 1, 4), 2), ((1, -2, 5), 1), ((6, 3, 5), 2)])
def test_choose_q(args, q):
    assert choose_q(*args) == q


@pytest.mark.parametrize(
    "text, want, rule",
    [
        ("4 0; 2 4", 2, "Thm-m2-case2"),
        ("2 0; 1 4", 4, "Thm-m2-case4"),
        ("1 0; -2 5", 5, "Thm-m2-case4"),
        ("3 0; 1 6", 2, "Thm-m2-case2"),
        ("0 0; 3 0", 3, "Thm-m2-case3"),
    ],
)
def test_chi_2x2_examples(text, want, rule):
    v = chi_2x2(H(text))
    assert v.key() == ("Chromatic", want)
    assert v.rule == rule


def test_chi_2x2_case4_circulant():
    v = chi_2x2(H("2 0; 1 4"))
    assert v.circulant == CirculantSpec(8, -9, 2)


def test_oracle_backs_2x2_examples():
    for text, chi in [("2 0; 1 4", 4), ("1 0; -2 5", 5), ("3 0; 1 6", 2), ("4 0; 2 4", 2)]:
        assert exact_chi(finite_quotient_graph(H(text))) == chi


def test_chi_2x2_rejects_upper():
    with pytest.raises(ValueError):
        chi_2x2(H("1 2; 0 1"))


def test_chi_2x2_matches_quotients():
    for y11 in range(1, 13):
        for y22 in range(1, 13):
            if y11 * y22 > 144:
                continue
            for y21 in range(-12, 13):
                M = HeubergerMatrix.from_rows([[y11, 0], [y21, y22]])
                v = chi_2x2(M)
                if has_loops(M):
                    assert v.status == "Loops", M
                else:
                    assert v.chi == exact_chi(finite_quotient_graph(M)), M


def test_det3_shortcut():
    assert det3_shortcut(H("3 0; 1 2")).bound_only
    assert det3_shortcut(H("1 0; 0 1")) is None
    assert det3_shortcut(H("2 0; 1 5")) is None
    for y11 in range(0, 10):
        for y22 in range(0, 10):
            for y21 in range(-9, 10):
                M = HeubergerMatrix.from_rows([[y11, 0], [y21, y22]])
                if det3_shortcut(M) is not None:
                    assert chi_2x2(M).chi in (2, 3)


@pytest.mark.parametrize(
    "text, loops", [("1 0; 0 1; 0 2", True), ("1 0; 0 -1; 3 2", False), ("2 0; -1 2; 0 5", False)]
)
def test_mhnf_loops(text, loops):
    assert mhnf_loops(H(text)) is loops


def test_mhnf_loops_normalises_first():
    assert mhnf_loops(H("1 0; 0 1; 2 3")) is False
    with pytest.raises(ValueError):
        mhnf_loops(H("1 0; 0 0; 2 3"))


@pytest.mark.parametrize(
    "text, want, rule",
    [
        ("1 0; 0 1; 3 4", 4, "Thm-m3-family1"),
        ("1 0; 0 -1; 3 2", 4, "Thm-m3-family2"),
        ("2 0; -1 2; 0 5", 3, "Thm-m3-case4"),
        ("1 0; 0 1; 3 5", 2, "Thm-m3-case2"),
    ],
)
def test_chi_3x2_mhnf_examples(text, want, rule):
    v = chi_3x2_mhnf(H(text))
    assert v.key() == ("Chromatic", want) and v.rule == rule


def test_family_parameters():
    assert match_family(H("1 0; 0 1; 3 4")) == (1, {"k": 1})
    assert match_family(H("1 0; 0 -1; -6 2")) == (5, {"b": -2})
    assert match_family(H("1 0; 0 -1; -3 2")) == (2, {"k": 1})
    assert match_family(H("1 0; -1 2; -4 5")) == (3, {"k": 1})
    assert match_family(H("1 0; -1 -2; 2 1")) == (4, {"k": 1})
    assert match_family(H("1 0; -1 4; -1 7")) == (6, {"a": 4, "k": 2})
    assert match_family(H("2 0; -1 2; 0 5")) is None


@pytest.mark.parametrize(
    "text, want",
    [("1 0; 0 1; 2 3", 4), ("2 0; -1 2; 0 5", 3), ("1 0; 1 1; 1 -1", 3), ("1 0; 0 1; 3 5", 2)],
)
def test_chi_3x2_minors_examples(text, want):
    assert chi_3x2_minors(H(text)).chi == want


def test_minors_needs_more_than_the_multiset():
    # same absolute minors {4, 8, 12}; gcd 4 > 1
    A, B = H("1 0; -1 -4; 5 8"), H("1 0; -1 -4; -1 8")
    assert sorted(map(abs, minors_3x2(A))) == sorted(map(abs, minors_3x2(B))) == [4, 8, 12]
    assert chi_3x2_minors(A).chi == 3 and chi_3x2_minors(B).chi == 4
    assert chi_3x2_mhnf(mhnf_3x2(A)[0]).chi == 3
    assert chi_3x2_mhnf(mhnf_3x2(B)[0]).chi == 4
    assert not triangle_relation(A) and triangle_relation(B)
    assert chi_3x2_minors(A, literal=True).chi == 4
    b = chi_bounds_infinite(A)
    assert (b.lower, b.upper) == (3, 3)


def test_minors_agree_with_mhnf_random():
    rng = random.Random(31)
    seen = 0
    while seen < 400:
        M = HeubergerMatrix.from_rows([[rng.randint(-6, 6) for _ in range(2)] for _ in range(3)])
        if any(r == (0, 0) for r in M.rows) or columns_dependent(M):
            continue
        v = chi_3x2_mhnf(mhnf_3x2(M)[0])
        if v.status == "Loops":
            continue
        assert chi_3x2_minors(M).key() == v.key(), M
        seen += 1


def test_minors_divisible_by_three_never_four():
    rng = random.Random(8)
    hits = 0
    for _ in range(3000):
        M = HeubergerMatrix.from_rows([[rng.randint(-6, 6) for _ in range(2)] for _ in range(3)])
        if any(r == (0, 0) for r in M.rows) or columns_dependent(M):
            continue
        if all(x % 3 == 0 for x in minors_3x2(M)) and not has_loops(M):
            hits += 1
            assert classify(M).chi in (2, 3)
    assert hits > 0


@pytest.mark.parametrize(
    "args, want",
    [((1, -1), key("Chromatic", 3)), ((1, 3), key("Chromatic", 4)), ((1, 0), key("Loops"))],
)
def test_first_column_ones(args, want):
    assert chi_first_column_ones(*args).key() == want


@pytest.mark.parametrize(
    "args, want",
    [((1, 1, -1, 5), key("Chromatic", 4)), ((2, 3, 0, 5), key("Chromatic", 3)), ((1, 1, 0, 1), key("Loops"))],
)
def test_l_shaped(args, want):
    assert chi_L_shaped(*args).key() == want


def test_l_shaped_precondition():
    with pytest.raises(ValueError):
        chi_L_shaped(0, 1, 0, 3)


@pytest.mark.parametrize(
    "args, want", [((2, 6), key("Chromatic", 4)), ((3, 5), key("Chromatic", 2)), ((2, 5), key("Chromatic", 3))]
)
def test_i_on_top(args, want):
    assert chi_I_on_top(*args).key() == want


def _via_mhnf(rows):
    M = HeubergerMatrix.from_rows(rows)
    if any(r == (0, 0) for r in M.rows) or columns_dependent(M):
        return None
    return chi_3x2_mhnf(mhnf_3x2(M)[0]).key()


def test_sub_classifiers_agree_with_mhnf():
    for a in range(-9, 10):
        for b in range(-9, 10):
            want = _via_mhnf([[1, 0], [1, a], [1, b]])
            if want is not None:
                assert chi_first_column_ones(a, b).key() == want, (a, b)
    for y11 in range(1, 6):
        for y21 in range(1, 6):
            for y32 in range(1, 10):
                for y31 in range(-(y32 // 2), 1):
                    want = _via_mhnf([[y11, 0], [y21, 0], [y31, y32]])
                    if want is not None:
                        assert chi_L_shaped(y11, y21, y31, y32).key() == want
    for y32 in range(1, 20):
        for y31 in range(1, y32 + 1):
            assert chi_I_on_top(y31, y32).key() == _via_mhnf([[1, 0], [0, 1], [y31, y32]])


@pytest.mark.parametrize(
    "text, want",
    [
        ("1 0; 0 1; 2 6", ("Chromatic", 4)),
        ("3 1 4", ("Loops", None)),
        ("5; 0; 0", ("Chromatic", 3)),
        ("2; 3; 4", ("Unsupported", None)),
        ("1 2; 0 0", ("Loops", None)),
        ("1 0 0; -2 5 0; 0 0 3", ("Unsupported", None)),
    ],
)
def test_classify(text, want):
    assert classify(H(text)).key() == want


def test_classify_reasons():
    assert classify(H("2; 3; 4")).reason == "requires companion Tomato Cage Theorem"
    assert classify(H("1 0 0; -2 5 0; 0 0 3")).reason == "shape out of scope"


def test_verdict_json():
    v = classify(H("1 0; 0 1; 2 6"))
    d = v.to_json()
    assert d["status"] == "Chromatic" and d["chi"] == 4 and d["rule"].startswith("Thm-m3-family")
    assert Verdict("Chromatic", 3, "x").key() == ("Chromatic", 3)
