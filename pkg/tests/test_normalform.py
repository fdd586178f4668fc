import random

import pytest

from heuberger.cayley import finite_quotient_graph
from heuberger.intmat import (
    HeubergerMatrix,
    apply_ops,
    columns_dependent,
    det,
    gcd_vec,
    matmul,
    minors_3x2,
)
from heuberger.normalform import (
    LOWER2X2,
    MHNF3X2,
    ROW1XR,
    UNSUPPORTED,
    is_mhnf,
    lower_triangular_2x2,
    mhnf_3x2,
    mhnf_conditions,
    reduce,
)
from heuberger.oracle import exact_chi, has_loops

H = HeubergerMatrix.parse


def random_3x2(rng, lo=-6, hi=6):
    while True:
        M = HeubergerMatrix.from_rows([[rng.randint(lo, hi) for _ in range(2)] for _ in range(3)])
        if not any(r == (0, 0) for r in M.rows) and not columns_dependent(M):
            return M


def abs_minors(M):
    return sorted(abs(x) for x in minors_3x2(M))


def row_gcds(M):
    return sorted(gcd_vec(r) for r in M.rows)


@pytest.mark.parametrize(
    "text, out, steps",
    [("4 0; 2 4", "4 0; 2 4", 0), ("0 3; 1 1", "3 0; 1 1", None), ("2 2; 0 4", "2 0; 0 4", None)],
)
def test_lower_triangular_examples(text, out, steps):
    N, t = lower_triangular_2x2(H(text))
    assert N == H(out)
    if steps is not None:
        assert len(t) == steps
    assert apply_ops(H(text), t) == N
    assert t.is_isomorphism()


def test_lower_triangular_random():
    rng = random.Random(11)
    for _ in range(500):
        M = HeubergerMatrix.from_rows([[rng.randint(-9, 9) for _ in range(2)] for _ in range(2)])
        N, t = lower_triangular_2x2(M)
        assert N[0, 1] == 0 and N[0, 0] >= 0 and N[1, 1] >= 0
        assert abs(det(N.rows)) == abs(det(M.rows))
        assert apply_ops(M, t) == N


def test_lower_triangular_keeps_quotient():
    rng = random.Random(12)
    done = 0
    while done < 40:
        M = HeubergerMatrix.from_rows([[rng.randint(-5, 5) for _ in range(2)] for _ in range(2)])
        if det(M.rows) == 0 or has_loops(M):
            continue
        N, _ = lower_triangular_2x2(M)
        G, G2 = finite_quotient_graph(M), finite_quotient_graph(N)
        assert G.order == G2.order
        assert exact_chi(G) == exact_chi(G2)
        done += 1


def test_mhnf_fixed_point():
    M = H("1 0; 0 -1; 3 2")
    N, t = mhnf_3x2(M)
    assert N == M and len(t) == 0


def test_mhnf_worked_example():
    N, t = mhnf_3x2(H("1 0; 0 1; 2 3"))
    assert N == H("1 0; 0 -1; 3 2")
    assert apply_ops(H("1 0; 0 1; 2 3"), t) == N


def test_mhnf_example_minors():
    M = H("2 4; 1 1; 0 5")
    N, _ = mhnf_3x2(M)
    assert is_mhnf(N)
    assert abs_minors(N) == [2, 5, 10] == abs_minors(M)


def test_mhnf_conditions_checker():
    assert mhnf_conditions(H("1 0; 0 -1; 3 2")) == [True] * 6
    # y11 <= 0, y12 != 0
    c = mhnf_conditions(H("-1 1; 0 1; 3 2"))
    assert c[0] is False and c[1] is False
    # condition 4 fails: y22 > y32
    assert mhnf_conditions(H("1 0; 0 2; 0 -5"))[3] is False


def test_mhnf_random_audit():
    rng = random.Random(2024)
    for _ in range(1000):
        M = random_3x2(rng)
        N, t = mhnf_3x2(M)
        assert is_mhnf(N), (M, N)
        assert abs_minors(N) == abs_minors(M)
        assert row_gcds(N) == row_gcds(M)
        assert t.is_isomorphism()
        P, Q = t.row_transform(3), t.column_transform(2)
        assert abs(det(Q)) == 1
        assert sorted(map(abs, sum(P, []))) == [0] * 6 + [1] * 3
        assert matmul(matmul(P, M.rows), Q) == N.tolist()


def test_mhnf_preconditions():
    with pytest.raises(ValueError):
        mhnf_3x2(H("1 0; 0 0; 2 3"))
    with pytest.raises(ValueError):
        mhnf_3x2(H("2 4; 1 2; 3 6"))


def test_reduce_zero_row():
    red = reduce(H("1 2; 0 0"))
    assert red.shape_class == ROW1XR
    assert red.matrix == H("1 2")
    assert red.deleted_zero_rows == 1
    assert not red.transcript.is_isomorphism()


def test_reduce_keeps_last_row():
    red = reduce(H("0 0; 0 0"))
    assert red.shape_class == ROW1XR and red.matrix == H("0 0")


def test_reduce_dependent_columns():
    red = reduce(H("2 4; 1 2; 3 6"))
    assert red.shape_class == UNSUPPORTED
    assert red.matrix.shape == (3, 1)
    assert red.matrix == H("2; 1; 3")


def test_reduce_rank_two_3x3():
    red = reduce(H("1 0 2; 0 1 3; 2 3 13"))
    assert red.shape_class == MHNF3X2 and is_mhnf(red.matrix)


def test_reduce_2x1_pads():
    red = reduce(H("3; 1"))
    assert red.shape_class == LOWER2X2
    assert red.matrix.shape == (2, 2)
    assert red.matrix[0, 1] == 0


def test_reduce_idempotent():
    rng = random.Random(99)
    for _ in range(300):
        m, r = rng.randint(1, 3), rng.randint(1, 3)
        M = HeubergerMatrix.from_rows([[rng.randint(-5, 5) for _ in range(r)] for _ in range(m)])
        red = reduce(M)
        again = reduce(red.matrix)
        assert again.matrix == red.matrix
        assert len(again.transcript) == 0
        assert apply_ops(M, red.transcript) == red.matrix
