"""Graph-preserving reductions of Heuberger matrices.

Row swaps/negations and unimodular column operations give an isomorphic
graph; deleting a zero row keeps the chromatic number.  ``reduce`` chains
these to reach one of the shapes the classifier understands.
"""
from __future__ import annotations

from dataclasses import dataclass

from .intmat import (
    CHI_PRESERVING,
    HeubergerMatrix,
    OpRecorder,
    Transcript,
    columns_dependent,
    minors_3x2,
    rank,
)

ROW1XR = "Row1xR"
LOWER2X2 = "Lower2x2"
MHNF3X2 = "Mhnf3x2"
UNSUPPORTED = "Unsupported"


@dataclass(frozen=True)
class ReducedForm:
    matrix: HeubergerMatrix
    transcript: Transcript
    shape_class: str
    deleted_zero_rows: int = 0


def _euclid_row(rec: OpRecorder, i: int, cols: list[int]) -> int | None:
    """Column-Euclid on row i over ``cols`` until one nonzero entry is left.

    Returns the surviving column (or None if the row is zero there).
    """
    a = rec.a
    while True:
        nz = [j for j in cols if a[i][j]]
        if len(nz) <= 1:
            return nz[0] if nz else None
        p = min(nz, key=lambda j: (abs(a[i][j]), j))
        for j in nz:
            if j != p:
                q = a[i][j] // a[i][p]
                rec.do("add_col", j, p, -q)


# ---------------------------------------------------------------------------
# 2 x 2

def is_lower_2x2(M: HeubergerMatrix) -> bool:
    return M.shape == (2, 2) and M[0, 1] == 0 and M[0, 0] >= 0 and M[1, 1] >= 0


def _lower_2x2(rec: OpRecorder) -> None:
    a = rec.a
    if a[0][1] == 0 and a[0][0] >= 0 and a[1][1] >= 0:
        return
    p = _euclid_row(rec, 0, [0, 1])
    if p == 1:
        rec.do("swap_cols", 0, 1)
    if a[0][0] < 0:
        rec.do("negate_col", 0)
    if a[1][1] < 0:
        rec.do("negate_col", 1)


def lower_triangular_2x2(M: HeubergerMatrix) -> tuple[HeubergerMatrix, Transcript]:
    """Column operations only, so H itself is unchanged."""
    if M.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got {M.m}x{M.r}")
    rec = OpRecorder(M)
    _lower_2x2(rec)
    return rec.matrix, rec.transcript


# ---------------------------------------------------------------------------
# 3 x 2 modified Hermite normal form

def mhnf_conditions(M: HeubergerMatrix) -> list[bool]:
    """The six defining conditions, in order, evaluated entrywise."""
    (y11, y12), (y21, y22), (y31, y32) = M.rows
    # -|x|/2 <= y  is  -|x| <= 2y
    six = (y22 == 0 and -abs(y32) <= 2 * y31 <= 0) or (-abs(y22) <= 2 * y21 <= 0)
    return [
        y11 > 0,
        y12 == 0,
        (y11 * y22 - y11 * y32) % 3 == 0,
        y22 <= y32,
        abs(y22) <= abs(y32),
        six,
    ]


def is_mhnf(M: HeubergerMatrix) -> bool:
    return M.shape == (3, 2) and not any(r == (0, 0) for r in M.rows) and all(mhnf_conditions(M))


_PAIRS = ((0, 1, 0), (0, 2, 1), (1, 2, 2))  # minor indices and the row they share


def _step_zero(rec: OpRecorder) -> None:
    al, be, ga = minors_3x2(rec.matrix)
    mins = (al, be, ga)
    shared = None
    for x, y, row in _PAIRS:
        if (mins[x] - mins[y]) % 3 == 0:
            shared = row
            break
    if shared is None:
        for x, y, row in _PAIRS:
            if (mins[x] + mins[y]) % 3 == 0:
                shared = row
                break
    # lexicographically least permutation with the shared row on top
    if shared == 1:
        rec.do("swap_rows", 0, 1)
    elif shared == 2:
        rec.do("swap_rows", 0, 2)
        rec.do("swap_rows", 1, 2)
    m12, m13, _ = minors_3x2(rec.matrix)
    if (m12 - m13) % 3:
        rec.do("negate_row", 1)


def _step_four(rec: OpRecorder) -> None:
    def ok():
        u, w = rec.a[1][1], rec.a[2][1]
        return u <= w and abs(u) <= abs(w)

    if ok():
        return
    rec.do("swap_rows", 1, 2)
    if ok():
        return
    rec.do("swap_rows", 1, 2)
    rec.do("negate_col", 1)
    if ok():
        return
    rec.do("swap_rows", 1, 2)


def _steps_five_six(rec: OpRecorder) -> None:
    a = rec.a
    row = 1 if a[1][1] != 0 else 2
    x, b = a[row][0], a[row][1]
    s, mb = (1 if b > 0 else -1), abs(b)
    q = -((-x) // mb)  # ceil, so that x - q|b| lands in (-|b|, 0]
    if q:
        rec.do("add_col", 0, 1, -q * s)
    if -mb > 2 * a[row][0]:
        rec.do("add_col", 0, 1, s)
        rec.do("negate_col", 0)
        rec.do("negate_row", 0)


def mhnf_3x2(M: HeubergerMatrix) -> tuple[HeubergerMatrix, Transcript]:
    """Bring a 3x2 matrix to modified Hermite normal form.

    Requires no zero rows and rationally independent columns.  Only row
    swaps, row negations and unimodular column steps are used.
    """
    if M.shape != (3, 2):
        raise ValueError(f"expected a 3x2 matrix, got {M.m}x{M.r}")
    if any(r == (0, 0) for r in M.rows):
        raise ValueError("matrix has a zero row")
    if columns_dependent(M):
        raise ValueError("columns are linearly dependent over Q")
    if is_mhnf(M):
        return M, Transcript()
    rec = OpRecorder(M)
    a = rec.a
    _step_zero(rec)
    for j in (0, 1):
        if a[0][j] < 0:
            rec.do("negate_col", j)
    if a[0][0] == 0:
        rec.do("swap_cols", 0, 1)
    if a[0][1] != 0:
        p = _euclid_row(rec, 0, [0, 1])
        if p == 1:
            rec.do("swap_cols", 0, 1)
    _step_four(rec)
    _steps_five_six(rec)
    out = rec.matrix
    if not is_mhnf(out):  # pragma: no cover - guarded by the property tests
        raise AssertionError(f"MHNF construction failed on {M}: got {out}")
    return out, rec.transcript


# ---------------------------------------------------------------------------
# shape reduction

def _eliminate_dependent_columns(rec: OpRecorder) -> None:
    a = rec.a
    m, r = len(a), len(a[0])
    active = list(range(r))
    for i in range(m):
        p = _euclid_row(rec, i, active)
        if p is not None:
            active.remove(p)
    keep = 2 if m == 2 else 1
    zero_cols = [j for j in range(len(a[0])) if not any(row[j] for row in a)]
    for j in reversed(zero_cols):
        if len(a[0]) <= keep:
            break
        rec.do("delete_zero_col", j)


def reduce(M: HeubergerMatrix) -> ReducedForm:
    rec = OpRecorder(M)
    a = rec.a
    deleted = 0
    i = len(a) - 1
    while i >= 0:
        if len(a) > 1 and not any(a[i]):
            rec.do("delete_zero_row", i, effect=CHI_PRESERVING)
            deleted += 1
        i -= 1
    m = len(a)
    if m == 1:
        return ReducedForm(rec.matrix, rec.transcript, ROW1XR, deleted)
    if rank(a) < len(a[0]):
        _eliminate_dependent_columns(rec)
    r = len(a[0])
    if m == 2:
        if r == 1:
            rec.do("append_zero_col")
        _lower_2x2(rec)
        return ReducedForm(rec.matrix, rec.transcript, LOWER2X2, deleted)
    if m == 3 and r == 2:
        out, t = mhnf_3x2(rec.matrix)
        return ReducedForm(out, rec.transcript + t, MHNF3X2, deleted)
    return ReducedForm(rec.matrix, rec.transcript, UNSUPPORTED, deleted)
