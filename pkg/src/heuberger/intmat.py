"""Exact integer matrices, elementary operations and Smith normal form.

Everything here works on plain Python ints, so there is no overflow to
detect.  Matrices are immutable tuples of row tuples.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Sequence

ISOMORPHISM = "Isomorphism"
CHI_PRESERVING = "ChiPreserving"


class MatrixParseError(ValueError):
    pass


def _check_int(x) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise TypeError(f"matrix entries must be integers, got {x!r}")
    return x


@dataclass(frozen=True)
class HeubergerMatrix:
    """An m x r integer matrix whose columns span the relation lattice H."""

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(_check_int(x) for x in row) for row in self.rows)
        if not rows or not rows[0]:
            raise ValueError("a Heuberger matrix needs at least one row and one column")
        if any(len(row) != len(rows[0]) for row in rows):
            raise ValueError("ragged rows")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> "HeubergerMatrix":
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]]) -> "HeubergerMatrix":
        return cls(tuple(zip(*cols)))

    @classmethod
    def parse(cls, text: str) -> "HeubergerMatrix":
        return parse_matrix(text)

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def r(self) -> int:
        return len(self.rows[0])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.m, self.r)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.rows)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.r)]

    def tolist(self) -> list[list[int]]:
        return [list(row) for row in self.rows]

    def __str__(self) -> str:
        return "; ".join(" ".join(str(x) for x in row) for row in self.rows)


def parse_matrix(text: str) -> HeubergerMatrix:
    """Parse ``"1 0; -1 2; -4 5"`` (brackets optional) or a JSON document.

    JSON input may be a bare list of rows or ``{"matrix": [[...], ...]}``.
    """
    s = text.strip()
    if not s:
        raise MatrixParseError("empty matrix text")
    if s[0] == "{" or s.startswith("[["):
        try:
            doc = json.loads(s)
        except json.JSONDecodeError as exc:
            raise MatrixParseError(f"bad JSON matrix: {exc}") from None
        if isinstance(doc, dict):
            doc = doc.get("matrix")
        if not isinstance(doc, list) or not doc or not all(isinstance(r, list) for r in doc):
            raise MatrixParseError("JSON matrix must be a non-empty list of rows")
        try:
            return HeubergerMatrix.from_rows(doc)
        except (TypeError, ValueError) as exc:
            raise MatrixParseError(str(exc)) from None
    s = s.strip("[]()")
    rows = []
    for chunk in s.split(";"):
        chunk = chunk.strip().strip("[]()").replace(",", " ")
        if not chunk:
            raise MatrixParseError("empty row")
        try:
            rows.append([int(tok) for tok in chunk.split()])
        except ValueError:
            raise MatrixParseError(f"non-integer entry in row {chunk!r}") from None
    if any(len(r) != len(rows[0]) for r in rows):
        raise MatrixParseError("ragged rows")
    return HeubergerMatrix.from_rows(rows)


# ---------------------------------------------------------------------------
# small helpers on lists of lists

def _mat(M) -> list[list[int]]:
    if isinstance(M, HeubergerMatrix):
        return [list(r) for r in M.rows]
    return [list(r) for r in M]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> list[list[int]]:
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def det(A: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    a = _mat(A)
    n = len(a)
    if n == 0:
        return 1
    if any(len(row) != n for row in a):
        raise ValueError("determinant of a non-square matrix")
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def gcd_vec(v: Iterable[int]) -> int:
    vals = list(v)
    if not vals:
        raise ValueError("gcd of an empty list")
    return reduce(math.gcd, vals, 0)


def divides(a: int, b: int) -> bool:
    """a | b, with 0 | b only for b == 0."""
    return b == 0 if a == 0 else b % a == 0


def minors_3x2(M: HeubergerMatrix) -> tuple[int, int, int]:
    """Signed 2x2 minors for the row pairs (1,2), (1,3), (2,3)."""
    if M.shape != (3, 2):
        raise ValueError(f"minors_3x2 needs a 3x2 matrix, got {M.m}x{M.r}")
    (a, b), (c, d), (e, f) = M.rows
    return (a * d - b * c, a * f - b * e, c * f - d * e)


# ---------------------------------------------------------------------------
# elementary operations and transcripts

_OPS = {
    "swap_rows": 2,
    "negate_row": 1,
    "swap_cols": 2,
    "negate_col": 1,
    "add_col": 3,  # (i, j, k): col i += k * col j
    "delete_zero_col": 1,
    "delete_zero_row": 1,
    "append_zero_col": 0,
}


@dataclass(frozen=True)
class Step:
    op: str
    args: tuple[int, ...] = ()
    effect: str = ISOMORPHISM

    def __post_init__(self):
        if self.op not in _OPS:
            raise ValueError(f"unknown operation {self.op!r}")
        if len(self.args) != _OPS[self.op]:
            raise ValueError(f"{self.op} takes {_OPS[self.op]} arguments")
        if self.op == "add_col" and self.args[0] == self.args[1]:
            raise ValueError("add_col needs two distinct columns")
        if self.effect not in (ISOMORPHISM, CHI_PRESERVING):
            raise ValueError(f"unknown effect class {self.effect!r}")

    def to_json(self) -> dict:
        return {"op": self.op, "args": list(self.args), "effect": self.effect}

    @classmethod
    def from_json(cls, d: dict) -> "Step":
        op = d["op"]
        effect = d.get("effect", CHI_PRESERVING if op == "delete_zero_row" else ISOMORPHISM)
        return cls(op, tuple(d.get("args", ())), effect)


@dataclass(frozen=True)
class Transcript:
    steps: tuple[Step, ...] = field(default_factory=tuple)

    def __len__(self) -> int:
        return len(self.steps)

    def __add__(self, other: "Transcript") -> "Transcript":
        return Transcript(self.steps + other.steps)

    def to_json(self) -> list[dict]:
        return [s.to_json() for s in self.steps]

    @classmethod
    def from_json(cls, items: list[dict]) -> "Transcript":
        return cls(tuple(Step.from_json(d) for d in items))

    def is_isomorphism(self) -> bool:
        return all(s.effect == ISOMORPHISM for s in self.steps)

    def row_transform(self, m: int) -> list[list[int]]:
        """Signed permutation P with row steps composed (left factor)."""
        P = identity(m)
        for s in self.steps:
            if s.op == "swap_rows":
                i, j = s.args
                P[i], P[j] = P[j], P[i]
            elif s.op == "negate_row":
                (i,) = s.args
                P[i] = [-x for x in P[i]]
            elif s.op in ("delete_zero_row", "delete_zero_col", "append_zero_col"):
                raise ValueError("transcript changes the shape; no square row transform")
        return P

    def column_transform(self, r: int) -> list[list[int]]:
        """Unimodular Q with column steps composed (right factor)."""
        Q = identity(r)
        for s in self.steps:
            if s.op == "swap_cols":
                i, j = s.args
                for row in Q:
                    row[i], row[j] = row[j], row[i]
            elif s.op == "negate_col":
                (i,) = s.args
                for row in Q:
                    row[i] = -row[i]
            elif s.op == "add_col":
                i, j, k = s.args
                for row in Q:
                    row[i] += k * row[j]
            elif s.op in ("delete_zero_row", "delete_zero_col", "append_zero_col"):
                raise ValueError("transcript changes the shape; no square column transform")
        return Q


def apply_step(a: list[list[int]], s: Step) -> list[list[int]]:
    """Apply one step in place on a list-of-lists matrix and return it."""
    m, r = len(a), len(a[0]) if a else 0

    def _row(i):
        if not 0 <= i < m:
            raise IndexError(f"row index {i} out of range for {m} rows")

    def _col(j):
        if not 0 <= j < r:
            raise IndexError(f"column index {j} out of range for {r} columns")

    op, args = s.op, s.args
    if op == "swap_rows":
        _row(args[0]), _row(args[1])
        a[args[0]], a[args[1]] = a[args[1]], a[args[0]]
    elif op == "negate_row":
        _row(args[0])
        a[args[0]] = [-x for x in a[args[0]]]
    elif op == "swap_cols":
        i, j = args
        _col(i), _col(j)
        for row in a:
            row[i], row[j] = row[j], row[i]
    elif op == "negate_col":
        _col(args[0])
        for row in a:
            row[args[0]] = -row[args[0]]
    elif op == "add_col":
        i, j, k = args
        _col(i), _col(j)
        for row in a:
            row[i] += k * row[j]
    elif op == "delete_zero_col":
        (j,) = args
        _col(j)
        if any(row[j] for row in a):
            raise ValueError(f"column {j} is not zero")
        if r == 1:
            raise ValueError("cannot delete the only column")
        for row in a:
            del row[j]
    elif op == "delete_zero_row":
        (i,) = args
        _row(i)
        if any(a[i]):
            raise ValueError(f"row {i} is not zero")
        if m == 1:
            raise ValueError("cannot delete the only row")
        del a[i]
    elif op == "append_zero_col":
        for row in a:
            row.append(0)
    return a


def apply_ops(M: HeubergerMatrix, t: Transcript) -> HeubergerMatrix:
    a = _mat(M)
    for s in t.steps:
        apply_step(a, s)
    return HeubergerMatrix.from_rows(a)


class OpRecorder:
    """Mutable working matrix that logs every operation applied to it."""

    def __init__(self, M):
        self.a = _mat(M)
        self.steps: list[Step] = []

    def do(self, op: str, *args: int, effect: str = ISOMORPHISM) -> None:
        s = Step(op, tuple(args), effect)
        apply_step(self.a, s)
        self.steps.append(s)

    @property
    def matrix(self) -> HeubergerMatrix:
        return HeubergerMatrix.from_rows(self.a)

    @property
    def transcript(self) -> Transcript:
        return Transcript(tuple(self.steps))


# ---------------------------------------------------------------------------
# Smith normal form

@dataclass(frozen=True)
class SmithDecomposition:
    U: tuple[tuple[int, ...], ...]
    D: tuple[tuple[int, ...], ...]
    V: tuple[tuple[int, ...], ...]
    U_inv: tuple[tuple[int, ...], ...]

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D[i][i] for i in range(min(len(self.D), len(self.D[0]))))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def _freeze(a):
    return tuple(tuple(r) for r in a)


def smith_normal_form(M) -> SmithDecomposition:
    """U*M*V = D with U, V unimodular and d1 | d2 | ... on the diagonal.

    Pivot: the smallest nonzero |entry| of the remaining block, ties broken
    by lowest (row, col).
    """
    a = _mat(M)
    m, r = len(a), len(a[0])
    U, Uinv, V = identity(m), identity(m), identity(r)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]
        for row in Uinv:
            row[i], row[j] = row[j], row[i]

    def add_row(i, j, k):  # row i += k * row j
        if k:
            a[i] = [x + k * y for x, y in zip(a[i], a[j])]
            U[i] = [x + k * y for x, y in zip(U[i], U[j])]
            for row in Uinv:  # inverse: col j -= k * col i
                row[j] -= k * row[i]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        U[i] = [-x for x in U[i]]
        for row in Uinv:
            row[i] = -row[i]

    def swap_cols(i, j):
        for mat in (a, V):
            for row in mat:
                row[i], row[j] = row[j], row[i]

    def add_col(i, j, k):  # col i += k * col j
        if k:
            for mat in (a, V):
                for row in mat:
                    row[i] += k * row[j]

    for t in range(min(m, r)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, r):
                    x = a[i][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                break
            _, pi, pj = best
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            p = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, r):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, r) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if best is None:
            break
        if a[t][t] < 0:
            negate_row(t)
    return SmithDecomposition(_freeze(U), _freeze(a), _freeze(V), _freeze(Uinv))


def solve_in_lattice(M: HeubergerMatrix, v: Sequence[int], snf: SmithDecomposition | None = None):
    """Integer coefficients c with M c = v, or None when v is not in H."""
    if len(v) != M.m:
        raise ValueError(f"vector length {len(v)} does not match {M.m} rows")
    snf = snf or smith_normal_form(M)
    w = matvec(snf.U, v)
    diag = snf.diagonal
    y = [0] * M.r
    for i, wi in enumerate(w):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if wi != 0:
                return None
        elif wi % d:
            return None
        else:
            y[i] = wi // d
    return matvec(snf.V, y)


def membership(M: HeubergerMatrix, v: Sequence[int], snf: SmithDecomposition | None = None) -> bool:
    return solve_in_lattice(M, v, snf) is not None


def rank(M) -> int:
    return smith_normal_form(M).rank


def columns_dependent(M: HeubergerMatrix) -> bool:
    return rank(M) < M.r


def lattice_basis(M: HeubergerMatrix) -> HeubergerMatrix | None:
    """Columns forming a basis of H (None when H = 0)."""
    snf = smith_normal_form(M)
    diag = snf.diagonal
    cols = [
        tuple(snf.U_inv[a][i] * diag[i] for a in range(M.m)) for i in range(snf.rank)
    ]
    return HeubergerMatrix.from_columns(cols) if cols else None
