"""Closed-form chromatic numbers for 1 x r, 2 x r and 3 x 2 Heuberger matrices."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .intmat import (
    HeubergerMatrix,
    divides,
    gcd_vec,
    membership,
    minors_3x2,
    smith_normal_form,
)
from .normalform import LOWER2X2, MHNF3X2, ROW1XR, is_lower_2x2, is_mhnf, mhnf_3x2, reduce

LOOPS = "Loops"
CHROMATIC = "Chromatic"
UNSUPPORTED = "Unsupported"

TOMATO_CAGE_REASON = "requires companion Tomato Cage Theorem"
SHAPE_REASON = "shape out of scope"


@dataclass(frozen=True)
class CirculantSpec:
    """Heuberger circulant C_n(a, b) = Cay(Z_n, {+-a, +-b})."""

    n: int
    a: int
    b: int

    def __post_init__(self):
        n, a, b = self.n, self.a, self.b
        if n == 0:
            raise ValueError("circulant modulus must be nonzero")
        if math.gcd(math.gcd(a, b), n) != 1:
            raise ValueError(f"gcd(a, b, n) != 1 for C_{n}({a},{b})")
        if a % n == 0 or b % n == 0:
            raise ValueError(f"C_{n}({a},{b}) has loops")

    def to_json(self) -> dict:
        return {"n": self.n, "a": self.a, "b": self.b}


@dataclass(frozen=True)
class Verdict:
    status: str
    chi: int | None = None
    rule: str = ""
    reason: str | None = None
    circulant: CirculantSpec | None = None
    bound_only: bool = False
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def is_chromatic(self) -> bool:
        return self.status == CHROMATIC

    def key(self) -> tuple:
        """Status and value only; what two classifiers must agree on."""
        return (self.status, self.chi)

    def to_json(self) -> dict:
        d = {"status": self.status, "chi": self.chi, "rule": self.rule}
        if self.reason:
            d["reason"] = self.reason
        if self.circulant is not None:
            d["circulant"] = self.circulant.to_json()
        if self.bound_only:
            d["bound_only"] = True
        d.update(self.extra)
        return d


def loops(rule: str) -> Verdict:
    return Verdict(LOOPS, None, rule)


def chromatic(k: int, rule: str, **kw) -> Verdict:
    return Verdict(CHROMATIC, k, rule, **kw)


# ---------------------------------------------------------------------------
# 1 x r

def chi_1xr(row) -> Verdict:
    row = list(row)
    if not any(row):
        return chromatic(2, "Lem-m1-zero")
    e = gcd_vec(row)
    if e == 1:
        return loops("Lem-m1-loops")
    if e % 2 == 0:
        return chromatic(2, "Lem-m1-even")
    return chromatic(3, "Lem-m1-odd")


# ---------------------------------------------------------------------------
# circulants

def _pm(x: int, y: int, n: int) -> bool:
    return (x - y) % n == 0 or (x + y) % n == 0


def circulant_chi(c: CirculantSpec) -> int:
    n, a, b = abs(c.n), c.a, c.b
    if a % 2 and b % 2 and n % 2 == 0:
        return 2
    if n == 5 and _pm(a, 2 * b, 5):
        return 5
    if n == 13 and _pm(a, 5 * b, 13):
        return 4
    if n != 5 and n % 3 and (_pm(a, 2 * b, n) or _pm(b, 2 * a, n)):
        return 4
    return 3


# ---------------------------------------------------------------------------
# 2 x 2

def loops_2x2(M: HeubergerMatrix) -> bool:
    if M.shape != (2, 2):
        raise ValueError("loops_2x2 needs a 2x2 matrix")
    (y11, y12), (y21, y22) = M.rows
    n = y11 * y22 - y12 * y21
    if n != 0:
        return (y11 % n == 0 and y12 % n == 0) or (y21 % n == 0 and y22 % n == 0)
    return (y11 == y12 == 0 and math.gcd(y21, y22) == 1) or (
        y21 == y22 == 0 and math.gcd(y11, y12) == 1
    )


def _prime_factors(n: int) -> list[int]:
    n, out, p = abs(n), [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def choose_q(y11: int, y21: int, y22: int) -> int:
    d = math.gcd(y11, y21)
    q = 1
    for p in _prime_factors(y11):
        if d % p:
            q *= p
    if math.gcd(y11, y21 + q * y22) != 1:
        raise AssertionError(f"choose_q failed for ({y11}, {y21}, {y22})")
    return q


def chi_2x2(M: HeubergerMatrix) -> Verdict:
    if not is_lower_2x2(M):
        raise ValueError(f"chi_2x2 needs lower-triangular input with nonnegative diagonal, got {M}")
    (y11, _), (y21, y22) = M.rows
    if y22 == 1 or (y11 == 1 and divides(y22, y21)) or (y11 == 0 and math.gcd(y21, y22) == 1):
        return loops("Thm-m2-case1")
    if (y11 + y21) % 2 == 0 and y22 % 2 == 0:
        return chromatic(2, "Thm-m2-case2")
    e = math.gcd(math.gcd(y11, y21), y22)
    if y11 == 0 or y22 == 0 or e > 1 or divides(y22, y21):
        return chromatic(3, "Thm-m2-case3")
    q = choose_q(y11, y21, y22)
    c = CirculantSpec(y11 * y22, -y21 - q * y22, y11)
    return chromatic(circulant_chi(c), "Thm-m2-case4", circulant=c)


def det3_shortcut(M: HeubergerMatrix) -> Verdict | None:
    """Upper bound 3 when the graph is loop-free and 3 divides det M."""
    if M.shape != (2, 2):
        raise ValueError("det3_shortcut needs a 2x2 matrix")
    (y11, y12), (y21, y22) = M.rows
    if loops_2x2(M) or (y11 * y22 - y12 * y21) % 3:
        return None
    return Verdict(CHROMATIC, 3, "Cor-det3", bound_only=True)


# ---------------------------------------------------------------------------
# 3 x 2

def _as_mhnf(M: HeubergerMatrix) -> HeubergerMatrix:
    # inputs outside the normal form are normalised first (isomorphic graph)
    return M if is_mhnf(M) else mhnf_3x2(M)[0]


def mhnf_loops(M: HeubergerMatrix) -> bool:
    M = _as_mhnf(M)
    return M.column(0) == (1, 0, 0) or M.column(1) == (0, 0, 1)


def _k_from(x: int, offset: int) -> int | None:
    """k >= 1 with x == offset + 3k, else None."""
    if (x - offset) % 3 or (x - offset) // 3 < 1:
        return None
    return (x - offset) // 3


def match_family(M: HeubergerMatrix) -> tuple[int, dict] | None:
    """Which of the six four-chromatic families an MHNF matrix belongs to."""
    (y11, y12), (y21, y22), (y31, y32) = M.rows
    if y11 != 1 or y12 != 0:
        return None
    if y21 == 0 and y22 == 1:
        k = _k_from(y32, 1)
        if k is not None and abs(y31) == 3 * k:
            return 1, {"k": k}
    if y21 == 0 and y22 == -1:
        k = _k_from(y32, -1)
        if k is not None and abs(y31) == 3 * k:
            return 2, {"k": k}
    if y21 == -1 and y22 == 2:
        k = _k_from(y32, 2)
        if k is not None and y31 == -1 - 3 * k:
            return 3, {"k": k}
    if y21 == -1 and y22 == -2:
        k = _k_from(y32, -2)
        if k is not None and y31 == -1 + 3 * k:
            return 4, {"k": k}
    if y21 == 0 and y22 == -1 and y32 == 2 and y31 % 3 == 0:
        return 5, {"b": y31 // 3}
    if y21 == -1 and y31 == -1 and y22 % 3:
        k = _k_from(y32 + 3, y22)
        if k is not None:
            return 6, {"a": y22, "k": k}
    return None


def chi_3x2_mhnf(M: HeubergerMatrix) -> Verdict:
    M = _as_mhnf(M)
    if mhnf_loops(M):
        return loops("Thm-m3-case1")
    (y11, _), (y21, y22), (y31, y32) = M.rows
    if (y11 + y21 + y31) % 2 == 0 and (y22 + y32) % 2 == 0:
        return chromatic(2, "Thm-m3-case2")
    fam = match_family(M)
    if fam is not None:
        idx, params = fam
        return chromatic(4, f"Thm-m3-family{idx}", extra={"family": params})
    return chromatic(3, "Thm-m3-case4")


def triangle_relation(M: HeubergerMatrix) -> bool:
    """True when some e1 +- e2 +- e3 lies in H."""
    snf = smith_normal_form(M)
    return any(membership(M, (1, s, t), snf) for s in (1, -1) for t in (1, -1))


def _minor_pattern(al: int, be: int, ga: int) -> bool:
    if (al, be) == (1, 2) and ga % 3 == 0 and ga > 0:
        return True
    if (al, ga) == (1, 2) and be % 3 == 0 and be > 0:
        return True
    return ga == al + be and (al - be) % 3 != 0


def chi_3x2_minors(M: HeubergerMatrix, literal: bool = False) -> Verdict:
    """Classify from the absolute 2x2 minors, without normalising.

    Loops are screened first by lattice membership.  The minors pin the
    graph down only when their gcd is 1 (then X is a distance graph on Z).
    Otherwise the exceptional value 4 additionally needs the triangular
    relation e1 +- e2 +- e3 in H, which also covers the zero-minor case.
    ``literal=True`` drops that refinement and uses the bare minor
    criterion with alpha > 0.
    """
    if M.shape != (3, 2):
        raise ValueError("chi_3x2_minors needs a 3x2 matrix")
    if any(r == (0, 0) for r in M.rows):
        raise ValueError("matrix has a zero row")
    al, be, ga = sorted(abs(x) for x in minors_3x2(M))
    if ga == 0:
        raise ValueError("columns are linearly dependent over Q")
    snf = smith_normal_form(M)
    if any(membership(M, [int(i == j) for j in range(3)], snf) for i in range(3)):
        return loops("Recast-loops")
    if sum(M.column(0)) % 2 == 0 and sum(M.column(1)) % 2 == 0:
        return chromatic(2, "Recast-bipartite")
    coprime_row = any(math.gcd(*r) == 1 for r in M.rows)
    if not (coprime_row and _minor_pattern(al, be, ga)):
        return chromatic(3, "Recast-otherwise")
    if literal:
        ok = al > 0
    else:
        ok = (al > 0 and math.gcd(al, be, ga) == 1) or triangle_relation(M)
    if ok:
        return chromatic(4, "Recast-exceptional")
    return chromatic(3, "Recast-otherwise")


def chi_first_column_ones(y22: int, y32: int) -> Verdict:
    if {y22, y32} in ({0, -1}, {0, 1}, {-1}, {1}):
        return loops("Lem-first-column-loops")
    if (y32 + y22) % 3 == 0:
        return chromatic(3, "Lem-first-column-3")
    return chromatic(4, "Lem-first-column-4")


def chi_L_shaped(y11: int, y21: int, y31: int, y32: int) -> Verdict:
    if not (y11 > 0 and y21 > 0 and y32 > 0 and -y32 <= 2 * y31 <= 0):
        raise ValueError("L-shaped lemma needs y11, y21, y32 > 0 and -y32/2 <= y31 <= 0")
    if y32 == 1:
        return loops("Lem-L-loops")
    if (y11 + y21 + y31) % 2 == 0 and y32 % 2 == 0:
        return chromatic(2, "Lem-L-bipartite")
    if y11 == y21 == -y31 == 1 and y32 % 3 and y32 > 1:
        return chromatic(4, "Lem-L-4")
    return chromatic(3, "Lem-L-3")


def chi_I_on_top(y31: int, y32: int) -> Verdict:
    if not (0 < y31 <= y32):
        raise ValueError("I-on-top lemma needs 0 < y31 <= y32")
    if y31 % 2 and y32 % 2:
        return chromatic(2, "Lem-I-bipartite")
    if y31 == 2 and y32 % 3 == 0:
        return chromatic(4, "Lem-I-4a")
    if y31 % 3 != 1 and y32 == 1 + y31:
        return chromatic(4, "Lem-I-4b")
    return chromatic(3, "Lem-I-3")


# ---------------------------------------------------------------------------
# dispatcher

def classify(M: HeubergerMatrix, reduced=None) -> Verdict:
    red = reduced or reduce(M)
    if red.shape_class == ROW1XR:
        return chi_1xr(red.matrix.rows[0])
    if red.shape_class == LOWER2X2:
        return chi_2x2(red.matrix)
    if red.shape_class == MHNF3X2:
        return chi_3x2_mhnf(red.matrix)
    if red.matrix.r == 1 and red.matrix.m >= 3:
        return Verdict(UNSUPPORTED, None, "Unsupported-mx1", reason=TOMATO_CAGE_REASON)
    return Verdict(UNSUPPORTED, None, "Unsupported-shape", reason=SHAPE_REASON)
