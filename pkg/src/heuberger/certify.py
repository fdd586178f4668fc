"""Checkable certificates for classifier verdicts.

Upper bounds are periodic colourings: a functional phi with phi(H) = 0 mod n
and a colour table on Z_n.  Lower bounds are loop witnesses, diamond
lanyards, C13(1,5) embeddings and K5 embeddings.  Verification only ever
asks whether a vector lies in H, so it never touches the classifier.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Sequence

from .cayley import CapExceeded, CosetCoordinates, FiniteGraph, finite_quotient_graph
from .classify import CHROMATIC, LOOPS, LOWER2X2, Verdict
from .intmat import HeubergerMatrix, matmul, smith_normal_form, solve_in_lattice
from .normalform import reduce
from .oracle import k_colorable

BIPARTITION = "Bipartition"
COLORING = "Coloring"
LOOP_WITNESS = "LoopWitness"
LANYARD = "Lanyard"
C13_EMBEDDING = "C13Embedding"
K5_EMBEDDING = "K5Embedding"

MAX_MODULUS = 120
MAX_LANYARD = 64


class CertificateError(ValueError):
    pass


@dataclass(frozen=True)
class Certificate:
    type: str
    data: dict
    matrix: tuple[tuple[int, ...], ...]
    claimed_chi: int | None
    attachments: tuple["Certificate", ...] = ()

    def to_json(self) -> dict:
        d = {
            "type": self.type,
            "data": self.data,
            "matrix": [list(r) for r in self.matrix],
            "claimed_chi": self.claimed_chi,
        }
        if self.attachments:
            d["attachments"] = [a.to_json() for a in self.attachments]
        return d

    @classmethod
    def from_json(cls, d: dict) -> "Certificate":
        return cls(
            d["type"],
            d["data"],
            tuple(tuple(int(x) for x in r) for r in d["matrix"]),
            d.get("claimed_chi"),
            tuple(cls.from_json(a) for a in d.get("attachments", ())),
        )


@dataclass(frozen=True)
class Verification:
    valid: bool
    reason: str = "ok"

    def __bool__(self) -> bool:
        return self.valid

    def to_json(self) -> dict:
        return {"valid": self.valid, "reason": self.reason}


# ---------------------------------------------------------------------------
# adjacency through membership only

class _Adjacency:
    def __init__(self, M: HeubergerMatrix):
        self.M = M
        self.snf = smith_normal_form(M)
        self.m = M.m

    def in_h(self, v: Sequence[int]) -> bool:
        return solve_in_lattice(self.M, list(v), self.snf) is not None

    def same(self, u, v) -> bool:
        return self.in_h([a - b for a, b in zip(u, v)])

    def adjacent(self, u, v) -> bool:
        d = [a - b for a, b in zip(u, v)]
        for i in range(self.m):
            for s in (1, -1):
                w = list(d)
                w[i] -= s
                if self.in_h(w):
                    return True
        return False


def _vecs(xs, m: int) -> list[tuple[int, ...]] | None:
    try:
        out = [tuple(int(x) for x in v) for v in xs]
    except (TypeError, ValueError):
        return None
    if any(len(v) != m for v in out):
        return None
    return out


# ---------------------------------------------------------------------------
# verification

def _verify_periodic(M: HeubergerMatrix, data: dict, claimed: int | None) -> Verification:
    try:
        phi = [int(x) for x in data["functional"]]
        n = int(data["modulus"])
        table = [int(x) for x in data["table"]]
    except (KeyError, TypeError, ValueError):
        return Verification(False, "malformed periodic colouring")
    if len(phi) != M.m or n <= 0 or len(table) != n:
        return Verification(False, "functional or table has the wrong size")
    for j, col in enumerate(M.columns()):
        if sum(p * c for p, c in zip(phi, col)) % n:
            return Verification(False, f"functional does not vanish on column {j} mod {n}")
    for i, p in enumerate(phi):
        g = p % n
        if g == 0:
            return Verification(False, f"generator e{i} maps to 0 mod {n}")
        for c in range(n):
            if table[c] == table[(c + g) % n]:
                return Verification(False, f"colour clash at residue {c} along e{i}")
    if claimed is not None and len(set(table)) > claimed:
        return Verification(False, f"table uses {len(set(table))} colours, claim is {claimed}")
    return Verification(True)


def _verify_loop(M: HeubergerMatrix, data: dict) -> Verification:
    try:
        i = int(data["generator"])
        c = [int(x) for x in data["coefficients"]]
    except (KeyError, TypeError, ValueError):
        return Verification(False, "malformed loop witness")
    if not 0 <= i < M.m or len(c) != M.r:
        return Verification(False, "loop witness has the wrong size")
    v = [sum(M[a, b] * c[b] for b in range(M.r)) for a in range(M.m)]
    if v != [int(a == i) for a in range(M.m)]:
        return Verification(False, "combination of columns is not the generator")
    return Verification(True)


def _verify_lanyard(M: HeubergerMatrix, data: dict) -> Verification:
    adj = _Adjacency(M)
    ends = _vecs(data.get("endpoints", ()), M.m)
    mids = data.get("middles", ())
    if ends is None or len(ends) < 2 or len(mids) != len(ends) - 1:
        return Verification(False, "malformed lanyard")
    pairs = []
    for pr in mids:
        pv = _vecs(pr, M.m)
        if pv is None or len(pv) != 2:
            return Verification(False, "malformed diamond middle pair")
        pairs.append(pv)
    for j in range(len(ends)):
        for i in range(j):
            if adj.same(ends[i], ends[j]):
                return Verification(False, f"endpoints {i} and {j} coincide")
    quads = []
    for j, (q, r) in enumerate(pairs):
        x, y = ends[j], ends[j + 1]
        quad = [x, q, r, y]
        for a in range(4):
            for b in range(a):
                if adj.same(quad[a], quad[b]):
                    return Verification(False, f"diamond {j} has repeated vertices")
        for u, v in ((x, q), (x, r), (q, r), (q, y), (r, y)):
            if not adj.adjacent(u, v):
                return Verification(False, f"diamond {j} is missing an edge")
        quads.append(quad)
    for j in range(len(quads) - 1):
        shared = sum(1 for u in quads[j] for v in quads[j + 1] if adj.same(u, v))
        if shared != 1:
            return Verification(False, f"diamonds {j} and {j + 1} share {shared} vertices")
    if not data.get("clasp", True) or not adj.adjacent(ends[0], ends[-1]):
        return Verification(False, "clasp edge missing")
    return Verification(True)


def _verify_embedding(M: HeubergerMatrix, data: dict, size: int, steps) -> Verification:
    adj = _Adjacency(M)
    vs = _vecs(data.get("vertices", ()), M.m)
    if vs is None or len(vs) != size:
        return Verification(False, f"need {size} vertices")
    for j in range(size):
        for i in range(j):
            if adj.same(vs[i], vs[j]):
                return Verification(False, f"vertices {i} and {j} coincide")
    for i in range(size):
        for s in steps:
            if not adj.adjacent(vs[i], vs[(i + s) % size]):
                return Verification(False, f"missing edge {i} ~ {(i + s) % size}")
    return Verification(True)


_LOWER = {LANYARD: 4, C13_EMBEDDING: 4, K5_EMBEDDING: 5}


def _verify_one(M: HeubergerMatrix, c: Certificate) -> Verification:
    if c.type == LOOP_WITNESS:
        return _verify_loop(M, c.data)
    if c.type in (COLORING, BIPARTITION):
        return _verify_periodic(M, c.data, c.claimed_chi)
    if c.type == LANYARD:
        return _verify_lanyard(M, c.data)
    if c.type == C13_EMBEDDING:
        return _verify_embedding(M, c.data, 13, (1, 5))
    if c.type == K5_EMBEDDING:
        return _verify_embedding(M, c.data, 5, (1, 2))
    return Verification(False, f"unknown certificate type {c.type!r}")


def verify_certificate(M: HeubergerMatrix, c: Certificate) -> Verification:
    """Check a certificate against M using membership tests and table checks."""
    try:
        if HeubergerMatrix.from_rows(c.matrix) != M:
            return Verification(False, "certificate is for a different matrix")
    except (TypeError, ValueError):
        return Verification(False, "malformed matrix")
    res = _verify_one(M, c)
    if not res:
        return res
    if c.type == BIPARTITION and c.claimed_chi != 2:
        return Verification(False, "a bipartition certifies chi = 2 only")
    lower = max([_LOWER.get(c.type, 0)] + [_LOWER.get(a.type, 0) for a in c.attachments])
    for a in c.attachments:
        if a.type not in _LOWER:
            return Verification(False, f"attachment {a.type} is not a lower-bound witness")
        r = _verify_one(M, a)
        if not r:
            return Verification(False, f"{a.type}: {r.reason}")
    if c.claimed_chi is not None and c.claimed_chi >= 4 and lower < c.claimed_chi:
        return Verification(False, f"no witness that chi >= {c.claimed_chi}")
    return res


# ---------------------------------------------------------------------------
# construction

def loop_witness(M: HeubergerMatrix) -> tuple[int, list[int]] | None:
    snf = smith_normal_form(M)
    for i in range(M.m):
        c = solve_in_lattice(M, [int(a == i) for a in range(M.m)], snf)
        if c is not None:
            return i, c
    return None


class _CirculantCache:
    def __init__(self):
        self.memo: dict[tuple[int, frozenset], list[int] | None] = {}

    def color(self, n: int, gens, k: int) -> list[int] | None:
        steps = frozenset(min(g % n, -g % n) for g in gens)
        key = (n, k, steps)
        if key not in self.memo:
            adj = tuple(
                tuple(sorted({(i + s) % n for s in steps} | {(i - s) % n for s in steps}))
                for i in range(n)
            )
            self.memo[key] = k_colorable(FiniteGraph(n, adj), k)
        return self.memo[key]


_CACHE = _CirculantCache()


def _annihilating_functionals(M: HeubergerMatrix, n: int, snf=None):
    """All phi in Z_n^m with phi M = 0 mod n, in a fixed order."""
    snf = snf or smith_normal_form(M)
    diag = snf.diagonal
    ranges = []
    for i in range(M.m):
        d = diag[i] if i < len(diag) else 0
        step = n // math.gcd(n, d) if d else 1
        ranges.append(range(0, n, step))
    U = snf.U
    for psi in itertools.product(*ranges):
        yield tuple(sum(psi[i] * U[i][j] for i in range(M.m)) % n for j in range(M.m))


def periodic_coloring(M: HeubergerMatrix, k: int, max_modulus: int = MAX_MODULUS) -> dict:
    """Search phi, n and a k-colour table on Z_n pulling back to X."""
    snf = smith_normal_form(M)
    for n in range(max(k, 2), max_modulus + 1):
        seen = set()
        for phi in _annihilating_functionals(M, n, snf):
            if any(p == 0 for p in phi):
                continue
            steps = frozenset(min(p, n - p) for p in phi)
            if steps in seen:
                continue
            seen.add(steps)
            table = _CACHE.color(n, phi, k)
            if table is not None:
                return {"functional": list(phi), "modulus": n, "table": table}
    raise CapExceeded(f"no periodic {k}-colouring with modulus <= {max_modulus}")


def _circulant_coloring(M: HeubergerMatrix, v: Verdict) -> dict | None:
    # the reduced lower-triangular matrix maps onto Z_n by (x, y) -> a x + b y
    red = reduce(M)
    if red.shape_class != LOWER2X2 or v.circulant is None or red.deleted_zero_rows:
        return None
    if not red.transcript.is_isomorphism():
        return None
    c = v.circulant
    n = abs(c.n)
    P = red.transcript.row_transform(M.m)
    phi = [x % n for x in matmul([[c.a, c.b]], P)[0]]
    table = _CACHE.color(n, (c.a, c.b), v.chi)
    if table is None:
        return None
    return {"functional": phi, "modulus": n, "table": table}


def _signed_gens(cc: CosetCoordinates) -> list[tuple[int, ...]]:
    out = []
    for g in cc.gen_images:
        for s in (1, -1):
            k = cc.add(cc.zero, g, s)
            if any(k) and k not in out:
                out.append(k)
    return out


def _diamond_steps(cc: CosetCoordinates, S: list) -> dict:
    """Offsets d admitting a diamond with endpoints x and x + d."""
    Sset = set(S)
    steps: dict[tuple, tuple] = {}
    for s in S:
        for t in S:
            if s >= t or cc.add(s, t, -1) not in Sset:
                continue
            for u in S:
                d = cc.add(s, u)
                if not any(d) or d in (s, t) or cc.add(d, t, -1) not in Sset:
                    continue
                steps.setdefault(d, (s, t))
    # short offsets first, positive before negative
    return dict(sorted(steps.items(), key=lambda kv: tuple((abs(x), -x) for x in kv[0])))


def find_lanyard(M: HeubergerMatrix, max_length: int = MAX_LANYARD, cap: int = 200_000) -> dict | None:
    """Shortest clasped lanyard found by BFS over diamond offsets."""
    cc = CosetCoordinates(M)
    S = _signed_gens(cc)
    if any(not any(g) for g in cc.gen_images):
        return None
    steps = _diamond_steps(cc, S)
    if not steps:
        return None
    Sset = set(S)
    zero = cc.zero
    parent = {zero: None}
    layer = [zero]
    for _ in range(max_length):
        nxt = []
        for p in layer:
            for d in steps:
                q = cc.add(p, d)
                if q in parent:
                    continue
                parent[q] = (p, d)
                nxt.append(q)
                if q in Sset:
                    lan = _assemble(cc, parent, q, steps)
                    if lan is not None:
                        return lan
                if len(parent) > cap:
                    return None
        if not nxt:
            return None
        layer = nxt
    return None


def _assemble(cc: CosetCoordinates, parent, end, steps) -> dict | None:
    path = []
    q = end
    while parent[q] is not None:
        p, d = parent[q]
        path.append((p, d))
        q = p
    path.reverse()
    ends = [p for p, _ in path] + [end]
    quads = []
    for p, d in path:
        s, t = steps[d]
        quads.append({p, cc.add(p, s), cc.add(p, t), cc.add(p, d)})
    for j in range(len(quads) - 1):
        if len(quads[j] & quads[j + 1]) != 1:
            return None
    rep = cc.representative
    return {
        "endpoints": [list(rep(e)) for e in ends],
        "middles": [
            [list(rep(cc.add(p, steps[d][0]))), list(rep(cc.add(p, steps[d][1])))] for p, d in path
        ],
        "clasp": True,
    }


def find_c13(M: HeubergerMatrix) -> dict | None:
    """Vertices j e_i, j = 0..12, when e_i has order 13 and 5 e_i = +-e_l."""
    adj = _Adjacency(M)
    for i in range(M.m):
        e = [int(a == i) for a in range(M.m)]
        if adj.in_h(e) or not adj.in_h([13 * x for x in e]):
            continue
        if adj.adjacent([5 * x for x in e], [0] * M.m):
            return {"vertices": [[j * x for x in e] for j in range(13)]}
    return None


def find_k5(M: HeubergerMatrix) -> dict | None:
    """A 5-clique in the finite quotient, or along a generator of order 5."""
    adj = _Adjacency(M)
    for i in range(M.m):
        e = [int(a == i) for a in range(M.m)]
        if adj.in_h(e) or not adj.in_h([5 * x for x in e]):
            continue
        vs = [[j * x for x in e] for j in range(5)]
        if all(adj.adjacent(vs[a], vs[b]) for a in range(5) for b in range(a)):
            return {"vertices": vs}
    try:
        G = finite_quotient_graph(M, cap=5000)
    except (ValueError, CapExceeded):
        return None
    nbs = [set(a) for a in G.adjacency]

    def grow(clique, cand):
        if len(clique) == 5:
            return clique
        for v in sorted(cand):
            r = grow(clique + [v], {w for w in cand & nbs[v] if w > v})
            if r:
                return r
        return None

    cl = grow([], set(range(G.order)))
    if cl is None:
        return None
    return {"vertices": [list(G.labels[v]) for v in cl]}


def build_certificate(M: HeubergerMatrix, v: Verdict) -> Certificate:
    rows = M.rows
    if v.status == LOOPS:
        w = loop_witness(M)
        if w is None:
            raise CertificateError("verdict says loops but no generator lies in H")
        return Certificate(LOOP_WITNESS, {"generator": w[0], "coefficients": w[1]}, rows, None)
    if v.status != CHROMATIC:
        raise CertificateError(f"no certificate for verdict {v.status}")
    k = v.chi
    if k == 2:
        data = {"functional": [1] * M.m, "modulus": 2, "table": [0, 1]}
        return Certificate(BIPARTITION, data, rows, 2)
    data = None
    if v.rule == "Thm-m2-case4":
        data = _circulant_coloring(M, v)
    if data is None:
        data = periodic_coloring(M, k)
    attach = []
    if k == 5:
        w = find_k5(M)
        if w is None:
            raise CertificateError("no K5 found for a five-chromatic verdict")
        attach.append(Certificate(K5_EMBEDDING, w, rows, 5))
    elif k == 4:
        c = v.circulant
        order = (C13_EMBEDDING, LANYARD) if c is not None and abs(c.n) == 13 else (LANYARD, C13_EMBEDDING)
        for kind in order:
            w = find_c13(M) if kind == C13_EMBEDDING else find_lanyard(M)
            if w is not None:
                attach.append(Certificate(kind, w, rows, 4))
                break
        else:
            raise CertificateError("no lanyard or C13(1,5) found for a four-chromatic verdict")
    return Certificate(COLORING, data, rows, k, tuple(attach))


# ---------------------------------------------------------------------------
# row-combining homomorphisms

@dataclass(frozen=True)
class RowCombine:
    """Replace row i by row i + sign * row j and delete row j."""

    i: int
    j: int
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")


def hom_chain(M: HeubergerMatrix, plan: Sequence[RowCombine]) -> tuple[HeubergerMatrix, list[list[int]]]:
    """Apply row combinations; return the target matrix and the map A with M' = A M.

    A sends each e_i to a signed generator, so it is a graph homomorphism
    and colourings of the target pull back along it.
    """
    rows = [list(r) for r in M.rows]
    A = [[int(a == b) for b in range(M.m)] for a in range(M.m)]
    for st in plan:
        m = len(rows)
        if not (0 <= st.i < m and 0 <= st.j < m) or st.i == st.j:
            raise IndexError(f"bad row indices {st.i}, {st.j} for {m} rows")
        rows[st.i] = [a + st.sign * b for a, b in zip(rows[st.i], rows[st.j])]
        A[st.i] = [a + st.sign * b for a, b in zip(A[st.i], A[st.j])]
        del rows[st.j], A[st.j]
    return HeubergerMatrix.from_rows(rows), A


def pull_back(data: dict, A: Sequence[Sequence[int]]) -> dict:
    """A periodic colouring of the target composed with A."""
    n = data["modulus"]
    phi = [x % n for x in matmul([data["functional"]], A)[0]]
    return {"functional": phi, "modulus": n, "table": list(data["table"])}
