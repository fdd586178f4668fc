"""Explicit Cayley graphs: finite quotients of Z^m/H, circulants, and BFS balls."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .classify import CirculantSpec
from .intmat import HeubergerMatrix, matvec, smith_normal_form

DEFAULT_BALL_CAP = 200_000
DEFAULT_QUOTIENT_CAP = 2_000_000


class InfiniteQuotient(ValueError):
    pass


class CapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class FiniteGraph:
    order: int
    adjacency: tuple[tuple[int, ...], ...]
    labels: tuple[tuple[int, ...], ...] | None = None
    has_loops: bool = False
    loop_vertices: tuple[int, ...] = ()

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.order) for v in self.adjacency[u] if u < v]

    def num_edges(self) -> int:
        return sum(len(n) for n in self.adjacency) // 2

    def adjacent(self, u: int, v: int) -> bool:
        return v in self._adjsets[u]

    @property
    def _adjsets(self) -> list[frozenset]:
        cache = self.__dict__.get("_adj_cache")
        if cache is None:
            cache = [frozenset(n) for n in self.adjacency]
            object.__setattr__(self, "_adj_cache", cache)
        return cache

    def induced(self, vertices: Sequence[int]) -> "FiniteGraph":
        idx = {v: i for i, v in enumerate(vertices)}
        adj = tuple(
            tuple(sorted(idx[w] for w in self.adjacency[v] if w in idx)) for v in vertices
        )
        labels = tuple(self.labels[v] for v in vertices) if self.labels else None
        return FiniteGraph(len(vertices), adj, labels)

    def to_edge_list(self) -> str:
        lines = [str(self.order)] + [f"{u} {v}" for u, v in self.edges()]
        return "\n".join(lines) + "\n"


def from_edges(n: int, edges, labels=None) -> FiniteGraph:
    nb = [set() for _ in range(n)]
    loops = set()
    for u, v in edges:
        if u == v:
            loops.add(u)
        else:
            nb[u].add(v)
            nb[v].add(u)
    return FiniteGraph(
        n, tuple(tuple(sorted(s)) for s in nb), labels, bool(loops), tuple(sorted(loops))
    )


class CosetCoordinates:
    """Canonical coordinates of Z^m/H from a Smith decomposition.

    A vector v maps to w = U v; torsion coordinates are reduced into
    [0, d_i) and coordinates past the rank stay as exact integers.
    """

    def __init__(self, M: HeubergerMatrix):
        self.M = M
        self.snf = snf = smith_normal_form(M)
        self.m = M.m
        diag = snf.diagonal
        self.rank = snf.rank
        self.torsion = [(i, diag[i]) for i in range(self.rank) if diag[i] > 1]
        self.free = list(range(self.rank, self.m))
        self.gen_images = [self.key([int(i == j) for j in range(self.m)]) for i in range(self.m)]

    def key(self, v: Sequence[int]) -> tuple[int, ...]:
        w = matvec(self.snf.U, v)
        return tuple(w[i] % d for i, d in self.torsion) + tuple(w[i] for i in self.free)

    def add(self, k: tuple[int, ...], g: tuple[int, ...], sign: int = 1) -> tuple[int, ...]:
        t = len(self.torsion)
        out = [(k[i] + sign * g[i]) % self.torsion[i][1] for i in range(t)]
        out += [k[i] + sign * g[i] for i in range(t, len(k))]
        return tuple(out)

    def representative(self, k: tuple[int, ...]) -> tuple[int, ...]:
        w = [0] * self.m
        t = len(self.torsion)
        for (i, _), x in zip(self.torsion, k[:t]):
            w[i] = x
        for i, x in zip(self.free, k[t:]):
            w[i] = x
        return tuple(matvec(self.snf.U_inv, w))

    @property
    def zero(self) -> tuple[int, ...]:
        return (0,) * (len(self.torsion) + len(self.free))


def _augment(M: HeubergerMatrix, extra_columns) -> HeubergerMatrix:
    if not extra_columns:
        return M
    cols = list(M.columns())
    for c in extra_columns:
        c = tuple(int(x) for x in c)
        if len(c) != M.m:
            raise ValueError(f"extra column {c} has wrong length for {M.m} rows")
        cols.append(c)
    return HeubergerMatrix.from_columns(cols)


def finite_quotient_graph(
    M: HeubergerMatrix, extra_columns=None, cap: int = DEFAULT_QUOTIENT_CAP
) -> FiniteGraph:
    """Cayley graph of Z^m/H' with generators +-e_i, H' the augmented span."""
    A = _augment(M, extra_columns)
    cc = CosetCoordinates(A)
    if cc.free:
        raise InfiniteQuotient(f"column span of {A} has rank {cc.rank} < {A.m}")
    radices = [d for _, d in cc.torsion]
    order = 1
    for d in radices:
        order *= d
    if order > cap:
        raise CapExceeded(f"quotient order {order} exceeds cap {cap}")

    def index(k):
        x = 0
        for ki, d in zip(k, radices):
            x = x * d + ki
        return x

    def unindex(x):
        out = []
        for d in reversed(radices):
            out.append(x % d)
            x //= d
        return tuple(reversed(out))

    keys = [unindex(x) for x in range(order)]
    gens = {g for g in cc.gen_images}
    loops = any(not any(g) for g in gens)
    nb = []
    for k in keys:
        s = set()
        for g in gens:
            if any(g):
                s.add(index(cc.add(k, g, 1)))
                s.add(index(cc.add(k, g, -1)))
        nb.append(tuple(sorted(s)))
    labels = tuple(cc.representative(k) for k in keys)
    return FiniteGraph(order, tuple(nb), labels, loops, tuple(range(order)) if loops else ())


def circulant_graph(c: CirculantSpec) -> FiniteGraph:
    n = abs(c.n)
    steps = {c.a % n, -c.a % n, c.b % n, -c.b % n}
    adj = tuple(tuple(sorted((i + s) % n for s in steps)) for i in range(n))
    return FiniteGraph(n, adj, tuple((i,) for i in range(n)))


def circulant_matrix(c: CirculantSpec) -> HeubergerMatrix:
    """Lower-triangular basis of the kernel of (x, y) -> a x + b y mod |n|."""
    n, a, b = abs(c.n), c.a, c.b
    g = math.gcd(b, n)
    y22 = n // g
    y11 = g // math.gcd(g, a)
    # b y = -a y11 (mod n) is solvable because g divides a y11
    t = (-a * y11) % n
    y = (t // g) * pow(b // g, -1, n // g) % (n // g) if n // g > 1 else 0
    return HeubergerMatrix.from_rows([[y11, 0], [y % y22, y22]])


@dataclass(frozen=True)
class BallSpec:
    radius: int
    center: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("radius must be nonnegative")


def bfs_ball(M: HeubergerMatrix, spec: BallSpec | int, cap: int = DEFAULT_BALL_CAP) -> FiniteGraph:
    """Induced subgraph on the cosets within graph distance ``radius``.

    Vertices come in BFS discovery order with neighbours expanded in sorted
    key order, so the ball of radius r is a prefix of the ball of radius r+1.
    Labels are coset representatives in Z^m.
    """
    if isinstance(spec, int):
        spec = BallSpec(spec)
    cc = CosetCoordinates(M)
    if cc.rank < M.r:
        raise ValueError("columns are linearly dependent over Q")
    start = cc.key(spec.center) if spec.center is not None else cc.zero
    moves = sorted({cc.add(cc.zero, g, s) for g in cc.gen_images for s in (1, -1)} - {cc.zero})
    loops = any(not any(g) for g in cc.gen_images)
    index = {start: 0}
    order = [start]
    dist = [0]
    queue = deque([0])
    while queue:
        v = queue.popleft()
        if dist[v] == spec.radius:
            continue
        k = order[v]
        for nk in sorted(cc.add(k, g) for g in moves):
            if nk not in index:
                if len(order) >= cap:
                    raise CapExceeded(f"ball exceeds {cap} vertices")
                index[nk] = len(order)
                order.append(nk)
                dist.append(dist[v] + 1)
                queue.append(index[nk])
    nb = []
    for k in order:
        nb.append(tuple(sorted({index[nk] for g in moves if (nk := cc.add(k, g)) in index})))
    labels = tuple(cc.representative(k) for k in order)
    lv = tuple(range(len(order))) if loops else ()
    return FiniteGraph(len(order), tuple(nb), labels, loops, lv)
