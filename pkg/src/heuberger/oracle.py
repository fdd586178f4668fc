"""Exact brute-force colouring facts for finite graphs, and two-sided bounds
on the chromatic number of the infinite 3 x 2 graphs."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .cayley import (
    CapExceeded,
    FiniteGraph,
    InfiniteQuotient,
    bfs_ball,
    finite_quotient_graph,
)
from .intmat import HeubergerMatrix, lattice_basis, smith_normal_form, solve_in_lattice

DEFAULT_NODE_CAP = 5_000_000
DEFAULT_INDEPENDENCE_CAP = 64
DEFAULT_RADIUS = 7
DEFAULT_MODULI = tuple(range(6, 25))


class LoopsPresent(ValueError):
    pass


def _require_loop_free(G: FiniteGraph) -> None:
    if G.has_loops:
        raise LoopsPresent("graph has loops; no proper colouring exists")


def verify_coloring(G: FiniteGraph, coloring, k: int | None = None) -> bool:
    if len(coloring) != G.order or G.has_loops:
        return False
    if k is not None and any(not 0 <= c < k for c in coloring):
        return False
    return all(coloring[u] != coloring[v] for u, v in G.edges())


def k_colorable(G: FiniteGraph, k: int, node_cap: int = DEFAULT_NODE_CAP) -> list[int] | None:
    """A proper k-colouring of G, or None when there is none.

    Backtracking on the vertex with the fewest colours left (ties: most
    uncoloured neighbours, then lowest index), forward checking with
    propagation of forced colours, and at most one fresh colour per branch.
    """
    _require_loop_free(G)
    n = G.order
    if n == 0:
        return []
    if k <= 0:
        return None
    adj = G.adjacency
    full = (1 << k) - 1
    dom = [full] * n
    color = [-1] * n
    trail: list[tuple[int, int]] = []  # (vertex, previous domain); vertex < 0 undoes a colour
    nodes = 0

    def assign(v: int, c: int) -> bool:
        # colour v with c and propagate forced colours; False on a wipe-out
        pending = [(v, c)]
        while pending:
            v, c = pending.pop()
            if color[v] >= 0:
                if color[v] != c:
                    return False
                continue
            color[v] = c
            trail.append((-1 - v, 0))
            bit = 1 << c
            for w in adj[v]:
                if color[w] == c:
                    return False
                d = dom[w]
                if color[w] < 0 and d & bit:
                    trail.append((w, d))
                    d &= ~bit
                    dom[w] = d
                    if not d:
                        return False
                    if d & (d - 1) == 0:
                        pending.append((w, d.bit_length() - 1))
        return True

    def undo(mark: int) -> None:
        while len(trail) > mark:
            v, d = trail.pop()
            if v < 0:
                color[-1 - v] = -1
            else:
                dom[v] = d

    def pick() -> int:
        best, bkey = -1, None
        for v in range(n):
            if color[v] < 0:
                size = bin(dom[v]).count("1")
                key = (size, -sum(1 for w in adj[v] if color[w] < 0), v)
                if bkey is None or key < bkey:
                    best, bkey = v, key
                    if size == 1:
                        break
        return best

    def choices(v: int) -> list[int]:
        used = 0
        for c in color:
            if c >= 0:
                used |= 1 << c
        out, fresh = [], False
        for c in range(k):
            if dom[v] >> c & 1:
                if used >> c & 1:
                    out.append(c)
                elif not fresh:
                    out.append(c)
                    fresh = True
        return out

    # frames: (vertex, remaining choices, trail mark)
    stack: list[tuple[int, list[int], int]] = []
    v = pick()
    stack.append((v, choices(v), len(trail)))
    while stack:
        v, rest, mark = stack[-1]
        undo(mark)
        if not rest:
            stack.pop()
            continue
        c = rest.pop(0)
        nodes += 1
        if nodes > node_cap:
            raise CapExceeded(f"colouring search exceeded {node_cap} nodes")
        if not assign(v, c):
            continue
        if all(x >= 0 for x in color):
            return list(color)
        w = pick()
        stack.append((w, choices(w), len(trail)))
    return None


def greedy_clique(G: FiniteGraph) -> list[int]:
    best: list[int] = []
    sets = [set(a) for a in G.adjacency]
    for s in sorted(range(G.order), key=lambda v: (-len(sets[v]), v)):
        clique, cand = [s], set(sets[s])
        while cand:
            v = min(cand, key=lambda x: (-len(sets[x] & cand), x))
            clique.append(v)
            cand &= sets[v]
        if len(clique) > len(best):
            best = clique
    return best


def exact_chi(G: FiniteGraph, node_cap: int = DEFAULT_NODE_CAP) -> int:
    _require_loop_free(G)
    if G.order == 0:
        raise ValueError("empty graph")
    k = max(1, len(greedy_clique(G)))
    while k_colorable(G, k, node_cap) is None:
        k += 1
    return k


def exact_coloring(G: FiniteGraph, node_cap: int = DEFAULT_NODE_CAP) -> list[int]:
    k = exact_chi(G, node_cap)
    return k_colorable(G, k, node_cap)


def independence_number(G: FiniteGraph, cap: int = DEFAULT_INDEPENDENCE_CAP) -> int:
    """Maximum independent set size by branch and bound on bitsets."""
    if G.order > cap:
        raise CapExceeded(f"independence number needs order <= {cap}, got {G.order}")
    nb = [0] * G.order
    for v in range(G.order):
        for w in G.adjacency[v]:
            nb[v] |= 1 << w
    best = 0

    def go(P: int, size: int) -> None:
        nonlocal best
        if not P:
            best = max(best, size)
            return
        if size + bin(P).count("1") <= best:
            return
        # take isolated vertices for free; otherwise branch on max degree
        v, deg = -1, -1
        x = P
        while x:
            low = x & -x
            u = low.bit_length() - 1
            x ^= low
            d = bin(nb[u] & P).count("1")
            if d == 0:
                go(P & ~low, size + 1)
                return
            if d > deg:
                v, deg = u, d
        go(P & ~(nb[v] | 1 << v), size + 1)
        go(P & ~(1 << v), size)

    go((1 << G.order) - 1, 0)
    return best


# ---------------------------------------------------------------------------
# infinite graphs

@dataclass(frozen=True)
class ChiBounds:
    lower: int
    upper: int
    lower_evidence: dict = field(default_factory=dict)
    upper_evidence: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 1 <= self.lower <= self.upper:
            raise ValueError(f"inconsistent bounds {self.lower} > {self.upper}")

    @property
    def collapsed(self) -> bool:
        return self.lower == self.upper

    def to_json(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "lower_evidence": self.lower_evidence,
            "upper_evidence": self.upper_evidence,
        }


def has_loops(M: HeubergerMatrix) -> bool:
    snf = smith_normal_form(M)
    return any(
        solve_in_lattice(M, [int(i == j) for j in range(M.m)], snf) is not None for i in range(M.m)
    )


def _distances(G: FiniteGraph) -> list[int]:
    dist = [-1] * G.order
    dist[0] = 0
    q = deque([0])
    while q:
        v = q.popleft()
        for w in G.adjacency[v]:
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                q.append(w)
    return dist


def _quotients(M: HeubergerMatrix, moduli, cap: int):
    # extra columns N e_j, taking directions in order until the span is full
    out = []
    base = smith_normal_form(M).rank
    for N in moduli:
        extra, rk = [], base
        for j in range(M.m):
            if rk == M.m:
                break
            col = tuple(N * int(i == j) for i in range(M.m))
            r2 = smith_normal_form(HeubergerMatrix.from_columns(list(M.columns()) + extra + [col])).rank
            if r2 > rk:
                extra.append(col)
                rk = r2
        try:
            Q = finite_quotient_graph(M, extra, cap=cap)
        except (InfiniteQuotient, CapExceeded):
            continue
        if not Q.has_loops:
            dirs = [next(i for i, x in enumerate(c) if x) for c in extra]
            out.append((Q.order, N, dirs, Q))
    out.sort(key=lambda t: (t[0], t[1]))
    return out


def chi_bounds_infinite(
    M: HeubergerMatrix,
    radius: int = DEFAULT_RADIUS,
    moduli=DEFAULT_MODULI,
    node_cap: int = DEFAULT_NODE_CAP,
    quotient_cap: int = 20_000,
) -> ChiBounds:
    """Two-sided bounds on chi(X).

    Lower: largest k + 1 with a ball (radius <= ``radius``) that is not
    k-colourable.  Upper: least k such that some finite quotient by an
    extra column N e_j is k-colourable; enlarging H is a homomorphism, so
    colourings pull back.  The degree bound 2m + 1 backs the upper side.
    """
    if smith_normal_form(M).rank < M.r:
        raise ValueError("columns are linearly dependent over Q")
    if has_loops(M):
        raise LoopsPresent(f"{M} has loops")
    ball = bfs_ball(M, radius)
    dist = _distances(ball)
    layers = sorted(set(dist))

    quotients = _quotients(M, moduli, quotient_cap)

    def quotient_colorable(k):
        for order, N, dirs, Q in quotients:
            try:
                if k_colorable(Q, k, node_cap) is not None:
                    return {"kind": "quotient", "modulus": N, "directions": dirs, "order": order}
            except CapExceeded:
                continue
        return None

    def ball_refutes(k, r0):
        for r in layers[layers.index(r0):]:
            sub = ball.induced([v for v in range(ball.order) if dist[v] <= r])
            if k_colorable(sub, k, node_cap) is None:
                return r
        return None

    # raise the lower bound until a quotient meets it or the balls run out
    lower, lev = 2, {"kind": "edge"}
    upper, uev = 2 * M.m + 1, {"kind": "degree"}
    r0 = 0
    k = 2
    while k <= 2 * M.m:
        ev = quotient_colorable(k)
        if ev is not None:
            upper, uev = k, ev
            break
        r = ball_refutes(k, r0)
        if r is None:
            break
        lower, lev, r0 = k + 1, {"kind": "ball", "radius": r, "not_colorable_with": k}, r
        k += 1
    else:
        k = 2 * M.m + 1
    if upper == 2 * M.m + 1:
        for kk in range(k + 1, 2 * M.m + 1):
            ev = quotient_colorable(kk)
            if ev is not None:
                upper, uev = kk, ev
                break
    return ChiBounds(lower, upper, lev, uev)


@dataclass(frozen=True)
class Reference:
    """Ground truth from explicit graphs: loops, an exact value, or bounds."""

    status: str
    chi: int | None = None
    bounds: ChiBounds | None = None

    def key(self) -> tuple:
        if self.bounds is not None and not self.bounds.collapsed:
            return ("Bounds", (self.bounds.lower, self.bounds.upper))
        return (self.status, self.chi)

    def consistent_with(self, status: str, chi: int | None) -> bool:
        if self.status == "Loops" or status == "Loops":
            return self.status == status
        if self.bounds is not None:
            return chi is not None and self.bounds.lower <= chi <= self.bounds.upper
        return chi == self.chi

    def to_json(self) -> dict:
        d = {"status": self.status, "chi": self.chi}
        if self.bounds is not None:
            d["bounds"] = self.bounds.to_json()
        return d


def reference_verdict(
    M: HeubergerMatrix,
    radius: int = DEFAULT_RADIUS,
    moduli=DEFAULT_MODULI,
    node_cap: int = DEFAULT_NODE_CAP,
) -> Reference:
    """Loops by membership; exact chi on finite quotients; bounds otherwise."""
    if has_loops(M):
        return Reference("Loops")
    snf = smith_normal_form(M)
    if snf.rank == M.m:
        return Reference("Chromatic", exact_chi(finite_quotient_graph(M), node_cap))
    basis = lattice_basis(M)
    if basis is None:
        # H = 0: the integer lattice Z^m itself is bipartite
        return Reference("Chromatic", 2)
    b = chi_bounds_infinite(basis, radius, moduli, node_cap)
    return Reference("Chromatic", b.lower if b.collapsed else None, b)
