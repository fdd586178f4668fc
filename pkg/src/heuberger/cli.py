"""Command-line front end: classify, normalize, oracle, verify, sweep, export."""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor

from .cayley import (
    CapExceeded,
    InfiniteQuotient,
    bfs_ball,
    circulant_graph,
    circulant_matrix,
    finite_quotient_graph,
)
from .certify import Certificate, CertificateError, build_certificate, verify_certificate
from .classify import (
    UNSUPPORTED,
    CirculantSpec,
    chi_1xr,
    chi_2x2,
    chi_3x2_minors,
    chi_3x2_mhnf,
    circulant_chi,
    classify,
)
from .intmat import HeubergerMatrix, MatrixParseError, columns_dependent, parse_matrix
from .normalform import mhnf_3x2, reduce
from .oracle import (
    DEFAULT_MODULI,
    DEFAULT_RADIUS,
    chi_bounds_infinite,
    exact_chi,
    has_loops,
    reference_verdict,
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_PARSE = 2
EXIT_CAP = 3
EXIT_MISMATCH = 4

WORKERS_ENV = "HEUBERGER_WORKERS"


class UsageError(ValueError):
    pass


def _emit(doc, out=None) -> None:
    (out or sys.stdout).write(json.dumps(doc, sort_keys=False) + "\n")


def _read_matrix(args) -> HeubergerMatrix:
    sources = [s for s in (args.matrix, args.file) if s is not None]
    if len(sources) > 1:
        raise UsageError("give exactly one of -m/--matrix and -f/--file")
    if args.matrix is not None:
        return parse_matrix(args.matrix)
    if args.file is not None:
        with open(args.file, encoding="utf-8") as fh:
            return parse_matrix(fh.read())
    return parse_matrix(sys.stdin.read())


def _parse_moduli(text: str | None):
    if text is None:
        return DEFAULT_MODULI
    out = []
    for part in text.replace(" ", "").split(","):
        if not part:
            continue
        if ".." in part or "-" in part[1:]:
            lo, hi = part.split("..") if ".." in part else part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    if not out or any(n <= 0 for n in out):
        raise UsageError(f"bad moduli list {text!r}")
    return tuple(out)


def _workers(args) -> int:
    if getattr(args, "workers", None):
        return max(1, args.workers)
    env = os.environ.get(WORKERS_ENV)
    return max(1, int(env)) if env and env.isdigit() else 1


# ---------------------------------------------------------------------------
# subcommands

def cmd_classify(args) -> int:
    M = _read_matrix(args)
    red = reduce(M)
    v = classify(M, red)
    doc = v.to_json()
    doc["normal_form"] = red.matrix.tolist()
    doc["shape_class"] = red.shape_class
    doc["transcript"] = red.transcript.to_json()
    if v.status == UNSUPPORTED and args.bounds:
        doc["oracle"] = reference_verdict(M, args.radius, _parse_moduli(args.moduli)).to_json()
    if args.certificate and v.status != UNSUPPORTED:
        doc["certificate"] = build_certificate(M, v).to_json()
    _emit(doc)
    return EXIT_OK


def cmd_normalize(args) -> int:
    M = _read_matrix(args)
    red = reduce(M)
    _emit(
        {
            "matrix": red.matrix.tolist(),
            "shape_class": red.shape_class,
            "deleted_zero_rows": red.deleted_zero_rows,
            "transcript": red.transcript.to_json(),
        }
    )
    return EXIT_OK


def cmd_oracle(args) -> int:
    M = _read_matrix(args)
    extra = [json.loads(c) if c.startswith("[") else [int(x) for x in c.split(",")] for c in args.extra]
    if args.exact or extra:
        G = finite_quotient_graph(M, extra or None)
        doc = {"order": G.order, "has_loops": G.has_loops}
        if not G.has_loops:
            doc["exact_chi"] = exact_chi(G)
        _emit(doc)
        return EXIT_OK
    if has_loops(M):
        _emit({"status": "Loops"})
        return EXIT_OK
    b = chi_bounds_infinite(M, args.radius, _parse_moduli(args.moduli))
    _emit({"bounds": b.to_json()})
    return EXIT_OK


def cmd_verify(args) -> int:
    text = None
    if args.file is not None:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    elif args.certificate_json is not None:
        text = args.certificate_json
    else:
        text = sys.stdin.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixParseError(f"certificate is not JSON: {exc}") from exc
    if isinstance(doc, dict) and "certificate" in doc:
        doc = doc["certificate"]
    try:
        cert = Certificate.from_json(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise MatrixParseError(f"malformed certificate: {exc}") from exc
    M = parse_matrix(args.matrix) if args.matrix else HeubergerMatrix.from_rows(cert.matrix)
    res = verify_certificate(M, cert)
    _emit(res.to_json())
    return EXIT_OK if res else EXIT_INVALID


# ---------------------------------------------------------------------------
# sweeps

def circulant_family(max_n: int):
    for n in range(2, max_n + 1):
        for sign in (1, -1):
            for a in range(n):
                for b in range(n):
                    try:
                        yield CirculantSpec(sign * n, a, b)
                    except ValueError:
                        continue


def lower2x2_family(bound: int):
    for y11 in range(bound + 1):
        for y21 in range(-bound, bound + 1):
            for y22 in range(bound + 1):
                yield HeubergerMatrix.from_rows([[y11, 0], [y21, y22]])


def random3x2_family(count: int, bound: int, seed: int):
    rng = random.Random(seed)
    made = 0
    while made < count:
        rows = [[rng.randint(-bound, bound) for _ in range(2)] for _ in range(3)]
        M = HeubergerMatrix.from_rows(rows)
        if any(r == (0, 0) for r in M.rows) or columns_dependent(M):
            continue
        made += 1
        yield M


def check_circulant(c: CirculantSpec, cache: dict | None = None) -> dict:
    k = circulant_chi(c)
    G = circulant_graph(c)
    key = (abs(c.n), frozenset(G.adjacency[0]))
    if cache is not None and key in cache:
        truth = cache[key]
    else:
        truth = exact_chi(G)
        if cache is not None:
            cache[key] = truth
    return {
        "circulant": c.to_json(),
        "matrix": circulant_matrix(c).tolist(),
        "classifier": {"status": "Chromatic", "chi": k},
        "oracle": {"status": "Chromatic", "chi": truth},
        "agree": k == truth,
    }


def truth_2x2(M: HeubergerMatrix, radius: int = DEFAULT_RADIUS, moduli=DEFAULT_MODULI) -> dict:
    """Ground truth for a lower-triangular 2 x 2 matrix.

    Loops by membership; nonzero determinant by the exact chromatic number
    of the finite quotient; a zero top row by the 1 x r rule applied to the
    bottom row; a zero second column by the infinite-graph bounds.
    """
    if has_loops(M):
        return {"status": "Loops", "chi": None, "source": "membership"}
    (y11, _), (y21, y22) = M.rows
    if y11 * y22 != 0:
        G = finite_quotient_graph(M)
        return {"status": "Chromatic", "chi": exact_chi(G), "source": "quotient", "order": G.order}
    if y11 == 0:
        v = chi_1xr((y21, y22))
        return {"status": v.status, "chi": v.chi, "source": "row"}
    # the relation y11 e1 + y21 e2 closes a cycle of length |y11| + |y21|
    radius = max(radius, (abs(y11) + abs(y21)) // 2 + 1)
    b = chi_bounds_infinite(HeubergerMatrix.from_rows([[y11], [y21]]), radius, moduli)
    return {
        "status": "Chromatic",
        "chi": b.lower if b.collapsed else None,
        "source": "bounds",
        "bounds": [b.lower, b.upper],
    }


def check_lower2x2(M: HeubergerMatrix) -> dict:
    v = chi_2x2(M)
    t = truth_2x2(M)
    return {
        "matrix": M.tolist(),
        "classifier": v.to_json(),
        "oracle": t,
        "agree": (v.status, v.chi) == (t["status"], t["chi"]),
    }


def check_random3x2(M: HeubergerMatrix, radius: int = DEFAULT_RADIUS, moduli=DEFAULT_MODULI) -> dict:
    N, _ = mhnf_3x2(M)
    v = chi_3x2_mhnf(N)
    doc = {"matrix": M.tolist(), "mhnf": N.tolist(), "classifier": v.to_json()}
    if v.status == "Loops":
        doc["oracle"] = {"status": "Loops" if has_loops(M) else "Chromatic"}
        doc["agree"] = has_loops(M)
        return doc
    w = chi_3x2_minors(M)
    b = chi_bounds_infinite(M, radius, moduli)
    doc["minors"] = w.to_json()
    doc["oracle"] = {"bounds": [b.lower, b.upper]}
    doc["agree"] = w.key() == v.key() and (not b.collapsed or b.lower == v.chi)
    return doc


def _sweep_items(args):
    if args.family == "circulant":
        return list(circulant_family(args.max_n))
    if args.family == "lower2x2":
        return list(lower2x2_family(args.bound))
    return list(random3x2_family(args.count, args.bound, args.seed))


def _check(item):
    if isinstance(item, CirculantSpec):
        return check_circulant(item, _CIRC_CACHE)
    if item.m == 2:
        return check_lower2x2(item)
    return check_random3x2(item)


_CIRC_CACHE: dict = {}


def cmd_sweep(args) -> int:
    items = _sweep_items(args)
    workers = _workers(args)
    bad = 0
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            results = ex.map(_check, items, chunksize=64)
            for doc in results:
                bad += not doc["agree"]
                _emit(doc)
    else:
        for doc in map(_check, items):
            bad += not doc["agree"]
            _emit(doc)
    sys.stderr.write(f"{len(items)} items, {bad} disagreements\n")
    return EXIT_MISMATCH if bad else EXIT_OK


def cmd_export(args) -> int:
    M = _read_matrix(args)
    try:
        G = finite_quotient_graph(M)
    except InfiniteQuotient:
        G = bfs_ball(M, args.radius)
    text = G.to_edge_list()
    if args.export:
        with open(args.export, "w", encoding="utf-8") as fh:
            fh.write(text)
        _emit({"order": G.order, "edges": G.num_edges(), "path": args.export})
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="heuberger",
        description="Chromatic numbers of abelian Cayley graphs given by integer matrices.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def matrix_opts(sp):
        sp.add_argument("-m", "--matrix", help='inline matrix, e.g. "1 0; 0 1; 2 6"')
        sp.add_argument("-f", "--file", help="read the matrix (text or JSON) from a file")

    def oracle_opts(sp):
        sp.add_argument("--radius", type=int, default=DEFAULT_RADIUS, help="BFS ball radius")
        sp.add_argument("--moduli", help="quotient moduli, e.g. 6..24 or 9,12,15")

    sp = sub.add_parser("classify", help="closed-form verdict")
    matrix_opts(sp)
    oracle_opts(sp)
    sp.add_argument("--certificate", action="store_true", help="attach a checkable certificate")
    sp.add_argument("--bounds", action="store_true", help="oracle bounds for unsupported shapes")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("normalize", help="reduced matrix and operation transcript")
    matrix_opts(sp)
    sp.set_defaults(func=cmd_normalize)

    sp = sub.add_parser("oracle", help="brute-force ground truth")
    matrix_opts(sp)
    oracle_opts(sp)
    sp.add_argument("--exact", action="store_true", help="exact chi of the finite quotient")
    sp.add_argument(
        "--extra", action="append", default=[], help="extra column for the quotient, e.g. 9,0,0"
    )
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("verify", help="check a certificate (or classify output)")
    sp.add_argument("-f", "--file", help="JSON file; stdin when omitted")
    sp.add_argument("-m", "--matrix", help="check against this matrix instead of the embedded one")
    sp.add_argument("--certificate-json", help="certificate JSON given inline")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("sweep", help="JSON-lines cross-check over a family")
    sp.add_argument("--family", choices=("circulant", "lower2x2", "random3x2"), default="circulant")
    sp.add_argument("--max-n", type=int, default=30)
    sp.add_argument("--bound", type=int, default=None, help="entry bound (12 for lower2x2, 6 for random3x2)")
    sp.add_argument("--count", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--workers", type=int, default=None)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("export", help="edge list of the quotient (or a ball)")
    matrix_opts(sp)
    sp.add_argument("--radius", type=int, default=DEFAULT_RADIUS)
    sp.add_argument("--export", help="output path; stdout when omitted")
    sp.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "family", None) and args.bound is None:
        args.bound = 6 if args.family == "random3x2" else 12
    try:
        return args.func(args)
    except (MatrixParseError, UsageError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    except CapExceeded as exc:
        sys.stderr.write(f"cap exceeded: {exc}\n")
        return EXIT_CAP
    except CertificateError as exc:
        sys.stderr.write(f"cross-check failed: {exc}\n")
        return EXIT_MISMATCH
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
