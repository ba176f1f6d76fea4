"""Brute-force oracles, golden counterexamples, conjecture sweeps and Hecke counts.

Everything here is deliberately independent of the constructive code paths:
searches enumerate lattice points coordinate by coordinate and only use ring
arithmetic, so they can cross-check the extension algorithms.
"""

from __future__ import annotations

import json
import math
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Optional

from .errors import BudgetExceeded, IcubeError, NonSplitPrime
from .hermitian import HermForm2, build_orthoregular
from .icube import (
    IcubeMatrix,
    extend3,
    extend3_with_snf,
    extend4,
    extend4_with_snf,
    necessary_conditions,
    pairing_column,
    snf4_hypothesis,
    verify,
)
from .lattice import as_matrix, columns, cross_product, from_columns, kernel_basis, matrix_ring, snf
from .quat import Quat, lipschitz_left_divisor
from .ring import (
    GaussInt,
    Ring,
    absolute_sqrt,
    coerce,
    conj,
    divides,
    exact_div,
    factor_int,
    gcd_many,
    is_sum_k_squares,
    norm,
    normalize,
    split_prime,
    two_squares,
    two_squares_bruteforce,
)
from .textio import format_matrix

DEFAULT_MAX_NODES = int(os.environ.get("ICUBES_MAX_NODES", "5000000"))


def _max_nodes(value: Optional[int]) -> int:
    return DEFAULT_MAX_NODES if value is None else value


# ---------------------------------------------------------------------------
# ring elements by norm


@lru_cache(maxsize=None)
def _elements_up_to(ring: Ring, bound: int) -> tuple:
    """All elements of norm <= bound, sorted by (norm, value)."""
    r = math.isqrt(bound)
    if ring is Ring.Z:
        out = [x for x in range(-r, r + 1)]
        out.sort(key=lambda x: (x * x, x))
        return tuple(out)
    out = [GaussInt(a, b) for a in range(-r, r + 1) for b in range(-r, r + 1) if a * a + b * b <= bound]
    out.sort(key=lambda z: (z.norm(), z.re, z.im))
    return tuple(out)


@lru_cache(maxsize=None)
def _elements_of_norm(ring: Ring, n: int) -> tuple:
    return tuple(x for x in _elements_up_to(ring, n) if norm(x) == n)


def _sort_key(v) -> tuple:
    out = []
    for x in v:
        if isinstance(x, GaussInt):
            out += [x.re, x.im]
        else:
            out.append(x)
    return tuple(out)


# ---------------------------------------------------------------------------
# sphere enumeration


@dataclass(frozen=True)
class OrthogonalEnumeration:
    """All ``w`` with ``|w|^2 == lam`` orthogonal to every column of ``A0``."""

    A0: tuple
    lam: int
    ring: Ring
    vectors: tuple
    complete: bool = True

    def __len__(self):
        return len(self.vectors)


def enumerate_orthogonal(A0, lam: Optional[int] = None, ring: Optional[Ring] = None,
                         max_nodes: Optional[int] = None,
                         limit: Optional[int] = None) -> OrthogonalEnumeration:
    """Depth-first enumeration over coordinates with remaining-norm pruning.

    ``A0`` is an n x k matrix (k may be 0 when given as ``(n, [])``) or a
    single vector.  The last coordinate is solved from an orthogonality
    constraint whenever some column is nonzero there.  With ``limit`` the
    search stops early and the result is marked incomplete.
    """
    if isinstance(A0, IcubeMatrix):
        ring, cols = A0.ring, A0.columns()
    elif isinstance(A0, tuple) and len(A0) == 2 and isinstance(A0[0], int) and A0[1] == []:
        if ring is None:
            raise ValueError("ring is required for an empty column set")
        cols, n_dim = [], A0[0]
    elif A0 and not isinstance(A0[0], (list, tuple)):
        ring = matrix_ring([A0], ring)
        cols = [[coerce(x, ring) for x in A0]]
    else:
        ring = matrix_ring(A0, ring)
        cols = columns(as_matrix(A0, ring))
    if cols:
        n_dim = len(cols[0])
        if lam is None:
            lam = sum(norm(x) for x in cols[0])
    if lam is None:
        raise ValueError("lam is required for an empty column set")
    budget = _max_nodes(max_nodes)
    zero = coerce(0, ring)

    pivot, pivot_col = n_dim - 1, None
    for j, c in enumerate(cols):
        nz = [i for i, x in enumerate(c) if x]
        if nz:
            pivot, pivot_col = nz[-1], j
            break
    order = [i for i in range(n_dim) if i != pivot] + [pivot]
    ccols = [[conj(c[i]) for i in order] for c in cols]
    k = len(cols)
    found = []
    nodes = 0
    w = [zero] * n_dim

    def last(rem, sums):
        cands = []
        if pivot_col is None:
            for x in _elements_of_norm(ring, rem):
                cands.append(x)
        else:
            a = ccols[pivot_col][-1]
            s = sums[pivot_col]
            if not divides(a, s):
                return
            x = exact_div(-s, a)
            if norm(x) != rem:
                return
            cands.append(x)
        for x in cands:
            if all(sums[j] + ccols[j][-1] * x == 0 for j in range(k)):
                w[order[-1]] = x
                found.append(tuple(w))

    def rec(depth, rem, sums):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"sphere enumeration exceeded {budget} nodes")
        if limit is not None and len(found) >= limit:
            return
        if depth == n_dim - 1:
            last(rem, sums)
            return
        idx = order[depth]
        for x in _elements_up_to(ring, rem):
            w[idx] = x
            if x:
                rec(depth + 1, rem - norm(x), [sums[j] + ccols[j][depth] * x for j in range(k)])
            else:
                rec(depth + 1, rem, sums)
            if limit is not None and len(found) >= limit:
                break
        w[idx] = zero

    if lam > 0 and n_dim > 0:
        rec(0, lam, [zero] * k)
    complete = limit is None or len(found) < limit
    vectors = tuple(sorted(found, key=_sort_key))
    return OrthogonalEnumeration(tuple(tuple(c) for c in cols), lam, ring, vectors, complete)


def _line_completion(cols, lam, ring):
    """Last column of an n-icube given n-1 columns, or None.

    The complement is a rank-one saturated lattice generated by the primitive
    part of the cross product."""
    g = cross_product(cols)
    d = gcd_many(g)
    g = [exact_div(x, d) for x in g]
    n_g = sum(norm(x) for x in g)
    if lam % n_g:
        return None
    c = absolute_sqrt(lam // n_g, ring)
    if c is None:
        return None
    return [c * x for x in g]


def search_extension(A0, target: Optional[int] = None, ring: Optional[Ring] = None,
                     max_nodes: Optional[int] = None):
    """Brute-force search for an extension of ``A0`` to a ``target``-icube
    (default: full rank).  Returns the matrix or None when none exists."""
    if A0 and not isinstance(A0[0], (list, tuple)):
        A0 = [[x] for x in A0]
    ring = matrix_ring(A0, ring)
    cols = columns(as_matrix(A0, ring))
    n = len(cols[0])
    target = n if target is None else target
    lam = sum(norm(x) for x in cols[0])

    def rec(cols):
        if len(cols) == target:
            return cols
        if len(cols) == n - 1:
            c = _line_completion(cols, lam, ring)
            return None if c is None else cols + [c]
        for w in enumerate_orthogonal(from_columns(cols), lam, ring, max_nodes).vectors:
            # symmetry: only one of w, -w needs to be tried
            if _sort_key(w) < _sort_key([-x for x in w]):
                continue
            out = rec(cols + [list(w)])
            if out is not None:
                return out
        return None

    out = rec(cols)
    return None if out is None else from_columns(out)


def orbit_representative(v, ring: Ring) -> tuple:
    """Canonical representative of ``v`` under signed/unit permutations of
    coordinates and (over Z[i]) global conjugation.  Both operations map
    icubes to icubes, so extendability is an orbit invariant."""
    v = [coerce(x, ring) for x in v]
    if ring is Ring.Z:
        return tuple(sorted(abs(x) for x in v))
    options = []
    for w in (v, [conj(x) for x in v]):
        options.append(tuple(sorted((normalize(x) if x else x for x in w), key=_sort_key)))
    return min(options, key=lambda t: _sort_key(t))


# ---------------------------------------------------------------------------
# obstruction soundness


@dataclass
class SoundnessReport:
    ring: Ring
    n: int
    checked: int = 0
    obstructed: int = 0
    disagreements: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagreements


def _soundness_one(args):
    rep, ring, max_nodes = args
    report = necessary_conditions(list(rep), ring)
    if not report.obstructed:
        return rep, False, None
    ext = search_extension([[x] for x in rep], None, ring, max_nodes)
    return rep, True, ext


def obstruction_soundness(vectors: Iterable, ring: Ring, workers: int = 1,
                          max_nodes: Optional[int] = None) -> SoundnessReport:
    """Check that no vector flagged Obstructed has a brute-force extension."""
    reps = sorted({orbit_representative(v, ring) for v in vectors if any(v)}, key=_sort_key)
    n = len(reps[0]) if reps else 0
    out = SoundnessReport(ring, n)
    jobs = [(rep, ring, max_nodes) for rep in reps]
    for rep, flagged, ext in parallel_map(_soundness_one, jobs, workers):
        out.checked += 1
        if flagged:
            out.obstructed += 1
            if ext is not None:
                out.disagreements.append({"vector": rep, "extension": ext})
    return out


def parallel_map(fn: Callable, jobs: list, workers: int = 1) -> list:
    """Ordered map; the result is identical for any worker count."""
    if workers <= 1 or len(jobs) < 2:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


# ---------------------------------------------------------------------------
# explicit golden examples


PAPER_10X10 = [
    [0, 1, 1, 1, 1, 1, 1, 1, 1, 1],
    [1, -2, -1, 0, 0, 0, 0, 1, 1, 1],
    [1, -1, 1, 0, 0, 1, 1, -2, 0, 0],
    [1, 0, 0, -1, 1, 0, 1, 1, -2, 0],
    [1, 0, 0, 1, -1, 1, 0, 1, 0, -2],
    [1, 0, 1, 0, 1, -2, 0, 0, 1, -1],
    [1, 0, 1, 1, 0, 0, -2, 0, -1, 1],
    [1, 1, -2, 1, 1, 0, 0, -1, 0, 0],
    [1, 1, 0, -2, 0, 1, -1, 0, 1, 0],
    [1, 1, 0, 0, -2, -1, 1, 0, 0, 1],
]


def paper_z18_icube() -> list:
    """All-ones column plus (3, -3) on each consecutive coordinate pair."""
    cols = [[1] * 18]
    for i in range(9):
        c = [0] * 18
        c[2 * i], c[2 * i + 1] = 3, -3
        cols.append(c)
    return from_columns(cols)


def paper_z36_icube() -> list:
    """All-ones column plus three sign patterns of 3's on each block of four."""
    cols = [[1] * 36]
    for b in range(9):
        for pattern in ((3, 3, -3, -3), (3, -3, 3, -3), (3, -3, -3, 3)):
            c = [0] * 36
            c[4 * b:4 * b + 4] = pattern
            cols.append(c)
    return from_columns(cols)


def _parity_certificate(a1, a2) -> dict:
    """For the Z^10 pair: a3 has a3[0] = 0, sum a3[1:] = 0 and
    sum a3[1:]^2 = 9; x^2 = x mod 2 makes the sum both even and odd."""
    lam = sum(x * x for x in a1)
    ones = a2[1:]
    contradiction = all(x == 1 for x in ones) and a2[0] == 0 and lam % 2 == 1 \
        and all(x == 0 for x in a1[1:])
    return {"sum_constraint": 0, "square_sum": lam, "parity_contradiction": contradiction}


def _reduced_block_check(A, block: int) -> dict:
    """Kernel of the non-all-ones columns is spanned by constant-on-block
    vectors; the reduced problem is the all-ones vector in Z^9."""
    ic = verify(A, Ring.Z)
    cols = ic.columns()
    rest = from_columns(cols[1:])
    lb = kernel_basis(rest, Ring.Z)
    m = len(lb.basis)
    constant_on_blocks = all(
        len(set(b[block * i:block * (i + 1)])) == 1 for b in lb.basis for i in range(ic.n // block)
    )
    # the kernel lattice must be exactly the block-constant lattice: both
    # have rank n/block, and equal discriminant means equal lattices
    from .lattice import det, gram

    block_lattice = []
    for i in range(ic.n // block):
        e = [0] * ic.n
        e[block * i:block * (i + 1)] = [1] * block
        block_lattice.append(e)
    same = constant_on_blocks and m == ic.n // block and det(gram(lb.basis)) == det(gram(block_lattice))
    reduced = [1] * (ic.n // block)
    # w = sum alpha_i * (block i) has |w|^2 = block*|alpha|^2 and
    # <ones, w> = block*sum(alpha): w extends iff alpha is orthogonal to
    # the all-ones vector of Z^9 with |alpha|^2 = lam/block
    sub_lam = ic.lam // block
    obstruction = necessary_conditions(reduced, Ring.Z)
    enum = enumerate_orthogonal(reduced, sub_lam, Ring.Z)
    return {
        "lambda": ic.lam,
        "k": ic.k,
        "kernel_is_block_constant": same,
        "reduced_lambda": sub_lam,
        "reduced_obstruction": obstruction.reason,
        "reduced_candidates": len(enum),
        "passed": same and sub_lam == len(reduced) and obstruction.obstructed and len(enum) == 0,
    }


def verify_paper_counterexamples() -> list:
    """Fixtures as ``{"name", "passed", ...}`` records."""
    out = []

    ic = verify(PAPER_10X10, Ring.Z)
    a2 = [0] + [1] * 9
    out.append({
        "name": "10x10-icube",
        "lambda": ic.lam,
        "passed": ic.lam == 9 and ic.n == ic.k == 10 and ic.columns()[0] == a2,
    })

    a1 = [3] + [0] * 9
    cert = _parity_certificate(a1, a2)
    enum = enumerate_orthogonal(from_columns([a1, a2]), 9, Ring.Z)
    out.append({
        "name": "z10-pair-parity",
        **cert,
        "enumerated_candidates": len(enum),
        "passed": cert["parity_contradiction"] and len(enum) == 0,
    })

    for name, A, block in (("z18-10-icube", paper_z18_icube(), 2), ("z36-28-icube", paper_z36_icube(), 4)):
        rec = _reduced_block_check(A, block)
        out.append({"name": name, **rec})

    out.extend(orthoregular_examples())
    return out


def scan_orthobalanced(M: HermForm2, lam: int, eps: int = 1) -> list:
    """All ``(a1, a2)`` with ``Q(a1) = lam``, ``Q(a2) = lam*eps`` and
    ``a1* M a2 = 0``, by bounded coordinate scan."""
    lo = (M.alpha + M.gamma - math.sqrt((M.alpha - M.gamma) ** 2 + 4 * norm(M.beta))) / 2

    def sphere(target):
        bound = math.floor(target / lo + 1e-9)
        pts = []
        for x in _elements_up_to(M.ring, bound):
            rem = bound - norm(x)
            for y in _elements_up_to(M.ring, rem):
                v = (x, y)
                if _q(M, v) == target:
                    pts.append(v)
        return pts

    out = []
    second = sphere(lam * eps)
    for a1 in sphere(lam):
        Ma1 = M.apply(a1)
        for a2 in second:
            if conj(Ma1[0]) * a2[0] + conj(Ma1[1]) * a2[1] == 0:
                out.append((a1, a2))
    return out


def _q(M, v):
    r = M.inner(v, v)
    return r.re if isinstance(r, GaussInt) else r


def orthoregular_examples() -> list:
    from .ring import QuadRingElem, eps_delta_split, quadring_left_divisors
    from .errors import PreconditionFailed

    out = []
    s = QuadRingElem(2, 1, 17)
    out.append({"name": "abs-square-21", "value": s.norm(), "passed": s.norm() == 21})

    divisors = {str(t): len(quadring_left_divisors(QuadRingElem(4, t, 17), 21)) for t in (5, -5)}
    norms = [QuadRingElem(4, t, 17).norm() for t in (5, -5)]
    out.append({
        "name": "no-divisor-of-abs-square-21",
        "divisor_counts": divisors,
        "norms": norms,
        "passed": all(v == 0 for v in divisors.values()) and norms == [441, 441],
    })

    M = HermForm2(21, 4, 21, Ring.Z)
    constructive = {}
    for lam in (21, 25):
        try:
            constructive[lam] = build_orthoregular(M, lam) is not None
        except PreconditionFailed as exc:
            constructive[lam] = f"precondition: {exc}"
    scans = {lam: len(scan_orthobalanced(M, lam, M.eps)) for lam in (21, 25)}
    out.append({
        "name": "no-orthobalanced-basis-21-4-4-21",
        "constructive": constructive,
        "scan_counts": scans,
        "passed": all(v is not True for v in constructive.values()) and all(v == 0 for v in scans.values()),
    })

    split = eps_delta_split(425, Ring.Z)
    out.append({
        "name": "eps-delta-split-425",
        "delta": str(split[0]),
        "eps": split[1],
        "passed": split == (25, 17),
    })
    return out


# ---------------------------------------------------------------------------
# conjecture sweep in Z^8


def check_conjecture8_instance(A0, max_nodes: Optional[int] = None) -> dict:
    """Try to extend a k-icube in Z^8 by one column by brute force."""
    if A0 and not isinstance(A0[0], (list, tuple)):
        A0 = [[x] for x in A0]
    A = as_matrix(A0, Ring.Z)
    if len(A) != 8:
        raise ValueError(f"conjecture sweep is for Z^8, got dimension {len(A)}")
    ic = verify(A, Ring.Z)
    rec = {"rank": ic.k, "lambda": ic.lam, "instance": format_matrix(ic.entries)}
    try:
        enum = enumerate_orthogonal(ic, ic.lam, Ring.Z, max_nodes, limit=1)
    except BudgetExceeded:
        rec["status"] = "budget-exceeded"
        return rec
    if enum.vectors:
        rec["status"] = "extendable"
        rec["witness"] = list(enum.vectors[0])
    else:
        rec["status"] = "counterexample-candidate"
    return rec


def _rank1_reps(norm_bound: int, n: int = 8) -> list:
    """Nonincreasing nonnegative tuples with square sum <= norm_bound."""
    out = []

    def rec(prefix, rem, cap):
        if len(prefix) == n:
            if any(prefix):
                out.append(tuple(prefix))
            return
        for x in range(min(cap, math.isqrt(rem)), -1, -1):
            rec(prefix + [x], rem - x * x, x)

    rec([], norm_bound, math.isqrt(norm_bound))
    return sorted(out)


def _random_small_icube(rng: random.Random, k: int, norm_bound: int, max_nodes) -> Optional[list]:
    lam = rng.randint(1, norm_bound)
    cands = enumerate_orthogonal((8, []), lam, Ring.Z, max_nodes).vectors
    if not cands:
        return None
    cols = [list(rng.choice(cands))]
    while len(cols) < k:
        opts = enumerate_orthogonal(from_columns(cols), lam, Ring.Z, max_nodes).vectors
        if not opts:
            return None
        cols.append(list(rng.choice(opts)))
    return from_columns(cols)


def _c8_job(args):
    A, max_nodes = args
    return check_conjecture8_instance(A, max_nodes)


@dataclass
class SweepReport:
    records: list
    seconds: float

    @property
    def counts(self) -> dict:
        out = {}
        for r in self.records:
            out[r["status"]] = out.get(r["status"], 0) + 1
        return out

    @property
    def success_rate(self) -> float:
        return self.counts.get("extendable", 0) / max(1, len(self.records))

    def jsonl(self) -> str:
        return "".join(json.dumps(r, sort_keys=True) + "\n" for r in self.records)

    def summary(self) -> str:
        parts = ", ".join(f"{k}: {v}" for k, v in sorted(self.counts.items()))
        return f"{len(self.records)} instances ({parts}); success rate {self.success_rate:.4f}"


def conjecture8_sweep(norm_bound: int = 25, samples: int = 0, seed: int = 0,
                      ranks: tuple = (2, 3, 4, 5, 6, 7), workers: int = 1,
                      max_nodes: Optional[int] = None,
                      report_path: Optional[str] = None) -> SweepReport:
    """All rank-1 icubes in Z^8 up to ``norm_bound`` (one per signed-permutation
    orbit) plus ``samples`` seeded random icubes of each rank in ``ranks``."""
    t0 = time.perf_counter()
    jobs = [([[x] for x in v], max_nodes) for v in _rank1_reps(norm_bound)]
    rng = random.Random(seed)
    for k in ranks if samples else ():
        made = 0
        attempts = 0
        while made < samples and attempts < 50 * samples:
            attempts += 1
            A = _random_small_icube(rng, k, norm_bound, max_nodes)
            if A is not None:
                jobs.append((A, max_nodes))
                made += 1
    records = parallel_map(_c8_job, jobs, workers)
    for r in records:
        if r["status"] == "counterexample-candidate":
            r["note"] = "no extension by one column found by exhaustive search"
    report = SweepReport(records, time.perf_counter() - t0)
    if report_path:
        with open(report_path, "a", encoding="utf-8") as fh:
            fh.write(report.jsonl())
    return report


# ---------------------------------------------------------------------------
# Hecke returns


@dataclass
class HeckeCountReport:
    n: int
    norm1: int
    norm2: int
    count: int
    exact: bool
    seconds: float
    extra: dict = field(default_factory=dict)
    matrices: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "norm1": self.norm1,
            "norm2": self.norm2,
            "count": self.count,
            "exact": self.exact,
            "extra": self.extra,
        }


def _check_split(p: int):
    if p < 2 or factor_int(p) != {p: 1} or p % 4 != 1:
        raise NonSplitPrime(f"{p} is not a prime congruent to 1 mod 4")


def hecke_matrix2(a: int, b: int, c: int, d: int) -> list:
    return [[GaussInt(a, b), GaussInt(-c, d)], [GaussInt(c, d), GaussInt(a, -b)]]


def _four_square_reps(N: int):
    r = math.isqrt(N)
    for a in range(-r, r + 1):
        ra = N - a * a
        for b in range(-math.isqrt(ra), math.isqrt(ra) + 1):
            rb = ra - b * b
            for c in range(-math.isqrt(rb), math.isqrt(rb) + 1):
                rc = rb - c * c
                d = math.isqrt(rc)
                if d * d == rc:
                    yield (a, b, c, d)
                    if d:
                        yield (a, b, c, -d)


def _primitive_sphere(N: int, dim: int, limit: Optional[int], max_nodes):
    """Primitive vectors of Z[i]^dim with norm N, in enumeration order."""
    enum = enumerate_orthogonal((dim, []), N, Ring.ZI, max_nodes,
                                limit=None if limit is None else 8 * limit + 64)
    for v in enum.vectors:
        if norm(gcd_many(v)) == 1:
            yield list(v)


def hecke_count(n: int, norm1: int, norm2: int, max_matrices: Optional[int] = 200,
                max_nodes: Optional[int] = None) -> HeckeCountReport:
    """``#S_n`` for n = 2 (exact) or constructive lower bounds for n = 3, 4."""
    _check_split(norm1)
    _check_split(norm2)
    if n not in (2, 3, 4):
        raise ValueError("n must be 2, 3 or 4")
    t0 = time.perf_counter()
    N = norm1 * norm2
    ell = split_prime(norm1) * split_prime(norm2)
    extra = {"ell": str(ell), "N": N}
    if n == 2:
        total = count = 0
        expected = (GaussInt(1, 0), GaussInt(N, 0))
        for a, b, c, d in _four_square_reps(N):
            total += 1
            if math.gcd(a * a + b * b, N) != 1:
                continue
            A = hecke_matrix2(a, b, c, d)
            ic = verify(A, Ring.ZI)
            if ic.lam != N or snf(A, Ring.ZI).diag != expected:
                raise IcubeError(f"({a},{b},{c},{d}) does not give a Hecke return")
            count += 1
        extra.update(representations=total, coprime_fraction=count / total if total else 0.0)
        return HeckeCountReport(n, norm1, norm2, count, True, time.perf_counter() - t0, extra)

    seen = set()
    mats = []
    one = GaussInt(1, 0)
    expected = (one,) + (normalize(ell),) * (n - 2) + (GaussInt(N, 0),)

    def record(A):
        key = format_matrix(A.entries)
        if key in seen:
            return
        diag = snf(A.rows(), Ring.ZI).diag
        if diag != expected or A.lam != N:
            raise IcubeError(f"unexpected Smith form {diag}")
        seen.add(key)
        mats.append(A)

    if n == 3:
        for a1 in _primitive_sphere(N, 3, max_matrices, max_nodes):
            if max_matrices is not None and len(mats) >= max_matrices:
                break
            record(extend3_with_snf(a1, ell, Ring.ZI))
    else:
        # the pairing column rarely has ell | d2; count how often
        pairing_ok = pairing_tried = 0
        for a1 in _primitive_sphere(N, 4, max_matrices, max_nodes):
            pairing_tried += 1
            A0 = from_columns([a1, pairing_column(a1)])
            try:
                d2 = snf4_hypothesis(A0, Ring.ZI)
                if divides(ell, d2):
                    pairing_ok += 1
                    record(extend4_with_snf(A0, ell))
            except IcubeError:
                pass
            if max_matrices is not None and pairing_tried >= max_matrices:
                break
        extra.update(pairing_candidates=pairing_tried, pairing_usable=pairing_ok)
        # zero-coordinate route: a1 with a1[j] = 0 and a2 = ell * e_j has d2 = ell
        for a in _primitive_sphere(N, 3, max_matrices, max_nodes):
            if max_matrices is not None and len(mats) >= max_matrices:
                break
            for j in range(4):
                a1 = a[:j] + [GaussInt(0, 0)] + a[j:]
                a2 = [GaussInt(0, 0)] * 4
                a2[j] = ell
                record(extend4_with_snf(from_columns([a1, a2]), ell))
                if max_matrices is not None and len(mats) >= max_matrices:
                    break
    exact = False
    return HeckeCountReport(n, norm1, norm2, len(mats), exact, time.perf_counter() - t0, extra, mats)


# ---------------------------------------------------------------------------
# oracle cross-checks


@dataclass
class CrosscheckReport:
    op: str
    checked: int = 0
    disagreements: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.disagreements

    def to_json(self) -> dict:
        return {"op": self.op, "checked": self.checked, "ok": self.ok,
                "disagreements": [repr(d) for d in self.disagreements]}


def _quats_of_norm(m: int):
    for a, b, c, d in _four_square_reps(m):
        yield Quat(a, b, c, d)


def _brute_left_divisor(t: Quat, m: int) -> bool:
    for u in _quats_of_norm(m):
        v = u.conjugate() * t
        if all(x % m == 0 for x in v.coords()):
            return True
    return False


def oracle_crosscheck(op: str, instances: Iterable, max_nodes: Optional[int] = None) -> CrosscheckReport:
    """Compare a constructive operation with exhaustive search.

    ``op`` is one of ``extend3``, ``extend4`` (instances: vectors with ring
    inferred), ``build_orthoregular`` (instances: ``(form, lam)``),
    ``lipschitz_left_divisor`` (``(t, m)``) or ``two_squares`` (integers).
    """
    report = CrosscheckReport(op)
    for inst in instances:
        report.checked += 1
        if op in ("extend3", "extend4"):
            v = list(inst)
            ring = matrix_ring([v])
            lam = sum(norm(x) for x in v)
            fn = extend3 if op == "extend3" else extend4
            try:
                fn(v, ring)
                claimed = True
            except IcubeError:
                claimed = False
            found = search_extension([[x] for x in v], None, ring, max_nodes) is not None
            if claimed != found:
                report.disagreements.append({"instance": v, "constructive": claimed, "oracle": found})
        elif op == "build_orthoregular":
            M, lam = inst
            from .errors import PreconditionFailed

            try:
                claimed = build_orthoregular(M, lam) is not None
            except PreconditionFailed:
                claimed = False
            found = bool(scan_orthobalanced(M, lam, M.eps))
            if claimed != found:
                report.disagreements.append({"instance": (M, lam), "constructive": claimed, "oracle": found})
        elif op == "lipschitz_left_divisor":
            t, m = inst
            try:
                u, v = lipschitz_left_divisor(t, m)
                claimed = u * v == t and u.norm() == m
            except IcubeError:
                claimed = False
            found = _brute_left_divisor(t, m)
            if claimed != found:
                report.disagreements.append({"instance": (t, m), "constructive": claimed, "oracle": found})
        elif op == "two_squares":
            n = int(inst)
            fast, slow = two_squares(n), two_squares_bruteforce(n)
            if (fast is None) != (slow is None) or (fast is not None and fast.norm() != n) \
                    or (fast is None) == is_sum_k_squares(n, 2):
                report.disagreements.append({"instance": n, "constructive": fast, "oracle": slow})
        else:
            raise ValueError(f"unknown op {op!r}")
    return report
