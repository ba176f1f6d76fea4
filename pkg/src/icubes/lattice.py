"""Exact matrix algebra over Z and Z[i].

Matrices are lists of rows.  Provides Smith normal form with tracked
unimodular transforms, determinantal divisors, kernel lattices of icubes
and the conjugated cross product.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Sequence

from .errors import IntegralityViolation
from .ring import (
    GaussInt,
    Ring,
    coerce,
    conj,
    divides,
    ediv,
    exact_div,
    gcd,
    gcd_many,
    norm,
    normalize,
    normalizing_unit,
    xgcd,
)

Matrix = List[list]


# ---------------------------------------------------------------------------
# small helpers


def matrix_ring(A, ring: Optional[Ring] = None) -> Ring:
    if ring is not None:
        return ring
    for row in A:
        for x in row:
            if isinstance(x, GaussInt):
                return Ring.ZI
    return Ring.Z


def as_matrix(A, ring: Optional[Ring] = None) -> Matrix:
    ring = matrix_ring(A, ring)
    return [[coerce(x, ring) for x in row] for row in A]


def identity(n: int, ring: Ring) -> Matrix:
    z, o = coerce(0, ring), coerce(1, ring)
    return [[o if i == j else z for j in range(n)] for i in range(n)]


def transpose(A: Matrix) -> Matrix:
    return [list(col) for col in zip(*A)]


def conj_transpose(A: Matrix) -> Matrix:
    return [[conj(x) for x in col] for col in zip(*A)]


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    Bt = list(zip(*B))
    out = []
    for row in A:
        out_row = []
        for col in Bt:
            acc = 0
            for x, y in zip(row, col):
                acc = x * y + acc
            out_row.append(acc)
        out.append(out_row)
    return out


def columns(A: Matrix) -> list:
    return [list(c) for c in zip(*A)]


def from_columns(cols: Sequence[Sequence]) -> Matrix:
    return [list(r) for r in zip(*cols)]


def inner(v, w):
    """``v* w``."""
    acc = 0
    for x, y in zip(v, w):
        acc = conj(x) * y + acc
    return acc


def gram(vectors) -> Matrix:
    return [[inner(v, w) for w in vectors] for v in vectors]


def _real(x) -> int:
    if isinstance(x, GaussInt):
        if x.im:
            raise ValueError(f"{x} is not real")
        return x.re
    return x


# ---------------------------------------------------------------------------
# determinants


def det(A: Matrix):
    """Bareiss fraction-free determinant (exact over Z and Z[i])."""
    n = len(A)
    if n == 0:
        return 1
    if any(len(r) != n for r in A):
        raise ValueError("determinant of a non-square matrix")
    M = [list(r) for r in A]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if not M[k][k]:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0 * M[0][0]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = exact_div(M[i][j] * M[k][k] - M[i][k] * M[k][j], prev)
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def minors_gcd(A: Matrix, k: int):
    """gcd of all k x k minors; the brute-force definition of ``d_k``."""
    m, n = len(A), len(A[0])
    g = 0
    for rows in combinations(range(m), k):
        for cols in combinations(range(n), k):
            g = gcd(g, det([[A[i][j] for j in cols] for i in rows]))
    return normalize(g)


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SnfResult:
    """``A == left * D * right`` and ``U * A * V == D`` with D diagonal.

    ``diag`` holds the min(m, n) normalized diagonal entries.
    """

    diag: tuple
    left: Matrix
    right: Matrix
    U: Matrix
    V: Matrix
    shape: tuple

    @property
    def dk(self) -> tuple:
        out, acc = [], 1
        for d in self.diag:
            acc = acc * d
            out.append(normalize(acc))
        return tuple(out)

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diag if d)

    def diag_matrix(self) -> Matrix:
        m, n = self.shape
        z = 0 * (self.diag[0] if self.diag else 0)
        D = [[z] * n for _ in range(m)]
        for i, d in enumerate(self.diag):
            D[i][i] = d
        return D


def snf(A, ring: Optional[Ring] = None) -> SnfResult:
    """Smith normal form with unimodular transforms.

    Pivot is the nonzero entry of least norm in the trailing block (ties by
    row-major position); Z[i] divisions round to the nearest quotient.
    """
    ring = matrix_ring(A, ring)
    D = as_matrix(A, ring)
    m = len(D)
    n = len(D[0]) if m else 0
    U, Uinv = identity(m, ring), identity(m, ring)
    V, Vinv = identity(n, ring), identity(n, ring)

    # elementary operations keep U*A*V == D and A == Uinv*D*Vinv
    def row_add(i, j, q):  # row_i -= q * row_j
        if not q:
            return
        Di, Dj = D[i], D[j]
        for c in range(n):
            if Dj[c]:
                Di[c] = Di[c] - q * Dj[c]
        Ui, Uj = U[i], U[j]
        for c in range(m):
            if Uj[c]:
                Ui[c] = Ui[c] - q * Uj[c]
        for r in range(m):
            if Uinv[r][i]:
                Uinv[r][j] = Uinv[r][j] + q * Uinv[r][i]

    def col_add(i, j, q):  # col_i -= q * col_j
        if not q:
            return
        for r in range(m):
            if D[r][j]:
                D[r][i] = D[r][i] - q * D[r][j]
        for r in range(n):
            if V[r][j]:
                V[r][i] = V[r][i] - q * V[r][j]
        Vi, Vj = Vinv[i], Vinv[j]
        for c in range(n):
            if Vi[c]:
                Vj[c] = Vj[c] + q * Vi[c]

    def row_swap(i, j):
        if i == j:
            return
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]
        for r in range(m):
            Uinv[r][i], Uinv[r][j] = Uinv[r][j], Uinv[r][i]

    def col_swap(i, j):
        if i == j:
            return
        for r in range(m):
            D[r][i], D[r][j] = D[r][j], D[r][i]
        for r in range(n):
            V[r][i], V[r][j] = V[r][j], V[r][i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def row_scale(i, u):
        D[i] = [u * x for x in D[i]]
        U[i] = [u * x for x in U[i]]
        ui = conj(u)  # inverse of a unit
        for r in range(m):
            Uinv[r][i] = Uinv[r][i] * ui

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    x = D[i][j]
                    if x:
                        nx = norm(x)
                        if best is None or nx < best[0]:
                            best = (nx, i, j)
            if best is None:
                break
            _, pi, pj = best
            row_swap(t, pi)
            col_swap(t, pj)
            p = D[t][t]
            dirty = False
            for i in range(t + 1, m):
                if D[i][t]:
                    q, r = ediv(D[i][t], p)
                    row_add(i, t, q)
                    dirty = dirty or bool(r)
            for j in range(t + 1, n):
                if D[t][j]:
                    q, r = ediv(D[t][j], p)
                    col_add(j, t, q)
                    dirty = dirty or bool(r)
            if dirty:
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if D[i][j] and not divides(p, D[i][j]):
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is not None:
                row_add(t, bad, coerce(-1, ring))
                continue
            row_scale(t, normalizing_unit(p))
            break
    diag = tuple(D[i][i] for i in range(min(m, n)))
    return SnfResult(diag, Uinv, Vinv, U, V, (m, n))


def det_divisors(A, ring: Optional[Ring] = None) -> tuple:
    """``(d_1, ..., d_min(m,n))`` normalized, via the Smith normal form."""
    return snf(A, ring).dk


def is_primitive(A, ring: Optional[Ring] = None) -> bool:
    A = as_matrix(A, ring)
    g = 0
    for row in A:
        for x in row:
            g = gcd(g, x)
    return norm(g) == 1


# ---------------------------------------------------------------------------
# kernel lattices


@dataclass(frozen=True)
class LambdaBasis:
    """Free basis of ``{w : a_j* w = 0 for every column a_j of A0}``."""

    basis: tuple
    A0: Matrix
    lam: int
    gram: Matrix

    @property
    def disc(self) -> int:
        if not self.basis:
            return 1
        return _real(det(self.gram))

    def matrix(self) -> Matrix:
        return from_columns(self.basis)

    def to_ambient(self, coeffs) -> list:
        """``sum coeffs[i] * basis[i]``."""
        n = len(self.basis[0])
        out = [0] * n
        for c, b in zip(coeffs, self.basis):
            for i in range(n):
                out[i] = c * b[i] + out[i]
        return out


def _icube_norm(A0: Matrix) -> int:
    c = columns(A0)[0]
    return _real(inner(c, c))


def _finish(basis, A0, ring) -> LambdaBasis:
    basis = tuple(tuple(coerce(x, ring) for x in b) for b in basis)
    lam = _icube_norm(A0)
    lb = LambdaBasis(basis, A0, lam, gram(basis))
    k = len(A0[0])
    if k == 1:
        dk = gcd_many(r[0] for r in A0)
    else:
        dk = det_divisors(A0, ring)[k - 1]
    expected = Fraction(lam ** k, norm(dk))
    if lb.disc != expected:
        raise IntegralityViolation(
            f"kernel discriminant {lb.disc} differs from lambda^k/|d_k|^2 = {expected}"
        )
    return lb


def kernel_basis(A0, ring: Optional[Ring] = None) -> LambdaBasis:
    """Basis of the orthogonal-complement lattice of the columns of ``A0``."""
    ring = matrix_ring(A0, ring)
    A0 = as_matrix(A0, ring)
    k = len(A0[0])
    res = snf(conj_transpose(A0), ring)
    r = res.rank
    V = res.V
    basis = [tuple(V[i][j] for i in range(len(V))) for j in range(r, len(V))]
    assert r == k
    return _finish(basis, A0, ring)


def kernel_basis_with_zero_coordinate(a1, ring: Optional[Ring] = None) -> LambdaBasis:
    """Basis ``(b2, b3)`` of the complement of a primitive ``a1`` in R^3,
    with ``b2`` primitive and third coordinate zero."""
    ring = matrix_ring([a1], ring)
    a, b, c = (coerce(x, ring) for x in a1)
    zero, one = coerce(0, ring), coerce(1, ring)
    if not a and not b:
        basis = [(one, zero, zero), (zero, one, zero)]
    else:
        ca, cb, cc = conj(a), conj(b), conj(c)
        g, s, t = xgcd(ca, cb)
        b2 = (exact_div(cb, g), exact_div(-ca, g), zero)
        b3 = (-cc * s, -cc * t, g)
        basis = [b2, b3]
    return _finish(basis, [[x] for x in (a, b, c)], ring)


def cross_product(vectors) -> list:
    """Conjugated signed-cofactor vector of n-1 vectors in R^n; orthogonal
    to each input under ``v* w``."""
    vectors = [list(v) for v in vectors]
    n = len(vectors) + 1
    if any(len(v) != n for v in vectors):
        raise ValueError("need n-1 vectors of length n")
    out = []
    for j in range(n):
        minor = [[v[i] for v in vectors] for i in range(n) if i != j]
        d = det(minor) if minor else 1
        out.append(conj(d if j % 2 == 0 else -d))
    return out


def _perm_sign(p) -> int:
    sign = 1
    p = list(p)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                sign = -sign
    return sign


def xh_vectors(A0, ring: Optional[Ring] = None) -> list:
    """``x_h`` for h = 1..4: the cross product of the two columns projected
    away from coordinate h.  Entry e of ``x_h`` is ``conj(d_{f,g})`` with
    ``(e, f, g, h)`` an even permutation, so ``x_4 = conj(d23, d31, d12, 0)``."""
    ring = matrix_ring(A0, ring)
    A0 = as_matrix(A0, ring)
    a1, a2 = columns(A0)
    out = []
    for h in range(4):
        x = [coerce(0, ring)] * 4
        for e in range(4):
            if e == h:
                continue
            f, g = (i for i in range(4) if i not in (e, h))
            if _perm_sign((e, f, g, h)) < 0:
                f, g = g, f
            x[e] = conj(a1[f] * a2[g] - a2[f] * a1[g])
        out.append(x)
    return out


def q_prime_data(A0, ring: Optional[Ring] = None):
    """Return ``(form, kernel basis, d2)`` where form is the integral Gram
    matrix of ``(|d2|^2 / lam) * <,>`` on the kernel lattice of a 2-icube."""
    from .hermitian import HermForm2

    ring = matrix_ring(A0, ring)
    A0 = as_matrix(A0, ring)
    lb = kernel_basis(A0, ring)
    d2 = det_divisors(A0, ring)[1]
    scale = norm(d2)
    lam = lb.lam
    g = lb.gram
    entries = []
    for x in (g[0][0], g[0][1], g[1][1]):
        y = scale * x
        if not divides(lam, y):
            raise IntegralityViolation(f"{y} is not divisible by lambda={lam}")
        entries.append(exact_div(y, lam))
    alpha, beta, gamma = _real(entries[0]), entries[1], _real(entries[2])
    form = HermForm2(alpha, beta, gamma, ring)
    if form.mu != scale:
        raise IntegralityViolation(f"det Q' = {form.mu} differs from |d2|^2 = {scale}")
    return form, lb, d2


def scaled_form_q_prime(A0, ring: Optional[Ring] = None):
    return q_prime_data(A0, ring)[0]
