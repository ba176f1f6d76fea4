"""Icubes: verification, necessary conditions and extension algorithms."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from .errors import (
    HypothesisViolated,
    IntegralityViolation,
    NormNotAbsoluteSquare,
    NotOrthogonal,
    NotPrimitive,
    PreconditionFailed,
    UnequalNorms,
    ZeroColumn,
)
from .hermitian import HermForm2, build_orthoregular, extend_to_orthoregular
from .lattice import (
    as_matrix,
    columns,
    cross_product,
    from_columns,
    inner,
    kernel_basis,
    kernel_basis_with_zero_coordinate,
    mat_mul,
    matrix_ring,
    q_prime_data,
    snf,
)
from .ring import (
    GaussInt,
    Ring,
    absolute_sqrt,
    coerce,
    conj,
    divides,
    exact_div,
    factor_int,
    gcd,
    gcd_many,
    is_absolute_square,
    is_sum_k_squares,
    norm,
    normalize,
    units,
)

OBSTRUCTED = "Obstructed"
UNKNOWN = "Extendable-unknown"


@dataclass(frozen=True)
class IcubeMatrix:
    """An n x k matrix whose columns are pairwise orthogonal of norm ``lam``."""

    ring: Ring
    entries: tuple
    lam: int

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def k(self) -> int:
        return len(self.entries[0])

    def rows(self) -> list:
        return [list(r) for r in self.entries]

    def columns(self) -> list:
        return columns(self.entries)

    def __str__(self):
        from .textio import format_matrix

        return format_matrix(self.entries)


def verify(A, ring: Optional[Ring] = None) -> IcubeMatrix:
    """Certify ``A`` as an icube or raise with the offending column pair."""
    ring = matrix_ring(A, ring)
    A = as_matrix(A, ring)
    cols = columns(A)
    lam = None
    for i, c in enumerate(cols):
        if not any(c):
            raise ZeroColumn(f"column {i} is zero", i, i)
        n_i = inner(c, c)
        n_i = n_i.re if isinstance(n_i, GaussInt) else n_i
        if lam is None:
            lam = n_i
        elif n_i != lam:
            raise UnequalNorms(f"columns 0 and {i} have norms {lam} and {n_i}", 0, i)
    for i in range(len(cols)):
        for j in range(i + 1, len(cols)):
            if inner(cols[i], cols[j]):
                raise NotOrthogonal(f"columns {i} and {j} are not orthogonal", i, j)
    return IcubeMatrix(ring, tuple(tuple(r) for r in A), lam)


def is_icube(A, ring: Optional[Ring] = None) -> bool:
    try:
        verify(A, ring)
    except (NotOrthogonal, UnequalNorms, ZeroColumn):
        return False
    return True


def _icube(A, ring) -> IcubeMatrix:
    try:
        return verify(A, ring)
    except (NotOrthogonal, UnequalNorms, ZeroColumn) as exc:
        raise IntegralityViolation(f"construction produced a non-icube: {exc}") from exc


def _columns_of(A0, ring):
    """Accept a vector, a list of rows or an IcubeMatrix."""
    if isinstance(A0, IcubeMatrix):
        return A0.ring, A0.columns()
    if A0 and not isinstance(A0[0], (list, tuple)):
        ring = matrix_ring([A0], ring)
        return ring, [[coerce(x, ring) for x in A0]]
    ring = matrix_ring(A0, ring)
    return ring, columns(as_matrix(A0, ring))


# ---------------------------------------------------------------------------
# necessary conditions


@dataclass(frozen=True)
class ObstructionReport:
    verdict: str
    reason: Optional[str] = None
    witness: dict = field(default_factory=dict)

    @property
    def obstructed(self) -> bool:
        return self.verdict == OBSTRUCTED


def _odd_prime_3mod4(n: int) -> Optional[int]:
    for p, e in factor_int(n).items():
        if p % 4 == 3 and e % 2:
            return p
    return None


def necessary_conditions(v, ring: Optional[Ring] = None) -> ObstructionReport:
    """Proven obstructions to extending ``v`` in R^n to an n-icube.

    Reasons: ``odd-n-nonsquare`` (n odd, norm not an absolute square in R),
    ``4k+2-not-two-squares`` (Z, n = 2 mod 4), ``all-odd-coordinates``
    (Z, n odd) and ``one-plus-i-indivisible`` (Z[i], n odd).
    """
    ring = matrix_ring([v], ring)
    v = [coerce(x, ring) for x in v]
    n = len(v)
    if not any(v):
        raise ValueError("v must be nonzero")
    lam = sum(norm(x) for x in v)
    if n % 2 == 1 and not is_absolute_square(lam, ring):
        witness = {"lambda": lam}
        if ring is Ring.ZI:
            witness["prime"] = _odd_prime_3mod4(lam)
        return ObstructionReport(OBSTRUCTED, "odd-n-nonsquare", witness)
    if ring is Ring.Z and n % 4 == 2 and not is_sum_k_squares(lam, 2):
        return ObstructionReport(
            OBSTRUCTED, "4k+2-not-two-squares", {"lambda": lam, "prime": _odd_prime_3mod4(lam)}
        )
    if n % 2 == 1 and n >= 3:
        if ring is Ring.Z and all(x % 2 for x in v):
            return ObstructionReport(OBSTRUCTED, "all-odd-coordinates", {"lambda": lam})
        if ring is Ring.ZI and all((x.re + x.im) % 2 for x in v):
            return ObstructionReport(OBSTRUCTED, "one-plus-i-indivisible", {"lambda": lam})
    return ObstructionReport(UNKNOWN)


# ---------------------------------------------------------------------------
# helpers for kernel lattices


def _lambda_form(lb, ring) -> HermForm2:
    g = lb.gram
    a = g[0][0].re if isinstance(g[0][0], GaussInt) else g[0][0]
    c = g[1][1].re if isinstance(g[1][1], GaussInt) else g[1][1]
    return HermForm2(a, g[0][1], c, ring)


def _coords(lb, w, ring):
    """Coordinates of ``w`` in the two-element basis of ``lb``."""
    g = lb.gram
    b0, b1 = lb.basis
    r0, r1 = inner(b0, w), inner(b1, w)
    d = g[0][0] * g[1][1] - g[0][1] * g[1][0]
    c0 = exact_div(g[1][1] * r0 - g[0][1] * r1, d)
    c1 = exact_div(g[0][0] * r1 - g[1][0] * r0, d)
    c0, c1 = coerce(c0, ring), coerce(c1, ring)
    if lb.to_ambient((c0, c1)) != list(w):
        raise IntegralityViolation("vector is not in the kernel lattice")
    return c0, c1


def _check_norm_class(lam: int, ring: Ring):
    if not is_absolute_square(lam, ring):
        what = "a perfect square" if ring is Ring.Z else "a sum of two squares"
        raise PreconditionFailed(f"norm {lam} is not {what}")


# ---------------------------------------------------------------------------
# dimension 3


def _extend3_primitive(a, ring):
    lb = kernel_basis_with_zero_coordinate(a, ring)
    M = _lambda_form(lb, ring)
    basis = build_orthoregular(M, lb.lam)
    if basis is None:
        raise IntegralityViolation("no orthoregular basis although alpha has a zero coordinate")
    return lb.to_ambient(basis.a1), lb.to_ambient(basis.a2)


def extend3(A0, ring: Optional[Ring] = None) -> IcubeMatrix:
    """Extend a 1- or 2-icube in R^3 to a 3-icube."""
    ring, cols = _columns_of(A0, ring)
    if len(cols[0]) != 3:
        raise ValueError("extend3 needs vectors in R^3")
    a1 = cols[0]
    lam = sum(norm(x) for x in a1)
    _check_norm_class(lam, ring)
    if len(cols) == 3:
        return _icube(from_columns(cols), ring)
    if len(cols) == 1:
        mu = gcd_many(a1)
        a = [exact_div(x, mu) for x in a1]
        b2, b3 = _extend3_primitive(a, ring)
        out = [a1, [mu * x for x in b2], [mu * x for x in b3]]
    else:
        a2 = cols[1]
        lb = kernel_basis([[x] for x in a1], ring)
        M = _lambda_form(lb, ring)
        basis = extend_to_orthoregular(M, _coords(lb, a2, ring))
        out = [a1, a2, lb.to_ambient(basis.a2)]
    return _icube(from_columns(out), ring)


# ---------------------------------------------------------------------------
# dimension 4


def pairing_column(a1) -> list:
    """``(-conj a2, conj a1, -conj a4, conj a3)``, orthogonal to ``a1``."""
    x1, x2, x3, x4 = a1
    return [-conj(x2), conj(x1), -conj(x4), conj(x3)]


def extend4(A0, ring: Optional[Ring] = None) -> IcubeMatrix:
    """Extend a 1-, 2- or 3-icube in R^4 to a 4-icube."""
    ring, cols = _columns_of(A0, ring)
    if len(cols[0]) != 4:
        raise ValueError("extend4 needs vectors in R^4")
    if len(cols) == 4:
        return _icube(from_columns(cols), ring)
    if len(cols) == 1:
        cols = [cols[0], pairing_column(cols[0])]
    a1, a2 = cols[0], cols[1]
    if len(cols) == 2:
        g = gcd_many(a1 + a2)
        red = [[exact_div(x, g) for x in c] for c in (a1, a2)] if ring is Ring.Z else [a1, a2]
        scale = g if ring is Ring.Z else coerce(1, ring)
        form, lb, d2 = q_prime_data(from_columns(red), ring)
        basis = build_orthoregular(form, norm(d2))
        if basis is None:
            raise IntegralityViolation("no Q'-orthoregular basis of norm |d2|^2")
        a3 = [scale * x for x in lb.to_ambient(basis.a1)]
        a4 = [scale * x for x in lb.to_ambient(basis.a2)]
        return _icube(from_columns([a1, a2, a3, a4]), ring)
    a3 = cols[2]
    form, lb, d2 = q_prime_data(from_columns([a1, a2]), ring)
    basis = extend_to_orthoregular(form, _coords(lb, a3, ring))
    return _icube(from_columns([a1, a2, a3, lb.to_ambient(basis.a2)]), ring)


# ---------------------------------------------------------------------------
# dimension 6 over Z


def gauss_block(z) -> list:
    z = coerce(z, Ring.ZI)
    return [[z.re, -z.im], [z.im, z.re]]


def realify(A) -> list:
    """Replace each Gaussian entry by its 2x2 real block."""
    out = []
    for row in A:
        top, bottom = [], []
        for z in row:
            (a, b), (c, d) = gauss_block(z)
            top += [a, b]
            bottom += [c, d]
        out += [top, bottom]
    return out


def extend6_real(v) -> IcubeMatrix:
    """Extend ``v`` in Z^6 with ``|v|^2`` a sum of two squares to a 6-icube."""
    v = [coerce(x, Ring.Z) for x in v]
    if len(v) != 6:
        raise ValueError("extend6_real needs a vector in Z^6")
    lam = sum(x * x for x in v)
    if not is_sum_k_squares(lam, 2):
        raise PreconditionFailed(f"|v|^2 = {lam} is not a sum of two squares")
    z = [GaussInt(v[2 * i], v[2 * i + 1]) for i in range(3)]
    G = extend3(z, Ring.ZI)
    return _icube(realify(G.entries), Ring.Z)


# ---------------------------------------------------------------------------
# prescribed Smith normal forms


def snf_pairing_check(A, ring: Optional[Ring] = None):
    """Return ``(ok, diag)``: whether ``conj(d_j) d_{n+1-j} == lam`` for all j."""
    ic = A if isinstance(A, IcubeMatrix) else verify(A, ring)
    if ic.n != ic.k:
        raise ValueError("pairing check needs a square icube")
    diag = snf(ic.rows(), ic.ring).diag
    n = len(diag)
    ok = all(conj(diag[j]) * diag[n - 1 - j] == ic.lam for j in range(n))
    return ok, diag


def _require_primitive(v, ring):
    if norm(gcd_many(v)) != 1:
        raise NotPrimitive("first vector must be primitive")


def extend3_with_snf(a1, alpha2, ring: Optional[Ring] = None) -> IcubeMatrix:
    """3-icube ``(a1|a2|a3)`` with Smith form ``diag(1, alpha2, |a1|^2)``."""
    ring = matrix_ring([list(a1) + [alpha2]], ring)
    a1 = [coerce(x, ring) for x in a1]
    alpha2 = coerce(alpha2, ring)
    _require_primitive(a1, ring)
    Delta = sum(norm(x) for x in a1)
    if not is_absolute_square(Delta, ring):
        raise NormNotAbsoluteSquare(f"|a1|^2 = {Delta} is not an absolute square")
    if norm(alpha2) != Delta:
        raise PreconditionFailed(f"|alpha2|^2 = {norm(alpha2)} != {Delta}")
    lb = kernel_basis_with_zero_coordinate(a1, ring)
    b2, b3 = lb.basis
    c = cross_product([b2, b3])
    rho = None
    for u in units(ring):
        if [u * x for x in a1] == c:
            rho = u
            break
    if rho is None:
        raise IntegralityViolation("cross product of the kernel basis is not a unit multiple")
    # cross(b2, rho b3) = conj(rho) cross(b2, b3) = a1
    b3 = tuple(rho * x for x in b3)
    lb = type(lb)((b2, b3), lb.A0, lb.lam, [[inner(x, y) for y in (b2, b3)] for x in (b2, b3)])
    M = _lambda_form(lb, ring)
    basis = build_orthoregular(M, Delta, delta=conj(alpha2))
    if basis is None:
        raise IntegralityViolation("no orthoregular basis of the requested type")
    A = _icube(from_columns([a1, lb.to_ambient(basis.a1), lb.to_ambient(basis.a2)]), ring)
    expected = (coerce(1, ring), normalize(alpha2), coerce(Delta, ring))
    diag = snf(A.rows(), ring).diag
    if diag != expected:
        raise IntegralityViolation(f"Smith form {diag} differs from {expected}")
    return A


def snf4_hypothesis(A0, ring: Ring = Ring.ZI):
    """Check the hypotheses for prescribing the Smith form of a 4-extension;
    returns ``d2`` or raises :class:`HypothesisViolated`."""
    A0 = as_matrix(A0, ring)
    a1, a2 = columns(A0)
    if norm(gcd_many(a1)) != 1:
        raise HypothesisViolated("a1 is not primitive")
    d2 = snf(A0, ring).dk[1]
    if norm(gcd(d2, conj(d2))) != 1:
        raise HypothesisViolated(f"d2 = {d2} shares a factor with its conjugate")
    return d2


def extend4_with_snf(A0, alpha2, ring: Ring = Ring.ZI) -> IcubeMatrix:
    """4-icube extending the 2-icube ``A0`` with Smith form
    ``diag(1, alpha2, lam/conj(alpha2), lam)``."""
    if ring is not Ring.ZI:
        raise ValueError("prescribed 4-dimensional Smith forms are over Z[i]")
    A0 = as_matrix(A0.rows() if isinstance(A0, IcubeMatrix) else A0, ring)
    alpha2 = coerce(alpha2, ring)
    d2 = snf4_hypothesis(A0, ring)
    if not alpha2 or not divides(alpha2, d2):
        raise HypothesisViolated(f"alpha2 = {alpha2} does not divide d2 = {d2}")
    a1, a2 = columns(A0)
    lam = sum(norm(x) for x in a1)
    delta = exact_div(d2, alpha2) * conj(alpha2)
    form, lb, d2_form = q_prime_data(A0, ring)
    basis = build_orthoregular(form, norm(d2), delta=delta)
    A = _icube(from_columns([a1, a2, lb.to_ambient(basis.a1), lb.to_ambient(basis.a2)]), ring)
    one = coerce(1, ring)
    expected = (one, normalize(alpha2), normalize(exact_div(coerce(lam, ring), conj(alpha2))),
                coerce(lam, ring))
    diag = snf(A.rows(), ring).diag
    if diag != expected:
        raise IntegralityViolation(f"Smith form {diag} differs from {expected}")
    return A


# ---------------------------------------------------------------------------
# random icubes


def _rand_elem(rng: random.Random, ring: Ring, size: int):
    if ring is Ring.Z:
        return rng.randint(-size, size)
    return GaussInt(rng.randint(-size, size), rng.randint(-size, size))


def random_monomial(rng: random.Random, n: int, ring: Ring) -> list:
    """Random permutation matrix with unit entries (a unitary)."""
    perm = list(range(n))
    rng.shuffle(perm)
    us = units(ring)
    z = coerce(0, ring)
    M = [[z] * n for _ in range(n)]
    for i, j in enumerate(perm):
        M[i][j] = us[rng.randrange(len(us))]
    return M


def _random_vector(rng, ring, n, size, accept):
    while True:
        v = [_rand_elem(rng, ring, size) for _ in range(n)]
        if any(v) and accept(sum(norm(x) for x in v)):
            return v


def _block2(rng, ring, size, accept):
    while True:
        x, y = _rand_elem(rng, ring, size), _rand_elem(rng, ring, size)
        if (x or y) and accept(norm(x) + norm(y)):
            return [[x, -conj(y)], [y, conj(x)]]


def _base(rng, ring, n, size, square=False):
    """Random n x n icube; ``square`` forces an absolute-square norm."""
    if square:
        accept = lambda lam: is_absolute_square(lam, ring)  # noqa: E731
    else:
        accept = lambda lam: True  # noqa: E731
    if n == 1:
        return [[_random_vector(rng, ring, 1, size, accept)[0]]]
    if n == 2:
        return _block2(rng, ring, size, accept)
    if n == 3:
        v = _random_vector(rng, ring, 3, size, lambda lam: is_absolute_square(lam, ring))
        return [list(r) for r in extend3(v, ring).entries]
    if n == 4:
        v = _random_vector(rng, ring, 4, size, accept)
        return [list(r) for r in extend4(v, ring).entries]
    if n == 6 and ring is Ring.Z and not square and rng.random() < 0.5:
        v = _random_vector(rng, ring, 6, size, lambda lam: is_sum_k_squares(lam, 2))
        return [list(r) for r in extend6_real(v).entries]
    if n in (6, 8) and rng.random() < 0.5:
        return kron(_base(rng, ring, 2, size, square), _base(rng, ring, n // 2, size, square))
    split = {5: (3, 2), 6: (3, 3), 7: (4, 3), 8: (4, 4)}[n]
    return block_diag_equalized([_base(rng, ring, m, size, True) for m in split], ring)


def kron(A, B) -> list:
    return [[x * y for x in ra for y in rb] for ra in A for rb in B]


def _col_norm(A) -> int:
    return sum(norm(r[0]) for r in A)


def block_diag_equalized(blocks, ring) -> list:
    """Block-diagonal icube from blocks whose norms are absolute squares;
    each block is scaled by an element so that all norms agree."""
    norms = [_col_norm(B) for B in blocks]
    total = 1
    for lam in norms:
        total *= lam
    scaled = []
    for B, lam in zip(blocks, norms):
        s = absolute_sqrt(total // lam, ring)
        scaled.append([[s * x for x in r] for r in B])
    return block_diag(scaled, ring)


def block_diag(blocks, ring) -> list:
    n = sum(len(B) for B in blocks)
    z = coerce(0, ring)
    out = [[z] * n for _ in range(n)]
    off = 0
    for B in blocks:
        m = len(B)
        for i in range(m):
            for j in range(m):
                out[off + i][off + j] = B[i][j]
        off += m
    return out


def generate_random_icube(ring: Ring, n: int, seed: int, size: int = 4,
                          products: int = 1) -> IcubeMatrix:
    """Deterministic random n x n icube for ``n`` in 1..8."""
    if not 1 <= n <= 8:
        raise ValueError("n must be between 1 and 8")
    ring = Ring.parse(ring) if isinstance(ring, str) else ring
    rng = random.Random(f"{ring.value}:{n}:{seed}")
    A = mat_mul(random_monomial(rng, n, ring), _base(rng, ring, n, size))
    A = mat_mul(A, random_monomial(rng, n, ring))
    for _ in range(products):
        if rng.random() < 0.3:
            A = mat_mul(A, _base(rng, ring, n, max(1, size // 2)))
    return _icube(A, ring)
