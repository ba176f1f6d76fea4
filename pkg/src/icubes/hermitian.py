"""Binary hermitian forms over Z and Z[i] and their orthoregular bases.

A form is given by ``M = [[alpha, beta], [conj(beta), gamma]]``.  A pair
``(a1, a2)`` is orthobalanced of norm ``lam`` when
``A* M A = lam * diag(1, eps)``; with ``eps == 1`` it is orthoregular.

Types ``delta`` live in ``(1/nu) R`` where ``nu = lam / Delta``; they are
passed around as the integral element ``nu * delta``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from typing import Optional, Tuple

from .errors import (
    IntegralityViolation,
    NonIntegralDelta,
    NonIntegralResult,
    NonSquareDet,
    NormMismatch,
    NotOrthobalanced,
    PreconditionFailed,
    Unsupported,
)
from .quat import Quat, lipschitz_left_divisor
from .ring import (
    GaussInt,
    QuadRingElem,
    Ring,
    absolute_sqrt,
    coerce,
    conj,
    divides,
    eps_delta_split,
    exact_div,
    factor_int,
    is_square,
    is_sum_k_squares,
    norm,
    normalize,
    quadring_left_divisors,
    quotient_norm_split,
    split_prime,
    two_squares,
)

Vec2 = Tuple


def _re(x) -> int:
    return x.re if isinstance(x, GaussInt) else x


@dataclass(frozen=True)
class HermForm2:
    """Positive definite ``[[alpha, beta], [conj(beta), gamma]]`` over ``ring``."""

    alpha: int
    beta: object
    gamma: int
    ring: Ring = Ring.Z

    def __post_init__(self):
        object.__setattr__(self, "beta", coerce(self.beta, self.ring))
        if self.alpha <= 0 or self.mu <= 0:
            raise ValueError(f"form {self.matrix()} is not positive definite")

    @classmethod
    def from_matrix(cls, rows, ring: Ring = Ring.Z) -> "HermForm2":
        (a, b), (b2, c) = rows
        if coerce(b2, ring) != conj(coerce(b, ring)):
            raise ValueError("matrix is not self-adjoint")
        a, c = coerce(a, ring), coerce(c, ring)
        if isinstance(a, GaussInt):
            if a.im or c.im:
                raise ValueError("diagonal entries must be rational")
            a, c = a.re, c.re
        return cls(a, b, c, ring)

    @cached_property
    def mu(self) -> int:
        return self.alpha * self.gamma - norm(self.beta)

    @cached_property
    def delta_eps(self) -> Tuple[int, int]:
        d, e = eps_delta_split(self.mu, self.ring)
        return int(d), e

    @property
    def Delta(self) -> int:
        return self.delta_eps[0]

    @property
    def eps(self) -> int:
        return self.delta_eps[1]

    def matrix(self):
        return ((self.alpha, self.beta), (conj(self.beta), self.gamma))

    def apply(self, v: Vec2) -> Vec2:
        x, y = v
        return (self.alpha * x + self.beta * y, conj(self.beta) * x + self.gamma * y)

    def inner(self, v: Vec2, w: Vec2):
        """``v* M w``."""
        mw = self.apply(w)
        return conj(v[0]) * mw[0] + conj(v[1]) * mw[1]


def perp(v: Vec2) -> Vec2:
    """``(x, y) -> (-conj(y), conj(x))``."""
    x, y = v
    return (-conj(y), conj(x))


def q_eval(M: HermForm2, v: Vec2) -> int:
    x, y = v
    return M.alpha * norm(x) + M.gamma * norm(y) + 2 * _re(conj(x) * M.beta * y)


def _gram(M: HermForm2, a1: Vec2, a2: Vec2):
    return (
        (M.inner(a1, a1), M.inner(a1, a2)),
        (M.inner(a2, a1), M.inner(a2, a2)),
    )


def is_orthobalanced(M: HermForm2, a1: Vec2, a2: Vec2, lam: Optional[int] = None) -> bool:
    g = _gram(M, a1, a2)
    lam = g[0][0] if lam is None else lam
    return g[0][0] == lam and g[0][1] == 0 and g[1][1] == lam * M.eps and lam > 0


@dataclass(frozen=True)
class OrthoBasis2:
    """An integral orthobalanced basis with its type.

    ``nu_delta`` is ``nu * delta``, an element of R; the type itself is
    ``nu_delta / nu``.
    """

    a1: Vec2
    a2: Vec2
    lam: int
    nu: int
    nu_delta: object
    form: HermForm2

    @property
    def delta(self):
        """The type as an exact value: an R-element when ``nu | nu_delta``,
        otherwise the pair ``(nu_delta, nu)``."""
        if divides(self.nu, self.nu_delta):
            return exact_div(self.nu_delta, self.nu)
        if isinstance(self.nu_delta, int):
            return Fraction(self.nu_delta, self.nu)
        return (self.nu_delta, self.nu)

    def matrix(self):
        return ((self.a1[0], self.a2[0]), (self.a1[1], self.a2[1]))

    def validate(self) -> "OrthoBasis2":
        M = self.form
        if not is_orthobalanced(M, self.a1, self.a2, self.lam):
            raise IntegralityViolation(f"basis {self.matrix()} is not orthobalanced")
        if norm(self.nu_delta) != self.nu * self.nu * M.Delta:
            raise IntegralityViolation("type has the wrong absolute square")
        w0, z0 = perp(M.apply(self.a1))
        if (self.nu * w0 != self.nu_delta * self.a2[0]
                or self.nu * z0 != self.nu_delta * self.a2[1]):
            raise IntegralityViolation("second vector does not match the type")
        return self


def _nu_of(M: HermForm2, lam: int) -> int:
    if lam <= 0 or lam % M.Delta:
        raise PreconditionFailed(f"Delta={M.Delta} does not divide lambda={lam}")
    return lam // M.Delta


def basis_type(M: HermForm2, a1: Vec2, a2: Vec2) -> Tuple[object, int]:
    """Return ``(nu*delta, nu)`` for an integral orthobalanced basis."""
    lam = q_eval(M, a1)
    if not is_orthobalanced(M, a1, a2, lam):
        raise NotOrthobalanced("not an orthobalanced basis")
    nu = _nu_of(M, lam)
    p = perp(M.apply(a1))
    i = 0 if a2[0] else 1
    try:
        nd = exact_div(nu * p[i], a2[i])
    except ArithmeticError as exc:
        raise IntegralityViolation("nu*delta is not integral") from exc
    return nd, nu


def f_map(M: HermForm2, a1: Vec2, a2: Vec2):
    """``F(a1, a2) = (conj z + conj y sqrt(eps) j, -w + conj x sqrt(eps) j)``.

    Quaternions for R = Z[i], elements of Z[sqrt(eps) j] for R = Z.
    """
    lam = q_eval(M, a1)
    if not is_orthobalanced(M, a1, a2, lam):
        raise NotOrthobalanced(f"{(a1, a2)} is not orthobalanced for {M.matrix()}")
    (x, y), (w, z) = a1, a2
    if M.ring is Ring.ZI:
        if M.eps != 1:
            raise Unsupported("quaternion orders with eps != 1 over Z[i]")
        u = Quat.from_pair(conj(z), conj(y))
        v = Quat.from_pair(-w, conj(x))
        return u, v
    return QuadRingElem(z, y, M.eps), QuadRingElem(-w, x, M.eps)


def _parts(q):
    if isinstance(q, Quat):
        return q.pair()
    return q.r, q.s


def f_inv(M: HermForm2, u, v) -> OrthoBasis2:
    """Recover the basis from a factorization ``u*v = nu(beta + delta sqrt(eps) j)``
    with ``|u|^2 = alpha*nu``."""
    if M.ring is Ring.ZI and M.eps != 1:
        raise Unsupported("quaternion orders with eps != 1 over Z[i]")
    nu_u = u.norm()
    if nu_u == 0 or nu_u % M.alpha:
        raise NormMismatch(f"|u|^2 = {nu_u} is not a multiple of alpha = {M.alpha}")
    nu = nu_u // M.alpha
    t_r, t_s = _parts(u * v)
    if t_r != nu * M.beta:
        raise NormMismatch("u*v does not have real part nu*beta")
    nu_delta = t_s
    if norm(nu_delta) != nu * nu * M.Delta:
        raise NormMismatch("u*v does not have the required j-part norm")
    r_u, s_u = _parts(u)
    r_v, s_v = _parts(v)
    z, y = conj(r_u), conj(s_u)
    w, x = -r_v, conj(s_v)
    if M.alpha * nu * x != conj(nu_delta) * conj(z) - nu * M.beta * y:
        raise NonIntegralResult("recovered x disagrees with (conj(delta) conj(z) - beta y)/alpha")
    basis = OrthoBasis2((x, y), (w, z), nu * M.Delta, nu, nu_delta, M)
    if not is_orthobalanced(M, basis.a1, basis.a2, basis.lam):
        raise NonIntegralResult("factorization does not give an orthobalanced basis")
    return basis


def _resolve_nu_delta(M: HermForm2, nu: int, delta, nu_delta):
    if nu_delta is not None:
        nd = coerce(nu_delta, M.ring)
    elif delta is not None:
        if isinstance(delta, tuple):
            num, den = delta
        elif isinstance(delta, Fraction):
            num, den = delta.numerator, delta.denominator
        else:
            num, den = delta, 1
        num = coerce(num, M.ring)
        try:
            nd = exact_div(nu * num, den)
        except ArithmeticError as exc:
            raise NonIntegralDelta(f"nu*delta is not in R for delta={delta}") from exc
    else:
        # default type: an integral delta of absolute square Delta
        root = absolute_sqrt(M.Delta, M.ring)
        if root is None:
            raise IntegralityViolation(f"Delta={M.Delta} is not an absolute square")
        nd = coerce(root, M.ring) * nu
    if norm(nd) != nu * nu * M.Delta:
        raise NonIntegralDelta(f"|delta|^2 != Delta = {M.Delta}")
    return nd


def build_orthoregular(M: HermForm2, lam: int, delta=None, nu_delta=None) -> Optional[OrthoBasis2]:
    """Integral orthobalanced basis of norm ``lam`` and the given type, or None.

    ``delta`` may be an R-element, a :class:`Fraction`, or a pair
    ``(numerator, denominator)``; alternatively pass ``nu_delta`` directly.
    Over Z[i] (eps = 1) a basis always exists; over Z with eps = 1 exactly
    when ``alpha*nu`` is a sum of two squares; over Z with eps > 1 the
    commutative order is searched exhaustively.
    """
    nu = _nu_of(M, lam)
    nd = _resolve_nu_delta(M, nu, delta, nu_delta)
    target = M.alpha * nu
    if M.ring is Ring.ZI:
        if M.eps != 1:
            raise Unsupported("quaternion orders with eps != 1 over Z[i]")
        t = Quat.from_pair(nu * M.beta, nd)
        u, v = lipschitz_left_divisor(t, target)
    elif M.eps == 1:
        if two_squares(target) is None:
            return None
        y = two_squares(target)
        t = GaussInt(nu * M.beta, nd)
        ug, vg = quotient_norm_split(y, t)
        u, v = QuadRingElem.from_gauss(ug), QuadRingElem.from_gauss(vg)
    else:
        t = QuadRingElem(nu * M.beta, nd, M.eps)
        divs = quadring_left_divisors(t, target)
        if not divs:
            return None
        u = divs[0]
        v = t / u
    basis = f_inv(M, u, v)
    assert basis.nu_delta == nd and basis.lam == lam
    return basis.validate()


def _valuation(z: GaussInt, pi: GaussInt) -> float:
    if not z:
        return float("inf")
    e = 0
    while divides(pi, z):
        z = exact_div(z, pi)
        e += 1
    return e


def extend_to_orthoregular(M: HermForm2, a1: Vec2, lam: Optional[int] = None) -> OrthoBasis2:
    """Complete ``a1`` to an integral orthoregular basis of norm ``Q(a1)``."""
    a1 = (coerce(a1[0], M.ring), coerce(a1[1], M.ring))
    q = q_eval(M, a1)
    if lam is not None and q != lam:
        raise NormMismatch(f"Q(a1) = {q} != {lam}")
    lam = q
    if M.eps != 1:
        raise Unsupported("extension is implemented for eps = 1 only")
    nu = _nu_of(M, lam)
    w0, z0 = perp(M.apply(a1))
    w0, z0 = nu * w0, nu * z0
    target = nu * nu * M.Delta
    if M.ring is Ring.Z:
        d0 = 1
        for p, r in factor_int(target).items():
            d0 *= p ** (r // 2)
    else:
        d0 = GaussInt(1, 0)
        for p, r in factor_int(target).items():
            if p == 2:
                d0 = d0 * GaussInt(1, 1) ** r
            elif p % 4 == 3:
                d0 = d0 * GaussInt(p ** (r // 2), 0)
            else:
                pi = split_prime(p)
                pib = normalize(conj(pi))
                rho = min(_valuation(w0, pi), _valuation(z0, pi), r)
                rho = int(rho)
                d0 = d0 * pi ** rho * pib ** (r - rho)
    try:
        a2 = (exact_div(w0, d0), exact_div(z0, d0))
    except ArithmeticError as exc:
        raise IntegralityViolation(f"delta0={d0} does not divide {(w0, z0)}") from exc
    return OrthoBasis2(a1, a2, lam, nu, d0, M).validate()


def is_q_sum_two_squares(M: HermForm2):
    """For an integral form over Z with square determinant, return
    ``(ok, witness)``: ``ok`` says whether alpha (equivalently every value
    of Q) is a sum of two squares; otherwise ``witness`` is the smallest
    prime q = 3 mod 4 dividing alpha to an odd power."""
    if M.ring is not Ring.Z:
        raise ValueError("defined for forms over Z")
    if not is_square(M.mu):
        raise NonSquareDet(f"det {M.mu} is not a square")
    if is_sum_k_squares(M.alpha, 2):
        return True, None
    for p, e in factor_int(M.alpha).items():
        if p % 4 == 3 and e % 2:
            return False, p
    raise AssertionError("unreachable")
