"""Exact arithmetic in Z and Z[i].

Rational integers are plain Python ``int``; Gaussian integers are
:class:`GaussInt`.  The module-level helpers (:func:`norm`, :func:`conj`,
:func:`ediv`, :func:`gcd`, ...) accept either, so matrix code further up the
stack is written once for both rings.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

from sympy import factorint, sqrt_mod

from .errors import DivisibilityViolation, ZeroInput


class Ring(str, enum.Enum):
    Z = "Z"
    ZI = "Zi"

    @classmethod
    def parse(cls, text: str) -> "Ring":
        key = text.strip().lower().replace("[", "").replace("]", "")
        if key in ("z",):
            return cls.Z
        if key in ("zi", "gaussian"):
            return cls.ZI
        raise ValueError(f"unknown ring {text!r}")


class GaussInt:
    """Gaussian integer ``re + im*i``.  Instances are treated as immutable."""

    __slots__ = ("re", "im")

    def __init__(self, re: int = 0, im: int = 0):
        self.re = re
        self.im = im

    # int-compatible surface, so generic code can call x.conjugate() etc.
    @property
    def real(self) -> int:
        return self.re

    @property
    def imag(self) -> int:
        return self.im

    def conjugate(self) -> "GaussInt":
        return GaussInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def __repr__(self) -> str:
        return f"GaussInt({self.re}, {self.im})"

    def __str__(self) -> str:
        return format_gauss(self)

    def __eq__(self, other) -> bool:
        if isinstance(other, GaussInt):
            return self.re == other.re and self.im == other.im
        if isinstance(other, int):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.re) if self.im == 0 else hash((self.re, self.im))

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __neg__(self) -> "GaussInt":
        return GaussInt(-self.re, -self.im)

    def __add__(self, other):
        if isinstance(other, GaussInt):
            return GaussInt(self.re + other.re, self.im + other.im)
        if isinstance(other, int):
            return GaussInt(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GaussInt):
            return GaussInt(self.re - other.re, self.im - other.im)
        if isinstance(other, int):
            return GaussInt(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, int):
            return GaussInt(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, GaussInt):
            a, b, c, d = self.re, self.im, other.re, other.im
            return GaussInt(a * c - b * d, a * d + b * c)
        if isinstance(other, int):
            return GaussInt(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "GaussInt":
        if e < 0:
            raise ValueError("negative exponent")
        result = GaussInt(1, 0)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __iter__(self):
        yield self.re
        yield self.im


ONE = GaussInt(1, 0)
I = GaussInt(0, 1)
GAUSS_UNITS = (GaussInt(1, 0), GaussInt(0, 1), GaussInt(-1, 0), GaussInt(0, -1))

Elem = Union[int, GaussInt]


def format_gauss(z: Elem) -> str:
    """Render as ``a``, ``a+bi``, ``a-bi``, ``bi`` or ``i``."""
    if isinstance(z, int):
        return str(z)
    a, b = z.re, z.im
    if b == 0:
        return str(a)
    if b == 1:
        ims = "i"
    elif b == -1:
        ims = "-i"
    else:
        ims = f"{b}i"
    if a == 0:
        return ims
    return f"{a}{'' if ims.startswith('-') else '+'}{ims}"


# ---------------------------------------------------------------------------
# ring-generic helpers


def coerce(x, ring: Ring) -> Elem:
    if ring is Ring.ZI:
        if isinstance(x, GaussInt):
            return x
        if isinstance(x, int):
            return GaussInt(x, 0)
        if isinstance(x, complex):
            if x.real != int(x.real) or x.imag != int(x.imag):
                raise ValueError(f"{x!r} is not a Gaussian integer")
            return GaussInt(int(x.real), int(x.imag))
        raise TypeError(f"cannot coerce {x!r} to Z[i]")
    if isinstance(x, GaussInt):
        if x.im != 0:
            raise ValueError(f"{x} is not a rational integer")
        return x.re
    if isinstance(x, int):
        return x
    raise TypeError(f"cannot coerce {x!r} to Z")


def zero(ring: Ring) -> Elem:
    return GaussInt(0, 0) if ring is Ring.ZI else 0


def one(ring: Ring) -> Elem:
    return GaussInt(1, 0) if ring is Ring.ZI else 1


def units(ring: Ring) -> tuple:
    return GAUSS_UNITS if ring is Ring.ZI else (1, -1)


def ring_of(x: Elem) -> Ring:
    return Ring.ZI if isinstance(x, GaussInt) else Ring.Z


def norm(x: Elem) -> int:
    if isinstance(x, GaussInt):
        return x.re * x.re + x.im * x.im
    return x * x


def conj(x: Elem) -> Elem:
    if isinstance(x, GaussInt):
        return GaussInt(x.re, -x.im)
    return x


def _round_div(a: int, b: int) -> int:
    """Nearest integer to a/b for b > 0, ties rounded down."""
    return -((-2 * a + b) // (2 * b))


def ediv(a: Elem, b: Elem):
    """Euclidean division ``a = q*b + r`` with ``norm(r) < norm(b)``.

    Over Z this is floor division.  Over Z[i] the quotient is the rounded
    exact quotient, so ``norm(r) <= norm(b)/2``.
    """
    if isinstance(a, GaussInt) or isinstance(b, GaussInt):
        if not isinstance(a, GaussInt):
            a = GaussInt(a, 0)
        if not isinstance(b, GaussInt):
            b = GaussInt(b, 0)
        n = b.re * b.re + b.im * b.im
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian integer")
        # a * conj(b)
        pr = a.re * b.re + a.im * b.im
        pi = a.im * b.re - a.re * b.im
        q = GaussInt(_round_div(pr, n), _round_div(pi, n))
        return q, a - q * b
    q, r = divmod(a, b)
    return q, r


def exact_div(a: Elem, b: Elem) -> Elem:
    """Quotient ``a/b``; raises :class:`DivisibilityViolation` if inexact."""
    if isinstance(a, GaussInt) or isinstance(b, GaussInt):
        if not isinstance(a, GaussInt):
            a = GaussInt(a, 0)
        if not isinstance(b, GaussInt):
            b = GaussInt(b, 0)
        n = b.re * b.re + b.im * b.im
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian integer")
        pr = a.re * b.re + a.im * b.im
        pi = a.im * b.re - a.re * b.im
        if pr % n or pi % n:
            raise DivisibilityViolation(f"{b} does not divide {a}")
        return GaussInt(pr // n, pi // n)
    if b == 0:
        raise ZeroDivisionError("division by zero")
    if a % b:
        raise DivisibilityViolation(f"{b} does not divide {a}")
    return a // b


def divides(b: Elem, a: Elem) -> bool:
    """True when ``b | a``; zero divides only zero."""
    if not b:
        return not a
    if isinstance(a, GaussInt) or isinstance(b, GaussInt):
        if not isinstance(a, GaussInt):
            a = GaussInt(a, 0)
        if not isinstance(b, GaussInt):
            b = GaussInt(b, 0)
        n = b.re * b.re + b.im * b.im
        pr = a.re * b.re + a.im * b.im
        pi = a.im * b.re - a.re * b.im
        return pr % n == 0 and pi % n == 0
    return a % b == 0


def normalizing_unit(x: Elem) -> Elem:
    """The unit ``u`` with ``u*x`` normalized (re > 0, im >= 0); 1 for zero."""
    if isinstance(x, GaussInt):
        a, b = x.re, x.im
        if a > 0 and b >= 0:
            return GAUSS_UNITS[0]
        if b > 0 and a <= 0:  # x in Q2: multiply by -i
            return GAUSS_UNITS[3]
        if a < 0 and b <= 0:
            return GAUSS_UNITS[2]
        if b < 0 and a >= 0:
            return GAUSS_UNITS[1]
        return GAUSS_UNITS[0]
    return -1 if x < 0 else 1


def normalize(x: Elem) -> Elem:
    """Canonical associate: re > 0 and im >= 0 (positive over Z); 0 stays 0."""
    if isinstance(x, GaussInt):
        a, b = x.re, x.im
        if a > 0 and b >= 0:
            return x
        if b > 0 and a <= 0:
            return GaussInt(b, -a)
        if a < 0 and b <= 0:
            return GaussInt(-a, -b)
        if b < 0 and a >= 0:
            return GaussInt(-b, a)
        return x
    return -x if x < 0 else x


def is_unit(x: Elem) -> bool:
    return norm(x) == 1


def gauss_gcd(a: Elem, b: Elem) -> Elem:
    """Normalized generator of the ideal (a, b); ``gauss_gcd(0, 0) == 0``."""
    if not isinstance(a, GaussInt) and not isinstance(b, GaussInt):
        return math.gcd(a, b)
    if not isinstance(a, GaussInt):
        a = GaussInt(a, 0)
    if not isinstance(b, GaussInt):
        b = GaussInt(b, 0)
    while b:
        _, r = ediv(a, b)
        a, b = b, r
    return normalize(a)


gcd = gauss_gcd


def xgcd(a: Elem, b: Elem):
    """Return ``(g, s, t)`` with ``s*a + t*b == g`` and g normalized."""
    gaussian = isinstance(a, GaussInt) or isinstance(b, GaussInt)
    if gaussian:
        a = a if isinstance(a, GaussInt) else GaussInt(a, 0)
        b = b if isinstance(b, GaussInt) else GaussInt(b, 0)
        s0, s1, t0, t1 = GaussInt(1, 0), GaussInt(0, 0), GaussInt(0, 0), GaussInt(1, 0)
    else:
        s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = ediv(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    u = normalizing_unit(a)
    return a * u, s0 * u, t0 * u


def gcd_many(values) -> Elem:
    g = None
    for v in values:
        g = v if g is None else gcd(g, v)
    return normalize(g) if g is not None else 0


# ---------------------------------------------------------------------------
# rational factorization and sums of two squares


@lru_cache(maxsize=65536)
def _factor_cached(n: int) -> tuple:
    return tuple(sorted(factorint(n).items()))


def factor_int(n: int) -> dict:
    """Prime factorization of a positive integer, as an ordered dict."""
    if n <= 0:
        raise ValueError("factor_int needs a positive integer")
    if n == 1:
        return {}
    return dict(_factor_cached(n))


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def is_sum_k_squares(n: int, k: int) -> bool:
    """Whether ``n`` is a sum of ``k`` squares, for k in {1, 2, 4}."""
    if k not in (1, 2, 4):
        raise ValueError(f"k must be 1, 2 or 4, got {k}")
    if n < 0:
        return False
    if k == 1:
        return is_square(n)
    if k == 4:
        return True
    if n == 0:
        return True
    return all(e % 2 == 0 for p, e in factor_int(n).items() if p % 4 == 3)


@lru_cache(maxsize=4096)
def split_prime(p: int) -> GaussInt:
    """Normalized Gaussian prime of norm p (p = 2 or p = 1 mod 4).

    Of the two conjugate primes above p, returns the one that sorts first by
    (norm, re, im).
    """
    if p == 2:
        return GaussInt(1, 1)
    if p % 4 != 1:
        raise ValueError(f"{p} does not split in Z[i]")
    x = sqrt_mod(-1, p)
    g = gauss_gcd(GaussInt(p, 0), GaussInt(x, 1))
    other = normalize(conj(g))
    return min(g, other, key=lambda z: (z.re, z.im))


def _sort_key(z: GaussInt):
    return (z.norm(), z.re, z.im)


@dataclass(frozen=True)
class GaussFactorization:
    unit: GaussInt
    factors: tuple  # ((prime, exponent), ...)

    def value(self) -> GaussInt:
        out = self.unit
        for p, e in self.factors:
            out = out * p ** e
        return out


def _valuation(z: GaussInt, pi: GaussInt):
    e = 0
    while divides(pi, z):
        z = exact_div(z, pi)
        e += 1
    return e, z


def gauss_factor(z: Elem) -> GaussFactorization:
    """Factor a nonzero Gaussian integer into normalized primes and a unit."""
    z = coerce(z, Ring.ZI)
    if not z:
        raise ZeroInput("cannot factor zero")
    factors = []
    for p, e in factor_int(z.norm()).items():
        if p == 2:
            pi = GaussInt(1, 1)
            z = exact_div(z, pi ** e)
            factors.append((pi, e))
        elif p % 4 == 3:
            z = exact_div(z, GaussInt(p ** (e // 2), 0))
            factors.append((GaussInt(p, 0), e // 2))
        else:
            pi = split_prime(p)
            pib = normalize(conj(pi))
            e1, z = _valuation(z, pi)
            if e1 < e:
                z = exact_div(z, pib ** (e - e1))
            if e1:
                factors.append((pi, e1))
            if e - e1:
                factors.append((pib, e - e1))
    factors.sort(key=lambda f: _sort_key(f[0]))
    assert z.norm() == 1
    return GaussFactorization(unit=z, factors=tuple(factors))


def two_squares(n: int) -> Optional[GaussInt]:
    """A Gaussian integer of norm ``n`` with re >= im >= 0, or None.

    Built from the Gaussian prime factorization; deterministic.
    """
    if n < 0:
        return None
    if n == 0:
        return GaussInt(0, 0)
    y = GaussInt(1, 0)
    for p, e in factor_int(n).items():
        if p % 4 == 3:
            if e % 2:
                return None
            y = y * p ** (e // 2)
        else:
            y = y * split_prime(p) ** e
    a, b = abs(y.re), abs(y.im)
    return GaussInt(max(a, b), min(a, b))


def two_squares_bruteforce(n: int) -> Optional[GaussInt]:
    """Exhaustive scan; the oracle for :func:`two_squares`."""
    if n < 0:
        return None
    a = math.isqrt(n)
    while 2 * a * a >= n:
        b2 = n - a * a
        b = math.isqrt(b2)
        if b * b == b2:
            return GaussInt(a, b)
        a -= 1
    return None


def quotient_norm_split(alpha: Elem, beta: Elem):
    """Return ``(alpha1, gamma)`` with ``alpha1 | beta``, ``norm(alpha1) ==
    norm(alpha)`` and ``gamma == beta / alpha1``.

    ``alpha`` is rebalanced prime by prime: wherever a split prime divides
    ``alpha`` more often than ``beta``, the surplus factors are swapped for
    their conjugates.
    """
    alpha = coerce(alpha, Ring.ZI)
    beta = coerce(beta, Ring.ZI)
    if not alpha or not beta:
        raise ZeroInput("quotient_norm_witness needs nonzero arguments")
    if beta.norm() % alpha.norm():
        raise DivisibilityViolation(
            f"norm {alpha.norm()} does not divide norm {beta.norm()}"
        )
    a1 = alpha
    for pi, r in gauss_factor(alpha).factors:
        if pi.norm() % 4 != 1:
            continue
        cur, _ = _valuation(a1, pi)
        r_beta, _ = _valuation(beta, pi)
        if cur > r_beta:
            k = cur - r_beta
            a1 = exact_div(a1 * normalize(conj(pi)) ** k, pi ** k)
    return a1, exact_div(beta, a1)


def quotient_norm_witness(alpha: Elem, beta: Elem) -> GaussInt:
    """``gamma`` with ``norm(gamma) == norm(beta) / norm(alpha)``."""
    return quotient_norm_split(alpha, beta)[1]


def eps_delta_split(mu, ring: Ring):
    """Split a positive rational ``mu = Delta * eps``.

    ``Delta`` is an absolute square in the fraction field of ``ring`` and
    ``eps`` a positive integer with no absolute-square divisor besides 1.
    Returns ``(Delta, eps)`` with ``Delta`` a :class:`Fraction`.
    """
    mu = Fraction(mu)
    if mu <= 0:
        raise ValueError("mu must be positive")
    exps: dict = {}
    if mu.numerator > 1:
        for p, e in factor_int(mu.numerator).items():
            exps[p] = exps.get(p, 0) + e
    if mu.denominator > 1:
        for p, e in factor_int(mu.denominator).items():
            exps[p] = exps.get(p, 0) - e
    eps = 1
    for p, e in exps.items():
        if e % 2 and (ring is Ring.Z or p % 4 == 3):
            eps *= p
    return mu / eps, eps


def is_absolute_square(n: int, ring: Ring) -> bool:
    """Whether the integer ``n`` is ``|y|^2`` for some y in ``ring``."""
    return is_sum_k_squares(n, 1 if ring is Ring.Z else 2)


def absolute_sqrt(n: int, ring: Ring) -> Optional[Elem]:
    """Some ``y`` with ``norm(y) == n`` in ``ring`` (None if impossible)."""
    if ring is Ring.Z:
        return math.isqrt(n) if is_square(n) else None
    return two_squares(n)


# ---------------------------------------------------------------------------
# the commutative order Z[sqrt(eps) j] used when R = Z


@dataclass(frozen=True)
class QuadRingElem:
    """``r + s*sqrt(eps)*j`` with ``(sqrt(eps) j)^2 = -eps``."""

    r: int
    s: int
    eps: int = 1

    def norm(self) -> int:
        return self.r * self.r + self.eps * self.s * self.s

    def conjugate(self) -> "QuadRingElem":
        return QuadRingElem(self.r, -self.s, self.eps)

    def __mul__(self, other: "QuadRingElem") -> "QuadRingElem":
        if isinstance(other, int):
            return QuadRingElem(self.r * other, self.s * other, self.eps)
        if other.eps != self.eps:
            raise ValueError("mixing different eps")
        return QuadRingElem(
            self.r * other.r - self.eps * self.s * other.s,
            self.r * other.s + self.s * other.r,
            self.eps,
        )

    __rmul__ = __mul__

    def __add__(self, other: "QuadRingElem") -> "QuadRingElem":
        return QuadRingElem(self.r + other.r, self.s + other.s, self.eps)

    def divides(self, other: "QuadRingElem") -> bool:
        n = self.norm()
        if n == 0:
            return other.norm() == 0
        p = other * self.conjugate()
        return p.r % n == 0 and p.s % n == 0

    def __truediv__(self, other: "QuadRingElem") -> "QuadRingElem":
        n = other.norm()
        p = self * other.conjugate()
        if p.r % n or p.s % n:
            raise DivisibilityViolation(f"{other} does not divide {self}")
        return QuadRingElem(p.r // n, p.s // n, self.eps)

    def to_gauss(self) -> GaussInt:
        if self.eps != 1:
            raise ValueError("only eps = 1 elements are Gaussian integers")
        return GaussInt(self.r, self.s)

    @classmethod
    def from_gauss(cls, z: GaussInt) -> "QuadRingElem":
        return cls(z.re, z.im, 1)

    def __str__(self) -> str:
        root = "j" if self.eps == 1 else f"sqrt({self.eps})j"
        return f"{self.r}{'+' if self.s >= 0 else '-'}{abs(self.s)}*{root}"


def quadring_left_divisors(t: QuadRingElem, m: int) -> list:
    """All ``u`` in Z[sqrt(eps) j] with ``norm(u) == m`` dividing ``t``."""
    eps = t.eps
    out = []
    s = 0
    while eps * s * s <= m:
        r2 = m - eps * s * s
        r = math.isqrt(r2)
        if r * r == r2:
            for rs in {r, -r}:
                for ss in {s, -s}:
                    u = QuadRingElem(rs, ss, eps)
                    if u.divides(t):
                        out.append(u)
        s += 1
    out.sort(key=lambda u: (-u.r, -u.s))
    return out
