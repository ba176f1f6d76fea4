"""Lipschitz and Hurwitz quaternions, and left divisors of prescribed norm.

The central routine is :func:`lipschitz_left_divisor`: given an integral
quaternion ``t`` and ``m | norm(t)`` it returns ``t = u*v`` with
``norm(u) == m``.  Odd primes go through a right-ideal gcd in the Hurwitz
order, the prime 2 through a parity argument.
"""

from __future__ import annotations

from functools import lru_cache

from sympy import sqrt_mod

from .errors import BothZero, NonDivisor, ZeroInput
from .ring import GaussInt, _round_div, factor_int


def _hamilton(a1, b1, c1, d1, a2, b2, c2, d2):
    return (
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    )


class Quat:
    """Lipschitz quaternion ``a + b i + c j + d k`` with integer coordinates."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: int = 0, b: int = 0, c: int = 0, d: int = 0):
        self.a = a
        self.b = b
        self.c = c
        self.d = d

    @classmethod
    def from_pair(cls, r, s) -> "Quat":
        """``r + s j`` for Gaussian integers r, s (so ``s j = j conj(s)``)."""
        r = r if isinstance(r, GaussInt) else GaussInt(r, 0)
        s = s if isinstance(s, GaussInt) else GaussInt(s, 0)
        return cls(r.re, r.im, s.re, s.im)

    def pair(self):
        return GaussInt(self.a, self.b), GaussInt(self.c, self.d)

    def coords(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def norm(self) -> int:
        return self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d

    def conjugate(self) -> "Quat":
        return Quat(self.a, -self.b, -self.c, -self.d)

    def __mul__(self, other):
        if isinstance(other, int):
            return Quat(self.a * other, self.b * other, self.c * other, self.d * other)
        if isinstance(other, Quat):
            return Quat(*_hamilton(self.a, self.b, self.c, self.d,
                                   other.a, other.b, other.c, other.d))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, int):
            other = Quat(other)
        return Quat(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = Quat(other)
        return Quat(self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d)

    def __neg__(self):
        return Quat(-self.a, -self.b, -self.c, -self.d)

    def __eq__(self, other):
        if isinstance(other, int):
            other = Quat(other)
        if not isinstance(other, Quat):
            return NotImplemented
        return self.coords() == other.coords()

    def __hash__(self):
        return hash(("Quat",) + self.coords())

    def __bool__(self):
        return any(self.coords())

    def __repr__(self):
        return f"Quat({self.a}, {self.b}, {self.c}, {self.d})"

    def __str__(self):
        return format_quat(self)

    def exact_div_left(self, u: "Quat") -> "Quat":
        """``u^{-1} * self``; raises NonDivisor if not in the Lipschitz order."""
        n = u.norm()
        p = u.conjugate() * self
        if any(x % n for x in p.coords()):
            raise NonDivisor(f"{u} is not a left divisor of {self}")
        return Quat(*(x // n for x in p.coords()))


def format_quat(q: Quat) -> str:
    out = str(q.a)
    for coef, sym in ((q.b, "i"), (q.c, "j"), (q.d, "k")):
        out += f"{'+' if coef >= 0 else '-'}{abs(coef)}{sym}"
    return out


def quat_mul(x: Quat, y: Quat) -> Quat:
    return x * y


def quat_conj(x: Quat) -> Quat:
    return x.conjugate()


def quat_norm(x: Quat) -> int:
    return x.norm()


class HurwitzQuat:
    """Element of the Hurwitz order, stored as doubled coordinates.

    All four doubled coordinates are even (a Lipschitz element) or all odd
    (the half-integer coset).
    """

    __slots__ = ("A", "B", "C", "D")

    def __init__(self, A: int, B: int, C: int, D: int):
        if not (A % 2 == B % 2 == C % 2 == D % 2):
            raise ValueError("doubled coordinates must share parity")
        self.A, self.B, self.C, self.D = A, B, C, D

    @classmethod
    def from_quat(cls, q: Quat) -> "HurwitzQuat":
        return cls(2 * q.a, 2 * q.b, 2 * q.c, 2 * q.d)

    @classmethod
    def integer(cls, n: int) -> "HurwitzQuat":
        return cls(2 * n, 0, 0, 0)

    def doubled(self) -> tuple:
        return (self.A, self.B, self.C, self.D)

    @property
    def is_lipschitz(self) -> bool:
        return self.A % 2 == 0

    def to_quat(self) -> Quat:
        if not self.is_lipschitz:
            raise ValueError("half-integer Hurwitz element is not Lipschitz")
        return Quat(self.A // 2, self.B // 2, self.C // 2, self.D // 2)

    def norm(self) -> int:
        return (self.A * self.A + self.B * self.B + self.C * self.C + self.D * self.D) // 4

    def conjugate(self) -> "HurwitzQuat":
        return HurwitzQuat(self.A, -self.B, -self.C, -self.D)

    def __mul__(self, other: "HurwitzQuat") -> "HurwitzQuat":
        p = _hamilton(*self.doubled(), *other.doubled())
        return HurwitzQuat(*(x // 2 for x in p))

    def __sub__(self, other: "HurwitzQuat") -> "HurwitzQuat":
        return HurwitzQuat(*(x - y for x, y in zip(self.doubled(), other.doubled())))

    def __bool__(self):
        return any(self.doubled())

    def __eq__(self, other):
        return isinstance(other, HurwitzQuat) and self.doubled() == other.doubled()

    def __hash__(self):
        return hash(("Hurwitz",) + self.doubled())

    def __repr__(self):
        return "HurwitzQuat(%d, %d, %d, %d)" % self.doubled()

    def left_divides(self, other: "HurwitzQuat") -> bool:
        """Whether ``other = self * x`` for some Hurwitz ``x``."""
        n4 = sum(c * c for c in self.doubled())  # 4 * norm
        p = _hamilton(*self.conjugate().doubled(), *other.doubled())  # 4 conj(s) o
        # doubled coords of self^{-1} other are 2 p / n4
        if any((2 * x) % n4 for x in p):
            return False
        q = [(2 * x) // n4 for x in p]
        return q[0] % 2 == q[1] % 2 == q[2] % 2 == q[3] % 2


HURWITZ_UNITS = tuple(
    [HurwitzQuat(*t) for t in (
        (2, 0, 0, 0), (-2, 0, 0, 0), (0, 2, 0, 0), (0, -2, 0, 0),
        (0, 0, 2, 0), (0, 0, -2, 0), (0, 0, 0, 2), (0, 0, 0, -2))]
    + [HurwitzQuat(a, b, c, d)
       for a in (1, -1) for b in (1, -1) for c in (1, -1) for d in (1, -1)]
)


def _nearest_quotient(x: HurwitzQuat, y: HurwitzQuat) -> HurwitzQuat:
    """Hurwitz q minimizing norm(x - y q); ties broken by smallest doubled tuple."""
    p = _hamilton(*y.conjugate().doubled(), *x.doubled())
    den = sum(c * c for c in y.doubled())
    # target doubled coordinates are 2 p_i / den
    lip = tuple(2 * _round_div(pi, den) for pi in p)
    half = tuple(2 * _round_div(2 * pi - den, 2 * den) + 1 for pi in p)

    def dist(q):
        return sum((den * qi - 2 * pi) ** 2 for qi, pi in zip(q, p))

    best = min((dist(lip), lip), (dist(half), half))
    return HurwitzQuat(*best[1])


def canonical_right_associate(u: HurwitzQuat) -> HurwitzQuat:
    """The right associate ``u*e`` (e one of the 24 units) with the
    lexicographically largest doubled-coordinate tuple."""
    return max((u * e for e in HURWITZ_UNITS), key=lambda q: q.doubled())


def hurwitz_right_gcd(a: HurwitzQuat, b: HurwitzQuat) -> HurwitzQuat:
    """Generator ``g`` of the right ideal ``a S' + b S' = g S'``.

    Computed with euclidean division in the Hurwitz order; the result is
    canonical among its right associates.
    """
    if not isinstance(a, HurwitzQuat):
        a = HurwitzQuat.from_quat(a) if isinstance(a, Quat) else HurwitzQuat.integer(a)
    if not isinstance(b, HurwitzQuat):
        b = HurwitzQuat.from_quat(b) if isinstance(b, Quat) else HurwitzQuat.integer(b)
    if not a and not b:
        raise BothZero("right gcd of two zeros is undefined")
    x, y = a, b
    while y:
        q = _nearest_quotient(x, y)
        r = x - y * q
        assert r.norm() < y.norm()
        x, y = y, r
    return canonical_right_associate(x)


def _omega_for(g: HurwitzQuat) -> HurwitzQuat:
    """The half-unit w with ``(g + w)/2`` Lipschitz (g in the odd coset)."""
    w = tuple(1 if c % 4 == 3 else -1 for c in g.doubled())
    assert all((c + wc) % 4 == 0 for c, wc in zip(g.doubled(), w))
    return HurwitzQuat(*w)


def _small_case(t: Quat, p: int):
    """Left divisor of norm p for odd prime p, when p | norm(t) < p^2."""
    g = hurwitz_right_gcd(HurwitzQuat.integer(p), HurwitzQuat.from_quat(t))
    if g.norm() != p:
        raise AssertionError(f"gcd({p}, {t}) has norm {g.norm()}")
    if g.is_lipschitz:
        u = g.to_quat()
    else:
        u = (g * _omega_for(g).conjugate()).to_quat()
    return u, t.exact_div_left(u)


@lru_cache(maxsize=1024)
def _element_of_norm(p: int) -> Quat:
    """Some Lipschitz quaternion of odd prime norm p."""
    for a in range(p):
        rem = (-1 - a * a) % p
        b = 0 if rem == 0 else sqrt_mod(rem, p)
        if b is None:
            continue
        a_c = a - p if 2 * a > p else a
        b_c = b - p if 2 * b > p else b
        x = Quat(1, a_c, b_c, 0)
        return _small_case(x, p)[0]
    raise AssertionError(f"no element of norm {p}")


def _centered(x: int, p: int) -> int:
    r = x % p
    return r - p if 2 * r > p else r


def _prime_left_divisor(t: Quat, p: int):
    if p == 2:
        ta, tb, tc, td = t.coords()
        if (ta - tb) % 2 == 0:
            u = Quat(1, 1, 0, 0)
        elif (ta - tc) % 2 == 0:
            u = Quat(1, 0, 1, 0)
        else:
            u = Quat(1, 0, 0, 1)
        return u, t.exact_div_left(u)
    if t.norm() < p * p:
        return _small_case(t, p)
    residue = Quat(*(_centered(x, p) for x in t.coords()))
    m = Quat(*((x - y) // p for x, y in zip(t.coords(), residue.coords())))
    if not residue:
        # t = p m: any u of norm p works since p = u conj(u)
        u = _element_of_norm(p)
        return u, u.conjugate() * m
    u, v = _small_case(residue, p)
    return u, v + u.conjugate() * m


def lipschitz_left_divisor(t: Quat, m: int):
    """Factor ``t = u * v`` in the Lipschitz order with ``norm(u) == m``.

    The primes of ``m`` are peeled off in ascending order.
    """
    if not t:
        raise ZeroInput("t must be nonzero")
    if m <= 0 or t.norm() % m:
        raise NonDivisor(f"{m} does not divide norm {t.norm()}")
    u_total = Quat(1)
    v = t
    for p, e in factor_int(m).items():
        for _ in range(e):
            u, v = _prime_left_divisor(v, p)
            u_total = u_total * u
    return u_total, v


def factor_chain(t: Quat, norms) -> list:
    """Factors ``q_1 ... q_n = t`` with ``norm(q_i) == norms[i]``."""
    norms = list(norms)
    prod = 1
    for n in norms:
        prod *= n
    if prod != t.norm():
        raise NonDivisor(f"norms multiply to {prod}, not {t.norm()}")
    out = []
    rest = t
    for n in norms[:-1]:
        u, rest = lipschitz_left_divisor(rest, n)
        out.append(u)
    out.append(rest)
    return out
