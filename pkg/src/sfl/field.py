"""Exact scalar arithmetic over GF(p) and the rationals.

Elements are plain canonical Python values: an ``int`` in ``[0, p)`` for a
prime field and a :class:`fractions.Fraction` for the rationals.  A
:class:`Field` instance carries the arithmetic; elements never carry a
back-reference to their field.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache

from .errors import FieldMismatch, SflError

DLOG_TABLE_LIMIT = 1 << 20
SQRT_SEARCH_LIMIT = 1 << 20


def is_prime(p: int) -> bool:
    """Trial division; fine for p < 2**31."""
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def factorize(m: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= m:
        while m % d == 0:
            out[d] = out.get(d, 0) + 1
            m //= d
        d += 1 if d == 2 else 2
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


@dataclass(frozen=True)
class Field:
    """Either ``Field.gf(p)`` or ``Field.rationals()``."""

    kind: str
    p: int = 0
    _cache: dict = dc_field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.kind == "gfp":
            if not (2 <= self.p < 2**31) or not is_prime(self.p):
                raise SflError(f"modulus {self.p} is not a prime in [2, 2^31)")
        elif self.kind == "rational":
            if self.p != 0:
                raise SflError("rational field takes no modulus")
        else:
            raise SflError(f"unknown field kind {self.kind!r}")

    @staticmethod
    def gf(p: int) -> "Field":
        return _gf(p)

    @staticmethod
    def rationals() -> "Field":
        return _Q

    def __repr__(self):
        return f"GF({self.p})" if self.is_finite else "QQ"

    # -- basic structure -------------------------------------------------

    @property
    def is_finite(self) -> bool:
        return self.kind == "gfp"

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def order(self) -> int | None:
        return self.p if self.is_finite else None

    @property
    def zero(self):
        return 0 if self.is_finite else Fraction(0)

    @property
    def one(self):
        return 1 if self.is_finite else Fraction(1)

    def __call__(self, x):
        """Coerce an int, Fraction or "num/den" string into canonical form."""
        if isinstance(x, str):
            x = Fraction(x)
        if self.is_finite:
            if isinstance(x, Fraction):
                if x.denominator % self.p == 0:
                    raise ZeroDivisionError(f"{x} has no image in GF({self.p})")
                return x.numerator * pow(x.denominator, -1, self.p) % self.p
            if isinstance(x, bool) or not isinstance(x, int):
                raise SflError(f"cannot coerce {x!r} into GF({self.p})")
            return x % self.p
        if isinstance(x, bool):
            raise SflError(f"cannot coerce {x!r} into QQ")
        return Fraction(x)

    def contains(self, x) -> bool:
        if self.is_finite:
            return type(x) is int and 0 <= x < self.p
        return isinstance(x, Fraction)

    def check(self, x):
        if not self.contains(x):
            raise FieldMismatch(f"{x!r} is not a canonical element of {self}")
        return x

    # -- arithmetic --------------------------------------------------------

    def add(self, a, b):
        return (a + b) % self.p if self.is_finite else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.is_finite else a - b

    def neg(self, a):
        return (-a) % self.p if self.is_finite else -a

    def mul(self, a, b):
        return (a * b) % self.p if self.is_finite else a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("division by zero in field")
        return pow(a, -1, self.p) if self.is_finite else 1 / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        if self.is_finite:
            if e < 0:
                a, e = self.inv(a), -e
            return pow(a, e, self.p)
        return a**e

    def prod(self, values):
        out = self.one
        if self.is_finite:
            p = self.p
            for v in values:
                out = out * v % p
            return out
        for v in values:
            out *= v
        return out

    def sum(self, values):
        if self.is_finite:
            return sum(values) % self.p
        return sum(values, Fraction(0))

    # -- serialization -----------------------------------------------------

    def to_json(self, a):
        if self.is_finite:
            return a
        return f"{a.numerator}/{a.denominator}"

    def from_json(self, v):
        if self.is_finite:
            if isinstance(v, bool) or not isinstance(v, int) or not 0 <= v < self.p:
                raise SflError(f"{v!r} is not an integer in [0, {self.p})")
            return v
        if isinstance(v, int) and not isinstance(v, bool):
            return Fraction(v)
        if isinstance(v, str):
            try:
                return Fraction(v)
            except ValueError:
                raise SflError(f"{v!r} is not a rational 'num/den'") from None
        raise SflError(f"{v!r} is not a rational")

    def describe(self) -> dict:
        if self.is_finite:
            return {"kind": "gfp", "p": self.p}
        return {"kind": "rational"}

    # -- sampling ------------------------------------------------------------

    def random_element(self, rng: random.Random, nonzero: bool = False, bound: int = 1 << 20):
        """Uniform over GF(p); over QQ, uniform integer in [-bound, bound]."""
        if self.is_finite:
            lo = 1 if nonzero else 0
            return rng.randrange(lo, self.p)
        while True:
            v = Fraction(rng.randint(-bound, bound))
            if v or not nonzero:
                return v

    def elements(self):
        if not self.is_finite:
            raise SflError("cannot enumerate an infinite field")
        return range(self.p)

    # -- roots and logarithms ----------------------------------------------

    def sqrt(self, a):
        """A square root of ``a`` in the field, or None."""
        if a == 0:
            return self.zero
        if not self.is_finite:
            return _rational_root(a, 2)
        p = self.p
        if p == 2:
            return a
        if p < SQRT_SEARCH_LIMIT:
            table = self._cache.get("sqrt")
            if table is None:
                table = {}
                for x in range(1, (p + 1) // 2):
                    table.setdefault(x * x % p, x)
                self._cache["sqrt"] = table
            return table.get(a)
        return _tonelli_shanks(a, p)

    def primitive_root(self) -> int:
        if not self.is_finite:
            raise SflError("QQ* is not cyclic")
        g = self._cache.get("generator")
        if g is None:
            g = _primitive_root(self.p)
            self._cache["generator"] = g
        return g

    def dlog(self, a) -> int:
        """Exponent ``x`` in ``[0, p-1)`` with ``primitive_root() ** x == a``."""
        if a == 0:
            raise ZeroDivisionError("log of zero")
        p = self.p
        if p < DLOG_TABLE_LIMIT:
            table = self._cache.get("dlog")
            if table is None:
                g = self.primitive_root()
                table = {}
                x = 1
                for e in range(p - 1):
                    table[x] = e
                    x = x * g % p
                self._cache["dlog"] = table
            return table[a]
        return _bsgs(self.primitive_root(), a, p)

    def solve_powers(self, equations):
        """Find ``a`` in F* with ``a**d == r`` for every ``(d, r)`` pair.

        Returns one solution or None.  Over GF(p) the system becomes linear
        congruences in ``log a``; over QQ candidates are exact rational roots.
        """
        eqs = [(d, r) for d, r in equations]
        for d, r in eqs:
            if r == 0:
                return None
        if self.is_finite:
            m = self.p - 1
            x0, mod = 0, 1
            for d, r in eqs:
                sol = _solve_congruence(d % m, self.dlog(r), m)
                if sol is None:
                    return None
                merged = _crt_merge(x0, mod, *sol)
                if merged is None:
                    return None
                x0, mod = merged
            return pow(self.primitive_root(), x0, self.p)
        nontrivial = [(d, r) for d, r in eqs if d != 0]
        for d, r in eqs:
            if d == 0 and r != 1:
                return None
        if not nontrivial:
            return self.one
        d0, r0 = min(nontrivial, key=lambda e: abs(e[0]))
        if d0 < 0:
            d0, r0 = -d0, 1 / r0
        root = _rational_root(r0, d0)
        if root is None:
            return None
        candidates = [root, -root] if d0 % 2 == 0 else [root]
        for c in candidates:
            if all(c**d == r for d, r in eqs):
                return c
        return None


@lru_cache(maxsize=None)
def _gf(p: int) -> Field:
    return Field("gfp", p)


_Q = Field("rational")


def _primitive_root(p: int) -> int:
    if p == 2:
        return 1
    primes = list(factorize(p - 1))
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in primes):
            return g
    raise AssertionError("no primitive root")  # unreachable for prime p


def _tonelli_shanks(a: int, p: int):
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def _bsgs(g: int, a: int, p: int) -> int:
    n = p - 1
    m = math.isqrt(n) + 1
    baby = {}
    x = 1
    for j in range(m):
        baby.setdefault(x, j)
        x = x * g % p
    step = pow(g, -m, p)
    y = a
    for i in range(m):
        if y in baby:
            return (i * m + baby[y]) % n
        y = y * step % p
    raise SflError(f"{a} has no logarithm base {g} mod {p}")


def _solve_congruence(d: int, b: int, m: int):
    """Solutions of d*x = b (mod m) as (x0, modulus) or None."""
    g = math.gcd(d, m)
    if b % g:
        return None
    m2 = m // g
    if m2 == 1:
        return 0, 1
    return (b // g) * pow(d // g, -1, m2) % m2, m2


def _crt_merge(a1: int, m1: int, a2: int, m2: int):
    g = math.gcd(m1, m2)
    if (a2 - a1) % g:
        return None
    lcm = m1 // g * m2
    h = m2 // g
    t = ((a2 - a1) // g) * pow(m1 // g, -1, h) % h if h > 1 else 0
    return (a1 + m1 * t) % lcm, lcm


def _int_root(n: int, k: int):
    if n < 0:
        return None
    r = round(n ** (1.0 / k)) if n < 1 << 1000 else None
    if r is None or r**k != n:
        lo, hi = 0, 1 << (n.bit_length() // k + 1)
        while lo < hi:
            mid = (lo + hi) // 2
            if mid**k < n:
                lo = mid + 1
            else:
                hi = mid
        r = lo
    for c in (r - 1, r, r + 1):
        if c >= 0 and c**k == n:
            return c
    return None


def _rational_root(a: Fraction, k: int):
    """A rational k-th root of a (the positive one for even k), or None."""
    a = Fraction(a)
    sign = 1
    if a < 0:
        if k % 2 == 0:
            return None
        sign, a = -1, -a
    num = _int_root(a.numerator, k)
    den = _int_root(a.denominator, k)
    if num is None or den is None:
        return None
    return sign * Fraction(num, den)
