"""Permutations of {1..n} in one-line notation.

Composition follows ``compose(s, t)(x) == s(t(x))``: the right factor acts
first.  Lexicographic rank of the one-line notation indexes map tables.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache

from .errors import DimensionMismatch, IndexOutOfRange, IndicesEqual, SflError

MAX_DEGREE = 8


class Permutation:
    __slots__ = ("images", "_rank")

    def __init__(self, images):
        imgs = tuple(int(x) for x in images)
        if sorted(imgs) != list(range(1, len(imgs) + 1)):
            raise SflError(f"{list(imgs)} is not a permutation of 1..{len(imgs)}")
        self.images = imgs
        self._rank = None

    @classmethod
    def _trusted(cls, imgs: tuple) -> "Permutation":
        p = object.__new__(cls)
        p.images = imgs
        p._rank = None
        return p

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x - 1]

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"Permutation({list(self.images)})"

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls._trusted(tuple(range(1, n + 1)))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> "Permutation":
        if not (1 <= i <= n and 1 <= j <= n):
            raise IndexOutOfRange(f"({i},{j}) outside 1..{n}")
        if i == j:
            raise IndicesEqual(f"transposition needs distinct indices, got {i}")
        imgs = list(range(1, n + 1))
        imgs[i - 1], imgs[j - 1] = j, i
        return cls._trusted(tuple(imgs))

    @classmethod
    def cycle(cls, n: int, *points: int) -> "Permutation":
        """The cycle (p1 p2 ... pk) sending p1 to p2, ..., pk to p1."""
        if len(set(points)) != len(points) or any(not 1 <= x <= n for x in points):
            raise SflError(f"bad cycle {points} in S_{n}")
        imgs = list(range(1, n + 1))
        for a, b in zip(points, points[1:] + points[:1]):
            imgs[a - 1] = b
        return cls._trusted(tuple(imgs))

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, x in enumerate(self.images, 1):
            inv[x - 1] = i
        return Permutation._trusted(tuple(inv))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for start in range(1, self.n + 1):
            if start in seen:
                continue
            cyc = []
            x = start
            while x not in seen:
                seen.add(x)
                cyc.append(x)
                x = self(x)
            out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles()), reverse=True))

    def sign(self) -> int:
        return -1 if (self.n - len(self.cycles())) % 2 else 1

    def nfix(self) -> int:
        return sum(1 for i, x in enumerate(self.images, 1) if i == x)

    def rank(self) -> int:
        if self._rank is None:
            self._rank = lex_rank(self)
        return self._rank


def compose(s: Permutation, t: Permutation) -> Permutation:
    if s.n != t.n:
        raise DimensionMismatch(f"degrees {s.n} and {t.n} differ")
    si = s.images
    return Permutation._trusted(tuple(si[x - 1] for x in t.images))


def lex_rank(p: Permutation) -> int:
    imgs = list(p.images)
    n = len(imgs)
    r = 0
    for i in range(n):
        smaller = sum(1 for y in imgs[i + 1:] if y < imgs[i])
        r += smaller * math.factorial(n - 1 - i)
    return r


def lex_unrank(k: int, n: int) -> Permutation:
    if not 0 <= k < math.factorial(n):
        raise IndexOutOfRange(f"rank {k} outside [0, {n}!)")
    pool = list(range(1, n + 1))
    imgs = []
    for i in range(n, 0, -1):
        q, k = divmod(k, math.factorial(i - 1))
        imgs.append(pool.pop(q))
    return Permutation._trusted(tuple(imgs))


def check_degree(n: int):
    if not 1 <= n <= MAX_DEGREE:
        raise SflError(f"degree {n} outside 1..{MAX_DEGREE}")


class SymmetricGroup:
    """Cached enumeration of S_n in lexicographic order plus index tables."""

    def __init__(self, n: int):
        check_degree(n)
        self.n = n
        self.elements = [Permutation._trusted(t) for t in itertools.permutations(range(1, n + 1))]
        for k, p in enumerate(self.elements):
            p._rank = k
        self.index = {p.images: k for k, p in enumerate(self.elements)}
        self.order = len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return self.order

    def rank(self, p: Permutation) -> int:
        return self.index[p.images]

    @property
    def inverse_table(self) -> list[int]:
        return self._table("inv", lambda: [self.index[p.inverse().images] for p in self.elements])

    @property
    def sign_table(self) -> list[int]:
        return self._table("sgn", lambda: [p.sign() for p in self.elements])

    @property
    def nfix_table(self) -> list[int]:
        return self._table("nfix", lambda: [p.nfix() for p in self.elements])

    @property
    def cycle_type_table(self) -> list[tuple]:
        return self._table("ctype", lambda: [p.cycle_type() for p in self.elements])

    def right_mult_table(self, t: Permutation) -> list[int]:
        """Index of s*t for every s, in rank order."""
        ti = t.images
        return [self.index[tuple(p.images[x - 1] for x in ti)] for p in self.elements]

    def left_mult_table(self, t: Permutation) -> list[int]:
        """Index of t*s for every s, in rank order."""
        ti = t.images
        return [self.index[tuple(ti[x - 1] for x in p.images)] for p in self.elements]

    def _table(self, key, build):
        cache = self.__dict__.setdefault("_tables", {})
        if key not in cache:
            cache[key] = build()
        return cache[key]


@lru_cache(maxsize=None)
def symmetric_group(n: int) -> SymmetricGroup:
    return SymmetricGroup(n)
