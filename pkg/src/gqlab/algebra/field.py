"""Finite fields GF(q) for q = p^h <= 16 (tables are cheap at this size).

Elements are the integers 0..q-1.  The integer ``a`` encodes the polynomial
sum(c_i x^i) with base-p digits ``c_i`` of ``a``, so 0 is zero, 1 is one and,
for h > 1, ``p`` is the adjoined root ``x``.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

import numpy as np

from ..errors import DivisionByZero, NotPrimePower

MAX_FIELD_ORDER = 16


def prime_power(q: int) -> tuple[int, int] | None:
    """Return (p, h) with q = p**h, or None."""
    if q < 2:
        return None
    p = 2
    while p * p <= q and q % p:
        p += 1
    if q % p:
        p = q
    h, r = 0, q
    while r % p == 0:
        r //= p
        h += 1
    return (p, h) if r == 1 else None


def _poly_mulmod(a, b, modulus, p):
    """Multiply coefficient lists (low degree first) modulo a monic polynomial."""
    h = len(modulus) - 1
    prod = [0] * (2 * h - 1 if h else 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    for d in range(len(prod) - 1, h - 1, -1):
        c = prod[d]
        if c:
            for k in range(h + 1):
                prod[d - h + k] = (prod[d - h + k] - c * modulus[k]) % p
    return prod[:h]


def _is_irreducible(low, p, h):
    """True iff x^h + sum(low[i] x^i) is irreducible over GF(p) (brute force, h <= 4)."""
    target = list(low) + [1]
    # try every monic divisor of degree 1..h//2
    for d in range(1, h // 2 + 1):
        for coeffs in product(range(p), repeat=d):
            divisor = list(coeffs) + [1]
            rem = list(target)
            for i in range(len(rem) - 1, d - 1, -1):
                c = rem[i]
                if c:
                    for k in range(d + 1):
                        rem[i - d + k] = (rem[i - d + k] - c * divisor[k]) % p
            if not any(rem[:d]):
                return False
    return True


def least_irreducible(p: int, h: int) -> tuple[int, ...]:
    """Lower coefficients (c_0..c_{h-1}) of the least irreducible monic of degree h.

    "Least" means smallest integer sum(c_i p^i), i.e. the same encoding used for
    field elements.  For h = 1 this is x itself.
    """
    for code in range(p**h):
        low = tuple((code // p**i) % p for i in range(h))
        if h == 1 or (low[0] != 0 and _is_irreducible(low, p, h)):
            return low
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class FiniteField:
    """GF(q) with precomputed addition/multiplication/inverse tables."""

    def __init__(self, q: int):
        pp = prime_power(q)
        if pp is None:
            raise NotPrimePower(f"{q} is not a prime power")
        if q > MAX_FIELD_ORDER:
            raise NotPrimePower(f"fields beyond q = {MAX_FIELD_ORDER} are not supported (got {q})")
        self.q = q
        self.p, self.h = pp
        self.modulus = least_irreducible(self.p, self.h) + (1,)
        digits = [self.to_coeffs(a) for a in range(q)]
        add = np.zeros((q, q), dtype=np.int64)
        mul = np.zeros((q, q), dtype=np.int64)
        for a in range(q):
            for b in range(q):
                add[a, b] = self.from_coeffs([(x + y) % self.p for x, y in zip(digits[a], digits[b])])
                mul[a, b] = self.from_coeffs(_poly_mulmod(digits[a], digits[b], self.modulus, self.p))
        self.add_table = add
        self.mul_table = mul
        self.neg_table = np.array([int(np.where(add[a] == 0)[0][0]) for a in range(q)])
        inv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            inv[a] = int(np.where(mul[a] == 1)[0][0])
        self.inv_table = inv
        for t in (add, mul, self.neg_table, inv):
            t.setflags(write=False)

    def __repr__(self):
        return f"GF({self.q})"

    def __eq__(self, other):
        return isinstance(other, FiniteField) and other.q == self.q

    def __hash__(self):
        return hash(("GF", self.q))

    @property
    def elements(self) -> range:
        return range(self.q)

    def to_coeffs(self, a: int) -> list[int]:
        return [(a // self.p**i) % self.p for i in range(self.h)]

    def from_coeffs(self, coeffs) -> int:
        return sum(int(c) * self.p**i for i, c in enumerate(coeffs))

    def add(self, a, b):
        return int(self.add_table[a, b])

    def sub(self, a, b):
        return int(self.add_table[a, self.neg_table[b]])

    def neg(self, a):
        return int(self.neg_table[a])

    def mul(self, a, b):
        return int(self.mul_table[a, b])

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return int(self.inv_table[a])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, k):
        if k < 0:
            a, k = self.inv(a), -k
        r = 1
        for _ in range(k):
            r = self.mul_table[r, a]
        return int(r)

    def frobenius(self, a, k=1):
        """a -> a^(p^k)."""
        return self.pow(a, self.p**k)

    def dot(self, u, v):
        s = 0
        for a, b in zip(u, v):
            s = self.add_table[s, self.mul_table[a, b]]
        return int(s)

    @property
    def generator(self):
        """Least primitive element."""
        for g in range(2, self.q) if self.q > 2 else [1]:
            seen, x = set(), 1
            for _ in range(self.q - 1):
                x = self.mul_table[x, g]
                seen.add(int(x))
            if len(seen) == self.q - 1:
                return g
        return 1


@lru_cache(maxsize=None)
def field_create(q: int) -> FiniteField:
    """Cached constructor; fields are immutable so sharing is safe."""
    return FiniteField(q)


def field_arith(field: FiniteField, op: str, a: int, b: int | None = None) -> int:
    if op == "add":
        return field.add(a, b)
    if op == "mul":
        return field.mul(a, b)
    if op == "inv":
        return field.inv(a)
    raise ValueError(f"unknown field operation {op!r}")
