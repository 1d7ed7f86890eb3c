"""Arithmetic on finite abelian p-groups Z/p^e1 x ... x Z/p^er.

Elements are tuples of integers, coefficient i reduced into [0, p^ei).
Everything here is pure; the vectorised helpers operate on integer numpy
arrays of shape (n, r) and are what the exhaustive sweeps run on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

SUPPORTED_EXPONENTS = ((1, 1, 1, 1), (3, 1), (2, 2))
MAX_PRIME = 101

Elem = tuple


class ShapeError(ValueError):
    pass


class PreconditionError(ValueError):
    """Raised when a prime is too small for the requested construction."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


@dataclass(frozen=True)
class Shape:
    p: int
    exponents: tuple

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(int(e) for e in self.exponents))
        if not is_prime(self.p):
            raise ShapeError(f"{self.p} is not prime")
        if self.p > MAX_PRIME:
            raise ShapeError(f"p={self.p} exceeds the configured bound {MAX_PRIME}")
        if self.exponents not in SUPPORTED_EXPONENTS:
            raise ShapeError(f"unsupported exponents {list(self.exponents)}")

    @property
    def rank(self) -> int:
        return len(self.exponents)

    @cached_property
    def moduli(self) -> tuple:
        return tuple(self.p**e for e in self.exponents)

    @property
    def order(self) -> int:
        return math.prod(self.moduli)

    @property
    def max_exponent(self) -> int:
        return max(self.exponents)

    @property
    def ambient(self) -> int:
        """The exponent of the group, p^max(e)."""
        return self.p**self.max_exponent

    @cached_property
    def strides(self) -> tuple:
        # mixed radix, first coordinate most significant
        out = [1] * self.rank
        for i in range(self.rank - 2, -1, -1):
            out[i] = out[i + 1] * self.moduli[i + 1]
        return tuple(out)

    def zero(self) -> Elem:
        return (0,) * self.rank

    def basis(self) -> list:
        return [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]

    def elem(self, coeffs) -> Elem:
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != self.rank:
            raise ShapeError(f"expected {self.rank} coefficients, got {len(coeffs)}")
        return tuple(c % m for c, m in zip(coeffs, self.moduli))

    def is_valid(self, u) -> bool:
        return len(u) == self.rank and all(0 <= c < m for c, m in zip(u, self.moduli))

    def index(self, u) -> int:
        return sum(c * s for c, s in zip(u, self.strides))

    def from_index(self, idx: int) -> Elem:
        return tuple((idx // s) % m for s, m in zip(self.strides, self.moduli))

    def elements(self):
        """All elements in index order."""
        return (self.from_index(i) for i in range(self.order))

    # vectorised counterparts

    @cached_property
    def moduli_array(self) -> np.ndarray:
        return np.array(self.moduli, dtype=np.int64)

    def all_elements(self) -> np.ndarray:
        return self.decode(np.arange(self.order, dtype=np.int64))

    def decode(self, idx: np.ndarray) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        strides = np.array(self.strides, dtype=np.int64)
        return (idx[..., None] // strides) % self.moduli_array

    def encode(self, arr: np.ndarray) -> np.ndarray:
        strides = np.array(self.strides, dtype=np.int64)
        return (np.asarray(arr, dtype=np.int64) * strides).sum(axis=-1)

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        return np.asarray(arr, dtype=np.int64) % self.moduli_array


def _check(shape: Shape, *elems):
    for u in elems:
        if len(u) != shape.rank:
            raise ShapeError(f"element {u!r} has rank {len(u)}, shape has rank {shape.rank}")


def elem_add(shape: Shape, u, v) -> Elem:
    _check(shape, u, v)
    return tuple((a + b) % m for a, b, m in zip(u, v, shape.moduli))


def elem_sub(shape: Shape, u, v) -> Elem:
    _check(shape, u, v)
    return tuple((a - b) % m for a, b, m in zip(u, v, shape.moduli))


def elem_neg(shape: Shape, u) -> Elem:
    return scalar_mul(shape, -1, u)


def scalar_mul(shape: Shape, k: int, u) -> Elem:
    _check(shape, u)
    return tuple((k * a) % m for a, m in zip(u, shape.moduli))


def elem_sum(shape: Shape, elems) -> Elem:
    acc = [0] * shape.rank
    for u in elems:
        _check(shape, u)
        for i, c in enumerate(u):
            acc[i] += c
    return shape.elem(acc)


def mod_inv(a: int, m: int) -> int:
    """Inverse of a modulo m; ArithmeticError if gcd(a, m) != 1."""
    try:
        return pow(a, -1, m)
    except ValueError:
        raise ArithmeticError(f"{a} is not invertible modulo {m}") from None


def factorial_inv_table(k_max: int, m: int, p: int) -> list:
    """[1/0!, 1/1!, ..., 1/k_max!] modulo m, where m is a power of p."""
    if k_max >= p:
        raise PreconditionError(
            f"prime too small for nilpotency index: {k_max}! is not invertible modulo a power of {p}"
        )
    return [mod_inv(math.factorial(n), m) for n in range(k_max + 1)]


def valuation(a: int, p: int, cap: int) -> int:
    """p-adic valuation of a, with v(0) = cap."""
    if a == 0:
        return cap
    v = 0
    while a % p == 0 and v < cap:
        a //= p
        v += 1
    return v


def primitive_root(p: int) -> int:
    """Smallest generator of (Z/p)^*."""
    if p == 2:
        return 1
    factors = {q for q in range(2, p) if (p - 1) % q == 0 and is_prime(q)}
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    raise ArithmeticError(f"no primitive root modulo {p}")


def teichmuller(g: int, p: int, e: int) -> int:
    """The (p-1)-th root of unity modulo p^e congruent to g modulo p."""
    return pow(g, p ** (e - 1), p**e)


def nullspace_mod_p(rows, p: int) -> list:
    """Basis of {v : M v = 0} over F_p for the integer matrix M given by rows."""
    n = len(rows[0]) if rows else 0
    m = [[x % p for x in row] for row in rows]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    basis = []
    for free in (c for c in range(n) if c not in pivots):
        v = [0] * n
        v[free] = 1
        for i, c in enumerate(pivots):
            v[c] = -m[i][free] % p
        basis.append(v)
    return basis
