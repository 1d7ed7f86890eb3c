"""Involutive non-degenerate solutions of the Yang-Baxter equation from braces.

lambda_a(b) = a * b + b and r(a, b) = (lambda_a(b), lambda_{lambda_a(b)}^-1(a)).
"""

from __future__ import annotations

import numpy as np

from .brace import Brace
from .report import Report

EXPORT_MAX_ORDER = 7**4


class DegenerateError(ValueError):
    pass


def lambda_map(B: Brace, a, b):
    shape = B.shape
    return tuple((x + y) % m for x, y, m in zip(B.star(a, b), b, shape.moduli))


def lambda_inverse(B: Brace, a, c):
    """The b with lambda_a(b) = c, i.e. b = a^-1 o (a + c)."""
    shape = B.shape
    return B.circ(B.inverse(a), tuple((x + y) % m for x, y, m in zip(a, c, shape.moduli)))


def r_map(B: Brace, a, b):
    u = lambda_map(B, a, b)
    return u, lambda_inverse(B, u, a)


class LambdaTables:
    """Index tables for lambda and its inverse on a materialised brace.

    ``lam[a, b]`` is the index of lambda_a(b); ``inv[a, c]`` the index of
    lambda_a^-1(c). Rows of ``inv`` are only meaningful when ``bijective``.
    """

    def __init__(self, B: Brace):
        B = B.materialized()
        shape = B.shape
        n = shape.order
        elems = shape.all_elements()
        self.shape = shape
        self.lam = np.empty((n, n), dtype=np.int32)
        for i in range(n):
            circ = shape.decode(B.table[i])
            self.lam[i] = shape.encode(shape.reduce(circ - elems[i]))
        self.bijective = np.array([len(np.unique(row)) == n for row in self.lam])
        self.inv = np.empty_like(self.lam)
        cols = np.arange(n, dtype=np.int32)
        for i in range(n):
            self.inv[i, self.lam[i]] = cols

    def r(self, a: np.ndarray, b: np.ndarray):
        u = self.lam[a, b]
        return u, self.inv[u, a]


def _braid_sides(r, a, b, c):
    # (r x id)(id x r)(r x id) applied right to left, and its mirror
    x, y = r(a, b)
    y, z = r(y, c)
    x, y = r(x, y)
    left = (x, y, z)
    y, z = r(b, c)
    x, y = r(a, y)
    y, z = r(y, z)
    return left, (x, y, z)


def certify_solution(B: Brace, samples: int = 100_000, seed: int = 0, action_samples: int = 10_000) -> Report:
    """Non-degeneracy, involutivity and the braid relation for the solution of B.

    With a materialised table (order <= 7^4) non-degeneracy and involutivity
    are exhaustive; otherwise everything is sampled.
    """
    shape = B.shape
    rng = np.random.default_rng(seed)
    n = shape.order
    rep = Report("ybe", info={"samples": samples, "seed": seed, "action_samples": action_samples})
    if n <= EXPORT_MAX_ORDER:
        T = LambdaTables(B)
        rep.info["mode"] = "exhaustive"
        for i in np.flatnonzero(~T.bijective)[:5]:
            rep.add("left_nondegenerate", witness=list(shape.from_index(int(i))), expected="bijective lambda_a",
                    actual="not injective")
        if not T.bijective.all():
            return rep
        if (T.lam[:, 0] != 0).any():
            i = int(np.flatnonzero(T.lam[:, 0] != 0)[0])
            rep.add("lambda_fixes_zero", witness=list(shape.from_index(i)), expected=0, actual=int(T.lam[i, 0]))
        cols = np.arange(n)
        for start in range(0, n, 256):
            a = np.repeat(np.arange(start, min(start + 256, n)), n)
            b = np.tile(cols, min(start + 256, n) - start)
            u, v = T.r(a, b)
            x, y = T.r(u, v)
            bad = np.flatnonzero((x != a) | (y != b))
            for t in bad[:3]:
                rep.add("involutive", witness=[list(shape.from_index(int(a[t]))), list(shape.from_index(int(b[t])))],
                        expected=[int(a[t]), int(b[t])], actual=[int(x[t]), int(y[t])])
        # right non-degeneracy: a -> second coordinate of r(a, b) is a bijection for each b
        for j in range(n):
            a = np.arange(n)
            _, v = T.r(a, np.full(n, j))
            if len(np.unique(v)) != n:
                rep.add("right_nondegenerate", witness=list(shape.from_index(j)), expected="bijective", actual="not injective")
                break
        a, b, c = (rng.integers(0, n, size=samples) for _ in range(3))
        left, right = _braid_sides(T.r, a, b, c)
        bad = np.flatnonzero(np.any([l_ != r_ for l_, r_ in zip(left, right)], axis=0))
        for t in bad[:5]:
            rep.add("braid", witness=[list(shape.from_index(int(w[t]))) for w in (a, b, c)],
                    expected=[int(w[t]) for w in right], actual=[int(w[t]) for w in left])
        rep.info["braid_failures"] = int(len(bad))
        # lambda is a left action of (A, o): lambda_{a o b} = lambda_a lambda_b
        a, b, c = (rng.integers(0, n, size=action_samples) for _ in range(3))
        ab = B.materialized().table[a, b]
        bad = np.flatnonzero(T.lam[ab, c] != T.lam[a, T.lam[b, c]])
        for t in bad[:3]:
            rep.add("lambda_action", witness=[int(a[t]), int(b[t]), int(c[t])],
                    expected=int(T.lam[a[t], T.lam[b[t], c[t]]]), actual=int(T.lam[ab[t], c[t]]))
        return rep

    rep.info["mode"] = "sampled"
    idx = rng.integers(0, n, size=(3, samples))
    for k in range(samples):
        a, b, c = (shape.from_index(int(idx[s, k])) for s in range(3))
        u, v = r_map(B, a, b)
        if r_map(B, u, v) != (a, b):
            rep.add("involutive", witness=[list(a), list(b)], expected=[list(a), list(b)], actual=[list(w) for w in r_map(B, u, v)])
        if lambda_inverse(B, a, lambda_map(B, a, c)) != c:
            rep.add("left_nondegenerate", witness=[list(a), list(c)])
        left, right = _braid_sides(lambda x, y: r_map(B, x, y), a, b, c)
        if left != right:
            rep.add("braid", witness=[list(a), list(b), list(c)], expected=[list(w) for w in right], actual=[list(w) for w in left])
    return rep


def solution_to_json(B: Brace) -> dict:
    """r as a pair map over element indices; refused above 7^4 elements."""
    shape = B.shape
    if shape.order > EXPORT_MAX_ORDER:
        raise ValueError(f"solution export is capped at {EXPORT_MAX_ORDER} elements")
    T = LambdaTables(B)
    if not T.bijective.all():
        raise DegenerateError("lambda is not bijective; r is undefined")
    n = shape.order
    a = np.repeat(np.arange(n), n)
    b = np.tile(np.arange(n), n)
    u, v = T.r(a, b)
    return {
        "schema": 1,
        "operation": "ybe-solution",
        "p": shape.p,
        "exponents": list(shape.exponents),
        "encoding": "mixed-radix-index",
        "r": np.stack([u, v], axis=1).reshape(n, n, 2).tolist(),
    }
