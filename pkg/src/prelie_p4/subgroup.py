"""Additive subgroups in canonical (Howell) echelon form.

A subgroup of Z/p^e1 x ... x Z/p^er is embedded into (Z/p^E)^r, E = max ei,
by scaling coordinate i by p^(E - ei). Submodules of (Z/p^E)^r have a unique
Howell form, so two subgroups are equal iff their stored rows are equal.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .modarith import Shape, valuation


def _howell(rows, p: int, E: int, ncols: int):
    N = p**E
    work = [[x % N for x in r] for r in rows]
    work = [r for r in work if any(r)]
    out = []
    for c in range(ncols):
        live = [r for r in work if r[c]]
        if not live:
            continue
        piv = min(live, key=lambda r: valuation(r[c], p, E))
        work.remove(piv)
        v = valuation(piv[c], p, E)
        pv = p**v
        inv = pow(piv[c] // pv, -1, N)
        piv = [x * inv % N for x in piv]
        nxt = []
        for r in work:
            if r[c]:
                f = r[c] // pv
                r = [(x - f * y) % N for x, y in zip(r, piv)]
            if any(r):
                nxt.append(r)
        extra = [x * p ** (E - v) % N for x in piv]
        if any(extra):
            nxt.append(extra)
        work = nxt
        out.append((c, v, piv))
    for i, (c, v, piv) in enumerate(out):
        pv = p**v
        for j in range(i):
            row = out[j][2]
            f = row[c] // pv
            if f:
                out[j] = (out[j][0], out[j][1], [(x - f * y) % N for x, y in zip(row, piv)])
    return out


@dataclass(frozen=True)
class SubgroupBasis:
    """Echelonised generators of an additive subgroup.

    ``rows`` are group elements (ordinary coordinates); ``pivots`` holds
    (column, valuation) pairs in the embedded coordinates.
    """

    shape: Shape
    rows: tuple
    pivots: tuple

    @classmethod
    def span(cls, shape: Shape, gens) -> "SubgroupBasis":
        E = shape.max_exponent
        p = shape.p
        scale = [p ** (E - e) for e in shape.exponents]
        emb = [[int(c) * s for c, s in zip(g, scale)] for g in gens]
        form = _howell(emb, p, E, shape.rank)
        rows = tuple(tuple(x // s for x, s in zip(r, scale)) for _, _, r in form)
        return cls(shape, rows, tuple((c, v) for c, v, _ in form))

    @classmethod
    def whole(cls, shape: Shape) -> "SubgroupBasis":
        return cls.span(shape, shape.basis())

    @classmethod
    def trivial(cls, shape: Shape) -> "SubgroupBasis":
        return cls.span(shape, [])

    @property
    def generators(self) -> list:
        return list(self.rows)

    @property
    def order(self) -> int:
        E = self.shape.max_exponent
        return math.prod(self.shape.p ** (E - v) for _, v in self.pivots)

    @property
    def log_order(self) -> int:
        E = self.shape.max_exponent
        return sum(E - v for _, v in self.pivots)

    def is_zero(self) -> bool:
        return not self.rows

    def contains(self, u) -> bool:
        shape = self.shape
        p, E = shape.p, shape.max_exponent
        N = p**E
        scale = [p ** (E - e) for e in shape.exponents]
        vec = [int(c) * s % N for c, s in zip(u, scale)]
        for (c, v), row in zip(self.pivots, self.rows):
            erow = [x * s for x, s in zip(row, scale)]
            pv = p**v
            if vec[c] % pv:
                return False
            f = vec[c] // pv
            vec = [(x - f * y) % N for x, y in zip(vec, erow)]
        return not any(vec)

    def issubset(self, other: "SubgroupBasis") -> bool:
        return all(other.contains(g) for g in self.rows)

    def scaled(self, k: int) -> "SubgroupBasis":
        """The subgroup k*S."""
        return SubgroupBasis.span(self.shape, [[k * c for c in g] for g in self.rows])

    def __add__(self, other: "SubgroupBasis") -> "SubgroupBasis":
        return SubgroupBasis.span(self.shape, list(self.rows) + list(other.rows))

    def elements(self) -> np.ndarray:
        """Every element exactly once, as an (order, r) array."""
        shape = self.shape
        if not self.rows:
            return np.zeros((1, shape.rank), dtype=np.int64)
        E = shape.max_exponent
        ranges = [range(shape.p ** (E - v)) for _, v in self.pivots]
        coeffs = np.array(list(itertools.product(*ranges)), dtype=np.int64)
        rows = np.array(self.rows, dtype=np.int64)
        return shape.reduce(coeffs @ rows)

    def to_json(self) -> dict:
        return {"order": self.order, "generators": [list(r) for r in self.rows]}
