"""Pre-Lie rings given by structure constants on a finite abelian p-group."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .modarith import Shape, ShapeError
from .report import Report
from .subgroup import SubgroupBasis

SCHEMA = 1


class NonNilpotentError(ValueError):
    pass


class FormatError(ValueError):
    pass


@dataclass(frozen=True)
class PreLieRing:
    """``table[i][j]`` is x_i . x_j written in the generators x_1..x_r.

    The type admits tables that are not pre-Lie or not nilpotent; the checkers
    below decide that.
    """

    shape: Shape
    table: tuple

    def __post_init__(self):
        r = self.shape.rank
        if len(self.table) != r or any(len(row) != r for row in self.table):
            raise ShapeError(f"structure-constant table must be {r}x{r}")
        table = tuple(tuple(self.shape.elem(c) for c in row) for row in self.table)
        object.__setattr__(self, "table", table)

    @classmethod
    def zero(cls, shape: Shape) -> "PreLieRing":
        z = shape.zero()
        return cls(shape, tuple((z,) * shape.rank for _ in range(shape.rank)))

    @classmethod
    def from_products(cls, shape: Shape, products: dict) -> "PreLieRing":
        """Build from a sparse {(i, j): coeffs} map with 0-based generator indices."""
        r = shape.rank
        table = [[products.get((i, j), shape.zero()) for j in range(r)] for i in range(r)]
        return cls(shape, table)

    @property
    def p(self) -> int:
        return self.shape.p

    @cached_property
    def tensor(self) -> np.ndarray:
        return np.array(self.table, dtype=np.int64)

    def mul(self, u, v):
        shape = self.shape
        if len(u) != shape.rank or len(v) != shape.rank:
            raise ShapeError("operand rank does not match ring")
        acc = [0] * shape.rank
        for i, ui in enumerate(u):
            if not ui:
                continue
            for j, vj in enumerate(v):
                if not vj:
                    continue
                f = ui * vj
                for k, c in enumerate(self.table[i][j]):
                    acc[k] += f * c
        return tuple(a % m for a, m in zip(acc, shape.moduli))

    def mul_array(self, U: np.ndarray, V: np.ndarray) -> np.ndarray:
        """Row-wise product of two (n, r) arrays (broadcasting over n)."""
        U = np.asarray(U, dtype=np.int64)
        V = np.asarray(V, dtype=np.int64)
        U, V = np.broadcast_arrays(U, V)
        r = self.shape.rank
        outer = (U[:, :, None] * V[:, None, :]).reshape(-1, r * r)
        return (outer @ self.tensor.reshape(r * r, r)) % self.shape.moduli_array

    def __eq__(self, other):
        if not isinstance(other, PreLieRing):
            return NotImplemented
        return self.shape == other.shape and self.table == other.table

    def __hash__(self):
        return hash((self.shape, self.table))

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "operation": "prelie",
            "p": self.shape.p,
            "exponents": list(self.shape.exponents),
            "table": [[list(c) for c in row] for row in self.table],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "PreLieRing":
        try:
            if doc.get("operation", "prelie") != "prelie":
                raise FormatError(f"not a pre-Lie table: operation={doc['operation']!r}")
            shape = Shape(int(doc["p"]), tuple(doc["exponents"]))
            return cls(shape, doc["table"])
        except (KeyError, TypeError) as exc:
            raise FormatError(f"malformed table document: {exc}") from exc

    def dumps(self) -> str:
        return dump_json(self.to_json())


def dump_json(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def check_well_defined(table, shape: Shape) -> Report:
    """Torsion compatibility: p^ei x_i = 0 forces p^min(ei,ej) (x_i . x_j) = 0."""
    rep = Report("well_defined")
    p, e = shape.p, shape.exponents
    r = shape.rank
    for i in range(r):
        for j in range(r):
            for k in range(r):
                need = p ** max(0, e[k] - min(e[i], e[j]))
                c = int(table[i][j][k]) % shape.moduli[k]
                if c % need:
                    rep.add(
                        "well_defined",
                        witness=[i + 1, j + 1, k + 1],
                        expected=f"divisible by {need}",
                        actual=c,
                    )
    return rep


def _assoc_diff(A: PreLieRing, a, b, c):
    ab_c = A.mul(A.mul(a, b), c)
    a_bc = A.mul(a, A.mul(b, c))
    ba_c = A.mul(A.mul(b, a), c)
    b_ac = A.mul(b, A.mul(a, c))
    lhs = tuple((x - y) % m for x, y, m in zip(ab_c, a_bc, A.shape.moduli))
    rhs = tuple((x - y) % m for x, y, m in zip(ba_c, b_ac, A.shape.moduli))
    return lhs, rhs


def check_prelie_axiom(A: PreLieRing) -> Report:
    """Left-symmetry of the associator on all basis triples."""
    rep = Report("prelie_axiom")
    basis = A.shape.basis()
    r = A.shape.rank
    for i in range(r):
        for j in range(r):
            for k in range(r):
                lhs, rhs = _assoc_diff(A, basis[i], basis[j], basis[k])
                if lhs != rhs:
                    rep.add("prelie_axiom", witness=[i + 1, j + 1, k + 1], expected=list(rhs), actual=list(lhs))
    return rep


def sample_prelie_axiom(A: PreLieRing, count: int, seed: int) -> Report:
    """The pre-Lie identity on ``count`` seeded random element triples."""
    rep = Report("prelie_axiom_sampled", info={"samples": count, "seed": seed})
    rng = np.random.default_rng(seed)
    shape = A.shape
    idx = rng.integers(0, shape.order, size=(3, count))
    a, b, c = (shape.decode(x) for x in idx)
    m = A.mul_array
    lhs = shape.reduce(m(m(a, b), c) - m(a, m(b, c)))
    rhs = shape.reduce(m(m(b, a), c) - m(b, m(a, c)))
    bad = np.flatnonzero((lhs != rhs).any(axis=1))
    for t in bad[:10]:
        rep.add(
            "prelie_axiom_sampled",
            witness=[a[t].tolist(), b[t].tolist(), c[t].tolist()],
            expected=rhs[t].tolist(),
            actual=lhs[t].tolist(),
        )
    rep.info["failures"] = int(len(bad))
    return rep


def span_closure(A: PreLieRing | Shape, gens) -> SubgroupBasis:
    shape = A if isinstance(A, Shape) else A.shape
    return SubgroupBasis.span(shape, list(gens))


def product_span(A: PreLieRing, S: SubgroupBasis, T: SubgroupBasis) -> SubgroupBasis:
    """The additive subgroup S.T; generators suffice by bilinearity."""
    return SubgroupBasis.span(A.shape, [A.mul(s, t) for s in S.rows for t in T.rows])


def iterate_chain(first: SubgroupBasis, step, limit: int = 32):
    """Run a filtration until it reaches 0 or repeats a nonzero term.

    ``step(chain)`` returns the next term. Returns (chain, reached_zero).
    """
    chain = [first]
    while not chain[-1].is_zero():
        nxt = step(chain)
        if nxt == chain[-1] or len(chain) >= limit:
            chain.append(nxt)
            return chain, False
        chain.append(nxt)
    return chain, True


def _strong_step(A):
    def step(chain):
        i = len(chain)
        gens = []
        for j in range(1, i + 1):
            S, T = chain[j - 1], chain[i - j]
            gens.extend(A.mul(s, t) for s in S.rows for t in T.rows)
        return SubgroupBasis.span(A.shape, gens)

    return step


def _raise_unless(chain, ok, kind):
    if not ok:
        orders = [S.order for S in chain]
        raise NonNilpotentError(f"{kind} chain stabilises above zero: orders {orders}")
    return chain


def strong_chain(A: PreLieRing) -> list:
    chain, ok = iterate_chain(SubgroupBasis.whole(A.shape), _strong_step(A))
    return _raise_unless(chain, ok, "strong")


def left_chain(A: PreLieRing) -> list:
    whole = SubgroupBasis.whole(A.shape)
    chain, ok = iterate_chain(whole, lambda ch: product_span(A, whole, ch[-1]))
    return _raise_unless(chain, ok, "left")


def right_chain(A: PreLieRing) -> list:
    whole = SubgroupBasis.whole(A.shape)
    chain, ok = iterate_chain(whole, lambda ch: product_span(A, ch[-1], whole))
    return _raise_unless(chain, ok, "right")


def nilpotency_index(A: PreLieRing) -> int:
    """Smallest n with A^[n] = 0."""
    return len(strong_chain(A))


def is_nilpotent(A: PreLieRing) -> bool:
    try:
        strong_chain(A)
    except NonNilpotentError:
        return False
    return True


def chain_orders(chain) -> list:
    return [S.order for S in chain]
