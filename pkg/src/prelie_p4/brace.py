"""Braces on a finite abelian p-group and their verification suite.

A brace is stored either as a materialised circle table (``table[i, j]`` is
the index of x_i o x_j, indices in mixed radix, see ``Shape.index``) or
lazily through a vectorised circle function.
"""

from __future__ import annotations

import numpy as np

from .modarith import Shape, ShapeError
from .prelie import SCHEMA, FormatError, iterate_chain
from .report import Report
from .subgroup import SubgroupBasis

MATERIALIZE_MAX_ORDER = 7**4


class Brace:
    def __init__(self, shape: Shape, table=None, circ_array=None, inverse=None, provenance=None):
        if table is None and circ_array is None:
            raise ValueError("a brace needs a circle table or a circle function")
        self.shape = shape
        self.table = None if table is None else np.asarray(table)
        if self.table is not None and self.table.shape != (shape.order, shape.order):
            raise ShapeError(f"circle table must be {shape.order}x{shape.order}")
        self._circ_array = circ_array
        self._inverse = inverse
        self.provenance = provenance

    @classmethod
    def trivial(cls, shape: Shape) -> "Brace":
        return cls(shape, circ_array=lambda A, B: shape.reduce(A + B), inverse=lambda a: shape.reduce(-np.asarray(a)))

    @property
    def p(self) -> int:
        return self.shape.p

    def materialized(self) -> "Brace":
        if self.table is not None:
            return self
        shape = self.shape
        n = shape.order
        if n > MATERIALIZE_MAX_ORDER:
            raise ValueError(f"refusing to materialise a {n}x{n} circle table")
        elems = shape.all_elements()
        table = np.empty((n, n), dtype=np.int32)
        for i in range(n):
            table[i] = shape.encode(self._circ_array(elems[i][None, :], elems))
        return Brace(shape, table=table, inverse=self._inverse, provenance=self.provenance)

    def circ_array(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if self.table is not None:
            A, B = np.broadcast_arrays(A, B)
            return self.shape.decode(self.table[self.shape.encode(A), self.shape.encode(B)])
        return self._circ_array(A, B)

    def circ(self, a, b):
        out = self.circ_array(np.array([a]), np.array([b]))[0]
        return tuple(int(x) for x in out)

    def star_array(self, A, B) -> np.ndarray:
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        return self.shape.reduce(self.circ_array(A, B) - A - B)

    def star(self, a, b):
        out = self.star_array(np.array([a]), np.array([b]))[0]
        return tuple(int(x) for x in out)

    def inverse(self, a):
        """The o-inverse of a."""
        if self._inverse is not None:
            return tuple(int(x) for x in np.asarray(self._inverse(np.array([a])))[0])
        idx = self.shape.index(a)
        row = self.materialized().table[idx]
        hits = np.flatnonzero(row == 0)
        if len(hits) != 1:
            raise ValueError(f"{a} has {len(hits)} right o-inverses")
        return self.shape.from_index(int(hits[0]))

    def to_json(self, include_table: bool = True) -> dict:
        doc = {
            "schema": SCHEMA,
            "operation": "circle",
            "p": self.shape.p,
            "exponents": list(self.shape.exponents),
            "encoding": "mixed-radix-index",
        }
        if include_table:
            doc["table"] = self.materialized().table.tolist()
        if self.provenance is not None:
            doc["provenance"] = self.provenance
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "Brace":
        try:
            if doc.get("operation") != "circle":
                raise FormatError("not a circle table")
            shape = Shape(int(doc["p"]), tuple(doc["exponents"]))
            table = doc.get("table")
        except (KeyError, TypeError) as exc:
            raise FormatError(f"malformed brace document: {exc}") from exc
        if table is None:
            prov = doc.get("provenance") or {}
            if "source" not in prov:
                raise FormatError("circle document has neither a table nor a flow provenance")
            from .flows import brace_from_prelie, make_context
            from .prelie import PreLieRing

            A = PreLieRing.from_json(prov["source"])
            ctx = make_context(A, xi=prov.get("xi", "auto"))
            return brace_from_prelie(A, ctx, materialize=False)
        table = np.array(table, dtype=np.int64)
        if table.shape != (shape.order, shape.order) or table.min() < 0 or table.max() >= shape.order:
            raise FormatError("circle table has the wrong size or out-of-range entries")
        return cls(shape, table=table.astype(np.int32), provenance=doc.get("provenance"))


def star(B: Brace, a, b):
    return B.star(a, b)


def check_brace_axioms(B: Brace, mode: str = "exhaustive", samples: int = 100_000, seed: int = 0) -> Report:
    """Identity, inverses, compatibility and sampled associativity.

    Exhaustive mode scans every element for identity and inverses; sampled
    mode draws ``samples`` elements for those two checks instead. Compatibility
    is checked for every a against all pairs of generators, on every (a, b)
    against each generator when a table is at hand, and on sampled full
    triples; associativity is always sampled.
    """
    shape = B.shape
    rep = Report("brace_axioms", info={"mode": mode, "samples": samples, "seed": seed})
    rng = np.random.default_rng(seed)
    n = shape.order
    zero = np.zeros((1, shape.rank), dtype=np.int64)
    if mode == "exhaustive":
        elems = shape.all_elements()
    else:
        elems = shape.decode(rng.integers(0, n, size=min(samples, n)))

    # identity
    for name, got in (("left_identity", B.circ_array(zero, elems)), ("right_identity", B.circ_array(elems, zero))):
        bad = np.flatnonzero((got != elems).any(axis=1))
        for t in bad[:5]:
            rep.add(name, witness=elems[t].tolist(), expected=elems[t].tolist(), actual=got[t].tolist())

    # inverses
    if B.table is not None and mode == "exhaustive":
        T = B.table
        for i in range(n):
            right = np.flatnonzero(T[i] == 0)
            ok = len(right) == 1 and T[right[0], i] == 0
            if not ok:
                rep.add("inverse", witness=list(shape.from_index(i)), expected="unique two-sided inverse",
                        actual=[list(shape.from_index(int(j))) for j in right[:3]])
        rep.info["inverse_checked"] = n
    else:
        checked = 0
        for a in elems:
            a = tuple(int(x) for x in a)
            try:
                b = B.inverse(a)
            except ValueError as exc:
                rep.add("inverse", witness=list(a), expected="unique two-sided inverse", actual=str(exc))
                continue
            z = shape.zero()
            if B.circ(a, b) != z or B.circ(b, a) != z:
                rep.add("inverse", witness=list(a), expected=list(z), actual=[list(B.circ(a, b)), list(B.circ(b, a))])
            checked += 1
        rep.info["inverse_checked"] = checked

    # compatibility: a o (b + c) + a = a o b + a o c
    basis = list(np.eye(shape.rank, dtype=np.int64))
    if B.table is not None and mode == "exhaustive":
        # every a, every b, generator c: by induction on c this is the full law
        T = B.table
        all_b = shape.all_elements()
        for c in basis:
            shifted = shape.encode(shape.reduce(all_b + c))
            ci = shape.index(c)
            for lo in range(0, n, 256):
                rows = np.arange(lo, min(lo + 256, n))
                a = elems[rows][:, None, :]
                lhs = shape.reduce(all_b[T[rows][:, shifted]] + a)
                rhs = shape.reduce(all_b[T[rows]] + all_b[T[rows, ci]][:, None, :])
                bad = np.argwhere((lhs != rhs).any(axis=2))
                for i, t in bad[:3]:
                    rep.add("compatibility", witness=[elems[rows[i]].tolist(), all_b[t].tolist(), c.tolist()],
                            expected=rhs[i, t].tolist(), actual=lhs[i, t].tolist())
        rep.info["compatibility"] = "all a, all b, generator c"
    gens = basis + [np.zeros(shape.rank, dtype=np.int64)]
    for b in gens:
        for c in gens:
            lhs = shape.reduce(B.circ_array(elems, shape.reduce(b + c)[None, :]) + elems)
            rhs = shape.reduce(B.circ_array(elems, b[None, :]) + B.circ_array(elems, c[None, :]))
            bad = np.flatnonzero((lhs != rhs).any(axis=1))
            for t in bad[:3]:
                rep.add("compatibility", witness=[elems[t].tolist(), b.tolist(), c.tolist()],
                        expected=rhs[t].tolist(), actual=lhs[t].tolist())
    a, b, c = (shape.decode(rng.integers(0, n, size=samples)) for _ in range(3))
    lhs = shape.reduce(B.circ_array(a, shape.reduce(b + c)) + a)
    rhs = shape.reduce(B.circ_array(a, b) + B.circ_array(a, c))
    for t in np.flatnonzero((lhs != rhs).any(axis=1))[:5]:
        rep.add("compatibility_sampled", witness=[a[t].tolist(), b[t].tolist(), c[t].tolist()],
                expected=rhs[t].tolist(), actual=lhs[t].tolist())

    # associativity
    a, b, c = (shape.decode(rng.integers(0, n, size=samples)) for _ in range(3))
    lhs = B.circ_array(B.circ_array(a, b), c)
    rhs = B.circ_array(a, B.circ_array(b, c))
    bad = np.flatnonzero((lhs != rhs).any(axis=1))
    for t in bad[:5]:
        rep.add("associativity", witness=[a[t].tolist(), b[t].tolist(), c[t].tolist()],
                expected=rhs[t].tolist(), actual=lhs[t].tolist())
    rep.info["associativity_failures"] = int(len(bad))
    return rep


def star_span(B: Brace, S: SubgroupBasis, T: SubgroupBasis) -> SubgroupBasis:
    """Subgroup generated by S * T; the right factor only needs generators."""
    left = S.elements()
    gens = []
    for t in T.rows:
        out = B.star_array(left, np.array(t, dtype=np.int64)[None, :])
        gens.extend(np.unique(out, axis=0).tolist())
    return SubgroupBasis.span(B.shape, gens)


def _strong_step(B: Brace):
    def step(chain):
        i = len(chain)
        out = SubgroupBasis.trivial(B.shape)
        for j in range(1, i + 1):
            out = out + star_span(B, chain[j - 1], chain[i - j])
        return out

    return step


def brace_chains(B: Brace) -> dict:
    """Left, right and strong chains under *.

    Returns {"left"|"right"|"strong": (chain, reached_zero)}.
    """
    whole = SubgroupBasis.whole(B.shape)
    return {
        "left": iterate_chain(whole, lambda ch: star_span(B, whole, ch[-1])),
        "right": iterate_chain(whole, lambda ch: star_span(B, ch[-1], whole)),
        "strong": iterate_chain(whole, _strong_step(B)),
    }


def strong_index(B: Brace) -> int | None:
    """Strong nilpotency index, or None if the strong chain stalls."""
    chain, ok = iterate_chain(SubgroupBasis.whole(B.shape), _strong_step(B))
    return len(chain) if ok else None


def check_fp_brace(B: Brace) -> Report:
    """a * (k b) = k (a * b) for every a, generator b and k in F_p."""
    shape = B.shape
    if shape.exponents != (1, 1, 1, 1):
        raise ShapeError("F_p-brace check needs additive group C_p^4")
    rep = Report("fp_brace")
    elems = shape.all_elements()
    for b in np.eye(shape.rank, dtype=np.int64):
        base = B.star_array(elems, b[None, :])
        for k in range(shape.p):
            lhs = B.star_array(elems, shape.reduce(k * b)[None, :])
            rhs = shape.reduce(k * base)
            for t in np.flatnonzero((lhs != rhs).any(axis=1))[:3]:
                rep.add("fp_linearity", witness=[elems[t].tolist(), b.tolist(), k],
                        expected=rhs[t].tolist(), actual=lhs[t].tolist())
    return rep
