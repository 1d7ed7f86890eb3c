"""Brute-force oracles: table enumeration, mutation, isomorphism probing.

The classification holds for p > 5^5; everything here runs at tiny primes and
is consistency evidence only, which reports say explicitly.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .modarith import Shape
from .prelie import (
    FormatError,
    NonNilpotentError,
    PreLieRing,
    check_prelie_axiom,
    check_well_defined,
    left_chain,
    right_chain,
    strong_chain,
)
from .subgroup import SubgroupBasis

DEFAULT_BUDGET = 10**9
BANNER = "out-of-regime: enumeration at small p is consistency evidence, not a classification claim"


class BudgetError(ValueError):
    pass


@dataclass
class EnumSpace:
    """Allowed values for every structure constant c[i][j]_k."""

    shape: Shape
    entries: list  # r x r x r nested lists of allowed residues

    @property
    def size(self) -> int:
        return math.prod(len(vals) for row in self.entries for cell in row for vals in cell)

    def flat(self) -> list:
        return [vals for row in self.entries for cell in row for vals in cell]

    def candidate(self, index: int) -> PreLieRing:
        """The ``index``-th table in mixed-radix order (last entry fastest)."""
        flat = self.flat()
        picks = []
        for vals in reversed(flat):
            index, d = divmod(index, len(vals))
            picks.append(vals[d])
        picks.reverse()
        r = self.shape.rank
        it = iter(picks)
        table = [[[next(it) for _ in range(r)] for _ in range(r)] for _ in range(r)]
        return PreLieRing(self.shape, table)

    @classmethod
    def from_json(cls, doc: dict) -> "EnumSpace":
        try:
            shape = Shape(int(doc["p"]), tuple(doc["exponents"]))
            r = shape.rank
            raw = doc["entries"]
            entries = [[[_values(raw[i][j][k], shape.moduli[k]) for k in range(r)] for j in range(r)] for i in range(r)]
        except (KeyError, TypeError, IndexError) as exc:
            raise FormatError(f"malformed enumeration space: {exc}") from exc
        return cls(shape, entries)

    @classmethod
    def stepped(cls, shape: Shape, steps) -> "EnumSpace":
        """Entry (i, j, k) ranges over multiples of steps[i][j][k] (0 = fixed at zero)."""
        r = shape.rank
        return cls(shape, [[[_values({"step": steps[i][j][k]}, shape.moduli[k]) for k in range(r)]
                            for j in range(r)] for i in range(r)])


def _values(spec, modulus: int) -> list:
    if isinstance(spec, list):
        return sorted({int(v) % modulus for v in spec})
    if isinstance(spec, int):
        return [spec % modulus]
    step = int(spec["step"])
    return [0] if step == 0 else list(range(0, modulus, step))


def classify_candidate(A: PreLieRing) -> str | None:
    """First failed check ("well_defined", "prelie_axiom", "nilpotent") or None."""
    if not check_well_defined(A.table, A.shape).ok:
        return "well_defined"
    if not check_prelie_axiom(A).ok:
        return "prelie_axiom"
    try:
        strong_chain(A)
    except NonNilpotentError:
        return "nilpotent"
    return None


def enumerate_valid(space: EnumSpace, budget: int = DEFAULT_BUDGET, start: int = 0, stop: int | None = None):
    """Yield the tables of ``space[start:stop]`` passing every checker.

    Disjoint [start, stop) ranges can go to separate workers.
    """
    size = space.size
    if size > budget:
        raise BudgetError(f"space has {size} candidates, budget is {budget}")
    stop = size if stop is None else min(stop, size)
    for idx in range(start, stop):
        A = space.candidate(idx)
        if classify_candidate(A) is None:
            yield A


def enumeration_summary(space: EnumSpace, budget: int = DEFAULT_BUDGET) -> dict:
    size = space.size
    if size > budget:
        raise BudgetError(f"space has {size} candidates, budget is {budget}")
    counts = {"valid": 0, "well_defined": 0, "prelie_axiom": 0, "nilpotent": 0}
    for idx in range(size):
        counts[classify_candidate(space.candidate(idx)) or "valid"] += 1
    return {"candidates": size, "counts": counts, "banner": BANNER}


def mutate(A: PreLieRing, seed: int) -> PreLieRing:
    """Add a random nonzero delta to one random structure constant."""
    rng = random.Random(seed)
    r = A.shape.rank
    i, j, k = rng.randrange(r), rng.randrange(r), rng.randrange(r)
    delta = rng.randrange(1, A.shape.moduli[k])
    return mutate_entry(A, i, j, k, delta)


def mutate_entry(A: PreLieRing, i: int, j: int, k: int, delta: int) -> PreLieRing:
    table = [[list(c) for c in row] for row in A.table]
    table[i][j][k] += delta
    return PreLieRing(A.shape, table)


@dataclass
class Verdict:
    kind: str  # "yes" | "no" | "inconclusive"
    witness: list | None = None
    reason: str = ""
    explored: int = 0
    info: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"verdict": self.kind, "witness": self.witness, "reason": self.reason, "explored": self.explored}


def _invariants(A: PreLieRing):
    out = []
    for chain in (strong_chain, left_chain, right_chain):
        try:
            out.append(tuple(S.order for S in chain(A)))
        except NonNilpotentError:
            out.append(None)
    return tuple(out)


def _depth(chain, u) -> int:
    """Largest m with u in chain[m-1]."""
    d = 0
    for S in chain:
        if S.contains(u):
            d += 1
        else:
            break
    return d


def isomorphic(A: PreLieRing, B: PreLieRing, budget: int = 10**6) -> Verdict:
    """Search for an additive automorphism carrying A's product to B's.

    Generator x_i may only go to elements of B killed by p^ei that sit at the
    same depth of the strong chain as x_i does in A.
    """
    if A.shape != B.shape:
        return Verdict("no", reason="different additive groups")
    invA, invB = _invariants(A), _invariants(B)
    if invA != invB:
        return Verdict("no", reason=f"chain orders differ: {invA} vs {invB}")
    shape = A.shape
    r = shape.rank
    try:
        chA, chB = strong_chain(A), strong_chain(B)
    except NonNilpotentError:
        chA = chB = [SubgroupBasis.whole(shape)]
    basis = shape.basis()
    elems = list(shape.elements())
    cands = []
    for i, x in enumerate(basis):
        order = shape.moduli[i]
        depth = _depth(chA, x)
        cands.append([g for g in elems if not any((order * c) % m for c, m in zip(g, shape.moduli))
                      and _depth(chB, g) == depth])
    explored = 0

    def image(u, imgs):
        acc = [0] * r
        for c, g in zip(u, imgs):
            for t in range(r):
                acc[t] += c * g[t]
        return shape.elem(acc)

    def consistent(imgs):
        m = len(imgs)
        for i in range(m):
            for j in range(m):
                prod = A.table[i][j]
                if any(prod[t] for t in range(m, r)):
                    continue
                if image(list(prod[:m]) + [0] * (r - m), list(imgs) + [shape.zero()] * (r - m)) != B.mul(imgs[i], imgs[j]):
                    return False
        return True

    def dfs(imgs):
        nonlocal explored
        if len(imgs) == r:
            if SubgroupBasis.span(shape, imgs).order != shape.order:
                return None
            for i in range(r):
                for j in range(r):
                    if image(A.table[i][j], imgs) != B.mul(imgs[i], imgs[j]):
                        return None
            return list(imgs)
        for g in cands[len(imgs)]:
            explored += 1
            if explored > budget:
                raise BudgetError
            nxt = imgs + [g]
            if consistent(nxt):
                found = dfs(nxt)
                if found:
                    return found
        return None

    try:
        found = dfs([])
    except BudgetError:
        return Verdict("inconclusive", reason=f"budget {budget} exhausted", explored=explored)
    if found:
        return Verdict("yes", witness=[list(g) for g in found], explored=explored)
    return Verdict("no", reason="exhaustive search over generator images", explored=explored)

