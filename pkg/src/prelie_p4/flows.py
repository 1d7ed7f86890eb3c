"""Group of flows: pre-Lie ring -> brace, and the inverse passage.

With x . b written L_x(b), the flow construction is

    W(x)     = sum_{n>=1} L_x^(n-1)(x) / n!
    W(x) * b = sum_{n>=1} L_x^n(b) / n!
    a o b    = a * b + a + b

truncated where products of k factors vanish (k = nilpotency index). The
inverse passage averages (xi^i a) * b against xi^-i over the p-1 powers of a
(p-1)-th root of unity xi modulo p^3 and rescales by 1/(p-1), which isolates
the part of a * b that is linear in a.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .brace import Brace, strong_index
from .modarith import PreconditionError, factorial_inv_table, mod_inv, primitive_root, teichmuller
from .prelie import PreLieRing, check_prelie_axiom, nilpotency_index


class RegimeError(ValueError):
    """The prime is too small for the nilpotency index."""


class InvariantError(RuntimeError):
    pass


@dataclass(frozen=True)
class FlowContext:
    p: int
    k: int
    modulus: int
    fact_inv: tuple
    xi: int
    scale: int
    terms: int

    def to_json(self) -> dict:
        return {"p": self.p, "k": self.k, "xi": self.xi, "scale": self.scale, "terms": self.terms}


def default_xi(p: int, lift: str = "teichmuller") -> int:
    """Smallest primitive root mod p, lifted to a (p-1)-th root of unity mod p^3.

    ``lift="as-is"`` returns the primitive root itself.
    """
    g = primitive_root(p)
    return g if lift == "as-is" else teichmuller(g, p, 3)


def make_context(A: PreLieRing | None = None, *, p: int | None = None, k: int | None = None,
                 xi="auto", terms: int | None = None) -> FlowContext:
    """Flow context for ring A (or for an explicit p and index k).

    ``terms`` is the number of summands in the inverse passage; p-1 by
    default, ``p`` reproduces the sum over i = 0..p-1 verbatim.
    """
    if A is not None:
        p = A.p
        k = nilpotency_index(A) if k is None else k
    if p is None or k is None:
        raise ValueError("need a ring or both p and k")
    if k >= p:
        raise RegimeError(f"nilpotency index {k} is not below p={p}; the flow series needs k < p")
    modulus = p**3
    try:
        fact_inv = tuple(factorial_inv_table(max(k - 1, 1), modulus, p))
    except PreconditionError as exc:
        raise RegimeError(str(exc)) from exc
    if xi in ("auto", None):
        xi = default_xi(p)
    elif xi == "as-is":
        xi = default_xi(p, "as-is")
    xi = int(xi) % modulus
    if xi % p == 0 or pow(xi, (p - 1), p) != 1 or any(pow(xi, (p - 1) // q, p) == 1 for q in range(2, p) if (p - 1) % q == 0):
        raise ValueError(f"xi={xi} does not have multiplicative order p-1 modulo {p}")
    scale = -(1 + p + p * p) % modulus
    return FlowContext(p, k, modulus, fact_inv, xi, scale, p - 1 if terms is None else terms)


def _depth(ctx: FlowContext) -> int:
    return max(ctx.k - 1, 1)


def w_map(A: PreLieRing, ctx: FlowContext, x):
    return tuple(int(c) for c in w_map_array(A, ctx, np.array([x]))[0])


def w_map_array(A: PreLieRing, ctx: FlowContext, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.int64)
    acc = X.copy()
    term = X
    for n in range(2, _depth(ctx) + 1):
        term = A.mul_array(X, term)
        acc = acc + ctx.fact_inv[n] * term
    return A.shape.reduce(acc)


def w_inverse(A: PreLieRing, ctx: FlowContext, a):
    return tuple(int(c) for c in w_inverse_array(A, ctx, np.array([a]))[0])


def w_inverse_array(A: PreLieRing, ctx: FlowContext, Y: np.ndarray) -> np.ndarray:
    """Solve W(x) = y by x <- y - (W(x) - x); exact after k rounds."""
    Y = np.asarray(Y, dtype=np.int64)
    X = Y.copy()
    for _ in range(ctx.k):
        X = A.shape.reduce(Y - (w_map_array(A, ctx, X) - X))
    if (w_map_array(A, ctx, X) != Y).any():
        raise InvariantError("fixed-point iteration for W^-1 did not converge within k steps")
    return X


def star_flow(A: PreLieRing, ctx: FlowContext, x, b):
    return tuple(int(c) for c in star_flow_array(A, ctx, np.array([x]), np.array([b]))[0])


def star_flow_array(A: PreLieRing, ctx: FlowContext, X, Bv) -> np.ndarray:
    X = np.asarray(X, dtype=np.int64)
    term = np.asarray(Bv, dtype=np.int64)
    X, term = np.broadcast_arrays(X, term)
    acc = np.zeros_like(term)
    for n in range(1, _depth(ctx) + 1):
        term = A.mul_array(X, term)
        acc = acc + ctx.fact_inv[n] * term
    return A.shape.reduce(acc)


def circ_from_prelie(A: PreLieRing, ctx: FlowContext, a, b):
    return tuple(int(c) for c in circ_from_prelie_array(A, ctx, np.array([a]), np.array([b]))[0])


def circ_from_prelie_array(A: PreLieRing, ctx: FlowContext, Av, Bv) -> np.ndarray:
    Av = np.asarray(Av, dtype=np.int64)
    Bv = np.asarray(Bv, dtype=np.int64)
    Av, Bv = np.broadcast_arrays(Av, Bv)
    X = w_inverse_array(A, ctx, Av)
    return A.shape.reduce(star_flow_array(A, ctx, X, Bv) + Av + Bv)


def circ_cubic(A: PreLieRing, a, b):
    return tuple(int(c) for c in circ_cubic_array(A, np.array([a]), np.array([b]))[0])


def circ_cubic_array(A: PreLieRing, Av, Bv, check: bool = True) -> np.ndarray:
    """a o b = a + b + a.b - (a.a).b / 2 + a.(a.b) / 2, valid when A^[4] = 0."""
    if check:
        if A.p <= 3:
            raise RegimeError("the cubic formula needs p > 3")
        k = nilpotency_index(A)
        if k > 4:
            raise RegimeError(f"the cubic formula needs A^[4] = 0; nilpotency index is {k}")
    Av = np.asarray(Av, dtype=np.int64)
    Bv = np.asarray(Bv, dtype=np.int64)
    Av, Bv = np.broadcast_arrays(Av, Bv)
    half = mod_inv(2, A.shape.ambient)
    m = A.mul_array
    ab = m(Av, Bv)
    out = Av + Bv + ab - half * m(m(Av, Av), Bv) + half * m(Av, ab)
    return A.shape.reduce(out)


def star_matrices(A: PreLieRing, ctx: FlowContext) -> np.ndarray:
    """S[a] with a * b = S[a] b for every element a (index order).

    Uses that W(x) * b is additive in b.
    """
    shape = A.shape
    elems = shape.all_elements()
    X = w_inverse_array(A, ctx, elems)
    cols = [star_flow_array(A, ctx, X, e[None, :]) for e in np.eye(shape.rank, dtype=np.int64)]
    return np.stack(cols, axis=2)


def circle_table(A: PreLieRing, ctx: FlowContext) -> np.ndarray:
    shape = A.shape
    n = shape.order
    elems = shape.all_elements()
    S = star_matrices(A, ctx)
    table = np.empty((n, n), dtype=np.int32)
    mods = shape.moduli_array
    for i in range(n):
        st = (elems @ S[i].T) % mods
        table[i] = shape.encode((st + elems[i] + elems) % mods)
    return table


def brace_from_prelie(A: PreLieRing, ctx: FlowContext | None = None, materialize="auto") -> Brace:
    """The brace of A via the group of flows.

    ``materialize="auto"`` stores the full circle table when the group has at
    most 7^4 elements; otherwise the brace evaluates lazily.
    """
    ctx = ctx or make_context(A)
    shape = A.shape

    def circ_array(Av, Bv):
        return circ_from_prelie_array(A, ctx, Av, Bv)

    def inverse(Av):
        X = w_inverse_array(A, ctx, Av)
        return w_map_array(A, ctx, shape.reduce(-X))

    prov = {"construction": "group-of-flows", "source": A.to_json(), **ctx.to_json()}
    if materialize == "auto":
        materialize = shape.order <= 7**4
    table = circle_table(A, ctx) if materialize else None
    return Brace(shape, table=table, circ_array=circ_array, inverse=inverse, provenance=prov)


def prelie_from_brace(B: Brace, ctx: FlowContext | None = None, check: bool = True) -> PreLieRing:
    """Recover the pre-Lie product from the star operation of B."""
    shape = B.shape
    p = shape.p
    if ctx is None:
        k = strong_index(B)
        if k is None:
            raise RegimeError("brace is not strongly nilpotent")
        if k >= p - 1:
            raise RegimeError(f"strong nilpotency index {k} is not below p-1={p - 1}")
        ctx = make_context(p=p, k=k)
    M = ctx.modulus
    basis = np.eye(shape.rank, dtype=np.int64)
    table = []
    for i in range(shape.rank):
        row = []
        for j in range(shape.rank):
            acc = np.zeros(shape.rank, dtype=np.int64)
            for t in range(ctx.terms):
                a = shape.reduce(pow(ctx.xi, t, M) * basis[i])
                w = pow(ctx.xi, p - 1 - t, M)
                acc = (acc + w * B.star_array(a[None, :], basis[j][None, :])[0]) % M
            row.append(shape.reduce(ctx.scale * acc).tolist())
        table.append(row)
    A = PreLieRing(shape, table)
    if check:
        rep = check_prelie_axiom(A)
        if not rep.ok:
            raise InvariantError(f"recovered product is not pre-Lie at {rep.violations[0].witness}; check xi or the regime")
    return A
