"""Exhaustive pairwise sweeps, split into disjoint row blocks for workers."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .flows import FlowContext, circ_cubic_array, make_context, star_flow_array, w_inverse_array
from .prelie import PreLieRing, nilpotency_index
from .report import Report

BLOCK = 128


def _cubic_block(A: PreLieRing, ctx: FlowContext, elems: np.ndarray, X: np.ndarray, lo: int, hi: int):
    n = len(elems)
    ia = np.repeat(np.arange(lo, hi), n)
    a = elems[ia]
    b = np.tile(elems, (hi - lo, 1))
    flow = A.shape.reduce(star_flow_array(A, ctx, X[ia], b) + a + b)
    cubic = circ_cubic_array(A, a, b, check=False)
    bad = np.flatnonzero((flow != cubic).any(axis=1))
    return len(bad), [(a[t].tolist(), b[t].tolist(), flow[t].tolist(), cubic[t].tolist()) for t in bad[:3]]


def cubic_agreement(A: PreLieRing, ctx: FlowContext | None = None, workers: int = 1) -> Report:
    """Compare the cubic circle formula with the flow circle on every ordered pair."""
    rep = Report("cubic_agreement")
    k = nilpotency_index(A)
    if k > 4:
        rep.warnings.append(f"skipped: A^[4] != 0 (index {k})")
        return rep
    ctx = ctx or make_context(A)
    shape = A.shape
    elems = shape.all_elements()
    X = w_inverse_array(A, ctx, elems)
    n = len(elems)
    blocks = [(lo, min(lo + BLOCK, n)) for lo in range(0, n, BLOCK)]
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        results = list(pool.map(lambda blk: _cubic_block(A, ctx, elems, X, *blk), blocks))
    total = 0
    for count, wits in results:
        total += count
        for a, b, flow, cubic in wits:
            if len(rep.violations) < 5:
                rep.add("cubic_agreement", witness=[a, b], expected=flow, actual=cubic)
    rep.info.update(pairs=n * n, mismatches=total)
    return rep

