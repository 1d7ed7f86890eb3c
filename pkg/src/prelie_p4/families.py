"""The ten classified families of nilpotent pre-Lie rings of order p^4.

Families 1-3 live on C_p^4 (basis x, y, z, w), 4-6 on C_p x C_p^3 stored as
shape (3, 1) with basis (x, y), p^3 x = p y = 0, and 7-10 on C_p^2 x C_p^2.
Family 7 uses the basis (y, y^2) of a one-generated ring; family 8 uses
(u, v) with v.v = g u + h v.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .modarith import Shape, nullspace_mod_p
from .prelie import SCHEMA, FormatError, PreLieRing
from .report import Report

FAMILY_EXPONENTS = {
    1: (1, 1, 1, 1),
    2: (1, 1, 1, 1),
    3: (1, 1, 1, 1),
    4: (3, 1),
    5: (3, 1),
    6: (3, 1),
    7: (2, 2),
    8: (2, 2),
    9: (2, 2),
    10: (2, 2),
}

_PAIRS = ("xx", "xy", "yx", "yy")

# parameter name -> exponent of the modulus it is read in
PARAMS = {
    1: dict.fromkeys("abcdefgh", 1),
    2: {**{f"alpha_{s}": 1 for s in _PAIRS}, **{f"beta_{s}": 1 for s in _PAIRS}},
    3: {f"beta_{s}": 1 for s in _PAIRS},
    4: {"a": 3, "b": 1, "c": 3, "e": 3, "g": 3},
    5: {"a": 3},
    6: {"a": 3, "c": 3, "e": 3, "g": 3},
    7: dict.fromkeys("abcd", 2),
    8: dict.fromkeys("cegh", 2),
    9: {"a": 2, "b": 2, "alpha": 2},
    10: dict.fromkeys("abcdefgh", 2),
}

# advertised (A^[k] != 0, A^[k+1] = 0) pairs; family 4 only promises A^[4] = 0
CHAIN_CLAIM = {1: 3, 2: 2, 3: 2, 4: None, 5: 2, 6: 2, 7: 4, 8: 3, 9: 2, 10: 2}


class ConstraintError(ValueError):
    def __init__(self, report: Report):
        self.report = report
        names = ", ".join(v.check for v in report.violations)
        super().__init__(f"family constraints violated: {names}")


@dataclass
class FamilySpec:
    family: int
    p: int
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.family not in PARAMS:
            raise ValueError(f"unknown family {self.family}; expected 1..10")
        unknown = set(self.params) - set(PARAMS[self.family])
        if unknown:
            raise ValueError(f"family {self.family} has no parameters {sorted(unknown)}")
        self.shape  # validates p

    @property
    def shape(self) -> Shape:
        return Shape(self.p, FAMILY_EXPONENTS[self.family])

    def reduced(self) -> dict:
        """Parameters reduced into their residue ranges, missing ones as 0."""
        return {k: int(self.params.get(k, 0)) % self.p**e for k, e in PARAMS[self.family].items()}

    def to_json(self) -> dict:
        return {"schema": SCHEMA, "family": self.family, "p": self.p, "params": dict(sorted(self.reduced().items()))}

    @classmethod
    def from_json(cls, doc: dict) -> "FamilySpec":
        try:
            return cls(int(doc["family"]), int(doc["p"]), {k: int(v) for k, v in doc.get("params", {}).items()})
        except (KeyError, TypeError, AttributeError) as exc:
            raise FormatError(f"malformed family spec: {exc}") from exc


def _div(x: int, d: int) -> bool:
    return x % d == 0


def validate(spec: FamilySpec, item10: str = "section") -> Report:
    """Check the family's constraints; each failure is reported by name.

    ``item10`` selects which divisibility rule family 10 is held to:
    "section" (p divides every constant) or "summary" (p divides none).
    """
    f, p = spec.family, spec.p
    P = spec.reduced()
    rep = Report("validate", info={"family": f, "p": p})

    def need(cond, name):
        if not cond:
            rep.add(name, witness=P)

    if f == 1:
        a, b, c, d, e, ff, g, h = (P[k] for k in "abcdefgh")
        need(any((a, b, c, d)), "a,b,c,d all zero")
        need(any((e, ff, g, h)), "e,f,g,h all zero")
        need(_div(c * g - b * h - (b * g - d * ff), p), "cg-bh≠bg-df")
        need(_div(b * e - c * ff - (c * e - a * h), p), "be-cf≠ce-ah")
    elif f == 2:
        pairs = [(P[f"alpha_{s}"], P[f"beta_{s}"]) for s in _PAIRS]
        nonzero = [q for q in pairs if any(q)]
        need(nonzero, "all (alpha, beta) pairs zero")
        if 0 < len(nonzero) < 2:
            rep.warnings.append("fewer than two nonzero (alpha, beta) pairs: not two-generated")
        elif nonzero and all(_div(u[0] * v[1] - u[1] * v[0], p) for u in nonzero for v in nonzero):
            rep.warnings.append("(alpha, beta) pairs pairwise proportional: z, w not both in A^[2]")
    elif f == 3:
        need(any(P[f"beta_{s}"] for s in _PAIRS), "all beta zero")
    elif f == 4:
        for k in "ceg":
            need(_div(P[k], p**2), f"p^2∤{k}")
        need(_div(P["a"], p), "p∤a")
        need(_div(P["b"] * P["g"], p**3), "p^3∤bg")
        if P["b"]:
            rep.warnings.append("b≠0: with x,y outside A^[2] the lemma forces b=0")
    elif f == 5:
        need(_div(P["a"], p**2), "p^2∤a")
        need(P["a"] != 0, "a=0")
    elif f == 6:
        for k in "aceg":
            need(_div(P[k], p**2), f"p^2∤{k}")
        need(any(P[k] for k in "aceg"), "a,c,e,g all zero")
    elif f == 7:
        a, b, c, d = (P[k] for k in "abcd")
        for k in "abcd":
            need(_div(P[k], p), f"p∤{k}")
        need(a or c, "a=c=0")
        if a and c and all(_div(P[k], p) for k in "abcd"):
            alpha = (a // p) * pow(c // p, -1, p) % p
            need((a - alpha * c) % p**2 == 0 and (b - alpha * d) % p**2 == 0, "a,b not α·(c,d)")
    elif f == 8:
        c, e, g, h = (P[k] for k in "cegh")
        for k in "ceh":
            need(_div(P[k], p), f"p∤{k}")
        need(not _div(g, p), "p|g")
        need((c + h) % p**2 or (e + h) % p**2, "c+h≡e+h≡0 (A^[3]=0)")
    elif f == 9:
        need(not _div(P["b"], p), "p|b")
        need((P["a"] + P["alpha"] * P["b"]) % p**2 == 0, "a+αb≢0 (A^[3]≠0)")
    elif f == 10:
        vals = [P[k] for k in "abcdefgh"]
        need(any(vals), "a..h all zero")
        if item10 == "summary":
            for k in "abcdefgh":
                need(not _div(P[k], p), f"p|{k}")
        else:
            for k in "abcdefgh":
                need(_div(P[k], p), f"p∤{k}")
            rep.warnings.append("p|a..h enforced (needed for A^[3]=0); item10=\"summary\" requires p∤a..h instead")
    return rep


def _products(f: int, P: dict, p: int) -> dict:
    """Structure constants {(i, j): coeffs}, 0-based generator indices."""
    if f == 1:
        return {
            (0, 0): (0, 0, P["a"], 0),
            (0, 1): (0, 0, P["b"], 0),
            (1, 0): (0, 0, P["c"], 0),
            (1, 1): (0, 0, P["d"], 0),
            (0, 2): (0, 0, 0, P["f"]),
            (1, 2): (0, 0, 0, P["h"]),
            (2, 0): (0, 0, 0, P["e"]),
            (2, 1): (0, 0, 0, P["g"]),
        }
    if f in (2, 3):
        out = {}
        for (i, j), s in zip(((0, 0), (0, 1), (1, 0), (1, 1)), _PAIRS):
            alpha = P.get(f"alpha_{s}", 0)
            out[(i, j)] = (0, 0, alpha, P[f"beta_{s}"])
        return out
    if f == 4:
        return {(0, 0): (P["a"], P["b"]), (0, 1): (P["c"], 0), (1, 0): (P["e"], 0), (1, 1): (P["g"], 0)}
    if f == 5:
        return {(0, 0): (P["a"], 0)}
    if f == 6:
        return {(0, 0): (P["a"], 0), (0, 1): (P["c"], 0), (1, 0): (P["e"], 0), (1, 1): (P["g"], 0)}
    if f == 7:
        a, b, c, d = (P[k] for k in "abcd")
        return {(0, 0): (0, 1), (0, 1): (a, b), (1, 0): (c, d), (1, 1): (0, 2 * c - a)}
    if f == 8:
        return {(0, 1): (P["c"], 0), (1, 0): (P["e"], 0), (1, 1): (P["g"], P["h"])}
    if f == 9:
        a, b, al = P["a"], P["b"], P["alpha"]
        w = (1, al, al, al * al)
        return {ij: (a * s, b * s) for ij, s in zip(((0, 0), (0, 1), (1, 0), (1, 1)), w)}
    if f == 10:
        a, b, c, d, e, ff, g, h = (P[k] for k in "abcdefgh")
        return {(0, 0): (a, b), (0, 1): (c, d), (1, 0): (e, ff), (1, 1): (g, h)}
    raise ValueError(f"unknown family {f}")


def build(spec: FamilySpec, check: bool = True, item10: str = "section") -> PreLieRing:
    if check:
        rep = validate(spec, item10=item10)
        if not rep.ok:
            raise ConstraintError(rep)
    return PreLieRing.from_products(spec.shape, _products(spec.family, spec.reduced(), spec.p))


def item7_uv_ring(p: int, c: int, d: int, e: int, f: int, h: int) -> PreLieRing:
    """Family 7 in the two-generator presentation, basis (u, v) with v.v = u + h v."""
    shape = Shape(p, (2, 2))
    return PreLieRing.from_products(
        shape, {(0, 0): (2 * d - f, 0), (0, 1): (c, d), (1, 0): (e, f), (1, 1): (1, h)}
    )


def _draw(f: int, p: int, rng: random.Random) -> dict:
    def mult(k, e):
        """Random multiple of p^k in Z/p^e."""
        return p**k * rng.randrange(p ** (e - k))

    def unit(e):
        while True:
            x = rng.randrange(p**e)
            if x % p:
                return x

    if f == 1:
        while True:
            a, b, c, d = (rng.randrange(p) for _ in range(4))
            if any((a, b, c, d)):
                break
        ns = nullspace_mod_p([[0, d, c - b, -b], [b - c, -c, 0, a]], p)
        while True:
            coeffs = [rng.randrange(p) for _ in ns]
            efgh = [sum(t * v[i] for t, v in zip(coeffs, ns)) % p for i in range(4)]
            if any(efgh):
                break
        return dict(zip("abcdefgh", (a, b, c, d, *efgh)))
    if f == 2:
        return {k: rng.randrange(p) for k in PARAMS[2]}
    if f == 3:
        return {k: rng.randrange(p) for k in PARAMS[3]}
    if f == 4:
        b = rng.randrange(p) if rng.random() < 0.25 else 0
        return {"a": mult(1, 3), "b": b, "c": mult(2, 3), "e": mult(2, 3), "g": 0 if b else mult(2, 3)}
    if f == 5:
        return {"a": mult(2, 3)}
    if f == 6:
        return {k: mult(2, 3) for k in "aceg"}
    if f == 7:
        a1, c1, d1 = rng.randrange(p), rng.randrange(p), rng.randrange(p)
        if a1 and c1:
            b1 = a1 * pow(c1, -1, p) * d1 % p
        else:
            b1 = rng.randrange(p)
        return {"a": p * a1, "b": p * b1, "c": p * c1, "d": p * d1}
    if f == 8:
        return {"c": mult(1, 2), "e": mult(1, 2), "g": unit(2), "h": mult(1, 2)}
    if f == 9:
        b, alpha = unit(2), rng.randrange(p**2)
        return {"a": -alpha * b % p**2, "b": b, "alpha": alpha}
    if f == 10:
        return {k: mult(1, 2) for k in "abcdefgh"}
    raise ValueError(f"unknown family {f}")


def catalog_sample(p: int, family: int, count: int, seed: int) -> list:
    """``count`` seeded parameter draws, each passing ``validate``.

    Draws that fail validation or carry a warning are rejected, except family
    4's b≠0 warning, which is a legitimate corner of that family.
    """
    rng = random.Random(f"{family}:{p}:{seed}")
    out = []
    while len(out) < count:
        spec = FamilySpec(family, p, _draw(family, p, rng))
        rep = validate(spec)
        tolerated = family in (4, 10)
        if rep.ok and (tolerated or not rep.warnings):
            out.append(spec)
    return out


# one hand-picked instance per family, used by the examples and CLI defaults
def canonical_spec(family: int, p: int) -> FamilySpec:
    P = {
        1: dict(a=1, b=0, c=0, d=0, e=0, f=1, g=0, h=0),
        2: dict(alpha_xx=1, beta_xy=1),
        3: dict(beta_xx=1, beta_yy=1),
        4: dict(a=p, c=p**2, e=p**2, g=p**2),
        5: dict(a=p**2),
        6: dict(a=p**2, c=p**2, e=2 * p**2, g=p**2),
        7: dict(a=p, b=0, c=p, d=0),
        8: dict(c=p, e=p, g=1, h=p),
        9: dict(a=-1 % p**2, b=1, alpha=1),
        10: dict(a=p, d=p, f=2 * p, g=p),
    }[family]
    return FamilySpec(family, p, P)
