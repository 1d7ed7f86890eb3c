import pytest

from prelie_p4.families import (
    CHAIN_CLAIM,
    FAMILY_EXPONENTS,
    ConstraintError,
    FamilySpec,
    build,
    canonical_spec,
    catalog_sample,
    validate,
)
from prelie_p4.prelie import check_prelie_axiom, check_well_defined, strong_chain

from oracles import prelie_holds, product, strong_chain_orders

FAMILIES = range(1, 11)


@pytest.mark.parametrize("family", FAMILIES)
def test_shape_follows_family(family):
    spec = canonical_spec(family, 7)
    assert spec.shape.exponents == FAMILY_EXPONENTS[family]


def test_validate_item4_examples():
    assert validate(FamilySpec(4, 7, dict(a=7, c=49, e=49, g=49, b=0))).ok
    rep = validate(FamilySpec(4, 7, dict(a=1)))
    assert "p∤a" in [v.check for v in rep.violations]


def test_validate_item1_relations():
    a, b, c, d, e, f, g, h = 1, 0, 0, 0, 0, 1, 0, 0
    # both relations evaluated directly
    assert c * g - b * h == b * g - d * f
    assert b * e - c * f == c * e - a * h
    assert validate(FamilySpec(1, 7, dict(a=a, f=f))).ok


def test_build_item5():
    A = build(FamilySpec(5, 7, dict(a=49)))
    assert A.table == (((49, 0), (0, 0)), ((0, 0), (0, 0)))


def test_build_item2_single_alpha():
    A = build(FamilySpec(2, 7, dict(alpha_xx=1)))
    assert A.mul((1, 0, 0, 0), (1, 0, 0, 0)) == (0, 0, 1, 0)
    nonzero = [(i, j) for i in range(4) for j in range(4) if any(A.table[i][j])]
    assert nonzero == [(0, 0)]
    assert check_prelie_axiom(A).ok
    assert [S.order for S in strong_chain(A)] == [7**4, 7, 1]
    # accepted, but flagged: one nonzero pair cannot make the ring two-generated
    assert validate(FamilySpec(2, 7, dict(alpha_xx=1))).warnings


def test_build_item9_transcription():
    # a=7, b=1, alpha=0 is rejected: x.x = 7x + x^2 gives A^[3] != 0, against the family claim
    spec = FamilySpec(9, 7, dict(a=7, b=1, alpha=0))
    with pytest.raises(ConstraintError):
        build(spec)
    A = build(spec, check=False)
    assert A.mul((1, 0), (1, 0)) == (7, 1)
    assert check_prelie_axiom(A).ok
    assert [S.order for S in strong_chain(A)] == [7**4, 7**2, 7, 1]
    # same transcription at p=3, against the set-based chain
    A3 = build(FamilySpec(9, 3, dict(a=3, b=1, alpha=0)), check=False)
    assert strong_chain_orders(A3.table, A3.shape.moduli) == [S.order for S in strong_chain(A3)] == [81, 9, 3, 1]


def test_build_rejects_invalid():
    with pytest.raises(ConstraintError) as exc:
        build(FamilySpec(4, 7, dict(a=1, c=1)))
    names = {v.check for v in exc.value.report.violations}
    assert {"p∤a", "p^2∤c"} <= names


def test_catalog_sample_empty():
    assert catalog_sample(7, 3, 0, 1) == []


def test_catalog_sample_item4():
    specs = catalog_sample(7, 4, 100, 1)
    assert len(specs) == 100
    for s in specs:
        P = s.reduced()
        assert P["c"] % 49 == P["e"] % 49 == P["g"] % 49 == 0
        assert P["a"] % 7 == 0
        assert P["b"] * P["g"] % 343 == 0


def test_catalog_sample_item1_relations():
    for s in catalog_sample(7, 1, 100, 1):
        P = s.reduced()
        a, b, c, d, e, f, g, h = (P[k] for k in "abcdefgh")
        assert (c * g - b * h - (b * g - d * f)) % 7 == 0
        assert (b * e - c * f - (c * e - a * h)) % 7 == 0


@pytest.mark.parametrize("family", FAMILIES)
def test_catalog_sample_deterministic(family):
    assert catalog_sample(11, family, 5, 3) == catalog_sample(11, family, 5, 3)
    assert catalog_sample(11, family, 5, 3) != catalog_sample(11, family, 5, 4) or family in (5,)


@pytest.mark.parametrize("family", FAMILIES)
def test_canonical_instances_against_brute_force(family):
    # p=3 keeps every group at 81 elements, small enough for set-based oracles
    A = build(canonical_spec(family, 3), check=False)
    mods = A.shape.moduli
    basis = A.shape.basis()
    for a in basis:
        for b in basis:
            assert A.mul(a, b) == product(A.table, mods, a, b)
            for c in basis:
                assert prelie_holds(A.table, mods, a, b, c)


@pytest.mark.parametrize("family", FAMILIES)
@pytest.mark.parametrize("p", [7, 11])
def test_canonical_instances_claims(family, p):
    spec = canonical_spec(family, p)
    assert validate(spec).ok
    A = build(spec)
    assert check_well_defined(A.table, A.shape).ok
    assert check_prelie_axiom(A).ok
    orders = [S.order for S in strong_chain(A)]
    claim = CHAIN_CLAIM[family]
    if claim is None:
        assert len(orders) <= 4
    else:
        assert len(orders) == claim + 1


def test_spec_json_roundtrip():
    spec = canonical_spec(8, 7)
    assert FamilySpec.from_json(spec.to_json()) == spec


def test_item10_modes():
    section = FamilySpec(10, 7, dict(a=7, d=7))
    strict = FamilySpec(10, 7, {k: 1 for k in "abcdefgh"})
    assert validate(section).ok
    assert not validate(section, item10="summary").ok
    assert validate(strict, item10="summary").ok
    assert not validate(strict).ok
