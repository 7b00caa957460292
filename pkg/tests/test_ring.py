import pytest
from hypothesis import given, settings, strategies as st

from conftest import catalog, flag_upto
from polytope_rigidity.belts import FamilyClass, classify_family, enumerate_belts
from polytope_rigidity.cohomology import bigraded_betti
from polytope_rigidity.errors import (BoundTooLarge, InvalidOmega, MixedTables, NotFlag,
                                      OutOfFamily)
from polytope_rigidity.polytope import mask_of, n2_pairs
from polytope_rigidity.ring import (RingElement, annihilator_codim, annihilator_dim, build_ring,
                                    check_pairing, criterion_bapog, criterion_ideal_bapog,
                                    divisible_by_whole_coset, h3h3_products, is_divisible_by,
                                    multiply, rank_B4, rank_B5, rank_report, ring_adjacency_test,
                                    self_common_divisors, subgroup_A3, subgroup_A3_rank_by_kernel,
                                    surrounded_faces, verify_ring_axioms)

_TABLES = {}


def table(name, coeff="z"):
    key = (name, coeff)
    if key not in _TABLES:
        _TABLES[key] = build_ring(catalog(name), coeff=coeff)
    return _TABLES[key]


@pytest.mark.parametrize("name", ["as3", "p8", "m6xi", "cube", "simplex"])
def test_ring_ranks_equal_betti_totals(name):
    T = table(name)
    assert T.ranks_by_degree() == bigraded_betti(T.P).total
    assert T.dimension == sum(T.ranks_by_degree())


def test_as3_dimension():
    assert table("as3").dimension == 156


@pytest.mark.parametrize("name", ["as3", "p8", "m6xi", "cube", "m5xi", "m3xi"])
def test_axioms_exhaustive(name):
    rep = verify_ring_axioms(table(name), exhaustive=True)
    assert rep.ok, rep.failures[:5]
    assert rep.associativity_triples > 0


def test_axioms_sampled_are_deterministic():
    T = table("as3")
    a = verify_ring_axioms(T, exhaustive=False, samples=200, seed=5)
    b = verify_ring_axioms(T, exhaustive=False, samples=200, seed=5)
    assert a.ok and a.to_dict() == b.to_dict()


def test_pairing_unimodular_on_every_block():
    T = table("p8")
    for key in T.keys():
        if key[1] in (-1, 0):
            assert check_pairing(T, key)


def _homogeneous(T, draw, degree):
    keys = [k for k in T.keys() if T.degree(*k) == degree]
    coeffs = {}
    for _ in range(draw(st.integers(1, 3))):
        w, s = draw(st.sampled_from(keys))
        i = draw(st.integers(0, T.rank(w, s) - 1))
        coeffs[(w, s, i)] = draw(st.integers(-3, 3))
    return RingElement(T, coeffs)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_random_elements_associative_and_graded_commutative(data):
    T = table("as3")
    degrees = [d for d, r in enumerate(T.ranks_by_degree()) if r]
    d1, d2, d3 = (data.draw(st.sampled_from(degrees)) for _ in range(3))
    x = _homogeneous(T, data.draw, d1)
    y = _homogeneous(T, data.draw, d2)
    z = _homogeneous(T, data.draw, d3)
    assert (x * y) * z == x * (y * z)
    sign = -1 if (d1 * d2) % 2 else 1
    assert x * y == (y * x).scale(sign)
    assert x * (y + z) == x * y + x * z


def test_unit_and_fundamental_class():
    T = table("as3")
    u = T.unit()
    x = T.omega_tilde(n2_pairs(T.P)[0])
    assert u * x == x
    top = T.fundamental_class()
    assert top.degrees() == {T.m + 3}


def test_a3_two_routes():
    for name in ("as3", "p8", "m6xi", "cube", "pe3"):
        T = table(name)
        assert len(subgroup_A3(T)) == subgroup_A3_rank_by_kernel(T)


def test_rank_report_as3():
    r = rank_report(table("as3"))
    assert (r.A3, r.B4, r.B5, r.H3, r.I7, r.A7, r.boldI7) == (9, 3, 12, 6, 24, 12, 12)


def test_b4_counts_four_belts_on_flag_polytopes():
    for P in flag_upto(9):
        T = build_ring(P)
        assert rank_B4(T) == len(enumerate_belts(P, 4))


def test_b5_is_span_of_belt_classes():
    T = table("as3")
    assert rank_B5(T) == len(enumerate_belts(T.P, 5)) == 12


def test_h3_products_land_in_belt_blocks():
    T = table("as3")
    belts = {b.mask for b in enumerate_belts(T.P, 4)}
    for a, b in h3h3_products(T):
        assert (a | b) in belts


def test_coefficient_modes_agree():
    Tz, Tq = table("as3", "z"), table("as3", "q")
    assert h3h3_products(Tz) == h3h3_products(Tq)
    for w in n2_pairs(Tz.P):
        assert annihilator_codim(Tz, Tz.omega_tilde(w)) == annihilator_codim(Tq, Tq.omega_tilde(w))


def test_annihilator_unit_convention():
    T = table("as3")
    x = T.omega_tilde(n2_pairs(T.P)[0])
    assert annihilator_codim(T, x, include_unit=True) == annihilator_codim(T, x) + 1
    assert annihilator_dim(T, x) + annihilator_codim(T, x) == T.dimension - 1


def test_criteria_on_named():
    assert criterion_bapog(table("as3"))
    assert not criterion_ideal_bapog(table("as3"))
    assert not criterion_bapog(table("p8"))
    assert not criterion_bapog(table("m6xi"))
    assert criterion_bapog(table("pe3")) and criterion_ideal_bapog(table("pe3"))
    with pytest.raises(NotFlag):
        criterion_bapog(table("m3xi"))


def test_criteria_match_classification_on_flag_family():
    for P in flag_upto(10):
        T = build_ring(P)
        cls = classify_family(P)
        big = P.m > 7
        assert criterion_bapog(T) == (cls.belongs_to(FamilyClass.AlmostPogorelov) and big)
        assert criterion_ideal_bapog(T) == (cls.belongs_to(FamilyClass.IdealAlmostPogorelov) and big)


@pytest.mark.parametrize("name", ["as3", "p8"])
def test_four_belt_divisors_are_its_diagonals(name):
    T = table(name)
    P = T.P
    for belt in enumerate_belts(P, 4):
        x = T.belt_class(belt.faces)
        f = belt.faces
        diagonals = {mask_of((f[0], f[2])), mask_of((f[1], f[3]))}
        divisors = {w for w in n2_pairs(P) if is_divisible_by(T, x, w)}
        assert divisors == diagonals
        for w in diagonals:
            assert divisible_by_whole_coset(T, x, w)


def test_degree_zero_part_is_not_divisible():
    T = table("as3")
    w = n2_pairs(T.P)[0]
    assert not is_divisible_by(T, T.omega_tilde(w), w)
    assert is_divisible_by(T, RingElement(T), w)


def test_pe3_adjacency_from_ring():
    T = table("pe3")
    verdicts = ring_adjacency_test(T)
    assert verdicts and all(v.agrees for v in verdicts)
    kinds = {v.kind for v in verdicts}
    assert kinds == {"belt-belt", "quad-belt"}
    for f in surrounded_faces(T.P):
        assert self_common_divisors(T, f) == 3


def test_errors():
    T = table("as3")
    with pytest.raises(InvalidOmega):
        T.omega_tilde(mask_of(T.P.edges[0]))
    with pytest.raises(InvalidOmega):
        T.belt_class((0, 1, 2))
    with pytest.raises(MixedTables):
        multiply(T, T.unit(), table("p8").unit())
    with pytest.raises(OutOfFamily):
        ring_adjacency_test(table("p8"))
    with pytest.raises(BoundTooLarge):
        build_ring(catalog("prism:15"))
    with pytest.raises(ValueError):
        build_ring(catalog("cube"), coeff="r")


def test_export_tags():
    d = table("as3").to_dict()
    tags = [b["tag"] for b in d["basis"]]
    assert tags.count("omega") == 15
    assert tags.count("belt4") == 3
    assert tags.count("unit") == tags.count("fundamental") == 1
    assert d["dimension"] == 156
