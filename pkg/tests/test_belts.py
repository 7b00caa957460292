import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import apog_upto, catalog, flag_upto, frozen, simple_upto
from polytope_rigidity.belts import (Belt, FamilyClass, admissible_triples, bad_count_profile,
                                     bad_pairs, belt_census, classify_family, enumerate_belts,
                                     enumerate_belts_naive, is_flag, is_flag_direct, is_good_pair,
                                     quad_alternating_belts, satisfies_apb_condition,
                                     separating_belt, surrounding_belt)
from polytope_rigidity.errors import InvalidPair, NotDisjoint, NotFlag
from polytope_rigidity.polytope import bits, mask_of, n2_pairs


def _check_belt(P, belt: Belt):
    f = belt.faces
    k = len(f)
    for s in range(k):
        for t in range(s + 1, k):
            consecutive = t == s + 1 or (s == 0 and t == k - 1)
            assert P.adjacent(f[s], f[t]) == consecutive
    for s in range(k):
        trio = mask_of((f[s - 1], f[s], f[(s + 1) % k]))
        if k > 3:
            assert not P.is_vertex_mask(trio)


@pytest.mark.parametrize("name", ["as3", "p8", "m6xi", "m5xi", "cube", "barrel:5", "pe3"])
def test_belt_census_matches_brute_force(name):
    want = {int(k): tuple(v) for k, v in frozen()["belt_census"][name].items()}
    assert belt_census(catalog(name), 6) == want


def test_dfs_equals_naive_on_small_polytopes():
    for P in simple_upto(8):
        for k in range(3, min(P.m, 7) + 1):
            fast = sorted(tuple(sorted(b.faces)) for b in enumerate_belts(P, k))
            slow = sorted(tuple(sorted(c)) for c in enumerate_belts_naive(P, k))
            assert fast == slow


@pytest.mark.parametrize("name", ["as3", "pe3", "m6xi"])
def test_belts_satisfy_definition(name):
    P = catalog(name)
    for k in range(3, 7):
        for b in enumerate_belts(P, k):
            _check_belt(P, b)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(["as3", "p8", "m6xi", "pe3"]), st.integers(0, 10 ** 6))
def test_belt_census_invariant_under_relabeling(name, seed):
    P = catalog(name)
    perm = list(range(P.m))
    random.Random(seed).shuffle(perm)
    assert belt_census(P.relabel(perm), 6) == belt_census(P, 6)


def test_flag_predicates_agree():
    for P in simple_upto(9):
        if P.m > 4:
            assert is_flag(P) == is_flag_direct(P)


@pytest.mark.parametrize("name, family", [
    ("simplex", FamilyClass.Simplex),
    ("m3xi", FamilyClass.AlmostFlagOnly),
    ("cube", FamilyClass.AlmostPogorelov),
    ("m5xi", FamilyClass.AlmostPogorelov),
    ("as3", FamilyClass.AlmostPogorelov),
    ("p8", FamilyClass.Flag),
    ("m6xi", FamilyClass.Flag),
    ("pe3", FamilyClass.IdealAlmostPogorelov),
    ("barrel:5", FamilyClass.StronglyPogorelov),
    ("c60", FamilyClass.StronglyPogorelov),
])
def test_classification(name, family):
    assert classify_family(catalog(name)).family is family


def test_nonflag_exists_at_m7():
    # the first polytope with a nontrivial 3-belt appears at m = 7
    found = [P for P in simple_upto(7)
             if classify_family(P).family is FamilyClass.NonFlag]
    assert found and min(P.m for P in found) == 7
    for P in found:
        assert any(not b.trivial for b in enumerate_belts(P, 3))


def test_family_membership_is_nested():
    F = FamilyClass
    for name in ("barrel:5", "c60"):
        cls = classify_family(catalog(name))
        assert cls.belongs_to(F.Pogorelov)
        assert cls.belongs_to(F.AlmostPogorelov)
        assert cls.belongs_to(F.Flag)
        assert not cls.belongs_to(F.IdealAlmostPogorelov)
    pe3 = classify_family(catalog("pe3"))
    assert pe3.belongs_to(F.AlmostPogorelov) and not pe3.belongs_to(F.Pogorelov)


def test_separating_belt_examples_as3():
    P = catalog("as3")
    quads = set(P.quadrangles)
    checked_none = checked_found = 0
    for i, j, k in admissible_triples(P):
        touches = any(x in quads and P.adjacent(x, k) for x in (i, j))
        belt = separating_belt(P, i, j, k)
        if touches:
            assert belt is None
            checked_none += 1
        else:
            assert belt is not None
            assert {i, j} <= set(belt.faces) and k not in belt.faces
            checked_found += 1
    assert checked_none and checked_found


def test_separating_belt_errors():
    P = catalog("as3")
    i, j = bits(n2_pairs(P)[0])
    with pytest.raises(InvalidPair):
        separating_belt(P, i, i, j)
    a, b = P.edges[0]
    c = next(x for x in range(P.m) if x not in (a, b))
    with pytest.raises(NotDisjoint):
        separating_belt(P, a, b, c)
    with pytest.raises(NotFlag):
        satisfies_apb_condition(catalog("m3xi"))


@pytest.mark.parametrize("name, expected", [
    ("as3", True), ("p8", True), ("cube", True), ("m5xi", True), ("m6xi", False)])
def test_apb_condition(name, expected):
    assert satisfies_apb_condition(catalog(name)) is expected


def test_apb_condition_on_apog_family():
    for P in apog_upto(11):
        assert satisfies_apb_condition(P)


def test_bad_pair_profile_as3():
    P = catalog("as3")
    assert bad_count_profile(P) == [0] * 3 + [2] * 6 + [7] * 6
    for w in n2_pairs(P):
        for other in bad_pairs(P, w):
            assert not is_good_pair(P, other, w)


def test_bad_pairs_of_quad_pentagon_are_quad_pairs():
    P = catalog("as3")
    for w in n2_pairs(P):
        sizes = sorted(P.face_size(f) for f in bits(w))
        if sizes == [4, 5]:
            for pair in bad_pairs(P, w):
                assert [P.face_size(f) for f in pair] == [4, 4]


def test_good_pair_errors():
    P = catalog("as3")
    w = n2_pairs(P)[0]
    with pytest.raises(InvalidPair):
        is_good_pair(P, w, w)
    with pytest.raises(InvalidPair):
        bad_pairs(P, P.edges[0])


def test_surrounding_belts_of_quadrangles():
    P = catalog("as3")
    for q in P.quadrangles:
        b = surrounding_belt(P, q)
        assert b is not None and b.k == 4 and b.trivial
    assert surrounding_belt(catalog("simplex"), 0) is None


def test_quad_alternating_belts():
    assert len(quad_alternating_belts(catalog("m6xi"), 6)) == 9
    pe3 = catalog("pe3")
    belts = quad_alternating_belts(pe3)
    sizes = pe3.face_sizes
    for b in belts:
        flags = [sizes[f] == 4 for f in b.faces]
        assert all(flags[t] != flags[(t + 1) % b.k] for t in range(b.k))
    assert belts


def test_flag_family_to_10_has_no_3_belts():
    for P in flag_upto(10):
        assert not enumerate_belts(P, 3)
