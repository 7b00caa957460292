import json
import random

import pytest

from conftest import apog_upto, catalog
from polytope_rigidity.errors import BoundTooLarge, ValidationError
from polytope_rigidity.rigidity import (COMBINATORIAL, RING_LEVEL, Fingerprint, compare,
                                        compare_fingerprints, fingerprint, verify_rigidity_facts)


def test_as3_fingerprint():
    fp = fingerprint(catalog("as3"))
    assert fp.ring_computed
    assert list(fp.betti_total) == [1, 0, 0, 15, 35, 24, 6, 24, 35, 15, 0, 0, 1]
    assert fp.annihilator_codims == ((5, 3), (9, 6), (21, 6))
    assert fp.belt_census[4] == (3, 0) and fp.belt_census[5] == (6, 6)
    assert fp.family == "almost-pogorelov"
    assert fp.rank_B4 == fp.p4 == 3


def test_p8_fingerprint():
    fp = fingerprint(catalog("p8"))
    assert fp.belt_census[4] == (4, 1)
    assert fp.rank_B4 == 5


def test_simplex_fingerprint_is_nearly_empty():
    fp = fingerprint(catalog("simplex"))
    assert all(v == (0, 0) for v in fp.belt_census.values())
    assert fp.annihilator_codims == ()
    assert fp.bad_count_profile == ()
    assert fp.rank_H3 == 0


@pytest.mark.parametrize("name", ["simplex", "cube", "m5xi", "as3", "p8", "m6xi"])
def test_fingerprint_stable_under_relabeling(name):
    P = catalog(name)
    base = fingerprint(P).to_dict()
    rng = random.Random(name)
    for _ in range(20):
        perm = list(range(P.m))
        rng.shuffle(perm)
        Q = P.relabel(perm)
        if rng.random() < 0.5:
            Q = Q.mirror()
        assert fingerprint(Q).to_dict() == base


def test_pe3_combinatorial_fields_stable_under_relabeling():
    P = catalog("pe3")
    base = fingerprint(P, ring_bound=0).to_dict()
    rng = random.Random(3)
    for _ in range(20):
        perm = list(range(P.m))
        rng.shuffle(perm)
        assert fingerprint(P.relabel(perm), ring_bound=0).to_dict() == base


def test_b4_equals_quadrangle_count_on_apog():
    for P in apog_upto(11):
        if P.m <= 7:
            continue
        fp = fingerprint(P)
        assert fp.rank_B4 == fp.p4


def test_compare_examples():
    r = compare(catalog("p8"), catalog("m6xi"))
    assert r.distinguished and r.field == "rank_B4"
    assert (r.left, r.right) == (5, 9)
    assert not r.isomorphic
    P = catalog("as3")
    same = compare(P, P.relabel(list(reversed(range(P.m)))))
    assert not same.distinguished
    assert same.verdict == "indistinguishable by fingerprint"
    assert same.isomorphic
    ten = [P for P in apog_upto(10) if P.m == 10]
    r = compare(*ten)
    assert r.field == "rank_B4"
    assert {r.left, r.right} == {2, 3}


def test_compare_never_claims_ring_isomorphism():
    r = compare(catalog("cube"), catalog("cube"))
    text = r.format_text()
    assert "indistinguishable by fingerprint" in text
    assert "isomorphic rings" not in text
    assert json.loads(json.dumps(r.to_dict()))["isomorphic"] is True


def test_json_round_trip():
    fp = fingerprint(catalog("p8"))
    back = Fingerprint.from_dict(json.loads(fp.to_json()))
    assert back == fp
    assert set(fp.to_dict()["ring_level"]) == set(RING_LEVEL)
    assert set(fp.to_dict()["combinatorial"]) == set(COMBINATORIAL)
    with pytest.raises(ValidationError):
        Fingerprint.from_dict({"schema": 99})


def test_fingerprint_bound():
    with pytest.raises(BoundTooLarge):
        fingerprint(catalog("c60"))
    fp = fingerprint(catalog("prism:15"))
    assert not fp.ring_computed and fp.rank_B4 is None


def test_ring_fields_skipped_when_missing():
    a = fingerprint(catalog("prism:15"))
    b = fingerprint(catalog("prism:16"))
    r = compare_fingerprints(a, b)
    assert r.field == "m"


def test_verify_apog_11():
    rep = verify_rigidity_facts("apog", 11)
    assert rep.count == 8
    assert rep.census == {6: 1, 7: 1, 8: 0, 9: 1, 10: 2, 11: 3}
    assert rep.all_distinct and rep.separated_by_m_p4


def test_verify_flag_8():
    rep = verify_rigidity_facts("flag", 8)
    assert rep.count == 4 and rep.all_distinct
    assert rep.to_dict()["census"] == {"6": 1, "7": 1, "8": 2}


@pytest.mark.slow
def test_verify_ideal_20():
    rep = verify_rigidity_facts("iapog", 20)
    assert rep.count == 3 and rep.all_distinct
    assert rep.separating_fields == {"m": 3}


def test_verify_unknown_family():
    with pytest.raises(ValidationError):
        verify_rigidity_facts("cubic", 8)
