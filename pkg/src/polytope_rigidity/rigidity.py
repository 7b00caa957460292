"""Invariant fingerprints of simple 3-polytopes and pairwise comparison.

A fingerprint gathers numbers that any graded ring isomorphism of
H*(Z_P) must preserve ("ring-level") next to purely combinatorial data
("combinatorial").  Two polytopes with different ring-level entries cannot
have isomorphic cohomology rings; equal fingerprints prove nothing, and
``compare`` says so.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field, replace
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Optional

from .belts import (bad_count_profile, belt_census, classify_family,
                    quad_alternating_belts)
from .cohomology import DEFAULT_SWEEP_BOUND, bigraded_betti
from .constructions import enumerate_family, family_census
from .errors import BoundTooLarge, ValidationError
from .polytope import SimplePolytope, f_vector, is_isomorphic
from .ring import DEFAULT_RING_BOUND, RingTable, annihilator_codims, rank_report

SCHEMA_VERSION = 1
DEFAULT_BELT_KMAX = 6

RING_LEVEL = ("m", "rank_B4", "rank_A3", "rank_H3", "rank_B5", "rank_I7",
              "rank_A7", "rank_boldI7", "betti_total", "annihilator_codims")
COMBINATORIAL = ("f_vector", "p4", "belt_census", "betti_bigraded", "family",
                 "quad_alternating_census", "bad_count_profile")


@dataclass
class Fingerprint:
    m: int
    f_vector: tuple
    p4: int
    belt_census: Dict[int, tuple]
    betti_total: tuple
    betti_bigraded: tuple
    family: str
    quad_alternating_census: Dict[int, int]
    bad_count_profile: tuple
    rank_A3: Optional[int] = None
    rank_B4: Optional[int] = None
    rank_B5: Optional[int] = None
    rank_H3: Optional[int] = None
    rank_I7: Optional[int] = None
    rank_A7: Optional[int] = None
    rank_boldI7: Optional[int] = None
    # sorted (codim, multiplicity) pairs; None when the ring was not built
    annihilator_codims: Optional[tuple] = None
    ring_computed: bool = field(default=False)

    def value(self, name: str):
        return getattr(self, name)

    def to_dict(self) -> dict:
        def enc(v):
            if isinstance(v, dict):
                return {str(k): enc(x) for k, x in sorted(v.items())}
            if isinstance(v, tuple):
                return [enc(x) for x in v]
            return v

        return {
            "schema": SCHEMA_VERSION,
            "ring_computed": self.ring_computed,
            "ring_level": {k: enc(self.value(k)) for k in RING_LEVEL},
            "combinatorial": {k: enc(self.value(k)) for k in COMBINATORIAL},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "Fingerprint":
        if data.get("schema") != SCHEMA_VERSION:
            raise ValidationError("unsupported fingerprint schema")
        flat = {**data["ring_level"], **data["combinatorial"]}

        def tup(v):
            return tuple(tup(x) for x in v) if isinstance(v, list) else v

        return cls(
            m=flat["m"],
            f_vector=tup(flat["f_vector"]),
            p4=flat["p4"],
            belt_census={int(k): tup(v) for k, v in flat["belt_census"].items()},
            betti_total=tup(flat["betti_total"]),
            betti_bigraded=tup(flat["betti_bigraded"]),
            family=flat["family"],
            quad_alternating_census={int(k): v for k, v in flat["quad_alternating_census"].items()},
            bad_count_profile=tup(flat["bad_count_profile"]),
            annihilator_codims=tup(flat["annihilator_codims"]),
            ring_computed=data["ring_computed"],
            **{k: flat[k] for k in RING_LEVEL if k.startswith("rank_")},
        )


def fingerprint(P: SimplePolytope, k_max: int = DEFAULT_BELT_KMAX,
                ring_bound: int = DEFAULT_RING_BOUND,
                bound: int = DEFAULT_SWEEP_BOUND) -> Fingerprint:
    """Collect the invariants of P.  Ring-level ranks and annihilators are
    filled in only when m <= ring_bound; above ``bound`` nothing is computed."""
    if P.m > bound:
        raise BoundTooLarge(f"m={P.m} exceeds the fingerprint bound {bound}")
    return replace(_fingerprint(P, k_max, ring_bound, bound))


@lru_cache(maxsize=256)
def _fingerprint(P: SimplePolytope, k_max: int, ring_bound: int, bound: int) -> Fingerprint:
    table = bigraded_betti(P, bound=bound)
    qa = Counter(b.k for b in quad_alternating_belts(P, k_max))
    fp = Fingerprint(
        m=P.m,
        f_vector=f_vector(P),
        p4=P.p_vector().get(4, 0),
        belt_census=belt_census(P, k_max),
        betti_total=tuple(table.total),
        betti_bigraded=tuple((i, j, r) for (i, j), r in sorted(table.bigraded.items())),
        family=classify_family(P).family.value,
        quad_alternating_census=dict(sorted(qa.items())),
        bad_count_profile=tuple(bad_count_profile(P)),
    )
    if P.m <= ring_bound:
        T = RingTable(P, bound=ring_bound)
        r = rank_report(T)
        fp.rank_A3, fp.rank_B4, fp.rank_B5 = r.A3, r.B4, r.B5
        fp.rank_H3, fp.rank_I7, fp.rank_A7, fp.rank_boldI7 = r.H3, r.I7, r.A7, r.boldI7
        fp.annihilator_codims = tuple(sorted(Counter(annihilator_codims(T).values()).items()))
        fp.ring_computed = True
    return fp


@dataclass
class Comparison:
    distinguished: bool
    field: Optional[str]
    kind: Optional[str]
    left: object
    right: object
    combinatorial_field: Optional[str]
    isomorphic: bool

    @property
    def verdict(self) -> str:
        if self.distinguished:
            return f"distinguished by {self.field}: {self.left} vs {self.right}"
        return "indistinguishable by fingerprint"

    def to_dict(self) -> dict:
        def enc(v):
            return json.loads(json.dumps(v, default=str)) if v is not None else None

        return {
            "verdict": self.verdict,
            "distinguished": self.distinguished,
            "field": self.field,
            "kind": self.kind,
            "left": enc(self.left),
            "right": enc(self.right),
            "first_combinatorial_difference": self.combinatorial_field,
            "isomorphic": self.isomorphic,
        }

    def format_text(self) -> str:
        lines = [self.verdict]
        if self.combinatorial_field:
            lines.append(f"first combinatorial difference: {self.combinatorial_field}")
        lines.append(f"combinatorially equivalent: {'yes' if self.isomorphic else 'no'}")
        return "\n".join(lines)


def first_difference(a: Fingerprint, b: Fingerprint, names) -> Optional[str]:
    for name in names:
        x, y = a.value(name), b.value(name)
        if x is None or y is None:
            continue
        if x != y:
            return name
    return None


def compare_fingerprints(a: Fingerprint, b: Fingerprint, isomorphic: bool = False) -> Comparison:
    ring = first_difference(a, b, RING_LEVEL)
    comb = first_difference(a, b, COMBINATORIAL)
    left = a.value(ring) if ring else None
    right = b.value(ring) if ring else None
    return Comparison(ring is not None, ring, "ring-level" if ring else None,
                      left, right, comb, isomorphic)


def compare(P: SimplePolytope, Q: SimplePolytope, **kwargs) -> Comparison:
    """Compare fingerprints.  Equal fingerprints never imply isomorphic rings;
    only the combinatorial equivalence verdict is reported alongside."""
    return compare_fingerprints(fingerprint(P, **kwargs), fingerprint(Q, **kwargs),
                                is_isomorphic(P, Q))


@dataclass
class RigidityReport:
    family: str
    m_max: int
    count: int
    census: Dict[int, int]
    all_distinct: bool
    separated_by_m_p4: bool
    undistinguished: List[tuple]
    separating_fields: Dict[str, int]

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "m_max": self.m_max,
            "count": self.count,
            "census": {str(k): v for k, v in sorted(self.census.items())},
            "all_distinct": self.all_distinct,
            "separated_by_m_p4": self.separated_by_m_p4,
            "undistinguished": [list(p) for p in self.undistinguished],
            "separating_fields": dict(sorted(self.separating_fields.items())),
        }


def verify_rigidity_facts(family: str, m_max: int, threads: Optional[int] = None,
                          progress=None) -> RigidityReport:
    """Fingerprint every enumerated member of a family with m <= m_max and
    check that ring-level fields tell all of them apart."""
    polys = enumerate_family(family, m_max, threads=threads)
    fps = []
    for n, P in enumerate(polys):
        if progress:
            progress(f"fingerprint {n + 1}/{len(polys)} (m={P.m})")
        fps.append(fingerprint(P))
    fields: Counter = Counter()
    undistinguished = []
    for a, b in combinations(range(len(fps)), 2):
        name = first_difference(fps[a], fps[b], RING_LEVEL)
        if name is None:
            undistinguished.append((a, b))
        else:
            fields[name] += 1
    keys = [(f.m, f.p4) for f in fps]
    return RigidityReport(
        family=family,
        m_max=m_max,
        count=len(fps),
        census=family_census(family, polys, m_max),
        all_distinct=not undistinguished,
        separated_by_m_p4=len(set(keys)) == len(keys),
        undistinguished=undistinguished,
        separating_fields=dict(fields),
    )
