"""Combinatorics and moment-angle cohomology of simple 3-polytopes."""

from .belts import (Belt, FamilyClass, belt_census, classify_family, enumerate_belts,
                    is_almost_pogorelov, is_flag, is_pogorelov)
from .cohomology import BettiTable, bigraded_betti, omega_betti, omega_betti_chain
from .constructions import enumerate_family, named
from .errors import BoundError, PolytopeError, ValidationError
from .polytope import SimplePolytope, from_face_cycles, from_json, is_isomorphic
from .rigidity import Fingerprint, compare, fingerprint, verify_rigidity_facts
from .ring import RingTable, build_ring, criterion_bapog, criterion_ideal_bapog, rank_report

__version__ = "0.1.0"

__all__ = [
    "Belt", "BettiTable", "BoundError", "FamilyClass", "Fingerprint", "PolytopeError",
    "RingTable", "SimplePolytope", "ValidationError", "belt_census", "bigraded_betti",
    "build_ring", "classify_family", "compare", "criterion_bapog", "criterion_ideal_bapog",
    "enumerate_belts", "enumerate_family", "fingerprint", "from_face_cycles", "from_json",
    "is_almost_pogorelov", "is_flag", "is_isomorphic", "is_pogorelov", "named",
    "omega_betti", "omega_betti_chain", "rank_report", "verify_rigidity_facts",
]
