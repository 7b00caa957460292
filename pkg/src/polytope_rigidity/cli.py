"""Command-line front end.

Every verb builds one report dictionary.  ``--json`` prints it as JSON; the
default text form prints the same dictionary as ``key: value`` lines with
JSON-encoded values (nested keys joined by dots), so the two carry identical
data.  Face indices in reports are 1-based.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional

from .belts import classify_family, enumerate_belts, enumerate_belts_upto, is_flag
from .cohomology import bigraded_betti
from .constructions import (CATALOG_NAMES, enumerate_family, family_census, named)
from .errors import BoundError, PolytopeError, ValidationError
from .polytope import SimplePolytope, code_hex, f_vector, from_json
from .rigidity import compare, fingerprint, verify_rigidity_facts
from .ring import (annihilator_codims, build_ring, criterion_bapog_detail,
                   criterion_ideal_detail, rank_report, verify_ring_axioms)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_BOUND = 3

VERBS = ("build", "classify", "belts", "betti", "ring", "fingerprint",
         "compare", "enumerate", "verify")


def load_polytope(spec: str) -> SimplePolytope:
    """A catalog name, or a path to a polytope JSON file."""
    if os.path.isfile(spec):
        with open(spec) as fh:
            try:
                return from_json(fh.read())
            except json.JSONDecodeError as exc:
                raise ValidationError(f"{spec}: not valid JSON ({exc})") from None
    return named(spec)


def _progress(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polyrig",
        description="Belts, families, moment-angle cohomology and ring invariants "
                    "of simple 3-polytopes.",
        epilog="Polytopes are given by catalog name (" + ", ".join(CATALOG_NAMES)
               + ") or by a JSON file {\"m\": .., \"faces\": [[..], ..]}.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON report")
    common.add_argument("--threads", type=_positive, default=None,
                        help="worker processes (default: $POLYRIG_THREADS or 1)")
    sub = parser.add_subparsers(dest="verb", required=True, metavar="VERB")

    p = sub.add_parser("build", parents=[common], help="validate and describe a polytope")
    p.add_argument("polytope")

    p = sub.add_parser("classify", parents=[common], help="cyclic-connectivity family")
    p.add_argument("polytope")

    p = sub.add_parser("belts", parents=[common], help="list k-belts")
    p.add_argument("polytope")
    p.add_argument("--k", type=int, default=None, help="belt length (default: all up to 6)")

    p = sub.add_parser("betti", parents=[common], help="bigraded Betti numbers of Z_P")
    p.add_argument("polytope")
    p.add_argument("--table", action="store_true", help="also render the H^k table")

    p = sub.add_parser("ring", parents=[common], help="ring ranks, criteria, annihilators")
    p.add_argument("polytope")
    p.add_argument("--coeff", choices=("z", "q"), default="z")
    p.add_argument("--export", action="store_true", help="include the basis descriptors")

    p = sub.add_parser("fingerprint", parents=[common], help="invariant fingerprint")
    p.add_argument("polytope")
    p.add_argument("--k", type=int, default=6, help="largest belt length in the census")

    p = sub.add_parser("compare", parents=[common], help="compare two fingerprints")
    p.add_argument("first")
    p.add_argument("second")

    p = sub.add_parser("enumerate", parents=[common], help="enumerate a family")
    p.add_argument("--family", choices=("simple", "flag", "apog", "iapog"), required=True)
    p.add_argument("--max-faces", type=int, required=True)
    p.add_argument("--count-only", action="store_true")

    p = sub.add_parser("verify", parents=[common],
                       help="ring axioms of a polytope, or fingerprint separation in a family")
    p.add_argument("polytope", nargs="?")
    p.add_argument("--family", choices=("simple", "flag", "apog", "iapog"))
    p.add_argument("--max-faces", type=int)
    p.add_argument("--seed", type=int, default=None,
                   help="sample 10^4 random triples with this seed instead of the exhaustive check")
    p.add_argument("--coeff", choices=("z", "q"), default="z")
    return parser


# ---------------------------------------------------------------------------
# reports


def _one_based(faces) -> List[int]:
    return [f + 1 for f in faces]


def report_build(P: SimplePolytope) -> dict:
    return {
        "m": P.m,
        "f_vector": list(f_vector(P)),
        "p_vector": {str(k): v for k, v in sorted(P.p_vector().items())},
        "code": code_hex(P),
        "faces": [list(c) for c in P.face_cycles],
    }


def report_classify(P: SimplePolytope) -> dict:
    return classify_family(P).to_dict()


def report_belts(P: SimplePolytope, k: Optional[int]) -> dict:
    if k is None:
        groups = enumerate_belts_upto(P, min(6, P.m))
    else:
        if k < 3:
            raise ValidationError("--k must be at least 3")
        groups = {k: enumerate_belts(P, k)}
    out = {}
    for size, belts in sorted(groups.items()):
        out[str(size)] = {
            "count": len(belts),
            "trivial": sum(b.trivial for b in belts),
            "nontrivial": sum(not b.trivial for b in belts),
            "belts": [{"faces": _one_based(b.faces), "trivial": b.trivial} for b in belts],
        }
    return out


def report_betti(P: SimplePolytope) -> dict:
    table = bigraded_betti(P)
    return table.to_dict()


def report_ring(P: SimplePolytope, coeff: str, export: bool) -> dict:
    T = build_ring(P, coeff=coeff)
    out = {"m": P.m, "coeff": coeff, "dimension": T.dimension,
           "ranks_by_degree": T.ranks_by_degree(),
           "ranks": rank_report(T).to_dict()}
    if is_flag(P) and P.m > 4:
        b = criterion_bapog_detail(T)
        i = criterion_ideal_detail(T)
        out["criteria"] = {"almost_pogorelov": b.holds, "almost_pogorelov_quotient": b.quotient_form,
                           "ideal": i.holds, "ideal_quotient": i.quotient_form}
    else:
        out["criteria"] = None
    codims = annihilator_codims(T)
    mult = {}
    for v in codims.values():
        mult[v] = mult.get(v, 0) + 1
    out["annihilator_codims"] = {str(k): v for k, v in sorted(mult.items())}
    if export:
        out["basis"] = T.to_dict()["basis"]
    return out


def report_enumerate(family: str, m_max: int, count_only: bool, threads) -> dict:
    polys = enumerate_family(family, m_max, threads=threads, progress=_progress)
    out = {"family": family, "max_faces": m_max,
           "census": {str(m): c for m, c in family_census(family, polys, m_max).items()}}
    if not count_only:
        out["polytopes"] = [{"m": P.m, "p_vector": {str(k): v for k, v in sorted(P.p_vector().items())},
                             "code": code_hex(P)} for P in polys]
    return out


def report_verify(args) -> dict:
    if args.polytope is not None:
        P = load_polytope(args.polytope)
        T = build_ring(P, coeff=args.coeff)
        if args.seed is None:
            rep = verify_ring_axioms(T, exhaustive=True)
        else:
            rep = verify_ring_axioms(T, exhaustive=False, samples=10000, seed=args.seed)
        return {"polytope": args.polytope, "mode": "exhaustive" if args.seed is None else "sampled",
                **rep.to_dict()}
    if args.family is None or args.max_faces is None:
        raise ValidationError("verify needs a polytope or --family with --max-faces")
    return verify_rigidity_facts(args.family, args.max_faces, threads=args.threads,
                                 progress=_progress).to_dict()


# ---------------------------------------------------------------------------
# text rendering


def flatten(report, prefix: str = "") -> List[tuple]:
    if isinstance(report, dict) and report:
        out = []
        for key, value in report.items():
            out += flatten(value, f"{prefix}.{key}" if prefix else str(key))
        return out
    return [(prefix, report)]


def format_text(report: dict) -> str:
    return "\n".join(f"{k}: {json.dumps(v, sort_keys=True)}" for k, v in flatten(report))


def parse_text(text: str) -> dict:
    """Inverse of ``format_text`` for lines of the form ``key: value``."""
    out: dict = {}
    for line in text.splitlines():
        key, sep, value = line.partition(": ")
        if not sep:
            continue
        node = out
        parts = key.split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
        node[parts[-1]] = json.loads(value)
    return out


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.threads is not None:
        os.environ["POLYRIG_THREADS"] = str(args.threads)
    extra = None
    try:
        verb = args.verb
        if verb == "build":
            report = report_build(load_polytope(args.polytope))
        elif verb == "classify":
            report = report_classify(load_polytope(args.polytope))
        elif verb == "belts":
            report = report_belts(load_polytope(args.polytope), args.k)
        elif verb == "betti":
            P = load_polytope(args.polytope)
            report = report_betti(P)
            if args.table:
                extra = bigraded_betti(P).format_table()
        elif verb == "ring":
            report = report_ring(load_polytope(args.polytope), args.coeff, args.export)
        elif verb == "fingerprint":
            report = fingerprint(load_polytope(args.polytope), k_max=args.k).to_dict()
        elif verb == "compare":
            report = compare(load_polytope(args.first), load_polytope(args.second)).to_dict()
        elif verb == "enumerate":
            report = report_enumerate(args.family, args.max_faces, args.count_only, args.threads)
        else:
            report = report_verify(args)
    except BoundError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except PolytopeError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    if args.json:
        print(json.dumps(report, sort_keys=True))
    else:
        print(format_text(report))
        if extra:
            print(extra)
    return EXIT_OK


def main() -> None:
    sys.exit(run())
