"""Command-line entry point: ``toric-sums <command> [options]``.

Exit status is 0 on success, 1 when a verification or consistency check fails,
and 2 for malformed input.  ``--json`` switches from the human table to a
machine record (sorted keys, two-space indent).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from sympy import isprime

from . import __version__
from .conjecture import conjectured_weights
from .hodge import INFINITE, hodge_data
from .laurent import SYMBOLIC, LaurentPolySpec, SpecError, has_g_shape, g_coefficients, parse_document
from .oracle.cyclotomic import Cyclotomic
from .oracle.lpoly import LInconsistencyError, LPolynomial, WeightReport
from .oracle.pipeline import can_compute, instance_run, reconstruct
from .oracle.sums import BudgetExceeded, PaperInstance
from .ordinary import UnsupportedError, global_ordinariness, predicted_slopes, trivial_unit_root_descriptor
from .polytope import (
    DegeneratePolytopeError,
    build_polytope,
    denominator,
    faces_containing_origin_counts,
    normalized_volume,
)
from .verify import load_expected, load_fixture, verify_paper

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


# --- serialization --------------------------------------------------------------


def to_jsonable(x):
    if isinstance(x, bool) or x is None or isinstance(x, (int, str, float)):
        return x
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if x is INFINITE:
        return "inf"
    if x is SYMBOLIC:
        return "*"
    if isinstance(x, Cyclotomic):
        return {"p": x.p, "coords": [to_jsonable(c) for c in x.coords]}
    if isinstance(x, LPolynomial):
        return {"p": x.p, "degree": x.degree, "coeffs": [to_jsonable(c) for c in x.coeffs]}
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [to_jsonable(v) for v in items]
    raise TypeError(f"cannot serialize {type(x).__name__}")


def dumps(doc) -> str:
    return json.dumps(to_jsonable(doc), sort_keys=True, indent=2)


def _cyc_text(c: Cyclotomic) -> str:
    if c.is_rational():
        return str(c.coords[0])
    terms = []
    for i, a in enumerate(c.coords):
        if a:
            terms.append(str(a) if i == 0 else f"{a}*z^{i}")
    return " + ".join(terms)


def _text(x) -> str:
    if isinstance(x, Cyclotomic):
        return _cyc_text(x)
    if isinstance(x, LPolynomial):
        return "[" + ", ".join(_cyc_text(c) for c in x.coeffs) + "]"
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_text(v) for v in x) + "]"
    if isinstance(x, dict):
        return "{" + ", ".join(f"{k}: {_text(v)}" for k, v in x.items()) + "}"
    return str(x)


def render(doc: dict, indent: int = 0) -> str:
    """Plain-text rendering; nested records become indented blocks, record lists become rows."""
    pad = " " * indent
    lines = []
    for k, v in doc.items():
        if isinstance(v, dict) and v and all(isinstance(x, (dict, list)) for x in v.values()):
            lines.append(f"{pad}{k}:")
            lines.append(render(v, indent + 2))
        elif isinstance(v, list) and v and all(isinstance(x, dict) for x in v):
            lines.append(f"{pad}{k}:")
            for row in v:
                lines.append(pad + "  - " + "  ".join(f"{a}={_text(b)}" for a, b in row.items()))
        else:
            lines.append(f"{pad}{k}: {_text(v)}")
    return "\n".join(lines)


# --- input --------------------------------------------------------------------------


def read_spec(path: Optional[str]) -> LaurentPolySpec:
    try:
        if path is None:
            doc = load_fixture("g.spec")
        elif path == "-":
            doc = json.loads(sys.stdin.read())
        else:
            doc = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise InputError(f"input file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    try:
        return parse_document(doc)
    except SpecError as exc:
        raise InputError(f"{path or 'g.spec'}: {exc}") from None


def parse_coeffs(text: Optional[str]) -> Optional[list[int]]:
    if text is None:
        return None
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"--coeffs expects comma-separated integers, got {text!r}") from None


def _prime(args, f: LaurentPolySpec, required: bool = True) -> Optional[int]:
    p = args.prime if args.prime is not None else f.p
    if p is None and required:
        raise InputError(f"'{args.command}' needs a prime: pass --prime P or set \"p\" in the input")
    return p


def _concrete(f: LaurentPolySpec, coeffs: Optional[list[int]], p: int) -> LaurentPolySpec:
    """Fill symbolic coefficients (all ones by default) and reduce mod p."""
    need = sum(c is SYMBOLIC for c in f.coefficients)
    if coeffs is None:
        coeffs = [1] * need
    try:
        if not need and coeffs:
            raise SpecError("--coeffs given but the input has no symbolic coefficients")
        g = f.fill_symbolic(coeffs) if need else f
        return g.with_prime(p)
    except SpecError as exc:
        raise InputError(str(exc)) from None


# --- commands -------------------------------------------------------------------


def cmd_polytope(args, f: LaurentPolySpec) -> tuple[dict, int]:
    P = build_polytope(f)
    P.require_full_dimension()
    counts = {}
    for face in P.lattice:
        counts[face.dim] = counts.get(face.dim, 0) + 1
    doc = {
        "command": "polytope",
        "n": P.n,
        "vertices": [list(v) for v in P.vertices],
        "origin_is_vertex": P.origin_is_vertex,
        "facets_off_origin": [
            {"equation": list(h.coeffs), "vertices": [list(v) for v in P.points_of(h.vertex_ids)]}
            for h in P.facets_off_origin
        ],
        "facets_through_origin": [
            {"normal": list(h.coeffs), "vertices": [list(v) for v in P.points_of(h.vertex_ids)]}
            for h in P.facets_through_origin
        ],
        "face_counts": [counts.get(d, 0) for d in range(P.n + 1)],
        "origin_face_counts": faces_containing_origin_counts(P),
        "origin_faces": [
            {"dim": face.dim, "vertices": [list(v) for v in P.points_of(face.vertex_ids)]}
            for face in P.lattice
            if face.contains_origin and face.dim < P.n
        ],
        "denominator": denominator(P),
        "normalized_volume": normalized_volume(P),
    }
    return doc, EXIT_OK


def cmd_hodge(args, f: LaurentPolySpec) -> tuple[dict, int]:
    P = build_polytope(f)
    hd = hodge_data(P, args.kmax)
    doc = {
        "command": "hodge",
        "D": hd.D,
        "W": list(hd.W),
        "H": list(hd.H),
        "hp_vertices": [list(v) for v in hd.hp_vertices],
        "break_points": [list(v) for v in hd.break_points],
        "chain_vertices": [list(v) for v in hd.chain_vertices],
        "degree": hd.degree,
    }
    return doc, EXIT_OK


def cmd_ordinary(args, f: LaurentPolySpec) -> tuple[dict, int]:
    p = _prime(args, f)
    P = build_polytope(f)
    doc: dict = {"command": "ordinary", "prime": p}
    try:
        verdict = global_ordinariness(f, p, P)
    except UnsupportedError as exc:
        doc.update(status="unsupported", reason=str(exc))
        return doc, EXIT_OK
    doc["status"] = verdict.status
    doc["reason"] = verdict.reason
    doc["facets"] = [
        {
            "facet": rep.facet_id,
            "det_abs": rep.det_abs,
            "invariant_factors": list(rep.invariant_factors),
            "status": v.status,
        }
        for rep, v in verdict.facets
    ]
    if verdict.ordinary:
        pred = predicted_slopes(f, p, P=P)
        doc["slopes"] = [[s, m] for s, m in pred.slopes]
        root = trivial_unit_root_descriptor(f, p)
        if root is not None:
            doc["trivial_unit_root"] = root.describe()
            derived = predicted_slopes(f, p, shift=Fraction(-1), drop_unit_root=True, P=P)
            doc["slopes_after_unit_root_and_shift"] = [[s, m] for s, m in derived.slopes]
    return doc, EXIT_OK


def _oracle_reference(f: LaurentPolySpec, p: int, coeffs) -> Optional[list[int]]:
    g = _concrete(f, coeffs, p)
    P = build_polytope(g)
    d = hodge_data(P).degree
    if not can_compute(g, p, d):
        return None
    return reconstruct(g, p).weights.histogram(P.n)


def cmd_conjecture(args, f: LaurentPolySpec) -> tuple[dict, int]:
    P = build_polytope(f)
    conj = conjectured_weights(P)
    reference, provenance = None, None
    if has_g_shape(f):
        reference, provenance = load_expected(args.expected)["e_ledger"], "reference ledger"
    elif args.prime is not None or f.p is not None:
        p = _prime(args, f)
        reference = _oracle_reference(f, p, parse_coeffs(args.coeffs))
        provenance = f"oracle weight histogram at p={p}" if reference is not None else None
    ks = range(P.n + 1) if args.k is None else [args.k]
    if args.k is not None and not 0 <= args.k <= P.n:
        raise InputError(f"--k must lie in 0..{P.n}")
    rows = []
    for k in ks:
        ref = None if reference is None else reference[k]
        rows.append({
            "k": k,
            "conjectured": conj[k],
            "reference": ref if ref is not None else "n/a",
            "outcome": "n/a" if ref is None else ("MATCH" if ref == conj[k] else "MISMATCH"),
        })
    doc = {"command": "conjecture", "weights": rows, "reference_provenance": provenance or "none"}
    return doc, EXIT_OK


def _factors_text(exps: Sequence[int], q: int) -> str:
    parts = []
    for e in exps:
        c = q**e
        parts.append("(1-T)" if c == 1 else f"(1-{c}T)")
    return "".join(parts) or "none"


def _weights_doc(rep: WeightReport) -> dict:
    return {
        "moduli": {str(m): v for m, v in rep.moduli.items()},
        "weights": {str(m): v for m, v in rep.weights.items()},
        "max_relative_error": rep.max_relative_error,
    }


def cmd_lfunction(args, f: LaurentPolySpec) -> tuple[dict, int]:
    p = _prime(args, f)
    coeffs = parse_coeffs(args.coeffs)
    doc: dict = {"command": "lfunction", "prime": p}
    if has_g_shape(f.with_prime(p)):
        g = _concrete(f, coeffs, p)
        try:
            inst = PaperInstance(p, tuple(int(c) % p for c in g_coefficients(g)))
        except ValueError as exc:
            raise InputError(str(exc)) from None
        run = instance_run(inst, args.kmax or 9, fast=args.fast)
        doc["coeffs"] = list(inst.a)
        doc["kmax"] = run.kmax
        doc["path"] = "kloosterman" if args.fast else "enumeration"
        doc["S_star"] = run.s_star
        doc["S"] = run.s
        doc["fast_equals_bruteforce"] = run.brute_agreement
        doc["identity_holds"] = run.identity_agreement
        doc["bound"] = [
            {"k": c.k, "bound": c.bound, "max_modulus": c.worst_modulus, "ok": c.ok} for c in run.bound.checks
        ]
        ok = all(run.brute_agreement.values()) and all(run.identity_agreement.values()) and run.bound.ok
        if not run.complete:
            doc["status"] = f"skipped-over-budget: L-functions need k <= 9, computed k <= {run.kmax}"
            return doc, EXIT_OK if ok else EXIT_FAIL
        doc["Lstar"] = run.Lstar
        doc["Lstar_trivial_factors"] = _factors_text(run.Lstar_trivial, p)
        doc["Lstar_slopes"] = list(run.Lstar_newton.slopes)
        doc["Lstar_weights"] = _weights_doc(run.Lstar_weights)
        doc["L"] = run.L_subst
        doc["L_two_ways_agree"] = run.L_subst == run.L_direct
        doc["L_trivial_factors"] = _factors_text(run.L_trivial, p)
        doc["L_slopes"] = list(run.L_newton.slopes)
        doc["L_weights"] = _weights_doc(run.L_weights)
        doc["conjugation_fixed"] = run.conjugation_fixed
        ok = ok and run.L_subst == run.L_direct and bool(run.conjugation_fixed)
        doc["status"] = "ok" if ok else "inconsistent"
        return doc, EXIT_OK if ok else EXIT_FAIL

    g = _concrete(f, coeffs, p)
    try:
        R = reconstruct(g, p, fast=args.fast)
    except BudgetExceeded as exc:
        doc["status"] = f"skipped-over-budget: {exc}"
        return doc, EXIT_OK
    except LInconsistencyError as exc:
        doc["status"] = f"inconsistent: {exc}"
        return doc, EXIT_FAIL
    n = g.n
    doc["S_star"] = R.sums
    doc["polynomial"] = "L*" if n % 2 else "1/L*"
    doc["L"] = R.L
    doc["slopes"] = list(R.newton.slopes)
    doc["hodge_vertices"] = [list(v) for v in R.hodge_vertices]
    doc["newton_vertices"] = [list(v) for v in R.newton.vertices]
    doc["newton_above_hodge"] = R.comparison.lies_above
    doc["newton_equals_hodge"] = R.comparison.coincide
    doc["overdetermination_check"] = "passed" if R.overdetermined else "not affordable"
    doc["weights"] = _weights_doc(R.weights)
    doc["status"] = "ok" if R.comparison.lies_above else "inconsistent"
    return doc, EXIT_OK if R.comparison.lies_above else EXIT_FAIL


def cmd_verify_paper(args, f: LaurentPolySpec) -> tuple[dict, int]:
    p = args.prime or 3
    coeffs = parse_coeffs(args.coeffs) or [1] * 6
    if len(coeffs) != 6:
        raise InputError("--coeffs needs exactly six values a1..a6")
    try:
        PaperInstance(p, tuple(c % p for c in coeffs))
        expected = load_expected(args.expected)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    except FileNotFoundError:
        raise InputError(f"expected-values file not found: {args.expected}") from None
    rep = verify_paper(p, tuple(c % p for c in coeffs), expected, kmax=args.kmax or 9)
    doc = {
        "command": "verify-paper",
        "prime": p,
        "coeffs": list(rep.coeffs),
        "checks": [
            {
                "criterion": c.criterion,
                "check": c.name,
                "status": c.status.upper(),
                "expected": c.expected if c.expected is not None else "",
                "observed": c.observed if c.observed is not None else "",
            }
            for c in rep.checks
        ],
        "result": "PASS" if rep.ok else "FAIL",
    }
    return doc, EXIT_OK if rep.ok else EXIT_FAIL


COMMANDS = {
    "polytope": cmd_polytope,
    "hodge": cmd_hodge,
    "ordinary": cmd_ordinary,
    "conjecture": cmd_conjecture,
    "lfunction": cmd_lfunction,
    "verify-paper": cmd_verify_paper,
}


def _add_common(parser: argparse.ArgumentParser, sub: bool) -> None:
    # subcommand copies default to SUPPRESS so flags may appear on either side
    dflt = (lambda v: argparse.SUPPRESS) if sub else (lambda v: v)
    parser.add_argument("--json", action="store_true", default=dflt(False), help="emit a machine record")
    parser.add_argument("--input", metavar="FILE", default=dflt(None), help="polynomial document (default: g)")
    parser.add_argument("--prime", metavar="P", type=int, default=dflt(None))
    parser.add_argument("--kmax", metavar="K", type=int, default=dflt(None))
    parser.add_argument("--fast", action="store_true", default=dflt(False), help="use the Kloosterman split for g")
    parser.add_argument("--coeffs", metavar="LIST", default=dflt(None), help="comma-separated a1,...,a6")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="toric-sums", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    _add_common(parser, sub=False)
    subs = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = subs.add_parser(name)
        _add_common(sp, sub=True)
        if name == "conjecture":
            sp.add_argument("--k", type=int, default=None)
        if name in ("conjecture", "verify-paper"):
            sp.add_argument("--expected", metavar="FILE", default=None, help="expected-values record")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    for attr in ("k", "expected"):
        if not hasattr(args, attr):
            setattr(args, attr, None)
    try:
        if args.prime is not None and not isprime(args.prime):
            raise InputError(f"--prime must be prime, got {args.prime}")
        if args.kmax is not None and args.kmax < 0:
            raise InputError("--kmax must be non-negative")
        f = read_spec(args.input)
        doc, code = COMMANDS[args.command](args, f)
    except (InputError, DegeneratePolytopeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(dumps(doc) if args.json else render(doc))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
