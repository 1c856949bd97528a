"""Command line front end.

Reads versioned JSON documents, dispatches to the library and writes a
result document plus a short summary.  Exit codes: 0 success, 1 a
validation failure in well-formed input, 2 malformed input.
"""

import argparse
import json
import sys
from typing import Any, Dict, List, Optional

from . import exactla as la
from . import serialization as ser
from .binomial import (boundary_faces, normal_form, resolve,
                       universal_resolution, variety_complex)
from .chartcheck import SamplePlan, verify_lift, verify_transitions
from .complexes import extend_refinement, natural_smooth_refinement
from .errors import BlowupError
from .fiber import (FiberProblem, b_normal_transversality, factor_through,
                    resolve_fiber_product, theorem_b_check)
from .manifolds import (Blowup, blowup_domain, generalized_blowup,
                        iterated_blowup, lift_bmap, local_atlas,
                        ordinary_blowup)
from .monoids import ToricMonoid
from .refinements import (MonoidRefinement, planar_refine, smoothing,
                          star_subdivide)
from .serialization import MalformedDocument


def _read_doc(path: str) -> Dict[str, Any]:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as e:
        raise MalformedDocument(f"cannot read {path}: {e}") from e
    return ser.loads(text)


def _vector(text: str) -> la.Vec:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as e:
        raise MalformedDocument(f"bad vector {text!r}") from e


def _matrix(text: str) -> la.Mat:
    return la.mat(_vector(row) for row in text.split(";"))


def _members_doc(r: MonoidRefinement) -> Dict[str, Any]:
    return {
        "kind": "monoid_refinement",
        "version": ser.VERSION,
        "base": ser.monoid_to_doc(r.base),
        "members": [{"generators": ser._enc_mat(m.hilbert_basis()),
                     "rays": ser._enc_mat(m.rays),
                     "dim": m.dim, "smooth": m.is_smooth()}
                    for m in r.members],
    }


def _summary_lines(doc: Dict[str, Any]) -> List[str]:
    out = [f"kind: {doc.get('kind')}"]
    for key in ("status", "smooth", "transversal", "passed", "universal",
                "minimal", "hypersurfaces", "elements", "members",
                "max_rel_error", "offenders", "exit_note"):
        if key in doc:
            out.append(f"{key}: {doc[key]}")
    return out


def _emit(doc: Dict[str, Any], args) -> None:
    if args.format == "text":
        text = "\n".join(_summary_lines(doc)) + "\n"
    else:
        text = ser.dumps(doc) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_monoid(path: str) -> ToricMonoid:
    return ser.monoid_from_doc(_read_doc(path))


# ---------------------------------------------------------------------------
# Command handlers.
# ---------------------------------------------------------------------------


def cmd_validate(args) -> Dict[str, Any]:
    obj = ser.parse_doc(_read_doc(args.input))
    if hasattr(obj, "validate"):
        obj.validate()
    return {"kind": "validation", "status": "ok",
            "input_kind": _read_doc(args.input)["kind"]}


def cmd_hilbert(args) -> Dict[str, Any]:
    m = _load_monoid(args.input)
    hb = m.hilbert_basis()
    return {"kind": "hilbert_basis", "elements": len(hb),
            "generators": ser._enc_mat(hb),
            "smooth": m.is_smooth(), "simplicial": m.is_simplicial()}


def cmd_faces(args) -> Dict[str, Any]:
    m = _load_monoid(args.input)
    faces = [{"dim": f.dim, "rays": ser._enc_mat(f.rays)}
             for f in m.face_monoids()]
    return {"kind": "faces", "elements": len(faces), "faces": faces}


def cmd_subdivide(args) -> Dict[str, Any]:
    m = _load_monoid(args.input)
    if args.star:
        r = star_subdivide(m, _vector(args.star))
    elif args.planar:
        r = planar_refine(m, _matrix(args.planar))
    elif args.smooth:
        r = smoothing(m)
    else:
        raise MalformedDocument("one of --star/--planar/--smooth required")
    failures = r.validate()
    if failures:
        raise BlowupError(f"subdivision invalid: {failures[0].detail}")
    doc = _members_doc(r)
    doc["members"] = len(r.members)
    doc["member_list"] = _members_doc(r)["members"]
    return doc


def cmd_ns(args) -> Dict[str, Any]:
    q = ser.complex_from_doc(_read_doc(args.input))
    r = natural_smooth_refinement(q)
    r.validate()
    doc = ser.refinement_to_doc(r)
    doc["smooth"] = r.is_smooth()
    doc["elements"] = len(r.source.elements)
    return doc


def cmd_extend(args) -> Dict[str, Any]:
    raw = _read_doc(args.input)
    if raw.get("kind") != "extension_problem":
        raise MalformedDocument("expected an extension_problem document")
    q = ser.complex_from_doc(raw["complex"])
    local = {}
    for entry in raw["given"]:
        eid = entry["id"]
        members = [ser.monoid_from_doc(d) for d in entry["members"]]
        local[eid] = MonoidRefinement(q.monoids[eid], members)
    r = extend_refinement(q, local)
    r.validate()
    doc = ser.refinement_to_doc(r)
    doc["elements"] = len(r.source.elements)
    return doc


def _blowup_result(b: Blowup) -> Dict[str, Any]:
    return {
        "kind": "blowup",
        "version": ser.VERSION,
        "manifold": ser.manifold_to_doc(b.total),
        "blowdown": ser.bmap_to_doc(b.blowdown),
        "refinement": ser.refinement_to_doc(b.refinement),
        "hypersurfaces": len(b.total.hypersurfaces()),
    }


def cmd_blowup(args) -> Dict[str, Any]:
    x = ser.manifold_from_doc(_read_doc(args.input))
    if args.ordinary:
        weights = _vector(args.weights) if args.weights else None
        b, charts = ordinary_blowup(x, args.ordinary, weights)
        doc = _blowup_result(b)
        doc["charts"] = [ser._enc_mat(c) for c in charts]
        return doc
    if args.iterated:
        b = iterated_blowup(x, args.iterated.split(","))
        return _blowup_result(b)
    if args.refinement:
        r = ser.refinement_from_doc(_read_doc(args.refinement))
        return _blowup_result(generalized_blowup(x, r))
    raise MalformedDocument(
        "one of --ordinary/--iterated/--refinement required")


def cmd_atlas(args) -> Dict[str, Any]:
    r = ser.refinement_from_doc(_read_doc(args.input))
    atlas = local_atlas(r)
    return {
        "kind": "atlas",
        "version": ser.VERSION,
        "n": atlas.n,
        "refinement": ser.refinement_to_doc(r),
        "charts": [{"element": e, "nu": ser._enc_mat(c.nu)}
                   for e, c in sorted(atlas.charts.items())],
        "transitions": [{"pair": [a, b], "matrix": ser._enc_mat(m)}
                        for (a, b), m in sorted(atlas.transitions.items())],
        "separators": [{"pair": [a, b], "functional": list(u)}
                       for (a, b), u in sorted(atlas.separators.items())],
    }


def _load_blowup(args) -> Blowup:
    r = ser.refinement_from_doc(_read_doc(args.refinement))
    x = ser.manifold_from_doc(_read_doc(args.manifold))
    return generalized_blowup(x, r)


def cmd_lift(args) -> Dict[str, Any]:
    f = ser.bmap_from_doc(_read_doc(args.input))
    b = _load_blowup(args)
    lift = lift_bmap(f, b)
    lift.bmap.validate()
    return {"kind": "lift", "version": ser.VERSION,
            "bmap": ser.bmap_to_doc(lift.bmap),
            "factoring": ser.morphism_to_doc(lift.factoring)}


def cmd_blowup_domain(args) -> Dict[str, Any]:
    f = ser.bmap_from_doc(_read_doc(args.input))
    b = _load_blowup(args)
    dom, lift, minimal = blowup_domain(f, b)
    return {"kind": "blowup_domain", "version": ser.VERSION,
            "minimal": minimal,
            "domain": _blowup_result(dom),
            "lift": ser.bmap_to_doc(lift.bmap)}


def _load_system(doc) -> Any:
    if doc.get("kind") == "binomial_system":
        return ser.binomial_from_doc(doc)
    if doc.get("kind") == "binomial_input":
        pairs = [(tuple(ser._dec_int(x) for x in e["alpha"]),
                  tuple(ser._dec_int(x) for x in e["beta"]))
                 for e in doc["equations"]]
        return normal_form(pairs,
                           smooth_count=int(doc.get("smooth_count", 0)),
                           tangential_dim=int(doc.get("tangential_dim", 0)))
    raise MalformedDocument("expected a binomial system document")


def cmd_binomial(args) -> Dict[str, Any]:
    b = _load_system(_read_doc(args.input))
    if args.action == "normal-form":
        return ser.binomial_to_doc(b)
    if args.action == "faces":
        vc = boundary_faces(b)
        return {
            "kind": "variety_faces",
            "version": ser.VERSION,
            "elements": len(vc.faces),
            "faces": [{"coords": list(s),
                       "witness": list(map(int, vf.witness)),
                       "monoid": ser.monoid_to_doc(vf.monoid)}
                      for s, vf in sorted(vc.faces.items())],
        }
    if args.action == "complex":
        pd, inat = variety_complex(b)
        pd.validate()
        inat.validate()
        return {"kind": "variety_complex", "version": ser.VERSION,
                "smooth": pd.is_smooth(),
                "complex": ser.complex_to_doc(pd),
                "inclusion": ser.morphism_to_doc(inat)}
    if args.action == "resolve":
        try:
            res = universal_resolution(b)
        except BlowupError:
            res = resolve(b)
        res.refinement.validate()
        return {"kind": "binomial_resolution", "version": ser.VERSION,
                "universal": res.universal,
                "refinement": ser.refinement_to_doc(res.refinement),
                "lifted": list(res.lifted),
                "indefinite_charts": 0}
    raise MalformedDocument(f"unknown binomial action {args.action!r}")


def cmd_fiber(args) -> Dict[str, Any]:
    raw = _read_doc(args.input)
    if raw.get("kind") == "factor_problem":
        f1 = ser.bmap_from_doc(raw["f1"])
        f2 = ser.bmap_from_doc(raw["f2"])
        g1 = ser.bmap_from_doc(raw["g1"])
        g2 = ser.bmap_from_doc(raw["g2"])
        p = FiberProblem(f1, f2)
    else:
        f1, f2 = ser.fiber_problem_from_doc(raw)
        p = FiberProblem(f1, f2)
    if args.action == "analyze":
        rep = b_normal_transversality(p)
        return {
            "kind": "fiber_report", "version": ser.VERSION,
            "transversal": rep.transversal, "smooth": rep.smooth,
            "exit_note": rep.note,
            "pairs": [{"faces": [q.face1, q.face2], "image": q.image,
                       "rays": ser._enc_mat(q.monoid.rays),
                       "smooth": q.smooth, "transversal": q.transversal,
                       "system": (ser.binomial_to_doc(q.system)
                                  if q.system else None)}
                      for q in rep.pairs],
        }
    if args.action == "check-smooth":
        smooth, fc, _, _, off = theorem_b_check(p)
        return {"kind": "fiber_smoothness", "version": ser.VERSION,
                "smooth": smooth, "offenders": off,
                "complex": ser.complex_to_doc(fc)}
    if args.action == "resolve":
        res = resolve_fiber_product(p)
        res.h1.validate()
        res.h2.validate()
        return {"kind": "fiber_resolution", "version": ser.VERSION,
                "manifold": ser.manifold_to_doc(res.corner),
                "h1": ser.bmap_to_doc(res.h1),
                "h2": ser.bmap_to_doc(res.h2),
                "refinement": ser.refinement_to_doc(res.refinement)}
    if args.action == "factor":
        if raw.get("kind") != "factor_problem":
            raise MalformedDocument("factor requires a factor_problem "
                                    "document with g1 and g2")
        res = resolve_fiber_product(p)
        dom, g = factor_through(p, g1, g2, res)
        g.validate()
        return {"kind": "fiber_factorization", "version": ser.VERSION,
                "domain_blowup": None if dom is None
                else _blowup_result(dom),
                "g": ser.bmap_to_doc(g)}
    raise MalformedDocument(f"unknown fiber action {args.action!r}")


def cmd_verify(args) -> Dict[str, Any]:
    raw = _read_doc(args.input)
    plan = SamplePlan(count=args.samples, seed=args.seed,
                      tolerance=args.tolerance)
    if raw.get("kind") == "refinement":
        atlas = local_atlas(ser.refinement_from_doc(raw))
        rep = verify_transitions(atlas, plan)
    elif raw.get("kind") == "lift_check":
        rep = verify_lift(ser._dec_int_mat(raw["delta"]),
                          ser._dec_q_mat(raw["nu"]),
                          ser._dec_int_mat(raw["mu"]),
                          plan,
                          raw.get("coefficients"))
    else:
        raise MalformedDocument(
            "verify expects a refinement or lift_check document")
    doc = {"kind": "verification", "version": ser.VERSION,
           "passed": rep.passed, "max_rel_error": rep.max_rel_error,
           "samples": rep.samples, "failures": rep.failures}
    if not rep.passed:
        raise BlowupError(f"numeric verification failed: {rep.failures}")
    return doc


# ---------------------------------------------------------------------------
# Argument parsing.
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the result document here")
    common.add_argument("--format", choices=["json", "text"],
                        default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--tolerance", type=float, default=1e-9)
    common.add_argument("--samples", type=int, default=100)

    p = argparse.ArgumentParser(
        prog="blowup",
        description="Exact combinatorics of generalized boundary blow-up")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("input")
        return s

    add("validate")
    add("hilbert")
    add("faces")

    s = add("subdivide")
    s.add_argument("--star", help="center vector, comma separated")
    s.add_argument("--planar", help="subspace rows, ';' separated")
    s.add_argument("--smooth", action="store_true")

    add("ns")
    add("extend")

    s = add("blowup")
    s.add_argument("--ordinary", help="face id to blow up")
    s.add_argument("--weights", help="weight vector for --ordinary")
    s.add_argument("--iterated", help="comma separated face ids")
    s.add_argument("--refinement", help="refinement document")

    add("atlas")

    for name in ("lift", "blowup-domain"):
        s = add(name)
        s.add_argument("--manifold", required=True)
        s.add_argument("--refinement", required=True)

    for name, actions in (
            ("binomial", ["normal-form", "faces", "complex", "resolve"]),
            ("fiber", ["analyze", "check-smooth", "resolve", "factor"])):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("action", choices=actions)
        s.add_argument("input")

    add("verify")
    return p


_HANDLERS = {
    "validate": cmd_validate,
    "hilbert": cmd_hilbert,
    "faces": cmd_faces,
    "subdivide": cmd_subdivide,
    "ns": cmd_ns,
    "extend": cmd_extend,
    "blowup": cmd_blowup,
    "atlas": cmd_atlas,
    "lift": cmd_lift,
    "blowup-domain": cmd_blowup_domain,
    "binomial": cmd_binomial,
    "fiber": cmd_fiber,
    "verify": cmd_verify,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        doc = _HANDLERS[args.command](args)
    except (MalformedDocument, KeyError, ValueError, TypeError) as e:
        print(f"error: malformed input: {e}", file=sys.stderr)
        return 2
    except (BlowupError, AssertionError) as e:
        print(f"error: validation failed: {e}", file=sys.stderr)
        return 1
    _emit(doc, args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
