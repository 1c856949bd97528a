"""Fiber products of b-maps.

Given two b-maps with a common target, the combinatorial fiber product is
the fiber product of their basic monoidal complexes.  When every fiber
monoid is smooth the result is the universal fiber product; otherwise a
smooth refinement (by default the natural one) resolves it into a corner
complex with projection b-maps to both factors.  Each face pair also
carries a binomial-system model of the local fiber product.
"""

import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from . import exactla as la
from .binomial import BinomialSystem, normal_form
from .complexes import (ComplexMorphism, ComplexRefinement, MonoidalComplex,
                        fiber_product_complex, natural_smooth_refinement,
                        pullback_refinement)
from .errors import NotCompatible, NotTransverse
from .manifolds import (BMap, CornerComplex, _smooth_coords, _int_vec,
                        generalized_blowup)
from .monoids import MonoidHom, ToricMonoid
from .monoids import fiber_product as monoid_fiber_product


@dataclass
class FiberProblem:
    """Two b-maps with a common target."""
    f1: BMap
    f2: BMap

    def __post_init__(self):
        assert self.f1.target.faces == self.f2.target.faces, \
            "the two maps must share a target"

    def relevant_pairs(self) -> List[Tuple[str, str, str]]:
        """Face pairs (F1, F2) whose images are the same face G; only
        these contribute points to the fiber product."""
        out = []
        for a in self.f1.source.faces:
            for b in self.f2.source.faces:
                if self.f1.face_map[a] == self.f2.face_map[b]:
                    out.append((a, b, self.f1.face_map[a]))
        return out


@dataclass
class PairReport:
    """The local fiber product over one face pair."""
    face1: str
    face2: str
    image: str
    monoid: ToricMonoid
    smooth: bool
    transversal: bool
    system: Optional[BinomialSystem]


@dataclass
class FiberReport:
    pairs: List[PairReport]
    transversal: bool
    smooth: bool
    note: str = ("b-normal transversality is a necessary condition only: "
                 "tangential directions are outside this model")


def _pair_data(p: FiberProblem, a: str, b: str):
    n1 = p.f1.exponent_matrix(a)
    n2 = p.f2.exponent_matrix(b)
    d1, d2 = len(n1), len(n2)
    g = p.f1.face_map[a]
    dg = p.f1.target.codim(g)
    h1 = MonoidHom(ToricMonoid.free(d1), ToricMonoid.free(dg), n1)
    h2 = MonoidHom(ToricMonoid.free(d2), ToricMonoid.free(dg), n2)
    return n1, n2, d1, d2, dg, h1, h2


def _pair_system(n1, n2, d1, d2, dg) -> Optional[BinomialSystem]:
    """The binomial model of the local fiber product: one equation per
    target coordinate, comparing the two pulled back defining functions."""
    if dg == 0:
        return None
    pairs = []
    for i in range(dg):
        alpha = tuple(n1[r][i] for r in range(d1)) + la.zeros(d2)
        beta = la.zeros(d1) + tuple(n2[r][i] for r in range(d2))
        pairs.append((alpha, beta))
    gs = [tuple(x - y for x, y in zip(al, be)) for al, be in pairs]
    dependent = dg - la.rank(la.mat(gs))
    return normal_form(pairs, tangential_dim=dependent)


def b_normal_transversality(p: FiberProblem) -> FiberReport:
    """Rank test per relevant face pair: the combined exponent matrices
    must surject onto the normal directions of the common image face."""
    reports = []
    for a, b, g in p.relevant_pairs():
        n1, n2, d1, d2, dg, h1, h2 = _pair_data(p, a, b)
        stacked = la.mat(list(n1) + list(n2))
        tv = dg == 0 or la.rank(stacked) == dg
        m = monoid_fiber_product(h1, h2)
        reports.append(PairReport(a, b, g, m, m.is_smooth(), tv,
                                  _pair_system(n1, n2, d1, d2, dg)))
    return FiberReport(reports,
                       transversal=all(r.transversal for r in reports),
                       smooth=all(r.smooth for r in reports))


def fiber_complex(p: FiberProblem) -> Tuple[MonoidalComplex,
                                            ComplexMorphism,
                                            ComplexMorphism]:
    """The fiber product of the basic complexes with its projections."""
    return fiber_product_complex(p.f1.induced_morphism(),
                                 p.f2.induced_morphism())


def theorem_b_check(p: FiberProblem):
    """Decide whether the fiber product is already a union of smooth
    corner complexes.

    Returns (smooth flag, fiber complex, projections, offending element
    ids).  When the flag is true the fiber complex is the universal fiber
    product and the offenders list is empty.
    """
    fc, p1, p2 = fiber_complex(p)
    offenders = sorted(e for e in fc.elements
                       if not fc.monoids[e].is_smooth())
    return (not offenders), fc, p1, p2, offenders


@dataclass
class ResolvedFiberProduct:
    """A resolved fiber product: the smooth complex, its corner complex,
    b-maps to both factors and the per-pair binomial models."""
    problem: FiberProblem
    fiber: MonoidalComplex
    refinement: ComplexRefinement
    corner: CornerComplex
    h1: BMap
    h2: BMap
    report: FiberReport


def _corner_from_smooth(rc: MonoidalComplex) -> CornerComplex:
    rays = [e for e in rc.elements if rc.monoids[e].dim == 1]
    incidence = {e: frozenset(w for w in rays if rc.leq(w, e))
                 for e in rc.elements}
    order = [(a, b) for (a, b) in rc.order if a != b]
    return CornerComplex(incidence, order)


def _bmap_from_morphism(src: CornerComplex, rc: MonoidalComplex,
                        target: CornerComplex,
                        morph: ComplexMorphism) -> BMap:
    face_map = {e: morph.node_map[e] for e in rc.elements}
    exps = {}
    for w in src.hypersurfaces():
        ax = target.axes(face_map[w])
        img = morph.hom(w).image_monoid()
        if img.dim:
            (gen,) = img.rays
            for j, h in enumerate(ax):
                if gen[j]:
                    exps[(w, h)] = gen[j]
    return BMap(src, target, face_map, exps)


def resolve_fiber_product(p: FiberProblem,
                          r: Optional[ComplexRefinement] = None
                          ) -> ResolvedFiberProduct:
    """Resolve the fiber product into a corner complex with b-maps to the
    two factors.

    Raises:
        NotTransverse: if the combinatorial transversality test fails.
    """
    report = b_normal_transversality(p)
    if not report.transversal:
        bad = [(q.face1, q.face2) for q in report.pairs
               if not q.transversal]
        raise NotTransverse(f"face pairs fail the rank test: {bad}")
    fc, p1, p2 = fiber_complex(p)
    if r is None:
        r = natural_smooth_refinement(fc)
    assert r.is_smooth(), "the chosen refinement must be smooth"
    rc = r.source
    corner = _corner_from_smooth(rc)
    h1m = r.morphism.compose(p1)
    h2m = r.morphism.compose(p2)
    h1 = _bmap_from_morphism(corner, rc, p.f1.source, h1m)
    h2 = _bmap_from_morphism(corner, rc, p.f2.source, h2m)
    return ResolvedFiberProduct(p, fc, r, corner, h1, h2, report)


def _lift_witness(psi: ComplexMorphism, r: ComplexRefinement):
    """None if every image monoid of psi fits in a member of r, else a
    witness (element, total image vector)."""
    for z in psi.source.elements:
        sigma_id = psi.node_map[z]
        gens = list(psi.homs[z])
        found = False
        for e in r.members_over(sigma_id):
            img = r.morphism.image_in(e, sigma_id)
            if all(img.contains(g) for g in gens):
                found = True
                break
        if not found:
            total = la.zeros(psi.target.monoids[sigma_id].ambient_dim)
            for g in gens:
                total = la.vadd(total, g)
            return (z, total)
    return None


def _lift_morphism(psi: ComplexMorphism,
                   r: ComplexRefinement) -> ComplexMorphism:
    """Factor psi through the refinement r of its target; psi.source must
    be a basic complex (free monoids, generator rows)."""
    rc = r.source
    node = {}
    homs = {}
    for z in psi.source.elements:
        sigma_id = psi.node_map[z]
        gens = list(psi.homs[z])
        best = None
        for e in r.members_over(sigma_id):
            img = r.morphism.image_in(e, sigma_id)
            if all(img.contains(g) for g in gens):
                if best is None or img.dim < best[1].dim:
                    best = (e, img)
        assert best is not None, "psi does not factor through r"
        e, _ = best
        node[z] = e
        incl = la.mat_mul(r.morphism.homs[e],
                          r.target.face_maps[(r.morphism.node_map[e],
                                              sigma_id)])
        src = rc.monoids[e]
        big = la.mat_mul(src.lattice, incl) if src.dim else ()
        rows = []
        for g in gens:
            if la.is_zero(g):
                rows.append(la.zeros(src.ambient_dim))
                continue
            c = la.solve_row(g, big)
            assert c is not None
            rows.append(la.apply_row(_int_vec(c), src.lattice))
        homs[z] = la.mat(rows) if rows else tuple()
    return ComplexMorphism(psi.source, rc, node, homs)


def _bmap_to_resolved(z: CornerComplex, lifted: ComplexMorphism,
                      corner: CornerComplex) -> BMap:
    rc = lifted.target
    face_map = dict(lifted.node_map)
    exps = {}
    for g in z.hypersurfaces():
        e = face_map[g]
        m = rc.monoids[e]
        (img_vec,) = lifted.homs[g]
        coeffs = _smooth_coords(m, img_vec)
        for w in corner.incidence[e]:
            ray_img = MonoidHom(rc.monoids[w], m,
                                rc.face_maps[(w, e)]).image_monoid()
            idx = m.rays.index(ray_img.rays[0])
            if coeffs[idx]:
                exps[(g, w)] = coeffs[idx]
    return BMap(z, corner, face_map, exps)


def factor_through(p: FiberProblem, g1: BMap, g2: BMap,
                   resolved: ResolvedFiberProduct):
    """Factor a commuting pair of maps through a resolved fiber product.

    g1: Z -> X1 and g2: Z -> X2 must satisfy g1 . f1 = g2 . f2.  If the
    induced morphism of Z factors through the resolving refinement, the
    unique map g: Z -> resolved corner complex is returned with no domain
    blow-up; otherwise the domain Z is blown up first and g is a map from
    the blown-up domain.

    Returns (domain blow-up or None, g: BMap).

    Raises:
        NotCompatible: if the square does not commute.
    """
    assert g1.source.faces == g2.source.faces, "common domain required"
    c1 = g1.compose(p.f1)
    c2 = g2.compose(p.f2)
    if c1 != c2:
        raise NotCompatible("g1 . f1 and g2 . f2 disagree")
    z = g1.source
    pz = z.basic_complex()
    fc = resolved.fiber
    node = {}
    homs = {}
    for face in pz.elements:
        a = g1.face_map[face]
        b = g2.face_map[face]
        eid = f"{a}*{b}"
        assert eid in fc.elements, \
            f"image pair {eid} is missing from the fiber complex"
        node[face] = eid
        m1 = g1.exponent_matrix(face)
        m2 = g2.exponent_matrix(face)
        homs[face] = la.mat(tuple(r1) + tuple(r2)
                            for r1, r2 in zip(m1, m2))
    psi = ComplexMorphism(pz, fc, node, homs)
    r = resolved.refinement
    if _lift_witness(psi, r) is None:
        lifted = _lift_morphism(psi, r)
        return None, _bmap_to_resolved(z, lifted, resolved.corner)
    pulled = pullback_refinement(r, psi)
    s = pulled if pulled.source.is_smooth() else \
        pulled.compose(natural_smooth_refinement(pulled.source))
    dom = generalized_blowup(z, s)
    beta = dom.blowdown
    pz1 = dom.total.basic_complex()
    node1 = {}
    homs1 = {}
    for face in pz1.elements:
        base = beta.face_map[face]
        node1[face] = node[base]
        homs1[face] = la.mat_mul(beta.exponent_matrix(face), homs[base])
    psi1 = ComplexMorphism(pz1, fc, node1, homs1)
    assert _lift_witness(psi1, r) is None, \
        "pulled back refinement must make the map liftable"
    lifted = _lift_morphism(psi1, r)
    return dom, _bmap_to_resolved(dom.total, lifted, resolved.corner)
