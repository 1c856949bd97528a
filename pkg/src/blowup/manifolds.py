"""Boundary combinatorics of manifolds with corners and b-maps.

A corner complex records the boundary face poset of a manifold with
corners: each face has an id, an incidence set of boundary hypersurfaces,
and the order G <= F means G contains F (so codim is monotone).  A b-map
is a face map together with a matrix of nonnegative boundary exponents.
The basic monoidal complex of a corner complex assigns the free monoid on
the incident hypersurfaces to each face; generalized blow-up turns a
smooth refinement of this complex back into a corner complex together
with its blow-down b-map.
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import exactla as la
from .complexes import (ComplexMorphism, ComplexRefinement, MonoidalComplex,
                        identity_refinement, natural_smooth_refinement,
                        pullback_refinement, star_subdivide_complex)
from .errors import (NotAComplex, NotAFace, NotCompatible, NotSmooth)
from .monoids import MonoidHom, ToricMonoid


class CornerComplex:
    """The face poset of a manifold with corners, with hypersurface
    incidence data."""

    def __init__(self, incidence: Dict[str, Sequence[str]],
                 order: Sequence[Tuple[str, str]]):
        self.faces = tuple(sorted(incidence))
        self.incidence = {f: frozenset(incidence[f]) for f in self.faces}
        rel = set((a, a) for a in self.faces)
        rel.update(order)
        changed = True
        while changed:
            changed = False
            for (a, b), (c, d) in itertools.product(list(rel), list(rel)):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
        self.order = frozenset(rel)

    def codim(self, f: str) -> int:
        return len(self.incidence[f])

    def leq(self, a: str, b: str) -> bool:
        return (a, b) in self.order

    def below(self, b: str) -> Tuple[str, ...]:
        return tuple(a for a in self.faces if self.leq(a, b))

    def hypersurfaces(self) -> Tuple[str, ...]:
        return tuple(sorted(f for f in self.faces if self.codim(f) == 1))

    def hypersurface_id(self, h: str) -> str:
        """The face id whose incidence set is {h}."""
        for f in self.faces:
            if self.incidence[f] == frozenset([h]):
                return f
        raise NotAFace(f"no hypersurface face for {h}")

    def validate(self) -> None:
        for a, b in self.order:
            if a != b and (b, a) in self.order:
                raise NotAComplex(f"face order not antisymmetric: {a}, {b}")
            if not self.incidence[a] <= self.incidence[b]:
                raise NotAComplex(
                    f"{a} <= {b} but incidence is not nested")
        for f in self.faces:
            below = self.below(f)
            for s in _subsets(self.incidence[f]):
                hits = [g for g in below if self.incidence[g] == s]
                if len(hits) != 1:
                    raise NotAComplex(
                        f"face {f} has {len(hits)} subfaces with "
                        f"incidence {sorted(s)}")
        hs = set()
        for f in self.faces:
            hs.update(self.incidence[f])
        for h in hs:
            self.hypersurface_id(h)

    def axes(self, f: str) -> Tuple[str, ...]:
        """The coordinate order of the incident hypersurfaces at f."""
        return tuple(sorted(self.incidence[f]))

    def basic_complex(self) -> MonoidalComplex:
        """The basic monoidal complex: the free monoid on the incident
        hypersurfaces over each face, with coordinate inclusion face
        maps."""
        monoids = {f: ToricMonoid.free(self.codim(f)) for f in self.faces}
        order = [(a, b) for (a, b) in self.order if a != b]
        maps = {}
        for a, b in order:
            ax_a, ax_b = self.axes(a), self.axes(b)
            maps[(a, b)] = la.mat(
                [tuple(1 if h == k else 0 for k in ax_b) for h in ax_a])
        return MonoidalComplex(monoids, order, maps)


def _subsets(s: frozenset):
    items = sorted(s)
    for k in range(len(items) + 1):
        for c in itertools.combinations(items, k):
            yield frozenset(c)


def corner_model(n: int, prefix: str = "H") -> CornerComplex:
    """The corner complex of the local model R^n_+: one face for every
    subset of the n boundary hypersurfaces."""
    hypers = [f"{prefix}{i}" for i in range(1, n + 1)]
    incidence = {}
    order = []
    for k in range(n + 1):
        for c in itertools.combinations(hypers, k):
            incidence[_face_id(c)] = frozenset(c)
    for f, inc in incidence.items():
        for g, inc2 in incidence.items():
            if f != g and inc <= inc2:
                order.append((f, g))
    return CornerComplex(incidence, order)


def _face_id(hypers: Sequence[str]) -> str:
    return "X" if not hypers else "&".join(sorted(hypers))


@dataclass
class BMap:
    """The combinatorial shadow of a b-map: an order preserving face map
    and nonnegative boundary exponents alpha(G, H) for source hypersurface
    G and target hypersurface H."""
    source: CornerComplex
    target: CornerComplex
    face_map: Dict[str, str]
    exponents: Dict[Tuple[str, str], int] = field(default_factory=dict)

    def alpha(self, g: str, h: str) -> int:
        return self.exponents.get((g, h), 0)

    def validate(self) -> None:
        for a, b in self.source.order:
            if not self.target.leq(self.face_map[a], self.face_map[b]):
                raise NotAComplex(
                    f"face map not order preserving on {a} <= {b}")
        for (g, h), e in self.exponents.items():
            if e < 0:
                raise NotAComplex(f"negative exponent alpha({g}, {h})")
        for f in self.source.faces:
            expected = frozenset(
                h for h in _target_hypers(self.target)
                if any(self.alpha(g, h) > 0
                       for g in self.source.incidence[f]))
            actual = self.target.incidence[self.face_map[f]]
            if expected != actual:
                raise NotAComplex(
                    f"face {f}: exponents vanish on {sorted(expected)} but "
                    f"the image face is cut by {sorted(actual)}")

    def exponent_matrix(self, f: str) -> la.Mat:
        """The matrix of the induced monoid map at face f, rows indexed by
        source axes, columns by target axes of the image face."""
        src_ax = self.source.axes(f)
        tgt_ax = self.target.axes(self.face_map[f])
        return la.mat([tuple(self.alpha(g, h) for h in tgt_ax)
                       for g in src_ax])

    def induced_morphism(self) -> ComplexMorphism:
        """The morphism of basic complexes sending e_G to the sum of
        alpha(G, H) e_H."""
        px = self.source.basic_complex()
        py = self.target.basic_complex()
        homs = {f: self.exponent_matrix(f) for f in self.source.faces}
        return ComplexMorphism(px, py, dict(self.face_map), homs)

    def compose(self, then: "BMap") -> "BMap":
        """self followed by then."""
        assert then.source is self.target or \
            then.source.faces == self.target.faces
        face_map = {f: then.face_map[self.face_map[f]]
                    for f in self.source.faces}
        exps = {}
        mids = _target_hypers(self.target)
        for g in self.source.hypersurfaces():
            for k in then.target.hypersurfaces():
                val = sum(self.alpha(gh, h) * then.alpha(h, k)
                          for gh in [g] for h in mids)
                if val:
                    exps[(g, k)] = val
        return BMap(self.source, then.target, face_map, exps)

    def __eq__(self, other):
        if not isinstance(other, BMap):
            return NotImplemented
        if self.face_map != other.face_map:
            return False
        keys = set(self.exponents) | set(other.exponents)
        return all(self.alpha(*k) == other.alpha(*k) for k in keys)


def _target_hypers(x: CornerComplex) -> Tuple[str, ...]:
    return x.hypersurfaces()


def identity_bmap(x: CornerComplex) -> BMap:
    return BMap(x, x, {f: f for f in x.faces},
                {(h, h): 1 for h in x.hypersurfaces()})


# ---------------------------------------------------------------------------
# Generalized blow-up.
# ---------------------------------------------------------------------------


@dataclass
class Blowup:
    """A generalized blow-up: the new corner complex, the blow-down b-map
    and the refinement that produced it."""
    total: CornerComplex
    blowdown: BMap
    refinement: ComplexRefinement

    def element_of_face(self, face_id: str) -> str:
        return face_id

    def face_monoid(self, face_id: str) -> ToricMonoid:
        return self.refinement.source.monoids[face_id]


def generalized_blowup(x: CornerComplex, r: ComplexRefinement) -> Blowup:
    """Blow up x along a smooth refinement r of its basic complex.

    Faces of the result are the elements of r; the face of an element tau
    has codimension dim(tau), and the hypersurfaces are the rays of r.
    The basic complex of the result is canonically isomorphic to r's
    source complex.

    Raises:
        NotSmooth: if r is not smooth.
    """
    rs = r.source
    if not rs.is_smooth():
        raise NotSmooth("blow-up requires a smooth refinement")
    rays = [e for e in rs.elements if rs.monoids[e].dim == 1]
    incidence = {e: frozenset(w for w in rays if rs.leq(w, e))
                 for e in rs.elements}
    order = [(a, b) for (a, b) in rs.order if a != b]
    total = CornerComplex(incidence, order)
    face_map = {e: r.morphism.node_map[e] for e in rs.elements}
    exps = {}
    for w in rays:
        tgt_face = face_map[w]
        ax = x.axes(tgt_face)
        img = r.morphism.hom(w).image_monoid()
        (gen,) = img.rays
        for j, h in enumerate(ax):
            if gen[j]:
                exps[(w, h)] = gen[j]
    blowdown = BMap(total, x, face_map, exps)
    return Blowup(total, blowdown, r)


def check_basic_complex_iso(b: Blowup) -> bool:
    """Verify that the basic complex of the blown-up corner complex is
    isomorphic to the refining complex: each element's monoid is freely
    generated by the rays below it."""
    rs = b.refinement.source
    for e in rs.elements:
        m = rs.monoids[e]
        below_rays = [w for w in rs.elements
                      if rs.monoids[w].dim == 1 and rs.leq(w, e)]
        if len(below_rays) != m.dim or not m.is_smooth():
            return False
        gens = set()
        for w in below_rays:
            img = MonoidHom(rs.monoids[w], m,
                            rs.face_maps[(w, e)]).image_monoid()
            gens.add(img.rays[0])
        if gens != set(m.rays):
            return False
    return True


# ---------------------------------------------------------------------------
# Chart atlases for local models.
# ---------------------------------------------------------------------------


@dataclass
class Chart:
    element: str
    nu: la.Mat  # rows are the free generators of the chart monoid


@dataclass
class ChartAtlas:
    """Charts and transition data for a smooth refinement of Z_+^n.

    Each maximal element gives a chart t -> t^nu with nu the matrix whose
    rows are the generators.  For each pair of adjacent charts the
    transition is t -> t^(nu1 nu2^{-1}), and a separating functional u
    vanishes on the common face, is positive on the remaining generators
    of the first chart and negative on those of the second.
    """
    n: int
    charts: Dict[str, Chart]
    transitions: Dict[Tuple[str, str], Tuple[Tuple[Fraction, ...], ...]]
    separators: Dict[Tuple[str, str], la.Vec]


def local_atlas(r: ComplexRefinement) -> ChartAtlas:
    """Atlas of a smooth refinement of the face complex of Z_+^n (the
    local model of a depth-n corner)."""
    q = r.target
    top = max(q.elements, key=lambda a: q.monoids[a].dim)
    n = q.monoids[top].dim
    local = r.localize(top)
    charts = {}
    members = {}
    for e in r.members_over(top):
        img = r.morphism.image_in(e, top)
        if img.dim == n:
            charts[e] = Chart(e, la.mat(img.rays))
            members[e] = img
    transitions = {}
    separators = {}
    for e1, e2 in itertools.permutations(sorted(charts), 2):
        m1, m2 = members[e1], members[e2]
        from .refinements import intersect_members
        common = intersect_members(m1, m2)
        if common.dim != n - 1:
            continue
        nu1, nu2 = charts[e1].nu, charts[e2].nu
        transitions[(e1, e2)] = la.mat_mul(nu1, la.inverse_q(nu2))
        shared = set(common.rays)
        strict = [g for g in m1.rays if g not in shared]
        strict += [tuple(-x for x in g) for g in m2.rays
                   if g not in shared]
        zero = list(shared)
        u = la.lp_feasible(n, strict=strict, zero=zero)
        assert u is not None, "separating functional must exist"
        separators[(e1, e2)] = la.clear_denominators(u) if any(
            Fraction(x) != 0 for x in u) else la.zeros(n)
    return ChartAtlas(n, charts, transitions, separators)


# ---------------------------------------------------------------------------
# Compatibility and lifting of b-maps.
# ---------------------------------------------------------------------------


@dataclass
class Lift:
    """A lift of f: X -> Y through the blow-down of [Y; R]: the lifted
    b-map and the factoring morphism P_X -> R."""
    bmap: BMap
    factoring: ComplexMorphism


def compatibility_witness(f: BMap, r: ComplexRefinement):
    """None if f is compatible with the refinement r of the target's
    basic complex, otherwise a witness (face id, interior image vector
    whose smallest containing member does not contain the whole image)."""
    for face in f.source.faces:
        sigma_id = f.face_map[face]
        local = r.localize(sigma_id)
        mat = f.exponent_matrix(face)
        gens = [la.apply_row(e, mat) for e in la.identity(len(mat))]
        ok = any(all(m.contains(g) for g in gens) for m in local.members)
        if not ok:
            total = la.zeros(len(mat[0]) if mat else 0)
            for g in gens:
                total = la.vadd(total, g)
            return (face, total)
    return None


def is_compatible(f: BMap, r: ComplexRefinement) -> bool:
    return compatibility_witness(f, r) is None


def lift_bmap(f: BMap, blowup: Blowup) -> Lift:
    """Lift f: X -> Y through the blow-down [Y; R] -> Y.

    Raises:
        NotCompatible: if f does not factor through the refinement.
    """
    r = blowup.refinement
    witness = compatibility_witness(f, r)
    if witness is not None:
        raise NotCompatible(
            f"image of face {witness[0]} crosses the refinement: "
            f"direction {witness[1]}")
    rs = r.source
    px = f.source.basic_complex()
    node = {}
    homs = {}
    for face in f.source.faces:
        sigma_id = f.face_map[face]
        mat = f.exponent_matrix(face)
        gens = [la.apply_row(e, mat) for e in la.identity(len(mat))]
        best = None
        for e in r.members_over(sigma_id):
            img = r.morphism.image_in(e, sigma_id)
            if all(img.contains(g) for g in gens):
                if best is None or img.dim < best[1].dim:
                    best = (e, img)
        e, img = best
        node[face] = e
        incl = la.mat_mul(r.morphism.homs[e],
                          r.target.face_maps[(r.morphism.node_map[e],
                                              sigma_id)])
        src = rs.monoids[e]
        big = la.mat_mul(src.lattice, incl) if src.dim else ()
        rows = []
        for g in gens:
            if la.is_zero(g):
                rows.append(la.zeros(src.ambient_dim))
                continue
            c = la.solve_row(g, big)
            assert c is not None
            rows.append(la.apply_row(_int_vec(c), src.lattice))
        homs[face] = la.mat(rows) if rows else \
            la.mat([la.zeros(src.ambient_dim)] * 0)
    factoring = ComplexMorphism(px, rs, node, homs)
    # Boundary exponents of the lifted map.
    exps = {}
    for g in f.source.hypersurfaces():
        e = node[g]
        m = rs.monoids[e]
        (img_vec,) = homs[g]
        coeffs = _smooth_coords(m, img_vec)
        for w in blowup.total.incidence[e]:
            ray_img = MonoidHom(rs.monoids[w], m,
                                rs.face_maps[(w, e)]).image_monoid()
            idx = m.rays.index(ray_img.rays[0])
            if coeffs[idx]:
                exps[(g, w)] = coeffs[idx]
    lifted = BMap(f.source, blowup.total, dict(node), exps)
    return Lift(lifted, factoring)


def _smooth_coords(m: ToricMonoid, v) -> la.Vec:
    """Coordinates of a monoid point in the free basis of a smooth
    monoid, following the ray order of m.rays."""
    if m.dim == 0:
        return ()
    c = la.solve_row(v, la.mat(m.rays))
    assert c is not None
    return _int_vec(c)


def _int_vec(c) -> la.Vec:
    out = []
    for x in c:
        fr = Fraction(x)
        assert fr.denominator == 1, "expected an integral solution"
        out.append(int(fr))
    return tuple(out)


def chart_lift(delta: la.Mat, nu: la.Mat) -> la.Mat:
    """Exponent matrix mu with delta == mu @ nu, for a map x = a(x') x'^delta
    factoring through the chart t -> t^nu."""
    nu_inv = la.inverse_q(nu)
    mu = la.mat_mul(delta, nu_inv)
    out = []
    for row in mu:
        out.append(_int_vec(row))
    mu = la.mat(out)
    assert la.mat_mul(mu, nu) == la.mat(tuple(tuple(int(x) for x in row)
                                              for row in delta))
    return mu


# ---------------------------------------------------------------------------
# Ordinary, weighted and iterated blow-up; blowing up the domain.
# ---------------------------------------------------------------------------


def ordinary_blowup(x: CornerComplex, face_id: str,
                    weights: Optional[Sequence[int]] = None
                    ) -> Tuple[Blowup, List[la.Mat]]:
    """Blow up a boundary face: star subdivide the basic complex at the
    (weighted) sum of the generators of the face monoid.

    Returns the blow-up and the chart exponent matrices, one per
    coordinate of the face: the identity with row i replaced by the
    weight vector.
    """
    px = x.basic_complex()
    k = x.codim(face_id)
    if weights is None:
        weights = [1] * k
    assert len(weights) == k and all(w >= 1 for w in weights)
    v = tuple(int(w) for w in weights)
    r = star_subdivide_complex(px, face_id, v)
    if not r.source.is_smooth():
        # Weighted centers need not give a smooth subdivision; make it so.
        r = r.compose(natural_smooth_refinement(r.source))
    b = generalized_blowup(x, r)
    charts = []
    for i in range(k):
        rows = [tuple(v) if j == i else la.identity(k)[j] for j in range(k)]
        charts.append(la.mat(rows))
    return b, charts


def lift_face(b: Blowup, face_id: str) -> str:
    """The lift (proper transform) of a face of the base to the blow-up:
    the unique element of the refinement whose image is the whole face
    monoid.

    Raises:
        NotAFace: if the face does not survive as a single face.
    """
    r = b.refinement
    sigma = r.target.monoids[face_id]
    for e in r.members_over(face_id):
        if r.morphism.node_map[e] == face_id and \
                r.morphism.image_in(e, face_id) == sigma:
            return e
    raise NotAFace(f"face {face_id} does not lift to a single face")


def iterated_blowup(x: CornerComplex, face_ids: Sequence[str]) -> Blowup:
    """Blow up a sequence of boundary faces, lifting each later center to
    the current blow-up."""
    current = identity_refinement(x.basic_complex())
    total_blowup = generalized_blowup(x, current)
    for fid in face_ids:
        lifted = lift_face(total_blowup, fid)
        rs = total_blowup.refinement.source
        v = rs.monoids[lifted].interior_point()
        step = star_subdivide_complex(rs, lifted, v)
        current = total_blowup.refinement.compose(step)
        total_blowup = generalized_blowup(x, current)
    return total_blowup


def blowup_domain(f: BMap, blowup: Blowup) -> Tuple[Blowup, Lift, bool]:
    """Make f liftable by blowing up its domain: pull the refinement back
    along the induced morphism, take its natural smooth refinement, blow
    up the domain and lift f composed with the new blow-down.

    Returns the domain blow-up, the lift of f . beta, and whether the
    domain blow-up was already minimal (pullback already smooth).
    """
    phi = f.induced_morphism()
    pulled = pullback_refinement(blowup.refinement, phi)
    minimal = pulled.source.is_smooth()
    s = pulled if minimal else \
        pulled.compose(natural_smooth_refinement(pulled.source))
    dom = generalized_blowup(f.source, s)
    lifted = lift_bmap(dom.blowdown.compose(f), blowup)
    return dom, lifted, minimal


def check_blowdown(f: BMap) -> Tuple[bool, bool]:
    """Decide whether f looks like a generalized blow-down: its induced
    morphism must be a smooth refinement of the target's basic complex.

    Returns (is_blowdown, is_diffeomorphism).
    """
    phi = f.induced_morphism()
    ref = ComplexRefinement(phi)
    try:
        ref.validate()
    except Exception:
        return False, False
    if not ref.source.is_smooth():
        return False, False
    return True, ref.is_identity_like()
