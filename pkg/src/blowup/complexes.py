"""Monoidal complexes: functors from a finite poset to toric monoids whose
arrows are isomorphisms onto faces.

Every complex here is complete (each face of each monoid is the image of
at least one smaller element) and reduced (at most one).  Elements carry
string ids; a face map for a <= b is an integer matrix from the ambient
space of a to the ambient space of b, acting on row vectors.
"""

import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import exactla as la
from .errors import (NotAComplex, NotAFace, NotARefinement, NotInSupport,
                     NotSmooth)
from .monoids import MonoidHom, ToricMonoid
from .monoids import fiber_product as monoid_fiber_product
from .refinements import (MonoidRefinement, planar_refine, smoothing,
                          star_subdivide, trivial_refinement)


class MonoidalComplex:
    """A finite poset of elements with a toric monoid for each element and
    a face map for each related pair."""

    def __init__(self, monoids: Dict[str, ToricMonoid],
                 order: Iterable[Tuple[str, str]],
                 face_maps: Dict[Tuple[str, str], la.Mat]):
        self.elements = tuple(sorted(monoids))
        self.monoids = dict(monoids)
        rel = set((a, a) for a in self.elements)
        rel.update(order)
        # Transitive closure.
        changed = True
        while changed:
            changed = False
            for (a, b), (c, d) in itertools.product(list(rel), list(rel)):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
        self.order = frozenset(rel)
        for a, b in rel:
            if a != b and (b, a) in rel:
                raise NotAComplex(f"order is not antisymmetric at {a}, {b}")
        self.face_maps = dict(face_maps)
        for a in self.elements:
            self.face_maps[(a, a)] = la.identity(
                self.monoids[a].ambient_dim)
        # Fill in composites along any chain; check consistency.
        for pair in self._chains():
            a, b = pair
            if pair in self.face_maps:
                continue
            for c in self.elements:
                if c not in (a, b) and self.leq(a, c) and self.leq(c, b) \
                        and (a, c) in self.face_maps \
                        and (c, b) in self.face_maps:
                    self.face_maps[pair] = la.mat_mul(
                        self.face_maps[(a, c)], self.face_maps[(c, b)])
                    break
        missing = [p for p in self._chains() if p not in self.face_maps]
        if missing:
            raise NotAComplex(f"missing face maps for {missing}")

    def _chains(self):
        return [(a, b) for (a, b) in sorted(self.order) if a != b]

    def leq(self, a: str, b: str) -> bool:
        return (a, b) in self.order

    def below(self, b: str) -> Tuple[str, ...]:
        return tuple(a for a in self.elements if self.leq(a, b))

    def above(self, a: str) -> Tuple[str, ...]:
        return tuple(b for b in self.elements if self.leq(a, b))

    def maximal_elements(self) -> Tuple[str, ...]:
        return tuple(a for a in self.elements
                     if all(not self.leq(a, b) or a == b
                            for b in self.elements))

    def hom(self, a: str, b: str) -> MonoidHom:
        return MonoidHom(self.monoids[a], self.monoids[b],
                         self.face_maps[(a, b)])

    def image_face(self, a: str, b: str) -> ToricMonoid:
        """The image of sigma_a inside sigma_b."""
        return self.hom(a, b).image_monoid()

    def is_smooth(self) -> bool:
        return all(m.is_smooth() for m in self.monoids.values())

    def is_simplicial(self) -> bool:
        return all(m.is_simplicial() for m in self.monoids.values())

    def dim(self) -> int:
        return max((m.dim for m in self.monoids.values()), default=0)

    def validate(self) -> None:
        """Raise NotAComplex unless the data is a complete reduced
        monoidal complex."""
        for a, b in self._chains():
            h = self.hom(a, b)
            if not h.is_injective():
                raise NotAComplex(f"face map {a} -> {b} is not injective")
            img = h.image_monoid()
            if not img.is_face_of(self.monoids[b]):
                raise NotAComplex(
                    f"image of {a} in {b} is not a face: {img.rays}")
        for a, c in self._chains():
            for b in self.elements:
                if b in (a, c) or not (self.leq(a, b) and self.leq(b, c)):
                    continue
                composite = la.mat_mul(self.face_maps[(a, b)],
                                       self.face_maps[(b, c)])
                direct = self.face_maps[(a, c)]
                ha = self.monoids[a]
                if ha.dim and any(
                        la.apply_row(r, composite) != la.apply_row(r, direct)
                        for r in ha.lattice):
                    raise NotAComplex(
                        f"face maps do not commute along {a} <= {b} <= {c}")
        for b in self.elements:
            faces = list(self.monoids[b].face_monoids())
            images = [self.image_face(a, b) for a in self.below(b)]
            for f in faces:
                hits = [img for img in images if img == f]
                if len(hits) == 0:
                    raise NotAComplex(
                        f"complex is not complete: face {f.rays} of {b} "
                        "has no preimage")
                if len(hits) > 1:
                    raise NotAComplex(
                        f"complex is not reduced: face {f.rays} of {b} "
                        "has several preimages")
            if len(images) != len(faces):
                raise NotAComplex(
                    f"element {b} has {len(images)} elements below but "
                    f"{len(faces)} faces")

    def subcomplex(self, ids: Sequence[str]) -> "MonoidalComplex":
        """The induced complex on a downward closed set of elements."""
        keep = set(ids)
        for b in keep:
            for a in self.below(b):
                if a not in keep:
                    raise NotAComplex(
                        f"subcomplex is not downward closed: {a} < {b}")
        return MonoidalComplex(
            {a: self.monoids[a] for a in keep},
            [(a, b) for (a, b) in self.order if a in keep and b in keep],
            {(a, b): m for (a, b), m in self.face_maps.items()
             if a in keep and b in keep})


def complex_from_monoid(sigma: ToricMonoid) -> Tuple[MonoidalComplex,
                                                     Dict[str, ToricMonoid]]:
    """The face complex of a single monoid; all elements share sigma's
    ambient space and all face maps are the identity.  Returns the complex
    and the map element id -> face monoid."""
    faces = sigma.face_monoids()
    ids = {f"f{k}": f for k, f in enumerate(faces)}
    by_monoid = {f.key: i for i, f in ids.items()}
    order = []
    for i, f in ids.items():
        for j, g in ids.items():
            if i != j and f.is_face_of(g):
                order.append((i, j))
    ident = la.identity(sigma.ambient_dim)
    maps = {(a, b): ident for a, b in order}
    return MonoidalComplex(ids, order, maps), ids


@dataclass
class ComplexMorphism:
    """A morphism of monoidal complexes: an order preserving map of posets
    together with a monoid homomorphism over each element, commuting with
    the face maps."""
    source: MonoidalComplex
    target: MonoidalComplex
    node_map: Dict[str, str]
    homs: Dict[str, la.Mat]

    def hom(self, a: str) -> MonoidHom:
        return MonoidHom(self.source.monoids[a],
                         self.target.monoids[self.node_map[a]],
                         self.homs[a])

    def image_in(self, a: str, sigma_id: str) -> ToricMonoid:
        """The image of the source monoid at a inside a target element
        above node_map[a]."""
        m = la.mat_mul(self.homs[a],
                       self.target.face_maps[(self.node_map[a], sigma_id)])
        return MonoidHom(self.source.monoids[a],
                         self.target.monoids[sigma_id], m).image_monoid()

    def validate(self) -> None:
        for a, b in self.source._chains():
            fa, fb = self.node_map[a], self.node_map[b]
            if not self.target.leq(fa, fb):
                raise NotAComplex(
                    f"node map is not order preserving on {a} <= {b}")
            left = la.mat_mul(self.homs[a], self.target.face_maps[(fa, fb)])
            right = la.mat_mul(self.source.face_maps[(a, b)], self.homs[b])
            src = self.source.monoids[a]
            if src.dim and any(la.apply_row(r, left) != la.apply_row(r, right)
                               for r in src.lattice):
                raise NotAComplex(
                    f"morphism squares do not commute at {a} <= {b}")
        for a in self.source.elements:
            self.hom(a).validate()

    def compose(self, then: "ComplexMorphism") -> "ComplexMorphism":
        """self followed by then (so self.target must be then.source)."""
        assert self.target is then.source or \
            self.target.elements == then.source.elements
        node = {a: then.node_map[self.node_map[a]]
                for a in self.source.elements}
        homs = {a: la.mat_mul(self.homs[a], then.homs[self.node_map[a]])
                for a in self.source.elements}
        return ComplexMorphism(self.source, then.target, node, homs)


class ComplexRefinement:
    """A refinement of complexes: a morphism phi: R -> Q, injective over
    each element, sending each element of R to the smallest element of Q
    containing its image, such that the images over each sigma form a
    refinement of sigma."""

    def __init__(self, morphism: ComplexMorphism):
        self.morphism = morphism

    @property
    def source(self) -> MonoidalComplex:
        return self.morphism.source

    @property
    def target(self) -> MonoidalComplex:
        return self.morphism.target

    def localize(self, sigma_id: str) -> MonoidRefinement:
        """The induced refinement of the monoid at a target element."""
        members = []
        for e in self.source.elements:
            if self.target.leq(self.morphism.node_map[e], sigma_id):
                members.append(self.morphism.image_in(e, sigma_id))
        return MonoidRefinement(self.target.monoids[sigma_id], members)

    def members_over(self, sigma_id: str) -> Tuple[str, ...]:
        return tuple(e for e in self.source.elements
                     if self.target.leq(self.morphism.node_map[e], sigma_id))

    def validate(self) -> None:
        self.morphism.validate()
        self.source.validate()
        for e in self.source.elements:
            h = self.morphism.hom(e)
            if not h.is_injective():
                raise NotARefinement(f"refinement hom at {e} not injective")
            img = h.image_monoid()
            src = self.source.monoids[e]
            if img.dim != src.dim:
                raise NotARefinement(f"hom at {e} drops dimension")
            # Minimality of the target element.
            tgt = self.target.monoids[self.morphism.node_map[e]]
            if img.dim > 0:
                f = tgt.smallest_face_containing(img.interior_point())
                if f.monoid != tgt:
                    raise NotARefinement(
                        f"{e} maps into a proper face of its target")
            elif tgt.dim != 0:
                raise NotARefinement(
                    f"{e} maps into a proper face of its target")
        for sigma_id in self.target.elements:
            local = self.localize(sigma_id)
            over = self.members_over(sigma_id)
            images = [self.morphism.image_in(e, sigma_id) for e in over]
            if len(set(images)) != len(images):
                raise NotARefinement(
                    f"two elements have the same image in {sigma_id}")
            failures = local.validate()
            if failures:
                raise NotARefinement(
                    f"images over {sigma_id} are not a refinement: "
                    f"{failures[0].axiom}: {failures[0].detail}")

    def is_identity_like(self) -> bool:
        """True if the refinement is a renaming: node map bijective and
        every image equals its target monoid."""
        node = self.morphism.node_map
        if len(set(node.values())) != len(self.source.elements) or \
                len(self.source.elements) != len(self.target.elements):
            return False
        for e in self.source.elements:
            if self.morphism.hom(e).image_monoid() != \
                    self.target.monoids[node[e]]:
                return False
        return True

    def is_smooth(self) -> bool:
        return self.source.is_smooth()

    def compose(self, finer: "ComplexRefinement") -> "ComplexRefinement":
        """Refine further: finer must refine self.source; the result
        refines self.target."""
        return ComplexRefinement(finer.morphism.compose(self.morphism))


def identity_refinement(q: MonoidalComplex) -> ComplexRefinement:
    node = {a: a for a in q.elements}
    homs = {a: la.identity(q.monoids[a].ambient_dim) for a in q.elements}
    return ComplexRefinement(ComplexMorphism(q, q, node, homs))


# ---------------------------------------------------------------------------
# Gluing refinements from compatible local data.
# ---------------------------------------------------------------------------


def assemble_from_local(q: MonoidalComplex,
                        local: Dict[str, MonoidRefinement]
                        ) -> ComplexRefinement:
    """Glue per-element refinements into a refinement of the complex.

    Requires local[a] to refine q.monoids[a] for every element and the
    family to be compatible: for a <= b, the members of local[b] supported
    on the image face of a are exactly the images of the members of
    local[a].

    Raises:
        NotARefinement: if the family is incompatible.
    """
    for a in q.elements:
        if a not in local:
            raise NotARefinement(f"no local refinement for {a}")
        if local[a].base != q.monoids[a]:
            raise NotARefinement(f"local refinement at {a} has wrong base")
    for a, b in q._chains():
        img_face = q.image_face(a, b)
        h = q.face_maps[(a, b)]
        mapped = set()
        for m in local[a].members:
            mapped.add(MonoidHom(m, q.monoids[b], h).image_monoid())
        localized = set(
            m for m in local[b].members
            if all(img_face.in_support(g) for g in m.rays))
        if mapped != localized:
            raise NotARefinement(
                f"local refinements at {a} and {b} disagree on the "
                f"common face")

    # Residence of each member: the element whose image face contains the
    # member's relative interior.
    residents: Dict[str, List[ToricMonoid]] = {a: [] for a in q.elements}
    for a in q.elements:
        sigma = q.monoids[a]
        for m in local[a].members:
            if m.dim == 0:
                if sigma.dim == 0:
                    residents[a].append(m)
                continue
            f = sigma.smallest_face_containing(m.interior_point())
            if f.monoid == sigma:
                residents[a].append(m)
    ids: Dict[Tuple[str, int], str] = {}
    monoids: Dict[str, ToricMonoid] = {}
    where: Dict[Tuple[str, tuple], str] = {}
    for a in q.elements:
        residents[a].sort(key=lambda m: m.key)
        for k, m in enumerate(residents[a]):
            eid = f"{a}/{k}"
            monoids[eid] = m
            where[(a, m.key)] = eid

    def find_element(a: str, m: ToricMonoid) -> str:
        """The element id of a member m of local[a]."""
        sigma = q.monoids[a]
        if m.dim == 0:
            home = next(c for c in q.below(a)
                        if q.monoids[c].dim == 0)
            trivial = ToricMonoid.trivial(q.monoids[home].ambient_dim)
            return where[(home, trivial.key)]
        f = sigma.smallest_face_containing(m.interior_point())
        if f.monoid == sigma:
            return where[(a, m.key)]
        # Find the unique element below a giving this face, pull back m.
        for c in q.below(a):
            if c == a:
                continue
            if q.image_face(c, a) == f.monoid:
                pulled = _preimage_monoid(m, q.monoids[c],
                                          q.face_maps[(c, a)])
                return where[(c, pulled.key)]
        raise NotAComplex(f"face {f.monoid.rays} of {a} has no element")

    order = []
    maps = {}
    for a in q.elements:
        for m in local[a].members:
            e_m = find_element(a, m)
            for f in m.face_monoids():
                e_f = find_element(a, f)
                if e_f != e_m:
                    ca = e_f.rsplit("/", 1)[0]
                    cb = e_m.rsplit("/", 1)[0]
                    order.append((e_f, e_m))
                    maps[(e_f, e_m)] = q.face_maps[(ca, cb)]
    source = MonoidalComplex(monoids, order, maps)
    node = {}
    homs = {}
    for eid in source.elements:
        a = eid.rsplit("/", 1)[0]
        node[eid] = a
        homs[eid] = la.identity(q.monoids[a].ambient_dim)
    return ComplexRefinement(ComplexMorphism(source, q, node, homs))


def _preimage_monoid(m: ToricMonoid, src: ToricMonoid,
                     face_map: la.Mat) -> ToricMonoid:
    """Pull a monoid supported on the image of src back along an injective
    face map."""
    big = la.mat_mul(src.lattice, face_map)
    lat = [la.apply_row(_int_vec(la.solve_row(row, big)), src.lattice)
           for row in m.lattice]
    rays = [la.apply_row(_int_vec(la.solve_row(g, big)), src.lattice)
            for g in m.rays]
    return ToricMonoid.make(src.ambient_dim, lat, rays)


def _int_vec(c) -> la.Vec:
    from fractions import Fraction
    out = []
    for x in c:
        f = Fraction(x)
        assert f.denominator == 1, "expected an integral solution"
        out.append(int(f))
    return tuple(out)


def reassemble(r: ComplexRefinement) -> ComplexRefinement:
    """Renormalize a refinement so every source monoid lives in the
    ambient space of its target element with an identity hom."""
    local = {a: r.localize(a) for a in r.target.elements}
    return assemble_from_local(r.target, local)


# ---------------------------------------------------------------------------
# Subdivisions of complexes.
# ---------------------------------------------------------------------------


def star_subdivide_complex(q: MonoidalComplex, a_id: str,
                           v) -> ComplexRefinement:
    """Star subdivision of the complex at a vector v in the monoid of
    element a_id: every monoid above a_id is star subdivided at the image
    of v, every other monoid is refined trivially."""
    local = {}
    for b in q.elements:
        if q.leq(a_id, b):
            vb = la.apply_row(v, q.face_maps[(a_id, b)])
            local[b] = star_subdivide(q.monoids[b], vb)
        else:
            local[b] = trivial_refinement(q.monoids[b])
    return assemble_from_local(q, local)


def planar_refine_complex(q: MonoidalComplex,
                          subspaces: Dict[str, Sequence]
                          ) -> ComplexRefinement:
    """Planar refinement of a smooth complex: refine each monoid by the
    given subspace (rows spanning it, in that monoid's ambient space).
    The family must be face compatible: the subspace cut of a face must
    agree with the face of the subspace cut."""
    local = {a: planar_refine(q.monoids[a], subspaces[a])
             for a in q.elements}
    return assemble_from_local(q, local)


def smooth_complex(q: MonoidalComplex) -> ComplexRefinement:
    """Smoothing of a simplicial complex: smooth each monoid by freeing
    its extremals."""
    local = {a: smoothing(q.monoids[a]) for a in q.elements}
    return assemble_from_local(q, local)


# ---------------------------------------------------------------------------
# Products and fiber products.
# ---------------------------------------------------------------------------


def fiber_product_complex(phi1: ComplexMorphism, phi2: ComplexMorphism
                          ) -> Tuple[MonoidalComplex, ComplexMorphism,
                                     ComplexMorphism]:
    """Fiber product of two morphisms with a common target.

    Elements are the pairs (a, b) with phi1(a) == phi2(b) whose fiber
    monoid meets the relative interiors of both factors; the monoid over
    (a, b) is the fiber product of the two monoids over the common image.
    Returns the complex together with the two projections.
    """
    q1, q2 = phi1.source, phi2.source
    pairs = []
    for a in q1.elements:
        for b in q2.elements:
            if phi1.node_map[a] != phi2.node_map[b]:
                continue
            m = monoid_fiber_product(phi1.hom(a), phi2.hom(b))
            d1 = q1.monoids[a].ambient_dim
            p = m.interior_point()
            p1, p2 = p[:d1], p[d1:]
            if not _hits_interior(q1.monoids[a], p1):
                continue
            if not _hits_interior(q2.monoids[b], p2):
                continue
            pairs.append((a, b, m))
    monoids = {}
    for a, b, m in pairs:
        monoids[f"{a}*{b}"] = m
    order = []
    maps = {}
    for (a, b, m), (c, d, n) in itertools.product(pairs, repeat=2):
        if (a, b) == (c, d):
            continue
        if q1.leq(a, c) and q2.leq(b, d):
            e1, e2 = f"{a}*{b}", f"{c}*{d}"
            order.append((e1, e2))
            maps[(e1, e2)] = la.block_diag(q1.face_maps[(a, c)],
                                           q2.face_maps[(b, d)])
    f = MonoidalComplex(monoids, order, maps)
    node1, homs1, node2, homs2 = {}, {}, {}, {}
    for a, b, m in pairs:
        eid = f"{a}*{b}"
        d1 = q1.monoids[a].ambient_dim
        d2 = q2.monoids[b].ambient_dim
        node1[eid] = a
        homs1[eid] = la.mat([la.identity(d1)[i] for i in range(d1)]
                            + [la.zeros(d1)] * d2)
        node2[eid] = b
        homs2[eid] = la.mat([la.zeros(d2)] * d1
                            + [la.identity(d2)[i] for i in range(d2)])
    proj1 = ComplexMorphism(f, q1, node1, homs1)
    proj2 = ComplexMorphism(f, q2, node2, homs2)
    return f, proj1, proj2


def _hits_interior(sigma: ToricMonoid, p) -> bool:
    if all(x == 0 for x in p):
        return sigma.dim == 0
    return sigma.smallest_face_containing(p).monoid == sigma


def terminal_complex() -> MonoidalComplex:
    return MonoidalComplex({"pt": ToricMonoid.trivial(0)}, [], {})


def morphism_to_point(q: MonoidalComplex) -> ComplexMorphism:
    t = terminal_complex()
    node = {a: "pt" for a in q.elements}
    homs = {a: tuple(() for _ in range(q.monoids[a].ambient_dim))
            for a in q.elements}
    return ComplexMorphism(q, t, node, homs)


def product_complex(q1: MonoidalComplex, q2: MonoidalComplex
                    ) -> Tuple[MonoidalComplex, ComplexMorphism,
                               ComplexMorphism]:
    return fiber_product_complex(morphism_to_point(q1),
                                 morphism_to_point(q2))


def pullback_refinement(r: ComplexRefinement, psi: ComplexMorphism
                        ) -> ComplexRefinement:
    """Pull a refinement of Q back along psi: Q1 -> Q to a refinement of
    Q1 (the fiber product Q1 x_Q R with its first projection)."""
    f, p1, _ = fiber_product_complex(psi, r.morphism)
    return reassemble(ComplexRefinement(p1))


# ---------------------------------------------------------------------------
# The natural smooth refinement.
# ---------------------------------------------------------------------------


def nsdim(sigma: ToricMonoid) -> int:
    """Dimension of the largest face supported in the span of the
    extremals that are dependent on the others; zero iff simplicial."""
    if sigma.is_simplicial():
        return 0
    rays = sigma.ray_coords()
    dependent = []
    for i, c in enumerate(rays):
        others = [d for j, d in enumerate(rays) if j != i]
        if la.rank(la.mat(others)) == la.rank(la.mat(list(others) + [c])):
            dependent.append(c)
    span = dependent
    best = 0
    for fs in sigma._face_sets():
        sub = [rays[i] for i in fs]
        if all(_in_span(c, span) for c in sub):
            best = max(best, la.rank(la.mat(sub)) if sub else 0)
    return best


def _in_span(c, rows) -> bool:
    if not rows:
        return la.is_zero(c)
    return la.solve_row(c, la.mat(rows)) is not None


def is_fully_nonsimplicial(sigma: ToricMonoid) -> bool:
    return sigma.dim > 0 and nsdim(sigma) == sigma.dim


def natural_smooth_refinement(q: MonoidalComplex) -> ComplexRefinement:
    """The canonical smooth refinement: repeatedly star subdivide a fully
    non-simplicial monoid of maximal nsdim at the sum of its extremals,
    then smooth the resulting simplicial complex."""
    total = identity_refinement(q)
    current = q
    guard = 0
    while True:
        guard += 1
        assert guard < 1000, "natural smooth refinement did not terminate"
        scores = {a: nsdim(current.monoids[a]) for a in current.elements}
        k = max(scores.values(), default=0)
        if k == 0:
            break
        candidates = sorted(a for a in current.elements
                            if scores[a] == k
                            and is_fully_nonsimplicial(current.monoids[a]))
        if not candidates:
            # The maximal nsdim is always realized on a face which is
            # fully non-simplicial; subdivide there instead.
            fully = [a for a in current.elements
                     if is_fully_nonsimplicial(current.monoids[a])]
            k = max(scores[a] for a in fully)
            candidates = sorted(a for a in fully if scores[a] == k)
        a = candidates[0]
        count_k = sum(1 for s in scores.values() if s == k)
        v = current.monoids[a].interior_point()
        step = star_subdivide_complex(current, a, v)
        total = total.compose(step)
        current = step.source
        new_scores = {b: nsdim(current.monoids[b])
                      for b in current.elements}
        new_k = max(new_scores.values(), default=0)
        new_count = sum(1 for s in new_scores.values() if s == k)
        assert (new_k < k) or (new_count < count_k), \
            "subdivision must strictly reduce the nsdim measure"
    return total.compose(smooth_complex(current))


# ---------------------------------------------------------------------------
# Extension of refinements from a subcomplex.
# ---------------------------------------------------------------------------


def extend_refinement(q: MonoidalComplex,
                      local0: Dict[str, MonoidRefinement],
                      smooth: Optional[bool] = None) -> ComplexRefinement:
    """Extend a refinement of a downward closed subcomplex to the whole
    complex.

    Proceeds by increasing dimension of the damaged monoids (those with a
    nontrivially refined face but no refinement of their own), coning the
    refined boundary of each from the sum of its extremals.  If the given
    refinement is smooth (or smooth=True), the extension is made smooth
    with the natural smooth refinement, which leaves the given part
    untouched.
    """
    keys = set(local0)
    for b in keys:
        for a in q.below(b):
            if a not in keys:
                raise NotAComplex(
                    f"refined subcomplex is not downward closed at {a}")
    local = dict(local0)
    if smooth is None:
        smooth = all(r.is_smooth() for r in local0.values())
    domain = set(local)
    order_by_dim = sorted(q.elements,
                          key=lambda a: (q.monoids[a].dim, a))
    while len(domain) < len(q.elements):
        progressed = False
        damaged = []
        for a in order_by_dim:
            if a in domain:
                continue
            harmed = any(b in domain and not local[b].is_trivial()
                         for b in q.below(a) if b != a)
            if not harmed and all(b in domain or b == a
                                  for b in q.below(a)):
                local[a] = trivial_refinement(q.monoids[a])
                domain.add(a)
                progressed = True
            elif harmed and all(b in domain or b == a
                                for b in q.below(a)):
                damaged.append(a)
        if not damaged:
            if progressed:
                continue
            raise NotAComplex("extension stalled")
        d = min(q.monoids[a].dim for a in damaged)
        for a in damaged:
            if q.monoids[a].dim != d:
                continue
            sigma = q.monoids[a]
            v = sigma.interior_point()
            boundary = []
            for b in q.below(a):
                if b == a:
                    continue
                h = q.face_maps[(b, a)]
                for m in local[b].members:
                    boundary.append(
                        MonoidHom(m, sigma, h).image_monoid())
            boundary = list(set(boundary))
            members = list(boundary)
            for m in boundary:
                lattice = la.mat(list(m.lattice) + [tuple(v)])
                cone = list(m.rays) + [tuple(v)]
                members.append(ToricMonoid.make(sigma.ambient_dim,
                                                lattice, cone))
            local[a] = MonoidRefinement(sigma, members)
            domain.add(a)
    result = assemble_from_local(q, local)
    if smooth:
        ns = natural_smooth_refinement(result.source)
        result = result.compose(ns)
        for a in local0:
            if set(result.localize(a).members) != set(local0[a].members):
                raise NotARefinement(
                    "smooth extension failed to restrict to the given "
                    f"refinement at {a}")
    return result


def mutual_smooth_refinement(r1: ComplexRefinement, r2: ComplexRefinement
                             ) -> Tuple[ComplexRefinement, ComplexMorphism,
                                        ComplexMorphism]:
    """A smooth refinement of the common target refining both r1 and r2,
    with the morphisms to r1.source and r2.source."""
    f, p1, p2 = fiber_product_complex(r1.morphism, r2.morphism)
    ns = natural_smooth_refinement(f)
    refined = ComplexRefinement(p1).compose(ns)  # refines r1.source
    total = r1.compose(refined)
    to_r1 = ns.morphism.compose(p1)
    to_r2 = ns.morphism.compose(p2)
    return total, to_r1, to_r2
