"""Refinements of a single toric monoid.

A refinement of sigma is a finite family of submonoids (each with its own
lattice, all living in the ambient space of sigma) that is closed under
faces, has pairwise intersections which are common faces, and whose
supports cover supp(sigma).
"""

import itertools
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from . import exactla as la
from .errors import NotAFace, NotARefinement, NotInSupport, NotSimplicial
from .monoids import (ToricMonoid, _cone_section_rays, _enumerate_rays,
                      _saturated_span)


@dataclass(frozen=True)
class RefinementFailure:
    """One violated refinement axiom with a witness."""
    axiom: str  # "face_closed" | "common_face" | "cover" | "support"
    detail: str
    witness: Optional[tuple] = None


class MonoidRefinement:
    """A candidate refinement: a base monoid and a family of submonoids."""

    def __init__(self, base: ToricMonoid, members: Sequence[ToricMonoid]):
        self.base = base
        self.members = tuple(sorted(set(members), key=lambda m: m.key))

    def __eq__(self, other):
        return (isinstance(other, MonoidRefinement)
                and self.base == other.base
                and self.members == other.members)

    def __hash__(self):
        return hash((self.base.key, tuple(m.key for m in self.members)))

    def __repr__(self):
        return (f"MonoidRefinement(base dim {self.base.dim}, "
                f"{len(self.members)} members)")

    def maximal_members(self) -> Tuple[ToricMonoid, ...]:
        return tuple(m for m in self.members if m.dim == self.base.dim)

    def is_trivial(self) -> bool:
        return set(self.members) == set(self.base.face_monoids())

    def is_smooth(self) -> bool:
        return all(m.is_smooth() for m in self.members)

    def is_simplicial(self) -> bool:
        return all(m.is_simplicial() for m in self.members)

    def validate(self) -> List[RefinementFailure]:
        """Check the refinement axioms; an empty list means valid."""
        failures = []
        member_set = set(self.members)
        for m in self.members:
            for g in m.rays:
                if not self.base.in_support(g):
                    failures.append(RefinementFailure(
                        "support", f"ray {g} outside supp(base)", g))
            for f in m.face_monoids():
                if f not in member_set:
                    failures.append(RefinementFailure(
                        "face_closed",
                        f"face {f.rays} of member {m.rays} missing",
                        f.rays))
        for m1, m2 in itertools.combinations(self.members, 2):
            inter = intersect_members(m1, m2)
            if not (inter.is_face_of(m1) and inter.is_face_of(m2)):
                failures.append(RefinementFailure(
                    "common_face",
                    f"intersection of {m1.rays} and {m2.rays} is not a "
                    "common face", inter.rays))
        failures.extend(self._check_cover())
        return failures

    def _check_cover(self) -> List[RefinementFailure]:
        """Exact cover criterion: every facet of every maximal member
        either lies in a facet of the base support or is shared with
        exactly one other maximal member."""
        base = self.base
        if base.dim == 0:
            return []
        maximal = self.maximal_members()
        if not maximal:
            return [RefinementFailure(
                "cover", "no full-dimensional member",
                base.interior_point())]
        failures = []
        base_facets = [f.functional for f in base.facet_faces()]
        facet_owner = {}
        for m in maximal:
            for f in m.facet_faces():
                cone_key = f.monoid.rays
                on_boundary = any(
                    not la.is_zero(u)
                    and all(la.dot(u, g) == 0 for g in cone_key)
                    for u in base_facets)
                if on_boundary:
                    continue
                facet_owner.setdefault(cone_key, []).append(m)
        for cone_key, owners in facet_owner.items():
            if len(owners) != 2:
                witness = la.zeros(base.ambient_dim)
                for g in cone_key:
                    witness = la.vadd(witness, g)
                failures.append(RefinementFailure(
                    "cover",
                    f"interior facet {cone_key} belongs to "
                    f"{len(owners)} maximal members", witness))
        return failures

    def localize(self, tau: ToricMonoid) -> "MonoidRefinement":
        """The induced refinement of a face tau of the base."""
        if not tau.is_face_of(self.base):
            raise NotAFace("localization target is not a face of the base")
        members = [m for m in self.members
                   if all(tau.in_support(g) for g in m.rays)]
        return MonoidRefinement(tau, members)

    def member_containing(self, v) -> ToricMonoid:
        """The smallest member whose support contains v.

        Raises:
            NotInSupport: if no member support contains v.
        """
        best = None
        for m in self.members:
            if m.in_support(v):
                if best is None or m.dim < best.dim:
                    best = m
        if best is None:
            raise NotInSupport(f"{tuple(v)} is not covered by any member")
        return best


def intersect_members(m1: ToricMonoid, m2: ToricMonoid) -> ToricMonoid:
    """The set intersection of two toric monoids in a common ambient
    space, as a toric monoid: (N1 cap N2) cap (C1 cap C2)."""
    assert m1.ambient_dim == m2.ambient_dim
    d = m1.ambient_dim
    if m1 == m2:
        return m1
    if m1.dim == 0 or m2.dim == 0:
        return ToricMonoid.trivial(d)
    # Lattice intersection: pairs (x, y) with x @ B1 == y @ B2.
    stacked = la.mat(list(m1.lattice)
                     + [tuple(-v for v in row) for row in m2.lattice])
    kern = la.saturated_kernel(stacked)
    lattice_rows = [la.apply_row(k[:m1.dim], m1.lattice) for k in kern]
    if not lattice_rows or all(la.is_zero(r) for r in lattice_rows):
        return ToricMonoid.trivial(d)
    # Cone intersection, restricted to the span of the lattice
    # intersection so the canonical span condition holds.
    rays = _cone_intersection_rays(m1, m2, la.mat(lattice_rows))
    if not rays:
        return ToricMonoid.trivial(d)
    span = _ambient_span_lattice(rays, lattice_rows)
    return ToricMonoid.make(d, span, rays)


def _ambient_span_lattice(rays, lattice_rows):
    """Basis of lattice cap span(rays), in ambient coordinates."""
    if not lattice_rows:
        return ()
    basis = la.row_space_basis(la.mat(lattice_rows))
    coords = []
    for g in rays:
        c = la.solve_row(g, basis)
        assert c is not None
        coords.append(la.clear_denominators(c))
    span = _saturated_span(la.mat(coords), len(basis))
    return la.mat_mul(span, basis)


def _cone_intersection_rays(m1: ToricMonoid, m2: ToricMonoid,
                            span_rows=None):
    """Extreme rays of supp(m1) cap supp(m2) (optionally further cut by
    the span of span_rows), in ambient coordinates."""
    d = m1.ambient_dim
    eq = []
    ineq = []
    for m in (m1, m2):
        for u in la.right_kernel_q(m.lattice):
            eq.append(la.clear_denominators(u))
        for f in m.facet_faces():
            ineq.append(f.functional)
    if span_rows is not None:
        for u in la.right_kernel_q(span_rows):
            eq.append(la.clear_denominators(u))
    if eq:
        basis = la.right_kernel_q(la.mat(eq))
        if not basis:
            return ()
        k_int = la.mat(la.clear_denominators(b) for b in basis)
    else:
        k_int = la.identity(d)
    s = len(k_int)
    rows = [tuple(la.dot(u, k_int[i]) for i in range(s)) for u in ineq]
    ys = _enumerate_rays(la.mat(rows), s)
    out = []
    for y in ys:
        out.append(la.primitive(la.apply_row(y, k_int)))
    return tuple(sorted(set(out)))


def trivial_refinement(sigma: ToricMonoid) -> MonoidRefinement:
    return MonoidRefinement(sigma, sigma.face_monoids())


def star_subdivide(sigma: ToricMonoid, v) -> MonoidRefinement:
    """Star subdivision of sigma at a nonzero v in sigma: the faces not
    containing v, together with tau + Z_+ v for each such face tau.

    The subdivision is smooth when every proper face of sigma is smooth
    and v is an extremal-sum style interior choice; smoothness is a
    property of the result, not a precondition.
    """
    if la.is_zero(v):
        raise NotInSupport("subdivision center must be nonzero")
    if not sigma.contains(v):
        raise NotInSupport(f"{tuple(v)} is not in the monoid")
    members = []
    for f in sigma.faces():
        tau = f.monoid
        if tau.in_support(v):
            continue
        members.append(tau)
        lattice = la.mat(list(tau.lattice) + [tuple(v)])
        cone = list(tau.rays) + [tuple(v)]
        members.append(ToricMonoid.make(sigma.ambient_dim, lattice, cone))
    return MonoidRefinement(sigma, members)


def smoothing(sigma: ToricMonoid) -> MonoidRefinement:
    """The smoothing of a simplicial monoid: members are the free monoids
    generated by the subsets of the extremals.

    Raises:
        NotSimplicial: if sigma is not simplicial.
    """
    if not sigma.is_simplicial():
        raise NotSimplicial("smoothing is defined for simplicial monoids")
    members = []
    for k in range(len(sigma.rays) + 1):
        for sub in itertools.combinations(sigma.rays, k):
            members.append(ToricMonoid.make(sigma.ambient_dim,
                                            la.mat(sub), sub))
    return MonoidRefinement(sigma, members)


def maximal_faces_avoiding(sigma: ToricMonoid,
                           subspace_rows: Sequence) -> Tuple[ToricMonoid, ...]:
    """Faces of sigma meeting the subspace only at 0, maximal among
    those."""
    avoiding = []
    for f in sigma.faces():
        tau = f.monoid
        if tau.dim == 0:
            avoiding.append(tau)
            continue
        section = tau.intersect_with_subspace(subspace_rows)
        if section.dim == 0:
            avoiding.append(tau)
    maximal = []
    for t in avoiding:
        if not any(t != o and t.is_face_of(o) for o in avoiding):
            maximal.append(t)
    return tuple(sorted(maximal, key=lambda m: m.key))


def planar_refine(sigma: ToricMonoid, subspace_rows: Sequence
                  ) -> MonoidRefinement:
    """Refinement of sigma by a subspace M: the faces of the joins
    mu * tau, where mu = sigma cap M and tau runs over the maximal faces
    meeting M trivially."""
    mu = sigma.intersect_with_subspace(subspace_rows)
    members = []
    for tau in maximal_faces_avoiding(sigma, subspace_rows):
        joined = sigma.join(mu, tau)
        members.extend(joined.face_monoids())
    return MonoidRefinement(sigma, members)
