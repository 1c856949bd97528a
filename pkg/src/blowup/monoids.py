"""Toric monoids: finitely generated, sharp, saturated, torsion free.

A toric monoid is stored canonically as a pair (lattice, cone): the monoid
is the set of lattice points in a pointed rational cone spanning the same
subspace as the lattice.  The lattice is a sublattice of an ambient Z^d,
given by a Hermite-reduced row basis; the cone is given by its extreme
rays, each scaled to the primitive lattice point on the ray.  Two monoids
are equal iff their canonical data agree.
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Tuple

from . import exactla as la
from .errors import (NotAFace, NotInSupport, NotPointedLattice, NotSaturated,
                     NotSharp, NotSimplicial)

Vec = la.Vec
Mat = la.Mat


class ToricMonoid:
    """N cap C for a sublattice N of Z^d and a pointed cone C with
    span(C) = span(N)."""

    __slots__ = ("ambient_dim", "lattice", "rays", "_cache")

    def __init__(self, ambient_dim: int, lattice: Mat, rays: Mat,
                 _canonical: bool = False):
        if not _canonical:
            raise TypeError("use the classmethod constructors")
        self.ambient_dim = ambient_dim
        self.lattice = lattice  # HNF row basis of N, possibly ()
        self.rays = rays        # sorted primitive extremal lattice points
        self._cache = {}

    # -- construction -------------------------------------------------------

    @classmethod
    def make(cls, ambient_dim: int, lattice_rows: Sequence,
             cone_generators: Sequence) -> "ToricMonoid":
        """Monoid N cap C from a lattice basis and cone generators.

        The cone generators may be any nonzero rational vectors in the span
        of the lattice; they are replaced by the primitive lattice points
        on the extreme rays.

        Raises:
            NotSharp: if the cone contains a line.
            NotPointedLattice: if span(cone) != span(lattice).
        """
        lattice = la.row_space_basis(la.mat(lattice_rows))
        r = len(lattice)
        coords = []
        for g in cone_generators:
            if la.is_zero(g):
                continue
            c = la.solve_row(g, lattice) if r else None
            if c is None:
                raise NotPointedLattice(
                    f"generator {tuple(g)} outside the lattice span")
            coords.append(la.clear_denominators(c))
        seen = set()
        dedup = []
        for c in coords:
            if c not in seen:
                seen.add(c)
                dedup.append(c)
        coords = dedup
        if la.rank(la.mat(coords)) != r if coords else r != 0:
            raise NotPointedLattice("cone does not span the lattice span")
        if coords and la.lp_feasible(r, strict=coords) is None:
            raise NotSharp("cone contains a line")
        ext = _extremal_subset(coords, r)
        rays = tuple(sorted(la.apply_row(c, lattice) for c in ext))
        return cls(ambient_dim, lattice, rays, _canonical=True)

    @classmethod
    def from_generators(cls, ambient_dim: int,
                        generators: Sequence) -> "ToricMonoid":
        """Monoid generated by integer vectors, checked for saturation.

        The lattice is the group generated by the generators and the cone
        is the cone they span.  Raises NotSaturated (with an offending
        lattice point as the message) if the generators span a strictly
        smaller monoid than lattice-cap-cone.
        """
        gens = la.mat(generators)
        monoid = cls.make(ambient_dim, gens, [g for g in gens
                                              if not la.is_zero(g)])
        gen_coords = [monoid.lattice_coords_int(g) for g in gens
                      if not la.is_zero(g)]
        for h in monoid.hilbert_basis():
            c = monoid.lattice_coords_int(h)
            if _nonneg_int_combination(c, gen_coords) is None:
                raise NotSaturated(f"lattice point {h} is in the saturation "
                                   "but not the generated monoid")
        return monoid

    @classmethod
    def trivial(cls, ambient_dim: int) -> "ToricMonoid":
        return cls(ambient_dim, (), (), _canonical=True)

    @classmethod
    def free(cls, n: int) -> "ToricMonoid":
        """Z_+^n in ambient Z^n."""
        return cls(n, la.identity(n), tuple(sorted(la.identity(n))),
                   _canonical=True)

    # -- canonical identity --------------------------------------------------

    @property
    def key(self):
        return (self.ambient_dim, self.lattice, self.rays)

    def __eq__(self, other):
        return isinstance(other, ToricMonoid) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return (f"ToricMonoid(dim={self.dim}, ambient={self.ambient_dim}, "
                f"rays={list(self.rays)})")

    # -- basic structure -----------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.lattice)

    def _cached(self, name, fn):
        if name not in self._cache:
            self._cache[name] = fn()
        return self._cache[name]

    def ray_coords(self) -> Mat:
        """Extremal rays in lattice coordinates (rows of an integer
        matrix)."""
        def build():
            out = []
            for g in self.rays:
                c = la.solve_row_int(g, self.lattice)
                assert c is not None
                out.append(c)
            return tuple(out)
        return self._cached("ray_coords", build)

    def extremals(self) -> Mat:
        """Primitive generators of the extreme rays, in ambient
        coordinates."""
        return self.rays

    def lattice_coords(self, v) -> Optional[Tuple[Fraction, ...]]:
        """Rational coordinates of v in the lattice basis, or None if v is
        outside the lattice span."""
        if self.dim == 0:
            return () if la.is_zero(v) else None
        return la.solve_row(v, self.lattice)

    def lattice_coords_int(self, v) -> Optional[Vec]:
        if self.dim == 0:
            return () if la.is_zero(v) else None
        return la.solve_row_int(v, self.lattice)

    def from_coords(self, c) -> Vec:
        if self.dim == 0:
            return la.zeros(self.ambient_dim)
        return la.apply_row(c, self.lattice)

    def facet_normals(self) -> Mat:
        """Primitive integer facet normals, in lattice coordinates."""
        return self._cached(
            "facets", lambda: _facet_normals(self.ray_coords(), self.dim))

    def contains(self, v) -> bool:
        """Monoid membership for an integer ambient vector."""
        c = self.lattice_coords_int(v)
        if c is None:
            return False
        return all(la.dot(u, c) >= 0 for u in self.facet_normals())

    def in_support(self, v) -> bool:
        """Cone membership for a rational ambient vector."""
        c = self.lattice_coords(v)
        if c is None:
            return False
        return all(la.dot(u, c) >= 0 for u in self.facet_normals())

    def in_relative_interior(self, v) -> bool:
        c = self.lattice_coords(v)
        if c is None:
            return False
        return all(la.dot(u, c) > 0 for u in self.facet_normals())

    def interior_point(self) -> Vec:
        """The sum of the extremal generators (a relative interior point
        when the monoid is nontrivial)."""
        p = la.zeros(self.ambient_dim)
        for g in self.rays:
            p = la.vadd(p, g)
        return p

    def is_simplicial(self) -> bool:
        return len(self.rays) == self.dim

    def is_smooth(self) -> bool:
        if not self.is_simplicial():
            return False
        if self.dim == 0:
            return True
        return abs(la.det(self.ray_coords())) == 1

    def index(self) -> int:
        """Index of the group generated by the extremals in the lattice
        (simplicial monoids only)."""
        if not self.is_simplicial():
            raise NotSimplicial("index is defined for simplicial monoids")
        if self.dim == 0:
            return 1
        return abs(int(la.det(self.ray_coords())))

    # -- faces ---------------------------------------------------------------

    def _face_sets(self) -> Tuple[frozenset, ...]:
        """All faces as frozensets of extremal ray indices."""
        def build():
            coords = self.ray_coords()
            facets = self.facet_normals()
            top = frozenset(range(len(coords)))
            seen = {top}
            frontier = [top]
            while frontier:
                f = frontier.pop()
                for u in facets:
                    child = frozenset(i for i in f
                                      if la.dot(u, coords[i]) == 0)
                    if child not in seen:
                        seen.add(child)
                        frontier.append(child)
            if self.dim > 0:
                seen.add(frozenset())
            return tuple(sorted(seen, key=lambda s: (len(s), sorted(s))))
        return self._cached("face_sets", build)

    def _face_from_set(self, gen_set: frozenset) -> "Face":
        coords = self.ray_coords()
        facets = self.facet_normals()
        sub = tuple(coords[i] for i in sorted(gen_set))
        span_basis = _saturated_span(sub, self.dim)
        lattice = la.mat_mul(span_basis, self.lattice) if span_basis else ()
        monoid = ToricMonoid(self.ambient_dim,
                             la.row_space_basis(lattice) if lattice else (),
                             tuple(sorted(self.rays[i]
                                          for i in sorted(gen_set))),
                             _canonical=True)
        vanish = [u for u in facets
                  if all(la.dot(u, c) == 0 for c in sub)]
        u_r = la.zeros(self.dim)
        for u in vanish:
            u_r = la.vadd(u_r, u)
        functional = self._extend_functional(u_r)
        return Face(monoid=monoid, parent=self,
                    generator_indices=tuple(sorted(gen_set)),
                    functional=functional)

    def _extend_functional(self, u_lattice) -> Vec:
        """Ambient integer functional restricting to u_lattice on the
        lattice basis."""
        if self.dim == 0 or la.is_zero(u_lattice):
            return la.zeros(self.ambient_dim)
        sol = la.solve_row(u_lattice, la.transpose(self.lattice))
        assert sol is not None
        lcm = 1
        from math import gcd as _gcd
        for f in sol:
            fr = Fraction(f)
            lcm = lcm * fr.denominator // _gcd(lcm, fr.denominator)
        return tuple(int(Fraction(f) * lcm) for f in sol)

    def faces(self) -> Tuple["Face", ...]:
        """All faces, ordered by dimension then by canonical key."""
        def build():
            out = [self._face_from_set(s) for s in self._face_sets()]
            out.sort(key=lambda f: (f.monoid.dim, f.monoid.key))
            return tuple(out)
        return self._cached("faces", build)

    def face_monoids(self) -> Tuple["ToricMonoid", ...]:
        return tuple(f.monoid for f in self.faces())

    def proper_face_monoids(self) -> Tuple["ToricMonoid", ...]:
        return tuple(f.monoid for f in self.faces() if f.monoid != self)

    def facet_faces(self) -> Tuple["Face", ...]:
        return tuple(f for f in self.faces() if f.monoid.dim == self.dim - 1)

    def smallest_face_containing(self, v) -> "Face":
        """Smallest face whose support contains the rational vector v.

        Raises:
            NotInSupport: if v is outside supp(monoid).
        """
        c = self.lattice_coords(v)
        if c is None:
            raise NotInSupport(f"{tuple(v)} is outside the lattice span")
        facets = self.facet_normals()
        vals = [la.dot(u, c) for u in facets]
        if any(x < 0 for x in vals):
            raise NotInSupport(f"{tuple(v)} is outside the support")
        active = [u for u, x in zip(facets, vals) if x == 0]
        coords = self.ray_coords()
        gen_set = frozenset(i for i in range(len(coords))
                            if all(la.dot(u, coords[i]) == 0 for u in active))
        return self._face_from_set(gen_set)

    def is_face_of(self, other: "ToricMonoid") -> bool:
        return any(self == f for f in other.face_monoids())

    # -- Hilbert basis -------------------------------------------------------

    def hilbert_basis(self) -> Mat:
        """The unique minimal generating set, as ambient vectors sorted
        lexicographically."""
        def build():
            coords = _hilbert_basis_coords(self.ray_coords(), self.dim,
                                           self._face_sets(),
                                           self.facet_normals())
            return tuple(sorted(self.from_coords(c) for c in coords))
        return self._cached("hilbert", build)

    # -- derived monoids -----------------------------------------------------

    def intersect_with_subspace(self, subspace_rows: Sequence) -> "ToricMonoid":
        """The full submonoid N cap C cap M for a rational subspace M given
        by spanning rows."""
        r = self.dim
        if r == 0:
            return self
        amb_rows = [m for m in subspace_rows
                    if not all(Fraction(x) == 0 for x in m)]
        # Ambient functionals cutting out the subspace.
        if amb_rows:
            cutters = la.right_kernel_q(la.mat(amb_rows))
        else:
            cutters = tuple(tuple(Fraction(int(i == j))
                                  for j in range(self.ambient_dim))
                            for i in range(self.ambient_dim))
        # Pull the cutters back to lattice coordinates: a coordinate vector
        # c represents the ambient point c @ lattice.
        eq = []
        for u in cutters:
            w = tuple(la.dot(b, u) for b in self.lattice)
            if any(x != 0 for x in w):
                eq.append(la.clear_denominators(w))
        if eq:
            sat = la.saturated_kernel(la.transpose(la.mat(eq)))
        else:
            sat = la.identity(r)
        if not sat:
            return ToricMonoid.trivial(self.ambient_dim)
        ray_coords = _cone_section_rays(self.facet_normals(), sat, r)
        if not ray_coords:
            return ToricMonoid.trivial(self.ambient_dim)
        span = _saturated_span(ray_coords, r)
        lattice = la.mat_mul(span, self.lattice)
        rays = [la.apply_row(c, self.lattice) for c in ray_coords]
        return ToricMonoid.make(self.ambient_dim, lattice, rays)

    def join(self, tau1: "ToricMonoid", tau2: "ToricMonoid") -> "ToricMonoid":
        """The smallest full submonoid containing the full submonoids tau1
        and tau2: the monoid cut out of self by supp(tau1) + supp(tau2)."""
        for t in (tau1, tau2):
            if not self.is_full_submonoid(t):
                raise NotAFace(f"{t} is not a full submonoid")
        gens = tau1.rays + tau2.rays
        span = _saturated_span_ambient(gens, self.lattice, self.dim)
        lattice = la.mat_mul(span, self.lattice) if span else ()
        return ToricMonoid.make(self.ambient_dim, lattice, gens)

    def is_full_submonoid(self, tau: "ToricMonoid") -> bool:
        """True if tau equals self cap supp(tau) (with the induced
        lattice)."""
        if tau.ambient_dim != self.ambient_dim:
            return False
        if tau.dim == 0:
            return True
        return tau == self.intersect_with_subspace(tau.lattice)


def _extremal_subset(coords, r):
    """Indices of coords generating extreme rays (coords assumed pairwise
    distinct primitive vectors in Z^r)."""
    if not coords:
        return ()
    out = []
    for i, c in enumerate(coords):
        others = [d for j, d in enumerate(coords) if j != i]
        if not others or not _in_cone_of(c, others, r):
            out.append(c)
    return tuple(out)


def _in_cone_of(v, gens, r) -> bool:
    """True if v lies in the cone generated by gens (exact LP)."""
    k = len(gens)
    # Variables (lambda_1..lambda_k, s): lambda @ gens = s v, s > 0.
    dim = k + 1
    zero = []
    for j in range(r):
        row = [gens[i][j] for i in range(k)] + [-v[j]]
        zero.append(tuple(row))
    nonneg = [tuple(int(i == t) for i in range(dim)) for t in range(k)]
    strict = [tuple(int(i == k) for i in range(dim))]
    return la.lp_feasible(dim, strict=strict, nonneg=nonneg,
                          zero=zero) is not None


def _facet_normals(coords, r):
    """Primitive facet normals of a pointed full-dimensional cone in Z^r
    given by generating rays."""
    if r == 0:
        return ()
    if r == 1:
        sign = 1 if coords[0][0] > 0 else -1
        return ((sign,),)
    out = set()
    for sub in itertools.combinations(coords, r - 1):
        kern = la.right_kernel_q(la.mat(sub))
        if len(kern) != 1:
            continue
        u = la.clear_denominators(kern[0])
        vals = [la.dot(u, c) for c in coords]
        if all(x >= 0 for x in vals):
            pass
        elif all(x <= 0 for x in vals):
            u = tuple(-x for x in u)
            vals = [-x for x in vals]
        else:
            continue
        zero_rows = [c for c, x in zip(coords, vals) if x == 0]
        if la.rank(la.mat(zero_rows)) == r - 1:
            out.add(u)
    return tuple(sorted(out))


def _saturated_span(rows, r):
    """Basis of Z^r cap span_Q(rows), as rows."""
    if not rows or all(la.is_zero(x) for x in rows):
        return ()
    cutters = la.right_kernel_q(la.mat(rows))
    if not cutters:
        return la.identity(r)
    cols = la.transpose(la.mat(la.clear_denominators(u) for u in cutters))
    return la.saturated_kernel(cols)


def _saturated_span_ambient(gens, lattice, r):
    coords = []
    for g in gens:
        c = la.solve_row(g, lattice)
        assert c is not None
        coords.append(la.clear_denominators(c))
    return _saturated_span(la.mat(coords), r)


def _cone_section_rays(facets, k_int, r):
    """Extreme rays of {c : facet ineqs >= 0} cap rowspan(k_int), in Z^r
    coordinates."""
    s = len(k_int)
    if s == 0:
        return ()
    # Coefficient vectors in the parameters y, where c = y @ k_int.
    ineq = [tuple(la.dot(u, k_int[i]) for i in range(s)) for u in facets]
    rays_y = _enumerate_rays(la.mat(ineq), s)
    out = []
    for y in rays_y:
        c = la.apply_row(y, k_int)
        out.append(la.primitive(c))
    return tuple(sorted(set(out)))


def _enumerate_rays(ineq, s):
    """Extreme rays of the pointed cone {y in R^s : a . y >= 0 for rows a}."""
    rows = tuple(sorted(set(la.primitive(a) for a in ineq
                            if not la.is_zero(a))))
    if s == 0:
        return ()
    if not rows or len(la.right_kernel_q(la.mat(rows))) > 0:
        raise NotSharp("inequality cone contains a line")
    out = set()
    for sub in itertools.combinations(rows, s - 1):
        kern = la.right_kernel_q(la.mat(sub)) if sub else \
            tuple(tuple(Fraction(int(i == j)) for j in range(s))
                  for i in range(s))
        if len(kern) != 1:
            continue
        y = la.clear_denominators(kern[0])
        for cand in (y, tuple(-x for x in y)):
            vals = [la.dot(a, cand) for a in rows]
            if any(x < 0 for x in vals):
                continue
            active = [a for a, x in zip(rows, vals) if x == 0]
            if la.rank(la.mat(active)) == s - 1:
                out.add(la.primitive(cand))
    return tuple(sorted(out))


def _nonneg_int_combination(target, gens):
    """Coefficients c >= 0 with sum c_i gens_i == target, or None.

    Depth-first search bounded by a strictly positive functional on the
    cone spanned by the generators.
    """
    r = len(target) if target else 0
    gens = [g for g in gens if not la.is_zero(g)]
    if la.is_zero(target):
        return ()
    if not gens:
        return None
    u = la.lp_feasible(r, strict=gens)
    if u is None:
        return None
    height = la.dot(u, target)

    def search(t, idx):
        if la.is_zero(t):
            return []
        if idx == len(gens):
            return None
        g = gens[idx]
        hg = la.dot(u, g)
        cmax = int(la.dot(u, t) / hg)
        for c in range(cmax, -1, -1):
            rest = la.vsub(t, la.vscale(c, g))
            if la.dot(u, rest) < 0:
                continue
            sol = search(rest, idx + 1)
            if sol is not None:
                return [c] + sol
        return None

    sol = search(target, 0)
    return tuple(sol) if sol is not None else None


def _hilbert_basis_coords(coords, r, face_sets, facets):
    """Hilbert basis of the cone in Z^r given by extremal rays (lattice =
    all of Z^r in these coordinates)."""
    if r == 0:
        return ()
    simplices = _pulling_triangulation(coords, r, face_sets)
    candidates = set(coords)
    for simplex in simplices:
        w = la.mat(simplex)
        for p in _parallelepiped_points(w, r):
            if not la.is_zero(p):
                candidates.add(p)
    cand = sorted(candidates)

    def in_monoid(v):
        return all(la.dot(u, v) >= 0 for u in facets)

    basis = []
    for x in cand:
        redundant = False
        for y in cand:
            if y == x:
                continue
            d = la.vsub(x, y)
            if la.is_zero(d):
                continue
            if in_monoid(d):
                redundant = True
                break
        if not redundant:
            basis.append(x)
    return tuple(basis)


def _pulling_triangulation(coords, r, face_sets):
    """Triangulate a full-dimensional pointed cone into simplicial
    subcones on the same rays (pulling triangulation, lex-first vertex)."""
    index_of = {c: i for i, c in enumerate(coords)}
    by_set = {s: s for s in face_sets}

    def dim_of(sub):
        return la.rank(la.mat([coords[i] for i in sub])) if sub else 0

    dims = {s: dim_of(s) for s in face_sets}

    def facets_of(face_set):
        d = dims[face_set]
        return [s for s in face_sets if s < face_set and dims[s] == d - 1]

    def tri(face_set):
        members = sorted(face_set, key=lambda i: coords[i])
        d = dims[face_set]
        if len(members) == d:
            return [tuple(coords[i] for i in members)]
        v0 = members[0]
        out = []
        for f in facets_of(face_set):
            if v0 in f:
                continue
            for s in tri(f):
                out.append(s + (coords[v0],))
        return out

    top = frozenset(range(len(coords)))
    return tri(top)


def _parallelepiped_points(w, r):
    """Lattice points of {lam @ w : 0 <= lam_i < 1} for a nonsingular
    integer r x r matrix w."""
    u, d, v = la.smith_normal_form(w)
    diag = [d[i][i] for i in range(r)]
    assert all(x != 0 for x in diag)
    v_inv = la.inverse_q(v)
    w_inv = la.inverse_q(w)
    points = set()
    for z in itertools.product(*[range(x) for x in diag]):
        x = la.apply_row(z, v_inv)
        x = tuple(int(e) for e in x)
        lam = la.apply_row(x, w_inv)
        frac = tuple(f - (f.numerator // f.denominator) for f in
                     (Fraction(t) for t in lam))
        p = la.apply_row(frac, w)
        points.add(tuple(int(e) for e in p))
    return points


@dataclass(frozen=True)
class Face:
    """A face of a toric monoid, with a supporting functional: an ambient
    integer functional vanishing on the face and positive on the rest of
    the parent's extremals."""
    monoid: ToricMonoid
    parent: ToricMonoid
    generator_indices: Tuple[int, ...]
    functional: Vec


@dataclass(frozen=True)
class MonoidHom:
    """A monoid homomorphism induced by an integer matrix on the ambient
    lattices, acting on row vectors by right multiplication."""
    source: ToricMonoid
    target: ToricMonoid
    matrix: Mat

    def __post_init__(self):
        rs, cs = la.shape(self.matrix)
        assert rs == self.source.ambient_dim, "matrix rows mismatch source"
        assert rs == 0 or cs == self.target.ambient_dim, \
            "matrix cols mismatch target"

    def apply(self, v) -> Vec:
        if not self.matrix:
            return la.zeros(self.target.ambient_dim)
        return la.apply_row(v, self.matrix)

    def validate(self) -> None:
        for h in self.source.hilbert_basis():
            img = self.apply(h)
            if not self.target.contains(img):
                raise NotInSupport(
                    f"image {img} of generator {h} is outside the target")

    def is_injective(self) -> bool:
        if self.source.dim == 0:
            return True
        m = la.mat_mul(self.source.lattice, self.matrix)
        return la.rank(m) == self.source.dim

    def image_monoid(self) -> ToricMonoid:
        """The image as a toric monoid (requires injectivity to be the
        isomorphic image)."""
        lattice = la.mat_mul(self.source.lattice, self.matrix)
        rays = [self.apply(g) for g in self.source.rays]
        return ToricMonoid.make(self.target.ambient_dim, lattice, rays)

    def compose(self, then: "MonoidHom") -> "MonoidHom":
        assert self.target.ambient_dim == then.source.ambient_dim
        return MonoidHom(self.source, then.target,
                         la.mat_mul(self.matrix, then.matrix))


def fiber_product(h1: MonoidHom, h2: MonoidHom) -> ToricMonoid:
    """The fiber product of h1: s1 -> t and h2: s2 -> t, as a toric monoid
    in the concatenated ambient space.

    The lattice is (N1 x N2) cap ker(h1 - h2), saturated inside N1 x N2,
    and the cone is (supp s1 x supp s2) cap the same subspace.
    """
    s1, s2 = h1.source, h2.source
    assert h1.target.ambient_dim == h2.target.ambient_dim
    r1, r2 = s1.dim, s2.dim
    d1, d2 = s1.ambient_dim, s2.ambient_dim
    if r1 == 0 and r2 == 0:
        return ToricMonoid.trivial(d1 + d2)
    m1 = la.mat_mul(s1.lattice, h1.matrix) if r1 else ()
    m2 = la.mat_mul(s2.lattice, h2.matrix) if r2 else ()
    stacked = la.mat(list(m1) + [tuple(-x for x in row) for row in m2])
    kern = la.saturated_kernel(stacked)  # rows (x, y) in Z^(r1+r2)
    if not kern:
        return ToricMonoid.trivial(d1 + d2)
    big_lattice = tuple(row + la.zeros(d2) for row in s1.lattice) + \
        tuple(la.zeros(d1) + row for row in s2.lattice)
    # Cone: product of the two support cones, cut by the kernel subspace.
    facets1 = [u + la.zeros(r2) for u in s1.facet_normals()]
    facets2 = [la.zeros(r1) + u for u in s2.facet_normals()]
    ray_coords = _cone_section_rays(la.mat(facets1 + facets2), kern, r1 + r2)
    if not ray_coords:
        return ToricMonoid.trivial(d1 + d2)
    span = _saturated_span(ray_coords, r1 + r2)
    # Restrict the equalizer lattice to the span of the section cone so
    # that the canonical span condition holds.
    lattice = la.mat_mul(span, big_lattice)
    rays = [la.apply_row(c, big_lattice) for c in ray_coords]
    return ToricMonoid.make(d1 + d2, lattice, rays)
