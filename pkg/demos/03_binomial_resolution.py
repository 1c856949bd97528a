"""Resolving interior binomial subvarieties.

A binomial system records equations x^alpha = x^beta near a corner of
the local model.  Its zero set carries a monoidal complex; a compatible
smooth refinement of the ambient complex lifts the zero set to a
product-type submanifold, with every transformed exponent vector of one
sign in every chart.
"""

from blowup.binomial import (boundary_faces, normal_form, resolve,
                             universal_resolution, variety_complex)
from blowup.errors import NotSmooth

# The diagonal x1 = x2.
diag = normal_form([((1, 0), (0, 1))])
print("diagonal gammas:", diag.gammas)
res = universal_resolution(diag)
print("universal:", res.universal)
print("charts and signs:", dict(sorted(res.chart_signs.items())))

# The cusp x1^2 = x2^3: the variety complex carries the monoid on the
# ray (3, 2), matching the parametrization t -> (t^3, t^2).
cusp = normal_form([((2, 0), (0, 3))])
vc = boundary_faces(cusp)
print("\ncusp faces:", sorted(vc.faces))
print("corner monoid rays:", vc.faces[(0, 1)].monoid.rays)
res = universal_resolution(cusp)
tops = res.refinement.members_over("H1&H2")
rays = {g for e in tops
        for g in res.refinement.morphism.image_in(e, "H1&H2").rays}
print("refinement rays over the corner:", sorted(rays))

# x1 x2 = x3 x4: the variety complex is a cone over a square, so there
# is no universal resolution and a smooth refinement must be chosen.
add = normal_form([((1, 1, 0, 0), (0, 0, 1, 1))])
try:
    universal_resolution(add)
except NotSmooth as e:
    print("\nno universal resolution:", e)
pd, _ = variety_complex(add)
print("variety complex smooth:", pd.is_smooth())
res = resolve(add)  # uses the natural smooth refinement
print("resolved; lifted elements:", len(res.lifted))
