"""Exact integer and rational linear algebra.

Vectors are tuples of ints (or Fractions), matrices are tuples of row
tuples.  Homomorphisms act on row vectors by right multiplication, so the
image of v under m is v @ m, computed by :func:`apply_row`.  Everything here
is arbitrary precision; no floats.
"""

from fractions import Fraction
from math import gcd
from typing import Optional, Sequence, Tuple

Vec = Tuple[int, ...]
QVec = Tuple[Fraction, ...]
Mat = Tuple[Vec, ...]


def vec(entries) -> tuple:
    return tuple(entries)


def mat(rows) -> tuple:
    return tuple(tuple(r) for r in rows)


def zeros(n: int) -> Vec:
    return (0,) * n


def is_zero(v) -> bool:
    return all(x == 0 for x in v)


def vadd(a, b):
    return tuple(x + y for x, y in zip(a, b, strict=True))


def vsub(a, b):
    return tuple(x - y for x, y in zip(a, b, strict=True))


def vscale(c, v):
    return tuple(c * x for x in v)


def dot(a, b):
    return sum(x * y for x, y in zip(a, b, strict=True))


def identity(n: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def shape(m) -> Tuple[int, int]:
    return (len(m), len(m[0]) if m else 0)


def transpose(m):
    return tuple(zip(*m)) if m else ()


def mat_mul(a, b):
    """Matrix product a @ b."""
    if not a:
        return ()
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def apply_row(v, m):
    """Image of the row vector v under the matrix m, that is v @ m."""
    assert len(v) == len(m), (len(v), len(m))
    cols = len(m[0]) if m else 0
    return tuple(sum(v[i] * m[i][j] for i in range(len(v))) for j in range(cols))


def stack(*mats):
    rows = []
    for m in mats:
        rows.extend(m)
    return tuple(rows)


def block_diag(a, b):
    ra, ca = shape(a)
    rb, cb = shape(b)
    top = tuple(row + zeros(cb) for row in a)
    bot = tuple(zeros(ca) + row for row in b)
    return top + bot


def vec_gcd(v) -> int:
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    return g


def primitive(v: Vec) -> Vec:
    """v divided by the gcd of its entries.

    Raises:
        ValueError: if v is the zero vector.
    """
    g = vec_gcd(v)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in v)


def clear_denominators(v) -> Vec:
    """Scale a rational vector to a primitive integer vector."""
    fracs = [Fraction(x) for x in v]
    if all(f == 0 for f in fracs):
        raise ValueError("zero vector has no primitive representative")
    lcm = 1
    for f in fracs:
        lcm = lcm * f.denominator // gcd(lcm, f.denominator)
    return primitive(tuple(int(f * lcm) for f in fracs))


def hermite_normal_form(m: Mat) -> Tuple[Mat, Mat]:
    """Row-style Hermite normal form.

    Returns:
        (h, u) with u unimodular, u @ m == h, h in row echelon form with
        positive pivots and entries above each pivot reduced into [0, pivot).
        Zero rows of h are at the bottom.
    """
    rows, cols = shape(m)
    h = [list(r) for r in m]
    u = [list(r) for r in identity(rows)]
    pivot_row = 0
    for col in range(cols):
        # Clear the column below pivot_row with euclidean row operations.
        while True:
            nz = [i for i in range(pivot_row, rows) if h[i][col] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: (abs(h[i][col]), i))
            if i0 != pivot_row:
                h[pivot_row], h[i0] = h[i0], h[pivot_row]
                u[pivot_row], u[i0] = u[i0], u[pivot_row]
            done = True
            for i in range(pivot_row + 1, rows):
                if h[i][col] != 0:
                    q = h[i][col] // h[pivot_row][col]
                    h[i] = [x - q * y for x, y in zip(h[i], h[pivot_row])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[pivot_row])]
                    if h[i][col] != 0:
                        done = False
            if done:
                break
        if pivot_row < rows and h[pivot_row][col] != 0:
            if h[pivot_row][col] < 0:
                h[pivot_row] = [-x for x in h[pivot_row]]
                u[pivot_row] = [-x for x in u[pivot_row]]
            p = h[pivot_row][col]
            for i in range(pivot_row):
                q = h[i][col] // p
                if q:
                    h[i] = [x - q * y for x, y in zip(h[i], h[pivot_row])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[pivot_row])]
            pivot_row += 1
            if pivot_row == rows:
                break
    return mat(h), mat(u)


def row_space_basis(m: Mat) -> Mat:
    """Nonzero rows of the Hermite normal form of m (a canonical basis of
    the integer row span)."""
    h, _ = hermite_normal_form(m)
    return tuple(r for r in h if not is_zero(r))


def smith_normal_form(m: Mat) -> Tuple[Mat, Mat, Mat]:
    """Smith normal form.

    Returns:
        (u, d, v) with u, v unimodular, u @ m @ v == d, d diagonal with
        nonnegative entries satisfying d[i] | d[i+1].
    """
    rows, cols = shape(m)
    d = [list(r) for r in m]
    u = [list(r) for r in identity(rows)]
    v = [list(r) for r in identity(cols)]

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def addmul_row(dst, src, q):
        d[dst] = [x + q * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def addmul_col(dst, src, q):
        for row in d:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    n = min(rows, cols)
    for k in range(n):
        while True:
            # Find the smallest nonzero entry in the trailing block.
            best = None
            for i in range(k, rows):
                for j in range(k, cols):
                    if d[i][j] != 0 and (best is None
                                         or abs(d[i][j]) < abs(d[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            i, j = best
            if i != k:
                swap_rows(k, i)
            if j != k:
                swap_cols(k, j)
            clean = True
            for i in range(k + 1, rows):
                if d[i][k] != 0:
                    addmul_row(i, k, -(d[i][k] // d[k][k]))
                    if d[i][k] != 0:
                        clean = False
            for j in range(k + 1, cols):
                if d[k][j] != 0:
                    addmul_col(j, k, -(d[k][j] // d[k][k]))
                    if d[k][j] != 0:
                        clean = False
            if clean:
                # Enforce divisibility of the remaining block by the pivot.
                offender = None
                for i in range(k + 1, rows):
                    for j in range(k + 1, cols):
                        if d[i][j] % d[k][k] != 0:
                            offender = i
                            break
                    if offender is not None:
                        break
                if offender is None:
                    break
                addmul_row(k, offender, 1)
        if k < rows and k < cols and d[k][k] < 0:
            d[k] = [-x for x in d[k]]
            u[k] = [-x for x in u[k]]
    return mat(u), mat(d), mat(v)


def saturated_kernel(m: Mat) -> Mat:
    """Basis of the saturated left kernel {v in Z^rows : v @ m = 0}.

    The result spans ker(m) over Q and is saturated: any integer vector in
    the rational span lies in the integer span of the returned rows.
    """
    h, u = hermite_normal_form(m)
    return tuple(u[i] for i in range(len(h)) if is_zero(h[i]))


def rank(m: Mat) -> int:
    return len(row_space_basis_q(m))


def row_space_basis_q(m) -> Tuple[QVec, ...]:
    """Reduced row echelon basis of the rational row span of m."""
    rows = [[Fraction(x) for x in r] for r in m]
    basis = []
    cols = len(m[0]) if m else 0
    pivots = []
    for r in rows:
        r = list(r)
        for b, p in zip(basis, pivots):
            if r[p] != 0:
                c = r[p]
                r = [x - c * y for x, y in zip(r, b)]
        lead = next((j for j in range(cols) if r[j] != 0), None)
        if lead is None:
            continue
        c = r[lead]
        r = [x / c for x in r]
        # Clear the new pivot column in the existing rows.
        for i, b in enumerate(basis):
            if b[lead] != 0:
                f = b[lead]
                basis[i] = [x - f * y for x, y in zip(b, r)]
        basis.append(r)
        pivots.append(lead)
    order = sorted(range(len(basis)), key=lambda i: pivots[i])
    return tuple(tuple(basis[i]) for i in order)


def solve_row(v, m) -> Optional[QVec]:
    """Rational x with x @ m == v, or None if no solution exists."""
    rows, cols = shape(m)
    # Solve m^T x^T = v^T by gaussian elimination with augmented tracking.
    aug = [[Fraction(m[i][j]) for i in range(rows)] + [Fraction(v[j])]
           for j in range(cols)]
    piv = []
    r = 0
    for c in range(rows):
        p = next((i for i in range(r, len(aug)) if aug[i][c] != 0), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        scale = aug[r][c]
        aug[r] = [x / scale for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        piv.append(c)
        r += 1
    for i in range(r, len(aug)):
        if aug[i][rows] != 0:
            return None
    x = [Fraction(0)] * rows
    for i, c in enumerate(piv):
        x[c] = aug[i][rows]
    return tuple(x)


def solve_row_int(v, m) -> Optional[Vec]:
    """Integer x with x @ m == v, or None."""
    h, u = hermite_normal_form(m)
    # Express v in terms of the nonzero rows of h by forward substitution.
    nz = [i for i in range(len(h)) if not is_zero(h[i])]
    rem = [Fraction(x) for x in v]
    coeff = [0] * len(h)
    for i in nz:
        lead = next(j for j in range(len(h[i])) if h[i][j] != 0)
        if rem[lead] != 0:
            c = rem[lead] / h[i][lead]
            if c.denominator != 1:
                return None
            coeff[i] = int(c)
            rem = [x - coeff[i] * y for x, y in zip(rem, h[i])]
    if any(x != 0 for x in rem):
        return None
    return apply_row(tuple(coeff), u)


def in_row_lattice(v, m) -> bool:
    return solve_row_int(v, m) is not None


def right_kernel_q(m) -> Tuple[QVec, ...]:
    """Basis of {u : m @ u^T = 0} over Q, i.e. functionals vanishing on the
    rows of m."""
    rows, cols = shape(m)
    basis = row_space_basis_q(m)
    pivots = []
    for b in basis:
        pivots.append(next(j for j in range(cols) if b[j] != 0))
    free = [j for j in range(cols) if j not in pivots]
    out = []
    for f in free:
        u = [Fraction(0)] * cols
        u[f] = Fraction(1)
        for b, p in zip(basis, pivots):
            u[p] = -b[f]
        out.append(tuple(u))
    return tuple(out)


def det(m) -> Fraction:
    n = len(m)
    assert all(len(r) == n for r in m)
    a = [[Fraction(x) for x in r] for r in m]
    sign = 1
    result = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            sign = -sign
        result *= a[c][c]
        inv = 1 / a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return sign * result


def inverse_q(m) -> Tuple[QVec, ...]:
    """Exact inverse of a square rational matrix."""
    n = len(m)
    a = [[Fraction(x) for x in r] + [Fraction(1 if i == j else 0)
                                     for j in range(n)]
         for i, r in enumerate(m)]
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            raise ValueError("matrix is singular")
        a[c], a[p] = a[p], a[c]
        scale = a[c][c]
        a[c] = [x / scale for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return tuple(tuple(row[n:]) for row in a)


# ---------------------------------------------------------------------------
# Exact feasibility of homogeneous linear constraint systems.
#
# A system is a list of (coefficient vector, strictness) pairs meaning
# a . x > 0 (strict) or a . x >= 0.  Equalities are passed separately and
# eliminated up front by restricting to their kernel.  Solving is by
# Fourier-Motzkin elimination, which stays exact for strict inequalities:
# the combination of a lower and an upper bound is strict iff either parent
# is.  Fine for the dimensions that arise here (at most ~12).
# ---------------------------------------------------------------------------


def _fm_eliminate(constraints, dim):
    """Eliminate variables right-to-left.  Returns the per-level constraint
    lists for witness back-substitution, or None if infeasible."""
    levels = [constraints]
    current = constraints
    for k in range(dim - 1, -1, -1):
        nxt = []
        lowers = []  # (coeffs without x_k, pos coeff, strict): x_k >(=) -rest/c
        uppers = []
        for coeffs, strict in current:
            c = coeffs[k]
            rest = coeffs[:k]
            if c == 0:
                nxt.append((rest, strict))
            elif c > 0:
                lowers.append((rest, c, strict))
            else:
                uppers.append((rest, -c, strict))
        for lr, lc, ls in lowers:
            for ur, uc, us in uppers:
                # -lr/lc <(=) x_k <(=) ur/uc  ==>  lc*ur + uc*lr >(=) 0.
                combo = tuple(lc * u + uc * l
                              for l, u in zip(lr, ur, strict=True))
                nxt.append((combo, ls or us))
        # Drop duplicates (up to positive scaling) to keep growth in check.
        seen = {}
        for coeffs, strict in nxt:
            lead = next((x for x in coeffs if x != 0), None)
            if lead is None:
                key = coeffs
            else:
                s = abs(Fraction(lead))
                key = tuple(Fraction(x) / s for x in coeffs)
            seen[key] = seen.get(key, False) or strict
        current = [(k2, s) for k2, s in seen.items()]
        levels.append(current)
    for coeffs, strict in current:
        assert len(coeffs) == 0
        if strict:
            return None
    return levels


def _fm_witness(levels, dim):
    x = []
    for k in range(dim):
        level = levels[dim - 1 - k]  # constraints mentioning x_0..x_k
        lo, lo_strict = None, False
        hi, hi_strict = None, False
        for coeffs, strict in level:
            c = Fraction(coeffs[k])
            if c == 0:
                continue
            rest = -sum(Fraction(a) * b for a, b in zip(coeffs[:k], x)) / c
            if c > 0:
                if lo is None or rest > lo or (rest == lo and strict):
                    lo, lo_strict = rest, strict
            else:
                if hi is None or rest < hi or (rest == hi and strict):
                    hi, hi_strict = rest, strict
        if lo is None and hi is None:
            x.append(Fraction(0))
        elif lo is None:
            x.append(hi - 1 if hi_strict else hi)
        elif hi is None:
            x.append(lo + 1 if lo_strict else lo)
        else:
            assert lo < hi or (lo == hi and not (lo_strict or hi_strict))
            x.append((lo + hi) / 2 if (lo_strict or hi_strict) else lo)
    return tuple(x)


def lp_feasible(dim: int,
                strict: Sequence = (),
                nonneg: Sequence = (),
                zero: Sequence = ()) -> Optional[QVec]:
    """Exact feasibility of a homogeneous system of linear constraints.

    Finds x in Q^dim with a . x > 0 for a in strict, a . x >= 0 for a in
    nonneg and a . x == 0 for a in zero, or returns None if no such x
    exists.  Deterministic: elimination order is fixed (last variable
    first) and the witness is built by midpoint back-substitution.
    """
    zero = [tuple(Fraction(c) for c in z) for z in zero]
    if zero:
        int_rows = []
        for z in zero:
            lcm = 1
            for f in z:
                lcm = lcm * f.denominator // gcd(lcm, f.denominator)
            int_rows.append(tuple(int(f * lcm) for f in z))
        kernel = right_kernel_q(tuple(int_rows))
        if not kernel:
            if any(True for _ in strict):
                return None
            return tuple(Fraction(0) for _ in range(dim))
        # x = y @ kernel_rows; transform the inequality constraints.
        basis = kernel
        sub_dim = len(basis)

        def project(a):
            return tuple(sum(Fraction(a[j]) * b[j] for j in range(dim))
                         for b in basis)

        constraints = ([(project(a), True) for a in strict]
                       + [(project(a), False) for a in nonneg])
        levels = _fm_eliminate(constraints, sub_dim)
        if levels is None:
            return None
        y = _fm_witness(levels, sub_dim)
        return tuple(sum(y[i] * basis[i][j] for i in range(sub_dim))
                     for j in range(dim))
    constraints = ([(tuple(Fraction(c) for c in a), True) for a in strict]
                   + [(tuple(Fraction(c) for c in a), False) for a in nonneg])
    levels = _fm_eliminate(constraints, dim)
    if levels is None:
        return None
    return _fm_witness(levels, dim)
