"""Dense exact linear algebra over Fraction, sized for desk-scale polyhedra.

Vectors are tuples of Fractions, matrices are tuples of row tuples.  No
floating point anywhere; everything here is used by the polyhedral kernel
where a single rounding error would corrupt combinatorial conclusions.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

Vector = tuple[Fraction, ...]
Matrix = tuple[Vector, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def vec(values) -> Vector:
    return tuple(Fraction(v) for v in values)


def dot(a, b) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), ZERO)


def vadd(a, b) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a, b) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def vscale(c, a) -> Vector:
    c = Fraction(c)
    return tuple(c * x for x in a)


def is_zero(a) -> bool:
    return all(x == 0 for x in a)


def primitive(a) -> Vector:
    """Scale a rational vector by a positive factor to a primitive integer vector."""
    if is_zero(a):
        return tuple(ZERO for _ in a)
    lcm = 1
    for x in a:
        d = x.denominator
        lcm = lcm // gcd(lcm, d) * d
    ints = [int(x * lcm) for x in a]
    g = 0
    for n in ints:
        g = gcd(g, abs(n))
    return tuple(Fraction(n // g) for n in ints)


def sign_canonical(a) -> Vector:
    """Primitive vector with first nonzero entry positive (for line directions)."""
    p = primitive(a)
    for x in p:
        if x != 0:
            return p if x > 0 else tuple(-y for y in p)
    return p


def rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form (in place on a copy); returns (rref, pivot columns)."""
    m = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(rows) -> int:
    rows = [list(r) for r in rows if not is_zero(r)]
    if not rows:
        return 0
    _, pivots = rref(rows)
    return len(pivots)


def solve(a_rows, b) -> Vector | None:
    """One solution of A x = b, or None if inconsistent (ignores non-uniqueness)."""
    aug = [list(r) + [Fraction(bv)] for r, bv in zip(a_rows, b)]
    if not aug:
        return ()
    n = len(a_rows[0])
    m, pivots = rref(aug)
    for row in m:
        if is_zero(row[:-1]) and row[-1] != 0:
            return None
    x = [ZERO] * n
    for i, c in enumerate(pivots):
        if c == n:
            return None
        x[c] = m[i][-1]
    return tuple(x)


def solve_unique(a_rows, b) -> Vector | None:
    """Unique solution of A x = b, or None if inconsistent or underdetermined."""
    if not a_rows:
        return None
    n = len(a_rows[0])
    x = solve(a_rows, b)
    if x is None:
        return None
    if rank(a_rows) < n:
        return None
    return x


def nullspace(a_rows, n: int | None = None) -> list[Vector]:
    """Basis of {x : A x = 0}."""
    rows = [list(r) for r in a_rows]
    if n is None:
        n = len(rows[0]) if rows else 0
    if not rows:
        return [tuple(ONE if j == i else ZERO for j in range(n)) for i in range(n)]
    m, pivots = rref(rows)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [ZERO] * n
        v[fc] = ONE
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(tuple(v))
    return basis


def inverse(a_rows) -> Matrix | None:
    """Inverse of a square matrix, or None if singular."""
    n = len(a_rows)
    aug = [list(r) + [ONE if j == i else ZERO for j in range(n)] for i, r in enumerate(a_rows)]
    m, pivots = rref(aug)
    if pivots != list(range(n)):
        return None
    return tuple(tuple(row[n:]) for row in m)


def det(a_rows) -> Fraction:
    """Determinant by fraction-free-ish Gaussian elimination."""
    n = len(a_rows)
    m = [list(r) for r in a_rows]
    result = ONE
    for c in range(n):
        pr = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pr is None:
            return ZERO
        if pr != c:
            m[c], m[pr] = m[pr], m[c]
            result = -result
        result *= m[c][c]
        inv = ONE / m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return result


def affine_rank(points) -> int:
    """Dimension of the affine hull of a set of points (-1 for the empty set)."""
    pts = list(points)
    if not pts:
        return -1
    base = pts[0]
    return rank([vsub(p, base) for p in pts[1:]])
