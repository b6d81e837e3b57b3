"""Exact dense linear algebra over Z and Q for small matrices.

Matrices are tuples of tuples, row-major; vectors are flat tuples.
Integer work stays in Python ints, rational work uses
fractions.Fraction, so every result is bit-exact at any size.  All
matrices in this package are tiny (rank <= ~30), so the plain O(n^3)
algorithms are the right tool.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def as_int_matrix(rows) -> tuple:
    m = tuple(tuple(int(x) for x in row) for row in rows)
    if not m or any(len(r) != len(m[0]) for r in m):
        raise ValueError("matrix rows must be nonempty and of equal length")
    return m


def as_int_vector(coords) -> tuple:
    v = tuple(int(x) for x in coords)
    if not v:
        raise ValueError("empty vector")
    return v


def identity(n: int) -> tuple:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(a) -> tuple:
    return tuple(zip(*a))


def matmul(a, b) -> tuple:
    cols = tuple(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a
    )


def matvec(a, v) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def vec_sub(u, v) -> tuple:
    return tuple(x - y for x, y in zip(u, v))


def vec_add(u, v) -> tuple:
    return tuple(x + y for x, y in zip(u, v))


def vec_scale(c, v) -> tuple:
    return tuple(c * x for x in v)


def det(a) -> Fraction:
    """Exact determinant via fraction-based Gaussian elimination."""
    n = len(a)
    m = [[Fraction(x) for x in row] for row in a]
    d = Fraction(1)
    for c in range(n):
        pivot = next((r for r in range(c, n) if m[r][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            d = -d
        d *= m[c][c]
        inv = 1 / m[c][c]
        for r in range(c + 1, n):
            if m[r][c]:
                f = m[r][c] * inv
                for t in range(c, n):
                    m[r][t] -= f * m[c][t]
    return d


def int_det(a) -> int:
    d = det(a)
    if d.denominator != 1:
        raise ValueError("matrix determinant is not an integer")
    return d.numerator


def inverse(a) -> tuple:
    """Exact inverse over Q (Gauss-Jordan).  Raises on singular input."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(1 if i == j else 0) for j in range(n)]
         for i, row in enumerate(a)]
    for c in range(n):
        pivot = next((r for r in range(c, n) if m[r][c] != 0), None)
        if pivot is None:
            raise ValueError("matrix is singular")
        m[c], m[pivot] = m[pivot], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return tuple(tuple(row[n:]) for row in m)


def integer_inverse(a) -> tuple:
    """Inverse of an integer matrix with det +-1, returned over Z."""
    inv = inverse(a)
    out = []
    for row in inv:
        ints = []
        for x in row:
            if x.denominator != 1:
                raise ValueError("matrix is not invertible over Z")
            ints.append(x.numerator)
        out.append(tuple(ints))
    return tuple(out)


def hermite_normal_form(rows) -> tuple:
    """Row Hermite normal form of an integer matrix.

    Pivots are positive, entries above a pivot are reduced into
    [0, pivot), zero rows are dropped.  The result is the unique
    canonical basis of the row lattice, so it doubles as a dedup key
    for sublattices.
    """
    m = [list(map(int, row)) for row in rows]
    if not m:
        return ()
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        while True:
            nonzero = [i for i in range(r, len(m)) if m[i][c] != 0]
            if not nonzero:
                break
            i0 = min(nonzero, key=lambda i: (abs(m[i][c]), i))
            m[r], m[i0] = m[i0], m[r]
            done = True
            for i in range(r + 1, len(m)):
                if m[i][c]:
                    f = m[i][c] // m[r][c]
                    m[i] = [x - f * y for x, y in zip(m[i], m[r])]
                    if m[i][c]:
                        done = False
            if done:
                break
        if r < len(m) and m[r][c] != 0:
            if m[r][c] < 0:
                m[r] = [-x for x in m[r]]
            for i in range(r):
                f = m[i][c] // m[r][c]
                if f:
                    m[i] = [x - f * y for x, y in zip(m[i], m[r])]
            r += 1
    return tuple(tuple(row) for row in m if any(row))


def minors2_gcd(rows) -> int:
    """gcd of all 2x2 minors of a 2-row integer matrix (0 if rank < 2)."""
    r0, r1 = rows
    g = 0
    n = len(r0)
    for i in range(n):
        for j in range(i + 1, n):
            g = gcd(g, r0[i] * r1[j] - r0[j] * r1[i])
    return g


def primitive_int_vector(v) -> tuple:
    """Scale a nonzero rational vector to a primitive integer vector.

    The sign is normalized so the first nonzero coordinate is positive.
    """
    fr = [Fraction(x) for x in v]
    if all(x == 0 for x in fr):
        raise ValueError("zero vector has no primitive representative")
    denom = 1
    for x in fr:
        denom = denom * x.denominator // gcd(denom, x.denominator)
    ints = [int(x * denom) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x != 0)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def symmetric_diagonalization(g) -> tuple:
    """Congruence-diagonalize a symmetric matrix over Q.

    Returns (basis, diag): the rows of ``basis`` are rational vectors
    b_i with b_i G b_j^T = 0 for i != j, and diag[i] = b_i G b_i^T.
    Zero entries in ``diag`` occur exactly when G is degenerate.

    Zero pivots with a nonzero off-diagonal partner are repaired by
    adding the partner basis vector (with whichever sign leaves a
    nonzero diagonal; one of the two always does).
    """
    n = len(g)
    a = [[Fraction(x) for x in row] for row in g]
    basis = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]

    def add_to(i, j, c):
        # basis_i += c * basis_j, with the congruent update of a
        basis[i] = [x + c * y for x, y in zip(basis[i], basis[j])]
        a[i] = [x + c * y for x, y in zip(a[i], a[j])]
        for t in range(n):
            a[t][i] += c * a[t][j]

    for i in range(n):
        if a[i][i] == 0:
            j = next((t for t in range(i + 1, n) if a[i][t] != 0), None)
            if j is not None:
                if 2 * a[i][j] + a[j][j] != 0:
                    add_to(i, j, Fraction(1))
                else:
                    add_to(i, j, Fraction(-1))
        if a[i][i] == 0:
            continue
        for j in range(i + 1, n):
            if a[i][j] != 0:
                add_to(j, i, -a[i][j] / a[i][i])
    return tuple(tuple(row) for row in basis), tuple(a[i][i] for i in range(n))
