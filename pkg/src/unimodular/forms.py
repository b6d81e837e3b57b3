"""Unimodular symmetric bilinear forms over Z with exact invariants.

A form is a symmetric integer Gram matrix.  The standard builders
assemble block-diagonal forms from <1>, <-1>, the hyperbolic plane U
and the even rank-8 block E8; those are unimodular by construction.
Inertia, parity and the definiteness class are computed by exact
rational symmetric reduction, never floating point, so they are
bit-exact at any rank.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from math import gcd

from . import _linalg as la

EVEN = "even"
ODD = "odd"

DEFINITE = "definite"
NEARLY_DEFINITE = "nearly_definite"
STRONGLY_INDEFINITE = "strongly_indefinite"

U_GRAM = ((0, 1), (1, 0))

# E8 as a Cartan matrix, Bourbaki node numbering: chain 1-3-4-5-6-7-8
# with the branch node 2 attached to node 4.  Even, positive definite,
# determinant 1.
_E8_EDGES = ((1, 3), (2, 4), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8))


def _build_e8() -> tuple:
    m = [[0] * 8 for _ in range(8)]
    for i in range(8):
        m[i][i] = 2
    for i, j in _E8_EDGES:
        m[i - 1][j - 1] = -1
        m[j - 1][i - 1] = -1
    return tuple(tuple(row) for row in m)


E8_GRAM = _build_e8()


class DegenerateFormError(ValueError):
    """A singular Gram matrix was used where a nondegenerate form is required."""


@dataclass(frozen=True)
class FormInvariants:
    """Rank, inertia, parity and definiteness class of a nondegenerate form."""

    rank: int
    b_plus: int
    b_minus: int
    signature: int
    parity: str
    definiteness: str

    def __post_init__(self):
        if self.rank != self.b_plus + self.b_minus:
            raise ValueError("rank must equal b_plus + b_minus")
        if self.signature != self.b_plus - self.b_minus:
            raise ValueError("signature must equal b_plus - b_minus")
        if self.parity not in (EVEN, ODD):
            raise ValueError(f"bad parity {self.parity!r}")
        expected = _definiteness(self.b_plus, self.b_minus)
        if self.definiteness != expected:
            raise ValueError(f"definiteness should be {expected!r}")

    @property
    def is_indefinite(self) -> bool:
        return min(self.b_plus, self.b_minus) >= 1

    @property
    def automorphism_group_is_finite(self) -> bool:
        """Finite isometry group: definite forms and indefinite rank-2 forms.

        Kept separate from ``definiteness``: a rank-2 indefinite form is
        "nearly definite" by the min(b+, b-) convention yet still has a
        finite group.
        """
        return self.definiteness == DEFINITE or self.rank == 2


def _definiteness(b_plus: int, b_minus: int) -> str:
    m = min(b_plus, b_minus)
    if m == 0:
        return DEFINITE
    if m == 1:
        return NEARLY_DEFINITE
    return STRONGLY_INDEFINITE


class GramForm:
    """A symmetric integer Gram matrix with cached exact invariants."""

    def __init__(self, gram):
        g = la.as_int_matrix(gram)
        n = len(g)
        if any(len(row) != n for row in g):
            raise ValueError("Gram matrix must be square")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(i)):
            raise ValueError("Gram matrix must be symmetric")
        self.gram = g
        self.dim = n

    def __eq__(self, other):
        return isinstance(other, GramForm) and self.gram == other.gram

    def __hash__(self):
        return hash(self.gram)

    def __repr__(self):
        return f"GramForm(dim={self.dim}, gram={self.gram!r})"

    @functools.cached_property
    def det(self) -> int:
        return la.int_det(self.gram)

    @property
    def is_unimodular(self) -> bool:
        return abs(self.det) == 1

    def _check_vector(self, v) -> tuple:
        v = tuple(int(x) for x in v)
        if len(v) != self.dim:
            raise ValueError(f"vector length {len(v)} != form rank {self.dim}")
        return v

    def dot(self, u, v) -> int:
        u = self._check_vector(u)
        v = self._check_vector(v)
        return sum(u[i] * self.gram[i][j] * v[j]
                   for i in range(self.dim) for j in range(self.dim))

    def norm(self, v) -> int:
        """Value of the quadratic form: v . v."""
        v = self._check_vector(v)
        gv = la.matvec(self.gram, v)
        return sum(x * y for x, y in zip(v, gv))

    def is_characteristic(self, v) -> bool:
        """v . y == y . y (mod 2) for all y; checking basis vectors suffices."""
        v = self._check_vector(v)
        gv = la.matvec(self.gram, v)
        return all((gv[i] - self.gram[i][i]) % 2 == 0 for i in range(self.dim))

    @functools.cached_property
    def invariants(self) -> FormInvariants:
        _, diag = la.symmetric_diagonalization(self.gram)
        if any(d == 0 for d in diag):
            raise DegenerateFormError(
                "degenerate form: Gram matrix has determinant 0")
        b_plus = sum(1 for d in diag if d > 0)
        b_minus = sum(1 for d in diag if d < 0)
        parity = EVEN if all(self.gram[i][i] % 2 == 0
                             for i in range(self.dim)) else ODD
        return FormInvariants(
            rank=self.dim,
            b_plus=b_plus,
            b_minus=b_minus,
            signature=b_plus - b_minus,
            parity=parity,
            definiteness=_definiteness(b_plus, b_minus),
        )

    @functools.cached_property
    def _diagonalization(self):
        """Orthogonal rational basis, positives first.

        Returns (basis_rows, p, p_inv, b_plus) where basis_rows are
        primitive integer vectors with pairwise dot 0 and nonzero norm,
        p is the column matrix of that basis and p_inv its exact
        rational inverse.
        """
        basis, diag = la.symmetric_diagonalization(self.gram)
        if any(d == 0 for d in diag):
            raise DegenerateFormError(
                "degenerate form: Gram matrix has determinant 0")
        order = [i for i in range(self.dim) if diag[i] > 0] + \
                [i for i in range(self.dim) if diag[i] < 0]
        rows = tuple(la.primitive_int_vector(basis[i]) for i in order)
        p = la.transpose(rows)
        p_inv = la.inverse(p)
        b_plus = sum(1 for d in diag if d > 0)
        return rows, p, p_inv, b_plus


@dataclass(frozen=True)
class FormSpec:
    """Block recipe m<1> + n<-1> + pU + qE8 (q < 0 means |q| copies of -E8)."""

    m: int = 0
    n: int = 0
    p: int = 0
    q: int = 0

    def __post_init__(self):
        if self.m < 0 or self.n < 0 or self.p < 0:
            raise ValueError("block counts m, n, p must be nonnegative")
        if self.rank == 0:
            raise ValueError("empty form spec (rank 0)")

    @property
    def rank(self) -> int:
        return self.m + self.n + 2 * self.p + 8 * abs(self.q)

    @property
    def signature(self) -> int:
        return self.m - self.n + 8 * self.q

    @property
    def parity(self) -> str:
        return ODD if (self.m or self.n) else EVEN

    def build(self) -> GramForm:
        return make_standard(m=self.m, n=self.n, p=self.p, q=self.q)


def make_standard(m: int = 0, n: int = 0, p: int = 0, q: int = 0) -> GramForm:
    """Block-diagonal standard form: m<1>, then n<-1>, then p copies of U,
    then |q| copies of E8 (negated when q < 0)."""
    spec = FormSpec(m=m, n=n, p=p, q=q)
    dim = spec.rank
    g = [[0] * dim for _ in range(dim)]
    pos = 0
    for _ in range(m):
        g[pos][pos] = 1
        pos += 1
    for _ in range(n):
        g[pos][pos] = -1
        pos += 1
    for _ in range(p):
        g[pos][pos + 1] = 1
        g[pos + 1][pos] = 1
        pos += 2
    sign = 1 if q > 0 else -1
    for _ in range(abs(q)):
        for i in range(8):
            for j in range(8):
                g[pos + i][pos + j] = sign * E8_GRAM[i][j]
        pos += 8
    return GramForm(g)


def recognize_standard(form: GramForm) -> FormSpec | None:
    """Match a Gram matrix against the exact block layout of make_standard.

    Returns the FormSpec if the matrix is bit-identical to a builder
    output, else None.  No isometry testing is attempted.
    """
    g = form.gram
    dim = form.dim
    i = 0
    m = 0
    while i < dim and g[i][i] == 1 and all(g[i][j] == 0 for j in range(dim) if j != i):
        m += 1
        i += 1
    n = 0
    while i < dim and g[i][i] == -1 and all(g[i][j] == 0 for j in range(dim) if j != i):
        n += 1
        i += 1
    p = 0
    while i + 1 < dim and g[i][i] == 0 and g[i][i + 1] == 1:
        p += 1
        i += 2
    rest = dim - i
    if rest % 8 != 0:
        return None
    blocks = rest // 8
    q = 0
    if blocks:
        sign = 1 if g[i][i] > 0 else -1
        q = sign * blocks
    try:
        spec = FormSpec(m=m, n=n, p=p, q=q)
    except ValueError:
        return None
    if spec.build().gram != g:
        return None
    return spec


def canonical_representative(inv: FormInvariants) -> GramForm:
    """The unique standard indefinite form with the given rank, signature
    and parity: m<1> + n<-1> for odd type, pU + qE8 for even type."""
    if not inv.is_indefinite:
        raise ValueError(
            "classification by (rank, signature, parity) applies only to "
            "indefinite forms")
    if inv.parity == ODD:
        return make_standard(m=inv.b_plus, n=inv.b_minus)
    if inv.signature % 8 != 0:
        raise ValueError(
            "no even unimodular form exists with signature not divisible by 8")
    q = inv.signature // 8
    remaining = inv.rank - 8 * abs(q)
    if remaining <= 0 or remaining % 2 != 0:
        raise ValueError(
            f"no indefinite even unimodular form of rank {inv.rank} and "
            f"signature {inv.signature}")
    return make_standard(p=remaining // 2, q=q)


def is_primitive(v) -> bool:
    """True when the coordinates have gcd 1.  Rejects the zero vector."""
    v = la.as_int_vector(v)
    if all(x == 0 for x in v):
        raise ValueError("zero vector is neither primitive nor imprimitive")
    g = 0
    for x in v:
        g = gcd(g, x)
    return g == 1


def is_full_isotropic_plane(form: GramForm, rows) -> bool:
    """Two vectors spanning a saturated rank-2 sublattice on which the
    form vanishes identically.

    Checks (a) all three pairwise products vanish, (b) the 2 x dim
    coordinate matrix has rank 2, (c) both elementary divisors are 1,
    i.e. the span is full: (span tensor Q) meet Z^dim equals the span.
    """
    r1, r2 = (form._check_vector(r) for r in rows)
    if form.norm(r1) != 0 or form.norm(r2) != 0 or form.dot(r1, r2) != 0:
        return False
    # gcd of 2x2 minors equals d1*d2; it is 1 iff rank 2 and saturated
    return la.minors2_gcd((r1, r2)) == 1


@functools.lru_cache(maxsize=1)
def e8_roots() -> tuple:
    """All 240 norm-2 vectors of E8 in the Cartan basis.

    Generated by closing the simple roots (the standard basis vectors)
    under the simple reflections; sorted for determinism.
    """
    form = GramForm(E8_GRAM)
    simple = [tuple(1 if i == j else 0 for j in range(8)) for i in range(8)]
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for v in frontier:
            gv = la.matvec(E8_GRAM, v)
            for j in range(8):
                w = tuple(v[t] - gv[j] * simple[j][t] for t in range(8))
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    roots = tuple(sorted(seen))
    assert len(roots) == 240 and all(form.norm(r) == 2 for r in roots)
    return roots
