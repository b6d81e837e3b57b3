"""Integer isometries of a Gram form.

Construction (reflections, hyperbolic-block generators), exact group
operations, and the two real invariants that separate the connected
components of the ambient real orthogonal group: the determinant pair
from a fixed rational diagonalizing basis, and the spinor norm from a
reflection factorization.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import _linalg as la
from .forms import GramForm, make_standard


class FormMismatchError(ValueError):
    """Operands live on different Gram forms."""


class ReflectionError(ValueError):
    """The requested reflection is not defined over Z."""


class Isometry:
    """An integer matrix g with g^T G g = G, acting on coordinate columns."""

    def __init__(self, form: GramForm, mat, _trusted: bool = False):
        m = la.as_int_matrix(mat)
        if len(m) != form.dim or any(len(row) != form.dim for row in m):
            raise ValueError("matrix shape does not match the form rank")
        if not _trusted:
            if la.matmul(la.matmul(la.transpose(m), form.gram), m) != form.gram:
                raise ValueError("matrix does not preserve the Gram matrix")
        self.form = form
        self.mat = m

    @classmethod
    def identity(cls, form: GramForm) -> "Isometry":
        return cls(form, la.identity(form.dim), _trusted=True)

    @property
    def det(self) -> int:
        d = la.int_det(self.mat)
        assert d in (1, -1)
        return d

    def __mul__(self, other: "Isometry") -> "Isometry":
        if not isinstance(other, Isometry):
            return NotImplemented
        if self.form.gram != other.form.gram:
            raise FormMismatchError("cannot compose isometries of different forms")
        return Isometry(self.form, la.matmul(self.mat, other.mat), _trusted=True)

    def inverse(self) -> "Isometry":
        return Isometry(self.form, la.integer_inverse(self.mat), _trusted=True)

    def __pow__(self, k: int) -> "Isometry":
        if k < 0:
            return self.inverse() ** (-k)
        out = Isometry.identity(self.form)
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, v) -> tuple:
        v = self.form._check_vector(v)
        return la.matvec(self.mat, v)

    def __eq__(self, other):
        return (isinstance(other, Isometry)
                and self.form.gram == other.form.gram
                and self.mat == other.mat)

    def __hash__(self):
        return hash((self.form.gram, self.mat))

    def __repr__(self):
        return f"Isometry(dim={self.form.dim}, mat={self.mat!r})"

    def component_invariant(self) -> tuple:
        return component_invariant(self)

    def spinor_norm(self) -> int:
        return spinor_norm(self)


def reflection(form: GramForm, gamma) -> Isometry:
    """The reflection x -> x - (2(x.gamma)/Q(gamma)) gamma as an integer matrix.

    Defined whenever Q(gamma) != 0 and Q(gamma) divides 2(e.gamma) for
    every basis vector e (always true for Q(gamma) in {1, -1, 2, -2}).
    An involution: fixes the orthogonal complement of gamma, negates gamma.
    """
    gamma = form._check_vector(gamma)
    q = form.norm(gamma)
    if q == 0:
        raise ReflectionError("cannot reflect in an isotropic vector")
    g_gamma = la.matvec(form.gram, gamma)
    coeffs = []
    for j in range(form.dim):
        num = 2 * g_gamma[j]
        if num % q != 0:
            raise ReflectionError(
                f"reflection is not integral: Q(gamma)={q} does not divide "
                f"2(e_{j}.gamma)={num}")
        coeffs.append(num // q)
    mat = tuple(
        tuple((1 if i == j else 0) - coeffs[j] * gamma[i] for j in range(form.dim))
        for i in range(form.dim)
    )
    return Isometry(form, mat, _trusted=True)


def _rational_reflection(gram, gamma, q):
    """Reflection matrix over Q in a vector of nonzero norm q."""
    n = len(gram)
    g_gamma = la.matvec(gram, gamma)
    return tuple(
        tuple((1 if i == j else 0) - Fraction(2 * g_gamma[j], 1) * gamma[i] / q
              for j in range(n))
        for i in range(n)
    )


@dataclass(frozen=True)
class GeneratorSet:
    """Named generators of a subgroup of the isometry group of one form."""

    form: GramForm
    items: tuple

    def __post_init__(self):
        for label, iso in self.items:
            if iso.form.gram != self.form.gram:
                raise FormMismatchError(f"generator {label!r} lives on another form")

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    @property
    def labels(self) -> tuple:
        return tuple(label for label, _ in self.items)

    def __getitem__(self, label: str) -> Isometry:
        for lab, iso in self.items:
            if lab == label:
                return iso
        raise KeyError(label)

    def isometries(self) -> tuple:
        return tuple(iso for _, iso in self.items)

    def word(self, labels) -> Isometry:
        """Compose generators left to right: word(["a", "b"]) = a * b."""
        out = Isometry.identity(self.form)
        for label in labels:
            out = out * self[label]
        return out


def _mapped_identity(form: GramForm, images: dict) -> Isometry:
    """Isometry sending basis vector k to images[k], all others fixed."""
    n = form.dim
    cols = {k: form._check_vector(v) for k, v in images.items()}
    mat = tuple(
        tuple(cols[j][i] if j in cols else (1 if i == j else 0) for j in range(n))
        for i in range(n)
    )
    return Isometry(form, mat)


def wall_generators(n: int) -> GeneratorSet:
    """The standard generators of the isometry group of nU.

    Basis order (x_1, y_1, ..., x_n, y_n).  For each block i:
    n_i negates (x_i, y_i), s_i swaps x_i and y_i; p_ij exchanges
    blocks i and j; a_ij sends x_i -> x_i + x_j and y_j -> y_j - y_i.
    """
    if n < 1:
        raise ValueError("need at least one hyperbolic block")
    form = make_standard(p=n)

    def x(i):
        return 2 * (i - 1)

    def y(i):
        return 2 * (i - 1) + 1

    def e(k, sign=1):
        return tuple(sign if t == k else 0 for t in range(form.dim))

    items = []
    for i in range(1, n + 1):
        items.append((f"n{i}", _mapped_identity(form, {x(i): e(x(i), -1),
                                                       y(i): e(y(i), -1)})))
    for i in range(1, n + 1):
        items.append((f"s{i}", _mapped_identity(form, {x(i): e(y(i)),
                                                       y(i): e(x(i))})))
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            items.append((f"p{i}{j}", _mapped_identity(form, {
                x(i): e(x(j)), y(i): e(y(j)), x(j): e(x(i)), y(j): e(y(i))})))
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                continue
            xi_img = tuple((1 if t == x(i) else 0) + (1 if t == x(j) else 0)
                           for t in range(form.dim))
            yj_img = tuple((1 if t == y(j) else 0) - (1 if t == y(i) else 0)
                           for t in range(form.dim))
            items.append((f"a{i}{j}", _mapped_identity(form, {x(i): xi_img,
                                                              y(j): yj_img})))
    return GeneratorSet(form, tuple(items))


def component_invariant(g: Isometry) -> tuple:
    """(eps_det, eps_plus): determinant sign and orientation behavior on a
    maximal positive-definite subspace.

    eps_plus is the sign of the determinant of the upper-left block of g
    written in the form's cached rational basis that diagonalizes the
    Gram matrix with positive entries first.  The block is never
    singular for an isometry of an indefinite form, and the pair is
    constant on connected components of the real orthogonal group and
    multiplicative.
    """
    inv = g.form.invariants
    if not inv.is_indefinite:
        raise ValueError("component invariant degenerates on definite forms")
    _, p, p_inv, b_plus = g.form._diagonalization
    conj = la.matmul(la.matmul(p_inv, g.mat), p)
    block = tuple(row[:b_plus] for row in conj[:b_plus])
    d = la.det(block)
    assert d != 0
    return (g.det, 1 if d > 0 else -1)


def spinor_factorization(g: Isometry) -> tuple:
    """Factor g into reflections over Q (Cartan-Dieudonne pivoting).

    Walks a fixed orthogonal rational basis, reflecting each basis
    vector onto its current image; when the difference vector is
    isotropic the step splits into two reflections, so up to 2*dim
    factors can occur.  Reflection vectors are returned as primitive
    integer vectors; the ordered matrix product of the corresponding
    rational reflections reproduces g exactly.
    """
    form = g.form
    basis, _, _, _ = form._diagonalization
    gram = form.gram
    h = tuple(tuple(Fraction(x) for x in row) for row in g.mat)
    factors = []

    def apply_reflection(w):
        nonlocal h
        w = la.primitive_int_vector(w)
        q = form.norm(w)
        factors.append(w)
        h = la.matmul(_rational_reflection(gram, w, q), h)

    for u in basis:
        v = la.matvec(h, u)
        if v == tuple(Fraction(x) for x in u):
            continue
        diff = la.vec_sub(v, u)
        qd = sum(a * b for a, b in zip(diff, la.matvec(gram, diff)))
        if qd != 0:
            apply_reflection(diff)
        else:
            # Q(v+u) = 4 Q(u) != 0: reflect v onto -u, then fix the sign
            apply_reflection(la.vec_add(v, u))
            apply_reflection(u)
    assert h == tuple(tuple(Fraction(1 if i == j else 0)
                            for j in range(form.dim)) for i in range(form.dim))
    return tuple(factors)


def spinor_norm(g: Isometry) -> int:
    """Product over a reflection factorization of sign(Q(gamma_i))."""
    out = 1
    for gamma in spinor_factorization(g):
        if g.form.norm(gamma) < 0:
            out = -out
    return out
