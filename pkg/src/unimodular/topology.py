"""Four-manifold bookkeeping on top of the lattice layer.

The Kodaira-dimension case table, the canonical-class norm 2*chi +
3*sigma, the homological table of symplectic Calabi-Yau surfaces, and
the cohomology ring of the Kodaira-Thurston family of nilmanifolds:
its degree-2 lattice is 2U, the wedge image of degree 1 is a full
isotropic plane, and for every integer 2x2 unimodular matrix T there is
an explicit quadratic correction B making the induced diffeomorphism
candidate normalize the lattice action (up to a parity obstruction on
the translation parts, which is recorded, not hidden).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import inf

from . import _linalg as la
from .forms import GramForm, is_full_isotropic_plane, make_standard
from .isometry import Isometry, wall_generators
from .orbits import CosetCertificate, IsotropicPlane, plane_orbit_bfs


class InconsistentSignsError(ValueError):
    """The sign combination K.w = 0, K.K > 0 is covered by no case."""


@dataclass(frozen=True)
class KodairaInput:
    k_dot_omega: int
    k_squared: int
    minimal: bool = True


def kodaira_dimension(k_dot_omega: int, k_squared: int, minimal: bool = True):
    """Kodaira dimension from the signs of K.w and K.K on a minimal model.

    Returns -inf, 0, 1 or 2.  Callers with a non-minimal manifold must
    pass the minimal-model values; the combination K.w = 0 with
    K.K > 0 raises InconsistentSignsError rather than guessing.
    """
    if not minimal:
        raise ValueError("pass the minimal-model values of K.w and K.K")
    if k_dot_omega < 0 or k_squared < 0:
        return -inf
    if k_dot_omega == 0 and k_squared == 0:
        return 0
    if k_dot_omega > 0 and k_squared == 0:
        return 1
    if k_dot_omega > 0 and k_squared > 0:
        return 2
    raise InconsistentSignsError(
        "K.w = 0 with K.K > 0 matches no case of the definition")


def canonical_norm(chi: int, sigma: int) -> int:
    """Norm of a canonical class: 2*chi + 3*sigma."""
    return 2 * chi + 3 * sigma


@dataclass(frozen=True)
class CYTableRow:
    b1: int
    b2: int
    b_plus: int
    chi: int
    sigma: int
    label: str

    def __post_init__(self):
        if self.chi != 2 - 2 * self.b1 + self.b2:
            raise ValueError("chi must equal 2 - 2*b1 + b2")
        if self.sigma != 2 * self.b_plus - self.b2:
            raise ValueError("sigma must equal 2*b_plus - b2")


def cy_table() -> tuple:
    """Homological invariants of the symplectic Calabi-Yau surfaces."""
    return (
        CYTableRow(0, 22, 3, 24, -16, "K3"),
        CYTableRow(0, 10, 1, 12, -8, "Enriques surface"),
        CYTableRow(4, 6, 3, 0, 0, "4-torus"),
        CYTableRow(3, 4, 2, 0, 0, "T2-bundle over T2"),
        CYTableRow(2, 2, 1, 0, 0, "T2-bundle over T2"),
    )


# ---------------------------------------------------------------------------
# the Kodaira-Thurston nilmanifold family

# invariant 1-forms, indexed 0..3: e1 = dx, e2 = dy, e3 = dz - l*y*dx,
# e4 = dt; the only nonzero differential is d(e3) = l * e1^e2.
ONE_FORM_LABELS = ("dx", "dy", "dz - l*y*dx", "dt")
TWO_FORM_LABELS = ("F1", "F2", "F3", "F4")

# F1 = dx^dt, F2 = dy^(dz - l*y*dx), F3 = dy^dt, F4 = dz^dx = -e1^e3
_F_BASIS = (
    {(0, 3): 1},   # F1
    {(1, 2): 1},   # F2
    {(1, 3): 1},   # F3
    {(0, 2): -1},  # F4
)
_EXACT_PAIR = (0, 1)  # e1^e2 spans the exact invariant 2-forms


def _wedge22(f, g) -> int:
    """Coefficient of the volume form e1^e2^e3^e4 in f ^ g."""
    total = 0
    for (i, j), a in f.items():
        for (k, l), b in g.items():
            if len({i, j, k, l}) != 4:
                continue
            seq = (i, j, k, l)
            sign = 1
            for s in range(4):
                for t in range(s + 1, 4):
                    if seq[s] > seq[t]:
                        sign = -sign
            total += sign * a * b
    return total


@dataclass(frozen=True)
class KTAlgebra:
    """Invariant-form model of the nilmanifold cohomology ring.

    H^2 is computed in the complex of invariant forms: closed invariant
    2-forms modulo the exact one e1^e2 = d(e3)/l.  In the basis
    F1..F4 the intersection pairing is exactly 2U.
    """

    lambda_: int
    one_form_labels: tuple
    two_forms: tuple
    h2_gram: tuple

    @property
    def form(self) -> GramForm:
        return GramForm(self.h2_gram)


def kt_algebra(lambda_: int) -> KTAlgebra:
    """Build the degree-2 lattice for monodromy shear lambda != 0."""
    if lambda_ == 0:
        raise ValueError("lambda = 0 degenerates to the 4-torus; "
                         "the shear must be nonzero")
    gram = tuple(
        tuple(_wedge22(f, g) for g in _F_BASIS) for f in _F_BASIS
    )
    expected = make_standard(p=2).gram
    assert gram == expected, "intersection pairing of F1..F4 must be 2U"
    # closedness bookkeeping: d(ei^ej) = +-e_other ^ (l*e1^e2) when e3
    # occurs, which vanishes exactly when the other factor is e1 or e2
    for f in _F_BASIS:
        for (i, j) in f:
            if 2 in (i, j):
                other = j if i == 2 else i
                assert other in (0, 1), "basis two-form is not closed"
    return KTAlgebra(lambda_=lambda_, one_form_labels=ONE_FORM_LABELS,
                     two_forms=_F_BASIS, h2_gram=gram)


def wedge_image(alg: KTAlgebra) -> IsotropicPlane:
    """Image of wedging two degree-1 classes, as a sublattice in F-coordinates.

    The degree-1 classes are spanned by dx, dy, dt (e3 is not closed
    ... its dual circle dies); dx ^ dy is exact and drops out, so the
    image is the full isotropic plane spanned by F1 and F3.
    """
    h1 = (0, 1, 3)
    rows = []
    for i, j in itertools.combinations(h1, 2):
        if (i, j) == _EXACT_PAIR:
            continue  # e1^e2 = d(e3)/lambda is zero in H^2
        coords = [0, 0, 0, 0]
        for idx, f in enumerate(alg.two_forms):
            for (k, l), a in f.items():
                if (k, l) == (i, j):
                    # basis forms have a single pair entry with coeff +-1
                    coords[idx] = a
        rows.append(tuple(coords))
    rows = [r for r in rows if any(r)]
    plane = IsotropicPlane(tuple(rows))
    assert plane.normal_form == ((1, 0, 0, 0), (0, 0, 1, 0))
    assert is_full_isotropic_plane(alg.form, plane.normal_form)
    return plane


# ---------------------------------------------------------------------------
# lattice-normalizing diffeomorphism candidates phi_T

# polynomials in (x, y, z, t): dict mapping exponent tuples to Fraction


def _poly(const=0):
    out = {}
    if const:
        out[(0, 0, 0, 0)] = Fraction(const)
    return out


def _poly_var(i):
    e = [0, 0, 0, 0]
    e[i] = 1
    return {tuple(e): Fraction(1)}


def _poly_add(*ps):
    out = {}
    for p in ps:
        for m, c in p.items():
            out[m] = out.get(m, Fraction(0)) + c
    return {m: c for m, c in out.items() if c != 0}


def _poly_scale(c, p):
    c = Fraction(c)
    if c == 0:
        return {}
    return {m: c * v for m, v in p.items()}


def _poly_mul(p, q):
    out = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            m = tuple(a + b for a, b in zip(m1, m2))
            out[m] = out.get(m, Fraction(0)) + c1 * c2
    return {m: c for m, c in out.items() if c != 0}


def _phi_polys(t_mat, b_mat, lambda_, point):
    """Symbolic phi(point) for point given as four component polynomials."""
    px, py, pz, pt = point
    d = la.int_det(t_mat)
    x_out = _poly_add(_poly_scale(t_mat[0][0], px), _poly_scale(t_mat[1][0], py))
    y_out = _poly_add(_poly_scale(t_mat[0][1], px), _poly_scale(t_mat[1][1], py))
    quad = _poly_add(
        _poly_scale(b_mat[0][0], _poly_mul(px, px)),
        _poly_scale(b_mat[0][1] + b_mat[1][0], _poly_mul(px, py)),
        _poly_scale(b_mat[1][1], _poly_mul(py, py)),
    )
    z_out = _poly_add(_poly_scale(d, pz), quad)
    return (x_out, y_out, z_out, pt)


def _left_mult_polys(g, lambda_, point):
    """Symbolic g . point under the group law
    (x0,y0,z0,t0)(x,y,z,t) = (x0+x, y0+y, z0+z+l*x0*y, t0+t)."""
    p, q, r, s = (Fraction(c) for c in g)
    px, py, pz, pt = point
    return (
        _poly_add(_poly(p), px),
        _poly_add(_poly(q), py),
        _poly_add(_poly(r), pz, _poly_scale(lambda_ * p, py)),
        _poly_add(_poly(s), pt),
    )


@dataclass(frozen=True)
class PhiT:
    """The map (a, z, t) -> (a T, det(T) z + a B a^t, t) together with the
    translation l' it induces on each lattice generator l.

    The defining identity phi(l . u) = l' . phi(u) holds as an exact
    polynomial identity in u for every generator.  preserves_lattice
    records whether all translation parts are integral; the diagonal of
    2B is l*T11*T12 and l*T21*T22, so an odd product leaves a
    half-integral z-translation that no quadratic-only correction can
    remove.
    """

    t_mat: tuple
    b_mat: tuple
    lambda_: int
    translations: tuple
    preserves_lattice: bool


_KT_GENERATORS = ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1))


def solve_phi_T(lambda_: int, t_mat) -> PhiT:
    """Solve for the rational matrix B and verify the normalization
    identity coefficient by coefficient."""
    t_mat = la.as_int_matrix(t_mat)
    if len(t_mat) != 2 or any(len(r) != 2 for r in t_mat):
        raise ValueError("T must be a 2x2 integer matrix")
    d = la.int_det(t_mat)
    if d not in (1, -1):
        raise ValueError("T must have determinant +-1")
    if lambda_ == 0:
        raise ValueError("lambda must be nonzero")
    t11, t12 = t_mat[0]
    t21, t22 = t_mat[1]
    b_mat = (
        (Fraction(lambda_ * t11 * t12, 2), Fraction(lambda_ * t12 * t21, 2)),
        (Fraction(lambda_ * t12 * t21, 2), Fraction(lambda_ * t21 * t22, 2)),
    )

    def quad(p, q):
        return (b_mat[0][0] * p * p + (b_mat[0][1] + b_mat[1][0]) * p * q
                + b_mat[1][1] * q * q)

    point = tuple(_poly_var(i) for i in range(4))
    phi_point = _phi_polys(t_mat, b_mat, lambda_, point)
    translations = []
    for g in _KT_GENERATORS:
        p, q, r, s = g
        l_prime = (
            Fraction(p * t11 + q * t21),
            Fraction(p * t12 + q * t22),
            Fraction(d * r) + quad(p, q),
            Fraction(s),
        )
        lhs = _phi_polys(t_mat, b_mat, lambda_,
                         _left_mult_polys(g, lambda_, point))
        rhs = _left_mult_polys(l_prime, lambda_, phi_point)
        if lhs != rhs:
            raise ArithmeticError(
                "no rational B satisfies the normalization identity (bug)")
        translations.append(l_prime)
    preserves = all(c.denominator == 1 for l in translations for c in l)
    return PhiT(t_mat=t_mat, b_mat=b_mat, lambda_=lambda_,
                translations=tuple(translations), preserves_lattice=preserves)


def kt_infinite_index_witness(n: int) -> tuple:
    """n isometries of 2U moving the plane <x0, x1> to pairwise-distinct
    isotropic planes (distinctness by Hermite normal form).

    Under the identification (F1, F2, F3, F4) -> (x0, y0, x1, y1) the
    start plane is the wedge image <F1, F3>; its n distinct images
    certify at least n cosets of the plane stabilizer.  Returns
    (certificate, planes).
    """
    if n < 1:
        raise ValueError("need at least one witness")
    form = make_standard(p=2)
    gens = wall_generators(2)
    start = ((1, 0, 0, 0), (0, 0, 1, 0))
    reached = plane_orbit_bfs(form, gens, start, want=n)
    invariant_set = tuple(sorted(start))
    witnesses = tuple(iso for _, iso in reached)
    images = tuple(tuple(sorted(iso(v) for v in invariant_set))
                   for iso in witnesses)
    cert = CosetCertificate(form=form, invariant_set=invariant_set,
                            witnesses=witnesses, images=images)
    planes = tuple(plane for plane, _ in reached)
    return cert, planes
