"""The exterior-square homomorphism from 4x4 integer matrices onto
isometries of the rank-6 hyperbolic form 3U.

A 4x4 matrix A acting on degree-1 classes induces an action on wedge
pairs; in the fixed pairing dictionary below that action is a 6x6
integer matrix C with entries C[kl,ij] = a_ki a_lj - a_kj a_li.  For
det A = 1 the image preserves the 3U Gram matrix and lands in the
identity component.  The module also replays, as machine-checked
constraint propagation, the proof that the three component
representatives n3, s3, n3*s3 are not in the image, which bounds the
index of the image subgroup from below by 4.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from random import Random

from . import _linalg as la
from .forms import GramForm, make_standard
from .isometry import GeneratorSet, Isometry, component_invariant, wall_generators
from .orbits import CertificateError

# Wedge-pair dictionary for the 3U basis (x1, y1, x2, y2, x3, y3):
# each basis class is an ordered pair of degree-1 indices (1-based).
# y2 = (4, 2) carries its orientation in the pair order itself, so the
# single formula below needs no separate sign table.
BASIS_PAIRS = ((1, 2), (3, 4), (1, 3), (4, 2), (1, 4), (2, 3))
BASIS_LABELS = ("x1", "y1", "x2", "y2", "x3", "y3")


@dataclass(frozen=True)
class BasisDictionary:
    """Pairing dictionary between wedge pairs and the 3U basis."""

    pairs: tuple = BASIS_PAIRS
    labels: tuple = BASIS_LABELS

    @property
    def gram(self) -> tuple:
        """Gram matrix induced by the wedge pairing; always equals 3U."""
        n = len(self.pairs)
        out = [[0] * n for _ in range(n)]
        for r, (k, l) in enumerate(self.pairs):
            for c, (i, j) in enumerate(self.pairs):
                idx = (k, l, i, j)
                if len(set(idx)) == 4:
                    out[r][c] = _perm_sign(idx)
        return tuple(tuple(row) for row in out)


def _perm_sign(seq) -> int:
    sign = 1
    items = list(seq)
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[i] > items[j]:
                sign = -sign
    return sign


def three_u() -> GramForm:
    return make_standard(p=3)


def exterior_square(a) -> tuple:
    """The induced 6x6 matrix on wedge pairs: C[kl,ij] = a_ki a_lj - a_kj a_li."""
    a = la.as_int_matrix(a)
    if len(a) != 4 or any(len(r) != 4 for r in a):
        raise ValueError("input must be a 4x4 integer matrix")
    out = []
    for (k, l) in BASIS_PAIRS:
        row = []
        for (i, j) in BASIS_PAIRS:
            row.append(a[k - 1][i - 1] * a[l - 1][j - 1]
                       - a[k - 1][j - 1] * a[l - 1][i - 1])
        out.append(tuple(row))
    return tuple(out)


@dataclass(frozen=True)
class Lambda2Report:
    """Exterior square of one input matrix with its invariants."""

    input: tuple
    output: tuple
    gram_preserved: bool
    component: tuple | None


def lambda2(a) -> Lambda2Report:
    """Exterior square of an arbitrary 4x4 integer matrix.

    The wedge pairing scales by det A, so the 3U Gram matrix is
    preserved exactly when det A = 1; the component invariant is
    reported only in that case (it is always (+1, +1) there).
    """
    c = exterior_square(a)
    form = three_u()
    gram = form.gram
    preserved = la.matmul(la.matmul(la.transpose(c), gram), c) == gram
    comp = None
    if preserved:
        comp = component_invariant(Isometry(form, c, _trusted=True))
    return Lambda2Report(input=la.as_int_matrix(a), output=c,
                         gram_preserved=preserved, component=comp)


def functoriality_check(a, b) -> bool:
    """True iff the exterior square of a product equals the product of
    the exterior squares."""
    return exterior_square(la.matmul(a, b)) == la.matmul(exterior_square(a),
                                                         exterior_square(b))


# ---------------------------------------------------------------------------
# relations among the named generators of A(3U)


def _gens3() -> GeneratorSet:
    return wall_generators(3)


def relation_suite() -> tuple:
    """Every displayed relation among the named generators, instantiated
    over all valid index choices in {1, 2, 3} and checked as an exact
    6x6 matrix identity.  Returns (label, holds) verdicts."""
    gens = _gens3()
    ident = Isometry.identity(gens.form)

    def n(i):
        return gens[f"n{i}"]

    def s(i):
        return gens[f"s{i}"]

    def p(i, j):
        return gens[f"p{min(i, j)}{max(i, j)}"]

    def al(i, j):
        return gens[f"a{i}{j}"]

    checks = []
    idx = (1, 2, 3)
    for i in idx:
        checks.append((f"n{i}^2 = 1", n(i) * n(i) == ident))
        checks.append((f"s{i}^2 = 1", s(i) * s(i) == ident))
    for i, j in itertools.combinations(idx, 2):
        checks.append((f"p{i}{j}^2 = 1", p(i, j) * p(i, j) == ident))
        checks.append((f"s{i}s{j} = s{j}s{i}", s(i) * s(j) == s(j) * s(i)))
        checks.append((f"n{i}n{j} = n{j}n{i}", n(i) * n(j) == n(j) * n(i)))
    for i, j, k in itertools.permutations(idx, 3):
        checks.append((f"p{i}{k}p{i}{j} = p{j}{k}p{i}{k}",
                       p(i, k) * p(i, j) == p(j, k) * p(i, k)))
    for i in idx:
        for t in idx:
            checks.append((f"n{i}s{t} = s{t}n{i}", n(i) * s(t) == s(t) * n(i)))
    for i, j in itertools.permutations(idx, 2):
        k = next(t for t in idx if t not in (i, j))
        checks.append((f"n{i}p{i}{j} = p{i}{j}n{j}",
                       n(i) * p(i, j) == p(i, j) * n(j)))
        checks.append((f"n{k}p{i}{j} = p{i}{j}n{k}",
                       n(k) * p(i, j) == p(i, j) * n(k)))
        checks.append((f"s{i}p{i}{j} = p{i}{j}s{j}",
                       s(i) * p(i, j) == p(i, j) * s(j)))
        checks.append((f"s{k}p{i}{j} = p{i}{j}s{k}",
                       s(k) * p(i, j) == p(i, j) * s(k)))
        a_inv = al(i, j).inverse()
        checks.append((f"n{i}a{i}{j} = a{i}{j}^-1 n{i}",
                       n(i) * al(i, j) == a_inv * n(i)))
        checks.append((f"n{j}a{i}{j} = a{i}{j}^-1 n{j}",
                       n(j) * al(i, j) == a_inv * n(j)))
        checks.append((f"n{k}a{i}{j} = a{i}{j}n{k}",
                       n(k) * al(i, j) == al(i, j) * n(k)))
        checks.append((f"s{k}a{i}{j} = a{i}{j}s{k}",
                       s(k) * al(i, j) == al(i, j) * s(k)))
        checks.append((f"p{i}{j}a{i}{j}p{i}{j} = a{j}{i}",
                       p(i, j) * al(i, j) * p(i, j) == al(j, i)))
        checks.append((f"p{i}{k}a{i}{j}p{i}{k} = a{k}{j}",
                       p(i, k) * al(i, j) * p(i, k) == al(k, j)))
    return tuple(checks)


# ---------------------------------------------------------------------------
# generators of the image subgroup with explicit preimages

# the four base preimages, in SL(4, Z), mapping to n1n2, s1s2, p12n1, a12
_BASE_PREIMAGES = {
    "n1n2": ((-1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, -1)),
    "s1s2": ((0, 0, 0, -1), (0, 0, 1, 0), (0, -1, 0, 0), (1, 0, 0, 0)),
    "p12n1": ((1, 0, 0, 0), (0, 0, 1, 0), (0, -1, 0, 0), (0, 0, 0, 1)),
    "a12": ((1, 0, 0, 0), (0, 1, 0, 0), (0, 1, 1, 0), (0, 0, 0, 1)),
}


@dataclass(frozen=True)
class NGenerator:
    label: str
    isometry: Isometry
    preimage: tuple


def _signed_permutations_sl4() -> tuple:
    """All 192 signed 4x4 permutation matrices of determinant 1."""
    out = []
    for perm in itertools.permutations(range(4)):
        base_sign = _perm_sign(perm)
        for signs in itertools.product((1, -1), repeat=4):
            prod = 1
            for s in signs:
                prod *= s
            if base_sign * prod != 1:
                continue
            mat = tuple(
                tuple(signs[r] if perm[r] == c else 0 for c in range(4))
                for r in range(4)
            )
            out.append(mat)
    return tuple(out)


def n_subgroup_generators() -> tuple:
    """The listed generators of the image subgroup N, each with a verified
    SL(4, Z) preimage.

    Preimages are found by conjugating the four base matrices with
    signed permutation matrices of determinant 1 (whose exterior squares
    are monomial isometries); any target left unmatched is a hard error.
    """
    gens = _gens3()

    def compose(labels):
        out = Isometry.identity(gens.form)
        for lab in labels:
            out = out * gens[lab]
        return out

    targets = []
    for i, j in itertools.combinations((1, 2, 3), 2):
        targets.append((f"n{i}n{j}", compose([f"n{i}", f"n{j}"])))
        targets.append((f"s{i}s{j}", compose([f"s{i}", f"s{j}"])))
    for i, j in itertools.permutations((1, 2, 3), 2):
        pij = f"p{min(i, j)}{max(i, j)}"
        targets.append((f"{pij}n{i}", compose([pij, f"n{i}"])))
    for i, j in itertools.permutations((1, 2, 3), 2):
        targets.append((f"a{i}{j}", compose([f"a{i}{j}"])))
        targets.append((f"s{i}a{i}{j}s{i}", compose([f"s{i}", f"a{i}{j}", f"s{i}"])))
        targets.append((f"s{j}a{i}{j}s{j}", compose([f"s{j}", f"a{i}{j}", f"s{j}"])))

    perms = _signed_permutations_sl4()
    direct = {}
    for pm in perms:
        direct.setdefault(exterior_square(pm), pm)
    conjugates = {}
    for base_label, base_a in _BASE_PREIMAGES.items():
        base_c = exterior_square(base_a)
        for pm in perms:
            img = exterior_square(pm)
            # img is a signed permutation of the 6 wedge classes: inverse = transpose
            conj = la.matmul(la.matmul(img, base_c), la.transpose(img))
            if conj not in conjugates:
                pm_t = la.transpose(pm)
                conjugates[conj] = la.matmul(la.matmul(pm, base_a), pm_t)

    out = []
    for label, iso in targets:
        target_mat = iso.mat
        if target_mat in direct:
            preimage = direct[target_mat]
        elif target_mat in conjugates:
            preimage = conjugates[target_mat]
        else:
            raise CertificateError(f"no preimage found for {label}")
        if exterior_square(preimage) != target_mat or la.int_det(preimage) != 1:
            raise CertificateError(f"preimage verification failed for {label}")
        out.append(NGenerator(label=label, isometry=iso, preimage=preimage))
    return tuple(out)


# ---------------------------------------------------------------------------
# random sampling and the index lower bound


def random_sl4_word(rng: Random, max_len: int = 25) -> tuple:
    """Product of elementary matrices E_ij(+-1); always in SL(4, Z)."""
    mat = la.identity(4)
    for _ in range(rng.randint(1, max_len)):
        i, j = rng.sample(range(4), 2)
        c = rng.choice((1, -1))
        elem = tuple(
            tuple((1 if r == t else 0) + (c if (r, t) == (i, j) else 0)
                  for t in range(4))
            for r in range(4)
        )
        mat = la.matmul(mat, elem)
    return mat


@dataclass(frozen=True)
class IndexLowerBoundCertificate:
    """Evidence that the image subgroup misses three component cosets.

    component_values records the four pairwise-distinct invariants of
    {id, n3, s3, n3*s3}; every listed generator of N and every sampled
    exterior square has the trivial invariant, so the three nontrivial
    representatives lie in three further cosets: index >= 4.  The upper
    bound (index <= 4) is not claimed here.
    """

    seed: int
    samples: int
    max_word_len: int
    component_values: tuple
    n_generator_components_trivial: bool
    sampled_components_trivial: bool


def index_lower_bound_certificate(samples: int, seed: int = 0,
                                  max_word_len: int = 25) -> IndexLowerBoundCertificate:
    if samples < 1:
        raise ValueError("need at least one sample")
    gens = _gens3()
    rng = Random(seed)
    for t in range(samples):
        a = random_sl4_word(rng, max_word_len)
        rep = lambda2(a)
        if not rep.gram_preserved or rep.component != (1, 1):
            raise CertificateError(
                f"sample {t} has nontrivial component {rep.component}")
    boundary = (
        ("id", Isometry.identity(gens.form)),
        ("n3", gens["n3"]),
        ("s3", gens["s3"]),
        ("n3s3", gens["n3"] * gens["s3"]),
    )
    values = tuple((label, component_invariant(iso)) for label, iso in boundary)
    if len({v for _, v in values}) != 4:
        raise CertificateError("boundary components are not pairwise distinct")
    for record in n_subgroup_generators():
        if component_invariant(record.isometry) != (1, 1):
            raise CertificateError(
                f"N generator {record.label} has nontrivial component")
    return IndexLowerBoundCertificate(
        seed=seed, samples=samples, max_word_len=max_word_len,
        component_values=values,
        n_generator_components_trivial=True,
        sampled_components_trivial=True,
    )


# ---------------------------------------------------------------------------
# non-realizability replay

_TAU = {1: 4, 2: 3, 3: 2, 4: 1}

REPLAY_TARGETS = ("n3", "s3", "n3s3")


@dataclass(frozen=True)
class ReplayStep:
    rule: str
    instance: str
    conclusion: str


@dataclass(frozen=True)
class NonRealizabilityTrace:
    target: str
    steps: tuple
    conclusion: str


def _known_p(k: int, l: int, i: int, j: int) -> int | None:
    """Entry C[kl,ij] pinned by matching the identity on the first four
    columns: defined for i != j with j != tau(i), where it equals
    delta_ki delta_lj - delta_kj delta_li."""
    if i == j or j == _TAU[i]:
        return None
    return (1 if (k, l) == (i, j) else 0) - (1 if (k, l) == (j, i) else 0)


def non_realizability_replay(target: str) -> NonRealizabilityTrace:
    """Replay, as constraint propagation on symbolic entries a_ij, the
    argument that no SL(4, Z) matrix has exterior square n3, s3 or n3*s3.

    All three targets agree with the identity on the columns of x1, y1,
    x2, y2, which pins C[kl,ij] for j != tau(i), tau = (14)(23).  The
    derived relations R_{k,l,s;i,j}: a_lj p_ks,ij - a_sj p_kl,ij
    + a_kj p_sl,ij = 0 kill the off-diagonal entries outside the
    antidiagonal; the pinned quadratics P_ij,ij force a uniform diagonal
    d = +-1; the pinned P relations then close the antidiagonal to 0.
    So A = +-I, whose exterior square is the identity, never the target.
    """
    if target not in REPLAY_TARGETS:
        raise ValueError(f"target must be one of {REPLAY_TARGETS}")
    gens = _gens3()
    if target == "n3":
        target_iso = gens["n3"]
    elif target == "s3":
        target_iso = gens["s3"]
    else:
        target_iso = gens["n3"] * gens["s3"]
    ident = la.identity(6)
    # premise: the target matches the identity on the first four columns
    for col in range(4):
        for row in range(6):
            if target_iso.mat[row][col] != ident[row][col]:
                raise CertificateError(
                    f"{target} does not share the pinned columns (bug)")

    steps = []
    idx = (1, 2, 3, 4)
    # state[r][c]: "?" unknown, 0, or "d" (the common diagonal unit)
    state = {(r, c): "?" for r in idx for c in idx}

    steps.append(ReplayStep(
        rule="pin",
        instance="C[kl,ij] = delta_ki delta_lj - delta_kj delta_li for j != tau(i)",
        conclusion=f"columns x1, y1, x2, y2 of {target} equal the identity's",
    ))

    # step 2: a_lj = 0 for l not in {j, tau(j)}
    for j in idx:
        for l in idx:
            if l == j or l == _TAU[j]:
                continue
            i = next(t for t in idx if t not in (j, _TAU[j], l))
            p1 = _known_p(i, j, i, j)
            p2 = _known_p(i, l, i, j)
            p3 = _known_p(j, l, i, j)
            assert (p1, p2, p3) == (1, 0, 0)
            state[(l, j)] = 0
            steps.append(ReplayStep(
                rule=f"R_{{k={i},l={l},s={j};i={i},j={j}}}",
                instance=(f"a[{l}{j}]*{p1} - a[{j}{j}]*{p2} + a[{i}{j}]*{p3} = 0"),
                conclusion=f"a[{l}{j}] = 0",
            ))

    # step 3: uniform diagonal d with d^2 = 1
    for (i, j) in ((1, 2), (1, 3), (3, 4)):
        p_val = _known_p(i, j, i, j)
        assert p_val == 1 and state[(i, j)] == 0 and state[(j, i)] == 0
        steps.append(ReplayStep(
            rule=f"P_{{{i}{j},{i}{j}}}",
            instance=(f"a[{i}{i}]*a[{j}{j}] - a[{i}{j}]*a[{j}{i}] = 1 with "
                      f"a[{i}{j}] = a[{j}{i}] = 0"),
            conclusion=f"a[{i}{i}]*a[{j}{j}] = 1",
        ))
    for i in idx:
        state[(i, i)] = "d"
    steps.append(ReplayStep(
        rule="integrality",
        instance="a[11]a[22] = a[11]a[33] = a[33]a[44] = 1 over Z",
        conclusion="all diagonal entries equal a common unit d = +-1",
    ))

    # step 4: the antidiagonal entries a[i, tau(i)]
    for l, i in itertools.permutations(idx, 2):
        if l in (i, _TAU[i]):
            continue
        p_val = _known_p(l, i, _TAU[l], _TAU[i])
        assert p_val == 0 and state[(l, _TAU[i])] == 0
        steps.append(ReplayStep(
            rule=f"P_{{{l}{i},{_TAU[l]}{_TAU[i]}}}",
            instance=(f"a[{l}{_TAU[l]}]*a[{i}{_TAU[i]}] - a[{l}{_TAU[i]}]*"
                      f"a[{i}{_TAU[l]}] = 0 with a[{l}{_TAU[i]}] = 0"),
            conclusion=f"a[{l}{_TAU[l]}]*a[{i}{_TAU[i]}] = 0",
        ))
    for c in idx:
        r = _TAU[c]
        if state[(r, c)] != "?":
            continue
        j = next(t for t in idx if t not in (r, c))
        p_val = _known_p(r, j, c, j)
        assert p_val == 0 and state[(r, j)] == 0 and state[(j, c)] == 0
        state[(r, c)] = 0
        steps.append(ReplayStep(
            rule=f"P_{{{r}{j},{c}{j}}}",
            instance=(f"a[{r}{c}]*a[{j}{j}] - a[{r}{j}]*a[{j}{c}] = 0 with "
                      f"a[{r}{j}] = a[{j}{c}] = 0 and a[{j}{j}] = d"),
            conclusion=f"a[{r}{c}]*d = 0, hence a[{r}{c}] = 0",
        ))

    open_cells = [cell for cell, val in state.items() if val == "?"]
    if open_cells:
        raise CertificateError(f"propagation left open constraints: {open_cells}")

    # step 5: both sign choices give the identity exterior square
    ident4 = la.identity(4)
    neg4 = tuple(tuple(-x for x in row) for row in ident4)
    if exterior_square(ident4) != ident or exterior_square(neg4) != ident:
        raise CertificateError("exterior square of +-I is not the identity (bug)")
    if target_iso.mat == ident:
        raise CertificateError("target equals the identity (bug)")
    conclusion = (f"A = +-I is forced, and the exterior square of +-I is the "
                  f"identity, which differs from {target}; so {target} has no "
                  f"SL(4, Z) preimage")
    steps.append(ReplayStep(rule="conclusion", instance="A = d*I, d = +-1",
                            conclusion=conclusion))
    return NonRealizabilityTrace(target=target, steps=tuple(steps),
                                 conclusion=conclusion)
