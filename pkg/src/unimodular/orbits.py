"""Orbit machinery for indefinite forms.

Bounded breadth-first orbit search under named generators, reflection
escape procedures that certify infinite orbits on nearly definite
forms, infinite families of characteristic vectors of prescribed norm,
exhaustive isotropic-plane enumeration, and coset certificates: finite
sets of isometries with pairwise-distinct images of a fixed vector set,
witnessing a lower bound on the number of stabilizer cosets.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd

from . import _linalg as la
from .forms import (
    STRONGLY_INDEFINITE,
    GramForm,
    e8_roots,
    is_full_isotropic_plane,
    is_primitive,
    make_standard,
    recognize_standard,
)
from .isometry import GeneratorSet, Isometry, reflection

MODE_MAGNITUDE = "magnitude"
MODE_SIGNED = "signed"


class CertificateError(RuntimeError):
    """A search budget ran out before the requested witness was assembled."""


@dataclass(frozen=True)
class OrbitResult:
    vectors: tuple
    truncated: bool

    def __contains__(self, v):
        return tuple(v) in set(self.vectors)

    def __len__(self):
        return len(self.vectors)


def orbit_bfs(form: GramForm, gens: GeneratorSet, start, coeff_bound: int) -> OrbitResult:
    """All vectors reachable from start by applying generators or their
    inverses, discarding any image with a coordinate exceeding the bound.

    Output is sorted lexicographically; ``truncated`` reports whether the
    bound cut off at least one image.
    """
    start = form._check_vector(start)
    if all(x == 0 for x in start):
        raise ValueError("orbit of the zero vector is trivial; start must be nonzero")
    if coeff_bound < max(abs(x) for x in start):
        raise ValueError("coeff_bound must cover the start vector")
    mats = []
    for _, iso in gens:
        mats.append(iso.mat)
        inv = iso.inverse().mat
        if inv != iso.mat:
            mats.append(inv)
    seen = {start}
    frontier = [start]
    truncated = False
    while frontier:
        nxt = []
        for v in frontier:
            for m in mats:
                w = la.matvec(m, v)
                if max(abs(x) for x in w) > coeff_bound:
                    truncated = True
                    continue
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return OrbitResult(vectors=tuple(sorted(seen)), truncated=truncated)


# ---------------------------------------------------------------------------
# escape traces


@dataclass(frozen=True)
class EscapeStep:
    gamma: tuple
    vector: tuple
    case: str | None = None


@dataclass(frozen=True)
class EscapeTrace:
    """A reflection walk whose tracked coordinate certifies an infinite orbit.

    mode "magnitude": |coefficient at tracked_index| strictly increases
    at every step.  mode "signed": within the steps labeled case "1" the
    tracked coefficient is strictly monotone, decreasing when the
    (constant) companion coefficient b is positive and increasing when
    it is negative; transition steps are labeled "1x", "2" or "3".
    """

    form: GramForm
    start: tuple
    steps: tuple
    tracked_index: int
    mode: str

    def vectors(self) -> tuple:
        return (self.start,) + tuple(s.vector for s in self.steps)

    def witness_prefix(self, m: int) -> Isometry:
        """Composition of the first m reflections (applied in trace order)."""
        out = Isometry.identity(self.form)
        for step in self.steps[:m]:
            out = reflection(self.form, step.gamma) * out
        return out

    def validate(self) -> None:
        current = self.start
        for step in self.steps:
            r = reflection(self.form, step.gamma)
            expected = r(current)
            if expected != step.vector:
                raise ValueError("trace step does not replay")
            current = step.vector
        vecs = self.vectors()
        if self.mode == MODE_MAGNITUDE:
            mags = [abs(v[self.tracked_index]) for v in vecs]
            if any(b <= a for a, b in zip(mags, mags[1:])):
                raise ValueError("tracked coefficient magnitude must grow strictly")
        elif self.mode == MODE_SIGNED:
            for prev, step in zip(vecs, self.steps):
                if step.case != "1":
                    continue
                b = prev[1]
                cur = step.vector[self.tracked_index]
                before = prev[self.tracked_index]
                if b > 0 and not cur < before:
                    raise ValueError("case-1 step must strictly decrease x")
                if b < 0 and not cur > before:
                    raise ValueError("case-1 step must strictly increase x")
        else:
            raise ValueError(f"unknown trace mode {self.mode!r}")


def _odd_escape_positions(form: GramForm):
    """Positions (H list, F) for a diagonal +-1 form with one minority sign.

    Covers both n<1> + <-1> and its mirror <1> + n<-1>: reflections do
    not change under global negation of the Gram matrix, so the same
    walk applies with F at the unique minority-sign position.
    """
    g = form.gram
    dim = form.dim
    if any(g[i][j] != 0 for i in range(dim) for j in range(dim) if i != j):
        return None
    diag = [g[i][i] for i in range(dim)]
    if any(d not in (1, -1) for d in diag):
        return None
    plus = [i for i, d in enumerate(diag) if d == 1]
    minus = [i for i, d in enumerate(diag) if d == -1]
    if len(minus) == 1 and len(plus) >= 2:
        return plus, minus[0]
    if len(plus) == 1 and len(minus) >= 2:
        return minus, plus[0]
    return None


def escape_odd(form: GramForm, start, steps: int) -> EscapeTrace:
    """Reflection walk on n<1> + <-1> (or its mirror) with strictly growing
    |F-coefficient|.

    Each step reflects in gamma = e1*H_i1 + e2*H_i2 + F where i1, i2
    carry the two largest |H-coefficients| and the signs follow the
    fixed rule e = -sign(a)*sign(b) (e = -sign(a) when b = 0, e = +1
    when a = 0), which makes the new F-coefficient have magnitude
    2|a_i1| + 2|a_i2| + 3|b|.
    """
    positions = _odd_escape_positions(form)
    if positions is None:
        raise ValueError("escape_odd needs a diagonal +-1 form with exactly "
                         "one minority-sign basis vector")
    h_pos, f_pos = positions
    if len(h_pos) < 2:
        raise ValueError("escape_odd needs at least two majority basis vectors")
    start = form._check_vector(start)
    if all(x == 0 for x in start):
        raise ValueError("start vector must be nonzero")
    if steps < 0:
        raise ValueError("steps must be nonnegative")

    def sign(x):
        return (x > 0) - (x < 0)

    trace_steps = []
    current = start
    for _ in range(steps):
        ranked = sorted(h_pos, key=lambda h: (-abs(current[h]), h))
        i1, i2 = ranked[0], ranked[1]
        b = current[f_pos]
        gamma = [0] * form.dim
        for h in (i1, i2):
            a = current[h]
            if a == 0:
                eps = 1
            elif b == 0:
                eps = -sign(a)
            else:
                eps = -sign(a) * sign(b)
            gamma[h] = eps
        gamma[f_pos] = 1
        gamma = tuple(gamma)
        current = reflection(form, gamma)(current)
        trace_steps.append(EscapeStep(gamma=gamma, vector=current))
    trace = EscapeTrace(form=form, start=start, steps=tuple(trace_steps),
                        tracked_index=f_pos, mode=MODE_MAGNITUDE)
    trace.validate()
    return trace


def _even_escape_shape(form: GramForm):
    spec = recognize_standard(form)
    if spec is None or spec.m or spec.n or spec.p != 1 or spec.q == 0:
        return None
    return spec


def escape_even(form: GramForm, start, steps: int) -> EscapeTrace:
    """Reflection walk on U + l E8 (or its mirror U + l(-E8)).

    Writes each vector as eta + a x + b y with eta in the definite part
    and dispatches on the three cases: (1) eta != 0 and b != 0 reflects
    in omega + k x with omega a norm-(+-2) root pairing nontrivially
    with eta, choosing the smallest-magnitude k that moves the
    x-coefficient strictly in the direction fixed by sign(b) while
    keeping the new eta nonzero; (2) eta != 0, a = b = 0 reflects once
    in omega + y; (3) eta = 0 reflects once in omega + x (or omega + y
    when b = 0).  The leftover configuration eta != 0, b = 0, a != 0 is
    handled by one y-side step (labeled "1x").  Every non-case-1 step
    lands in case 1.
    """
    spec = _even_escape_shape(form)
    if spec is None:
        raise ValueError("escape_even needs a form built as U + l E8 "
                         "(or U + l(-E8)) in standard basis order")
    start = form._check_vector(start)
    if all(x == 0 for x in start):
        raise ValueError("start vector must be nonzero")
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    sgn = 1 if spec.q > 0 else -1  # pair with sgn*G so roots have norm +2
    blocks = abs(spec.q)
    roots = []
    base = e8_roots()
    for t in range(blocks):
        off = 2 + 8 * t
        for r in base:
            v = [0] * form.dim
            v[off:off + 8] = r
            roots.append(tuple(v))
    roots.sort()

    def pair(u, v):
        return sgn * form.dot(u, v)

    def split(v):
        return v[0], v[1], tuple(v[2:])

    def eta_nonzero(v):
        return any(x != 0 for x in v[2:])

    def sign(x):
        return (x > 0) - (x < 0)

    x_unit = tuple(1 if i == 0 else 0 for i in range(form.dim))
    y_unit = tuple(1 if i == 1 else 0 for i in range(form.dim))

    trace_steps = []
    current = start
    for _ in range(steps):
        a, b, _ = split(current)
        if eta_nonzero(current) and b != 0:
            case = "1"
            gamma = None
            for omega in roots:
                c = pair(omega, current)
                if c == 0:
                    continue
                for k in (1, -1, 2, -2, 3, -3):
                    if b > 0 and not c * k + b * k * k > 0:
                        continue
                    if b < 0 and not c * k + b * k * k < 0:
                        continue
                    cand = tuple(g + k * xx for g, xx in zip(omega, x_unit))
                    nxt = reflection(form, cand)(current)
                    if eta_nonzero(nxt):
                        gamma = cand
                        break
                if gamma:
                    break
        elif eta_nonzero(current) and a != 0:
            case = "1x"
            gamma = None
            for omega in roots:
                c = pair(omega, current)
                if c == 0:
                    continue
                for k in (1, -1, 2, -2, 3, -3):
                    if c + k * a == 0:
                        continue
                    cand = tuple(g + k * yy for g, yy in zip(omega, y_unit))
                    nxt = reflection(form, cand)(current)
                    if eta_nonzero(nxt):
                        gamma = cand
                        break
                if gamma:
                    break
        elif eta_nonzero(current):
            case = "2"
            gamma = None
            for omega in roots:
                if pair(omega, current) != 0:
                    gamma = la.vec_add(omega, y_unit)
                    break
        else:
            case = "3"
            unit = x_unit if b != 0 else y_unit
            gamma = la.vec_add(roots[0], unit)
        if gamma is None:
            raise CertificateError("no admissible reflection found (bug)")
        current = reflection(form, gamma)(current)
        if case in ("1x", "2", "3"):
            a2, b2, _ = split(current)
            assert eta_nonzero(current) and b2 != 0, "transition must land in case 1"
        trace_steps.append(EscapeStep(gamma=gamma, vector=current, case=case))
    trace = EscapeTrace(form=form, start=start, steps=tuple(trace_steps),
                        tracked_index=0, mode=MODE_SIGNED)
    trace.validate()
    return trace


# ---------------------------------------------------------------------------
# characteristic families


def characteristic_family(form: GramForm, k: int, count: int) -> tuple:
    """count distinct nonzero characteristic vectors of norm sigma + 8k.

    The form must be a standard block form whose leading block is 2U
    (two hyperbolic planes) or 2<1> + 2<-1>; any remaining summand is
    padded with 0 on even blocks and 1 on diagonal +-1 blocks, which
    keeps the outputs characteristic and shifts the norm by the padding
    contribution.
    """
    if count < 1:
        raise ValueError("count must be positive")
    spec = recognize_standard(form)
    if spec is None:
        raise ValueError("characteristic_family needs a standard block form")
    sigma = spec.signature
    # padding: 1 on every +-1 diagonal coordinate outside the lead, 0 elsewhere
    if spec.p >= 2:
        u0 = spec.m + spec.n
        lead = (u0, u0 + 1, u0 + 2, u0 + 3)
        lead_kind = "even"
    elif spec.m >= 2 and spec.n >= 2:
        lead = (0, 1, spec.m, spec.m + 1)
        lead_kind = "odd"
    else:
        raise ValueError("supported leading blocks: 2U or 2<1> + 2<-1>")
    pad = [0] * form.dim
    diag_positions = list(range(spec.m + spec.n))
    for i in diag_positions:
        pad[i] = 1
    for i in lead:
        pad[i] = 0
    # lead target: sigma + 8k minus the pad norm, as a multiple of 8
    k_lead = k + spec.q

    vectors = []
    if lead_kind == "even":
        x0, y0, x1, y1 = lead
        for a in range(1, count + 1):
            v = list(pad)
            v[x0] = 2 * a
            v[y0] = 2 * k_lead
            v[x1] = 2 * (1 - a)
            v[y1] = 2 * k_lead
            vectors.append(tuple(v))
    else:
        p1, p2, q1, q2 = lead
        if k_lead != 0:
            t = 0
            r = k_lead
            while r % 2 == 0:
                r //= 2
                t += 1
            a = 2 ** (t + 1) + r
            c = 2 ** (t + 1) - r
            for i in range(count):
                b = 2 * i + 1
                v = list(pad)
                v[p1], v[p2], v[q1], v[q2] = a, b, c, b
                vectors.append(tuple(v))
        else:
            # norm-0 family: (a, b, a, b) with a = c odd, b odd
            for i in range(count):
                a = 2 * i + 1
                v = list(pad)
                v[p1], v[p2], v[q1], v[q2] = a, 1, a, 1
                vectors.append(tuple(v))

    target = sigma + 8 * k
    for v in vectors:
        assert form.is_characteristic(v) and form.norm(v) == target
        assert any(x != 0 for x in v)
    assert len(set(vectors)) == len(vectors)
    return tuple(vectors)


# ---------------------------------------------------------------------------
# isotropic planes


@dataclass(frozen=True)
class IsotropicPlane:
    """A saturated rank-2 isotropic sublattice, keyed by its Hermite form."""

    rows: tuple
    normal_form: tuple = field(default=(), compare=False)

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "normal_form", la.hermite_normal_form(rows))
        if len(self.normal_form) != 2:
            raise ValueError("rows do not span a rank-2 sublattice")

    def __eq__(self, other):
        return (isinstance(other, IsotropicPlane)
                and self.normal_form == other.normal_form)

    def __hash__(self):
        return hash(self.normal_form)


def plane_family_2U(a: int, b: int, variant: int) -> IsotropicPlane:
    """The parametrized isotropic planes of 2U (basis x0, y0, x1, y1):
    variant 1 spans a*x0 + b*x1 and b*y0 - a*y1, variant 2 spans
    a*x0 + b*y1 and b*y0 - a*x1.  Requires gcd(a, b) = 1."""
    if gcd(a, b) != 1:
        raise ValueError("parameters must be coprime for the span to be full")
    if variant == 1:
        rows = ((a, 0, b, 0), (0, b, 0, -a))
    elif variant == 2:
        rows = ((a, 0, 0, b), (0, b, -a, 0))
    else:
        raise ValueError("variant must be 1 or 2")
    plane = IsotropicPlane(rows)
    assert is_full_isotropic_plane(make_standard(p=2), plane.rows)
    return plane


def enumerate_isotropic_planes(form: GramForm, coeff_bound: int) -> tuple:
    """Every full rank-2 isotropic sublattice spanned by two vectors with
    coordinates in [-bound, bound], deduplicated by Hermite normal form
    and sorted for determinism."""
    if coeff_bound < 1:
        raise ValueError("coeff_bound must be at least 1")
    if not form.invariants.is_indefinite:
        raise ValueError("definite forms contain no isotropic planes")
    rng = range(-coeff_bound, coeff_bound + 1)
    isotropic = []
    for v in itertools.product(rng, repeat=form.dim):
        if any(x != 0 for x in v) and form.norm(v) == 0:
            isotropic.append((v, la.matvec(form.gram, v)))
    found = {}
    for i in range(len(isotropic)):
        v, _ = isotropic[i]
        for j in range(i + 1, len(isotropic)):
            w, gw = isotropic[j]
            if sum(x * y for x, y in zip(v, gw)) != 0:
                continue
            if la.minors2_gcd((v, w)) != 1:
                continue
            nf = la.hermite_normal_form((v, w))
            if nf not in found:
                found[nf] = IsotropicPlane((v, w))
    return tuple(found[key] for key in sorted(found))


def plane_orbit_bfs(form: GramForm, gens: GeneratorSet, start_rows, want: int,
                    max_states: int = 20000) -> tuple:
    """Breadth-first search on isotropic planes under generator images.

    Returns the first ``want`` distinct planes in discovery order, each
    paired with a witness isometry mapping the start plane onto it.
    Raises CertificateError (reporting the count achieved) if the state
    budget runs out first.
    """
    start = IsotropicPlane(tuple(form._check_vector(r) for r in start_rows))
    if not is_full_isotropic_plane(form, start.rows):
        raise ValueError("start rows must span a full isotropic plane")
    mats = []
    for _, iso in gens:
        mats.append(iso.mat)
        inv = iso.inverse().mat
        if inv != iso.mat:
            mats.append(inv)
    ident = la.identity(form.dim)
    seen = {start.normal_form: ident}
    order = [start.normal_form]
    frontier = [(start.rows, ident)]
    while frontier and len(order) < want and len(seen) < max_states:
        nxt = []
        for rows, witness in frontier:
            for m in mats:
                new_rows = tuple(la.matvec(m, r) for r in rows)
                nf = la.hermite_normal_form(new_rows)
                if nf in seen:
                    continue
                new_witness = la.matmul(m, witness)
                seen[nf] = new_witness
                order.append(nf)
                nxt.append((new_rows, new_witness))
                if len(order) >= want:
                    break
            if len(order) >= want:
                break
        frontier = nxt
    if len(order) < want:
        raise CertificateError(
            f"plane search exhausted with {len(order)} of {want} planes")
    out = []
    for nf in order[:want]:
        out.append((IsotropicPlane(nf), Isometry(form, seen[nf], _trusted=True)))
    return tuple(out)


# ---------------------------------------------------------------------------
# transitivity probe


@dataclass(frozen=True)
class TransitivityReport:
    """Empirical reachability report; unreached vectors within a bound are
    not a refutation of transitivity."""

    norm: int
    characteristic: bool
    coeff_bound: int
    candidates: tuple
    reached: tuple
    unreached: tuple
    truncated: bool


def transitivity_probe(form: GramForm, gens: GeneratorSet, norm: int,
                       char_flag: bool, coeff_bound: int) -> TransitivityReport:
    """Enumerate primitive vectors of the given norm and type within the
    bound and report which are reached by bounded BFS from the
    lexicographically first one."""
    if form.invariants.definiteness != STRONGLY_INDEFINITE:
        raise ValueError("transitivity probe applies to strongly "
                         "indefinite forms")
    rng = range(-coeff_bound, coeff_bound + 1)
    candidates = []
    for v in itertools.product(rng, repeat=form.dim):
        if all(x == 0 for x in v):
            continue
        if form.norm(v) != norm:
            continue
        if not is_primitive(v):
            continue
        if form.is_characteristic(v) != char_flag:
            continue
        candidates.append(v)
    candidates.sort()
    if not candidates:
        return TransitivityReport(norm=norm, characteristic=char_flag,
                                  coeff_bound=coeff_bound, candidates=(),
                                  reached=(), unreached=(), truncated=False)
    orbit = orbit_bfs(form, gens, candidates[0], coeff_bound)
    hit = set(orbit.vectors)
    reached = tuple(v for v in candidates if v in hit)
    unreached = tuple(v for v in candidates if v not in hit)
    return TransitivityReport(norm=norm, characteristic=char_flag,
                              coeff_bound=coeff_bound,
                              candidates=tuple(candidates), reached=reached,
                              unreached=unreached, truncated=orbit.truncated)


# ---------------------------------------------------------------------------
# coset certificates


@dataclass(frozen=True)
class CosetCertificate:
    """Isometries with pairwise-distinct images of a fixed vector set.

    Any two isometries in the same left coset of the set-stabilizer of
    ``invariant_set`` have equal image sets, so n pairwise-distinct
    image sets witness at least n distinct cosets.  The distinctness of
    the images is asserted exactly at construction; the translation to
    an index lower bound is the documented contract.
    """

    form: GramForm
    invariant_set: tuple
    witnesses: tuple
    images: tuple

    def __post_init__(self):
        recomputed = []
        for g in self.witnesses:
            recomputed.append(tuple(sorted(g(v) for v in self.invariant_set)))
        if tuple(recomputed) != self.images:
            raise ValueError("stored images do not match the witnesses")
        if len(set(self.images)) != len(self.images):
            raise ValueError("image sets must be pairwise distinct")


def _generic_escape_prefixes(form: GramForm, v, budget: int):
    """Greedy reflection walk for forms without a recognized escape shape.

    Scans a small box of reflection vectors and applies the first one
    that strictly increases the coordinate sum of the current vector.
    """
    bound = 2 if 5 ** form.dim <= 200000 else 1
    rng = range(-bound, bound + 1)
    candidates = []
    for gamma in itertools.product(rng, repeat=form.dim):
        if all(x == 0 for x in gamma):
            continue
        try:
            candidates.append(reflection(form, gamma))
        except Exception:
            continue
    out = [Isometry.identity(form)]
    current = v
    h = out[0]
    for _ in range(budget):
        size = sum(abs(x) for x in current)
        step = next((r for r in candidates
                     if sum(abs(x) for x in r(current)) > size), None)
        if step is None:
            break
        current = step(current)
        h = step * h
        out.append(h)
    return out


def coset_certificate(form: GramForm, invariant_set, n: int,
                      step_budget: int | None = None) -> CosetCertificate:
    """n isometries whose images of the invariant set are pairwise distinct.

    An escape trace is built from the first vector of the set (the odd
    or even procedure when the form has the matching standard shape, a
    generic reflection search otherwise); prefixes of the trace are
    collected until n distinct image sets appear.  Budget exhaustion is
    an explicit failure, not a disproof.
    """
    inv = form.invariants
    if not inv.is_indefinite or inv.rank < 3:
        raise ValueError("coset certificates need an indefinite form of rank >= 3")
    s = tuple(sorted(form._check_vector(v) for v in invariant_set))
    if not s:
        raise ValueError("invariant set must be nonempty")
    if any(all(x == 0 for x in v) for v in s):
        raise ValueError("invariant set must consist of nonzero vectors")
    budget = step_budget if step_budget is not None else 4 * n + 60
    v = s[0]
    if _odd_escape_positions(form) is not None:
        trace = escape_odd(form, v, budget)
        prefixes = [trace.witness_prefix(m) for m in range(budget + 1)]
    elif _even_escape_shape(form) is not None:
        trace = escape_even(form, v, budget)
        prefixes = [trace.witness_prefix(m) for m in range(budget + 1)]
    else:
        prefixes = _generic_escape_prefixes(form, v, budget)
    witnesses = []
    images = []
    seen = set()
    for g in prefixes:
        image = tuple(sorted(g(w) for w in s))
        if image in seen:
            continue
        seen.add(image)
        witnesses.append(g)
        images.append(image)
        if len(witnesses) == n:
            break
    if len(witnesses) < n:
        raise CertificateError(
            f"collected {len(witnesses)} of {n} distinct image sets "
            f"within the step budget")
    return CosetCertificate(form=form, invariant_set=s,
                            witnesses=tuple(witnesses), images=tuple(images))
