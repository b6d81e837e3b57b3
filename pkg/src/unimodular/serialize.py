"""JSON encoding of forms, isometries, traces and certificates.

Integers that do not fit in 64 bits are emitted as decimal strings and
accepted back in either representation, so certificates with very large
escape coefficients survive any JSON parser.
"""

from __future__ import annotations

from fractions import Fraction

from .forms import FormInvariants, GramForm
from .isometry import Isometry
from .orbits import CosetCertificate, EscapeTrace, IsotropicPlane

_I64_MIN = -(2 ** 63)
_I64_MAX = 2 ** 63 - 1


def encode_int(v: int):
    return v if _I64_MIN <= v <= _I64_MAX else str(v)


def decode_int(v) -> int:
    if isinstance(v, bool):
        raise ValueError("booleans are not integers here")
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        return int(v)
    raise ValueError(f"expected an integer or decimal string, got {v!r}")


def vector_to_json(v) -> list:
    return [encode_int(int(x)) for x in v]


def vector_from_json(obj) -> tuple:
    return tuple(decode_int(x) for x in obj)


def matrix_to_json(m) -> list:
    return [vector_to_json(row) for row in m]


def matrix_from_json(obj) -> tuple:
    return tuple(vector_from_json(row) for row in obj)


def form_to_json(form: GramForm) -> dict:
    return {"dim": form.dim, "gram": matrix_to_json(form.gram)}


def form_from_json(obj) -> GramForm:
    gram = matrix_from_json(obj["gram"])
    form = GramForm(gram)
    if "dim" in obj and decode_int(obj["dim"]) != form.dim:
        raise ValueError("dim field disagrees with the Gram matrix")
    return form


def invariants_to_json(inv: FormInvariants) -> dict:
    return {
        "rank": inv.rank,
        "b_plus": inv.b_plus,
        "b_minus": inv.b_minus,
        "signature": inv.signature,
        "parity": inv.parity,
        "definiteness": inv.definiteness,
        "automorphism_group_is_finite": inv.automorphism_group_is_finite,
    }


def isometry_to_json(g: Isometry) -> dict:
    return {"form": form_to_json(g.form), "mat": matrix_to_json(g.mat)}


def isometry_from_json(obj) -> Isometry:
    return Isometry(form_from_json(obj["form"]), matrix_from_json(obj["mat"]))


def plane_to_json(plane: IsotropicPlane) -> dict:
    return {
        "rows": matrix_to_json(plane.rows),
        "normal_form": matrix_to_json(plane.normal_form),
    }


def trace_to_json(trace: EscapeTrace) -> dict:
    out = {
        "start": vector_to_json(trace.start),
        "steps": [
            {"gamma": vector_to_json(s.gamma), "vector": vector_to_json(s.vector)}
            for s in trace.steps
        ],
        "tracked_index": trace.tracked_index,
    }
    if any(s.case is not None for s in trace.steps):
        out["cases"] = [s.case for s in trace.steps]
    return out


def certificate_to_json(cert: CosetCertificate) -> dict:
    return {
        "form": form_to_json(cert.form),
        "invariant_set": [vector_to_json(v) for v in cert.invariant_set],
        "witnesses": [matrix_to_json(g.mat) for g in cert.witnesses],
        "images": [[vector_to_json(v) for v in image] for image in cert.images],
    }


def fraction_to_json(x: Fraction):
    if x.denominator == 1:
        return encode_int(x.numerator)
    return f"{x.numerator}/{x.denominator}"
