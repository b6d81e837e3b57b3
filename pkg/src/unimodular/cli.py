"""Command-line front end.

Subcommands wrap the library operations one to one and print a single
JSON document on stdout; diagnostics go to stderr.  Exit codes: 0 on
success, 1 when a verification target fails, 2 on invalid input.
Randomized commands take an explicit --seed, so every run is replayable.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__, serialize, verify
from ._linalg import as_int_matrix
from .exterior import lambda2, non_realizability_replay
from .forms import (
    DegenerateFormError,
    FormSpec,
    GramForm,
    canonical_representative,
    recognize_standard,
)
from .orbits import (
    CertificateError,
    characteristic_family,
    enumerate_isotropic_planes,
    escape_even,
    escape_odd,
)
from .topology import (
    InconsistentSignsError,
    kodaira_dimension,
    kt_algebra,
    kt_infinite_index_witness,
    solve_phi_T,
    wedge_image,
)


def parse_form_spec(text: str) -> FormSpec:
    """Parse shorthand like "2U", "2<1>+<-1>", "U+E8", "2U+-2E8".

    Terms are joined with '+'; each term is an optional (possibly
    negative, E8 only) count followed by one of <1>, <-1>, U, E8.
    """
    import re
    m = n = p = q = 0
    for term in text.replace(" ", "").split("+"):
        match = re.fullmatch(r"(-?\d*)(<1>|<-1>|U|E8)", term)
        if not match:
            raise ValueError(f"cannot parse form term {term!r}")
        count_text, token = match.groups()
        count = int(count_text) if count_text not in ("", "-") else (
            -1 if count_text == "-" else 1)
        if token == "E8":
            q += count
            continue
        if count < 0:
            raise ValueError(f"negative count only makes sense for E8: {term!r}")
        if token == "<1>":
            m += count
        elif token == "<-1>":
            n += count
        else:
            p += count
    return FormSpec(m=m, n=n, p=p, q=q)


def _form_from_args(args) -> GramForm:
    if getattr(args, "gram", None):
        return serialize.form_from_json({"gram": json.loads(args.gram)})
    if getattr(args, "form", None):
        return parse_form_spec(args.form).build()
    raise ValueError("provide --form SPEC or --gram JSON")


def _vector_from_text(text: str) -> tuple:
    return tuple(int(x) for x in text.split(","))


def _emit(obj, args) -> None:
    indent = getattr(args, "json_indent", None)
    print(json.dumps(obj, indent=indent))


def cmd_classify(args) -> int:
    form = _form_from_args(args)
    inv = form.invariants
    out = {"form": serialize.form_to_json(form),
           "invariants": serialize.invariants_to_json(inv)}
    if inv.is_indefinite:
        rep = canonical_representative(inv)
        out["canonical_representative"] = serialize.form_to_json(rep)
    else:
        out["canonical_representative"] = None
        out["note"] = ("classification by rank, signature and parity "
                       "applies only to indefinite forms")
    _emit(out, args)
    return 0


def cmd_escape(args) -> int:
    form = _form_from_args(args)
    start = _vector_from_text(args.start)
    spec = recognize_standard(form)
    if spec is not None and spec.p == 1 and spec.q != 0 and not (spec.m or spec.n):
        trace = escape_even(form, start, args.steps)
    else:
        trace = escape_odd(form, start, args.steps)
    _emit(serialize.trace_to_json(trace), args)
    return 0


def cmd_char_family(args) -> int:
    form = _form_from_args(args)
    vectors = characteristic_family(form, args.k, args.count)
    sigma = form.invariants.signature
    _emit({"k": args.k, "norm": sigma + 8 * args.k,
           "vectors": [serialize.vector_to_json(v) for v in vectors]}, args)
    return 0


def cmd_planes(args) -> int:
    form = _form_from_args(args)
    planes = enumerate_isotropic_planes(form, args.bound)
    _emit({"bound": args.bound, "count": len(planes),
           "planes": [serialize.plane_to_json(p) for p in planes]}, args)
    return 0


def cmd_lambda2(args) -> int:
    mat = as_int_matrix(json.loads(args.matrix))
    report = lambda2(mat)
    _emit({"input": serialize.matrix_to_json(report.input),
           "output": serialize.matrix_to_json(report.output),
           "gram_preserved": report.gram_preserved,
           "component": list(report.component) if report.component else None},
          args)
    return 0


def cmd_kodaira(args) -> int:
    try:
        value = kodaira_dimension(args.kw, args.k2)
    except InconsistentSignsError as exc:
        _emit({"kw": args.kw, "k2": args.k2, "error": str(exc)}, args)
        return 2
    _emit({"kw": args.kw, "k2": args.k2,
           "kodaira_dimension": "-inf" if value == float("-inf") else value},
          args)
    return 0


def cmd_kt(args) -> int:
    alg = kt_algebra(args.lambda_)
    plane = wedge_image(alg)
    out = {"lambda": args.lambda_,
           "one_forms": list(alg.one_form_labels),
           "h2_gram": serialize.matrix_to_json(alg.h2_gram),
           "wedge_image": serialize.plane_to_json(plane)}
    if args.phi_T:
        t_mat = _vector_from_text(args.phi_T)
        if len(t_mat) != 4:
            raise ValueError("--phi-T expects four integers a,b,c,d")
        phi = solve_phi_T(args.lambda_, (t_mat[:2], t_mat[2:]))
        out["phi_T"] = {
            "T": serialize.matrix_to_json(phi.t_mat),
            "B": [[serialize.fraction_to_json(x) for x in row]
                  for row in phi.b_mat],
            "translations": [[serialize.fraction_to_json(x) for x in l]
                             for l in phi.translations],
            "preserves_lattice": phi.preserves_lattice,
        }
    if args.witness:
        cert, planes = kt_infinite_index_witness(args.witness)
        out["witness"] = serialize.certificate_to_json(cert)
        out["witness_planes"] = [serialize.plane_to_json(p) for p in planes]
    _emit(out, args)
    return 0


def cmd_verify_paper(args) -> int:
    if args.target == "all":
        report = verify.run_all(seed=args.seed)
    else:
        report = verify.run_target(args.target, seed=args.seed)
    report["version"] = __version__
    _emit(report, args)
    return 0 if report["status"] == "pass" else 1


def cmd_replay(args) -> int:
    trace = non_realizability_replay(args.target)
    _emit({"target": trace.target,
           "steps": [{"rule": s.rule, "instance": s.instance,
                      "conclusion": s.conclusion} for s in trace.steps],
           "conclusion": trace.conclusion}, args)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json-indent", type=int, default=None,
                        help="pretty-print JSON output with this indent")
    form_args = argparse.ArgumentParser(add_help=False)
    form_args.add_argument("--form", help='form shorthand, e.g. "2U" or "2<1>+<-1>"')
    form_args.add_argument("--gram", help="Gram matrix as JSON rows")

    parser = argparse.ArgumentParser(
        prog="unimod",
        description="exact-arithmetic toolkit for unimodular bilinear forms")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common, form_args],
                       help="invariants and canonical representative")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("escape", parents=[common, form_args],
                       help="reflection escape trace")
    p.add_argument("--start", required=True, help="comma-separated coordinates")
    p.add_argument("--steps", type=int, default=10)
    p.set_defaults(func=cmd_escape)

    p = sub.add_parser("char-family", parents=[common, form_args],
                       help="characteristic vectors of norm sigma + 8k")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--count", type=int, default=10)
    p.set_defaults(func=cmd_char_family)

    p = sub.add_parser("planes", parents=[common, form_args],
                       help="enumerate full isotropic planes")
    p.add_argument("--bound", type=int, default=2)
    p.set_defaults(func=cmd_planes)

    p = sub.add_parser("lambda2", parents=[common],
                       help="exterior square of a 4x4 integer matrix")
    p.add_argument("--matrix", required=True, help="4x4 matrix as JSON rows")
    p.set_defaults(func=cmd_lambda2)

    p = sub.add_parser("kodaira", parents=[common],
                       help="Kodaira dimension from the signs of K.w and K.K")
    p.add_argument("--kw", type=int, required=True)
    p.add_argument("--k2", type=int, required=True)
    p.set_defaults(func=cmd_kodaira)

    p = sub.add_parser("kt", parents=[common],
                       help="Kodaira-Thurston cohomology ring tools")
    p.add_argument("--lambda", dest="lambda_", type=int, required=True)
    p.add_argument("--phi-T", dest="phi_T",
                   help="2x2 matrix entries a,b,c,d")
    p.add_argument("--witness", type=int, default=0,
                   help="emit an n-plane infinite-index witness")
    p.set_defaults(func=cmd_kt)

    p = sub.add_parser("replay", parents=[common],
                       help="non-realizability constraint replay")
    p.add_argument("target", choices=["n3", "s3", "n3s3"])
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("verify-paper", parents=[common],
                       help="run a named verification suite")
    p.add_argument("target", choices=list(verify.TARGETS) + ["all"])
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify_paper)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, DegenerateFormError, CertificateError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
