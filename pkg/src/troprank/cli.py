"""Command-line front end: every pipeline and verification as a subcommand.

One command per invocation; structured JSON on stdout, human diagnostics on
stderr.  Exit codes: 0 success, 1 user error (bad input or file), 2
verification failed (a check that should hold came back false), 3 internal
limit exceeded (exhaustion caps, attempt budgets).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import construction, matrix, puiseux, sampler
from .enclosure import format_fraction, format_interval
from .errors import (
    AttemptsExhausted,
    LemmaViolation,
    SizeLimitExceeded,
    TropError,
)
from .fields import field_from_name
from .semiring import format_scalar
from .symmetrize import (
    sigma,
    symmetrize as make_symmetrized,
    symmetrized_from_json,
    symmetrized_to_json,
    verify_rank_additivity,
)

EXIT_OK = 0
EXIT_USER = 1
EXIT_VERIFY = 2
EXIT_LIMIT = 3


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise TropError(f"cannot read {path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise TropError(f"{path} is not valid JSON: {exc}") from None


def _emit(payload) -> None:
    json.dump(payload, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise TropError(f"expected a rational like 3/4, got {text!r}") from None


# ---------------------------------------------------------------------------
# Subcommand handlers; each returns a process exit code.
# ---------------------------------------------------------------------------

def _cmd_permanent(args) -> int:
    a = matrix.matrix_from_json(_load_json(args.matrix))
    per = matrix.permanent(a)
    _emit({
        "permanent": format_scalar(per),
        "is_tangible": per.is_tangible,
        "nonsingular": per.is_tangible,
    })
    return EXIT_OK


def _cmd_rank(args) -> int:
    a = matrix.matrix_from_json(_load_json(args.matrix))
    result = matrix.tropical_rank(a, randomized=args.randomized)
    out = {
        "tropical_rank": result.rank,
        "mode": result.mode,
        "witness_rows": list(result.witness_rows),
        "witness_cols": list(result.witness_cols),
    }
    if result.mode == "randomized":
        out["certified"] = "lower bound only"
        out["uncertified_upper"] = result.uncertified_upper
    _emit(out)
    return EXIT_OK


def _cmd_sigma(args) -> int:
    t = symmetrized_from_json(_load_json(args.sym))
    _emit(matrix.matrix_to_json(sigma(t)))
    return EXIT_OK


def _split_labels(tokens):
    """Flatten space- and/or comma-separated label lists from the CLI."""
    if tokens is None:
        return None
    return [part for tok in tokens for part in tok.split(",") if part]


def _cmd_symmetrize(args) -> int:
    s = matrix.matrix_from_json(_load_json(args.matrix))
    t = make_symmetrized(s, I=_split_labels(args.I), J=_split_labels(args.J))
    _emit(symmetrized_to_json(t))
    return EXIT_OK


def _cmd_verify_additivity(args) -> int:
    t = symmetrized_from_json(_load_json(args.sym))
    report = verify_rank_additivity(t)
    _emit(report)
    if not report["holds"]:
        print(
            "error: rank additivity failed — the collapse identity "
            "rank(T) = rank(sigma(T)) + |I| must hold for every valid "
            "input, so this signals a bug",
            file=sys.stderr,
        )
        return EXIT_VERIFY
    return EXIT_OK


def _cmd_series_rank(args) -> int:
    l = puiseux.series_matrix_from_json(_load_json(args.series))
    _emit({"series_rank": puiseux.series_rank(l)})
    return EXIT_OK


def _cmd_lift_check(args) -> int:
    a = matrix.matrix_from_json(_load_json(args.matrix))
    l = puiseux.series_matrix_from_json(_load_json(args.series))
    ok = puiseux.lifting_check(a, l)
    _emit({"is_lifting": ok})
    if not ok:
        print("error: the series matrix does not lift the tropical matrix", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def _coerce_series_field(l: puiseux.SeriesMatrix, field) -> puiseux.SeriesMatrix:
    if l.field == field:
        return l
    grid = [
        [
            puiseux.Series.from_terms(field, [(field.coerce(c), e) for c, e in s.terms])
            for s in row
        ]
        for row in l.entries
    ]
    return puiseux.SeriesMatrix(l.rows, l.cols, field, grid)


def _cmd_lift_transform(args) -> int:
    t = symmetrized_from_json(_load_json(args.sym))
    l = puiseux.series_matrix_from_json(_load_json(args.series))
    if args.field is not None:
        try:
            l = _coerce_series_field(l, field_from_name(args.field))
        except ZeroDivisionError:
            raise TropError(
                f"series coefficients cannot be reduced into {args.field}"
            ) from None
    _emit(puiseux.series_matrix_to_json(puiseux.lift_transform(t, l)))
    return EXIT_OK


def _cmd_row_reduce(args) -> int:
    t = symmetrized_from_json(_load_json(args.sym))
    l = puiseux.series_matrix_from_json(_load_json(args.series))
    _emit(puiseux.series_matrix_to_json(puiseux.row_reduce_symmetrized(l, t)))
    return EXIT_OK


def _cmd_build_phi(args) -> int:
    m = construction.zeroone_from_json(_load_json(args.zeroone))
    phi = construction.build_phi(m, args.k)
    _emit(construction.phi_to_json(phi))
    return EXIT_OK


def _cmd_verify_phi(args) -> int:
    phi = construction.phi_from_json(_load_json(args.phi))
    good = construction.good_tuple_from_json(_load_json(args.tuple))
    structure_ok = construction.phi_matches(phi, good.matrix, good.k)
    conditions = good.validate()
    sweep = construction.verify_phi_bounds(phi, good)
    ok = (
        structure_ok
        and conditions["cond1"]
        and conditions["cond2"]
        and sweep["all_singular"]
    )
    _emit({
        "structure_ok": structure_ok,
        "good_conditions": conditions,
        "sweep": {
            "bound": format_fraction(sweep["bound"], round_up=True),
            "threshold": sweep["threshold"],
            "sizes_checked": sweep["sizes_checked"],
            "mode": sweep["mode"],
            "tests": sweep["tests"],
            "all_singular": sweep["all_singular"],
            "witness": sweep["witness"],
            "exact_rank": sweep["exact_rank"],
            "within_bound": sweep["within_bound"],
        },
        "ok": ok,
    })
    if not ok:
        print("error: phi verification failed", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def _cmd_sample_good(args) -> int:
    params = sampler.SamplerParams(
        args.d, _parse_fraction(args.q), args.seed,
        allow_out_of_range=args.allow_out_of_range,
    )
    good, stats = sampler.sample_good_tuple(params, args.attempts)
    payload = construction.good_tuple_to_json(good)
    payload["stats"] = stats
    _emit(payload)
    return EXIT_OK


def _cmd_separate(args) -> int:
    report = sampler.separate(args.n, _parse_fraction(args.alpha), args.seed)
    os.makedirs(args.out, exist_ok=True)
    files = {
        "pattern": "pattern.json",
        "tuple": "tuple.json",
        "phi": "phi.json",
        "phi_padded": "phi_padded.json",
        "report": "report.json",
    }
    payloads = {
        "pattern": construction.zeroone_to_json(report.matrix),
        "tuple": construction.good_tuple_to_json(report.good),
        "phi": construction.phi_to_json(report.phi),
        "phi_padded": matrix.matrix_to_json(report.phi_padded),
    }
    out_json = sampler.report_to_json(report, files=files)
    payloads["report"] = out_json
    for key, name in files.items():
        with open(os.path.join(args.out, name), "w", encoding="utf-8") as fh:
            json.dump(payloads[key], fh, indent=2)
            fh.write("\n")
    _emit(out_json)
    return EXIT_OK


def _cmd_bounds(args) -> int:
    q = _parse_fraction(args.q)
    k, r, u = sampler.lemma_params(args.d, q)
    hoeff = sampler.hoeffding_bound(args.d)
    union = sampler.union_bound(args.d, q, r.lo)
    _emit({
        "k": k,
        "r": format_interval(r),
        "u": format_interval(u),
        "hoeffding": format_interval(hoeff),
        "union": {
            "bound": format_interval(union["bound"]),
            "intermediate": format_interval(union["intermediate"]),
            "log_ratio_lt_minus1": union["log_ratio_lt_minus1"],
            "degenerate_r": union["degenerate_r"],
        },
    })
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser wiring.
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="troprank",
        description="Exact tropical/supertropical matrix rank toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("permanent", help="tropical permanent of a square matrix")
    p.add_argument("matrix")
    p.set_defaults(func=_cmd_permanent)

    p = sub.add_parser("rank", help="tropical rank (largest non-singular submatrix)")
    p.add_argument("matrix")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true", help="full search (default)")
    mode.add_argument(
        "--randomized", type=int, metavar="N",
        help="sample N submatrices per size; certified lower bound only",
    )
    p.set_defaults(func=_cmd_rank)

    p = sub.add_parser("sigma", help="collapse a symmetrized matrix")
    p.add_argument("sym")
    p.set_defaults(func=_cmd_sigma)

    p = sub.add_parser("symmetrize", help="canonical paired-row preimage")
    p.add_argument("matrix")
    p.add_argument("--I", nargs="+", default=None,
                   help="row index labels (space- or comma-separated)")
    p.add_argument("--J", nargs="+", default=None,
                   help="column index labels (space- or comma-separated)")
    p.set_defaults(func=_cmd_symmetrize)

    p = sub.add_parser("verify-additivity", help="check rank T = rank sigma(T) + |I|")
    p.add_argument("sym")
    p.set_defaults(func=_cmd_verify_additivity)

    p = sub.add_parser("series-rank", help="exact rank of a series matrix")
    p.add_argument("series")
    p.set_defaults(func=_cmd_series_rank)

    p = sub.add_parser("lift-check", help="does the series matrix lift the tropical one?")
    p.add_argument("matrix")
    p.add_argument("series")
    p.set_defaults(func=_cmd_lift_check)

    p = sub.add_parser("lift-transform", help="extend a lifting to the paired-row matrix")
    p.add_argument("sym")
    p.add_argument("series")
    p.add_argument("--field", default=None, help="coerce coefficients: Q or Fp:<p>")
    p.set_defaults(func=_cmd_lift_transform)

    p = sub.add_parser("row-reduce", help="cancel anchors of a paired-row lifting")
    p.add_argument("sym")
    p.add_argument("series")
    p.set_defaults(func=_cmd_row_reduce)

    p = sub.add_parser("build-phi", help="build the block matrix from a 0-1 pattern")
    p.add_argument("zeroone")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=_cmd_build_phi)

    p = sub.add_parser("verify-phi", help="validate a built phi against its tuple")
    p.add_argument("phi")
    p.add_argument("tuple")
    p.set_defaults(func=_cmd_verify_phi)

    p = sub.add_parser("sample-good", help="rejection-sample a verified good tuple")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--q", required=True, help="zero probability, rational like 1/20")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--attempts", type=int, default=64)
    p.add_argument(
        "--allow-out-of-range", action="store_true",
        help="permit q outside (0, 1/10) for desk-scale experiments",
    )
    p.set_defaults(func=_cmd_sample_good)

    p = sub.add_parser("separate", help="full size-n separation pipeline")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", required=True, help="rational like 1/2")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True, help="directory for emitted files")
    p.set_defaults(func=_cmd_separate)

    p = sub.add_parser("bounds", help="lemma parameters and probability bounds")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--q", required=True, help="rational like 1/20")
    p.set_defaults(func=_cmd_bounds)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SizeLimitExceeded, AttemptsExhausted) as exc:
        print(f"error: {exc}", file=sys.stderr)
        stats = getattr(exc, "stats", None)
        if stats:
            print(json.dumps(stats, indent=2), file=sys.stderr)
        return EXIT_LIMIT
    except LemmaViolation as exc:
        print(
            f"error: {exc} — this falsifies a guaranteed step and signals a bug",
            file=sys.stderr,
        )
        return EXIT_VERIFY
    except TropError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USER


if __name__ == "__main__":
    sys.exit(main())
