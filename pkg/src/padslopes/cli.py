"""Command-line interface: ``padslopes slopes ...`` and ``padslopes ramify ...``.

Exit codes: 0 success, 2 parse error, 3 failed precondition, 4 slope
violation or inconsistent declared slopes, 5 internal inconsistency.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from decimal import Context, Decimal
from fractions import Fraction
from typing import Optional, Sequence

from . import catalog as cat
from .errors import ParseError, PreconditionError, SlopesError
from .exactnum import as_fraction
from .newton import formal_polygon, formal_slopes, hull_thresholds, parametric_polygon
from .ramify import (
    artin_schreier_compose,
    build_semidirect,
    character_table_semidirect,
    classify_quotients,
    sl2f3,
    swan_and_breaks,
    tame_jump,
    upper_jumps,
)
from .slopes import compare_bounds, compare_slopes, infer_padic, radii_profile, subsidiary_radii

CSV_DIGITS = 12
EXIT_VIOLATION = 4


def decimal_text(x: Fraction, digits: int = CSV_DIGITS) -> str:
    """x rounded to the given number of significant digits."""
    ctx = Context(prec=digits)
    return str(ctx.divide(Decimal(x.numerator), Decimal(x.denominator)))


def _emit(doc, out) -> None:
    out.write(json.dumps(doc, indent=2) + "\n")


def _load(path: str, seed: int) -> cat.ModuleFile:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return cat.ModuleFile.loads(text, seed)


def _fractions(text: str) -> list:
    try:
        return [as_fraction(t) for t in text.split(",") if t.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"cannot parse slope list {text!r}") from exc


# ---------------------------------------------------------------------------
# slopes


def cmd_formal(args, out) -> int:
    mf = _load(args.file, args.seed)
    op = mf.operator
    _emit(
        {
            "label": mf.label,
            "formal_polygon": formal_polygon(op).to_json(),
            "formal_slopes": [str(b) for b in formal_slopes(op)],
        },
        out,
    )
    return 0


def cmd_parametric(args, out) -> int:
    mf = _load(args.file, args.seed)
    pp = parametric_polygon(mf.operator)
    doc = pp.to_json()
    doc["label"] = mf.label
    doc["thresholds"] = hull_thresholds(mf.operator).to_json()
    _emit(doc, out)
    return 0


def _csv_rows(profile, samples: int, s_max: Fraction) -> list:
    rows = []
    for k in range(1, samples + 1):
        s = s_max * k / samples
        row = [decimal_text(s)]
        for getter in (profile.radius_at, profile.sum_at):
            for j in range(1, profile.n + 1):
                v = getter(j, s)
                row.append("NA" if v is None else decimal_text(v))
        rows.append(row)
    return rows


def cmd_radii(args, out) -> int:
    mf = _load(args.file, args.seed)
    op = mf.operator
    profile = radii_profile(op)
    s_max = as_fraction(args.s_max) if args.s_max else 2 * profile.polygon.final.lo + 2
    doc = {"label": mf.label, "profile": profile.to_json()}
    if args.at is not None:
        s = as_fraction(args.at)
        doc["at"] = {"s": str(s), "radii": [r.to_json() for r in subsidiary_radii(op, s)]}
    if args.csv:
        header = ["s"] + [f"f_{j}" for j in range(1, op.degree + 1)] + [f"F_{j}" for j in range(1, op.degree + 1)]
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(_csv_rows(profile, args.samples, s_max))
        doc["csv"] = args.csv
    if args.svg:
        from .plotting import plot_radii

        plot_radii(profile, args.svg, s_max, max(args.samples, 200), mf.label)
        doc["svg"] = args.svg
    _emit(doc, out)
    return 0


def cmd_check(args, out) -> int:
    mf = _load(args.file, args.seed)
    op = mf.operator
    beta = formal_slopes(op)
    profile = radii_profile(op)
    if args.certify:
        inf = infer_padic(profile, "certify")
    elif args.bound:
        inf = infer_padic(profile, "bound")
    else:
        alpha = _fractions(args.declared) if args.declared else mf.declared_alpha
        if alpha is None:
            raise PreconditionError("no p-adic slopes given: use --declared, --certify or --bound")
        inf = infer_padic(profile, "declared", alpha)
    if inf.alpha is not None:
        comp = compare_slopes(inf.alpha, beta)
    else:
        comp = compare_bounds(inf.bounds, beta)
    _emit({"label": mf.label, "inference": inf.to_json(), "comparison": comp.to_json()}, out)
    return 0 if comp.ok and inf.consistent else EXIT_VIOLATION


def cmd_catalog(args, out) -> int:
    if args.kind == "bessel":
        doc = cat.catalog_bessel(args.n, args.p).to_json()
    elif args.kind == "exp":
        doc = cat.catalog_exp(args.k, args.p).to_json()
    elif args.kind == "adjoint-bessel2":
        doc = cat.catalog_adjoint_bessel2().to_json()
    else:
        system = cat.bessel_connection(args.n, args.p)
        doc = {"system": cat.system_to_json(system, at_infinity=True),
               "metadata": {"declared_alpha": [str(Fraction(1, args.n))] * args.n,
                            "label": f"bessel connection n={args.n} p={args.p} at infinity"}}
    text = json.dumps(doc, indent=2) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return 0


# ---------------------------------------------------------------------------
# ramify


def _group(args):
    if args.sl2f3:
        grp, table = sl2f3()
        return grp, table
    q, m = args.semidirect
    return build_semidirect(q, m), None


def cmd_jumps(args, out) -> int:
    grp, _ = _group(args)
    tame = tame_jump(grp)
    _emit(
        {
            "group": grp.label,
            "order": grp.order,
            "lower_filtration_orders": [len(g) for g in grp.filtration],
            "upper_jumps": [str(j) for j in upper_jumps(grp)],
            "tame_jump": None if tame is None else str(tame),
        },
        out,
    )
    return 0


def cmd_swan(args, out) -> int:
    grp, table = _group(args)
    if table is None:
        table = character_table_semidirect(*args.semidirect)
    name = args.char
    if name.lstrip("-").isdigit():
        name = f"chi_{name}"
    chi = table.character(name)
    _emit({"group": grp.label, "character": chi.name, **swan_and_breaks(grp, chi).to_json()}, out)
    return 0


def cmd_table(args, out) -> int:
    _emit(character_table_semidirect(*args.semidirect).to_json(), out)
    return 0


def cmd_as_compose(args, out) -> int:
    _emit({"n": args.n, "p": args.p, **artin_schreier_compose(args.n, args.p).to_json()}, out)
    return 0


def cmd_quotients(args, out) -> int:
    q, m = args.semidirect
    rec = classify_quotients(build_semidirect(q, m), m)
    _emit({"q": q, "m": m, **rec.to_json()}, out)
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="padslopes", description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=0, help="cyclic-vector search seed for system inputs")
    top = parser.add_subparsers(dest="group", required=True)

    slopes = top.add_parser("slopes", help="slopes and radii of a module file").add_subparsers(dest="cmd", required=True)
    p = slopes.add_parser("formal", help="formal Newton polygon and formal slopes")
    p.add_argument("file")
    p.set_defaults(func=cmd_formal)
    p = slopes.add_parser("parametric", help="Newton polygons for all s, with thresholds")
    p.add_argument("file")
    p.set_defaults(func=cmd_parametric)
    p = slopes.add_parser("radii", help="subsidiary radius profile")
    p.add_argument("file")
    p.add_argument("--at", help="also report the radii at this s")
    p.add_argument("--csv", help="write sampled f_j and F_i to this CSV file")
    p.add_argument("--svg", help="write a plot of F_i to this SVG file")
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--s-max", dest="s_max", help="right end of the sampled range")
    p.set_defaults(func=cmd_radii)
    p = slopes.add_parser("check", help="compare p-adic and formal slopes")
    p.add_argument("file")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--declared", help="comma-separated p-adic slopes")
    mode.add_argument("--certify", action="store_true")
    mode.add_argument("--bound", action="store_true")
    p.set_defaults(func=cmd_check)
    p = slopes.add_parser("catalog", help="write an example module file")
    kinds = p.add_subparsers(dest="kind", required=True)
    k = kinds.add_parser("bessel")
    k.add_argument("-n", type=int, required=True)
    k.add_argument("-p", type=int, required=True)
    k.add_argument("-o", "--output")
    k = kinds.add_parser("bessel-system")
    k.add_argument("-n", type=int, required=True)
    k.add_argument("-p", type=int, required=True)
    k.add_argument("-o", "--output")
    k = kinds.add_parser("exp")
    k.add_argument("-k", type=int, required=True)
    k.add_argument("-p", type=int, required=True)
    k.add_argument("-o", "--output")
    k = kinds.add_parser("adjoint-bessel2")
    k.add_argument("-o", "--output")
    p.set_defaults(func=cmd_catalog)

    ramify = top.add_parser("ramify", help="ramification data of small groups").add_subparsers(dest="cmd", required=True)

    def group_args(sp, allow_sl2=True):
        g = sp.add_mutually_exclusive_group(required=True)
        g.add_argument("--semidirect", nargs=2, type=int, metavar=("Q", "M"))
        if allow_sl2:
            g.add_argument("--sl2f3", action="store_true")

    p = ramify.add_parser("jumps", help="upper numbering jumps")
    group_args(p)
    p.set_defaults(func=cmd_jumps)
    p = ramify.add_parser("swan", help="Swan conductor and breaks of a character")
    group_args(p)
    p.add_argument("--char", required=True, help="character name, or l for chi_l")
    p.set_defaults(func=cmd_swan)
    p = ramify.add_parser("table", help="character table of F_q x| Z/m")
    group_args(p, allow_sl2=False)
    p.set_defaults(func=cmd_table)
    p = ramify.add_parser("as-compose", help="Artin-Schreier composition determinant")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-p", type=int, required=True)
    p.set_defaults(func=cmd_as_compose)
    p = ramify.add_parser("quotients", help="normal subgroups and quotients")
    group_args(p, allow_sl2=False)
    p.set_defaults(func=cmd_quotients)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except SlopesError as exc:
        print(f"padslopes: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
