"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""

import random
from fractions import Fraction

from oracles import brute_hull, direct_valuation
from padslopes.catalog import catalog_adjoint_bessel2, catalog_all, catalog_bessel, catalog_exp
from padslopes.exactnum import PiScalar
from padslopes.laurent import LaurentElement, gauss_envelope, lmul
from padslopes.newton import formal_polygon, formal_slopes, hull_thresholds, parametric_polygon, polygon_at
from padslopes.ramify import (
    artin_schreier_compose,
    build_semidirect,
    character_table_semidirect,
    classify_quotients,
    jumps_vs_slopes,
    semidirect_parameters,
    sl2f3,
    swan_and_breaks,
    upper_jumps,
)
from padslopes.slopes import EQUAL, STRICT, compare_slopes, infer_padic, radii_profile
from padslopes.twisted import TwistedOperator, tmul

frac = Fraction
CATALOG = catalog_all()


def report(capsys, number, title, failures):
    status = "PASS" if not failures else "FAIL"
    with capsys.disabled():
        print(f"\ncriterion {number:>2} {status}: {title}")
        for msg in failures:
            print(f"    - {msg}")
    assert not failures, "; ".join(failures)


def test_criterion_01_bessel_equality(capsys):
    failures = []
    for n, p in [(2, 2), (3, 2), (2, 3), (5, 2), (3, 7)]:
        ell = catalog_bessel(n, p).operator
        want = [frac(1, n)] * n
        beta = formal_slopes(ell)
        if beta != want:
            failures.append(f"({n},{p}) formal slopes {beta}")
        inf = infer_padic(radii_profile(ell), "certify")
        if inf.certificate != "exact" or list(inf.alpha or ()) != want:
            failures.append(f"({n},{p}) certify gave {inf.certificate} {inf.alpha}")
            continue
        comp = compare_slopes(inf.alpha, beta)
        if comp.verdicts != [EQUAL] * n:
            failures.append(f"({n},{p}) verdicts {comp.verdicts}")
        if sum(inf.alpha) != 1:
            failures.append(f"({n},{p}) irregularity {sum(inf.alpha)}")
    report(capsys, 1, "Bessel formal and p-adic slopes agree", failures)


def test_criterion_02_exp_gap(capsys):
    failures = []
    p = 2
    for n in (1, 2, 3):
        k = p ** n
        ell = catalog_exp(k, p).operator
        if formal_slopes(ell) != [k]:
            failures.append(f"k={k} formal slope {formal_slopes(ell)}")
        prof = radii_profile(ell)
        inf = infer_padic(prof, "declared", [1])
        if inf.certificate != "consistent":
            failures.append(f"k={k} declared alpha=1 gave {inf.certificate}")
        # junction of F_1 = 2s with the first determined piece
        piece = prof.first_sum_run(1).pieces[0]
        junction = piece.intercept / (2 - piece.slope)
        if junction != frac(n, p ** n - 1):
            failures.append(f"k={k} junction at {junction}")
        if compare_slopes([1], formal_slopes(ell)).verdicts != [STRICT]:
            failures.append(f"k={k} comparison not strict")
    report(capsys, 2, "exp(pi/x^(p^n)) has p-adic slope 1 below formal slope p^n", failures)


def test_criterion_03_adjoint(capsys):
    failures = []
    ell = catalog_adjoint_bessel2().operator
    if formal_slopes(ell) != [frac(1, 2), frac(1, 2), 0]:
        failures.append(f"formal slopes {formal_slopes(ell)}")
    fnp = formal_polygon(ell)
    if sorted(fnp.slope_list()) != [frac(-3, 2), frac(-3, 2), -1]:
        failures.append(f"polygon slopes {fnp.slope_list()}")
    if fnp.vertices != ((-3, 0), (-1, -3), (0, -4)):
        failures.append(f"polygon vertices {fnp.vertices}")
    verdicts = compare_slopes([frac(1, 3)] * 3, formal_slopes(ell)).verdicts
    if verdicts != [STRICT, STRICT, EQUAL]:
        failures.append(f"verdicts {verdicts}")
    report(capsys, 3, "adjoint of rank-2 Bessel", failures)


def test_criterion_04_parametric_oracle(capsys):
    failures = []
    rng = random.Random(20240601)
    N = 1000003
    for mf in CATALOG:
        ell = mf.operator
        pp = parametric_polygon(ell)
        for _ in range(200):
            s = frac(1, 10) + frac(199, 10) * frac(rng.randrange(1, N), N)
            got = polygon_at(ell, s)
            pts = [(-i, direct_valuation(a, s)) for i, a in enumerate(ell.coeffs) if not a.is_zero()]
            if list(got.vertices) != brute_hull(pts):
                failures.append(f"{mf.label} hull differs at s={s}")
                break
            if s in pp.critical_values:
                continue
            if pp.predict(s) != got:
                failures.append(f"{mf.label} interval prediction differs at s={s}")
                break
    report(capsys, 4, "parametric polygon matches brute-force hulls at random s", failures)


def test_criterion_05_threshold_soundness(capsys):
    failures = []
    for mf in CATALOG:
        ell = mf.operator
        rep = hull_thresholds(ell)
        if rep.direct_stabilization > rep.combined:
            failures.append(f"{mf.label}: direct {rep.direct_stabilization} > combined {rep.combined}")
        final = parametric_polygon(ell).final
        for k in range(1, 51):
            s = rep.direct_stabilization + frac(k, 5)
            if polygon_at(ell, s).breaks != final.breaks:
                failures.append(f"{mf.label}: breaks change at s={s}")
                break
    direct = hull_thresholds(catalog_bessel(2, 2).operator).direct_stabilization
    if direct != 2:
        failures.append(f"Bessel(2,2) direct threshold {direct}")
    report(capsys, 5, "stabilization threshold is below the combined bound", failures)


def closed_form(ell, s):
    """1/(p-1) + (1 + beta_j) s + (vp b_(-m0) - vp b_(-m1)) / (m1 - m0) per effective slot."""
    beta = formal_slopes(ell)
    final = parametric_polygon(ell).final
    lead = lambda m: ell.coeff(-m).leading_coefficient().vp()
    out = []
    for (m0, m1), mult, tag in zip(zip(final.breaks, final.breaks[1:]), final.multiplicities, final.tags):
        if tag != "effective":
            break
        for _ in range(mult):
            j = len(out)
            out.append(frac(1, ell.p - 1) + (1 + beta[j]) * s + (lead(m0) - lead(m1)) / (m1 - m0))
    return out


def test_criterion_06_closed_form(capsys):
    failures = []
    for mf in CATALOG:
        ell = mf.operator
        prof = radii_profile(ell)
        final = prof.polygon.final
        for s in (final.witness(), final.lo + 7, final.lo + frac(101, 3)):
            want = closed_form(ell, s)
            got = [prof.radius_at(j, s) for j in range(1, len(want) + 1)]
            if got != want:
                failures.append(f"{mf.label} at s={s}: {got} vs {want}")
    prof = radii_profile(catalog_bessel(2, 2).operator)
    for j in (1, 2):
        run = prof.radii[j - 1][-1]
        piece = run.pieces[-1]
        if (piece.intercept, piece.slope) != (0, frac(3, 2)):
            failures.append(f"Bessel(2,2) f_{j} = {piece}")
    report(capsys, 6, "stable closed form of the radii", failures)


def test_criterion_07_ramification(capsys):
    failures = []
    checks = [
        ("jumps (4,3)", upper_jumps(build_semidirect(4, 3)), [frac(1, 3)]),
        ("jumps (4,6)", upper_jumps(build_semidirect(4, 6)), [frac(1, 3)]),
        ("jumps sl2f3", upper_jumps(sl2f3()[0]), [frac(1, 3), frac(1, 2)]),
    ]
    grp, table = sl2f3()
    for name, dim_name, breaks in [("2-dim", "chi2_0", [frac(1, 2)] * 2), ("3-dim", "chi3", [frac(1, 3)] * 3)]:
        rep = swan_and_breaks(grp, table.character(dim_name))
        checks.append((f"sl2f3 {name} breaks", rep.multiset(), breaks))
        checks.append((f"sl2f3 {name} swan", rep.swan, 1))
    G43 = build_semidirect(4, 3)
    for chi in character_table_semidirect(4, 3).characters:
        if chi.name.startswith("chi_"):
            checks.append((f"(4,3) swan {chi.name}", swan_and_breaks(G43, chi).swan, 1))
    for name, got, want in checks:
        if got != want:
            failures.append(f"{name}: {got} != {want}")
    report(capsys, 7, "upper jumps and Swan conductors", failures)


def test_criterion_08_character_tables(capsys):
    failures = []
    for q, m in [(4, 3), (4, 6)]:
        table = character_table_semidirect(q, m)
        grp = build_semidirect(q, m).group
        if not (table.row_orthogonal() and table.column_orthogonal()):
            failures.append(f"({q},{m}) orthogonality")
        if sum(d * d for d in table.dimensions()) != grp.order:
            failures.append(f"({q},{m}) sum of squared dimensions")
        _, n, _ = semidirect_parameters(q, m)
        r = (q - 1) // n
        # class families listed with the tables: odd m and even m
        expected = 1 + r + (n - 1) if m == n else 2 + 2 * r + (2 * n - 2)
        if len(table.classes) != expected or len(grp.conjugacy_classes()) != expected:
            failures.append(f"({q},{m}) has {len(table.classes)} classes, expected {expected}")
    report(capsys, 8, "character tables of F_q x| Z/m", failures)


def test_criterion_09_composition_and_quotients(capsys):
    failures = []
    for n, p in [(3, 2), (5, 2), (4, 3)]:
        rec = artin_schreier_compose(n, p)
        if not rec.holds or rec.determinant.is_zero():
            failures.append(f"as-compose ({n},{p}) determinant {rec.determinant}")
    for q, m in [(4, 3), (4, 6)]:
        rec = classify_quotients(build_semidirect(q, m), m)
        if not rec.conforms:
            failures.append(
                f"quotients ({q},{m}): normal subgroup of order {rec.offenders[0][0]} has "
                f"non-cyclic quotient of order {rec.offenders[0][1]}"
            )
    report(capsys, 9, "Artin-Schreier composition and quotient classification", failures)


def test_criterion_10_jumps_vs_slopes(capsys):
    failures = []
    grp, _ = sl2f3()
    if not jumps_vs_slopes([frac(1, 2)] * 2, grp):
        failures.append("{1/2, 1/2} rejected")
    if not jumps_vs_slopes([frac(1, 3)] * 3, grp):
        failures.append("{1/3, 1/3, 1/3} rejected")
    if jumps_vs_slopes([frac(1, 4)], grp):
        failures.append("{1/4} accepted")
    report(capsys, 10, "slopes are upper jumps", failures)


def random_laurent(rng, p, degree_range=(-5, 5), terms=4):
    out = {}
    for _ in range(rng.randint(1, terms)):
        coeffs = [frac(rng.randint(-300, 300), rng.randint(1, 9)) for _ in range(p - 1)]
        out[rng.randint(*degree_range)] = PiScalar(p, coeffs)
    f = LaurentElement(p, out)
    return f if not f.is_zero() else LaurentElement.constant(p, 1)


def test_criterion_11_property_suites(capsys):
    failures = []
    rng = random.Random(11)
    for trial in range(500):
        p = rng.choice([2, 3, 5])
        f, g = random_laurent(rng, p), random_laurent(rng, p)
        lhs = gauss_envelope(lmul(f, g))
        ef, eg = gauss_envelope(f), gauss_envelope(g)
        pts = sorted(set(lhs.breaks) | set(ef.breaks) | set(eg.breaks))
        samples = [frac(1, 7)] + pts + [a + (b - a) / 2 for a, b in zip(pts, pts[1:])] + [(pts[-1] if pts else 0) + 3]
        for s in samples:
            # the sympy-norm oracle is slow, so it only backs the first 100 pairs
            oracle_ok = trial >= 100 or lhs(s) == direct_valuation(f, s) + direct_valuation(g, s)
            if lhs(s) != ef(s) + eg(s) or not oracle_ok:
                failures.append(f"envelope additivity fails (trial {trial}, s={s})")
                break
        if failures:
            break
    for trial in range(200):
        p = rng.choice([2, 3])
        ops = [
            TwistedOperator(p, [random_laurent(rng, p, (-3, 3), 2) for _ in range(rng.randint(1, 4))])
            for _ in range(3)
        ]
        u, v, w = ops
        if tmul(tmul(u, v), w) != tmul(u, tmul(v, w)):
            failures.append(f"tmul associativity fails (trial {trial})")
            break
    for mf in CATALOG:
        if not radii_profile(mf.operator).is_convex():
            failures.append(f"{mf.label}: some F_i is not convex")
    report(capsys, 11, "envelope additivity, tmul associativity, F_i convexity", failures)
