"""Acceptance criteria, one test per criterion, each printing a verdict line.

Every check is exact (no tolerances: all arithmetic is over F2 and exact
rationals); the stated instance counts and wall-clock budgets are part
of the criteria and asserted.
"""

import json
import time
from fractions import Fraction
from pathlib import Path

from scx.fields import INF, parse_extended
from scx.filtration import psc_check, rho_degree
from scx.generators import (
    gen_complex,
    gen_corr_pair,
    gen_laurent_matrix,
    gen_novikov_morse,
    gen_s_endomorphism,
    gen_scomplex,
    gen_smorphism,
    mutate_scomplex,
    mutate_smorphism,
)
from scx.io import scomplex_from_doc
from scx.linalg import kernel_basis, rank, window_rank
from scx.morse import build_novikov, build_pullup, verify_functoriality
from scx.rng import Rng
from scx.scomplex import (
    assemble_total,
    is_s_homotopic,
    promote_homotopy,
    s_lambda,
    s_rho,
    validate_s,
)
from scx.specseq import abutment, lambda_rho_comparison, pages_closed_form, pages_generic
from scx.suites import brute_image_rank, brute_rho_degree

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def verdict(number: int, ok: bool, detail: str) -> None:
    print(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {number}: {detail}"


def test_criterion_01_relation_equivalence():
    started = time.time()
    rng = Rng(101)
    n = 1000
    broken = 0
    for i in range(n):
        s = gen_scomplex(rng, max_free=14, max_red=3,
                         mode=rng.choice(["generic", "hyp1", "hyp2"]))
        candidate = s if i % 3 == 0 else mutate_scomplex(rng, s)
        assert len(candidate.irr.generators) + len(candidate.red) <= 40
        report = validate_s(candidate)
        assert report.verdicts_coincide, (i, report.violations)
        if not report.relations_hold:
            broken += 1
    elapsed = time.time() - started
    verdict(
        1,
        elapsed < 10 and broken > 100,
        f"{n} candidates ({broken} relation-breaking), relations <=> "
        f"total d^2 = 0, {elapsed:.1f}s",
    )


def test_criterion_02_morphism_equivalence():
    started = time.time()
    rng = Rng(102)
    n = 500
    broken = 0
    for i in range(n):
        f = gen_smorphism(rng, max_free=7, max_red=2)
        candidate = f if i % 3 == 0 else mutate_smorphism(rng, f)
        identities_ok = not any(candidate.identity_defects().values())
        commutes = candidate.commutes_with_totals()
        assert identities_ok == commutes, i
        if not identities_ok:
            broken += 1
    elapsed = time.time() - started
    verdict(
        2,
        elapsed < 10 and broken > 50,
        f"{n} morphism candidates ({broken} identity-breaking), identities "
        f"<=> block commutation, {elapsed:.1f}s",
    )


def test_criterion_03_persistence():
    started = time.time()
    rng = Rng(103)
    n = 500
    pairs_checked = 0
    from scx.filtration import barcode

    for i in range(n):
        c = gen_complex(rng, max_gens=rng.randint(1, 30))
        assert len(c) <= 30
        bc = barcode(c)
        levels = c.levels()
        for q in c.degrees():
            for ti, t in enumerate(levels):
                for s in levels[ti:]:
                    assert bc.alive(q, t, s) == brute_image_rank(c, q, t, s), (i, q, t, s)
                    pairs_checked += 1
            assert rho_degree(c, q).value == brute_rho_degree(c, q), (i, q)
    elapsed = time.time() - started
    verdict(
        3,
        elapsed < 30,
        f"{n} filtered complexes, {pairs_checked} threshold pairs vs brute "
        f"force, rho scans exact, {elapsed:.1f}s",
    )


def test_criterion_04_spectral_sequence():
    started = time.time()
    rng = Rng(104)
    n = 200
    for i in range(n):
        s = gen_scomplex(rng, max_free=9, max_red=3,
                         mode=rng.choice(["generic", "hyp1", "hyp2"]),
                         chamber=rng.chance(1, 5))
        closed = pages_closed_form(s)
        generic = pages_generic(s)
        for pc, pg in zip(closed, generic):
            for pq in set(pc.cells) | set(pg.cells):
                assert pc.cells.get(pq, 0) == pg.cells.get(pq, 0), (i, pc.r, pq)
        rep = abutment(s)
        assert rep.stable, i
        assert rep.match, i
    elapsed = time.time() - started
    verdict(
        4,
        elapsed < 60,
        f"{n} S-complexes: closed-form pages = generic pages, E3 = E4, "
        f"graded reconstruction, {elapsed:.1f}s",
    )


def test_criterion_05_lambda_rho_comparison():
    started = time.time()
    rng = Rng(105)
    n = 200
    asserted = 0
    for i in range(n):
        mode = "hyp1" if i % 2 == 0 else "hyp2"
        s = gen_scomplex(rng, max_free=8, max_red=2, mode=mode)
        degrees = s.degrees()
        if degrees:
            degrees = list(range(min(degrees) - 1, max(degrees) + 2))
        for q in degrees:
            rep = lambda_rho_comparison(s, q)
            hyp = rep.hypothesis1 if mode == "hyp1" else rep.hypothesis2
            assert hyp.holds, (i, q)
            assert hyp.inequality_holds, (i, q, hyp.lam.value, hyp.rho.value)
            asserted += 1
    elapsed = time.time() - started
    verdict(
        5,
        elapsed < 30,
        f"{n} hypothesis-forced instances, {asserted} degree-wise "
        f"lambda >= rho assertions hold, {elapsed:.1f}s",
    )


def test_criterion_06_functoriality():
    started = time.time()
    rng = Rng(106)
    n = 200
    class_checks = 0
    for i in range(n):
        data = gen_corr_pair(rng, max_points=rng.randint(1, 12))
        f = build_pullup(data)
        rep = verify_functoriality(f)
        assert rep.assumption_c_holds, i
        assert rep.asserted, i
        assert rep.ok, (i, rep.counterexamples)
        class_checks += len(rep.class_results)
    elapsed = time.time() - started
    verdict(
        6,
        elapsed < 30,
        f"{n} Morse pairs with Assumption B and acyclic cones: rho never "
        f"increases (degree-wise and on {class_checks} classes), {elapsed:.1f}s",
    )


def test_criterion_07_promotion():
    started = time.time()
    rng = Rng(107)
    n = 200
    for i in range(n):
        s = gen_scomplex(rng, max_free=8, max_red=2)
        endo, L = gen_s_endomorphism(rng, s)
        h, g, cert = promote_homotopy(endo, L)
        assert cert.invertible, i
        assert cert.homotopy_verified and is_s_homotopic(endo, g, h), i
        assert cert.induced_maps_equal, i
    elapsed = time.time() - started
    verdict(
        7,
        elapsed < 10,
        f"{n} endomorphisms id + dL + Ld promoted to verified "
        f"S-isomorphisms with equal induced maps, {elapsed:.1f}s",
    )


def test_criterion_08_novikov_linalg():
    started = time.time()
    rng = Rng(108)
    n = 200
    for i in range(n):
        m = gen_laurent_matrix(rng, max_dim=8, exp_lo=-4, exp_hi=4)
        exact = rank(m)
        assert exact == window_rank(m, 64) == window_rank(m, 128), i
        assert exact == rank(m.transpose()), i
        assert exact + len(kernel_basis(m)) == m.cols, i
    d2_checked = 0
    for i in range(40):
        c = build_novikov(gen_novikov_morse(rng, max_lifts=8))
        assert c.validate().clean
        d2_checked += 1
    elapsed = time.time() - started
    verdict(
        8,
        elapsed < 10,
        f"{n} Laurent matrices: exact rank = window ranks at 64 and 128; "
        f"{d2_checked} deck complexes with exact d^2 = 0, {elapsed:.1f}s",
    )


def test_criterion_09_psc_evaluator():
    started = time.time()
    v = psc_check(Fraction(1), Fraction(5), Fraction(1))
    ok = v.obstructed and v.s2_lower_bound == 96
    v2 = psc_check(Fraction(0), Fraction(0), Fraction(0))
    ok = ok and not v2.obstructed and v2.s2_lower_bound == 0
    v3 = psc_check(Fraction(3), INF, Fraction(100))
    ok = ok and v3.obstructed and v3.s2_lower_bound is None
    v4 = psc_check(INF, Fraction(1), Fraction(0))
    ok = ok and v4.vacuous and not v4.obstructed
    v5 = psc_check(INF, INF, Fraction(2))
    ok = ok and not v5.obstructed and not v5.vacuous
    v6 = psc_check(Fraction(1), Fraction(5), Fraction(1), s2_integral=Fraction(95))
    ok = ok and v6.consistent is False
    v7 = psc_check(Fraction(1), Fraction(5), Fraction(1), s2_integral=Fraction(96))
    ok = ok and v7.consistent is True
    elapsed = time.time() - started
    verdict(
        9,
        ok and elapsed < 1,
        f"worked example (obstructed, bound 96) and all infinity cases, "
        f"{elapsed:.2f}s",
    )


def test_criterion_10_fixture_s0():
    started = time.time()
    with open(FIXTURES / "s0.json", encoding="utf-8") as fh:
        s = scomplex_from_doc(json.load(fh))
    with open(FIXTURES / "s0_expected.json", encoding="utf-8") as fh:
        expected = json.load(fh)

    ok = validate_s(s).clean
    h_irr = s.irr.homology()
    ok = ok and {str(q): d for q, d in h_irr.dims.items() if d} == expected["irr_homology"]

    total = assemble_total(s)
    gens = {
        g.gid: [g.degree, str(g.level.numerator) if g.level.denominator == 1
                else f"{g.level.numerator}/{g.level.denominator}"]
        for g in total.generators
    }
    ok = ok and gens == {k: [v[0], v[1]] for k, v in expected["total_generators"].items()}
    h_tot = total.homology()
    ok = ok and {str(q): d for q, d in h_tot.dims.items() if d} == expected["total_homology"]

    for q_str, val in expected["lambda"].items():
        ok = ok and s_lambda(s, int(q_str)).value == parse_extended(val)
    for q_str, val in expected["rho"].items():
        ok = ok and s_rho(s, int(q_str)).value == parse_extended(val)

    pages = pages_closed_form(s)
    for r_str, cells in expected["pages_nonzero"].items():
        page = pages[int(r_str)]
        nonzero = {f"{p},{q}": d for (p, q), d in page.cells.items() if d}
        ok = ok and nonzero == cells

    rep = abutment(s)
    ok = ok and rep.ok
    for n_str, parts in expected["reconstruction"].items():
        ok = ok and rep.graded_dims.get(int(n_str)) == parts

    elapsed = time.time() - started
    verdict(
        10,
        ok and elapsed < 2,
        f"fixture s0: homology, rho/lambda, pages, reconstruction all match "
        f"the hand-derived values, {elapsed:.2f}s",
    )
