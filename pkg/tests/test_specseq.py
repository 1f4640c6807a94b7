from fractions import Fraction

import pytest

from scx.complexes import FilteredChainComplex, Generator
from scx.fields import INF
from scx.generators import gen_scomplex
from scx.rng import Rng
from scx.scomplex import SComplex
from scx.specseq import (
    abutment,
    lambda_rho_comparison,
    generic_page_dims,
    pages_closed_form,
    pages_generic,
)

from test_scomplex import make_s0


def F(*a):
    return Fraction(*a)


def nonzero_cells(page):
    return {pq: d for pq, d in page.cells.items() if d}


# -- closed form on the reference instance (hand computation)


def test_s0_pages_closed_form():
    s = make_s0(r=0)
    p0, p1, p2, p3 = pages_closed_form(s)
    # E0: column 1 holds C_q (x at q=1), column 2 holds R_(q+2) (theta at
    # q=-2), column 3 holds C_(q+3) (x at q=-2)
    assert nonzero_cells(p0) == {(1, 1): 1, (2, -2): 1, (3, -2): 1}
    assert nonzero_cells(p1) == {(1, 1): 1, (2, -2): 1, (3, -2): 1}
    # delta1* is an isomorphism at row q = -2, killing both cells
    assert nonzero_cells(p2) == {(1, 1): 1}
    assert nonzero_cells(p3) == {(1, 1): 1}


def test_s0_pages_generic_match():
    s = make_s0(r=0)
    closed = pages_closed_form(s)
    generic = pages_generic(s)
    for pc, pg in zip(closed, generic):
        for pq in set(pc.cells) | set(pg.cells):
            assert pc.cells.get(pq, 0) == pg.cells.get(pq, 0), (pc.r, pq)


def test_s0_abutment():
    rep = abutment(make_s0(r=0))
    assert rep.stable and rep.match
    assert rep.homology_dims[2] == 1
    assert rep.graded_dims[2] == [1, 0, 0]


# -- degenerate cases from the spec


def test_all_extras_zero_pages_stabilize_at_e1():
    rng = Rng(61)
    for _ in range(8):
        irr = None
        from scx.generators import gen_complex

        irr = gen_complex(rng, 8)
        red = [Generator(f"r{i}", rng.randint(-2, 3), F(rng.randint(-2, 2)))
               for i in range(rng.randint(0, 2))]
        s = SComplex(irr, red)
        p0, p1, p2, p3 = pages_closed_form(s)
        assert p1.cells == p2.cells == p3.cells
        rep = abutment(s)
        assert rep.ok
        # direct sum: dim H_n(total) = dim H_n + dim H_(n-1) + dim R_n
        h = irr.homology()
        for n, dim in rep.homology_dims.items():
            expect = h.dim(n) + h.dim(n - 1) + len(s.red_in_degree(n))
            assert dim == expect


def test_zero_irreducible_leaves_r_column():
    irr = FilteredChainComplex("F2", [], [])
    red = [Generator("t1", 0, F(0)), Generator("t2", 5, F(1))]
    s = SComplex(irr, red)
    _, _, _, p3 = pages_closed_form(s)
    assert nonzero_cells(p3) == {(2, -2): 1, (2, 3): 1}
    assert abutment(s).ok


def test_zero_scomplex_all_pages_zero():
    s = SComplex(FilteredChainComplex("F2", [], []), [])
    for page in pages_generic(s):
        assert nonzero_cells(page) == {}
    assert abutment(s).ok


# -- oracle comparison and stability on random instances


@pytest.mark.parametrize("mode", ["generic", "hyp1", "hyp2"])
def test_pages_closed_equals_generic_random(mode):
    rng = Rng(62)
    for _ in range(12):
        s = gen_scomplex(rng, max_free=7, max_red=2, mode=mode)
        closed = pages_closed_form(s)
        generic = pages_generic(s)
        for pc, pg in zip(closed, generic):
            keys = set(pc.cells) | set(pg.cells)
            for pq in keys:
                assert pc.cells.get(pq, 0) == pg.cells.get(pq, 0), (mode, pc.r, pq)


def test_e3_equals_e4_and_reconstruction_random():
    rng = Rng(63)
    for _ in range(15):
        s = gen_scomplex(rng, max_free=7, max_red=2)
        rep = abutment(s)
        assert rep.stable
        assert rep.match


def test_euler_characteristic_page_invariant():
    rng = Rng(64)
    for _ in range(10):
        s = gen_scomplex(rng, max_free=7, max_red=2)
        pages = pages_generic(s)
        chis = []
        for page in pages:
            chi = sum((-1) ** (p + q) * d for (p, q), d in page.cells.items())
            chis.append(chi)
        assert len(set(chis)) == 1
        total_chi = s.total().euler_characteristic()
        assert chis[0] == total_chi


# -- the lambda/rho comparison


def test_lambda_rho_comparison_s0_example():
    # S0 has delta2 = 0 and u = 0; ker delta1* = 0 in the relevant degree,
    # so hypothesis (1) holds at q = r+1 and both sides are infinite.
    s = make_s0(r=0)
    rep = lambda_rho_comparison(s, 1)
    assert rep.hypothesis1.holds
    assert rep.hypothesis1.lam.value is INF
    assert rep.hypothesis1.rho.value is INF
    assert rep.hypothesis1.inequality_holds


def test_lambda_rho_comparison_direct_sum_both_hypotheses():
    rng = Rng(65)
    from scx.generators import gen_complex

    for _ in range(6):
        irr = gen_complex(rng, 7)
        red = [Generator("t", rng.randint(-1, 2), F(rng.randint(-2, 2)))]
        s = SComplex(irr, red)
        for q in range(-3, 6):
            rep = lambda_rho_comparison(s, q)
            assert rep.hypothesis1.holds
            assert rep.hypothesis1.inequality_holds
            assert rep.hypothesis2.holds
            assert rep.hypothesis2.inequality_holds


def test_lambda_rho_comparison_hyp1_forced():
    rng = Rng(66)
    for _ in range(20):
        s = gen_scomplex(rng, max_free=7, max_red=2, mode="hyp1")
        for q in s.degrees() + [min(s.degrees(), default=0) - 1] if s.degrees() else []:
            rep = lambda_rho_comparison(s, q)
            assert rep.hypothesis1.holds, q
            assert rep.hypothesis1.inequality_holds, (q, rep.hypothesis1)


def test_lambda_rho_comparison_hyp2_forced():
    rng = Rng(67)
    for _ in range(20):
        s = gen_scomplex(rng, max_free=7, max_red=2, mode="hyp2")
        for q in s.degrees():
            rep = lambda_rho_comparison(s, q)
            assert rep.hypothesis2.holds, q
            assert rep.hypothesis2.inequality_holds, (q, rep.hypothesis2)


def test_lambda_rho_comparison_no_assertion_when_hypotheses_fail():
    # S0 with a delta2 wired in violates both vanishing patterns at the
    # right degrees; the report must not assert anything there.
    irr = FilteredChainComplex(
        "F2",
        [Generator("x", 1, F(2)), Generator("z", 1, F(2))],
        [],
    )
    s = SComplex(
        irr,
        [Generator("theta1", 0, F(1)), Generator("theta2", 3, F(3))],
        delta1=[("x", "theta1", 1)],
        delta2=[("theta2", "z", 1)],
    )
    rep = lambda_rho_comparison(s, 1)
    assert not rep.hypothesis2.holds  # delta1* != 0 on H_1
    rep2 = lambda_rho_comparison(s, 2)
    assert not rep2.hypothesis1.holds  # delta2*: R_3 -> H_1 is nonzero
    assert rep2.hypothesis1.lam is None


def test_page_differentials_compose_to_zero():
    # row complexes on page 1: delta2* after delta1* vanishes; page 0
    # columns carry the differential itself, squaring to zero
    rng = Rng(68)
    for _ in range(10):
        s = gen_scomplex(rng, 8, 3)
        p0, p1, _p2, _p3 = pages_closed_form(s)
        for (p, q), m in p0.differentials.items():
            if p in (1, 3):
                below = p0.differentials.get((p, q - 1))
                if below is not None and m.data and below.data:
                    assert below.mul(m).is_zero()
        for (p, q), m in p1.differentials.items():
            if p == 3 and m.data:
                after = p1.differentials.get((2, q))
                if after is not None and after.data:
                    assert after.mul(m).is_zero()
