"""Deck-coefficient (Laurent) S-complexes through the full pipeline."""

from scx.generators import gen_scomplex, gen_smorphism, mutate_scomplex
from scx.rng import Rng
from scx.scomplex import validate_s
from scx.specseq import abutment, pages_closed_form, pages_generic


def test_novikov_scomplex_valid_all_modes():
    for seed in range(8):
        for mode in ("generic", "hyp1", "hyp2"):
            s = gen_scomplex(Rng(seed), 6, 2, mode=mode, field="novikov")
            report = validate_s(s)
            assert report.clean, (seed, mode, report.violations[:2])
            assert report.verdicts_coincide


def test_novikov_relation_equivalence_with_mutants():
    rng = Rng(91)
    coincide = 0
    for _ in range(40):
        s = gen_scomplex(rng, 6, 2, field="novikov")
        m = mutate_scomplex(rng, s)
        rep = validate_s(m)
        assert rep.verdicts_coincide
        coincide += 1
    assert coincide == 40


def test_novikov_pages_closed_equals_generic():
    rng = Rng(92)
    for _ in range(10):
        s = gen_scomplex(rng, 6, 2, field="novikov")
        closed = pages_closed_form(s)
        generic = pages_generic(s)
        for pc, pg in zip(closed, generic):
            for pq in set(pc.cells) | set(pg.cells):
                assert pc.cells.get(pq, 0) == pg.cells.get(pq, 0), (pc.r, pq)
        assert abutment(s).ok


def test_novikov_smorphism_identities():
    rng = Rng(93)
    for _ in range(8):
        f = gen_smorphism(rng, 5, 2, field="novikov")
        assert f.verify() == []
        assert f.commutes_with_totals()


def test_novikov_scomplex_roundtrip():
    from scx import io as scxio

    rng = Rng(94)
    for _ in range(6):
        s = gen_scomplex(rng, 6, 2, field="novikov")
        doc = scxio.scomplex_to_doc(s)
        back = scxio.scomplex_from_doc(doc)
        assert scxio.scomplex_to_doc(back) == doc
