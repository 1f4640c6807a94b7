from fractions import Fraction

import pytest

from scx.complexes import (
    ChainMap,
    FilteredChainComplex,
    Generator,
    InvalidComplexError,
    chain_level,
    induced_map,
    is_quasi_iso,
    mapping_cone,
)
from scx.fields import INF, NEG_INF, LaurentPoly
from scx.rng import Rng


def F(x):
    return Fraction(x)


def make(gens, diff, **kw):
    return FilteredChainComplex(
        "F2", [Generator(g, d, F(l)) for g, d, l in gens], diff, **kw
    )


def two_gen():
    # d b = a with l(a) = 1, l(b) = 2
    return make([("a", 0, 1), ("b", 1, 2)], [("b", "a", 1)])


def rand_complex(rng, max_per_degree=3, degrees=(0, 1, 2)):
    """Random valid filtered complex: matched pairs + survivors + base change."""
    gens = []
    diff = []
    counter = [0]

    def fresh(deg, level):
        counter[0] += 1
        gid = f"g{counter[0]}"
        gens.append((gid, deg, level))
        return gid

    for d in degrees[:-1]:
        for _ in range(rng.randint(0, max_per_degree)):
            lo = rng.randint(-4, 4)
            hi = lo + rng.randint(0, 4)
            a = fresh(d, lo)
            b = fresh(d + 1, hi)
            diff.append((b, a, 1))
    for d in degrees:
        for _ in range(rng.randint(0, max_per_degree)):
            fresh(d, rng.randint(-4, 4))
    return make(gens, diff)


# -- validate


def test_validate_zero_differential_clean():
    c = make([("x", 0, 5), ("y", 3, -2)], [])
    assert c.validate().clean


def test_validate_filtration_ok():
    assert two_gen().validate().clean


def test_validate_filtration_violation():
    with pytest.raises(InvalidComplexError):
        make([("a", 0, 2), ("b", 1, 1)], [("b", "a", 1)])
    c = make([("a", 0, 2), ("b", 1, 1)], [("b", "a", 1)], unchecked=True)
    report = c.validate()
    bad = report.by_law("filtration")
    assert len(bad) == 1 and "b" in bad[0].detail and "a" in bad[0].detail


def test_validate_d_squared_violation():
    c = make(
        [("a", 0, 0), ("b", 1, 1), ("c", 2, 2)],
        [("b", "a", 1), ("c", "b", 1)],
        unchecked=True,
    )
    assert c.validate().by_law("d_squared")


def test_validate_degree_violation():
    c = make([("a", 0, 0), ("c", 2, 2)], [("c", "a", 1)], unchecked=True)
    assert c.validate().by_law("degree")


# -- homology


def test_homology_empty():
    c = make([], [])
    assert c.homology().total_dim() == 0


def test_homology_single_generator():
    c = make([("x", 4, 0)], [])
    h = c.homology()
    assert h.dim(4) == 1 and h.total_dim() == 1
    assert h.reps[4] == [{"x": 1}]


def test_homology_acyclic_pair():
    h = two_gen().homology()
    assert h.total_dim() == 0


def test_homology_rank_identity_random():
    from scx.linalg import rank

    rng = Rng(21)
    for _ in range(40):
        c = rand_complex(rng)
        h = c.homology()
        for q in c.degrees():
            expect = c.dim(q) - rank(c.d_matrix(q)) - rank(c.d_matrix(q + 1))
            assert h.dim(q) == expect


def test_homology_reps_are_independent_cycles():
    rng = Rng(22)
    for _ in range(20):
        c = rand_complex(rng)
        h = c.homology()
        for q, reps in h.reps.items():
            for r in reps:
                assert c.d_chain(r) == {}
                assert not h.is_boundary(q, r)
            coords = [h.class_coords(q, r) for r in reps]
            for i, co in enumerate(coords):
                assert co == {i: 1}


def test_chain_level():
    c = two_gen()
    assert chain_level(c, {"a": 1}) == 1
    assert chain_level(c, {"a": 1, "b": 1}) == 2
    assert chain_level(c, {}) is NEG_INF


# -- novikov complexes


def test_novikov_complex_homology():
    # d p = (1+T) q over the deck ring: H = 0 over the proxy field
    p = Generator("p", 1, F(0))
    q = Generator("q", 0, F(0))
    c = FilteredChainComplex(
        "novikov", [p, q], [("p", "q", LaurentPoly.parse("1+T"))],
        filtered=False, deck=True,
    )
    assert c.homology().total_dim() == 0


def test_novikov_filtration_law_uses_min_exponent():
    # l(d p) = l(q) - min_exp(1+T) = 0; fine when l(p) = 0
    p = Generator("p", 1, F(0))
    q = Generator("q", 0, F(0))
    FilteredChainComplex(
        "novikov", [p, q], [("p", "q", LaurentPoly.parse("1+T"))], deck=True
    )
    # T^-1 coefficient raises the level by 1: violation
    with pytest.raises(InvalidComplexError):
        FilteredChainComplex(
            "novikov", [p, q], [("p", "q", LaurentPoly.parse("T^-1"))], deck=True
        )


# -- chain maps


def test_chain_map_identity_verifies():
    c = two_gen()
    f = ChainMap.identity(c)
    assert f.verify() == []
    assert f.level_shift == 0


def test_chain_map_rejects_non_chain_map():
    c = two_gen()
    with pytest.raises(ValueError):
        ChainMap(c, c, 0, [("b", "b", 1), ("a", "a", 1), ("b", "a", 0), ("a", "b", 1)])


def test_chain_map_level_certificate_enforced():
    src = make([("a", 0, 0)], [])
    dst = make([("a2", 0, 5)], [])
    with pytest.raises(ValueError):
        ChainMap(src, dst, 0, [("a", "a2", 1)], level_shift=F(1))
    f = ChainMap(src, dst, 0, [("a", "a2", 1)], level_shift=F(5))
    assert f.verify() == []
    g = ChainMap(src, dst, 0, [("a", "a2", 1)], level_shift=INF)
    assert g.verify() == []


# -- mapping cone


def test_cone_of_identity_acyclic():
    rng = Rng(23)
    for _ in range(10):
        c = rand_complex(rng)
        ok, cert = is_quasi_iso(ChainMap.identity(c))
        assert ok, cert


def test_cone_of_zero_map_direct_sum():
    c1 = make([("x", 0, 0)], [])
    c2 = make([("y", 1, 0)], [])
    f = ChainMap.zero(c1, c2)
    cone = mapping_cone(f)
    h = cone.homology()
    # cone_n = c1_(n-1) + c2_n: one class in degree 1 from each side
    assert h.dim(1) == 2
    assert h.total_dim() == 2


def test_cone_quasi_iso_from_two_gen_example():
    src = two_gen()
    dst = make([("z", 5, 0)], [])
    # both acyclic-to-H: src has H = 0; zero map to a complex with H != 0 is not a q-iso
    f = ChainMap.zero(src, dst)
    ok, _ = is_quasi_iso(f)
    assert not ok
    # zero map between acyclic complexes is a quasi-iso
    dst2 = make([("p", 0, 1), ("q", 1, 2)], [("q", "p", 1)])
    ok2, _ = is_quasi_iso(ChainMap.zero(src, dst2))
    assert ok2


def test_cone_euler_characteristic_identity():
    rng = Rng(24)
    for _ in range(20):
        src = rand_complex(rng)
        dst = rand_complex(rng)
        k = rng.randint(-2, 2)
        f = ChainMap(src, dst, k, [])  # zero map of degree k
        cone = mapping_cone(f)
        assert cone.euler_characteristic() == dst.euler_characteristic() - (
            -1
        ) ** k * src.euler_characteristic()


def test_cone_long_exact_sequence_ranks():
    from scx.linalg import rank as mrank

    rng = Rng(25)
    for _ in range(25):
        src = rand_complex(rng)
        dst = rand_complex(rng)
        entries = []
        for g in src.generators:
            for h in dst.gens_in_degree(g.degree):
                if rng.chance(1, 3):
                    entries.append((g.gid, h.gid, 1))
        try:
            f = ChainMap(src, dst, 0, entries)
        except ValueError:
            continue
        cone = mapping_cone(f)
        hc = cone.homology()
        fstar = induced_map(f)
        for q in cone.degrees():
            # cone_n = src_(n-1) + dst_n
            m_this = fstar.get(q, None)
            m_below = fstar.get(q - 1, None)
            coker = dst.homology().dim(q) - (mrank(m_this) if m_this else 0)
            kerd = (
                src.homology().dim(q - 1) - (mrank(m_below) if m_below else 0)
                if q - 1 in fstar or src.homology().dim(q - 1) == 0
                else src.homology().dim(q - 1)
            )
            assert hc.dim(q) == coker + kerd


def test_induced_map_identity_and_zero():
    c = make([("x", 0, 0), ("y", 1, 1)], [])
    ident = induced_map(ChainMap.identity(c))
    assert ident[0].data == {(0, 0): 1}
    assert ident[1].data == {(0, 0): 1}
    zero = induced_map(ChainMap.zero(c, c))
    assert zero[0].data == {} and zero[1].data == {}


def test_quasi_iso_iff_induced_invertible():
    from scx.linalg import rank as mrank

    rng = Rng(26)
    for _ in range(30):
        src = rand_complex(rng)
        dst = rand_complex(rng)
        entries = []
        for g in src.generators:
            for h in dst.gens_in_degree(g.degree):
                if rng.chance(1, 3):
                    entries.append((g.gid, h.gid, 1))
        try:
            f = ChainMap(src, dst, 0, entries)
        except ValueError:
            continue
        ok, _ = is_quasi_iso(f)
        fstar = induced_map(f)
        hs, ht = src.homology(), dst.homology()
        degrees = set(hs.dims) | set(ht.dims)
        invertible = all(
            hs.dim(q) == ht.dim(q) and mrank(fstar.get(q)) == hs.dim(q)
            if hs.dim(q) or ht.dim(q)
            else True
            for q in degrees
            if q in fstar or hs.dim(q) or ht.dim(q)
        )
        assert ok == invertible


def test_cone_les_ranks_degree_k():
    from scx.linalg import rank as mrank

    rng = Rng(27)
    checked = 0
    for _ in range(60):
        src = rand_complex(rng)
        dst = rand_complex(rng)
        k = rng.randint(-2, 2)
        entries = []
        for g in src.generators:
            for h in dst.gens_in_degree(g.degree + k):
                if rng.chance(1, 3):
                    entries.append((g.gid, h.gid, 1))
        try:
            f = ChainMap(src, dst, k, entries)
        except ValueError:
            continue
        cone = mapping_cone(f)
        hc = cone.homology()
        fstar = induced_map(f)
        hs, ht = src.homology(), dst.homology()

        def coker(q):
            m = fstar.get(q)
            return ht.dim(q + k) - (mrank(m) if m is not None else 0)

        def kerd(q):
            m = fstar.get(q)
            return hs.dim(q) - (mrank(m) if m is not None else 0)

        degrees = set(hc.dims) | {q + k for q in hs.dims} | set(ht.dims)
        for n in degrees:
            assert hc.dim(n) == coker(n - k) + kerd(n - k - 1), (k, n)
        checked += 1
    assert checked > 15
