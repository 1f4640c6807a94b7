from fractions import Fraction

import pytest

from scx.fields import (
    INF,
    NEG_INF,
    LaurentPoly,
    NovikovWindow,
    RationalFn,
    WindowOverflowError,
    ext_max,
    format_extended,
    parse_extended,
    poly_divmod,
    poly_gcd,
    poly_mul,
)
from scx.rng import Rng


def rand_laurent(rng, lo=-4, hi=4, density=2):
    exps = [e for e in range(lo, hi + 1) if rng.chance(1, density)]
    return LaurentPoly.from_exponents(exps)


# -- bit polynomials


def test_poly_mul_matches_convolution():
    rng = Rng(1)
    for _ in range(200):
        a = rng.randint(0, 255)
        b = rng.randint(0, 255)
        expect = 0
        for i in range(8):
            for j in range(8):
                if (a >> i) & 1 and (b >> j) & 1:
                    expect ^= 1 << (i + j)
        assert poly_mul(a, b) == expect


def test_poly_divmod_identity():
    rng = Rng(2)
    for _ in range(300):
        a = rng.randint(0, 4095)
        b = rng.randint(1, 255)
        q, r = poly_divmod(a, b)
        assert poly_mul(q, b) ^ r == a
        assert r == 0 or r.bit_length() < b.bit_length()


def test_poly_gcd_divides_both():
    rng = Rng(3)
    for _ in range(200):
        a = rng.randint(1, 1023)
        b = rng.randint(1, 1023)
        g = poly_gcd(a, b)
        assert poly_divmod(a, g)[1] == 0
        assert poly_divmod(b, g)[1] == 0


# -- Laurent polynomials


def test_laurent_parse_str_roundtrip():
    p = LaurentPoly.parse("T^-2+1+T^3")
    assert p.exponents() == [-2, 0, 3]
    assert str(p) == "T^-2+1+T^3"
    assert LaurentPoly.parse(" T ^ 2 + 1 ") == LaurentPoly.parse("1+T^2")
    assert str(LaurentPoly.zero()) == "0"
    assert LaurentPoly.parse("0").is_zero()
    assert LaurentPoly.parse("T") == LaurentPoly.t_power(1)


def test_laurent_parse_rejects_garbage():
    for bad in ["", "T^", "2T", "T*T", "T^1.5"]:
        with pytest.raises(ValueError):
            LaurentPoly.parse(bad)


def test_laurent_canonical_form():
    p = LaurentPoly(3, 0b110)  # T^4 + T^5
    assert p.offset == 4 and p.bits == 0b11
    assert p.min_exp == 4 and p.max_exp == 5
    z = LaurentPoly(7, 0)
    assert z.is_zero() and z.offset == 0


def test_laurent_ring_axioms_random():
    rng = Rng(4)
    for _ in range(200):
        a, b, c = (rand_laurent(rng) for _ in range(3))
        assert a + b == b + a
        assert (a + b) + c == a + (b + c)
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + a == LaurentPoly.zero()


# -- rational functions


def test_rational_canonical_denominator():
    num = LaurentPoly.parse("T^-1+T")
    den = LaurentPoly.parse("T^2+T^3")
    r = RationalFn.from_laurent(num, den)
    assert r.denominator.min_exp == 0
    assert r.denominator.coeff(0) == 1
    # T^-1(1+T^2) / T^2(1+T) = T^-3 (1+T)(1+T)/(1+T) = T^-3 (1+T)
    assert r == RationalFn.from_laurent(LaurentPoly.parse("T^-3+T^-2"))


def test_rational_inverse_law():
    rng = Rng(5)
    checked = 0
    for _ in range(300):
        a = rand_laurent(rng)
        b = rand_laurent(rng)
        if a.is_zero() or b.is_zero():
            continue
        r = RationalFn.from_laurent(a, b)
        assert (r * r.inv()).is_one()
        checked += 1
    assert checked > 100


def test_rational_reduction_idempotent():
    rng = Rng(6)
    for _ in range(200):
        a, b = rand_laurent(rng), rand_laurent(rng)
        if b.is_zero():
            continue
        r = RationalFn.from_laurent(a, b)
        again = RationalFn(r.offset, r.num, r.den)
        assert again == r


def test_rational_one_plus_t_inverse_exists():
    r = RationalFn.from_laurent(LaurentPoly.parse("1+T"))
    inv = r.inv()
    assert (r * inv).is_one()
    assert inv.denominator == LaurentPoly.parse("1+T")


def test_rational_field_axioms_random():
    rng = Rng(7)
    for _ in range(150):
        vals = []
        while len(vals) < 3:
            a, b = rand_laurent(rng), rand_laurent(rng)
            if not b.is_zero():
                vals.append(RationalFn.from_laurent(a, b))
        a, b, c = vals
        assert a + b == b + a
        assert a * (b + c) == a * b + a * c
        assert a + a == RationalFn.zero()


# -- Novikov windows


def test_window_from_laurent_and_inverse():
    w = 64
    p = NovikovWindow.from_laurent(LaurentPoly.parse("1+T"), w)
    inv = p.inv()
    prod = p * inv
    assert prod.bits == 1 and prod.origin == 0


def test_window_inverse_of_monomial_is_exact():
    w = 32
    p = NovikovWindow.from_laurent(LaurentPoly.t_power(-3), w)
    assert p.inv().exact
    assert p.inv().origin == 3


def test_window_add_alignment_and_truncation():
    w = 8
    a = NovikovWindow.from_laurent(LaurentPoly.parse("1"), w)
    b = NovikovWindow.from_laurent(LaurentPoly.parse("T^5"), w)
    s = a + b
    assert s.exact and s.bits == 0b100001
    # an operand entirely above the window is swallowed, flagged inexact
    far = NovikovWindow(9, 1, w, True)
    swallowed = a + far
    assert swallowed.origin == 0 and swallowed.bits == 1 and not swallowed.exact


def test_window_overflow_on_wide_laurent():
    with pytest.raises(WindowOverflowError):
        NovikovWindow.from_laurent(LaurentPoly.from_exponents([0, 70]), 64)


def test_window_matches_rational_leading_terms():
    rng = Rng(8)
    w = 64
    for _ in range(100):
        a, b = rand_laurent(rng), rand_laurent(rng)
        if a.is_zero() or b.is_zero():
            continue
        ratio = RationalFn.from_laurent(a, b)
        win = NovikovWindow.from_laurent(a, w) * NovikovWindow.from_laurent(b, w).inv()
        assert win.t_order() == ratio.t_order()


# -- extended rationals


def test_extended_ordering():
    assert INF > Fraction(10**9)
    assert NEG_INF < Fraction(-(10**9))
    assert not (INF > INF)
    assert INF >= INF
    assert ext_max([]) is NEG_INF
    assert ext_max([Fraction(1), INF]) is INF
    assert ext_max([Fraction(1), Fraction(3, 2)]) == Fraction(3, 2)


def test_extended_parse_format():
    assert parse_extended("inf") is INF
    assert parse_extended("-inf") is NEG_INF
    assert parse_extended("3/4") == Fraction(3, 4)
    assert format_extended(Fraction(3, 4)) == "3/4"
    assert format_extended(Fraction(5)) == "5"
    assert format_extended(INF) == "inf"
