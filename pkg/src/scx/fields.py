"""Exact scalar arithmetic for the coefficient tower.

Three coefficient kinds appear in complexes: the two-element field F2,
Laurent polynomials over F2 in the deck symbol T, and reduced rational
functions (the exact proxy field used to take ranks of Laurent
matrices).  Truncated Novikov series ("windows") exist only as an
independent cross-check for those ranks.

F2[T] polynomials are packed into Python ints, bit k holding the
coefficient of T^k, so products and gcds are plain integer bit work.
"""

from __future__ import annotations

from fractions import Fraction

# ---------------------------------------------------------------------------
# F2[T] polynomials as int bitmasks


def poly_mul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def poly_degree(a: int) -> int:
    """Degree of the bitmask polynomial; -1 for the zero polynomial."""
    return a.bit_length() - 1


def poly_divmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise ZeroDivisionError("division by zero polynomial")
    db = poly_degree(b)
    q = 0
    while a and poly_degree(a) >= db:
        shift = poly_degree(a) - db
        q ^= 1 << shift
        a ^= b << shift
    return q, a


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_divmod(a, b)[1]
    return a


def _low_exp(bits: int) -> int:
    """Index of the lowest set bit (valuation at T = 0)."""
    return (bits & -bits).bit_length() - 1


# ---------------------------------------------------------------------------
# Laurent polynomials


class LaurentPoly:
    """Element of F2[T, T^-1], canonically T^offset * p(T) with p(0) = 1."""

    __slots__ = ("offset", "bits")

    def __init__(self, offset: int = 0, bits: int = 0):
        if bits == 0:
            self.offset = 0
            self.bits = 0
        else:
            low = _low_exp(bits)
            self.offset = offset + low
            self.bits = bits >> low

    # -- constructors

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls(0, 0)

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls(0, 1)

    @classmethod
    def t_power(cls, k: int) -> "LaurentPoly":
        return cls(k, 1)

    @classmethod
    def from_exponents(cls, exps) -> "LaurentPoly":
        bits = 0
        exps = list(exps)
        if not exps:
            return cls.zero()
        lo = min(exps)
        for e in exps:
            bits ^= 1 << (e - lo)
        return cls(lo, bits)

    # -- structure

    def is_zero(self) -> bool:
        return self.bits == 0

    def is_one(self) -> bool:
        return self.offset == 0 and self.bits == 1

    def is_monomial(self) -> bool:
        return self.bits == 1

    @property
    def min_exp(self) -> int:
        if self.bits == 0:
            raise ValueError("zero polynomial has no exponents")
        return self.offset

    @property
    def max_exp(self) -> int:
        if self.bits == 0:
            raise ValueError("zero polynomial has no exponents")
        return self.offset + poly_degree(self.bits)

    def exponents(self) -> list[int]:
        out = []
        bits, e = self.bits, self.offset
        while bits:
            if bits & 1:
                out.append(e)
            bits >>= 1
            e += 1
        return out

    def coeff(self, k: int) -> int:
        if self.bits == 0 or k < self.offset:
            return 0
        return (self.bits >> (k - self.offset)) & 1

    # -- arithmetic

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if self.bits == 0:
            return other
        if other.bits == 0:
            return self
        lo = min(self.offset, other.offset)
        bits = (self.bits << (self.offset - lo)) ^ (other.bits << (other.offset - lo))
        return LaurentPoly(lo, bits)

    __sub__ = __add__

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        if self.bits == 0 or other.bits == 0:
            return LaurentPoly.zero()
        return LaurentPoly(self.offset + other.offset, poly_mul(self.bits, other.bits))

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by T^k."""
        if self.bits == 0:
            return self
        return LaurentPoly(self.offset + k, self.bits)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LaurentPoly)
            and self.offset == other.offset
            and self.bits == other.bits
        )

    def __hash__(self):
        return hash((self.offset, self.bits))

    def __bool__(self):
        return self.bits != 0

    # -- text grammar: terms "T^k" | "T" | "1" joined by "+"

    def __str__(self) -> str:
        if self.bits == 0:
            return "0"
        terms = []
        for e in self.exponents():
            if e == 0:
                terms.append("1")
            elif e == 1:
                terms.append("T")
            else:
                terms.append(f"T^{e}")
        return "+".join(terms)

    def __repr__(self):
        return f"LaurentPoly({str(self)!r})"

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        compact = "".join(text.split())
        if compact == "" :
            raise ValueError("empty Laurent polynomial literal")
        if compact == "0":
            return cls.zero()
        exps = []
        for term in compact.split("+"):
            if term == "1":
                exps.append(0)
            elif term == "T":
                exps.append(1)
            elif term.startswith("T^"):
                try:
                    exps.append(int(term[2:]))
                except ValueError:
                    raise ValueError(f"bad Laurent term {term!r}") from None
            else:
                raise ValueError(f"bad Laurent term {term!r}")
        return cls.from_exponents(exps)


# ---------------------------------------------------------------------------
# Rational functions over F2(T)


class RationalFn:
    """Reduced fraction T^offset * num/den with num(0) = den(0) = 1.

    The canonical form clears all common T powers into ``offset`` so the
    denominator has minimal exponent 0, and divides out the polynomial
    gcd; equal values are structurally equal.
    """

    __slots__ = ("offset", "num", "den")

    def __init__(self, offset: int, num: int, den: int):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if num == 0:
            self.offset, self.num, self.den = 0, 0, 1
            return
        ln, ld = _low_exp(num), _low_exp(den)
        num >>= ln
        den >>= ld
        g = poly_gcd(num, den)
        if g != 1:
            num = poly_divmod(num, g)[0]
            den = poly_divmod(den, g)[0]
        self.offset = offset + ln - ld
        self.num = num
        self.den = den

    @classmethod
    def zero(cls) -> "RationalFn":
        return cls(0, 0, 1)

    @classmethod
    def one(cls) -> "RationalFn":
        return cls(0, 1, 1)

    @classmethod
    def from_laurent(cls, p: LaurentPoly, q: LaurentPoly | None = None) -> "RationalFn":
        if q is None:
            return cls(p.offset, p.bits, 1)
        if q.is_zero():
            raise ZeroDivisionError("zero denominator")
        return cls(p.offset - q.offset, p.bits, q.bits)

    @property
    def numerator(self) -> LaurentPoly:
        return LaurentPoly(self.offset, self.num)

    @property
    def denominator(self) -> LaurentPoly:
        return LaurentPoly(0, self.den)

    def is_zero(self) -> bool:
        return self.num == 0

    def is_one(self) -> bool:
        return self.offset == 0 and self.num == 1 and self.den == 1

    def t_order(self) -> int:
        """Valuation at T = 0 (well defined since num(0) = den(0) = 1)."""
        if self.num == 0:
            raise ValueError("zero has no T-order")
        return self.offset

    def __add__(self, other: "RationalFn") -> "RationalFn":
        if self.num == 0:
            return other
        if other.num == 0:
            return self
        lo = min(self.offset, other.offset)
        a = poly_mul(self.num, other.den) << (self.offset - lo)
        b = poly_mul(other.num, self.den) << (other.offset - lo)
        return RationalFn(lo, a ^ b, poly_mul(self.den, other.den))

    __sub__ = __add__

    def __mul__(self, other: "RationalFn") -> "RationalFn":
        if self.num == 0 or other.num == 0:
            return RationalFn.zero()
        return RationalFn(
            self.offset + other.offset,
            poly_mul(self.num, other.num),
            poly_mul(self.den, other.den),
        )

    def inv(self) -> "RationalFn":
        if self.num == 0:
            raise ZeroDivisionError("inverse of zero")
        return RationalFn(-self.offset, self.den, self.num)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, RationalFn)
            and self.offset == other.offset
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.offset, self.num, self.den))

    def __bool__(self):
        return self.num != 0

    def __str__(self):
        if self.den == 1:
            return str(self.numerator)
        return f"({self.numerator})/({self.denominator})"

    __repr__ = __str__


# ---------------------------------------------------------------------------
# Truncated Novikov series


class WindowOverflowError(ArithmeticError):
    """The window width is too small to carry out the computation."""


class NovikovWindow:
    """T^origin * (bits) truncated to ``width`` coefficients.

    ``exact`` marks values known to be genuine Laurent polynomials fully
    inside the window; only then does an all-zero bit pattern certify a
    true zero.  Alignment that would discard an operand's entire support
    raises :class:`WindowOverflowError` instead of silently losing it.
    """

    __slots__ = ("origin", "bits", "width", "exact")

    def __init__(self, origin: int, bits: int, width: int, exact: bool):
        if width <= 0:
            raise ValueError("window width must be positive")
        bits &= (1 << width) - 1
        if bits == 0:
            self.origin, self.bits = 0, 0
        else:
            low = _low_exp(bits)
            self.origin = origin + low
            self.bits = bits >> low
        self.width = width
        self.exact = exact

    @classmethod
    def from_laurent(cls, p: LaurentPoly, width: int) -> "NovikovWindow":
        if p.is_zero():
            return cls(0, 0, width, True)
        if poly_degree(p.bits) >= width:
            raise WindowOverflowError(
                f"Laurent support of width {poly_degree(p.bits) + 1} exceeds window {width}"
            )
        return cls(p.offset, p.bits, width, True)

    @classmethod
    def zero(cls, width: int) -> "NovikovWindow":
        return cls(0, 0, width, True)

    @classmethod
    def one(cls, width: int) -> "NovikovWindow":
        return cls(0, 1, width, True)

    def is_zero(self) -> bool:
        return self.bits == 0

    def t_order(self) -> int:
        if self.bits == 0:
            raise ValueError("zero window has no T-order")
        return self.origin

    def _check_width(self, other: "NovikovWindow") -> None:
        if self.width != other.width:
            raise ValueError("mixed window widths")

    def __add__(self, other: "NovikovWindow") -> "NovikovWindow":
        self._check_width(other)
        if self.bits == 0:
            return NovikovWindow(other.origin, other.bits, other.width, other.exact and self.exact)
        if other.bits == 0:
            return NovikovWindow(self.origin, self.bits, self.width, self.exact and other.exact)
        lo = min(self.origin, other.origin)
        sa, sb = self.origin - lo, other.origin - lo
        # an operand living >= width digits above the other is entirely
        # beyond this precision: keep the low one, flag the loss
        if sb >= self.width:
            return NovikovWindow(self.origin, self.bits, self.width, False)
        if sa >= self.width:
            return NovikovWindow(other.origin, other.bits, other.width, False)
        a = self.bits << sa
        b = other.bits << sb
        mask = (1 << self.width) - 1
        dropped = ((a ^ b) & ~mask) != 0
        exact = self.exact and other.exact and not dropped
        return NovikovWindow(lo, (a ^ b) & mask, self.width, exact)

    def __mul__(self, other: "NovikovWindow") -> "NovikovWindow":
        self._check_width(other)
        if self.bits == 0 or other.bits == 0:
            return NovikovWindow(0, 0, self.width, self.exact and other.exact)
        prod = poly_mul(self.bits, other.bits)
        mask = (1 << self.width) - 1
        exact = self.exact and other.exact and prod <= mask
        return NovikovWindow(self.origin + other.origin, prod & mask, self.width, exact)

    def inv(self) -> "NovikovWindow":
        if self.bits == 0:
            raise WindowOverflowError("inverse of a window-zero value")
        u = self.bits  # u(0) = 1 by normalization
        w = self.width
        mask = (1 << w) - 1
        v = 1
        r = (poly_mul(u, v) ^ 1) & mask
        while r:
            k = _low_exp(r)
            v ^= 1 << k
            r ^= poly_mul(u, 1 << k)
            r &= mask
        return NovikovWindow(-self.origin, v, w, self.bits == 1)

    def exact_div(self, other: "NovikovWindow") -> "NovikovWindow":
        """Exact polynomial division (Bareiss steps guarantee divisibility)."""
        self._check_width(other)
        if other.bits == 0:
            raise ZeroDivisionError("division by zero window")
        if not (self.exact and other.exact):
            raise WindowOverflowError("exact division needs exact operands")
        if self.bits == 0:
            return NovikovWindow(0, 0, self.width, True)
        q, r = poly_divmod(self.bits, other.bits)
        if r != 0:
            raise ArithmeticError("window division is not exact")
        return NovikovWindow(self.origin - other.origin, q, self.width, True)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, NovikovWindow)
            and self.origin == other.origin
            and self.bits == other.bits
            and self.width == other.width
            and self.exact == other.exact
        )

    def __repr__(self):
        tag = "exact" if self.exact else f"mod T^{self.origin + self.width}"
        return f"NovikovWindow(T^{self.origin}*{self.bits:#x}, {tag})"


# ---------------------------------------------------------------------------
# Extended rationals (levels and spectral values)


class _PlusInfinity:
    __slots__ = ()

    def __repr__(self):
        return "inf"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("scx.+inf")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __add__(self, other):
        if other is NEG_INF:
            raise ArithmeticError("inf + -inf")
        return self

    __radd__ = __add__

    def __neg__(self):
        return NEG_INF


class _MinusInfinity:
    __slots__ = ()

    def __repr__(self):
        return "-inf"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("scx.-inf")

    def __lt__(self, other):
        return other is not self

    def __le__(self, other):
        return True

    def __gt__(self, other):
        return False

    def __ge__(self, other):
        return other is self

    def __add__(self, other):
        if other is INF:
            raise ArithmeticError("-inf + inf")
        return self

    __radd__ = __add__

    def __neg__(self):
        return INF


INF = _PlusInfinity()
NEG_INF = _MinusInfinity()

# An extended rational is a Fraction, INF, or NEG_INF.
ExtRational = object


def is_finite(x) -> bool:
    return x is not INF and x is not NEG_INF


def ext_max(values):
    best = NEG_INF
    for v in values:
        if v is INF:
            return INF
        if best is NEG_INF or (v is not NEG_INF and v > best):
            best = v
    return best


def parse_extended(text: str):
    """Parse "p/q", "p", or "inf"/"-inf" into an extended rational."""
    t = text.strip()
    if t in ("inf", "+inf", "Inf", "INF"):
        return INF
    if t == "-inf":
        return NEG_INF
    return Fraction(t)


def format_extended(x) -> str:
    if x is INF:
        return "inf"
    if x is NEG_INF:
        return "-inf"
    return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
