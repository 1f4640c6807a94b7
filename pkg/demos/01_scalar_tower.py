"""Tour of the exact coefficient tower and the sparse kernels.

Everything downstream (homology dimensions, spectral invariants, page
dimensions) reduces to exact linear algebra over F2, Laurent
polynomials in the deck symbol T, or reduced rational functions, so we
start here.
"""

from scx.fields import LaurentPoly, NovikovWindow, RationalFn
from scx.linalg import (
    LAURENT,
    SparseMatrix,
    kernel_basis,
    rank,
    reduced_echelon,
    solve_in_image,
    window_rank,
)

# Laurent polynomials are written in a tiny text grammar.
p = LaurentPoly.parse("T^-2+1+T^3")
q = LaurentPoly.parse("1+T")
print("p       =", p)
print("q       =", q)
print("p*q     =", p * q)
print("p+p     =", p + p, "(characteristic 2)")

# Rational functions are kept reduced, denominators normalized to start
# at T^0, so equality is structural.
r = RationalFn.from_laurent(p, q)
print("p/q     =", r)
print("(p/q)*(q/p) =", (r * r.inv()))

# A 2x2 Laurent matrix: its rank is taken exactly over the fraction
# field, and the truncated-window elimination cross-checks it.
m = SparseMatrix(
    LAURENT, 2, 2,
    [(0, 0, q), (0, 1, LaurentPoly.one()), (1, 0, q * q), (1, 1, q)],
)
print("\nmatrix rank (exact)       =", rank(m))
print("matrix rank (window 64)   =", window_rank(m, 64))
print("matrix rank (window 128)  =", window_rank(m, 128))
print("kernel basis              =", kernel_basis(m))

# Windows carry an exactness flag: a genuine Laurent polynomial knows it
# is fully inside the window, a series inverse does not.
w = NovikovWindow.from_laurent(q, 32)
print("\nwindow of 1+T:", w)
print("its inverse:  ", w.inv(), "(leading coefficients of the geometric series)")

# Deterministic solves: for [1 1; 0 0] x = (1, 0) both unit vectors
# work; the pivot rule always returns the first column's.
m2 = SparseMatrix("F2", 2, 2, [(0, 0, 1), (0, 1, 1)])
print("\nsolve [1 1; 0 0] x = e0 ->", solve_in_image(m2, {0: 1}))
echelon, pivots = reduced_echelon(m2)
print("reduced echelon pivots    =", pivots)
