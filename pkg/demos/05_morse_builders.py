"""From combinatorial flow data to verified complexes and maps.

Builders validate the global consistency laws: squared differentials,
the four structural relations of equivariant orbit data, the chain-map
identities of correspondence counts, and the descending-flow law tying
function values to the filtration.
"""

from fractions import Fraction as F

from scx.complexes import InvalidComplexError
from scx.fields import LaurentPoly
from scx.filtration import novikov_rho_window
from scx.generators import gen_corr_pair
from scx.morse import (
    CorrespondenceData,
    EquivariantOrbitData,
    MorseData,
    NovikovMorseData,
    build_equivariant,
    build_morse,
    build_novikov,
    build_pullup,
    verify_functoriality,
)
from scx.rng import Rng

# The height function on the circle: two critical points, two flow
# lines that cancel mod 2.
circle = MorseData(
    points=[("max", 1, 1), ("min", 0, -1)],
    flows={("max", "min"): 0},
)
c = build_morse(circle)
print("circle homology dims:", {q: d for q, d in c.homology().dims.items() if d})

# Inconsistent counts are rejected loudly, naming the violated law.
try:
    build_morse(MorseData([("a", 0, 5), ("b", 1, 1)], {("b", "a"): 1}))
except InvalidComplexError as exc:
    print("ascending flow rejected:", exc.report.violations[0].law)

# Equivariant orbit data: one free orbit hitting the fixed point.
s = build_equivariant(
    EquivariantOrbitData(
        free=[("x", 1, 2)], fixed=[("theta", 0, 0)],
        delta1={("x", "theta"): 1}, chamber=F(0),
    )
)
print("orbit data builds a clean S-complex:", s.validate().clean)

# A correspondence with Assumption B (target values below source values)
# and an acyclic cone: the spectral invariant can only drop.
data = gen_corr_pair(Rng(5), max_points=10)
f = build_pullup(data)
rep = verify_functoriality(f)
print("\ncorrespondence map: level certificate c =", f.level_shift)
print("cone acyclic:", rep.assumption_c_holds, "| all inequalities hold:", rep.ok)
for q, rs, rt, ok in rep.degree_results:
    if rs.finite or rt.finite:
        print(f"  degree {q}: rho_target = {rt.value} <= rho_source = {rs.value}")

# Novikov counts live in Laurent polynomials of the deck symbol; the
# windowed scan gives a declared upper bound for the spectral invariant.
nov = build_novikov(
    NovikovMorseData(
        lifts=[("x", 0, 5), ("z", 0, 5), ("y", 1, 6)],
        counts={("y", "x"): LaurentPoly.parse("T^-1"), ("y", "z"): LaurentPoly.one()},
    )
)
for w in (0, 1, 2):
    sv = novikov_rho_window(nov, 0, w)
    print(f"deck complex rho upper bound at window {w}: {sv.value}")
