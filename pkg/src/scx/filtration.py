"""Sublevel complexes, barcodes, spectral invariants, and the filtered
comparison engine.

All persistence runs on F2 complexes; Novikov-coefficient complexes get
their spectral invariant through the windowed scan at the bottom (their
sublevel spaces are not Novikov submodules, so no exact terminating
procedure exists).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .complexes import (
    ChainMap,
    FIELD_F2,
    FIELD_NOVIKOV,
    FilteredChainComplex,
    induced_map,
)
from .fields import INF, LaurentPoly, RationalFn, is_finite
from .linalg import F2, SparseMatrix, rank, solve_in_image


@dataclass(frozen=True)
class Bar:
    degree: int
    birth: Fraction
    death: object  # Fraction or INF


@dataclass
class Barcode:
    bars: list
    essential: dict  # degree -> count of infinite bars

    def in_degree(self, q: int) -> list:
        return [b for b in self.bars if b.degree == q]

    def alive(self, q: int, t, s) -> int:
        """Number of degree-q bars with birth <= t and death > s."""
        return sum(1 for b in self.in_degree(q) if b.birth <= t and b.death > s)


@dataclass
class SpectralValue:
    value: object  # Fraction or INF
    witness: tuple | None = None  # (chain, threshold)
    tag: str | None = None

    @property
    def finite(self) -> bool:
        return is_finite(self.value)


def _require_f2_filtered(c: FilteredChainComplex, what: str) -> None:
    if c.field != FIELD_F2:
        raise ValueError(
            f"{what} needs F2 coefficients; use novikov_rho_window for deck complexes"
        )
    if not c.filtered:
        raise ValueError(f"{what} needs a filtered complex")
    report = c.validate()
    if not report.clean:
        from .complexes import InvalidComplexError

        raise InvalidComplexError(report)


def sublevel(c: FilteredChainComplex, t) -> FilteredChainComplex:
    """Span of generators with level <= t (d-closed by the filtration law)."""
    _require_f2_filtered(c, "sublevel")
    return c.restricted(g.gid for g in c.generators if g.level <= t)


def _ordered(c: FilteredChainComplex, q: int):
    return sorted(c.gens_in_degree(q), key=lambda g: (g.level, g.gid))


def _reduce_block(c: FilteredChainComplex, q: int):
    """Column-reduce d_(q+1) against degree-q rows in filtration order.

    Returns (rows, cols, reduced, pairs) where reduced[j] is the bitmask
    of the j-th reduced column over row positions and pairs maps pivot
    row -> column.
    """
    rows = _ordered(c, q)
    cols = _ordered(c, q + 1)
    row_pos = {g.gid: i for i, g in enumerate(rows)}
    reduced = []
    for g in cols:
        col = 0
        for (f, tgt), coeff in c._diff.items():
            if f == g.gid and coeff:
                col |= 1 << row_pos[tgt]
        reduced.append(col)
    pivot_of_row: dict[int, int] = {}
    for j in range(len(reduced)):
        while reduced[j]:
            low = reduced[j].bit_length() - 1
            if low not in pivot_of_row:
                pivot_of_row[low] = j
                break
            reduced[j] ^= reduced[pivot_of_row[low]]
    return rows, cols, reduced, pivot_of_row


def _creators(c: FilteredChainComplex, q: int):
    """Degree-q generators whose reduced d_q-column vanishes, with witness
    cycles from the tracked combination matrix."""
    rows = _ordered(c, q - 1)
    cols = _ordered(c, q)
    row_pos = {g.gid: i for i, g in enumerate(rows)}
    reduced = []
    combo = []
    for j, g in enumerate(cols):
        col = 0
        for (f, tgt), coeff in c._diff.items():
            if f == g.gid and coeff:
                col |= 1 << row_pos[tgt]
        reduced.append(col)
        combo.append(1 << j)
    pivot_of_row: dict[int, int] = {}
    creators = {}
    for j in range(len(reduced)):
        while reduced[j]:
            low = reduced[j].bit_length() - 1
            if low not in pivot_of_row:
                pivot_of_row[low] = j
                break
            reduced[j] ^= reduced[pivot_of_row[low]]
            combo[j] ^= combo[pivot_of_row[low]]
        if reduced[j] == 0:
            cycle = {cols[k].gid: 1 for k in range(len(cols)) if (combo[j] >> k) & 1}
            creators[j] = cycle
    return cols, creators


def barcode(c: FilteredChainComplex) -> Barcode:
    """Persistence intervals per degree; zero-length bars are dropped."""
    _require_f2_filtered(c, "barcode")
    bars = []
    essential: dict[int, int] = {}
    for q in c.degrees():
        rows, cols_up, _reduced, pivots_up = _reduce_block(c, q)
        for low, j in pivots_up.items():
            birth = rows[low].level
            death = cols_up[j].level
            if death > birth:
                bars.append(Bar(q, birth, death))
        cols_here, creators = _creators(c, q)
        for j in creators:
            if j not in pivots_up:
                bars.append(Bar(q, cols_here[j].level, INF))
                essential[q] = essential.get(q, 0) + 1
    bars.sort(key=lambda b: (b.degree, b.birth, b.death is not INF, str(b.death)))
    return Barcode(bars, essential)


def rho_degree(c: FilteredChainComplex, q: int) -> SpectralValue:
    """Infimal level at which a degree-q class survives to the full homology."""
    _require_f2_filtered(c, "rho_degree")
    cols, creators = _creators(c, q)
    _, _, _, pivots_up = _reduce_block(c, q)
    paired_as_row = set(pivots_up.keys())
    best = None
    for j in sorted(creators):
        if j in paired_as_row:
            continue
        g = cols[j]
        if best is None or g.level < best[0]:
            best = (g.level, creators[j])
    if best is None:
        return SpectralValue(INF)
    return SpectralValue(best[0], witness=(best[1], best[0]))


def rho_class(c: FilteredChainComplex, a: dict) -> SpectralValue:
    """inf of levels of representatives of the class [a].

    ``a`` is a sparse F2 cycle; the zero class is rejected.
    """
    _require_f2_filtered(c, "rho_class")
    if not a:
        raise ValueError("rho of the zero class is degenerate")
    if c.d_chain(a):
        raise ValueError("representative is not a cycle")
    degs = {c.generator(g).degree for g in a}
    if len(degs) != 1:
        raise ValueError("class representative must be homogeneous")
    q = degs.pop()
    h = c.homology()
    if h.is_boundary(q, a):
        raise ValueError("rho of the zero class is degenerate")
    gens_q = _ordered(c, q)
    pos_map = {g.gid: i for i, g in enumerate(gens_q)}
    vec = {pos_map[g]: 1 for g in a}
    up_cols = []
    for gen in c.gens_in_degree(q + 1):
        col = {}
        for (f, tgt), coeff in c._diff.items():
            if f == gen.gid and coeff:
                col[pos_map[tgt]] = 1
        up_cols.append(col)
    for t in c.levels():
        sub = [g for g in gens_q if g.level <= t]
        if not sub:
            continue
        subc = sublevel(c, t)
        sub_cycles = []
        if subc.dim(q):
            from .linalg import kernel_basis

            for v in kernel_basis(subc.d_matrix(q)):
                chain = subc.chain_from_positions(q, v)
                sub_cycles.append({pos_map[g]: 1 for g in chain})
        cols = sub_cycles + up_cols
        m = SparseMatrix(F2, len(gens_q), len(cols))
        for jj, colv in enumerate(cols):
            for i, v in colv.items():
                m.data[(i, jj)] = v
        sol = solve_in_image(m, vec)
        if sol is not None:
            witness = {}
            for jj, v in sol.items():
                if jj < len(sub_cycles) and v:
                    for i, vv in sub_cycles[jj].items():
                        witness[i] = witness.get(i, 0) ^ vv
            chain = {gens_q[i].gid: 1 for i, v in witness.items() if v}
            return SpectralValue(t, witness=(chain, t))
    raise AssertionError("class must be reachable at its own level")


@dataclass
class ComparisonReport:
    degree: int
    map_degree: int
    level_shift: object
    injective: bool
    rho_source: SpectralValue
    rho_target: SpectralValue
    asserted: bool
    inequality_holds: bool | None


def compare(f: ChainMap, q: int) -> ComparisonReport:
    """Execute the filtered-functoriality inequality in degree q.

    When f* is injective in degree q and the certified level shift c is
    finite, rho_target(q + k) <= rho_source(q) + c is asserted and
    checked; otherwise the report carries both sides unasserted.
    """
    if not is_finite(f.level_shift):
        raise ValueError("chain map carries no finite level-shift certificate")
    fstar = induced_map(f)
    hs = f.source.homology()
    m = fstar.get(q)
    inj = hs.dim(q) == 0 or (m is not None and rank(m) == hs.dim(q))
    rs = rho_degree(f.source, q)
    rt = rho_degree(f.target, q + f.degree)
    asserted = inj
    holds = None
    if asserted:
        bound = INF if rs.value is INF else rs.value + f.level_shift
        holds = _ext_le(rt.value, bound)
    return ComparisonReport(
        degree=q,
        map_degree=f.degree,
        level_shift=f.level_shift,
        injective=inj,
        rho_source=rs,
        rho_target=rt,
        asserted=asserted,
        inequality_holds=holds,
    )


def _ext_le(a, b) -> bool:
    if a is INF:
        return b is INF
    if b is INF:
        return True
    return a <= b


@dataclass
class PscVerdict:
    obstructed: bool
    s2_lower_bound: object | None  # Fraction when both rho finite, else None
    consistent: bool | None
    vacuous: bool


def psc_check(rho_in, rho_out, const_c: Fraction, s2_integral=None) -> PscVerdict:
    """Positive-scalar-curvature obstruction arithmetic.

    obstructed = (rho_out > rho_in + C); the quantitative bound
    32 (rho_out - rho_in - C), clipped at 0, lower-bounds the integral of
    the squared scalar curvature when both invariants are finite.
    """
    if not is_finite(const_c):
        raise ValueError("constant C must be finite")
    vacuous = rho_in is INF and is_finite(rho_out)
    if rho_in is INF:
        obstructed = False
    elif rho_out is INF:
        obstructed = True
    else:
        obstructed = rho_out > rho_in + const_c
    bound = None
    if is_finite(rho_in) and is_finite(rho_out):
        bound = max(Fraction(0), 32 * (rho_out - rho_in - const_c))
    consistent = None
    if s2_integral is not None and bound is not None:
        consistent = s2_integral >= bound
    return PscVerdict(obstructed, bound, consistent, vacuous)


def rho_sensitivity(c: FilteredChainComplex, q: int, eps: Fraction):
    """Recompute rho_degree after shifting every level by -eps and +eps.

    A probe, not a convergence claim: reports (minus, base, plus).
    """
    from .complexes import Generator

    def shifted(delta):
        gens = [Generator(g.gid, g.degree, g.level + delta) for g in c.generators]
        return FilteredChainComplex(
            c.field, gens, [(f, t, v) for (f, t), v in c._diff.items()],
            filtered=c.filtered, deck=c.deck, unchecked=True,
        )

    return (
        rho_degree(shifted(-eps), q),
        rho_degree(c, q),
        rho_degree(shifted(eps), q),
    )


# ---------------------------------------------------------------------------
# Novikov spectral invariant, window approximation


def novikov_rho_window(c: FilteredChainComplex, q: int, w: int) -> SpectralValue:
    """Upper approximation of rho over Novikov coefficients.

    Minimizes the semi-norm over representatives x + d(beta), where x
    runs over canonical homology representatives (denominators cleared,
    minimal exponent normalized to 0) and beta over the F2-span of
    T^j-shifts, |j| <= w, of the degree-(q+1) lift basis.  Monotone
    non-increasing in w; tagged as an upper bound.
    """
    if c.field != FIELD_NOVIKOV or not c.deck:
        raise ValueError("novikov rho needs a deck-equipped novikov complex")
    if w < 0:
        raise ValueError("window must be non-negative")
    h = c.homology()
    tag = f"upper bound, window {w}"
    if h.dim(q) == 0:
        return SpectralValue(INF, tag=tag)
    candidates = [_clear_candidate(rep) for rep in h.reps[q]]
    shift_cols = []
    for g in c.gens_in_degree(q + 1):
        base = c.d_chain({g.gid: LaurentPoly.one()})
        if not base:
            continue
        for j in range(-w, w + 1):
            shift_cols.append({gid: p.shift(j) for gid, p in base.items()})
    best = None
    for x in candidates:
        val, witness = _cheapest_in_coset(c, x, shift_cols)
        if best is None or val < best[0]:
            best = (val, witness)
    assert best is not None
    return SpectralValue(best[0], witness=(best[1], best[0]), tag=tag)


def _clear_candidate(rep: dict) -> dict:
    """Clear denominators and T-normalize a rational-coefficient cycle."""
    lcm_den = 1
    from .fields import poly_divmod, poly_gcd, poly_mul

    for v in rep.values():
        if isinstance(v, RationalFn):
            g = poly_gcd(lcm_den, v.den)
            lcm_den = poly_mul(poly_divmod(lcm_den, g)[0], v.den)
    cleared = {}
    for gid, v in rep.items():
        if isinstance(v, RationalFn):
            extra = poly_divmod(lcm_den, v.den)[0]
            cleared[gid] = LaurentPoly(v.offset, poly_mul(v.num, extra))
        else:
            cleared[gid] = v
    min_exp = min(p.min_exp for p in cleared.values())
    return {gid: p.shift(-min_exp) for gid, p in cleared.items()}


def _cheapest_in_coset(c, x: dict, shift_cols: list[dict]):
    """Scan thresholds for the cheapest x + d(beta) in the window span."""
    pairs = set()
    for chain in [x] + shift_cols:
        for gid, p in chain.items():
            for e in p.exponents():
                pairs.add((gid, e))
    pairs = sorted(pairs)
    index = {pe: i for i, pe in enumerate(pairs)}

    def expand(chain):
        vec = {}
        for gid, p in chain.items():
            for e in p.exponents():
                vec[index[(gid, e)]] = 1
        return vec

    x_vec = expand(x)
    col_vecs = [expand(col) for col in shift_cols]
    levels = sorted(
        {c.generator(gid).level - e for gid, e in pairs}
    )
    for t in levels:
        allowed = [
            {index[(gid, e)]: 1}
            for gid, e in pairs
            if c.generator(gid).level - e <= t
        ]
        cols = allowed + col_vecs
        m = SparseMatrix(F2, len(pairs), len(cols))
        for j, colv in enumerate(cols):
            for i, v in colv.items():
                if v:
                    m.data[(i, j)] = v
        sol = solve_in_image(m, x_vec)
        if sol is not None:
            beta_part = {}
            for j, v in sol.items():
                if j >= len(allowed) and v:
                    for i, vv in col_vecs[j - len(allowed)].items():
                        beta_part[i] = beta_part.get(i, 0) ^ vv
            rep_vec = dict(x_vec)
            for i, v in beta_part.items():
                if v:
                    rep_vec[i] = rep_vec.get(i, 0) ^ 1
            chain: dict[str, LaurentPoly] = {}
            for i, v in rep_vec.items():
                if v:
                    gid, e = pairs[i]
                    chain[gid] = chain.get(gid, LaurentPoly.zero()) + LaurentPoly.t_power(e)
            chain = {gid: p for gid, p in chain.items() if not p.is_zero()}
            return t, chain
    raise AssertionError("representative reachable at its own level")
