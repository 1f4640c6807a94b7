"""The three-step filtration spectral sequence of a total S-complex.

Filtration on C~_n = C_n (+) C_(n-1) (+) R_n: the shifted copy sits at
filtration level 1, the reducible summand joins at level 2, and the
unshifted copy at level 3.  Columns are indexed so that the level-1
column holds E0_(1,q) = C_q, the level-2 column E0_(2,q) = R_(q+2), and
the level-3 column E0_(3,q) = C_(q+3).

``pages_closed_form`` evaluates the page-by-page formulas (homology of
rows under delta2*, delta1*, then the induced u-map); ``pages_generic``
computes the same pages from the raw Z/B subspace definition on the
assembled total and serves as the independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complexes import FIELD_F2
from .fields import INF, LaurentPoly, RationalFn
from .linalg import SparseMatrix, kernel_basis, rank, span_rank
from .scomplex import SComplex, _apply_entries, delta1_star, delta2_star


@dataclass
class Page:
    r: int
    cells: dict  # (p, q) -> dimension
    differentials: dict  # (p, q) -> SparseMatrix (maps leaving the cell)

    def dim(self, p: int, q: int) -> int:
        return self.cells.get((p, q), 0)


@dataclass
class ReconstructionReport:
    homology_dims: dict  # n -> dim H_n(total)
    graded_dims: dict  # n -> [dim E3_(p, n-p) for p in 1..3]
    stable: bool  # generic page 3 == generic page 4
    match: bool

    @property
    def ok(self) -> bool:
        return self.stable and self.match


def _q_hull(s: SComplex) -> range:
    qs = set()
    for n in s.irr.degrees():
        qs.add(n)  # column 1: C_q
        qs.add(n - 3)  # column 3: C_(q+3)
    for g in s.red:
        qs.add(g.degree - 2)  # column 2: R_(q+2)
    if not qs:
        return range(0, 0)
    return range(min(qs) - 1, max(qs) + 2)


def _matrix_kind(s: SComplex) -> str:
    return "F2" if s.field == FIELD_F2 else "rational"


def pages_closed_form(s: SComplex) -> tuple[Page, Page, Page, Page]:
    """Pages E0..E3 from the displayed formulas.

    E1 rows are H_q(C) <- R_(q+2) <- H_(q+3)(C) with the induced delta
    maps; E2 takes their row homology and carries the induced u-map from
    ker delta1* into H/(im delta2*); E3 is its homology.
    """
    report = s.validate()
    if not report.clean:
        from .scomplex import InvalidSComplexError

        raise InvalidSComplexError(report)
    h = s.irr.homology()
    d1s = delta1_star(s)  # irr degree n -> matrix H_n -> R_(n-1) positions
    d2s = delta2_star(s)  # red degree n -> matrix R_n -> H_(n-2) coords
    hull = _q_hull(s)
    kind = _matrix_kind(s)

    def d1_mat(n: int) -> SparseMatrix:
        return d1s.get(n, SparseMatrix(kind, len(s.red_in_degree(n - 1)), h.dim(n)))

    def d2_mat(n: int) -> SparseMatrix:
        return d2s.get(n, SparseMatrix(kind, h.dim(n - 2), len(s.red_in_degree(n))))

    # page 0
    cells0, diffs0 = {}, {}
    for q in hull:
        cells0[(1, q)] = s.irr.dim(q)
        cells0[(2, q)] = len(s.red_in_degree(q + 2))
        cells0[(3, q)] = s.irr.dim(q + 3)
        diffs0[(1, q)] = s.irr.d_matrix(q)
        diffs0[(3, q)] = s.irr.d_matrix(q + 3)
    page0 = Page(0, cells0, diffs0)

    # page 1
    cells1, diffs1 = {}, {}
    for q in hull:
        cells1[(1, q)] = h.dim(q)
        cells1[(2, q)] = len(s.red_in_degree(q + 2))
        cells1[(3, q)] = h.dim(q + 3)
        diffs1[(3, q)] = d1_mat(q + 3)
        diffs1[(2, q)] = d2_mat(q + 2)
    page1 = Page(1, cells1, diffs1)

    # page 2: row homology, then the u-differential on ker delta1*
    cells2, diffs2 = {}, {}
    u_data = {}
    for q in hull:
        rank_d2_into_q = rank(d2_mat(q + 2))
        rank_d1_from_q3 = rank(d1_mat(q + 3))
        cells2[(1, q)] = h.dim(q) - rank_d2_into_q
        cells2[(2, q)] = (
            len(s.red_in_degree(q + 2)) - rank(d2_mat(q + 2)) - rank_d1_from_q3
        )
        cells2[(3, q)] = h.dim(q + 3) - rank_d1_from_q3
    for q in hull:
        # d2: ker(delta1*: H_(q+3) -> R_(q+2)) --u*--> H_(q+1)/im delta2*
        ker_vecs = kernel_basis(d1_mat(q + 3))
        u_cols = []
        for vec in ker_vecs:
            chain = _combine_reps(s, q + 3, vec)
            img = _apply_entries(s.u, chain)
            coords = h.class_coords(q + 1, img)
            if coords is None:
                raise ValueError("u-image of a delta1-kernel cycle is not a cycle")
            u_cols.append(coords)
        u_mat = SparseMatrix(kind, h.dim(q + 1), len(u_cols))
        for j, coords in enumerate(u_cols):
            for i, v in coords.items():
                u_mat.data[(i, j)] = v
        d2_cols = _matrix_cols(d2_mat(q + 3))
        u_rank = _quotient_rank(kind, h.dim(q + 1), d2_cols, _matrix_cols(u_mat))
        u_data[q] = (u_mat, u_rank, len(ker_vecs))
        diffs2[(3, q)] = u_mat
    page2 = Page(2, cells2, diffs2)

    # page 3
    cells3 = {}
    for q in hull:
        _, u_rank_here, ker_dim_here = u_data[q]
        incoming = u_data.get(q - 1)
        incoming_rank = incoming[1] if incoming else 0
        cells3[(3, q)] = ker_dim_here - u_rank_here
        cells3[(2, q)] = cells2[(2, q)]
        cells3[(1, q)] = cells2[(1, q)] - incoming_rank
    page3 = Page(3, cells3, {})
    return page0, page1, page2, page3


def _combine_reps(s: SComplex, n: int, vec: dict) -> dict:
    """Linear combination of H_n representatives from kernel coordinates."""
    from .complexes import _coeff_add, _coeff_is_zero, _coeff_mul

    h = s.irr.homology()
    out = {}
    for j, coeff in vec.items():
        rep = h.reps[n][j]
        for gid, v in rep.items():
            prod = _coeff_mul(v, coeff)
            out[gid] = _coeff_add(out[gid], prod) if gid in out else prod
    return {k: v for k, v in out.items() if not _coeff_is_zero(v)}


def _matrix_cols(m: SparseMatrix) -> list[dict]:
    cols = [dict() for _ in range(m.cols)]
    for (i, j), v in m.data.items():
        cols[j][i] = v
    return cols


def _quotient_rank(kind, dim, mod_out_cols, cols) -> int:
    """Rank of cols in the quotient by span(mod_out_cols)."""
    return span_rank(kind, dim, mod_out_cols + cols) - span_rank(kind, dim, mod_out_cols)


# ---------------------------------------------------------------------------
# generic pages from the filtration


def _filtration_index(gid: str) -> int:
    return {"b": 1, "r": 2, "a": 3}[gid.split(":", 1)[0]]


def generic_page_dims(s: SComplex, r: int) -> dict:
    """dims of E^r from the subspace definition on the assembled total."""
    total = s.total()
    kind = _matrix_kind(s)
    hull = _q_hull(s)

    def z_space(p: int, cut: int, n: int) -> list[dict]:
        """Spanning set of {x in F^p_n : d x in F^cut_(n-1)}."""
        p = min(p, 3)
        if p <= 0:
            return []
        gens = [g for g in total.gens_in_degree(n) if _filtration_index(g.gid) <= p]
        if not gens:
            return []
        below = total.gens_in_degree(n - 1)
        bad_rows = [i for i, g in enumerate(below) if _filtration_index(g.gid) > cut]
        pos = {g.gid: i for i, g in enumerate(below)}
        m = SparseMatrix(
            "F2" if s.field == FIELD_F2 else "laurent", len(bad_rows), len(gens)
        )
        row_of = {i: k for k, i in enumerate(bad_rows)}
        for j, g in enumerate(gens):
            img = total.d_chain({g.gid: 1 if s.field == FIELD_F2 else LaurentPoly.one()})
            for gid, v in img.items():
                i = pos[gid]
                if i in row_of:
                    m.data[(row_of[i], j)] = v
        full_pos = {g.gid: i for i, g in enumerate(total.gens_in_degree(n))}
        out = []
        for vec in kernel_basis(m):
            chain = {gens[j].gid: v for j, v in vec.items()}
            out.append({full_pos[g]: v for g, v in chain.items()})
        return out

    def d_image(vectors: list[dict], n: int) -> list[dict]:
        below = total.gens_in_degree(n - 1)
        pos = {g.gid: i for i, g in enumerate(below)}
        gens = total.gens_in_degree(n)
        out = []
        for vec in vectors:
            chain = {gens[i].gid: v for i, v in vec.items()}
            img = total.d_chain(chain)
            if img:
                out.append({pos[g]: v for g, v in img.items()})
        return out

    dims = {}
    for q in hull:
        for p in (1, 2, 3):
            n = p + q
            if r == 0:
                gens_n = total.gens_in_degree(n)
                upto = sum(1 for g in gens_n if _filtration_index(g.gid) <= p)
                below_p = sum(1 for g in gens_n if _filtration_index(g.gid) <= p - 1)
                dims[(p, q)] = upto - below_p
                continue
            z_here = z_space(p, p - r, n)
            z_lower = z_space(p - 1, p - r, n)
            boundary_src = z_space(p + r - 1, p, n + 1)
            bd = d_image(boundary_src, n + 1)
            ndim = total.dim(n)
            sub = _to_rational_vecs(kind, z_lower + bd)
            zr = _to_rational_vecs(kind, z_here)
            dims[(p, q)] = span_rank(kind, ndim, sub + zr) - span_rank(kind, ndim, sub)
    return dims


def _to_rational_vecs(kind, vecs):
    if kind == "F2":
        return vecs
    out = []
    for v in vecs:
        out.append(
            {
                i: (RationalFn.from_laurent(x) if isinstance(x, LaurentPoly) else x)
                for i, x in v.items()
            }
        )
    return out


def pages_generic(s: SComplex) -> tuple[Page, Page, Page, Page]:
    """Oracle pages E0..E3 computed from first principles."""
    report = s.validate()
    if not report.clean:
        from .scomplex import InvalidSComplexError

        raise InvalidSComplexError(report)
    return tuple(Page(r, generic_page_dims(s, r), {}) for r in range(4))


def abutment(s: SComplex) -> ReconstructionReport:
    """E3 = E4 stability plus the graded reconstruction of H(total)."""
    three = generic_page_dims(s, 3)
    four = generic_page_dims(s, 4)
    stable = three == four
    h = s.total().homology()
    hull = _q_hull(s)
    ns = sorted({p + q for q in hull for p in (1, 2, 3)} | set(h.dims))
    homology_dims = {}
    graded = {}
    match = True
    for n in ns:
        hn = h.dim(n)
        parts = [three.get((p, n - p), 0) for p in (1, 2, 3)]
        homology_dims[n] = hn
        graded[n] = parts
        if hn != sum(parts):
            match = False
    return ReconstructionReport(homology_dims, graded, stable, match)


# ---------------------------------------------------------------------------
# the lambda-vs-rho comparison


@dataclass
class HypothesisResult:
    holds: bool
    detail: str
    lam: object | None = None  # SpectralValue
    rho: object | None = None
    inequality_holds: bool | None = None


@dataclass
class LambdaRhoReport:
    degree: int
    hypothesis1: HypothesisResult
    hypothesis2: HypothesisResult

    @property
    def any_asserted(self) -> bool:
        return self.hypothesis1.holds or self.hypothesis2.holds


def _ext_ge(a, b) -> bool:
    if b is INF:
        return a is INF
    if a is INF:
        return True
    return a >= b


def lambda_rho_comparison(s: SComplex, q: int) -> LambdaRhoReport:
    """Evaluate the two u-map vanishing hypotheses at degree q.

    Hypothesis (1): delta2* lands at zero in H_(q-1) and u* kills
    ker(delta1*: H_(q+1) -> R_q); then lambda_(q-1) >= rho_q on the
    total complex.  Hypothesis (2): delta1* vanishes on H_q and, at
    every filtration threshold t, the induced u-map on H^t_q lands in
    the image of the t-sublevel delta2*; then lambda_q >= rho_q.  The
    second hypothesis needs its filtered form: the page subscripts in
    the closed formulas count columns, and the top-column copy of C
    contributes to the total degree it lives in.

    With neither hypothesis, nothing is asserted.
    """
    from .scomplex import s_lambda, s_rho

    h = s.irr.homology()
    kind = _matrix_kind(s)
    d1s = delta1_star(s)
    d2s = delta2_star(s)

    # hypothesis (1)
    d2_in = d2s.get(q + 1)
    d2_zero = d2_in is None or not d2_in.data
    ker_vecs = kernel_basis(
        d1s.get(q + 1, SparseMatrix(kind, len(s.red_in_degree(q)), h.dim(q + 1)))
    )
    u_kills = True
    for vec in ker_vecs:
        chain = _combine_reps(s, q + 1, vec)
        img = _apply_entries(s.u, chain)
        coords = h.class_coords(q - 1, img)
        if coords:
            u_kills = False
            break
    hyp1_holds = d2_zero and u_kills
    if hyp1_holds:
        lam = s_lambda(s, q - 1)
        rho = s_rho(s, q)
        hyp1 = HypothesisResult(
            True,
            "delta2* = 0 into H_(q-1) and u* trivial on ker delta1*",
            lam,
            rho,
            _ext_ge(lam.value, rho.value),
        )
    else:
        hyp1 = HypothesisResult(False, "delta2* or restricted u* nonzero")

    # hypothesis (2), filtered form
    d1_here = d1s.get(q)
    d1_zero = d1_here is None or not d1_here.data
    filtered_ok = d1_zero and _filtered_u_in_delta2_image(s, q)
    if filtered_ok:
        lam = s_lambda(s, q)
        rho = s_rho(s, q)
        hyp2 = HypothesisResult(
            True,
            "delta1* = 0 on H_q and u* lands in im delta2* at every threshold",
            lam,
            rho,
            _ext_ge(lam.value, rho.value),
        )
    else:
        hyp2 = HypothesisResult(False, "delta1* nonzero or filtered u-condition fails")
    return LambdaRhoReport(q, hyp1, hyp2)


def _filtered_u_in_delta2_image(s: SComplex, q: int) -> bool:
    """At every threshold t: u maps H^t_q into im(delta2^t*) in H^t_(q-2)."""
    levels = sorted({g.level for g in s.irr.generators} | {g.level for g in s.red})
    for t in levels:
        sub_irr = s.irr.restricted(
            g.gid for g in s.irr.generators if g.level <= t
        )
        hs = sub_irr.homology()
        if hs.dim(q) == 0:
            continue
        one = 1 if s.field == FIELD_F2 else LaurentPoly.one()
        d2_cols = []
        for g in s.red:
            if g.degree == q and g.level <= t:
                img = _apply_entries(s.delta2, {g.gid: one})
                if any(s.irr.generator(gid).level > t for gid in img):
                    continue
                coords = hs.class_coords(q - 2, img)
                if coords is None:
                    continue
                d2_cols.append(coords)
        kind = _matrix_kind(s)
        for rep in hs.reps.get(q, []):
            img = _apply_entries(s.u, rep)
            if any(s.irr.generator(gid).level > t for gid in img):
                return False
            coords = hs.class_coords(q - 2, img)
            if coords is None:
                return False
            if coords and _quotient_rank(kind, hs.dim(q - 2), d2_cols, [coords]) > 0:
                return False
    return True
