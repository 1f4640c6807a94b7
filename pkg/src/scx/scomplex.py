"""S-complexes and their morphism calculus.

An S-complex is an irreducible complex (C, d) together with a graded
reducible summand R and maps u: C -> C[-2], delta1: C -> R[-1],
delta2: R -> C[-2] satisfying

    d.d = 0,  delta1.d = 0,  d.delta2 = 0,  u.d + d.u + delta2.delta1 = 0.

The total complex C~_n = C_n (+) C_(n-1) (+) R_n carries the assembled
differential (a, b, r) -> (da, ua + db + delta2 r, delta1 a); the four
relations are equivalent to its differential squaring to zero, and the
validator checks both sides independently.

Morphisms are lower-triangular block maps (lambda, eta, Delta1, Delta2)
with an identity-shaped R-corner; S-homotopies have the constrained
shape with vanishing (1,2), (1,3), (3,2), (3,3) corners.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .complexes import (
    ChainMap,
    FIELD_F2,
    FilteredChainComplex,
    Generator,
    Violation,
    _coeff_add,
    _coeff_is_zero,
    _coeff_mul,
    induced_map,
)
from .fields import INF, LaurentPoly, is_finite
from .linalg import SparseMatrix


# ---------------------------------------------------------------------------
# entry-dict calculus for graded maps


def _compose(outer: dict, inner: dict) -> dict:
    out = {}
    for (a, b), c1 in inner.items():
        for (b2, c), c2 in outer.items():
            if b != b2:
                continue
            key = (a, c)
            prod = _coeff_mul(c2, c1)
            out[key] = _coeff_add(out[key], prod) if key in out else prod
    return {k: v for k, v in out.items() if not _coeff_is_zero(v)}


def _add(*maps: dict) -> dict:
    out = {}
    for m in maps:
        for key, v in m.items():
            out[key] = _coeff_add(out[key], v) if key in out else v
    return {k: v for k, v in out.items() if not _coeff_is_zero(v)}


def _normalize_entries(field: str, entries) -> dict:
    out = {}
    for f, t, c in entries:
        if field == FIELD_F2:
            c = int(c) & 1
            if not c:
                continue
        else:
            if not isinstance(c, LaurentPoly):
                raise ValueError("novikov entries must be LaurentPoly")
            if c.is_zero():
                continue
        key = (f, t)
        if key in out:
            raise ValueError(f"duplicate entry {key}")
        out[key] = c
    return out


@dataclass
class SReport:
    violations: list
    warnings: list
    relations_hold: bool
    total_d_squared_zero: bool

    @property
    def clean(self) -> bool:
        return not self.violations

    @property
    def verdicts_coincide(self) -> bool:
        return self.relations_hold == self.total_d_squared_zero

    def by_law(self, law: str):
        return [v for v in self.violations if v.law == law]


class InvalidSComplexError(ValueError):
    def __init__(self, report: SReport):
        self.report = report
        lines = "; ".join(f"{v.law}: {v.detail}" for v in report.violations[:4])
        super().__init__(f"invalid S-complex: {lines}")


RELATION_NAMES = ("d_squared", "delta1_d", "d_delta2", "u_anticommutator")


class SComplex:
    """Validated S-complex over F2 or Novikov coefficients."""

    def __init__(self, irr: FilteredChainComplex, red, u=(), delta1=(), delta2=(),
                 *, chamber: Fraction | None = None, allowable=None,
                 unchecked: bool = False):
        self.irr = irr
        self.red = tuple(sorted(red, key=lambda g: (g.degree, g.level, g.gid)))
        self.field = irr.field
        self._red_by_id = {}
        for g in self.red:
            if g.gid in self._red_by_id:
                raise ValueError(f"duplicate reducible generator {g.gid!r}")
            self._red_by_id[g.gid] = g
        self.u = _normalize_entries(self.field, u)
        self.delta1 = _normalize_entries(self.field, delta1)
        self.delta2 = _normalize_entries(self.field, delta2)
        self.chamber = chamber
        self.allowable = allowable
        self._total = None
        if not unchecked:
            report = self.validate()
            if not report.clean:
                raise InvalidSComplexError(report)

    # -- structure

    def red_in_degree(self, q: int) -> list[Generator]:
        return [g for g in self.red if g.degree == q]

    def red_gen(self, gid: str) -> Generator:
        return self._red_by_id[gid]

    def d_entries(self) -> dict:
        return dict(self.irr._diff)

    def degrees(self) -> list[int]:
        degs = set(self.irr.degrees())
        degs.update(g.degree for g in self.red)
        return sorted(degs)

    def is_empty(self) -> bool:
        return not self.irr.generators and not self.red

    # -- validation

    def _degree_level_issues(self) -> list[Violation]:
        issues = []
        specs = [
            ("u", self.u, self.irr.generator, self.irr.generator, -2),
            ("delta1", self.delta1, self.irr.generator, self._lookup_red, -1),
            ("delta2", self.delta2, self._lookup_red, self.irr.generator, -2),
        ]
        for name, entries, src_of, dst_of, shift in specs:
            for (f, t), coeff in sorted(entries.items()):
                try:
                    gf = src_of(f)
                except KeyError:
                    issues.append(Violation("structure", f"{name} from unknown {f!r}"))
                    continue
                try:
                    gt = dst_of(t)
                except KeyError:
                    issues.append(Violation("structure", f"{name} into unknown {t!r}"))
                    continue
                if gt.degree != gf.degree + shift:
                    issues.append(
                        Violation(
                            "degree",
                            f"{name} sends {f} (deg {gf.degree}) to {t} "
                            f"(deg {gt.degree}); expected shift {shift}",
                        )
                    )
                eff = gt.level if self.field == FIELD_F2 else gt.level - coeff.min_exp
                if eff > gf.level:
                    issues.append(
                        Violation(
                            "filtration",
                            f"{name} raises level on {f}: {eff} > {gf.level}",
                        )
                    )
        return issues

    def _lookup_red(self, gid: str) -> Generator:
        return self._red_by_id[gid]

    def validate(self) -> SReport:
        issues = list(self._degree_level_issues())
        irr_report = self.irr.validate()
        issues.extend(
            Violation("structure", f"irr {v.law}: {v.detail}")
            for v in irr_report.violations
            if v.law in ("degree", "filtration")
        )
        d = self.d_entries()
        relation_failures = []
        if irr_report.by_law("d_squared"):
            relation_failures.append(
                Violation("d_squared", irr_report.by_law("d_squared")[0].detail)
            )
        for (f, t), _ in sorted(_compose(self.delta1, d).items()):
            relation_failures.append(
                Violation("delta1_d", f"(delta1 . d)({f}) hits {t}")
            )
        for (f, t), _ in sorted(_compose(d, self.delta2).items()):
            relation_failures.append(
                Violation("d_delta2", f"(d . delta2)({f}) hits {t}")
            )
        anti = _add(
            _compose(self.u, d), _compose(d, self.u), _compose(self.delta2, self.delta1)
        )
        for (f, t), _ in sorted(anti.items()):
            relation_failures.append(
                Violation("u_anticommutator", f"(ud + du + delta2 delta1)({f}) hits {t}")
            )
        issues.extend(relation_failures)
        relations_hold = not relation_failures and not any(
            v.law in ("degree", "structure") for v in issues
        )
        total = self._assemble_unchecked()
        total_report = total.validate()
        total_ok = not total_report.by_law("d_squared") and not total_report.by_law(
            "degree"
        )
        warnings = []
        if self.chamber is not None:
            for g in self.red:
                if Fraction(g.degree) != 2 * self.chamber:
                    warnings.append(
                        f"reducible {g.gid} in degree {g.degree}, chamber expects "
                        f"{2 * self.chamber}"
                    )
            if relations_hold and self._both_deltas_nonzero_on_homology():
                warnings.append(
                    "monopole-shaped data with both delta1* and delta2* nonzero"
                )
        return SReport(issues, warnings, relations_hold, total_ok)

    def _both_deltas_nonzero_on_homology(self) -> bool:
        d1 = delta1_star(self)
        d2 = delta2_star(self)
        return any(m.data for m in d1.values()) and any(m.data for m in d2.values())

    # -- assembly

    def _assemble_unchecked(self) -> FilteredChainComplex:
        gens = []
        for g in self.irr.generators:
            gens.append(Generator(f"a:{g.gid}", g.degree, g.level))
            gens.append(Generator(f"b:{g.gid}", g.degree + 1, g.level))
        for g in self.red:
            gens.append(Generator(f"r:{g.gid}", g.degree, g.level))
        entries = []
        for (f, t), c in self.irr._diff.items():
            entries.append((f"a:{f}", f"a:{t}", c))
            entries.append((f"b:{f}", f"b:{t}", c))
        for (f, t), c in self.u.items():
            entries.append((f"a:{f}", f"b:{t}", c))
        for (f, t), c in self.delta1.items():
            entries.append((f"a:{f}", f"r:{t}", c))
        for (f, t), c in self.delta2.items():
            entries.append((f"r:{f}", f"b:{t}", c))
        return FilteredChainComplex(
            self.field, gens, entries, filtered=self.irr.filtered, deck=self.irr.deck,
            unchecked=True,
        )

    def total(self) -> FilteredChainComplex:
        """Assembled total complex (cached; validated via validate())."""
        if self._total is None:
            self._total = self._assemble_unchecked()
        return self._total

    def allowable_degrees(self):
        """Degree window in which the homotopy type is invariant.

        Reported, never enforced.  User-supplied metadata wins; with a
        non-negative chamber the window is q <= -1 or q >= 2 m_s.
        """
        if self.allowable is not None:
            return self.allowable
        if self.chamber is not None and self.chamber >= 0:
            return {"le": -1, "ge": int(2 * self.chamber)}
        return None


def assemble_total(s: SComplex) -> FilteredChainComplex:
    return s.total()


def validate_s(s: SComplex) -> SReport:
    return s.validate()


# -- induced maps on homology used by the page formulas and the validator


def delta1_star(s: SComplex) -> dict[int, SparseMatrix]:
    """H_q(C) -> R_(q-1) in representative/position bases, for all q."""
    h = s.irr.homology()
    kind = "F2" if s.field == FIELD_F2 else "rational"
    out = {}
    for q in s.irr.degrees():
        reds = s.red_in_degree(q - 1)
        red_pos = {g.gid: i for i, g in enumerate(reds)}
        m = SparseMatrix(kind, len(reds), h.dim(q))
        for j, rep in enumerate(h.reps.get(q, [])):
            img = _apply_entries(s.delta1, rep)
            for gid, v in img.items():
                if kind == "rational":
                    from .fields import RationalFn

                    if isinstance(v, LaurentPoly):
                        v = RationalFn.from_laurent(v)
                m.data[(red_pos[gid], j)] = v
        out[q] = m
    return out


def delta2_star(s: SComplex) -> dict[int, SparseMatrix]:
    """R_q -> H_(q-2)(C) in position/representative bases, for all q."""
    h = s.irr.homology()
    kind = "F2" if s.field == FIELD_F2 else "rational"
    out = {}
    degs = sorted({g.degree for g in s.red})
    for q in degs:
        reds = s.red_in_degree(q)
        m = SparseMatrix(kind, h.dim(q - 2), len(reds))
        for j, g in enumerate(reds):
            one = 1 if s.field == FIELD_F2 else LaurentPoly.one()
            img = _apply_entries(s.delta2, {g.gid: one})
            coords = h.class_coords(q - 2, img)
            if coords is None:
                raise ValueError("delta2 image is not a cycle (invalid data)")
            for i, v in coords.items():
                m.data[(i, j)] = v
        out[q] = m
    return out


def _apply_entries(entries: dict, chain: dict) -> dict:
    out = {}
    for gid, coeff in chain.items():
        for (f, t), c in entries.items():
            if f != gid:
                continue
            prod = _coeff_mul(c, coeff)
            out[t] = _coeff_add(out[t], prod) if t in out else prod
    return {k: v for k, v in out.items() if not _coeff_is_zero(v)}


# ---------------------------------------------------------------------------
# morphisms


def _iota_entries(s: SComplex, t: SComplex, degree: int, field: str) -> dict:
    """Identity-shaped R-corner: index matching within each degree pair."""
    out = {}
    one = 1 if field == FIELD_F2 else LaurentPoly.one()
    degs = sorted({g.degree for g in s.red})
    for q in degs:
        src = s.red_in_degree(q)
        dst = t.red_in_degree(q + degree)
        for i, g in enumerate(src):
            if i < len(dst):
                out[(g.gid, dst[i].gid)] = one
    return out


class SMorphism:
    """Degree-k morphism of S-complexes with blocks (lambda, eta, D1, D2).

    The R -> R' corner is the canonical identity-shaped inclusion; the
    four chain-map identities are verified at construction together with
    the block-shape degree bookkeeping.
    """

    def __init__(self, source: SComplex, target: SComplex, degree: int,
                 lam=(), eta=(), Delta1=(), Delta2=(), level_shift=INF,
                 *, unchecked: bool = False):
        if source.field != target.field:
            raise ValueError("morphism between different coefficient fields")
        self.source = source
        self.target = target
        self.degree = degree
        self.field = source.field
        self.lam = _normalize_entries(self.field, lam)
        self.eta = _normalize_entries(self.field, eta)
        self.Delta1 = _normalize_entries(self.field, Delta1)
        self.Delta2 = _normalize_entries(self.field, Delta2)
        self.iota = _iota_entries(source, target, degree, self.field)
        self.level_shift = level_shift
        if not unchecked:
            problems = self.verify()
            if problems:
                raise ValueError("not an S-morphism: " + "; ".join(problems[:3]))

    # -- shape checks

    def _shape_issues(self) -> list[str]:
        issues = []
        k = self.degree
        checks = [
            ("lambda", self.lam, self.source.irr.generator, self.target.irr.generator, k),
            ("eta", self.eta, self.source.irr.generator, self.target.irr.generator, k - 1),
            ("Delta1", self.Delta1, self.source.irr.generator, self.target.red_gen, k),
            ("Delta2", self.Delta2, self.source.red_gen, self.target.irr.generator, k - 1),
        ]
        for name, entries, src_of, dst_of, shift in checks:
            for (f, t) in sorted(entries):
                try:
                    gf, gt = src_of(f), dst_of(t)
                except KeyError as exc:
                    issues.append(f"{name} references unknown generator {exc}")
                    continue
                if gt.degree != gf.degree + shift:
                    issues.append(
                        f"{name} entry {f}->{t} breaks degree shift {shift}"
                    )
        return issues

    IDENTITY_NAMES = ("lambda-chain", "eta-u", "delta2-corner", "delta1-corner")

    def identity_defects(self) -> dict[str, dict]:
        """The four morphism identities as entry dicts (empty = holds)."""
        s, t = self.source, self.target
        d0, d1 = s.d_entries(), t.d_entries()
        defects = {
            "lambda-chain": _add(_compose(d1, self.lam), _compose(self.lam, d0)),
            "eta-u": _add(
                _compose(d1, self.eta),
                _compose(self.eta, d0),
                _compose(t.u, self.lam),
                _compose(self.lam, s.u),
                _compose(t.delta2, self.Delta1),
                _compose(self.Delta2, s.delta1),
            ),
            "delta2-corner": _add(
                _compose(d1, self.Delta2),
                _compose(t.delta2, self.iota),
                _compose(self.lam, s.delta2),
            ),
            "delta1-corner": _add(
                _compose(t.delta1, self.lam),
                _compose(self.Delta1, d0),
                _compose(self.iota, s.delta1),
            ),
        }
        return defects

    def verify(self) -> list[str]:
        problems = self._shape_issues()
        if problems:
            return problems
        for name, defect in self.identity_defects().items():
            if defect:
                f, t = sorted(defect)[0]
                problems.append(f"identity {name} fails at {f}->{t}")
        if is_finite(self.level_shift):
            cm = self.as_total_chain_map(unchecked=True)
            problems.extend(
                p for p in cm.verify() if p.startswith("level shift")
            )
        return problems

    # -- assembled block map on totals

    def as_total_chain_map(self, *, unchecked: bool = False) -> ChainMap:
        entries = []
        for (f, t), c in self.lam.items():
            entries.append((f"a:{f}", f"a:{t}", c))
            entries.append((f"b:{f}", f"b:{t}", c))
        for (f, t), c in self.eta.items():
            entries.append((f"a:{f}", f"b:{t}", c))
        for (f, t), c in self.Delta1.items():
            entries.append((f"a:{f}", f"r:{t}", c))
        for (f, t), c in self.Delta2.items():
            entries.append((f"r:{f}", f"b:{t}", c))
        for (f, t), c in self.iota.items():
            entries.append((f"r:{f}", f"r:{t}", c))
        return ChainMap(
            self.source.total(), self.target.total(), self.degree, entries,
            level_shift=self.level_shift, unchecked=unchecked,
        )

    def commutes_with_totals(self) -> bool:
        cm = self.as_total_chain_map(unchecked=True)
        return not any(p.startswith("d.f != f.d") for p in cm.verify())

    # -- category structure

    @classmethod
    def identity(cls, s: SComplex) -> "SMorphism":
        one = 1 if s.field == FIELD_F2 else LaurentPoly.one()
        lam = [(g.gid, g.gid, one) for g in s.irr.generators]
        return cls(s, s, 0, lam=lam, level_shift=Fraction(0))

    def compose(self, inner: "SMorphism") -> "SMorphism":
        """self after inner; degree adds and identities are re-verified."""
        if inner.target is not self.source:
            raise ValueError("compose endpoints do not match")
        lam = _compose(self.lam, inner.lam)
        eta = _add(
            _compose(self.eta, inner.lam),
            _compose(self.lam, inner.eta),
            _compose(self.Delta2, inner.Delta1),
        )
        Delta1 = _add(_compose(self.Delta1, inner.lam), _compose(self.iota, inner.Delta1))
        Delta2 = _add(_compose(self.lam, inner.Delta2), _compose(self.Delta2, inner.iota))
        shift = INF
        if is_finite(self.level_shift) and is_finite(inner.level_shift):
            shift = self.level_shift + inner.level_shift
        out = SMorphism(
            inner.source, self.target, self.degree + inner.degree,
            lam=[(f, t, c) for (f, t), c in lam.items()],
            eta=[(f, t, c) for (f, t), c in eta.items()],
            Delta1=[(f, t, c) for (f, t), c in Delta1.items()],
            Delta2=[(f, t, c) for (f, t), c in Delta2.items()],
            level_shift=shift,
        )
        corner = _compose(self.iota, inner.iota)
        if corner != out.iota:
            raise ValueError("composed corner is not identity-shaped")
        return out


@dataclass
class SHomotopy:
    """Shaped homotopy blocks; (1,2), (1,3), (3,2), (3,3) corners vanish."""

    L: dict
    N: dict
    D1: dict
    D2: dict

    @classmethod
    def from_entries(cls, field: str, L=(), N=(), D1=(), D2=()):
        return cls(
            _normalize_entries(field, L),
            _normalize_entries(field, N),
            _normalize_entries(field, D1),
            _normalize_entries(field, D2),
        )

    @classmethod
    def zero(cls):
        return cls({}, {}, {}, {})


def homotopy_difference(source: SComplex, target: SComplex, h: SHomotopy) -> dict[str, dict]:
    """Blocks of d'h + h d for a shaped homotopy between the given objects."""
    d0, d1 = source.d_entries(), target.d_entries()
    return {
        "lam": _add(_compose(d1, h.L), _compose(h.L, d0)),
        "eta": _add(
            _compose(target.u, h.L),
            _compose(h.L, source.u),
            _compose(d1, h.N),
            _compose(h.N, d0),
            _compose(target.delta2, h.D1),
            _compose(h.D2, source.delta1),
        ),
        "Delta1": _add(_compose(target.delta1, h.L), _compose(h.D1, d0)),
        "Delta2": _add(_compose(d1, h.D2), _compose(h.L, source.delta2)),
    }


def _shape_ok(source: SComplex, target: SComplex, h: SHomotopy, degree: int) -> list[str]:
    issues = []
    checks = [
        ("L", h.L, source.irr.generator, target.irr.generator, degree + 1),
        ("N", h.N, source.irr.generator, target.irr.generator, degree),
        ("D1", h.D1, source.irr.generator, target.red_gen, degree + 1),
        ("D2", h.D2, source.red_gen, target.irr.generator, degree),
    ]
    for name, entries, src_of, dst_of, shift in checks:
        for (f, t) in sorted(entries):
            try:
                gf, gt = src_of(f), dst_of(t)
            except KeyError as exc:
                issues.append(f"{name} references unknown generator {exc}")
                continue
            if gt.degree != gf.degree + shift:
                issues.append(f"{name} entry {f}->{t} breaks degree shift {shift}")
    return issues


def is_s_homotopic(f: SMorphism, g: SMorphism, h: SHomotopy) -> bool:
    """Whether f - g = d'h + h d for the shaped homotopy h."""
    if f.source is not g.source or f.target is not g.target or f.degree != g.degree:
        raise ValueError("homotopy between non-parallel morphisms")
    shape = _shape_ok(f.source, f.target, h, f.degree)
    if shape:
        raise ValueError("; ".join(shape))
    diff = homotopy_difference(f.source, f.target, h)
    return (
        _add(f.lam, g.lam) == diff["lam"]
        and _add(f.eta, g.eta) == diff["eta"]
        and _add(f.Delta1, g.Delta1) == diff["Delta1"]
        and _add(f.Delta2, g.Delta2) == diff["Delta2"]
    )


@dataclass
class PromotionCertificate:
    invertible: bool
    inverse: "SMorphism"
    homotopy_verified: bool
    induced_maps_equal: bool

    @property
    def ok(self) -> bool:
        return self.invertible and self.homotopy_verified and self.induced_maps_equal


def promote_homotopy(F: SMorphism, L) -> tuple[SHomotopy, SMorphism, PromotionCertificate]:
    """Promote a chain homotopy L (with Ld + dL = lambda_F - id) to an
    S-homotopy h = diag(L, L, 0) and the S-isomorphism G = F + d'h + hd.

    G has identity diagonal blocks, hence an explicit inverse; the
    certificate re-verifies the homotopy, the inverse, and that F and G
    induce the same map on the homology of the total complex.
    """
    s = F.source
    if F.target is not s or F.degree != 0:
        raise ValueError("promotion applies to degree-0 endomorphisms")
    L = _normalize_entries(F.field, L) if not isinstance(L, dict) else L
    d = s.d_entries()
    one = 1 if F.field == FIELD_F2 else LaurentPoly.one()
    ident = {(g.gid, g.gid): one for g in s.irr.generators}
    expected = _add(F.lam, ident)
    if _add(_compose(L, d), _compose(d, L)) != expected:
        raise ValueError("L does not satisfy Ld + dL = lambda_F - id")
    h = SHomotopy(dict(L), {}, {}, {})
    diff = homotopy_difference(s, s, h)
    G = SMorphism(
        s, s, 0,
        lam=[(f, t, c) for (f, t), c in _add(F.lam, diff["lam"]).items()],
        eta=[(f, t, c) for (f, t), c in _add(F.eta, diff["eta"]).items()],
        Delta1=[(f, t, c) for (f, t), c in _add(F.Delta1, diff["Delta1"]).items()],
        Delta2=[(f, t, c) for (f, t), c in _add(F.Delta2, diff["Delta2"]).items()],
    )
    if G.lam != ident:
        raise AssertionError("promoted morphism does not have identity diagonal")
    inverse = SMorphism(
        s, s, 0,
        lam=[(f, t, c) for (f, t), c in ident.items()],
        eta=[(f, t, c) for (f, t), c in _add(G.eta, _compose(G.Delta2, G.Delta1)).items()],
        Delta1=[(f, t, c) for (f, t), c in G.Delta1.items()],
        Delta2=[(f, t, c) for (f, t), c in G.Delta2.items()],
    )
    ident_m = SMorphism.identity(s)
    invertible = (
        _morphism_blocks(inverse.compose(G)) == _morphism_blocks(ident_m)
        and _morphism_blocks(G.compose(inverse)) == _morphism_blocks(ident_m)
    )
    homotopy_verified = is_s_homotopic(F, G, h)
    fm = induced_map(F.as_total_chain_map())
    gm = induced_map(G.as_total_chain_map())
    induced_equal = all(fm[q] == gm[q] for q in fm)
    cert = PromotionCertificate(invertible, inverse, homotopy_verified, induced_equal)
    return h, G, cert


def _morphism_blocks(m: SMorphism):
    return (m.lam, m.eta, m.Delta1, m.Delta2)


# ---------------------------------------------------------------------------
# spectral invariants of an S-complex


def s_rho(s: SComplex, q: int):
    """rho of the total complex in degree q."""
    from .filtration import rho_degree

    return rho_degree(s.total(), q)


def s_lambda(s: SComplex, q: int):
    """rho of the irreducible part in degree q."""
    from .filtration import rho_degree

    return rho_degree(s.irr, q)
