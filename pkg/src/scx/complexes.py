"""Graded filtered chain complexes, chain maps, homology, mapping cones.

Complexes carry exact rational levels (the semi-norm of a generator) and
a degree -1 differential validated eagerly at construction.  Coefficient
fields: F2, or Laurent polynomials in the deck symbol T ("novikov"
complexes, ranks taken over the rational function proxy).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .fields import INF, NEG_INF, LaurentPoly, RationalFn, ext_max, is_finite
from .linalg import (
    F2,
    LAURENT,
    SparseMatrix,
    kernel_basis,
    rank,
    solve_in_image,
)

FIELD_F2 = "F2"
FIELD_NOVIKOV = "novikov"


def _coeff_is_zero(v) -> bool:
    return v == 0 if isinstance(v, int) else v.is_zero()


def _coeff_mul(a, b):
    """Product with promotion int -> LaurentPoly -> RationalFn as needed."""
    if isinstance(a, int) and isinstance(b, int):
        return a & b
    if isinstance(a, LaurentPoly) and isinstance(b, LaurentPoly):
        return a * b
    if isinstance(a, LaurentPoly):
        a = RationalFn.from_laurent(a)
    if isinstance(b, LaurentPoly):
        b = RationalFn.from_laurent(b)
    return a * b


def _coeff_add(a, b):
    if isinstance(a, int) and isinstance(b, int):
        return a ^ b
    if isinstance(a, LaurentPoly) != isinstance(b, LaurentPoly):
        if isinstance(a, LaurentPoly):
            a = RationalFn.from_laurent(a)
        if isinstance(b, LaurentPoly):
            b = RationalFn.from_laurent(b)
    return a + b


@dataclass(frozen=True)
class Generator:
    gid: str
    degree: int
    level: Fraction


@dataclass
class Violation:
    law: str  # "degree" | "d_squared" | "filtration" | "structure"
    detail: str


@dataclass
class ValidationReport:
    violations: list

    @property
    def clean(self) -> bool:
        return not self.violations

    def by_law(self, law: str):
        return [v for v in self.violations if v.law == law]


class InvalidComplexError(ValueError):
    def __init__(self, report: ValidationReport):
        self.report = report
        lines = "; ".join(f"{v.law}: {v.detail}" for v in report.violations[:4])
        more = "" if len(report.violations) <= 4 else f" (+{len(report.violations) - 4} more)"
        super().__init__(f"invalid complex: {lines}{more}")


def _matrix_kind(field: str) -> str:
    return F2 if field == FIELD_F2 else LAURENT


def chain_level(complex_: "FilteredChainComplex", chain: dict):
    """Semi-norm of a sparse chain {gid: scalar}; NEG_INF for zero."""
    levels = []
    for gid, coeff in chain.items():
        g = complex_.generator(gid)
        if complex_.field == FIELD_F2:
            if coeff & 1:
                levels.append(g.level)
        else:
            if isinstance(coeff, RationalFn):
                if not coeff.is_zero():
                    levels.append(g.level - coeff.t_order())
            elif not coeff.is_zero():
                levels.append(g.level - coeff.min_exp)
    return ext_max(levels)


class FilteredChainComplex:
    """Finitely generated graded complex with a level-compatible d.

    Construction validates d^2 = 0 and, when ``filtered`` (the default),
    the level law l(dg) <= l(g).  ``unchecked`` skips eager validation
    for the test harness.
    """

    def __init__(self, field: str, generators, diff_entries, *, filtered: bool = True,
                 deck: bool = False, unchecked: bool = False):
        if field not in (FIELD_F2, FIELD_NOVIKOV):
            raise ValueError(f"unknown field {field!r}")
        if deck and field != FIELD_NOVIKOV:
            raise ValueError("deck metadata applies to novikov complexes only")
        self.field = field
        self.filtered = filtered
        self.deck = deck
        gens = sorted(generators, key=lambda g: (g.degree, g.level, g.gid))
        self.generators = tuple(gens)
        self._gen_by_id = {}
        for g in gens:
            if g.gid in self._gen_by_id:
                raise ValueError(f"duplicate generator id {g.gid!r}")
            self._gen_by_id[g.gid] = g
        self._by_degree: dict[int, list[Generator]] = {}
        for g in gens:
            self._by_degree.setdefault(g.degree, []).append(g)
        self._pos = {
            g.gid: i for deg in self._by_degree.values() for i, g in enumerate(deg)
        }
        self._diff: dict[tuple[str, str], object] = {}
        for from_gid, to_gid, coeff in diff_entries:
            if from_gid not in self._gen_by_id:
                raise ValueError(f"differential from unknown generator {from_gid!r}")
            if to_gid not in self._gen_by_id:
                raise ValueError(f"differential into unknown generator {to_gid!r}")
            key = (from_gid, to_gid)
            if key in self._diff:
                raise ValueError(f"duplicate differential entry {key}")
            if field == FIELD_F2:
                coeff = int(coeff) & 1
                if coeff == 0:
                    continue
            else:
                if not isinstance(coeff, LaurentPoly):
                    raise ValueError("novikov differential entries must be LaurentPoly")
                if coeff.is_zero():
                    continue
            self._diff[key] = coeff
        self._matrices: dict[int, SparseMatrix] = {}
        self._homology = None
        if not unchecked:
            report = self.validate()
            if not report.clean:
                raise InvalidComplexError(report)

    # -- structure

    def generator(self, gid: str) -> Generator:
        return self._gen_by_id[gid]

    def degrees(self) -> list[int]:
        return sorted(self._by_degree)

    def gens_in_degree(self, q: int) -> list[Generator]:
        return self._by_degree.get(q, [])

    def dim(self, q: int) -> int:
        return len(self._by_degree.get(q, ()))

    def __len__(self):
        return len(self.generators)

    def diff_entries(self):
        return sorted(self._diff.items())

    def levels(self) -> list[Fraction]:
        return sorted({g.level for g in self.generators})

    def euler_characteristic(self) -> int:
        return sum((-1) ** q * self.dim(q) for q in self.degrees())

    def d_matrix(self, q: int) -> SparseMatrix:
        """Block of d from degree q to degree q-1 in per-degree positions."""
        if q in self._matrices:
            return self._matrices[q]
        src = self._by_degree.get(q, [])
        dst = self._by_degree.get(q - 1, [])
        kind = _matrix_kind(self.field)
        m = SparseMatrix(kind, len(dst), len(src))
        for (f, t), coeff in self._diff.items():
            gf, gt = self._gen_by_id[f], self._gen_by_id[t]
            if gf.degree == q and gt.degree == q - 1:
                m.data[(self._pos[t], self._pos[f])] = coeff
        self._matrices[q] = m
        return m

    def d_chain(self, chain: dict) -> dict:
        """Differential of a sparse chain {gid: scalar}."""
        out = {}
        for gid, coeff in chain.items():
            for (f, t), c in self._diff.items():
                if f != gid:
                    continue
                prod = _coeff_mul(c, coeff)
                out[t] = _coeff_add(out[t], prod) if t in out else prod
        return {k: v for k, v in out.items() if not _coeff_is_zero(v)}

    def chain_from_positions(self, q: int, vec: dict) -> dict:
        gens = self._by_degree.get(q, [])
        return {gens[i].gid: v for i, v in vec.items()}

    def positions_from_chain(self, q: int, chain: dict) -> dict:
        return {self._pos[gid]: v for gid, v in chain.items()}

    # -- validation

    def validate(self) -> ValidationReport:
        issues = []
        for (f, t), coeff in sorted(self._diff.items()):
            gf, gt = self._gen_by_id[f], self._gen_by_id[t]
            if gt.degree != gf.degree - 1:
                issues.append(
                    Violation(
                        "degree",
                        f"d sends {f} (deg {gf.degree}) to {t} (deg {gt.degree})",
                    )
                )
        if not issues:
            for q in self.degrees():
                prod = self.d_matrix(q).mul(self.d_matrix(q + 1))
                for (i, j, _v) in prod.entries():
                    src = self._by_degree[q + 1][j].gid
                    dst = self._by_degree[q - 1][i].gid
                    issues.append(
                        Violation("d_squared", f"(d.d)({src}) hits {dst} in degree {q - 1}")
                    )
        if self.filtered:
            for (f, t), coeff in sorted(self._diff.items()):
                gf, gt = self._gen_by_id[f], self._gen_by_id[t]
                eff = gt.level if self.field == FIELD_F2 else gt.level - coeff.min_exp
                if eff > gf.level:
                    issues.append(
                        Violation(
                            "filtration",
                            f"l(d {f}) reaches {eff} > l({f}) = {gf.level} via {t}",
                        )
                    )
        return ValidationReport(issues)

    # -- homology

    def homology(self) -> "HomologySummary":
        if self._homology is None:
            self._homology = HomologySummary(self)
        return self._homology

    def restricted(self, keep_ids) -> "FilteredChainComplex":
        """Subcomplex spanned by the given generator ids (must be d-closed)."""
        keep = set(keep_ids)
        gens = [g for g in self.generators if g.gid in keep]
        entries = [
            (f, t, c) for (f, t), c in self._diff.items() if f in keep and t in keep
        ]
        return FilteredChainComplex(
            self.field, gens, entries, filtered=self.filtered, deck=self.deck,
            unchecked=True,
        )


class HomologySummary:
    """Per-degree dimensions with deterministic representative cycles."""

    def __init__(self, complex_: FilteredChainComplex):
        self.complex = complex_
        self.dims: dict[int, int] = {}
        self.reps: dict[int, list[dict]] = {}
        self._kind = _matrix_kind(complex_.field)
        self._cycle_vecs: dict[int, list[dict]] = {}
        self._boundary_vecs: dict[int, list[dict]] = {}
        for q in complex_.degrees():
            self._compute_degree(q)

    def _compute_degree(self, q: int) -> None:
        c = self.complex
        n_q = c.dim(q)
        if n_q == 0:
            self.dims[q] = 0
            self.reps[q] = []
            return
        cycles = kernel_basis(c.d_matrix(q))
        d_up = c.d_matrix(q + 1)
        boundaries = []
        for j in range(c.dim(q + 1)):
            col = {i: v for (i, jj), v in d_up.data.items() if jj == j}
            if col:
                boundaries.append(col)
        self._cycle_vecs[q] = cycles
        self._boundary_vecs[q] = boundaries
        kind = self._kind if c.field == FIELD_F2 else "rational"
        base = SparseMatrix(kind, n_q, len(boundaries))
        for j, vec in enumerate(boundaries):
            for i, v in vec.items():
                if kind == "rational" and isinstance(v, LaurentPoly):
                    v = RationalFn.from_laurent(v)
                base.data[(i, j)] = v
        b_rank = rank(base)
        reps = []
        cur = base
        cur_rank = b_rank
        for vec in cycles:
            cand = SparseMatrix(kind, n_q, cur.cols + 1)
            cand.data.update(cur.data)
            for i, v in vec.items():
                cand.data[(i, cur.cols)] = v
            r = rank(cand)
            if r > cur_rank:
                reps.append(vec)
                cur, cur_rank = cand, r
        self.dims[q] = len(cycles) - b_rank
        self.reps[q] = [self.complex.chain_from_positions(q, v) for v in reps]

    def dim(self, q: int) -> int:
        return self.dims.get(q, 0)

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def is_cycle(self, q: int, chain: dict) -> bool:
        return not self.complex.d_chain(chain)

    def is_boundary(self, q: int, chain: dict) -> bool:
        vec = self.complex.positions_from_chain(q, chain)
        return solve_in_image(self.complex.d_matrix(q + 1), vec) is not None

    def class_coords(self, q: int, chain: dict):
        """Coordinates of [chain] in the representative basis, or None.

        None signals that the chain is not a cycle of degree q.
        """
        for gid in chain:
            if self.complex.generator(gid).degree != q:
                raise ValueError(f"chain touches {gid}, which is not in degree {q}")
        if self.complex.d_chain(chain):
            return None
        vec = self.complex.positions_from_chain(q, chain)
        n_q = self.complex.dim(q)
        kind = self._kind if self.complex.field == FIELD_F2 else "rational"
        bnd = self._boundary_vecs.get(q, [])
        reps = [self.complex.positions_from_chain(q, r) for r in self.reps.get(q, [])]
        m = SparseMatrix(kind, n_q, len(bnd) + len(reps))
        for j, col in enumerate(bnd):
            for i, v in col.items():
                if kind == "rational" and isinstance(v, LaurentPoly):
                    v = RationalFn.from_laurent(v)
                m.data[(i, j)] = v
        for j, col in enumerate(reps):
            for i, v in col.items():
                m.data[(i, len(bnd) + j)] = v
        if kind == "rational":
            vec = {
                i: (RationalFn.from_laurent(v) if isinstance(v, LaurentPoly) else v)
                for i, v in vec.items()
            }
        sol = solve_in_image(m, vec)
        if sol is None:
            raise ValueError("cycle does not lie in the cycle space (corrupt data)")
        coords = {}
        for j, v in sol.items():
            if j >= len(bnd):
                coords[j - len(bnd)] = v
        return coords


class ChainMap:
    """Degree-k chain map with a certified level shift.

    ``blocks`` maps source degree q to a SparseMatrix from the degree-q
    positions of the source to the degree-(q+k) positions of the target.
    Construction verifies the chain identity, and the level law when the
    shift certificate is finite.
    """

    def __init__(self, source: FilteredChainComplex, target: FilteredChainComplex,
                 degree: int, entries, level_shift=INF, *, unchecked: bool = False):
        if source.field != target.field:
            raise ValueError("chain map between different coefficient fields")
        self.source = source
        self.target = target
        self.degree = degree
        self.level_shift = level_shift
        self._entries: dict[tuple[str, str], object] = {}
        for from_gid, to_gid, coeff in entries:
            gf = source.generator(from_gid)
            gt = target.generator(to_gid)
            if gt.degree != gf.degree + degree:
                raise ValueError(
                    f"map entry {from_gid}->{to_gid} violates degree shift {degree}"
                )
            if source.field == FIELD_F2:
                coeff = int(coeff) & 1
                if not coeff:
                    continue
            else:
                if not isinstance(coeff, LaurentPoly):
                    raise ValueError("novikov map entries must be LaurentPoly")
                if coeff.is_zero():
                    continue
            key = (from_gid, to_gid)
            if key in self._entries:
                raise ValueError(f"duplicate map entry {key}")
            self._entries[key] = coeff
        self._blocks: dict[int, SparseMatrix] = {}
        if not unchecked:
            problems = self.verify()
            if problems:
                raise ValueError("not a chain map: " + "; ".join(problems[:3]))

    def entries(self):
        return sorted(self._entries.items())

    def block(self, q: int) -> SparseMatrix:
        if q in self._blocks:
            return self._blocks[q]
        src = self.source.gens_in_degree(q)
        dst = self.target.gens_in_degree(q + self.degree)
        kind = _matrix_kind(self.source.field)
        m = SparseMatrix(kind, len(dst), len(src))
        for (f, t), coeff in self._entries.items():
            if self.source.generator(f).degree == q:
                m.data[(self.target._pos[t], self.source._pos[f])] = coeff
        self._blocks[q] = m
        return m

    def apply(self, chain: dict) -> dict:
        out = {}
        for gid, coeff in chain.items():
            for (f, t), c in self._entries.items():
                if f != gid:
                    continue
                prod = _coeff_mul(c, coeff)
                out[t] = _coeff_add(out[t], prod) if t in out else prod
        return {k: v for k, v in out.items() if not _coeff_is_zero(v)}

    def verify(self) -> list[str]:
        """Chain identity and level-shift certificate; empty when verified."""
        problems = []
        degrees = set(self.source.degrees())
        degrees.update(q + 1 for q in self.source.degrees())
        for q in sorted(degrees):
            left = self.target.d_matrix(q + self.degree).mul(self.block(q))
            right = self.block(q - 1).mul(self.source.d_matrix(q))
            if left.add(right).data:
                problems.append(f"d.f != f.d on source degree {q}")
        if is_finite(self.level_shift):
            for g in self.source.generators:
                img = self.apply({g.gid: 1 if self.source.field == FIELD_F2 else LaurentPoly.one()})
                lv = chain_level(self.target, img)
                if lv is not NEG_INF and lv > g.level + self.level_shift:
                    problems.append(
                        f"level shift exceeds certificate on {g.gid}: {lv} > "
                        f"{g.level} + {self.level_shift}"
                    )
        return problems

    @classmethod
    def identity(cls, c: FilteredChainComplex) -> "ChainMap":
        one = 1 if c.field == FIELD_F2 else LaurentPoly.one()
        return cls(c, c, 0, [(g.gid, g.gid, one) for g in c.generators],
                   level_shift=Fraction(0))

    @classmethod
    def zero(cls, source, target, degree=0) -> "ChainMap":
        return cls(source, target, degree, [], level_shift=Fraction(0))

    def compose(self, inner: "ChainMap") -> "ChainMap":
        """self after inner."""
        if inner.target is not self.source:
            raise ValueError("compose endpoints do not match")
        entries = {}
        for (f, m1), c1 in inner._entries.items():
            for (m2, t), c2 in self._entries.items():
                if m1 != m2:
                    continue
                key = (f, t)
                prod = _coeff_mul(c1, c2)
                entries[key] = _coeff_add(entries[key], prod) if key in entries else prod
        entries = {k: v for k, v in entries.items() if not _coeff_is_zero(v)}
        shift = INF
        if is_finite(self.level_shift) and is_finite(inner.level_shift):
            shift = self.level_shift + inner.level_shift
        return ChainMap(
            inner.source, self.target, self.degree + inner.degree,
            [(f, t, c) for (f, t), c in entries.items()], level_shift=shift,
        )


def mapping_cone(f: ChainMap) -> FilteredChainComplex:
    """Cone of a degree-k chain map: cone_n = source_(n-k-1) (+) target_n.

    Generator levels are inherited; the convention makes chi(cone) =
    chi(target) - (-1)^k chi(source) and reduces to the classical cone at
    k = 0.
    """
    k = f.degree
    gens = []
    entries = []
    one = 1 if f.source.field == FIELD_F2 else LaurentPoly.one()
    for g in f.source.generators:
        gens.append(Generator(f"s:{g.gid}", g.degree + k + 1, g.level))
    for g in f.target.generators:
        gens.append(Generator(f"t:{g.gid}", g.degree, g.level))
    for (a, b), c in f.source._diff.items():
        entries.append((f"s:{a}", f"s:{b}", c))
    for (a, b), c in f.target._diff.items():
        entries.append((f"t:{a}", f"t:{b}", c))
    for (a, b), c in f._entries.items():
        entries.append((f"s:{a}", f"t:{b}", c))
    return FilteredChainComplex(
        f.source.field, gens, entries, filtered=False, unchecked=True,
    )


def is_quasi_iso(f: ChainMap) -> tuple[bool, dict[int, int]]:
    """Acyclicity of the mapping cone, with per-degree dims as certificate."""
    cone = mapping_cone(f)
    h = cone.homology()
    cert = {q: h.dim(q) for q in cone.degrees()}
    return all(v == 0 for v in cert.values()), cert


def induced_map(f: ChainMap) -> dict[int, SparseMatrix]:
    """Matrix of f* on homology in the chosen representative bases."""
    hs = f.source.homology()
    ht = f.target.homology()
    kind = _matrix_kind(f.source.field)
    if f.source.field != FIELD_F2:
        kind = "rational"
    out = {}
    for q in f.source.degrees():
        n_src = hs.dim(q)
        n_dst = ht.dim(q + f.degree)
        m = SparseMatrix(kind, n_dst, n_src)
        for j, rep in enumerate(hs.reps.get(q, [])):
            img = f.apply(rep)
            coords = ht.class_coords(q + f.degree, img)
            if coords is None:
                raise ValueError("image of a cycle is not a cycle (corrupt map)")
            for i, v in coords.items():
                m.data[(i, j)] = v
        out[q] = m
    return out
