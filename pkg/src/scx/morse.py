"""Builders from combinatorial flow data to verified complexes and maps.

Flow counts are taken as ground truth; the builders validate the global
consistency laws (d squared, the S-complex relations, the chain-map and
S-morphism identities) and fail loudly naming the violated law.  The
transversality obligations behind the counts live upstream and surface
only through those failures.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .complexes import (
    ChainMap,
    FIELD_F2,
    FIELD_NOVIKOV,
    FilteredChainComplex,
    Generator,
    is_quasi_iso,
)
from .fields import INF, LaurentPoly, is_finite
from .filtration import rho_class, rho_degree
from .scomplex import SComplex, SMorphism


@dataclass
class MorseData:
    """Critical points with Morse indices and function values; F2 flow
    counts between index-difference-1 pairs."""

    points: list  # (id, index, value)
    flows: dict  # (from_id, to_id) -> 0|1
    name: str = "morse"


@dataclass
class EquivariantOrbitData:
    free: list  # (id, index, value) free orbits
    fixed: list  # (id, index, value) reducible lifts
    d: dict = field(default_factory=dict)  # (a, b) -> bit, index gap 1
    u: dict = field(default_factory=dict)  # (a, b) -> bit, index gap 2
    delta1: dict = field(default_factory=dict)  # (a, theta) -> bit
    delta2: dict = field(default_factory=dict)  # (theta, b) -> bit
    chamber: Fraction | None = None


@dataclass
class CorrespondenceData:
    source: object  # FilteredChainComplex | SComplex
    target: object
    counts: dict  # (a, b) -> bit: the pull-up-push-down matrix
    shift: int = 0  # dim W - dim Y1
    u_counts: dict = field(default_factory=dict)
    delta1_counts: dict = field(default_factory=dict)
    delta2_counts: dict = field(default_factory=dict)


def build_morse(m: MorseData) -> FilteredChainComplex:
    """Morse complex: degree = index, level = value, d from flow counts.

    Raises InvalidComplexError naming the law when the counts are
    globally inconsistent (d squared) or a count ascends the function.
    """
    gens = [Generator(pid, idx, Fraction(val)) for pid, idx, val in m.points]
    by_id = {g.gid: g for g in gens}
    for (a, b), bit in m.flows.items():
        if bit & 1 == 0:
            continue
        if a not in by_id or b not in by_id:
            raise ValueError(f"flow count references unknown point ({a}, {b})")
        if by_id[a].degree - by_id[b].degree != 1:
            raise ValueError(
                f"flow count ({a}, {b}) connects indices "
                f"{by_id[a].degree} and {by_id[b].degree}; gap must be 1"
            )
    entries = [(a, b, bit) for (a, b), bit in m.flows.items()]
    return FilteredChainComplex(FIELD_F2, gens, entries)


def build_equivariant(e: EquivariantOrbitData) -> SComplex:
    """Equivariant complex from orbit data; rejection names the relation."""
    irr_gens = [Generator(pid, idx, Fraction(val)) for pid, idx, val in e.free]
    red_gens = [Generator(pid, idx, Fraction(val)) for pid, idx, val in e.fixed]
    irr = FilteredChainComplex(
        FIELD_F2, irr_gens, [(a, b, v) for (a, b), v in e.d.items()], unchecked=True
    )
    return SComplex(
        irr,
        red_gens,
        u=[(a, b, v) for (a, b), v in e.u.items()],
        delta1=[(a, t, v) for (a, t), v in e.delta1.items()],
        delta2=[(t, b, v) for (t, b), v in e.delta2.items()],
        chamber=e.chamber,
    )


def _assumption_b_shift(source: FilteredChainComplex, target: FilteredChainComplex):
    """Level-shift certificate: 0 under Assumption B, else the trivial bound."""
    if not target.generators or not source.generators:
        return Fraction(0), True
    sup_target = max(g.level for g in target.generators)
    inf_source = min(g.level for g in source.generators)
    if sup_target <= inf_source:
        return Fraction(0), True
    return sup_target - inf_source, False


def build_pullup(c: CorrespondenceData) -> ChainMap:
    """Chain map of degree = dimension shift from correspondence counts."""
    src, dst = c.source, c.target
    if not isinstance(src, FilteredChainComplex) or not isinstance(dst, FilteredChainComplex):
        raise ValueError("build_pullup needs plain complexes; see build_s_pullup")
    shift, b_holds = _assumption_b_shift(src, dst)
    return ChainMap(
        src, dst, c.shift, [(a, b, v) for (a, b), v in c.counts.items()],
        level_shift=shift,
    )


def build_s_pullup(c: CorrespondenceData) -> SMorphism:
    """Equivariant pull-up-push-down morphism; all four identities checked."""
    src, dst = c.source, c.target
    if not isinstance(src, SComplex) or not isinstance(dst, SComplex):
        raise ValueError("build_s_pullup needs S-complexes")
    shift, _ = _assumption_b_shift(src.total(), dst.total())
    return SMorphism(
        src, dst, c.shift,
        lam=[(a, b, v) for (a, b), v in c.counts.items()],
        eta=[(a, b, v) for (a, b), v in c.u_counts.items()],
        Delta1=[(a, t, v) for (a, t), v in c.delta1_counts.items()],
        Delta2=[(t, b, v) for (t, b), v in c.delta2_counts.items()],
        level_shift=shift,
    )


@dataclass
class NovikovMorseData:
    lifts: list  # (id, index, value): one chosen lift per critical point
    counts: dict  # (from, to) -> LaurentPoly in the deck symbol T
    name: str = "novikov-morse"


def build_novikov(m: NovikovMorseData) -> FilteredChainComplex:
    """Morse complex of the infinite cyclic cover over Laurent entries.

    d squared is checked exactly over the polynomial ring; deck metadata
    (multiplication by T drops the level by 1) is attached for the
    windowed spectral invariant.
    """
    gens = [Generator(pid, idx, Fraction(val)) for pid, idx, val in m.lifts]
    entries = []
    for (a, b), p in m.counts.items():
        if not isinstance(p, LaurentPoly):
            raise ValueError("novikov counts must be Laurent polynomials")
        entries.append((a, b, p))
    return FilteredChainComplex(FIELD_NOVIKOV, gens, entries, deck=True)


@dataclass
class FunctorialityReport:
    assumption_c_holds: bool
    level_shift: object
    asserted: bool
    degree_results: list  # (q, rho_source, rho_target, ok)
    class_results: list  # (class_chain, rho_source, rho_target, ok)
    counterexamples: list

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def verify_functoriality(f: ChainMap, classes=None) -> FunctorialityReport:
    """Execute the spectral-invariant inequalities for a verified map.

    Assumption C is checked via cone acyclicity; with it and a level
    certificate c = 0 the degree-wise and per-class inequalities are
    asserted.  A violation would be an implementation bug, so offending
    instances are collected for dumping rather than silently dropped.
    """
    acyclic, _cert = is_quasi_iso(f)
    asserted = acyclic and is_finite(f.level_shift) and f.level_shift == 0
    degree_results = []
    class_results = []
    counterexamples = []
    if asserted:
        k = f.degree
        degrees = sorted(set(f.source.degrees()) | {q - k for q in f.target.degrees()})
        for q in degrees:
            rs = rho_degree(f.source, q)
            rt = rho_degree(f.target, q + k)
            ok = _ext_le(rt.value, rs.value)
            degree_results.append((q, rs, rt, ok))
            if not ok:
                counterexamples.append(("degree", q, rs.value, rt.value))
        hs = f.source.homology()
        if classes is None:
            classes = []
            for q in sorted(hs.reps):
                reps = hs.reps[q]
                if not reps:
                    continue
                if len(reps) <= 5:
                    classes.extend(_all_combinations(f.source.field, reps))
                else:
                    classes.extend(reps)
        for a in classes:
            img = f.apply(a)
            rs = rho_class(f.source, a)
            rt = rho_class(f.target, img)
            ok = _ext_le(rt.value, rs.value)
            class_results.append((a, rs, rt, ok))
            if not ok:
                counterexamples.append(("class", a, rs.value, rt.value))
    return FunctorialityReport(
        acyclic, f.level_shift, asserted, degree_results, class_results,
        counterexamples,
    )


def _all_combinations(field: str, reps: list) -> list:
    """Every nonzero F2 combination of the representatives."""
    out = []
    for mask in range(1, 1 << len(reps)):
        chain: dict = {}
        for i, rep in enumerate(reps):
            if (mask >> i) & 1:
                for gid, v in rep.items():
                    if field == FIELD_F2:
                        nv = chain.get(gid, 0) ^ v
                    else:
                        nv = chain[gid] + v if gid in chain else v
                    if (nv == 0) if isinstance(nv, int) else nv.is_zero():
                        chain.pop(gid, None)
                    else:
                        chain[gid] = nv
        if chain:
            out.append(chain)
    return out


def _ext_le(a, b) -> bool:
    if a is INF:
        return b is INF
    if b is INF:
        return True
    return a <= b
