"""Seeded random instances for every object kind, plus mutation helpers.

Construction strategy: a structured seed object whose laws hold by
construction (matched differential pairs, u = dV + Vd + delta2.w,
delta1 = w.d + psi with disjoint reducible roles), hidden behind a
random level-respecting unitriangular base change.  Constraint toggles
(force delta2* = 0, force the u-map vanishing hypotheses, Assumption B)
pick the construction branch; every emitted instance passes its module
validator.
"""

from __future__ import annotations

from fractions import Fraction

from .complexes import FIELD_F2, FIELD_NOVIKOV, FilteredChainComplex, Generator
from .fields import LaurentPoly
from .linalg import LAURENT, SparseMatrix
from .morse import CorrespondenceData, MorseData, NovikovMorseData
from .rng import Rng
from .scomplex import SComplex, SHomotopy, SMorphism, _add, _compose, homotopy_difference

_LEVELS = [Fraction(n, 2) for n in range(-8, 9)]


def _pick_level(rng: Rng) -> Fraction:
    return _LEVELS[rng.randint(0, len(_LEVELS) - 1)]


# ---------------------------------------------------------------------------
# structured complexes and base changes


class _Structured:
    """Matched pairs (d b_i = a_i) plus survivors, before base change."""

    def __init__(self, rng: Rng, max_gens: int, degree_lo: int, degree_hi: int,
                 prefix: str = "g"):
        self.gens: list[Generator] = []
        self.pairs: list[tuple[str, str]] = []
        self.a_ids: set[str] = set()
        self.b_ids: set[str] = set()
        self.survivor_ids: set[str] = set()
        counter = 0

        def fresh(degree: int, level: Fraction) -> str:
            nonlocal counter
            counter += 1
            gid = f"{prefix}{counter}"
            self.gens.append(Generator(gid, degree, level))
            return gid

        budget = rng.randint(0, max_gens)
        if budget >= 4 and rng.chance(5, 6):
            budget = max(budget, max_gens // 2 + 2)
        n_pairs = rng.randint(budget // 4, budget // 2)
        for _ in range(n_pairs):
            deg = rng.randint(degree_lo, degree_hi - 1)
            la = _pick_level(rng)
            lb = max(la, _pick_level(rng))
            a = fresh(deg, la)
            b = fresh(deg + 1, lb)
            self.pairs.append((b, a))
            self.a_ids.add(a)
            self.b_ids.add(b)
        for _ in range(rng.randint(0, budget - 2 * n_pairs)):
            gid = fresh(rng.randint(degree_lo, degree_hi), _pick_level(rng))
            self.survivor_ids.add(gid)

    def diff_entries(self, rng: Rng, field: str) -> dict:
        out = {}
        for b, a in self.pairs:
            if field == FIELD_F2:
                out[(b, a)] = 1
            else:
                la = _level_of(self.gens, a)
                lb = _level_of(self.gens, b)
                lo = max(0, _ceil_frac(la - lb))
                exps = {lo + rng.randint(0, 2)}
                if rng.chance(1, 2):
                    exps.add(lo + rng.randint(0, 3))
                out[(b, a)] = LaurentPoly.from_exponents(sorted(exps))
        return out


def _level_of(gens, gid):
    for g in gens:
        if g.gid == gid:
            return g.level
    raise KeyError(gid)


def _ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _unitriangular(rng: Rng, gens, field: str, density=3):
    """Random level-respecting unitriangular automorphism (P, Pinv)."""
    by_degree: dict[int, list[Generator]] = {}
    for g in gens:
        by_degree.setdefault(g.degree, []).append(g)
    one = 1 if field == FIELD_F2 else LaurentPoly.one()
    p = {(g.gid, g.gid): one for g in gens}
    nil = {}
    for deg_gens in by_degree.values():
        ordered = sorted(deg_gens, key=lambda g: (g.level, g.gid))
        for i, x in enumerate(ordered):
            for y in ordered[:i]:
                if rng.chance(1, density):
                    if field == FIELD_F2:
                        nil[(x.gid, y.gid)] = 1
                    else:
                        nil[(x.gid, y.gid)] = LaurentPoly.t_power(rng.randint(0, 2))
    p = _add(p, nil)
    ident = {(g.gid, g.gid): one for g in gens}
    pinv = dict(ident)
    power = dict(nil)
    while power:
        pinv = _add(pinv, power)
        power = _compose(power, nil)
    return p, pinv


def _conjugate(entries: dict, p: dict, pinv: dict) -> dict:
    return _compose(pinv, _compose(entries, p))


def gen_complex(rng: Rng, max_gens: int = 12, *, field: str = FIELD_F2,
                degree_lo: int = -2, degree_hi: int = 4,
                prefix: str = "g") -> FilteredChainComplex:
    """Random valid filtered complex."""
    st = _Structured(rng, max_gens, degree_lo, degree_hi, prefix)
    diff = st.diff_entries(rng, field)
    p, pinv = _unitriangular(rng, st.gens, field)
    diff = _conjugate(diff, p, pinv)
    return FilteredChainComplex(
        field, st.gens, [(f, t, v) for (f, t), v in diff.items()],
        deck=(field == FIELD_NOVIKOV),
    )


# ---------------------------------------------------------------------------
# S-complexes


def gen_scomplex(rng: Rng, max_free: int = 10, max_red: int = 3, *,
                 mode: str = "generic", field: str = FIELD_F2,
                 chamber: bool = False, prefix: str = "x") -> SComplex:
    """Random valid S-complex.

    Modes: "generic" (all couplings), "hyp1"/"delta2-zero" (delta2
    exact, so delta2* = 0 and the induced u-map vanishes), "hyp2"
    (delta1 = w.d, so delta1* = 0 and u lands in im delta2 at the chain
    level, threshold by threshold).
    """
    if mode not in ("generic", "hyp1", "hyp2", "delta2-zero"):
        raise ValueError(f"unknown mode {mode!r}")
    st = _Structured(rng, max_free, -2, 4, prefix)
    d = st.diff_entries(rng, field)
    one = 1 if field == FIELD_F2 else LaurentPoly.one()

    by_id = {g.gid: g for g in st.gens}
    non_a = [g for g in st.gens if g.gid not in st.a_ids]
    b_gens = [by_id[b] for b, _a in st.pairs]
    survivors = [by_id[i] for i in sorted(st.survivor_ids)]
    cycles = [by_id[i] for i in sorted(st.a_ids | st.survivor_ids)]

    def red_placement(role: str):
        """Anchor reducible generators on existing free orbits so the
        structural maps have level-respecting room to be nonzero;
        survivor anchors let the induced maps reach homology."""
        if role == "A" and non_a and rng.chance(3, 4):
            y = rng.choice(survivors) if survivors and rng.chance(2, 3) else rng.choice(non_a)
            return y.degree - 1, y.level - Fraction(rng.randint(0, 2), 2)
        if role == "B":
            if mode in ("hyp1", "delta2-zero") and b_gens and rng.chance(3, 4):
                b = rng.choice(b_gens)
                return b.degree + 1, b.level + Fraction(rng.randint(0, 2), 2)
            if cycles and rng.chance(3, 4):
                z = rng.choice(survivors) if survivors and rng.chance(2, 3) else rng.choice(cycles)
                return z.degree + 2, z.level + Fraction(rng.randint(0, 2), 2)
        return rng.randint(-2, 4), _pick_level(rng)

    red: list[Generator] = []
    roles: dict[str, str] = {}
    if chamber:
        ms = Fraction(rng.randint(-1, 2))
        theta = Generator(f"{prefix}:theta", int(2 * ms), _pick_level(rng))
        red = [theta]
        roles[theta.gid] = rng.choice(["A", "B"])
        chamber_value = ms
    else:
        chamber_value = None
        n_red = 0 if rng.chance(1, 5) else rng.randint(1, max_red)
        for i in range(n_red):
            role = rng.choice(["A", "B"])
            deg, level = red_placement(role)
            g = Generator(f"{prefix}:r{i}", deg, level)
            red.append(g)
            roles[g.gid] = role
    a_reds = [g for g in red if roles[g.gid] == "A"]
    b_reds = [g for g in red if roles[g.gid] == "B"]

    def random_map(sources, targets, shift, density=2, source_filter=None):
        out = {}
        for x in sources:
            if source_filter and not source_filter(x):
                continue
            for y in targets:
                if y.degree != x.degree + shift or y.level > x.level:
                    continue
                if rng.chance(1, density):
                    out[(x.gid, y.gid)] = one
        return out

    # w: C -> R (degree 0) into delta2-source reducibles
    w = random_map(st.gens, b_reds, 0)
    # psi: C -> R (degree -1) into the disjoint role, vanishing on im d
    psi = {}
    if mode != "hyp2":
        psi = random_map(
            st.gens, a_reds, -1, source_filter=lambda g: g.gid not in st.a_ids
        )
    delta1 = _add(_compose(w, d), psi)

    # delta2: B-reducibles -> cycles (generic) or boundaries (hyp1)
    delta2 = {}
    if mode in ("hyp1", "delta2-zero"):
        sigma = random_map(b_reds, b_gens, -1)
        delta2 = _compose(d, sigma)
    else:
        delta2 = random_map(b_reds, cycles, -2)

    v = random_map(st.gens, st.gens, -1)
    u = _add(_compose(d, v), _compose(v, d), _compose(delta2, w))

    p, pinv = _unitriangular(rng, st.gens, field)
    d = _conjugate(d, p, pinv)
    u = _conjugate(u, p, pinv)
    delta1 = _compose(delta1, p)
    delta2 = _compose(pinv, delta2)

    irr = FilteredChainComplex(
        field, st.gens, [(f, t, c) for (f, t), c in d.items()],
        deck=(field == FIELD_NOVIKOV), unchecked=True,
    )
    return SComplex(
        irr, red,
        u=[(f, t, c) for (f, t), c in u.items()],
        delta1=[(f, t, c) for (f, t), c in delta1.items()],
        delta2=[(f, t, c) for (f, t), c in delta2.items()],
        chamber=chamber_value,
    )


def mutate_scomplex(rng: Rng, s: SComplex, flips: int | None = None) -> SComplex:
    """Flip degree-valid entries in d, u, delta1, or delta2 (unchecked).

    The mutant keeps the block degree bookkeeping so the relation checks
    and the assembled-total check are both well posed; the flips may or
    may not break the relations.
    """
    candidates = []
    irr_gens = list(s.irr.generators)
    for x in irr_gens:
        for y in irr_gens:
            if y.degree == x.degree - 1 and y.level <= x.level:
                candidates.append(("d", x.gid, y.gid))
            if y.degree == x.degree - 2 and y.level <= x.level:
                candidates.append(("u", x.gid, y.gid))
        for t in s.red:
            if t.degree == x.degree - 1 and t.level <= x.level:
                candidates.append(("delta1", x.gid, t.gid))
    for t in s.red:
        for y in irr_gens:
            if y.degree == t.degree - 2 and y.level <= t.level:
                candidates.append(("delta2", t.gid, y.gid))
    if not candidates:
        return s
    one = 1 if s.field == FIELD_F2 else LaurentPoly.one()
    d = dict(s.irr._diff)
    u, d1, d2 = dict(s.u), dict(s.delta1), dict(s.delta2)
    blocks = {"d": d, "u": u, "delta1": d1, "delta2": d2}
    for _ in range(flips if flips is not None else rng.randint(1, 3)):
        kind, f, t = rng.choice(candidates)
        block = blocks[kind]
        if (f, t) in block:
            del block[(f, t)]
        else:
            block[(f, t)] = one
    irr = FilteredChainComplex(
        s.field, irr_gens, [(a, b, c) for (a, b), c in d.items()],
        deck=s.irr.deck, unchecked=True,
    )
    return SComplex(
        irr, s.red,
        u=[(a, b, c) for (a, b), c in u.items()],
        delta1=[(a, b, c) for (a, b), c in d1.items()],
        delta2=[(a, b, c) for (a, b), c in d2.items()],
        chamber=s.chamber, unchecked=True,
    )


# ---------------------------------------------------------------------------
# S-morphisms


def _shift_scomplex(s: SComplex, k: int, rng: Rng, prefix: str) -> tuple[SComplex, dict]:
    """Degree-shifted conjugated copy; returns (target, lambda-entries of a
    valid morphism s -> target)."""
    rename = {g.gid: f"{prefix}:{g.gid}" for g in s.irr.generators}
    rename_red = {g.gid: f"{prefix}:{g.gid}" for g in s.red}
    gens = [Generator(rename[g.gid], g.degree + k, g.level) for g in s.irr.generators]
    red = [Generator(rename_red[g.gid], g.degree + k, g.level) for g in s.red]
    remap = lambda e, rf, rt: {(rf[a], rt[b]): c for (a, b), c in e.items()}
    d = remap(dict(s.irr._diff), rename, rename)
    u = remap(s.u, rename, rename)
    d1 = remap(s.delta1, rename, rename_red)
    d2 = remap(s.delta2, rename_red, rename)
    q, qinv = _unitriangular(rng, gens, s.field)
    d = _conjugate(d, q, qinv)
    u = _conjugate(u, q, qinv)
    d1 = _compose(d1, q)
    d2 = _compose(qinv, d2)
    irr = FilteredChainComplex(
        s.field, gens, [(a, b, c) for (a, b), c in d.items()],
        deck=s.irr.deck, unchecked=True,
    )
    target = SComplex(
        irr, red,
        u=[(a, b, c) for (a, b), c in u.items()],
        delta1=[(a, b, c) for (a, b), c in d1.items()],
        delta2=[(a, b, c) for (a, b), c in d2.items()],
        chamber=s.chamber,
    )
    lam = _compose(qinv, {(g.gid, rename[g.gid]): _one_of(s) for g in s.irr.generators})
    return target, lam


def _one_of(s: SComplex):
    return 1 if s.field == FIELD_F2 else LaurentPoly.one()


def gen_shaped_homotopy(rng: Rng, source: SComplex, target: SComplex,
                        degree: int, density: int = 3) -> SHomotopy:
    """Random homotopy with the constrained block shape, level-respecting."""
    one = _one_of(source)

    def rand(sources, targets, shift):
        out = {}
        for x in sources:
            for y in targets:
                if y.degree != x.degree + shift or y.level > x.level:
                    continue
                if rng.chance(1, density):
                    out[(x.gid, y.gid)] = one
        return out

    return SHomotopy(
        L=rand(source.irr.generators, target.irr.generators, degree + 1),
        N=rand(source.irr.generators, target.irr.generators, degree),
        D1=rand(source.irr.generators, target.red, degree + 1),
        D2=rand(source.red, target.irr.generators, degree),
    )


def perturb_smorphism(f: SMorphism, h: SHomotopy) -> SMorphism:
    """f + d'h + h d: a morphism S-homotopic to f (same degree)."""
    diff = homotopy_difference(f.source, f.target, h)
    return SMorphism(
        f.source, f.target, f.degree,
        lam=[(a, b, c) for (a, b), c in _add(f.lam, diff["lam"]).items()],
        eta=[(a, b, c) for (a, b), c in _add(f.eta, diff["eta"]).items()],
        Delta1=[(a, b, c) for (a, b), c in _add(f.Delta1, diff["Delta1"]).items()],
        Delta2=[(a, b, c) for (a, b), c in _add(f.Delta2, diff["Delta2"]).items()],
    )


def gen_smorphism(rng: Rng, max_free: int = 8, max_red: int = 2, *,
                  degree: int | None = None, field: str = FIELD_F2) -> SMorphism:
    """Random valid S-morphism: a conjugation isomorphism onto a shifted
    copy, perturbed by a random shaped homotopy."""
    s = gen_scomplex(rng, max_free, max_red, field=field)
    k = degree if degree is not None else rng.randint(-1, 1)
    target, lam = _shift_scomplex(s, k, rng, "t")
    f = SMorphism(s, target, k, lam=[(a, b, c) for (a, b), c in lam.items()])
    h = gen_shaped_homotopy(rng, s, target, k)
    return perturb_smorphism(f, h)


def gen_s_endomorphism(rng: Rng, s: SComplex) -> tuple[SMorphism, dict]:
    """Endomorphism F = id + d~h + h d~ with full shaped h; returns (F, L)
    where L is h's diagonal block, so lambda_F = id + dL + Ld."""
    h = gen_shaped_homotopy(rng, s, s, 0)
    ident = SMorphism.identity(s)
    return perturb_smorphism(ident, h), dict(h.L)


def mutate_smorphism(rng: Rng, f: SMorphism) -> SMorphism:
    """Flip one degree-valid entry in a random block (unchecked)."""
    src, dst = f.source, f.target
    k = f.degree
    candidates = []
    for x in src.irr.generators:
        for y in dst.irr.generators:
            if y.degree == x.degree + k:
                candidates.append(("lam", x.gid, y.gid))
            if y.degree == x.degree + k - 1:
                candidates.append(("eta", x.gid, y.gid))
        for t in dst.red:
            if t.degree == x.degree + k:
                candidates.append(("Delta1", x.gid, t.gid))
    for t in src.red:
        for y in dst.irr.generators:
            if y.degree == t.degree + k - 1:
                candidates.append(("Delta2", t.gid, y.gid))
    if not candidates:
        return f
    block, a, b = rng.choice(candidates)
    one = _one_of(src)
    blocks = {
        "lam": dict(f.lam),
        "eta": dict(f.eta),
        "Delta1": dict(f.Delta1),
        "Delta2": dict(f.Delta2),
    }
    target = blocks[block]
    if (a, b) in target:
        del target[(a, b)]
    else:
        target[(a, b)] = one
    return SMorphism(
        src, dst, k,
        lam=[(x, y, c) for (x, y), c in blocks["lam"].items()],
        eta=[(x, y, c) for (x, y), c in blocks["eta"].items()],
        Delta1=[(x, y, c) for (x, y), c in blocks["Delta1"].items()],
        Delta2=[(x, y, c) for (x, y), c in blocks["Delta2"].items()],
        unchecked=True,
    )


# ---------------------------------------------------------------------------
# Morse data and correspondences


def gen_morse(rng: Rng, max_points: int = 10, prefix: str = "p") -> MorseData:
    c = gen_complex(rng, max_points, prefix=prefix)
    points = [(g.gid, g.degree, g.level) for g in c.generators]
    flows = {(a, b): 1 for (a, b), v in c._diff.items() if v}
    return MorseData(points, flows)


def gen_corr_pair(rng: Rng, max_points: int = 10, *, degree: int | None = None,
                  assumption_b: bool = True) -> CorrespondenceData:
    """Morse-complex pair with Assumption B and an acyclic-cone map."""
    from .morse import build_morse

    src = build_morse(gen_morse(rng, max_points, prefix="s"))
    k = degree if degree is not None else rng.randint(-1, 1)
    inf_src = min((g.level for g in src.generators), default=Fraction(0))
    levels = sorted({g.level for g in src.generators})
    squeeze: dict[Fraction, Fraction] = {}
    for i, lv in enumerate(levels):
        if assumption_b:
            squeeze[lv] = inf_src - 1 + Fraction(i, max(1, len(levels)))
        else:
            squeeze[lv] = lv + Fraction(rng.randint(0, 2), 2)
    gens = [
        Generator(f"t:{g.gid}", g.degree + k, squeeze[g.level])
        for g in src.generators
    ]
    diff = {
        (f"t:{a}", f"t:{b}"): v for (a, b), v in src._diff.items()
    }
    q, qinv = _unitriangular(rng, gens, FIELD_F2)
    diff = _conjugate(diff, q, qinv)
    dst = FilteredChainComplex(
        FIELD_F2, gens, [(a, b, v) for (a, b), v in diff.items()]
    )
    counts = _compose(qinv, {(g.gid, f"t:{g.gid}"): 1 for g in src.generators})
    return CorrespondenceData(
        source=src, target=dst, counts=dict(counts), shift=k
    )


def gen_novikov_morse(rng: Rng, max_lifts: int = 8) -> NovikovMorseData:
    c = gen_complex(rng, max_lifts, field=FIELD_NOVIKOV, prefix="n")
    lifts = [(g.gid, g.degree, g.level) for g in c.generators]
    counts = {(a, b): v for (a, b), v in c._diff.items()}
    return NovikovMorseData(lifts, counts)


def gen_laurent_matrix(rng: Rng, max_dim: int = 8, exp_lo: int = -4,
                       exp_hi: int = 4) -> SparseMatrix:
    rows = rng.randint(1, max_dim)
    cols = rng.randint(1, max_dim)
    entries = []
    for i in range(rows):
        for j in range(cols):
            if rng.chance(1, 2):
                exps = [e for e in range(exp_lo, exp_hi + 1) if rng.chance(1, 4)]
                p = LaurentPoly.from_exponents(exps)
                if not p.is_zero():
                    entries.append((i, j, p))
    return SparseMatrix(LAURENT, rows, cols, entries)
