"""Named property suites driving the proved-theorem oracles.

Each property draws one instance from the seeded generator, runs the
check both ways where a theorem states an equivalence, and reports a
failure payload suitable for dumping and replay.  A failure here means
an implementation bug (the theorems are proved), never bad input.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .fields import INF
from .filtration import barcode, rho_degree
from .generators import (
    gen_corr_pair,
    gen_laurent_matrix,
    gen_novikov_morse,
    gen_s_endomorphism,
    gen_scomplex,
    gen_smorphism,
    mutate_scomplex,
    mutate_smorphism,
)
from .linalg import F2, kernel_basis, rank, span_rank, window_rank
from .morse import build_novikov, build_pullup, verify_functoriality
from .rng import Rng
from .scomplex import is_s_homotopic, promote_homotopy, validate_s
from .specseq import lambda_rho_comparison, pages_closed_form, pages_generic


@dataclass
class PropertyFailure:
    prop: str
    index: int
    seed: int
    detail: str
    document: dict | None = None


@dataclass
class SuiteResult:
    name: str
    count: int
    passed: int
    failures: list = field(default_factory=list)
    dumps: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


# ---------------------------------------------------------------------------
# independent oracles


def brute_image_rank(c, q, t, s) -> int:
    """rank of H_q(C^t) -> H_q(C^s) from spans, independent of barcodes."""

    def cycles(thresh):
        sub = c.restricted(g.gid for g in c.generators if g.level <= thresh)
        out = []
        for v in kernel_basis(sub.d_matrix(q)):
            out.append(sub.chain_from_positions(q, v))
        return out

    def boundaries(thresh):
        sub = c.restricted(g.gid for g in c.generators if g.level <= thresh)
        out = []
        for g in sub.gens_in_degree(q + 1):
            img = sub.d_chain({g.gid: 1})
            if img:
                out.append(img)
        return out

    gens_q = c.gens_in_degree(q)
    pos = {g.gid: i for i, g in enumerate(gens_q)}
    z_t = [{pos[g]: 1 for g in v} for v in cycles(t)]
    b_s = [{pos[g]: 1 for g in v} for v in boundaries(s)]
    n = len(gens_q)
    return span_rank(F2, n, z_t + b_s) - span_rank(F2, n, b_s)


def brute_rho_degree(c, q):
    top = max(c.levels(), default=None)
    if top is None:
        return INF
    for t in c.levels():
        if brute_image_rank(c, q, t, top) > 0:
            return t
    return INF


# ---------------------------------------------------------------------------
# properties


def prop_relation_equivalence(rng: Rng):
    """Four structural relations <=> assembled total differential squares
    to zero, on valid instances and on mutants."""
    from .io import scomplex_to_doc

    s = gen_scomplex(rng, max_free=12, max_red=3,
                     mode=rng.choice(["generic", "hyp1", "hyp2"]))
    candidate = s if rng.chance(1, 3) else mutate_scomplex(rng, s)
    report = validate_s(candidate)
    if not report.verdicts_coincide:
        return (
            f"relations_hold={report.relations_hold} but "
            f"total_d_squared_zero={report.total_d_squared_zero}",
            scomplex_to_doc(candidate),
        )
    return None


def prop_morphism_equivalence(rng: Rng):
    """Four morphism identities <=> the block map commutes with the
    assembled differentials, on valid morphisms and on mutants."""
    from .io import smap_to_doc

    f = gen_smorphism(rng, max_free=7, max_red=2)
    candidate = f if rng.chance(1, 3) else mutate_smorphism(rng, f)
    identities_ok = not any(candidate.identity_defects().values())
    commutes = candidate.commutes_with_totals()
    if identities_ok != commutes:
        return (
            f"identities={identities_ok} but total commute={commutes}",
            smap_to_doc(candidate),
        )
    return None


def prop_persistence(rng: Rng):
    """Barcode rank counts match brute-force image ranks at all threshold
    pairs; rho_degree matches the brute-force threshold scan."""
    from .generators import gen_complex
    from .io import complex_to_doc

    c = gen_complex(rng, max_gens=rng.randint(1, 14))
    bc = barcode(c)
    levels = c.levels()
    for q in c.degrees():
        for i, t in enumerate(levels):
            for s in levels[i:]:
                expect = brute_image_rank(c, q, t, s)
                got = bc.alive(q, t, s)
                if got != expect:
                    return (
                        f"barcode count {got} != rank {expect} at q={q}, "
                        f"t={t}, s={s}",
                        complex_to_doc(c),
                    )
        if rho_degree(c, q).value != brute_rho_degree(c, q):
            return (f"rho_degree mismatch at q={q}", complex_to_doc(c))
    for q, n in c.homology().dims.items():
        if bc.essential.get(q, 0) != n:
            return (f"essential count != dim H at q={q}", complex_to_doc(c))
    return None


def prop_pages(rng: Rng):
    """Closed-form pages match the generic Z/B pages at every (r, p, q);
    E3 = E4; graded reconstruction of the total homology."""
    from .io import scomplex_to_doc
    from .specseq import abutment

    s = gen_scomplex(rng, max_free=8, max_red=2,
                     mode=rng.choice(["generic", "hyp1", "hyp2"]),
                     chamber=rng.chance(1, 4))
    closed = pages_closed_form(s)
    generic = pages_generic(s)
    for pc, pg in zip(closed, generic):
        for pq in set(pc.cells) | set(pg.cells):
            if pc.cells.get(pq, 0) != pg.cells.get(pq, 0):
                return (
                    f"page {pc.r} cell {pq}: closed {pc.cells.get(pq, 0)} != "
                    f"generic {pg.cells.get(pq, 0)}",
                    scomplex_to_doc(s),
                )
    rep = abutment(s)
    if not rep.stable:
        return ("E3 != E4", scomplex_to_doc(s))
    if not rep.match:
        return ("graded reconstruction mismatch", scomplex_to_doc(s))
    return None


def prop_lambda_rho(rng: Rng):
    """With hypothesis (1) forced, lambda_(q-1) >= rho_q in every degree;
    with hypothesis (2) forced, lambda_q >= rho_q likewise."""
    from .io import scomplex_to_doc

    mode = rng.choice(["hyp1", "hyp2"])
    s = gen_scomplex(rng, max_free=8, max_red=2, mode=mode)
    degrees = s.degrees()
    if degrees:
        degrees = list(range(min(degrees) - 1, max(degrees) + 2))
    for q in degrees:
        rep = lambda_rho_comparison(s, q)
        hyp = rep.hypothesis1 if mode == "hyp1" else rep.hypothesis2
        if not hyp.holds:
            return (f"forced hypothesis not detected at q={q}", scomplex_to_doc(s))
        if not hyp.inequality_holds:
            return (
                f"{mode} inequality fails at q={q}: lambda={hyp.lam.value} "
                f"rho={hyp.rho.value}",
                scomplex_to_doc(s),
            )
    return None


def prop_functoriality(rng: Rng):
    """Morse pairs with Assumption B and acyclic cone: the spectral
    invariant never increases, degree-wise and per class."""
    from .io import corr_to_doc

    data = gen_corr_pair(rng, max_points=rng.randint(1, 12))
    f = build_pullup(data)
    rep = verify_functoriality(f)
    if not rep.assumption_c_holds:
        return ("generated pair lost cone acyclicity", corr_to_doc(data))
    if not rep.asserted:
        return ("generated pair lost the B certificate", corr_to_doc(data))
    if not rep.ok:
        return (f"inequality violated: {rep.counterexamples[:3]}", corr_to_doc(data))
    return None


def prop_compare_shifted(rng: Rng):
    """Level-raising maps with a certified finite shift: whenever the
    induced map is injective in a degree, the reported inequality holds."""
    from .filtration import compare
    from .io import corr_to_doc

    data = gen_corr_pair(rng, max_points=rng.randint(1, 10), assumption_b=False)
    f = build_pullup(data)
    for q in f.source.degrees():
        rep = compare(f, q)
        if rep.asserted and rep.inequality_holds is False:
            return (
                f"compare inequality violated at q={q} with shift "
                f"{f.level_shift}",
                corr_to_doc(data),
            )
    return None


def prop_promotion(rng: Rng):
    """Endomorphisms id + dL + Ld promote to verified S-isomorphisms with
    equal induced maps on the total homology."""
    from .io import scomplex_to_doc

    s = gen_scomplex(rng, max_free=8, max_red=2)
    endo, L = gen_s_endomorphism(rng, s)
    h, g, cert = promote_homotopy(endo, L)
    if not cert.invertible:
        return ("promoted morphism not invertible", scomplex_to_doc(s))
    if not cert.homotopy_verified or not is_s_homotopic(endo, g, h):
        return ("promotion homotopy failed verification", scomplex_to_doc(s))
    if not cert.induced_maps_equal:
        return ("induced maps differ after promotion", scomplex_to_doc(s))
    return None


def prop_novikov_linalg(rng: Rng):
    """Exact rational-function ranks agree with window elimination at
    widths 64 and 128; generated deck complexes have exact d^2 = 0."""
    m = gen_laurent_matrix(rng)
    exact = rank(m)
    w64 = window_rank(m, 64)
    w128 = window_rank(m, 128)
    if not (exact == w64 == w128):
        return (
            f"rank disagreement: exact {exact}, w64 {w64}, w128 {w128}",
            None,
        )
    if rank(m) != rank(m.transpose()):
        return ("rank != rank of transpose", None)
    if exact + len(kernel_basis(m)) != m.cols:
        return ("rank-nullity violated", None)
    data = gen_novikov_morse(rng, max_lifts=6)
    try:
        c = build_novikov(data)
    except Exception as exc:  # generated data must be valid
        from .io import novikov_morse_to_doc

        return (f"generated deck complex rejected: {exc}", novikov_morse_to_doc(data))
    return None


SUITES = {
    "relations": (prop_relation_equivalence, prop_morphism_equivalence),
    "persistence": (prop_persistence,),
    "pages": (prop_pages, prop_lambda_rho),
    "functoriality": (prop_functoriality, prop_promotion, prop_compare_shifted),
    "novikov": (prop_novikov_linalg,),
}


def run_suite(name: str, count: int, seed: int, dump_dir: str | None = None) -> SuiteResult:
    """Run ``count`` instances through the named property set.

    Failures produce replayable dump files (property, seed, index, and
    the offending instance) when a dump directory is given.
    """
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; known: {', '.join(sorted(SUITES))}")
    props = SUITES[name]
    result = SuiteResult(name, count, 0)
    for i in range(count):
        prop = props[i % len(props)]
        instance_seed = (seed * 0x9E3779B97F4A7C15 + i) & ((1 << 64) - 1)
        rng = Rng(instance_seed)
        outcome = prop(rng)
        if outcome is None:
            result.passed += 1
            continue
        detail, document = outcome
        failure = PropertyFailure(prop.__name__, i, instance_seed, detail, document)
        result.failures.append(failure)
        if dump_dir:
            path = _dump_failure(dump_dir, name, failure)
            result.dumps.append(path)
    return result


def _dump_failure(dump_dir: str, suite: str, failure: PropertyFailure) -> str:
    from .io import dumps

    os.makedirs(dump_dir, exist_ok=True)
    payload = {
        "suite": suite,
        "property": failure.prop,
        "index": failure.index,
        "seed": failure.seed,
        "detail": failure.detail,
    }
    if failure.document is not None:
        payload["instance"] = failure.document
    path = os.path.join(dump_dir, f"{suite}-{failure.index:05d}.json")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(payload))
    return path


def replay_failure(payload: dict):
    """Re-run the dumped property at its recorded seed."""
    prop_name = payload.get("property")
    seed = payload.get("seed")
    for props in SUITES.values():
        for prop in props:
            if prop.__name__ == prop_name:
                return prop(Rng(seed))
    raise ValueError(f"unknown property {prop_name!r}")
