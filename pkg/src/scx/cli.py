"""Command-line front end: the only I/O boundary of the library.

Machine-readable JSON goes to stdout, human summaries to stderr.  Exit
codes: 0 success, 1 invalid data, 2 usage error, 3 internal invariant
breach (a proved-theorem oracle failed, i.e. an implementation bug).
"""

from __future__ import annotations

import argparse
import os
import sys

from . import io as scxio
from .complexes import FIELD_NOVIKOV, FilteredChainComplex, InvalidComplexError
from .fields import INF, format_extended, parse_extended
from .filtration import barcode, novikov_rho_window, psc_check, rho_degree
from .generators import (
    gen_complex,
    gen_corr_pair,
    gen_morse,
    gen_novikov_morse,
    gen_scomplex,
)
from .morse import MorseData, build_equivariant, build_morse, build_novikov, build_pullup
from .rng import Rng
from .scomplex import InvalidSComplexError, SComplex, s_lambda, s_rho
from .specseq import abutment, pages_closed_form, pages_generic
from .suites import SUITES, replay_failure, run_suite

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_BREACH = 3


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _read_doc(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return scxio.loads(fh.read())
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_USAGE) from None
    except scxio.SchemaError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None


def _load(path: str):
    try:
        return scxio.load_document(_read_doc(path))
    except scxio.SchemaError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None
    except (InvalidComplexError, InvalidSComplexError) as exc:
        raise CliError(str(exc), EXIT_INVALID) from None
    except ValueError as exc:
        raise CliError(str(exc), EXIT_INVALID) from None


def _as_complex(obj, what: str) -> FilteredChainComplex:
    if isinstance(obj, FilteredChainComplex):
        return obj
    if isinstance(obj, MorseData):
        return build_morse(obj)
    from .morse import NovikovMorseData

    if isinstance(obj, NovikovMorseData):
        return build_novikov(obj)
    if isinstance(obj, SComplex):
        return obj.total()
    raise CliError(f"{what} does not describe a complex", EXIT_USAGE)


def _emit(args, doc: dict, summary: str) -> None:
    if args.format == "json":
        sys.stdout.write(scxio.dumps(doc))
        sys.stderr.write(summary + "\n")
    else:
        sys.stdout.write(summary + "\n")


# ---------------------------------------------------------------------------
# verbs


def _materialize(obj):
    """Build the loaded document so its validators actually run."""
    from .morse import CorrespondenceData, EquivariantOrbitData, NovikovMorseData
    from .morse import build_s_pullup

    if isinstance(obj, MorseData):
        return build_morse(obj)
    if isinstance(obj, NovikovMorseData):
        return build_novikov(obj)
    if isinstance(obj, EquivariantOrbitData):
        return build_equivariant(obj)
    if isinstance(obj, CorrespondenceData):
        if isinstance(obj.source, SComplex):
            return build_s_pullup(obj)
        return build_pullup(obj)
    return obj


def cmd_validate(args) -> int:
    doc = _read_doc(args.input)
    try:
        obj = _materialize(scxio.load_document({**doc}))
    except scxio.SchemaError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None
    except (InvalidComplexError, InvalidSComplexError) as exc:
        report = exc.report
        payload = {
            "valid": False,
            "violations": [
                {"law": v.law, "detail": v.detail} for v in report.violations
            ],
        }
        _emit(args, payload, f"invalid: {len(report.violations)} violation(s)")
        return EXIT_INVALID
    except ValueError as exc:
        payload = {"valid": False, "violations": [{"law": "structure", "detail": str(exc)}]}
        _emit(args, payload, f"invalid: {exc}")
        return EXIT_INVALID
    payload = {"valid": True, "violations": []}
    if isinstance(obj, SComplex):
        report = obj.validate()
        payload["warnings"] = report.warnings
        payload["relations_hold"] = report.relations_hold
        payload["total_d_squared_zero"] = report.total_d_squared_zero
    _emit(args, payload, "valid")
    return EXIT_OK


def cmd_homology(args) -> int:
    c = _as_complex(_load(args.input), args.input)
    if args.threshold is not None:
        from .filtration import sublevel

        try:
            c = sublevel(c, parse_extended(args.threshold))
        except ValueError as exc:
            raise CliError(str(exc), EXIT_USAGE) from None
    h = c.homology()
    dims = {str(q): h.dim(q) for q in sorted(h.dims) if h.dim(q)}
    payload = {"dims": dims, "total": h.total_dim()}
    if args.threshold is not None:
        payload["threshold"] = args.threshold
    _emit(args, payload, f"homology dims: {dims or '0'}")
    return EXIT_OK


def cmd_barcode(args) -> int:
    c = _as_complex(_load(args.input), args.input)
    try:
        bc = barcode(c)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_INVALID) from None
    payload = scxio.barcode_to_doc(bc)
    _emit(args, payload, f"{len(bc.bars)} bar(s)")
    return EXIT_OK


def cmd_rho(args) -> int:
    obj = _load(args.input)
    if args.degree is None:
        raise CliError("--degree is required for rho", EXIT_USAGE)
    q = args.degree
    if isinstance(obj, SComplex):
        sv = s_lambda(obj, q) if args.part == "irr" else s_rho(obj, q)
    else:
        c = _as_complex(obj, args.input)
        if c.field == FIELD_NOVIKOV:
            if args.window is None:
                raise CliError("--window is required for novikov rho", EXIT_USAGE)
            sv = novikov_rho_window(c, q, args.window)
        else:
            sv = rho_degree(c, q)
    payload = {"degree": q, "value": format_extended(sv.value)}
    if sv.tag:
        payload["tag"] = sv.tag
    if sv.witness:
        chain, t = sv.witness
        payload["witness"] = {
            "threshold": format_extended(t),
            "chain": {g: (v if isinstance(v, int) else str(v)) for g, v in sorted(chain.items())},
        }
    _emit(args, payload, f"rho_{q} = {format_extended(sv.value)}")
    return EXIT_OK


def cmd_scheck(args) -> int:
    doc = _read_doc(args.input)
    if doc.get("schema") == scxio.SCHEMA_ORBIT:
        try:
            s = build_equivariant(scxio.orbit_from_doc(doc))
        except InvalidSComplexError as exc:
            payload = {
                "valid": False,
                "violations": [
                    {"law": v.law, "detail": v.detail}
                    for v in exc.report.violations
                ],
            }
            _emit(args, payload, "invalid orbit data")
            return EXIT_INVALID
    else:
        try:
            s = scxio.scomplex_from_doc(doc, unchecked=True)
        except scxio.SchemaError as exc:
            raise CliError(str(exc), EXIT_USAGE) from None
    report = s.validate()
    payload = {
        "valid": report.clean,
        "relations_hold": report.relations_hold,
        "total_d_squared_zero": report.total_d_squared_zero,
        "verdicts_coincide": report.verdicts_coincide,
        "violations": [{"law": v.law, "detail": v.detail} for v in report.violations],
        "warnings": report.warnings,
    }
    window = s.allowable_degrees()
    if window is not None:
        payload["allowable_degrees"] = window
    _emit(args, payload, "clean" if report.clean else "violations found")
    return EXIT_OK if report.clean else EXIT_INVALID


def cmd_stotal(args) -> int:
    obj = _load(args.input)
    if not isinstance(obj, SComplex):
        raise CliError("stotal needs an scomplex document", EXIT_USAGE)
    payload = scxio.complex_to_doc(obj.total())
    _emit(args, payload, f"total complex with {len(obj.total())} generator(s)")
    return EXIT_OK


def cmd_pages(args) -> int:
    obj = _load(args.input)
    if not isinstance(obj, SComplex):
        raise CliError("pages needs an scomplex document", EXIT_USAGE)
    pages = pages_generic(obj) if args.generic else pages_closed_form(obj)
    rep = abutment(obj)
    payload = scxio.pages_to_doc(pages, rep)
    _emit(args, payload, f"pages computed; reconstruction match={rep.match}")
    return EXIT_OK if rep.ok else EXIT_BREACH


def cmd_abut(args) -> int:
    obj = _load(args.input)
    if not isinstance(obj, SComplex):
        raise CliError("abut needs an scomplex document", EXIT_USAGE)
    rep = abutment(obj)
    payload = {
        "stable": rep.stable,
        "match": rep.match,
        "homology": {str(n): d for n, d in sorted(rep.homology_dims.items())},
        "graded": {str(n): d for n, d in sorted(rep.graded_dims.items())},
    }
    _emit(args, payload, "abutment verified" if rep.ok else "ABUTMENT FAILED")
    return EXIT_OK if rep.ok else EXIT_BREACH


def cmd_compare(args) -> int:
    from .filtration import compare

    doc = _read_doc(args.input)
    if doc.get("schema") == scxio.SCHEMA_CORR:
        corr = scxio.corr_from_doc(doc)
        if isinstance(corr.source, SComplex):
            from .morse import build_s_pullup

            f = build_s_pullup(corr).as_total_chain_map()
        else:
            f = build_pullup(corr)
    elif doc.get("schema") == scxio.SCHEMA_SMAP:
        if not args.source or not args.target:
            raise CliError("--source and --target are required for smap compare",
                           EXIT_USAGE)
        src = _load(args.source)
        dst = _load(args.target)
        if not isinstance(src, SComplex) or not isinstance(dst, SComplex):
            raise CliError("smap compare needs scomplex endpoints", EXIT_USAGE)
        try:
            m = scxio.smap_from_doc(doc, src, dst)
        except ValueError as exc:
            raise CliError(str(exc), EXIT_INVALID) from None
        f = m.as_total_chain_map()
    else:
        raise CliError("compare needs a corr or smap document", EXIT_USAGE)
    if args.degree is None:
        raise CliError("--degree is required for compare", EXIT_USAGE)
    try:
        rep = compare(f, args.degree)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_INVALID) from None
    payload = {
        "degree": rep.degree,
        "map_degree": rep.map_degree,
        "level_shift": format_extended(rep.level_shift),
        "injective": rep.injective,
        "asserted": rep.asserted,
        "rho_source": format_extended(rep.rho_source.value),
        "rho_target": format_extended(rep.rho_target.value),
        "inequality_holds": rep.inequality_holds,
    }
    summary = (
        "hypothesis not met; nothing asserted"
        if not rep.asserted
        else f"rho_target <= rho_source + c: {rep.inequality_holds}"
    )
    _emit(args, payload, summary)
    if rep.asserted and rep.inequality_holds is False:
        return EXIT_BREACH
    return EXIT_OK


def cmd_psc(args) -> int:
    try:
        rho_in = parse_extended(args.rho_in)
        rho_out = parse_extended(args.rho_out)
        const_c = parse_extended(args.const_c)
        s2 = parse_extended(args.s2) if args.s2 is not None else None
    except ValueError as exc:
        raise CliError(f"bad rational: {exc}", EXIT_USAGE) from None
    if const_c is INF:
        raise CliError("constant C must be finite", EXIT_USAGE)
    verdict = psc_check(rho_in, rho_out, const_c, s2)
    payload = {
        "obstructed": verdict.obstructed,
        "s2_lower_bound": (
            None if verdict.s2_lower_bound is None
            else format_extended(verdict.s2_lower_bound)
        ),
        "consistent": verdict.consistent,
        "vacuous": verdict.vacuous,
    }
    summary = "obstructed" if verdict.obstructed else "not obstructed"
    if verdict.s2_lower_bound is not None:
        summary += f"; integral s^2 >= {format_extended(verdict.s2_lower_bound)}"
    if verdict.vacuous:
        summary += " (vacuous: rho_in infinite)"
    _emit(args, payload, summary)
    return EXIT_OK


def cmd_gen(args) -> int:
    rng = Rng(args.seed)
    kind = args.kind
    size = args.size
    if kind == "complex":
        c = gen_complex(rng, max_gens=size)
        doc = scxio.complex_to_doc(c)
    elif kind == "scomplex":
        mode = "generic"
        if args.force_hypothesis == 1 or args.force_delta2_zero:
            mode = "hyp1"
        elif args.force_hypothesis == 2:
            mode = "hyp2"
        s = gen_scomplex(rng, max_free=size, max_red=max(1, size // 4), mode=mode)
        doc = scxio.scomplex_to_doc(s)
    elif kind == "morse":
        doc = scxio.morse_to_doc(gen_morse(rng, max_points=size))
    elif kind == "orbit":
        s = gen_scomplex(rng, max_free=size, max_red=max(1, size // 4))
        from .morse import EquivariantOrbitData

        orbit = EquivariantOrbitData(
            free=[(g.gid, g.degree, g.level) for g in s.irr.generators],
            fixed=[(g.gid, g.degree, g.level) for g in s.red],
            d={k: v for k, v in s.irr._diff.items()},
            u=dict(s.u),
            delta1=dict(s.delta1),
            delta2=dict(s.delta2),
            chamber=s.chamber,
        )
        doc = scxio.orbit_to_doc(orbit)
    elif kind == "corr":
        data = gen_corr_pair(rng, max_points=size,
                             assumption_b=not args.no_assumption_b)
        doc = scxio.corr_to_doc(data)
    elif kind == "novikov":
        doc = scxio.novikov_morse_to_doc(gen_novikov_morse(rng, max_lifts=size))
    else:
        raise CliError(f"unknown kind {kind!r}", EXIT_USAGE)
    text = scxio.dumps(doc)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        sys.stderr.write(f"wrote {args.output}\n")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_suite(args) -> int:
    if args.replay:
        payload = _read_doc(args.replay)
        outcome = replay_failure(payload)
        if outcome is None:
            _emit(args, {"replay": "pass"}, "replay passed (failure not reproduced)")
            return EXIT_OK
        detail, _doc = outcome
        _emit(args, {"replay": "fail", "detail": detail}, f"replayed failure: {detail}")
        return EXIT_BREACH
    if args.name is None:
        raise CliError("--name is required (or --replay)", EXIT_USAGE)
    if args.name not in SUITES:
        raise CliError(
            f"unknown suite {args.name!r}; known: {', '.join(sorted(SUITES))}",
            EXIT_USAGE,
        )
    if args.count == 0:
        _emit(args, {"suite": args.name, "count": 0, "passed": 0, "ok": True},
              "vacuous pass: zero instances requested")
        return EXIT_OK
    result = run_suite(args.name, args.count, args.seed, args.dump_dir)
    payload = {
        "suite": result.name,
        "count": result.count,
        "passed": result.passed,
        "ok": result.ok,
        "failures": [
            {"property": f.prop, "index": f.index, "seed": f.seed, "detail": f.detail}
            for f in result.failures
        ],
        "dumps": result.dumps,
    }
    summary = f"{result.passed}/{result.count} passed"
    if not result.ok:
        summary += f"; {len(result.failures)} FAILURE(S)"
    _emit(args, payload, summary)
    return EXIT_OK if result.ok else EXIT_BREACH


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message, EXIT_USAGE)


def _build_parser() -> _Parser:
    parser = _Parser(prog="scx", description=__doc__)
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("validate", help="validate any scx/1 document")
    p.add_argument("input")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("homology", help="homology dimensions")
    p.add_argument("input")
    p.add_argument("--threshold", help="sublevel cut 'p/q' (F2 complexes)")
    common(p)
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("barcode", help="persistence barcode")
    p.add_argument("input")
    common(p)
    p.set_defaults(func=cmd_barcode)

    p = sub.add_parser("rho", help="spectral invariant of a degree")
    p.add_argument("input")
    p.add_argument("--degree", type=int)
    p.add_argument("--part", choices=("total", "irr"), default="total")
    p.add_argument("--window", type=int)
    common(p)
    p.set_defaults(func=cmd_rho)

    p = sub.add_parser("scheck", help="S-complex relation check")
    p.add_argument("input")
    common(p)
    p.set_defaults(func=cmd_scheck)

    p = sub.add_parser("stotal", help="assemble the total complex")
    p.add_argument("input")
    common(p)
    p.set_defaults(func=cmd_stotal)

    p = sub.add_parser("pages", help="spectral sequence pages")
    p.add_argument("input")
    p.add_argument("--generic", action="store_true")
    common(p)
    p.set_defaults(func=cmd_pages)

    p = sub.add_parser("abut", help="abutment and reconstruction report")
    p.add_argument("input")
    common(p)
    p.set_defaults(func=cmd_abut)

    p = sub.add_parser("compare", help="filtered functoriality comparison")
    p.add_argument("input")
    p.add_argument("--degree", type=int)
    p.add_argument("--source")
    p.add_argument("--target")
    common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("psc", help="positive-scalar-curvature obstruction")
    p.add_argument("--rho-in", required=True, dest="rho_in")
    p.add_argument("--rho-out", required=True, dest="rho_out")
    p.add_argument("--const-C", required=True, dest="const_c")
    p.add_argument("--s2")
    common(p)
    p.set_defaults(func=cmd_psc)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("--kind", required=True,
                   choices=("complex", "scomplex", "morse", "orbit", "corr", "novikov"))
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--size", type=int, default=10)
    p.add_argument("--force-hypothesis", type=int, choices=(1, 2), default=None)
    p.add_argument("--force-delta2-zero", action="store_true")
    p.add_argument("--no-assumption-b", action="store_true")
    p.add_argument("-o", "--output")
    common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("suite", help="run a named property suite")
    p.add_argument("--name", choices=tuple(sorted(SUITES)))
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--dump-dir")
    p.add_argument("--replay")
    common(p)
    p.set_defaults(func=cmd_suite)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if hasattr(args, "seed") and args.seed is None:
            env = os.environ.get("SCX_SEED")
            args.seed = int(env) if env else 0
        if hasattr(args, "size") and args.size < 0:
            raise CliError("size bound must be non-negative", EXIT_USAGE)
        return args.func(args)
    except CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.code
    except (InvalidComplexError, InvalidSComplexError) as exc:
        sys.stderr.write(f"invalid data: {exc}\n")
        return EXIT_INVALID
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
