"""Desk-scale algebra of S^1-equivariant Floer-type complexes.

Exact coefficient tower (F2, Laurent, rational functions), filtered chain
complexes with persistence and spectral invariants, S-complexes with
their structural relations and morphism calculus, the three-step
filtration spectral sequence, and combinatorial equivariant Morse
builders.
"""

from .fields import INF, NEG_INF, LaurentPoly, NovikovWindow, RationalFn
from .complexes import (
    ChainMap,
    FilteredChainComplex,
    Generator,
    HomologySummary,
    induced_map,
    is_quasi_iso,
    mapping_cone,
)
from .filtration import (
    Bar,
    Barcode,
    SpectralValue,
    barcode,
    compare,
    novikov_rho_window,
    psc_check,
    rho_class,
    rho_degree,
    sublevel,
)
from .scomplex import (
    SComplex,
    SHomotopy,
    SMorphism,
    assemble_total,
    is_s_homotopic,
    promote_homotopy,
    s_lambda,
    s_rho,
    validate_s,
)
from .specseq import abutment, lambda_rho_comparison, pages_closed_form, pages_generic
from .morse import (
    CorrespondenceData,
    EquivariantOrbitData,
    MorseData,
    NovikovMorseData,
    build_equivariant,
    build_morse,
    build_novikov,
    build_pullup,
    build_s_pullup,
    verify_functoriality,
)

__all__ = [
    "INF",
    "NEG_INF",
    "LaurentPoly",
    "NovikovWindow",
    "RationalFn",
    "ChainMap",
    "FilteredChainComplex",
    "Generator",
    "HomologySummary",
    "induced_map",
    "is_quasi_iso",
    "mapping_cone",
    "Bar",
    "Barcode",
    "SpectralValue",
    "barcode",
    "compare",
    "novikov_rho_window",
    "psc_check",
    "rho_class",
    "rho_degree",
    "sublevel",
    "SComplex",
    "SHomotopy",
    "SMorphism",
    "assemble_total",
    "is_s_homotopic",
    "promote_homotopy",
    "s_lambda",
    "s_rho",
    "validate_s",
    "abutment",
    "lambda_rho_comparison",
    "pages_closed_form",
    "pages_generic",
    "CorrespondenceData",
    "EquivariantOrbitData",
    "MorseData",
    "NovikovMorseData",
    "build_equivariant",
    "build_morse",
    "build_novikov",
    "build_pullup",
    "build_s_pullup",
    "verify_functoriality",
]
