"""Exact boundary slopes and toroidal surgeries of length-3 Montesinos knots.

Candidate surfaces are built from edgepath systems in the Hatcher-Oertel
diagram; genus-one candidates are detected with an Euler-number test and
screened by incompressibility filters.  All arithmetic is exact.
"""

from .classifier import (
    CensusResult,
    ExcludedKnotError,
    ToroidalFinding,
    VerificationRow,
    census,
    census_knots,
    find_toroidal,
    incompressibility_filter,
    load_exclusions,
    verify_table,
)
from .diagram import ParseError, format_rational, parse_rational
from .edgepaths import Edgepath, enumerate_skeletons, path_length, validate_allowable
from .invariants import SurfaceReport, ebar, orientability, surface_report
from .knots import KnotParams, NotAKnotError, canonicalize, component_count, parse_knot
from .slopes import SlopeResult, boundary_slope, seifert_twist
from .solver import CandidateSystem, solve_systems

__version__ = "0.1.0"

__all__ = [
    "CandidateSystem",
    "CensusResult",
    "Edgepath",
    "ExcludedKnotError",
    "KnotParams",
    "NotAKnotError",
    "ParseError",
    "SlopeResult",
    "SurfaceReport",
    "ToroidalFinding",
    "VerificationRow",
    "boundary_slope",
    "canonicalize",
    "census",
    "census_knots",
    "component_count",
    "ebar",
    "enumerate_skeletons",
    "find_toroidal",
    "format_rational",
    "incompressibility_filter",
    "load_exclusions",
    "orientability",
    "parse_knot",
    "parse_rational",
    "path_length",
    "seifert_twist",
    "solve_systems",
    "surface_report",
    "validate_allowable",
    "verify_table",
]
