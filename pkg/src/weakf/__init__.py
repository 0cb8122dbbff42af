"""Numerical differential geometry for weak metric f-structures.

Instantiates structures (f, Q, xi_i, eta^i, g) on explicit coordinate
charts via exact forward-mode jets and verifies their defining axioms,
structure-tensor identities, curvature conditions and classification
claims at machine precision.
"""

from .errors import (
    ConfigError,
    DegenerateSpectrum,
    DomainError,
    HypothesisUnmet,
    NotInContactDistribution,
    SingularMetric,
    WeakfError,
)
from .jets import ChartSpec, Coord, Const, Point, ScalarField
from .fields import MetricField, OneForm, Tensor11, TwoForm, VectorField
from .structure import EigenSplit, WeakFStructure
from .checks import CHECKS, SampleSet, nullity_fit
from .reporting import CheckReport, NullityFit, ReportDocument
from .examples import (
    RunConfig,
    build_paper_example,
    build_structure,
    build_unit_tangent_flat,
    run_suite,
)

__version__ = "0.1.0"

__all__ = [
    "CHECKS",
    "ChartSpec",
    "CheckReport",
    "ConfigError",
    "Const",
    "Coord",
    "DegenerateSpectrum",
    "DomainError",
    "EigenSplit",
    "HypothesisUnmet",
    "MetricField",
    "NotInContactDistribution",
    "NullityFit",
    "OneForm",
    "Point",
    "ReportDocument",
    "RunConfig",
    "SampleSet",
    "ScalarField",
    "SingularMetric",
    "Tensor11",
    "TwoForm",
    "VectorField",
    "WeakFStructure",
    "WeakfError",
    "build_paper_example",
    "build_structure",
    "build_unit_tangent_flat",
    "nullity_fit",
    "run_suite",
]
