"""Numerical diagnostics for uniform convergence of function sequences."""

from .criteria import (
    HypothesisVerdict,
    check_convexity,
    check_distributed_variation,
    check_equicontinuity,
    check_monotone_in_n,
    check_pointwise,
)
from .errors import (
    ClassificationError,
    ConfigError,
    DinicheckError,
    DomainError,
    ExpressionSyntaxError,
    UnknownIdentifierError,
)
from .estimator import UniformConvergenceAnalyzer
from .exprlang import evaluate, parse, unparse
from .funcspace import (
    FunctionSequence,
    Grid,
    Interval,
    LimitFunction,
    eval_sequence,
    gallery,
    make_uniform_grid,
)
from .metrics import (
    DeviationProfile,
    ModulusEstimate,
    VariationProfile,
    family_modulus,
    modulus_of_continuity,
    sup_deviation,
    total_variation,
    windowed_variation,
)
from .report import ClassifyConfig, ConvergenceReport, classify, emit_curves, emit_report

__version__ = "0.1.0"
