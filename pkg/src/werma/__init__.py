"""Exact asymptotics and optimal class weights for weighted ERM on
imbalanced Gaussian mixtures in the proportional regime d/n in (0, 1),
validated by a bit-reproducible finite-sample simulator.
"""

from .errors import (
    ConvergenceError,
    DegenerateDataError,
    DomainError,
    InfeasibilityError,
    NumericError,
    SolverError,
    WermaError,
)
from .estimators import EffectiveDimension, WeightedERMClassifier
from .expectations import ExpectationRequest, expect_envelope_derivative
from .losses import (
    CustomLoss,
    EnvelopeValue,
    LogisticLoss,
    LossModel,
    SquareLoss,
    loss_by_name,
    moreau_envelope,
)
from .risks import ClassRisks, class_risks, qfunc
from .simulation import (
    FittedClassifier,
    SampleSet,
    evaluate,
    fit_weighted_general,
    fit_weighted_square,
    generate,
)
from .solver import (
    AsymptoticSolution,
    ComparisonVerdict,
    ProblemSpec,
    QuasiconvexityReport,
    compare_weighted_unweighted,
    equal_error_wce,
    rho_tilde,
    separation_threshold,
    solve_downsampled,
    solve_equal_error_square,
    solve_general,
    solve_square,
    solve_unweighted_square,
    wce_quasiconvexity_check,
)
from .spectrum import SpectrumReport, effective_dim

__version__ = "0.1.0"

__all__ = [
    "AsymptoticSolution",
    "ClassRisks",
    "ComparisonVerdict",
    "ConvergenceError",
    "CustomLoss",
    "DegenerateDataError",
    "DomainError",
    "EffectiveDimension",
    "EnvelopeValue",
    "ExpectationRequest",
    "FittedClassifier",
    "InfeasibilityError",
    "LogisticLoss",
    "LossModel",
    "NumericError",
    "ProblemSpec",
    "QuasiconvexityReport",
    "SampleSet",
    "SolverError",
    "SpectrumReport",
    "SquareLoss",
    "WeightedERMClassifier",
    "WermaError",
    "class_risks",
    "compare_weighted_unweighted",
    "effective_dim",
    "equal_error_wce",
    "evaluate",
    "expect_envelope_derivative",
    "fit_weighted_general",
    "fit_weighted_square",
    "generate",
    "loss_by_name",
    "moreau_envelope",
    "qfunc",
    "rho_tilde",
    "separation_threshold",
    "solve_downsampled",
    "solve_equal_error_square",
    "solve_general",
    "solve_square",
    "solve_unweighted_square",
    "wce_quasiconvexity_check",
]
