"""Numerical laboratory for rotationally invariant momentum-capped uncertainty relations."""

from .model import (
    AnsatzModel,
    Bound,
    DomainError,
    KernelForm,
    Kind,
    PhysicalScales,
    capped_momentum,
    commutator_kernel,
    condition_residual_1d,
    eval_G,
    eval_H,
    scalar_bound_check,
)
from .states import (
    AccuracyError,
    AccuracyWarning,
    GaussianState,
    GridState,
    Measure,
    Superposition,
    canonical_moments,
    inner_product,
    normalize,
    sample_to_grid,
)
from .operators import OperatorTag, OpKind, apply, commutator_apply, verify_xp_identity, verify_xx_identity
from .analysis import (
    BoundFunction,
    ScanResult,
    UncertaintyReport,
    boosted_experiment,
    minimize_bound,
    robertson_suite,
    spherical_experiment,
    uncertainty_report,
)

__version__ = "0.1.0"
