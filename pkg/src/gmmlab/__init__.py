"""gmmlab: binary Gaussian-mixture classification under overparameterization.

Exact risk formulas, interpolating and regularized estimators, theorem
condition checkers and a deterministic Monte Carlo sweep engine.
"""

from .estimators import (
    SVM_BACKEND,
    Classifier,
    SvmSolution,
    averaging,
    hard_margin_svm,
    min_norm_ls,
    ridge,
    support_vector_fraction,
    svm_equals_ls,
)
from .experiments import SweepConfig, SweepPoint, collapse_score, figure, run_sweep
from .model import (
    Dataset,
    GmmModel,
    Spectrum,
    classify_ensemble,
    effective_ranks,
    preset_model,
    sample_dataset,
    sigma_signal,
    snr,
)
from .quadforms import (
    GramContext,
    PrimitiveForms,
    decomposition_residual,
    duality_certificate,
    lemma5_ratios,
    linear_separability,
    primitive_forms,
)
from .regimes import (
    check_benign,
    check_positive_correlation,
    check_thm1,
    check_thm2,
    check_thm6_noisy,
    lambda_star,
)
from .risk import (
    RiskReport,
    bound_averaging,
    bound_balanced,
    bound_bilevel,
    bound_isotropic,
    bound_noisy_isotropic,
    chernoff_bound,
    exact_risk,
    margin_bound_classic,
    margin_bound_svm,
    monte_carlo_risk,
    noisy_risk,
)

__version__ = "0.1.0"
