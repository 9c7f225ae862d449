"""Credit-risk scoring with Gaussian mixtures.

Fits a Gaussian mixture to encoded applicant features, attaches pay-back
and default probabilities to each mixture component from training labels,
scores applicants by posterior-weighted cluster probabilities, and derives
expected-loss and approval-threshold analytics on top.
"""

__version__ = "0.1.0"

from .balance import BalanceReport, balance_train, smote_interpolate
from .dataio import (
    ColumnSpec,
    DatasetSchema,
    FeatureMatrix,
    FeatureScaler,
    RawTable,
    SplitSet,
    encode_features,
    fit_scaler,
    load_dataset,
    load_schema,
    parse_schema_text,
    split,
    subsample,
)
from .errors import (
    CreditmixError,
    InfeasibleBudgetError,
    InputError,
    NumericalError,
    UndefinedMetricError,
)
from .evaluation import (
    ConfusionMatrix,
    LogisticConfig,
    LogisticModel,
    MetricsReport,
    confusion,
    logistic_fit,
    logistic_objective,
    logistic_predict_proba,
    metrics,
    roc_auc,
)
from .gmm import (
    FitConfig,
    FittedGmm,
    GmmParams,
    cluster_posterior,
    e_step,
    fit,
    fit_restarts,
    gaussian_logpdf,
    kmeans_init,
    log_likelihood,
    m_step,
)
from .model_io import load_bundle, load_gmm, save_bundle, save_gmm
from .risk import (
    ElReport,
    PortfolioSpec,
    ThresholdCurve,
    approval_curve,
    build_el_report,
    default_grid,
    expected_loss_actual,
    expected_loss_model,
    income_lower_bound,
    invert_loss_budget,
    loss_upper_bound,
    relative_el_error,
    sample_exposures,
    total_expected_loss,
)
from .scoring import (
    ClusterPdTable,
    ScoringModel,
    classify,
    cluster_payback_probs,
    default_probability,
    payback_probability,
    score_rows,
)
from .seeds import derive_seed
from .selection import SelectionCurve, SelectionRecord, aic, bic, param_count, select_k
