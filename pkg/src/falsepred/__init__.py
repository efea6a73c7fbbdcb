"""Stability laboratory for an online structure learner over binary data.

A ground-truth world couples an observable bit x_a to one informative bit x_0
while n further bits are pure noise; the learner greedily refines a variable
subset plus a binary prediction table after every new sample.  The package
measures how redundant zero-error hypotheses ("false predictors") arise,
survive and die, and provides monitoring tools that try to tell them apart
from the ground truth.
"""

__version__ = "1.0.0"

from .errors import ConfigError, FalsepredError, GuardError, MonitorError
from .hypotheses import (
    GROUND_TRUTH_STRUCTURE,
    BinaryCpt,
    Hypothesis,
    Structure,
    fit_cpt,
    fit_hypothesis,
    is_false_predictor,
    min_training_errors,
    predict,
    predict_array,
    project,
    training_errors,
)
from .learner import (
    LearnerConfig,
    RestartPolicy,
    Score,
    StepRecord,
    hill_climb,
    online_learn,
    refine,
)
from .metrics import (
    HistoryStats,
    LifeSpan,
    RegretTrace,
    Table1Row,
    analyze_history,
    regret_trace,
    structural_distance,
    structural_size,
    table1,
)
from .model import (
    Sample,
    WorldConfig,
    derive_seed,
    derive_seed_int,
    generate_stream,
    generate_stream_arrays,
    sample_world,
)
from .monitor import (
    MonitorConfig,
    RateEstimate,
    Verdict,
    check_operational,
    evaluate_rates,
    evaluate_rates_on,
    history_rate_trace,
    masquerade_report,
    rule_of_thumb,
    universal_stability_violations,
)
from .oracle import (
    CensusResult,
    count_false_predictors,
    eq8_monte_carlo,
    exhaustive_best,
    expected_false_predictors,
    survival_trial,
)

__all__ = [
    "__version__",
    "BinaryCpt",
    "CensusResult",
    "ConfigError",
    "FalsepredError",
    "GROUND_TRUTH_STRUCTURE",
    "GuardError",
    "HistoryStats",
    "Hypothesis",
    "LearnerConfig",
    "LifeSpan",
    "MonitorConfig",
    "MonitorError",
    "RateEstimate",
    "RegretTrace",
    "RestartPolicy",
    "Sample",
    "Score",
    "StepRecord",
    "Structure",
    "Table1Row",
    "Verdict",
    "WorldConfig",
    "analyze_history",
    "check_operational",
    "count_false_predictors",
    "derive_seed",
    "derive_seed_int",
    "eq8_monte_carlo",
    "evaluate_rates",
    "evaluate_rates_on",
    "exhaustive_best",
    "expected_false_predictors",
    "fit_cpt",
    "fit_hypothesis",
    "generate_stream",
    "generate_stream_arrays",
    "hill_climb",
    "history_rate_trace",
    "is_false_predictor",
    "masquerade_report",
    "min_training_errors",
    "online_learn",
    "predict",
    "predict_array",
    "project",
    "refine",
    "regret_trace",
    "rule_of_thumb",
    "sample_world",
    "structural_distance",
    "structural_size",
    "survival_trial",
    "table1",
    "training_errors",
    "universal_stability_violations",
]
