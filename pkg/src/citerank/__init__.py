"""Citation-percentile impact indicators under competing counting rules.

Scores papers as citation percentiles within configurable reference
groups, aggregates them into the set-level I3 / %I3 indicators and
top-share excellence measures, and statistically compares what the
different counting rules report (correlations, two-proportion z-test).
"""

from ._version import __version__
from .data_pipeline import (
    AnalysisConfig,
    InputDataset,
    RankingReport,
    emit_paper_percentiles,
    emit_ranking_table,
    load_records,
    pair_key,
    parse_ranking_table,
    parse_records,
    run_analysis,
)
from .indicator_core import (
    NSF6,
    P100,
    TOP10,
    CitationRecord,
    PercentileAssignment,
    PercentileRule,
    RankClassScheme,
    ReferenceScope,
    SchemeVariant,
    SetReport,
    class_histogram,
    classify,
    compute_percentiles,
    i3,
    oracle_percentiles,
    percent_i3,
    percentile_of,
    top_share,
)
from .rank_stats import (
    CorrelationResult,
    ZTestResult,
    normal_cdf,
    pearson_r,
    spearman_rho,
    ztest_proportions,
)
from .synth_bench import (
    DivergenceResult,
    ExperimentConfig,
    SetSpec,
    divergence_from_report,
    emit_divergence,
    fixture_path,
    generate_set,
    load_experiment_config,
    override_seeds,
    run_divergence_experiment,
)

__all__ = [
    "__version__",
    "AnalysisConfig",
    "CitationRecord",
    "CorrelationResult",
    "DivergenceResult",
    "ExperimentConfig",
    "InputDataset",
    "NSF6",
    "P100",
    "PercentileAssignment",
    "PercentileRule",
    "RankClassScheme",
    "RankingReport",
    "ReferenceScope",
    "SchemeVariant",
    "SetReport",
    "SetSpec",
    "TOP10",
    "ZTestResult",
    "class_histogram",
    "classify",
    "compute_percentiles",
    "divergence_from_report",
    "emit_divergence",
    "emit_paper_percentiles",
    "emit_ranking_table",
    "fixture_path",
    "generate_set",
    "i3",
    "load_experiment_config",
    "load_records",
    "normal_cdf",
    "oracle_percentiles",
    "override_seeds",
    "pair_key",
    "parse_ranking_table",
    "parse_records",
    "pearson_r",
    "percent_i3",
    "percentile_of",
    "run_analysis",
    "run_divergence_experiment",
    "spearman_rho",
    "top_share",
    "ztest_proportions",
]
