"""Individual learning gain and related statistics for pre/post test scores."""

from .cohort import (
    GainGroup,
    GainRecord,
    QuadrantCounts,
    build_gain_records,
    classify_gain,
    classify_gain_groups,
    extreme_gain_counts,
    hake_vs_individual,
    mean_individual_gain,
    quadrant_counts,
)
from .descriptive import (
    DensityCurve,
    DistributionSummary,
    Histogram,
    QQData,
    histogram,
    kde,
    qq_normal,
    summarize,
    z_scores,
)
from .errors import (
    DegenerateSample,
    DuplicateId,
    EmptySample,
    GainStatsError,
    GainUndefined,
    IncreaseUndefined,
    IoError,
    LogUndefined,
    OutOfRange,
    ParseError,
    RangeError,
    RankDeficient,
    SpecError,
)
from .gain_core import (
    ScoreRecord,
    change_combine,
    final_from_gain,
    fractional_increase,
    gain_from_increase,
    hake_mean_gain,
    individual_gain,
    log_difference,
    scale_invariance_check,
)
from .inference import (
    CohortComparison,
    RegressionFit,
    cohens_d,
    compare_cohorts,
    mean_diff_ci,
    pearson_r2,
    polyfit_r2,
    probability_of_superiority,
    welch_t_test,
)
from .pipeline import (
    AnalysisOptions,
    AnalysisReport,
    Dataset,
    emit_plot_data,
    emit_report,
    gain_table,
    ingest,
    ingest_text,
    report_schema,
    report_to_dict,
    run_analysis,
)
from .simulate import CohortSpec, Normal, Uniform, generate_cohort, generate_cohorts

__version__ = "0.1.0"
