"""Research-performance analytics over publication corpora.

Computes field-normalized productivity (FSS), identifies top scientists and
highly cited articles, and runs convergence analyses between the two notions
of excellence.
"""

__version__ = "0.1.0"

from .analyses import (
    AuthorshipDistribution,
    CaseControlResult,
    CorrelationResult,
    OverlapRow,
    ProducerRow,
    authorship_distribution,
    correlation_analysis,
    overlap_analysis,
    producer_analysis,
    rank_stratified_case_control,
)
from .corpus import (
    AuthorSlot,
    Corpus,
    CorpusLoadError,
    IngestConfig,
    Publication,
    Researcher,
    ValidationReport,
    dump_corpus,
    load_corpus,
    make_corpus,
    validate_corpus,
)
from .excellence import (
    FieldRanking,
    HcaSet,
    eligible_fields,
    eligible_researchers,
    identify_hcas,
    rank_eligible_fields,
    rank_field,
)
from .indicators import (
    BaselineTable,
    FssResult,
    WeightScheme,
    compute_all_fss,
    compute_baselines,
    compute_fss,
    fractional_weights,
    normalized_impact,
)
from .stats import (
    ContingencyTable,
    HomogeneityResult,
    OddsRatioResult,
    bin_by_percentile,
    chi_square_sf,
    homogeneity_test,
    odds_ratio,
    point_biserial,
)
from .syngen import GenConfig, GroundTruth, generate_corpus, write_generated

__all__ = [
    "AuthorshipDistribution",
    "AuthorSlot",
    "BaselineTable",
    "CaseControlResult",
    "ContingencyTable",
    "Corpus",
    "CorpusLoadError",
    "CorrelationResult",
    "FieldRanking",
    "FssResult",
    "GenConfig",
    "GroundTruth",
    "HcaSet",
    "HomogeneityResult",
    "IngestConfig",
    "OddsRatioResult",
    "OverlapRow",
    "ProducerRow",
    "Publication",
    "Researcher",
    "ValidationReport",
    "WeightScheme",
    "authorship_distribution",
    "bin_by_percentile",
    "chi_square_sf",
    "compute_all_fss",
    "compute_baselines",
    "compute_fss",
    "correlation_analysis",
    "dump_corpus",
    "eligible_fields",
    "eligible_researchers",
    "fractional_weights",
    "generate_corpus",
    "homogeneity_test",
    "identify_hcas",
    "load_corpus",
    "make_corpus",
    "normalized_impact",
    "odds_ratio",
    "overlap_analysis",
    "point_biserial",
    "producer_analysis",
    "rank_eligible_fields",
    "rank_field",
    "rank_stratified_case_control",
    "validate_corpus",
    "write_generated",
]
