"""Toolkit for ranking scalar adjectives by intensity from contextual
embeddings and separating scalar from relational adjectives."""

from .baselines import (
    CoverageReport,
    FrequencyTable,
    SenseTable,
    coverage_report,
    freq_rank,
    load_frequency_table,
    load_sense_table,
    mean_sense_default,
    sense_rank,
)
from .datagen import (
    Origin,
    SamplingConstraints,
    SentenceContext,
    load_contexts_jsonl,
    sample_contexts,
    save_contexts_jsonl,
    substitute_all,
    tokenize,
)
from .dump import (
    ContextEmbedding,
    DumpManifest,
    EmbeddingDump,
    PoolingMode,
    adjective_representation,
    pool_wordpieces,
    read_dump,
    write_dump,
)
from .errors import (
    CorruptContextError,
    CoverageError,
    DataError,
    DegenerateDirectionError,
    DegenerateVectorError,
    DimensionError,
    DuplicateError,
    EmptyReferenceSetError,
    FormatError,
    InsufficientCorpusError,
    MissingDataError,
    ParseError,
    ScalarAdjError,
    SplitError,
    SubsampleError,
    UndefinedMetricError,
)
from .evaluation import (
    AggregateMetrics,
    RankingReport,
    ScaleMetrics,
    ScalePrediction,
    aggregate,
    evaluate_scale,
    kendall_tau,
    pairwise_accuracy,
    spearman_rho,
)
from .intensity import (
    DiffVecRanker,
    IntensityDirection,
    ReferencePair,
    build_intensity_direction,
    cosine,
    dvec_from_pair,
    dvec_from_pairs,
    endpoint_pairs,
    rank_scale,
    select_reference_pairs,
)
from .logreg import LogisticRegressionGD, fit_logistic_gd
from .scales import (
    Adjective,
    DatasetStats,
    GoldPair,
    Relation,
    Scale,
    ScaleDataset,
    dataset_stats,
    load_scale_file,
    parse_scale_line,
    save_scale_file,
    serialize_scale,
    unordered_pairs,
)
from .scalrel import (
    FeatureRegime,
    FeatureTables,
    Label,
    LabeledAdjective,
    RegimeKind,
    Split,
    build_feature_matrix,
    build_features,
    make_regime,
    make_split,
    select_layer_and_evaluate,
    subsample_relational,
    train_logreg,
)

__version__ = "0.1.0"
