"""Frequent order-preserving pattern mining with exponential forgetting."""

from .core import (
    ForgettingWeights,
    InvalidConfig,
    InvalidInput,
    TimeSeries,
    forgetting_weights,
    fsup,
    oracle_occurrences,
    relative_order,
)
from .fusion import (
    Group,
    allowed_suffix_groups,
    build_plist,
    enumerate_extensions,
    fuse,
    group_of,
    prefixop,
    suffixop,
)
from .miner import PRESETS, Metrics, MiningConfig, MiningResult, mine, mine_dataset, mine_level2
from .evaluation import (
    ClusteringResult,
    FeatureMatrix,
    UndefinedIndex,
    calinski_harabasz,
    evaluate,
    extract_features,
    kmeans,
    silhouette,
    zscore,
)
from .scf import PatternRecord, check_prefix_prune, check_suffix_prune, match_support, scf_fuse

__version__ = "0.1.0"
