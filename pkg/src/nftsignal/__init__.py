"""Social-media activity vs. NFT price analysis toolkit.

Loads tweet archives and trade logs, buckets them into fixed timeframes,
tests Granger causality between tweet counts and average sale prices,
extracts per-timeframe event words with a containment-thresholded tf-idf,
trains a small MLP on trailing-window-normalized price moves, and reports
permutation feature importance.
"""

from .granger import (
    Direction,
    GrangerCell,
    GrangerResult,
    LagSpec,
    bidirectional_tests,
    build_lag_matrix,
    f_survival,
    ols_ssr,
    run_bidirectional,
    ssr_f_test,
)
from .importance import (
    DensityProfile,
    ImportanceScore,
    gaussian_kde,
    kde_profile,
    mda,
    top_bottom,
)
from .ingest import (
    IngestError,
    ProjectManifest,
    Transaction,
    Tweet,
    load_transactions,
    load_tweets,
    split_multi_nft_values,
)
from .model import (
    Metrics,
    MlpConfig,
    MlpModel,
    SplitSpec,
    backward,
    evaluate,
    forward,
    penalized_mae_loss,
    train,
)
from .postag import LexiconTagger
from .rng import SplitMix64, derive_seed
from .synth import PlantedCorpusSpec, VarSpec, gen_planted_corpus, gen_var_pair
from .textfeat import (
    FeatureMatrix,
    TfidfConfig,
    TokenizedDoc,
    WordScore,
    build_feature_matrix,
    clean_text,
    event_words,
    overlap_distribution,
    pos_filter,
    tfidf_score,
    tokenize_frame,
)
from .timeseries import (
    Frame,
    NormalizedTarget,
    TimeframeSeries,
    bucketize,
    drop_frames_without_sales,
    markov_normalize,
    paired_series,
    to_binary_label,
)

__version__ = "0.1.0"
