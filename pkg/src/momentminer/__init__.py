"""Happy-moment extraction via positive-unlabeled learning, plus
lexicon-coverage and keyness contrast statistics over the extracted
subcorpora."""

from .corpus import (
    Corpus,
    CorpusFormatError,
    Pos,
    PUDataset,
    PuSource,
    SentenceRecord,
    Subgroup,
    Token,
    assemble_pu_dataset,
    load_corpus,
    select_subjects,
    split_sentences,
    write_corpus,
)
from .features import FeatureMatrix, FeaturizerConfig, FeaturizerKind, featurize, l2_normalize
from .lexstats import (
    CorpusStats,
    DominanceRow,
    KeynessRow,
    Lexicon,
    LexiconCategory,
    LexiconFormatError,
    build_stats,
    coverage,
    dominance,
    dominance_table,
    g2_statistic,
    keyness_g2,
    load_demo_lexicon,
    load_lexicon,
    match_token,
)
from .pulearn import (
    ConvergenceError,
    ExtractedMoment,
    ExtractionResult,
    LinearModel,
    PUModel,
    SvmHyperparams,
    elkanoto_fit,
    extract_moments,
    load_model,
    platt_fit,
    pu_predict_proba,
    save_model,
    train_linear_svm,
)

__version__ = "0.1.0"
