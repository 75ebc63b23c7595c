"""Frame inventories, pair datasets, parsed-corpus extraction, and judgments."""

from pparg.corpus.io import (
    read_gradient_examples,
    read_judgments_csv,
    read_pairs,
    read_sentence_examples,
    write_gradient_examples,
    write_pairs,
    write_sentence_examples,
)
from pparg.corpus.judgments import (
    GradientExample,
    JudgmentError,
    JudgmentMatrix,
    normalize_judgments,
)
from pparg.corpus.lemmas import Lemmatizer, default_lemmatizer
from pparg.corpus.pairs import (
    ArgLabel,
    DatasetSplit,
    LabeledPair,
    balance_subsample,
    generate_pair_dataset,
    stratified_split,
)
from pparg.corpus.sentences import (
    SentenceExample,
    SentenceMode,
    build_fullsentence_dataset,
    extract_vp_constructions,
)
from pparg.corpus.trees import ParseTree, TreeParseError, parse_ptb_tree, serialize_tree
from pparg.corpus.verbnet import (
    FeaturalPrepMap,
    FrameInventory,
    UnmappedFeatureError,
    VerbnetParseError,
    default_featural_map,
    load_featural_map,
    load_verbnet_dir,
    parse_verbnet,
)

__all__ = [
    "ArgLabel",
    "DatasetSplit",
    "FeaturalPrepMap",
    "FrameInventory",
    "GradientExample",
    "JudgmentError",
    "JudgmentMatrix",
    "LabeledPair",
    "Lemmatizer",
    "ParseTree",
    "SentenceExample",
    "SentenceMode",
    "TreeParseError",
    "UnmappedFeatureError",
    "VerbnetParseError",
    "balance_subsample",
    "build_fullsentence_dataset",
    "default_featural_map",
    "default_lemmatizer",
    "extract_vp_constructions",
    "generate_pair_dataset",
    "load_featural_map",
    "load_verbnet_dir",
    "normalize_judgments",
    "parse_ptb_tree",
    "parse_verbnet",
    "read_gradient_examples",
    "read_judgments_csv",
    "read_pairs",
    "read_sentence_examples",
    "serialize_tree",
    "stratified_split",
    "write_gradient_examples",
    "write_pairs",
    "write_sentence_examples",
]
