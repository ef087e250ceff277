"""Morphological quality analysis for subword tokenization.

The toolkit classifies subword tokenizations of English words as vocabulary
words, morphological compositions, alien compositions, or not analyzable;
trains BPE tokenizers to study how the label distribution shifts with
vocabulary size; generates out-of-vocabulary generalization benchmark
datasets; and slices model evaluations by tokenization quality.
"""

__version__ = "0.1.0"

from .errors import FormatError, InputError, MergeOverflowError
from .labeller import Label, Labeller, SubwordSequence, normalize_subwords
from .lexicon import MorphemeSegmentation, MorphLexicon, build_lexicon, resolve_segmentation
from .merges import (
    MergeCache,
    MergeCandidate,
    MergeList,
    WordAnalysis,
    build_merge_list,
    enumerate_merges,
)
from .records import SegmentationRecord, parse_records
from .vocab import Vocabulary, load_vocab

__all__ = [
    "FormatError",
    "InputError",
    "Label",
    "Labeller",
    "MergeCache",
    "MergeCandidate",
    "MergeList",
    "MergeOverflowError",
    "MorphLexicon",
    "MorphemeSegmentation",
    "SegmentationRecord",
    "SubwordSequence",
    "Vocabulary",
    "WordAnalysis",
    "build_lexicon",
    "build_merge_list",
    "enumerate_merges",
    "load_vocab",
    "normalize_subwords",
    "parse_records",
    "resolve_segmentation",
]
