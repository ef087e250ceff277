"""Four-way classification of subword tokenizations.

Given a word and its subword sequence, the label is decided in this order:

1. ``vocab`` — the word itself is a vocabulary token;
2. ``na``    — the lexicon has no analysis for the word;
3. ``morph`` — at least n-1 of the n subwords positionally match some
   morphological merge sequence of the word;
4. ``alien`` — otherwise.

The one-token tolerance forgives a root missing from the lexicon or an
orthographic alteration at a junction; two or more unmatched subwords mean
the composition carries no morphological signal.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InputError
from .lexicon import MARKER, MorphLexicon
from .merges import MergeCache
from .vocab import (
    BYTE_LEVEL_SPACE,
    SCHEMES,
    SP_UNDERLINE,
    Vocabulary,
)

LABELS = ("vocab", "morph", "alien", "na")


@dataclass(frozen=True)
class SubwordSequence:
    """Canonical tokenization of one word: marker on the first token only."""

    tokens: tuple[str, ...]

    def __post_init__(self):
        if not self.tokens or any(not t for t in self.tokens):
            raise InputError("subword sequence must be non-empty strings")
        if not self.tokens[0].startswith(MARKER) or self.tokens[0] == MARKER:
            raise InputError("first subword must carry the word-initial marker")

    @property
    def n(self) -> int:
        return len(self.tokens)

    @property
    def reassembled(self) -> str:
        return self.tokens[0][len(MARKER):] + "".join(self.tokens[1:])


@dataclass(frozen=True)
class Label:
    value: str
    mu: int | None = None

    def __post_init__(self):
        if self.value not in LABELS:
            raise ValueError(f"unknown label {self.value!r}")


def normalize_subwords(raw_tokens: Sequence[str], scheme: str) -> SubwordSequence:
    """Normalize one word's raw tokenizer output to the canonical scheme."""
    if scheme not in SCHEMES:
        raise InputError(f"unknown marker scheme {scheme!r}")
    if not raw_tokens:
        raise InputError("empty token sequence")
    tokens: list[str] = []
    for i, tok in enumerate(raw_tokens):
        if scheme == "sentencepiece-underline":
            core = tok.replace(SP_UNDERLINE, "")
        elif scheme == "byte-level-prefix":
            core = tok.replace(BYTE_LEVEL_SPACE, "")
        elif scheme == "wordpiece-continuation":
            core = tok[2:] if (i > 0 and tok.startswith("##")) else tok
        else:  # plain: already canonical, tolerate a marked first token
            core = tok[len(MARKER):] if (i == 0 and tok.startswith(MARKER)) else tok
        if not core:
            raise InputError(f"token {tok!r} is empty after marker normalization")
        tokens.append(MARKER + core if i == 0 else core)
    return SubwordSequence(tuple(tokens))


class Labeller:
    """Classifies (word, subwords) pairs against a lexicon and a vocabulary.

    Stateless apart from internal caches over the immutable inputs, so one
    instance can serve concurrent batch labelling.
    """

    def __init__(
        self,
        lexicon: MorphLexicon,
        vocabulary: Vocabulary,
        merge_cache: MergeCache | None = None,
    ):
        self.lexicon = lexicon
        self.vocabulary = vocabulary
        self.merges = merge_cache if merge_cache is not None else MergeCache(lexicon)
        if self.merges.lexicon is not lexicon:
            raise ValueError("merge cache was built over a different lexicon")

    def mu(self, word: str, subwords: SubwordSequence) -> int:
        """Best positional match count against UM(word, n); 0 when empty."""
        best = 0
        for units in self.merges.candidate_units(word, subwords.n):
            matches = sum(1 for s, m in zip(subwords.tokens, units) if s == m)
            if matches > best:
                best = matches
        return best

    def label(self, word: str, subwords: SubwordSequence) -> Label:
        if subwords.reassembled != word:
            raise InputError(
                f"subwords {list(subwords.tokens)} do not reassemble {word!r}"
            )
        if MARKER + word in self.vocabulary:
            return Label("vocab")
        if word not in self.lexicon:
            return Label("na")
        mu = self.mu(word, subwords)
        if mu >= subwords.n - 1:
            return Label("morph", mu)
        return Label("alien", mu)

    def label_raw(self, word: str, raw_tokens: Sequence[str], scheme: str) -> Label:
        """Normalize raw tokenizer output, then label."""
        return self.label(word, normalize_subwords(raw_tokens, scheme))
