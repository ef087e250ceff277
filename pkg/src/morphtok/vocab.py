"""Tokenizer vocabularies under the canonical word-initial marker scheme.

External vocabularies mark word-initial tokens in different ways (the
sentencepiece low line, the byte-level space symbol, or wordpiece's ##
continuation prefix).  Everything is normalized to a single convention:
"_" prefixes a word-initial token and continuation tokens are bare.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Iterable

from .errors import FormatError, InputError

log = logging.getLogger(__name__)

SCHEMES = (
    "sentencepiece-underline",
    "byte-level-prefix",
    "wordpiece-continuation",
    "plain",
)
VOCAB_FORMATS = ("token-per-line", "tokenizer-json")

SP_UNDERLINE = "▁"
BYTE_LEVEL_SPACE = "Ġ"
MARKER = "_"


def normalize_vocab_token(token: str, scheme: str) -> str:
    """Map one raw vocabulary token to the canonical marker scheme."""
    if scheme == "sentencepiece-underline":
        if token.startswith(SP_UNDERLINE):
            return MARKER + token[len(SP_UNDERLINE):]
        return token
    if scheme == "byte-level-prefix":
        if token.startswith(BYTE_LEVEL_SPACE):
            return MARKER + token[len(BYTE_LEVEL_SPACE):]
        return token
    if scheme == "wordpiece-continuation":
        if token.startswith("##"):
            return token[2:]
        return MARKER + token
    if scheme == "plain":
        return token
    raise InputError(f"unknown marker scheme {scheme!r}")


class Vocabulary:
    """A set of canonical subword tokens with exact-match membership.

    ``marker_insensitive`` vocabularies (plain word lists) also accept a
    marker-prefixed query for a bare stored token.
    """

    def __init__(self, tokens: Iterable[str], marker_insensitive: bool = False):
        self.tokens = frozenset(tokens)
        self.marker_insensitive = marker_insensitive
        if not self.tokens:
            raise InputError("empty vocabulary")

    def __contains__(self, token: str) -> bool:
        if token in self.tokens:
            return True
        if self.marker_insensitive and token.startswith(MARKER):
            return token[len(MARKER):] in self.tokens
        return False

    def __len__(self) -> int:
        return len(self.tokens)

    @property
    def size(self) -> int:
        return len(self.tokens)


def load_vocab(
    path: str | Path,
    format: str = "token-per-line",
    scheme: str = "plain",
) -> Vocabulary:
    """Load and normalize a tokenizer vocabulary file.

    Duplicate tokens after normalization collapse with a warning; an empty
    file is an error.
    """
    if format not in VOCAB_FORMATS:
        raise InputError(f"unknown vocabulary format {format!r}")
    if scheme not in SCHEMES:
        raise InputError(f"unknown marker scheme {scheme!r}")
    path = Path(path)
    raw_tokens: list[str] = []
    if format == "token-per-line":
        for line in path.read_text(encoding="utf-8").splitlines():
            token = line.rstrip("\n")
            if token:
                raw_tokens.append(token.split("\t")[0])
    else:
        try:
            payload = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise FormatError(f"cannot parse {path}: {exc}") from exc
        vocab = payload.get("model", {}).get("vocab")
        if vocab is None:
            vocab = payload.get("vocab")
        if isinstance(vocab, dict):
            raw_tokens = list(vocab.keys())
        elif isinstance(vocab, list):
            raw_tokens = [entry[0] if isinstance(entry, list) else entry for entry in vocab]
        else:
            raise FormatError(f"{path} has no recognizable vocab table")
    normalized = [normalize_vocab_token(t, scheme) for t in raw_tokens]
    distinct = set(normalized)
    if len(distinct) < len(normalized):
        log.warning(
            "%s: %d duplicate tokens collapsed after normalization",
            path,
            len(normalized) - len(distinct),
        )
    return Vocabulary(distinct, marker_insensitive=(scheme == "plain"))
