import pytest

from morphtok.lexicon import build_lexicon
from morphtok.records import SegmentationRecord
from morphtok.vocab import Vocabulary

R = SegmentationRecord


def table2_records():
    """Records reproducing the worked examples: five showcase words plus the
    motivated/theorizing/copywriters chains and their intermediate steps."""
    return [
        R("motivated", "inflection", "motivate", ("ed",), "V;PST"),
        R("motivate", "derivation", "motive", ("ate",), "N;V"),
        R("jogging", "inflection", "jog", ("ing",), "V;V.PTCP;PRS"),
        R("neutralised", "inflection", "neutralise", ("ed",), "V;PST"),
        R("neutralise", "derivation", "neutral", ("ise",), "ADJ;V"),
        R("neutral", "derivation", "neuter", ("al",), "N;ADJ"),
        R("clerking", "inflection", "clerk", ("ing",), "V;V.PTCP;PRS"),
        R("swappiness", "derivation", "swappy", ("ness",), "ADJ;N"),
        R("swappy", "derivation", "swap", ("y",), "N;ADJ"),
        R("stepstones", "compound", "", ("step", "stone", "s")),
        R("theorizing", "inflection", "theorize", ("ing",), "V;V.PTCP;PRS"),
        R("theorize", "derivation", "theory", ("ize",), "N;V"),
        R("copywriters", "compound", "", ("copy", "write", "er", "s")),
        R("copywriters", "inflection", "copywriter", ("s",), "N;PL"),
        R("copywriter", "derivation", "copywrite", ("er",), "V;N"),
        R("copywrite", "derivation", "copy", ("write",), "N;V"),
    ]


GPT_RAW_TOKENS = [
    "Ġj", "ogging", "Ġneutral", "ised", "Ġstep",
    "stones", "Ġcler", "king", "Ġsw", "appiness",
]
ALBERT_RAW_TOKENS = [
    "▁jogging", "▁neutral", "ised", "▁steps", "tones",
    "▁clerk", "ing", "▁swap", "pi", "ness",
]


@pytest.fixture(scope="session")
def fixture_lexicon():
    return build_lexicon(table2_records())


@pytest.fixture(scope="session")
def gpt_vocab():
    return Vocabulary(
        {"_j", "ogging", "_neutral", "ised", "_step", "stones",
         "_cler", "king", "_sw", "appiness"}
    )


@pytest.fixture(scope="session")
def albert_vocab():
    return Vocabulary(
        {"_jogging", "_neutral", "ised", "_steps", "tones",
         "_clerk", "ing", "_swap", "pi", "ness"}
    )
