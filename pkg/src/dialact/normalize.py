"""Orthographic normalization, tokenization and conjunction (waw) splitting.

The preprocessing order is fixed::

    normalize_chars -> tokenize -> split_waw (per token) -> to_buckwalter
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional

from .translit import DEFAULT_TABLE, TransliterationTable, to_buckwalter

__all__ = [
    "PUNCTUATION",
    "WAW",
    "NormalizationConfig",
    "load_lexicon",
    "normalize_chars",
    "normalize_line",
    "preprocess",
    "split_waw",
    "tokenize",
]

WAW = "و"
PUNCTUATION = ".,!?؟،"

_ALIF_VARIANTS = {"أ": "ا", "إ": "ا", "آ": "ا"}
_TEH_MARBUTA = {"ة": "ه"}
_ALIF_MAKSURA = {"ى": "ي"}

_TOKEN_RE = re.compile(rf"[{re.escape(PUNCTUATION)}]|[^\s{re.escape(PUNCTUATION)}]+")


@dataclass(frozen=True)
class NormalizationConfig:
    unify_alif: bool = True
    teh_marbuta_to_heh: bool = True
    alif_maksura_to_yeh: bool = True
    split_waw: bool = True
    waw_min_remainder: int = 2
    waw_lexicon: Optional[frozenset] = None

    def __post_init__(self):
        if self.waw_min_remainder < 1:
            raise ValueError("waw_min_remainder must be >= 1")
        if self.waw_lexicon is not None and not isinstance(self.waw_lexicon, frozenset):
            object.__setattr__(self, "waw_lexicon", frozenset(self.waw_lexicon))

    def char_map(self) -> dict:
        table = {}
        if self.unify_alif:
            table.update(_ALIF_VARIANTS)
        if self.teh_marbuta_to_heh:
            table.update(_TEH_MARBUTA)
        if self.alif_maksura_to_yeh:
            table.update(_ALIF_MAKSURA)
        return table


DEFAULT_CONFIG = NormalizationConfig()


def normalize_chars(text: str, cfg: NormalizationConfig = DEFAULT_CONFIG) -> str:
    # every rule is one character to one character, and no rule's output
    # is another rule's input, so a single pass is idempotent
    return text.translate(str.maketrans(cfg.char_map()))


def tokenize(utterance_text: str) -> list[str]:
    """Split on whitespace and detach punctuation marks as separate tokens.

    >>> tokenize("متاح؟")
    ['متاح', '؟']
    """
    return _TOKEN_RE.findall(utterance_text)


def split_waw(token: str, cfg: NormalizationConfig = DEFAULT_CONFIG) -> list[str]:
    """Detach a leading conjunction waw from ``token``.

    The split happens only when the remainder has at least
    ``cfg.waw_min_remainder`` letters and, if a lexicon is configured,
    the remainder is a known word.
    """
    if not token.startswith(WAW):
        return [token]
    rest = token[1:]
    if sum(ch.isalpha() for ch in rest) < cfg.waw_min_remainder:
        return [token]
    if cfg.waw_lexicon is not None and rest not in cfg.waw_lexicon:
        return [token]
    return [WAW, rest]


def preprocess(
    text: str,
    cfg: NormalizationConfig = DEFAULT_CONFIG,
    table: TransliterationTable = DEFAULT_TABLE,
) -> list[str]:
    """Run the full preprocessing chain and return Buckwalter tokens."""
    tokens = []
    for tok in tokenize(normalize_chars(text, cfg)):
        if cfg.split_waw:
            tokens.extend(split_waw(tok, cfg))
        else:
            tokens.append(tok)
    return [to_buckwalter(t, table) for t in tokens]


def normalize_line(text: str, cfg: NormalizationConfig = DEFAULT_CONFIG) -> str:
    """Arabic-script output of the preprocessing chain, tokens joined by spaces."""
    out = []
    for tok in tokenize(normalize_chars(text, cfg)):
        out.extend(split_waw(tok, cfg) if cfg.split_waw else [tok])
    return " ".join(out)


def load_lexicon(lines: Iterable[str]) -> frozenset:
    return frozenset(w for w in (line.strip() for line in lines) if w)
