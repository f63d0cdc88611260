"""BIO chunk encoding of utterance acts and sparse per-token features."""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Protocol, Sequence

import numpy as np

from .corpus import ActLabel, SpeakerType, Utterance

__all__ = [
    "NONE",
    "OUTSIDE",
    "PAD",
    "BioTag",
    "FeatureDictionary",
    "FeatureTemplateConfig",
    "FrequencyPosTagger",
    "PosProvider",
    "UtteranceDecision",
    "decode_utterance_act",
    "encode_bio",
    "extract_features",
    "feature_strings",
    "is_valid_bio",
    "pos_tag",
    "repair_bio",
]

PAD = "__PAD__"
NONE = "__NONE__"
DEFAULT_POS = "NOUN"


@dataclass(frozen=True)
class BioTag:
    prefix: str
    act: Optional[ActLabel] = None

    def __post_init__(self):
        if self.prefix not in ("B", "I", "O"):
            raise ValueError(f"bad BIO prefix {self.prefix!r}")
        if (self.prefix == "O") != (self.act is None):
            raise ValueError("O tags carry no act; B/I tags need one")

    @classmethod
    def parse(cls, text: str) -> "BioTag":
        if text == "O":
            return OUTSIDE
        prefix, sep, act = text.partition("-")
        if not sep or prefix not in ("B", "I"):
            raise ValueError(f"malformed BIO tag {text!r}")
        return cls(prefix, ActLabel.parse(act))

    def sort_key(self) -> tuple:
        # acts in canonical order, B before I, O last
        if self.act is None:
            return (len(ActLabel), 0)
        return (self.act.index, 0 if self.prefix == "B" else 1)

    def __str__(self):
        return "O" if self.act is None else f"{self.prefix}-{self.act.value}"


OUTSIDE = BioTag("O")


def encode_bio(utterance: Utterance) -> list:
    """Tag the first token ``B-<act>`` and every following token ``I-<act>``."""
    if utterance.act is None:
        raise ValueError("utterance has no gold act")
    if not utterance.tokens:
        raise ValueError("cannot BIO-encode an empty utterance")
    n = len(utterance.tokens)
    return [BioTag("B", utterance.act)] + [BioTag("I", utterance.act)] * (n - 1)


def is_valid_bio(tags: Sequence[BioTag]) -> bool:
    prev = OUTSIDE
    for tag in tags:
        if tag.prefix == "I" and (prev.act != tag.act):
            return False
        prev = tag
    return True


def repair_bio(tags: Sequence[BioTag]) -> list:
    """Rewrite each ``I-X`` not continuing an ``X`` chunk to ``B-X``."""
    out = []
    prev_act = None
    for tag in tags:
        if tag.prefix == "I" and tag.act != prev_act:
            tag = BioTag("B", tag.act)
        out.append(tag)
        prev_act = tag.act
    return out


class UtteranceDecision(NamedTuple):
    act: ActLabel
    all_outside: bool


def decode_utterance_act(
    tags: Sequence[BioTag],
    default: ActLabel = ActLabel.INFORM,
) -> UtteranceDecision:
    """Majority act over the non-O tags of one utterance.

    Ties go to the act that occurs first in ``tags``. An all-O sequence
    yields ``default`` with ``all_outside`` set.
    """
    if not tags:
        raise ValueError("empty tag sequence")
    votes = Counter()
    first = {}
    for i, tag in enumerate(tags):
        if tag.act is not None:
            votes[tag.act] += 1
            first.setdefault(tag.act, i)
    if not votes:
        return UtteranceDecision(default, True)
    best = min(votes, key=lambda a: (-votes[a], first[a], a.index))
    return UtteranceDecision(best, False)


# --------------------------------------------------------------------------
# features

@dataclass(frozen=True)
class FeatureTemplateConfig:
    window: tuple = (-2, 2)
    use_tokens: bool = True
    use_pos: bool = True
    use_speaker: bool = True
    use_prev_act: bool = True
    use_prev_tags: bool = True
    quadratic: bool = True

    def __post_init__(self):
        left, right = self.window
        if not (-5 <= left <= 0 <= right <= 5):
            raise ValueError(f"window {self.window} outside [-5, +5]")
        object.__setattr__(self, "window", (int(left), int(right)))

    def to_dict(self) -> dict:
        return {
            "window": list(self.window),
            "use_tokens": self.use_tokens,
            "use_pos": self.use_pos,
            "use_speaker": self.use_speaker,
            "use_prev_act": self.use_prev_act,
            "use_prev_tags": self.use_prev_tags,
            "quadratic": self.quadratic,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FeatureTemplateConfig":
        d = dict(d)
        d["window"] = tuple(d["window"])
        return cls(**d)


class FeatureDictionary:
    """Feature string to dense index map; grows until frozen."""

    def __init__(self, features: Iterable[str] = (), frozen: bool = False):
        self._index = {}
        self._names = []
        self.frozen = False
        for f in features:
            self.add(f)
        self.frozen = frozen

    def add(self, feature: str) -> Optional[int]:
        idx = self._index.get(feature)
        if idx is None and not self.frozen:
            idx = self._index[feature] = len(self._names)
            self._names.append(feature)
        return idx

    def get(self, feature: str) -> Optional[int]:
        return self._index.get(feature)

    def freeze(self) -> "FeatureDictionary":
        self.frozen = True
        return self

    @property
    def names(self) -> list:
        return list(self._names)

    def __len__(self):
        return len(self._names)

    def __contains__(self, feature):
        return feature in self._index


def feature_strings(
    tokens: Sequence[str],
    pos: Optional[Sequence[str]],
    speaker: SpeakerType,
    prev_act: Optional[ActLabel],
    prev_tags: Sequence[BioTag],
    position: int,
    cfg: FeatureTemplateConfig,
) -> list:
    """The feature strings for one token position, in emission order."""
    n = len(tokens)
    if not 0 <= position < n:
        raise IndexError(f"position {position} out of range for {n} tokens")
    left, right = cfg.window
    feats = []
    if cfg.use_tokens:
        for j in range(left, right + 1):
            k = position + j
            feats.append(f"tok[{j}]={tokens[k] if 0 <= k < n else PAD}")
    if cfg.use_pos:
        for j in range(left, right + 1):
            k = position + j
            tag = (pos[k] if pos is not None else DEFAULT_POS) if 0 <= k < n else PAD
            feats.append(f"pos[{j}]={tag}")
    if cfg.use_speaker:
        feats.append(f"speaker={speaker.value}")
    if cfg.use_prev_act:
        feats.append(f"prev_act={prev_act.value if prev_act is not None else NONE}")
    if cfg.use_prev_tags:
        recent = list(prev_tags)[-2:]
        for back in (1, 2):
            tag = recent[-back] if back <= len(recent) else None
            feats.append(f"prev_tag[-{back}]={tag if tag is not None else PAD}")
    if cfg.quadratic:
        base = list(feats)
        for i in range(len(base)):
            for j in range(i + 1, len(base)):
                feats.append(f"{base[i]}&{base[j]}")
    return feats


def extract_features(
    tokens: Sequence[str],
    pos: Optional[Sequence[str]],
    speaker: SpeakerType,
    prev_act: Optional[ActLabel],
    prev_tags: Sequence[BioTag],
    position: int,
    cfg: FeatureTemplateConfig,
    dictionary: FeatureDictionary,
) -> np.ndarray:
    """Sorted, distinct feature indices for one token position.

    While ``dictionary`` is open, new feature strings are added to it;
    once frozen, unseen strings are dropped.
    """
    idx = (dictionary.add(f) for f in feature_strings(
        tokens, pos, speaker, prev_act, prev_tags, position, cfg))
    return np.unique(np.fromiter((i for i in idx if i is not None), dtype=np.int64))


# --------------------------------------------------------------------------
# POS

class PosProvider(Protocol):
    def tag(self, tokens: Sequence[str]) -> list: ...


class FrequencyPosTagger:
    """Most-frequent-tag lookup learned from tagged tokens; unknown words get NOUN."""

    def __init__(self, lexicon: Optional[dict] = None, default: str = DEFAULT_POS):
        self.lexicon = dict(lexicon or {})
        self.default = default

    @classmethod
    def fit(cls, pairs: Iterable[tuple], default: str = DEFAULT_POS) -> "FrequencyPosTagger":
        counts = defaultdict(Counter)
        for word, tag in pairs:
            counts[word][tag] += 1
        # ties resolved by tag name so the lexicon does not depend on input order
        lexicon = {w: min(c, key=lambda t: (-c[t], t)) for w, c in counts.items()}
        return cls(lexicon, default)

    def tag(self, tokens: Sequence[str]) -> list:
        return [self.lexicon.get(t, self.default) for t in tokens]


def pos_tag(tokens: Sequence[str], provider: Optional[PosProvider] = None) -> list:
    provider = provider if provider is not None else FrequencyPosTagger()
    return list(provider.tag(tokens))
