"""Corpus data model, JSONL ingestion, dataset splitting, statistics and
a synthetic dialogue generator."""
from __future__ import annotations

import enum
import json
import random
from collections import Counter
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

from .normalize import DEFAULT_CONFIG, NormalizationConfig, preprocess

__all__ = [
    "ActLabel",
    "CorpusError",
    "CorpusStats",
    "DatasetSplit",
    "Dialogue",
    "Domain",
    "Genre",
    "SpeakerType",
    "SynthSpec",
    "Turn",
    "UnknownActError",
    "Utterance",
    "dumps_dialogue",
    "load_jsonl",
    "parse_dialogue",
    "save_jsonl",
    "split_dataset",
    "stats",
    "synth_corpus",
]


class CorpusError(ValueError):
    pass


class UnknownActError(CorpusError):
    def __init__(self, name, line: Optional[int] = None):
        self.name = name
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"unknown dialogue act {name!r}{where}")


class ActLabel(enum.Enum):
    """The closed act inventory, in canonical (tie-breaking) order."""

    TAKING_REQUEST = "Taking-Request"
    SERVICE_QUESTION = "Service-Question"
    CONFIRM_QUESTION = "Confirm-Question"
    YESNO_QUESTION = "YesNo-Question"
    CHOICE_QUESTION = "Choice-Question"
    OTHER_QUESTION = "Other-Question"
    TURN_ASSIGN = "Turn-Assign"
    SERVICE_ANSWER = "Service-Answer"
    OTHER_ANSWER = "Other-Answer"
    AGREE = "Agree"
    DISAGREE = "Disagree"
    GREETING = "Greeting"
    INFORM = "Inform"
    THANKING = "Thanking"
    APOLOGY = "Apology"
    MISSUNDERSTANDING_SIGN = "MissUnderstandingSign"
    CORRECT = "Correct"
    PAUSING = "Pausing"
    SUGGEST = "Suggest"
    PROMISE = "Promise"
    WARNING = "Warning"
    OFFER = "Offer"
    OPENING = "Opening"
    CLOSING = "Closing"
    SELF_INTRODUCE = "Self-Introduce"

    @classmethod
    def parse(cls, name: str, line: Optional[int] = None) -> "ActLabel":
        try:
            return cls(name)
        except ValueError:
            raise UnknownActError(name, line) from None

    @property
    def index(self) -> int:
        return _ACT_INDEX[self]

    def __str__(self):
        return self.value


_ACT_INDEX = {act: i for i, act in enumerate(ActLabel)}


class SpeakerType(enum.Enum):
    OPERATOR = "operator"
    CUSTOMER = "customer"

    def __str__(self):
        return self.value


class Domain(enum.Enum):
    BANKS = "Banks"
    FLIGHTS = "Flights"
    MOBILE_NETWORK_OPERATORS = "MobileNetworkOperators"
    OTHER = "Other"

    def __str__(self):
        return self.value


class Genre(enum.Enum):
    SPOKEN = "spoken"
    IM = "im"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Utterance:
    tokens: tuple
    raw_text: str = ""
    pos: Optional[tuple] = None
    act: Optional[ActLabel] = None
    pred_act: Optional[ActLabel] = None

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        if self.pos is not None:
            object.__setattr__(self, "pos", tuple(self.pos))
            if len(self.pos) != len(self.tokens):
                raise CorpusError(
                    f"pos length {len(self.pos)} != token count {len(self.tokens)}")


@dataclass(frozen=True)
class Turn:
    speaker: SpeakerType
    utterances: tuple

    def __post_init__(self):
        object.__setattr__(self, "utterances", tuple(self.utterances))
        if not self.utterances:
            raise CorpusError("a turn needs at least one utterance")


@dataclass(frozen=True)
class Dialogue:
    id: str
    domain: Domain
    genre: Genre
    turns: tuple

    def __post_init__(self):
        object.__setattr__(self, "turns", tuple(self.turns))

    def utterances(self):
        """Yield ``(turn, utterance)`` pairs in dialogue order."""
        for turn in self.turns:
            for utt in turn.utterances:
                yield turn, utt

    @property
    def n_turns(self) -> int:
        return len(self.turns)


# --------------------------------------------------------------------------
# JSONL

def _utterance_record(utt: Utterance) -> dict:
    rec = {"text": utt.raw_text, "act": utt.act.value if utt.act else None}
    if utt.pos is not None:
        rec["pos"] = list(utt.pos)
    if utt.pred_act is not None:
        rec["pred_act"] = utt.pred_act.value
    return rec


def dumps_dialogue(d: Dialogue) -> str:
    """Canonical one-line JSON serialization of a dialogue."""
    rec = {
        "id": d.id,
        "domain": d.domain.value,
        "genre": d.genre.value,
        "turns": [
            {"speaker": t.speaker.value,
             "utterances": [_utterance_record(u) for u in t.utterances]}
            for t in d.turns
        ],
    }
    return json.dumps(rec, ensure_ascii=False, separators=(",", ":"))


def parse_dialogue(
    record: Mapping,
    line: Optional[int] = None,
    norm: NormalizationConfig = DEFAULT_CONFIG,
) -> Dialogue:
    def fail(msg):
        where = f"line {line}: " if line is not None else ""
        return CorpusError(where + msg)

    try:
        turns = []
        for t in record["turns"]:
            utts = []
            for u in t["utterances"]:
                text = u["text"]
                act = u.get("act")
                pred = u.get("pred_act")
                utts.append(Utterance(
                    tokens=preprocess(text, norm),
                    raw_text=text,
                    pos=u.get("pos"),
                    act=ActLabel.parse(act, line) if act is not None else None,
                    pred_act=ActLabel.parse(pred, line) if pred is not None else None,
                ))
            turns.append(Turn(SpeakerType(t["speaker"]), utts))
        return Dialogue(str(record["id"]), Domain(record["domain"]),
                        Genre(record["genre"]), turns)
    except UnknownActError:
        raise
    except CorpusError as exc:
        raise fail(str(exc)) from None
    except (KeyError, TypeError, ValueError) as exc:
        raise fail(f"malformed dialogue record: {exc!r}") from None


def read_jsonl(lines: Iterable[str], norm: NormalizationConfig = DEFAULT_CONFIG) -> list:
    dialogues, seen = [], set()
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusError(f"line {lineno}: invalid JSON: {exc.msg}") from None
        d = parse_dialogue(record, lineno, norm)
        if d.id in seen:
            raise CorpusError(f"line {lineno}: duplicate dialogue id {d.id!r}")
        seen.add(d.id)
        dialogues.append(d)
    return dialogues


def load_jsonl(path, norm: NormalizationConfig = DEFAULT_CONFIG) -> list:
    with open(path, encoding="utf-8") as fh:
        return read_jsonl(fh, norm)


def save_jsonl(dialogues: Iterable[Dialogue], path) -> None:
    Path(path).write_text("".join(dumps_dialogue(d) + "\n" for d in dialogues),
                          encoding="utf-8")


# --------------------------------------------------------------------------
# splitting

@dataclass(frozen=True)
class DatasetSplit:
    train: tuple
    dev: tuple
    test: tuple
    ratios: tuple = (0.70, 0.20, 0.10)
    seed: int = 0

    @property
    def parts(self) -> tuple:
        return (self.train, self.dev, self.test)


def split_dataset(dialogues: Sequence[Dialogue], ratios=(0.70, 0.20, 0.10), seed: int = 0) -> DatasetSplit:
    """Assign whole dialogues to train/dev/test so that turn counts track ``ratios``.

    Dialogues are shuffled with ``seed`` and then each one goes to the part
    whose turn deficit (target minus assigned) is currently largest, the
    earlier part winning ties.
    """
    ratios = tuple(float(r) for r in ratios)
    if len(ratios) != 3:
        raise ValueError("expected three ratios (train, dev, test)")
    if any(r < 0 for r in ratios) or abs(sum(ratios) - 1.0) > 1e-9:
        raise ValueError(f"ratios must be non-negative and sum to 1: {ratios}")
    n_parts = sum(r > 0 for r in ratios)
    if len(dialogues) < max(3, n_parts):
        raise ValueError(f"need at least 3 dialogues to split, got {len(dialogues)}")

    order = list(dialogues)
    random.Random(seed).shuffle(order)
    total = sum(d.n_turns for d in order)
    targets = [r * total for r in ratios]
    assigned = [0, 0, 0]
    parts = [[], [], []]
    for d in order:
        deficits = [targets[i] - assigned[i] if ratios[i] > 0 else float("-inf") for i in range(3)]
        k = max(range(3), key=lambda i: (deficits[i], -i))
        parts[k].append(d)
        assigned[k] += d.n_turns
    return DatasetSplit(tuple(parts[0]), tuple(parts[1]), tuple(parts[2]), ratios, seed)


# --------------------------------------------------------------------------
# statistics

@dataclass(frozen=True)
class Counts:
    dialogues: int = 0
    turns: int = 0
    utterances: int = 0
    words: int = 0

    def __add__(self, other: "Counts") -> "Counts":
        return Counts(self.dialogues + other.dialogues, self.turns + other.turns,
                      self.utterances + other.utterances, self.words + other.words)


@dataclass(frozen=True)
class CorpusStats:
    by_domain: Mapping = field(default_factory=dict)

    @property
    def overall(self) -> Counts:
        total = Counts()
        for c in self.by_domain.values():
            total = total + c
        return total

    def __add__(self, other: "CorpusStats") -> "CorpusStats":
        merged = dict(self.by_domain)
        for dom, c in other.by_domain.items():
            merged[dom] = merged.get(dom, Counts()) + c
        return CorpusStats({d: merged[d] for d in Domain if d in merged})

    def to_tsv(self) -> str:
        rows = ["domain\tdialogues\tturns\tutterances\twords"]
        for dom, c in list(self.by_domain.items()) + [("Total", self.overall)]:
            rows.append(f"{dom}\t{c.dialogues}\t{c.turns}\t{c.utterances}\t{c.words}")
        return "\n".join(rows) + "\n"


def stats(dialogues: Iterable[Dialogue]) -> CorpusStats:
    per = {}
    for d in dialogues:
        n_utts = sum(len(t.utterances) for t in d.turns)
        n_words = sum(len(u.tokens) for t in d.turns for u in t.utterances)
        per[d.domain] = per.get(d.domain, Counts()) + Counts(1, d.n_turns, n_utts, n_words)
    return CorpusStats({dom: per[dom] for dom in Domain if dom in per})


# --------------------------------------------------------------------------
# synthetic corpus

# cue words chosen to pass through normalization and waw splitting untouched
DEFAULT_KEYWORDS: Mapping = {
    ActLabel.GREETING: ("مرحبا",),
    ActLabel.SERVICE_QUESTION: ("عايز",),
    ActLabel.SERVICE_ANSWER: ("متاح",),
    ActLabel.AGREE: ("تمام",),
    ActLabel.DISAGREE: ("لا",),
    ActLabel.THANKING: ("شكرا",),
    ActLabel.APOLOGY: ("اسف",),
    ActLabel.CLOSING: ("سلام",),
}

DEFAULT_FILLER = (
    "انا", "هو", "ده", "دي", "في", "من", "عشان", "الحساب", "البنك", "الكارت",
    "رقم", "بكره", "النهارده", "كده", "ممكن", "حضرتك", "الخط", "الباقه",
    "الرحله", "التذكره", "محتاج", "بس", "لسه", "تاني", "يعني", "الفلوس",
)

_DOMAIN_GENRE = {
    Domain.BANKS: Genre.SPOKEN,
    Domain.FLIGHTS: Genre.SPOKEN,
    Domain.MOBILE_NETWORK_OPERATORS: Genre.IM,
}


@dataclass(frozen=True)
class SynthSpec:
    """Parameters of the synthetic generator.

    Each utterance carries one cue word of its act. ``cue_position`` fixes
    the cue's index inside the utterance; when None it is drawn from the
    first ``cue_span`` positions.
    """

    n_dialogues: int = 40
    seed: int = 0
    act_keyword_map: Mapping = field(default_factory=lambda: dict(DEFAULT_KEYWORDS))
    filler: tuple = DEFAULT_FILLER
    turns_per_dialogue: tuple = (6, 14)
    utterances_per_turn: tuple = (1, 3)
    utterance_length: tuple = (2, 6)
    cue_position: Optional[int] = None
    cue_span: int = 3
    domains: tuple = (Domain.BANKS, Domain.FLIGHTS, Domain.MOBILE_NETWORK_OPERATORS)

    def __post_init__(self):
        acts = [a for a, words in self.act_keyword_map.items() if words]
        if len(acts) < 5:
            raise ValueError("act_keyword_map must give cue words to at least 5 acts")
        lo, hi = self.utterance_length
        if self.cue_position is not None and self.cue_position >= lo:
            raise ValueError("cue_position must be inside the shortest utterance")


def synth_corpus(spec: SynthSpec = SynthSpec()) -> list:
    """Generate a deterministic, linearly separable dialogue corpus."""
    rng = random.Random(spec.seed)
    acts = [a for a in ActLabel if spec.act_keyword_map.get(a)]
    dialogues = []
    for i in range(spec.n_dialogues):
        domain = spec.domains[i % len(spec.domains)]
        turns = []
        for t in range(rng.randint(*spec.turns_per_dialogue)):
            speaker = SpeakerType.OPERATOR if t % 2 == 0 else SpeakerType.CUSTOMER
            utts = []
            for _ in range(rng.randint(*spec.utterances_per_turn)):
                act = rng.choice(acts)
                length = rng.randint(*spec.utterance_length)
                words = [rng.choice(spec.filler) for _ in range(length)]
                if spec.cue_position is not None:
                    pos = spec.cue_position
                else:
                    pos = rng.randrange(min(spec.cue_span, length))
                words[pos] = rng.choice(spec.act_keyword_map[act])
                text = " ".join(words)
                utts.append(Utterance(tokens=preprocess(text), raw_text=text, act=act))
            turns.append(Turn(speaker, utts))
        dialogues.append(Dialogue(f"synth-{spec.seed}-{i:04d}", domain,
                                  _DOMAIN_GENRE.get(domain, Genre.SPOKEN), turns))
    return dialogues


def with_predictions(dialogue: Dialogue, predicted: Sequence[ActLabel]) -> Dialogue:
    """Copy of ``dialogue`` whose utterances carry ``pred_act`` in order."""
    it = iter(predicted)
    turns = [replace(t, utterances=[replace(u, pred_act=next(it)) for u in t.utterances])
             for t in dialogue.turns]
    return replace(dialogue, turns=turns)


def act_counts(dialogues: Iterable[Dialogue]) -> Counter:
    return Counter(u.act for d in dialogues for _, u in d.utterances() if u.act is not None)
