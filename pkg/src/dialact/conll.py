"""CoNLL-style token files: ``TOKEN<TAB>POS<TAB>SPEAKER<TAB>BIOTAG``.

A blank line ends an utterance. A comment line
``# dialogue=ID turn=N [domain=D genre=G]`` opens each turn.
"""
from __future__ import annotations

from typing import Iterable, Iterator, Optional

from .corpus import CorpusError, Dialogue, Domain, Genre, SpeakerType, Turn, Utterance
from .features import BioTag, FrequencyPosTagger, decode_utterance_act, encode_bio
from .translit import from_buckwalter

__all__ = ["read_conll", "write_conll"]


def write_conll(
    dialogues: Iterable[Dialogue],
    pos_tagger: Optional[FrequencyPosTagger] = None,
) -> Iterator[str]:
    """Yield CoNLL lines (without newlines) for gold-annotated dialogues."""
    tagger = pos_tagger or FrequencyPosTagger()
    for d in dialogues:
        for n, turn in enumerate(d.turns):
            yield f"# dialogue={d.id} turn={n} domain={d.domain.value} genre={d.genre.value}"
            for utt in turn.utterances:
                if not utt.tokens:
                    continue
                pos = utt.pos if utt.pos is not None else tagger.tag(utt.tokens)
                tags = encode_bio(utt) if utt.act is not None else ["O"] * len(utt.tokens)
                for tok, p, tag in zip(utt.tokens, pos, tags):
                    yield f"{tok}\t{p}\t{turn.speaker.value}\t{tag}"
                yield ""


def read_conll(lines: Iterable[str]) -> list:
    """Rebuild dialogues from CoNLL lines; acts are decoded from the BIO column."""
    dialogues = []
    meta = None
    turns = []
    utts = []
    rows = []
    speaker = None

    def close_utterance(lineno):
        nonlocal rows
        if rows:
            tokens = [r[0] for r in rows]
            tags = [BioTag.parse(r[3]) for r in rows]
            decision = decode_utterance_act(tags)
            utts.append(Utterance(
                tokens=tokens,
                raw_text=from_buckwalter(" ".join(tokens)),
                pos=[r[1] for r in rows],
                act=None if decision.all_outside else decision.act,
            ))
            rows = []

    def close_turn(lineno):
        nonlocal utts
        close_utterance(lineno)
        if utts:
            turns.append(Turn(speaker, utts))
        utts = []

    def close_dialogue(lineno):
        nonlocal turns
        close_turn(lineno)
        if meta is not None and turns:
            dialogues.append(Dialogue(meta["dialogue"], Domain(meta.get("domain", "Other")),
                                      Genre(meta.get("genre", "spoken")), turns))
        turns = []

    lineno = 0
    for lineno, raw in enumerate(lines, 1):
        line = raw.rstrip("\n")
        if line.startswith("#"):
            fields = dict(kv.split("=", 1) for kv in line[1:].split() if "=" in kv)
            if "dialogue" not in fields or "turn" not in fields:
                raise CorpusError(f"line {lineno}: boundary comment needs dialogue= and turn=")
            if meta is None or fields["dialogue"] != meta["dialogue"]:
                close_dialogue(lineno)
                meta = fields
            else:
                close_turn(lineno)
            speaker = None
        elif not line.strip():
            close_utterance(lineno)
        else:
            cols = line.split("\t")
            if len(cols) != 4:
                raise CorpusError(f"line {lineno}: expected 4 tab-separated columns, got {len(cols)}")
            if meta is None:
                raise CorpusError(f"line {lineno}: token before any '# dialogue=' comment")
            try:
                spk = SpeakerType(cols[2])
                BioTag.parse(cols[3])
            except ValueError as exc:
                raise CorpusError(f"line {lineno}: {exc}") from None
            if speaker is not None and spk is not speaker:
                raise CorpusError(f"line {lineno}: speaker changes inside a turn")
            speaker = spk
            rows.append(cols)
    close_dialogue(lineno)
    return dialogues
