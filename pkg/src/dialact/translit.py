"""Buckwalter transliteration between Arabic script and ASCII.

Tokens are stored internally in Buckwalter form, so every downstream
feature string is plain ASCII.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

__all__ = [
    "BUCKWALTER",
    "DEFAULT_TABLE",
    "TransliterationTable",
    "UnmappedCodepoint",
    "from_buckwalter",
    "is_arabic_codepoint",
    "to_buckwalter",
]

BUCKWALTER: Mapping[str, str] = MappingProxyType({
    "ء": "'",   # hamza
    "آ": "|",   # alif madda
    "أ": ">",   # alif hamza above
    "ؤ": "&",   # waw hamza
    "إ": "<",   # alif hamza below
    "ئ": "}",   # yeh hamza
    "ا": "A",   # alif
    "ب": "b",
    "ة": "p",   # teh marbuta
    "ت": "t",
    "ث": "v",
    "ج": "j",
    "ح": "H",
    "خ": "x",
    "د": "d",
    "ذ": "*",
    "ر": "r",
    "ز": "z",
    "س": "s",
    "ش": "$",
    "ص": "S",
    "ض": "D",
    "ط": "T",
    "ظ": "Z",
    "ع": "E",
    "غ": "g",
    "ـ": "_",   # tatweel
    "ف": "f",
    "ق": "q",
    "ك": "k",
    "ل": "l",
    "م": "m",
    "ن": "n",
    "ه": "h",
    "و": "w",
    "ى": "Y",   # alif maksura
    "ي": "y",
    "ً": "F",   # fathatan
    "ٌ": "N",   # dammatan
    "ٍ": "K",   # kasratan
    "َ": "a",   # fatha
    "ُ": "u",   # damma
    "ِ": "i",   # kasra
    "ّ": "~",   # shadda
    "ْ": "o",   # sukun
    "ٰ": "`",   # dagger alif
    "ٱ": "{",   # alif wasla
})


def is_arabic_codepoint(ch: str) -> bool:
    """True for characters in the Arabic Unicode blocks (incl. presentation forms)."""
    cp = ord(ch)
    return (
        0x0600 <= cp <= 0x06FF
        or 0x0750 <= cp <= 0x077F
        or 0x08A0 <= cp <= 0x08FF
        or 0xFB50 <= cp <= 0xFDFF
        or 0xFE70 <= cp <= 0xFEFF
    )


class UnmappedCodepoint(ValueError):
    """Raised in strict mode for an Arabic character missing from the table."""

    def __init__(self, char: str, offset: int):
        self.char = char
        self.offset = offset
        super().__init__(f"unmapped Arabic codepoint U+{ord(char):04X} {char!r} at byte offset {offset}")


@dataclass(frozen=True)
class TransliterationTable:
    entries: Mapping[str, str] = field(default=BUCKWALTER)
    strict_mode: bool = False

    def __post_init__(self):
        for src, dst in self.entries.items():
            if len(src) != 1 or len(dst) != 1:
                raise ValueError(f"table entries must be single characters: {src!r} -> {dst!r}")
            if ord(dst) > 0x7F:
                raise ValueError(f"target {dst!r} for {src!r} is not ASCII")
        inverse = {dst: src for src, dst in self.entries.items()}
        if len(inverse) != len(self.entries):
            raise ValueError("transliteration table is not injective")
        object.__setattr__(self, "_forward", str.maketrans(dict(self.entries)))
        object.__setattr__(self, "_inverse", str.maketrans(inverse))

    def strict(self, on: bool = True) -> "TransliterationTable":
        return TransliterationTable(self.entries, on)


DEFAULT_TABLE = TransliterationTable()


def to_buckwalter(text: str, table: TransliterationTable = DEFAULT_TABLE) -> str:
    """Transliterate Arabic script to Buckwalter ASCII.

    Characters outside the table pass through unchanged. With
    ``table.strict_mode`` an unmapped Arabic-block character raises
    :class:`UnmappedCodepoint` carrying its UTF-8 byte offset.
    """
    if table.strict_mode:
        offset = 0
        for ch in text:
            if ch not in table.entries and is_arabic_codepoint(ch):
                raise UnmappedCodepoint(ch, offset)
            offset += len(ch.encode("utf-8"))
    return text.translate(table._forward)


def from_buckwalter(text: str, table: TransliterationTable = DEFAULT_TABLE) -> str:
    """Inverse of :func:`to_buckwalter`; unknown ASCII passes through."""
    return text.translate(table._inverse)
