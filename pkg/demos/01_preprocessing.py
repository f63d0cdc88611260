"""
From raw Arabic text to model tokens
====================================

Walks one utterance through character normalization, tokenization,
waw splitting and Buckwalter transliteration.
"""

from dialact.normalize import NormalizationConfig, normalize_chars, preprocess, split_waw, tokenize
from dialact.translit import DEFAULT_TABLE, UnmappedCodepoint, from_buckwalter, to_buckwalter

text = "وقال إنه عايز يسأل عن الرحلة؟"

# step 1: alif variants, teh marbuta and alif maksura collapse to one form
flat = normalize_chars(text)
print(flat)

# step 2: whitespace tokens, with punctuation split off
tokens = tokenize(flat)
print(tokens)

# step 3: a leading waw with enough letters after it becomes its own token
print([part for tok in tokens for part in split_waw(tok)])

# all of the above plus transliteration in one call
bw = preprocess(text)
print(bw)
print(from_buckwalter(" ".join(bw)))

# a lexicon restricts waw splitting to known words
strict_waw = NormalizationConfig(waw_lexicon={"عليكم"})
print(preprocess("وعليكم السلام وقال", strict_waw))

# strict transliteration reports characters the table does not cover
try:
    to_buckwalter("پاس", DEFAULT_TABLE.strict())
except UnmappedCodepoint as exc:
    print(exc.char, exc.offset)
