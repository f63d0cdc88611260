import re

import pytest
from hypothesis import given, strategies as st

from dialact.normalize import (
    NormalizationConfig,
    normalize_chars,
    preprocess,
    split_waw,
    tokenize,
)

ARABIC_LETTERS = [chr(c) for c in range(0x0621, 0x064B)]


@pytest.mark.parametrize("src, dst", [
    ("أ", "ا"), ("إ", "ا"), ("آ", "ا"), ("ة", "ه"), ("ى", "ي"),
    ("مدرسة", "مدرسه"), ("إلى", "الي"), ("أنا", "انا"),
])
def test_char_rules(src, dst):
    assert normalize_chars(src) == dst


def test_rules_can_be_disabled():
    cfg = NormalizationConfig(unify_alif=False, teh_marbuta_to_heh=False, alif_maksura_to_yeh=False)
    assert normalize_chars("أةى", cfg) == "أةى"


@given(st.text(alphabet=st.sampled_from(ARABIC_LETTERS + [" ", "x"])))
def test_idempotent_and_length_preserving(s):
    once = normalize_chars(s)
    assert normalize_chars(once) == once
    assert len(once) == len(s)


def _split_waw_reference(token, min_rest, lexicon):
    m = re.fullmatch(r"و(.+)", token)
    if m and len(re.findall(r"[^\W\d_]", m.group(1))) >= min_rest and (
            lexicon is None or m.group(1) in lexicon):
        return ["و", m.group(1)]
    return [token]


def test_split_waw_examples():
    assert split_waw("وقال") == ["و", "قال"]
    assert split_waw("و") == ["و"]
    assert split_waw("ولا") == ["و", "لا"]
    assert split_waw("وش") == ["وش"]
    assert split_waw("قال") == ["قال"]
    lex = NormalizationConfig(waw_lexicon={"عليكم"})
    assert split_waw("وعليكم", lex) == ["و", "عليكم"]
    assert split_waw("وقال", lex) == ["وقال"]


@given(st.text(alphabet=st.sampled_from(["و", "ق", "ا", "ل", "1"]), min_size=1, max_size=6),
       st.integers(1, 4), st.sampled_from([None, frozenset({"قال", "لا"})]))
def test_split_waw_matches_reference(token, min_rest, lexicon):
    cfg = NormalizationConfig(waw_min_remainder=min_rest, waw_lexicon=lexicon)
    out = split_waw(token, cfg)
    assert out == _split_waw_reference(token, min_rest, lexicon)
    assert "".join(out) == token


def test_min_remainder_must_be_positive():
    with pytest.raises(ValueError):
        NormalizationConfig(waw_min_remainder=0)


def test_tokenize():
    assert tokenize("لا لا") == ["لا", "لا"]
    assert tokenize("") == []
    assert tokenize("متاح؟") == ["متاح", "؟"]
    assert tokenize("  اهلا،  ازيك!") == ["اهلا", "،", "ازيك", "!"]


@given(st.text(alphabet=st.sampled_from(["ا", "ب", " ", ".", "؟", "،", "!", "\n"])))
def test_tokenize_matches_oracle(s):
    oracle = [t for t in re.split(r"\s+|([.,!?؟،])", s) if t]
    assert tokenize(s) == oracle


@given(st.text(alphabet=st.sampled_from(["ا", "ب", "ت", " ", "؟"])))
def test_order_of_first_two_steps_is_irrelevant_without_rule_characters(s):
    assert tokenize(normalize_chars(s)) == [normalize_chars(t) for t in tokenize(s)]


def test_preprocess_pipeline():
    assert preprocess("وقال إنه شكراً؟") == ["w", "qAl", "Anh", "$krAF", "؟"]
