"""Dialogue-act tagging for Egyptian Arabic call-center dialogues.

Utterance acts are predicted by tagging every token with a BIO chunk tag
(``B-<act>``, ``I-<act>``, ``O``) using a linear max-margin classifier and
taking the majority act of each utterance.
"""
from .classifier import (
    LinearModel,
    Strategy,
    TrainConfig,
    fit,
    load_model,
    predict_dialogue,
    predict_token,
    save_model,
    train,
)
from .corpus import (
    ActLabel,
    DatasetSplit,
    Dialogue,
    Domain,
    Genre,
    SpeakerType,
    SynthSpec,
    Turn,
    Utterance,
    load_jsonl,
    save_jsonl,
    split_dataset,
    stats,
    synth_corpus,
)
from .evaluation import EvalReport, prf, render_table, report
from .experiment import run_experiment, run_pipeline, sweep_windows
from .features import (
    BioTag,
    FeatureDictionary,
    FeatureTemplateConfig,
    decode_utterance_act,
    encode_bio,
    extract_features,
    pos_tag,
    repair_bio,
)
from .normalize import NormalizationConfig, normalize_chars, preprocess, split_waw, tokenize
from .translit import TransliterationTable, from_buckwalter, to_buckwalter

__version__ = "0.1.0"
