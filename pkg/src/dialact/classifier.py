"""Multiclass linear max-margin token classifier.

Every binary task minimises

    J(w, b) = (lam / 2) * ||w||^2 + mean_i max(0, 1 - y_i * (w . x_i + b))

by stochastic subgradient descent over one seed-shuffled example order
that is reused for every epoch, with step size ``eta0 / (1 + epoch)``.
One-vs-all builds one task per tag; pairwise builds one task per tag pair
trained on that pair's examples only. All tasks advance together over the
shared order, each column of the weight matrix owning its own decay scale,
step counter and running average.
"""
from __future__ import annotations

import enum
import json
import struct
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .corpus import ActLabel, Dialogue, SpeakerType
from .features import (
    BioTag,
    FeatureDictionary,
    FeatureTemplateConfig,
    FrequencyPosTagger,
    UtteranceDecision,
    decode_utterance_act,
    encode_bio,
    extract_features,
    repair_bio,
)

__all__ = [
    "FORMAT_VERSION",
    "LinearModel",
    "ModelFormatError",
    "ModelVersionError",
    "Strategy",
    "TrainConfig",
    "featurize",
    "fit",
    "load_model",
    "predict_dialogue",
    "predict_token",
    "predict_utterance",
    "save_model",
    "train",
]

MAGIC = b"YOSR"
FORMAT_VERSION = 1
_RENORM_BELOW = 1e-9


class Strategy(enum.Enum):
    OVA = "ova"
    PAIRWISE = "pairwise"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class TrainConfig:
    strategy: Strategy = Strategy.OVA
    epochs: int = 10
    lam: float = 1e-4
    eta0: float = 0.1
    seed: int = 0
    averaging: bool = True
    jobs: int = 1

    def __post_init__(self):
        object.__setattr__(self, "strategy", Strategy(self.strategy))
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.lam < 0:
            raise ValueError("lam must be >= 0")
        if self.eta0 <= 0:
            raise ValueError("eta0 must be > 0")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")
        if self.eta0 * self.lam >= 1:
            raise ValueError("eta0 * lam must be < 1 for the decay factor to stay positive")

    def to_dict(self) -> dict:
        return {"strategy": self.strategy.value, "epochs": self.epochs, "lam": self.lam,
                "eta0": self.eta0, "seed": self.seed, "averaging": self.averaging}

    @classmethod
    def from_dict(cls, d: dict) -> "TrainConfig":
        return cls(**{k: v for k, v in d.items() if k != "jobs"})


@dataclass
class LinearModel:
    labels: tuple
    dictionary: FeatureDictionary
    weights: np.ndarray
    bias: np.ndarray
    strategy: Strategy = Strategy.OVA
    pairs: tuple = ()
    train_config: TrainConfig = field(default_factory=TrainConfig)
    feature_config: FeatureTemplateConfig = field(default_factory=FeatureTemplateConfig)
    pos_tagger: FrequencyPosTagger = field(default_factory=FrequencyPosTagger)
    default_act: ActLabel = ActLabel.INFORM

    def __post_init__(self):
        if not self.labels:
            raise ValueError("model needs at least one label")
        n_vec = len(self.labels) if self.strategy is Strategy.OVA else len(self.pairs)
        if self.weights.shape != (n_vec, len(self.dictionary)):
            raise ValueError(f"weight shape {self.weights.shape} != {(n_vec, len(self.dictionary))}")
        if self.bias.shape != (n_vec,):
            raise ValueError("bias shape mismatch")

    def scores(self, fv: np.ndarray) -> np.ndarray:
        return self.weights[:, fv].sum(axis=1) + self.bias


# --------------------------------------------------------------------------
# featurization

def _utterance_pos(utt, tagger: FrequencyPosTagger):
    return utt.pos if utt.pos is not None else tagger.tag(utt.tokens)


def fit_pos_tagger(dialogues: Sequence[Dialogue]) -> FrequencyPosTagger:
    pairs = [(tok, tag) for d in dialogues for _, u in d.utterances() if u.pos is not None
             for tok, tag in zip(u.tokens, u.pos)]
    return FrequencyPosTagger.fit(pairs)


def featurize(
    dialogues: Sequence[Dialogue],
    cfg: FeatureTemplateConfig,
    dictionary: FeatureDictionary,
    pos_tagger: Optional[FrequencyPosTagger] = None,
) -> tuple:
    """Token feature vectors and gold tags, built with gold act/tag context."""
    tagger = pos_tagger or FrequencyPosTagger()
    X, y = [], []
    for d in dialogues:
        prev_act = None
        for turn, utt in d.utterances():
            if not utt.tokens:
                continue
            gold = encode_bio(utt)
            pos = _utterance_pos(utt, tagger)
            for i in range(len(utt.tokens)):
                X.append(extract_features(utt.tokens, pos, turn.speaker, prev_act,
                                          gold[max(0, i - 2):i], i, cfg, dictionary))
                y.append(gold[i])
            prev_act = utt.act
    return X, y


# --------------------------------------------------------------------------
# training

def _column_tasks(labels: Sequence[BioTag], strategy: Strategy):
    """Per label: (columns it takes part in, target sign in each)."""
    L = len(labels)
    if strategy is Strategy.OVA:
        cols = np.arange(L)
        return [(cols, np.where(cols == g, 1.0, -1.0)) for g in range(L)], ()
    pairs = tuple((a, b) for a in range(L) for b in range(a + 1, L))
    per_label = []
    for g in range(L):
        cols = np.array([k for k, (a, b) in enumerate(pairs) if g in (a, b)], dtype=np.int64)
        signs = np.array([1.0 if pairs[k][0] == g else -1.0 for k in cols])
        per_label.append((cols, signs))
    return per_label, pairs


def _sgd_block(block, X, gold, order, per_label, n_features, cfg, trace):
    """Train the columns listed in ``block``; returns (weights, bias)."""
    C = len(block)
    local = {c: i for i, c in enumerate(block)}
    tasks = []
    for cols, signs in per_label:
        keep = [j for j, c in enumerate(cols) if c in local]
        tasks.append((np.array([local[cols[j]] for j in keep], dtype=np.int64), signs[keep]))

    V = np.zeros((C, n_features))
    b = np.zeros(C)
    scale = np.ones(C)
    steps = np.zeros(C, dtype=np.int64)
    if cfg.averaging:
        U = np.zeros((C, n_features))
        P = np.zeros(C)
        bias_sum = np.zeros(C)

    for epoch in range(cfg.epochs):
        eta = cfg.eta0 / (1 + epoch)
        decay = 1.0 - eta * cfg.lam
        for e in order:
            c, y = tasks[gold[e]]
            if not len(c):
                continue
            idx = X[e]
            s_old = scale[c]
            raw = V[np.ix_(c, idx)].sum(axis=1)
            viol = y * (s_old * raw + b[c]) < 1.0
            s_new = s_old * decay
            scale[c] = s_new
            if viol.any():
                vc = c[viol]
                step = eta * y[viol]
                delta = step / s_new[viol]
                V[np.ix_(vc, idx)] += delta[:, None]
                if cfg.averaging:
                    U[np.ix_(vc, idx)] += (P[vc] * delta)[:, None]
                b[vc] += step
            steps[c] += 1
            if cfg.averaging:
                P[c] += s_new
                bias_sum[c] += b[c]
            low = c[s_new < _RENORM_BELOW]
            if len(low):
                # fold the scale into V; keep the iterate sum P*V - U unchanged
                if cfg.averaging:
                    total = P[low, None] * V[low] - U[low]
                    U[low] = -total
                    P[low] = 0.0
                V[low] *= scale[low, None]
                scale[low] = 1.0
        if trace is not None:
            trace.append(_objectives(scale[:, None] * V, b, X, gold, order, tasks, cfg.lam))

    if cfg.averaging:
        T = np.maximum(steps, 1).astype(float)
        W = (P[:, None] * V - U) / T[:, None]
        bias = bias_sum / T
    else:
        W = scale[:, None] * V
        bias = b.copy()
    return W, bias


def _objectives(W, b, X, gold, order, tasks, lam):
    C = W.shape[0]
    loss = np.zeros(C)
    count = np.zeros(C)
    for e in order:
        c, y = tasks[gold[e]]
        if not len(c):
            continue
        m = y * (W[np.ix_(c, X[e])].sum(axis=1) + b[c])
        loss[c] += np.maximum(0.0, 1.0 - m)
        count[c] += 1
    return 0.5 * lam * (W * W).sum(axis=1) + loss / np.maximum(count, 1)


def _blocks(n_cols: int, jobs: int) -> list:
    jobs = max(1, min(jobs, n_cols))
    edges = np.linspace(0, n_cols, jobs + 1).astype(int)
    return [list(range(edges[i], edges[i + 1])) for i in range(jobs) if edges[i] < edges[i + 1]]


def train(
    X: Sequence[np.ndarray],
    y: Sequence[BioTag],
    dictionary: FeatureDictionary,
    cfg: TrainConfig = TrainConfig(),
    feature_config: FeatureTemplateConfig = FeatureTemplateConfig(),
    pos_tagger: Optional[FrequencyPosTagger] = None,
    labels: Optional[Sequence[BioTag]] = None,
    trace: Optional[list] = None,
) -> LinearModel:
    """Fit a :class:`LinearModel` on featurized tokens with gold tags.

    ``trace``, when given, receives one array of per-task objective values
    (at the raw, non-averaged iterate) after every epoch.
    """
    if not len(X):
        raise ValueError("no training examples")
    if len(X) != len(y):
        raise ValueError("features and tags differ in length")
    present = set(y)
    if labels is None:
        labels = sorted(present, key=BioTag.sort_key)
    else:
        labels = sorted(set(labels), key=BioTag.sort_key)
        if not present <= set(labels):
            raise ValueError(f"gold tags outside the label set: {sorted(map(str, present - set(labels)))}")
        if cfg.strategy is Strategy.PAIRWISE:
            empty = [str(t) for t in labels if t not in present]
            if empty:
                raise ValueError(f"pairwise training needs examples for every label; none for {empty}")
    if cfg.strategy is Strategy.PAIRWISE and len(labels) < 2:
        raise ValueError("pairwise training needs at least two labels")

    dictionary.freeze()
    lab_index = {t: i for i, t in enumerate(labels)}
    gold = [lab_index[t] for t in y]
    order = np.random.default_rng(cfg.seed).permutation(len(X))
    per_label, pairs = _column_tasks(labels, cfg.strategy)
    n_cols = len(labels) if cfg.strategy is Strategy.OVA else len(pairs)
    blocks = _blocks(n_cols, cfg.jobs)

    def run(block):
        local_trace = [] if trace is not None else None
        W, bias = _sgd_block(block, X, gold, order, per_label, len(dictionary), cfg, local_trace)
        return W, bias, local_trace

    if len(blocks) == 1:
        results = [run(blocks[0])]
    else:
        with ThreadPoolExecutor(max_workers=len(blocks)) as pool:
            results = list(pool.map(run, blocks))

    if trace is not None:
        for epoch in range(cfg.epochs):
            trace.append(np.concatenate([r[2][epoch] for r in results]))
    W = np.vstack([r[0] for r in results])
    bias = np.concatenate([r[1] for r in results])
    return LinearModel(tuple(labels), dictionary, W, bias, cfg.strategy, pairs, cfg,
                       feature_config, pos_tagger or FrequencyPosTagger())


def fit(
    dialogues: Sequence[Dialogue],
    feature_config: FeatureTemplateConfig = FeatureTemplateConfig(),
    cfg: TrainConfig = TrainConfig(),
    trace: Optional[list] = None,
) -> LinearModel:
    """Featurize gold-annotated dialogues and train a model on them."""
    tagger = fit_pos_tagger(dialogues)
    dictionary = FeatureDictionary()
    X, y = featurize(dialogues, feature_config, dictionary, tagger)
    return train(X, y, dictionary, cfg, feature_config, tagger, trace=trace)


# --------------------------------------------------------------------------
# prediction

def predict_token(model: LinearModel, fv: np.ndarray) -> tuple:
    """Best tag for one feature vector, plus the per-label score map.

    One-vs-all picks the highest score. Pairwise counts duel wins (a
    non-negative duel score goes to the pair's first label), breaks vote
    ties by the summed signed duel scores and then by canonical order.
    """
    raw = model.scores(fv)
    if model.strategy is Strategy.OVA:
        best = int(np.argmax(raw))
        return model.labels[best], dict(zip(model.labels, raw.tolist()))
    L = len(model.labels)
    votes = np.zeros(L, dtype=np.int64)
    margin = np.zeros(L)
    for (a, b), sc in zip(model.pairs, raw.tolist()):
        votes[a if sc >= 0 else b] += 1
        margin[a] += sc
        margin[b] -= sc
    best = min(range(L), key=lambda i: (-votes[i], -margin[i], i))
    return model.labels[best], dict(zip(model.labels, margin.tolist()))


def predict_utterance(
    model: LinearModel,
    tokens: Sequence[str],
    pos: Optional[Sequence[str]],
    speaker: SpeakerType,
    prev_act: Optional[ActLabel],
    feature_config: Optional[FeatureTemplateConfig] = None,
) -> tuple:
    """Greedy left-to-right tagging of one utterance.

    Returns ``(tags, decision)``: the repaired tag sequence and the
    :class:`~dialact.features.UtteranceDecision` derived from it.
    """
    cfg = feature_config or model.feature_config
    if not tokens:
        return [], UtteranceDecision(model.default_act, True)
    if pos is None:
        pos = model.pos_tagger.tag(tokens)
    tags = []
    for i in range(len(tokens)):
        fv = extract_features(tokens, pos, speaker, prev_act, tags[-2:], i, cfg, model.dictionary)
        tags.append(predict_token(model, fv)[0])
    tags = repair_bio(tags)
    return tags, decode_utterance_act(tags, model.default_act)


def predict_dialogue(
    model: LinearModel,
    dialogue: Dialogue,
    cfg: Optional[FeatureTemplateConfig] = None,
    oracle_context: bool = False,
) -> list:
    """Predicted act per utterance, in dialogue order.

    Each utterance sees the previous *predicted* act, or the gold one when
    ``oracle_context`` is set.
    """
    out = []
    prev = None
    for turn, utt in dialogue.utterances():
        _, decision = predict_utterance(model, utt.tokens, utt.pos, turn.speaker, prev, cfg)
        out.append(decision.act)
        prev = utt.act if oracle_context else decision.act
    return out


# --------------------------------------------------------------------------
# persistence

class ModelFormatError(ValueError):
    pass


class ModelVersionError(ModelFormatError):
    pass


def _header(model: LinearModel) -> dict:
    return {
        "strategy": model.strategy.value,
        "labels": [str(t) for t in model.labels],
        "pairs": [list(p) for p in model.pairs],
        "default_act": model.default_act.value,
        "train_config": model.train_config.to_dict(),
        "feature_config": model.feature_config.to_dict(),
        "pos_lexicon": model.pos_tagger.lexicon,
        "pos_default": model.pos_tagger.default,
        "features": model.dictionary.names,
    }


def dumps_model(model: LinearModel) -> bytes:
    header = json.dumps(_header(model), ensure_ascii=True, sort_keys=True,
                        separators=(",", ":")).encode("ascii")
    block = np.hstack([model.bias[:, None], model.weights]).astype("<f8")
    body = MAGIC + struct.pack("<HI", FORMAT_VERSION, len(header)) + header + block.tobytes()
    return body + struct.pack("<I", zlib.crc32(body))


def loads_model(data: bytes) -> LinearModel:
    if len(data) < 14 or data[:4] != MAGIC:
        raise ModelFormatError("not a model file (bad magic)")
    version, hlen = struct.unpack_from("<HI", data, 4)
    if version != FORMAT_VERSION:
        raise ModelVersionError(f"model format version {version}, expected {FORMAT_VERSION}")
    start = 10 + hlen
    if len(data) < start + 4:
        raise ModelFormatError("model file truncated in header")
    if zlib.crc32(data[:-4]) != struct.unpack_from("<I", data, len(data) - 4)[0]:
        raise ModelFormatError("model file corrupt (checksum mismatch)")
    try:
        h = json.loads(data[10:start].decode("ascii"))
        strategy = Strategy(h["strategy"])
        labels = tuple(BioTag.parse(t) for t in h["labels"])
        pairs = tuple(tuple(p) for p in h["pairs"])
        n_vec = len(labels) if strategy is Strategy.OVA else len(pairs)
        n_feat = len(h["features"])
        block = np.frombuffer(data, dtype="<f8", count=n_vec * (n_feat + 1), offset=start)
    except (ValueError, KeyError, TypeError) as exc:
        raise ModelFormatError(f"model file corrupt: {exc}") from None
    if start + block.nbytes + 4 != len(data):
        raise ModelFormatError("model file has trailing or missing bytes")
    block = block.reshape(n_vec, n_feat + 1).astype(np.float64)
    return LinearModel(
        labels=labels,
        dictionary=FeatureDictionary(h["features"], frozen=True),
        weights=np.ascontiguousarray(block[:, 1:]),
        bias=block[:, 0].copy(),
        strategy=strategy,
        pairs=pairs,
        train_config=TrainConfig.from_dict(h["train_config"]),
        feature_config=FeatureTemplateConfig.from_dict(h["feature_config"]),
        pos_tagger=FrequencyPosTagger(h["pos_lexicon"], h["pos_default"]),
        default_act=ActLabel.parse(h["default_act"]),
    )


def save_model(model: LinearModel, path) -> None:
    Path(path).write_bytes(dumps_model(model))


def load_model(path) -> LinearModel:
    return loads_model(Path(path).read_bytes())
