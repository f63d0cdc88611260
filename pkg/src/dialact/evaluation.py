"""Per-act precision / recall / F1, aggregate scores and table rendering."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Optional, Sequence

import numpy as np

from .corpus import ActLabel

__all__ = [
    "ActScores",
    "Aggregate",
    "EvalReport",
    "f1_score",
    "format_percent",
    "prf",
    "render_table",
    "report",
]

AGGREGATIONS = ("micro", "macro", "weighted")


def f1_score(p: float, r: float) -> float:
    """Harmonic mean 2PR / (P + R); 0 when both are 0."""
    return 2.0 * p * r / (p + r) if p + r > 0 else 0.0


def prf(tp: int, fp: int, fn: int) -> tuple:
    """Precision, recall and F1 in percent; undefined ratios count as 0."""
    if min(tp, fp, fn) < 0:
        raise ValueError("counts must be non-negative")
    p = 100.0 * tp / (tp + fp) if tp + fp else 0.0
    r = 100.0 * tp / (tp + fn) if tp + fn else 0.0
    return p, r, f1_score(p, r)


@dataclass(frozen=True)
class ActScores:
    tp: int
    fp: int
    fn: int
    support: int
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class Aggregate:
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class EvalReport:
    labels: tuple
    per_act: dict
    micro: Aggregate
    macro: Aggregate
    weighted: Aggregate
    accuracy: float
    confusion: np.ndarray
    n: int
    # acts with gold support that were never predicted (precision 0/0)
    undefined_precision: tuple = field(default=())

    def overall(self, how: str = "weighted") -> Aggregate:
        if how not in AGGREGATIONS:
            raise ValueError(f"unknown aggregation {how!r}")
        return getattr(self, how)

    def to_dict(self) -> dict:
        return {
            "labels": [a.value for a in self.labels],
            "per_act": {a.value: asdict(s) for a, s in self.per_act.items()},
            "micro": asdict(self.micro),
            "macro": asdict(self.macro),
            "weighted": asdict(self.weighted),
            "accuracy": self.accuracy,
            "confusion": self.confusion.tolist(),
            "n": self.n,
            "undefined_precision": [a.value for a in self.undefined_precision],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EvalReport":
        return cls(
            labels=tuple(ActLabel.parse(a) for a in d["labels"]),
            per_act={ActLabel.parse(a): ActScores(**s) for a, s in d["per_act"].items()},
            micro=Aggregate(**d["micro"]),
            macro=Aggregate(**d["macro"]),
            weighted=Aggregate(**d["weighted"]),
            accuracy=d["accuracy"],
            confusion=np.array(d["confusion"], dtype=np.int64),
            n=d["n"],
            undefined_precision=tuple(ActLabel.parse(a) for a in d["undefined_precision"]),
        )

    def __eq__(self, other):
        if not isinstance(other, EvalReport):
            return NotImplemented
        return self.to_dict() == other.to_dict()


def report(
    gold: Sequence[ActLabel],
    predicted: Sequence[ActLabel],
    labels: Optional[Sequence[ActLabel]] = None,
) -> EvalReport:
    """Confusion matrix and per-act / aggregate scores for aligned act sequences.

    Macro and support-weighted averages run over acts with gold support.
    Every aggregate F1 comes from its aggregate P and R.
    """
    if len(gold) != len(predicted):
        raise ValueError(f"gold has {len(gold)} items, predictions {len(predicted)}")
    if not gold:
        raise ValueError("nothing to evaluate")
    if labels is None:
        seen = set(gold) | set(predicted)
        labels = [a for a in ActLabel if a in seen]
    labels = tuple(labels)
    index = {a: i for i, a in enumerate(labels)}
    missing = {a for a in list(gold) + list(predicted) if a not in index}
    if missing:
        raise ValueError(f"acts outside the label set: {sorted(a.value for a in missing)}")

    K = len(labels)
    confusion = np.zeros((K, K), dtype=np.int64)
    for g, p in zip(gold, predicted):
        confusion[index[g], index[p]] += 1

    tp = np.diag(confusion)
    support = confusion.sum(axis=1)
    predicted_n = confusion.sum(axis=0)
    per_act = {}
    for i, act in enumerate(labels):
        t, fp, fn = int(tp[i]), int(predicted_n[i] - tp[i]), int(support[i] - tp[i])
        per_act[act] = ActScores(t, fp, fn, int(support[i]), *prf(t, fp, fn))

    micro = Aggregate(*prf(int(tp.sum()), int(predicted_n.sum() - tp.sum()),
                           int(support.sum() - tp.sum())))
    with_support = [a for a in labels if per_act[a].support > 0]
    mp = float(np.mean([per_act[a].precision for a in with_support]))
    mr = float(np.mean([per_act[a].recall for a in with_support]))
    macro = Aggregate(mp, mr, f1_score(mp, mr))
    total = sum(per_act[a].support for a in with_support)
    wp = sum(per_act[a].support * per_act[a].precision for a in with_support) / total
    wr = sum(per_act[a].support * per_act[a].recall for a in with_support) / total
    weighted = Aggregate(wp, wr, f1_score(wp, wr))

    return EvalReport(
        labels=labels,
        per_act=per_act,
        micro=micro,
        macro=macro,
        weighted=weighted,
        accuracy=100.0 * int(tp.sum()) / len(gold),
        confusion=confusion,
        n=len(gold),
        undefined_precision=tuple(a for a in with_support if predicted_n[index[a]] == 0),
    )


def format_percent(x: float) -> str:
    """Two decimals, half-up, trailing zeros dropped (``100``, ``96.3``, ``66.67``).

    Rounds the shortest decimal repr of ``x``, so 66.665 becomes 66.67.
    """
    q = Decimal(repr(float(x))).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP)
    s = f"{q:f}"
    if "." in s:
        s = s.rstrip("0").rstrip(".")
    return s


def _aligned(rep: EvalReport, overall: str) -> str:
    width = max([len("Over All"), len("Act")] + [len(a.value) for a in rep.labels]) + 2
    lines = [f"{'Act':<{width}}{'Precision':>10}{'Recall':>10}{'F1':>10}"]
    for act in ActLabel:
        s = rep.per_act.get(act)
        if s is None or s.support == 0:
            continue
        lines.append(f"{act.value:<{width}}{format_percent(s.precision):>10}"
                     f"{format_percent(s.recall):>10}{format_percent(s.f1):>10}")
    agg = rep.overall(overall)
    lines.append(f"{'Over All':<{width}}{format_percent(agg.precision):>10}"
                 f"{format_percent(agg.recall):>10}{format_percent(agg.f1):>10}")
    return "\n".join(lines) + "\n"


def _tsv(rep: EvalReport) -> str:
    rows = ["act\ttp\tfp\tfn\tsupport\tprecision\trecall\tf1"]
    for act in rep.labels:
        s = rep.per_act[act]
        rows.append(f"{act.value}\t{s.tp}\t{s.fp}\t{s.fn}\t{s.support}\t"
                    + "\t".join(format_percent(v) for v in (s.precision, s.recall, s.f1)))
    for how in AGGREGATIONS:
        agg = rep.overall(how)
        rows.append(f"overall-{how}\t\t\t\t{rep.n}\t"
                    + "\t".join(format_percent(v) for v in (agg.precision, agg.recall, agg.f1)))
    rows.append(f"accuracy\t\t\t\t{rep.n}\t{format_percent(rep.accuracy)}\t\t")
    return "\n".join(rows) + "\n"


def render_table(rep: EvalReport, style: str = "aligned", overall: str = "weighted") -> str:
    """Render ``rep`` as ``aligned`` columns, ``tsv`` or ``json`` text.

    The aligned style lists acts with gold support in canonical order and ends
    with an ``Over All`` row taken from the ``overall`` aggregation.
    """
    if style == "aligned":
        return _aligned(rep, overall)
    if style == "tsv":
        return _tsv(rep)
    if style == "json":
        return json.dumps(rep.to_dict(), sort_keys=True) + "\n"
    raise ValueError(f"unknown table style {style!r}")
