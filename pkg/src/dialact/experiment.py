"""Train/evaluate experiments: per-domain runs, the combined run and the
context-window sweep."""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Sequence

from .classifier import LinearModel, TrainConfig, fit, predict_dialogue
from .corpus import DatasetSplit, Dialogue, Domain, split_dataset, with_predictions
from .evaluation import EvalReport, format_percent, report
from .features import FeatureTemplateConfig

__all__ = [
    "ExperimentResult",
    "SweepRow",
    "evaluate",
    "predict_corpus",
    "render_sweep",
    "run_experiment",
    "run_pipeline",
    "split_by_domain",
    "sweep_windows",
]

COMBINED = "Combined"


@dataclass
class ExperimentResult:
    name: str
    split: DatasetSplit
    model: LinearModel
    report: EvalReport
    train_accuracy: float
    dev_report: Optional[EvalReport]

    @property
    def dev_accuracy(self) -> Optional[float]:
        return self.dev_report.accuracy if self.dev_report is not None else None

    @property
    def test_accuracy(self) -> float:
        return self.report.accuracy


def predict_corpus(model: LinearModel, dialogues: Sequence[Dialogue]) -> list:
    return [with_predictions(d, predict_dialogue(model, d)) for d in dialogues]


def evaluate(model: LinearModel, dialogues: Sequence[Dialogue]) -> Optional[EvalReport]:
    gold, pred = [], []
    for d in dialogues:
        pred.extend(predict_dialogue(model, d))
        gold.extend(u.act for _, u in d.utterances())
    if not gold:
        return None
    return report(gold, pred)


def split_by_domain(dialogues: Sequence[Dialogue], ratios=(0.7, 0.2, 0.1), seed: int = 0) -> dict:
    """Split each domain on its own; domains with fewer than 3 dialogues are skipped."""
    out = {}
    for dom in Domain:
        part = [d for d in dialogues if d.domain is dom]
        if len(part) >= 3:
            out[dom.value] = split_dataset(part, ratios, seed)
    return out


def combine(splits: Sequence[DatasetSplit]) -> DatasetSplit:
    splits = list(splits)
    return DatasetSplit(
        train=tuple(d for s in splits for d in s.train),
        dev=tuple(d for s in splits for d in s.dev),
        test=tuple(d for s in splits for d in s.test),
        ratios=splits[0].ratios,
        seed=splits[0].seed,
    )


def run_experiment(
    name: str,
    split: DatasetSplit,
    feature_config: FeatureTemplateConfig = FeatureTemplateConfig(),
    train_config: TrainConfig = TrainConfig(),
) -> ExperimentResult:
    if not split.train:
        raise ValueError(f"{name}: empty training part")
    if not split.test:
        raise ValueError(f"{name}: empty test part")
    model = fit(split.train, feature_config, train_config)
    return ExperimentResult(
        name=name,
        split=split,
        model=model,
        report=evaluate(model, split.test),
        train_accuracy=evaluate(model, split.train).accuracy,
        dev_report=evaluate(model, split.dev),
    )


def run_pipeline(
    dialogues: Sequence[Dialogue],
    feature_config: FeatureTemplateConfig = FeatureTemplateConfig(),
    train_config: TrainConfig = TrainConfig(),
    ratios=(0.7, 0.2, 0.1),
    seed: int = 0,
) -> list:
    """One experiment per domain, then one on the union of the domain splits."""
    splits = split_by_domain(dialogues, ratios, seed)
    if not splits:
        raise ValueError("no domain has the 3 dialogues needed for a split")
    results = [run_experiment(name, sp, feature_config, train_config) for name, sp in splits.items()]
    if len(splits) > 1:
        results.append(run_experiment(COMBINED, combine(splits.values()), feature_config, train_config))
    return results


@dataclass(frozen=True)
class SweepRow:
    window: tuple
    train_accuracy: float
    dev_f1: Optional[float]
    test_f1: float
    test_accuracy: float


def sweep_windows(
    split: DatasetSplit,
    feature_config: FeatureTemplateConfig = FeatureTemplateConfig(),
    train_config: TrainConfig = TrainConfig(),
    sizes: Sequence[int] = (1, 2, 3, 4, 5),
    overall: str = "weighted",
) -> list:
    """Re-run one experiment with symmetric windows -k/+k for each k in ``sizes``."""
    rows = []
    for k in sizes:
        res = run_experiment(f"window-{k}", split, replace(feature_config, window=(-k, k)), train_config)
        dev = res.dev_report
        rows.append(SweepRow(
            window=(-k, k),
            train_accuracy=res.train_accuracy,
            dev_f1=dev.overall(overall).f1 if dev is not None else None,
            test_f1=res.report.overall(overall).f1,
            test_accuracy=res.test_accuracy,
        ))
    return rows


def render_sweep(rows: Sequence[SweepRow]) -> str:
    def fmt(x):
        return "-" if x is None else format_percent(x)

    best = max(rows, key=lambda r: (r.dev_f1 if r.dev_f1 is not None else r.test_f1))
    lines = [f"{'Window':<10}{'Train Acc':>10}{'DEV F1':>10}{'Test F1':>10}{'Test Acc':>10}"]
    for r in rows:
        mark = "  *" if r is best else ""
        lines.append(f"{f'{r.window[0]}/+{r.window[1]}':<10}{fmt(r.train_accuracy):>10}"
                     f"{fmt(r.dev_f1):>10}{fmt(r.test_f1):>10}{fmt(r.test_accuracy):>10}{mark}")
    return "\n".join(lines) + "\n"
