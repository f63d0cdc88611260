"""Command-line entry point: ``dialact <subcommand> ...``.

Exit status: 0 on success, 1 on usage errors, 2 on data errors.
"""
from __future__ import annotations

import argparse
import io
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .classifier import ModelFormatError, Strategy, TrainConfig, fit, load_model, save_model
from .corpus import (
    ActLabel,
    CorpusError,
    SynthSpec,
    dumps_dialogue,
    load_jsonl,
    read_jsonl,
    split_dataset,
    stats,
    synth_corpus,
)
from .evaluation import AGGREGATIONS, render_table, report
from .experiment import (
    COMBINED,
    combine,
    predict_corpus,
    render_sweep,
    run_pipeline,
    split_by_domain,
    sweep_windows,
)
from .features import FeatureTemplateConfig
from .normalize import NormalizationConfig, load_lexicon, normalize_line
from .translit import DEFAULT_TABLE, UnmappedCodepoint, from_buckwalter, to_buckwalter

__all__ = ["main", "run"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}\n{self.format_usage()}")


# --------------------------------------------------------------------------
# argument types

def _ratios(text: str) -> tuple:
    try:
        parts = tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad ratios {text!r}") from None
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("ratios need three comma-separated values")
    return parts


def _window(text: str) -> tuple:
    try:
        left, right = (int(x) for x in text.replace("−", "-").split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad window {text!r}; expected e.g. -2,+2") from None
    if not (-5 <= left <= 0 <= right <= 5):
        raise argparse.ArgumentTypeError("window must satisfy -5 <= left <= 0 <= right <= 5")
    return left, right


def _bool(text: str) -> bool:
    low = str(text).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"not a boolean: {text!r}")


# --------------------------------------------------------------------------
# parser

def _add_feature_options(p):
    g = p.add_argument_group("features")
    g.add_argument("--window", type=_window, default=(-2, 2), help="context window, e.g. -2,+2")
    for name in ("tokens", "pos", "speaker", "prev-act", "prev-tags", "quadratic"):
        g.add_argument(f"--no-{name}", dest=f"no_{name.replace('-', '_')}", action="store_true",
                       help=f"disable {name} features")


def _add_train_options(p):
    g = p.add_argument_group("training")
    g.add_argument("--strategy", choices=[s.value for s in Strategy], default="ova")
    g.add_argument("--epochs", type=int, default=10)
    g.add_argument("--lambda", dest="lam", type=float, default=1e-4, help="L2 weight")
    g.add_argument("--eta0", type=float, default=0.1, help="initial step size")
    g.add_argument("--no-averaging", action="store_true")
    g.add_argument("--jobs", type=int, default=1, help="threads for binary-task training")


def _add_seed(p):
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dialact", description="Dialogue-act tagging toolkit.")
    parser.add_argument("--config", help="key = value file; command-line flags override it")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("translit", help="Arabic <-> Buckwalter line filter")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--to-ascii", action="store_true")
    mode.add_argument("--to-arabic", action="store_true")
    p.add_argument("--strict", action="store_true", help="fail on unmapped Arabic characters")

    p = sub.add_parser("normalize", help="normalize and waw-split Arabic lines")
    p.add_argument("--no-waw-split", action="store_true")
    p.add_argument("--waw-lexicon", help="file with one known word per line")

    p = sub.add_parser("stats", help="corpus counts per domain")
    p.add_argument("--corpus", help="JSONL corpus (default: stdin)")

    p = sub.add_parser("synth", help="write a synthetic JSONL corpus to stdout")
    p.add_argument("--n", type=int, default=40, help="number of dialogues")
    p.add_argument("--out", help="output file instead of stdout")
    _add_seed(p)

    p = sub.add_parser("split", help="split a corpus into train/dev/test JSONL files")
    p.add_argument("--corpus", help="JSONL corpus (default: stdin)")
    p.add_argument("--ratios", type=_ratios, default=(0.7, 0.2, 0.1))
    p.add_argument("--out-dir", required=True)
    p.add_argument("--no-per-domain", action="store_true", help="split the corpus as a whole")
    _add_seed(p)

    p = sub.add_parser("train", help="train a model on a JSONL corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--model", required=True, help="output model file")
    _add_feature_options(p)
    _add_train_options(p)
    _add_seed(p)

    p = sub.add_parser("predict", help="tag a JSONL corpus with a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("--corpus", help="JSONL corpus (default: stdin)")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=["jsonl", "labels"], default="jsonl")
    p.add_argument("--arabic", action="store_true", help="also print Arabic text (labels format)")

    p = sub.add_parser("eval", help="score predicted acts against gold acts")
    p.add_argument("--gold", required=True, help="act-per-line file or JSONL corpus")
    p.add_argument("--pred", help="act-per-line file or JSONL with pred_act (default: --gold)")
    p.add_argument("--style", choices=["aligned", "tsv", "json"], default="aligned")
    p.add_argument("--overall", choices=AGGREGATIONS, default="weighted")

    p = sub.add_parser("pipeline", help="split + train + eval per domain and combined")
    p.add_argument("--corpus", required=True)
    p.add_argument("--ratios", type=_ratios, default=(0.7, 0.2, 0.1))
    p.add_argument("--out-dir", help="write models and JSON reports here")
    p.add_argument("--style", choices=["aligned", "tsv", "json"], default="aligned")
    p.add_argument("--overall", choices=AGGREGATIONS, default="weighted")
    p.add_argument("--sweep-window", action="store_true",
                   help="also compare windows -1/+1 .. -5/+5 on the combined split")
    _add_feature_options(p)
    _add_train_options(p)
    _add_seed(p)
    return parser


def _subparser(parser, command):
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[command]
    raise KeyError(command)


def _apply_config(parser, argv, path) -> argparse.Namespace:
    """Use ``key = value`` lines of ``path`` as defaults of the chosen subcommand."""
    ns = parser.parse_args(argv)
    sub = _subparser(parser, ns.command)
    actions = {a.dest: a for a in sub._actions}
    defaults = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip().replace("-", "_"), value.strip()
        if key == "lambda":
            key = "lam"
        if not sep or key not in actions:
            raise UsageError(f"{path}:{lineno}: unknown config key {key!r}")
        action = actions[key]
        try:
            if isinstance(action, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
                defaults[key] = _bool(value)
            else:
                defaults[key] = action.type(value) if action.type else value
        except (argparse.ArgumentTypeError, ValueError) as exc:
            raise UsageError(f"{path}:{lineno}: {exc}") from None
        if action.choices is not None and defaults[key] not in action.choices:
            raise UsageError(f"{path}:{lineno}: {value!r} not one of {sorted(action.choices)}")
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def _glue_negative_values(argv: Sequence[str]) -> list:
    # "--window -2,+2" would otherwise be read as two options
    out = list(argv)
    for i, arg in enumerate(out[:-1]):
        if arg in ("--window", "--ratios") and out[i + 1].startswith(("-", "−")):
            out[i] = f"{arg}={out[i + 1]}"
            out[i + 1] = None
    return [a for a in out if a is not None]


def feature_config(ns) -> FeatureTemplateConfig:
    return FeatureTemplateConfig(
        window=ns.window,
        use_tokens=not ns.no_tokens,
        use_pos=not ns.no_pos,
        use_speaker=not ns.no_speaker,
        use_prev_act=not ns.no_prev_act,
        use_prev_tags=not ns.no_prev_tags,
        quadratic=not ns.no_quadratic,
    )


def train_config(ns) -> TrainConfig:
    return TrainConfig(strategy=Strategy(ns.strategy), epochs=ns.epochs, lam=ns.lam,
                       eta0=ns.eta0, seed=ns.seed, averaging=not ns.no_averaging, jobs=ns.jobs)


# --------------------------------------------------------------------------
# commands

def _read_corpus(path, stdin):
    if path:
        return load_jsonl(path)
    return read_jsonl(stdin)


def _cmd_translit(ns, stdin, stdout):
    table = DEFAULT_TABLE.strict(ns.strict)
    for line in stdin:
        stdout.write(to_buckwalter(line, table) if ns.to_ascii else from_buckwalter(line, table))


def _cmd_normalize(ns, stdin, stdout):
    lexicon = None
    if ns.waw_lexicon:
        with open(ns.waw_lexicon, encoding="utf-8") as fh:
            lexicon = load_lexicon(fh)
    cfg = NormalizationConfig(split_waw=not ns.no_waw_split, waw_lexicon=lexicon)
    for line in stdin:
        stdout.write(normalize_line(line, cfg) + "\n")


def _cmd_stats(ns, stdin, stdout):
    stdout.write(stats(_read_corpus(ns.corpus, stdin)).to_tsv())


def _cmd_synth(ns, stdin, stdout):
    text = "".join(dumps_dialogue(d) + "\n" for d in synth_corpus(SynthSpec(n_dialogues=ns.n, seed=ns.seed)))
    if ns.out:
        Path(ns.out).write_text(text, encoding="utf-8")
    else:
        stdout.write(text)


def _write_parts(out_dir: Path, split):
    out_dir.mkdir(parents=True, exist_ok=True)
    for name, part in zip(("train", "dev", "test"), split.parts):
        (out_dir / f"{name}.jsonl").write_text("".join(dumps_dialogue(d) + "\n" for d in part),
                                               encoding="utf-8")


def _cmd_split(ns, stdin, stdout):
    dialogues = _read_corpus(ns.corpus, stdin)
    if ns.no_per_domain:
        split = split_dataset(dialogues, ns.ratios, ns.seed)
    else:
        per = split_by_domain(dialogues, ns.ratios, ns.seed)
        if not per:
            raise ValueError("no domain has the 3 dialogues needed for a split")
        split = combine(per.values())
    _write_parts(Path(ns.out_dir), split)
    stdout.write("part\tdialogues\tturns\n")
    for name, part in zip(("train", "dev", "test"), split.parts):
        stdout.write(f"{name}\t{len(part)}\t{sum(d.n_turns for d in part)}\n")


def _cmd_train(ns, stdin, stdout):
    dialogues = load_jsonl(ns.corpus)
    model = fit(dialogues, feature_config(ns), train_config(ns))
    save_model(model, ns.model)
    stdout.write(f"labels={len(model.labels)} features={len(model.dictionary)} "
                 f"strategy={model.strategy.value} window={model.feature_config.window}\n")


def _cmd_predict(ns, stdin, stdout):
    model = load_model(ns.model)
    tagged = predict_corpus(model, _read_corpus(ns.corpus, stdin))
    if ns.format == "jsonl":
        text = "".join(dumps_dialogue(d) + "\n" for d in tagged)
    else:
        lines = []
        for d in tagged:
            for _, u in d.utterances():
                lines.append(f"{u.pred_act.value}\t{u.raw_text}" if ns.arabic else u.pred_act.value)
        text = "".join(line + "\n" for line in lines)
    if ns.out:
        Path(ns.out).write_text(text, encoding="utf-8")
    else:
        stdout.write(text)


def _read_acts(path, field):
    """Acts from an act-per-line file, or from ``field`` of a JSONL corpus."""
    text = Path(path).read_text(encoding="utf-8")
    first = text.lstrip()[:1]
    if first == "{":
        acts = []
        for d in read_jsonl(io.StringIO(text)):
            for _, u in d.utterances():
                act = u.act if field == "act" else u.pred_act
                if act is None:
                    raise CorpusError(f"{path}: utterance without {field}")
                acts.append(act)
        return acts
    return [ActLabel.parse(line.strip(), n) for n, line in enumerate(text.splitlines(), 1) if line.strip()]


def _cmd_eval(ns, stdin, stdout):
    gold = _read_acts(ns.gold, "act")
    pred = _read_acts(ns.pred or ns.gold, "pred_act")
    stdout.write(render_table(report(gold, pred), ns.style, ns.overall))


def _config_header(ns) -> str:
    skip = {"config"}
    lines = ["# run configuration"]
    for key in sorted(vars(ns)):
        if key in skip:
            continue
        value = getattr(ns, key)
        if key in ("window",):
            value = f"{value[0]},+{value[1]}"
        elif key == "ratios":
            value = ",".join(repr(r) for r in value)
        lines.append(f"# {key} = {value}")
    return "\n".join(lines) + "\n"


def _cmd_pipeline(ns, stdin, stdout):
    dialogues = load_jsonl(ns.corpus)
    fcfg, tcfg = feature_config(ns), train_config(ns)
    results = run_pipeline(dialogues, fcfg, tcfg, ns.ratios, ns.seed)
    out = [_config_header(ns)]
    for res in results:
        sp = res.split
        out.append(f"\n## {res.name}\n")
        out.append("# dialogues train/dev/test = "
                   f"{len(sp.train)}/{len(sp.dev)}/{len(sp.test)}; turns = "
                   + "/".join(str(sum(d.n_turns for d in part)) for part in sp.parts) + "\n")
        dev = "-" if res.dev_accuracy is None else f"{res.dev_accuracy:.2f}"
        out.append(f"# accuracy train = {res.train_accuracy:.2f}  dev = {dev}  "
                   f"test = {res.test_accuracy:.2f}\n")
        out.append(render_table(res.report, ns.style, ns.overall))
    if ns.sweep_window:
        split = results[-1].split
        label = results[-1].name
        out.append(f"\n## window sweep ({label}, {ns.overall} F1)\n")
        out.append(render_sweep(sweep_windows(split, fcfg, tcfg, overall=ns.overall)))
    text = "".join(out)
    if ns.out_dir:
        d = Path(ns.out_dir)
        d.mkdir(parents=True, exist_ok=True)
        for res in results:
            save_model(res.model, d / f"model-{res.name}.bin")
            (d / f"report-{res.name}.json").write_text(render_table(res.report, "json"), encoding="utf-8")
        (d / "report.txt").write_text(text, encoding="utf-8")
    stdout.write(text)


COMMANDS = {
    "translit": _cmd_translit,
    "normalize": _cmd_normalize,
    "stats": _cmd_stats,
    "synth": _cmd_synth,
    "split": _cmd_split,
    "train": _cmd_train,
    "predict": _cmd_predict,
    "eval": _cmd_eval,
    "pipeline": _cmd_pipeline,
}


def run(argv: Optional[Sequence[str]] = None, stdin=None, stdout=None, stderr=None) -> int:
    """Run one command; returns the process exit code."""
    argv = _glue_negative_values(sys.argv[1:] if argv is None else argv)
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        if ns.config:
            ns = _apply_config(parser, argv, ns.config)
        if getattr(ns, "ratios", None) is not None and (
                abs(sum(ns.ratios) - 1.0) > 1e-9 or min(ns.ratios) < 0):
            raise UsageError(f"--ratios must be non-negative and sum to 1, got {ns.ratios}")
        if getattr(ns, "jobs", 1) < 1 or getattr(ns, "epochs", 1) < 1 or getattr(ns, "n", 0) < 0:
            raise UsageError("--jobs/--epochs must be >= 1 and --n >= 0")
    except UsageError as exc:
        stderr.write(str(exc).rstrip("\n") + "\n")
        return 1
    except SystemExit as exc:  # --help
        return 0 if not exc.code else 1
    except OSError as exc:
        stderr.write(f"dialact: {exc}\n")
        return 2
    try:
        COMMANDS[ns.command](ns, stdin, stdout)
    except (CorpusError, ModelFormatError, UnmappedCodepoint, ValueError, OSError) as exc:
        stderr.write(f"dialact {ns.command}: {exc}\n")
        return 2
    return 0


def main() -> None:
    sys.exit(run())
