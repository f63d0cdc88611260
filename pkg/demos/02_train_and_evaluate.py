"""
Training and scoring a dialogue-act tagger
==========================================

Generates a synthetic corpus, splits it per domain, trains one-vs-all
and pairwise models and prints the per-act tables.
"""

import numpy as np

from dialact import ActLabel, FeatureTemplateConfig, SynthSpec, TrainConfig, render_table, stats, synth_corpus
from dialact.classifier import predict_utterance
from dialact.experiment import run_pipeline

corpus = synth_corpus(SynthSpec(n_dialogues=48, seed=11))
print(stats(corpus).to_tsv())

# each utterance is tagged token by token in BIO form; the utterance act
# is the majority act of its tags
features = FeatureTemplateConfig(window=(-2, 2))
for strategy in ("ova", "pairwise"):
    results = run_pipeline(corpus, features, TrainConfig(strategy=strategy), seed=1)
    for res in results:
        print(f"{strategy:>8}  {res.name:<24} train {res.train_accuracy:6.2f}  "
              f"test {res.test_accuracy:6.2f}")
    print(render_table(results[-1].report))

# look inside the last combined model
model = results[-1].model
print(len(model.labels), "tags;", len(model.dictionary), "features;", model.weights.shape)

# the heaviest features for B-Thanking; a pair's weights favour its first
# label, so flip the rows where B-Thanking comes second
row = [str(t) for t in model.labels].index("B-Thanking")
sign = np.array([1.0 if a == row else -1.0 if b == row else 0.0 for a, b in model.pairs])
weights = sign @ model.weights
names = model.dictionary.names
for i in np.argsort(weights)[::-1][:5]:
    print(f"{weights[i]:8.3f}  {names[i]}")

# tag one new utterance by hand
tokens = ["$krA", "jzylA"]
tags, decision = predict_utterance(model, tokens, None, corpus[0].turns[1].speaker, ActLabel.AGREE)
print([str(t) for t in tags], decision.act.value)
