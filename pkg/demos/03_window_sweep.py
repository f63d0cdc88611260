"""
How wide should the context window be?
======================================

Builds a corpus where every utterance has five tokens and the cue word
comes first, so the middle token is two positions away from it. A
window of -1/+1 cannot see the cue from there; -2/+2 can.
"""

from dialact import FeatureTemplateConfig, SynthSpec, TrainConfig, synth_corpus
from dialact.experiment import combine, render_sweep, split_by_domain, sweep_windows

spec = SynthSpec(n_dialogues=48, seed=5, utterance_length=(5, 5), cue_position=0)
corpus = synth_corpus(spec)
split = combine(split_by_domain(corpus, seed=5).values())

# previous-tag features would carry the act forward from the first token
# and hide the effect of the window, so they are switched off here
features = FeatureTemplateConfig(use_prev_tags=False)
rows = sweep_windows(split, features, TrainConfig())
print(render_sweep(rows))

by_window = {r.window: r.test_f1 for r in rows}
print("-2/+2 beats -1/+1:", by_window[(-2, 2)] > by_window[(-1, 1)])
