import pytest

from dialact.corpus import SynthSpec, synth_corpus
from dialact.experiment import combine, split_by_domain

# acceptance corpus: 48 dialogues, ~1000 utterances, 8 acts
ACCEPTANCE_SPEC = SynthSpec(n_dialogues=48, seed=11)
ACCEPTANCE_SPLIT_SEED = 1

_ACCEPTANCE_LINES = []


def record_criterion(number, ok, detail):
    _ACCEPTANCE_LINES.append(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
    return ok


@pytest.fixture
def record():
    return record_criterion


@pytest.fixture(scope="session")
def small_corpus():
    return synth_corpus(SynthSpec(n_dialogues=9, seed=3))


@pytest.fixture(scope="session")
def acceptance_corpus():
    return synth_corpus(ACCEPTANCE_SPEC)


@pytest.fixture(scope="session")
def acceptance_split(acceptance_corpus):
    return combine(split_by_domain(acceptance_corpus, seed=ACCEPTANCE_SPLIT_SEED).values())


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
