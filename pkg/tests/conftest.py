import pytest

from fgfp import builtin_problems, solve


@pytest.fixture(scope="session")
def corpus():
    return {e.id: e for e in builtin_problems()}


@pytest.fixture(scope="session")
def corpus_runs(corpus):
    """(trace, result) per corpus entry at the default tolerance."""
    return {eid: solve(e.problem) for eid, e in corpus.items()}
