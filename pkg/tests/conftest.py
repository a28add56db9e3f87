import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def graph_key(g):
    """Hashable canonical form of a graph."""
    return tuple(sorted((i, j, m) for i, j, m in g.edges()))


def tv_distance(p, q):
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


# Every information report the library builds during the session is kept so
# the bound checks can run over all of them at the end.
import reconlab.infotheory.estimators as _estimators  # noqa: E402

INFO_REPORTS = []
ACCEPTANCE_LINES = []
_InfoReport = _estimators.InfoReport


def _recording_report(*args, **kwargs):
    rep = _InfoReport(*args, **kwargs)
    INFO_REPORTS.append(rep)
    return rep


_estimators.InfoReport = _recording_report


def pytest_collection_modifyitems(items):
    # acceptance criteria last, so the bound check sees the whole session
    items.sort(key=lambda item: "test_acceptance.py" in item.nodeid)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
