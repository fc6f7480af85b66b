import time

import pytest

from ragbench.corpus import Corpus, Document, Query, QuerySet, Subset
from ragbench.synthetic import synthetic_benchmark


@pytest.fixture
def toy_corpus():
    docs = [
        Document("d1", "Net income rose to 42 million in 2019", Subset.FINQA),
        Document("d2", "Revenue | 2018 | 2019\nTotal | 100 | 120", Subset.TATDQA),
        Document("d3", "The company repurchased shares worth 15 million", Subset.CONVFINQA),
        Document("d4", "Operating expenses fell by 3 percent in 2019", Subset.FINQA),
        Document("d5", "Dividends per share were 1.25 dollars", Subset.OTHER),
    ]
    return Corpus(docs)


@pytest.fixture
def toy_queries(toy_corpus):
    qs = [
        Query("q1", "What was net income in 2019?", "d1", 42.0, Subset.FINQA),
        Query("q2", "What was total revenue in 2019?", "d2", 120.0, Subset.TATDQA),
        Query("q3", "How much did the company spend on repurchased shares?", "d3", 15.0, Subset.CONVFINQA),
    ]
    return QuerySet(qs, toy_corpus)


@pytest.fixture(scope="session")
def bench():
    return synthetic_benchmark()


_ACCEPTANCE_LINES = pytest.StashKey[list]()


class _Criterion:
    def __init__(self, config, number: int, title: str, limit: float):
        self.config, self.number, self.title, self.limit = config, number, title, limit
        self.detail = ""

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def _emit(self, ok: bool, elapsed: float, extra: str = "") -> None:
        status = "PASS" if ok else "FAIL"
        detail = "; ".join(x for x in (self.detail, extra) if x)
        line = f"{status} criterion {self.number}: {self.title} ({elapsed:.2f}s, limit {self.limit:g}s)"
        if detail:
            line += f" [{detail}]"
        self.config.stash.setdefault(_ACCEPTANCE_LINES, []).append(line)
        reporter = self.config.pluginmanager.get_plugin("terminalreporter")
        if reporter is not None:
            reporter.write_line("")
            reporter.write_line(line)

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        if exc_type is not None:
            self._emit(False, elapsed, f"{exc_type.__name__}: {str(exc).splitlines()[0] if str(exc) else ''}")
            return False
        if elapsed > self.limit:
            self._emit(False, elapsed, "over time budget")
            raise AssertionError(f"criterion {self.number} took {elapsed:.2f}s > {self.limit}s")
        self._emit(True, elapsed)
        return False


@pytest.fixture
def criterion(request):
    """``with criterion(n, title, limit) as c:`` times a block and reports one PASS/FAIL line."""

    def make(number: int, title: str, limit: float) -> _Criterion:
        return _Criterion(request.config, number, title, limit)

    return make


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_ACCEPTANCE_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
