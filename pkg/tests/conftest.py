import numpy as np
import pytest

from nbspec import Graph, SeededRng, sample_gnp

# criterion number -> (label, passed, detail); filled by test_acceptance
ACCEPTANCE: dict[str, tuple[str, bool, str]] = {}


def record_acceptance(key, label, passed, detail=""):
    ACCEPTANCE[key] = (label, bool(passed), detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (len(k.rstrip("abcdefghijklmnopqrstuvwxyz")), k)):
        label, ok, detail = ACCEPTANCE[key]
        tr.write_line(f"{'PASS' if ok else 'FAIL'}  [{key}] {label}" + (f"  ({detail})" if detail else ""))


def cycle(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n):
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def path(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


@pytest.fixture
def gnp():
    def make(n, p, seed=0, stream=0):
        return sample_gnp(n, p, SeededRng(seed, stream))
    return make


def multiset_close(a, b, tol):
    from nbspec import bottleneck_matching
    return bottleneck_matching(np.asarray(a), np.asarray(b)) <= tol
