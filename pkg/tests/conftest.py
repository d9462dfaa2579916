import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

LETTERS2 = [1, -1, 2, -2]
LETTERS3 = [1, -1, 2, -2, 3, -3]


def words(alphabet=LETTERS2, min_size=0, max_size=20):
    return st.lists(st.sampled_from(alphabet), min_size=min_size, max_size=max_size).map(tuple)


def cyclic_words(alphabet=LETTERS2, min_size=1, max_size=12):
    from scg.words import cyclic_reduce

    return (
        words(alphabet, min_size, max_size)
        .map(lambda w: cyclic_reduce(w)[0].letters)
        .filter(lambda w: len(w) >= min_size)
    )


@pytest.fixture
def ab():
    from scg.words import Alphabet

    return Alphabet(["a", "b"])


# (criterion, passed, seconds, detail) recorded by test_acceptance.py
ACCEPTANCE: list = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n, ok, secs, detail in sorted(ACCEPTANCE):
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {secs:7.2f}s  {detail}")
