import importlib

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scg import _pykernels as py
from scg import kernels

try:
    from scg import _ckernels as cy
except ImportError:  # pragma: no cover - extension not built
    cy = None

seqs = st.lists(st.sampled_from([1, -1, 2, -2, 5, 9]), max_size=40)


@given(seqs)
def test_suffix_array_sorted(s):
    sa = py.suffix_array(s)
    assert sa == sorted(range(len(s)), key=lambda i: s[i:])


@given(seqs)
def test_lcp_matches_direct(s):
    sa = py.suffix_array(s)
    lcp = py.lcp_array(s, sa)
    for i in range(len(s) - 1):
        a, b = s[sa[i]:], s[sa[i + 1]:]
        k = 0
        while k < min(len(a), len(b)) and a[k] == b[k]:
            k += 1
        assert lcp[i] == k


@given(seqs)
def test_z_array_direct(s):
    z = py.z_array(s)
    for i in range(len(s)):
        k = 0
        while i + k < len(s) and s[k] == s[i + k]:
            k += 1
        assert z[i] == k


@given(seqs, st.integers(1, 6))
def test_period_runs_direct(s, p):
    n = len(s)
    lin = py.period_runs(s, p, False)
    for i in range(n):
        k = 0
        while i + k + p < n and s[i + k] == s[i + k + p]:
            k += 1
        assert lin[i] == k
    cyc = py.period_runs(s, p, True)
    for i in range(n):
        k = 0
        while k < n and s[(i + k) % n] == s[(i + k + p) % n]:
            k += 1
        assert cyc[i] == k


@given(seqs, st.integers(1, 5))
def test_window_hashes_equal_windows(s, h):
    hs = py.window_hashes(s, h)
    assert len(hs) == max(0, len(s) - h + 1)
    for i in range(len(hs)):
        for j in range(len(hs)):
            if s[i:i + h] == s[j:j + h]:
                assert hs[i] == hs[j]


@pytest.mark.skipif(cy is None, reason="compiled kernels unavailable")
@settings(max_examples=300)
@given(seqs, st.integers(0, 7), st.booleans())
def test_backends_agree(s, p, cyclic):
    assert cy.suffix_array(s) == py.suffix_array(s)
    sa = py.suffix_array(s)
    assert cy.lcp_array(s, sa) == py.lcp_array(s, sa)
    assert cy.z_array(s) == py.z_array(s)
    assert cy.period_runs(s, p, cyclic) == py.period_runs(s, p, cyclic)
    assert cy.window_hashes(s, p) == py.window_hashes(s, p)


def test_pure_python_override(monkeypatch):
    monkeypatch.setenv("SCG_PURE_PYTHON", "1")
    mod = importlib.reload(kernels)
    try:
        assert mod.BACKEND == "python"
        assert mod.suffix_array is py.suffix_array
    finally:
        monkeypatch.delenv("SCG_PURE_PYTHON")
        importlib.reload(kernels)
