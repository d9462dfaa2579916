import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import LETTERS2, LETTERS3, cyclic_words, words
from oracles import brute_coverage, brute_nth_power
from scg.saturation import (
    EdgeMask,
    classification_table,
    coverage,
    nth_power_mask,
    sat_nth_powers,
    sat_word,
    word_mask,
)
from scg.words import CyclicWord, cyclic_reduce, free_reduce, invert, power, rotate

V = (1, 1, 1, 2, 1, 1, 1, 1)  # a^3 b a^4


def test_worked_values():
    assert sat_word((1,), 1, V) == Fraction(7, 8)
    assert sat_word((1,), 4, V) == Fraction(7, 8)
    assert sat_word((1,), 8, V) == 0
    assert coverage(V, [(1,) * 8]).covered == 0
    assert sat_nth_powers(1, V) == 1
    assert sat_nth_powers(6, V) == Fraction(7, 8)
    assert sat_nth_powers(8, V) == 0


def test_self_cover_and_trivial():
    v = (1, 2, -1, 2, 2)
    assert sat_word(v, 1, v) == 1
    with pytest.raises(ValueError, match="trivial pattern"):
        sat_word((1, -1), 1, v)


def test_coverage_random_oracle():
    rng = random.Random(11)
    for _ in range(200):
        v = ()
        while not v:
            v = cyclic_reduce([rng.choice(LETTERS3) for _ in range(rng.randint(1, 12))])[0].letters
        pats = []
        for _ in range(rng.randint(1, 2)):
            p = ()
            while not p:
                p = cyclic_reduce([rng.choice(LETTERS3) for _ in range(rng.randint(1, 4))])[0].letters
            pats.append(p)
        assert coverage(v, pats).flags() == brute_coverage(v, pats)


@settings(max_examples=150, deadline=None)
@given(cyclic_words(LETTERS2, 1, 14), cyclic_words(LETTERS2, 1, 4))
def test_coverage_oracle_property(v, p):
    assert coverage(v, [p]).flags() == brute_coverage(v, [p])


@settings(max_examples=100, deadline=None)
@given(cyclic_words(LETTERS2, 1, 14), st.integers(1, 8))
def test_nth_power_oracle(v, n):
    assert nth_power_mask(n, v).flags() == brute_nth_power(n, v)


def test_power_coverage_lemma_exhaustive():
    # every arc reading (conjugate of w^m)^p is covered by conjugates of w^m
    alph = LETTERS2
    vs = set()
    for n in range(1, 8):
        for tup in itertools.product(alph, repeat=n):
            c = cyclic_reduce(tup)[0].letters
            if len(c) == n:
                vs.add(c)
    ws = set()
    for n in range(1, 4):
        for tup in itertools.product(alph, repeat=n):
            c = cyclic_reduce(tup)[0].letters
            if c:
                ws.add(c)
    for v in vs:
        for w in ws:
            for m in range(1, 4):
                base = cyclic_reduce(power(w, m))[0].letters
                one = coverage(v, [base]).bits
                for p in range(2, 4):
                    pw = cyclic_reduce(power(base, p))[0].letters
                    assert coverage(v, [pw]).bits & ~one == 0


@settings(max_examples=80, deadline=None)
@given(cyclic_words(LETTERS2, 1, 12), cyclic_words(LETTERS2, 1, 3), st.integers(1, 3), st.integers(0, 11))
def test_symmetry_and_monotonicity(v, w, m, k):
    s = sat_word(w, m, v)
    assert s == sat_word(invert(w), m, v) == sat_word(w, m, invert(v))
    assert s == sat_word(w, m, rotate(v, k))
    assert sat_word(w, m + 1, v) <= s
    assert word_mask(w, m + 1, v).bits & ~word_mask(w, m, v).bits == 0
    assert s.denominator in [d for d in range(1, len(v) + 1) if len(v) % d == 0]


@settings(max_examples=60, deadline=None)
@given(cyclic_words(LETTERS2, 1, 12), st.integers(1, 4), st.integers(1, 3))
def test_nth_power_divisibility(v, n, f):
    assert sat_nth_powers(n * f, v) <= sat_nth_powers(n, v)


@settings(max_examples=60, deadline=None)
@given(cyclic_words(LETTERS2, 1, 12), st.integers(0, 11))
def test_mask_rotation_equivariant(v, k):
    m0 = coverage(v, [(1,)])
    mk = coverage(rotate(v, k), [(1,)])
    assert m0.rotate(k) == mk


def test_edge_mask_helpers():
    m = EdgeMask.from_flags([True, False, True])
    assert m.covered == 2 and 2 in m and 1 not in m
    assert m.edges() == [0, 2]


def test_classification_small():
    from scg.presentation import Presentation
    from scg.words import Alphabet

    pres = Presentation(Alphabet(["a", "b"]), (CyclicWord((1, 2, 2)), CyclicWord((1, 2, 2, 2, 2))))
    tab = classification_table(pres, (2,), [1, 2])
    assert tab.rows[0].sats == (Fraction(2, 3), Fraction(2, 3))
    assert all(isinstance(x, Fraction) for r in tab.rows for x in r.products)
    assert "sat_m1" in tab.to_csv()
