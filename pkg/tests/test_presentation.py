import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import LETTERS2, LETTERS3, cyclic_words
from oracles import brute_max_power, brute_pieces
from scg.presentation import (
    Presentation,
    PresentationError,
    SymmetrizedView,
    check_small_cancellation,
    longest_pieces,
    max_power_arc,
)
from scg.words import Alphabet, CyclicWord, invert, rotate


def make(rels, names="abc"):
    return Presentation(Alphabet(list(names)), tuple(CyclicWord(r) for r in rels))


def random_presentation(rng, max_rel=4, max_len=12, names="abc"):
    from scg.words import cyclic_reduce, canonical_rotation

    k = len(names)
    rels, seen = [], set()
    for _ in range(rng.randint(1, max_rel)):
        for _attempt in range(20):
            w = [rng.choice([1, -1, 2, -2, 3, -3][: 2 * k]) for _ in range(rng.randint(1, max_len))]
            core = cyclic_reduce(w)[0].letters
            if not core:
                continue
            key = canonical_rotation(core)
            if key in seen or canonical_rotation(invert(core)) in seen:
                continue
            seen.add(key)
            rels.append(core)
            break
    return make(rels, names)


def test_abac_single_piece():
    rep = longest_pieces(make([(1, 2, 1, 3)]))
    r = rep.per_relator[0]
    assert r.p == 1 and r.piece == (1,)
    assert rep.lambda_star == Fraction(1, 4)


def test_witnesses_are_distinct_members():
    pres = make([(1, 2, 1, 3), (2, 2, 3, -1, 3)])
    view = SymmetrizedView(pres)
    rep = longest_pieces(pres)
    for r in rep.per_relator:
        if r.p:
            a, b = r.witnesses
            assert not view.same_member(a, b)
            assert view.word(a)[: r.p] == r.piece == view.word(b)[: r.p]


def test_periodic_relator_collapses():
    # abab: rotations 0 and 2 are one member, so "ab" is not a piece
    pres = make([(1, 2, 1, 2)])
    assert longest_pieces(pres).per_relator[0].p == brute_pieces(pres.relators)[0] == 0
    rep = check_small_cancellation(pres, Fraction(1, 6))
    assert rep.holds


def test_duplicates_rejected():
    with pytest.raises(PresentationError):
        make([(1, 2, 3), (2, 3, 1)])
    with pytest.raises(PresentationError):
        make([(1, 2, 3), (-3, -2, -1)])
    with pytest.raises(PresentationError):
        make([()])


def test_oracle_equivalence_random():
    rng = random.Random(2024)
    for _ in range(200):
        pres = random_presentation(rng)
        rep = longest_pieces(pres)
        assert [x.p for x in rep.per_relator] == brute_pieces(pres.relators)


@settings(max_examples=60, deadline=None)
@given(st.lists(cyclic_words(LETTERS2, 1, 10), min_size=1, max_size=3), st.integers(0, 9), st.booleans())
def test_p_invariant_under_rotation_inversion(rels, k, inv):
    try:
        pres = make(rels, "ab")
    except PresentationError:
        return
    base = [x.p for x in longest_pieces(pres).per_relator]
    new = list(rels)
    new[0] = rotate(invert(rels[0]) if inv else rels[0], k)
    assert [x.p for x in longest_pieces(make(new, "ab")).per_relator] == base


@settings(max_examples=60, deadline=None)
@given(st.lists(cyclic_words(LETTERS3, 1, 10), min_size=1, max_size=3))
def test_piece_inverse_is_piece(rels):
    try:
        pres = make(rels)
    except PresentationError:
        return
    view = SymmetrizedView(pres)
    for r in longest_pieces(pres).per_relator:
        if r.p:
            assert view.is_piece(r.piece)
            assert view.is_piece(invert(r.piece))


@settings(max_examples=40, deadline=None)
@given(st.lists(cyclic_words(LETTERS3, 1, 10), min_size=1, max_size=3), st.integers(1, 6), st.integers(1, 6))
def test_sc_monotone_in_lambda(rels, a, b):
    try:
        pres = make(rels)
    except PresentationError:
        return
    lo, hi = sorted([Fraction(1, a + 1), Fraction(1, b + 1)])
    rep = longest_pieces(pres)
    r_lo = check_small_cancellation(pres, lo, rep)
    r_hi = check_small_cancellation(pres, hi, rep)
    if r_lo.holds:
        assert r_hi.holds
    assert r_lo.holds == (rep.lambda_star < lo) == (not r_lo.violations)


def test_lambda_range():
    with pytest.raises(ValueError):
        check_small_cancellation(make([(1, 2)]), 0)


def test_max_power_arc_examples():
    arc = max_power_arc(CyclicWord((1, 1, 1, 2, 1, 1, 1, 1)))
    assert arc.root == (1,) and arc.exponent == 7
    arc = max_power_arc(CyclicWord((1, 2) * 3))
    assert arc.root in ((1, 2), (2, 1)) and arc.exponent == 3
    assert max_power_arc(CyclicWord((1, 2, 3))).exponent == 1


@settings(max_examples=80, deadline=None)
@given(cyclic_words(LETTERS2, 1, 12), st.integers(0, 11), st.booleans())
def test_max_power_arc_oracle_and_invariance(w, k, inv):
    arc = max_power_arc(CyclicWord(w))
    assert arc.exponent == brute_max_power(w)
    from scg.words import primitive_root

    assert primitive_root(arc.root)[1] == 1
    t = (w + w)[arc.start: arc.start + arc.length]
    assert t == arc.root * arc.exponent
    other = rotate(invert(w) if inv else w, k)
    assert max_power_arc(CyclicWord(other)).exponent == arc.exponent


def test_json_roundtrip(tmp_path):
    pres = Presentation.from_strings(["a", "b"], ["a b a' b'", "a^3 b^2"])
    path = tmp_path / "p.json"
    import json

    path.write_text(json.dumps(pres.to_json()))
    again = Presentation.load(path)
    assert again.relators == pres.relators
    assert again.alphabet == pres.alphabet
