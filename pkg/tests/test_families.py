import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import has_cube
from scg.families import (
    FamilyError,
    FamilySpec,
    Slot,
    countable_sequence,
    enumerate_relators,
    family_presentation,
    gen_commutator,
    gen_countable,
    gen_glnc,
    gen_glnc_super,
    gen_quadratic,
    gen_tm_g,
    glnc_super_lengths,
    glnc_words,
    load_spec,
    make_spec,
    parse_range,
    quadratic_length,
    reduced_bc_words,
    surface_generators,
    template_g,
    thue_morse,
    tm_bit,
    x_word,
)
from scg.presentation import check_small_cancellation, longest_pieces, max_power_arc
from scg.words import Alphabet, free_reduce, invert, is_cyclically_reduced, multiply


def test_thue_morse_prefix_and_recurrence():
    t = thue_morse(4096)
    assert Alphabet(["a", "b"]).format(t[:8], compact=True) == "abbabaab"
    for k in range(2048):
        assert t[2 * k] == t[k]
        assert t[2 * k + 1] != t[k]


def test_thue_morse_cube_free():
    assert not has_cube(thue_morse(4096))
    assert has_cube((1, 2, 1, 2, 1, 2))


def test_thue_morse_rejects_bad_length():
    with pytest.raises(FamilyError):
        thue_morse(0)


def test_tm_g_shape():
    g = gen_tm_g(2)
    # (b^3 w_4 .. w_7)^2 with 1-based letters w_i = tm_bit(i-1)
    block = (2, 2, 2) + tuple(2 if tm_bit(i - 1) else 1 for i in range(4, 8))
    assert g == free_reduce(block * 2)


def test_reduced_bc_words_order_and_count():
    ws = list(reduced_bc_words(2))
    assert len(ws) == 4 * 3
    assert ws[0] == (2, 2) and ws[1] == (2, 3)
    assert len(set(reduced_bc_words(5))) == 4 * 3 ** 4
    assert all(free_reduce(w) == w for w in ws)


@pytest.mark.parametrize("k", [7, 8])
def test_glnc_length_and_words(k):
    r = gen_glnc(k)
    assert len(r) == (16 * k + 17) * 2 ** k
    assert r.letters[: 2 ** k] == (1,) * 2 ** k
    ws = glnc_words(k)
    assert len(ws) == 2 ** (k + 4) and len(set(ws)) == len(ws)


def test_glnc_pieces_bound():
    pres = family_presentation(make_spec("glnc", "7..8"))
    rep = longest_pieces(pres)
    for i, k in enumerate((7, 8)):
        assert rep.p(i) <= 2 ** k + k + 1
    assert check_small_cancellation(pres, Fraction(1, 6), rep).holds


@pytest.mark.parametrize("k", [5, 6])
def test_glnc_super(k):
    rels, names = gen_glnc_super(k)
    assert len(rels) == 2 ** k
    lo, hi = glnc_super_lengths(k)
    assert all(lo <= len(r) <= hi for r in rels)
    assert all(len(r) >= 16 * (k + 1) for r in rels)
    assert all(is_cyclically_reduced(r) for r in rels)
    assert len(names) == k * (2 ** k - 1)
    assert x_word(k, 0) == () and x_word(k, 2 ** k) == ()
    pres = family_presentation(make_spec("glnc_super", f"{k}..{k}"))
    rep = longest_pieces(pres)
    assert max(x.p for x in rep.per_relator) <= 2 * k + 1
    assert check_small_cancellation(pres, Fraction(1, 8), rep).holds


def test_glnc_super_symbols_disjoint_across_levels():
    _, n5 = gen_glnc_super(5)
    _, n6 = gen_glnc_super(6)
    assert not set(n5) & set(n6)


def test_quadratic():
    assert len(gen_quadratic(12)) == 3950 == quadratic_length(12)
    for n in (12, 13, 14):
        arc = max_power_arc(gen_quadratic(n))
        assert arc.root == (2,) and arc.exponent == (n + 1) ** 2
    with pytest.raises(FamilyError):
        gen_quadratic(11)


@pytest.mark.parametrize("n", [12, 13])
def test_commutator_identity(n):
    g = template_g(n, Slot("ceil_sqrt"))
    assert g == (1,) * n + (2,) * math.isqrt(n - 1) + (2,) + (-1,) * n
    rel = gen_commutator(g, n, n)
    s = surface_generators(g, n)
    prod = ()
    for i in range(n):
        prod = multiply(prod, s[i], s[n + i], invert(s[i]), invert(s[n + i]))
    assert free_reduce(rel.linear + invert(prod)) == ()
    # the cyclic core is a conjugate of the linear word
    assert free_reduce(rel.conjugator + rel.core.letters + invert(rel.conjugator)) == rel.linear
    assert len(rel.core) >= n * (3 * n + 4 * len(g))


def test_commutator_needs_large_f():
    with pytest.raises(FamilyError):
        gen_commutator((1, 2), 5, 1)


def test_countable_sequence():
    seq = countable_sequence(8, Slot("const", 1), Slot("ceil_sqrt"))
    assert seq == [36, 49, 64, 81, 100, 121]
    rel = gen_countable(4, seq=seq)
    assert rel.n == 49 and rel.l == 7
    assert len(rel.word) == 7 + 98
    assert rel.symbols[0] == "y73"


def test_slots():
    assert Slot.parse("const:3")(100) == 3
    assert Slot.parse("ceil_sqrt")(17) == 5
    assert Slot.parse("floor_log2")(17) == 4
    assert Slot.parse({"name": "table", "arg": [4, 5, 6]})(1) == 5
    with pytest.raises(FamilyError):
        Slot.parse("bogus")


def test_spec_json_roundtrip(tmp_path):
    spec = make_spec("commutator", "12..16", f="identity")
    again = FamilySpec.from_json(spec.to_json())
    assert again == spec
    p = tmp_path / "spec.json"
    p.write_text('{"kind": "quadratic", "range": "12..14"}')
    assert load_spec(p) == make_spec("quadratic", "12..14")
    assert parse_range("12..") == (12, None)
    with pytest.raises(FamilyError):
        FamilySpec.from_json({"kind": "quadratic", "colour": 1})
    with pytest.raises(FamilyError):
        FamilySpec("nope")


def test_enumerate_by_length_is_a_prefix():
    spec = make_spec("quadratic", "12..")
    assert len(enumerate_relators(spec, 20)) == 0
    w1 = enumerate_relators(spec, quadratic_length(13))
    assert w1.indices == (12, 13)
    w2 = enumerate_relators(spec, quadratic_length(14) - 1)
    assert w2.indices == (12, 13)


def test_unbounded_family_needs_bound():
    with pytest.raises(FamilyError):
        family_presentation(make_spec("quadratic", "12.."))


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=12, max_value=40))
def test_quadratic_length_formula(n):
    assert quadratic_length(n) == sum(1 + j for j in range(n * n + 1, (n + 1) ** 2 + 1))
