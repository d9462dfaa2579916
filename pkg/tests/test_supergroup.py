from fractions import Fraction

import pytest

from scg.families import family_presentation, make_spec
from scg.presentation import Presentation
from scg.saturation import sat_word
from scg.supergroup import (
    BLUE,
    RED,
    WHITE,
    ColoredCycle,
    FreshSymbols,
    PigeonholeExhausted,
    SupergroupError,
    build_supergroup,
    choose_constants,
    color_cycle,
    cycles_to_dot,
    split_cycle,
    verify_supergroup,
)
from scg.words import Alphabet, CyclicWord


@pytest.fixture(scope="module")
def glnc_window():
    return family_presentation(make_spec("glnc", "7..8"))


@pytest.fixture(scope="module")
def glnc_result(glnc_window):
    return build_supergroup(glnc_window, (1,))


def test_colors_follow_coverage():
    c = color_cycle((1, 1, 1, 2, 1, 1, 1, 1), (1,), 4)
    # the arc a^4 wraps around into a^3
    assert c.colors == "RRRBRRRR"
    assert c.red_runs() == [(4, 7)]


def test_red_runs_wrap():
    c = ColoredCycle((1,) * 6, "RRBBRR")
    assert c.red_runs() == [(4, 4)]
    assert ColoredCycle((1,) * 3, "RRR").red_runs() == [(0, 3)]


def test_fresh_symbols_skip_existing():
    fresh = FreshSymbols(Alphabet(["a", "y3"]))
    names, letters = fresh.take(2)
    assert names == ["y4", "y5"]
    assert letters == (3, 4)


def test_constants_glnc(glnc_window):
    par = choose_constants(glnc_window, (1,))
    assert par.m == 32
    assert par.m > 12 * par.D
    assert par.D == Fraction(51, 29)


def test_constants_outgrow_relators():
    # a^64 b is saturated until m passes its length
    pres = Presentation(Alphabet(["a", "b"]), (CyclicWord((1,) * 64 + (2,)),))
    par = choose_constants(pres, (1,))
    assert par.m == 128 and par.D == 0


def test_constants_empty_window():
    with pytest.raises(SupergroupError):
        choose_constants(Presentation(Alphabet(["a"]), ()), (1,))


def test_glnc_supergroup_passes(glnc_result):
    rep = verify_supergroup(glnc_result)
    assert rep.passed, rep.to_json()
    assert [c.name for c in rep.checks] == ["small_cancellation", "power_free", "reconstruction", "d_cycle_length"]
    assert glnc_result.l == 1 + glnc_result.params.m
    for s in glnc_result.splits:
        assert all(len(d) >= 7 * s.p for d in s.d_cycles)
        # no red run of length m survives in the final remainder
        assert all(n < glnc_result.params.m for _, n in s.d_cycles[-1].red_runs())


def test_fresh_names_are_sequential(glnc_result):
    names = glnc_result.fresh
    assert names == [f"y{i}" for i in range(1, len(names) + 1)]


def test_mutation_short_alpha(glnc_window):
    res = build_supergroup(glnc_window, (1,), alpha_length=lambda p: p - 1)
    rep = verify_supergroup(res)
    assert not rep.passed
    failed = {c.name for c in rep.checks if not c.passed}
    assert "d_cycle_length" in failed


def test_mutation_window_size(glnc_window):
    res = build_supergroup(glnc_window, (1,), window_factor=5)
    rep = verify_supergroup(res)
    failed = {c.name for c in rep.checks if not c.passed}
    assert {"small_cancellation", "d_cycle_length"} <= failed


def test_mutation_wrong_exponent(glnc_result):
    bad = type(glnc_result)(**{**glnc_result.__dict__, "l": 2})
    rep = verify_supergroup(bad)
    assert [c.name for c in rep.checks if not c.passed] == ["power_free"]


def test_quadratic_supergroup_trivial():
    win = family_presentation(make_spec("quadratic", "12..16"))
    res = build_supergroup(win, (2,))
    assert res.params.m == 512 and res.params.D == 0
    assert all(not s.steps for s in res.splits)
    assert verify_supergroup(res).passed


def test_pigeonhole_error():
    c = ColoredCycle((1,) * 8, RED * 8)
    with pytest.raises(PigeonholeExhausted):
        split_cycle(c, 4, 2, FreshSymbols(Alphabet(["a"])))


def test_split_reconstructs_by_hand():
    letters = (1,) * 4 + (2, 3) * 20
    c = ColoredCycle(letters, RED * 4 + BLUE * 40)
    fresh = FreshSymbols(Alphabet(["a", "b", "c"]))
    res = split_cycle(c, 4, 1, fresh)
    assert len(res.d_cycles) == 2
    d, rest = res.d_cycles
    assert d.colors.endswith(WHITE) and rest.colors.startswith(WHITE)
    assert len(d) == 7 and len(rest) == 39


def test_dot_export(glnc_result):
    text = cycles_to_dot(glnc_result.d_cycles()[:1], glnc_result.alphabet)
    assert text.startswith("digraph") and "dashed" in text


def test_report_json(glnc_result):
    data = glnc_result.to_json()
    assert data["params"]["D"] == {"num": 51, "den": 29}
    assert data["l"] == 33
