import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from leebounds.lee_metric import (
    LeeAlphabet,
    ball_size,
    choose_M,
    choose_M_floor_formula,
    enumerate_sphere,
    lee_weight_ext_symbol,
    lee_weight_symbol,
    lee_weight_word,
    sphere_size,
    sphere_table,
    weight_sum_W,
    weight_sum_W_alt,
    weight_sum_W_approx,
    weight_sum_sorted,
)

ODD_PRIMES = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31]


def sorted_weights(p):
    return sorted(lee_weight_ext_symbol((x, y), p) for x in range(p) for y in range(p))


def fractional_sort_oracle(t, p):
    """Sum of the floor(t) lightest weights plus the fractional part of the next."""
    w = sorted_weights(p)
    k = math.floor(t)
    frac = t - k
    return sum(w[:k]) + (frac * w[k] if k < len(w) else 0)


@pytest.mark.parametrize(
    "x, q, expected",
    [(5, 7, 2), (0, 7, 0), (0, 2, 0), (3, 6, 3), (1, 2, 1)],
)
def test_symbol_weight(x, q, expected):
    assert lee_weight_symbol(x, q) == expected


@pytest.mark.parametrize("x, q", [(-1, 5), (5, 5), (0, 1)])
def test_symbol_weight_rejects_bad_input(x, q):
    with pytest.raises(ValueError):
        lee_weight_symbol(x, q)


def test_alphabet():
    assert LeeAlphabet(6).max_weight == 3
    with pytest.raises(ValueError):
        LeeAlphabet(1)


@pytest.mark.parametrize("z, p, expected", [((0, 0), 7, 0), ((3, 3), 7, 6), ((6, 1), 7, 2)])
def test_ext_symbol_weight(z, p, expected):
    assert lee_weight_ext_symbol(z, p) == expected


def test_ext_symbol_out_of_range():
    with pytest.raises(ValueError):
        lee_weight_ext_symbol((7, 0), 7)


@pytest.mark.parametrize("word, q, expected", [([], 5, 0), ([1, 6, 0], 7, 2), ([3, 3, 3], 6, 9)])
def test_word_weight(word, q, expected):
    assert lee_weight_word(word, q) == expected


@given(st.integers(2, 60).flatmap(lambda q: st.tuples(st.just(q), st.lists(st.integers(0, q - 1), max_size=20))))
def test_word_weight_bounded_and_zero_only_for_zero_word(data):
    q, word = data
    w = lee_weight_word(word, q)
    assert w <= len(word) * (q // 2)
    assert (w == 0) == all(x == 0 for x in word)


def test_figure2_examples():
    assert sphere_size(1, 7) == 4
    assert sphere_size(5, 7) == 8
    assert ball_size(3, 7) == 25
    assert ball_size(6, 7) == 49
    assert weight_sum_W(25, 7) == 56


def test_small_cases():
    assert sphere_size(0, 11) == 1
    assert ball_size(0, 11) == 1
    assert weight_sum_W(1, 5) == 0
    assert weight_sum_W(4.5, 3) == pytest.approx(3.5, abs=1e-15)
    assert weight_sum_W(4.5, 3) == pytest.approx(fractional_sort_oracle(4.5, 3), abs=1e-15)


@pytest.mark.parametrize("p", ODD_PRIMES)
def test_sphere_sizes_match_enumeration(p):
    for j in range(p):
        pts = enumerate_sphere(j, p)
        assert len(pts) == len(set(pts)) == sphere_size(j, p)


@pytest.mark.parametrize("p", ODD_PRIMES)
def test_ball_is_cumulative_sphere(p):
    total = 0
    for M in range(p):
        total += sphere_size(M, p)
        assert ball_size(M, p) == total
    assert ball_size(p - 1, p) == p * p


def test_enumerate_sphere_radius_one():
    assert set(enumerate_sphere(1, 7)) == {(1, 0), (6, 0), (0, 1), (0, 6)}
    assert enumerate_sphere(0, 5) == [(0, 0)]
    assert len(enumerate_sphere(6, 7)) == 4


@pytest.mark.parametrize("bad", [-1, 7])
def test_radius_out_of_range(bad):
    for fn in (sphere_size, ball_size, enumerate_sphere):
        with pytest.raises(ValueError):
            fn(bad, 7)


@pytest.mark.parametrize("p", [2, 4, 9, 1])
def test_rejects_non_odd_prime(p):
    with pytest.raises(ValueError):
        sphere_table(p)


def test_table_invariants():
    for p in [p for p in range(3, 200) if all(p % d for d in range(2, p))]:
        tab = sphere_table(p)
        assert tab.S[0] == 1 and sum(tab.S) == p * p
        assert all(b > a for a, b in zip(tab.B, tab.B[1:]))
        assert tab.Wb[p - 1] == p * (p - 1) * (p + 1) // 2


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_W_matches_sorting_oracle_on_integers(p):
    w = sorted_weights(p)
    prefix = np.cumsum([0] + w)
    for t in range(1, p * p + 1):
        assert weight_sum_W(t, p) == prefix[t]
        assert weight_sum_sorted(t, p) == prefix[t]


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_second_closed_form_agrees(p):
    for t in range(1, p * p + 1):
        assert weight_sum_W_alt(t, p) == weight_sum_W(t, p)
    for t in (Fraction(3, 2), Fraction(p * p, 3)):
        assert weight_sum_W_alt(t, p) == weight_sum_W(t, p)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_W_real_arguments_against_oracle(p):
    for t in np.linspace(1, p * p, 257):
        assert weight_sum_W(float(t), p) == pytest.approx(fractional_sort_oracle(float(t), p), abs=1e-9)


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_W_continuous_nondecreasing(p):
    ts = np.linspace(1, p * p, 5001)
    ws = np.array([weight_sum_W(float(t), p) for t in ts])
    assert (np.diff(ws) >= -1e-12).all()
    tab = sphere_table(p)
    for M in range(1, p):
        b = tab.B[M]
        assert weight_sum_W(b - 1e-9, p) == pytest.approx(weight_sum_W(b, p), abs=1e-6)


def test_W_approx_values():
    assert weight_sum_W_approx(1) == 0
    assert weight_sum_W_approx(5) == pytest.approx(4)
    assert weight_sum_W_approx(13) == pytest.approx(20)
    with pytest.raises(ValueError):
        weight_sum_W_approx(0.5)


@pytest.mark.parametrize("p", [5, 7, 11])
def test_W_approx_interpolates_small_breakpoints(p):
    tab = sphere_table(p)
    for M in range((p - 1) // 2 + 1):
        assert weight_sum_W_approx(tab.B[M]) == pytest.approx(tab.Wb[M], abs=1e-9)


@given(st.sampled_from([3, 5, 7, 11, 13]), st.floats(0, 1))
def test_W_dominates_approx(p, u):
    t = 1 + u * (p * p - 1)
    assert weight_sum_W(t, p) - weight_sum_W_approx(t) >= -1e-12


def test_choose_M_examples():
    assert choose_M(4.5, 3) == 0
    assert choose_M(1, 7) == 0
    for p in (3, 5, 7, 11):
        assert choose_M(p * p, p) == p - 1


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_choose_M_bracket_and_floor_formula(p):
    tab = sphere_table(p)
    for tau in np.linspace(1, p * p, 2001):
        tau = float(tau)
        M = choose_M(tau, p)
        upper = tab.B[M + 1] if M + 1 < p else p * p
        assert tab.B[M] <= tau <= upper
        if tau not in tab.B:
            assert choose_M_floor_formula(tau, p) == M
    for M, b in enumerate(tab.B):
        assert choose_M(b, p) == M
        # at a breakpoint either neighbour is a valid answer
        mf = choose_M_floor_formula(b, p)
        upper = tab.B[mf + 1] if mf + 1 < p else p * p
        assert tab.B[mf] <= b <= upper


def test_W_out_of_range():
    with pytest.raises(ValueError):
        weight_sum_W(0.5, 3)
    with pytest.raises(ValueError):
        weight_sum_W(10, 3)
