import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heisenbrick.errors import ComputationError, InputError, ResourceError
from heisenbrick.fp import (
    ResidueSet,
    cyclic_convolve,
    dft,
    dft_indicator,
    dilate,
    inverse_dft,
    prime_field,
    product_count_table,
    set_from_json,
    sumset,
)

F5 = prime_field(5)
F7 = prime_field(7)


def S(F, *vals):
    return ResidueSet.from_iterable(F, vals)


def subsets(F, nonzero=False):
    lo = 1 if nonzero else 0
    return st.sets(st.integers(lo, F.p - 1)).map(lambda v: ResidueSet.from_iterable(F, v))


# -- field -------------------------------------------------------------------


@pytest.mark.parametrize("p", [3, 5, 7, 101, 9973])
def test_inverse_table(p):
    F = prime_field(p)
    for a in range(1, p):
        assert a * F.inverse_table[a] % p == 1


@pytest.mark.parametrize("p", [0, 1, 2, 4, 9, 15])
def test_bad_modulus(p):
    with pytest.raises(InputError):
        prime_field(p)


def test_field_cap():
    with pytest.raises(ResourceError):
        prime_field(10007)
    assert prime_field(10007, max_prime=20000).p == 10007


# -- sumset --------------------------------------------------------------------


def test_sumset_example():
    # pairs: 1+2, 1+3, 2+2, 2+3
    assert sumset(S(F5, 1, 2), S(F5, 2, 3)) == S(F5, 0, 3, 4)


def test_sumset_empty_and_full():
    assert sumset(ResidueSet.empty(F7), S(F7, 1, 2)) == ResidueSet.empty(F7)
    assert sumset(S(F7, 0), ResidueSet.full(F7)).is_full()


def test_sumset_field_mismatch():
    with pytest.raises(InputError):
        sumset(S(F5, 1), S(F7, 1))


@given(subsets(F7), subsets(F7))
def test_sumset_matches_pairs(a, b):
    assert set(sumset(a, b)) == {(x + y) % 7 for x in a for y in b}


@given(subsets(prime_field(13)), subsets(prime_field(13)))
def test_cauchy_davenport_p13(a, b):
    if a and b:
        assert len(sumset(a, b)) >= min(13, len(a) + len(b) - 1)


def test_cauchy_davenport_exhaustive_p5():
    sets = [ResidueSet(F5, bits) for bits in range(1, 32)]
    for a, b in itertools.product(sets, repeat=2):
        s = sumset(a, b)
        assert len(s) >= min(5, len(a) + len(b) - 1)
        if len(a) + len(b) > 5:
            assert s.is_full()


# -- dilate ----------------------------------------------------------------------


def test_dilate():
    assert dilate(S(F5, 1, 3), 2) == S(F5, 1, 2)
    a = S(F7, 2, 3, 6)
    assert dilate(a, 1) == a
    for lam in range(1, 7):
        assert dilate(ResidueSet.units(F7), lam) == ResidueSet.units(F7)
    with pytest.raises(InputError):
        dilate(a, 7)


@given(subsets(F7), st.integers(1, 6))
def test_dilate_preserves_size(a, lam):
    assert len(dilate(a, lam)) == len(a)


# -- product counts ----------------------------------------------------------------


def test_product_count_table_example():
    r = product_count_table(S(F5, 1, 2), S(F5, 1, 3))
    assert r.tolist() == [0, 2, 1, 1, 0]


def test_product_count_table_edges():
    assert product_count_table(S(F5, 1), S(F5, 1)).tolist() == [0, 1, 0, 0, 0]
    assert product_count_table(ResidueSet.units(F7), S(F7, 1)).tolist() == [0] + [1] * 6
    with pytest.raises(InputError):
        product_count_table(S(F5, 0, 1), S(F5, 1))


@given(subsets(F7, nonzero=True), subsets(F7, nonzero=True))
def test_product_count_table_sum(x, y):
    r = product_count_table(x, y)
    assert r.sum() == len(x) * len(y)
    support = {(a * b) % 7 for a in x for b in y}
    assert set(np.flatnonzero(r).tolist()) == support


# -- dft -----------------------------------------------------------------------------


def test_dft_delta_and_full():
    assert np.allclose(dft_indicator(S(F7, 0)).values, 1)
    spec = dft_indicator(ResidueSet.full(F7)).values
    assert spec[0] == 7
    assert np.allclose(spec[1:], 0)


def test_dft_small_example():
    spec = dft_indicator(S(F5, 1, 2))
    assert spec.values[0] == 2
    assert spec.parseval_sum() == pytest.approx(10, rel=1e-12)
    # direct evaluation of sum_x A(x) exp(2 pi i x r / 5)
    direct = [np.exp(2j * np.pi * r / 5) + np.exp(4j * np.pi * r / 5) for r in range(5)]
    assert np.allclose(spec.values, direct)


@settings(max_examples=50)
@given(st.sampled_from([3, 5, 11, 31, 101]), st.data())
def test_dft_roundtrip_and_parseval(p, data):
    F = prime_field(p)
    a = data.draw(subsets(F))
    spec = dft_indicator(a)
    assert spec.values[0] == len(a)
    assert abs(spec.parseval_sum() - p * len(a)) <= 1e-6 * max(1, p * len(a))
    assert np.abs(spec.inverse() - a.indicator()).max() <= 1e-9


# -- convolution ---------------------------------------------------------------------


def test_convolution_examples():
    g = np.array([3, 0, 1, 4, 1])
    delta = np.array([1, 0, 0, 0, 0])
    assert cyclic_convolve(delta, g).tolist() == g.tolist()
    got = cyclic_convolve(S(F5, 1, 2).indicator(), S(F5, 2, 3).indicator())
    assert got.tolist() == [1, 0, 0, 1, 2]


def test_convolution_overflow():
    big = np.array([2**40, 0, 0], dtype=np.int64)
    with pytest.raises(ComputationError):
        cyclic_convolve(big, np.array([2**30, 1, 1]))


def test_convolution_rejects_negative():
    with pytest.raises(InputError):
        cyclic_convolve(np.array([1, -1, 0]), np.array([1, 1, 1]))


@settings(max_examples=40)
@given(st.sampled_from([5, 13, 53, 101]), st.data())
def test_convolution_matches_spectral(p, data):
    vec = st.lists(st.integers(0, 50), min_size=p, max_size=p)
    f = np.array(data.draw(vec))
    g = np.array(data.draw(vec))
    exact = cyclic_convolve(f, g)
    assert exact.tolist() == cyclic_convolve(g, f).tolist()
    spectral = inverse_dft(dft(f) * dft(g))
    assert np.abs(spectral - exact).max() <= 1e-6 * max(1, exact.max())


# -- serialization ---------------------------------------------------------------------


def test_set_json_forms():
    assert set_from_json(F7, [3, 1, 1]) == S(F7, 1, 3)
    assert set_from_json(F7, {"lo": 5, "hi": 9}) == S(F7, 5, 6, 0, 1)
    assert set_from_json(F7, {"lo": 0, "hi": 20}).is_full()
    with pytest.raises(InputError):
        set_from_json(F7, {"lo": 3})
    with pytest.raises(InputError):
        set_from_json(F7, [1, "2"])
