import itertools
import math

import numpy as np
import pytest

from heisenbrick.errors import InputError
from heisenbrick.fp import ResidueSet, prime_field
from heisenbrick.sampling import random_sumprod_instances
from heisenbrick.sumprod import (
    SumProdInstance,
    covers_field,
    exact_counts,
    f_spectrum_checks,
    normalized_f,
    positivity_chain,
    solution_profile,
)


def S(p, *vals):
    return ResidueSet.from_iterable(prime_field(p), vals)


def brute_counts(inst):
    """Enumerate every tuple (z_1..z_m, x_1, y_1, ..., x_n, y_n)."""
    p = inst.p
    counts = [0] * p
    pools = [list(inst.z)] * inst.m
    for a, b in zip(inst.xs, inst.ys):
        pools += [list(a), list(b)]
    for combo in itertools.product(*pools):
        zs = combo[: inst.m]
        rest = combo[inst.m :]
        u = sum(zs) + sum(rest[2 * i] * rest[2 * i + 1] for i in range(inst.n))
        counts[u % p] += 1
    return counts


def test_normalized_f_example():
    f = normalized_f(S(5, 1, 2), S(5, 1, 3))
    assert f[1] == 1 and f[2] == 0.5 and f[4] == 0 and f[0] == 0


def test_normalized_f_singleton_dilates():
    y = S(11, 2, 3, 7)
    f = normalized_f(S(11, 4), y)
    assert set(np.flatnonzero(f).tolist()) == {4 * t % 11 for t in y}
    assert np.all((f == 0) | (f == 1))


def test_normalized_f_support_is_product_set():
    rng = np.random.default_rng(1)
    F = prime_field(13)
    for _ in range(50):
        x = ResidueSet.from_iterable(F, rng.choice(np.arange(1, 13), int(rng.integers(1, 13)), replace=False))
        y = ResidueSet.from_iterable(F, rng.choice(np.arange(1, 13), int(rng.integers(1, 13)), replace=False))
        f = normalized_f(x, y)
        assert f.min() >= 0 and f.max() <= 1
        assert set(np.flatnonzero(f).tolist()) == {a * b % 13 for a in x for b in y}


def test_normalized_f_rejects_zero():
    with pytest.raises(InputError):
        normalized_f(S(5, 0, 1), S(5, 1))


def test_spectrum_units():
    p = 11
    units = ResidueSet.units(prime_field(p))
    rep = f_spectrum_checks(units, units)
    assert rep.fhat_zero == pytest.approx(p - 1)
    assert np.allclose(np.abs(rep.fhat[1:]), 1.0)
    assert rep.bound == pytest.approx(math.sqrt(p))


def test_spectrum_bound_random():
    rng = np.random.default_rng(2)
    F = prime_field(31)
    for _ in range(100):
        x = ResidueSet.from_iterable(F, rng.choice(np.arange(1, 31), int(rng.integers(1, 31)), replace=False))
        y = ResidueSet.from_iterable(F, rng.choice(np.arange(1, 31), int(rng.integers(1, 31)), replace=False))
        rep = f_spectrum_checks(x, y)
        assert rep.ok
        assert rep.identity_error < 1e-9
        # Parseval for f
        f = normalized_f(x, y)
        assert np.sum(np.abs(rep.fhat) ** 2) == pytest.approx(31 * np.sum(f**2), rel=1e-9)


def test_profile_single_product():
    inst = SumProdInstance(1, [S(5, 1, 2)], [S(5, 1, 3)], S(5, 0))
    prof = solution_profile(inst)
    assert prof.exact_counts.tolist() == [0, 2, 1, 1, 0]
    assert prof.normalized.tolist() == [0, 1, 0.5, 0.5, 0]


def test_profile_matches_enumeration():
    for inst in random_sumprod_instances(7, 2, 2, 10, seed=3, require_condition=False):
        assert exact_counts(inst).tolist() == brute_counts(inst)
    for inst in random_sumprod_instances(5, 1, 3, 10, seed=4, require_condition=False):
        assert exact_counts(inst).tolist() == brute_counts(inst)


def test_profile_counting_identity():
    for inst in random_sumprod_instances(11, 1, 2, 30, seed=5, require_condition=False):
        prof = solution_profile(inst)
        total = len(inst.z) ** inst.m * math.prod(len(a) * len(b) for a, b in zip(inst.xs, inst.ys))
        assert prof.exact_counts.sum() == total
        assert np.array_equal(prof.exact_counts > 0, prof.normalized > 0)


def test_covers_worked_instance():
    p = 11
    units = ResidueSet.units(prime_field(p))
    inst = SumProdInstance(2, [units], [units], S(p, 0, 1, 2, 3))
    assert inst.condition_margin() == 16 * 100 - 11**3 == 269
    cov = covers_field(inst)
    assert cov.covers and cov.missed is None
    assert all(c > 0 for c in brute_counts(inst))


def test_covers_fails_small():
    inst = SumProdInstance(2, [S(5, 1, 2)], [S(5, 1, 2)], S(5, 0))
    assert not inst.condition_holds()
    cov = covers_field(inst)
    # 2Z + XY = {0} + {1, 2, 4}
    assert not cov.covers
    assert cov.missed == 0
    assert [u for u, c in enumerate(brute_counts(inst)) if c == 0] == [0, 3]


def test_covers_full_z():
    F = prime_field(7)
    for m in (1, 2, 3):
        inst = SumProdInstance(m, [S(7, 3)], [S(7, 5)], ResidueSet.full(F))
        assert covers_field(inst).covers


def test_positivity_chain_matches_condition():
    for inst in random_sumprod_instances(13, 1, 2, 200, seed=6, require_condition=False):
        chain = positivity_chain(inst)
        if abs(chain) > 1e-6:
            assert (chain > 0) == inst.condition_holds()
        if chain > 0:
            assert covers_field(inst).covers


def test_fourier_identity_agrees():
    for inst in random_sumprod_instances(13, 1, 2, 20, seed=7, require_condition=False):
        prof = solution_profile(inst)
        p = inst.p
        scale = 1e-6 * p * np.maximum(1, prof.normalized)
        assert np.all(np.abs(p * prof.normalized - prof.fourier_pS) <= scale)


def test_instance_validation():
    with pytest.raises(InputError):
        SumProdInstance(0, [S(5, 1)], [S(5, 1)], S(5, 0))
    with pytest.raises(InputError):
        SumProdInstance(2, [S(5, 0)], [S(5, 1)], S(5, 0))
