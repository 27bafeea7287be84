"""Ising module against independent per-configuration enumeration oracles."""

import itertools
import math

import numpy as np
import pytest

from fcqbm import ising
from fcqbm.ising import IsingModel


# Oracle helpers: deliberately loop-based and independent of the vectorized
# production code.

def oracle_energy(b, w, x):
    e = 0.0
    n = len(x)
    for i in range(n):
        e += b[i] * x[i]
        for j in range(i + 1, n):
            e += w[i, j] * x[i] * x[j]
    return e


def oracle_all(b, w):
    n = len(b)
    energies = {}
    for bits in itertools.product([0, 1], repeat=n):
        x = tuple(1 - 2 * t for t in bits)
        idx = int("".join(map(str, bits)), 2)
        energies[idx] = oracle_energy(b, w, x)
    return energies


def random_model(rng, n=4):
    b = rng.uniform(-1, 1, n)
    w = np.triu(rng.uniform(-1, 1, (n, n)), 1)
    return IsingModel(n, b, w)


def test_energy_hand_case():
    m = IsingModel(4, np.array([0.1, 0.2, 0.3, 0.4]), np.triu(np.full((4, 4), 0.05), 1))
    assert ising.energy(m, np.ones(4)) == pytest.approx(1.3)


def test_energy_zero_model_is_zero_everywhere():
    m = IsingModel.zeros(4)
    for k in range(16):
        assert ising.energy(m, ising.index_to_spins(k, 4)) == 0.0


def test_energy_matches_enumeration_oracle():
    rng = np.random.default_rng(3)
    for _ in range(10):
        m = random_model(rng)
        expect = oracle_all(m.b, m.w)
        for idx, e in expect.items():
            assert ising.energy(m, ising.index_to_spins(idx, 4)) == pytest.approx(e, abs=1e-12)
        np.testing.assert_allclose(ising.all_energies(m), [expect[k] for k in range(16)],
                                   atol=1e-12)


def test_spin_bitstring_mapping():
    assert ising.spins_to_bitstring(np.array([1, 1, 1, 1])) == "0000"
    assert ising.spins_to_bitstring(np.array([-1, 1, 1, -1])) == "1001"
    for k in range(16):
        s = ising.index_to_spins(k, 4)
        assert ising.spins_to_index(s) == k
        assert np.array_equal(ising.bitstring_to_spins(ising.spins_to_bitstring(s)), s)


def test_bitstring_validation():
    with pytest.raises(ValueError):
        ising.bitstring_to_spins("10a1")
    with pytest.raises(ValueError):
        ising.energy(IsingModel.zeros(2), np.array([1, 0]))


def test_partition_function_closed_forms():
    assert ising.partition_function(IsingModel.zeros(4)) == pytest.approx(16.0)
    b0 = 0.37
    m1 = IsingModel(1, np.array([b0]), np.zeros((1, 1)))
    assert ising.partition_function(m1) == pytest.approx(2 * math.cosh(b0), rel=1e-12)


def test_partition_function_matches_oracle():
    rng = np.random.default_rng(5)
    for _ in range(10):
        m = random_model(rng)
        z = sum(math.exp(-e) for e in oracle_all(m.b, m.w).values())
        assert ising.partition_function(m) == pytest.approx(z, rel=1e-12)


def test_boltzmann_distribution_against_oracle():
    rng = np.random.default_rng(7)
    for _ in range(10):
        m = random_model(rng)
        expect = oracle_all(m.b, m.w)
        z = sum(math.exp(-e) for e in expect.values())
        p = ising.boltzmann_distribution(m)
        assert p.sum() == pytest.approx(1.0, abs=1e-12)
        for idx in range(16):
            assert p[idx] == pytest.approx(math.exp(-expect[idx]) / z, rel=1e-11)


def test_boltzmann_uniform_and_saturated():
    np.testing.assert_allclose(ising.boltzmann_distribution(IsingModel.zeros(4)), 1 / 16)
    m = IsingModel(1, np.array([-10.0]), np.zeros((1, 1)))
    # strongly negative bias favours spin +1 (bit 0)
    assert ising.boltzmann_distribution(m)[0] >= 1 - 1e-8


def test_ground_states():
    all_tie = ising.ground_states(IsingModel.zeros(3))
    assert len(all_tie) == 8
    m = IsingModel(4, np.ones(4), np.zeros((4, 4)))
    gs = ising.ground_states(m)
    assert len(gs) == 1
    assert ising.spins_to_bitstring(gs[0]) == "1111"
    assert ising.energy(m, gs[0]) == pytest.approx(-4.0)


def test_ground_states_match_oracle_on_frustrated_models():
    rng = np.random.default_rng(11)
    for _ in range(10):
        m = random_model(rng)
        expect = oracle_all(m.b, m.w)
        lo = min(expect.values())
        want = sorted(k for k, e in expect.items() if abs(e - lo) <= 1e-12)
        got = sorted(ising.spins_to_index(s) for s in ising.ground_states(m))
        assert got == want


def test_exact_moments_symmetry_and_closed_form():
    first, second = ising.exact_moments(IsingModel.zeros(4))
    np.testing.assert_allclose(first, 0.0, atol=1e-15)
    np.testing.assert_allclose(second - np.eye(4), 0.0, atol=1e-15)
    t = 0.83
    m1 = IsingModel(1, np.array([t]), np.zeros((1, 1)))
    f1, _ = ising.exact_moments(m1)
    assert f1[0] == pytest.approx(-math.tanh(t), rel=1e-12)


def test_exact_moments_match_oracle():
    rng = np.random.default_rng(13)
    for _ in range(5):
        m = random_model(rng)
        expect = oracle_all(m.b, m.w)
        z = sum(math.exp(-e) for e in expect.values())
        first = np.zeros(4)
        second = np.zeros((4, 4))
        for idx, e in expect.items():
            x = ising.index_to_spins(idx, 4).astype(float)
            wgt = math.exp(-e) / z
            first += wgt * x
            second += wgt * np.outer(x, x)
        got1, got2 = ising.exact_moments(m)
        np.testing.assert_allclose(got1, first, atol=1e-12)
        np.testing.assert_allclose(got2, second, atol=1e-12)


def test_energy_invariant_under_node_relabeling():
    rng = np.random.default_rng(17)
    for _ in range(10):
        m = random_model(rng)
        perm = rng.permutation(4)  # node i of m becomes node perm[i]
        bp = np.zeros(4)
        wp = np.zeros((4, 4))
        for i in range(4):
            bp[perm[i]] = m.b[i]
            for j in range(i + 1, 4):
                a, c = sorted((perm[i], perm[j]))
                wp[a, c] += m.w[i, j]
        mp = IsingModel(4, bp, wp)
        x = rng.choice([-1, 1], 4)
        xp = np.empty(4, dtype=int)
        for i in range(4):
            xp[perm[i]] = x[i]
        assert ising.energy(m, x) == pytest.approx(ising.energy(mp, xp), abs=1e-12)


def test_argmax_of_distribution_is_ground_state():
    rng = np.random.default_rng(19)
    for _ in range(10):
        m = random_model(rng)
        p = ising.boltzmann_distribution(m)
        gs = {ising.spins_to_index(s) for s in ising.ground_states(m)}
        assert int(np.argmax(p)) in gs


def test_log_z_convexity_spot_check():
    rng = np.random.default_rng(23)
    m = random_model(rng)
    h = 1e-3
    for which in range(4):
        def logz(delta, i=which):
            b = m.b.copy()
            b[i] += delta
            return math.log(ising.partition_function(m.with_params(b, m.w)))
        second_diff = (logz(h) - 2 * logz(0.0) + logz(-h)) / h**2
        assert second_diff >= -1e-8


def test_enumeration_guard():
    big = IsingModel.zeros(21)
    with pytest.raises(ValueError):
        ising.partition_function(big)
