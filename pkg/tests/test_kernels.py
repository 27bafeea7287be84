"""Compiled and pure-numpy kernels must agree bit-for-bit in behaviour."""

import numpy as np
import pytest

from fcqbm import _kernels_py as kpy

try:
    from fcqbm import _kernels as kc
except ImportError:
    kc = None

needs_compiled = pytest.mark.skipif(kc is None, reason="compiled kernels unavailable")


def random_state(rng, n):
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return (v / np.linalg.norm(v)).astype(np.complex128)


def random_rho(rng, n):
    dim = 1 << n
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return (rho / np.trace(rho)).astype(np.complex128)


@needs_compiled
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_statevector_kernels_match(n):
    rng = np.random.default_rng(7 + n)
    for _ in range(20):
        s1 = random_state(rng, n)
        s2 = s1.copy()
        q = int(rng.integers(n))
        theta = float(rng.uniform(-6, 6))
        op = rng.choice(["h", "rx", "rz"])
        getattr(kc, f"apply_{op}_sv")(*((s1, q, n) if op == "h" else (s1, theta, q, n)))
        getattr(kpy, f"apply_{op}_sv")(*((s2, q, n) if op == "h" else (s2, theta, q, n)))
        np.testing.assert_allclose(s1, s2, atol=1e-14)
        if n >= 2:
            q2 = int((q + 1 + rng.integers(n - 1)) % n)
            kc.apply_rzz_sv(s1, theta, q, q2, n)
            kpy.apply_rzz_sv(s2, theta, q, q2, n)
            np.testing.assert_allclose(s1, s2, atol=1e-14)
        np.testing.assert_allclose(kc.probs_sv(s1), kpy.probs_sv(s2), atol=1e-14)


@needs_compiled
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_density_kernels_match(n):
    rng = np.random.default_rng(17 + n)
    for _ in range(15):
        r1 = random_rho(rng, n)
        r2 = r1.copy()
        q = int(rng.integers(n))
        theta = float(rng.uniform(-6, 6))
        p = float(rng.uniform(0, 1))
        op = rng.choice(["h", "rx", "rz"])
        getattr(kc, f"apply_{op}_dm")(*((r1, q, n) if op == "h" else (r1, theta, q, n)))
        getattr(kpy, f"apply_{op}_dm")(*((r2, q, n) if op == "h" else (r2, theta, q, n)))
        np.testing.assert_allclose(r1, r2, atol=1e-14)
        kc.depolarize_1q(r1, q, p, n)
        kpy.depolarize_1q(r2, q, p, n)
        np.testing.assert_allclose(r1, r2, atol=1e-14)
        if n >= 2:
            q2 = int((q + 1 + rng.integers(n - 1)) % n)
            kc.apply_rzz_dm(r1, theta, q, q2, n)
            kpy.apply_rzz_dm(r2, theta, q, q2, n)
            np.testing.assert_allclose(r1, r2, atol=1e-14)
            kc.depolarize_2q(r1, q, q2, p, n)
            kpy.depolarize_2q(r2, q, q2, p, n)
            np.testing.assert_allclose(r1, r2, atol=1e-14)
        np.testing.assert_allclose(kc.probs_dm(r1), kpy.probs_dm(r2), atol=1e-14)


@needs_compiled
@pytest.mark.parametrize("mixed", [0, 1])
@pytest.mark.parametrize("scheme", [0, 1, 2])
def test_fused_circuit_matches(mixed, scheme):
    if not mixed and scheme != 0:
        pytest.skip("noise requires the mixed backend")
    rng = np.random.default_rng(29)
    n = 4
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    pa = np.array([a for a, _ in pairs], dtype=np.int64)
    pb = np.array([b for _, b in pairs], dtype=np.int64)
    for p_layers in (1, 2):
        b = rng.uniform(-1, 1, n)
        w = rng.uniform(-1, 1, len(pairs))
        beta = rng.uniform(-1, 1, p_layers)
        gamma = rng.uniform(-1, 1, p_layers)
        for shift in [(0, -1, -1, 0.0), (1, 0, 2, np.pi / 2), (2, 0, 1, -np.pi / 2),
                      (3, p_layers - 1, 4, np.pi / 2)]:
            args = (n, b, w, pa, pb, beta, gamma, 0.005, 0.02, scheme, mixed) + shift
            np.testing.assert_allclose(
                kc.qaoa_probabilities(*args), kpy.qaoa_probabilities(*args),
                atol=1e-13)
