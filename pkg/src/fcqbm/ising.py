"""Fully connected Ising model and exact brute-force quantities.

The parameter set is a bias vector b (length N) plus a strictly
upper-triangular coupling matrix w over all pairs i < j.  Spins take values
in {+1, -1}; spin +1 maps to bit 0 and spin -1 to bit 1, with node 0 as the
most significant bit of the basis index.  All thermodynamic quantities use
unit temperature, and enumeration-based operations are guarded at N <= 20.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

ENUMERATION_GUARD = 20


@dataclass(frozen=True)
class IsingModel:
    n: int
    b: np.ndarray
    w: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.b, dtype=float)
        w = np.asarray(self.w, dtype=float)
        if b.shape != (self.n,):
            raise ValueError(f"b must have shape ({self.n},)")
        if w.shape != (self.n, self.n):
            raise ValueError(f"w must have shape ({self.n}, {self.n})")
        if np.any(np.tril(w) != 0.0):
            raise ValueError("w must be strictly upper-triangular (couplings on i < j only)")
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "w", w)

    @classmethod
    def zeros(cls, n: int) -> "IsingModel":
        return cls(n, np.zeros(n), np.zeros((n, n)))

    def pairs(self):
        return [(i, j) for i in range(self.n) for j in range(i + 1, self.n)]

    def pair_couplings(self) -> np.ndarray:
        return np.array([self.w[i, j] for i, j in self.pairs()])

    def with_params(self, b: np.ndarray, w: np.ndarray) -> "IsingModel":
        return IsingModel(self.n, b, w)


def _check_spins(x: np.ndarray, n: int) -> np.ndarray:
    x = np.asarray(x)
    if x.shape != (n,):
        raise ValueError(f"spin vector must have length {n}")
    if not np.all(np.abs(x) == 1):
        raise ValueError("spins must be exactly +1 or -1")
    return x.astype(np.int8)


def energy(m: IsingModel, spins: np.ndarray) -> float:
    """E(s) = sum_i b_i x_i + sum_{i<j} w_ij x_i x_j."""
    x = _check_spins(spins, m.n)
    return float(m.b @ x + x @ m.w @ x)


def spins_to_index(spins: np.ndarray) -> int:
    """Basis index of a spin configuration (bit is 0 iff the spin is +1)."""
    idx = 0
    for x in np.asarray(spins):
        idx = (idx << 1) | (1 if x == -1 else 0)
    return idx


def index_to_spins(index: int, n: int) -> np.ndarray:
    bits = (index >> np.arange(n - 1, -1, -1)) & 1
    return (1 - 2 * bits).astype(np.int8)


def spins_to_bitstring(spins: np.ndarray) -> str:
    return format(spins_to_index(spins), f"0{len(spins)}b")


def bitstring_to_spins(bits: str) -> np.ndarray:
    if not bits or any(c not in "01" for c in bits):
        raise ValueError(f"malformed bitstring {bits!r}")
    return np.array([1 if c == "0" else -1 for c in bits], dtype=np.int8)


def _guard(n: int) -> None:
    if n > ENUMERATION_GUARD:
        raise ValueError(
            f"enumeration over 2^{n} states exceeds the N <= {ENUMERATION_GUARD} guard")


def spin_table(n: int) -> np.ndarray:
    """All 2^n spin configurations, row k holding the spins of basis index k."""
    _guard(n)
    idx = np.arange(1 << n)
    bits = (idx[:, None] >> np.arange(n - 1, -1, -1)[None, :]) & 1
    return (1 - 2 * bits).astype(np.int8)


def all_energies(m: IsingModel) -> np.ndarray:
    """Energy of every basis state, indexed by basis index."""
    s = spin_table(m.n).astype(float)
    return s @ m.b + np.einsum("ki,ij,kj->k", s, m.w, s)


def partition_function(m: IsingModel) -> float:
    return float(np.sum(np.exp(-all_energies(m))))


def boltzmann_distribution(m: IsingModel) -> np.ndarray:
    """P(s) = exp(-E(s)) / Z over basis indices, at unit temperature."""
    e = all_energies(m)
    p = np.exp(-(e - e.min()))
    return p / p.sum()


def ground_states(m: IsingModel) -> list[np.ndarray]:
    """All spin configurations attaining the minimum energy, ties preserved,
    ordered by basis index."""
    e = all_energies(m)
    lo = e.min()
    table = spin_table(m.n)
    return [table[k].copy() for k in np.flatnonzero(np.isclose(e, lo, rtol=0, atol=1e-12))]


def exact_moments(m: IsingModel) -> tuple[np.ndarray, np.ndarray]:
    """Boltzmann-exact first moments E[x_i] and pair moments E[x_i x_j].

    The pair matrix is symmetric with unit diagonal.
    """
    p = boltzmann_distribution(m)
    s = spin_table(m.n).astype(float)
    first = p @ s
    second = (s * p[:, None]).T @ s
    return first, second
