"""Variable-coefficient QAOA circuit: cost layers carry the Ising parameters.

The circuit is a Hadamard wall followed per layer by RZ(-2 gamma_k b_i) on
every qubit, RZZ(-2 gamma_k w_ij) on every pair, then RX(-2 beta_k) on every
qubit.  The diagonal cost operator's expectation and the probability-space
squared-error loss are evaluated either exactly from the register or from
multinomial shot counts.

Evaluations run through a fused kernel by default; ``fast=False`` drives the
same circuit gate by gate through :mod:`fcqbm.qsim` (the two paths are tested
to agree to near machine precision).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import ising, qsim
from ._backend import kernels
from .ising import IsingModel
from .qsim import Gate, NoiseModel, NOISELESS

SHIFT_NONE = kernels.SHIFT_NONE
SHIFT_RX = kernels.SHIFT_RX
SHIFT_RZ = kernels.SHIFT_RZ
SHIFT_RZZ = kernels.SHIFT_RZZ


@dataclass(frozen=True)
class QaoaParams:
    beta: np.ndarray
    gamma: np.ndarray

    def __post_init__(self):
        beta = np.atleast_1d(np.asarray(self.beta, dtype=float))
        gamma = np.atleast_1d(np.asarray(self.gamma, dtype=float))
        if beta.ndim != 1 or beta.shape != gamma.shape or beta.size < 1:
            raise ValueError("beta and gamma must be equal-length vectors, p >= 1")
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "gamma", gamma)

    @property
    def p(self) -> int:
        return self.beta.size

    def replace(self, beta=None, gamma=None) -> "QaoaParams":
        return QaoaParams(self.beta if beta is None else beta,
                          self.gamma if gamma is None else gamma)


class CostHamiltonian:
    """Diagonal cost operator built from an Ising parameter set.

    ``diagonal[i]`` is the energy of basis state i, cached once per model.
    """

    def __init__(self, model: IsingModel):
        self.model = model
        self.n = model.n
        self.diagonal = ising.all_energies(model)
        pairs = model.pairs()
        self.pair_a = np.array([a for a, _ in pairs], dtype=np.int64)
        self.pair_b = np.array([b for _, b in pairs], dtype=np.int64)
        self.w_pairs = model.pair_couplings()

    def with_model(self, model: IsingModel) -> "CostHamiltonian":
        return CostHamiltonian(model)


def build_circuit(h1: CostHamiltonian, params: QaoaParams) -> list[Gate]:
    """Gate list for the full circuit, Hadamard wall first."""
    m = h1.model
    gates = [Gate.h(q) for q in range(m.n)]
    for k in range(params.p):
        gk, bk = params.gamma[k], params.beta[k]
        gates.extend(Gate.rz(-2.0 * gk * m.b[i], i) for i in range(m.n))
        gates.extend(Gate.rzz(-2.0 * gk * m.w[i, j], i, j)
                     for i in range(m.n) for j in range(i + 1, m.n))
        gates.extend(Gate.rx(-2.0 * bk, q) for q in range(m.n))
    return gates


def circuit_probabilities(h1: CostHamiltonian, params: QaoaParams,
                          noise: NoiseModel = NOISELESS, fast: bool = True,
                          shift: tuple[int, int, int, float] | None = None
                          ) -> np.ndarray:
    """Probability vector of the circuit output.

    ``shift`` = (kind, layer, position, delta) adds ``delta`` to one gate's
    rotation angle; only the fused path supports it.
    """
    mixed = not noise.is_noiseless
    if fast or shift is not None:
        kind, layer, pos, delta = shift if shift is not None else (SHIFT_NONE, -1, -1, 0.0)
        return kernels.qaoa_probabilities(
            h1.n, h1.model.b, h1.w_pairs, h1.pair_a, h1.pair_b,
            params.beta, params.gamma, noise.p1, noise.p2,
            noise.scheme_code, int(mixed), kind, layer, pos, delta)
    reg = qsim.run_circuit(build_circuit(h1, params), h1.n, noise,
                           "mixed" if mixed else "pure")
    return qsim.probabilities(reg)


def _estimate(probs: np.ndarray, mode) -> np.ndarray:
    """Exact probabilities, or frequencies from a multinomial draw when mode
    is a (shots, rng) pair."""
    if mode is None:
        return probs
    shots, rng = mode
    return qsim.sample_counts(probs, shots, rng) / shots


def expected_H1(h1: CostHamiltonian, params: QaoaParams,
                noise: NoiseModel = NOISELESS, mode=None, fast: bool = True,
                shift=None) -> float:
    """<H1> = sum_i P(i) * diagonal_i, with P exact or shot-estimated."""
    probs = _estimate(circuit_probabilities(h1, params, noise, fast, shift), mode)
    return float(probs @ h1.diagonal)


def mse_loss_H2(h1: CostHamiltonian, params: QaoaParams, target: np.ndarray,
                noise: NoiseModel = NOISELESS, mode=None, fast: bool = True,
                shift=None) -> float:
    """<H2> = (1/2^N) sum_i (P(i) - P_T(i))^2."""
    t = np.asarray(target, dtype=float)
    if t.shape != (1 << h1.n,):
        raise ValueError(f"target must have length {1 << h1.n}")
    probs = _estimate(circuit_probabilities(h1, params, noise, fast, shift), mode)
    return float(np.mean((probs - t) ** 2))


def generate(h1: CostHamiltonian, params: QaoaParams, noise: NoiseModel,
             shots: int, rng: np.random.Generator) -> np.ndarray:
    """Sample measurement counts from the trained circuit."""
    return qsim.sample_counts(circuit_probabilities(h1, params, noise), shots, rng)
