"""Classical fully connected Boltzmann machine baseline.

Training alternates an energy-minimizing positive phase (exact enumeration at
small N) with negative-phase Gibbs sampling and a contrastive update on the
moment gap.  Two logistic update rules are exposed: ``gibbs_conditional`` is
the conventional sigmoid form sigma(2 * local_field), while
``boltzmann_conditional`` is the conditional implied by the joint
distribution P(s) ~ exp(-E(s)), which carries the opposite field sign.  The
sampler uses the joint-consistent rule; the two differ whenever the local
field is nonzero (see the cross-check test).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import ising
from .ising import IsingModel


@dataclass
class GibbsChainState:
    current: np.ndarray  # spins, +-1
    sweeps_done: int = 0


@dataclass(frozen=True)
class ClassicalTrainConfig:
    eta1: float = 0.1
    sweeps: int = 20           # burn-in sweeps per negative phase
    max_epochs: int = 50
    seed: int = 0
    model_samples: int = 1000  # post-burn-in samples for the model moments

    def __post_init__(self):
        if self.eta1 < 0 or self.sweeps < 1 or self.max_epochs < 0:
            raise ValueError("invalid classical training configuration")


def local_field(m: IsingModel, spins: np.ndarray, i: int) -> float:
    """b_i plus the coupling-weighted sum over all other spins."""
    w_sym = m.w + m.w.T  # zero diagonal, so the i-th term drops out
    return float(m.b[i] + w_sym[i] @ spins)


def gibbs_conditional(m: IsingModel, spins: np.ndarray, i: int) -> float:
    """sigma(2 (b_i + sum_j w_ij x_j)): the textbook sigmoid update form."""
    h = local_field(m, spins, i)
    return 0.5 * (1.0 + math.tanh(h))


def boltzmann_conditional(m: IsingModel, spins: np.ndarray, i: int) -> float:
    """P(x_i = +1 | rest) under P(s) ~ exp(-E(s)); note the negated field."""
    h = local_field(m, spins, i)
    return 0.5 * (1.0 - math.tanh(h))


def positive_phase_minimize(m: IsingModel, s0: np.ndarray) -> np.ndarray:
    """Global energy minimizer by enumeration, never above energy(s0); ties
    break toward the lowest basis index (argmin picks the first minimum)."""
    ising._check_spins(s0, m.n)
    e = ising.all_energies(m)
    return ising.index_to_spins(int(np.argmin(e)), m.n)


def gibbs_sweep(m: IsingModel, chain: GibbsChainState,
                rng: np.random.Generator) -> GibbsChainState:
    """Resample every node once in index order from the joint-consistent
    conditional; returns a new chain state."""
    spins = chain.current.astype(np.int8).copy()
    for i in range(m.n):
        p_up = boltzmann_conditional(m, spins, i)
        spins[i] = 1 if rng.random() < p_up else -1
    return GibbsChainState(spins, chain.sweeps_done + 1)


def sample_chain(m: IsingModel, start: np.ndarray, burn_in: int, samples: int,
                 rng: np.random.Generator) -> np.ndarray:
    """Run burn-in sweeps then collect one state per subsequent sweep.

    Same chain as repeated gibbs_sweep calls, with the field update inlined
    so long chains stay cheap.
    """
    n = m.n
    w_sym = m.w + m.w.T
    spins = np.asarray(start, dtype=float).copy()
    out = np.empty((samples, n), dtype=np.int8)
    total = burn_in + samples
    u = rng.random((total, n))
    for t in range(total):
        for i in range(n):
            h = m.b[i] + w_sym[i] @ spins
            p_up = 0.5 * (1.0 - math.tanh(h))
            spins[i] = 1.0 if u[t, i] < p_up else -1.0
        if t >= burn_in:
            out[t - burn_in] = spins
    return out


def empirical_moments(samples: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    s = np.asarray(samples, dtype=float)
    first = s.mean(axis=0)
    second = (s.T @ s) / len(s)
    return first, second


def kl_divergence(p_target: np.ndarray, p_model: np.ndarray) -> float:
    """KL(target || model) with the 0 log 0 = 0 convention; +inf when the
    model assigns zero mass inside the target's support."""
    pt = np.asarray(p_target, dtype=float)
    pm = np.asarray(p_model, dtype=float)
    if pt.shape != pm.shape:
        raise ValueError("distributions must have equal length")
    total = 0.0
    for t, q in zip(pt, pm):
        if t == 0.0:
            continue
        if q == 0.0:
            return math.inf
        total += t * math.log(t / q)
    return total


def cd_update(m: IsingModel, data_moments, model_moments,
              cfg: ClassicalTrainConfig) -> IsingModel:
    """One contrastive step along the moment gap.

    With this energy sign convention (E = +sum b x + sum w xx, P ~ exp(-E))
    the KL gradient is d KL / d b_i = E_data[x_i] - E_model[x_i], so descent
    moves parameters toward the model moments and away from the data moments.
    """
    d1, d2 = data_moments
    m1, m2 = model_moments
    b = m.b + cfg.eta1 * (np.asarray(m1) - np.asarray(d1))
    w = m.w.copy()
    for i in range(m.n):
        for j in range(i + 1, m.n):
            w[i, j] += cfg.eta1 * (m2[i][j] - d2[i][j])
    return m.with_params(b, w)


def train_classical(samples: np.ndarray, cfg: ClassicalTrainConfig,
                    init: IsingModel | None = None):
    """Contrastive training on spin samples; returns the final model and the
    per-epoch exact-KL trace (computed by enumeration, so N is guarded)."""
    samples = np.asarray(samples, dtype=np.int8)
    if samples.ndim != 2:
        raise ValueError("samples must be a (count, n) spin array")
    n = samples.shape[1]
    rng = np.random.default_rng(cfg.seed)
    if init is None:
        b0 = rng.uniform(-1, 1, n)
        w0 = np.triu(rng.uniform(-1, 1, (n, n)), 1)
        model = IsingModel(n, b0, w0)
    else:
        model = init

    counts = np.zeros(1 << n)
    for s in samples:
        counts[ising.spins_to_index(s)] += 1
    p_target = counts / counts.sum()
    data_moments = empirical_moments(samples)

    kl_trace = [kl_divergence(p_target, ising.boltzmann_distribution(model))]
    for _ in range(cfg.max_epochs):
        s0 = samples[rng.integers(len(samples))]
        s_plus = positive_phase_minimize(model, s0)
        model_samples = sample_chain(model, s_plus, cfg.sweeps,
                                     cfg.model_samples, rng)
        model = cd_update(model, data_moments, empirical_moments(model_samples),
                          cfg)
        kl_trace.append(kl_divergence(p_target, ising.boltzmann_distribution(model)))
    return model, kl_trace
