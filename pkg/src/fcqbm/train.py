"""Bilevel trainer: inner loop tunes the circuit angles (beta, gamma) against
the cost expectation, outer loop tunes the Hamiltonian coefficients (b, w)
against the probability-space squared error, composed sequentially with an
iteration-cap fallback.

Gradient estimators
-------------------
"shift"          per-gate parameter-shift: for every rotation gate the
                 parameter feeds, evaluate the circuit with that gate's angle
                 moved by +-pi/2 and combine with the chain-rule factor.
                 Exact for this gate set (every generator is an involution),
                 including under noise, and the default.
"global-shift"   a single +-pi/2 substitution of the scalar parameter itself.
                 For beta this shifts every RX angle by a full pi, which
                 cancels to a global phase, so the estimate is identically
                 zero; kept only for the gradient diagnostic report.
"fd"             central finite differences on the scalar parameter.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace

import numpy as np

from . import qaoa
from .ising import IsingModel
from .qaoa import CostHamiltonian, QaoaParams, SHIFT_RX, SHIFT_RZ, SHIFT_RZZ
from .qsim import NoiseModel, NOISELESS

ESTIMATORS = ("shift", "global-shift", "fd")
HALF_PI = math.pi / 2.0


@dataclass(frozen=True)
class TrainConfig:
    """Defaults were calibrated once against the 4-qubit reference batches;
    the coefficient rate sits well above the angle rate because the squared
    error loss is two orders of magnitude flatter than the cost expectation.
    """

    eta2: float = 0.1               # inner (angle) learning rate
    eta3: float = 2.0               # outer (coefficient) learning rate
    inner_max_steps: int = 100
    outer_max_steps: int = 100
    global_max_iters: int = 50
    inner_tol: float = 1e-4
    outer_tol: float = 1e-4         # also the absolute loss target
    shots: int | None = None        # None = exact probabilities
    gradient_estimator: str = "shift"
    fd_eps: float = 1e-4
    seed: int = 0
    angle_init_range: float = 0.5   # beta, gamma ~ U(-r, r)
    coeff_init_range: float = 1.0   # b, w ~ U(-r, r)

    def __post_init__(self):
        if self.eta2 < 0 or self.eta3 < 0:
            raise ValueError("learning rates must be nonnegative")
        if min(self.inner_max_steps, self.outer_max_steps, self.global_max_iters) < 0:
            raise ValueError("step caps must be nonnegative")
        if self.inner_tol <= 0 or self.outer_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.gradient_estimator not in ESTIMATORS:
            raise ValueError(f"unknown gradient estimator {self.gradient_estimator!r}")


def _mode(cfg: TrainConfig, rng: np.random.Generator | None):
    if cfg.shots is None:
        return None
    if rng is None:
        raise ValueError("shots mode needs an rng")
    return (cfg.shots, rng)


# ---------------------------------------------------------------------------
# per-parameter gradients
# ---------------------------------------------------------------------------

def _pair_index(h1: CostHamiltonian, i: int, j: int) -> int:
    for e in range(len(h1.pair_a)):
        if h1.pair_a[e] == i and h1.pair_b[e] == j:
            return e
    raise ValueError(f"no coupling pair ({i}, {j})")


def grad_beta(h1: CostHamiltonian, params: QaoaParams, k: int,
              noise: NoiseModel = NOISELESS, mode=None,
              estimator: str = "shift", fd_eps: float = 1e-4) -> float:
    """d <H1> / d beta_k."""
    if estimator == "shift":
        total = 0.0
        for q in range(h1.n):
            fp = qaoa.expected_H1(h1, params, noise, mode, shift=(SHIFT_RX, k, q, HALF_PI))
            fm = qaoa.expected_H1(h1, params, noise, mode, shift=(SHIFT_RX, k, q, -HALF_PI))
            total += -2.0 * 0.5 * (fp - fm)  # RX angle is -2 beta_k
        return total

    def f(delta):
        beta = params.beta.copy()
        beta[k] += delta
        return qaoa.expected_H1(h1, params.replace(beta=beta), noise, mode)

    if estimator == "global-shift":
        return 0.5 * (f(HALF_PI) - f(-HALF_PI))
    return (f(fd_eps) - f(-fd_eps)) / (2.0 * fd_eps)


def grad_gamma(h1: CostHamiltonian, params: QaoaParams, k: int,
               noise: NoiseModel = NOISELESS, mode=None,
               estimator: str = "shift", fd_eps: float = 1e-4) -> float:
    """d <H1> / d gamma_k."""
    if estimator == "shift":
        total = 0.0
        for q in range(h1.n):
            fp = qaoa.expected_H1(h1, params, noise, mode, shift=(SHIFT_RZ, k, q, HALF_PI))
            fm = qaoa.expected_H1(h1, params, noise, mode, shift=(SHIFT_RZ, k, q, -HALF_PI))
            total += -2.0 * h1.model.b[q] * 0.5 * (fp - fm)
        for e in range(len(h1.w_pairs)):
            fp = qaoa.expected_H1(h1, params, noise, mode, shift=(SHIFT_RZZ, k, e, HALF_PI))
            fm = qaoa.expected_H1(h1, params, noise, mode, shift=(SHIFT_RZZ, k, e, -HALF_PI))
            total += -2.0 * h1.w_pairs[e] * 0.5 * (fp - fm)
        return total

    def f(delta):
        gamma = params.gamma.copy()
        gamma[k] += delta
        return qaoa.expected_H1(h1, params.replace(gamma=gamma), noise, mode)

    if estimator == "global-shift":
        return 0.5 * (f(HALF_PI) - f(-HALF_PI))
    return (f(fd_eps) - f(-fd_eps)) / (2.0 * fd_eps)


def _probs(h1, params, noise, mode, shift=None):
    p = qaoa.circuit_probabilities(h1, params, noise, shift=shift)
    if mode is None:
        return p
    shots, rng = mode
    from . import qsim
    return qsim.sample_counts(p, shots, rng) / shots


def _coeff_shift_grad(h1, params, target, noise, mode, gate_kind, pos,
                      central=None):
    """Exact gradient of the squared-error loss with respect to one cost
    coefficient, via probability-vector parameter shifts.

    The loss is quadratic in the state, so the +-pi/2 rule is applied to
    every basis probability (a projector expectation, linear in the state)
    and chained through the loss classically:
    d<H2>/dc = (2/2^N) sum_i (P_i - T_i) dP_i/dc.
    """
    if central is None:
        central = _probs(h1, params, noise, mode)
    dim = central.size
    dp = np.zeros(dim)
    for k in range(params.p):
        pp = _probs(h1, params, noise, mode, shift=(gate_kind, k, pos, HALF_PI))
        pm = _probs(h1, params, noise, mode, shift=(gate_kind, k, pos, -HALF_PI))
        # gate angle is -2 gamma_k * coefficient
        dp += -2.0 * params.gamma[k] * 0.5 * (pp - pm)
    return float(2.0 / dim * ((central - target) @ dp))


def grad_b(h1: CostHamiltonian, params: QaoaParams, i: int, target: np.ndarray,
           noise: NoiseModel = NOISELESS, mode=None,
           estimator: str = "shift", fd_eps: float = 1e-4) -> float:
    """d <H2> / d b_i, with the shifted coefficient substituted into the
    circuit's cost layers."""
    if estimator == "shift":
        return _coeff_shift_grad(h1, params, target, noise, mode, SHIFT_RZ, i)

    def f(delta):
        b = h1.model.b.copy()
        b[i] += delta
        shifted = CostHamiltonian(h1.model.with_params(b, h1.model.w))
        return qaoa.mse_loss_H2(shifted, params, target, noise, mode)

    if estimator == "global-shift":
        return 0.5 * (f(HALF_PI) - f(-HALF_PI))
    return (f(fd_eps) - f(-fd_eps)) / (2.0 * fd_eps)


def grad_w(h1: CostHamiltonian, params: QaoaParams, i: int, j: int,
           target: np.ndarray, noise: NoiseModel = NOISELESS, mode=None,
           estimator: str = "shift", fd_eps: float = 1e-4) -> float:
    """d <H2> / d w_ij."""
    if estimator == "shift":
        e = _pair_index(h1, i, j)
        return _coeff_shift_grad(h1, params, target, noise, mode, SHIFT_RZZ, e)

    def f(delta):
        w = h1.model.w.copy()
        w[i, j] += delta
        shifted = CostHamiltonian(h1.model.with_params(h1.model.b, w))
        return qaoa.mse_loss_H2(shifted, params, target, noise, mode)

    if estimator == "global-shift":
        return 0.5 * (f(HALF_PI) - f(-HALF_PI))
    return (f(fd_eps) - f(-fd_eps)) / (2.0 * fd_eps)


# ---------------------------------------------------------------------------
# loops
# ---------------------------------------------------------------------------

STABLE_WINDOW = 5


def inner_loop(h1: CostHamiltonian, params0: QaoaParams, cfg: TrainConfig,
               noise: NoiseModel = NOISELESS, rng=None):
    """Descend <H1> over (beta, gamma) until the loss change stays below
    inner_tol for five consecutive steps or the step cap binds; returns the
    best-seen parameters and the loss trace."""
    mode = _mode(cfg, rng)
    params = params0
    loss = qaoa.expected_H1(h1, params, noise, mode)
    trace = [loss]
    best_params, best_loss = params, loss
    stable = 0
    for _ in range(cfg.inner_max_steps):
        gb = np.array([grad_beta(h1, params, k, noise, mode,
                                 cfg.gradient_estimator, cfg.fd_eps)
                       for k in range(params.p)])
        gg = np.array([grad_gamma(h1, params, k, noise, mode,
                                  cfg.gradient_estimator, cfg.fd_eps)
                       for k in range(params.p)])
        params = params.replace(beta=params.beta - cfg.eta2 * gb,
                                gamma=params.gamma - cfg.eta2 * gg)
        loss = qaoa.expected_H1(h1, params, noise, mode)
        trace.append(loss)
        if loss < best_loss:
            best_params, best_loss = params, loss
        stable = stable + 1 if abs(trace[-1] - trace[-2]) < cfg.inner_tol else 0
        if stable >= STABLE_WINDOW:
            break
    return best_params, trace


def outer_loop(h1: CostHamiltonian, params_star: QaoaParams, target: np.ndarray,
               cfg: TrainConfig, noise: NoiseModel = NOISELESS, rng=None):
    """Descend <H2> over all biases and couplings with the angles frozen;
    returns the best-seen model and the loss trace."""
    mode = _mode(cfg, rng)
    current = h1
    loss = qaoa.mse_loss_H2(current, params_star, target, noise, mode)
    trace = [loss]
    best_model, best_loss = current.model, loss
    stable = 0
    n = current.n
    for _ in range(cfg.outer_max_steps):
        if cfg.gradient_estimator == "shift":
            central = _probs(current, params_star, noise, mode)
            gb = np.array([_coeff_shift_grad(current, params_star, target,
                                             noise, mode, SHIFT_RZ, i, central)
                           for i in range(n)])
            gw = np.zeros((n, n))
            for e in range(len(current.w_pairs)):
                i, j = int(current.pair_a[e]), int(current.pair_b[e])
                gw[i, j] = _coeff_shift_grad(current, params_star, target,
                                             noise, mode, SHIFT_RZZ, e, central)
        else:
            gb = np.array([grad_b(current, params_star, i, target, noise, mode,
                                  cfg.gradient_estimator, cfg.fd_eps)
                           for i in range(n)])
            gw = np.zeros((n, n))
            for i in range(n):
                for j in range(i + 1, n):
                    gw[i, j] = grad_w(current, params_star, i, j, target, noise,
                                      mode, cfg.gradient_estimator, cfg.fd_eps)
        model = current.model.with_params(current.model.b - cfg.eta3 * gb,
                                          current.model.w - cfg.eta3 * gw)
        current = CostHamiltonian(model)
        loss = qaoa.mse_loss_H2(current, params_star, target, noise, mode)
        trace.append(loss)
        if loss < best_loss:
            best_model, best_loss = model, loss
        stable = stable + 1 if abs(trace[-1] - trace[-2]) < cfg.outer_tol else 0
        if stable >= STABLE_WINDOW:
            break
    return best_model, trace


@dataclass
class GlobalIteration:
    index: int
    inner_h1: list[float]
    h2_after_inner: float
    outer_h2: list[float]
    h2_end: float
    b: np.ndarray
    w: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray


@dataclass
class TrainTrace:
    initial_loss: float
    iterations: list[GlobalIteration] = field(default_factory=list)
    wall_seconds: float = 0.0

    def raw_mse(self) -> list[float]:
        return [it.h2_end for it in self.iterations]

    def min_so_far(self) -> list[float]:
        out, lo = [], self.initial_loss
        for v in self.raw_mse():
            lo = min(lo, v)
            out.append(lo)
        return out


@dataclass
class TrainResult:
    model: IsingModel
    params: QaoaParams
    loss: float            # minimum observed <H2>
    trace: TrainTrace

    def probabilities(self, noise: NoiseModel = NOISELESS) -> np.ndarray:
        return qaoa.circuit_probabilities(CostHamiltonian(self.model),
                                          self.params, noise)


def initial_state(n: int, p: int, cfg: TrainConfig):
    """Seeded random initialization: small angles, unit-range coefficients."""
    rng = np.random.default_rng(cfg.seed)
    r, s = cfg.angle_init_range, cfg.coeff_init_range
    params = QaoaParams(rng.uniform(-r, r, p), rng.uniform(-r, r, p))
    model = IsingModel(n, rng.uniform(-s, s, n),
                       np.triu(rng.uniform(-s, s, (n, n)), 1))
    return model, params, rng


def bilevel_train(target: np.ndarray, p: int, cfg: TrainConfig,
                  noise: NoiseModel = NOISELESS) -> TrainResult:
    """Sequential bilevel descent; returns the parameter triple achieving the
    minimum observed <H2> anywhere in the trace."""
    target = np.asarray(target, dtype=float)
    size = target.size
    n = int(math.log2(size))
    if 1 << n != size:
        raise ValueError("target length must be a power of two")
    model, params, rng = initial_state(n, p, cfg)
    mode_rng = rng if cfg.shots is not None else None

    t0 = time.perf_counter()
    h1 = CostHamiltonian(model)
    loss0 = qaoa.mse_loss_H2(h1, params, target, noise, _mode(cfg, mode_rng))
    trace = TrainTrace(initial_loss=loss0)
    best = (loss0, model, params)

    for g in range(cfg.global_max_iters):
        params, h1_trace = inner_loop(h1, params, cfg, noise, mode_rng)
        h2_after_inner = qaoa.mse_loss_H2(h1, params, target, noise,
                                          _mode(cfg, mode_rng))
        if h2_after_inner < best[0]:
            best = (h2_after_inner, h1.model, params)

        model, h2_trace = outer_loop(h1, params, target, cfg, noise, mode_rng)
        h1 = CostHamiltonian(model)
        outer_best = min(h2_trace)
        if outer_best < best[0]:
            best = (outer_best, model, params)

        trace.iterations.append(GlobalIteration(
            index=g, inner_h1=h1_trace, h2_after_inner=h2_after_inner,
            outer_h2=h2_trace, h2_end=h2_trace[-1],
            b=model.b.copy(), w=model.w.copy(),
            beta=params.beta.copy(), gamma=params.gamma.copy()))
        if best[0] < cfg.outer_tol:
            break
    trace.wall_seconds = time.perf_counter() - t0
    return TrainResult(model=best[1], params=best[2], loss=best[0], trace=trace)


# ---------------------------------------------------------------------------
# estimator comparison report
# ---------------------------------------------------------------------------

def gradient_report(seed: int = 0, instances: int = 5, p: int = 1,
                    noise: NoiseModel = NOISELESS) -> list[dict]:
    """Compare the three estimators on random 4-node instances.

    Purely diagnostic: rows carry the raw values so disagreement between the
    single-substitution global shift and the other two stays visible.
    """
    rng = np.random.default_rng(seed)
    rows = []
    for _ in range(instances):
        model = IsingModel(4, rng.uniform(-1, 1, 4),
                           np.triu(rng.uniform(-1, 1, (4, 4)), 1))
        h1 = CostHamiltonian(model)
        params = QaoaParams(rng.uniform(-1, 1, p), rng.uniform(-1, 1, p))
        target = np.zeros(16)
        target[int(rng.integers(16))] = 1.0
        for name, fn, args in (
                ("beta", grad_beta, (h1, params, 0, noise)),
                ("gamma", grad_gamma, (h1, params, 0, noise)),
                ("b", grad_b, (h1, params, 2, target, noise)),
                ("w", grad_w, (h1, params, 1, 3, target, noise))):
            row = {"parameter": name}
            for est in ESTIMATORS:
                row[est] = fn(*args, None, est)
            rows.append(row)
    return rows
