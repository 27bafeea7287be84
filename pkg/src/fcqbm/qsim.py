"""Minimal gate-level quantum simulator.

Two register backends: a pure statevector (2^n amplitudes) and a density
matrix (2^n x 2^n), with per-gate depolarizing noise on the mixed backend.
Gate set is exactly what the cost/mixer circuit needs: Hadamard, RX, RZ, RZZ.

Qubit 0 is the most significant bit of the basis index, so the 4-qubit basis
state |1001> sits at index 9.  Registers are plain values and every operation
returns (or mutates) only its own inputs, so independent circuits can run
concurrently as long as each has its own RNG.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels

SCHEME_CODES = {"broadcast": kernels.SCHEME_BROADCAST, "local": kernels.SCHEME_LOCAL}


@dataclass
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    @classmethod
    def zero(cls, n_qubits: int) -> "StateVector":
        amp = np.zeros(1 << n_qubits, dtype=np.complex128)
        amp[0] = 1.0
        return cls(n_qubits, amp)

    def norm_error(self) -> float:
        return abs(float(np.sum(np.abs(self.amplitudes) ** 2)) - 1.0)


@dataclass
class DensityMatrix:
    n_qubits: int
    entries: np.ndarray

    @classmethod
    def zero(cls, n_qubits: int) -> "DensityMatrix":
        dim = 1 << n_qubits
        rho = np.zeros((dim, dim), dtype=np.complex128)
        rho[0, 0] = 1.0
        return cls(n_qubits, rho)

    @classmethod
    def from_statevector(cls, sv: StateVector) -> "DensityMatrix":
        return cls(sv.n_qubits, np.outer(sv.amplitudes, sv.amplitudes.conj()))

    def trace_error(self) -> float:
        return abs(float(np.trace(self.entries).real) - 1.0)

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.entries)[0])


@dataclass(frozen=True)
class Gate:
    """One circuit element: kind in {"h", "rx", "rz", "rzz"}, radian angle."""

    kind: str
    qubits: tuple[int, ...]
    angle: float = 0.0

    @classmethod
    def h(cls, q: int) -> "Gate":
        return cls("h", (q,))

    @classmethod
    def rx(cls, angle: float, q: int) -> "Gate":
        return cls("rx", (q,), angle)

    @classmethod
    def rz(cls, angle: float, q: int) -> "Gate":
        return cls("rz", (q,), angle)

    @classmethod
    def rzz(cls, angle: float, q1: int, q2: int) -> "Gate":
        if q1 == q2:
            raise ValueError("rzz needs two distinct qubits")
        return cls("rzz", (q1, q2), angle)

    def matrix(self) -> np.ndarray:
        """Dense unitary on the gate's own qubits (2x2 or 4x4)."""
        if self.kind == "h":
            return np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
        if self.kind == "rx":
            c, s = np.cos(self.angle / 2), -1j * np.sin(self.angle / 2)
            return np.array([[c, s], [s, c]], dtype=complex)
        if self.kind == "rz":
            ph = np.exp(-0.5j * self.angle)
            return np.diag([ph, np.conj(ph)]).astype(complex)
        if self.kind == "rzz":
            ph = np.exp(-0.5j * self.angle)
            return np.diag([ph, np.conj(ph), np.conj(ph), ph]).astype(complex)
        raise ValueError(f"unknown gate kind {self.kind!r}")


@dataclass(frozen=True)
class NoiseModel:
    """Depolarizing probabilities per gate class.

    ``scheme`` picks where channels are inserted while a circuit runs:
    "broadcast" applies a single-qubit channel to every register qubit after
    every gate (at p1 for one-qubit gates, p2 for two-qubit gates);
    "local" applies the channel only on the qubits the gate touched, using
    the two-qubit 15-Pauli channel after RZZ.
    """

    p1: float = 0.0
    p2: float = 0.0
    scheme: str = "broadcast"

    def __post_init__(self):
        if not (0.0 <= self.p1 <= 1.0 and 0.0 <= self.p2 <= 1.0):
            raise ValueError("depolarizing probabilities must lie in [0, 1]")
        if self.scheme not in SCHEME_CODES:
            raise ValueError(f"unknown noise scheme {self.scheme!r}")

    @property
    def is_noiseless(self) -> bool:
        return self.p1 == 0.0 and self.p2 == 0.0

    @property
    def scheme_code(self) -> int:
        return kernels.SCHEME_NONE if self.is_noiseless else SCHEME_CODES[self.scheme]


NOISELESS = NoiseModel(0.0, 0.0)


def _check_qubits(gate: Gate, n: int) -> None:
    for q in gate.qubits:
        if not 0 <= q < n:
            raise IndexError(f"qubit {q} out of range for {n}-qubit register")


def apply_gate(reg: StateVector | DensityMatrix, gate: Gate):
    """Apply one gate in place and return the register."""
    n = reg.n_qubits
    _check_qubits(gate, n)
    mixed = isinstance(reg, DensityMatrix)
    buf = reg.entries if mixed else reg.amplitudes
    k = gate.kind
    if k == "h":
        (kernels.apply_h_dm if mixed else kernels.apply_h_sv)(buf, gate.qubits[0], n)
    elif k == "rx":
        (kernels.apply_rx_dm if mixed else kernels.apply_rx_sv)(
            buf, gate.angle, gate.qubits[0], n)
    elif k == "rz":
        (kernels.apply_rz_dm if mixed else kernels.apply_rz_sv)(
            buf, gate.angle, gate.qubits[0], n)
    elif k == "rzz":
        (kernels.apply_rzz_dm if mixed else kernels.apply_rzz_sv)(
            buf, gate.angle, gate.qubits[0], gate.qubits[1], n)
    else:
        raise ValueError(f"unknown gate kind {k!r}")
    return reg


def apply_depolarizing(reg: DensityMatrix, qubits, p: float) -> DensityMatrix:
    """Depolarizing channel on one qubit or one qubit pair, in place.

    Single qubit: rho -> (1-p) rho + (p/3)(X rho X + Y rho Y + Z rho Z).
    Pair: rho -> (1-p) rho + (p/15) * sum of the 15 non-identity Pauli
    conjugations.  Complete mixing is reached at p = 3/4 and p = 15/16
    respectively, not at p = 1.
    """
    if not isinstance(reg, DensityMatrix):
        raise TypeError("depolarizing noise requires the density-matrix backend")
    qs = tuple(qubits)
    for q in qs:
        if not 0 <= q < reg.n_qubits:
            raise IndexError(f"qubit {q} out of range")
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    if len(qs) == 1:
        kernels.depolarize_1q(reg.entries, qs[0], p, reg.n_qubits)
    elif len(qs) == 2:
        if qs[0] == qs[1]:
            raise ValueError("pair channel needs two distinct qubits")
        kernels.depolarize_2q(reg.entries, qs[0], qs[1], p, reg.n_qubits)
    else:
        raise ValueError("channel acts on one or two qubits")
    return reg


def _insert_noise(reg: DensityMatrix, gate: Gate, noise: NoiseModel) -> None:
    p = noise.p1 if len(gate.qubits) == 1 else noise.p2
    if p == 0.0:
        return
    if noise.scheme == "broadcast":
        for q in range(reg.n_qubits):
            kernels.depolarize_1q(reg.entries, q, p, reg.n_qubits)
    elif len(gate.qubits) == 1:
        kernels.depolarize_1q(reg.entries, gate.qubits[0], p, reg.n_qubits)
    else:
        kernels.depolarize_2q(reg.entries, gate.qubits[0], gate.qubits[1], p,
                              reg.n_qubits)


def run_circuit(gates, n_qubits: int, noise: NoiseModel = NOISELESS,
                backend: str = "pure"):
    """Apply gates in order to |0...0>, inserting noise channels per scheme.

    A non-trivial noise model forces ``backend="mixed"``.
    """
    if backend not in ("pure", "mixed"):
        raise ValueError(f"unknown backend {backend!r}")
    if not noise.is_noiseless and backend == "pure":
        raise ValueError("noisy circuits need the mixed (density-matrix) backend")
    if backend == "pure":
        reg = StateVector.zero(n_qubits)
        for g in gates:
            apply_gate(reg, g)
        return reg
    reg = DensityMatrix.zero(n_qubits)
    for g in gates:
        apply_gate(reg, g)
        _insert_noise(reg, g, noise)
    return reg


def probabilities(reg: StateVector | DensityMatrix) -> np.ndarray:
    """Basis-state probability vector of either register kind."""
    if isinstance(reg, DensityMatrix):
        return kernels.probs_dm(reg.entries)
    return kernels.probs_sv(reg.amplitudes)


def sample_counts(probs: np.ndarray, shots: int,
                  rng: np.random.Generator) -> np.ndarray:
    """Multinomial counts over basis states; deterministic given the rng."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    p = np.asarray(probs, dtype=float)
    total = float(p.sum())
    if abs(total - 1.0) > 1e-8 or np.any(p < -1e-12):
        raise ValueError("probabilities must be nonnegative and sum to 1")
    return rng.multinomial(shots, np.clip(p, 0.0, None) / total)
