"""Pure-numpy gate kernels.

Drop-in fallback for the compiled ``fcqbm._kernels`` extension.  Every public
function here has a signature-identical compiled twin; which one the package
uses is decided once at import time in :mod:`fcqbm._backend`.

Conventions shared by both implementations:

* qubit ``q`` of an ``n``-qubit register owns bit ``n - 1 - q`` of the basis
  index, i.e. qubit 0 is the most significant bit ("1001" is index 9),
* rotation gates use the half-angle convention
  ``RX(t) = exp(-i t X / 2)``, ``RZ(t) = exp(-i t Z / 2)``,
  ``RZZ(t) = exp(-i t ZZ / 2)``,
* all register-mutating kernels work in place on C-contiguous arrays.

Noise scheme codes used by the fused circuit kernel: 0 = no noise,
1 = broadcast (a single-qubit depolarizing channel on every register qubit
after every gate, at that gate's error probability), 2 = local (a channel
only on the qubits the gate acts on; two-qubit channel after RZZ).
"""

import math

import numpy as np

COMPILED = False

SCHEME_NONE = 0
SCHEME_BROADCAST = 1
SCHEME_LOCAL = 2


# ---------------------------------------------------------------------------
# statevector kernels
# ---------------------------------------------------------------------------

def _sv_axis(state, q, n):
    """View of the statevector with qubit q moved to the leading axis."""
    return np.moveaxis(state.reshape([2] * n), q, 0)


def apply_1q_sv(state, u00, u01, u10, u11, q, n):
    t = _sv_axis(state, q, n)
    a = t[0].copy()
    b = t[1]
    t[0] = u00 * a + u01 * b
    t[1] = u10 * a + u11 * b


def apply_h_sv(state, q, n):
    s = 1.0 / math.sqrt(2.0)
    apply_1q_sv(state, s, s, s, -s, q, n)


def apply_rx_sv(state, theta, q, n):
    c = math.cos(theta / 2.0)
    s = -1j * math.sin(theta / 2.0)
    apply_1q_sv(state, c, s, s, c, q, n)


def apply_rz_sv(state, theta, q, n):
    t = _sv_axis(state, q, n)
    t[0] *= np.exp(-0.5j * theta)
    t[1] *= np.exp(0.5j * theta)


def apply_rzz_sv(state, theta, q1, q2, n):
    t = np.moveaxis(state.reshape([2] * n), (q1, q2), (0, 1))
    same = np.exp(-0.5j * theta)
    diff = np.exp(0.5j * theta)
    t[0, 0] *= same
    t[1, 1] *= same
    t[0, 1] *= diff
    t[1, 0] *= diff


# ---------------------------------------------------------------------------
# density-matrix kernels
# ---------------------------------------------------------------------------

def _dm_axes(rho, qs, n):
    """View of rho as a rank-2n tensor with the given row/column qubit axes
    moved to the front (rows first, then the matching column axes)."""
    t = rho.reshape([2] * (2 * n))
    src = list(qs) + [n + q for q in qs]
    dst = list(range(2 * len(qs)))
    return np.moveaxis(t, src, dst)


def apply_1q_dm(rho, u00, u01, u10, u11, q, n):
    t = _dm_axes(rho, (q,), n)
    a = t[0, 0].copy()
    b = t[0, 1].copy()
    c = t[1, 0].copy()
    d = t[1, 1]
    # U rho U^dagger expanded over the 2x2 block structure of qubit q
    c00, c01 = np.conj(u00), np.conj(u01)
    c10, c11 = np.conj(u10), np.conj(u11)
    t[0, 0] = u00 * (a * c00 + b * c01) + u01 * (c * c00 + d * c01)
    t[0, 1] = u00 * (a * c10 + b * c11) + u01 * (c * c10 + d * c11)
    t[1, 0] = u10 * (a * c00 + b * c01) + u11 * (c * c00 + d * c01)
    t[1, 1] = u10 * (a * c10 + b * c11) + u11 * (c * c10 + d * c11)


def apply_h_dm(rho, q, n):
    s = 1.0 / math.sqrt(2.0)
    apply_1q_dm(rho, s, s, s, -s, q, n)


def apply_rx_dm(rho, theta, q, n):
    c = math.cos(theta / 2.0)
    s = -1j * math.sin(theta / 2.0)
    apply_1q_dm(rho, c, s, s, c, q, n)


def apply_rz_dm(rho, theta, q, n):
    t = _dm_axes(rho, (q,), n)
    ph = np.exp(-1j * theta)
    t[0, 1] *= ph
    t[1, 0] *= np.conj(ph)


def apply_rzz_dm(rho, theta, q1, q2, n):
    # diagonal unitary: rho_ij picks up phase(i) * conj(phase(j)); the ZZ
    # eigenvalue is +1 when the pair bits agree, -1 otherwise.
    t = _dm_axes(rho, (q1, q2), n)
    ph = np.exp(-1j * theta)  # phase(same) / phase(diff)
    for r in range(4):
        for c in range(4):
            sr = 1 if (r in (0, 3)) else -1
            sc = 1 if (c in (0, 3)) else -1
            if sr == sc:
                continue
            t[r >> 1, r & 1, c >> 1, c & 1] *= ph if sr == 1 else np.conj(ph)


def depolarize_1q(rho, q, p, n):
    """rho -> (1-p) rho + (p/3)(X rho X + Y rho Y + Z rho Z) on qubit q."""
    if p == 0.0:
        return
    t = _dm_axes(rho, (q,), n)
    lam = 1.0 - 4.0 * p / 3.0
    mix = (2.0 * p / 3.0) * (t[0, 0] + t[1, 1])
    t[0, 0] = lam * t[0, 0] + mix
    t[1, 1] = lam * t[1, 1] + mix
    t[0, 1] *= lam
    t[1, 0] *= lam


def depolarize_2q(rho, q1, q2, p, n):
    """rho -> (1-p) rho + (p/15) * sum over the 15 non-identity two-qubit
    Pauli conjugations, acting on the (q1, q2) pair."""
    if p == 0.0:
        return
    t = _dm_axes(rho, (q1, q2), n)
    lam = 1.0 - 16.0 * p / 15.0
    mix = (t[0, 0, 0, 0] + t[0, 1, 0, 1] + t[1, 0, 1, 0] + t[1, 1, 1, 1]) / 4.0
    for r in range(4):
        for c in range(4):
            idx = (r >> 1, r & 1, c >> 1, c & 1)
            if r == c:
                t[idx] = lam * t[idx] + (1.0 - lam) * mix
            else:
                t[idx] = lam * t[idx]


# ---------------------------------------------------------------------------
# measurement
# ---------------------------------------------------------------------------

def probs_sv(state):
    return np.abs(state) ** 2


def probs_dm(rho):
    return np.clip(np.diag(rho).real.copy(), 0.0, None)


# ---------------------------------------------------------------------------
# fused QAOA circuit evaluation (the training hot path)
# ---------------------------------------------------------------------------

SHIFT_NONE = 0
SHIFT_RX = 1
SHIFT_RZ = 2
SHIFT_RZZ = 3


def qaoa_probabilities(n, b, w_pairs, pair_a, pair_b, beta, gamma,
                       p1, p2, scheme, mixed,
                       shift_kind=SHIFT_NONE, shift_layer=-1, shift_pos=-1,
                       shift_delta=0.0):
    """Run the full variable-coefficient QAOA circuit and return the basis
    probability vector.

    The circuit is a Hadamard wall followed, per layer k, by RZ(-2 gamma_k
    b_i) on every qubit, RZZ(-2 gamma_k w_ij) on every pair and RX(-2
    beta_k) on every qubit.  ``shift_*`` optionally adds ``shift_delta`` to
    the rotation angle of one single gate, which is what the per-gate
    parameter-shift gradient needs.
    """
    dim = 1 << n
    p_layers = len(beta)
    n_pairs = len(w_pairs)

    if mixed:
        reg = np.zeros((dim, dim), dtype=np.complex128)
        reg[0, 0] = 1.0
    else:
        reg = np.zeros(dim, dtype=np.complex128)
        reg[0] = 1.0

    def noise_after(p, qubits):
        if scheme == SCHEME_NONE or p == 0.0:
            return
        if scheme == SCHEME_BROADCAST:
            for q in range(n):
                depolarize_1q(reg, q, p, n)
        elif len(qubits) == 1:
            depolarize_1q(reg, qubits[0], p, n)
        else:
            depolarize_2q(reg, qubits[0], qubits[1], p, n)

    for q in range(n):
        (apply_h_dm if mixed else apply_h_sv)(reg, q, n)
        noise_after(p1, (q,))

    for k in range(p_layers):
        for q in range(n):
            theta = -2.0 * gamma[k] * b[q]
            if shift_kind == SHIFT_RZ and shift_layer == k and shift_pos == q:
                theta += shift_delta
            (apply_rz_dm if mixed else apply_rz_sv)(reg, theta, q, n)
            noise_after(p1, (q,))
        for e in range(n_pairs):
            theta = -2.0 * gamma[k] * w_pairs[e]
            if shift_kind == SHIFT_RZZ and shift_layer == k and shift_pos == e:
                theta += shift_delta
            qa, qb = pair_a[e], pair_b[e]
            (apply_rzz_dm if mixed else apply_rzz_sv)(reg, theta, qa, qb, n)
            noise_after(p2, (qa, qb))
        for q in range(n):
            theta = -2.0 * beta[k]
            if shift_kind == SHIFT_RX and shift_layer == k and shift_pos == q:
                theta += shift_delta
            (apply_rx_dm if mixed else apply_rx_sv)(reg, theta, q, n)
            noise_after(p1, (q,))

    return probs_dm(reg) if mixed else probs_sv(reg)
