# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled gate kernels.

Signature-identical twin of :mod:`fcqbm._kernels_py`; see that module for the
qubit/bit conventions and the noise scheme codes.
"""

from libc.math cimport cos, sin, sqrt

import numpy as np

COMPILED = True

SCHEME_NONE = 0
SCHEME_BROADCAST = 1
SCHEME_LOCAL = 2

SHIFT_NONE = 0
SHIFT_RX = 1
SHIFT_RZ = 2
SHIFT_RZZ = 3

ctypedef double complex cplx


# ---------------------------------------------------------------------------
# statevector kernels
# ---------------------------------------------------------------------------

cdef void _ap1_sv(cplx[::1] st, cplx u00, cplx u01, cplx u10, cplx u11,
                  int q, int n) nogil:
    cdef int m = 1 << (n - 1 - q)
    cdef int dim = 1 << n
    cdef int i, j
    cdef cplx a, b
    for i in range(dim):
        if i & m:
            continue
        j = i | m
        a = st[i]
        b = st[j]
        st[i] = u00 * a + u01 * b
        st[j] = u10 * a + u11 * b


cdef void _rz_sv(cplx[::1] st, double theta, int q, int n) nogil:
    cdef int m = 1 << (n - 1 - q)
    cdef int dim = 1 << n
    cdef int i
    cdef cplx ph0 = cos(0.5 * theta) - 1j * sin(0.5 * theta)
    cdef cplx ph1 = ph0.conjugate()
    for i in range(dim):
        st[i] = st[i] * (ph1 if i & m else ph0)


cdef void _rzz_sv(cplx[::1] st, double theta, int q1, int q2, int n) nogil:
    cdef int m1 = 1 << (n - 1 - q1)
    cdef int m2 = 1 << (n - 1 - q2)
    cdef int dim = 1 << n
    cdef int i
    cdef cplx same = cos(0.5 * theta) - 1j * sin(0.5 * theta)
    cdef cplx diff = same.conjugate()
    for i in range(dim):
        if ((i & m1) != 0) == ((i & m2) != 0):
            st[i] = st[i] * same
        else:
            st[i] = st[i] * diff


def apply_1q_sv(cplx[::1] state, cplx u00, cplx u01, cplx u10, cplx u11,
                int q, int n):
    _ap1_sv(state, u00, u01, u10, u11, q, n)


def apply_h_sv(cplx[::1] state, int q, int n):
    cdef double s = 1.0 / sqrt(2.0)
    _ap1_sv(state, s, s, s, -s, q, n)


def apply_rx_sv(cplx[::1] state, double theta, int q, int n):
    cdef cplx c = cos(0.5 * theta)
    cdef cplx s = -1j * sin(0.5 * theta)
    _ap1_sv(state, c, s, s, c, q, n)


def apply_rz_sv(cplx[::1] state, double theta, int q, int n):
    _rz_sv(state, theta, q, n)


def apply_rzz_sv(cplx[::1] state, double theta, int q1, int q2, int n):
    _rzz_sv(state, theta, q1, q2, n)


# ---------------------------------------------------------------------------
# density-matrix kernels
# ---------------------------------------------------------------------------

cdef void _ap1_dm(cplx[:, ::1] rho, cplx u00, cplx u01, cplx u10, cplx u11,
                  int q, int n) nogil:
    cdef int m = 1 << (n - 1 - q)
    cdef int dim = 1 << n
    cdef int r, c
    cdef cplx a, b
    cdef cplx c00 = u00.conjugate(), c01 = u01.conjugate()
    cdef cplx c10 = u10.conjugate(), c11 = u11.conjugate()
    for c in range(dim):
        for r in range(dim):
            if r & m:
                continue
            a = rho[r, c]
            b = rho[r | m, c]
            rho[r, c] = u00 * a + u01 * b
            rho[r | m, c] = u10 * a + u11 * b
    for r in range(dim):
        for c in range(dim):
            if c & m:
                continue
            a = rho[r, c]
            b = rho[r, c | m]
            rho[r, c] = a * c00 + b * c01
            rho[r, c | m] = a * c10 + b * c11


cdef void _rz_dm(cplx[:, ::1] rho, double theta, int q, int n) nogil:
    cdef int m = 1 << (n - 1 - q)
    cdef int dim = 1 << n
    cdef int r, c, br, bc
    cdef cplx ph = cos(theta) - 1j * sin(theta)
    cdef cplx phc = ph.conjugate()
    for r in range(dim):
        br = (r & m) != 0
        for c in range(dim):
            bc = (c & m) != 0
            if br == bc:
                continue
            rho[r, c] = rho[r, c] * (ph if br == 0 else phc)


cdef void _rzz_dm(cplx[:, ::1] rho, double theta, int q1, int q2, int n) nogil:
    cdef int m1 = 1 << (n - 1 - q1)
    cdef int m2 = 1 << (n - 1 - q2)
    cdef int dim = 1 << n
    cdef int r, c, pr, pc
    cdef cplx ph = cos(theta) - 1j * sin(theta)
    cdef cplx phc = ph.conjugate()
    for r in range(dim):
        pr = ((r & m1) != 0) != ((r & m2) != 0)
        for c in range(dim):
            pc = ((c & m1) != 0) != ((c & m2) != 0)
            if pr == pc:
                continue
            rho[r, c] = rho[r, c] * (ph if pr == 0 else phc)


cdef void _dep1(cplx[:, ::1] rho, int q, double p, int n) nogil:
    cdef int m = 1 << (n - 1 - q)
    cdef int dim = 1 << n
    cdef int r, c
    cdef double lam = 1.0 - 4.0 * p / 3.0
    cdef double g = 2.0 * p / 3.0
    cdef cplx a, b, cc, d, mix
    if p == 0.0:
        return
    for r in range(dim):
        if r & m:
            continue
        for c in range(dim):
            if c & m:
                continue
            a = rho[r, c]
            b = rho[r, c | m]
            cc = rho[r | m, c]
            d = rho[r | m, c | m]
            mix = g * (a + d)
            rho[r, c] = lam * a + mix
            rho[r | m, c | m] = lam * d + mix
            rho[r, c | m] = lam * b
            rho[r | m, c] = lam * cc


cdef void _dep2(cplx[:, ::1] rho, int q1, int q2, double p, int n) nogil:
    cdef int m1 = 1 << (n - 1 - q1)
    cdef int m2 = 1 << (n - 1 - q2)
    cdef int dim = 1 << n
    cdef int r, c, rp, cp, ro, co
    cdef int offs[4]
    cdef double lam = 1.0 - 16.0 * p / 15.0
    cdef cplx mix, e
    if p == 0.0:
        return
    offs[0] = 0
    offs[1] = m2
    offs[2] = m1
    offs[3] = m1 | m2
    for r in range(dim):
        if r & (m1 | m2):
            continue
        for c in range(dim):
            if c & (m1 | m2):
                continue
            mix = 0
            for rp in range(4):
                mix = mix + rho[r + offs[rp], c + offs[rp]]
            mix = 0.25 * mix
            for rp in range(4):
                ro = r + offs[rp]
                for cp in range(4):
                    co = c + offs[cp]
                    e = rho[ro, co]
                    if rp == cp:
                        rho[ro, co] = lam * e + (1.0 - lam) * mix
                    else:
                        rho[ro, co] = lam * e


def apply_1q_dm(cplx[:, ::1] rho, cplx u00, cplx u01, cplx u10, cplx u11,
                int q, int n):
    _ap1_dm(rho, u00, u01, u10, u11, q, n)


def apply_h_dm(cplx[:, ::1] rho, int q, int n):
    cdef double s = 1.0 / sqrt(2.0)
    _ap1_dm(rho, s, s, s, -s, q, n)


def apply_rx_dm(cplx[:, ::1] rho, double theta, int q, int n):
    cdef cplx c = cos(0.5 * theta)
    cdef cplx s = -1j * sin(0.5 * theta)
    _ap1_dm(rho, c, s, s, c, q, n)


def apply_rz_dm(cplx[:, ::1] rho, double theta, int q, int n):
    _rz_dm(rho, theta, q, n)


def apply_rzz_dm(cplx[:, ::1] rho, double theta, int q1, int q2, int n):
    _rzz_dm(rho, theta, q1, q2, n)


def depolarize_1q(cplx[:, ::1] rho, int q, double p, int n):
    _dep1(rho, q, p, n)


def depolarize_2q(cplx[:, ::1] rho, int q1, int q2, double p, int n):
    _dep2(rho, q1, q2, p, n)


# ---------------------------------------------------------------------------
# measurement
# ---------------------------------------------------------------------------

def probs_sv(cplx[::1] state):
    cdef int dim = state.shape[0]
    cdef int i
    out = np.empty(dim, dtype=np.float64)
    cdef double[::1] o = out
    for i in range(dim):
        o[i] = state[i].real * state[i].real + state[i].imag * state[i].imag
    return out


def probs_dm(cplx[:, ::1] rho):
    cdef int dim = rho.shape[0]
    cdef int i
    cdef double v
    out = np.empty(dim, dtype=np.float64)
    cdef double[::1] o = out
    for i in range(dim):
        v = rho[i, i].real
        o[i] = v if v > 0.0 else 0.0
    return out


# ---------------------------------------------------------------------------
# fused QAOA circuit evaluation (the training hot path)
# ---------------------------------------------------------------------------

cdef void _noise_after_dm(cplx[:, ::1] rho, double p, int scheme,
                          int qa, int qb, int n) nogil:
    cdef int q
    if scheme == 0 or p == 0.0:
        return
    if scheme == 1:
        for q in range(n):
            _dep1(rho, q, p, n)
    elif qb < 0:
        _dep1(rho, qa, p, n)
    else:
        _dep2(rho, qa, qb, p, n)


def qaoa_probabilities(int n, double[::1] b, double[::1] w_pairs,
                       long[::1] pair_a, long[::1] pair_b,
                       double[::1] beta, double[::1] gamma,
                       double p1, double p2, int scheme, int mixed,
                       int shift_kind=0, int shift_layer=-1, int shift_pos=-1,
                       double shift_delta=0.0):
    """Fused circuit evaluation; see the numpy twin for the contract."""
    cdef int dim = 1 << n
    cdef int p_layers = beta.shape[0]
    cdef int n_pairs = w_pairs.shape[0]
    cdef int k, q, e
    cdef double theta
    cdef double s = 1.0 / sqrt(2.0)
    cdef cplx ch, sh
    cdef cplx[::1] sv
    cdef cplx[:, ::1] dm

    if mixed:
        reg2 = np.zeros((dim, dim), dtype=np.complex128)
        dm = reg2
        dm[0, 0] = 1.0
        for q in range(n):
            _ap1_dm(dm, s, s, s, -s, q, n)
            _noise_after_dm(dm, p1, scheme, q, -1, n)
        for k in range(p_layers):
            for q in range(n):
                theta = -2.0 * gamma[k] * b[q]
                if shift_kind == 2 and shift_layer == k and shift_pos == q:
                    theta += shift_delta
                _rz_dm(dm, theta, q, n)
                _noise_after_dm(dm, p1, scheme, q, -1, n)
            for e in range(n_pairs):
                theta = -2.0 * gamma[k] * w_pairs[e]
                if shift_kind == 3 and shift_layer == k and shift_pos == e:
                    theta += shift_delta
                _rzz_dm(dm, theta, <int> pair_a[e], <int> pair_b[e], n)
                _noise_after_dm(dm, p2, scheme, <int> pair_a[e],
                                <int> pair_b[e], n)
            for q in range(n):
                theta = -2.0 * beta[k]
                if shift_kind == 1 and shift_layer == k and shift_pos == q:
                    theta += shift_delta
                _ap1_dm(dm, cos(0.5 * theta), -1j * sin(0.5 * theta),
                        -1j * sin(0.5 * theta), cos(0.5 * theta), q, n)
                _noise_after_dm(dm, p1, scheme, q, -1, n)
        return probs_dm(dm)

    reg1 = np.zeros(dim, dtype=np.complex128)
    sv = reg1
    sv[0] = 1.0
    for q in range(n):
        _ap1_sv(sv, s, s, s, -s, q, n)
    for k in range(p_layers):
        for q in range(n):
            theta = -2.0 * gamma[k] * b[q]
            if shift_kind == 2 and shift_layer == k and shift_pos == q:
                theta += shift_delta
            _rz_sv(sv, theta, q, n)
        for e in range(n_pairs):
            theta = -2.0 * gamma[k] * w_pairs[e]
            if shift_kind == 3 and shift_layer == k and shift_pos == e:
                theta += shift_delta
            _rzz_sv(sv, theta, <int> pair_a[e], <int> pair_b[e], n)
        for q in range(n):
            theta = -2.0 * beta[k]
            if shift_kind == 1 and shift_layer == k and shift_pos == q:
                theta += shift_delta
            ch = cos(0.5 * theta)
            sh = -1j * sin(0.5 * theta)
            _ap1_sv(sv, ch, sh, sh, ch, q, n)
    return probs_sv(sv)
