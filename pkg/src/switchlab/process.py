"""Bipartite process matrices.

A process matrix W on A_in (x) A_out (x) B_in (x) B_out assigns the joint
outcome probability Tr[W (M (x) N)] to local instrument elements M, N without
presupposing an order between the two laboratories. Instrument-element Choi
operators entering the probability rule must use the TRANSPOSED convention;
the PLAIN convention is rejected so the two can never be mixed, which would
silently transpose one tensor factor.
"""

from dataclasses import dataclass

import numpy as np

from .linalg import (
    PAULI_X,
    PAULI_Z,
    hermitian_eigen,
    is_hermitian,
    kron,
    partial_trace,
    permute_subsystems,
)
from .ops import Convention, choi_of_operation, rand_cptp

__all__ = [
    "ProcessMatrix",
    "ValidationReport",
    "probability",
    "state_process",
    "channel_process",
    "channel_process_reverse",
    "causal_mixture",
    "hs_basis",
    "hs_decompose",
    "hs_reconstruct",
    "validate_process",
    "ocb_process",
    "no_signaling_a_to_b",
    "no_signaling_b_to_a",
]


@dataclass(frozen=True)
class ProcessMatrix:
    """Positive operator on A_in (x) A_out (x) B_in (x) B_out.

    Hermiticity and positivity are enforced on construction; the trace
    condition Tr W = d_A_out * d_B_out and the normalization over CPTP pairs
    are certified by :func:`validate_process`.
    """

    dims: tuple  # (d_a_in, d_a_out, d_b_in, d_b_out)
    matrix: np.ndarray = None

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        m = np.asarray(self.matrix, dtype=complex)
        total = int(np.prod(dims))
        if m.shape != (total, total):
            raise ValueError(f"matrix shape {m.shape} does not match dims {dims}")
        if not is_hermitian(m):
            raise ValueError("process matrix is not Hermitian")
        w, _ = hermitian_eigen(m)
        if w[0] < -1e-9:
            raise ValueError(f"process matrix is not PSD (min eigenvalue {w[0]:.3e})")
        object.__setattr__(self, "matrix", m)

    @property
    def d_a_in(self):
        return self.dims[0]

    @property
    def d_a_out(self):
        return self.dims[1]

    @property
    def d_b_in(self):
        return self.dims[2]

    @property
    def d_b_out(self):
        return self.dims[3]


def _require_transposed(choi):
    if choi.convention is not Convention.TRANSPOSED:
        raise ValueError("probability rule requires TRANSPOSED-convention Choi operators")


def probability(w, choi_a, choi_b):
    """Joint probability Tr[W (M (x) N)] for one instrument element each."""
    _require_transposed(choi_a)
    _require_transposed(choi_b)
    if (choi_a.d_in, choi_a.d_out) != (w.d_a_in, w.d_a_out):
        raise ValueError("Alice Choi dimensions do not match the process")
    if (choi_b.d_in, choi_b.d_out) != (w.d_b_in, w.d_b_out):
        raise ValueError("Bob Choi dimensions do not match the process")
    val = np.trace(w.matrix @ kron(choi_a.matrix, choi_b.matrix))
    if abs(val.imag) > 1e-9:
        raise ValueError(f"probability has imaginary part {val.imag:.3e}")
    return float(val.real)


def state_process(rho, dims):
    """Process matrix of a shared state: W = rho^{A_in B_in} (x) 1^{A_out B_out}."""
    d_a_in, d_a_out, d_b_in, d_b_out = dims
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (d_a_in * d_b_in,) * 2:
        raise ValueError("state must live on A_in (x) B_in")
    if not is_hermitian(rho) or abs(np.trace(rho).real - 1.0) > 1e-9:
        raise ValueError("state is not a density operator")
    w, _ = hermitian_eigen(rho)
    if w[0] < -1e-9:
        raise ValueError("state is not a density operator")
    full = kron(rho, np.eye(d_a_out * d_b_out))
    # built on (A_in, B_in, A_out, B_out); reorder to (A_in, A_out, B_in, B_out)
    ordered, _ = permute_subsystems(full, (d_a_in, d_b_in, d_a_out, d_b_out), (0, 2, 1, 3))
    return ProcessMatrix(dims, ordered)


def _check_cptp_choi(choi):
    _require_transposed(choi)
    marg = partial_trace(choi.matrix, (choi.d_in, choi.d_out), keep=(0,))
    if np.abs(marg - np.eye(choi.d_in)).max() > 1e-9:
        raise ValueError("channel Choi is not trace-preserving")


def channel_process(rho_b, channel_choi, d_a_out=None):
    """Signaling process B -> A: Bob receives rho_b, and a channel carries his
    output to Alice.  W = 1^{A_out} (x) (C^{B_out A_in})^T (x) rho^{B_in}."""
    _check_cptp_choi(channel_choi)
    rho_b = np.asarray(rho_b, dtype=complex)
    d_b_in = rho_b.shape[0]
    d_b_out, d_a_in = channel_choi.d_in, channel_choi.d_out
    d_a_out = d_a_in if d_a_out is None else int(d_a_out)
    full = kron(np.eye(d_a_out), channel_choi.matrix.T, rho_b)
    # built on (A_out, B_out, A_in, B_in); reorder to (A_in, A_out, B_in, B_out)
    ordered, _ = permute_subsystems(full, (d_a_out, d_b_out, d_a_in, d_b_in), (2, 0, 3, 1))
    return ProcessMatrix((d_a_in, d_a_out, d_b_in, d_b_out), ordered)


def channel_process_reverse(rho_a, channel_choi, d_b_out=None):
    """Signaling process A -> B, the mirror image of :func:`channel_process`:
    W = rho^{A_in} (x) (C^{A_out B_in})^T (x) 1^{B_out}."""
    _check_cptp_choi(channel_choi)
    rho_a = np.asarray(rho_a, dtype=complex)
    d_a_in = rho_a.shape[0]
    d_a_out, d_b_in = channel_choi.d_in, channel_choi.d_out
    d_b_out = d_b_in if d_b_out is None else int(d_b_out)
    full = kron(rho_a, channel_choi.matrix.T, np.eye(d_b_out))
    return ProcessMatrix((d_a_in, d_a_out, d_b_in, d_b_out), full)


def causal_mixture(w1, w2, q):
    """Convex mixture q*w1 + (1-q)*w2 of two process matrices."""
    if not 0.0 <= q <= 1.0:
        raise ValueError("mixing weight must lie in [0, 1]")
    if w1.dims != w2.dims:
        raise ValueError("process dimensions disagree")
    return ProcessMatrix(w1.dims, q * w1.matrix + (1.0 - q) * w2.matrix)


def _gell_mann(d):
    # Generalized Gell-Mann matrices scaled so Tr(s_i s_j) = d delta_ij.
    mats = [np.eye(d, dtype=complex)]
    scale = np.sqrt(d / 2.0)
    for j in range(d):
        for k in range(j + 1, d):
            sym = np.zeros((d, d), dtype=complex)
            sym[j, k] = sym[k, j] = 1.0
            mats.append(scale * sym)
            anti = np.zeros((d, d), dtype=complex)
            anti[j, k] = -1j
            anti[k, j] = 1j
            mats.append(scale * anti)
    for l in range(1, d):
        diag = np.zeros((d, d), dtype=complex)
        for m in range(l):
            diag[m, m] = 1.0
        diag[l, l] = -l
        diag *= np.sqrt(d / (l * (l + 1.0)))
        mats.append(diag)
    return mats


def hs_basis(d):
    """Hermitian operator basis with s_0 = 1, Tr(s_i s_j) = d delta_ij,
    traceless otherwise. Reduces to the Pauli basis at d = 2."""
    return _gell_mann(d)


def hs_decompose(w):
    """Coefficients w_abcd of W = sum w_abcd s_a (x) s_b (x) s_c (x) s_d.

    Accepts a :class:`ProcessMatrix` or a bare Hermitian matrix whose four
    tensor factors share one local dimension.
    """
    if isinstance(w, ProcessMatrix):
        dims = w.dims
        if len(set(dims)) != 1:
            raise ValueError("Hilbert-Schmidt decomposition needs equal local dimensions")
        d = dims[0]
        matrix = w.matrix
    else:
        matrix = np.asarray(w, dtype=complex)
        d = round(matrix.shape[0] ** 0.25)
        if d ** 4 != matrix.shape[0]:
            raise ValueError("matrix dimension is not a fourth power")
    basis = hs_basis(d)
    n = d * d
    coeffs = np.zeros((n, n, n, n), dtype=float)
    norm = float(d) ** 4
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for e in range(n):
                    term = kron(basis[a], basis[b], basis[c], basis[e])
                    val = np.trace(matrix @ term) / norm
                    if abs(val.imag) > 1e-9:
                        raise ValueError("non-real Hilbert-Schmidt coefficient")
                    coeffs[a, b, c, e] = val.real
    return coeffs


def hs_reconstruct(coeffs, d):
    """Inverse of :func:`hs_decompose` (returns the bare matrix)."""
    basis = hs_basis(d)
    n = d * d
    out = np.zeros((d ** 4, d ** 4), dtype=complex)
    for a in range(n):
        for b in range(n):
            for c in range(n):
                for e in range(n):
                    if coeffs[a, b, c, e] != 0.0:
                        out += coeffs[a, b, c, e] * kron(basis[a], basis[b], basis[c], basis[e])
    return out


@dataclass(frozen=True)
class ValidationReport:
    psd: bool
    trace_ok: bool
    max_norm_deviation: float

    @property
    def ok(self):
        return self.psd and self.trace_ok


def validate_process(w, samples, rng):
    """Certify the two process conditions plus randomized normalization.

    Draws `samples` independent CPTP Choi pairs and reports the largest
    deviation of Tr[W (M (x) N)] from one.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    wvals, _ = hermitian_eigen(w.matrix)
    psd = bool(wvals[0] >= -1e-9)
    trace_ok = abs(np.trace(w.matrix).real - w.d_a_out * w.d_b_out) < 1e-6
    worst = 0.0
    for _ in range(samples):
        ma = choi_of_operation(rand_cptp(w.d_a_in, w.d_a_out, 2, rng), Convention.TRANSPOSED)
        nb = choi_of_operation(rand_cptp(w.d_b_in, w.d_b_out, 2, rng), Convention.TRANSPOSED)
        worst = max(worst, abs(probability(w, ma, nb) - 1.0))
    return ValidationReport(psd, trace_ok, worst)


def ocb_process():
    """The 16x16 process violating the causal inequality:
    W = 1/4 [1 + (s_z^{A_out} s_z^{B_in} + s_z^{A_in} s_x^{B_in} s_z^{B_out})/sqrt(2)].
    """
    i2 = np.eye(2)
    term1 = kron(i2, PAULI_Z, PAULI_Z, i2)
    term2 = kron(PAULI_Z, i2, PAULI_X, PAULI_Z)
    w = 0.25 * (np.eye(16) + (term1 + term2) / np.sqrt(2.0))
    return ProcessMatrix((2, 2, 2, 2), w)


def _marginal_invariance(w, factor):
    # True iff W is invariant under replacing `factor` by the maximally mixed
    # marginal, i.e. W = 1/d (x) Tr_factor W on that slot.
    dims = w.dims
    reduced = partial_trace(w.matrix, dims, keep=[i for i in range(4) if i != factor])
    d = dims[factor]
    rebuilt = kron(np.eye(d) / d, reduced)
    order = [factor] + [i for i in range(4) if i != factor]
    inverse = [order.index(i) for i in range(4)]
    rebuilt, _ = permute_subsystems(rebuilt, [dims[i] for i in order], inverse)
    return bool(np.abs(rebuilt - w.matrix).max() <= 1e-9)


def no_signaling_a_to_b(w):
    """Diagnostic: W carries no A -> B signaling (trivial on A_out)."""
    return _marginal_invariance(w, factor=1)


def no_signaling_b_to_a(w):
    """Diagnostic: W carries no B -> A signaling (trivial on B_out)."""
    return _marginal_invariance(w, factor=3)
