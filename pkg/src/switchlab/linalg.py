"""Dense complex linear algebra at small dimension.

Everything operates on plain complex128 numpy arrays. States, operators,
Choi matrices and process matrices all use the same carrier; multipartite
operators follow a big-endian tensor convention (the leftmost factor is the
most significant index), so ``kron(a, b)`` puts ``a`` on the first factor.
"""

import numpy as np

from ._kernels import BACKEND, jacobi_eigh

__all__ = [
    "ID2",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "DEFAULT_TOL",
    "backend_name",
    "close",
    "dagger",
    "is_hermitian",
    "is_psd",
    "is_unitary",
    "kron",
    "hermitian_eigen",
    "partial_trace",
    "permute_subsystems",
    "sqrtm_psd",
]

DEFAULT_TOL = 1e-9

ID2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def backend_name():
    """Active eigensolver backend, "numba" or "numpy"."""
    return BACKEND


def close(a, b, tol=DEFAULT_TOL):
    """Entrywise equality within an absolute tolerance."""
    return bool(np.abs(np.asarray(a) - np.asarray(b)).max() <= tol)


def dagger(m):
    return np.asarray(m).conj().T


def kron(*matrices):
    """Kronecker product of one or more matrices, leftmost factor first."""
    out = np.asarray(matrices[0], dtype=complex)
    for m in matrices[1:]:
        out = np.kron(out, np.asarray(m, dtype=complex))
    return out


def _check_dims(m, dims):
    m = np.asarray(m, dtype=complex)
    total = int(np.prod(dims))
    if m.shape != (total, total):
        raise ValueError(f"matrix of shape {m.shape} does not match dims {tuple(dims)}")
    return m, total


def permute_subsystems(m, dims, perm):
    """Reorder the tensor factors of a square operator.

    `perm[i]` names which of the original factors lands at position i.
    """
    m, total = _check_dims(m, dims)
    k = len(dims)
    if sorted(perm) != list(range(k)):
        raise ValueError(f"perm {perm} is not a permutation of range({k})")
    t = m.reshape(tuple(dims) * 2)
    axes = list(perm) + [k + p for p in perm]
    new_dims = [dims[p] for p in perm]
    return t.transpose(axes).reshape(total, total), new_dims


def partial_trace(m, dims, keep):
    """Trace out every tensor factor not listed in `keep`.

    Returns the operator on the kept factors, in their original relative
    order. An empty `keep` returns the scalar trace as a 1x1 matrix.
    """
    m, _ = _check_dims(m, dims)
    k = len(dims)
    keep = sorted(set(int(i) for i in keep))
    if keep and (keep[0] < 0 or keep[-1] >= k):
        raise ValueError(f"keep indices {keep} out of range for {k} factors")
    t = m.reshape(tuple(dims) * 2)
    # Contract row/col axes of the traced factors pairwise.
    for i in reversed(range(k)):
        if i not in keep:
            t = np.trace(t, axis1=i, axis2=i + (t.ndim // 2))
    d_keep = int(np.prod([dims[i] for i in keep])) if keep else 1
    return t.reshape(d_keep, d_keep)


def is_hermitian(m, tol=DEFAULT_TOL):
    m = np.asarray(m)
    return bool(np.abs(m - m.conj().T).max() <= tol)


def is_unitary(m, tol=DEFAULT_TOL):
    m = np.asarray(m)
    if m.shape[0] != m.shape[1]:
        return False
    return close(m.conj().T @ m, np.eye(m.shape[0]), tol)


def hermitian_eigen(m, tol=DEFAULT_TOL):
    """Spectral decomposition of a Hermitian matrix.

    Returns (eigenvalues ascending, unitary matrix of eigenvector columns),
    computed with cyclic Jacobi rotations. Raises ValueError for
    non-Hermitian input.
    """
    m = np.asarray(m, dtype=complex)
    if not is_hermitian(m, tol):
        raise ValueError("matrix is not Hermitian within tolerance")
    return jacobi_eigh(m)


def is_psd(m, tol=DEFAULT_TOL):
    """True iff the Hermitian matrix has no eigenvalue below -tol."""
    w, _ = hermitian_eigen(m, tol)
    return bool(w[0] >= -tol)


def sqrtm_psd(m, tol=DEFAULT_TOL):
    """Hermitian square root of a positive semidefinite matrix."""
    w, v = hermitian_eigen(m, tol)
    if w[0] < -tol:
        raise ValueError("matrix is not positive semidefinite")
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T
