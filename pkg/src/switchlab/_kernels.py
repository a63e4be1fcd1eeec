"""Cyclic Jacobi eigensolver for complex Hermitian matrices.

Two interchangeable backends run the same sweep schedule: a numba-compiled
scalar loop (the default whenever numba imports) and a vectorized pure-numpy
path. Set ``SWITCHLAB_DISABLE_NUMBA=1`` to force the numpy path; both produce
identical rotations, so results do not depend on the backend.
"""

import os

import numpy as np

OFFDIAG_TOL = 1e-12
MAX_SWEEPS = 100

_DISABLE_NUMBA = os.environ.get("SWITCHLAB_DISABLE_NUMBA", "0") not in ("", "0")


def _jacobi_sweeps_loops(a, v, tol, max_sweeps):
    # Diagonalizes Hermitian `a` in place, accumulating eigenvectors in `v`.
    # Returns the sweep count on convergence, -1 otherwise. Scalar loops only,
    # so the function stays numba-compilable.
    n = a.shape[0]
    for sweep in range(max_sweeps):
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                off += 2.0 * (a[i, j].real ** 2 + a[i, j].imag ** 2)
        if np.sqrt(off) < tol:
            return sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r < 1e-300:
                    continue
                ph = apq / r
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                sph = s * ph
                sphc = s * np.conj(ph)
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - sphc * akq
                    a[k, q] = sph * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - sph * aqk
                    a[q, k] = sphc * apk + c * aqk
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - sphc * vkq
                    v[k, q] = sph * vkp + c * vkq
    return -1


def _jacobi_sweeps_numpy(a, v, tol, max_sweeps):
    # Same rotations as the loop kernel, applied with numpy slice updates.
    n = a.shape[0]
    for sweep in range(max_sweeps):
        off = np.sqrt(2.0 * np.sum(np.abs(np.triu(a, 1)) ** 2))
        if off < tol:
            return sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r < 1e-300:
                    continue
                ph = apq / r
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                sph = s * ph
                sphc = s * np.conj(ph)
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - sphc * col_q
                a[:, q] = sph * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - sph * row_q
                a[q, :] = sphc * row_p + c * row_q
                vcol_p = v[:, p].copy()
                vcol_q = v[:, q].copy()
                v[:, p] = c * vcol_p - sphc * vcol_q
                v[:, q] = sph * vcol_p + c * vcol_q
    return -1


if not _DISABLE_NUMBA:
    try:
        from numba import njit

        _jacobi_sweeps = njit(cache=True)(_jacobi_sweeps_loops)
        BACKEND = "numba"
    except ImportError:
        _jacobi_sweeps = _jacobi_sweeps_numpy
        BACKEND = "numpy"
else:
    _jacobi_sweeps = _jacobi_sweeps_numpy
    BACKEND = "numpy"


def jacobi_eigh(matrix, tol=OFFDIAG_TOL, max_sweeps=MAX_SWEEPS):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns (eigenvalues ascending, eigenvector columns). The caller is
    responsible for checking hermiticity; the input is symmetrized here so
    roundoff-level asymmetry cannot bias the sweep.
    """
    a = np.asarray(matrix, dtype=np.complex128)
    n = a.shape[0]
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=np.complex128)
    sweeps = _jacobi_sweeps(a, v, float(tol), int(max_sweeps))
    if sweeps < 0:
        raise RuntimeError("Jacobi sweep did not converge; input likely not Hermitian")
    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]
