"""Cyclic Jacobi eigensolver for small Hermitian matrices.

The spin Hamiltonians handled here are 3x3 or 4x4, and calibration scans
diagonalize tens of thousands of them, so the solver operates on stacks:
``a`` of shape (..., n, n) is reduced simultaneously with vectorized
rotations.  Eigenvalues come back sorted ascending with the matching
eigenvector columns, mirroring ``numpy.linalg.eigh``.

The rotation annihilating the (p, q) entry of a Hermitian matrix is the
classical real Jacobi rotation applied to |a_pq| together with the phase
alpha = a_pq / |a_pq| absorbed into the off-diagonal of the unitary.
Convergence is quadratic; a handful of sweeps reaches machine precision
for n <= 4.
"""

import numpy as np

_TINY = 1e-300


def jacobi_eigh(a, tol: float = 1e-15, max_sweeps: int = 60):
    """Diagonalize a stack of Hermitian matrices by cyclic Jacobi sweeps.

    Parameters
    ----------
    a : array_like, shape (..., n, n)
        Hermitian matrices (real symmetric input is promoted as needed).
    tol : float
        Sweep termination: off-diagonal Frobenius norm below tol * ||a||_F.
    max_sweeps : int
        Hard cap on the number of cyclic sweeps.

    Returns
    -------
    w : ndarray, shape (..., n)
        Eigenvalues, ascending.
    v : ndarray, shape (..., n, n)
        Eigenvector columns, ``a @ v[..., :, k] = w[..., k] * v[..., :, k]``.
    """
    a = np.asarray(a)
    complex_input = np.iscomplexobj(a)
    h = np.array(a, dtype=np.complex128 if complex_input else np.float64, copy=True)
    if h.ndim < 2 or h.shape[-1] != h.shape[-2]:
        raise ValueError(f"expected square matrices, got shape {h.shape}")
    lead = h.shape[:-2]
    n = h.shape[-1]
    h = h.reshape(-1, n, n)
    nbatch = h.shape[0]

    v = np.zeros_like(h)
    v[:, np.arange(n), np.arange(n)] = 1.0

    scale = np.sqrt((np.abs(h) ** 2).sum(axis=(1, 2)))
    thresh = np.maximum(tol * scale, _TINY)
    pairs = [(p, q) for p in range(n) for q in range(p + 1, n)]

    for _ in range(max_sweeps):
        off2 = (np.abs(h) ** 2).sum(axis=(1, 2)) - (
            np.abs(h[:, np.arange(n), np.arange(n)]) ** 2
        ).sum(axis=1)
        if np.all(off2 <= thresh * thresh):
            break
        for p, q in pairs:
            apq = h[:, p, q]
            mag = np.abs(apq)
            live = mag > _TINY
            if not live.any():
                continue
            safe = np.where(live, mag, 1.0)
            alpha = np.where(live, apq / safe, 1.0)
            theta = (h[:, q, q].real - h[:, p, p].real) / (2.0 * safe)
            # t = sign(theta)/(|theta| + sqrt(theta^2+1)); hypot avoids overflow,
            # and theta = 0 takes the 45-degree rotation (t = 1).
            t = np.where(theta >= 0.0, 1.0, -1.0) / (np.abs(theta) + np.hypot(theta, 1.0))
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = np.where(live, t * c, 0.0)
            c = np.where(live, c, 1.0)

            # J acts on the (p, q) plane: columns transform with (c, s*alpha),
            # rows with the conjugate.  Two rank-1 style updates keep h Hermitian.
            rp = h[:, p, :].copy()
            rq = h[:, q, :].copy()
            h[:, p, :] = c[:, None] * rp - (s * alpha)[:, None] * rq
            h[:, q, :] = (s * np.conj(alpha))[:, None] * rp + c[:, None] * rq
            cp = h[:, :, p].copy()
            cq = h[:, :, q].copy()
            h[:, :, p] = c[:, None] * cp - (s * np.conj(alpha))[:, None] * cq
            h[:, :, q] = (s * alpha)[:, None] * cp + c[:, None] * cq
            h[:, p, q] = np.where(live, 0.0, h[:, p, q])
            h[:, q, p] = np.where(live, 0.0, h[:, q, p])

            vp = v[:, :, p].copy()
            vq = v[:, :, q].copy()
            v[:, :, p] = c[:, None] * vp - (s * np.conj(alpha))[:, None] * vq
            v[:, :, q] = (s * alpha)[:, None] * vp + c[:, None] * vq

    w = h[:, np.arange(n), np.arange(n)].real
    order = np.argsort(w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    v = np.take_along_axis(v, order[:, None, :], axis=2)
    return w.reshape(*lead, n), v.reshape(*lead, n, n)


def eigh_backward_error(a, w, v) -> np.ndarray:
    """max_k ||a v_k - w_k v_k||_2, one value per matrix in the stack."""
    a = np.asarray(a, dtype=np.complex128)
    res = a @ v - v * w[..., None, :]
    return np.sqrt((np.abs(res) ** 2).sum(axis=-2)).max(axis=-1)
