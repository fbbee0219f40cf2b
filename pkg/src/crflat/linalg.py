"""Realification helpers and small subspace utilities.

Real tangent vectors of C^n are kept as complex n-vectors; stacking
[Re, Im] moves them to R^{2n} when numpy linear algebra needs a real view.
"""

from __future__ import annotations

import numpy as np


def c2r(v):
    """Complex (..., n) -> real (..., 2n) as [Re, Im]."""
    v = np.asarray(v, dtype=complex)
    return np.concatenate([v.real, v.imag], axis=-1)


def r2c(v):
    v = np.asarray(v, dtype=float)
    n = v.shape[-1] // 2
    return v[..., :n] + 1j * v[..., n:]


def real_jacobian(Fz, Fzb):
    """Real 2k x 2n Jacobian of a map with Wirtinger derivatives Fz, Fzb."""
    Fz = np.atleast_2d(np.asarray(Fz, dtype=complex))
    Fzb = np.atleast_2d(np.asarray(Fzb, dtype=complex))
    top = np.concatenate([(Fz + Fzb).real, (Fzb - Fz).imag], axis=1)
    bot = np.concatenate([(Fz + Fzb).imag, (Fz - Fzb).real], axis=1)
    return np.concatenate([top, bot], axis=0)


def real_gradient_rows(dz_rows):
    """Rows d rho(v) = 2 Re(drho . v) for real-valued rho: (k, n) -> (k, 2n)."""
    dz_rows = np.atleast_2d(np.asarray(dz_rows, dtype=complex))
    return 2.0 * np.concatenate([dz_rows.real, -dz_rows.imag], axis=1)


def orth_rows(rows, rcond=1e-12):
    """Orthonormal basis (rows) of the row span of a real matrix."""
    rows = np.atleast_2d(rows)
    u, s, vt = np.linalg.svd(rows, full_matrices=False)
    rank = int(np.sum(s > rcond * (s[0] if s.size else 1.0)))
    return vt[:rank]

def kernel_rows(rows, kdim=None, rcond=1e-12):
    """Orthonormal basis (rows) of the kernel of a matrix given by rows."""
    rows = np.atleast_2d(rows)
    m, n = rows.shape
    u, s, vt = np.linalg.svd(rows, full_matrices=True)
    if kdim is None:
        smax = s[0] if s.size else 0.0
        rank = int(np.sum(s > rcond * (smax + 1e-300)))
        kdim = n - rank
    return vt[n - kdim:]


def canonical_phase(v):
    """Rotate a complex vector so its largest-magnitude entry is real > 0."""
    v = np.asarray(v, dtype=complex)
    i = int(np.argmax(np.abs(v)))
    a = v[i]
    if abs(a) == 0:
        return v
    return v * (np.conj(a) / abs(a))


def canonical_sign(v):
    """Flip a real vector so its largest-|entry| is positive."""
    v = np.asarray(v, dtype=float)
    i = int(np.argmax(np.abs(v)))
    if v[i] < 0:
        return -v
    return v


def principal_angles(U, V):
    """Principal angles between column-span(U) and column-span(V) (real)."""
    qu, _ = np.linalg.qr(U)
    qv, _ = np.linalg.qr(V)
    s = np.linalg.svd(qu.T @ qv, compute_uv=False)
    s = np.clip(s, -1.0, 1.0)
    return np.arccos(s)  # ascending: svd returns cosines in descending order


def projector(U):
    """Orthogonal projector onto column-span(U) (real orthonormal columns)."""
    return U @ U.T


def subspace_distance(U, V):
    """Spectral norm distance between projectors of two column spans."""
    qu, _ = np.linalg.qr(U)
    qv, _ = np.linalg.qr(V)
    return np.linalg.norm(projector(qu) - projector(qv), 2)


def gauss_newton(F, y0, tol=1e-12, maxit=30, damping=None):
    """Least-norm Newton for under/overdetermined real systems.

    F(y) must return (residual (k,), jacobian (k, m)).  Returns the solution
    or None when no convergence.
    """
    y = np.asarray(y0, dtype=float).copy()
    for _ in range(maxit):
        r, J = F(y)
        nr = np.linalg.norm(r)
        if nr < tol:
            return y
        step, *_ = np.linalg.lstsq(J, -r, rcond=None)
        if damping is not None:
            ns = np.linalg.norm(step)
            if ns > damping:
                step *= damping / ns
        y = y + step
        if not np.all(np.isfinite(y)):
            return None
    r, _ = F(y)
    if np.linalg.norm(r) < tol * 100:
        return y
    return None
