"""Fundamental quadratic form at complex points: extraction, flatness,
normal form, ellipticity, and the model-quadric orbit oracle.

At a complex point the surface is w' = Q(z') + O(3) in adapted coordinates;
Q(z) = sum a_ij z_i z_j + b_ij z_i conj(z_j) + c_ij conj(z_i z_j).  Flatness
asks the mixed part to take values on one real line of C; in a flat normal
form Q is real-valued and ellipticity is definiteness of its real matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (JetUnavailable, NotComplexPoint, NotElliptic, NotFlat,
                     NotNormalForm)
from .linalg import canonical_phase

FLAT_REL_TOL = 1e-9
EIG_REL_CUTOFF = 1e-9
COMPLEX_ANGLE_TOL = 1e-7


@dataclass
class QuadraticForm:
    n: int
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    base_point: np.ndarray | None = None
    frame: np.ndarray | None = None  # adapted unitary, z' columns then w'

    def __post_init__(self):
        m = self.n - 1
        self.a = 0.5 * (np.asarray(self.a, dtype=complex) + np.asarray(self.a, dtype=complex).T)
        self.c = 0.5 * (np.asarray(self.c, dtype=complex) + np.asarray(self.c, dtype=complex).T)
        self.b = np.asarray(self.b, dtype=complex)
        for M in (self.a, self.b, self.c):
            if M.shape != (m, m):
                raise ValueError(f"matrix shape {M.shape} != {(m, m)}")

    def eval(self, z):
        z = np.asarray(z, dtype=complex)
        zb = np.conj(z)
        return (np.einsum("...i,ij,...j->...", z, self.a, z)
                + np.einsum("...i,ij,...j->...", z, self.b, zb)
                + np.einsum("...i,ij,...j->...", zb, self.c, zb))

    def scaled(self, mu):
        """The form of the rescaled normal coordinate w -> mu * w is mu * Q."""
        return QuadraticForm(self.n, mu * self.a, mu * self.b, mu * self.c,
                             self.base_point, self.frame)

    def norm(self):
        return max(np.linalg.norm(self.a), np.linalg.norm(self.b),
                   np.linalg.norm(self.c))

    def real_matrix(self):
        """Real symmetric M with Q(z) = v^T M v, v = (Re z, Im z)."""
        m = self.n - 1
        dim = 2 * m
        basis = np.zeros((dim, m), dtype=complex)
        for i in range(m):
            basis[i, i] = 1.0
            basis[m + i, i] = 1.0j
        M = np.zeros((dim, dim))
        vals = np.array([self.eval(basis[i]) for i in range(dim)])
        for i in range(dim):
            for j in range(i, dim):
                qij = self.eval(basis[i] + basis[j])
                M[i, j] = M[j, i] = 0.5 * (qij - vals[i] - vals[j]).real
        return M


@dataclass
class FlatnessReport:
    flat: bool
    line_direction: complex
    hermitian_pair: tuple
    dependency_residual: float


@dataclass
class EllipticityReport:
    elliptic: bool
    sign: int
    eigenvalues: np.ndarray
    b_positive_definite: bool = False


def extract_quadric(surface, p):
    """Fundamental form of the surface at the complex point p.

    Builds adapted coordinates (tangent hyperplane then complex normal) from
    the defining jets and solves the jet equations for the graph quadric.
    """
    from .crgeom import classify_point  # local import, no cycle at runtime

    p = np.asarray(p, dtype=complex)
    n = surface.n
    cls = classify_point(surface, p)
    if cls.kind != "complex":
        raise NotComplexPoint(
            f"tangent space at {p} is not a complex hyperplane "
            f"(angle {cls.angle:.3e})")

    r1, r2 = surface.jet(p, order=2)
    if r1.degree() < 1 and r2.degree() < 1:
        raise JetUnavailable("second order jet unavailable")

    # complex normal from the rank-1 holomorphic differential
    from .surface import _read_d1
    A = np.stack([_read_d1(r1, n), _read_d1(r2, n)])
    _, _, vt = np.linalg.svd(A)
    eta = canonical_phase(np.conj(vt[0]))

    # tangent basis: Gram-Schmidt of the standard basis against eta
    cols = []
    for j in range(n):
        u = np.zeros(n, dtype=complex)
        u[j] = 1.0
        u = u - eta * np.vdot(eta, u)
        for n_c in cols:
            u = u - n_c * np.vdot(n_c, u)
        nu = np.linalg.norm(u)
        if nu > 1e-8:
            cols.append(u / nu)
        if len(cols) == n - 1:
            break
    U = np.column_stack(cols + [eta])

    rr = [r.affine_sub(np.zeros(n), U) for r in (r1, r2)]
    ew = tuple([0] * (n - 1) + [1])
    zero = (0,) * n
    Aw = np.array([r.coeff(ew, zero) for r in rr])
    Bw = np.array([r.coeff(zero, ew) for r in rr])

    # quadratic z'-monomials of the substituted jets
    keys = []
    m = n - 1
    for i in range(m):
        for j in range(i, m):
            al = [0] * n
            al[i] += 1
            al[j] += 1
            keys.append((tuple(al), zero))        # z_i z_j
            keys.append((zero, tuple(al)))        # conj
    for i in range(m):
        for j in range(m):
            al = [0] * n
            be = [0] * n
            al[i] = 1
            be[j] = 1
            keys.append((tuple(al), tuple(be)))   # z_i conj z_j

    kindex = {k: i for i, k in enumerate(keys)}
    nk = len(keys)
    # real-linear system for Q coefficients: Aw q_k + Bw conj(q_k') = -c_mk
    rows = []
    rhs = []
    for ki, (al, be) in enumerate(keys):
        kconj = kindex[(be, al)]
        for mm in range(2):
            cval = rr[mm].coeff(al, be)
            # unknowns ordered [Re q..., Im q...]
            row = np.zeros(2 * nk)
            row[ki] += Aw[mm].real
            row[nk + ki] += -Aw[mm].imag
            row[kconj] += Bw[mm].real
            row[nk + kconj] += Bw[mm].imag
            rows.append(row)
            rhs.append(-cval.real)
            row2 = np.zeros(2 * nk)
            row2[ki] += Aw[mm].imag
            row2[nk + ki] += Aw[mm].real
            row2[kconj] += Bw[mm].imag
            row2[nk + kconj] += -Bw[mm].real
            rows.append(row2)
            rhs.append(-cval.imag)
    sol, res, *_ = np.linalg.lstsq(np.array(rows), np.array(rhs), rcond=None)
    q = sol[:nk] + 1j * sol[nk:]

    a = np.zeros((m, m), dtype=complex)
    b = np.zeros((m, m), dtype=complex)
    c = np.zeros((m, m), dtype=complex)
    for i in range(m):
        for j in range(i, m):
            al = [0] * n
            al[i] += 1
            al[j] += 1
            coeff = q[kindex[(tuple(al), zero)]]
            half = coeff if i == j else coeff / 2.0
            a[i, j] = a[j, i] = half
            coeff = q[kindex[(zero, tuple(al))]]
            half = coeff if i == j else coeff / 2.0
            c[i, j] = c[j, i] = half
    for i in range(m):
        for j in range(m):
            al = [0] * n
            be = [0] * n
            al[i] = 1
            be[j] = 1
            b[i, j] = q[kindex[(tuple(al), tuple(be))]]
    return QuadraticForm(n, a, b, c, base_point=p, frame=U)


def _hermitian_split(b):
    h1 = 0.5 * (b + b.conj().T)
    h2 = (b - b.conj().T) / 2j
    return h1, h2


def is_flat(qf: QuadraticForm) -> FlatnessReport:
    """Does the mixed term take values on a single real line of C?

    The Hermitian pair (H1, H2) of b must span at most one real direction;
    the test is the second singular value of the stacked realified pair.
    """
    h1, h2 = _hermitian_split(qf.b)
    v1 = np.concatenate([h1.real.ravel(), h1.imag.ravel()])
    v2 = np.concatenate([h2.real.ravel(), h2.imag.ravel()])
    M = np.stack([v1, v2])
    s = np.linalg.svd(M, compute_uv=False)
    if s[0] < 1e-300:
        return FlatnessReport(True, 1.0 + 0j, (h1, h2), 0.0)
    flat = s[1] < FLAT_REL_TOL * (s[0] + 1e-300)
    lam = 1.0 + 0j
    if flat:
        u, _, _ = np.linalg.svd(M)
        lam = complex(u[0, 0], u[1, 0])
        lam /= abs(lam)
        if abs(lam.imag) < 1e-12:
            lam = 1.0 + 0j
        elif lam.imag < 0:
            lam = -lam
    return FlatnessReport(bool(flat), lam, (h1, h2), float(s[1]))


def flat_normal_form(qf: QuadraticForm) -> QuadraticForm:
    """Rotate w to make b Hermitian, then absorb the holomorphic part.

    Returns the form with b' = exp(-i theta) b and a' = conj(c'); the result
    evaluates real on every z.
    """
    rep = is_flat(qf)
    if not rep.flat:
        raise NotFlat(f"form is not flat (residual {rep.dependency_residual:.3e})")
    lam = rep.line_direction
    mu = np.conj(lam) / abs(lam)
    b1 = mu * qf.b
    b1 = 0.5 * (b1 + b1.conj().T)
    c1 = mu * qf.c
    a1 = np.conj(c1)
    out = QuadraticForm(qf.n, a1, b1, c1, qf.base_point, qf.frame)
    # validation: Q real on probe vectors
    rng = np.random.default_rng(0)
    z = rng.normal(size=(64, qf.n - 1)) + 1j * rng.normal(size=(64, qf.n - 1))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    im = np.max(np.abs(out.eval(z).imag))
    if im > 1e-9 * (out.norm() + 1e-300):
        raise NotFlat(f"normal form residual {im:.3e}")
    return out


def is_elliptic(qf: QuadraticForm) -> EllipticityReport:
    """Definiteness of the real quadric; requires a real-valued (normal) form."""
    rng = np.random.default_rng(1)
    z = rng.normal(size=(32, qf.n - 1)) + 1j * rng.normal(size=(32, qf.n - 1))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    im = np.max(np.abs(qf.eval(z).imag))
    if im > 1e-8 * (qf.norm() + 1e-300):
        raise NotNormalForm(f"form is not real-valued (residual {im:.3e})")
    M = qf.real_matrix()
    eigs = np.linalg.eigvalsh(M)
    cutoff = EIG_REL_CUTOFF * (np.max(np.abs(eigs)) if eigs.size else 0.0)
    if np.min(np.abs(eigs)) <= cutoff or cutoff == 0.0:
        sign = 0
        elliptic = False
    elif np.all(eigs > 0):
        sign, elliptic = 1, True
    elif np.all(eigs < 0):
        sign, elliptic = -1, True
    else:
        sign, elliptic = 0, False
    bh = 0.5 * (qf.b + qf.b.conj().T)
    beigs = np.linalg.eigvalsh(bh)
    b_pos = bool(np.min(beigs * (sign if sign != 0 else 1)) > 0)
    return EllipticityReport(bool(elliptic), int(sign), eigs, b_pos)


@dataclass
class OrbitOracle:
    """Implicit descriptor of the model-quadric orbit {Q(z) = c, w = c}."""

    form: QuadraticForm
    level: float

    def residual(self, z):
        return self.form.eval(z).real - self.level

    def sample(self, count=64, seed=0):
        m = self.form.n - 1
        if self.level == 0.0:
            return np.zeros((1, m), dtype=complex)
        rng = np.random.default_rng(seed)
        u = rng.normal(size=(count, m)) + 1j * rng.normal(size=(count, m))
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        qv = self.form.eval(u).real
        t = np.sqrt(self.level / qv)
        return u * t[:, None]


def quadric_orbit_oracle(qf: QuadraticForm, c: float) -> OrbitOracle:
    """Ground-truth ellipsoid sampler for a flat elliptic form."""
    nf = flat_normal_form(qf)
    rep = is_elliptic(nf)
    if not rep.elliptic:
        raise NotElliptic("form is not elliptic")
    if c < 0:
        raise ValueError("level must be nonnegative")
    pos = nf if rep.sign > 0 else nf.scaled(-1.0)
    return OrbitOracle(pos, float(c))
