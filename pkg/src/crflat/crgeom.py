"""Pointwise CR structure: tangent frames, Levi data, orbit distribution.

Brackets of complex-tangent sections are computed from exact polynomial
jets: a tangent vector v is extended to an affine vector field a(zeta) =
v + alpha (zeta - q) + beta (conj zeta - conj q) whose pairing with the
defining gradients vanishes to first order; only beta enters the bracket
at the base point, and beta = -pinv(A) Qv with Qv the mixed Hessian slice.
No finite differences anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .poly import Poly
from .errors import (DegenerateDefiningFunctions, IndeterminateRank,
                     MinimalityDetected, NotCRPoint, ZeroLeviForm)
from .linalg import c2r, canonical_phase, canonical_sign, principal_angles, r2c

COMPLEX_ANGLE_TOL = 1e-7
RANK_LOW = 1e-8
RANK_HIGH = 1e-6


def _point_data(surface, q, order=3):
    """(A, hess_holo, hess_mixed) of the defining pair at q, exact."""
    q = np.asarray(q, dtype=complex)
    model = surface.local_model(center=q, order=order)
    if model.center is not None:
        A = model.d1_center()
        holo, mixed = model.d2_center()
    else:
        A = model.d1(q)
        holo, mixed = _global_d2(model, q)
    return A, holo, mixed


def _global_d2(model, q):
    if not hasattr(model, "_d2cache"):
        n = model.n
        polys_h = [[[p.dz(k).dz(j) for k in range(n)] for j in range(n)]
                   for p in (model.r1, model.r2)]
        polys_m = [[[p.dz(k).dzbar(j) for k in range(n)] for j in range(n)]
                   for p in (model.r1, model.r2)]
        model._d2cache = (polys_h, polys_m)
    polys_h, polys_m = model._d2cache
    n = model.n
    holo = np.array([[[polys_h[m][j][k].eval(q) for k in range(n)]
                      for j in range(n)] for m in range(2)])
    mixed = np.array([[[polys_m[m][j][k].eval(q) for k in range(n)]
                       for j in range(n)] for m in range(2)])
    return holo, mixed


@dataclass
class LeviData:
    matrix: np.ndarray            # Hermitian form on the H-frame
    direction: np.ndarray | None  # bracket image direction in T (complex rep)
    transversal: np.ndarray       # real basis of T modulo H, shape (2, n)
    bracket_vectors: np.ndarray   # real vectors spanning the bracket image
    magnitude: float
    definite: str = "indefinite"  # "positive" | "zero" | "indefinite" | "degenerate"

    def eigenvalues(self):
        h = 0.5 * (self.matrix + self.matrix.conj().T)
        return np.linalg.eigvalsh(h)


@dataclass
class CRFrame:
    q: np.ndarray
    T: np.ndarray                 # (2n-2, n) complex rows, orthonormal real basis
    H: np.ndarray                 # (h, n) complex rows, unitary basis of H
    cr_dim: int
    levi: LeviData | None = None
    E: np.ndarray | None = None   # (2n-3, n) complex rows when available


@dataclass
class PointClass:
    kind: str        # "complex" | "cr"
    cr_dim: int
    angle: float     # largest principal angle between T and iT
    sigma_ratio: float


def _tangent_and_angle(surface, q):
    q = np.asarray(q, dtype=complex)
    model = surface.local_model(center=q)
    rows = model.jacobian_rows(q)
    s = np.linalg.svd(rows, compute_uv=False)
    if s[1] <= 1e-10 * (s[0] + 1e-300):
        raise DegenerateDefiningFunctions(
            f"defining differentials dependent at {q}")
    from .linalg import kernel_rows
    Tr = kernel_rows(rows, kdim=2 * surface.n - 2)
    T = r2c(Tr)
    iT = 1j * T
    ang = principal_angles(c2r(T).T, c2r(iT).T)
    A = model.d1_center() if model.center is not None else model.d1(q)
    sa = np.linalg.svd(A, compute_uv=False)
    return T, float(ang[-1]), float(sa[1] / (sa[0] + 1e-300)), A


def classify_point(surface, q) -> PointClass:
    """Complex point (J-invariant tangent) or CR point with its CR dimension."""
    T, angle, ratio, _ = _tangent_and_angle(surface, q)
    if angle < COMPLEX_ANGLE_TOL:
        return PointClass("complex", surface.n - 1, angle, ratio)
    return PointClass("cr", surface.n - 2, angle, ratio)


def complex_kernel(A, kdim):
    """Orthonormal rows spanning ker(A) for complex A."""
    _, _, vt = np.linalg.svd(A)
    return np.conj(vt[A.shape[1] - kdim:])


def tangent_frame(surface, q) -> CRFrame:
    """Real tangent basis, complex tangent basis and CR dimension at q."""
    q = np.asarray(q, dtype=complex)
    T, angle, ratio, A = _tangent_and_angle(surface, q)
    cr = surface.n - 1 if angle < COMPLEX_ANGLE_TOL else surface.n - 2
    H = complex_kernel(A, cr)
    H = np.array([canonical_phase(h) for h in H])
    return CRFrame(q=q, T=T, H=H, cr_dim=cr)


def _bracket_data(surface, q, frame=None):
    """beta-matrices and bracket vectors for the H-frame at q."""
    q = np.asarray(q, dtype=complex)
    if frame is None:
        frame = tangent_frame(surface, q)
    A, holo, mixed = _point_data(surface, q)
    Ap = np.linalg.pinv(A)
    betas = []
    for v in frame.H:
        Qm = np.einsum("mjk,k->mj", mixed, v)   # rows: d/dzbar_j of (Xrho_m)
        betas.append(-Ap @ Qm)
    h = len(frame.H)
    u = np.zeros((h, h, surface.n), dtype=complex)
    s = np.zeros((h, h, surface.n), dtype=complex)
    for j in range(h):
        for k in range(h):
            u[j, k] = -betas[j] @ np.conj(frame.H[k])
            s[j, k] = np.conj(betas[k]) @ frame.H[j]
    r1 = 0.5 * (u + np.conj(s))
    r2 = (u - np.conj(s)) / 2j
    hess_scale = max(np.max(np.abs(holo)), np.max(np.abs(mixed)), 1e-300)
    scale = hess_scale * np.linalg.norm(Ap, 2)
    return frame, r1, r2, scale


def levi_form(surface, q, frame=None) -> LeviData:
    """Hermitian bracket form on H with values in the quotient T/H.

    The quotient is represented by an orthonormal real 2-frame of T minus H;
    at a nonminimal point the bracket image is one real line, whose direction
    is fixed (sign by positive trace) and reported as `direction`.
    """
    frame, r1, r2, scale = _bracket_data(surface, q, frame)
    if frame.cr_dim == surface.n - 1:
        raise NotCRPoint(f"{q} is a complex point")
    n = surface.n
    h = len(frame.H)

    # real orthonormal complement of H inside T
    Hreal = np.concatenate([frame.H, 1j * frame.H]).astype(complex)
    Tr = c2r(frame.T)
    Hr = c2r(Hreal)
    proj = Tr - (Tr @ Hr.T) @ Hr  # H rows are orthonormal in the real metric
    u_, s_, vt_ = np.linalg.svd(proj)
    trans = vt_[:2]
    trans = np.array([canonical_sign(t) for t in trans])

    vecs = np.concatenate([r1.reshape(-1, n), r2.reshape(-1, n)])
    vr = c2r(vecs)
    coords = vr @ trans.T   # components modulo H, in the 2-frame
    mag = float(np.max(np.linalg.norm(coords, axis=1))) if coords.size else 0.0

    if mag <= 1e-10 * scale:
        return LeviData(np.zeros((h, h), dtype=complex), None, r2c(trans),
                        vr, 0.0, definite="zero")

    _, _, vvt = np.linalg.svd(coords)
    dcoef = canonical_sign(vvt[0])
    d = dcoef @ trans

    c1 = (vr[: h * h] @ d).reshape(h, h)
    c2 = (vr[h * h:] @ d).reshape(h, h)
    lam = c2 - 1j * c1
    if np.trace(lam).real < 0:
        d = -d
        lam = -lam
    lam = 0.5 * (lam + lam.conj().T)
    eigs = np.linalg.eigvalsh(lam)
    cut = 1e-9 * np.max(np.abs(eigs))
    if np.all(eigs > cut):
        definite = "positive"
    elif np.min(np.abs(eigs)) <= cut:
        definite = "degenerate"
    else:
        definite = "indefinite"
    return LeviData(lam, r2c(d), r2c(trans), vr, mag, definite=definite)


class _CxField:
    """Complexified vector field with polynomial coefficients (displacement
    coordinates): sum P_k d/dzeta_k + Pb_k d/dzetabar_k."""

    __slots__ = ("P", "Pb", "n")

    def __init__(self, P, Pb):
        self.P = P
        self.Pb = Pb
        self.n = len(P)

    def conj(self):
        return _CxField([p.conj() for p in self.Pb], [p.conj() for p in self.P])

    def bracket(self, other):
        n = self.n
        P, Pb = [], []
        for k in range(n):
            acc = None
            for l in range(n):
                for t in (self.P[l] * other.P[k].dz(l),
                          self.Pb[l] * other.P[k].dzbar(l),
                          -(other.P[l] * self.P[k].dz(l)),
                          -(other.Pb[l] * self.P[k].dzbar(l))):
                    acc = t if acc is None else acc + t
            P.append(acc)
            acc = None
            for l in range(n):
                for t in (self.P[l] * other.Pb[k].dz(l),
                          self.Pb[l] * other.Pb[k].dzbar(l),
                          -(other.P[l] * self.Pb[k].dz(l)),
                          -(other.Pb[l] * self.Pb[k].dzbar(l))):
                    acc = t if acc is None else acc + t
            Pb.append(acc)
        return _CxField(P, Pb)

    def value(self):
        zero = np.zeros(self.n, dtype=complex)
        u = np.array([p.eval(zero) for p in self.P])
        s = np.array([p.eval(zero) for p in self.Pb])
        return u, s


def _extend_tangent_field(dpolys, Apinv, v, order=2):
    """Polynomial coefficients a_k with sum a_k d rho_m/d zeta_k = O(|d|^{order+1}).

    Degree-by-degree correction: the degree-r residual is cancelled through
    the pseudoinverse of the gradient matrix, leaving lower orders intact.
    """
    n = len(dpolys[0])
    a = [Poly.constant(n, v[k]) for k in range(n)]
    for r in range(1, order + 1):
        g = []
        for m in range(2):
            acc = Poly(n)
            for k in range(n):
                acc = acc + a[k] * dpolys[m][k]
            g.append(Poly(n, {key: c for key, c in acc.terms.items()
                              if sum(key[0]) + sum(key[1]) == r}))
        for k in range(n):
            corr = -(g[0] * Apinv[k, 0] + g[1] * Apinv[k, 1])
            a[k] = a[k] + corr
    return a


def _closure_vectors(surface, q, frame):
    """Values at q of depth-2 bracket closure of the complex tangent frame."""
    n = surface.n
    r1j, r2j = surface.jet(q, order=3)
    dpolys = [[r.dz(k) for k in range(n)] for r in (r1j, r2j)]
    from .surface import _read_d1
    A = np.stack([_read_d1(r1j, n), _read_d1(r2j, n)])
    Ap = np.linalg.pinv(A)
    fields = [_CxField(_extend_tangent_field(dpolys, Ap, v, order=2),
                       [Poly(n) for _ in range(n)])
              for v in frame.H]
    level1 = []
    for X in fields:
        for Y in fields:
            level1.append(X.bracket(Y.conj()))
    level2 = []
    for W in level1:
        for X in fields:
            level2.append(X.bracket(W))
            level2.append(X.conj().bracket(W))
    out = []
    for grp in (level1, level2):
        vals = []
        for W in grp:
            u, s = W.value()
            vals.append(0.5 * (u + np.conj(s)))
            vals.append((u - np.conj(s)) / 2j)
        vals = c2r(np.array(vals))
        norms = np.linalg.norm(vals, axis=1)
        cut = 1e-10 * max(1.0, float(np.max(norms)) if norms.size else 0.0)
        keep = vals[norms > cut]
        if keep.size:
            out.append(keep / np.linalg.norm(keep, axis=1, keepdims=True))
    return out


def orbit_distribution(surface, q, frame=None, deep=True) -> CRFrame:
    """Basis of E = H + bracket directions; errors encode the rank ladder.

    deep=True augments the span with depth-2 iterated brackets, which is what
    detects minimality when the complex tangent is one-dimensional.
    """
    q = np.asarray(q, dtype=complex)
    if frame is None:
        frame = tangent_frame(surface, q)
    if frame.cr_dim == surface.n - 1:
        raise NotCRPoint(f"{q} is a complex point")
    frame2, r1, r2, scale = _bracket_data(surface, q, frame)
    n = surface.n
    vecs = np.concatenate([r1.reshape(-1, n), r2.reshape(-1, n)])
    vr = c2r(vecs)
    norms = np.linalg.norm(vr, axis=1)
    big = norms > 1e-10 * scale
    Hreal = np.concatenate([frame.H, 1j * frame.H])
    rows = [c2r(Hreal)]
    if np.any(big):
        rows.append(vr[big] / norms[big, None])
    if deep:
        rows.extend(_closure_vectors(surface, q, frame))
    stacked = np.concatenate(rows)
    s = np.linalg.svd(stacked, compute_uv=False)
    lead = s[0]
    target = 2 * n - 3

    def level(i):
        if i >= len(s):
            return 0.0
        return s[i] / lead

    if level(2 * n - 3) >= RANK_HIGH:
        raise MinimalityDetected(
            f"bracket span reaches dimension {2 * n - 2} at {q}")
    if level(2 * n - 3) >= RANK_LOW:
        raise IndeterminateRank(
            f"rank of bracket span ambiguous at {q}: s={s}")
    if level(target - 1) < RANK_LOW:
        raise ZeroLeviForm(f"bracket image vanishes at {q}; E = H")
    if level(target - 1) < RANK_HIGH:
        raise IndeterminateRank(
            f"rank of bracket span ambiguous at {q}: s={s}")

    levi = levi_form(surface, q, frame=frame)
    d = levi.direction
    Er = np.concatenate([c2r(Hreal), c2r(d)[None, :]])
    # orthonormalize deterministically: Gram-Schmidt in fixed order
    basis = []
    for row in Er:
        u = row.copy()
        for bvec in basis:
            u -= bvec * (bvec @ u)
        nu = np.linalg.norm(u)
        if nu < 1e-12:
            raise IndeterminateRank(f"degenerate E assembly at {q}")
        basis.append(u / nu)
    E = r2c(np.array(basis))
    return CRFrame(q=q, T=frame.T, H=frame.H, cr_dim=frame.cr_dim,
                   levi=levi, E=E)


def minimality_test(surface, q) -> bool:
    """True when the bracket closure is full: the CR orbit is open."""
    cls = classify_point(surface, q)
    if cls.kind == "complex":
        raise NotCRPoint(f"{q} is a complex point")
    try:
        orbit_distribution(surface, q)
    except MinimalityDetected:
        return True
    except ZeroLeviForm:
        return False
    return False
