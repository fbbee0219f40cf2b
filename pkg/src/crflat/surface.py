"""Surface models: codimension-2 real submanifolds of C^n with exact jets.

Two representations are supported.

* ImplicitSurface: two real polynomial defining functions rho_1, rho_2 in
  (zeta, conj zeta).  Graphs {w = phi(z, conj z)} are a special case.
* RotationalSurface: the image of the unit sphere |z|^2 + x^2 = 1 under
  (z, x) -> (z, gamma(x)) for a polynomial immersed curve gamma.  Local
  defining jets are assembled exactly (series inversion of the curve), so
  the generic pointwise machinery applies unchanged.

Both expose local polynomial models from which tangent spaces, Levi data
and bracket extensions are computed without finite differences.
"""

from __future__ import annotations

from math import factorial as _factorial

import numpy as np

from .errors import DegenerateDefiningFunctions, JetUnavailable
from .linalg import c2r, gauss_newton, real_gradient_rows
from .poly import Poly

_DEG_CAP = 8


def _read_d1(p: Poly, n):
    out = np.zeros(n, dtype=complex)
    zero = (0,) * n
    for k in range(n):
        e = [0] * n
        e[k] = 1
        out[k] = p.coeff(tuple(e), zero)
    return out


def _read_d2(p: Poly, n):
    """Second derivative tensors (holo, mixed) of a jet at its center.

    holo[j, k] = d^2 p / dz_j dz_k ; mixed[j, k] = d^2 p / dzbar_j dz_k.
    """
    holo = np.zeros((n, n), dtype=complex)
    mixed = np.zeros((n, n), dtype=complex)
    zero = (0,) * n
    for j in range(n):
        for k in range(j, n):
            e = [0] * n
            e[j] += 1
            e[k] += 1
            c = p.coeff(tuple(e), zero)
            holo[j, k] = holo[k, j] = c * (2.0 if j == k else 1.0)
    for j in range(n):
        for k in range(n):
            ea = [0] * n
            eb = [0] * n
            ea[k] = 1
            eb[j] = 1
            mixed[j, k] = p.coeff(tuple(ea), tuple(eb))
    return holo, mixed


class LocalModel:
    """A defining pair, either global or jet-centred at a surface point."""

    def __init__(self, center, r1: Poly, r2: Poly):
        self.center = None if center is None else np.asarray(center, dtype=complex)
        self.r1 = r1
        self.r2 = r2
        self.n = r1.n
        self._grad = None
        self._d2 = None

    def delta(self, y):
        y = np.asarray(y, dtype=complex)
        if self.center is None:
            return y
        return y - self.center

    def rho(self, y):
        d = self.delta(y)
        return np.stack([self.r1.eval(d).real, self.r2.eval(d).real], axis=-1)

    def _grad_polys(self):
        if self._grad is None:
            self._grad = [[p.dz(k) for k in range(self.n)] for p in (self.r1, self.r2)]
        return self._grad

    def d1(self, y):
        """Wirtinger gradients d rho_m / d zeta_k, shape (..., 2, n)."""
        d = self.delta(y)
        g = self._grad_polys()
        rows = [np.stack([g[m][k].eval(d) for k in range(self.n)], axis=-1)
                for m in range(2)]
        return np.stack(rows, axis=-2)

    def d1_center(self):
        return np.stack([_read_d1(self.r1, self.n), _read_d1(self.r2, self.n)])

    def d2_center(self):
        """(holo, mixed) stacks of shape (2, n, n) at the model center."""
        if self._d2 is None:
            h1, m1 = _read_d2(self.r1, self.n)
            h2, m2 = _read_d2(self.r2, self.n)
            self._d2 = (np.stack([h1, h2]), np.stack([m1, m2]))
        return self._d2

    def jacobian_rows(self, y):
        """Real gradient rows of (rho1, rho2) at y, shape (2, 2n)."""
        return real_gradient_rows(self.d1(y))


class SurfaceModel:
    """Base class; concrete models implement local_model/snap/complex points."""

    n = None
    name = ""
    compact = False
    box = 1.0
    is_graph = False
    graph_phi = None

    # -- interface --------------------------------------------------------

    def local_model(self, center=None, order=3) -> LocalModel:
        raise NotImplementedError

    def snap(self, y, tol=1e-12):
        """Nearest-point projection onto the surface (least-norm Newton)."""
        model = self.local_model(center=None)
        y0 = np.asarray(y, dtype=complex)

        def F(yr):
            yc = yr[:self.n] + 1j * yr[self.n:]
            return model.rho(yc), model.jacobian_rows(yc)

        sol = gauss_newton(F, c2r(y0), tol=tol)
        if sol is None:
            raise DegenerateDefiningFunctions(
                f"projection onto {self.name or 'surface'} failed near {y0}")
        return sol[:self.n] + 1j * sol[self.n:]

    def contains(self, y, tol=1e-8):
        model = self.local_model(center=None)
        r = model.rho(y)
        return bool(np.all(np.abs(r) <= tol * self.scale()))

    def scale(self):
        return max(self.box, 1.0)

    def complex_point_candidates(self):
        return []

    def rho_at(self, y):
        return self.local_model(center=None).rho(y)

    def d1_at(self, y):
        return self.local_model(center=None).d1(y)


class ImplicitSurface(SurfaceModel):
    def __init__(self, n, rho1: Poly, rho2: Poly, name="", box=1.0,
                 compact=False, known_complex_points=None, graph_phi=None):
        if n < 3:
            raise DegenerateDefiningFunctions("ambient dimension must be >= 3")
        if not (rho1.is_real(1e-10) and rho2.is_real(1e-10)):
            raise DegenerateDefiningFunctions("defining functions must be real-valued")
        if max(rho1.degree(), rho2.degree()) > _DEG_CAP:
            raise JetUnavailable(f"degree above cap {_DEG_CAP}")
        self.n = n
        self.rho1 = rho1
        self.rho2 = rho2
        self.name = name
        self.box = box
        self.compact = compact
        self.known_complex_points = known_complex_points or []
        self.graph_phi = graph_phi
        self.is_graph = graph_phi is not None
        self._global = LocalModel(None, rho1, rho2)

    def local_model(self, center=None, order=3):
        return self._global

    def jet(self, q, order=3):
        q = np.asarray(q, dtype=complex)
        return (self.rho1.shift(q).truncate(order), self.rho2.shift(q).truncate(order))

    def complex_point_candidates(self):
        if self.known_complex_points:
            return [np.asarray(p, dtype=complex) for p in self.known_complex_points]
        if self.is_graph:
            return self._graph_complex_points()
        return []

    def _graph_complex_points(self):
        """Zeros of the antiholomorphic differential of the graph function."""
        n = self.n
        phi = self.graph_phi
        fs = [phi.dzbar(k) for k in range(n - 1)]
        fz = [[fs[j].dz(k) for k in range(n - 1)] for j in range(n - 1)]
        fzb = [[fs[j].dzbar(k) for k in range(n - 1)] for j in range(n - 1)]

        def F(zr):
            z = zr[:n - 1] + 1j * zr[n - 1:]
            zp = np.concatenate([z, [0.0]])
            r = np.array([f.eval(zp) for f in fs])
            Jz = np.array([[fz[j][k].eval(zp) for k in range(n - 1)]
                           for j in range(n - 1)])
            Jzb = np.array([[fzb[j][k].eval(zp) for k in range(n - 1)]
                            for j in range(n - 1)])
            from .linalg import real_jacobian
            return c2r(r), real_jacobian(Jz, Jzb)

        found = []
        grid = np.linspace(-self.box, self.box, 5)
        rng = np.random.default_rng(7)
        starts = [np.zeros(2 * (n - 1))]
        for _ in range(20):
            starts.append(rng.uniform(-self.box, self.box, size=2 * (n - 1)))
        for g1 in grid:
            for g2 in grid:
                s = np.zeros(2 * (n - 1))
                s[0], s[n - 1] = g1, g2
                starts.append(s)
        for s in starts:
            sol = gauss_newton(F, s, tol=1e-13, maxit=40)
            if sol is None:
                continue
            z = sol[:n - 1] + 1j * sol[n - 1:]
            if np.max(np.abs(z)) > self.box + 1e-9:
                continue
            zp = np.concatenate([z, [0.0]])
            w = phi.eval(zp)
            p = np.concatenate([z, [w]])
            if not any(np.linalg.norm(p - q) < 1e-7 for q in found):
                found.append(p)
        return found


def graph_surface(n, phi: Poly, name="", box=1.0):
    """Surface {w = phi(z, conj z)} in C^n; phi uses variables 0..n-2."""
    w = Poly.variable(n, n - 1)
    rc = w - phi
    return ImplicitSurface(n, rc.real(), rc.imag(), name=name, box=box,
                           graph_phi=phi)


class RotationalSurface(SurfaceModel):
    """Image of the unit sphere under (z, x) -> (z, gamma(x)).

    gamma is a polynomial immersion of [-1, 1] into C given by its
    coefficient list (ascending powers).  Degree <= 1 curves should go
    through rotational_surface(), which builds the global implicit model.
    """

    compact = True

    def __init__(self, n, curve_coeffs, name=""):
        if n < 3:
            raise DegenerateDefiningFunctions("ambient dimension must be >= 3")
        self.n = n
        self.curve = np.asarray(curve_coeffs, dtype=complex)
        if len(self.curve) > _DEG_CAP + 1:
            raise JetUnavailable(f"curve degree above cap {_DEG_CAP}")
        self.name = name
        self.box = 1.0
        dcurve = np.polynomial.polynomial.polyder(self.curve)
        xs = np.linspace(-1, 1, 201)
        if np.min(np.abs(np.polynomial.polynomial.polyval(xs, dcurve))) < 1e-10:
            raise DegenerateDefiningFunctions("curve is not an immersion on [-1, 1]")

    # -- curve helpers ------------------------------------------------------

    def curve_at(self, x, deriv=0):
        c = self.curve
        for _ in range(deriv):
            c = np.polynomial.polynomial.polyder(c)
        return np.polynomial.polynomial.polyval(x, c)

    def recover_x(self, y):
        """Parameter of the branch through (z, w); needs y near the surface."""
        y = np.asarray(y, dtype=complex)
        z, w = y[:-1], y[-1]
        t = 1.0 - min(float(np.sum(np.abs(z) ** 2)), 1.0)
        ax = np.sqrt(max(t, 0.0))
        cands = [ax, -ax] if ax > 0 else [0.0]
        x = min(cands, key=lambda s: abs(self.curve_at(s) - w))
        # refine against both constraints
        for _ in range(30):
            g = self.curve_at(x)
            dg = self.curve_at(x, 1)
            f = -np.real(np.conj(dg) * (w - g)) + 2.0 * x * (np.sum(np.abs(z) ** 2) + x * x - 1.0)
            df = (np.abs(dg) ** 2 - np.real(np.conj(self.curve_at(x, 2)) * (w - g))
                  + 2.0 * (np.sum(np.abs(z) ** 2) + 3.0 * x * x - 1.0))
            if abs(df) < 1e-14:
                break
            step = f / df
            x = float(np.clip(x - step, -1.0, 1.0))
            if abs(step) < 1e-15:
                break
        return x

    def point_at(self, z_dir, x):
        """Surface point with parameter x in the unit z-direction z_dir."""
        z_dir = np.asarray(z_dir, dtype=complex)
        r = np.sqrt(max(1.0 - x * x, 0.0))
        z = r * z_dir / np.linalg.norm(z_dir)
        return np.concatenate([z, [self.curve_at(x)]])

    def snap(self, y, tol=1e-12):
        y = np.asarray(y, dtype=complex)
        z = y[:-1]
        x = self.recover_x(y)
        nz = np.linalg.norm(z)
        r = np.sqrt(max(1.0 - x * x, 0.0))
        if nz < 1e-13:
            z_new = np.zeros_like(z)
            if r > 0:
                z_new[0] = r
        else:
            z_new = z * (r / nz)
        return np.concatenate([z_new, [self.curve_at(x)]])

    # -- exact local jets ---------------------------------------------------

    def local_model(self, center=None, order=5):
        if center is None:
            raise JetUnavailable("rotational surfaces have no global polynomial model")
        center = self.snap(center)
        r1, r2 = self.jet(center, order=order)
        return LocalModel(center, r1, r2)

    def jet(self, q, order=3):
        if order > 6:
            raise JetUnavailable("rotational jets supported to order 6")
        q = np.asarray(q, dtype=complex)
        x0 = self.recover_x(q)
        z0 = q[:-1]
        n = self.n
        if np.linalg.norm(z0) < 1e-8:
            return self._pole_jet(x0, order)

        d1 = self.curve_at(x0, 1)
        tau = d1 / abs(d1)
        # curve displacement u = conj(tau) (w - w0) = sum g_k delta^k
        gs = [np.conj(tau) * self.curve_at(x0, k) / _factorial(k)
              for k in range(1, order + 1)]
        # invert xi = Re u = sum Re(g_k) delta^k  (g_1 = |gamma'| real)
        a = np.array([g.real for g in gs])
        c = _invert_series(a, order)

        dw = Poly.variable(n, n - 1)
        dwb = Poly.variable_bar(n, n - 1)
        w_rot = (dw * np.conj(tau) + dwb * tau) * 0.5          # xi
        w_rot_im = (dw * np.conj(tau) - dwb * tau) * (-0.5j)   # eta

        # delta(xi) and its powers, truncated
        xi_pows = [Poly.constant(n, 1.0), w_rot]
        for k in range(2, order + 1):
            xi_pows.append((xi_pows[-1] * w_rot).truncate(order))
        delta = Poly(n)
        for k in range(1, order + 1):
            delta = delta + xi_pows[k] * c[k]
        delta_pows = [Poly.constant(n, 1.0), delta]
        for k in range(2, order + 1):
            delta_pows.append((delta_pows[-1] * delta).truncate(order))

        # rho2 = eta - Im(curve series)(delta)
        r2 = w_rot_im
        for k in range(2, order + 1):
            if gs[k - 1].imag != 0:
                r2 = r2 - delta_pows[k] * gs[k - 1].imag
        # rho1 = |z|^2 + x^2 - 1 with x = x0 + delta
        r1 = Poly(n)
        for j in range(n - 1):
            zj = Poly.variable(n, j)
            zjb = Poly.variable_bar(n, j)
            r1 = r1 + zj * zjb + zj * np.conj(z0[j]) + zjb * z0[j]
        r1 = r1 + delta * (2.0 * x0) + delta_pows[2]
        return (r1.truncate(order), r2.truncate(order))

    def _pole_jet(self, x0, order):
        s = 1.0 if x0 > 0 else -1.0
        n = self.n
        # x - s = s(sqrt(1 - t) - 1), t = |z|^2 : series in t
        kmax = order // 2
        sqrt_c = _sqrt1m_series(kmax)  # sqrt(1-t) = sum sqrt_c[k] t^k
        t = Poly(n)
        for j in range(n - 1):
            t = t + Poly.variable(n, j) * Poly.variable_bar(n, j)
        t_pows = [Poly.constant(n, 1.0), t]
        for k in range(2, kmax + 1):
            t_pows.append((t_pows[-1] * t).truncate(order))
        dx = Poly(n)  # x - s
        for k in range(1, kmax + 1):
            dx = dx + t_pows[k] * (s * sqrt_c[k])
        dx_pows = [Poly.constant(n, 1.0), dx]
        for k in range(2, order + 1):
            dx_pows.append((dx_pows[-1] * dx).truncate(order))
        w_series = Poly(n)
        for k in range(1, order + 1):
            ck = self.curve_at(s, k) / _factorial(k)
            if ck != 0:
                w_series = w_series + dx_pows[k] * ck
        rc = Poly.variable(n, n - 1) - w_series.truncate(order)
        return (rc.real(), rc.imag())

    def complex_point_candidates(self):
        zeros = np.zeros(self.n - 1, dtype=complex)
        return [np.concatenate([zeros, [self.curve_at(1.0)]]),
                np.concatenate([zeros, [self.curve_at(-1.0)]])]


def _invert_series(a, order):
    """Coefficients c with delta = sum c_k xi^k inverting xi = sum a_k delta^k."""
    c = np.zeros(order + 1)
    c[1] = 1.0 / a[0]
    for m in range(2, order + 1):
        # coefficient of xi^m in sum_k a_k delta(xi)^k must vanish
        acc = 0.0
        for k in range(2, m + 1):
            if k - 1 < len(a):
                acc += a[k - 1] * _series_power_coeff(c, k, m)
        c[m] = -acc / a[0]
    return c


def _series_power_coeff(c, k, m):
    """Coefficient of xi^m in (sum_{j>=1} c_j xi^j)^k, using c up to m-1."""
    pw = np.zeros(m + 1)
    pw[0] = 1.0
    base = np.zeros(m + 1)
    base[1:min(len(c), m + 1)] = c[1:min(len(c), m + 1)]
    for _ in range(k):
        pw = np.convolve(pw, base)[:m + 1]
    return pw[m]


def _sqrt1m_series(kmax):
    """Taylor of sqrt(1 - t) up to t^kmax."""
    c = np.zeros(kmax + 1)
    c[0] = 1.0
    for k in range(1, kmax + 1):
        c[k] = c[k - 1] * (0.5 - (k - 1)) / k * (-1.0)
    return c


def rotational_surface(n, curve_coeffs, name=""):
    """Build the sphere-times-curve surface, as implicit when the curve is affine."""
    curve = np.asarray(curve_coeffs, dtype=complex)
    deg = len(np.trim_zeros(curve, "b")) - 1
    if deg <= 0:
        raise DegenerateDefiningFunctions("curve must be nonconstant")
    if deg == 1:
        a, b = curve[0], curve[1]
        w = Poly.variable(n, n - 1)
        lin = (w - a) * (np.conj(b) / abs(b) ** 2)
        x = lin.real()
        r1 = Poly(n)
        for j in range(n - 1):
            r1 = r1 + Poly.variable(n, j) * Poly.variable_bar(n, j)
        r1 = r1 + x * x - 1.0
        r2 = ((w - a) * (np.conj(b) / abs(b))).imag()
        zeros = np.zeros(n - 1, dtype=complex)
        pts = [np.concatenate([zeros, [a + b]]), np.concatenate([zeros, [a - b]])]
        surf = ImplicitSurface(n, r1, r2, name=name, compact=True,
                               known_complex_points=pts)
        surf.rotation_curve = curve
        return surf
    surf = RotationalSurface(n, curve, name=name)
    surf.rotation_curve = curve
    return surf
