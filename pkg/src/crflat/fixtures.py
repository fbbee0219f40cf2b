"""Canonical model surfaces used across the test-suite and the CLI examples."""

from __future__ import annotations

import numpy as np

from .poly import Poly
from .surface import graph_surface, rotational_surface


def quadratic_graph_phi(n, a=None, b=None, c=None):
    """phi(z) = sum a_ij z_i z_j + b_ij z_i conj(z_j) + c_ij conj(z_i z_j)."""
    m = n - 1
    phi = Poly(n)
    zero = np.zeros((m, m), dtype=complex)
    a = zero if a is None else np.asarray(a, dtype=complex)
    b = zero if b is None else np.asarray(b, dtype=complex)
    c = zero if c is None else np.asarray(c, dtype=complex)
    for i in range(m):
        for j in range(m):
            zi, zj = Poly.variable(n, i), Poly.variable(n, j)
            zib, zjb = Poly.variable_bar(n, i), Poly.variable_bar(n, j)
            if a[i, j] != 0:
                phi = phi + zi * zj * a[i, j]
            if b[i, j] != 0:
                phi = phi + zi * zjb * b[i, j]
            if c[i, j] != 0:
                phi = phi + zib * zjb * c[i, j]
    return phi


def sq3():
    """w = |z1|^2 + |z2|^2 in C^3: the standard elliptic flat quadric."""
    phi = quadratic_graph_phi(3, b=np.eye(2))
    return graph_surface(3, phi, name="SQ3", box=1.0)


def quadric_surface(b, n=3, a=None, c=None, name="quadric"):
    return graph_surface(n, quadratic_graph_phi(n, a=a, b=b, c=c), name=name)


def snf():
    """w = |z1|^2 + i |z2|^2: complex point at 0 is not flat."""
    phi = quadratic_graph_phi(3, b=np.diag([1.0, 1.0j]))
    return graph_surface(3, phi, name="SNF", box=1.5)


def sph(n=3):
    """Unit sphere of C^{n-1} x R embedded with w = x (curve gamma = id)."""
    return rotational_surface(n, [0.0, 1.0], name="SPH")


def perturbed_sq3(eps=0.05):
    """Cubic perturbation of SQ3: w = |z|^2 + eps Re(z1^2 conj(z2))."""
    phi = quadratic_graph_phi(3, b=np.eye(2))
    z1, z2b = Poly.variable(3, 0), Poly.variable_bar(3, 1)
    cubic = z1 * z1 * z2b
    phi = phi + (cubic + cubic.conj()) * (eps / 2.0)
    return graph_surface(3, phi, name="SQ3-perturbed", box=1.0)


def levi_flat_fixture(n=3):
    """S = {Im w = 0, Im z1 = 0}: Levi-flat, contains complex (n-2)-manifolds."""
    from .surface import ImplicitSurface
    w = Poly.variable(n, n - 1)
    z1 = Poly.variable(n, 0)
    return ImplicitSurface(n, w.imag(), z1.imag(), name="leviflat-fixture", box=2.0)


def nodal_curve_coeffs(center=0.2, scale=0.6):
    """Polynomial immersion [-1,1] -> C with one self-crossing.

    gamma(x) = (s^2 - 1) + i (s^3 - s), s = (x - center)/scale.  The node
    sits at s = +-1, i.e. x = center +- scale, two levels with distinct |x|,
    so the surface itself stays embedded while the filled body self-intersects.
    """
    s = np.polynomial.polynomial.Polynomial([-center / scale, 1.0 / scale])
    re = s * s - 1.0
    im = s * s * s - s
    coef_re = re.coef
    coef_im = im.coef
    k = max(len(coef_re), len(coef_im))
    out = np.zeros(k, dtype=complex)
    out[:len(coef_re)] += coef_re
    out[:len(coef_im)] += 1j * coef_im
    return out


def nodal_surface(n=3, center=0.2, scale=0.6):
    surf = rotational_surface(n, nodal_curve_coeffs(center, scale), name="nodal")
    surf.crossing_levels = (center + scale, center - scale)
    return surf
