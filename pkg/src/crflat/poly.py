"""Exact polynomial calculus in (zeta, conj(zeta)) for zeta in C^n.

A Poly stores complex coefficients indexed by pairs of exponent multi-indices
(alpha, beta) meaning  zeta^alpha * conj(zeta)^beta.  Wirtinger derivatives,
conjugation and affine substitution are exact, which is what makes second and
third order jets of defining functions trustworthy near degenerate points.
"""

from __future__ import annotations

import numpy as np


def _zero_index(n):
    return (0,) * n


class Poly:
    """Polynomial in zeta_1..zeta_n and their conjugates."""

    __slots__ = ("n", "terms", "_compiled")

    def __init__(self, n, terms=None):
        self.n = int(n)
        self.terms = {}
        if terms:
            for key, coeff in terms.items():
                c = complex(coeff)
                if c != 0:
                    self.terms[key] = self.terms.get(key, 0.0) + c
        self._compiled = None

    # -- constructors ---------------------------------------------------

    @classmethod
    def constant(cls, n, value):
        if complex(value) == 0:
            return cls(n)
        return cls(n, {(_zero_index(n), _zero_index(n)): complex(value)})

    @classmethod
    def variable(cls, n, k):
        alpha = [0] * n
        alpha[k] = 1
        return cls(n, {(tuple(alpha), _zero_index(n)): 1.0})

    @classmethod
    def variable_bar(cls, n, k):
        beta = [0] * n
        beta[k] = 1
        return cls(n, {(_zero_index(n), tuple(beta)): 1.0})

    @classmethod
    def monomial(cls, n, alpha, beta, coeff=1.0):
        return cls(n, {(tuple(alpha), tuple(beta)): complex(coeff)})

    @classmethod
    def hermitian_form(cls, n, M, vars=None):
        """Sum M[j,k] zeta_j conj(zeta_k) over the listed variables."""
        M = np.asarray(M, dtype=complex)
        if vars is None:
            vars = range(M.shape[0])
        vars = list(vars)
        p = cls(n)
        for j, vj in enumerate(vars):
            for k, vk in enumerate(vars):
                if M[j, k] != 0:
                    alpha = [0] * n
                    beta = [0] * n
                    alpha[vj] += 1
                    beta[vk] += 1
                    p = p + cls(n, {(tuple(alpha), tuple(beta)): M[j, k]})
        return p

    # -- ring operations --------------------------------------------------

    def copy(self):
        return Poly(self.n, dict(self.terms))

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.constant(self.n, other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            s = out.get(key, 0.0) + c
            if s == 0:
                out.pop(key, None)
            else:
                out[key] = s
        return Poly(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.n, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.constant(self.n, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = complex(other)
            if c == 0:
                return Poly(self.n)
            return Poly(self.n, {k: c * v for k, v in self.terms.items()})
        out = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                key = (tuple(x + y for x, y in zip(a1, a2)),
                       tuple(x + y for x, y in zip(b1, b2)))
                s = out.get(key, 0.0) + c1 * c2
                out[key] = s
        return Poly(self.n, {k: v for k, v in out.items() if v != 0})

    __rmul__ = __mul__

    def __pow__(self, m):
        if m < 0:
            raise ValueError("negative power")
        result = Poly.constant(self.n, 1.0)
        base = self
        while m:
            if m & 1:
                result = result * base
            base = base * base if m > 1 else base
            m >>= 1
        return result

    def conj(self):
        """Polynomial representing conj(p(zeta))."""
        return Poly(self.n, {(b, a): np.conj(c) for (a, b), c in self.terms.items()})

    def real(self):
        return (self + self.conj()) * 0.5

    def imag(self):
        return (self - self.conj()) * (-0.5j)

    # -- calculus ---------------------------------------------------------

    def dz(self, k):
        out = {}
        for (a, b), c in self.terms.items():
            if a[k] == 0:
                continue
            a2 = list(a)
            a2[k] -= 1
            out[(tuple(a2), b)] = out.get((tuple(a2), b), 0.0) + c * a[k]
        return Poly(self.n, out)

    def dzbar(self, k):
        out = {}
        for (a, b), c in self.terms.items():
            if b[k] == 0:
                continue
            b2 = list(b)
            b2[k] -= 1
            out[(a, tuple(b2))] = out.get((a, tuple(b2)), 0.0) + c * b[k]
        return Poly(self.n, out)

    # -- structure ----------------------------------------------------------

    def degree(self):
        if not self.terms:
            return -1
        return max(sum(a) + sum(b) for a, b in self.terms)

    def truncate(self, order):
        return Poly(self.n, {(a, b): c for (a, b), c in self.terms.items()
                             if sum(a) + sum(b) <= order})

    def coeff(self, alpha, beta):
        return self.terms.get((tuple(alpha), tuple(beta)), 0.0)

    def prune(self, tol):
        scale = max((abs(c) for c in self.terms.values()), default=0.0)
        cut = tol * scale
        return Poly(self.n, {k: c for k, c in self.terms.items() if abs(c) > cut})

    def is_real(self, tol=1e-12):
        diff = self - self.conj()
        scale = max((abs(c) for c in self.terms.values()), default=0.0) + 1.0
        return all(abs(c) <= tol * scale for c in diff.terms.values())

    # -- substitution ---------------------------------------------------------

    def shift(self, c):
        """p(c + zeta) as a Poly in the displacement variable."""
        c = np.asarray(c, dtype=complex)
        lin = [Poly.constant(self.n, c[k]) + Poly.variable(self.n, k)
               for k in range(self.n)]
        return self._substitute(lin)

    def affine_sub(self, c, M):
        """p(c + M zeta) as a Poly in the new variable."""
        c = np.asarray(c, dtype=complex)
        M = np.asarray(M, dtype=complex)
        lin = []
        for k in range(self.n):
            p = Poly.constant(self.n, c[k])
            for j in range(self.n):
                if M[k, j] != 0:
                    p = p + Poly.variable(self.n, j) * M[k, j]
            lin.append(p)
        return self._substitute(lin)

    def _substitute(self, lin):
        linb = [p.conj() for p in lin]
        pow_cache = {}

        def powered(base_list, k, m):
            key = (id(base_list), k, m)
            if key not in pow_cache:
                pow_cache[key] = base_list[k] ** m
            return pow_cache[key]

        out = Poly(self.n)
        for (a, b), coeff in self.terms.items():
            term = Poly.constant(self.n, coeff)
            for k, m in enumerate(a):
                if m:
                    term = term * powered(lin, k, m)
            for k, m in enumerate(b):
                if m:
                    term = term * powered(linb, k, m)
            out = out + term
        return out

    # -- evaluation ---------------------------------------------------------

    def _compile(self):
        if self._compiled is None:
            m = len(self.terms)
            A = np.zeros((m, self.n), dtype=np.int64)
            B = np.zeros((m, self.n), dtype=np.int64)
            C = np.zeros(m, dtype=complex)
            for i, ((a, b), c) in enumerate(sorted(self.terms.items())):
                A[i] = a
                B[i] = b
                C[i] = c
            self._compiled = (A, B, C)
        return self._compiled

    def eval(self, zeta):
        """Evaluate at points of shape (..., n); returns shape (...)."""
        A, B, C = self._compile()
        zeta = np.asarray(zeta, dtype=complex)
        if len(C) == 0:
            return np.zeros(zeta.shape[:-1], dtype=complex)
        zz = zeta[..., None, :]
        mono = np.prod(zz ** A, axis=-1) * np.prod(np.conj(zz) ** B, axis=-1)
        return mono @ C

    def __call__(self, zeta):
        return self.eval(zeta)

    def __repr__(self):
        parts = []
        for (a, b), c in sorted(self.terms.items()):
            parts.append(f"{c:.4g}*z^{list(a)}*zb^{list(b)}")
        return "Poly(" + (" + ".join(parts) if parts else "0") + ")"
