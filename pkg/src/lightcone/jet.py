"""Third-order multivariate jets: value plus all partial derivatives
through order 3, propagated by exact forward-mode rules (truncated
Taylor arithmetic, no numerical differentiation).

Index symmetry of the Hessian and of the third-derivative tensor is
enforced bitwise after every operation by mirroring the canonical
(sorted-index) entry to all permutations.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

_DIV_FLOOR = 1e-300


def _mirror2(h: np.ndarray) -> np.ndarray:
    m = h.shape[0]
    out = np.empty_like(h)
    for i in range(m):
        for j in range(i, m):
            out[i, j] = h[i, j]
            out[j, i] = h[i, j]
    return out


def _mirror3(t: np.ndarray) -> np.ndarray:
    m = t.shape[0]
    out = np.empty_like(t)
    for i in range(m):
        for j in range(i, m):
            for k in range(j, m):
                v = t[i, j, k]
                for p in itertools.permutations((i, j, k)):
                    out[p] = v
    return out


@dataclass(frozen=True)
class Jet3:
    """Value, gradient, Hessian and third-derivative tensor at a point."""

    m: int
    v: float
    g: np.ndarray   # (m,)
    h: np.ndarray   # (m, m), symmetric
    t: np.ndarray   # (m, m, m), fully symmetric

    @staticmethod
    def constant(value: float, m: int) -> "Jet3":
        return Jet3(m, float(value), np.zeros(m), np.zeros((m, m)),
                    np.zeros((m, m, m)))

    @staticmethod
    def variable(slot: int, value: float, m: int) -> "Jet3":
        g = np.zeros(m)
        g[slot] = 1.0
        return Jet3(m, float(value), g, np.zeros((m, m)),
                    np.zeros((m, m, m)))

    def is_finite(self) -> bool:
        return (math.isfinite(self.v) and np.all(np.isfinite(self.g))
                and np.all(np.isfinite(self.h)) and np.all(np.isfinite(self.t)))

    # -- ring operations ---------------------------------------------------

    def __add__(self, o: "Jet3") -> "Jet3":
        return Jet3(self.m, self.v + o.v, self.g + o.g, self.h + o.h,
                    self.t + o.t)

    def __sub__(self, o: "Jet3") -> "Jet3":
        return Jet3(self.m, self.v - o.v, self.g - o.g, self.h - o.h,
                    self.t - o.t)

    def __neg__(self) -> "Jet3":
        return Jet3(self.m, -self.v, -self.g, -self.h, -self.t)

    def __mul__(self, o: "Jet3") -> "Jet3":
        a, b = self, o
        v = a.v * b.v
        g = a.g * b.v + a.v * b.g
        h = a.h * b.v + np.outer(a.g, b.g) + np.outer(b.g, a.g) + a.v * b.h
        hg = (np.einsum("ij,k->ijk", a.h, b.g)
              + np.einsum("ik,j->ijk", a.h, b.g)
              + np.einsum("jk,i->ijk", a.h, b.g))
        gh = (np.einsum("ij,k->ijk", b.h, a.g)
              + np.einsum("ik,j->ijk", b.h, a.g)
              + np.einsum("jk,i->ijk", b.h, a.g))
        t = a.t * b.v + hg + gh + a.v * b.t
        return Jet3(a.m, v, g, _mirror2(h), _mirror3(t))

    def scale(self, c: float) -> "Jet3":
        return Jet3(self.m, c * self.v, c * self.g, c * self.h, c * self.t)

    def __truediv__(self, o: "Jet3") -> "Jet3":
        return self * o.reciprocal()

    # -- univariate composition u = phi(w) ----------------------------------

    def compose(self, d0: float, d1: float, d2: float, d3: float) -> "Jet3":
        """Chain rule through a scalar function with derivatives d0..d3
        evaluated at self.v (multivariate Faa di Bruno, order 3)."""
        w = self
        gg = np.outer(w.g, w.g)
        v = d0
        g = d1 * w.g
        h = d2 * gg + d1 * w.h
        ggg = np.einsum("i,j,k->ijk", w.g, w.g, w.g)
        hgsym = (np.einsum("ij,k->ijk", w.h, w.g)
                 + np.einsum("ik,j->ijk", w.h, w.g)
                 + np.einsum("jk,i->ijk", w.h, w.g))
        t = d3 * ggg + d2 * hgsym + d1 * w.t
        return Jet3(w.m, float(v), g, _mirror2(h), _mirror3(t))

    def reciprocal(self) -> "Jet3":
        w = self.v
        if abs(w) < _DIV_FLOOR:
            raise DomainError(f"division by near-zero value {w!r}")
        iw = 1.0 / w
        return self.compose(iw, -iw * iw, 2.0 * iw ** 3, -6.0 * iw ** 4)

    def powi(self, k: int) -> "Jet3":
        if k < 0:
            return self.powi(-k).reciprocal()
        out = Jet3.constant(1.0, self.m)
        for _ in range(k):
            out = out * self
        return out

    def exp(self) -> "Jet3":
        e = math.exp(self.v)
        return self.compose(e, e, e, e)

    def log(self) -> "Jet3":
        w = self.v
        if w <= 0.0:
            raise DomainError(f"log of nonpositive value {w!r}")
        iw = 1.0 / w
        return self.compose(math.log(w), iw, -iw * iw, 2.0 * iw ** 3)

    def sqrt(self) -> "Jet3":
        w = self.v
        if w <= 0.0:
            raise DomainError(f"sqrt of nonpositive value {w!r}")
        r = math.sqrt(w)
        return self.compose(r, 0.5 / r, -0.25 / (r * w), 0.375 / (r * w * w))

    def sin(self) -> "Jet3":
        s, c = math.sin(self.v), math.cos(self.v)
        return self.compose(s, c, -s, -c)

    def cos(self) -> "Jet3":
        s, c = math.sin(self.v), math.cos(self.v)
        return self.compose(c, -s, -c, s)

    def tanh(self) -> "Jet3":
        T = math.tanh(self.v)
        sech2 = 1.0 - T * T
        return self.compose(T, sech2, -2.0 * T * sech2,
                            sech2 * (6.0 * T * T - 2.0))
