"""Graph-hypersurface operators.

The hypersurface is the graph x0 = f(x1, ..., xn) in coordinates
(x0, ..., xn) of a Lorentzian manifold.  This module evaluates the
induced metric s_ij, its cofactor matrix, the light-likeness function
B = det(s) and its gradient, the normal field, the mean-curvature-type
operators A and A - phi*B, pointwise causal classification, and a grid
scan for the light-like locus.

B := det(s_ij) is a reconstruction: it vanishes exactly where the
induced metric degenerates, is positive at space-like and negative at
time-like points, and reduces to 1 - |grad f|^2 for the flat metric.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .errors import DomainError
from .expr import Const, Expression, eval_jet3, max_slot, parse
from .jet import Jet3
from .lorentz import MetricField, christoffel_at, metric_jets


@dataclass(frozen=True)
class Box:
    """Axis-aligned box in R^n."""

    lo: Tuple[float, ...]
    hi: Tuple[float, ...]

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise ValueError("lo/hi length mismatch")
        if any(a >= b for a, b in zip(self.lo, self.hi)):
            raise ValueError("empty box")

    @property
    def n(self) -> int:
        return len(self.lo)

    def contains(self, x) -> bool:
        return all(a <= v <= b for a, v, b in zip(self.lo, x, self.hi))


@dataclass(frozen=True)
class GraphHypersurface:
    """Graph x0 = f(x1..xn) over a box, with ambient metric and the
    multiplier function phi of the zero-mean-curvature relation."""

    n: int
    f: Expression
    metric: MetricField
    phi: Expression = Const(0.0)
    domain: Optional[Box] = None

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if self.metric.n != self.n:
            raise ValueError("metric dimension does not match n")
        if max_slot(self.f) >= self.n or max_slot(self.phi) >= self.n:
            raise ValueError("expression uses variables beyond x1..xn")
        if self.domain is not None and self.domain.n != self.n:
            raise ValueError("domain dimension does not match n")

    @staticmethod
    def from_strings(n: int, f: str, metric: MetricField,
                     phi: str = "0", domain: Optional[Box] = None
                     ) -> "GraphHypersurface":
        return GraphHypersurface(n, parse(f, n), metric, parse(phi, n), domain)

    def check_domain(self, x) -> None:
        if self.domain is not None and not self.domain.contains(x):
            raise DomainError("point outside the surface domain", point=x)

    def embed(self, x, f_value: float) -> np.ndarray:
        F = np.empty(self.n + 1)
        F[0] = f_value
        F[1:] = x
        return F


class PointKind(enum.Enum):
    SPACE_LIKE = "SpaceLike"
    TIME_LIKE = "TimeLike"
    LIGHT_LIKE = "LightLike"


@dataclass(frozen=True)
class PointClass:
    kind: PointKind
    degenerate: bool
    B: float
    grad_norm: float

    def __post_init__(self):
        if self.degenerate and self.kind is not PointKind.LIGHT_LIKE:
            raise ValueError("degenerate implies light-like")


@dataclass(frozen=True)
class FirstFundamental:
    s: np.ndarray        # (n, n) induced metric
    cof: np.ndarray      # (n, n) cofactor matrix of s
    B: float             # det(s)
    gradB: np.ndarray    # (n,) exact gradient of B in x


# -- first-order dual scalars (value + gradient in the n surface variables) --

class _D1:
    __slots__ = ("v", "d")

    def __init__(self, v: float, d: np.ndarray):
        self.v = v
        self.d = d

    def __add__(self, o):
        return _D1(self.v + o.v, self.d + o.d)

    def __sub__(self, o):
        return _D1(self.v - o.v, self.d - o.d)

    def __neg__(self):
        return _D1(-self.v, -self.d)

    def __mul__(self, o):
        return _D1(self.v * o.v, self.d * o.v + self.v * o.d)


def _det_dual(rows: List[List[_D1]]) -> _D1:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    acc = None
    for j in range(n):
        minor = [[rows[i][k] for k in range(n) if k != j] for i in range(1, n)]
        term = rows[0][j] * _det_dual(minor)
        if j % 2 == 1:
            term = -term
        acc = term if acc is None else acc + term
    return acc


def _minor_det(a: np.ndarray, i: int, j: int) -> float:
    sub = np.delete(np.delete(a, i, axis=0), j, axis=1)
    if sub.size == 0:
        return 1.0
    return float(np.linalg.det(sub))


def cofactor_matrix(a: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    cof = np.empty_like(a)
    for i in range(n):
        for j in range(n):
            cof[i, j] = (-1.0) ** (i + j) * _minor_det(a, i, j)
    return cof


def _fundamental_duals(S: GraphHypersurface, x, fjet: Jet3
                       ) -> List[List[_D1]]:
    """Induced-metric entries as (value, gradient-in-x) duals."""
    n = S.n
    F = S.embed(x, fjet.v)
    g, dg = metric_jets(S.metric, F)
    # chain rule through the embedding: d_k ghat_ab = dg0_ab f_k + dgk_ab
    ghat = [[_D1(g[a, b], dg[0, a, b] * fjet.g + dg[1:, a, b])
             for b in range(n + 1)] for a in range(n + 1)]
    fI = [_D1(fjet.g[i], fjet.h[i].copy()) for i in range(n)]
    s = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            sij = (fI[i] * fI[j] * ghat[0][0] + fI[i] * ghat[0][j + 1]
                   + fI[j] * ghat[i + 1][0] + ghat[i + 1][j + 1])
            s[i][j] = sij
            s[j][i] = sij
    return s


def first_fundamental(S: GraphHypersurface, x) -> FirstFundamental:
    """Induced metric, cofactor matrix, B = det(s) and its exact gradient."""
    x = np.asarray(x, dtype=float)
    S.check_domain(x)
    fjet = eval_jet3(S.f, x)
    duals = _fundamental_duals(S, x, fjet)
    n = S.n
    s = np.array([[duals[i][j].v for j in range(n)] for i in range(n)])
    det = _det_dual(duals)
    return FirstFundamental(s=s, cof=cofactor_matrix(s), B=det.v,
                            gradB=det.d.copy())


def induced_metric(S: GraphHypersurface, x) -> FirstFundamental:
    return first_fundamental(S, x)


def B_value(S: GraphHypersurface, x) -> float:
    return first_fundamental(S, x).B


def gradient_B(S: GraphHypersurface, x) -> np.ndarray:
    return first_fundamental(S, x).gradB


def _normal_raw(S: GraphHypersurface, x, fjet: Jet3
                ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(nu_hat, g, w): unscaled normal g^{-1} w with positive time
    component, metric at F(x), and the covariant cross-product covector
    w = (1, -f_x1, ..., -f_xn)."""
    F = S.embed(x, fjet.v)
    g, _ = metric_jets(S.metric, F)
    w = np.empty(S.n + 1)
    w[0] = 1.0
    w[1:] = -fjet.g
    nu = np.linalg.solve(g, w)
    if nu[0] < 0:
        nu = -nu
        w = -w
    return nu, g, w


def normal_vector(S: GraphHypersurface, x) -> np.ndarray:
    """Generalized-cross-product normal, scaled by sqrt(|det g|), with
    positive time component; g-orthogonal to every tangent F_xi."""
    x = np.asarray(x, dtype=float)
    S.check_domain(x)
    fjet = eval_jet3(S.f, x)
    nu, g, _ = _normal_raw(S, x, fjet)
    return np.sqrt(abs(np.linalg.det(g))) * nu


def _operator_A_explicit(S: GraphHypersurface, fjet: Jet3) -> float:
    """Closed form R*f_nn + S, valid for the flat (Minkowski) metric."""
    n = S.n
    fI = fjet.g
    fIJ = fjet.h
    R = 1.0 - sum(fI[j] ** 2 for j in range(n - 1))
    Ssum = 0.0
    for k in range(n - 1):
        coeff = 1.0 - fI[n - 1] ** 2 - sum(
            fI[j] ** 2 for j in range(n - 1) if j != k)
        Ssum += coeff * fIJ[k, k]
    for j in range(n - 1):
        for k in range(j + 1, n - 1):
            Ssum += 2.0 * fI[j] * fI[k] * fIJ[j, k]
    for j in range(n - 1):
        Ssum += 2.0 * fI[j] * fI[n - 1] * fIJ[j, n - 1]
    return R * fIJ[n - 1, n - 1] + Ssum


def _operator_A_generic(S: GraphHypersurface, x, fjet: Jet3) -> float:
    """A = -sum_ij cof^ij <D_i F_j, nu_hat>_g, normalized so that the
    flat-metric value coincides with the closed form."""
    n = S.n
    duals = _fundamental_duals(S, x, fjet)
    s = np.array([[duals[i][j].v for j in range(n)] for i in range(n)])
    cof = cofactor_matrix(s)
    nu, g, w = _normal_raw(S, x, fjet)
    F = S.embed(x, fjet.v)
    G = christoffel_at(S.metric, F)
    total = 0.0
    for i in range(n):
        for j in range(n):
            D = np.zeros(n + 1)
            D[0] = fjet.h[i, j]
            D += (fjet.g[i] * fjet.g[j] * G[:, 0, 0]
                  + fjet.g[i] * G[:, 0, j + 1]
                  + fjet.g[j] * G[:, i + 1, 0]
                  + G[:, i + 1, j + 1])
            # <D, nu_hat>_g = D . (g nu_hat) = D . w
            total += cof[i, j] * float(D @ w)
    return -total


def operator_A(S: GraphHypersurface, x, path: str = "auto") -> float:
    """Mean-curvature-type operator A at x.

    path: "explicit" (flat-metric closed form), "generic" (cofactor
    contraction against the normal, any metric), or "auto".
    """
    x = np.asarray(x, dtype=float)
    S.check_domain(x)
    fjet = eval_jet3(S.f, x)
    if path == "auto":
        path = "explicit" if S.metric.is_minkowski() else "generic"
    if path == "explicit":
        if not S.metric.is_minkowski():
            raise ValueError("explicit path requires the Minkowski metric")
        return _operator_A_explicit(S, fjet)
    if path == "generic":
        return _operator_A_generic(S, x, fjet)
    raise ValueError(f"unknown path {path!r}")


def operator_tildeA(S: GraphHypersurface, x, path: str = "auto") -> float:
    """A - phi*B at x."""
    x = np.asarray(x, dtype=float)
    phi = eval_jet3(S.phi, x).v
    if phi == 0.0:
        return operator_A(S, x, path)
    return operator_A(S, x, path) - phi * B_value(S, x)


DEFAULT_TOL_GRAD = 1e-7


def default_tolB(s: np.ndarray) -> float:
    return 1e-9 * (1.0 + float(np.linalg.norm(s)))


def classify_point(S: GraphHypersurface, x, tolB: Optional[float] = None,
                   tolG: float = DEFAULT_TOL_GRAD) -> PointClass:
    """Space-like / time-like / light-like (degenerate or not) at x."""
    ff = first_fundamental(S, x)
    if tolB is None:
        tolB = default_tolB(ff.s)
    grad_norm = float(np.linalg.norm(ff.gradB))
    if abs(ff.B) <= tolB:
        return PointClass(PointKind.LIGHT_LIKE, grad_norm <= tolG,
                          ff.B, grad_norm)
    kind = PointKind.SPACE_LIKE if ff.B > 0 else PointKind.TIME_LIKE
    return PointClass(kind, False, ff.B, grad_norm)


@dataclass(frozen=True)
class LocusPoint:
    axis: int                     # grid-line direction (0-based)
    line: Tuple[int, ...]         # indices of the fixed coordinates
    x: Tuple[float, ...]
    point_class: PointClass


@dataclass(frozen=True)
class LocusScan:
    points: Tuple[LocusPoint, ...]
    identically_lightlike: bool


def grid_axes(box: Box, counts) -> List[np.ndarray]:
    if any(c < 2 for c in counts):
        raise ValueError("grid needs >= 2 nodes per axis")
    return [np.linspace(box.lo[d], box.hi[d], counts[d])
            for d in range(box.n)]


def scan_lightlike_locus(S: GraphHypersurface, counts,
                         tolB: float = 1e-9) -> LocusScan:
    """Bracket sign changes of B along every grid line and refine each
    root by bisection to |B| <= tolB; deterministic lexicographic order."""
    if S.domain is None:
        raise ValueError("surface has no domain box")
    axes = grid_axes(S.domain, counts)
    n = S.n
    shape = tuple(len(ax) for ax in axes)
    Bgrid = np.empty(shape)
    for idx in np.ndindex(shape):
        Bgrid[idx] = B_value(S, [axes[d][idx[d]] for d in range(n)])
    if np.all(np.abs(Bgrid) <= tolB):
        return LocusScan(points=(), identically_lightlike=True)

    points: List[LocusPoint] = []
    for d in range(n):
        others = [a for a in range(n) if a != d]
        for combo in itertools.product(*(range(shape[a]) for a in others)):
            fixed = {a: c for a, c in zip(others, combo)}

            def point_at(t: float) -> List[float]:
                x = [0.0] * n
                for a in others:
                    x[a] = float(axes[a][fixed[a]])
                x[d] = t
                return x

            def b_at(t: float) -> float:
                return B_value(S, point_at(t))

            def take_root(t: float) -> None:
                x = point_at(t)
                pc = classify_point(S, x)
                points.append(LocusPoint(axis=d, line=combo,
                                         x=tuple(x), point_class=pc))

            line_idx = [tuple(fixed.get(a, k) for a in range(n))
                        for k in range(shape[d])]
            vals = [Bgrid[ix] for ix in line_idx]
            for k in range(shape[d] - 1):
                b0, b1 = vals[k], vals[k + 1]
                if abs(b0) <= tolB:
                    take_root(float(axes[d][k]))
                    continue
                if abs(b1) <= tolB or b0 * b1 > 0:
                    continue
                lo, hi = float(axes[d][k]), float(axes[d][k + 1])
                blo = b0
                t = 0.5 * (lo + hi)
                for _ in range(200):
                    t = 0.5 * (lo + hi)
                    bm = b_at(t)
                    if abs(bm) <= tolB or hi - lo < 1e-15 * (1 + abs(t)):
                        break
                    if blo * bm < 0:
                        hi = t
                    else:
                        lo, blo = t, bm
                take_root(t)
            if abs(vals[-1]) <= tolB:
                take_root(float(axes[d][-1]))
    return LocusScan(points=tuple(points), identically_lightlike=False)
