"""Axis decomposition f = a(y) + sum_i b_i(y) x_i + c(x, y) along the
x_n-axis, the explicit flat-metric restrictions alpha / alpha_l, the
degeneracy predicate, and the ODE normal form a'' = P, b_i'' = Q_i.

alpha and alpha_l are the restrictions of A - phi*B (and of its x_l
derivative) to the axis for the flat metric; the phi-free parts are the
literal closed-form displays, the phi terms use B|axis = D and
(d_l B)|axis = -2 sum_i b_i c_il - 2 a' b'_l.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from .errors import (DomainError, IdentityViolation, NotLightLike, SingularC)
from .expr import Const, Expression, Sub, eval_jet3, substitute_affine
from .surface import Box, GraphHypersurface

SINGULAR_C_THRESHOLD = 1e-8
IDENTITY_TOL = 1e-10
DEGENERACY_TOL = 1e-9
LIGHTLIKE_TOL = 1e-9


@dataclass(frozen=True)
class AxisProfile:
    """Restriction data of a surface at the axis point (0, ..., 0, y)."""

    n: int
    y: float
    a: float
    ap: float          # a'
    app: float         # a''
    b: np.ndarray      # (n-1,)
    bp: np.ndarray     # b'
    bpp: np.ndarray    # b'' = f_yyxi on the axis
    c2: np.ndarray     # (n-1, n-1)   c_ij
    c2p: np.ndarray    # (n-1, n-1)   c'_ij = c_xixjy
    c3: np.ndarray     # (n-1,)*3     c_ijk
    phi: float = 0.0
    phiI: np.ndarray = field(default_factory=lambda: np.zeros(0))


@dataclass(frozen=True)
class OdeState:
    """First-order form of the reduced system."""

    y: float
    a: float
    ap: float
    b: np.ndarray
    bp: np.ndarray

    def flat(self) -> np.ndarray:
        return np.concatenate(([self.a, self.ap], self.b, self.bp))

    @staticmethod
    def from_flat(y: float, z: np.ndarray) -> "OdeState":
        m = (len(z) - 2) // 2
        return OdeState(y, float(z[0]), float(z[1]),
                        np.asarray(z[2:2 + m], dtype=float),
                        np.asarray(z[2 + m:], dtype=float))


def decompose(S: GraphHypersurface, y: float) -> AxisProfile:
    """Axis jet of f (and phi) at (0, ..., 0, y), split into the a / b / c
    blocks and their derivatives."""
    n = S.n
    x = np.zeros(n)
    x[n - 1] = float(y)
    S.check_domain(x)
    fj = eval_jet3(S.f, x)
    pj = eval_jet3(S.phi, x)
    ax = n - 1
    m = n - 1
    a, ap, app = fj.v, float(fj.g[ax]), float(fj.h[ax, ax])
    b = fj.g[:m].copy()
    bp = fj.h[:m, ax].copy()
    bpp = fj.t[:m, ax, ax].copy()
    c2 = fj.h[:m, :m].copy()
    c2p = fj.t[:m, :m, ax].copy()
    c3 = fj.t[:m, :m, :m].copy()
    profile = AxisProfile(n=n, y=float(y), a=a, ap=ap, app=app, b=b, bp=bp,
                          bpp=bpp, c2=c2, c2p=c2p, c3=c3,
                          phi=pj.v, phiI=pj.g[:m].copy())
    # c and its stated derivatives vanish on the axis by construction;
    # a nonzero residual means the jet bookkeeping above is broken.
    residuals = [fj.v - a, fj.g[ax] - ap]
    residuals.extend(fj.g[:m] - b)
    residuals.extend(fj.h[:m, ax] - bp)
    residuals.extend(fj.t[:m, ax, ax] - bpp)
    if max(abs(float(r)) for r in residuals) > IDENTITY_TOL:
        raise IdentityViolation("axis decomposition identities violated")
    return profile


def _axis_B(p: AxisProfile) -> float:
    # B on the axis for the flat metric: D = 1 - a'^2 - sum b_i^2
    return 1.0 - p.ap ** 2 - float(p.b @ p.b)


def _axis_dB(p: AxisProfile, l: int) -> float:
    return -2.0 * float(p.b @ p.c2[:, l]) - 2.0 * p.ap * p.bp[l]


def alpha(p: AxisProfile) -> float:
    """Restriction of A - phi*B to the axis (flat metric)."""
    m = p.n - 1
    C = 1.0 - float(p.b @ p.b)
    D = 1.0 - p.ap ** 2 - float(p.b @ p.b)
    total = C * p.app
    for j in range(m):
        total += p.c2[j, j] * (D + p.b[j] ** 2)
    for i in range(m):
        for j in range(i + 1, m):
            total += 2.0 * p.b[i] * p.b[j] * p.c2[i, j]
    for i in range(m):
        total += 2.0 * p.ap * p.b[i] * p.bp[i]
    if p.phi != 0.0:
        total -= p.phi * _axis_B(p)
    return total


def alpha_l(p: AxisProfile, l: int) -> float:
    """Restriction of (A - phi*B)_{x_l} to the axis (flat metric); l is
    1-based in 1..n-1."""
    m = p.n - 1
    if not 1 <= l <= m:
        raise ValueError(f"l must be in 1..{m}")
    l -= 1
    C = 1.0 - float(p.b @ p.b)
    D = 1.0 - p.ap ** 2 - float(p.b @ p.b)
    total = C * p.bpp[l]
    total -= 2.0 * float(p.b @ p.c2[:, l]) * p.app
    for j in range(m):
        total += (D + p.b[j] ** 2) * p.c3[j, j, l]
    for j in range(m):
        inner = p.ap * p.bp[l]
        for i in range(m):
            if i != j:
                inner += p.b[i] * p.c2[i, l]
        total -= 2.0 * inner * p.c2[j, j]
    for i in range(m):
        for j in range(i + 1, m):
            total += 2.0 * (p.b[j] * p.c2[i, l] * p.c2[i, j]
                            + p.b[i] * p.c2[j, l] * p.c2[i, j]
                            + p.b[i] * p.b[j] * p.c3[i, j, l])
    for i in range(m):
        total += 2.0 * (p.c2[i, l] * p.ap * p.bp[i]
                        + p.b[i] * p.bp[l] * p.bp[i]
                        + p.b[i] * p.ap * p.c2p[i, l])
    if p.phi != 0.0 or np.any(p.phiI != 0.0):
        phil = p.phiI[l] if len(p.phiI) > l else 0.0
        total -= phil * _axis_B(p) + p.phi * _axis_dB(p, l)
    return total


def ode_rhs(S: GraphHypersurface, state: OdeState) -> Tuple[float, np.ndarray]:
    """Solve alpha = 0 for a'' and each alpha_l = 0 for b''_l, with the
    c-blocks and phi frozen as functions of y from the surface."""
    frozen = decompose(S, state.y)
    m = S.n - 1
    b, bp, ap = state.b, state.bp, state.ap
    C = 1.0 - float(b @ b)
    if abs(C) < SINGULAR_C_THRESHOLD:
        raise SingularC(f"|C| = {abs(C):.3e} below {SINGULAR_C_THRESHOLD}",
                        y=state.y)
    probe = AxisProfile(n=S.n, y=state.y, a=state.a, ap=ap, app=0.0,
                        b=b, bp=bp, bpp=np.zeros(m),
                        c2=frozen.c2, c2p=frozen.c2p, c3=frozen.c3,
                        phi=frozen.phi, phiI=frozen.phiI)
    app = -alpha(probe) / C
    probe = AxisProfile(n=S.n, y=state.y, a=state.a, ap=ap, app=app,
                        b=b, bp=bp, bpp=np.zeros(m),
                        c2=frozen.c2, c2p=frozen.c2p, c3=frozen.c3,
                        phi=frozen.phi, phiI=frozen.phiI)
    bpp = np.array([-alpha_l(probe, l + 1) / C for l in range(m)])
    return app, bpp


def is_degenerate_initial(p: AxisProfile, tol: float = DEGENERACY_TOL) -> bool:
    """Initial conditions of a degenerate light-like point at y = 0:
    a = 0, a' = 1, b_i = b'_i = 0 within tol."""
    return (abs(p.a) <= tol and abs(p.ap - 1.0) <= tol
            and np.all(np.abs(p.b) <= tol) and np.all(np.abs(p.bp) <= tol))


def _rotation_to_last_axis(w: np.ndarray) -> np.ndarray:
    """Rotation R in SO(n) with R w = e_n for a unit vector w."""
    n = len(w)
    e = np.zeros(n)
    e[-1] = 1.0
    c = float(w @ e)
    if c < -1.0 + 1e-12:
        R = np.eye(n)
        R[0, 0] = -1.0
        R[-1, -1] = -1.0
        return R
    return (np.eye(n) + 2.0 * np.outer(e, w)
            - np.outer(w + e, w + e) / (1.0 + c))


def normalize_graph(S: GraphHypersurface, q, v) -> GraphHypersurface:
    """Move q to the origin and rotate the light-like tangent dF(v) onto
    (1, 0, ..., 0, 1); flat metric only.

    A spatial rotation composed with a translation always suffices here:
    scaling the light-like vector to unit time component makes its
    spatial part a unit vector, so no boost (and no re-graphing Newton
    iteration) is needed, and the new graph function is the exact affine
    reparametrization of f.
    """
    if not S.metric.is_minkowski():
        raise ValueError("normalize_graph requires the Minkowski metric")
    q = np.asarray(q, dtype=float)
    v = np.asarray(v, dtype=float)
    S.check_domain(q)
    fj = eval_jet3(S.f, q)
    u0 = float(fj.g @ v)
    dFv2 = -u0 * u0 + float(v @ v)
    scale = u0 * u0 + float(v @ v)
    if scale == 0.0 or abs(dFv2) > LIGHTLIKE_TOL * scale or u0 == 0.0:
        raise NotLightLike(
            f"dF(v) has g(dFv, dFv) = {dFv2:.3e}, not light-like")
    w = v / u0
    w = w / np.linalg.norm(w)
    R = _rotation_to_last_axis(w)
    # new graph: f_tilde(z) = f(q + R^T z) - f(q)
    f_new: Expression = Sub(substitute_affine(S.f, R.T, q), Const(fj.v))
    phi_new = substitute_affine(S.phi, R.T, q)
    domain = None
    if S.domain is not None:
        r = min(min(qi - lo, hi - qi) for qi, lo, hi
                in zip(q, S.domain.lo, S.domain.hi))
        if r <= 0:
            raise DomainError("base point on the domain boundary", point=q)
        half = r / np.sqrt(S.n)
        domain = Box(tuple(-half for _ in range(S.n)),
                     tuple(half for _ in range(S.n)))
    return GraphHypersurface(S.n, f_new, S.metric, phi_new, domain)
