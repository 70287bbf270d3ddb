"""Lorentzian metric evaluation, Christoffel symbols, causal classification
and geodesic integration in coordinates (x0, ..., xn)."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .errors import DegenerateMetric, GeodesicFailure, WrongSignature, ZeroVector
from .expr import Const, Expression, eval_jet3, parse
from .jet import Jet3

DET_FLOOR = 1e-12
CAUSAL_TOL = 1e-9


class CausalCharacter(enum.Enum):
    TIME_LIKE = "TimeLike"
    SPACE_LIKE = "SpaceLike"
    LIGHT_LIKE = "LightLike"


@dataclass(frozen=True)
class MetricField:
    """Symmetric (n+1)x(n+1) metric with expression entries in x0..xn.

    Only the upper triangle is stored; ``entry(a, b)`` mirrors.  The
    ``constant`` flag marks metrics whose entries are all literal
    constants (Christoffel symbols vanish identically, integration is
    exact).
    """

    n: int
    upper: Tuple[Expression, ...]   # row-major upper triangle, (n+1)(n+2)/2
    constant: bool = False

    @property
    def dim(self) -> int:
        return self.n + 1

    def entry(self, a: int, b: int) -> Expression:
        if a > b:
            a, b = b, a
        N = self.dim
        # row-major upper triangle offset
        idx = a * N - a * (a - 1) // 2 + (b - a)
        return self.upper[idx]

    @staticmethod
    def minkowski(n: int) -> "MetricField":
        N = n + 1
        entries = []
        for a in range(N):
            for b in range(a, N):
                if a != b:
                    entries.append(Const(0.0))
                else:
                    entries.append(Const(-1.0 if a == 0 else 1.0))
        return MetricField(n, tuple(entries), constant=True)

    @staticmethod
    def from_strings(n: int, texts) -> "MetricField":
        """Upper-triangle entries, row-major, in variables x0..xn."""
        N = n + 1
        want = N * (N + 1) // 2
        if len(texts) != want:
            raise ValueError(f"need {want} upper-triangle entries, got {len(texts)}")
        entries = tuple(parse(t, N, first_index=0) for t in texts)
        constant = all(isinstance(e, Const) for e in entries)
        return MetricField(n, entries, constant=constant)

    def is_minkowski(self) -> bool:
        if not self.constant:
            return False
        N = self.dim
        for a in range(N):
            for b in range(a, N):
                want = (-1.0 if a == 0 else 1.0) if a == b else 0.0
                if self.entry(a, b).value != want:
                    return False
        return True


@dataclass
class GeodesicPath:
    """RK4 samples (t, position, velocity) with strictly increasing t."""

    samples: List[Tuple[float, np.ndarray, np.ndarray]] = field(default_factory=list)
    step: float = 0.0


def _entry_jets(M: MetricField, p: np.ndarray) -> List[List[Jet3]]:
    N = M.dim
    jets = [[None] * N for _ in range(N)]
    for a in range(N):
        for b in range(a, N):
            j = eval_jet3(M.entry(a, b), p)
            jets[a][b] = j
            jets[b][a] = j
    return jets


from functools import lru_cache


@lru_cache(maxsize=64)
def _constant_metric_values(M: MetricField) -> Tuple[np.ndarray, np.ndarray]:
    N = M.dim
    g = np.empty((N, N))
    for a in range(N):
        for b in range(N):
            g[a, b] = M.entry(a, b).value
    g.setflags(write=False)
    dg = np.zeros((N, N, N))
    dg.setflags(write=False)
    return g, dg


def metric_jets(M: MetricField, p) -> Tuple[np.ndarray, np.ndarray]:
    """(g, dg) at p: g[a,b] values and dg[d,a,b] = d g_ab / d x_d."""
    p = np.asarray(p, dtype=float)
    N = M.dim
    if M.constant:
        g, dg = _constant_metric_values(M)
        if abs(np.linalg.det(g)) <= DET_FLOOR:
            raise DegenerateMetric(f"|det g| <= {DET_FLOOR}")
        return g, dg
    jets = _entry_jets(M, p)
    g = np.empty((N, N))
    dg = np.empty((N, N, N))
    for a in range(N):
        for b in range(N):
            g[a, b] = jets[a][b].v
            dg[:, a, b] = jets[a][b].g
    if abs(np.linalg.det(g)) <= DET_FLOOR:
        raise DegenerateMetric(f"|det g| <= {DET_FLOOR} at {tuple(p)}")
    return g, dg


def metric_at(M: MetricField, p) -> np.ndarray:
    """Metric matrix g(p); raises DegenerateMetric near-singular points."""
    g, _ = metric_jets(M, p)
    return g


def validate_signature(M: MetricField, base_point) -> None:
    """Check eigenvalue signature (-,+,...,+) at the declared base point."""
    g = metric_at(M, base_point)
    ev = np.linalg.eigvalsh(g)
    if np.sum(ev < 0) != 1 or np.sum(ev > 0) != M.n:
        raise WrongSignature(
            f"eigenvalues {ev} at base point {tuple(base_point)} are not (-,+,...,+)")


def christoffel_at(M: MetricField, p) -> np.ndarray:
    """Levi-Civita symbols Gamma[c, a, b], symmetric in (a, b)."""
    p = np.asarray(p, dtype=float)
    if M.constant:
        N = M.dim
        g = metric_at(M, p)   # still enforces nondegeneracy
        del g
        return np.zeros((N, N, N))
    g, dg = metric_jets(M, p)
    ginv = np.linalg.inv(g)
    # Gamma^c_ab = 1/2 g^cd (d_a g_db + d_b g_ad - d_d g_ab)
    term = (np.einsum("adb->dab", dg) + np.einsum("bad->dab", dg)
            - np.einsum("dab->dab", dg))
    return 0.5 * np.einsum("cd,dab->cab", ginv, term)


def causal_character(M: MetricField, p, v, tol: float = CAUSAL_TOL) -> CausalCharacter:
    """Sign of g_p(v, v); |g_p(v,v)| <= tol*|v|^2 counts as light-like."""
    v = np.asarray(v, dtype=float)
    if not np.any(v != 0.0):
        raise ZeroVector("cannot classify the zero vector")
    g = metric_at(M, p)
    q = float(v @ g @ v)
    if abs(q) <= tol * float(v @ v):
        return CausalCharacter.LIGHT_LIKE
    return CausalCharacter.TIME_LIKE if q < 0 else CausalCharacter.SPACE_LIKE


def _accel(M: MetricField, pos: np.ndarray, vel: np.ndarray) -> np.ndarray:
    G = christoffel_at(M, pos)
    return -np.einsum("cab,a,b->c", G, vel, vel)


def integrate_geodesic(M: MetricField, p, v, t_span, steps: int) -> GeodesicPath:
    """Fixed-step RK4 on the geodesic equation from (p, v) over t_span."""
    if steps < 2:
        raise ValueError("steps must be >= 2")
    pos = np.asarray(p, dtype=float).copy()
    vel = np.asarray(v, dtype=float).copy()
    t0, t1 = float(t_span[0]), float(t_span[1])
    h = (t1 - t0) / steps
    path = GeodesicPath(step=h)
    path.samples.append((t0, pos.copy(), vel.copy()))
    t = t0
    for k in range(steps):
        try:
            k1p, k1v = vel, _accel(M, pos, vel)
            k2p, k2v = vel + 0.5 * h * k1v, _accel(M, pos + 0.5 * h * k1p,
                                                   vel + 0.5 * h * k1v)
            k3p, k3v = vel + 0.5 * h * k2v, _accel(M, pos + 0.5 * h * k2p,
                                                   vel + 0.5 * h * k2v)
            k4p, k4v = vel + h * k3v, _accel(M, pos + h * k3p, vel + h * k3v)
        except DegenerateMetric as err:
            raise GeodesicFailure(str(err), path, t) from None
        pos = pos + (h / 6.0) * (k1p + 2 * k2p + 2 * k3p + k4p)
        vel = vel + (h / 6.0) * (k1v + 2 * k2v + 2 * k3v + k4v)
        t = t0 + (k + 1) * h
        path.samples.append((t, pos.copy(), vel.copy()))
    return path


def path_norm_drift(M: MetricField, path: GeodesicPath) -> float:
    """max_t |g(v,v) - g(v0,v0)| along an integrated path."""
    vals = [float(vel @ metric_at(M, pos) @ vel) for _, pos, vel in path.samples]
    return max(abs(q - vals[0]) for q in vals)
