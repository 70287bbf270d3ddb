"""Machine verification of the light-like geodesic theorem on a given
surface: hypothesis scan, geodesic containment and degeneracy along the
axis, reduced-ODE integration from the degenerate initial data, and a
Lipschitz estimate for the reduced right-hand side."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .errors import SingularC
from .expr import eval_jet3
from .reduction import (OdeState, SINGULAR_C_THRESHOLD, decompose,
                        is_degenerate_initial, ode_rhs)
from .surface import (GraphHypersurface, first_fundamental, grid_axes,
                      operator_tildeA)


class Verdict(enum.Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    INAPPLICABLE = "INAPPLICABLE"


@dataclass(frozen=True)
class Tolerances:
    zmc: float = 1e-7
    containment: float = 1e-8
    b_axis: float = 1e-8
    gradb_axis: float = 1e-6
    ode: float = 1e-6
    initial: float = 1e-9

    def as_dict(self) -> Dict[str, float]:
        return {"zmc": self.zmc, "containment": self.containment,
                "b_axis": self.b_axis, "gradb_axis": self.gradb_axis,
                "ode": self.ode, "initial": self.initial}


@dataclass
class TheoremReport:
    verdict: Verdict
    reason: str
    zmc_residual_max: Optional[float] = None
    zmc_argmax: Optional[Tuple[float, ...]] = None
    containment_max: Optional[float] = None
    degeneracy_B_max: Optional[float] = None
    degeneracy_grad_max: Optional[float] = None
    ode_deviation: Optional[float] = None
    lipschitz_estimate: Optional[float] = None
    lipschitz_seed: int = 0
    tolerances: Dict[str, float] = field(default_factory=dict)


def zmc_residual_scan(S: GraphHypersurface, counts
                      ) -> Tuple[float, Tuple[float, ...]]:
    """Deterministic max of |A - phi*B| over the domain grid."""
    if S.domain is None:
        raise ValueError("surface has no domain box")
    axes = grid_axes(S.domain, counts)
    best = -1.0
    argmax: Tuple[float, ...] = ()
    for idx in np.ndindex(*[len(a) for a in axes]):
        x = tuple(float(axes[d][idx[d]]) for d in range(S.n))
        r = abs(operator_tildeA(S, x))
        if r > best:
            best, argmax = r, x
    return best, argmax


def integrate_reduced_ode(S: GraphHypersurface, y_span, steps: int,
                          init: OdeState) -> List[OdeState]:
    """RK4 trajectory of the first-order system built on ode_rhs."""
    if steps < 2:
        raise ValueError("steps must be >= 2")
    y0, y1 = float(y_span[0]), float(y_span[1])
    h = (y1 - y0) / steps
    m = S.n - 1

    def rhs(y: float, z: np.ndarray) -> np.ndarray:
        st = OdeState.from_flat(y, z)
        app, bpp = ode_rhs(S, st)
        return np.concatenate(([st.ap, app], st.bp, bpp))

    z = OdeState(y0, init.a, init.ap,
                 np.asarray(init.b, dtype=float),
                 np.asarray(init.bp, dtype=float)).flat()
    traj = [OdeState.from_flat(y0, z)]
    # state layout: (a, a', b_1..b_m, b'_1..b'_m)
    z = np.concatenate((z[:2], z[2:2 + m], z[2 + m:]))
    for k in range(steps):
        y = y0 + k * h
        try:
            k1 = rhs(y, z)
            k2 = rhs(y + 0.5 * h, z + 0.5 * h * k1)
            k3 = rhs(y + 0.5 * h, z + 0.5 * h * k2)
            k4 = rhs(y + h, z + h * k3)
        except SingularC as err:
            raise SingularC(str(err), y=y, partial=traj) from None
        z = z + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        traj.append(OdeState.from_flat(y0 + (k + 1) * h, z))
    return traj


def estimate_lipschitz(S: GraphHypersurface, y: float, lo, hi,
                       samples: int, seed: int = 0) -> float:
    """Max difference quotient of (a'', b''_I) over sampled state pairs
    in the box [lo, hi] (flattened (a, a', b_I, b'_I) coordinates)."""
    if samples < 2:
        raise ValueError("samples must be >= 2")
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    rng = np.random.default_rng(seed)
    pts = rng.uniform(lo, hi, size=(samples, len(lo)))
    vals = []
    for z in pts:
        st = OdeState.from_flat(y, z)
        app, bpp = ode_rhs(S, st)   # raises SingularC if the box touches C=0
        vals.append(np.concatenate(([app], bpp)))
    best = 0.0
    for i in range(samples):
        for j in range(i + 1, samples):
            dz = float(np.linalg.norm(pts[i] - pts[j]))
            if dz == 0.0:
                continue
            q = float(np.linalg.norm(vals[i] - vals[j])) / dz
            best = max(best, q)
    return best


def verify_theorem(S: GraphHypersurface, t_span=(-1.0, 1.0),
                   steps: int = 1000, tolerances: Tolerances = Tolerances(),
                   grid=None, seed: int = 0) -> TheoremReport:
    """Check that a degenerate light-like point of a zero-mean-curvature
    graph forces the light-like geodesic t -> (t, 0, ..., 0, t) to lie on
    the graph and consist of degenerate light-like points, and that the
    reduced ODE from the degenerate initial data stays on the trivial
    solution (a, b) = (y, 0)."""
    report = TheoremReport(verdict=Verdict.INAPPLICABLE, reason="",
                           lipschitz_seed=seed,
                           tolerances=tolerances.as_dict())
    if grid is None:
        grid = [21] * S.n
    zmc_max, zmc_arg = zmc_residual_scan(S, grid)
    report.zmc_residual_max = zmc_max
    report.zmc_argmax = zmc_arg
    if zmc_max > tolerances.zmc:
        report.reason = ("zero-mean-curvature hypothesis fails: "
                         f"max |A - phi B| = {zmc_max:.3e} at {zmc_arg}")
        return report

    prof0 = decompose(S, 0.0)
    if not is_degenerate_initial(prof0, tolerances.initial):
        report.reason = ("origin is not a degenerate light-like point: "
                         f"a(0)={prof0.a:.3e}, a'(0)-1={prof0.ap - 1:.3e}, "
                         f"max|b|={np.max(np.abs(prof0.b), initial=0):.3e}, "
                         f"max|b'|={np.max(np.abs(prof0.bp), initial=0):.3e}")
        return report

    t0, t1 = float(t_span[0]), float(t_span[1])
    ts = np.linspace(t0, t1, steps + 1)
    cont = 0.0
    bmax = 0.0
    gmax = 0.0
    for t in ts:
        x = np.zeros(S.n)
        x[-1] = t
        cont = max(cont, abs(eval_jet3(S.f, x).v - t))
        ff = first_fundamental(S, x)
        bmax = max(bmax, abs(ff.B))
        gmax = max(gmax, float(np.linalg.norm(ff.gradB)))
    report.containment_max = cont
    report.degeneracy_B_max = bmax
    report.degeneracy_grad_max = gmax

    m = S.n - 1
    init = OdeState(0.0, 0.0, 1.0, np.zeros(m), np.zeros(m))
    try:
        fwd = integrate_reduced_ode(S, (0.0, t1), steps, init)
        bwd = integrate_reduced_ode(S, (0.0, t0), steps, init)
    except SingularC as err:
        report.verdict = Verdict.FAIL
        report.reason = f"reduced ODE left its chart: {err}"
        return report
    dev = 0.0
    for st in list(fwd) + list(bwd):
        dev = max(dev, abs(st.a - st.y),
                  float(np.max(np.abs(st.b), initial=0.0)))
    report.ode_deviation = dev

    center = init.flat()
    radius = 0.1
    report.lipschitz_estimate = estimate_lipschitz(
        S, 0.0, center - radius, center + radius, samples=32, seed=seed)

    checks = [("containment", cont, tolerances.containment),
              ("B along the axis", bmax, tolerances.b_axis),
              ("grad B along the axis", gmax, tolerances.gradb_axis),
              ("ODE deviation from the trivial solution", dev, tolerances.ode)]
    for name, value, tol in checks:
        if value > tol:
            report.verdict = Verdict.FAIL
            report.reason = f"{name} residual {value:.3e} exceeds {tol:.1e}"
            return report
    report.verdict = Verdict.PASS
    report.reason = "all residuals within tolerance"
    return report
