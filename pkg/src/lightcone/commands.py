"""Analysis commands behind the service endpoints.

Each command takes a validated RunConfig and returns rendered artifact
texts plus an exit code; output bytes are deterministic for a given
config (fixed float formatting, fixed ordering, parallelism-independent
assembly).  LIGHTCONE_THREADS caps grid-scan parallelism.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from .config import RunConfig, build_metric, build_surface
from .errors import ConfigError, SingularC
from .lorentz import integrate_geodesic, metric_at
from .reduction import OdeState, decompose
from .reports import canonical_json, csv_text
from .surface import (GraphHypersurface, classify_point, grid_axes,
                      scan_lightlike_locus)
from .verify import (Tolerances, Verdict, integrate_reduced_ode,
                     verify_theorem, zmc_residual_scan)

COMMANDS = ("classify", "locus", "residual", "reduce", "ode", "geodesic",
            "verify")

EXIT_OK = 0
EXIT_FAIL = 2
EXIT_INAPPLICABLE = 3


@dataclass
class CommandResult:
    command: str
    exit_code: int = EXIT_OK
    verdict: Optional[str] = None
    reason: Optional[str] = None
    artifacts: Dict[str, str] = field(default_factory=dict)


def _thread_count() -> int:
    try:
        return max(1, int(os.environ.get("LIGHTCONE_THREADS", "1")))
    except ValueError:
        return 1


def _grid_points(S: GraphHypersurface, counts) -> List[tuple]:
    axes = grid_axes(S.domain, counts)
    return [tuple(float(axes[d][idx[d]]) for d in range(S.n))
            for idx in np.ndindex(*[len(a) for a in axes])]


def _map_points(fn, points):
    threads = _thread_count()
    if threads == 1:
        return [fn(p) for p in points]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, points))


def run_classify(cfg: RunConfig) -> CommandResult:
    S = build_surface(cfg)
    tol_b = cfg.tolerances.tol_b
    tol_g = cfg.tolerances.tol_grad
    points = _grid_points(S, cfg.grid)
    classes = _map_points(
        lambda x: classify_point(S, x, tolB=tol_b, tolG=tol_g), points)
    header = [f"x{i + 1}" for i in range(S.n)] + [
        "class", "degenerate", "B", "grad_B_norm"]
    rows = [list(x) + [pc.kind.value, pc.degenerate, pc.B, pc.grad_norm]
            for x, pc in zip(points, classes)]
    counts = {"SpaceLike": 0, "TimeLike": 0, "LightLike": 0,
              "DegenerateLightLike": 0}
    for pc in classes:
        counts[pc.kind.value] += 1
        if pc.degenerate:
            counts["DegenerateLightLike"] += 1
    report = {"command": "classify", "grid": list(cfg.grid),
              "counts": counts,
              "tolerances": {"tol_b": tol_b, "tol_grad": tol_g}}
    return CommandResult("classify", artifacts={
        "classify_map.csv": csv_text(header, rows),
        "classify_counts.json": canonical_json(report)})


def run_locus(cfg: RunConfig) -> CommandResult:
    S = build_surface(cfg)
    tol_b = cfg.tolerances.tol_b if cfg.tolerances.tol_b is not None else 1e-9
    scan = scan_lightlike_locus(S, cfg.grid, tolB=tol_b)
    header = ["axis"] + [f"x{i + 1}" for i in range(S.n)] + [
        "class", "degenerate", "B", "grad_B_norm"]
    rows = [[p.axis + 1] + list(p.x)
            + [p.point_class.kind.value, p.point_class.degenerate,
               p.point_class.B, p.point_class.grad_norm]
            for p in scan.points]
    summary = {"command": "locus", "count": len(scan.points),
               "identically_lightlike": scan.identically_lightlike,
               "grid": list(cfg.grid), "tol_b": tol_b}
    return CommandResult("locus", artifacts={
        "locus_points.csv": csv_text(header, rows),
        "locus_summary.json": canonical_json(summary)})


def run_residual(cfg: RunConfig) -> CommandResult:
    S = build_surface(cfg)
    rmax, argmax = zmc_residual_scan(S, cfg.grid)
    report = {"command": "residual", "max_abs_tilde_A": rmax,
              "argmax": list(argmax), "grid": list(cfg.grid),
              "tolerance_zmc": cfg.tolerances.zmc,
              "hypothesis_ok": rmax <= cfg.tolerances.zmc}
    return CommandResult("residual", artifacts={
        "residual.json": canonical_json(report)})


def run_reduce(cfg: RunConfig) -> CommandResult:
    S = build_surface(cfg)
    n = S.n
    m = n - 1
    ys = np.linspace(S.domain.lo[n - 1], S.domain.hi[n - 1], cfg.grid[n - 1])
    header = ["y", "a", "a_prime", "a_pprime"]
    header += [f"b_{i + 1}" for i in range(m)]
    header += [f"bp_{i + 1}" for i in range(m)]
    header += [f"bpp_{i + 1}" for i in range(m)]
    pairs = [(i, j) for i in range(m) for j in range(i, m)]
    triples = [(i, j, k) for i in range(m) for j in range(i, m)
               for k in range(j, m)]
    header += [f"c_{i + 1}{j + 1}" for i, j in pairs]
    header += [f"cp_{i + 1}{j + 1}" for i, j in pairs]
    header += [f"c_{i + 1}{j + 1}{k + 1}" for i, j, k in triples]
    header += ["phi"] + [f"phi_{i + 1}" for i in range(m)]
    rows = []
    for y in ys:
        p = decompose(S, float(y))
        row = [p.y, p.a, p.ap, p.app]
        row += list(p.b) + list(p.bp) + list(p.bpp)
        row += [p.c2[i, j] for i, j in pairs]
        row += [p.c2p[i, j] for i, j in pairs]
        row += [p.c3[i, j, k] for i, j, k in triples]
        row += [p.phi] + list(p.phiI)
        rows.append([float(v) for v in row])
    return CommandResult("reduce", artifacts={
        "axis_profile.csv": csv_text(header, rows)})


def run_ode(cfg: RunConfig) -> CommandResult:
    S = build_surface(cfg)
    m = S.n - 1
    spec = cfg.ode_init
    if spec is None:
        init = OdeState(0.0, 0.0, 1.0, np.zeros(m), np.zeros(m))
    else:
        b = np.asarray(spec.b if spec.b else [0.0] * m, dtype=float)
        bp = np.asarray(spec.b_prime if spec.b_prime else [0.0] * m,
                        dtype=float)
        if len(b) != m or len(bp) != m:
            raise ConfigError("ode_init b/b_prime must have n-1 entries")
        init = OdeState(0.0, spec.a, spec.a_prime, b, bp)
    status = {"command": "ode", "status": "ok", "singular_y": None,
              "steps": cfg.steps, "y_span": list(cfg.t_span)}
    exit_code = EXIT_OK
    try:
        traj = integrate_reduced_ode(S, cfg.t_span, cfg.steps, init)
    except SingularC as err:
        traj = err.partial or []
        status["status"] = "singular"
        status["singular_y"] = err.y
        exit_code = EXIT_FAIL
    header = ["y", "a", "a_prime"] + [f"b_{i + 1}" for i in range(m)] \
        + [f"bp_{i + 1}" for i in range(m)]
    rows = [[st.y, st.a, st.ap] + list(st.b) + list(st.bp) for st in traj]
    rows = [[float(v) for v in row] for row in rows]
    return CommandResult("ode", exit_code=exit_code, artifacts={
        "ode_trajectory.csv": csv_text(header, rows),
        "ode_summary.json": canonical_json(status)})


def run_geodesic(cfg: RunConfig) -> CommandResult:
    M = build_metric(cfg)
    N = cfg.n + 1
    if cfg.geodesic is not None:
        p = np.asarray(cfg.geodesic.point, dtype=float)
        v = np.asarray(cfg.geodesic.velocity, dtype=float)
        if len(p) != N or len(v) != N:
            raise ConfigError("geodesic point/velocity must have n+1 entries")
    else:
        p = np.zeros(N)
        v = np.zeros(N)
        v[0] = 1.0
        v[-1] = 1.0
    path = integrate_geodesic(M, p, v, cfg.t_span, cfg.steps)
    header = ["t"] + [f"x{a}" for a in range(N)] + [f"v{a}" for a in range(N)] \
        + ["g_vv"]
    rows = []
    for t, pos, vel in path.samples:
        gvv = float(vel @ metric_at(M, pos) @ vel)
        rows.append([float(t)] + [float(c) for c in pos]
                    + [float(c) for c in vel] + [gvv])
    return CommandResult("geodesic", artifacts={
        "geodesic.csv": csv_text(header, rows)})


def run_verify(cfg: RunConfig) -> CommandResult:
    S = build_surface(cfg)
    tol = Tolerances(zmc=cfg.tolerances.zmc,
                     containment=cfg.tolerances.containment,
                     b_axis=cfg.tolerances.b_axis,
                     gradb_axis=cfg.tolerances.grad_axis,
                     ode=cfg.tolerances.ode,
                     initial=cfg.tolerances.initial)
    rep = verify_theorem(S, cfg.t_span, cfg.steps, tol, grid=cfg.grid,
                         seed=cfg.seed)
    report = {"command": "verify",
              "verdict": rep.verdict.value,
              "reason": rep.reason,
              "zmc_residual_max": rep.zmc_residual_max,
              "zmc_argmax": list(rep.zmc_argmax) if rep.zmc_argmax else None,
              "containment_max": rep.containment_max,
              "degeneracy_B_max": rep.degeneracy_B_max,
              "degeneracy_grad_max": rep.degeneracy_grad_max,
              "ode_deviation": rep.ode_deviation,
              "lipschitz_estimate": rep.lipschitz_estimate,
              "lipschitz_seed": rep.lipschitz_seed,
              "t_span": list(cfg.t_span), "steps": cfg.steps,
              "tolerances": rep.tolerances}
    exit_code = {Verdict.PASS: EXIT_OK, Verdict.FAIL: EXIT_FAIL,
                 Verdict.INAPPLICABLE: EXIT_INAPPLICABLE}[rep.verdict]
    return CommandResult("verify", exit_code=exit_code,
                         verdict=rep.verdict.value, reason=rep.reason,
                         artifacts={"verify_report.json":
                                    canonical_json(report)})


_RUNNERS = {"classify": run_classify, "locus": run_locus,
            "residual": run_residual, "reduce": run_reduce,
            "ode": run_ode, "geodesic": run_geodesic, "verify": run_verify}


def execute(command: str, cfg: RunConfig) -> CommandResult:
    if command not in _RUNNERS:
        raise ValueError(f"unknown command {command!r}")
    return _RUNNERS[command](cfg)
