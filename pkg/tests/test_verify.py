"""Theorem verification pipeline tests."""

import numpy as np
import pytest

from lightcone.errors import SingularC
from lightcone.lorentz import MetricField
from lightcone.reduction import OdeState
from lightcone.surface import Box, GraphHypersurface
from lightcone.verify import (Tolerances, Verdict, estimate_lipschitz,
                              integrate_reduced_ode, verify_theorem,
                              zmc_residual_scan)

BOX = Box((-2.0, -2.0), (2.0, 2.0))


def surf(f, phi="0", domain=BOX):
    return GraphHypersurface.from_strings(2, f, MetricField.minkowski(2),
                                          phi=phi, domain=domain)


def test_zmc_residual_scan():
    rmax, argmax = zmc_residual_scan(surf("x2"), [11, 11])
    assert rmax == 0.0 and len(argmax) == 2
    rmax, argmax = zmc_residual_scan(surf("x1^2 / 2"), [11, 11])
    assert rmax > 0.1
    with pytest.raises(ValueError):
        zmc_residual_scan(surf("x2", domain=None), [11, 11])


def test_integrate_reduced_ode_trivial():
    init = OdeState(0.0, 0.0, 1.0, np.zeros(1), np.zeros(1))
    traj = integrate_reduced_ode(surf("x2"), (0.0, 1.0), 50, init)
    assert len(traj) == 51
    for st in traj:
        assert abs(st.a - st.y) < 1e-14 and abs(st.ap - 1.0) < 1e-14
        assert np.all(np.abs(st.b) < 1e-14)
    with pytest.raises(ValueError):
        integrate_reduced_ode(surf("x2"), (0.0, 1.0), 1, init)


def test_integrate_reduced_ode_singular_carries_partial():
    init = OdeState(0.0, 0.0, 1.0, np.array([1.0]), np.zeros(1))
    with pytest.raises(SingularC) as exc:
        integrate_reduced_ode(surf("x2"), (0.0, 1.0), 10, init)
    err = exc.value
    assert err.y == 0.0
    assert err.partial is not None and len(err.partial) == 1


def test_estimate_lipschitz_deterministic():
    S = surf("x2")
    z0 = np.array([0.0, 1.0, 0.0, 0.0])
    a = estimate_lipschitz(S, 0.0, z0 - 0.1, z0 + 0.1, samples=16, seed=7)
    b = estimate_lipschitz(S, 0.0, z0 - 0.1, z0 + 0.1, samples=16, seed=7)
    c = estimate_lipschitz(S, 0.0, z0 - 0.1, z0 + 0.1, samples=16, seed=8)
    assert a == b and a >= 0.0 and c != a
    with pytest.raises(ValueError):
        estimate_lipschitz(S, 0.0, z0 - 0.1, z0 + 0.1, samples=1)


def test_verify_plane_passes():
    rep = verify_theorem(surf("x2"), steps=200)
    assert rep.verdict is Verdict.PASS
    assert rep.zmc_residual_max == 0.0
    assert rep.containment_max <= 1e-12
    assert rep.degeneracy_B_max <= 1e-12
    assert rep.degeneracy_grad_max <= 1e-12
    assert rep.ode_deviation <= 1e-12
    assert rep.lipschitz_estimate is not None


def test_verify_paraboloid_inapplicable_on_hypothesis():
    rep = verify_theorem(surf("x1^2 / 2"), steps=100)
    assert rep.verdict is Verdict.INAPPLICABLE
    assert "hypothesis" in rep.reason


def test_verify_zmc_without_degenerate_point_inapplicable():
    rep = verify_theorem(surf("x1 * tanh(x2)",
                              domain=Box((-0.5, -0.5), (0.5, 0.5))),
                         steps=100, t_span=(-0.4, 0.4))
    assert rep.verdict is Verdict.INAPPLICABLE
    assert "degenerate" in rep.reason


def test_verify_fails_on_containment():
    # force past the hypothesis gate with a loose zmc tolerance; the
    # surface has the degenerate initial data but leaves the geodesic
    tol = Tolerances(zmc=1e6)
    rep = verify_theorem(surf("x2 + 0.001 * x2^2"), steps=100,
                         tolerances=tol)
    assert rep.verdict is Verdict.FAIL
    assert "containment" in rep.reason


def test_verify_report_fields_on_early_exit():
    rep = verify_theorem(surf("x1^2 / 2"), steps=100)
    assert rep.zmc_residual_max is not None
    assert rep.containment_max is None and rep.ode_deviation is None
