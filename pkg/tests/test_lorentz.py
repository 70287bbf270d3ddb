"""Metric, Christoffel, causal classification and geodesic tests."""

import numpy as np
import pytest

from lightcone.errors import (DegenerateMetric, GeodesicFailure,
                              WrongSignature, ZeroVector)
from lightcone.lorentz import (CausalCharacter, MetricField, causal_character,
                               christoffel_at, integrate_geodesic, metric_at,
                               metric_jets, path_norm_drift,
                               validate_signature)

PERTURBED = ["-(1 + 0.1*x1^2)", "0", "0", "1", "0", "1"]


def test_minkowski_matrix():
    M = MetricField.minkowski(3)
    g = metric_at(M, np.zeros(4))
    assert np.array_equal(g, np.diag([-1.0, 1.0, 1.0, 1.0]))
    assert M.constant and M.is_minkowski()


def test_entry_mirroring():
    M = MetricField.from_strings(2, ["-1", "x1", "0", "2", "0", "1"])
    assert M.entry(1, 0) is M.entry(0, 1)
    assert not M.constant and not M.is_minkowski()
    g = metric_at(M, [0.0, 0.5, 0.0])
    assert g[0, 1] == g[1, 0] == 0.5


def test_from_strings_entry_count():
    with pytest.raises(ValueError):
        MetricField.from_strings(2, ["-1", "0", "1"])


def test_degenerate_metric_rejected():
    M = MetricField.from_strings(2, ["-1", "0", "0", "0", "0", "1"])
    with pytest.raises(DegenerateMetric):
        metric_at(M, np.zeros(3))
    # non-constant metric degenerate only at specific points
    M2 = MetricField.from_strings(2, ["-1", "0", "0", "x1", "0", "1"])
    with pytest.raises(DegenerateMetric):
        metric_at(M2, [0.0, 0.0, 0.0])
    assert metric_at(M2, [0.0, 1.0, 0.0])[1, 1] == 1.0


def test_validate_signature():
    validate_signature(MetricField.minkowski(2), np.zeros(3))
    bad = MetricField.from_strings(2, ["1", "0", "0", "1", "0", "1"])
    with pytest.raises(WrongSignature):
        validate_signature(bad, np.zeros(3))
    two_minus = MetricField.from_strings(2, ["-1", "0", "0", "-1", "0", "1"])
    with pytest.raises(WrongSignature):
        validate_signature(two_minus, np.zeros(3))


def test_christoffel_vanishes_for_constant_metric():
    G = christoffel_at(MetricField.minkowski(3), np.ones(4))
    assert not G.any()


def test_christoffel_metric_compatibility():
    # d_c g_ab = g_db Gamma^d_ca + g_ad Gamma^d_cb  (Levi-Civita)
    M = MetricField.from_strings(2, PERTURBED)
    p = np.array([0.3, 0.7, -0.2])
    g, dg = metric_jets(M, p)
    G = christoffel_at(M, p)
    lhs = dg
    rhs = (np.einsum("db,dca->cab", g, G) + np.einsum("ad,dcb->cab", g, G))
    assert np.allclose(lhs, rhs, atol=1e-12)
    assert np.allclose(G, np.transpose(G, (0, 2, 1)), atol=0)


def test_causal_character():
    M = MetricField.minkowski(2)
    p = np.zeros(3)
    assert causal_character(M, p, [1, 0, 0]) is CausalCharacter.TIME_LIKE
    assert causal_character(M, p, [0, 1, 0]) is CausalCharacter.SPACE_LIKE
    assert causal_character(M, p, [1, 0, 1]) is CausalCharacter.LIGHT_LIKE
    # tolerance is relative to |v|^2
    assert causal_character(M, p, [1, 0, 1 + 1e-10]) is \
        CausalCharacter.LIGHT_LIKE
    assert causal_character(M, p, [1, 0, 2]) is CausalCharacter.SPACE_LIKE
    with pytest.raises(ZeroVector):
        causal_character(M, p, [0.0, 0.0, 0.0])


def test_minkowski_geodesic_is_straight_line():
    M = MetricField.minkowski(2)
    v = np.array([1.0, 0.25, 0.5])
    path = integrate_geodesic(M, np.zeros(3), v, (-1.0, 1.0), 100)
    assert len(path.samples) == 101
    for t, pos, vel in path.samples:
        assert np.allclose(pos, (t + 1.0) * v, atol=1e-13)
        assert np.array_equal(vel, v)
    assert path_norm_drift(M, path) == 0.0


def test_geodesic_step_validation():
    M = MetricField.minkowski(2)
    with pytest.raises(ValueError):
        integrate_geodesic(M, np.zeros(3), np.ones(3), (0, 1), 1)


def test_geodesic_failure_carries_partial_path():
    M = MetricField.from_strings(2, ["-1", "0", "0", "1e-13", "0", "1"])
    with pytest.raises(GeodesicFailure) as exc:
        integrate_geodesic(M, np.zeros(3), np.array([1.0, 1.0, 0.0]),
                           (0.0, 1.0), 10)
    err = exc.value
    assert err.t_failure == 0.0
    assert len(err.partial_path.samples) == 1


def test_perturbed_metric_conserves_norm():
    M = MetricField.from_strings(2, PERTURBED)
    p = np.array([0.0, 0.5, 0.0])
    v = np.array([1.0 / np.sqrt(1.025), 1.0, 0.0])   # light-like at p
    path = integrate_geodesic(M, p, v, (0.0, 1.0), 500)
    assert path_norm_drift(M, path) < 1e-10
    # RK4: halving the step cuts the end-state error by ~2^4
    ref = integrate_geodesic(M, p, v, (0.0, 1.0), 4096).samples[-1]
    errs = []
    for steps in (32, 64):
        t, pos, vel = integrate_geodesic(M, p, v, (0.0, 1.0), steps).samples[-1]
        errs.append(np.linalg.norm(pos - ref[1]) + np.linalg.norm(vel - ref[2]))
    assert 10.0 < errs[0] / errs[1] < 25.0
