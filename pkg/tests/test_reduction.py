"""Axis decomposition, alpha / alpha_l displays, ODE normal form and
coordinate normalization tests."""

import numpy as np
import pytest

from lightcone.errors import DomainError, NotLightLike, SingularC
from lightcone.expr import eval_jet3
from lightcone.lorentz import MetricField
from lightcone.reduction import (AxisProfile, OdeState, alpha, alpha_l,
                                 decompose, is_degenerate_initial,
                                 normalize_graph, ode_rhs)
from lightcone.surface import Box, GraphHypersurface, operator_tildeA

from conftest import directional_fd, random_surface_expr


def surf(n, f, phi="0", domain=None):
    return GraphHypersurface.from_strings(n, f, MetricField.minkowski(n),
                                          phi=phi, domain=domain)


def profile(n=2, y=0.0, a=0.0, ap=0.0, app=0.0, b=None, bp=None, bpp=None,
            c2=None, c2p=None, c3=None, phi=0.0, phiI=None):
    m = n - 1
    return AxisProfile(
        n=n, y=y, a=a, ap=ap, app=app,
        b=np.zeros(m) if b is None else np.asarray(b, float),
        bp=np.zeros(m) if bp is None else np.asarray(bp, float),
        bpp=np.zeros(m) if bpp is None else np.asarray(bpp, float),
        c2=np.zeros((m, m)) if c2 is None else np.asarray(c2, float),
        c2p=np.zeros((m, m)) if c2p is None else np.asarray(c2p, float),
        c3=np.zeros((m, m, m)) if c3 is None else np.asarray(c3, float),
        phi=phi, phiI=np.zeros(m) if phiI is None else np.asarray(phiI, float))


# -- decompose -------------------------------------------------------------------

def test_decompose_plane():
    p = decompose(surf(2, "x2"), 0.7)
    assert (p.a, p.ap, p.app) == (0.7, 1.0, 0.0)
    assert not p.b.any() and not p.bp.any() and not p.bpp.any()
    assert not p.c2.any() and not p.c2p.any() and not p.c3.any()


def test_decompose_tanh():
    y = 0.4
    p = decompose(surf(2, "x1 * tanh(x2)"), y)
    sech2 = 1.0 - np.tanh(y) ** 2
    assert p.a == 0.0 and p.ap == 0.0 and p.app == 0.0
    assert p.b[0] == pytest.approx(np.tanh(y), abs=1e-15)
    assert p.bp[0] == pytest.approx(sech2, abs=1e-15)
    assert p.bpp[0] == pytest.approx(-2.0 * sech2 * np.tanh(y), abs=1e-15)
    assert not p.c2.any() and not p.c3.any()


def test_decompose_cubic_c_blocks():
    # f = x2 + x1^2 x2: c_11 = 2y, c'_11 = 2, c_111 = 0
    p = decompose(surf(2, "x2 + x1^2 * x2"), 0.3)
    assert (p.a, p.ap) == (0.3, 1.0)
    assert not p.b.any()
    assert p.c2[0, 0] == pytest.approx(0.6, abs=1e-15)
    assert p.c2p[0, 0] == pytest.approx(2.0, abs=1e-15)
    assert p.c3[0, 0, 0] == 0.0


def test_decompose_respects_domain():
    S = surf(2, "x2", domain=Box((-1.0, -1.0), (1.0, 1.0)))
    with pytest.raises(DomainError):
        decompose(S, 2.0)


def test_decompose_phi_blocks():
    p = decompose(surf(2, "x2", phi="x1 + 3*x2"), 0.5)
    assert p.phi == pytest.approx(1.5, abs=1e-15)
    assert p.phiI[0] == pytest.approx(1.0, abs=1e-15)


# -- alpha / alpha_l -------------------------------------------------------------

def test_alpha_plane_profile_is_zero():
    p = profile(a=0.5, ap=1.0, y=0.5)
    assert alpha(p) == 0.0
    assert alpha_l(p, 1) == 0.0


def test_alpha_synthetic_value():
    # C = 3/4, D = -1/4: alpha = (3/4)(2) + 3(-1/4 + 1/4) + 2(1)(1/2)(1) = 2.5
    p = profile(ap=1.0, app=2.0, b=[0.5], bp=[1.0], c2=[[3.0]])
    assert alpha(p) == pytest.approx(2.5, abs=1e-15)


def test_alpha_l_index_validation():
    p = profile()
    with pytest.raises(ValueError):
        alpha_l(p, 0)
    with pytest.raises(ValueError):
        alpha_l(p, 2)


def test_alpha_vanishes_on_zmc_surface():
    S = surf(2, "x1 * tanh(x2)")
    for y in (-0.8, 0.0, 0.3, 1.1):
        p = decompose(S, y)
        assert abs(alpha(p)) < 1e-14
        assert abs(alpha_l(p, 1)) < 1e-14


def test_alpha_matches_operator_restriction(rng):
    # alpha / alpha_l are the axis restrictions of A - phi*B and of its
    # x_l derivative, for any graph (not only zero mean curvature ones)
    for n in (2, 3):
        for _ in range(5):
            S = surf(n, random_surface_expr(rng, n),
                     phi=random_surface_expr(rng, n))
            y = float(rng.uniform(-0.5, 0.5))
            p = decompose(S, y)
            x = np.zeros(n)
            x[-1] = y
            assert alpha(p) == pytest.approx(
                operator_tildeA(S, x), abs=1e-10)
            for l in range(1, n):
                u = np.zeros(n)
                u[l - 1] = 1.0
                fd = directional_fd(lambda q: operator_tildeA(S, q),
                                    x, u, 1, 1e-3)
                assert alpha_l(p, l) == pytest.approx(fd, abs=1e-7)


# -- ode_rhs ---------------------------------------------------------------------

def test_ode_rhs_plane_trivial_solution():
    S = surf(2, "x2")
    app, bpp = ode_rhs(S, OdeState(0.3, 0.3, 1.0, np.zeros(1), np.zeros(1)))
    assert app == 0.0 and not bpp.any()


def test_ode_rhs_synthetic_c_data():
    # c_11(y) = 3 frozen from the surface, off-trivial state:
    # a'' = -(c_11 (D + b^2) + 2 a' b b') / C = -(0 + 1) / (3/4) = -4/3
    S = surf(2, "x2 + 1.5 * x1^2")
    app, _ = ode_rhs(S, OdeState(0.0, 0.0, 1.0, np.array([0.5]),
                                 np.array([1.0])))
    assert app == pytest.approx(-4.0 / 3.0, abs=1e-14)


def test_ode_rhs_singular_chart():
    S = surf(2, "x2")
    with pytest.raises(SingularC):
        ode_rhs(S, OdeState(0.0, 0.0, 1.0, np.array([1.0]), np.zeros(1)))


def test_ode_rhs_reproduces_surface_on_zmc(rng):
    # on a zero-mean-curvature surface, feeding the surface's own axis
    # data back into the normal form returns the surface's (a'', b'')
    S = surf(2, "x1 * tanh(x2)")
    for y in (-0.5, 0.2, 0.9):
        p = decompose(S, y)
        app, bpp = ode_rhs(S, OdeState(y, p.a, p.ap, p.b, p.bp))
        assert app == pytest.approx(p.app, abs=1e-12)
        assert bpp[0] == pytest.approx(p.bpp[0], abs=1e-12)


def test_ode_state_flat_roundtrip():
    st = OdeState(0.1, 0.2, 0.3, np.array([0.4, 0.5]), np.array([0.6, 0.7]))
    rt = OdeState.from_flat(0.1, st.flat())
    assert rt.y == st.y and rt.a == st.a and rt.ap == st.ap
    assert np.array_equal(rt.b, st.b) and np.array_equal(rt.bp, st.bp)


# -- degeneracy predicate ----------------------------------------------------------

def test_is_degenerate_initial():
    assert is_degenerate_initial(decompose(surf(2, "x2"), 0.0))
    assert not is_degenerate_initial(decompose(surf(2, "x1 * tanh(x2)"), 0.0))
    assert not is_degenerate_initial(decompose(surf(2, "x1^2 / 2"), 0.0))
    near = profile(a=1e-10, ap=1.0 + 1e-10, b=[1e-10], bp=[-1e-10])
    assert is_degenerate_initial(near)
    assert not is_degenerate_initial(near, tol=1e-12)


# -- normalize_graph ---------------------------------------------------------------

def test_normalize_identity_case():
    S = surf(2, "x2", domain=Box((-2.0, -2.0), (2.0, 2.0)))
    T = normalize_graph(S, [0.0, 0.0], [0.0, 1.0])
    for z in ([0.1, 0.2], [-0.5, 0.3]):
        assert eval_jet3(T.f, z).v == pytest.approx(z[1], abs=1e-14)
    assert is_degenerate_initial(decompose(T, 0.0))


def test_normalize_rotates_other_axis():
    # f = x1 has its light-like direction along x1; normalization turns
    # it into a graph with the degenerate data on the x2 axis
    S = surf(2, "x1", domain=Box((-2.0, -2.0), (2.0, 2.0)))
    T = normalize_graph(S, [0.0, 0.0], [1.0, 0.0])
    assert is_degenerate_initial(decompose(T, 0.0))


def test_normalize_nontrivial_point():
    S = surf(2, "x1 * tanh(x2)", domain=Box((-3.0, -3.0), (3.0, 3.0)))
    q = np.array([np.cosh(0.5), 0.5])
    # light-like tangent at q: grad f = (tanh y, x1 sech^2 y), |grad f| = 1
    g = eval_jet3(S.f, q).g
    v = g / np.linalg.norm(g)       # dF(v) light-like since |grad f| = 1
    T = normalize_graph(S, q, v)
    p0 = decompose(T, 0.0)
    assert abs(p0.a) < 1e-12 and abs(p0.ap - 1.0) < 1e-12
    assert np.all(np.abs(p0.b) < 1e-12)
    # the point is nondegenerate, so b' does not vanish
    assert not is_degenerate_initial(p0)


def test_normalize_errors():
    S = surf(2, "x2", domain=Box((-1.0, -1.0), (1.0, 1.0)))
    with pytest.raises(NotLightLike):
        normalize_graph(S, [0.0, 0.0], [1.0, 0.0])   # dF(v) = (0,1,0)
    with pytest.raises(DomainError):
        normalize_graph(S, [0.0, 1.0], [0.0, 1.0])   # boundary base point
    P = GraphHypersurface.from_strings(
        2, "x2", MetricField.from_strings(
            2, ["-2", "0", "0", "1", "0", "1"]))
    with pytest.raises(ValueError):
        normalize_graph(P, [0.0, 0.0], [0.0, 1.0])
