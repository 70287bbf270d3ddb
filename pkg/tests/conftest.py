"""Shared test helpers: Richardson-extrapolated finite differences as an
independent derivative oracle, and seeded random expression generators."""

from __future__ import annotations

import numpy as np
import pytest

from lightcone.expr import eval_value, parse
from lightcone.lorentz import MetricField


# -- finite-difference oracle --------------------------------------------------

def directional_fd(func, x, u, order: int, h: float) -> float:
    """Richardson-extrapolated central difference of phi(s) = func(x + s u)
    at s = 0.  Central stencils have an even error series, so one
    extrapolation step (4 D(h/2) - D(h)) / 3 removes the h^2 term."""
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)

    def phi(s: float) -> float:
        return func(x + s * u)

    if order == 1:
        def d(step):
            return (phi(step) - phi(-step)) / (2.0 * step)
    elif order == 2:
        p0 = phi(0.0)

        def d(step):
            return (phi(step) - 2.0 * p0 + phi(-step)) / step ** 2
    elif order == 3:
        def d(step):
            return (phi(2 * step) - 2.0 * phi(step) + 2.0 * phi(-step)
                    - phi(-2 * step)) / (2.0 * step ** 3)
    else:
        raise ValueError("order must be 1, 2 or 3")
    return (4.0 * d(h / 2.0) - d(h)) / 3.0


FD_STEPS = {1: 1e-3, 2: 1e-2, 3: 1e-2}


def partial_fd(expr, x, order: int, direction) -> float:
    """Directional derivative of an expression by finite differences."""
    return directional_fd(lambda p: eval_value(expr, p), x, direction,
                          order, FD_STEPS[order])


# -- random inputs -------------------------------------------------------------

def random_expression(rng: np.random.Generator, m: int, depth: int = 3) -> str:
    """Random expression text over x1..xm, safe to evaluate on [-1, 1]^m
    (denominators, log and sqrt arguments are bounded away from zero)."""
    def leaf() -> str:
        if rng.random() < 0.4:
            return f"{rng.uniform(-2.0, 2.0):.6f}"
        return f"x{rng.integers(1, m + 1)}"

    def node(d: int) -> str:
        if d == 0:
            return leaf()
        r = rng.random()
        a = node(d - 1)
        b = node(d - 1)
        if r < 0.22:
            return f"({a} + {b})"
        if r < 0.44:
            return f"({a} - {b})"
        if r < 0.62:
            return f"({a} * {b})"
        if r < 0.70:
            return f"({a} / (2 + x{rng.integers(1, m + 1)}^2))"
        if r < 0.78:
            fn = ("sin", "cos", "tanh")[rng.integers(0, 3)]
            return f"{fn}({a})"
        if r < 0.84:
            return f"exp(0.3 * {a})" if d <= 2 else f"sin({a})"
        if r < 0.90:
            return f"log(2 + x{rng.integers(1, m + 1)}^2)"
        if r < 0.95:
            return f"sqrt(1 + {a}^2)"
        return f"{a}^{rng.integers(2, 4)}"

    return node(depth)


def random_polynomial(rng: np.random.Generator, m: int,
                      degree: int = 3) -> str:
    """Random dense polynomial text over x1..xm with small coefficients."""
    terms = [f"{rng.uniform(-0.5, 0.5):.6f}"]
    for _ in range(rng.integers(3, 7)):
        c = rng.uniform(-0.5, 0.5)
        factors = [f"{c:.6f}"]
        for _ in range(rng.integers(1, degree + 1)):
            factors.append(f"x{rng.integers(1, m + 1)}")
        terms.append(" * ".join(factors))
    return " + ".join(terms)


def random_surface_expr(rng: np.random.Generator, n: int) -> str:
    return random_polynomial(rng, n)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260823)


@pytest.fixture
def mink2() -> MetricField:
    return MetricField.minkowski(2)


@pytest.fixture
def mink3() -> MetricField:
    return MetricField.minkowski(3)


def parse1(text: str, arity: int):
    return parse(text, arity)
