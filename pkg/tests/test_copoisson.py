import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import integrate

from copoisson import copoisson as cp
from copoisson.funcspace import builtin_function, cosine_pair, parse_function_spec


@pytest.mark.parametrize("defects,ok", [
    ([1e-3, 1e-4, 1e-5], True),
    ([1e-3, 1.5e-3, 1e-4], True),  # within factor-2 slack
    ([1e-3, 3e-3, 1e-4], False),
    ([1e-3, 1e-3, 1e-3], False),  # no net progress
    ([1e-17, 1e-16, 1e-17], True),  # all under the floor
])
def test_ladder_shrinks(defects, ok):
    assert cp.ladder_shrinks(defects, slack=2.0, floor=1e-15) is ok


def test_pointwise_requires_compact_support():
    with pytest.raises(cp.HypothesisError):
        cp.pointwise_copoisson(builtin_function("gaussian"), [0.5])


def test_pointwise_K_values():
    f = builtin_function("bump", (1, 2))
    reps = cp.pointwise_copoisson(f, [0.5, 1.5], lam=60)
    J = f.integral_inv
    assert_allclose(reps[0].rhs.real, -J, atol=1e-15)
    assert_allclose(reps[1].rhs.real, float(f(1.5)) - J, atol=1e-15)
    assert all(r.passed for r in reps)


@pytest.mark.parametrize("pair", ["gaussian", "fejer"])
def test_integral_identity(pair):
    phi, psi = cosine_pair(pair)
    r = cp.integral_identity(builtin_function("bump", (1, 2)), phi, psi)
    assert r.passed and abs(r.lhs) > 1e-6


def test_integral_identity_rejects_non_pair():
    g = builtin_function("gaussian")
    with pytest.raises(cp.HypothesisError):
        cp.integral_identity(builtin_function("bump", (1, 2)), g, builtin_function("fejer"))


def test_improper_F_indicator():
    r = cp.improper_F_integral(builtin_function("indicator", (1, 2)))
    assert_allclose(r.rhs.real, -0.5 * math.log(2), atol=1e-15)
    assert r.passed


@pytest.mark.parametrize("form", ["one_kernel", "two_kernel"])
def test_truncated_vs_dirichlet(form):
    f = builtin_function("bump", (1, 2))
    reps = cp.truncated_transform_vs_dirichlet(f, 1.3, [20.0, 40.0], X=30.0, form=form)
    assert len(reps) == 2 and all(r.passed for r in reps)


def test_truncated_bad_form():
    with pytest.raises(ValueError):
        cp.truncated_transform_vs_dirichlet(builtin_function("bump", (1, 2)), 0.5, [10.0], 20.0, form="three")


def test_dirichlet_value_smooth_point():
    f = builtin_function("bump", (1, 2))
    v = cp.dirichlet_point_value(f, 1.5)
    assert abs(v - (float(f(1.5)) - f.integral_inv)) < 1e-6


def test_dirichlet_value_at_jump_is_midpoint():
    # K for indicator(1,2) jumps from 1 - log 2 to 1/2 - log 2 at xi = 2
    f = builtin_function("indicator", (1, 2))
    v = cp.dirichlet_point_value(f, 2.0)
    assert abs(v - (0.75 - math.log(2))) < 1e-6


def test_poisson_gaussian():
    g = builtin_function("gaussian")
    assert all(r.passed for r in cp.poisson_as_check(g, g))


def test_poisson_tail_guard():
    tent, fejer = cosine_pair("fejer")
    with pytest.raises(ValueError):
        cp.poisson_as_check(fejer, tent, tol=1e-14)


def test_riemann_sum_decay_gaussian():
    g = builtin_function("gaussian")
    reps = cp.riemann_sum_decay(g, g)
    avgs = [r.lhs.real for r in reps]
    assert all(r.passed for r in reps)
    assert avgs[0] > avgs[1] > avgs[2] > 0
    # A + 1/(2x) is exponentially small, so the window average is log(2)/(2 lam)
    assert_allclose(avgs, [math.log(2) / (2 * lam) for lam in (10, 20, 40)], rtol=1e-10)


def test_duffin_pair():
    f = parse_function_spec("oddbump:1,2")
    reps = cp.duffin_pair(f, [0.4, 0.7, 1.1])
    assert all(r.passed for r in reps)
    assert any(abs(r.rhs) > 1e-3 for r in reps)


def test_duffin_rhs_direct():
    f = parse_function_spec("oddbump:1,2")
    y = 0.9
    want = sum((-1) ** k * float(f((2 * k + 1) / (2 * y))) / y for k in range(0, 10))
    assert_allclose(cp._duffin_rhs(f, y), want, atol=1e-15)


def test_duffin_needs_odd():
    with pytest.raises(cp.HypothesisError):
        cp.duffin_pair(builtin_function("bump", (1, 2)), [0.5])


def test_kahane_functions_support():
    g = builtin_function("cbump", (0.25,))
    phi, psi, phi1, psi1 = cp.kahane_functions(g, g, 0.25)
    x = np.linspace(-0.24, 0.24, 97)
    assert np.all(phi1(x) == 0) and np.all(psi1(x) == 0)
    # phi is even and vanishes between the blobs around the integers
    assert_allclose(phi(x + 0.7), phi(-x - 0.7), atol=1e-15)
    assert np.all(phi(np.linspace(0.26, 0.74, 11)) == 0)


def test_kahane_needs_b_below_half():
    g = builtin_function("cbump", (0.25,))
    with pytest.raises(cp.HypothesisError):
        cp.kahane_functions(g, g, 0.5)


def test_kahane_transform_oracle():
    # psi(0.1) = f~(0) g(0.1), with f~(0) = 2 int f
    g = builtin_function("cbump", (0.25,))
    _, psi, _, _ = cp.kahane_functions(g, g, 0.25)
    area = integrate.quad(lambda x: float(g(x)), 0, 0.25, epsabs=1e-15)[0]
    assert_allclose(psi(0.1), 2 * area * float(g(0.1)), rtol=1e-12)
