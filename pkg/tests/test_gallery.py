import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy import integrate

from copoisson import gallery
from copoisson.gallery import FAMILIES, gallery_eval, gallery_function, l2_truncation, verify_support


def direct(family, a, x):
    """Plain loop over the index window, written from the family definitions."""
    A = 1 / a
    if family == "even_fa":
        ns = [n for n in range(1, int(A * x) + 2) if a * x <= n <= A * x]
        return sum((3 * (x / n + n / x) - (A + a + 4)) / math.sqrt(n * x) for n in ns)
    ns = [n for n in range(0, int(A * x) + 2) if a * x <= n + 0.5 <= A * x]
    term = {"odd_fa": lambda n: (-1) ** n / x,
            "odd_ga": lambda n: (-1) ** n / (n + 0.5),
            "odd_ka": lambda n: (-1) ** n / math.sqrt((n + 0.5) * x)}[family]
    return sum(term(n) for n in ns)


def direct_qn(N, x):
    r = math.sqrt(N + 0.5)
    c1, c2 = 1 / math.sqrt(4 * N + 2), 1 / r
    total = 0.0
    for n in range(0, int(2 * x * r) + 2):
        if x <= (n + 0.5) / r <= 2 * x:
            q = math.prod(n * (n + 1) - j * (j + 1) for j in range(N))
            u = x / (n + 0.5)
            total += (-1) ** n * q * ((u - c1) * (u - c2)) ** (2 * N + 1)
    return total


@pytest.mark.parametrize("family", ["even_fa", "odd_fa", "odd_ga", "odd_ka"])
@pytest.mark.parametrize("a", [0.3, 0.5, 0.8])
def test_lattice_families_vs_direct(family, a):
    xs = [0.37, 1.0, 2.71, 13.3, 240.9]
    assert_allclose(gallery_eval(family, (a,), xs), [direct(family, a, x) for x in xs], atol=1e-12)


@pytest.mark.parametrize("N", [0, 1, 2])
def test_qn_vs_direct(N):
    xs = [0.4, 0.93, 3.3, 17.0]
    got = gallery_eval("qn", (N,), xs)
    want = [direct_qn(N, x) for x in xs]
    assert_allclose(got, want, rtol=1e-10, atol=1e-12)


def test_even_fa_sample_value():
    # only n = 1, 2 lie in the window at x = 1: (3*2 - 6.5) / 1 + (3*2.5 - 6.5) / sqrt 2
    assert_allclose(gallery_eval("even_fa", (0.5,), 1.0), -0.5 + 1 / math.sqrt(2), atol=1e-15)
    assert_allclose(gallery_eval("even_fa", (0.5,), 1.0), 0.20710678, atol=1e-8)


@pytest.mark.parametrize("family", FAMILIES)
def test_support_gap_exact_zero(family):
    g = gallery_function(family, a=0.4, N=1)
    rep = verify_support(g)
    assert rep.passed and np.all(rep.values == 0.0)
    assert g(1.3 * g.gap) != 0 or g(1.7 * g.gap) != 0


def test_parity():
    for family in FAMILIES:
        g = gallery_function(family, a=0.5, N=1)
        x = np.array([0.8, 2.2, 7.9])
        sign = 1 if g.parity == "even" else -1
        assert_allclose(g(-x), sign * g(x), atol=0)


def test_support_grid_outside_gap_rejected():
    g = gallery_function("odd_fa", a=0.5)
    with pytest.raises(ValueError):
        verify_support(g, [0.1, g.gap])


@pytest.mark.parametrize("family,kwargs", [("nope", {}), ("even_fa", {"a": 1.0}), ("odd_ka", {"a": 0.0}),
                                           ("qn", {"N": -1}), ("qn", {"N": 1.5})])
def test_validation(family, kwargs):
    with pytest.raises(ValueError):
        gallery_function(family, **kwargs)


def test_l2_qn_piecewise_exact():
    g = gallery_function("qn", N=1)
    X = 6.0
    edges = np.unique(np.concatenate([[0.0, X], g.breaks(0.0, X)]))
    ref = sum(integrate.quad(lambda x: float(g(x)) ** 2, lo, hi, epsabs=1e-15, epsrel=1e-13)[0]
              for lo, hi in zip(edges[:-1], edges[1:]))
    assert_allclose(l2_truncation(g, [X])[0], ref, rtol=1e-12)


def test_l2_partial_integrals_increase():
    g = gallery_function("odd_ka", a=0.5)
    vals = l2_truncation(g, [10.0, 100.0, 1000.0])
    assert vals[0] < vals[1] < vals[2]
    # tail beyond X is O(1/X), so successive increments shrink
    assert vals[2] - vals[1] < vals[1] - vals[0]


def test_reciprocity_odd_pair():
    g = gallery_function("odd_fa", a=0.5)
    reps = gallery.verify_reciprocity(g, [0.7, 1.6])
    assert all(r.passed for r in reps), [r.defect for r in reps]


def test_reciprocity_qn_outside_gap_rejected():
    g = gallery_function("qn", N=1)
    with pytest.raises(ValueError):
        gallery.verify_reciprocity(g, [2 * g.gap])
