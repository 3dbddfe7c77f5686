"""Acceptance criteria 1-12, each against an oracle that does not share code with the package.

A line per criterion is printed in the terminal summary (see conftest.py).
"""

import math
import time

import mpmath
import numpy as np
import pytest
from scipy import integrate

from copoisson import copoisson as cp
from copoisson import gallery, mellin, sonine
from copoisson.funcspace import BUILTIN_NAMES, builtin_function
from copoisson.quad import abel_transform
from copoisson.mellin import frac_part_rhs, transform_function


def crit(n, title):
    return pytest.mark.criterion(n, title)


def bump_1_2(x):
    return math.exp(4.0 - 1.0 / ((x - 1.0) * (2.0 - x))) if 1.0 < x < 2.0 else 0.0


def quad(g, a, b, **kw):
    kw.setdefault("epsabs", 1e-15)
    kw.setdefault("epsrel", 1e-13)
    kw.setdefault("limit", 500)
    return integrate.quad(g, a, b, **kw)[0]


# ------------------------------------------------------------------ 1


def frac_tail_oracle(v, M=4000):
    """int_v^inf {u}/u^2 du by quadrature on unit pieces up to M, then the tail 1/(2M)."""
    total = quad(lambda u: (u - math.floor(v)) / u**2, v, math.floor(v) + 1)
    for k in range(math.floor(v) + 1, M):
        total += quad(lambda u, k=k: (u - k) / u**2, k, k + 1)
    return total + 1 / (2 * M) - 1 / (12 * M**2)


@crit(1, "fractional-part pair, Abel transform vs closed form")
def test_c01_fractional_part_pair():
    vs = [0.3, 0.7, 1.5, 2.4]
    t0 = time.perf_counter()
    reps = mellin.frac_part_pair(vs, tol=1e-3)
    elapsed = time.perf_counter() - t0
    for v, r in zip(vs, reps):
        frac = v - math.floor(v)
        oracle = -frac / v + frac_tail_oracle(v)
        assert abs(r.lhs.real - oracle) <= 1e-3
        assert abs(frac_part_rhs(v) - oracle) <= 1e-7
        assert r.passed
    assert elapsed < 10


# ------------------------------------------------------------------ 2


def K_oracle(xi):
    J = quad(lambda u: bump_1_2(u) / u, 1, 2)
    return sum(bump_1_2(xi / m) / m for m in range(1, 10)) - J


@crit(2, "co-Poisson pointwise, truncated transform at Lambda = 50 and 200")
def test_c02_copoisson_pointwise():
    f = builtin_function("bump", (1, 2))
    xis = [0.0, 0.3, 0.9, 1.7]
    t0 = time.perf_counter()
    r50 = cp.pointwise_copoisson(f, xis, lam=50)
    r200 = cp.pointwise_copoisson(f, xis, lam=200)
    elapsed = time.perf_counter() - t0
    for xi, a, b in zip(xis, r50, r200):
        assert abs(b.rhs.real - K_oracle(xi)) <= 1e-13
        assert abs(b.lhs.real - K_oracle(xi)) <= 1e-3
        assert b.defect <= 1e-3
        assert b.defect < a.defect, (xi, a.defect, b.defect)
    assert elapsed < 30


# ------------------------------------------------------------------ 3


@crit(3, "extrapolated int_0^Lambda F against K(0)/2")
def test_c03_improper_F():
    f = builtin_function("bump", (1, 2))
    t0 = time.perf_counter()
    r = cp.improper_F_integral(f)
    elapsed = time.perf_counter() - t0
    oracle = -0.5 * quad(lambda u: bump_1_2(u) / u, 1, 2)
    assert abs(r.lhs.real - oracle) <= 1e-4
    assert r.passed
    assert elapsed < 10


# ------------------------------------------------------------------ 4


def muntz_rhs_oracle(s):
    re = quad(lambda x: bump_1_2(x) * (x ** (s - 1)).real, 1, 2)
    im = quad(lambda x: bump_1_2(x) * (x ** (s - 1)).imag, 1, 2)
    return complex(mpmath.zeta(s)) * complex(re, im)


@crit(4, "Muntz identity for bump(1,2) at sigma = 0.5 and 0.8")
def test_c04_muntz():
    f = builtin_function("bump", (1, 2))
    t0 = time.perf_counter()
    reps = mellin.muntz_identity(f, 0.5, [0, 5, 13]) + mellin.muntz_identity(f, 0.8, [0, 5, 13])
    elapsed = time.perf_counter() - t0
    for r in reps:
        s = complex(r.metadata["sigma"], r.metadata["tau"])
        assert abs(r.lhs - muntz_rhs_oracle(s)) <= 1e-6
        assert r.passed
    assert elapsed < 20


# ------------------------------------------------------------------ 5

STRIP = [complex(x, y) for x in (0.1, 0.3, 0.5, 0.7, 0.9) for y in (-27.0, -3.0, 8.0, 29.5)]


@crit(5, "zeta engine: zeta(2) and the functional equation on 20 strip points")
def test_c05_zeta_engine():
    t0 = time.perf_counter()
    z2 = mellin.zeta(2).value
    fe = [abs(mellin.zeta(s).value - mellin.chi(s) * mellin.zeta(1 - s).value) / abs(mellin.zeta(s).value)
          for s in STRIP]
    elapsed = time.perf_counter() - t0
    N = 10**7
    partial = float(np.sum(1.0 / np.arange(N, 0, -1, dtype=float) ** 2))
    # sum_{n>N} n^-2 lies in [1/(N+1), 1/N]; Euler-Maclaurin pins it to O(N^-3)
    tail = 1 / N - 1 / (2 * N**2)
    assert 1 / (N + 1) <= tail <= 1 / N
    assert abs(z2 - (partial + tail)) <= 1e-7
    assert abs(z2 - math.pi**2 / 6) <= 1e-13
    assert len(STRIP) == 20 and max(fe) <= 1e-8
    for s in STRIP[::5]:
        assert abs(mellin.zeta(s).value - complex(mpmath.zeta(s))) <= 1e-10 * abs(complex(mpmath.zeta(s)))
    assert elapsed < 5


# ------------------------------------------------------------------ 6


@crit(6, "principal-value pairing of zeta(1 + i tau) with a gaussian")
def test_c06_vp_pairing():
    t0 = time.perf_counter()
    r = mellin.vp_zeta_pairing(tol=1e-5)
    elapsed = time.perf_counter() - t0
    oracle = float(mpmath.nsum(lambda n: mpmath.exp(-mpmath.pi * mpmath.log(n) ** 2) / n, [1, mpmath.inf])) - 0.5
    assert abs(r.rhs.real - oracle) <= 1e-12
    assert abs(r.lhs.real - oracle) <= 1e-5
    assert r.passed
    assert elapsed < 20


# ------------------------------------------------------------------ 7 and 8


@pytest.fixture(scope="module")
def sonine_plus():
    t0 = time.perf_counter()
    sol = sonine.solve_phi(1.0, "plus", 64)
    return sol, sonine.entire_mellin(sol), time.perf_counter() - t0


@crit(7, "Sonine solve at a = 1: residual, contraction, symmetry, reality on the line")
def test_c07_sonine(sonine_plus):
    sol, F, setup = sonine_plus
    t0 = time.perf_counter()
    samples = [complex(x, y) for x, y in ((0.1, 0.0), (0.2, 3.0), (0.3, -7.0), (0.4, 12.0), (0.6, 1.5),
                                          (0.7, -20.0), (0.8, 25.0), (0.9, 4.0), (0.25, 40.0), (0.55, -33.0))]
    fe = [abs(F(s) - F(1 - s)) / (1 + abs(F(s))) for s in samples]
    line = [(F(complex(0.5, t)), t) for t in (1.0, 5.0, 10.0)]
    elapsed = setup + time.perf_counter() - t0
    assert sol.residual_inf <= 1e-10
    assert sol.op_norm_estimate < 1
    assert max(fe) <= 1e-6
    for v, t in line:
        assert abs(v.imag) <= 1e-8 * (1 + abs(v))
    assert elapsed < 60


@pytest.fixture(scope="module")
def zeros_a1(sonine_plus):
    sol, F, _ = sonine_plus
    t0 = time.perf_counter()
    zl = sonine.critical_line_zeros(sol, 50.0)
    return zl, time.perf_counter() - t0


C8 = "critical-line zeros at a = 1, T = 50: bisection and the count band"


@crit(8, C8)
def test_c08_zeros_bisected(sonine_plus, zeros_a1):
    sol, F, _ = sonine_plus
    zl, elapsed = zeros_a1
    assert zl.count_T == zl.zeros.size > 0
    assert np.all(np.diff(zl.zeros) > 0)
    for t in zl.zeros:
        lo, hi = F(complex(0.5, t - 1e-9)).real, F(complex(0.5, t + 1e-9)).real
        assert lo * hi < 0, t
    assert elapsed < 300


@crit(8, C8)
@pytest.mark.xfail(strict=True, reason="9 zeros up to T = 50 give count/((T/2pi) log T) = 0.29; "
                                       "the main term needs far larger T, see notes/decisions.md")
def test_c08_asymptotic_ratio_band(zeros_a1):
    zl, _ = zeros_a1
    assert 0.5 <= zl.asymptotic_ratio <= 1.5, zl.asymptotic_ratio


# ------------------------------------------------------------------ 9


@pytest.fixture(scope="module")
def gallery_runs():
    t0 = time.perf_counter()
    runs = {}
    for fam in gallery.FAMILIES:
        g = gallery.gallery_function(fam, a=0.5) if fam != "qn" else gallery.gallery_function("qn", N=1)
        ys = [0.1, 0.3, 0.5] if fam == "qn" else [0.8, 1.3, 2.7]
        runs[fam] = (g, gallery.verify_support(g), gallery.verify_reciprocity(g, ys),
                     gallery.l2_truncation(g, (1e2, 1e3, 1e4)))
    return runs, time.perf_counter() - t0


@crit(9, "gallery: gap zeros, reciprocity, L2 truncation")
@pytest.mark.parametrize("family", gallery.FAMILIES)
def test_c09_gallery(gallery_runs, family):
    runs, elapsed = gallery_runs
    g, sup, rec, l2 = runs[family]
    assert sup.passed and np.all(sup.values == 0.0) and sup.grid.size >= 10
    assert len(rec) == 3 and all(r.passed and r.defect <= 5e-3 for r in rec)
    assert l2[0] < l2[1] < l2[2]
    assert abs(l2[2] - l2[1]) < abs(l2[1] - l2[0])
    assert elapsed < 120


# ------------------------------------------------------------------ 10


def cbump(x, b=0.25):
    return math.exp(1 / b**2 - 1 / (b * b - x * x)) if abs(x) < b else 0.0


def kahane_psi_oracle(y, b=0.25):
    """psi(y) = sum_m f~(m) g(y - m) with f = g = cbump(b); f~ by direct quadrature."""
    total = 0.0
    for m in range(math.floor(y - b), math.ceil(y + b) + 1):
        if abs(y - m) < b:
            ft = 2 * quad(lambda x: cbump(x, b) * math.cos(2 * math.pi * m * x), 0, b)
            total += ft * cbump(y - m, b)
    return total


@crit(10, "Kahane pair for cbump(0.25): support zeros and transform match")
def test_c10_kahane():
    g = builtin_function("cbump", (0.25,))
    ys = (0.0, 0.15, 0.7, 1.1, 2.2)
    t0 = time.perf_counter()
    reps = cp.kahane_pair(g, g, 0.25, y_samples=ys)
    elapsed = time.perf_counter() - t0
    support = [r for r in reps if r.kind.startswith("kahane_support")]
    trans = [r for r in reps if r.kind == "kahane_transform"]
    assert len(support) == 2 and all(r.lhs == 0 and r.passed for r in support)
    assert len(trans) == 5
    for y, r in zip(ys, trans):
        assert abs(r.lhs.real - kahane_psi_oracle(y)) <= 1e-8
        assert r.passed
    assert any(abs(r.rhs) > 1e-3 for r in trans)
    assert elapsed < 10


# ------------------------------------------------------------------ 11


@crit(11, "L2 Muntz pairings for f = bump(1,2), phi = bump(0.5,3)")
def test_c11_l2_muntz():
    f, phi = builtin_function("bump", (1, 2)), builtin_function("bump", (0.5, 3))
    t0 = time.perf_counter()
    d = mellin.l2_muntz_D(f, phi, tol=1e-6)
    s = mellin.l2_muntz_symmetry(f, phi, tol=1e-5)
    elapsed = time.perf_counter() - t0
    assert d.passed and d.defect <= 1e-6
    assert s.passed and s.defect <= 1e-5
    assert abs(d.lhs) > 1e-3
    assert elapsed < 30


# ------------------------------------------------------------------ 12

EPS_LADDERS = [(0.4, 0.2, 0.1, 0.05), (0.2, 0.1, 0.05, 0.025), (0.1, 0.05, 0.025, 0.0125)]
F_LADDERS = [(12.5, 25, 50), (25, 50, 100), (50, 100, 200)]


def _gauss(y):
    return math.exp(-math.pi * y * y)


def _abel(name, params, y, target, kind="cos"):
    f = builtin_function(name, params)
    return [abs(abel_transform(f, y, e, kind=kind).value - target()) for e in EPS_LADDERS]


def _improper(name, params):
    f = builtin_function(name, params)
    return [cp.improper_F_integral(f, lams=lams).defect for lams in F_LADDERS]


def _muntz_x_lo(name):
    f = builtin_function(name)
    return [mellin.muntz_identity(f, 0.5, [5.0], x_lo=x)[0].defect for x in (0.04, 0.02, 0.01)]


# one verifier per builtin, with a refinement ladder
REFINEMENT = {
    "gaussian": lambda: _abel("gaussian", (), 0.6, lambda: _gauss(0.6)),
    "xgaussian": lambda: _abel("xgaussian", (), 0.6, lambda: 0.6 * _gauss(0.6), kind="sin"),
    "x2gaussian": lambda: _abel("x2gaussian", (), 0.6, lambda: (1 / (2 * math.pi) - 0.36) * _gauss(0.6)),
    "fracpart_over_x": lambda: _abel("fracpart_over_x", (), 0.7, lambda: frac_part_rhs(0.7)),
    "tent": lambda: _abel("tent", (), 0.6, lambda: float(np.sinc(0.6)) ** 2),
    "fejer": lambda: _abel("fejer", (), 0.6, lambda: 0.4),
    "cbump": lambda: _abel("cbump", (0.25,), 0.6,
                           lambda: float(transform_function(builtin_function("cbump", (0.25,)))(0.6))),
    "bump": lambda: [cp.pointwise_copoisson(builtin_function("bump", (1, 2)), [0.3], lam=lam)[0].defect
                     for lam in (12.5, 25, 50)],
    "indicator": lambda: _improper("indicator", (1, 2)),
    "triangle": lambda: _improper("triangle", (1, 2)),
    "poly_log_tail": lambda: _muntz_x_lo("poly_log_tail"),
}


@crit(12, "refinement: defects shrink with factor-2 slack over every builtin")
def test_c12_covers_builtins():
    assert set(REFINEMENT) == set(BUILTIN_NAMES)


@crit(12, "refinement: defects shrink with factor-2 slack over every builtin")
@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_c12_refinement(name):
    d = REFINEMENT[name]()
    assert cp.ladder_shrinks(d, slack=2.0), d
    assert d[-1] < 1e-8
