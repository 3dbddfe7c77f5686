"""Verifiers for the co-Poisson identities and their relatives.

Each verifier computes both sides independently and returns
IdentityReport objects; "o(1)" statements are checked along ladders of
the controlling parameter.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np

from .funcspace import ParityFunction, builtin_function
from .quad import (
    QuadratureError,
    composite_gl,
    gauss_legendre,
    cosine_transform,
    dirichlet_kernel_integral,
    integrate_adaptive,
    richardson_zero,
    transform_many,
)
from .reports import IdentityReport, make_report
from .sums import _cap, eval_F, eval_K, riemann_sum

__all__ = [
    "HypothesisError",
    "NotDirichletPoint",
    "ladder_shrinks",
    "integral_identity",
    "improper_F_integral",
    "truncated_transform_vs_dirichlet",
    "dirichlet_point_value",
    "pointwise_copoisson",
    "poisson_as_check",
    "duffin_pair",
    "duffin_series",
    "kahane_pair",
    "kahane_functions",
    "riemann_sum_decay",
    "AE_SAMPLES",
]

# generic points, away from rationals with small denominators
_MAX_TERMS = 5e7

AE_SAMPLES = (math.sqrt(2), math.e / 2, math.pi / 3, math.sqrt(3) / 2, math.pi / 2)


class HypothesisError(ValueError):
    """An input fails the hypothesis of the identity being verified."""


class NotDirichletPoint(ArithmeticError):
    """Localized Dirichlet integrals do not settle along the ladder."""


def ladder_shrinks(defects: Sequence[float], slack: float = 2.0, floor: float = 0.0) -> bool:
    """True when each defect is at most ``slack`` times the previous one,
    the last is below the first, and values under ``floor`` count as converged."""
    d = [max(float(x), floor) for x in defects]
    if all(x <= floor for x in d):
        return True
    ok = all(b <= slack * a for a, b in zip(d, d[1:]))
    return ok and d[-1] <= d[0] and (d[-1] < d[0] or d[-1] <= floor)


def _decay_point(fn, start: float = 4.0, level: float = 1e-15, limit: float = 1e5) -> float:
    """First tried X with |fn| below ``level`` on a grid of [X, 2X]."""
    X = start
    while X < limit:
        if np.max(np.abs(fn(np.linspace(X, 2 * X, 401)))) < level:
            return X
        X *= 1.5
    return limit


def _sum_breaks(f: ParityFunction, lo: float, hi: float) -> np.ndarray:
    """Points in [lo, hi] where x -> f(n/x) or f(x/n) can jump (non-smooth f only)."""
    if f.support is None or f.smoothness == "Cinf":
        return np.empty(0)
    b, B = f.support
    pts = []
    for e in (b, B):
        pts.append(np.arange(1, int(hi / e) + 2) * e)  # x/n = e
        pts.append(np.arange(1, int(hi * e) + 2) / e)  # n/x = e
    p = np.concatenate(pts)
    return p[(p > lo) & (p < hi)]


# --------------------------------------------------------------- integral


def integral_identity(f: ParityFunction, phi: ParityFunction, psi: ParityFunction,
                      tol: float = 1e-7, pair_tol: float = 1e-7) -> IdentityReport:
    """int phi(x) F(x) dx = int psi(y) K(y) dy for a cosine pair (phi, psi)."""
    for y in (0.3, 0.77, 1.41):
        if abs(cosine_transform(phi, y, 1e-11) - float(psi(y))) > pair_tol:
            raise HypothesisError(f"({phi.name}, {psi.name}) is not a cosine pair at y={y}")

    def side(w: ParityFunction, kernel):
        hi = _decay_point(lambda x: w(x) * kernel(x))
        if w.support is not None:
            hi = min(hi, w.support[1])
        pts = np.concatenate([w.breakpoints(0.0, hi), _sum_breaks(f, 0.0, hi), np.linspace(0, hi, 200)])
        return integrate_adaptive(lambda x: w(x) * kernel(x), (0.0, hi), 1e-13, points=pts).value

    lhs = side(phi, lambda x: eval_F(f, x))
    rhs = side(psi, lambda y: eval_K(f, y))
    return make_report("integral_identity", lhs, rhs, tol, f=f.name, phi=phi.name, psi=psi.name)


def improper_F_integral(f: ParityFunction, lams: Sequence[float] = (50, 100, 200),
                        tol: float = 1e-4) -> IdentityReport:
    """int_0^{->inf} F = K(0)/2 = -(1/2) int f(u)/u du, via a Lambda ladder."""
    vals = []
    for lam in lams:
        pts = np.concatenate([_sum_breaks(f, 0.0, lam), np.linspace(0, lam, int(4 * lam) + 1)])
        vals.append(integrate_adaptive(lambda x: eval_F(f, x), (0.0, lam), 1e-12, points=pts).value)
    d = np.abs(np.diff(vals))
    if d.size > 1 and d[-1] > 2 * d[-2] + 1e-12:
        raise QuadratureError("Lambda ladder does not converge", None)
    lhs, err = richardson_zero(1.0 / np.asarray(lams, dtype=float), vals, order=1)
    rhs = 0.5 * float(eval_K(f, 0.0))
    return make_report("improper_F", lhs, rhs, tol, f=f.name, lams=list(lams), raw=vals[-1], extrapolation_err=err)


# -------------------------------------------------------- truncated forms


def _truncated_transform(f: ParityFunction, xi: float, lam: float, tol: float = 1e-13) -> float:
    """int_0^lam 2 cos(2 pi xi x) F(x) dx."""
    g = lambda x: 2 * np.cos(2 * np.pi * xi * x) * eval_F(f, x)
    step = 0.25 if xi == 0 else min(0.25, 0.25 / xi)
    pts = np.concatenate([_sum_breaks(f, 0.0, lam), np.arange(0.0, lam, step)])
    return integrate_adaptive(g, (0.0, lam), tol, points=pts).value


def truncated_transform_vs_dirichlet(f: ParityFunction, xi: float, lams: Sequence[float], X: float,
                                     tol: float = 1e-3, form: str = "one_kernel") -> list[IdentityReport]:
    """int_0^lam 2cos(2 pi xi x) F dx against a Dirichlet-kernel integral, along a ladder.

    one_kernel: int_0^X D_lam(t - xi) sum f(t/n)/n dt - int f(u)/u du.
    two_kernel: int_0^X [D_lam(t - xi) + D_lam(t + xi)] K(t) dt, with X
    pushed past the point where K is negligible.
    """
    if not X > xi >= 0:
        raise ValueError("need X > xi >= 0")
    fi = f.inverted
    S = lambda t: riemann_sum(fi, t)
    brk = _sum_breaks(f, 0.0, X)
    out = []
    for lam in lams:
        lhs = _truncated_transform(f, xi, lam)
        if form == "one_kernel":
            r = dirichlet_kernel_integral(S, xi, lam, X, 1e-12, breaks=brk)
            rhs = r.value - f.integral_inv
        elif form == "two_kernel":
            K = lambda t: eval_K(f, t)
            Xk = max(X, _decay_point(K, start=X, level=1e-9, limit=1e3))
            bk = _sum_breaks(f, 0.0, Xk)
            r1 = dirichlet_kernel_integral(K, xi, lam, Xk, 1e-10, breaks=bk)
            # D_lam(t + xi) K(t) on [0, Xk] is D_lam(u) K(u - xi) on [xi, Xk + xi]
            K2 = lambda u: np.where(u >= xi, K(np.maximum(u - xi, 0.0)), 0.0)
            r2 = dirichlet_kernel_integral(K2, 0.0, lam, Xk + xi, 1e-10, breaks=np.append(bk + xi, xi))
            rhs = r1.value + r2.value
        else:
            raise ValueError("form must be one_kernel or two_kernel")
        out.append(make_report("truncated_transform", lhs, rhs, tol, f=f.name, xi=xi, lam=lam, X=X, form=form))
    return out


def _window(u: np.ndarray, delta: float) -> np.ndarray:
    """C-infinity cutoff: 1 for |u| <= delta/2, 0 for |u| >= delta."""
    a = np.clip((np.abs(u) - 0.5 * delta) / (0.5 * delta), 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        p = np.where(a > 0, np.exp(-1 / np.where(a > 0, a, 1)), 0.0)
        q = np.where(a < 1, np.exp(-1 / np.where(a < 1, 1 - a, 1)), 0.0)
    return q / (p + q)


def dirichlet_point_value(f: ParityFunction, xi: float, delta: float = 0.2,
                          lams: Sequence[float] = (250, 500, 1000, 2000), tol: float = 1e-6) -> float:
    """Dirichlet value of K at xi >= 0.

    Localized integrals int D_lam(t - xi) w(t - xi) K(|t|) dt with a smooth
    window w are Richardson-extrapolated in 1/lam.  K is read as an even
    function, so xi = 0 is handled like any other point.
    """
    if xi < 0 or delta <= 0:
        raise ValueError("need xi >= 0 and delta > 0")
    K = lambda t: eval_K(f, np.abs(t))
    brk = _sum_breaks(f, 0.0, xi + delta)
    brk = np.concatenate([brk, -brk, [xi]])
    vals = []
    for lam in lams:
        g = lambda t: 2 * lam * np.sinc(2 * lam * (t - xi)) * _window(t - xi, delta) * K(t)
        pts = np.concatenate([np.arange(xi - delta, xi + delta, 0.5 / lam), brk])
        vals.append(integrate_adaptive(g, (xi - delta, xi + delta), 1e-12, points=pts).value)
    d = np.abs(np.diff(vals))
    if d.size > 1 and not ladder_shrinks(d, slack=2.0, floor=tol * 1e-2):
        raise NotDirichletPoint(f"xi={xi}: localized integrals do not settle")
    val, _ = richardson_zero(1.0 / np.asarray(lams, dtype=float), vals, order=2)
    return float(val)


def _log_transform_bound(f: ParityFunction, upto: float = 400.0) -> list[float]:
    """int_2^Y log(y) |f~(y)| dy for Y = upto/4, upto/2, upto (should settle)."""
    ys = np.linspace(2.0, upto, int(8 * upto) + 1)
    v = np.log(ys) * np.abs(transform_many(f, ys))
    c = np.concatenate([[0.0], np.cumsum(0.5 * (v[1:] + v[:-1]) * np.diff(ys))])
    return [float(np.interp(Y, ys, c)) for Y in (upto / 4, upto / 2, upto)]


def pointwise_copoisson(f: ParityFunction, xis: Sequence[float], lam: float = 200.0, tol: float = 1e-3,
                        check_hypothesis: bool = True) -> list[IdentityReport]:
    """int_0^lam 2 cos(2 pi xi x) F(x) dx vs sum f(xi/m)/m - int f(u)/u du."""
    if check_hypothesis:
        if f.support is None:
            raise HypothesisError("log-weighted transform bound is checked for compact support only")
        p = _log_transform_bound(f)
        if p[2] - p[1] > max(1e-6, 0.5 * (p[1] - p[0]) + 1e-9):
            raise HypothesisError(f"{f.name}: int log(y)|f~(y)| dy does not settle")
    out = []
    for xi in xis:
        lhs = _truncated_transform(f, xi, lam)
        rhs = float(eval_K(f, xi))
        out.append(make_report("pointwise_copoisson", lhs, rhs, tol, f=f.name, xi=float(xi), lam=float(lam)))
    return out


# ---------------------------------------------------------------- Poisson


def poisson_as_check(phi: ParityFunction, psi: ParityFunction, x_samples: Sequence[float] = AE_SAMPLES[:3],
                     tol: float = 1e-10) -> list[IdentityReport]:
    """sum_n phi(n/x)/|x| = sum_m psi(m x) over all integers, at sample x."""
    for y in (0.3, 1.1):
        if abs(cosine_transform(phi, y, 1e-11) - float(psi(y))) > 1e-7:
            raise HypothesisError(f"({phi.name}, {psi.name}) is not a cosine pair")
    out = []
    for x in x_samples:
        x = abs(float(x))
        for w, y in ((phi, x), (psi, 1.0 / x)):
            if w.support is None and _cap(w, tol * 1e-2) * y > _MAX_TERMS:
                raise ValueError(f"{w.name}: tail too slow for tol={tol}; loosen tol")
        lhs = float(phi(0.0)) / x + 2 * riemann_sum(phi, x, tol=tol * 1e-2)
        rhs = float(psi(0.0)) + 2 * riemann_sum(psi, 1.0 / x, tol=tol * 1e-2) / x
        out.append(make_report("poisson_as", lhs, rhs, tol, phi=phi.name, psi=psi.name, x=x))
    return out


def riemann_sum_decay(phi: ParityFunction, psi: ParityFunction, lams: Sequence[float] = (10, 20, 40),
                      tol: float = 1e-8) -> list[IdentityReport]:
    """Window averages (1/lam) int_lam^{2lam} |A(x)| dx, A(x) = sum phi(n/x)/x - int phi.

    lhs uses A directly; rhs uses the Poisson side B(x) - phi(0)/(2x) with
    B(x) = sum_{m>=1} psi(m x).  The averages should decrease to 0.
    """
    phi0 = float(phi(0.0))
    ttol = tol * 1e-2
    for w, y in ((phi, 2.0 * max(lams)), (psi, 1.0 / min(lams))):
        if w.support is None and _cap(w, ttol) * y > _MAX_TERMS:
            raise ValueError(f"{w.name}: tail too slow for tol={tol}; loosen tol")
    A = lambda x: riemann_sum(phi, x, tol=ttol) - phi.integral
    Bside = lambda x: riemann_sum(psi, 1.0 / x, tol=ttol) / x - 0.5 * phi0 / x
    out = []
    for lam in lams:
        edges = np.unique(np.concatenate([np.linspace(lam, 2 * lam, int(4 * lam) + 1), _sum_breaks(phi, lam, 2 * lam)]))
        a = composite_gl(lambda x: np.abs(A(x)), edges, 12) / lam
        b = composite_gl(lambda x: np.abs(Bside(x)), edges, 12) / lam
        out.append(make_report("riemann_decay", a, b, tol, phi=phi.name, lam=float(lam), window_avg=a))
    return out


# ----------------------------------------------------------------- Duffin


def duffin_series(f: ParityFunction, x) -> np.ndarray:
    """L(x) = sum_{k>=0} (-1)^k f(2x/(2k+1)) * 2/(2k+1), for f supported in [b, B]."""
    if f.support is None:
        raise HypothesisError("Duffin series needs compact support away from 0")
    b, B = f.support
    x = np.atleast_1d(np.asarray(x, dtype=float))
    ax = np.abs(x)
    out = np.zeros_like(ax)
    kmax = int(np.max(ax) / b) + 1
    for k in range(kmax + 1):
        m = 2 * k + 1
        out += (-1) ** k * f(2 * ax / m) * 2 / m
    return np.where(x < 0, -out, out) if f.parity == "odd" else out


def _duffin_rhs(f: ParityFunction, y: float) -> float:
    """sum_{k>=0} (-1)^k f((2k+1)/(2y)) / y for y > 0."""
    b, B = f.support
    total = 0.0
    for k in range(int(y * b - 0.5), int(y * B) + 2):
        if k >= 0:
            total += (-1) ** k * float(f((2 * k + 1) / (2 * y))) / y
    return total


def duffin_pair(f: ParityFunction, y_samples: Sequence[float], tol: float = 1e-8) -> list[IdentityReport]:
    """Sine transform of the alternating odd co-sum equals the alternating co-sum at 1/(2y).

    With F(g)(y) = int g(x) e^{2 pi i x y} dx the full transform of the odd
    series is i times its sine transform, matching the factor i in the formula.
    """
    if f.parity != "odd":
        raise HypothesisError("Duffin pair needs an odd function")
    b, B = f.support
    # the series decays roughly like exp(-c sqrt(x)); cut where it is negligible
    hi = _decay_point(lambda x: duffin_series(f, x), start=4.0 * B, level=1e-14, limit=4000.0)
    L = ParityFunction(name=f"duffin({f.name})", parity="odd", eval=lambda x: duffin_series(f, x),
                       support=(b / 2, hi), is_L1=True)
    ys = np.asarray(y_samples, dtype=float)
    lhs = transform_many(L, ys, kind="sin", nodes=20)
    out = []
    for y, l in zip(ys, lhs):
        out.append(make_report("duffin", l, _duffin_rhs(f, y), tol, f=f.name, y=float(y), cutoff=hi))
    return out


# ---------------------------------------------------------------- Kahane


def kahane_functions(f: ParityFunction, g: ParityFunction, b: float):
    """phi(x) = g_check(x) sum_n f(x+n) and psi(y) = sum_m f~(m) g(y-m), plus the shifted pair.

    f, g are even and vanish outside [-b, b], b < 1/2.  Returns
    (phi, psi, phi1, psi1) with phi1(x) = e^{i pi x} phi(x - 1/2) and
    psi1(y) = i e^{i pi y} psi(y + 1/2).
    """
    if not 0 < b < 0.5:
        raise HypothesisError("need 0 < b < 1/2")
    mmax = _decay_point(lambda m: transform_many(f, m), start=2.0, level=1e-14, limit=400.0)
    ms = np.arange(-int(mmax) - 2, int(mmax) + 3)
    fm = transform_many(f, ms.astype(float))

    def periodized(x):
        x = np.asarray(x, dtype=float)
        r = x - np.round(x)  # only n = -round(x) can have |x + n| <= b < 1/2
        return f(r)

    def phi(x):
        x = np.asarray(x, dtype=float)
        p = periodized(x)
        out = np.zeros_like(x)
        nz = p != 0
        if np.any(nz):
            out[nz] = transform_many(g, x[nz]) * p[nz]
        return out

    def psi(y):
        y = np.asarray(y, dtype=float)
        return np.sum(fm[:, None] * g(y[None, :] - ms[:, None]), axis=0) if y.ndim else float(
            np.sum(fm * g(y - ms)))

    phi1 = lambda x: np.exp(1j * np.pi * np.asarray(x)) * phi(np.asarray(x) - 0.5)
    psi1 = lambda y: 1j * np.exp(1j * np.pi * np.asarray(y)) * psi(np.asarray(y) + 0.5)
    return phi, psi, phi1, psi1


def kahane_pair(f: ParityFunction, g: ParityFunction, b: float, x_grid: Optional[Sequence[float]] = None,
                y_samples: Sequence[float] = (0.0, 0.15, 0.7, 1.1, 2.2), tol: float = 1e-8
                ) -> list[IdentityReport]:
    """Fourier transform of phi against psi, and exact zeros of the shifted pair on (-a, a), a = 1/2 - b."""
    phi, psi, phi1, psi1 = kahane_functions(f, g, b)
    a = 0.5 - b
    if x_grid is None:
        x_grid = np.linspace(-a, a, 1001)[1:-1]
    xg = np.asarray(x_grid, dtype=float)
    zx = float(np.max(np.abs(phi1(xg)))) if xg.size else 0.0
    zy = float(np.max(np.abs(psi1(xg)))) if xg.size else 0.0
    out = [
        make_report("kahane_support_phi1", zx, 0.0, 0.0, b=b, a=a, points=int(xg.size)),
        make_report("kahane_support_psi1", zy, 0.0, 0.0, b=b, a=a, points=int(xg.size)),
    ]
    # phi is even: transform = 2 int_0^inf phi(x) cos(2 pi x y) dx; phi vanishes between the blobs
    nmax = int(_decay_point(lambda x: transform_many(g, x), start=2.0, level=1e-14, limit=400.0)) + 1
    centers = np.arange(0, nmax + 1)
    edges = np.unique(np.concatenate([np.linspace(n - b, n + b, 9) for n in centers]))
    edges = edges[edges >= 0]
    edges = np.concatenate([[0.0], edges]) if edges[0] > 0 else edges
    x0, w0 = gauss_legendre(24)
    c, h = 0.5 * (edges[1:] + edges[:-1]), 0.5 * np.diff(edges)
    x = (c[:, None] + h[:, None] * x0[None, :]).ravel()
    w = (h[:, None] * w0[None, :]).ravel() * 2 * phi(x)
    for y in y_samples:
        val = float(np.cos(2 * np.pi * x * y) @ w)
        out.append(make_report("kahane_transform", val, psi(float(y)), tol, b=b, y=float(y)))
    return out
