"""Quadrature engines.

Adaptive Gauss-Kronrod bisection for non-oscillatory pieces, half-period
panels with Euler summation for oscillatory tails, and an Abel ladder
with Richardson extrapolation for transforms of L^2 functions that are
not integrable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .funcspace import DivergenceError, ParityFunction

__all__ = [
    "QuadResult",
    "QuadratureError",
    "NonConvergentTailError",
    "integrate_adaptive",
    "integrate_half_line",
    "gauss_legendre",
    "composite_gl",
    "euler_sum",
    "alternating_tail",
    "cosine_transform",
    "sine_transform",
    "dirichlet_kernel_integral",
    "abel_transform",
    "abel_transform_many",
    "richardson_zero",
    "transform_many",
]

TOL_COMPACT = 1e-10
TOL_TAIL = 1e-8


@dataclass(frozen=True)
class QuadResult:
    value: complex | float
    err_estimate: float
    evaluations: int
    flags: tuple = ()

    def __post_init__(self):
        if self.err_estimate < 0 or self.evaluations < 1:
            raise ValueError("err_estimate must be >= 0 and evaluations >= 1")


class QuadratureError(ArithmeticError):
    """Refinement limit hit; ``best`` holds the estimate reached so far."""

    def __init__(self, msg: str, best: QuadResult):
        super().__init__(msg)
        self.best = best


class NonConvergentTailError(DivergenceError):
    pass


# Gauss-Kronrod 7/15 abscissae and weights.
_XK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0,
])
_WK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
_WK15 = np.concatenate([_WK[:-1], _WK[::-1]])
_WG15 = np.zeros(15)
_WG15[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])


def integrate_adaptive(
    g: Callable[[np.ndarray], np.ndarray],
    interval: Sequence[float],
    tol: float = TOL_COMPACT,
    points: Optional[Sequence[float]] = None,
    max_depth: int = 50,
    max_panels: int = 400_000,
) -> QuadResult:
    """Integrate a vectorized ``g`` over [lo, hi] by batched GK15 bisection.

    A panel is accepted once |K15 - G7| is within its share of ``tol``
    (proportional to width).  ``points`` pre-split the interval.
    """
    lo, hi = float(interval[0]), float(interval[1])
    if not lo < hi:
        if lo == hi:
            return QuadResult(0.0, 0.0, 1)
        raise ValueError("need lo < hi")
    edges = [lo]
    if points is not None:
        edges += sorted(float(p) for p in points if lo < p < hi)
    edges.append(hi)
    edges = np.unique(edges)
    a, b = edges[:-1], edges[1:]
    width = hi - lo
    total = 0.0
    err = 0.0
    evals = 0
    for depth in range(max_depth + 1):
        c, h = 0.5 * (a + b), 0.5 * (b - a)
        x = c[:, None] + h[:, None] * _NODES[None, :]
        v = np.asarray(g(x.ravel())).reshape(x.shape)
        evals += v.size
        k = h * (v @ _WK15)
        e = np.abs(k - h * (v @ _WG15))
        ok = (e <= tol * (b - a) / width) | (h <= 4e-16 * np.maximum(1.0, np.abs(c)))
        total = total + k[ok].sum()
        err += e[ok].sum()
        if ok.all():
            return QuadResult(total, float(err), evals)
        a, b = a[~ok], b[~ok]
        if depth == max_depth or 2 * a.size > max_panels:
            best = QuadResult(total + k[~ok].sum(), float(err + e[~ok].sum()), evals)
            raise QuadratureError(f"refinement limit on [{lo}, {hi}]", best)
        m = 0.5 * (a + b)
        a, b = np.concatenate([a, m]), np.concatenate([m, b])
    raise AssertionError("unreachable")


_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def composite_gl(g: Callable, edges: np.ndarray, n: int = 20, per_panel: bool = False):
    """Fixed n-point Gauss-Legendre on each panel [edges[i], edges[i+1]]."""
    x0, w0 = gauss_legendre(n)
    edges = np.asarray(edges, dtype=float)
    c, h = 0.5 * (edges[1:] + edges[:-1]), 0.5 * np.diff(edges)
    x = c[:, None] + h[:, None] * x0[None, :]
    v = np.asarray(g(x.ravel())).reshape(x.shape)
    parts = h * (v @ w0)
    return parts if per_panel else parts.sum()


def euler_sum(terms: np.ndarray) -> tuple[float, float]:
    """Sum a (roughly alternating) series by repeated averaging of partial sums.

    Returns (value, error estimate); the estimate compares the transform of
    all terms with the transform of all but the last.
    """
    s = np.cumsum(terms)
    n = s.size
    if n < 4:
        return s[-1], abs(terms[-1]) if n else 0.0

    def avg(p):
        m = p.size
        k = np.arange(m)
        lw = math.lgamma(m) - np.array([math.lgamma(j + 1) + math.lgamma(m - j) for j in k]) - (m - 1) * math.log(2)
        w = np.exp(lw)  # binomial weights, in logs so large m does not overflow
        return w @ p

    full, short = avg(s), avg(s[:-1])
    return full, abs(full - short)


def alternating_tail(
    g: Callable[[np.ndarray], np.ndarray],
    x0: float,
    half_period: float,
    tol: float = TOL_TAIL,
    n_panels: int = 48,
    max_panels: int = 6144,
    nodes: int = 24,
) -> QuadResult:
    """Integral of ``g`` over [x0, inf) where g changes sign every half period.

    Panel integrals come from fixed Gauss-Legendre and are summed with the
    Euler transform; the panel count doubles until the estimate settles.
    """
    prev = None
    evals = 0
    while True:
        edges = x0 + half_period * np.arange(n_panels + 1)
        parts = composite_gl(g, edges, nodes, per_panel=True)
        evals += n_panels * nodes
        val, est = euler_sum(parts)
        if prev is not None:
            est = max(est, abs(val - prev))
        if est <= tol:
            return QuadResult(val, est, evals)
        if 2 * n_panels > max_panels:
            raise QuadratureError("oscillatory tail did not settle", QuadResult(val, est, evals))
        prev, n_panels = val, 2 * n_panels


def _cap_from_bound(bound: Callable[[float], float], target: float, start: float = 1.0) -> float:
    M = start
    for _ in range(200):
        if bound(M) <= target:
            return M
        M *= 1.5
    raise NonConvergentTailError("tail bound never drops below target")


def integrate_half_line(f: ParityFunction, weight: Callable = None, tol: float = 1e-13) -> float:
    """Integral of f(u) * weight(u) over (0, inf) for f with support or decay metadata."""
    if weight is None:
        weight = lambda u: np.ones_like(u)
    g = lambda u: f(u) * weight(u)
    if f.support is not None:
        b, B = f.support
        return integrate_adaptive(g, (b, B), tol, points=f.breakpoints(b, B)).value
    total = 0.0
    for direction in (-1, 1):
        hist = []
        for k in range(400):
            lo, hi = (2.0**k, 2.0 ** (k + 1)) if direction > 0 else (2.0 ** (-k - 1), 2.0**-k)
            pts = f.breakpoints(lo, hi)
            if pts.size > 20000:
                raise NonConvergentTailError(f"{f.name}: breakpoints too dense, integral not resolvable")
            p = integrate_adaptive(g, (lo, hi), tol * 1e-2, points=pts).value
            total += p
            hist.append(abs(p))
            if k > 4 and abs(p) < tol * 1e-3 and (len(hist) < 2 or hist[-2] < tol):
                break
            # dyadic pieces of a 1/x singularity or tail stay level; integrable ones shrink
            last = hist[-9:]
            if len(last) == 9 and min(last) > 0 and all(b >= 0.9 * a for a, b in zip(last, last[1:])):
                raise NonConvergentTailError(f"{f.name}: integral diverges")
        else:
            raise NonConvergentTailError(f"{f.name}: integral did not converge")
    return total


def _trig_transform(f: ParityFunction, xi: float, tol: Optional[float], kind: str) -> float:
    xi = abs(float(xi))
    trig = np.cos if kind == "cos" else np.sin
    if kind == "sin" and xi == 0.0:
        return 0.0
    g = lambda x: 2.0 * trig(2 * np.pi * xi * x) * f(x)
    if f.support is not None:
        tol = TOL_COMPACT if tol is None else tol
        b, B = f.support
        pts = list(f.breakpoints(b, B))
        if xi * (B - b) > 2:
            pts += list(np.arange(b, B, 0.5 / xi))
        return float(integrate_adaptive(g, (b, B), tol, points=pts).value)
    tol = TOL_TAIL if tol is None else tol
    if not f.is_L1:
        raise NonConvergentTailError(f"{f.name} is not integrable; use abel_transform")
    if xi == 0.0:
        return 2.0 * f.integral
    if f.tail_bound is not None:
        M = _cap_from_bound(f.tail_bound, tol / 8.0)
        if xi * M <= 400:
            pts = list(f.breakpoints(0.0, M)) + list(np.arange(0.0, M, 0.5 / xi)[1:])
            return float(integrate_adaptive(g, (0.0, M), tol / 2, points=pts).value)
    # head on [0, x0] then Euler-summed half-periods; x0 is a kernel zero
    last_break = max([1.0] + list(f.breakpoints(0.0, 64.0)))
    k = math.ceil(2 * xi * last_break)
    x0 = (k + 0.5) / (2 * xi) if kind == "cos" else k / (2 * xi)
    pts = list(f.breakpoints(0.0, x0)) + list(np.arange(0.0, x0, 0.5 / xi)[1:])
    head = integrate_adaptive(g, (0.0, x0), tol / 4, points=pts).value
    tail = alternating_tail(g, x0, 0.5 / xi, tol / 2).value
    return float(head + tail)


def cosine_transform(f: ParityFunction, xi: float, tol: Optional[float] = None) -> float:
    """Integral of 2 cos(2 pi xi x) f(x) over (0, inf)."""
    return _trig_transform(f, xi, tol, "cos")


def sine_transform(f: ParityFunction, xi: float, tol: Optional[float] = None) -> float:
    """Integral of 2 sin(2 pi xi x) f(x) over (0, inf); odd in xi."""
    s = -1.0 if xi < 0 else 1.0
    return s * _trig_transform(f, xi, tol, "sin")


def dirichlet_kernel_integral(
    K: Callable[[np.ndarray], np.ndarray],
    xi: float,
    lam: float,
    X: float,
    tol: float = TOL_COMPACT,
    breaks: Sequence[float] = (),
) -> QuadResult:
    """Integral over [0, X] of sin(2 pi lam (t - xi)) / (pi (t - xi)) K(t).

    The kernel is written as 2 lam sinc(2 lam (t - xi)), so t = xi takes
    the limit value 2 lam K(xi) without a special case.  Panels are split
    at xi, at each kernel half period, and at ``breaks`` (jumps of K).
    A jump of K at xi is reported in ``flags``.
    """
    if not (X > xi >= 0) or lam <= 0:
        raise ValueError("need X > xi >= 0 and lam > 0")
    g = lambda t: 2 * lam * np.sinc(2 * lam * (t - xi)) * K(t)
    brk = np.asarray(breaks, dtype=float)
    flags = ("K_jump_at_xi",) if brk.size and np.min(np.abs(brk - xi)) < 1e-12 else ()
    half = 0.5 / lam
    grid = np.concatenate([xi - half * np.arange(1, int(xi / half) + 1), xi + half * np.arange(0, int((X - xi) / half) + 1)])
    pts = np.concatenate([grid, brk])
    r = integrate_adaptive(g, (0.0, X), tol, points=pts)
    return QuadResult(r.value, r.err_estimate, r.evaluations, flags)


def richardson_zero(h: Sequence[float], values: Sequence, order: Optional[int] = None):
    """Neville extrapolation of values(h) to h = 0.  Returns (value, err)."""
    h = np.asarray(h, dtype=float)
    v = np.asarray(values)
    n = h.size if order is None else order + 1
    h, v = h[-n:], v[-n:]
    table = [v.astype(complex if np.iscomplexobj(v) else float)]
    for j in range(1, n):
        prev = table[-1]
        nxt = (h[j:] * prev[:-1] - h[:-j] * prev[1:]) / (h[j:] - h[:-j])
        table.append(nxt)
    best = table[-1][0]
    err = abs(best - table[-2][-1]) if n > 1 else math.inf
    return best, float(err)


def _abel_one(f: ParityFunction, xi: float, eps: float, kind: str, tol: float) -> float:
    probe = np.abs(f(np.linspace(1e-3, 50.0, 2001)))
    S = max(1.0, float(probe.max()))
    U = math.log(S / (eps * tol)) / eps
    width = 0.5 if xi == 0 else min(0.5, 0.25 / xi)
    edges = np.unique(np.concatenate([np.arange(0.0, U, width), [U], f.breakpoints(0.0, U)]))
    trig = np.cos if kind == "cos" else np.sin
    g = lambda u: 2 * trig(2 * np.pi * xi * u) * np.exp(-eps * u) * f(u)
    return float(composite_gl(g, edges, 20))


def abel_transform(
    f: ParityFunction,
    xi: float,
    eps_ladder: Sequence[float] = (0.2, 0.1, 0.05, 0.025),
    kind: str = "cos",
    tol: float = 1e-13,
) -> QuadResult:
    """Transform of f through the Abel factor exp(-eps u), extrapolated to eps = 0.

    Raises QuadratureError when successive ladder differences fail to shrink.
    """
    eps = np.asarray(eps_ladder, dtype=float)
    if eps.size < 3 or np.any(eps <= 0) or np.any(np.diff(eps) >= 0):
        raise ValueError("eps_ladder must be positive, decreasing, length >= 3")
    vals = np.array([_abel_one(f, xi, e, kind, tol) for e in eps])
    d = np.abs(np.diff(vals))
    floor = 1e-11 * max(1.0, float(np.max(np.abs(vals))))
    if np.any(d[1:] > d[:-1] + floor):
        best = QuadResult(float(vals[-1]), float(d[-1]), len(eps))
        raise QuadratureError("Abel ladder is not Cauchy", best)
    val, err = richardson_zero(eps, vals)
    return QuadResult(float(val), err, int(eps.size))


def abel_transform_many(
    f: ParityFunction,
    ys: Sequence[float],
    eps_ladder: Sequence[float] = (0.2, 0.1, 0.05, 0.025),
    kind: str = "cos",
    tol: float = 1e-13,
    nodes: int = 20,
) -> list[QuadResult]:
    """abel_transform at several points, sampling f once on a shared grid.

    Worth it when f is expensive; the grid reaches the cut of the smallest
    eps and the widest panel is a quarter period of the largest |y|.
    """
    eps = np.asarray(eps_ladder, dtype=float)
    if eps.size < 3 or np.any(eps <= 0) or np.any(np.diff(eps) >= 0):
        raise ValueError("eps_ladder must be positive, decreasing, length >= 3")
    ys = np.asarray(ys, dtype=float)
    probe = np.abs(f(np.linspace(1e-3, 50.0, 2001)))
    S = max(1.0, float(probe.max()))
    U = math.log(S / (eps[-1] * tol)) / eps[-1]
    ymax = float(np.max(np.abs(ys))) if ys.size else 0.0
    width = 0.5 if ymax == 0 else min(0.5, 0.25 / ymax)
    edges = np.unique(np.concatenate([np.arange(0.0, U, width), [U], f.breakpoints(0.0, U)]))
    x0, w0 = gauss_legendre(nodes)
    c, h = 0.5 * (edges[1:] + edges[:-1]), 0.5 * np.diff(edges)
    x = (c[:, None] + h[:, None] * x0[None, :]).ravel()
    w = (h[:, None] * w0[None, :]).ravel() * f(x)
    trig = np.cos if kind == "cos" else np.sin
    damp = np.exp(-np.outer(eps, x))
    out = []
    for y in ys:
        vals = damp @ (2 * trig(2 * np.pi * y * x) * w)
        d = np.abs(np.diff(vals))
        floor = 1e-11 * max(1.0, float(np.max(np.abs(vals))))
        if np.any(d[1:] > d[:-1] + floor):
            raise QuadratureError(f"Abel ladder is not Cauchy at y={y}", QuadResult(float(vals[-1]), float(d[-1]), len(eps)))
        val, err = richardson_zero(eps, vals)
        out.append(QuadResult(float(val), err, int(x.size)))
    return out


def transform_many(f: ParityFunction, ys, kind: str = "cos", upper: Optional[float] = None,
                   nodes: int = 16) -> np.ndarray:
    """Cosine (or sine) transform of f at many points by one composite rule.

    Panels are at most a quarter period of the fastest kernel wide, so
    accuracy is near machine level for smooth f.  Non-compact f is cut
    at ``upper`` or where its tail bound drops below 1e-16.
    """
    ys = np.atleast_1d(np.asarray(ys, dtype=float))
    if f.support is not None:
        lo, hi = f.support
    else:
        lo = 0.0
        hi = upper if upper is not None else _cap_from_bound(f.tail_bound, 1e-16)
    width = min(0.25, 0.25 / max(float(np.max(np.abs(ys))), 1e-300), (hi - lo) / 16)
    edges = np.unique(np.concatenate([np.linspace(lo, hi, int(math.ceil((hi - lo) / width)) + 1),
                                      f.breakpoints(lo, hi)]))
    x0, w0 = gauss_legendre(nodes)
    c, h = 0.5 * (edges[1:] + edges[:-1]), 0.5 * np.diff(edges)
    x = (c[:, None] + h[:, None] * x0[None, :]).ravel()
    w = (h[:, None] * w0[None, :]).ravel() * f(x)
    trig = np.cos if kind == "cos" else np.sin
    out = np.empty(ys.size)
    step = max(1, 4_000_000 // x.size)
    for i in range(0, ys.size, step):
        out[i:i + step] = 2.0 * (trig(2 * np.pi * np.outer(ys[i:i + step], x)) @ w)
    return out
