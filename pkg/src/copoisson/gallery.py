"""Explicit square-integrable functions with a gap, built from lattice sums.

Families (x > 0, 0 < a < 1, A = 1/a):

    even_fa  sum_{a x <= n <= A x} [3(x/n + n/x) - (A + a + 4)] / sqrt(n x)   cosine-self-reciprocal
    odd_fa   sum_{a x <= n + 1/2 <= A x} (-1)^n / x                           sine transform is odd_ga
    odd_ga   sum_{...} (-1)^n / (n + 1/2)
    odd_ka   sum_{...} (-1)^n / sqrt((n + 1/2) x)                               sine-self-reciprocal
    qn       sum_{x <= (n+1/2)/sqrt(N+1/2) <= 2x} (-1)^n Q_N(n) [(u - c1)(u - c2)]^{2N+1},
             u = x/(n+1/2), c1 = 1/sqrt(4N+2), c2 = 1/sqrt(N+1/2),
             Q_N(n) = prod_{0<=j<N} (n(n+1) - j(j+1))

Sums over index windows are evaluated from prefix sums, so a value at
large x costs O(1); qn is summed directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .funcspace import ParityFunction
from .quad import abel_transform_many, gauss_legendre
from .reports import IdentityReport, make_report

__all__ = [
    "FAMILIES",
    "GalleryFunction",
    "gallery_function",
    "gallery_eval",
    "verify_support",
    "verify_reciprocity",
    "l2_truncation",
    "SupportReport",
]

FAMILIES = ("even_fa", "odd_fa", "odd_ga", "odd_ka", "qn")


class _Prefix:
    """Cumulative sums C[m] = sum_{n < m} g(n), grown on demand."""

    def __init__(self, g: Callable[[np.ndarray], np.ndarray], start: int = 0):
        self.g, self.start = g, start
        self.c = np.zeros(1)

    def window(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        """sum_{n=lo}^{hi} g(n), zero when hi < lo."""
        lo = np.maximum(lo, self.start)
        top = int(np.max(hi, initial=0)) + 2
        if top > self.c.size - 1:
            n = np.arange(self.c.size - 1, 2 * top + 16)
            vals = np.where(n >= self.start, self.g(n.astype(float)), 0.0)
            self.c = np.concatenate([self.c, self.c[-1] + np.cumsum(vals)])
        ok = hi >= lo
        lo_i = np.where(ok, lo, 0).astype(int)
        hi_i = np.where(ok, hi, -1).astype(int)
        return np.where(ok, self.c[hi_i + 1] - self.c[lo_i], 0.0)


@dataclass(frozen=True)
class GalleryFunction:
    family: str
    params: tuple
    parity: str
    gap: float  # the function vanishes on (-gap, gap)
    eval: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    breaks: Callable[[float, float], np.ndarray] = field(repr=False)
    partner: str  # family of the claimed transform
    kind: str  # cos or sin

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        ax = np.abs(x)
        v = np.where(ax > 0, np.reshape(self.eval(np.where(ax > 0, ax, 1.0)), x.shape), 0.0)
        if self.parity == "odd":
            v = np.where(x < 0, -v, v)
        return v if v.ndim else float(v)

    def as_parity_function(self) -> ParityFunction:
        return ParityFunction(name=self.family, parity=self.parity, eval=self.eval, smoothness="BV",
                              is_L2=True, breaks=self.breaks, params=self.params)


def _lattice_breaks(offsets: float, scales: Sequence[float]):
    """Points x with x * scale = n + offset for n >= 0."""
    def breaks(lo: float, hi: float) -> np.ndarray:
        pts = []
        for sc in scales:
            n = np.arange(max(0, math.floor(lo * sc - offsets)), math.ceil(hi * sc - offsets) + 1)
            pts.append((n + offsets) / sc)
        p = np.concatenate(pts) if pts else np.empty(0)
        return np.unique(p[(p > lo) & (p < hi)])
    return breaks


def _even_fa(a: float):
    A = 1.0 / a
    c = A + a + 4
    p_m32 = _Prefix(lambda n: np.maximum(n, 1) ** -1.5, start=1)
    p_12 = _Prefix(lambda n: n ** 0.5, start=1)
    p_m12 = _Prefix(lambda n: np.maximum(n, 1) ** -0.5, start=1)

    def f(x):
        x = np.asarray(x, dtype=float)
        lo = np.maximum(np.ceil(a * x), 1)
        hi = np.floor(A * x)
        return (3 * np.sqrt(x) * p_m32.window(lo, hi) + 3 * x ** -1.5 * p_12.window(lo, hi)
                - c * x ** -0.5 * p_m12.window(lo, hi))
    return f


def _odd(a: float, which: str):
    A = 1.0 / a
    if which == "odd_fa":
        p = _Prefix(lambda n: (-1.0) ** n)
        scale = lambda x: 1.0 / x
    elif which == "odd_ga":
        p = _Prefix(lambda n: (-1.0) ** n / (n + 0.5))
        scale = lambda x: 1.0
    else:
        p = _Prefix(lambda n: (-1.0) ** n / np.sqrt(n + 0.5))
        scale = lambda x: x ** -0.5

    def f(x):
        x = np.asarray(x, dtype=float)
        lo = np.maximum(np.ceil(a * x - 0.5), 0)
        hi = np.floor(A * x - 0.5)
        return scale(x) * p.window(lo, hi)
    return f


def _qn_coeff(N: int, n: np.ndarray) -> np.ndarray:
    out = np.ones_like(n, dtype=float)
    for j in range(N):
        out *= n * (n + 1) - j * (j + 1)
    return out


def _qn(N: int):
    r = math.sqrt(N + 0.5)
    c1, c2 = 1 / math.sqrt(4 * N + 2), 1 / r
    p = 2 * N + 1
    table = {}

    def per_n(top: int):
        # (-1)^n Q_N(n) / (n + 1/2)^{2p} and the roots c1 (n + 1/2), c2 (n + 1/2)
        if table.get("top", -1) < top:
            n = np.arange(0, 2 * top + 16, dtype=float)
            m = n + 0.5
            table.update(top=2 * top + 15, coef=np.where(n % 2 == 0, 1.0, -1.0) * _qn_coeff(N, n) / m ** (2 * p),
                         al=c1 * m, be=c2 * m)
        return table["coef"], table["al"], table["be"]

    def f(x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.zeros_like(x)
        lo = np.maximum(np.ceil(x * r - 0.5), 0).astype(np.int64)
        hi = np.floor(2 * x * r - 0.5).astype(np.int64)
        live = hi >= lo
        if not live.any():
            return out
        coef, al, be = per_n(int(hi.max()))
        idx = np.nonzero(live)[0]
        order = idx[np.lexsort((hi[idx], lo[idx]))]
        key = lo[order] * (hi.max() + 2) + hi[order]
        cuts = np.nonzero(np.diff(key))[0] + 1
        # points sharing an index window are evaluated together
        for grp in np.split(order, cuts):
            l, h = lo[grp[0]], hi[grp[0]] + 1
            xs = x[grp][:, None]
            w = (xs - al[None, l:h]) * (xs - be[None, l:h])
            wp = w.copy()
            for _ in range(p - 1):  # integer power by products; np.power is slow here
                wp *= w
            out[grp] = wp @ coef[l:h]
        return out
    return f


def gallery_function(family: str, a: float = 0.5, N: int = 1) -> GalleryFunction:
    """Build one family member; ``a`` for the lattice families, ``N`` for qn."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; choose from {FAMILIES}")
    if family == "qn":
        if int(N) != N or N < 0:
            raise ValueError("N must be a nonnegative integer")
        N = int(N)
        r = math.sqrt(N + 0.5)
        return GalleryFunction("qn", (N,), "even", 0.5 * r, _qn(N), _lattice_breaks(0.5, (r, 2 * r)), "qn", "cos")
    if not 0 < a < 1:
        raise ValueError("need 0 < a < 1")
    A = 1.0 / a
    if family == "even_fa":
        return GalleryFunction(family, (a,), "even", a, _even_fa(a), _lattice_breaks(0.0, (a, A)), "even_fa", "cos")
    partner = {"odd_fa": "odd_ga", "odd_ga": "odd_fa", "odd_ka": "odd_ka"}[family]
    return GalleryFunction(family, (a,), "odd", a / 2, _odd(a, family), _lattice_breaks(0.5, (a, A)), partner, "sin")


def gallery_eval(family: str, params: Sequence[float], x) -> np.ndarray:
    """Evaluate a family at x; params is (a,) or (N,)."""
    g = gallery_function(family, N=int(params[0])) if family == "qn" else gallery_function(family, a=params[0])
    return g(x)


@dataclass(frozen=True)
class SupportReport:
    family: str
    params: tuple
    grid: np.ndarray
    values: np.ndarray
    passed: bool


def verify_support(g: GalleryFunction, grid_in_gap: Sequence[float] = None, tol: float = 0.0) -> SupportReport:
    """Values on points of (0, gap) must vanish (exactly for tol = 0)."""
    if grid_in_gap is None:
        grid_in_gap = np.linspace(0.0, g.gap, 12)[1:-1]
    x = np.asarray(grid_in_gap, dtype=float)
    if np.any(np.abs(x) >= g.gap):
        raise ValueError("grid points must lie inside the gap")
    v = np.asarray(g(x), dtype=float)
    return SupportReport(g.family, g.params, x, v, bool(np.all(np.abs(v) <= tol)))


def verify_reciprocity(g: GalleryFunction, y_samples: Sequence[float], tol: float = 5e-3,
                       eps_ladder: Sequence[float] = (0.2, 0.1, 0.05, 0.025)) -> list[IdentityReport]:
    """Abel-regularized cosine or sine transform of g against its claimed partner.

    For qn only the gap statement is claimed: the transform vanishes on (-gap, gap).
    """
    pf = g.as_parity_function()
    if g.family == "qn":
        target = lambda y: 0.0
        if any(abs(y) >= g.gap for y in y_samples):
            raise ValueError("qn reciprocity is only claimed inside the gap")
    else:
        partner = gallery_function(g.partner, a=g.params[0])
        target = lambda y: float(partner(y))
    out = []
    results = abel_transform_many(pf, y_samples, eps_ladder=eps_ladder, kind=g.kind, tol=1e-10)
    for y, r in zip(y_samples, results):
        out.append(make_report("gallery_reciprocity", r.value, target(y), tol, family=g.family,
                               params=list(g.params), y=float(y), abel_err=r.err_estimate))
    return out


def l2_truncation(g: GalleryFunction, Xs: Sequence[float] = (1e2, 1e3, 1e4), nodes: int = 6) -> list[float]:
    """int_0^X g(x)^2 dx for each X, on a rule aligned with the lattice breaks.

    Between breaks qn is a polynomial of degree 4N+2, so 4N+3 nodes per
    piece integrate its square exactly and no extra panels are needed.
    """
    poly = g.family == "qn"
    if poly:
        nodes = 4 * g.params[0] + 3
    x0, w0 = gauss_legendre(nodes)
    out, total, prev = [], 0.0, 0.0
    for X in sorted(Xs):
        extra = np.empty(0) if poly else np.arange(math.ceil(prev), X, 1.0)
        edges = np.unique(np.concatenate([[prev, X], g.breaks(prev, X), extra]))
        c, h = 0.5 * (edges[1:] + edges[:-1]), 0.5 * np.diff(edges)
        x = (c[:, None] + h[:, None] * x0[None, :]).ravel()
        w = (h[:, None] * w0[None, :]).ravel()
        vals = np.empty_like(x)
        chunk = 50_000
        for i in range(0, x.size, chunk):
            vals[i:i + chunk] = g(x[i:i + chunk])
        total += float(np.sum(w * vals ** 2))
        out.append(total)
        prev = X
    return out
