"""Modified sums F, K, A_f and A*_f with explicit truncation control.

    F(x)   = sum_{n>=1} f(n/x)/x - int f
    K(x)   = sum_{n>=1} f(x/n)/n - int f(1/u)/u du
    A_f(x) = sum_{n>=1} f(nx) - (int f)/x
    A*_f(x)= sum_{n>=1} f(nx) - (int f)/(2x)

K_f is F of f(1/u)/u, and the A sums are the F sum read at 1/x, so a
single kernel ``riemann_sum`` does the work.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .funcspace import ParityFunction

__all__ = [
    "SumSpec",
    "TAIL_TOL",
    "sum_spec",
    "riemann_sum",
    "eval_F",
    "eval_K",
    "eval_A",
    "eval_A_star",
]

TAIL_TOL = 1e-12
_CHUNK = 2_000_000


@dataclass(frozen=True)
class SumSpec:
    """Index range used for one evaluation of a modified sum."""

    kind: str
    f: ParityFunction
    n_min: int
    n_max: Union[int, str]
    tail_bound: float

    def __post_init__(self):
        if self.kind not in ("F", "K", "A", "A_star"):
            raise ValueError(f"unknown kind {self.kind!r}")


def _cap(f: ParityFunction, tol: float) -> float:
    """M with int_M^inf (majorant of |f|) <= tol."""
    if f.tail_bound is None:
        raise ValueError(f"{f.name}: no support or tail majorant; truncation cannot be controlled")
    M = 1.0
    for _ in range(400):
        if f.tail_bound(M) <= tol:
            return M
        M *= 1.25
    raise ValueError(f"{f.name}: tail bound does not decay")


def _range(f: ParityFunction, y: float, tol: float) -> tuple[int, int, float]:
    if f.support is not None:
        b, B = f.support
        return max(1, math.ceil(y * b)), math.floor(y * B), 0.0
    M = _cap(f, tol)
    return 1, max(1, math.ceil(y * M)), f.tail_bound(M)


def riemann_sum(f: ParityFunction, y, tol: float = TAIL_TOL):
    """S(y) = sum_{n>=1} f(n/y)/y, with S(y) = 0 for y <= 0."""
    y = np.asarray(y, dtype=float)
    scalar = y.ndim == 0
    yy = np.atleast_1d(y).ravel()
    out = np.zeros_like(yy)
    pos = yy > 0
    if not pos.any():
        return float(out[0]) if scalar else out.reshape(y.shape)
    yp = yy[pos]
    order = np.argsort(yp)
    ys = yp[order]
    acc = np.zeros_like(ys)
    if f.support is not None:
        b, B = f.support
        nmax = math.floor(ys[-1] * B)
        for n in range(max(1, math.ceil(ys[0] * b)), nmax + 1):
            lo = np.searchsorted(ys, n / B, side="left")
            hi = np.searchsorted(ys, n / b, side="right")
            if hi > lo:
                seg = ys[lo:hi]
                acc[lo:hi] += f.eval(n / seg) / seg
    else:
        M = _cap(f, tol)
        nlim = np.ceil(ys * M)
        ntop = int(nlim[-1])
        block = max(1, _CHUNK // ys.size)
        for start in range(1, ntop + 1, block):
            n = np.arange(start, min(ntop, start + block - 1) + 1, dtype=float)
            live = np.searchsorted(nlim, n[0], side="left")
            seg = ys[live:]
            vals = f.eval(n[:, None] / seg[None, :]) / seg[None, :]
            vals = np.where(n[:, None] <= nlim[live:][None, :], vals, 0.0)
            acc[live:] += vals.sum(axis=0)
    tmp = np.empty_like(ys)
    tmp[order] = acc
    out[pos] = tmp
    return float(out[0]) if scalar else out.reshape(y.shape)


def sum_spec(kind: str, f: ParityFunction, x: float, tol: float = TAIL_TOL) -> SumSpec:
    """Describe the index range of the sum ``kind`` at a scalar x > 0."""
    if kind == "F":
        g, y = f, x
    elif kind == "K":
        g, y = f.inverted, x
    else:
        g, y = f, 1.0 / x
    lo, hi, tb = _range(g, y, tol)
    return SumSpec(kind, f, lo, hi, tb)


def _require_even(f: ParityFunction):
    if f.parity != "even":
        raise ValueError(f"{f.name}: F and K are defined for even functions")


def eval_F(f: ParityFunction, x):
    """F(x) = sum f(n/x)/x - int f; F(0) = -int f."""
    _require_even(f)
    return riemann_sum(f, x) - f.integral


def eval_K(f: ParityFunction, x):
    """K(x) = sum f(x/n)/n - int f(1/u)/u du; K(0) = -int f(1/u)/u du."""
    _require_even(f)
    return riemann_sum(f.inverted, x) - f.integral_inv


def _sum_nx(f: ParityFunction, x):
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("A_f is evaluated at x > 0")
    return riemann_sum(f, 1.0 / x) / x


def eval_A(f: ParityFunction, x):
    """A_f(x) = sum f(nx) - (int f)/x."""
    return _sum_nx(f, x) - f.integral / np.asarray(x, dtype=float)


def eval_A_star(f: ParityFunction, x):
    """A*_f(x) = sum f(nx) - (int f)/(2x)."""
    return _sum_nx(f, x) - 0.5 * f.integral / np.asarray(x, dtype=float)
