"""Gap distributions built from a cosine-kernel Fredholm equation on [0, a].

phi solves  phi(x) + k int_0^a 2cos(2 pi x y) phi(y) dy = 2cos(2 pi a x)
with k = +1 (sign "plus") or k = -1 (sign "minus").  The even tempered
distributions A_a, B_a vanish on (-a, a) and their completed right Mellin
transforms are entire with all nontrivial zeros on Re s = 1/2.

Mellin transforms reduce to closed forms: on [0, a] phi is a finite cosine
sum (Nystrom interpolant), so after swapping integrals every piece is a
value of Gamma or of Q(x, s) = int_0^1 cos(2 pi x v) v^{-s} dv.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .mellin import gamma_complex
from .quad import gauss_legendre

__all__ = [
    "SonineSolution",
    "EntireMellin",
    "ZeroList",
    "solve_phi",
    "phi_extend",
    "q_integral",
    "mellin_A",
    "mellin_B",
    "entire_mellin",
    "critical_line_zeros",
]


@dataclass(frozen=True)
class SonineSolution:
    a: float
    sign: str
    nodes: np.ndarray
    weights: np.ndarray
    phi_values: np.ndarray
    residual_inf: float
    op_norm_estimate: float

    @property
    def kappa(self) -> int:
        return 1 if self.sign == "plus" else -1

    @property
    def error_budget(self) -> float:
        """Sup-norm bound on phi_computed - phi_true from the Fredholm residual."""
        return self.residual_inf / (1.0 - self.op_norm_estimate)


def _kernel(x, y):
    return 2.0 * np.cos(2 * np.pi * np.outer(x, y))


def _nystrom_eval(a: float, kappa: int, t, w, phi, x) -> np.ndarray:
    """2cos(2 pi a x) - kappa sum_j w_j 2cos(2 pi x t_j) phi_j."""
    x = np.asarray(x, dtype=float)
    return 2 * np.cos(2 * np.pi * a * x) - kappa * (_kernel(x.ravel(), t) @ (w * phi)).reshape(x.shape)


def _fine_rule(sol: SonineSolution, xmax: float, per_panel: int = 24):
    """Composite Gauss-Legendre nodes on [0, a] resolving cos(2 pi x t) for |x| <= xmax, with phi there."""
    a = sol.a
    panels = max(2, int(math.ceil(4 * a * max(xmax, 1.0))))
    x0, w0 = gauss_legendre(per_panel)
    edges = np.linspace(0.0, a, panels + 1)
    c, h = 0.5 * (edges[1:] + edges[:-1]), 0.5 * np.diff(edges)
    y = (c[:, None] + h[:, None] * x0[None, :]).ravel()
    wy = (h[:, None] * w0[None, :]).ravel()
    return y, wy, _nystrom_eval(a, sol.kappa, sol.nodes, sol.weights, sol.phi_values, y)


def solve_phi(a: float, sign: str = "plus", n_nodes: int = 64) -> SonineSolution:
    """Nystrom solve on n Gauss-Legendre nodes of [0, a]."""
    if a <= 0:
        raise ValueError("a must be positive")
    if sign not in ("plus", "minus"):
        raise ValueError("sign must be plus or minus")
    if n_nodes < 16:
        raise ValueError("n_nodes must be at least 16")
    kappa = 1 if sign == "plus" else -1
    x0, w0 = gauss_legendre(n_nodes)
    t = 0.5 * a * (x0 + 1)
    w = 0.5 * a * w0
    K = _kernel(t, t)
    sw = np.sqrt(w)
    op_norm = float(np.linalg.svd(sw[:, None] * K * sw[None, :], compute_uv=False)[0])
    M = np.eye(n_nodes) + kappa * K * w[None, :]
    if np.linalg.cond(M) > 1e12:
        raise np.linalg.LinAlgError("Nystrom system is singular")
    phi = np.linalg.solve(M, 2 * np.cos(2 * np.pi * a * t))
    sol = SonineSolution(a, sign, t, w, phi, 0.0, op_norm)
    # residual of the integral equation at off-node points, integral on a finer rule
    xr = np.linspace(0.0, a, 23)[1:-2] + 0.37 * a / 22
    y, wy, py = _fine_rule(sol, a, per_panel=32)
    lhs = _nystrom_eval(a, kappa, t, w, phi, xr) + kappa * (_kernel(xr, y) @ (wy * py))
    res = float(np.max(np.abs(lhs - 2 * np.cos(2 * np.pi * a * xr))))
    return SonineSolution(a, sign, t, w, phi, res, op_norm)


def phi_extend(sol: SonineSolution, x) -> np.ndarray:
    """phi at any real x through the defining equation; even in x."""
    x = np.abs(np.asarray(x, dtype=float))
    y, wy, py = _fine_rule(sol, float(np.max(x)) if x.size else 1.0)
    out = 2 * np.cos(2 * np.pi * sol.a * x.ravel()) - sol.kappa * (_kernel(x.ravel(), y) @ (wy * py))
    return out.reshape(x.shape) if x.ndim else float(out[0])


# ---------------------------------------------------------------- Mellin


def q_integral(x, s: complex, per_panel: int = 20) -> np.ndarray:
    """Q(x, s) = int_0^1 cos(2 pi x v) v^{-s} dv for x >= 0, Re s < 1.

    A power series on [0, v0] with 2 pi x v0 <= pi/2, composite
    Gauss-Legendre above, with panels fine in both v and log v.
    """
    s = complex(s)
    if s.real >= 1:
        raise ValueError("Q needs Re s < 1")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty(x.size, dtype=complex)
    k = np.arange(0, 16)
    lfact = np.array([math.lgamma(2 * j + 1) for j in k])
    g0, gw = gauss_legendre(per_panel)
    for i, xi in enumerate(x):
        v0 = 1.0 if xi <= 0.25 else 0.25 / xi
        z = 2 * np.pi * xi * v0
        with np.errstate(divide="ignore"):
            mag = np.exp(2 * k * math.log(z) - lfact) if z > 0 else (k == 0).astype(float)
        series = np.sum((-1.0) ** k * mag / (2 * k + 1 - s)) * v0 ** (1 - s)
        if v0 < 1.0:
            n_log = int(math.ceil(abs(s.imag) * math.log(1 / v0) / 1.5)) + 2
            n_lin = int(math.ceil(4 * xi)) + 2
            edges = np.unique(np.concatenate([np.geomspace(v0, 1.0, n_log + 1), np.linspace(v0, 1.0, n_lin + 1)]))
            c, h = 0.5 * (edges[1:] + edges[:-1]), 0.5 * np.diff(edges)
            v = (c[:, None] + h[:, None] * g0[None, :]).ravel()
            wv = (h[:, None] * gw[None, :]).ravel()
            series += np.sum(wv * np.cos(2 * np.pi * xi * v) * np.exp(-s * np.log(v)))
        out[i] = series
    return out


def _g0(s: complex) -> complex:
    """int_0^inf cos(2 pi u) u^{-s} du = (2 pi)^{s-1} Gamma(1-s) sin(pi s/2), 0 < Re s < 1."""
    return (2 * np.pi) ** (s - 1) * gamma_complex(1 - s) * np.sin(np.pi * s / 2)


def _tail_mellin(sol: SonineSolution, s: complex) -> complex:
    """int_a^inf phi(y) y^{-s} dy (conditionally convergent), 0 < Re s < 1."""
    a, kap = sol.a, sol.kappa
    t, w, phi = sol.nodes, sol.weights, sol.phi_values
    G0 = _g0(s)
    # 2cos(2 pi a y) part: 2 a^{s-1} [G0 - a^{2-2s} Q(a^2, s)]
    cos_part = 2 * a ** (s - 1) * (G0 - a ** (2 - 2 * s) * q_integral(a * a, s)[0])
    # phi = sum_nu alpha_nu cos(2 pi nu t) on [0, a]
    nus = np.concatenate([[a], t])
    alpha = np.concatenate([[2.0], -kap * 2 * w * phi])
    I1 = a ** s * np.sum(alpha * q_integral(nus * a, 1 - s))
    I2 = np.sum(w * phi * q_integral(a * t, s))
    r_part = 2 * G0 * I1 - 2 * a ** (1 - s) * I2
    return complex(cos_part - kap * r_part)


def _check_strip(s: complex):
    if not 0 < s.real < 1:
        raise ValueError("evaluation strip is 0 < Re s < 1; use the functional equation outside")


def mellin_A(sol: SonineSolution, s: complex) -> complex:
    """Completed transform pi^{-s/2} Gamma(s/2) (sqrt(a)/2) (a^{-s} + int_a^inf phi y^{-s} dy)."""
    if sol.sign != "plus":
        raise ValueError("mellin_A needs the plus solution")
    s = complex(s)
    _check_strip(s)
    a = sol.a
    hat = 0.5 * math.sqrt(a) * (a ** (-s) + _tail_mellin(sol, s))
    return complex(np.pi ** (-s / 2) * gamma_complex(s / 2) * hat)


def mellin_B(sol: SonineSolution, s: complex) -> complex:
    """Completed transform pi^{-s/2} Gamma(s/2) (i sqrt(a)/2) (a^{-s} - int_a^inf phi^- y^{-s} dy)."""
    if sol.sign != "minus":
        raise ValueError("mellin_B needs the minus solution")
    s = complex(s)
    _check_strip(s)
    a = sol.a
    hat = 0.5j * math.sqrt(a) * (a ** (-s) - _tail_mellin(sol, s))
    return complex(np.pi ** (-s / 2) * gamma_complex(s / 2) * hat)


@dataclass(frozen=True)
class EntireMellin:
    """s -> completed Mellin transform of A_a (plus) or B_a (minus)."""

    a: float
    sign: str
    evaluator: Callable[[complex], complex] = field(repr=False)
    strip: tuple = (0.0, 1.0)

    def __call__(self, s: complex) -> complex:
        return self.evaluator(s)


def entire_mellin(sol: SonineSolution) -> EntireMellin:
    ev = (lambda s: mellin_A(sol, s)) if sol.sign == "plus" else (lambda s: mellin_B(sol, s))
    return EntireMellin(sol.a, sol.sign, ev)


# ----------------------------------------------------------------- zeros


@dataclass(frozen=True)
class ZeroList:
    zeros: np.ndarray
    residuals: np.ndarray
    T: float
    dt: float
    count_T: int
    asymptotic_ratio: float


def _line_scalar(sol: SonineSolution) -> Callable[[float], float]:
    """Real scalar on the critical line whose sign changes are the zeros.

    Both transforms are real on Re s = 1/2: the reflection s -> 1 - s and
    conjugation agree there, and for B the two sign flips cancel.
    """
    F = entire_mellin(sol)
    return lambda t: F(complex(0.5, t)).real


def _sign_changes(Z, T: float, dt: float):
    ts = np.arange(dt, T + 0.5 * dt, dt)
    ts = ts[ts <= T + 1e-12]
    vals = np.array([Z(t) for t in ts])
    idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    return ts, vals, idx


def critical_line_zeros(sol: SonineSolution, T: float, dt: float = 0.05, xtol: float = 1e-9,
                        max_halvings: int = 3) -> ZeroList:
    """Sign changes of the real scalar on (0, T], bisected to xtol."""
    if T <= 0:
        raise ValueError("T must be positive")
    Z = _line_scalar(sol)
    ts, vals, idx = _sign_changes(Z, T, dt)
    for _ in range(max_halvings):
        ts2, vals2, idx2 = _sign_changes(Z, T, dt / 2)
        if idx2.size == idx.size:
            break
        dt, ts, vals, idx = dt / 2, ts2, vals2, idx2
    else:
        raise ArithmeticError("sign-change count not stable under dt halving")
    zeros, res = [], []
    F = entire_mellin(sol)
    for i in idx:
        lo, hi, flo = ts[i], ts[i + 1], vals[i]
        while hi - lo > xtol:
            mid = 0.5 * (lo + hi)
            fm = Z(mid)
            if fm == 0:
                lo = hi = mid
                break
            if (fm < 0) == (flo < 0):
                lo, flo = mid, fm
            else:
                hi = mid
        z = 0.5 * (lo + hi)
        zeros.append(z)
        res.append(abs(F(complex(0.5, z))))
    n = len(zeros)
    main = T / (2 * np.pi) * math.log(T) if T > 1 else float("nan")
    return ZeroList(np.array(zeros), np.array(res), float(T), float(dt), n, n / main if main else float("nan"))
