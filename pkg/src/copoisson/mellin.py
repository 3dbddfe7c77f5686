"""zeta, Gamma, chi and Mellin transforms on vertical lines, with the
Muntz-type identities that tie modified sums to zeta.

Mellin sides: left is int f(x) x^{s-1} dx, right is int f(x) x^{-s} dx.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .funcspace import EULER_GAMMA, ParityFunction, builtin_function
from .quad import (
    composite_gl,
    gauss_legendre,
    integrate_adaptive,
    richardson_zero,
    transform_many,
    abel_transform,
)
from .reports import IdentityReport, fmt, make_report
from .sums import eval_A, eval_K, riemann_sum

__all__ = [
    "ZetaValue",
    "VerticalSlice",
    "zeta",
    "zeta_array",
    "loggamma_complex",
    "gamma_complex",
    "chi",
    "chi_sin",
    "mellin_value",
    "mellin_values",
    "mellin_line",
    "muntz_identity",
    "comuntz_identity",
    "functional_eq_defect",
    "vp_zeta_pairing",
    "fourier_zeta_sigma",
    "l2_muntz_D",
    "l2_muntz_symmetry",
    "frac_part_pair",
    "frac_part_rhs",
    "zeta_polar_part_check",
]

# ------------------------------------------------------------------ zeta

# B_{2k}/(2k)! for k = 1..6
_BERN = np.array([1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730])
_BERN_FACT = _BERN / np.array([math.factorial(2 * k) for k in range(1, 7)], dtype=float)


@dataclass(frozen=True)
class ZetaValue:
    s: complex
    value: complex
    N_used: int
    err_estimate: float

    def __post_init__(self):
        if self.err_estimate < 0:
            raise ValueError("err_estimate must be nonnegative")


def _em_zeta(s: np.ndarray, N: int) -> tuple[np.ndarray, np.ndarray]:
    """Euler-Maclaurin: sum_{n<N} n^-s + N^{1-s}/(s-1) + N^-s/2 + Bernoulli terms through B10."""
    n = np.arange(1, N, dtype=float)
    logn = np.log(n)
    head = np.exp(-np.outer(s, logn)).sum(axis=1)
    logN = math.log(N)
    Ns = np.exp(-s * logN)
    val = head + N * Ns / (s - 1) + 0.5 * Ns
    poch = s.copy()  # s (s+1) ... (s+2k-2)
    powN = Ns / N  # N^{-s-1}
    term = np.zeros_like(s)
    for k in range(6):
        term = _BERN_FACT[k] * poch * powN
        if k < 5:
            val = val + term
            poch = poch * (s + 2 * k + 1) * (s + 2 * k + 2)
            powN = powN / (N * N)
    return val, np.abs(term)


def _n_for(t: float) -> int:
    return int(max(10, math.ceil(2 * abs(t))))


def zeta_array(s) -> np.ndarray:
    """Vectorized zeta for complex s.  Re(s) <= 0 (s != 0) goes through chi."""
    s = np.atleast_1d(np.asarray(s, dtype=complex))
    out = np.empty_like(s)
    if np.any(s == 1):
        raise ZeroDivisionError("zeta has a pole at s = 1")
    right = (s.real > 0) | (s == 0)
    if right.any():
        sr = s[right]
        N = _n_for(float(np.max(np.abs(sr.imag))) if sr.size else 0.0)
        out[right] = _em_zeta(sr, N)[0]
    if (~right).any():
        sl = s[~right]
        out[~right] = chi(sl) * zeta_array(1 - sl)
    return out


def zeta(s: complex) -> ZetaValue:
    """zeta(s) with N = max(10, 2|Im s|) and Euler-Maclaurin terms through B10."""
    s = complex(s)
    if s == 1:
        raise ZeroDivisionError("zeta has a pole at s = 1")
    N = _n_for(s.imag)
    if s.real > 0 or s == 0:
        v, e = _em_zeta(np.array([s]), N)
        return ZetaValue(s, complex(v[0]), N, float(e[0]) + 1e-16 * abs(v[0]))
    w = zeta(1 - s)
    c = complex(chi(s))
    return ZetaValue(s, c * w.value, w.N_used, abs(c) * w.err_estimate + 1e-15 * abs(c * w.value))


# ----------------------------------------------------------------- Gamma

_LANCZOS_G = 7.0
_LANCZOS = np.array([
    0.99999999999980993, 676.5203681218851, -1259.1392167224028, 771.32342877765313,
    -176.61502916214059, 12.507343278686905, -0.13857109526572012,
    9.9843695780195716e-6, 1.5056327351493116e-7,
])
_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)


def _log_sin_pi(z: np.ndarray) -> np.ndarray:
    """log sin(pi z) without overflow for large |Im z| (any branch)."""
    flip = z.imag < 0
    w = np.where(flip, np.conj(z), z)
    e = np.exp(2j * np.pi * w)
    val = -1j * np.pi * w + np.log(e - 1) - np.log(2j)
    return np.where(flip, np.conj(val), val)


def _lg_right(z: np.ndarray) -> np.ndarray:
    z = z - 1
    x = np.full_like(z, _LANCZOS[0])
    for i in range(1, 9):
        x = x + _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * np.log(t) - t + np.log(x)


def loggamma_complex(s) -> np.ndarray:
    """A logarithm of Gamma(s); reflection for Re s < 1/2."""
    z = np.asarray(s, dtype=complex)
    if np.any((z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))):
        raise ValueError("Gamma has poles at non-positive integers")
    left = z.real < 0.5
    zr = np.where(left, 1 - z, z)
    lg = _lg_right(zr)
    return np.where(left, math.log(math.pi) - _log_sin_pi(np.where(left, z, 0.5)) - lg, lg)


def gamma_complex(s):
    """Gamma(s) for complex s (Lanczos g=7, n=9, with reflection)."""
    v = np.exp(loggamma_complex(s))
    return complex(v) if np.ndim(v) == 0 else v


def chi(s):
    """chi(s) = pi^{s-1/2} Gamma((1-s)/2) / Gamma(s/2) = zeta(s)/zeta(1-s)."""
    s = np.asarray(s, dtype=complex)
    # 1/Gamma(s/2) vanishes at s = 0, -2, -4, ...
    trivial = (s.imag == 0) & (s.real <= 0) & (s.real / 2 == np.round(s.real / 2))
    q = np.where(trivial, 0.5, s)
    v = np.exp((q - 0.5) * math.log(math.pi) + loggamma_complex((1 - q) / 2) - loggamma_complex(q / 2))
    v = np.where(trivial, 0.0, v)
    return complex(v) if v.ndim == 0 else v


def chi_sin(s):
    """chi_sin(s) = i pi^{s-1/2} Gamma((2-s)/2) / Gamma((s+1)/2)."""
    s = np.asarray(s, dtype=complex)
    v = 1j * np.exp((s - 0.5) * math.log(math.pi) + loggamma_complex((2 - s) / 2)
                    - loggamma_complex((s + 1) / 2))
    return complex(v) if v.ndim == 0 else v


def _completion(s):
    """pi^{-s/2} Gamma(s/2)."""
    s = np.asarray(s, dtype=complex)
    return np.exp(-0.5 * s * math.log(math.pi) + loggamma_complex(s / 2))


# ---------------------------------------------------------------- Mellin


@dataclass(frozen=True)
class VerticalSlice:
    sigma: float
    tau_grid: np.ndarray
    values: np.ndarray
    side: str
    errors: Optional[np.ndarray] = None

    def __post_init__(self):
        if len(self.tau_grid) != len(self.values):
            raise ValueError("tau_grid and values must have equal length")
        if self.side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")

    def conjugate_defect(self) -> float:
        """max |M(-tau) - conj M(tau)| over grid points whose mirror is present."""
        tau = np.asarray(self.tau_grid)
        vals = np.asarray(self.values)
        worst = 0.0
        for i, t in enumerate(tau):
            j = np.flatnonzero(np.isclose(tau, -t, rtol=0, atol=1e-12))
            if j.size:
                worst = max(worst, abs(vals[j[0]] - np.conj(vals[i])))
        return worst

    def to_csv(self) -> str:
        lines = ["side,sigma,tau,re,im,err"]
        errs = self.errors if self.errors is not None else np.zeros(len(self.values))
        for t, v, e in zip(self.tau_grid, self.values, errs):
            lines.append(",".join([self.side, fmt(self.sigma), fmt(t), fmt(v.real), fmt(v.imag), fmt(e)]))
        return "\n".join(lines) + "\n"


def _power_fit_head(f: ParityFunction, x0: float, q: complex) -> complex:
    """int_0^x0 f(x) x^q dx, with f ~ c0 + c2 x^2 (even) or c1 x + c3 x^3 (odd) near 0."""
    a, b = x0, 0.5 * x0
    fa, fb = float(f(a)), float(f(b))
    if f.parity == "even":
        p0, p1 = 0, 2
    else:
        p0, p1 = 1, 3
    # solve c_lo a^p0 + c_hi a^p1 = fa and the same at b
    m = np.array([[a**p0, a**p1], [b**p0, b**p1]])
    c_lo, c_hi = np.linalg.solve(m, [fa, fb])
    return c_lo * x0 ** (q + p0 + 1) / (q + p0 + 1) + c_hi * x0 ** (q + p1 + 1) / (q + p1 + 1)


def _log_panels(lo: float, hi: float, tau: float, extra=()) -> np.ndarray:
    ulo, uhi = math.log(lo), math.log(hi)
    step = min(0.25, 1.0 / max(abs(tau), 1e-300))
    u = np.linspace(ulo, uhi, int(math.ceil((uhi - ulo) / step)) + 1)
    ex = np.log([e for e in extra if lo < e < hi]) if len(extra) else np.empty(0)
    return np.unique(np.concatenate([u, ex]))


def mellin_value(
    f: ParityFunction,
    s: complex,
    side: str = "left",
    tol: float = 1e-12,
    lower: float = 1e-4,
    upper: Optional[float] = None,
    freq: float = 1.0,
) -> complex:
    """int f(x) x^{s-1} dx (left) or int f(x) x^{-s} dx (right).

    Compact support: adaptive quadrature with panels every 1/|tau| in log x.
    Otherwise see ``mellin_values``.
    """
    s = complex(s)
    if f.support is not None:
        q = s - 1 if side == "left" else -s
        b, B = f.support
        pts = np.exp(_log_panels(b, B, s.imag, f.breakpoints(b, B)))
        g = lambda x: f(x) * np.exp(q * np.log(x))
        return complex(integrate_adaptive(g, (b, B), tol, points=pts).value)
    return complex(mellin_values(f, [s], side, tol, lower, upper, freq)[0])


def mellin_values(
    f: ParityFunction,
    s_list: Sequence[complex],
    side: str = "left",
    tol: float = 1e-12,
    lower: float = 1e-4,
    upper: Optional[float] = None,
    freq: float = 1.0,
) -> np.ndarray:
    """Mellin transform of a non-compact f at several s, sampling f once.

    A two-term power fit covers [0, lower]; composite Gauss-Legendre in
    log x covers [lower, upper], with ``upper`` from the tail bound.  Panels
    stay below 1/max|tau| in log x and below a quarter period of ``freq``,
    the highest frequency at which f itself oscillates.
    """
    s_arr = np.asarray(s_list, dtype=complex)
    q = s_arr - 1 if side == "left" else -s_arr
    if upper is None:
        if f.tail_bound is None:
            raise ValueError(f"{f.name}: give an explicit upper limit")
        M = 1.0
        while f.tail_bound(M) > tol * 1e-2:
            M *= 1.5
        upper = M
    xgrid = np.arange(1.0, upper, 0.25 / freq)
    u = _log_panels(lower, upper, float(np.max(np.abs(s_arr.imag))),
                    np.concatenate([f.breakpoints(lower, upper), xgrid]))
    x0, w0 = gauss_legendre(20)
    c, h = 0.5 * (u[1:] + u[:-1]), 0.5 * np.diff(u)
    v = (c[:, None] + h[:, None] * x0[None, :]).ravel()
    w = (h[:, None] * w0[None, :]).ravel() * f(np.exp(v))
    out = np.empty(s_arr.size, dtype=complex)
    for i, qi in enumerate(q):
        out[i] = _power_fit_head(f, lower, qi) + np.exp((qi + 1) * v) @ w
    return out


def mellin_line(f: ParityFunction, sigma: float, tau_grid: Sequence[float], side: str = "left",
                **kw) -> VerticalSlice:
    tau = np.asarray(tau_grid, dtype=float)
    vals = np.array([mellin_value(f, sigma + 1j * t, side, **kw) for t in tau])
    return VerticalSlice(float(sigma), tau, vals, side, np.zeros(tau.size))


def _partial_zeta(s: complex, u: np.ndarray) -> np.ndarray:
    """H(u) = sum_{n <= u} n^{-s} for an array u >= 0."""
    m = int(math.floor(float(np.max(u)))) if u.size else 0
    cum = np.concatenate([[0.0], np.cumsum(np.exp(-s * np.log(np.arange(1, m + 1, dtype=float))))])
    return cum[np.floor(u).astype(int)]


def _sum_x_lo(f: ParityFunction, x_lo: Optional[float]) -> float:
    if x_lo is not None:
        return x_lo
    if f.support is not None and f.smoothness == "Cinf":
        return (f.support[1] - f.support[0]) / 100
    return 1e-4


def muntz_lhs(f: ParityFunction, s: complex, x_lo: Optional[float] = None, tol: float = 1e-12) -> complex:
    """int_0^inf A_f(x) x^{s-1} dx, for 0 < Re s < 1.

    [x_lo, 1]: eval_A by quadrature; [0, x_lo]: A_f treated as constant;
    [1, inf): int_1^inf f(u) u^{s-1} H(u) du + (int f)/(s-1), H(u) = sum_{n<=u} n^-s.
    """
    s = complex(s)
    x_lo = _sum_x_lo(f, x_lo)
    I = f.integral
    g = lambda x: eval_A(f, x) * np.exp((s - 1) * np.log(x))
    pts = []
    if f.support is not None:
        b, B = f.support
        nmax = int(B / x_lo) + 1
        n = np.arange(1, nmax + 1)
        pts = np.concatenate([c / n for c in np.concatenate([[b, B], f.breakpoints(b, B)])])
        if f.smoothness == "Cinf":
            # smooth: only resolve the growing oscillation near 0
            pts = pts[::max(1, nmax // 400)]
    pts = np.concatenate([np.asarray(pts, dtype=float), np.exp(_log_panels(x_lo, 1.0, s.imag))])
    if f.smoothness == "Cinf":
        mid = integrate_adaptive(g, (x_lo, 1.0), tol, points=pts).value
        head = complex(eval_A(f, x_lo)) * x_lo**s / s
    else:
        # A_f is smooth between the jump points: fixed rule per piece; below x_lo
        # A_f oscillates about its mean -f(0+)/2
        edges = np.unique(np.concatenate([[x_lo, 1.0], pts[(pts > x_lo) & (pts < 1.0)]]))
        mid = composite_gl(g, edges, 10)
        head = -0.5 * float(f(1e-300)) * x_lo**s / s
    if f.support is not None:
        lo, hi = max(1.0, f.support[0]), f.support[1]
    else:
        lo, hi = 1.0, 1.0
        while f.tail_bound(hi) > tol * 1e-2:
            hi *= 1.5
    if hi > lo:
        h = lambda u: f(u) * np.exp((s - 1) * np.log(u)) * _partial_zeta(s, u)
        brk = np.concatenate([np.arange(math.ceil(lo), math.floor(hi) + 1), f.breakpoints(lo, hi),
                              np.exp(_log_panels(lo, hi, s.imag))])
        upper = integrate_adaptive(h, (lo, hi), tol, points=brk).value
    else:
        upper = 0.0
    return head + mid + upper + I / (s - 1)


def muntz_identity(f: ParityFunction, sigma: float, tau_grid: Sequence[float], tol: float = 1e-6,
                   x_lo: Optional[float] = None) -> list[IdentityReport]:
    """int A_f(x) x^{s-1} dx = zeta(s) int f(x) x^{s-1} dx on Re s = sigma."""
    if not 0 < sigma < 1:
        raise ValueError("sigma must lie in (0, 1)")
    out = []
    for t in tau_grid:
        s = complex(sigma, t)
        lhs = muntz_lhs(f, s, x_lo)
        rhs = zeta(s).value * mellin_value(f, s, "left")
        out.append(make_report("muntz", lhs, rhs, tol, f=f.name, sigma=sigma, tau=float(t),
                               x_lo=_sum_x_lo(f, x_lo)))
    return out


def comuntz_lhs(f: ParityFunction, s: complex, x_hi: Optional[float] = None, tol: float = 1e-12) -> complex:
    """int_0^inf K(x) x^{-s} dx for 0 < Re s < 1.

    [0, 1]: int_0^1 f(v) v^-s H(1/v) dv - J/(1-s); [1, x_hi]: eval_K by
    quadrature; beyond x_hi K is treated as constant.
    """
    s = complex(s)
    J = f.integral_inv
    if f.support is None:
        raise ValueError("co-Muntz verifier needs compact support")
    b, B = f.support
    lo, hi = b, min(B, 1.0)
    low = 0.0
    if hi > lo:
        h = lambda v: f(v) * np.exp(-s * np.log(v)) * _partial_zeta(s, 1.0 / v)
        n = np.arange(1, int(1 / lo) + 2)
        brk = np.concatenate([1.0 / n, f.breakpoints(lo, hi), np.exp(_log_panels(lo, hi, s.imag))])
        low = integrate_adaptive(h, (lo, hi), tol, points=brk).value
    low -= J / (1 - s)
    if x_hi is None:
        x_hi = 100 / (1 / b - 1 / B) if f.smoothness == "Cinf" else 1e4
    g = lambda x: eval_K(f, x) * np.exp(-s * np.log(x))
    pts = np.concatenate([b * np.arange(1, int(x_hi / b) + 1), B * np.arange(1, int(x_hi / B) + 1)])
    if f.smoothness == "Cinf":
        pts = pts[:: max(1, pts.size // 800)]
    pts = np.concatenate([pts, np.exp(_log_panels(1.0, x_hi, s.imag))])
    mid = integrate_adaptive(g, (1.0, x_hi), tol, points=pts).value
    tail = -complex(eval_K(f, x_hi)) * x_hi ** (1 - s) / (1 - s)
    return low + mid + tail


def comuntz_identity(f: ParityFunction, sigma: float, tau_grid: Sequence[float], tol: float = 1e-6,
                     x_hi: Optional[float] = None) -> list[IdentityReport]:
    """int K(x) x^{-s} dx = zeta(s) int f(x) x^{-s} dx on Re s = sigma."""
    if not 0 < sigma < 1:
        raise ValueError("sigma must lie in (0, 1)")
    out = []
    for t in tau_grid:
        s = complex(sigma, t)
        lhs = comuntz_lhs(f, s, x_hi)
        rhs = zeta(s).value * mellin_value(f, s, "right")
        out.append(make_report("comuntz", lhs, rhs, tol, f=f.name, sigma=sigma, tau=float(t)))
    return out


def transform_function(f: ParityFunction, upper: Optional[float] = None) -> ParityFunction:
    """Numerical cosine transform of f as a ParityFunction (vectorized)."""
    if upper is None:
        upper = _decay_cutoff(f)
    return ParityFunction(
        name=f"cos({f.name})", parity="even", eval=lambda y: transform_many(f, y).reshape(np.shape(y)), is_L1=True, is_L2=True,
        tail_bound=lambda M, U=upper: 0.0 if M >= U else math.inf,
    )


def _decay_cutoff(f: ParityFunction, rel: float = 1e-13) -> float:
    """Smallest tried Y with |cosine transform| below rel * 2 int|f| on [Y, 2Y].

    The relative level sits just above the cancellation floor of the
    composite rule.
    """
    level = rel * 2 * abs(float(transform_many(f, [0.0])[0]))
    Y = 4.0
    for _ in range(40):
        ys = np.linspace(Y, 2 * Y, 257)
        if np.max(np.abs(transform_many(f, ys))) < level:
            return Y
        Y *= 1.5
    raise ValueError(f"{f.name}: cosine transform does not decay")


def functional_eq_defect(f: ParityFunction, tau_grid: Sequence[float], tol: float = 1e-8) -> list[IdentityReport]:
    """pi^{-s/2}G(s/2) M(f~)(s) = pi^{-(1-s)/2}G((1-s)/2) M(f)(1-s) on Re s = 1/2 (right Mellin)."""
    ft = transform_function(f)
    freq = f.support[1] if f.support is not None else 4.0
    s_all = 0.5 + 1j * np.asarray(tau_grid, dtype=float)
    mt = mellin_values(ft, s_all, "right", lower=1e-3, freq=freq)
    out = []
    for t, s, m in zip(tau_grid, s_all, mt):
        lhs = complex(_completion(s)) * m
        rhs = complex(_completion(1 - s)) * mellin_value(f, 1 - s, "right", lower=1e-3)
        out.append(make_report("functional_eq", lhs, rhs, tol, relative=True, f=f.name, tau=float(t)))
    return out


# ------------------------------------------------- distributional pairings


def _theta_pair(theta: ParityFunction, shift: float):
    """theta_c(u) = theta(u - c) on R and Theta_c(tau) = int theta_c(u) e^{-i tau u} du."""
    th = lambda u: theta(np.asarray(u) - shift)
    Th = lambda tau: np.exp(-1j * shift * np.asarray(tau)) * transform_many(theta, np.asarray(tau) / (2 * np.pi))
    return th, Th


def _tau_cut(Th, level: float = 1e-14) -> float:
    T = 4.0
    while np.max(np.abs(Th(np.linspace(T, 2 * T, 65)))) > level:
        T *= 1.5
        if T > 2e3:
            raise ValueError("Fourier transform of theta does not decay")
    return T


def _dirac_side(th, sigma: float) -> float:
    """sum_{n>=1} n^-sigma theta_c(-log n), summed until terms stay negligible."""
    total, n, quiet = 0.0, 1, 0
    while quiet < 200 and n < 10**7:
        term = n**-sigma * float(th(-math.log(n)))
        total += term
        quiet = quiet + 1 if abs(term) < 1e-18 and n > 3 else 0
        n += 1
    return total


def vp_zeta_pairing(theta: Optional[ParityFunction] = None, deltas: Sequence[float] = (0.1, 0.05, 0.025),
                    tol: float = 1e-5, shift: float = 0.0) -> IdentityReport:
    """lim_{delta->0} int_{|tau|>delta} zeta(1+i tau) Theta(tau) dtau/2pi
    = sum (1/n) theta(-log n) - (1/2) int theta, with Theta(tau) = int theta(u) e^{-i tau u} du.
    """
    theta = theta or builtin_function("gaussian")
    th, Th = _theta_pair(theta, shift)
    T = _tau_cut(Th)
    g = lambda tau: 2 * np.real(zeta_array(1 + 1j * tau) * Th(tau)) / (2 * np.pi)
    vals = [integrate_adaptive(g, (d, T), 1e-13, points=np.linspace(d, T, 64)).value for d in deltas]
    lhs, err = richardson_zero(deltas, vals)
    rhs = _dirac_side(th, 1.0) - theta.integral
    return make_report("vp_zeta", lhs, rhs, tol, theta=theta.name, shift=shift, deltas=list(deltas),
                       extrapolation_err=err)


def fourier_zeta_sigma(sigma: float, theta: Optional[ParityFunction] = None, tol: float = 1e-8,
                       shift: float = 0.0) -> IdentityReport:
    """int zeta(sigma+i tau) Theta(tau) dtau/2pi = sum n^-sigma theta(-log n) - int e^{(sigma-1)u} theta(u) du."""
    if not sigma < 1:
        raise ValueError("sigma must be < 1")
    if sigma <= 0:
        raise ValueError("implemented range is 0 < sigma < 1")
    theta = theta or builtin_function("gaussian")
    th, Th = _theta_pair(theta, shift)
    T = _tau_cut(Th)
    g = lambda tau: np.real(zeta_array(sigma + 1j * tau) * Th(tau)) / np.pi
    lhs = integrate_adaptive(g, (0.0, T), 1e-13, points=np.linspace(0, T, 64)).value
    L = 1.0
    while float(th(-L)) * math.exp((1 - sigma) * L) > 1e-18 or float(th(L)) > 1e-18:
        L *= 1.5
    e = lambda u: np.exp((sigma - 1) * u) * th(u)
    expo = integrate_adaptive(e, (-L + shift, L + shift), 1e-14).value
    rhs = _dirac_side(th, sigma) - expo
    return make_report("fourier_zeta", lhs, rhs, tol, theta=theta.name, sigma=sigma, shift=shift)


# ----------------------------------------------------------- L^2 Muntz


def _pairing_b(f: ParityFunction, phi: ParityFunction, upper: Optional[float] = None) -> float:
    """int f(x) K_phi(x) dx."""
    if f.support is not None:
        lo, hi = f.support
    else:
        lo, hi = 0.0, upper if upper is not None else 12.0
    pts = list(f.breakpoints(lo, hi))
    if phi.support is not None:
        b, B = phi.support
        pts += [b * n for n in range(1, int(hi / b) + 2)] + [B * n for n in range(1, int(hi / B) + 2)]
    g = lambda x: f(x) * eval_K(phi, x)
    return integrate_adaptive(g, (lo, hi), 1e-13, points=[p for p in pts if lo < p < hi]).value


def _G(f: ParityFunction, x: np.ndarray, nodes: int = 16) -> np.ndarray:
    """G(x) = int_0^inf f(x u) {u}/u du = int f(v) {v/x}/v dv, per x, with panels split at v = kx."""
    out = np.empty(x.size)
    if f.support is not None:
        lo, hi = f.support
    else:
        lo, hi = 0.0, 6.0
    for i, xi in enumerate(x):
        ks = np.arange(math.floor(lo / xi) + 1, math.ceil(hi / xi) + 1) * xi
        edges = np.unique(np.concatenate([[lo, hi], ks[(ks > lo) & (ks < hi)], np.linspace(lo, hi, 41),
                                          f.breakpoints(lo, hi)]))
        g = lambda v: f(v) * np.where(v > 0, (v / xi - np.floor(v / xi)) / np.where(v > 0, v, 1.0), 1.0 / xi)
        out[i] = composite_gl(g, edges, nodes)
    return out


def _pairing_c(f: ParityFunction, phi: ParityFunction) -> float:
    """-int G(x) (x phi(x))' dx, the derivative form moved onto phi."""
    if phi.support is None or phi.deriv is None:
        raise ValueError("test function needs compact support away from 0 and a derivative")
    b, B = phi.support
    d = lambda x: phi(x) + x * phi.deriv(x)
    brk = []
    if f.support is not None:
        lo, hi = f.support
        ks = np.arange(1, int(hi / b) + 2)
        brk = np.concatenate([lo / ks, hi / ks])
    edges = np.unique(np.concatenate([np.linspace(b, B, 161), [p for p in brk if b < p < B]]))
    return -composite_gl(lambda x: _G(f, x) * d(x), edges, 16)


def l2_muntz_D(f: ParityFunction, phi: ParityFunction, tol: float = 1e-6) -> IdentityReport:
    """<D_f, phi> via sum-against-f and via -int G (x phi)' dx."""
    lhs = _pairing_b(f, phi)
    rhs = _pairing_c(f, phi)
    return make_report("l2_muntz_D", lhs, rhs, tol, f=f.name, phi=phi.name)


def l2_muntz_symmetry(f: ParityFunction, phi: ParityFunction, tol: float = 1e-5) -> IdentityReport:
    """<D_f, phi> = <D_{f~}, phi(1/x)/x>, both via the sum pairing."""
    lhs = _pairing_b(f, phi)
    ft = transform_function(f)
    upper = ft.tail_bound and next(M for M in (2.0**k for k in range(1, 30)) if ft.tail_bound(M) == 0.0)
    iphi = phi.inverted
    g = lambda x: ft(x) * eval_K(iphi, x)
    pts = np.linspace(0.0, upper, int(upper / 0.05) + 1)
    rhs = composite_gl(g, pts, 16)
    return make_report("l2_muntz_symmetry", lhs, rhs, tol, f=f.name, phi=phi.name, upper=upper)


# -------------------------------------------------- fractional-part pair


def frac_part_rhs(v: float) -> float:
    """-{v}/v + int_v^inf {u}/u^2 du, using sum_{k>=1}(log(1+1/k) - 1/(k+1)) = 1 - gamma."""
    v = float(v)
    if v <= 0:
        raise ValueError("v must be positive")
    m = math.floor(v)
    frac = v - m
    if m == 0:
        head = -math.log(v)
        rest = 1 - EULER_GAMMA
    else:
        # int_v^{m+1} (u - m)/u^2 du
        head = math.log((m + 1) / v) - m * (1 / v - 1 / (m + 1))
        rest = 1 - EULER_GAMMA - sum(math.log1p(1 / k) - 1 / (k + 1) for k in range(1, m + 1))
    return -frac / v + head + rest


def frac_part_pair(v_samples: Sequence[float], tol: float = 1e-3,
                   eps_ladder: Sequence[float] = (0.2, 0.1, 0.05, 0.025)) -> list[IdentityReport]:
    """Abel-regularized cosine transform of {u}/u against its closed form."""
    f = builtin_function("fracpart_over_x")
    out = []
    for v in v_samples:
        r = abel_transform(f, v, eps_ladder)
        out.append(make_report("frac_part_pair", r.value, frac_part_rhs(v), tol, v=float(v),
                               eps_ladder=list(eps_ladder), abel_err=r.err_estimate))
    return out


# ------------------------------------------------------------- polar part


def _xi_regular(s: np.ndarray) -> np.ndarray:
    return _completion(s) * zeta_array(s) + 1 / s - 1 / (s - 1)


def zeta_polar_part_check(tol: float = 1e-8, radii: Sequence[float] = (0.1, 0.05), points: int = 64
                          ) -> list[IdentityReport]:
    """pi^{-s/2}G(s/2)zeta(s) has polar part -1/s + 1/(s-1).

    Per center (0 and 1): the circle mean of the regularized function is
    compared across radii (radius independence), and the residue of the
    completed zeta from a trapezoid contour integral is compared with -1 or +1.
    """
    out = []
    th = 2 * np.pi * np.arange(points) / points
    for c, res in ((0.0, -1.0), (1.0, 1.0)):
        means = []
        for r in radii:
            s = c + r * np.exp(1j * th)
            means.append(np.mean(_xi_regular(s)))
        out.append(make_report("polar_regular", means[0], means[1], tol, center=c, radii=list(radii)))
        r = radii[0]
        s = c + r * np.exp(1j * th)
        residue = np.mean(_completion(s) * zeta_array(s) * (s - c))
        out.append(make_report("polar_residue", residue, res, tol, center=c, radius=r))
    return out
