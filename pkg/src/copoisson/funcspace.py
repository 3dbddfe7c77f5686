"""Test-function universe: parity functions on (0, inf) with metadata.

Every function is vectorized over numpy arrays.  Values at negative
arguments follow the declared parity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional, Sequence

import numpy as np

__all__ = [
    "ParityFunction",
    "GridFunction",
    "DivergenceError",
    "builtin_function",
    "parse_function_spec",
    "condition_c_norm",
    "inversion",
    "dilate",
    "cosine_pair",
    "BUILTIN_NAMES",
]

EULER_GAMMA = 0.57721566490153286061


class DivergenceError(ArithmeticError):
    """Raised when an integral is detected to diverge."""


def _no_breaks(lo: float, hi: float) -> np.ndarray:
    return np.empty(0)


@dataclass(frozen=True, eq=False)
class ParityFunction:
    """Even or odd real function given by its values on (0, inf).

    ``tail_bound(M)`` bounds the integral of a decreasing majorant of |f|
    over [M, inf); ``inv_tail_bound`` does the same for f(1/u)/u.
    ``breaks(lo, hi)`` lists points in [lo, hi] where f is not smooth.
    """

    name: str
    parity: str
    eval: Callable[[np.ndarray], np.ndarray]
    support: Optional[tuple[float, float]] = None
    smoothness: str = "Cinf"
    satisfies_C: bool = False
    is_L1: bool = False
    is_L2: bool = False
    known_integrals: Optional[tuple[float, float]] = None
    tail_majorant: Optional[Callable[[np.ndarray], np.ndarray]] = None
    tail_bound: Optional[Callable[[float], float]] = None
    inv_tail_bound: Optional[Callable[[float], float]] = None
    breaks: Callable[[float, float], np.ndarray] = _no_breaks
    params: tuple = field(default_factory=tuple)
    deriv: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self):
        if self.parity not in ("even", "odd"):
            raise ValueError(f"parity must be 'even' or 'odd', got {self.parity!r}")
        if self.support is not None and not (0 < self.support[0] < self.support[1]):
            raise ValueError("support must satisfy 0 < b < B")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        ax = np.abs(x)
        v = np.asarray(self.eval(ax), dtype=float)
        if self.support is not None:
            b, B = self.support
            v = np.where((ax >= b) & (ax <= B), v, 0.0)
        if self.parity == "odd":
            v = np.where(x < 0, -v, v)
        return v if v.ndim else float(v)

    @property
    def compact(self) -> bool:
        return self.support is not None

    def breakpoints(self, lo: float, hi: float) -> np.ndarray:
        pts = list(self.breaks(lo, hi))
        if self.support is not None:
            pts += [p for p in self.support if lo < p < hi]
        return np.unique(np.asarray(pts, dtype=float))

    @cached_property
    def integral(self) -> float:
        """int_0^inf f(u) du, from metadata or quadrature."""
        if self.known_integrals is not None:
            return self.known_integrals[0]
        from .quad import integrate_half_line

        return integrate_half_line(self)

    @cached_property
    def integral_inv(self) -> float:
        """int_0^inf f(1/u)/u du, equal to int_0^inf f(v)/v dv."""
        if self.known_integrals is not None:
            return self.known_integrals[1]
        from .quad import integrate_half_line

        return integrate_half_line(self, weight=lambda u: 1.0 / u)

    @property
    def integrals(self) -> tuple[float, float]:
        return (self.integral, self.integral_inv)

    @cached_property
    def inverted(self) -> "ParityFunction":
        """f(1/x)/x, cached."""
        return inversion(self)


@dataclass(frozen=True)
class GridFunction:
    """Samples of a real function on a strictly increasing grid."""

    grid: np.ndarray
    values: np.ndarray
    parity: str = "none"

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if g.ndim != 1 or g.shape != v.shape:
            raise ValueError("grid and values must be 1-d arrays of equal length")
        if np.any(np.diff(g) <= 0):
            raise ValueError("grid must be strictly increasing")
        if not np.all(np.isfinite(v)):
            raise ValueError("values must be finite")
        if self.parity not in ("even", "odd", "none"):
            raise ValueError("bad parity")
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "values", v)

    @classmethod
    def sample(cls, fn: Callable, grid: Sequence[float], parity: str = "none") -> "GridFunction":
        g = np.asarray(grid, dtype=float)
        return cls(g, np.asarray(fn(g), dtype=float), parity)

    def __call__(self, x):
        """Piecewise-linear interpolation, extended by parity when declared."""
        x = np.asarray(x, dtype=float)
        if self.parity == "none":
            return np.interp(x, self.grid, self.values)
        v = np.interp(np.abs(x), self.grid, self.values)
        return np.where(x < 0, -v, v) if self.parity == "odd" else v


# ---------------------------------------------------------------- builtins


def _bump_eval(b: float, B: float):
    c = 4.0 / (B - b) ** 2

    def f(x):
        x = np.asarray(x, dtype=float)
        inside = (x > b) & (x < B)
        d = np.where(inside, (x - b) * (B - x), 1.0)
        with np.errstate(over="ignore", divide="ignore"):
            return np.where(inside, np.exp(c - 1.0 / d), 0.0)

    return f


def _bump_deriv(b: float, B: float):
    f = _bump_eval(b, B)

    def df(x):
        x = np.asarray(x, dtype=float)
        inside = (x > b) & (x < B)
        q = np.where(inside, (x - b) * (B - x), 1.0)
        return np.where(inside, f(x) * (B + b - 2 * x) / (q * q), 0.0)

    return df


def _cbump_eval(b: float):
    def f(x):
        x = np.asarray(x, dtype=float)
        inside = np.abs(x) < b
        d = np.where(inside, b * b - x * x, 1.0)
        with np.errstate(over="ignore", divide="ignore"):
            return np.where(inside, np.exp(1.0 / (b * b) - 1.0 / d), 0.0)

    return f


def _integers_in(lo: float, hi: float) -> np.ndarray:
    return np.arange(math.ceil(lo), math.floor(hi) + 1, dtype=float)


def _fracpart_over_x(x):
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(x > 0, (x - np.floor(x)) / np.where(x > 0, x, 1.0), 1.0)


def _gauss_tail(M: float) -> float:
    M = max(M, 1e-300)
    return math.exp(-math.pi * M * M) / (2 * math.pi * M) if M > 0.5 else 0.5


def _plt_eval(x):
    x = np.asarray(x, dtype=float)
    return x * x * np.log1p(x) / (1 + x) ** 6


def _plt_majorant(x):
    x = np.asarray(x, dtype=float)
    return (1 + np.log1p(x)) / (1 + x) ** 4


def _plt_tail(M: float) -> float:
    W = 1.0 + max(M, 0.0)
    return (1 + math.log(W)) / (3 * W**3) + 1 / (9 * W**3)


def _plt_inv_tail(M: float) -> float:
    # f(1/u)/u <= u^-4
    return math.inf if M <= 0 else 1.0 / (3 * M**3)


def _sinc2(x):
    return np.sinc(np.asarray(x, dtype=float)) ** 2


def _check_interval(params: Sequence[float]) -> tuple[float, float]:
    if len(params) != 2:
        raise ValueError("expected two parameters b,B")
    b, B = float(params[0]), float(params[1])
    if not (0 < b < B):
        raise ValueError(f"need 0 < b < B, got b={b}, B={B}")
    return b, B


BUILTIN_NAMES = (
    "gaussian",
    "bump",
    "indicator",
    "triangle",
    "fracpart_over_x",
    "poly_log_tail",
    "cbump",
    "xgaussian",
    "x2gaussian",
    "tent",
    "fejer",
)


def builtin_function(name: str, params: Sequence[float] = (), parity: Optional[str] = None) -> ParityFunction:
    """Build one of the named test functions.

    ``parity`` overrides the default parity for functions supported away
    from the origin (bump, indicator, triangle).
    """
    params = tuple(float(p) for p in params)
    if name == "gaussian":
        return ParityFunction(
            name="gaussian", parity="even", eval=lambda x: np.exp(-np.pi * np.asarray(x) ** 2),
            satisfies_C=False, is_L1=True, is_L2=True,
            tail_majorant=lambda x: np.exp(-np.pi * np.asarray(x) ** 2), tail_bound=_gauss_tail,
            deriv=lambda x: -2 * np.pi * np.asarray(x) * np.exp(-np.pi * np.asarray(x) ** 2),
        )
    if name == "xgaussian":
        return ParityFunction(
            name="xgaussian", parity="odd", eval=lambda x: np.asarray(x) * np.exp(-np.pi * np.asarray(x) ** 2),
            satisfies_C=True, is_L1=True, is_L2=True,
            known_integrals=(1 / (2 * math.pi), 0.5), tail_bound=lambda M: (M + 1) * _gauss_tail(M),
        )
    if name == "x2gaussian":
        return ParityFunction(
            name="x2gaussian", parity="even", eval=lambda x: np.asarray(x) ** 2 * np.exp(-np.pi * np.asarray(x) ** 2),
            satisfies_C=True, is_L1=True, is_L2=True,
            known_integrals=(1 / (4 * math.pi), 1 / (2 * math.pi)),
            tail_bound=lambda M: (M * M + 1) * _gauss_tail(M),
            # f(1/u)/u <= u^-3
            inv_tail_bound=lambda M: math.inf if M <= 0 else 1 / (2 * M * M),
        )
    if name in ("bump", "indicator", "triangle"):
        b, B = _check_interval(params)
        par = parity or "even"
        if name == "bump":
            return ParityFunction(
                name=name, parity=par, eval=_bump_eval(b, B), support=(b, B), smoothness="Cinf",
                satisfies_C=True, is_L1=True, is_L2=True, params=(b, B), deriv=_bump_deriv(b, B),
            )
        if name == "indicator":
            return ParityFunction(
                name=name, parity=par,
                eval=lambda x: ((np.asarray(x) >= b) & (np.asarray(x) < B)).astype(float),
                support=(b, B), smoothness="BV", satisfies_C=True, is_L1=True, is_L2=True,
                known_integrals=(B - b, math.log(B / b)), params=(b, B),
            )
        m, h = 0.5 * (b + B), 0.5 * (B - b)
        return ParityFunction(
            name=name, parity=par,
            eval=lambda x: np.clip(1 - np.abs(np.asarray(x) - m) / h, 0.0, None),
            support=(b, B), smoothness="BV", satisfies_C=True, is_L1=True, is_L2=True,
            known_integrals=(h, (B * math.log(B / m) - b * math.log(m / b)) / h),
            breaks=lambda lo, hi: np.array([m]) if lo < m < hi else np.empty(0), params=(b, B),
        )
    if name == "cbump":
        if len(params) != 1 or params[0] <= 0:
            raise ValueError("cbump takes one positive parameter b")
        b = params[0]
        return ParityFunction(
            name=name, parity="even", eval=_cbump_eval(b), smoothness="Cinf",
            is_L1=True, is_L2=True, tail_bound=lambda M, b=b: 0.0 if M >= b else math.inf,
            breaks=lambda lo, hi, b=b: np.array([b]) if lo < b < hi else np.empty(0), params=(b,),
        )
    if name == "fracpart_over_x":
        return ParityFunction(
            name=name, parity="even", eval=_fracpart_over_x, smoothness="BV",
            satisfies_C=False, is_L1=False, is_L2=True, breaks=_integers_in,
        )
    if name == "poly_log_tail":
        return ParityFunction(
            name=name, parity="even", eval=_plt_eval, smoothness="Cinf",
            satisfies_C=True, is_L1=True, is_L2=True,
            tail_majorant=_plt_majorant, tail_bound=_plt_tail, inv_tail_bound=_plt_inv_tail,
        )
    if name == "tent":
        return ParityFunction(
            name=name, parity="even", eval=lambda x: np.clip(1 - np.abs(np.asarray(x)), 0.0, None),
            smoothness="BV", is_L1=True, is_L2=True, known_integrals=(0.5, math.inf),
            tail_bound=lambda M: 0.0 if M >= 1 else math.inf,
            breaks=lambda lo, hi: np.array([1.0]) if lo < 1 < hi else np.empty(0),
        )
    if name == "fejer":
        return ParityFunction(
            name=name, parity="even", eval=_sinc2, smoothness="Cinf", is_L1=True, is_L2=True,
            known_integrals=(0.5, math.inf),
            tail_majorant=lambda x: np.minimum(1.0, 1 / (np.pi * np.asarray(x)) ** 2),
            tail_bound=lambda M: 1.0 / (math.pi**2 * M) if M > 1 / math.pi else math.inf,
        )
    raise ValueError(f"unknown function name {name!r}")


def parse_function_spec(spec: str) -> ParityFunction:
    """Parse ``"name"`` or ``"name:p1,p2"``, with an optional ``odd`` prefix (``oddbump:1,2``)."""
    name, _, rest = spec.strip().partition(":")
    params = [float(p) for p in rest.split(",") if p.strip()] if rest else []
    parity = None
    if name.startswith("odd") and name[3:] in ("bump", "indicator", "triangle"):
        name, parity = name[3:], "odd"
    return builtin_function(name, params, parity=parity)


# ------------------------------------------------------------- transforms


def inversion(f: ParityFunction) -> ParityFunction:
    """The map f(x) -> f(1/x)/x, which exchanges F and K."""

    def g(x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            safe = np.where(x > 0, x, 1.0)
            return np.where(x > 0, np.asarray(f.eval(1.0 / safe)) / safe, 0.0)

    support = None if f.support is None else (1.0 / f.support[1], 1.0 / f.support[0])
    ki = None if f.known_integrals is None else f.known_integrals[::-1]
    return ParityFunction(
        name=f"inv({f.name})", parity=f.parity, eval=g, support=support, smoothness=f.smoothness,
        satisfies_C=f.satisfies_C, is_L1=f.satisfies_C, is_L2=f.is_L2, known_integrals=ki,
        tail_bound=f.inv_tail_bound, inv_tail_bound=f.tail_bound,
        breaks=lambda lo, hi: np.sort(1.0 / f.breaks(1.0 / hi, 1.0 / lo)) if lo > 0 else np.empty(0),
    )


def dilate(f: ParityFunction, lam: float) -> ParityFunction:
    """f_lam(t) = f(t/lam)/lam."""
    if lam <= 0:
        raise ValueError("lam must be positive")
    support = None if f.support is None else (lam * f.support[0], lam * f.support[1])
    ki = None if f.known_integrals is None else (f.known_integrals[0], f.known_integrals[1] / lam)
    return ParityFunction(
        name=f"dil({f.name},{lam})", parity=f.parity,
        eval=lambda x: np.asarray(f.eval(np.asarray(x) / lam)) / lam, support=support,
        smoothness=f.smoothness, satisfies_C=f.satisfies_C, is_L1=f.is_L1, is_L2=f.is_L2,
        known_integrals=ki,
        breaks=lambda lo, hi: lam * f.breaks(lo / lam, hi / lam),
    )


def cosine_pair(name: str) -> tuple[ParityFunction, ParityFunction]:
    """Closed-form cosine-transform pairs (phi, psi)."""
    if name == "gaussian":
        g = builtin_function("gaussian")
        return g, g
    if name == "fejer":
        return builtin_function("tent"), builtin_function("fejer")
    raise ValueError(f"unknown pair {name!r}")


def condition_c_norm(f: ParityFunction, tol: float = 1e-9, cap: float = 1e6) -> float:
    """Integral of |f(x)| (1 + 1/x) over (0, inf), or DivergenceError.

    The half line is cut into dyadic pieces around 1; divergence is
    declared when the pieces stop decaying or the partial sum passes ``cap``.
    """
    from .quad import integrate_adaptive

    if tol <= 0:
        raise ValueError("tol must be positive")

    def piece(lo, hi):
        g = lambda x: np.abs(f(x)) * (1 + 1 / x)
        pts = f.breakpoints(lo, hi)
        if pts.size > 4000:
            raise DivergenceError(f"{f.name}: too many breakpoints to resolve on [{lo}, {hi}]")
        return integrate_adaptive(g, (lo, hi), tol * 1e-3, points=pts).value

    total = 0.0
    for direction in (-1, 1):
        hist = []
        for k in range(200):
            lo, hi = (2.0**k, 2.0 ** (k + 1)) if direction > 0 else (2.0 ** (-k - 1), 2.0**-k)
            if f.support is not None and (hi <= f.support[0] or lo >= f.support[1]):
                if (direction > 0 and lo >= f.support[1]) or (direction < 0 and hi <= f.support[0]):
                    break
                hist.append(0.0)
                continue
            p = piece(lo, hi)
            total += p
            hist.append(p)
            if total > cap:
                raise DivergenceError(f"{f.name}: partial integral exceeds cap {cap}")
            if p < tol * 1e-3 and k > 3:
                break
            if len(hist) >= 8 and all(h > 0.5 * hist[-8] for h in hist[-4:]) and hist[-1] > tol:
                raise DivergenceError(f"{f.name}: dyadic increments do not decay")
        else:
            raise DivergenceError(f"{f.name}: no convergence within 200 dyadic pieces")
    return total
