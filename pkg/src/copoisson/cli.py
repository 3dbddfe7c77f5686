"""Command-line front end.

    copoisson-cli [--format csv|json] [--config FILE] <command> ...

Exit status is 0 when every report passes, 1 when one fails (named on
stderr) or a verifier rejects its input, 2 on usage errors.  A key=value
file given by --config or COPOISSON_CONFIG may set quad.tol (default
tolerance), series.nmax (cap on series terms), zero.grid_dt and
abel.ladder.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import copoisson as cp
from . import gallery, mellin, sonine
from .funcspace import DivergenceError, builtin_function, parse_function_spec
from .quad import QuadratureError
from .reports import IdentityReport, fmt, make_report, reports_to_csv, reports_to_json

__all__ = ["RunConfig", "load_overrides", "build_parser", "dispatch", "main"]

CONFIG_KEYS = ("quad.tol", "series.nmax", "zero.grid_dt", "abel.ladder")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    args: argparse.Namespace
    output: str = "csv"
    overrides: dict = field(default_factory=dict)

    def tol(self, default: float) -> float:
        t = self.args.tol if getattr(self.args, "tol", None) is not None else self.overrides.get("quad.tol", default)
        if not t > 0:
            raise ConfigError("tolerances must be positive")
        return float(t)


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a complex number like 0.5+14i, got {text!r}") from exc


def _function(text: str):
    try:
        return parse_function_spec(text)
    except (ValueError, KeyError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def load_overrides(path: Optional[str]) -> dict:
    """Parse a key=value file; blank lines and # comments are skipped."""
    if not path:
        return {}
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value")
            key, val = (p.strip() for p in line.split("=", 1))
            if key not in CONFIG_KEYS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                if key == "abel.ladder":
                    ladder = [float(v) for v in val.split(",")]
                    if len(ladder) < 3 or any(e <= 0 for e in ladder) or any(b >= a for a, b in zip(ladder, ladder[1:])):
                        raise ConfigError(f"{path}:{lineno}: abel.ladder must be >= 3 decreasing positive values")
                    out[key] = tuple(ladder)
                elif key == "series.nmax":
                    out[key] = int(float(val))
                else:
                    out[key] = float(val)
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: bad value for {key}") from exc
            if key != "abel.ladder" and not out[key] > 0:
                raise ConfigError(f"{path}:{lineno}: {key} must be positive")
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="copoisson-cli", description="Numerical co-Poisson and Mellin identity checks.")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--config", help="key=value overrides (default: $COPOISSON_CONFIG)")
    top = p.add_subparsers(dest="group", required=True)

    def tol_arg(sp):
        sp.add_argument("--tol", type=float)

    g = top.add_parser("copoisson", help="co-Poisson verifiers").add_subparsers(dest="sub", required=True)
    sp = g.add_parser("check", help="pointwise co-Poisson identity on a xi grid")
    sp.add_argument("--f", type=_function, default="bump:1,2")
    sp.add_argument("--xi", type=_floats, required=True)
    sp.add_argument("--lambda", dest="lam", type=float, default=200.0)
    tol_arg(sp)
    sp = g.add_parser("dirichlet", help="Dirichlet value of K at xi")
    sp.add_argument("--f", type=_function, default="bump:1,2")
    sp.add_argument("--xi", type=float, required=True)
    sp.add_argument("--delta", type=float, default=0.2)
    sp.add_argument("--lambdas", type=_floats, default=[250, 500, 1000, 2000])
    tol_arg(sp)
    sp = g.add_parser("kahane", help="Kahane pair transform and support zeros")
    sp.add_argument("--b", type=float, default=0.25)
    sp.add_argument("--y", type=_floats, default=[0.0, 0.15, 0.7, 1.1, 2.2])
    tol_arg(sp)
    sp = g.add_parser("duffin", help="alternating odd co-sum pair")
    sp.add_argument("--f", type=_function, default="oddbump:1,2")
    sp.add_argument("--y", type=_floats, default=[0.4, 0.7, 1.1])
    tol_arg(sp)

    g = top.add_parser("muntz", help="Mellin-side identities").add_subparsers(dest="sub", required=True)
    for name in ("check", "comuntz"):
        sp = g.add_parser(name)
        sp.add_argument("--f", type=_function, default="bump:1,2")
        sp.add_argument("--sigma", type=float, default=0.5)
        sp.add_argument("--tau", type=_floats, default=[0.0, 5.0, 13.0])
        tol_arg(sp)
    sp = g.add_parser("vp", help="principal-value pairing of zeta(1+i tau)")
    sp.add_argument("--theta", type=_function, default="gaussian")
    sp.add_argument("--shift", type=float, default=0.0)
    tol_arg(sp)
    sp = g.add_parser("l2", help="two forms of the L^2 pairing and its f <-> f~ symmetry")
    sp.add_argument("--f", type=_function, default="bump:1,2")
    sp.add_argument("--phi", type=_function, default="bump:0.5,3")
    tol_arg(sp)

    for name in ("zeta", "chi"):
        sp = top.add_parser(name)
        sp.add_argument("--s", type=_complex, action="append", required=True)

    g = top.add_parser("sonine").add_subparsers(dest="sub", required=True)
    sp = g.add_parser("solve")
    sp.add_argument("--a", type=float, default=1.0)
    sp.add_argument("--sign", choices=("plus", "minus"), default="plus")
    sp.add_argument("--nodes", type=int, default=64)
    sp.add_argument("--zeros-upto", dest="zeros_upto", type=float)

    g = top.add_parser("gallery").add_subparsers(dest="sub", required=True)
    sp = g.add_parser("verify")
    sp.add_argument("--name", choices=gallery.FAMILIES, required=True)
    grp = sp.add_mutually_exclusive_group()
    grp.add_argument("--a", type=float, default=0.5)
    grp.add_argument("--N", type=int)
    sp.add_argument("--y", type=_floats)
    tol_arg(sp)

    sp = top.add_parser("fracpair", help="Abel transform of {u}/u")
    sp.add_argument("--v", type=_floats, default=[0.3, 0.7, 1.5, 2.4])
    tol_arg(sp)
    return p


# ---------------------------------------------------------------- runners


def _run_copoisson(cfg: RunConfig):
    a = cfg.args
    if a.sub == "check":
        return cp.pointwise_copoisson(a.f, a.xi, lam=a.lam, tol=cfg.tol(1e-3))
    if a.sub == "dirichlet":
        val = cp.dirichlet_point_value(a.f, a.xi, delta=a.delta, lams=a.lambdas, tol=cfg.tol(1e-6))
        return {"f": a.f.name, "xi": a.xi, "value": val}
    if a.sub == "kahane":
        g = builtin_function("cbump", (a.b,))
        return cp.kahane_pair(g, g, a.b, y_samples=a.y, tol=cfg.tol(1e-8))
    return cp.duffin_pair(a.f, a.y, tol=cfg.tol(1e-8))


def _run_muntz(cfg: RunConfig):
    a = cfg.args
    if a.sub == "check":
        return mellin.muntz_identity(a.f, a.sigma, a.tau, tol=cfg.tol(1e-6))
    if a.sub == "comuntz":
        return mellin.comuntz_identity(a.f, a.sigma, a.tau, tol=cfg.tol(1e-6))
    if a.sub == "vp":
        return [mellin.vp_zeta_pairing(a.theta, tol=cfg.tol(1e-5), shift=a.shift)]
    return [mellin.l2_muntz_D(a.f, a.phi, tol=cfg.tol(1e-6)), mellin.l2_muntz_symmetry(a.f, a.phi, tol=cfg.tol(1e-5))]


def _run_values(cfg: RunConfig):
    rows = []
    for s in cfg.args.s:
        if cfg.args.group == "zeta":
            z = mellin.zeta(s)
            rows.append({"s_re": s.real, "s_im": s.imag, "re": z.value.real, "im": z.value.imag,
                         "err": z.err_estimate, "N": z.N_used})
        else:
            v = complex(mellin.chi(s))
            rows.append({"s_re": s.real, "s_im": s.imag, "re": v.real, "im": v.imag})
    return rows


def _run_sonine(cfg: RunConfig):
    a = cfg.args
    sol = sonine.solve_phi(a.a, a.sign, a.nodes)
    out = {"a": sol.a, "sign": sol.sign, "nodes": int(sol.nodes.size), "residual": sol.residual_inf,
           "op_norm": sol.op_norm_estimate}
    if a.zeros_upto is not None:
        zl = sonine.critical_line_zeros(sol, a.zeros_upto, dt=cfg.overrides.get("zero.grid_dt", 0.05))
        out.update(zeros=[{"t": float(t), "residual": float(r)} for t, r in zip(zl.zeros, zl.residuals)],
                   count=zl.count_T, ratio=zl.asymptotic_ratio)
    return out


def _gallery_reports(g: gallery.GalleryFunction, y: Optional[Sequence[float]], tol: float,
                     ladder: Sequence[float]) -> list[IdentityReport]:
    sup = gallery.verify_support(g)
    out = [make_report("gallery_support", float(np.max(np.abs(sup.values))), 0.0, 0.0,
                       family=g.family, params=list(g.params), points=int(sup.grid.size))]
    if y is None:
        y = [0.1, 0.3, 0.5] if g.family == "qn" else [0.8, 1.3, 2.7]
    out += gallery.verify_reciprocity(g, y, tol=tol, eps_ladder=ladder)
    Xs = (1e2, 1e3, 1e4)
    I = gallery.l2_truncation(g, Xs)
    # Cauchy: the last increment must not exceed the previous one
    out.append(make_report("gallery_l2_cauchy", I[2], I[1], abs(I[1] - I[0]), family=g.family,
                           params=list(g.params), X=list(Xs), integrals=I))
    return out


def _run_gallery(cfg: RunConfig):
    a = cfg.args
    if a.name == "qn":
        g = gallery.gallery_function("qn", N=1 if a.N is None else a.N)
    else:
        g = gallery.gallery_function(a.name, a=a.a)
    ladder = cfg.overrides.get("abel.ladder", (0.2, 0.1, 0.05, 0.025))
    return _gallery_reports(g, a.y, cfg.tol(5e-3), ladder)


def _run_fracpair(cfg: RunConfig):
    ladder = cfg.overrides.get("abel.ladder", (0.2, 0.1, 0.05, 0.025))
    return mellin.frac_part_pair(cfg.args.v, tol=cfg.tol(1e-3), eps_ladder=ladder)


_RUNNERS = {
    "copoisson": _run_copoisson,
    "muntz": _run_muntz,
    "zeta": _run_values,
    "chi": _run_values,
    "sonine": _run_sonine,
    "gallery": _run_gallery,
    "fracpair": _run_fracpair,
}


def _emit_rows(rows, output: str, out) -> None:
    if isinstance(rows, dict):
        out.write(json.dumps(rows, sort_keys=True, indent=None if output == "csv" else 2, default=float) + "\n")
        return
    if output == "json":
        out.write(json.dumps(rows, sort_keys=True, indent=2) + "\n")
        return
    keys = list(rows[0])
    out.write(",".join(keys) + "\n")
    for r in rows:
        out.write(",".join(fmt(r[k]) for k in keys) + "\n")


def dispatch(cfg: RunConfig, out=None, err=None) -> int:
    """Run one command; returns the exit status."""
    out = out or sys.stdout
    err = err or sys.stderr
    saved = cp._MAX_TERMS
    if "series.nmax" in cfg.overrides:
        cp._MAX_TERMS = float(cfg.overrides["series.nmax"])
    try:
        result = _RUNNERS[cfg.command](cfg)
    except ConfigError as exc:
        err.write(f"usage error: {exc}\n")
        return 2
    except (cp.HypothesisError, cp.NotDirichletPoint, DivergenceError, QuadratureError,
            ArithmeticError, ValueError) as exc:
        err.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1
    finally:
        cp._MAX_TERMS = saved
    if isinstance(result, list) and result and isinstance(result[0], IdentityReport):
        out.write(reports_to_json(result) + "\n" if cfg.output == "json" else reports_to_csv(result))
        failed = [r for r in result if not r.passed]
        if failed:
            r = failed[0]
            err.write(f"FAIL {r.kind} {json.dumps(r.metadata, sort_keys=True)} defect={fmt(r.defect)} tol={fmt(r.tolerance)}\n")
            return 1
        return 0
    _emit_rows(result, cfg.output, out)
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        overrides = load_overrides(args.config or os.environ.get("COPOISSON_CONFIG"))
    except (ConfigError, OSError) as exc:
        parser.error(str(exc))
    cfg = RunConfig(command=args.group, args=args, output=args.format, overrides=overrides)
    if getattr(args, "tol", None) is not None and not args.tol > 0:
        parser.error("--tol must be positive")
    return dispatch(cfg)


if __name__ == "__main__":
    sys.exit(main())
