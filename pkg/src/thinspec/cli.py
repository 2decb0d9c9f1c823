"""Command-line front end.

    thinspec expand   --example disk --order 6
    thinspec validate --example lemniscate --eps 0.2,0.5,1.0
    thinspec gap      --example bean --eps 0.1 --oracle
    thinspec examples

Exit codes: 0 success, 2 bad input or inadmissible geometry, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

from scipy.sparse.linalg import ArpackError

from . import asymptotics, registry
from .exprjet import JetDomainError, OrderCapError, ParseError
from .geometry import DomainSpec, GeometryError, max_data
from .oracle import OracleError, OracleParams, OracleRefusal, solve_many
from .oscillator import GridTooSmallError, SolvabilityError
from .recurrence import RepresentationError

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3


class InputError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    h_plus: str | None
    h_minus: str | None
    example: str | None
    order: int
    n: int
    m: int
    eps: tuple
    nx: int
    ny: int | None
    fmt: str
    out: str | None
    oracle: bool
    series: str

    @classmethod
    def from_args(cls, a: argparse.Namespace) -> "RunConfig":
        has_expr = a.hplus is not None or a.hminus is not None
        if a.command != "examples":
            if has_expr == (a.example is not None):
                raise InputError("give either --example or both --hplus and --hminus")
            if has_expr and (a.hplus is None or a.hminus is None):
                raise InputError("--hplus and --hminus must be given together")
        eps = tuple(_parse_eps(a.eps)) if a.eps else ()
        return cls(
            command=a.command, h_plus=a.hplus, h_minus=a.hminus, example=a.example,
            order=a.order, n=a.n, m=a.m, eps=eps, nx=a.nx, ny=a.ny, fmt=a.format,
            out=a.out, oracle=a.oracle, series=a.series,
        )

    def domain(self) -> DomainSpec:
        if self.example is not None:
            return registry.get(self.example).domain
        return DomainSpec.from_strings(self.h_plus, self.h_minus)


def _parse_eps(text: str) -> list:
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise InputError(f"cannot read eps list {text!r}") from None
    if not vals or any(not (v > 0) for v in vals):
        raise InputError("eps values must be positive")
    return vals


def fmt_float(v):
    """Round to 12 significant digits; keeps JSON output stable across platforms."""
    if v is None:
        return None
    v = float(v)
    if not math.isfinite(v):
        return None
    r = float(f"{v:.12g}")
    return 0.0 if r == 0 else r


def _rounded(obj):
    if isinstance(obj, float):
        return fmt_float(obj)
    if isinstance(obj, dict):
        return {k: _rounded(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_rounded(v) for v in obj]
    return obj


def _emit(cfg: RunConfig, payload: dict, header: list, rows: list) -> None:
    if cfg.fmt == "json":
        text = json.dumps(_rounded(payload), indent=2) + "\n"
    else:
        buf = io.StringIO()
        if cfg.fmt == "csv":
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(header)
            for r in rows:
                w.writerow([_cell(v) for v in r])
        else:  # whitespace-separated columns for plotting tools
            buf.write("# " + " ".join(header) + "\n")
            for r in rows:
                buf.write(" ".join(_cell(v) for v in r) + "\n")
        text = buf.getvalue()
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cell(v):
    if isinstance(v, float):
        return repr(fmt_float(v))
    return str(v)


# --------------------------------------------------------------------------
# Commands


def _expansion(cfg: RunConfig, md):
    if cfg.series == "closed":
        return asymptotics.closed_expansion(md, cfg.order, cfg.n, cfg.m)
    return asymptotics.expand(md, cfg.order, cfg.n, cfg.m)


def cmd_expand(cfg: RunConfig) -> int:
    if cfg.order % 2:
        print(f"warning: odd order {cfg.order}; odd coefficients vanish", file=sys.stderr)
    d = cfg.domain()
    md = max_data(d, max(cfg.order + 2, 8))
    e = _expansion(cfg, md)
    nd = max(cfg.order, 2 * md.k + 2) + 1
    payload = {
        "xbar": md.xbar,
        "k": md.k,
        "H_derivs": list(md.H[:nd]),
        "h_derivs": list(md.h[:nd]),
        "theta": md.theta if md.k == 1 else None,
        "coeffs": e.as_dict(),
        "eta_exponent": e.alpha,
    }
    rows = [(int(k), v) for k, v in e.as_dict().items()]
    _emit(cfg, payload, ["index", "coefficient"], rows)
    return EXIT_OK


def cmd_validate(cfg: RunConfig) -> int:
    if not cfg.eps:
        raise InputError("validate needs --eps")
    d = cfg.domain()
    md = max_data(d, max(cfg.order + 2, 8))
    e = _expansion(cfg, md)
    params = OracleParams(nx=cfg.nx, ny=cfg.ny, count=cfg.m)
    results = solve_many(d, cfg.eps, params)
    rows = []
    for r in results:
        lo = float(r.lam[cfg.m - 1])
        ls = float(e(r.eps))
        rows.append((r.eps, ls, lo, abs(ls - lo) / lo))
    payload = {
        "order": cfg.order,
        "m": cfg.m,
        "series": cfg.series,
        "rows": [dict(zip(("eps", "lambda_series", "lambda_oracle", "rel_err"), r)) for r in rows],
    }
    _emit(cfg, payload, ["eps", "lambda_series", "lambda_oracle", "rel_err"], rows)
    return EXIT_OK


def cmd_gap(cfg: RunConfig) -> int:
    d = cfg.domain()
    md = max_data(d, 8)
    const = asymptotics.gap_leading(md)
    k = md.k
    rows = []
    if cfg.oracle:
        if not cfg.eps:
            raise InputError("gap --oracle needs --eps")
        params = OracleParams(nx=cfg.nx, ny=cfg.ny, count=2)
        for r in solve_many(d, cfg.eps, params):
            l1, l2 = (float(v) for v in r.lam[:2])
            # eps^2 gamma / eta^(2k); equals eps * gamma for k = 1
            scaled = r.eps**2 * (l2 - l1) / r.eps ** (2 * k / (k + 1))
            rows.append((r.eps, l1, l2, scaled, scaled / const))
    payload = {
        "k": k,
        "leading_constant": const,
        "rows": [dict(zip(("eps", "lambda1", "lambda2", "scaled_gap", "ratio"), r)) for r in rows],
    }
    _emit(cfg, payload, ["eps", "lambda1", "lambda2", "scaled_gap", "ratio"], rows)
    return EXIT_OK


def cmd_examples(cfg: RunConfig) -> int:
    names = [cfg.example] if cfg.example else list(registry.EXAMPLES)
    out, rows = {}, []
    for name in names:
        ex = registry.get(name)
        md = max_data(ex.domain, 10)
        ref = ex.reference_values()
        engine = asymptotics.expand(md, 6).as_dict()
        out[name] = {
            "h_plus": ex.h_plus,
            "h_minus": ex.h_minus,
            "xbar": md.xbar,
            "reference": ref,
            "engine": {k: engine[k] for k in ("0", "2", "4", "6")},
        }
        for key in ("0", "2", "4", "6"):
            rows.append((name, int(key), ref[key], engine[key]))
    _emit(cfg, out, ["example", "index", "reference", "engine"], rows)
    return EXIT_OK


COMMANDS = {"expand": cmd_expand, "validate": cmd_validate, "gap": cmd_gap, "examples": cmd_examples}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="thinspec", description=__doc__.split("\n\n")[0])
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--hplus", help="upper boundary function of x")
    p.add_argument("--hminus", help="lower boundary function of x")
    p.add_argument("--example", help="named example: " + ", ".join(registry.EXAMPLES))
    p.add_argument("--order", type=int, default=6, help="highest coefficient index (default 6)")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--eps", help="comma separated list of eps values")
    p.add_argument("--nx", type=int, default=512)
    p.add_argument("--ny", type=int, default=None)
    p.add_argument("--format", choices=("json", "csv", "dat"), default="json")
    p.add_argument("--out")
    p.add_argument("--oracle", action="store_true", help="also run the finite-difference solver")
    p.add_argument(
        "--series", choices=("engine", "closed"), default="engine",
        help="engine: full recurrence (k = 1); closed: closed-form coefficients (up to c6 for the lowest k = 1 mode, else c_{2k+2})",
    )
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        cfg = RunConfig.from_args(args)
        if cfg.order < 0 or cfg.n < 1 or cfg.m < 1:
            raise InputError("order must be >= 0, n and m >= 1")
        return COMMANDS[cfg.command](cfg)
    except (InputError, ParseError, GeometryError, JetDomainError, OrderCapError, OracleRefusal, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OracleError, SolvabilityError, RepresentationError, GridTooSmallError, ArpackError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    raise SystemExit(main())
