"""Command-line interface: ``specbound <command> --config run.json``."""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import VariationSpec, bound_reports
from .config import RunConfig, beta_to_json, load_config
from .correlations import BathSpec, correlation_function
from .densities import LorentzianSum, eval_density
from .errors import ConfigError, SpecboundError
from .heom_cert import certify, min_N_for_error, table2
from .tables import ResultTable

CACHE_ENV = "SPECBOUND_CACHE_DIR"


def _config(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    if getattr(args, "tol", None) is not None:
        cfg.tol = args.tol
    if getattr(args, "horizon", None) is not None:
        cfg.horizon = args.horizon
    if getattr(args, "method", None) is not None:
        cfg.method = args.method
    if getattr(args, "kind", None) is not None:
        cfg.kind = args.kind
    return RunConfig.from_dict(cfg.to_dict())


def _emit(table: ResultTable, out: str | None) -> None:
    if out:
        table.write(out)
    else:
        sys.stdout.write(table.to_csv())


def _meta(cfg: RunConfig, command: str, **extra) -> dict:
    return {"command": command, "config_hash": cfg.digest(), **extra}


# ----------------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------------


def cmd_eval_density(cfg: RunConfig) -> ResultTable:
    J = cfg.bath_density()
    grid = cfg.omegas or cfg.times
    om = grid.values()
    return ResultTable.from_columns({"omega": om, "J": eval_density(J, om)},
                                    {"omega": True, "J": True}, _meta(cfg, "eval-density"))


def cmd_eval_correlation(cfg: RunConfig, threads: int = 1) -> ResultTable:
    J = cfg.bath_density()
    spec = BathSpec(J, cfg.beta, cfg.lambda_sq)
    corr = correlation_function(spec, cfg.method, tol=cfg.tol)
    ts = cfg.times.values()
    if threads > 1 and ts.size > 1:
        chunks = np.array_split(ts, threads)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(corr.evaluate, chunks))
        vals = np.concatenate([p[0] for p in parts])
        errs = np.concatenate([p[1] for p in parts])
    else:
        vals, errs = corr.evaluate(ts)
    meta = _meta(cfg, "eval-correlation", method=corr.method,
                 components=[[list(k), w, tag] for k, w, tag in corr.components],
                 beta=beta_to_json(cfg.beta))
    # closed forms are certified; quadrature columns carry estimates only
    certified = corr.method == "closed-form"
    return ResultTable.from_columns(
        {"t": ts, "re_xi": vals.real, "im_xi": vals.imag, "tail_bound": errs},
        {"t": True, "re_xi": certified, "im_xi": certified, "tail_bound": certified},
        meta,
    )


def cmd_bound(cfg: RunConfig) -> tuple[dict, ResultTable]:
    dJ = cfg.variation_density()
    v = VariationSpec(dJ, None, cfg.beta, cfg.lambda_sq, cfg.observable_norm, cfg.coupling_absorbed, cfg.method)
    ts = cfg.times.values()
    reports = bound_reports(v, ts, cfg.kind, quad_tol=cfg.tol, horizon=cfg.horizon)
    data = {"t": ts}
    cert = {"t": True}
    for name, rep in reports.items():
        data[name] = rep.values
        cert[name] = rep.certified and not rep.refused
    summary = {name: {k: val for k, val in rep.to_dict().items() if k != "curve"} for name, rep in reports.items()}
    meta = _meta(cfg, "bound", reports=summary)
    return summary, ResultTable.from_columns(data, cert, meta)


def _cache_path(key: dict) -> Path | None:
    root = os.environ.get(CACHE_ENV)
    if not root:
        return None
    digest = hashlib.sha256(json.dumps(key, sort_keys=True).encode()).hexdigest()[:24]
    return Path(root) / f"cert-{digest}.json"


def cmd_heom_cert(cfg: RunConfig) -> dict:
    J = cfg.bath_density()
    if not isinstance(J, LorentzianSum):
        raise ConfigError("heom-cert needs a density of kind 'lorentzian'")
    if math.isinf(cfg.beta):
        raise ConfigError("heom-cert needs a finite beta")
    key = {"bath": cfg.density, "beta": cfg.beta, "N": cfg.N, "t": cfg.t_target,
           "target": cfg.error_target, "version": __version__}
    path = _cache_path(key)
    if path is not None and path.exists():
        return json.loads(path.read_text())
    cert = certify(J, cfg.beta, cfg.N, cfg.t_target).to_dict()
    if cfg.error_target is not None:
        cert["min_N_analytic"] = min_N_for_error(J, cfg.beta, cfg.t_target, cfg.error_target, "analytic")
        cert["min_N_numeric"] = min_N_for_error(J, cfg.beta, cfg.t_target, cfg.error_target, "numeric")
        cert["error_target"] = cfg.error_target
    cert["version"] = __version__
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(cert, sort_keys=True))
    return cert


def cmd_table2(out: str | None = None) -> tuple[bool, str, list]:
    rows = table2()
    lines = [
        "beta    N   analytic%  (ref)    numeric%  (ref)   N20 analytic (ref)  N20 numeric (ref)  status",
    ]
    ok = True
    csv_rows = []
    for r in rows:
        c = r.checks
        passed = all(c.values())
        ok &= passed
        lines.append(
            f"{r.beta:<6g} {r.N:>3d}   {r.analytic_pct:8.3f} ({r.ref[2]:6.2f})  {r.numeric_pct:8.3f} ({r.ref[3]:6.2f})"
            f"  {r.n20_analytic:>6d} ({r.ref[4]:>3d})      {r.n20_numeric:>6d} ({r.ref[5]:>3d})     "
            + ("PASS" if passed else "FAIL " + ",".join(k for k, v in c.items() if not v))
        )
        csv_rows.append([r.beta, r.N, r.analytic_pct, r.numeric_pct, r.n20_analytic, r.n20_numeric])
    text = "\n".join(lines) + "\n"
    if out:
        cols = ["beta", "N", "analytic_pct", "numeric_pct", "n20_analytic", "n20_numeric"]
        ResultTable(cols, csv_rows, {c: True for c in cols}, {"command": "reproduce-table2"}).write(out)
    return ok, text, rows


# ----------------------------------------------------------------------------
# entry point
# ----------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="specbound",
                                     description="Bath correlation functions and certified bath-variation bounds.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config_required=True):
        p.add_argument("--config", required=config_required, metavar="PATH", help="JSON run configuration")
        p.add_argument("--out", default=None, metavar="PATH", help="output file (default: stdout)")
        p.add_argument("--tol", type=float, default=None, help="tolerance override")
        p.add_argument("--threads", type=int, default=1, metavar="K", help="worker threads (default serial)")

    p = sub.add_parser("eval-density", help="tabulate J(omega)")
    common(p)
    p = sub.add_parser("eval-correlation", help="tabulate xi(t)")
    common(p)
    p.add_argument("--method", choices=["closed", "quadrature", "auto"], default=None)
    p = sub.add_parser("bound", help="bound curves for a density variation")
    common(p)
    p.add_argument("--method", choices=["closed", "quadrature", "auto"], default=None)
    p.add_argument("--kind", choices=["general", "weak", "strong", "all"], default=None)
    p.add_argument("--horizon", type=float, default=None, metavar="T")
    p = sub.add_parser("heom-cert", help="Matsubara truncation certificate")
    common(p, config_required=False)
    p.add_argument("--table2", action="store_true", help="reproduce the reference three-Lorentzian table")
    p = sub.add_parser("reproduce-table2", help="alias for heom-cert --table2")
    p.add_argument("--out", default=None, metavar="PATH")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "reproduce-table2" or (args.command == "heom-cert" and args.table2):
            ok, text, _ = cmd_table2(args.out)
            sys.stdout.write(text)
            return 0 if ok else 3
        if getattr(args, "threads", 1) < 1:
            raise ConfigError("--threads must be >= 1")
        cfg = _config(args)
        if args.command == "eval-density":
            _emit(cmd_eval_density(cfg), args.out)
        elif args.command == "eval-correlation":
            _emit(cmd_eval_correlation(cfg, args.threads), args.out)
        elif args.command == "bound":
            summary, table = cmd_bound(cfg)
            _emit(table, args.out)
            for name, rep in summary.items():
                if rep["refused"]:
                    print(f"{name} bound refused: {rep['refused']}", file=sys.stderr)
        elif args.command == "heom-cert":
            if not args.config:
                raise ConfigError("heom-cert needs --config (or --table2)")
            cert = cmd_heom_cert(cfg)
            text = json.dumps(cert, indent=2, sort_keys=True) + "\n"
            if args.out:
                Path(args.out).write_text(text)
            else:
                sys.stdout.write(text)
        return 0
    except SpecboundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
