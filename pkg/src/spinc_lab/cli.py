"""Command-line front end: `spinc-lab <command> [options]`.

Exit status: 0 on success, 1 when an input violates a hypothesis (or is
malformed), 2 when an identity that must hold by construction fails.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import berger, geometry_checks as gc, homogeneous as hom, spinc
from .errors import ExcludedRegimeError, InvariantError

COMMANDS = ("describe", "killing-solve", "verify", "spectrum", "bounds-check", "umbilic")
IDENTITY_TOL = 1e-12


@dataclass
class RunConfig:
    command: str
    kappa: float = 4.0
    tau: float = 0.5
    aux: float | None = None
    alpha: float | None = None
    f: float = 0.6
    H: float = 1.0
    tau_grid: list = field(default_factory=list)
    kmax: int = 6
    structure: str = "canonical"
    output_format: str = "json"
    compare_paper: bool = False
    paper_literal: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.kmax > berger.kmax_ceiling():
            raise ExcludedRegimeError(f"kmax={self.kmax} above ceiling {berger.kmax_ceiling()} (SPINC_LAB_KMAX_CEILING)")
        if self.kmax < 0:
            raise ValueError("kmax must be nonnegative")


# --- formatting ---------------------------------------------------------------


def fmt_float(x: float) -> float:
    """Round to 15 significant digits; json then prints the shortest round-trip repr."""
    x = float(x)
    if not math.isfinite(x):
        raise InvariantError(f"non-finite value {x} in report")
    return float(f"{x:.15g}") + 0.0


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, complex):
        return [fmt_float(obj.real), fmt_float(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj)
    return obj


def dumps(report: dict) -> str:
    return json.dumps(_clean(report), ensure_ascii=False)


def to_csv(rows: list, columns: list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_csv_cell(row[c]) for c in columns])
    return buf.getvalue()


def _csv_cell(v):
    if isinstance(v, (float, np.floating)):
        return repr(fmt_float(v))
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    return v


def to_table(rows: list, columns: list) -> str:
    cells = [[str(_csv_cell(r[c])) for c in columns] for r in rows]
    widths = [max(len(c), *(len(r[i]) for r in cells)) if cells else len(c) for i, c in enumerate(columns)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(columns, widths))]
    lines += ["  ".join(v.rjust(w) for v, w in zip(r, widths)) for r in cells]
    return "\n".join(lines) + "\n"


# --- commands -----------------------------------------------------------------


def _aux_for(model, cfg) -> spinc.AuxPotential:
    if cfg.aux is not None:
        return spinc.AuxPotential.vertical(cfg.aux)
    if cfg.structure == "anti-canonical":
        return spinc.anticanonical_potential(model)
    if cfg.structure == "spin":
        return spinc.AuxPotential.vertical(0.0)
    return spinc.canonical_potential(model)


def cmd_describe(cfg):
    model = hom.build_frame_model(hom.ModelParams(cfg.kappa, cfg.tau))
    horizontal, vertical = hom.ricci_spectrum(model)
    out = model.to_json()
    out["ricci_horizontal"] = horizontal
    out["ricci_vertical"] = vertical
    out["killing_field_residual"] = hom.killing_field_check(model)
    return out


def _killing_report(cfg):
    model = hom.build_frame_model(hom.ModelParams(cfg.kappa, cfg.tau))
    conn = spinc.build_spinc_connection(model, _aux_for(model, cfg))
    alpha = cfg.tau / 2 if cfg.alpha is None else cfg.alpha
    sol = spinc.killing_solve(conn, alpha)
    return conn, sol, {
        "aux": float(conn.aux.a[2]),
        "alpha": alpha,
        "solution_dim": sol.dim,
        "xi_eigenvalue": sol.xi_eigenvalue,
        "omega12": float(conn.omega.omega[0, 1]),
        "basis": [[complex(z) for z in s.components] for s in sol.basis],
    }


def cmd_killing_solve(cfg):
    return _killing_report(cfg)[2]


def cmd_verify(cfg):
    conn, sol, rep = _killing_report(cfg)
    ricci = spinc.ricci_identity_residual(conn)
    lich = spinc.lichnerowicz_residual(conn)
    out = {
        "solution_dim": sol.dim,
        "killing_dim": sol.dim,
        "xi_eigenvalue": sol.xi_eigenvalue,
        "ricci_residual": ricci,
        "lichnerowicz_residual": lich,
    }
    if max(ricci, lich) > IDENTITY_TOL:
        raise InvariantError(f"identity residuals above {IDENTITY_TOL}: ricci={ricci}, lichnerowicz={lich}")
    return out


def _spectrum_rows(cfg):
    entries = berger.berger_dirac_spectrum(cfg.kmax, cfg.tau, cfg.structure)
    rows = []
    for e in entries:
        row = {"k": e.k, "p": e.p, "branch": e.branch, "value": e.value,
               "multiplicity": e.multiplicity, "certainty": e.certainty, "squared": e.squared}
        if cfg.compare_paper:
            lit = berger.paper_literal_value(e, cfg.tau)
            row["paper_value"] = lit
            row["discrepancy"] = abs(lit - e.value) > 1e-10
        rows.append(row)
    return rows


def cmd_spectrum(cfg):
    rows = _spectrum_rows(cfg)
    columns = ["k", "p", "branch", "value", "multiplicity", "certainty"]
    if cfg.compare_paper:
        columns += ["paper_value", "discrepancy"]
    return rows, columns


def _bounds_one(cfg, tau):
    data = gc.berger_equality_data(tau, cfg.kappa, cfg.kmax)
    lower = gc.lower_bound_check(data)
    upper = gc.upper_bound_check(data)
    out = {
        "tau": tau,
        "H": data.H,
        "lambda1": data.lambda1,
        "lower_margin": lower.margin,
        "upper_margin": upper.margin,
        "equality_lower": lower.equality,
        "equality_upper": upper.equality,
    }
    params = hom.ModelParams(cfg.kappa, tau)
    if cfg.paper_literal:
        H_lit = sum(gc.second_fundamental_form(params, True)[i, i] for i in range(3)) / 3
        out["paper_literal_trace_H"] = H_lit
        out["paper_literal_trace_mismatch"] = float(gc.trace_mismatch(params, True))
    if cfg.compare_paper:
        scale = math.sqrt(cfg.kappa) / 2
        t4 = tau / scale
        lit = [berger.paper_literal_value(e, t4)
               for e in berger.berger_dirac_spectrum(cfg.kmax, t4, "induced", witness=False)]
        lam_lit = scale * min(v for v in lit if v > 1e-12)
        out["paper_literal_lambda1"] = lam_lit
        out["paper_literal_lower_margin"] = lam_lit - 1.5 * data.H
        out["paper_literal_discrepancy"] = abs(lam_lit - data.lambda1) > gc.EQUALITY_TOL
    return out


def cmd_bounds_check(cfg):
    if cfg.tau_grid:
        return {"results": [_bounds_one(cfg, t) for t in cfg.tau_grid]}
    return _bounds_one(cfg, cfg.tau)


def cmd_umbilic(cfg):
    params = hom.ModelParams(cfg.kappa, cfg.tau)
    if not -1 <= cfg.f <= 1:
        raise ExcludedRegimeError("f = <xi, nu> must lie in [-1, 1]")
    T = np.array([math.sqrt(1 - cfg.f**2), 0.0])
    surface = gc.SurfaceData(E=cfg.H * np.eye(2), f=cfg.f, T=T, params=params)
    res = gc.umbilic_obstruction(surface)
    return {
        "f": cfg.f,
        "T": T,
        "dH": res.dH,
        "closed_form": res.closed_form,
        "residual": res.residual,
        "contradiction": res.contradiction,
    }


HANDLERS = {
    "describe": cmd_describe,
    "killing-solve": cmd_killing_solve,
    "verify": cmd_verify,
    "spectrum": cmd_spectrum,
    "bounds-check": cmd_bounds_check,
    "umbilic": cmd_umbilic,
}


def render(cfg, result) -> str:
    if isinstance(result, tuple):
        rows, columns = result
        if cfg.output_format == "csv":
            return to_csv(rows, columns)
        if cfg.output_format == "table":
            return to_table(rows, columns)
        return dumps({"rows": [{c: r[c] for c in columns} for r in rows]})
    return dumps(result)


def run(cfg: RunConfig, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        text = render(cfg, HANDLERS[cfg.command](cfg))
    except InvariantError as exc:
        print(f"internal identity failure: {exc}", file=err)
        return 2
    except (ExcludedRegimeError, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return 1
    out.write(text)
    if not text.endswith("\n"):
        out.write("\n")
    return 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="spinc-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, kappa=4.0, tau=0.5):
        p.add_argument("--kappa", type=float, default=kappa)
        p.add_argument("--tau", type=float, default=tau)
        p.add_argument("--format", dest="output_format", choices=("json", "csv", "table"), default="json")

    p = sub.add_parser("describe", help="dump the invariant-frame model")
    common(p)
    for name in ("killing-solve", "verify"):
        p = sub.add_parser(name)
        common(p)
        p.add_argument("--aux", type=float, default=None, help="vertical potential a_3; overrides --structure")
        p.add_argument("--alpha", type=float, default=None, help="Killing constant (default tau/2)")
        p.add_argument("--structure", choices=("canonical", "anti-canonical", "spin"), default="canonical")
    p = sub.add_parser("spectrum", help="Berger-sphere Dirac spectrum entries (kappa = 4)")
    common(p, tau=0.2)
    p.add_argument("--structure", choices=berger.STRUCTURES, default="canonical")
    p.add_argument("--kmax", type=int, default=6)
    p.add_argument("--compare-paper", action="store_true")
    p = sub.add_parser("bounds-check", help="lower/upper bounds on Berger spheres in CP^2")
    common(p, tau=0.2)
    p.add_argument("--kmax", type=int, default=6)
    p.add_argument("--tau-grid", type=float, nargs="+", default=[])
    p.add_argument("--compare-paper", action="store_true")
    p.add_argument("--paper-literal", action="store_true")
    p = sub.add_parser("umbilic", help="solve the totally-umbilic Ricci identity for dH")
    common(p)
    p.add_argument("--f", type=float, default=0.6)
    p.add_argument("--H", type=float, default=1.0)
    return parser


def config_from_args(argv=None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    kwargs = {k: v for k, v in vars(ns).items() if v is not None or k in ("aux", "alpha")}
    return RunConfig(**kwargs)


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
    except (ExcludedRegimeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
