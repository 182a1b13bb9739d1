"""
Command-line front end: plot-ready CSV/JSON datasets.

    coulomb1d spectrum     alpha(theta), E(theta) and level gaps on a theta grid
    coulomb1d wavefunction normalized W profiles (or full eigenfunctions)
    coulomb1d deltas       three-delta strengths, boundary data and spectra
    coulomb1d rect         rectangular well/barrier spectra
    coulomb1d converge     regularized vs point-interaction energies over a d sweep
    coulomb1d figures      all of the above presets written into one directory

Angles accept plain floats or multiples of pi ("pi", "-pi", "3/4pi", "pi/4").
Exit status: 0 success, 2 invalid input, 3 numerical failure, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import __version__, connection, matcher, regularization
from .connection import ConnectionParams, Family, FAMILIES
from .errors import (DomainError, EvaluationError, PoleError, RangeError,
                     UnsupportedLevelError)

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
OUTPUT_DIR_ENV = "COULOMB1D_OUTPUT_DIR"

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4

PI = math.pi
FIG2_ALPHAS = (1.0, 1.2, 1.5, 1.8, 2.0)
FIG3_SETS = {
    "circles": (PI / 4, -PI / 4, PI / 4),
    "triangles": (PI / 4, -3 * PI / 4, 3 * PI / 4),
    "crosses": (PI / 4, 3 * PI / 4, -3 * PI / 4),
}
FIG4_SETS = {
    "v1": ("v1", -PI),
    "v2_minus_3pi_4": ("v2", -3 * PI / 4),
    "v2_pi_2": ("v2", PI / 2),
}
DEFAULT_D_LIST = (1e-2, 1e-3, 1e-4)
ODD_INTEGER_TOL = 0.01


class ValidationError(ValueError):
    """Bad command-line input."""


# ---------------------------------------------------------------------------
# parsing helpers
# ---------------------------------------------------------------------------

_PI_RE = re.compile(r"^(?P<coef>[-+]?[0-9./]*)\*?pi(?:/(?P<den>[0-9.]+))?$")


def parse_angle(text: str) -> float:
    """Float, or a rational multiple of pi such as "3/4pi", "-pi", "pi/4", "0.5*pi"."""
    s = text.strip().lower().replace(" ", "")
    m = _PI_RE.match(s)
    try:
        if m is None:
            return float(s)
        coef = m.group("coef")
        if coef in ("", "+"):
            c = Fraction(1)
        elif coef == "-":
            c = Fraction(-1)
        else:
            c = Fraction(coef)
        if m.group("den"):
            c /= Fraction(m.group("den"))
    except (ValueError, ZeroDivisionError):
        raise ValidationError(f"cannot parse angle {text!r}") from None
    if c == 1:
        return PI
    if c == -1:
        return -PI
    return float(c) * PI


def parse_grid(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValidationError(f"grid must look like min:max:count, got {text!r}")
    lo, hi = parse_angle(parts[0]), parse_angle(parts[1])
    try:
        count = int(parts[2])
    except ValueError:
        raise ValidationError(f"grid count must be an integer, got {parts[2]!r}") from None
    if count < 2:
        raise ValidationError("grid count must be >= 2")
    if not hi > lo:
        raise ValidationError("grid max must exceed grid min")
    return lo, hi, count


def parse_d_list(text: str) -> list[float]:
    try:
        values = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ValidationError(f"cannot parse d list {text!r}") from None
    if not values or any(not v > 0.0 for v in values):
        raise ValidationError("d values must be positive")
    return sorted(values, reverse=True)


@dataclass(frozen=True)
class RunConfig:
    command: str
    omega: float
    theta_minus: float
    theta_plus: float
    d: float | None
    d_list: tuple[float, ...]
    n_max: int
    grid: tuple[float, float, int] | None
    alpha: tuple[float, ...]
    family: str
    potential: str
    interior: str
    exact_interior: bool
    output_path: Path | None
    format: str

    @property
    def params(self) -> ConnectionParams:
        return ConnectionParams(self.omega, self.theta_minus, self.theta_plus)

    def families(self) -> tuple[Family, ...]:
        return FAMILIES if self.family == "both" else (Family(self.family),)


def _resolve_out(path: str | None) -> Path | None:
    if path is None:
        return None
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    return Path(base) / p if base and not p.is_absolute() else p


def build_config(ns: argparse.Namespace) -> RunConfig:
    if ns.levels < 1:
        raise ValidationError("--levels must be >= 1")
    d = ns.d
    if d is not None and not d > 0.0:
        raise ValidationError("--d must be > 0")
    out = ns.out
    if ns.command == "figures" and out is None:
        out = os.environ.get(OUTPUT_DIR_ENV, ".")
    alphas = tuple(float(a) for a in ns.alpha.split(",")) if ns.alpha else ()
    if any(not a > 0.0 for a in alphas):
        raise ValidationError("--alpha values must be > 0")
    return RunConfig(
        command=ns.command,
        omega=parse_angle(ns.omega),
        theta_minus=parse_angle(ns.theta_minus),
        theta_plus=parse_angle(ns.theta_plus),
        d=d,
        d_list=tuple(parse_d_list(ns.d_list)) if ns.d_list else DEFAULT_D_LIST,
        n_max=ns.levels - 1,
        grid=parse_grid(ns.grid) if ns.grid else None,
        alpha=alphas,
        family=ns.family,
        potential=ns.potential,
        interior=ns.interior,
        exact_interior=ns.exact_interior,
        output_path=_resolve_out(out),
        format=ns.format,
    )


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _clean(obj: Any) -> Any:
    """JSON-safe copy: non-finite floats become strings, enums their values."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, Family):
        return obj.value
    if isinstance(obj, regularization.InfiniteRatio):
        return "inf" if obj.sign > 0 else "-inf"
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return obj


def to_json(payload: dict[str, Any]) -> str:
    doc = {"schema_version": SCHEMA_VERSION, "version": __version__, **payload}
    return json.dumps(_clean(doc), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _fmt(v: Any) -> str:
    if isinstance(v, Family):
        return v.value
    if isinstance(v, float):
        return repr(v)
    return str(v)


def to_csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _emit(text: str, path: Path | None, stdout: io.TextIOBase) -> None:
    if path is None:
        stdout.write(text)
        return
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


# ---------------------------------------------------------------------------
# datasets
# ---------------------------------------------------------------------------

SPECTRUM_HEADER = ("theta", "family", "branch", "alpha", "energy", "gap")
WAVEFUNCTION_HEADER = ("alpha", "x", "psi")
CONVERGE_HEADER = ("d", "family", "branch", "E_reg", "E_ref", "rel_error")


def spectrum_rows(grid: tuple[float, float, int], n_max: int,
                  families: Sequence[Family]) -> list[tuple]:
    """One row per (theta, family, branch); gap is E(branch + 1) - E(branch)."""
    lo, hi, count = grid
    thetas = np.linspace(lo, hi, count)
    thetas[0], thetas[-1] = lo, hi
    rows = []
    for theta in thetas:
        theta = float(theta)
        alphas = [connection.solve_alpha(theta, n) for n in range(n_max + 2)]
        energies = [connection.energy(a) if a > 0.0 else -math.inf for a in alphas]
        for family in families:
            for n in range(n_max + 1):
                rows.append((theta, family, n, alphas[n], energies[n], energies[n + 1] - energies[n]))
    return rows


def cmd_spectrum(cfg: RunConfig) -> tuple[str, str]:
    grid = cfg.grid or (-PI, PI, 201)
    if grid[0] < -PI or grid[1] > PI:
        raise ValidationError("theta grid must lie within [-pi, pi]")
    rows = spectrum_rows(grid, cfg.n_max, cfg.families())
    if cfg.format == "json":
        return to_json({"command": "spectrum", "columns": list(SPECTRUM_HEADER),
                        "rows": [list(r) for r in rows]}), ""
    return to_csv(SPECTRUM_HEADER, rows), ""


def wavefunction_rows(alphas: Sequence[float], grid: tuple[float, float, int]) -> list[tuple]:
    """N W_{alpha,1/2}(2|x|/alpha) on the grid for each alpha."""
    lo, hi, count = grid
    xs = np.linspace(lo, hi, count)
    rows = []
    for alpha in alphas:
        level = connection.normalize(connection.SpectralLevel(
            Family.PLUS, max(math.ceil(alpha) - 1, 0), alpha, connection.energy(alpha), 0.0))
        for x in xs:
            rows.append((alpha, float(x), connection.eigenfunction_eval(level, abs(float(x)))))
    return rows


def level_wavefunction_rows(level: connection.SpectralLevel, grid: tuple[float, float, int]) -> list[tuple]:
    lo, hi, count = grid
    return [(level.alpha, float(x), connection.eigenfunction_eval(level, float(x)))
            for x in np.linspace(lo, hi, count)]


def cmd_wavefunction(cfg: RunConfig) -> tuple[str, str]:
    grid = cfg.grid or (0.0, 20.0, 401)
    if cfg.alpha:
        rows = wavefunction_rows(cfg.alpha, grid)
    elif cfg.family != "both":
        # a level of the point interaction: cfg.n_max is the branch
        family = Family(cfg.family)
        alpha = connection.solve_alpha(cfg.params.theta(family), cfg.n_max)
        if alpha == 0.0:
            raise UnsupportedLevelError("the divergent ground state has no wavefunction")
        level = connection.normalize(connection.SpectralLevel(
            family, cfg.n_max, alpha, connection.energy(alpha), cfg.params.weight_angle(family)))
        rows = level_wavefunction_rows(level, grid)
    else:
        rows = wavefunction_rows(FIG2_ALPHAS, grid)
    if cfg.format == "json":
        return to_json({"command": "wavefunction", "columns": list(WAVEFUNCTION_HEADER),
                        "rows": [list(r) for r in rows]}), ""
    return to_csv(WAVEFUNCTION_HEADER, rows), ""


def _level_report(table: matcher.ConvergenceTable) -> list[dict[str, Any]]:
    return [{"d": r.d, "family": r.family, "branch": r.branch,
             "alpha_reg": r.alpha_reg, "alpha_ref": r.alpha_ref,
             "E_reg": r.E_reg, "E_ref": r.E_ref, "rel_error": r.rel_error,
             "very_low": matcher.is_very_low(r.E_ref) or matcher.is_very_low(r.E_reg)}
            for r in table.rows]


def _params_dict(params: ConnectionParams) -> dict[str, float]:
    return {"omega": params.omega, "theta_minus": params.theta_minus,
            "theta_plus": params.theta_plus, "lambda": params.lambda_}


def deltas_report(params: ConnectionParams, d: float, n_max: int, exact_interior: bool = False) -> dict[str, Any]:
    reg = regularization.delta_inverse(params, d)
    minus, plus = regularization.delta_forward(reg)
    table = matcher.convergence_study(params, "deltas", [d], n_max, exact_interior=exact_interior)
    levels = _level_report(table)
    return {
        "params": _params_dict(params),
        "d": d,
        "strengths": {"u1": reg.u1, "v": reg.v, "u2": reg.u2},
        "outer_equal": math.isclose(reg.u1, reg.u2, rel_tol=1e-12, abs_tol=1e-9),
        "boundary": {"minus": {"R": minus.R, "Q": minus.Q}, "plus": {"R": plus.R, "Q": plus.Q}},
        "interior": "exact" if exact_interior else "straight_line",
        "levels": levels,
        "missing": [{"family": f, "branch": n} for (_, f, n) in table.missing],
        "max_rel_error": max((lv["rel_error"] for lv in levels), default=math.nan),
        "very_low_energy": matcher.VERY_LOW_ENERGY,
    }


def cmd_deltas(cfg: RunConfig) -> tuple[str, str]:
    d = cfg.d if cfg.d is not None else 1e-4
    return to_json({"command": "deltas",
                    **deltas_report(cfg.params, d, cfg.n_max, cfg.exact_interior)}), ""


def rect_report(potential: str, theta: float, d: float, n_max: int) -> dict[str, Any]:
    """Rectangular interior against its limiting connection condition (pi/4, -pi, theta)."""
    if potential == "v1":
        params = ConnectionParams(PI / 4, -PI, -PI)
        reg = regularization.rect_family_v1(d)
        interior = "rect_v1"
    else:
        params = ConnectionParams(PI / 4, -PI, theta)
        reg = regularization.rect_family_v2(params.theta_plus, d)
        interior = "rect_v2"
    levels = matcher.solve_regularized_spectrum(matcher.rect_boundary(reg), d, n_max)
    table = matcher.convergence_study(params, interior, [d], n_max)
    odd = [lv for lv in levels if lv.family is Family.MINUS]
    odd_check = [{"branch": lv.branch, "alpha": lv.alpha, "n": round(lv.alpha),
                  "rel_error_E": abs(connection.energy(lv.alpha) / connection.energy(round(lv.alpha)) - 1.0)
                  if round(lv.alpha) >= 1 else math.nan}
                 for lv in odd]
    below_ground = sorted({lv.family.value for lv in levels if lv.energy < -0.5})
    return {
        "params": _params_dict(params),
        "potential": potential,
        "theta": theta if potential == "v2" else None,
        "d": d,
        "V": reg.V,
        "levels": [{"family": lv.family, "branch": lv.branch, "alpha": lv.alpha, "E": lv.energy,
                    "Omega": lv.Omega, "residual": lv.residual, "very_low": lv.very_low} for lv in levels],
        "comparison": _level_report(table),
        "odd_alpha_n_check": odd_check,
        "odd_alpha_n_ok": all(c["rel_error_E"] <= ODD_INTEGER_TOL for c in odd_check),
        "families_below_minus_half": below_ground,
        "very_low_energy": matcher.VERY_LOW_ENERGY,
    }


def cmd_rect(cfg: RunConfig) -> tuple[str, str]:
    d = cfg.d if cfg.d is not None else 1e-4
    return to_json({"command": "rect",
                    **rect_report(cfg.potential, cfg.theta_plus, d, cfg.n_max)}), ""


def converge_dataset(cfg: RunConfig) -> tuple[list[tuple], dict[str, Any]]:
    table = matcher.convergence_study(cfg.params, cfg.interior, list(cfg.d_list), cfg.n_max,
                                      exact_interior=cfg.exact_interior)
    rows = [(r.d, r.family, r.branch, r.E_reg, r.E_ref, r.rel_error) for r in table.rows]
    meta = {
        "command": "converge",
        "params": _params_dict(cfg.params),
        "interior": table.interior.value,
        "d_list": list(cfg.d_list),
        "decay_exponents": [{"family": f, "branch": n, "exponent": e}
                            for (f, n), e in sorted(table.exponents.items(), key=lambda kv: (kv[0][0].value, kv[0][1]))],
        "missing": [{"d": d, "family": f, "branch": n} for (d, f, n) in table.missing],
    }
    return rows, meta


def cmd_converge(cfg: RunConfig) -> tuple[str, str]:
    rows, meta = converge_dataset(cfg)
    if cfg.format == "json":
        return to_json({**meta, "columns": list(CONVERGE_HEADER), "rows": [list(r) for r in rows]}), ""
    return to_csv(CONVERGE_HEADER, rows), to_json(meta)


def figures(out_dir: Path) -> list[Path]:
    """Write fig1.csv, fig2.csv, fig3.json and fig4.json into out_dir."""
    written = []
    fig1 = to_csv(SPECTRUM_HEADER, spectrum_rows((-PI, PI, 201), 2, FAMILIES))
    fig2 = to_csv(WAVEFUNCTION_HEADER, wavefunction_rows(FIG2_ALPHAS, (0.0, 20.0, 401)))
    fig3 = to_json({"command": "figures", "figure": 3, "d": 1e-4, "tolerance_rel_E": 0.01,
                    "sets": {name: deltas_report(ConnectionParams(*p), 1e-4, 2) for name, p in FIG3_SETS.items()}})
    fig4 = to_json({"command": "figures", "figure": 4, "d": 1e-4,
                    "tolerances": {"even_rel_E": 0.02, "odd_rel_E": ODD_INTEGER_TOL},
                    "sets": {name: rect_report(pot, th, 1e-4, 2) for name, (pot, th) in FIG4_SETS.items()}})
    for name, text in (("fig1.csv", fig1), ("fig2.csv", fig2), ("fig3.json", fig3), ("fig4.json", fig4)):
        path = out_dir / name
        _emit(text, path, sys.stdout)
        written.append(path)
    return written


COMMANDS = {
    "spectrum": cmd_spectrum,
    "wavefunction": cmd_wavefunction,
    "deltas": cmd_deltas,
    "rect": cmd_rect,
    "converge": cmd_converge,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--omega", default="pi/4", help="connection angle omega (default pi/4)")
    common.add_argument("--theta-minus", default="-pi", help="minus-family angle (default -pi)")
    common.add_argument("--theta-plus", default="-pi", help="plus-family angle (default -pi)")
    common.add_argument("--d", type=float, help="cutoff length (default 1e-4)")
    common.add_argument("--d-list", help="comma-separated cutoffs for converge")
    common.add_argument("--levels", type=int, default=3, help="number of branches (default 3)")
    common.add_argument("--grid", help="sampling grid min:max:count")
    common.add_argument("--alpha", help="comma-separated alpha values for wavefunction")
    common.add_argument("--family", choices=("minus", "plus", "both"), default="both")
    common.add_argument("--potential", choices=("v1", "v2"), default="v1",
                        help="rect: well V=-1/d (v1) or barrier tuned to --theta-plus (v2)")
    common.add_argument("--interior", choices=[i.value for i in matcher.Interior], default="deltas")
    common.add_argument("--exact-interior", action="store_true",
                        help="deltas: exponential rather than straight-line interior")
    common.add_argument("--out", help=f"output file (directory for figures); relative paths "
                                      f"are resolved against ${OUTPUT_DIR_ENV} when set")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = argparse.ArgumentParser(prog="coulomb1d", description=__doc__.split("\n\n")[0].strip())
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "spectrum": "alpha and E versus theta on a grid",
        "wavefunction": "normalized eigenfunction profiles",
        "deltas": "three-delta regularization report (JSON)",
        "rect": "rectangular regularization report (JSON)",
        "converge": "convergence table over a cutoff sweep",
        "figures": "write fig1..fig4 datasets into --out",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(ns.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = build_config(ns)
        if cfg.command == "figures":
            for path in figures(cfg.output_path):
                log.info("wrote %s", path)
            return EXIT_OK
        text, meta = COMMANDS[cfg.command](cfg)
        _emit(text, cfg.output_path, sys.stdout)
        if meta:
            if cfg.output_path is None:
                sys.stderr.write(meta)
            else:
                _emit(meta, cfg.output_path.with_name(cfg.output_path.name + ".meta.json"), sys.stdout)
    except (ValidationError, DomainError, UnsupportedLevelError) as exc:
        print(f"coulomb1d: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (EvaluationError, PoleError, RangeError, ArithmeticError) as exc:
        print(f"coulomb1d: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"coulomb1d: I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
