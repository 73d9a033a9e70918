"""Command-line frontend.

Subcommands::

    huygens simulate   integrate a model and write trajectory CSV + JSON metadata
    huygens predict    closed-form and engine regime predictions side by side
    huygens analyze    classify the regime of a trajectory CSV
    huygens sweep      regime map over a one-parameter grid
    huygens reproduce  run one of the bundled figure experiments

Exit codes: 0 success, 1 configuration error, 2 numerical failure.  Every
output file is written to a temporary name and renamed into place.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from importlib import resources
from pathlib import Path

import numpy as np

from . import __version__
from .classify import SyncRegimeReport, detect_regime
from .dynamics import ModelKind, Trajectory, integrate
from .errors import (ConfigError, HuygensError, InsufficientDataError, InvalidParameterError,
                     NoSolutionError, ShapeError)
from .params import (ALL_KEYS, DimensionlessParams, PhysicalParams, PoincareParams,
                     parse_config, regime_thresholds, resolve, sigma_tilde, to_dimensionless)
from .poincare import PoincareSolution, Regime, closed_form_regimes, engine_regimes

TWO_PI = 2 * math.pi
DEFAULT_OUT = "huygens-out"
FIGURE_SAMPLES_PER_CYCLE = 40
AGREE_RTOL = 1e-6

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    """Argument errors become :class:`ConfigError` so they map to exit code 1."""

    def error(self, message):
        raise ConfigError(message)


# -- output helpers -----------------------------------------------------------

def output_dir(args) -> Path:
    out = args.out or os.environ.get("HUYGENS_OUT") or DEFAULT_OUT
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def atomic_write(path: Path, data: str):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(data)
        os.chmod(tmp, 0o644)  # mkstemp creates owner-only files
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _clean(obj):
    """JSON-safe copy: tuples to lists, numpy scalars to Python, non-finite floats to strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.generic):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    if hasattr(obj, "value") and not isinstance(obj, (int, float, str, bool)):
        return obj.value
    return obj


def dumps(obj) -> str:
    return json.dumps(_clean(obj), indent=2, sort_keys=True) + "\n"


def fmt(value) -> str:
    """CSV cell: 17 significant digits for floats, lower-case booleans, empty for None."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def trajectory_csv(traj: Trajectory) -> str:
    buf = io.StringIO()
    data = np.column_stack([traj.times, traj.states])
    np.savetxt(buf, data, fmt="%.17g", delimiter=",", header=",".join(traj.columns),
               comments="")
    return buf.getvalue()


def read_trajectory_csv(path, model=None) -> Trajectory:
    path = Path(path)
    try:
        with open(path) as fh:
            header = fh.readline().strip().split(",")
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read trajectory {path}: {exc}") from exc
    if header[0] != "t" or data.shape[1] != len(header):
        raise ConfigError(f"{path} is not a trajectory CSV")
    if model is None:
        model = ModelKind.TWO_MASS if "y2" in header else ModelKind.DIMENSIONLESS
    return Trajectory(data[:, 0].copy(), data[:, 1:].copy(), model, None)


# -- SVG ----------------------------------------------------------------------

def _polyline(x, y, x0, x1, y0, y1, box, color, width=0.8):
    """Min/max-decimated polyline of ``(x, y)`` mapped into ``box = (left, top, w, h)``."""
    left, top, w, h = box
    n = len(x)
    cols = int(w) * 2
    if n > 2 * cols:
        edges = np.linspace(0, n, cols + 1).astype(int)
        xs, ys = [], []
        for a, b in zip(edges[:-1], edges[1:]):
            seg = y[a:b]
            i, j = int(np.argmin(seg)), int(np.argmax(seg))
            for k in sorted((i, j)):
                xs.append(x[a + k])
                ys.append(seg[k])
        x, y = np.array(xs), np.array(ys)
    px = left + (x - x0) / (x1 - x0) * w
    py = top + h - (y - y0) / (y1 - y0) * h
    pts = " ".join(f"{a:.1f},{b:.1f}" for a, b in zip(px, py))
    return (f'<polyline fill="none" stroke="{color}" stroke-width="{width}" '
            f'points="{pts}"/>')


def render_svg(traj: Trajectory, panel: str = "sum", title: str = "") -> str:
    """Two stacked panels: both angles overlaid, then their sum or difference.

    The time axis is in cycles of the decoupled oscillator (``t / 2 pi``).
    """
    cyc = traj.times / TWO_PI
    th1, th2 = traj.theta(0), traj.theta(1)
    combo = th1 + th2 if panel == "sum" else th1 - th2
    label = "theta1 + theta2" if panel == "sum" else "theta1 - theta2"
    W, H, left, right = 900, 640, 70, 20
    w = W - left - right
    panels = [("theta1, theta2", [(th1, "#9ab8d8"), (th2, "#1f3f6f")], 40),
              (label, [(combo, "#1f3f6f")], 360)]
    x0, x1 = float(cyc[0]), float(cyc[-1]) if cyc[-1] > cyc[0] else float(cyc[0]) + 1
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
             f'viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">',
             f'<rect width="{W}" height="{H}" fill="white"/>',
             f'<text x="{W / 2:.0f}" y="20" text-anchor="middle">{title}</text>']
    for name, series, top in panels:
        h = 240
        lo = min(float(np.min(s)) for s, _ in series)
        hi = max(float(np.max(s)) for s, _ in series)
        if hi - lo < 1e-12:
            lo, hi = lo - 1, hi + 1
        pad = 0.05 * (hi - lo)
        lo, hi = lo - pad, hi + pad
        parts.append(f'<rect x="{left}" y="{top}" width="{w}" height="{h}" fill="none" '
                     f'stroke="black" stroke-width="0.6"/>')
        for frac in (0.0, 0.5, 1.0):
            v = lo + frac * (hi - lo)
            yy = top + h - frac * h
            parts.append(f'<text x="{left - 6}" y="{yy + 4:.1f}" text-anchor="end">{v:.3g}</text>')
        for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
            xx = left + frac * w
            parts.append(f'<text x="{xx:.1f}" y="{top + h + 16}" text-anchor="middle">'
                         f'{x0 + frac * (x1 - x0):.0f}</text>')
        if lo < 0 < hi:
            yz = top + h - (0 - lo) / (hi - lo) * h
            parts.append(f'<line x1="{left}" x2="{left + w}" y1="{yz:.1f}" y2="{yz:.1f}" '
                         f'stroke="#cccccc" stroke-width="0.5"/>')
        for s, color in series:
            parts.append(_polyline(cyc, s, x0, x1, lo, hi, (left, top, w, h), color))
        parts.append(f'<text x="{left + 4}" y="{top - 6}">{name}</text>')
    parts.append(f'<text x="{left + w / 2:.0f}" y="{H - 8}" text-anchor="middle">'
                 f'time (cycles)</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# -- parameters ----------------------------------------------------------------

PARAM_FLAGS = ("m", "M", "l", "g", "c", "k", "e", "sigma", "omega2", "beta", "gamma",
               "epsilon", "mu", "a", "kappa", "n")


def _add_param_args(p):
    p.add_argument("--model", default=None,
                   help="model: " + ", ".join(k.cli_name for k in ModelKind))
    p.add_argument("--config", help="flat 'key = value' parameter file")
    p.add_argument("--layer", choices=("physical", "dimensionless", "poincare"),
                   help="parameter layer when keys are ambiguous")
    g = p.add_argument_group("parameter overrides")
    for key in PARAM_FLAGS:
        g.add_argument(f"--{key}", dest=f"p_{key}", default=None,
                       type=int if key == "n" else float)


def _add_run_args(p):
    p.add_argument("--theta1-0", type=float, default=0.1, help="initial angle of pendulum 1")
    p.add_argument("--theta2-0", type=float, default=0.3, help="initial angle of pendulum 2")
    p.add_argument("--t-end", type=float, default=None, help="end time (dimensionless)")
    p.add_argument("--cycles", type=float, default=500.0,
                   help="run length in cycles when --t-end is absent")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--sample-interval", type=float, default=TWO_PI / 200)


def _add_out(p):
    p.add_argument("--out", default=None, help="output directory (default $HUYGENS_OUT or ./huygens-out)")


def gather_values(args) -> dict:
    values = {}
    if args.config:
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        values.update(parse_config(text))
    for key in PARAM_FLAGS:
        v = getattr(args, f"p_{key}", None)
        if v is not None:
            values[key] = v
    if getattr(args, "layer", None):
        values["layer"] = args.layer
    if not set(values) - {"layer"}:
        raise ConfigError("no parameters given; use --config or parameter flags")
    return values


def params_for(model: ModelKind, values: dict):
    """Resolve ``values`` and return the parameter object ``model`` integrates with."""
    ps = resolve(values)
    if model.uses_poincare_params:
        if ps.poincare is None:
            raise ConfigError(f"{model.cli_name} needs mu > 0 (Poincare-layer parameters)")
        if model is ModelKind.TWO_MASS and ps.poincare.kappa is None:
            raise ConfigError("two-mass needs kappa")
        return ps.poincare
    return ps.dimensionless


def _model(args, default):
    try:
        return ModelKind.parse(args.model or default)
    except InvalidParameterError as exc:
        raise ConfigError(str(exc)) from exc


def initial_state(model: ModelKind, params, theta1, theta2) -> np.ndarray:
    n = params.n if isinstance(params, DimensionlessParams) else 2
    y0 = np.zeros(model.state_size(n))
    y0[0] = theta1
    y0[2] = theta2
    return y0


def _t_end(args):
    t_end = args.t_end if args.t_end is not None else args.cycles * TWO_PI
    if not t_end > 0:
        raise ConfigError("run length must be positive")
    return t_end


def _metadata(traj, params, y0, t_end, sample_interval, extra=None):
    meta = {
        "version": __version__,
        "model": traj.model.tag,
        "columns": traj.columns,
        "params": asdict(params),
        "param_layer": type(params).__name__,
        "initial_state": [float(v) for v in y0],
        "t_end": float(t_end),
        "tol": traj.tol,
        "sample_interval": float(sample_interval),
        "samples": int(len(traj.times)),
        "stats": traj.stats,
    }
    meta.update(extra or {})
    return meta


# -- commands --------------------------------------------------------------------

def cmd_simulate(args):
    model = _model(args, "dimensionless")
    params = params_for(model, gather_values(args))
    t_end = _t_end(args)
    y0 = initial_state(model, params, args.theta1_0, args.theta2_0)
    traj = integrate(model, y0, params, t_end, args.tol, args.sample_interval)
    out = output_dir(args)
    atomic_write(out / "trajectory.csv", trajectory_csv(traj))
    atomic_write(out / "trajectory.json",
                 dumps(_metadata(traj, params, y0, t_end, args.sample_interval)))
    print(f"wrote {len(traj.times)} samples to {out / 'trajectory.csv'}")
    return EXIT_OK


def _engine_entry(result):
    if isinstance(result, PoincareSolution):
        return result.to_dict()
    entry = {"exists": False, "error": f"{type(result).__name__}: {result}"}
    if not isinstance(result, NoSolutionError):
        entry["exists"] = None
    return entry


def _agree(cf, eng) -> bool:
    """Existence matches and, where both exist, amplitude and stability agree."""
    if eng.get("exists") is None:
        return False
    if cf["exists"] != eng["exists"]:
        return False
    if not cf["exists"]:
        return True
    if abs(cf["amplitude"] - eng["amplitude"]) > AGREE_RTOL * max(1.0, abs(cf["amplitude"])):
        return False
    if cf["stable"] is not None and eng.get("stable") is not None:
        if cf.get("sufficient") is False and cf["regime"] == Regime.IN_PHASE.value:
            return True  # no stability verdict outside the sufficient conditions
        return cf["stable"] == eng["stable"]
    return True


def predict_report(model: ModelKind, params: PoincareParams, errata=False) -> dict:
    closed = {p.regime: p.to_dict() for p in closed_form_regimes(params, model, errata)}
    engine = engine_regimes(model, params)
    regimes = []
    for regime in (Regime.IN_PHASE, Regime.ANTI_PHASE):
        cf = closed[regime]
        eng = _engine_entry(engine[regime])
        regimes.append({"regime": regime.value, "closed_form": cf, "engine": eng,
                        "agree": _agree(cf, eng)})
    report = {"model": model.tag, "params": asdict(params), "errata": errata,
              "regimes": regimes}
    if model in (ModelKind.THREE_DOF, ModelKind.SMALL_SIGMA) and params.a > 0 and params.gamma:
        report["thresholds"] = regime_thresholds(params).to_dict()
    return report


def cmd_predict(args):
    model = _model(args, "three-dof")
    if not model.uses_poincare_params:
        raise ConfigError("predict needs one of small-sigma, three-dof, two-mass")
    params = params_for(model, gather_values(args))
    report = predict_report(model, params, args.errata)
    text = dumps(report)
    atomic_write(output_dir(args) / "prediction.json", text)
    sys.stdout.write(text)
    return EXIT_OK


def cmd_analyze(args):
    path = Path(args.input)
    model = None
    sidecar = path.with_suffix(".json")
    if sidecar.exists():
        try:
            model = ModelKind.parse(json.loads(sidecar.read_text())["model"])
        except (ValueError, KeyError, InvalidParameterError):
            model = None
    traj = read_trajectory_csv(path, model)
    report = detect_regime(traj, phase_tol=args.phase_tol, amp_tol=args.amp_tol)
    text = dumps(report.to_dict())
    atomic_write(output_dir(args) / "report.json", text)
    sys.stdout.write(text)
    return EXIT_OK


# sweep -----------------------------------------------------------------------------

def parse_grid(spec: str):
    try:
        axis, lo, hi, n = spec.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError:
        raise ConfigError(f"grid must be axis:lo:hi:n, got {spec!r}") from None
    if axis not in ALL_KEYS or axis in ("layer", "n"):
        raise ConfigError(f"cannot sweep over {axis!r}")
    if n < 0 or not (math.isfinite(lo) and math.isfinite(hi)):
        raise ConfigError("grid bounds must be finite and n >= 0")
    return axis, (np.linspace(lo, hi, n) if n != 1 else np.array([lo]))


SWEEP_REGIME_FIELDS = ("cf_exists", "cf_amplitude", "cf_stable", "eng_exists",
                       "eng_amplitude", "eng_stable", "agree")


def sweep_header(axis, simulate):
    cols = ["index", axis, "sigma_tilde"]
    for tag in ("in", "anti"):
        cols += [f"{tag}_{f}" for f in SWEEP_REGIME_FIELDS]
    if simulate:
        cols += ["sim_regime", "sim_amplitude1", "sim_amplitude2", "sim_settle_time"]
    return cols + ["error"]


def sweep_point(task):
    """One grid point; pure function of its arguments so workers stay interchangeable."""
    index, axis, value, values, model_name, sim = task
    model = ModelKind.parse(model_name)
    row = {"index": index, axis: value}
    point = dict(values)
    point[axis] = value
    errors = []
    try:
        params = params_for(model, point)
        try:
            row["sigma_tilde"] = sigma_tilde(params)
        except InvalidParameterError:
            pass
        report = predict_report(model, params)
        for tag, reg in zip(("in", "anti"), report["regimes"]):
            cf, eng = reg["closed_form"], reg["engine"]
            row.update({f"{tag}_cf_exists": cf["exists"], f"{tag}_cf_amplitude": cf["amplitude"],
                        f"{tag}_cf_stable": cf["stable"], f"{tag}_eng_exists": eng.get("exists"),
                        f"{tag}_eng_amplitude": eng.get("amplitude"),
                        f"{tag}_eng_stable": eng.get("stable"), f"{tag}_agree": reg["agree"]})
            if "error" in eng and eng.get("exists") is None:
                errors.append(eng["error"])
        if sim is not None:
            theta1, theta2, t_end, tol = sim
            traj = integrate(model, initial_state(model, params, theta1, theta2), params,
                             t_end, tol, TWO_PI / FIGURE_SAMPLES_PER_CYCLE)
            rep = detect_regime(traj)
            row.update({"sim_regime": rep.regime.value,
                        "sim_amplitude1": rep.asymptotic_amplitude[0],
                        "sim_amplitude2": rep.asymptotic_amplitude[1],
                        "sim_settle_time": rep.settle_time})
    except (HuygensError, ValueError, ArithmeticError) as exc:
        errors.append(f"{type(exc).__name__}: {exc}")
    row["error"] = "; ".join(errors)
    return row


def run_sweep(axis, grid, values, model, sim=None, workers=1):
    tasks = [(i, axis, float(v), values, model.cli_name, sim) for i, v in enumerate(grid)]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(sweep_point, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    return [sweep_point(t) for t in tasks]


def sweep_csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(row.get(c)) for c in header])
    return buf.getvalue()


def cmd_sweep(args):
    model = _model(args, "three-dof")
    if not model.uses_poincare_params:
        raise ConfigError("sweep needs one of small-sigma, three-dof, two-mass")
    if not args.grid:
        raise ConfigError("sweep needs --grid axis:lo:hi:n")
    axis, grid = parse_grid(args.grid)
    values = gather_values(args)
    if args.workers < 1:
        raise ConfigError("--workers must be at least 1")
    if len(grid):
        params_for(model, {**values, axis: float(grid[0])})  # fail fast on bad base config
    sim = (args.theta1_0, args.theta2_0, _t_end(args), args.tol) if args.simulate else None
    rows = run_sweep(axis, grid, values, model, sim, args.workers)
    out = output_dir(args)
    atomic_write(out / "sweep.csv", sweep_csv(rows, sweep_header(axis, args.simulate)))
    print(f"wrote {len(rows)} rows to {out / 'sweep.csv'}")
    return EXIT_OK


# reproduce -------------------------------------------------------------------------

def load_figures() -> dict:
    text = resources.files("huygens").joinpath("data/figures.json").read_text()
    return json.loads(text)


def figure_params(entry) -> DimensionlessParams:
    """Dimensionless parameters of a figure entry; ``epsilon`` is always dimensionless."""
    p = dict(entry["params"])
    if entry["layer"] == "dimensionless":
        return DimensionlessParams(**p)
    eps = entry["epsilon"]
    phys = PhysicalParams(e=eps * p["m"] * p["g"] * p["l"], **p)
    return to_dimensionless(phys)


def run_figure(fig_id, tol=1e-9, epsilon=None):
    """Integrate a bundled figure experiment; returns ``(entry, params, trajectory, report)``."""
    figures = load_figures()["figures"]
    if fig_id not in figures:
        raise ConfigError(f"unknown figure {fig_id!r}; choose from {', '.join(sorted(figures))}")
    entry = figures[fig_id]
    params = figure_params(entry)
    if epsilon is not None:
        params = DimensionlessParams(params.sigma, params.omega2, params.beta, params.gamma,
                                     epsilon, params.n)
    y0 = initial_state(ModelKind.DIMENSIONLESS, params, *entry["initial"])
    traj = integrate(ModelKind.DIMENSIONLESS, y0, params, entry["cycles"] * TWO_PI, tol,
                     TWO_PI / FIGURE_SAMPLES_PER_CYCLE)
    return entry, params, traj, detect_regime(traj)


def figure_summary(fig_id, entry, params, report: SyncRegimeReport):
    d = report.to_dict()
    d["settle_cycles"] = None if report.settle_time is None else report.settle_time / TWO_PI
    return {"figure": fig_id, "title": entry["title"], "params": asdict(params),
            "initial": entry["initial"], "cycles": entry["cycles"], "report": d}


def cmd_reproduce(args):
    if not args.figure:
        raise ConfigError("reproduce needs --figure")
    entry, params, traj, report = run_figure(args.figure, args.tol, args.epsilon)
    out = output_dir(args)
    fid = args.figure
    atomic_write(out / f"{fid}.csv", trajectory_csv(traj))
    summary = figure_summary(fid, entry, params, report)
    atomic_write(out / f"{fid}_report.json", dumps(summary))
    atomic_write(out / f"{fid}.svg", render_svg(traj, entry.get("panel", "sum"),
                                                f"{fid}: {entry['title']}"))
    settle = summary["report"]["settle_cycles"]
    print(f"{fid}: {report.regime.value}"
          + (f", settled after {settle:.0f} cycles" if settle is not None else ", not settled")
          + (", with beats" if report.beats else ""))
    return EXIT_OK


# -- entry point -----------------------------------------------------------------------

def build_parser():
    parser = _Parser(prog="huygens", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("simulate", help="integrate a model")
    _add_param_args(p)
    _add_run_args(p)
    _add_out(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("predict", help="closed-form vs engine regime predictions")
    _add_param_args(p)
    p.add_argument("--errata", action="store_true",
                   help="apply the corrected period and stability formulas")
    _add_out(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("analyze", help="classify a trajectory CSV")
    p.add_argument("input", help="trajectory CSV written by simulate or reproduce")
    p.add_argument("--phase-tol", type=float, default=0.05)
    p.add_argument("--amp-tol", type=float, default=0.02)
    _add_out(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("sweep", help="regime map over a parameter grid")
    _add_param_args(p)
    _add_run_args(p)
    p.add_argument("--grid", help="axis:lo:hi:n, e.g. sigma:0.01:0.5:50")
    p.add_argument("--simulate", action="store_true", help="also simulate every grid point")
    p.add_argument("--workers", type=int, default=1)
    _add_out(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("reproduce", help="run a bundled figure experiment")
    p.add_argument("--figure", help="figure id (fig2 ... fig7)")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--epsilon", type=float, default=None,
                   help="override the escapement strength of the figure")
    _add_out(p)
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except (ConfigError, InvalidParameterError, ShapeError, InsufficientDataError) as exc:
        print(f"huygens: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (HuygensError, ArithmeticError) as exc:
        print(f"huygens: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
