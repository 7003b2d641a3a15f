"""Command-line driver: ``gup3d <command> [options]``.

Exit codes: 0 pass, 1 assertion failure, 2 configuration error,
3 accuracy warning or endpoint minimum, 4 output (I/O) failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import warnings
from dataclasses import asdict, dataclass, field, fields
from typing import Optional

import numpy as np

from . import __version__
from .analysis import (
    BoundFunction,
    boosted_experiment,
    minimize_bound,
    robertson_suite,
    spherical_experiment,
)
from .model import (
    AnsatzModel,
    Bound,
    DomainError,
    KernelForm,
    Kind,
    PhysicalScales,
    commutator_kernel,
    condition_residual_1d,
    scalar_bound_check,
)
from .states import AccuracyError, AccuracyWarning, Measure

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_ACCURACY = 3
EXIT_IO = 4

OUTPUT_DIR_ENV = "GUP3D_OUTPUT_DIR"

CONDITION_TOL = 1e-12
BOUND_SLACK_TOL = 1e-12
TAYLOR_RATIO = 16.0
TAYLOR_RATIO_TOL = 0.25


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    model: str = "tanh"
    p_max: float = 1.0
    hbar: float = 1.0
    measure: str = "weighted"
    grid: int = 64
    extent: float = 8.0
    order: int = 4
    sigma_min: float = 0.05
    sigma_max: float = 20.0
    scan_points: int = 40
    seed: int = 0
    n_states: int = 200
    p1: list = field(default_factory=lambda: [0.0, 0.5, 1.0, 2.0])
    i: int = 2
    j: int = 2
    direction: int = 1
    p_samples: list = field(default_factory=lambda: [0.0, 0.05, 0.1, 0.2, 0.3, 0.5, 1.0, 2.0, 5.0])
    output: Optional[str] = None
    format: str = "json"

    def validate(self) -> "RunConfig":
        try:
            Kind(self.model)
        except ValueError:
            raise ConfigError(f"unknown model {self.model!r}") from None
        try:
            PhysicalScales(float(self.hbar), float(self.p_max))
        except (DomainError, TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from None
        if self.measure not in ("flat", "weighted"):
            raise ConfigError("measure must be flat or weighted")
        g = self.grid
        if not (isinstance(g, int) and 16 <= g <= 256 and g & (g - 1) == 0):
            raise ConfigError("grid must be a power of two between 16 and 256")
        if not (math.isfinite(self.extent) and self.extent > 0):
            raise ConfigError("extent must be positive")
        if self.order not in (2, 4):
            raise ConfigError("order must be 2 or 4")
        if not (0 < self.sigma_min < self.sigma_max and math.isfinite(self.sigma_max)):
            raise ConfigError("need 0 < sigma_min < sigma_max")
        if self.scan_points < 3:
            raise ConfigError("scan_points must be at least 3")
        if self.n_states < 1:
            raise ConfigError("n_states must be at least 1")
        if any(not (math.isfinite(v) and v >= 0) for v in self.p1):
            raise ConfigError("p1 values must be non-negative")
        if any(not (math.isfinite(v) and v >= 0) for v in self.p_samples):
            raise ConfigError("p samples must be non-negative")
        for name in ("i", "j", "direction"):
            if getattr(self, name) not in (1, 2, 3):
                raise ConfigError(f"{name} must be 1, 2 or 3")
        if self.format not in ("json", "csv"):
            raise ConfigError("format must be json or csv")
        return self

    @property
    def ansatz(self) -> AnsatzModel:
        return AnsatzModel.of(self.model, self.hbar, self.p_max)

    @property
    def measure_obj(self) -> Measure:
        return Measure.flat() if self.measure == "flat" else Measure.weighted(self.ansatz)


# -- output -----------------------------------------------------------------


def _clean(obj):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to None."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    return obj


def to_json(payload) -> str:
    return json.dumps(_clean(payload), sort_keys=True, indent=2) + "\n"


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        out = []
        for key in header:
            v = _clean(row.get(key))
            out.append("" if v is None else (repr(v) if isinstance(v, float) else v))
        w.writerow(out)
    return buf.getvalue()


def _emit(cfg: RunConfig, command: str, payload, header, rows) -> int:
    text = to_json(payload) if cfg.format == "json" else to_csv(header, rows)
    path = cfg.output
    if path is None and os.environ.get(OUTPUT_DIR_ENV):
        path = os.path.join(os.environ[OUTPUT_DIR_ENV], f"{command}.{cfg.format}")
    if path is None:
        sys.stdout.write(text)
        return EXIT_OK
    try:
        parent = os.path.dirname(os.path.abspath(path))
        os.makedirs(parent, exist_ok=True)
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: cannot write {path}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


# -- commands ---------------------------------------------------------------


def verify_suites():
    """Scalar-layer invariant suites; each entry carries its worst violation."""
    suites = []
    p = np.geomspace(1e-6, 10.0, 10_000)
    for kind in (Kind.TANH, Kind.ARCTAN):
        m = AnsatzModel(kind)
        worst = float(np.max(np.abs(condition_residual_1d(m, p * m.p_max))))
        suites.append(
            {"suite": f"condition-{kind.value}", "max_violation": worst, "tolerance": CONDITION_TOL, "passed": worst < CONDITION_TOL}
        )
    x = np.geomspace(1e-6, 50.0, 1_000_000)
    for b in Bound:
        worst = float(max(0.0, -np.min(scalar_bound_check(b, x))))
        suites.append(
            {"suite": f"bound-{b.value}", "max_violation": worst, "tolerance": BOUND_SLACK_TOL, "passed": worst <= BOUND_SLACK_TOL}
        )
    # exact transverse kernel against the expanded forms
    r = np.geomspace(1e-4, 10.0, 2000)
    vecs = np.stack([np.zeros_like(r), r, np.zeros_like(r)], axis=1)  # transverse to axis 1
    m = AnsatzModel(Kind.TANH)
    gap = commutator_kernel(m, KernelForm.EXACT, vecs, 1, 1) - commutator_kernel(m, KernelForm.PAPER_SECOND_ORDER, vecs, 1, 1)
    worst = float(max(0.0, -np.min(gap)))
    suites.append({"suite": "kernel-lower-bound-tanh", "max_violation": worst, "tolerance": 0.0, "passed": worst <= 0.0})
    a = AnsatzModel(Kind.ARCTAN)
    ex = commutator_kernel(a, KernelForm.EXACT, vecs, 1, 1)
    sq = commutator_kernel(a, KernelForm.SQRT_LOWER_BOUND, vecs, 1, 1)
    worst = float(max(0.0, -np.min(ex - sq), -np.min(sq - 1.0)))
    suites.append({"suite": "kernel-sqrt-bound-arctan", "max_violation": worst, "tolerance": 0.0, "passed": worst <= 0.0})
    for kind in (Kind.TANH, Kind.ARCTAN):
        ratios = taylor_ratios(AnsatzModel(kind))
        worst = float(np.max(np.abs(ratios / TAYLOR_RATIO - 1.0)))
        suites.append(
            {"suite": f"kernel-taylor-order-{kind.value}", "max_violation": worst, "tolerance": TAYLOR_RATIO_TOL, "passed": worst <= TAYLOR_RATIO_TOL}
        )
    for b in (BoundFunction(1.0), BoundFunction(math.pi**2 / 8.0)):
        res = minimize_bound(b)
        worst = max(abs(res.argmin / b.analytic_argmin - 1.0), abs(res.min / b.analytic_min - 1.0))
        suites.append({"suite": f"bound-minimum-c={b.c:.12g}", "max_violation": worst, "tolerance": 1e-8, "passed": worst < 1e-8})
    return suites


def taylor_ratios(model: AnsatzModel, top: float = 0.3, halvings: int = 6):
    """|Exact - Taylor2nd| at |p| over its value at |p|/2, for |p| <= top p_max."""
    r = top * model.p_max / 2.0 ** np.arange(halvings + 1)
    vecs = np.stack([np.zeros_like(r), r, np.zeros_like(r)], axis=1)
    d = np.abs(
        commutator_kernel(model, KernelForm.EXACT, vecs, 1, 1)
        - commutator_kernel(model, KernelForm.TAYLOR_SECOND_ORDER, vecs, 1, 1)
    )
    return d[:-1] / d[1:]


def cmd_verify(cfg: RunConfig):
    suites = verify_suites()
    passed = all(s["passed"] for s in suites)
    bounds = [s for s in suites if s["suite"].startswith("bound-") and not s["suite"].startswith("bound-minimum")]
    payload = {"command": "verify", "passed": passed, "suites": suites, "bounds": bounds, "version": __version__}
    return payload, ["suite", "max_violation", "tolerance", "passed"], suites, EXIT_OK if passed else EXIT_FAIL


def commutator_rows(cfg: RunConfig):
    m = cfg.ansatz
    rows = []
    for x in cfg.p_samples:
        vec = np.zeros(3)
        vec[cfg.direction - 1] = x * m.p_max
        row = {"p_over_pmax": float(x)}
        for form, key in (
            (KernelForm.EXACT, "exact"),
            (KernelForm.PAPER_SECOND_ORDER, "paper2nd"),
            (KernelForm.TAYLOR_SECOND_ORDER, "taylor2nd"),
            (KernelForm.SQRT_LOWER_BOUND, "sqrt_bound"),
        ):
            try:
                row[key] = commutator_kernel(m, form, vec, cfg.i, cfg.j)
            except ValueError:
                row[key] = None
        rows.append(row)
    return rows


def cmd_commutator_table(cfg: RunConfig):
    rows = commutator_rows(cfg)
    payload = {"command": "commutator-table", "model": cfg.model, "i": cfg.i, "j": cfg.j, "direction": cfg.direction, "rows": rows}
    return payload, ["p_over_pmax", "exact", "paper2nd", "taylor2nd", "sqrt_bound"], rows, EXIT_OK


SPHERICAL_COLUMNS = [
    "sigma",
    "delta_x",
    "delta_p",
    "canonical_delta_p",
    "robertson_bound",
    "second_order_bound",
    "bound_value",
    "rough_estimate",
]


def cmd_spherical(cfg: RunConfig):
    m = cfg.ansatz
    res = spherical_experiment(m, (cfg.sigma_min, cfg.sigma_max), cfg.measure_obj, 1, cfg.scan_points)
    payload = {
        "command": "spherical",
        "model": cfg.model,
        "measure": cfg.measure,
        "hbar": cfg.hbar,
        "p_max": cfg.p_max,
        "status": res.status,
        "argmin": res.argmin,
        "min": res.min if res.interior else None,
        "endpoint_value": None if res.interior else res.min,
        "tolerance": res.tolerance,
        "evaluations": res.evaluations,
        "rows": res.rows,
    }
    return payload, SPHERICAL_COLUMNS, res.rows, EXIT_OK if res.interior else EXIT_ACCURACY


BOOSTED_COLUMNS = ["p1", "direction", "status", "argmin", "min", "ratio", "estimate_state", "estimate_p1", "factor_p1"]


def cmd_boosted(cfg: RunConfig):
    m = cfg.ansatz
    records, rows = [], []
    ok = True
    for p1 in cfg.p1:
        res = boosted_experiment(m, p1 * m.p_max, (cfg.sigma_min, cfg.sigma_max), cfg.measure_obj, cfg.scan_points)
        ok = ok and res.interior
        rec = {
            "p1": res.p1,
            "ratio": res.ratio,
            "estimate_state": res.estimate_state,
            "estimate_p1": res.estimate_p1,
            "factor_p1": res.factor_p1,
        }
        for direction, scan in ((1, res.x1), (2, res.x2)):
            rec[f"x{direction}"] = {"status": scan.status, "argmin": scan.argmin, "min": scan.min, "tolerance": scan.tolerance}
            rows.append({**rec, "direction": direction, "status": scan.status, "argmin": scan.argmin, "min": scan.min})
        records.append(rec)
    payload = {"command": "boosted", "model": cfg.model, "measure": cfg.measure, "hbar": cfg.hbar, "p_max": cfg.p_max, "records": records}
    return payload, BOOSTED_COLUMNS, rows, EXIT_OK if ok else EXIT_ACCURACY


def cmd_robertson(cfg: RunConfig):
    summary = robertson_suite(cfg.ansatz, cfg.n_states, cfg.seed, cfg.measure_obj)
    payload = {"command": "robertson", **summary.to_dict()}
    code = EXIT_OK
    if summary.accuracy_failures:
        code = EXIT_ACCURACY
    if summary.robertson_violations or summary.cap_violations or summary.rms_violations:
        code = EXIT_FAIL
    return payload, ["state", "components", "min_slack", "max_delta_p"], summary.states, code


COMMANDS = {
    "verify": cmd_verify,
    "commutator-table": cmd_commutator_table,
    "spherical": cmd_spherical,
    "boosted": cmd_boosted,
    "robertson": cmd_robertson,
}


# -- argument parsing -------------------------------------------------------


def _floats(text: str):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with RunConfig fields; flags override it")
    common.add_argument("--model", choices=[k.value for k in Kind], default=None)
    common.add_argument("--pmax", dest="p_max", type=float, default=None)
    common.add_argument("--hbar", type=float, default=None)
    common.add_argument("--measure", choices=["flat", "weighted"], default=None)
    common.add_argument("--grid", type=int, default=None)
    common.add_argument("--extent", type=float, default=None)
    common.add_argument("--order", type=int, choices=[2, 4], default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--format", choices=["json", "csv"], default=None)
    common.add_argument("--output", default=None)
    common.add_argument("--sigma-min", dest="sigma_min", type=float, default=None)
    common.add_argument("--sigma-max", dest="sigma_max", type=float, default=None)
    common.add_argument("--scan-points", dest="scan_points", type=int, default=None)

    parser = argparse.ArgumentParser(prog="gup3d", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common], help="scalar-layer invariant suites")
    t = sub.add_parser("commutator-table", parents=[common], help="exact vs expanded commutator kernels")
    t.add_argument("--i", type=int, default=None)
    t.add_argument("--j", type=int, default=None)
    t.add_argument("--direction", type=int, default=None, help="axis along which p points")
    t.add_argument("--p-samples", dest="p_samples", type=_floats, nargs="+", default=None, help="|p|/p_max values (space or comma separated)")
    sub.add_parser("spherical", parents=[common], help="isotropic variational scan")
    b = sub.add_parser("boosted", parents=[common], help="direction-dependent minima")
    b.add_argument("--p1", type=_floats, nargs="+", default=None, help="mean momenta in units of p_max (space or comma separated)")
    r = sub.add_parser("robertson", parents=[common], help="Robertson suite on random states")
    r.add_argument("--n-states", dest="n_states", type=int, default=None)
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    values = {}
    if args.config:
        try:
            with open(args.config) as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        known = {f.name for f in fields(RunConfig)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        values.update(data)
    for f in fields(RunConfig):
        v = getattr(args, f.name, None)
        if v is not None:
            if f.name in ("p1", "p_samples"):
                v = [x for chunk in v for x in chunk]
            values[f.name] = v
    try:
        cfg = RunConfig(**values)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
    return cfg.validate()


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = load_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", AccuracyWarning)
        try:
            payload, header, rows, code = COMMANDS[args.command](cfg)
        except AccuracyError as exc:
            print(f"accuracy failure: {exc}", file=sys.stderr)
            return EXIT_ACCURACY
    notes = sorted({str(w.message) for w in caught if issubclass(w.category, AccuracyWarning)})
    if notes:
        payload["warnings"] = notes
        if code == EXIT_OK:
            code = EXIT_ACCURACY
    payload["config"] = {k: v for k, v in asdict(cfg).items() if k not in ("output",)}
    io_code = _emit(cfg, args.command, payload, header, rows)
    return io_code or code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
