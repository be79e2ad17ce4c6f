"""Command-line interface: ``nhjcm <command> [options]``.

Exit codes: 0 success, 2 invalid input, 3 numerical failure, 4 I/O failure.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import __version__
from .errors import DivergenceError, NHJCMError, NumericalError, ValidationError
from .model import PARAM_NAMES, Branch, LevelIndex, ModelKind, ModelParams, eigen_closed, levels
from .qfi import qfi_closed_at, qfi_near_ep, qfi_numeric
from .sweep import (
    AXIS_SCALES,
    Axis,
    emit,
    emit_table,
    load_config,
    presets,
    run_jobs,
    specs_from_mapping,
    with_overrides,
)
from .symmetry import EP_PARAMETERS, classify_phase, ep_locate, parity_expectation, ptk_expectation
from .texture import Grid1D, Plane, default_grid, texture, winding


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", choices=["hgamma", "hgammaU", "generic"], help="model kind")
    common.add_argument("--config", help="TOML file with parameters or sweep jobs")
    common.add_argument("--format", choices=["csv", "jsonl"], default="csv")
    common.add_argument("--out", default="-", help="output path ('-' for stdout)")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)
    for name in PARAM_NAMES:
        common.add_argument(f"--{name}", type=float, dest=f"param_{name}", metavar="X")
    return common


def _level_args(parser):
    parser.add_argument("--n", type=int, default=1)
    parser.add_argument("--eta", default="+", help="branch: + or -")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="nhjcm", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[common], help="closed-form energies up to n_max")
    p.add_argument("--n-max", type=int, default=5)

    p = sub.add_parser("ep", parents=[common], help="exceptional points of one parameter")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--param", required=True)

    p = sub.add_parser("qfi", parents=[common], help="quantum Fisher information at one point")
    _level_args(p)
    p.add_argument("--param", required=True)
    p.add_argument("--method", choices=["closed", "near", "numeric", "all"], default="all")

    p = sub.add_parser("texture", parents=[common], help="real-space spin texture of one level")
    _level_args(p)
    p.add_argument("--grid", help="x_min:x_max:count (count odd)")

    p = sub.add_parser("winding", parents=[common], help="spin winding numbers of one level")
    _level_args(p)
    p.add_argument("--plane", choices=["zx", "yx", "zy", "all"], default="all")

    p = sub.add_parser("sweep", parents=[common], help="parameter sweeps and phase diagrams")
    p.add_argument("--preset", choices=sorted(presets()))
    p.add_argument("--axis", action="append", help=f"name:start:stop:count[:scale], scale in {AXIS_SCALES}")
    p.add_argument("--set", action="append", default=[], metavar="NAME=VALUE", help="fix a parameter")
    p.add_argument("--levels", help="comma-separated n values")
    p.add_argument("--etas", help="comma-separated branches, e.g. +,-")
    p.add_argument("--observables", help="comma-separated observable names")
    p.add_argument("--qfi-param")
    p.add_argument("--qfi-scale", choices=["raw", "inverse_sqrt", "collapse"])
    p.add_argument("--list-presets", action="store_true")

    p = sub.add_parser("verify", parents=[common], help="randomized checks against the dense oracle")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--n-max", type=int, default=5)
    return parser


# ---------------------------------------------------------------------------
# helpers

def _config(args) -> dict:
    return load_config(args.config) if args.config else {}


def _params(args, cfg: dict) -> ModelParams:
    kind = args.model or cfg.get("model", "generic")
    values = {k: float(v) for k, v in cfg.get("params", cfg.get("fixed", {})).items()}
    for name in PARAM_NAMES:
        v = getattr(args, f"param_{name}")
        if v is not None:
            values[name] = v
    values.setdefault("omega", 1.0)
    kind = ModelKind.parse(kind)
    pinned = set(PARAM_NAMES) - _free(kind)
    extra = sorted(k for k in values if k in pinned and values[k] != 0)
    if extra:
        raise ValidationError(f"{', '.join(extra)} not settable in {kind.value}")
    return ModelParams.build(kind, **{k: v for k, v in values.items() if k not in pinned})


def _free(kind: ModelKind) -> set:
    if kind is ModelKind.PT:
        return {"omega", "gamma", "g"}
    if kind is ModelKind.ANTI_PT:
        return {"omega", "Omega", "Gamma"}
    return set(PARAM_NAMES)


def _level(args) -> LevelIndex:
    if args.n < 0:
        raise ValidationError(f"n must be >= 0, got {args.n}")
    return LevelIndex(args.n, Branch.parse(args.eta))


def _phase(p: ModelParams, n: int) -> str:
    if n == 0 or p.kind not in EP_PARAMETERS:
        return ""
    return str(classify_phase(p, n))


def _csv_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def parse_axis(text: str) -> Axis:
    parts = text.split(":")
    if len(parts) not in (4, 5):
        raise ValidationError(f"axis {text!r} must be name:start:stop:count[:scale]")
    try:
        start, stop, count = float(parts[1]), float(parts[2]), int(parts[3])
    except ValueError as exc:
        raise ValidationError(f"axis {text!r}: {exc}") from exc
    return Axis(parts[0], start, stop, count, parts[4] if len(parts) == 5 else "linear")


def _parse_set(items) -> dict:
    out = {}
    for item in items:
        name, sep, value = item.partition("=")
        if not sep:
            raise ValidationError(f"--set expects NAME=VALUE, got {item!r}")
        try:
            out[name.strip()] = float(value)
        except ValueError as exc:
            raise ValidationError(f"--set {item!r}: {exc}") from exc
    return out


# ---------------------------------------------------------------------------
# commands

def cmd_spectrum(args):
    p = _params(args, _config(args))
    if args.n_max < 0:
        raise ValidationError("--n-max must be >= 0")
    rows = []
    for lvl in levels(args.n_max):
        e = eigen_closed(p, lvl).energy
        eta = "" if lvl.n == 0 else lvl.eta.symbol
        rows.append((lvl.n, eta, e.real, e.imag, _phase(p, lvl.n)))
    emit_table(("n", "eta", "energy_re", "energy_im", "phase"), rows, args.format, args.out)


def cmd_ep(args):
    p = _params(args, _config(args))
    eps = ep_locate(p, args.n, args.param)
    rows = [(eps.parameter_name, eps.n, v) for v in eps.values]
    emit_table(("parameter", "n", "value"), rows, args.format, args.out)


def cmd_qfi(args):
    p = _params(args, _config(args))
    level = _level(args)
    rows = []
    closed = qfi_closed_at(p, level, args.param)
    if args.method in ("closed", "all"):
        rows.append(("closed", closed.value, closed.lam, closed.lam_ep))
    if args.method in ("near", "all") and level.n >= 1:
        value = math.inf if closed.lam == closed.lam_ep else qfi_near_ep(closed.lam, closed.lam_ep)
        rows.append(("near", value, closed.lam, closed.lam_ep))
    if args.method in ("numeric", "all"):
        try:
            value = qfi_numeric(p, level, args.param).value
        except DivergenceError:
            value = math.inf
        rows.append(("numeric", value, closed.lam, closed.lam_ep))
    emit_table(("method", "value", "lambda", "lambda_ep"), rows, args.format, args.out)


def cmd_texture(args):
    p = _params(args, _config(args))
    level = _level(args)
    sol = eigen_closed(p, level)
    grid = default_grid(level.n)
    if args.grid:
        parts = args.grid.split(":")
        if len(parts) != 3:
            raise ValidationError("--grid expects x_min:x_max:count")
        try:
            grid = Grid1D(float(parts[0]), float(parts[1]), int(parts[2]))
        except ValueError as exc:
            raise ValidationError(f"--grid: {exc}") from exc
    tex = texture(sol, grid)
    rows = zip(tex.x, tex.s_x, tex.s_y, tex.s_z, tex.rho)
    emit_table(("x", "s_x", "s_y", "s_z", "rho"), rows, args.format, args.out)


def cmd_winding(args):
    p = _params(args, _config(args))
    level = _level(args)
    sol = eigen_closed(p, level)
    planes = list(Plane) if args.plane == "all" else [Plane(args.plane)]
    rows = []
    for plane in planes:
        w = winding(sol, plane)
        rows.append((plane.value, w.raw, w.snapped, w.status, _phase(p, level.n)))
    emit_table(("plane", "raw", "snapped", "status", "phase"), rows, args.format, args.out)


def cmd_sweep(args):
    if args.list_presets:
        rows = [(name, spec.name, spec.kind.value) for name, specs in presets().items() for spec in specs]
        emit_table(("preset", "job", "model"), rows, args.format, args.out)
        return
    cfg = _config(args)
    if args.preset:
        specs = presets()[args.preset]
    elif cfg:
        specs = specs_from_mapping(cfg)
    elif args.axis:
        if not args.model:
            raise ValidationError("--model is required without --preset or --config")
        specs = None
    else:
        raise ValidationError("sweep needs --preset, --config or --axis")
    fixed = _parse_set(args.set)
    for name in PARAM_NAMES:
        v = getattr(args, f"param_{name}")
        if v is not None:
            fixed[name] = v
    changes = dict(
        kind=ModelKind.parse(args.model) if args.model else None,
        axes=tuple(parse_axis(a) for a in args.axis) if args.axis else None,
        levels=tuple(int(n) for n in _csv_list(args.levels)) if args.levels else None,
        branches=tuple(_csv_list(args.etas)) if args.etas else None,
        observables=tuple(_csv_list(args.observables)) if args.observables else None,
        qfi_parameter=args.qfi_param,
        qfi_scale=args.qfi_scale,
        fixed=fixed or None,
    )
    if specs is None:
        from .sweep import SweepSpec

        changes = {k: v for k, v in changes.items() if v is not None}
        changes.setdefault("fixed", {})
        changes.setdefault("observables", ("ReE", "ImE"))
        specs = [SweepSpec(**changes)]
    else:
        try:
            specs = [with_overrides(s, **changes) for s in specs]
        except ValueError as exc:
            raise ValidationError(str(exc)) from exc
    if args.threads < 1:
        raise ValidationError("--threads must be >= 1")
    emit(run_jobs(specs, threads=args.threads), args.format, args.out)


def verify_rows(trials: int, n_max: int, seed: int) -> list[tuple]:
    """Spectrum, EP and QFI checks against the dense oracle; one row per check."""
    from .oracle import coalescence_overlap, max_spectrum_error, random_params

    if trials < 1 or n_max < 1:
        raise ValidationError("--trials and --n-max must be >= 1")
    rng = np.random.default_rng(seed)
    rows = []
    for kind in ModelKind:
        err = max(max_spectrum_error(random_params(kind, rng), n_max) for _ in range(trials))
        rows.append((f"spectrum_{kind.value}", err, 1e-10, err < 1e-10))
    worst = 0.0
    for n in range(1, n_max + 1):
        for p in (ModelParams.hgamma(1.0, 2 * math.sqrt(n) * 0.4, 0.4),
                  ModelParams.hgammaU(0.3, 1.0, 0.7 / (2 * math.sqrt(n)))):
            worst = max(worst, 1 - coalescence_overlap(p, n))
    rows.append(("ep_coalescence", worst, 1e-6, worst < 1e-6))
    worst = 0.0
    for _ in range(trials // 10 + 1):
        p = random_params(ModelKind.PT, rng)
        for name in ("g", "gamma"):
            closed = qfi_closed_at(p, LevelIndex(1), name)
            if closed.lam_ep > 0 and 0.05 < abs(closed.lam - closed.lam_ep) / closed.lam_ep and closed.lam > 0:
                worst = max(worst, abs(qfi_numeric(p, LevelIndex(1), name).value / closed.value - 1))
    rows.append(("qfi_numeric_vs_closed", worst, 1e-3, worst < 1e-3))
    return rows


def cmd_verify(args):
    rows = verify_rows(args.trials, args.n_max, args.seed)
    emit_table(("check", "value", "threshold", "pass"), rows, args.format, args.out)
    failed = [r[0] for r in rows if not r[3]]
    if failed:
        raise NumericalError(f"verification failed: {', '.join(failed)}")


COMMANDS = {
    "spectrum": cmd_spectrum,
    "ep": cmd_ep,
    "qfi": cmd_qfi,
    "texture": cmd_texture,
    "winding": cmd_winding,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except NHJCMError as exc:
        print(f"nhjcm: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except BrokenPipeError:
        # reader closed early (e.g. piped into head); silence the flush at exit
        import os

        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
    return 0


if __name__ == "__main__":
    sys.exit(main())
