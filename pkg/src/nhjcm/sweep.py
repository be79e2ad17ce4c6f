"""Parameter sweeps, phase-diagram grids and their flat-file output.

A :class:`SweepSpec` describes one job: a model, fixed parameters, one or two
swept axes, the levels to evaluate and the observables to record.  Rows come
out in a fixed order, (grid index, n, eta, observable), followed by the EP
marker rows, so the same spec always produces byte-identical files no
matter how many worker threads evaluate the grid.
"""

from __future__ import annotations

import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import IO, Iterable, Sequence

import numpy as np

from .errors import NHJCMError, OutputError, ValidationError
from .model import PARAM_NAMES, Branch, LevelIndex, ModelKind, ModelParams, discriminant, eigen_closed
from .qfi import _axis, qfi_closed, qfi_numeric
from .symmetry import EP_PARAMETERS, classify_phase, ep_locate, ptk_expectation
from .texture import Grid1D, default_grid, winding

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

OBSERVABLES = (
    "ReE",
    "ImE",
    "PTK",
    "QFI_closed",
    "QFI_numeric",
    "winding_zx",
    "winding_yx",
    "winding_zy",
    "phase",
    "EP_markers",
)
QFI_SCALES = ("raw", "inverse_sqrt", "collapse")
AXIS_SCALES = ("linear", "log", "ep_log")

FREE_PARAMS = {
    ModelKind.PT: ("omega", "gamma", "g"),
    ModelKind.ANTI_PT: ("omega", "Omega", "Gamma"),
    ModelKind.GENERIC: PARAM_NAMES,
}


@dataclass(frozen=True)
class Axis:
    """One swept parameter.

    ``scale="ep_log"`` reads start/stop as signed relative distances r from
    the EP of this parameter (first selected level) and sweeps
    lam_ep * (1 + r) with |r| log-spaced.
    """

    name: str
    start: float
    stop: float
    count: int
    scale: str = "linear"

    def __post_init__(self):
        if self.scale not in AXIS_SCALES:
            raise ValidationError(f"axis scale must be one of {AXIS_SCALES}, got {self.scale!r}")
        if not (math.isfinite(self.start) and math.isfinite(self.stop)):
            raise ValidationError(f"axis {self.name} range must be finite")
        if isinstance(self.count, bool) or int(self.count) != self.count or self.count < 2:
            raise ValidationError(f"axis {self.name} needs count >= 2, got {self.count!r}")
        if self.scale in ("log", "ep_log"):
            if self.start == 0 or self.stop == 0 or (self.start > 0) != (self.stop > 0):
                raise ValidationError(f"{self.scale} axis {self.name} needs nonzero bounds of one sign")

    def values(self, lam_ep: float | None = None) -> np.ndarray:
        if self.scale == "linear":
            return np.linspace(self.start, self.stop, int(self.count))
        if self.scale == "log":
            sign = 1.0 if self.start > 0 else -1.0
            return sign * np.geomspace(abs(self.start), abs(self.stop), int(self.count))
        if lam_ep is None or not lam_ep > 0:
            raise ValidationError(f"axis {self.name} has no EP to measure from")
        sign = 1.0 if self.start > 0 else -1.0
        return lam_ep * (1 + sign * np.geomspace(abs(self.start), abs(self.stop), int(self.count)))


@dataclass(frozen=True)
class SweepSpec:
    kind: ModelKind
    fixed: dict
    axes: tuple
    levels: tuple = (1,)
    branches: tuple = (Branch.MINUS, Branch.PLUS)
    observables: tuple = ("ReE", "ImE")
    qfi_parameter: str | None = None
    qfi_scale: str = "raw"
    g_in_gs_units: bool = False
    grid_count: int = 4097
    name: str = "sweep"

    def __post_init__(self):
        object.__setattr__(self, "kind", self.kind if isinstance(self.kind, ModelKind) else ModelKind.parse(self.kind))
        object.__setattr__(self, "axes", tuple(a if isinstance(a, Axis) else Axis(**a) for a in self.axes))
        object.__setattr__(self, "levels", tuple(sorted({int(n) for n in self.levels})))
        object.__setattr__(self, "branches", tuple(sorted({Branch.parse(b) for b in self.branches})))
        object.__setattr__(self, "fixed", {k: float(v) for k, v in dict(self.fixed).items()})
        self.validate()

    def validate(self):
        if not 1 <= len(self.axes) <= 2:
            raise ValidationError("a sweep needs one or two axes")
        free = FREE_PARAMS[self.kind]
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise ValidationError("axes must sweep different parameters")
        for name in names + list(self.fixed):
            if name not in free:
                raise ValidationError(f"parameter {name!r} is not free in model {self.kind.value}; use {', '.join(free)}")
        if not self.observables:
            raise ValidationError("at least one observable is required")
        unknown = [o for o in self.observables if o not in OBSERVABLES]
        if unknown:
            raise ValidationError(f"unknown observable(s) {unknown}; choose from {', '.join(OBSERVABLES)}")
        if not self.levels or min(self.levels) < 0:
            raise ValidationError("levels must be a nonempty list of n >= 0")
        if not self.branches:
            raise ValidationError("at least one branch is required")
        if self.qfi_scale not in QFI_SCALES:
            raise ValidationError(f"qfi scale must be one of {QFI_SCALES}")
        if self.wants_qfi:
            if self.kind not in EP_PARAMETERS:
                raise ValidationError("QFI observables need the hgamma or hgammaU model")
            if self.qfi_name not in EP_PARAMETERS[self.kind]:
                raise ValidationError(f"QFI parameter {self.qfi_name!r} has no EP in {self.kind.value}")
        if self.g_in_gs_units and self.kind is not ModelKind.PT:
            raise ValidationError("g in units of g_s only applies to hgamma")
        Grid1D(-1.0, 1.0, self.grid_count)

    @property
    def wants_qfi(self) -> bool:
        return "QFI_closed" in self.observables or "QFI_numeric" in self.observables

    @property
    def qfi_name(self) -> str:
        return self.qfi_parameter or self.axes[0].name

    @property
    def point_observables(self) -> tuple:
        return tuple(o for o in OBSERVABLES if o in self.observables and o != "EP_markers")

    def level_list(self) -> list[LevelIndex]:
        out = []
        for n in self.levels:
            if n == 0:
                out.append(LevelIndex(0))
            else:
                out += [LevelIndex(n, b) for b in self.branches]
        return out

    def gs(self, values: dict) -> float:
        """g_s = sqrt(omega Omega)/2, with Omega pinned to omega in hgamma."""
        return values["omega"] / 2

    def axis_values(self) -> list[np.ndarray]:
        out = []
        for axis in self.axes:
            lam_ep = None
            if axis.scale == "ep_log":
                lam_ep = self._axis_ep(axis.name)
            out.append(axis.values(lam_ep))
        return out

    def _axis_ep(self, name: str) -> float:
        n = next((n for n in self.levels if n >= 1), None)
        if n is None or self.kind not in EP_PARAMETERS or name not in EP_PARAMETERS[self.kind]:
            raise ValidationError(f"ep_log axis {name} needs an EP parameter and a level n >= 1")
        base = dict(self.fixed)
        base.setdefault("omega", 1.0)
        p = ModelParams.build(self.kind, **base)
        if name == "omega":
            values = ep_locate(p, n, "omega").values
            if not values:
                raise ValidationError("no positive omega EP for these fixed parameters")
            return values[0]
        ep = ep_locate(p, n, name).values[0]
        if name == "g" and self.g_in_gs_units:
            ep /= self.gs(base)
        return ep


@dataclass(frozen=True)
class SweepRow:
    job: str
    index: int
    param1: str
    value1: float
    param2: str
    value2: float | None
    n: int
    eta: str
    observable: str
    value_re: float
    value_im: float
    lambda_ratio: float | None
    phase: str
    status: str


ROW_FIELDS = tuple(f.name for f in fields(SweepRow))


def _grid_points(spec: SweepSpec):
    vals = spec.axis_values()
    if len(vals) == 1:
        return [(i, (float(v),)) for i, v in enumerate(vals[0])]
    return [
        (i * len(vals[1]) + j, (float(a), float(b)))
        for i, a in enumerate(vals[0])
        for j, b in enumerate(vals[1])
    ]


def point_params(spec: SweepSpec, coords: Sequence[float]) -> ModelParams:
    values = dict(spec.fixed)
    for axis, v in zip(spec.axes, coords):
        values[axis.name] = v
    values.setdefault("omega", 1.0)
    if spec.g_in_gs_units and "g" in values:
        values["g"] = values["g"] * spec.gs(values)
    return ModelParams.build(spec.kind, **values)


def _qfi_value(spec: SweepSpec, f: float, lam: float, lam_ep: float) -> float:
    if spec.qfi_scale == "raw":
        return f
    if math.isinf(f):
        return 0.0
    if spec.qfi_scale == "inverse_sqrt":
        return 1.0 / math.sqrt(f) if f > 0 else math.inf
    return 1.0 / math.sqrt(lam_ep * lam_ep * f) if f > 0 else math.inf


def _observable(spec: SweepSpec, p: ModelParams, level: LevelIndex, name: str):
    """(re, im, lambda_ratio, status) of one observable at one point."""
    sol = eigen_closed(p, level)
    if name == "ReE":
        return sol.energy.real, 0.0, None, "ok"
    if name == "ImE":
        return sol.energy.imag, 0.0, None, "ok"
    if name == "PTK":
        return abs(ptk_expectation(sol)), 0.0, None, "ok"
    if name == "phase":
        if level.n == 0:
            return 0.0, 0.0, None, "ok"
        d = discriminant(p, level.n)
        return d.real, d.imag, None, "ok"
    if name.startswith("winding_"):
        grid = default_grid(level.n)
        grid = Grid1D(grid.x_min, grid.x_max, spec.grid_count)
        w = winding(sol, name.split("_")[1], grid)
        return w.raw, 0.0, None, w.status
    if level.n == 0:
        return 0.0, 0.0, None, "ok"
    axis = _axis(p, level.n, spec.qfi_name)
    lam, lam_ep = axis.lam, axis.lam_ep
    ratio = lam / lam_ep if lam_ep > 0 else None
    if not lam_ep > 0:
        return math.nan, 0.0, ratio, "no EP"
    dist = abs(lam - lam_ep)
    if dist <= 1e-12 * lam_ep:
        return _qfi_value(spec, math.inf, lam, lam_ep), 0.0, ratio, "diverges"
    if name == "QFI_closed":
        return _qfi_value(spec, qfi_closed(lam, lam_ep), lam, lam_ep), 0.0, ratio, "ok"
    result = qfi_numeric(p, level, spec.qfi_name)
    return _qfi_value(spec, result.value, lam, lam_ep), 0.0, ratio, "ok"


def _phase_tag(p: ModelParams, level: LevelIndex) -> str:
    if level.n == 0 or p.kind not in EP_PARAMETERS:
        return ""
    return classify_phase(p, level.n).tag.value


def evaluate_point(spec: SweepSpec, index: int, coords: Sequence[float]) -> list[SweepRow]:
    p1 = spec.axes[0].name
    p2 = spec.axes[1].name if len(spec.axes) > 1 else ""
    v2 = coords[1] if len(coords) > 1 else None
    rows = []
    try:
        p = point_params(spec, coords)
        point_error = None
    except NHJCMError as exc:
        p, point_error = None, exc
    for level in spec.level_list():
        eta = "" if level.n == 0 else level.eta.symbol
        phase = ""
        if p is not None:
            try:
                phase = _phase_tag(p, level)
            except NHJCMError:
                phase = ""
        for name in spec.point_observables:
            if point_error is not None:
                re, im, ratio, status = math.nan, math.nan, None, f"error: {point_error}"
            else:
                try:
                    re, im, ratio, status = _observable(spec, p, level, name)
                except NHJCMError as exc:
                    re, im, ratio, status = math.nan, math.nan, None, f"error: {exc}"
            rows.append(SweepRow(spec.name, index, p1, coords[0], p2, v2, level.n, eta, name,
                                 float(re), float(im), ratio, phase, status))
    return rows


def ep_marker_rows(spec: SweepSpec) -> list[SweepRow]:
    if "EP_markers" not in spec.observables or spec.kind not in EP_PARAMETERS:
        return []
    allowed = EP_PARAMETERS[spec.kind]
    names = [a.name for a in spec.axes]
    vals = spec.axis_values()
    rows = []
    base = dict(spec.fixed)
    base.setdefault("omega", 1.0)

    def locate(values: dict, name: str, n: int) -> list[float]:
        try:
            p = point_params_from(spec, values)
            eps = list(ep_locate(p, n, name).values)
        except NHJCMError:
            return []
        if name == "g" and spec.g_in_gs_units:
            eps = [e / spec.gs(values) for e in eps]
        return eps

    levels = [n for n in spec.levels if n >= 1]
    if len(names) == 1:
        name = names[0]
        if name not in allowed:
            return []
        lo, hi = min(vals[0]), max(vals[0])
        for n in levels:
            for ep in locate(base, name, n):
                if lo <= ep <= hi:
                    rows.append(SweepRow(spec.name, -1, name, ep, "", None, n, "", "EP", ep, 0.0, 1.0, "AtEP", "ok"))
        return rows
    # 2D: trace the EP of one axis as a curve over the other
    if names[1] in allowed:
        outer, inner = 0, 1
    elif names[0] in allowed:
        outer, inner = 1, 0
    else:
        return []
    lo, hi = min(vals[inner]), max(vals[inner])
    for n in levels:
        for v in vals[outer]:
            values = dict(base)
            values[names[outer]] = float(v)
            for ep in locate(values, names[inner], n):
                if lo <= ep <= hi:
                    coords = [0.0, 0.0]
                    coords[outer], coords[inner] = float(v), ep
                    rows.append(SweepRow(spec.name, -1, names[0], coords[0], names[1], coords[1], n, "", "EP",
                                         ep, 0.0, 1.0, "AtEP", "ok"))
    return rows


def point_params_from(spec: SweepSpec, values: dict) -> ModelParams:
    values = dict(values)
    if spec.g_in_gs_units and "g" in values:
        values["g"] = values["g"] * spec.gs(values)
    return ModelParams.build(spec.kind, **values)


def run_sweep(spec: SweepSpec, threads: int = 1) -> list[SweepRow]:
    points = _grid_points(spec)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(lambda item: evaluate_point(spec, *item), points))
    else:
        chunks = [evaluate_point(spec, *item) for item in points]
    rows = [row for chunk in chunks for row in chunk]
    return rows + ep_marker_rows(spec)


def run_jobs(specs: Iterable[SweepSpec], threads: int = 1) -> list[SweepRow]:
    rows = []
    for spec in specs:
        rows += run_sweep(spec, threads)
    return rows


# ---------------------------------------------------------------------------
# output

def format_number(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x + 0.0, ".17g")


def _json_value(x) -> str:
    if x is None:
        return "null"
    if isinstance(x, str):
        return json.dumps(x)
    if isinstance(x, float) and not math.isfinite(x):
        return "null"
    return format_number(x)


def write_table(columns: Sequence[str], records: Iterable[Sequence], fmt: str, stream: IO[str]):
    """Write records as CSV (header + rows) or JSONL (one object per line)."""
    fmt = fmt.lower()
    if fmt == "csv":
        import csv

        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(columns)
        for rec in records:
            writer.writerow([v if isinstance(v, str) else format_number(v) for v in rec])
    elif fmt == "jsonl":
        for rec in records:
            body = ",".join(f"{json.dumps(c)}:{_json_value(v)}" for c, v in zip(columns, rec))
            stream.write("{" + body + "}\n")
    else:
        raise ValidationError(f"format must be csv or jsonl, got {fmt!r}")


def emit_table(columns: Sequence[str], records: Iterable[Sequence], fmt: str, destination=None):
    """Write to a path, an open text stream, or stdout for None / "-"."""
    if destination is None or destination == "-":
        write_table(columns, records, fmt, sys.stdout)
        return
    if hasattr(destination, "write"):
        write_table(columns, records, fmt, destination)
        return
    path = Path(destination)
    buffer = io.StringIO()
    write_table(columns, records, fmt, buffer)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(buffer.getvalue())
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc.strerror or exc}") from exc


def emit(rows: Sequence[SweepRow], fmt: str = "csv", destination=None):
    emit_table(ROW_FIELDS, ([getattr(r, f) for f in ROW_FIELDS] for r in rows), fmt, destination)


# ---------------------------------------------------------------------------
# configuration files and presets

def spec_from_mapping(data: dict, **defaults) -> SweepSpec:
    data = {**defaults, **data}
    levels = data.get("levels", {})
    qfi = data.get("qfi", {})
    if isinstance(levels, dict):
        ns = levels.get("n", [1])
        etas = levels.get("eta", ["-", "+"])
    else:
        ns, etas = levels, data.get("eta", ["-", "+"])
    try:
        return SweepSpec(
            kind=data.get("model", data.get("kind", "generic")),
            fixed=data.get("fixed", {}),
            axes=tuple(Axis(**a) for a in data.get("axes", [])),
            levels=tuple(ns),
            branches=tuple(etas),
            observables=tuple(data.get("observables", ())),
            qfi_parameter=qfi.get("parameter"),
            qfi_scale=qfi.get("scale", "raw"),
            g_in_gs_units=bool(data.get("g_in_gs_units", False)),
            grid_count=int(data.get("grid_count", 4097)),
            name=str(data.get("name", "sweep")),
        )
    except TypeError as exc:
        raise ValidationError(f"malformed sweep description: {exc}") from exc


def specs_from_mapping(data: dict) -> list[SweepSpec]:
    """One spec per [[job]] table, or the top level as a single job."""
    jobs = data.get("job")
    if jobs is None:
        return [spec_from_mapping(data)]
    shared = {k: v for k, v in data.items() if k != "job"}
    return [spec_from_mapping(job, **shared) for job in jobs]


def load_config(path) -> dict:
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except OSError as exc:
        raise OutputError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ValidationError(f"config {path} is not valid TOML: {exc}") from exc


def _spec(**kw) -> SweepSpec:
    return SweepSpec(**kw)


def _fig2e() -> list[SweepSpec]:
    common = dict(levels=(1, 2, 3), observables=("QFI_closed", "QFI_numeric"), qfi_scale="collapse")
    return [
        _spec(name="fig2e-gamma", kind=ModelKind.PT, fixed={"omega": 1.0, "g": 0.3},
              axes=(Axis("gamma", 0.0, 3.0, 121),), **common),
        _spec(name="fig2e-g", kind=ModelKind.PT, fixed={"omega": 1.0, "gamma": 0.5},
              axes=(Axis("g", 0.005, 1.0, 121),), **common),
        _spec(name="fig2e-Gamma", kind=ModelKind.ANTI_PT, fixed={"omega": 0.1, "Omega": 1.0},
              axes=(Axis("Gamma", 0.005, 1.2, 121),), **common),
        _spec(name="fig2e-omega", kind=ModelKind.ANTI_PT, fixed={"Omega": 1.0, "Gamma": 0.1},
              axes=(Axis("omega", 0.01, 0.99, 121),), **common),
    ]


def _fig2f() -> list[SweepSpec]:
    out = []
    setups = [
        ("gamma", ModelKind.PT, {"omega": 1.0, "g": 0.3}),
        ("g", ModelKind.PT, {"omega": 1.0, "gamma": 0.5}),
        ("Gamma", ModelKind.ANTI_PT, {"omega": 0.1, "Omega": 1.0}),
        ("omega", ModelKind.ANTI_PT, {"Omega": 1.0, "Gamma": 0.1}),
    ]
    for name, kind, fixed in setups:
        for side, (a, b) in (("below", (-1e-2, -1e-6)), ("above", (1e-6, 1e-2))):
            out.append(_spec(name=f"fig2f-{name}-{side}", kind=kind, fixed=fixed,
                             axes=(Axis(name, a, b, 41, "ep_log"),), levels=(1,),
                             observables=("QFI_closed", "QFI_numeric"), qfi_scale="collapse"))
    return out


def presets() -> dict[str, list[SweepSpec]]:
    """Figure recipes with Omega = 1 as the unit."""
    both = (Branch.MINUS, Branch.PLUS)
    return {
        "fig1a": [_spec(name="fig1a", kind=ModelKind.ANTI_PT, fixed={"omega": 0.1, "Omega": 1.0},
                        axes=(Axis("Gamma", 0.0, 1.0, 201),), levels=(1, 2, 3, 4), branches=both,
                        observables=("ReE", "ImE", "EP_markers"))],
        "fig1f": [_spec(name="fig1f", kind=ModelKind.ANTI_PT, fixed={"Omega": 1.0},
                        axes=(Axis("omega", 0.01, 2.0, 100), Axis("Gamma", 0.0, 1.0, 101)),
                        levels=(1,), branches=(Branch.PLUS,), observables=("PTK", "EP_markers"))],
        # hgamma pins Omega_gamma = omega; omega = 1 reads "gamma = 0.5 Omega" with Omega = 1
        "fig2a": [_spec(name="fig2a", kind=ModelKind.PT, fixed={"omega": 1.0, "gamma": 0.5},
                        axes=(Axis("g", 0.01, 2.0, 200),), levels=(1, 2, 3), g_in_gs_units=True,
                        observables=("QFI_closed", "QFI_numeric", "EP_markers"), qfi_parameter="g")],
        "fig2b": [_spec(name="fig2b", kind=ModelKind.ANTI_PT, fixed={"Omega": 1.0, "Gamma": 0.1},
                        axes=(Axis("omega", 0.01, 2.0, 200),), levels=(1, 2, 3),
                        observables=("QFI_closed", "QFI_numeric", "EP_markers"), qfi_parameter="omega")],
        "fig2c": [_spec(name="fig2c", kind=ModelKind.PT, fixed={"omega": 1.0},
                        axes=(Axis("gamma", 0.0, 1.0, 101), Axis("g", 0.0, 0.5, 101)), levels=(1,),
                        branches=(Branch.PLUS,), observables=("QFI_closed", "EP_markers"),
                        qfi_parameter="gamma", qfi_scale="inverse_sqrt")],
        "fig2d": [_spec(name="fig2d", kind=ModelKind.ANTI_PT, fixed={"Omega": 1.0},
                        axes=(Axis("omega", 0.01, 2.0, 100), Axis("Gamma", 0.005, 1.0, 100)), levels=(1,),
                        branches=(Branch.PLUS,), observables=("QFI_closed", "EP_markers"),
                        qfi_parameter="Gamma", qfi_scale="inverse_sqrt")],
        "fig2e": _fig2e(),
        "fig2f": _fig2f(),
        "fig3c": [_spec(name="fig3c", kind=ModelKind.PT, fixed={"omega": 1.0, "g": 1.0},
                        axes=(Axis("gamma", 0.0, 2.0, 81),), levels=(1,), g_in_gs_units=True,
                        observables=("winding_zx", "winding_yx", "winding_zy", "EP_markers"))],
        "fig3d": [_spec(name="fig3d", kind=ModelKind.PT, fixed={"omega": 1.0},
                        axes=(Axis("gamma", 0.0, 2.0, 41), Axis("g", 0.0, 2.0, 41)), levels=(1,),
                        g_in_gs_units=True, observables=("winding_zx", "EP_markers"), grid_count=1025)],
        "fig3e": [_spec(name="fig3e", kind=ModelKind.ANTI_PT, fixed={"Omega": 1.0, "Gamma": 0.2},
                        axes=(Axis("omega", 0.01, 2.0, 80),), levels=(1,),
                        observables=("winding_zx", "winding_yx", "winding_zy", "EP_markers"))],
        "fig3f": [_spec(name="fig3f", kind=ModelKind.ANTI_PT, fixed={"Omega": 1.0},
                        axes=(Axis("omega", 0.01, 2.0, 40), Axis("Gamma", 0.0, 1.0, 41)), levels=(1,),
                        observables=("winding_zx", "EP_markers"), grid_count=1025)],
    }


def with_overrides(spec: SweepSpec, **changes) -> SweepSpec:
    changes = {k: v for k, v in changes.items() if v is not None}
    if "fixed" in changes:
        changes["fixed"] = {**spec.fixed, **changes["fixed"]}
    return replace(spec, **changes)
