import hashlib
import io
import json
import math

import numpy as np
import pytest

from nhjcm import ModelKind, OutputError, ValidationError
from nhjcm.sweep import (
    OBSERVABLES,
    ROW_FIELDS,
    Axis,
    SweepSpec,
    emit,
    format_number,
    presets,
    run_jobs,
    run_sweep,
    spec_from_mapping,
    specs_from_mapping,
)


def small_spec(**kw):
    base = dict(
        kind=ModelKind.ANTI_PT,
        fixed={"omega": 0.1, "Omega": 1.0},
        axes=(Axis("Gamma", 0.0, 1.0, 11),),
        levels=(1, 2),
        observables=("ReE", "ImE", "PTK", "phase", "EP_markers"),
    )
    base.update(kw)
    return SweepSpec(**base)


def render(rows, fmt="csv"):
    buf = io.StringIO()
    emit(rows, fmt, buf)
    return buf.getvalue()


class TestSpec:
    @pytest.mark.parametrize(
        "kw",
        [
            dict(axes=()),
            dict(axes=(Axis("g", 0, 1, 3),)),
            dict(observables=()),
            dict(observables=("bogus",)),
            dict(levels=(-1,)),
            dict(qfi_scale="log"),
            dict(observables=("QFI_closed",), qfi_parameter="gamma"),
            dict(g_in_gs_units=True),
            dict(axes=(Axis("Gamma", 0, 1, 3), Axis("Gamma", 0, 1, 3))),
        ],
    )
    def test_invalid(self, kw):
        with pytest.raises(ValidationError):
            small_spec(**kw)

    @pytest.mark.parametrize("args", [("g", 0, 1, 1), ("g", 0, math.nan, 5), ("g", 0, 1, 5, "log"), ("g", 1, 2, 5, "cubic")])
    def test_invalid_axis(self, args):
        with pytest.raises(ValidationError):
            Axis(*args)

    def test_log_axis(self):
        np.testing.assert_allclose(Axis("g", 1e-3, 1e-1, 3, "log").values(), [1e-3, 1e-2, 1e-1])

    def test_ep_log_axis(self):
        spec = SweepSpec(kind=ModelKind.PT, fixed={"omega": 1.0, "gamma": 0.5}, axes=(Axis("g", -1e-2, -1e-6, 5, "ep_log"),),
                         observables=("QFI_closed",))
        vals = spec.axis_values()[0]
        np.testing.assert_allclose(0.25 - vals, 0.25 * np.geomspace(1e-2, 1e-6, 5))


class TestRun:
    def test_completeness(self):
        spec = small_spec()
        rows = run_sweep(spec)
        grid = [r for r in rows if r.index >= 0]
        assert len(grid) == 11 * 4 * 4
        markers = [r for r in rows if r.index < 0]
        assert [(r.n, r.value_re) for r in markers] == [(1, pytest.approx(0.45)), (2, pytest.approx(0.45 / math.sqrt(2)))]

    def test_ordering(self):
        rows = [r for r in run_sweep(small_spec()) if r.index >= 0]
        order = [OBSERVABLES.index(r.observable) for r in rows]
        keys = [(r.index, r.n, r.eta == "+", o) for r, o in zip(rows, order)]
        assert keys == sorted(keys)

    def test_fig1a_pattern(self):
        rows = run_sweep(small_spec(levels=(1,), observables=("ReE",)))
        by_point = {}
        for r in rows:
            by_point.setdefault(r.value1, {})[r.eta] = r.value_re
        for gamma, e in by_point.items():
            split = abs(e["+"] - e["-"])
            if gamma < 0.44:
                assert split > 1e-3
            elif gamma > 0.46:
                assert split < 1e-12

    def test_point_errors_recorded(self):
        spec = SweepSpec(kind=ModelKind.ANTI_PT, fixed={"Omega": 1.0}, axes=(Axis("omega", -0.5, 0.5, 3),),
                         observables=("ReE",))
        rows = run_sweep(spec)
        assert rows[0].status.startswith("error") and math.isnan(rows[0].value_re)
        assert rows[-1].status == "ok"

    def test_threads_byte_identical(self):
        spec = presets()["fig3e"][0]
        one = render(run_sweep(spec, threads=1))
        four = render(run_sweep(spec, threads=4))
        assert hashlib.sha256(one.encode()).hexdigest() == hashlib.sha256(four.encode()).hexdigest()

    def test_phase_matches_winding(self):
        rows = run_sweep(presets()["fig3e"][0])
        for r in rows:
            if r.observable == "winding_zx" and r.phase in ("Symmetric", "Broken"):
                assert (abs(r.value_re) > 0.5) == (r.phase == "Symmetric")

    def test_fig2c_zero_on_ep(self):
        rows = run_sweep(presets()["fig2c"][0])
        on_ep = [r for r in rows if r.observable == "QFI_closed" and r.status == "diverges"]
        assert on_ep and all(r.value_re == 0.0 for r in on_ep)
        assert all(r.value2 == pytest.approx(r.value1 / 2) for r in on_ep)

    def test_collapse_scale(self):
        for spec in presets()["fig2e"]:
            for r in run_sweep(spec):
                if r.status == "ok" and r.observable == "QFI_closed":
                    x = r.lambda_ratio
                    target = math.sqrt(1 - x * x) if x < 1 else math.sqrt(x * x * (x * x - 1))
                    assert r.value_re == pytest.approx(target, rel=1e-8, abs=1e-12)

    @pytest.mark.parametrize("name", sorted(presets()))
    def test_presets_run(self, name):
        specs = presets()[name]
        if name.startswith("fig3") or name in ("fig1f", "fig2c", "fig2d"):
            specs = [s.__class__(**{**s.__dict__, "axes": tuple(Axis(a.name, a.start, a.stop, 3, a.scale) for a in s.axes),
                                    "grid_count": 257}) for s in specs]
        rows = run_jobs(specs)
        assert rows
        assert all(r.status in ("ok", "diverges", "no EP") for r in rows)


class TestEmit:
    def test_empty_csv(self):
        assert render([]) == ",".join(ROW_FIELDS) + "\n"

    def test_empty_jsonl(self):
        assert render([], "jsonl") == ""

    def test_jsonl_roundtrip(self):
        rows = run_sweep(small_spec(levels=(1,)))
        lines = render(rows, "jsonl").splitlines()
        assert len(lines) == len(rows)
        first = json.loads(lines[0])
        assert list(first) == list(ROW_FIELDS)
        assert first["value_re"] == rows[0].value_re
        assert first["value2"] is None

    def test_nonfinite(self):
        assert format_number(math.inf) == "inf"
        assert format_number(math.nan) == "nan"
        assert format_number(-0.0) == "0"
        assert format_number(0.1) == "0.10000000000000001"

    def test_bad_format(self):
        with pytest.raises(ValidationError):
            render([], "xml")

    def test_bad_path(self, tmp_path):
        with pytest.raises(OutputError, match="nope"):
            emit([], "csv", tmp_path / "nope" / "out.csv")

    def test_rerun_identical(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        emit(run_sweep(small_spec()), "csv", a)
        emit(run_sweep(small_spec()), "csv", b)
        assert a.read_bytes() == b.read_bytes()


class TestConfig:
    def test_single(self):
        spec = spec_from_mapping({
            "model": "hgammaU",
            "fixed": {"omega": 0.1, "Omega": 1.0},
            "axes": [{"name": "Gamma", "start": 0.0, "stop": 1.0, "count": 5}],
            "levels": {"n": [1, 2], "eta": ["+"]},
            "observables": ["ReE"],
        })
        assert spec.kind is ModelKind.ANTI_PT and spec.levels == (1, 2) and len(spec.branches) == 1

    def test_jobs_share_defaults(self):
        specs = specs_from_mapping({
            "model": "hgamma",
            "observables": ["ReE"],
            "job": [
                {"name": "a", "fixed": {"gamma": 0.5}, "axes": [{"name": "g", "start": 0, "stop": 1, "count": 3}]},
                {"name": "b", "fixed": {"g": 0.5}, "axes": [{"name": "gamma", "start": 0, "stop": 1, "count": 3}]},
            ],
        })
        assert [s.name for s in specs] == ["a", "b"]
        assert all(s.kind is ModelKind.PT for s in specs)

    def test_malformed(self):
        with pytest.raises(ValidationError):
            spec_from_mapping({"model": "hgamma", "axes": [{"nom": "g"}], "observables": ["ReE"]})
