"""The ten acceptance criteria, each at its stated tolerance.

Every test records one PASS/FAIL line; the lines are printed together at
the end of the pytest run (see conftest.py).
"""

import hashlib
import io
import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from nhjcm import (
    Branch,
    LevelIndex,
    ModelKind,
    ModelParams,
    PhaseTag,
    classify_phase,
    discriminant,
    eigen_closed,
    ep_locate,
    exponent_fit,
    parity_expectation,
    ptk_expectation,
    qfi_closed,
    qfi_near_ep,
    qfi_numeric,
    texture,
    winding,
)
from nhjcm.oracle import build_dense, coalescence_overlap, dense_eigen, match_levels, max_spectrum_error, parity_of, random_params
from nhjcm.qfi import QfiResult, collapse_curve, collapse_target
from nhjcm.sweep import emit, presets, run_sweep
from nhjcm.texture import Grid1D, default_grid, oscillator_table, winding_raw

ETAS = (Branch.MINUS, Branch.PLUS)


def record(number: int, title: str, ok: bool, detail: str):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}  ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def seeded(k: int) -> np.random.Generator:
    return np.random.default_rng(1000 + k)


# -- point samplers ---------------------------------------------------------

def pt_point(rng, n, phase):
    """hgamma point at least 5% away from g_EP in the requested phase."""
    gamma = rng.uniform(0.1, 2.0)
    g_ep = gamma / (2 * math.sqrt(n))
    g = g_ep * (rng.uniform(1.05, 3.0) if phase is PhaseTag.SYMMETRIC else rng.uniform(0.0, 0.95))
    return ModelParams.hgamma(rng.uniform(0.01, 2.0), gamma, g)


def anti_pt_point(rng, n, phase):
    """hgammaU point at least 5% away from Gamma_EP in the requested phase."""
    Omega = rng.uniform(0.5, 2.0)
    omega = rng.uniform(0.01, 2.0)
    while abs(Omega - omega) < 0.05:
        omega = rng.uniform(0.01, 2.0)
    g_ep = abs(Omega - omega) / (2 * math.sqrt(n))
    Gamma = g_ep * (rng.uniform(1.05, 3.0) if phase is PhaseTag.SYMMETRIC else rng.uniform(0.0, 0.95))
    return ModelParams.hgammaU(omega, Omega, Gamma)


SAMPLERS = {ModelKind.PT: pt_point, ModelKind.ANTI_PT: anti_pt_point}


# -- 1 -----------------------------------------------------------------------

def test_criterion_1_spectrum_oracle():
    rng = seeded(1)
    start = time.perf_counter()
    worst = {}
    for kind in ModelKind:
        worst[kind.value] = max(max_spectrum_error(random_params(kind, rng), 5) for _ in range(1000))
    elapsed = time.perf_counter() - start
    ok = max(worst.values()) < 1e-10 and elapsed < 30
    detail = ", ".join(f"{k} max|dE|={v:.1e}" for k, v in worst.items())
    record(1, "spectrum matches dense diagonalization", ok, f"{detail}; {elapsed:.1f}s for 3x1000 sets")


# -- 2 -----------------------------------------------------------------------

def _ep_cases(n):
    """(label, params at the EP) for every EP formula in block n."""
    root = math.sqrt(n)
    cases = []
    for gamma in (0.3, 1.7):
        p = ModelParams.hgamma(1.0, gamma, 0.0)
        cases.append(("g_EP", p.with_param("g", ep_locate(p, n, "g").values[0])))
    for g in (0.2, 0.9):
        p = ModelParams.hgamma(0.4, 0.0, g)
        cases.append(("gamma_EP", p.with_param("gamma", ep_locate(p, n, "gamma").values[0])))
    for omega in (0.1, 1.8):  # both signs of Omega - omega
        p = ModelParams.hgammaU(omega, 1.0, 0.0)
        cases.append(("Gamma_EP", p.with_param("Gamma", ep_locate(p, n, "Gamma").values[0])))
    p = ModelParams.hgammaU(1.0, 1.0, 0.4 / (2 * root))
    for w in ep_locate(p, n, "omega").values:
        cases.append(("omega_EP", p.with_param("omega", w)))
    return cases


def test_criterion_2_ep_correctness():
    worst_disc, worst_overlap, count = 0.0, 1.0, 0
    labels = set()
    for n in range(1, 6):
        for label, p in _ep_cases(n):
            labels.add(label)
            worst_disc = max(worst_disc, abs(discriminant(p, n)))
            worst_overlap = min(worst_overlap, coalescence_overlap(p, n))
            count += 1
    ok = worst_disc < 1e-12 and worst_overlap > 1 - 1e-6 and len(labels) == 4
    record(2, "EP formulas give coalescence", ok,
           f"{count} EPs, n=1..5, max|disc|={worst_disc:.1e}, min overlap=1-{1 - worst_overlap:.1e}")


# -- 3 -----------------------------------------------------------------------

def test_criterion_3_reality_pattern():
    rng = seeded(3)
    failures = []
    stats = {}
    for kind, sampler in SAMPLERS.items():
        for phase in (PhaseTag.SYMMETRIC, PhaseTag.BROKEN):
            real_spectrum = (kind is ModelKind.PT) == (phase is PhaseTag.SYMMETRIC)
            for i in range(100):
                n = int(rng.integers(1, 6))
                p = sampler(rng, n, phase)
                assert classify_phase(p, n).tag is phase
                e_minus, e_plus = (eigen_closed(p, LevelIndex(n, eta)).energy for eta in ETAS)
                re_split, im_split = abs(e_plus.real - e_minus.real), abs(e_plus.imag - e_minus.imag)
                max_im = max(abs(e_plus.imag), abs(e_minus.imag))
                if real_spectrum:
                    good = max_im < 1e-12 and re_split > 0
                else:
                    good = re_split < 1e-12 and im_split > 0
                if not good:
                    failures.append((kind.value, phase.value, i))
            stats[f"{kind.value}/{phase.value}"] = "real" if real_spectrum else "complex"
    record(3, "reality pattern per phase", not failures,
           f"100 points per phase per model; " + ", ".join(f"{k}={v}" for k, v in stats.items())
           + (f"; failures {failures[:3]}" if failures else ""))


# -- 4 -----------------------------------------------------------------------

def _point_for(name, n, lam, lam_ep):
    root = math.sqrt(n)
    if name == "g":
        return ModelParams.hgamma(1.0, 2 * root * lam_ep, lam)
    if name == "gamma":
        return ModelParams.hgamma(1.0, lam, lam_ep / (2 * root))
    if name == "Gamma":
        return ModelParams.hgammaU(0.2, 0.2 + 2 * root * lam_ep, lam)
    return ModelParams.hgammaU(3.0 - lam, 3.0, lam_ep / (2 * root))


def test_criterion_4_qfi_closed_form():
    worst, count = 0.0, 0
    for name in ("g", "gamma", "Gamma", "omega"):
        for n in (1, 2, 3):
            for eta in ETAS:
                for r in (0.05, 0.2, 0.5, 0.9):
                    for side in (-1, 1):
                        lam_ep = 0.4
                        lam = lam_ep * (1 + side * r)
                        res = qfi_numeric(_point_for(name, n, lam, lam_ep), LevelIndex(n, eta), name)
                        worst = max(worst, abs(res.value / qfi_closed(lam, lam_ep) - 1))
                        count += 1
    record(4, "numeric QFI matches the closed form", worst < 1e-3,
           f"{count} points (4 params x n=1..3 x both eta x both sides), max rel err={worst:.1e}")


# -- 5 -----------------------------------------------------------------------

def test_criterion_5_collapse():
    xs = np.concatenate([np.linspace(0.02, 0.95, 12), np.linspace(1.05, 2.5, 12)])
    worst_closed = worst_numeric = 0.0
    curves = 0
    for name in ("g", "gamma", "Gamma", "omega"):
        for n in (1, 2, 3):
            for eta in ETAS:
                lam_ep = {"g": 0.3, "gamma": 0.7, "Gamma": 0.25, "omega": 0.35}[name] * math.sqrt(n)
                closed, numeric = [], []
                for x in xs:
                    lam = x * lam_ep
                    p = _point_for(name, n, lam, lam_ep)
                    closed.append(QfiResult(qfi_closed(lam, lam_ep), name, lam, lam_ep, "ClosedForm"))
                    numeric.append(qfi_numeric(p, LevelIndex(n, eta), name))
                for (x, y) in collapse_curve(closed):
                    worst_closed = max(worst_closed, abs(y - collapse_target(x)))
                for (x, y) in collapse_curve(numeric):
                    worst_numeric = max(worst_numeric, abs(y - collapse_target(x)))
                curves += 1
    ok = worst_closed < 1e-8 and worst_numeric < 1e-4
    record(5, "scaled QFI curves collapse", ok,
           f"{curves} curves, closed max dev={worst_closed:.1e}, numeric max dev={worst_numeric:.1e}")


# -- 6 -----------------------------------------------------------------------

def test_criterion_6_critical_exponent():
    slopes = {}
    for name in ("g", "gamma", "Gamma", "omega"):
        lam_ep = 0.4
        for side, label in ((-1, "below"), (1, "above")):
            pts_closed, pts_numeric = [], []
            for r in np.geomspace(1e-6, 1e-2, 25):
                lam = lam_ep * (1 + side * r)
                pts_closed.append((lam, qfi_closed(lam, lam_ep)))
                pts_numeric.append((lam, qfi_numeric(_point_for(name, 1, lam, lam_ep), LevelIndex(1), name).value))
            slopes[f"{name}/{label}/closed"] = exponent_fit(pts_closed, lam_ep)
            slopes[f"{name}/{label}/numeric"] = exponent_fit(pts_numeric, lam_ep)
    worst_slope = max(abs(s + 1) for s in slopes.values())
    ratios = [qfi_closed(0.4 * (1 + s * 1e-4), 0.4) / qfi_near_ep(0.4 * (1 + s * 1e-4), 0.4) for s in (-1, 1)]
    worst_ratio = max(abs(r - 1) for r in ratios)
    ok = worst_slope <= 0.01 and worst_ratio < 1e-2
    record(6, "critical exponent -1 on both sides", ok,
           f"{len(slopes)} fits, max|slope+1|={worst_slope:.1e}, closed/near-EP at 1e-4: max|ratio-1|={worst_ratio:.1e}")


# -- 7 -----------------------------------------------------------------------

def test_criterion_7_order_parameter():
    rng = seeded(7)
    worst_sym = 0.0
    for kind, sampler in SAMPLERS.items():
        for _ in range(100):
            n = int(rng.integers(1, 6))
            p = sampler(rng, n, PhaseTag.SYMMETRIC)
            for eta in ETAS:
                worst_sym = max(worst_sym, abs(abs(ptk_expectation(eigen_closed(p, LevelIndex(n, eta)))) - 1))
    worst_broken = 0.0
    for omega in np.linspace(0.02, 0.75, 50):  # Gamma = 0.1 keeps n=1 broken for |1 - omega| > 0.2
        p = ModelParams.hgammaU(float(omega), 1.0, 0.1)
        expected = 2 * 0.1 / abs(1.0 - omega)
        for eta in ETAS:
            worst_broken = max(worst_broken, abs(abs(ptk_expectation(eigen_closed(p, LevelIndex(1, eta)))) - expected))
    ok = worst_sym < 1e-10 and worst_broken < 1e-10
    record(7, "order parameter modulus", ok,
           f"symmetric max||PTK|-1|={worst_sym:.1e}; hgammaU broken 50-pt sweep max dev={worst_broken:.1e}")


# -- 8 -----------------------------------------------------------------------

def test_criterion_8_topological_transition():
    rng = seeded(8)
    n = 1
    broken_max = 0.0
    sym_values = {}
    for kind, sampler in SAMPLERS.items():
        values = []
        for _ in range(20):
            broken = sampler(rng, n, PhaseTag.BROKEN)
            broken_max = max(broken_max, abs(winding_raw(eigen_closed(broken, LevelIndex(n)), "zx")))
            sym = sampler(rng, n, PhaseTag.SYMMETRIC)
            values.append(winding_raw(eigen_closed(sym, LevelIndex(n)), "zx"))
        sym_values[kind.value] = values
    spreads = {k: max(v) - min(v) for k, v in sym_values.items()}
    nonzero = all(min(abs(x) for x in v) > 0.5 for v in sym_values.values())

    # yx and zy on either side of each EP
    jumps = 0.0
    zx_jumps = True
    for p_lo, p_hi in (
        (ModelParams.hgamma(1.0, 0.5, 0.24), ModelParams.hgamma(1.0, 0.5, 0.26)),
        (ModelParams.hgammaU(0.5, 1.0, 0.24), ModelParams.hgammaU(0.5, 1.0, 0.26)),
        (ModelParams.hgammaU(1.5, 1.0, 0.24), ModelParams.hgammaU(1.5, 1.0, 0.26)),
    ):
        for eta in ETAS:
            lo, hi = eigen_closed(p_lo, LevelIndex(1, eta)), eigen_closed(p_hi, LevelIndex(1, eta))
            for plane in ("yx", "zy"):
                jumps = max(jumps, abs(winding_raw(lo, plane) - winding_raw(hi, plane)))
            zx_jumps &= abs(winding_raw(lo, "zx") - winding_raw(hi, "zx")) > 0.5

    # yx sign across resonance, away from the EPs (Gamma = 0.1, |Omega - omega| = 0.5)
    below = winding(eigen_closed(ModelParams.hgammaU(0.5, 1.0, 0.1), LevelIndex(1)), "yx").raw
    above = winding(eigen_closed(ModelParams.hgammaU(1.5, 1.0, 0.1), LevelIndex(1)), "yx").raw
    flips = below * above < 0 and abs(abs(below) - abs(above)) < 1e-6

    ok = broken_max < 1e-6 and nonzero and max(spreads.values()) < 1e-6 and jumps < 1e-6 and flips and zx_jumps
    record(8, "zx winding switches at the EP, yx/zy do not", ok,
           f"broken max|raw|={broken_max:.1e}; symmetric values "
           + ", ".join(f"{k}={np.mean(v):+.6f} spread {spreads[k]:.1e}" for k, v in sym_values.items())
           + f"; yx/zy change across EP={jumps:.1e}; yx at resonance {below:+.3f} -> {above:+.3f}")


# -- 9 -----------------------------------------------------------------------

def test_criterion_9_parity():
    rng = seeded(9)
    n_max = 5
    worst, count = 0.0, 0
    for kind, sampler in SAMPLERS.items():
        for phase in (PhaseTag.SYMMETRIC, PhaseTag.BROKEN, PhaseTag.AT_EP):
            for _ in range(10):
                n = int(rng.integers(1, n_max + 1))
                if phase is PhaseTag.AT_EP:
                    p = _ep_cases(n)[0 if kind is ModelKind.PT else 4][1]
                else:
                    p = sampler(rng, n, phase)
                pairs = dense_eigen(build_dense(p, n_max))
                for pair in pairs:
                    if pair.block > n_max:
                        continue
                    lvl = LevelIndex(pair.block)
                    worst = max(worst, abs(parity_of(pair, n_max) - parity_expectation(lvl)))
                    count += 1
                for eta in ETAS:
                    assert parity_expectation(LevelIndex(n, eta)) == (-1) ** (n - 1)
    record(9, "parity preserved everywhere", worst < 1e-10,
           f"{count} dense eigenstates across symmetric/broken/EP points, max|<P> - (-1)^(n-1)|={worst:.1e}")


# -- 10 ----------------------------------------------------------------------

def test_criterion_10_hygiene():
    x = np.linspace(-12, 12, 24001)
    table = oscillator_table(10, x)
    gram = np.trapezoid(table[:, None, :] * table[None, :, :], x, axis=-1)
    ortho = float(np.abs(gram - np.eye(11)).max())

    rng = seeded(10)
    purity = 0.0
    refine = 0.0
    for kind in (ModelKind.PT, ModelKind.ANTI_PT):
        for _ in range(10):
            p = random_params(kind, rng)
            n = int(rng.integers(0, 5))
            for eta in ETAS:
                sol = eigen_closed(p, LevelIndex(n, eta))
                tex = texture(sol, Grid1D(-10, 10, 2001))
                purity = max(purity, float(np.abs(tex.s_x**2 + tex.s_y**2 + tex.s_z**2 - tex.rho**2).max()))
                if n >= 1:
                    grid = default_grid(n)
                    for plane in ("zx", "yx", "zy"):
                        vals = [winding_raw(sol, plane, grid), winding_raw(sol, plane, grid.refined()),
                                winding_raw(sol, plane, grid.refined().refined())]
                        refine = max(refine, max(vals) - min(vals))

    spec = presets()["fig3c"][0]
    outputs = []
    for threads in (1, 2, 4):
        buf = io.StringIO()
        emit(run_sweep(spec, threads=threads), "csv", buf)
        outputs.append(hashlib.sha256(buf.getvalue().encode()).hexdigest())
    identical = len(set(outputs)) == 1

    ok = ortho < 1e-8 and purity < 1e-10 and refine < 1e-6 and identical
    record(10, "numerical hygiene", ok,
           f"orthonormality {ortho:.1e}, purity {purity:.1e}, winding refinement spread {refine:.1e}, "
           f"sweep sha256 identical over 1/2/4 threads: {identical}")
