"""Quantum Fisher information of the closed-form eigenstates.

For a pure normalized state F_Q = 4 (<psi'|psi'> - |<psi'|psi>|^2).  Around
the EPs of hgamma / hgammaU it takes the same parameter-free form for
lambda in {g, gamma, Gamma, omega}:

    F_Q = 1/(lep^2 - lam^2)                  lam < lep
    F_Q = lep^2 / (lam^2 (lam^2 - lep^2))    lam > lep

The omega direction is handled through the detuning d = Omega - omega,
whose EP sits at d = 2 sqrt(n) Gamma; lam is |d|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import DivergenceError, NumericalError, ValidationError
from .model import LevelIndex, ModelKind, ModelParams, eigen_closed
from .symmetry import EP_PARAMETERS, detuning_ep, ep_locate

EPS = np.finfo(float).eps


class QfiMethod(str, Enum):
    CLOSED_FORM = "ClosedForm"
    NEAR_EP = "NearEp"
    NUMERIC_OVERLAP = "NumericOverlap"


@dataclass(frozen=True)
class QfiResult:
    value: float
    parameter_name: str
    lam: float
    lam_ep: float
    method: QfiMethod


def qfi_closed(lam: float, lam_ep: float) -> float:
    if lam_ep <= 0 or lam < 0:
        raise ValidationError(f"need lam >= 0 and lam_ep > 0, got lam={lam}, lam_ep={lam_ep}")
    if lam == lam_ep:
        raise DivergenceError(f"QFI diverges at the EP lam = {lam_ep}")
    if lam < lam_ep:
        return 1.0 / ((lam_ep - lam) * (lam_ep + lam))
    return lam_ep**2 / (lam**2 * (lam - lam_ep) * (lam + lam_ep))


def qfi_near_ep(lam: float, lam_ep: float) -> float:
    """Leading singular term 1 / (2 lep |lam - lep|), the same on both sides."""
    if lam_ep <= 0:
        raise ValidationError(f"lam_ep must be > 0, got {lam_ep}")
    if lam == lam_ep:
        raise DivergenceError(f"QFI diverges at the EP lam = {lam_ep}")
    return 1.0 / (2 * lam_ep * abs(lam - lam_ep))


def collapse_target(x: float) -> float:
    """Universal (lep^2 F_Q)^(-1/2) as a function of x = lam/lep."""
    if x < 1:
        return math.sqrt(1 - x * x)
    return math.sqrt(x * x * (x * x - 1))


@dataclass(frozen=True)
class _Axis:
    lam: float
    lam_ep: float
    make: Callable[[float], ModelParams]


def _axis(p: ModelParams, n: int, name: str) -> _Axis:
    """Map a parameter name onto lam, its EP in block n and a params factory."""
    allowed = EP_PARAMETERS.get(p.kind)
    if allowed is None or name not in allowed:
        raise ValidationError(f"no QFI parameter {name!r} for model {p.kind.value}")
    if name == "omega":
        d = p.Omega - p.omega
        sign = 1.0 if d >= 0 else -1.0
        return _Axis(abs(d), detuning_ep(p, n), lambda lam: p.with_param("omega", p.Omega - sign * lam))
    return _Axis(getattr(p, name), ep_locate(p, n, name).values[0], lambda lam: p.with_param(name, lam))


def _normalized_state(p: ModelParams, level: LevelIndex) -> np.ndarray:
    return eigen_closed(p, level).state()


def infidelity(a: np.ndarray, b: np.ndarray) -> float:
    """1 - |<a|b>| for unit vectors, computed as |a - e^{i phi} b|^2 / 2.

    The phase-aligned difference avoids the cancellation in 1 - |<a|b>|.
    """
    ov = np.vdot(a, b)
    if ov == 0:
        return 1.0
    aligned = b * np.conj(ov / abs(ov))
    return float(np.linalg.norm(a - aligned) ** 2 / 2)


def overlap_qfi(state_at: Callable[[float], np.ndarray], lam: float, h: float, direction: int = 0) -> float:
    """Richardson-extrapolated 8 (1 - |<psi(lam)|psi(lam + dh)>|) / dh^2.

    ``direction`` 0 averages the +h and -h overlaps (error O(h^2) before
    extrapolation); +1 / -1 use a single side (error O(h)).
    """
    ref = state_at(lam)

    def estimate(step):
        if direction:
            return 8 * infidelity(ref, state_at(lam + direction * step)) / step**2
        return 4 * (infidelity(ref, state_at(lam + step)) + infidelity(ref, state_at(lam - step))) / step**2

    coarse, fine = estimate(h), estimate(h / 2)
    if direction:
        return 2 * fine - coarse
    return (4 * fine - coarse) / 3


def _admissible(axis: _Axis, lam: float) -> bool:
    try:
        axis.make(lam)
    except ValidationError:
        return False
    return True


def qfi_numeric(p: ModelParams, level: LevelIndex, parameter_name: str, step: float | None = None) -> QfiResult:
    """F_Q from overlaps of normalized closed-form states.

    The default step is min(1e-5 max(lam, lep), |lam - lep|/20).  Within 10 steps of the EP the
    difference is one-sided, away from the EP; next to an inadmissible
    parameter value (e.g. gamma < 0) it is one-sided on the admissible side.
    """
    if not isinstance(level, LevelIndex):
        level = LevelIndex(*level)
    if level.n == 0:
        axis = _axis(p, 1, parameter_name)
        return QfiResult(0.0, parameter_name, axis.lam, math.nan, QfiMethod.NUMERIC_OVERLAP)
    axis = _axis(p, level.n, parameter_name)
    lam, lam_ep = axis.lam, axis.lam_ep
    if not lam_ep > 0:
        raise ValidationError(f"{parameter_name} has no EP here (lep = {lam_ep})")
    dist = abs(lam - lam_ep)
    if dist <= 1e-12 * lam_ep:
        raise DivergenceError(f"QFI diverges at the EP {parameter_name} = {lam_ep}")
    h = min(1e-5 * max(lam, lam_ep), dist / 20) if step is None else float(step)
    if not h > 0 or h < 1e3 * EPS * lam:
        raise ValidationError(f"step {h} is below the resolvable limit for lam = {lam}")
    if dist <= h:
        raise ValidationError(f"step {h} reaches across the EP at {lam_ep} (lam = {lam})")
    away = 1 if lam > lam_ep else -1
    if dist > 10 * h and _admissible(axis, lam - h) and _admissible(axis, lam + h):
        direction = 0
    elif _admissible(axis, lam + away * h):
        direction = away
    elif dist > 10 * h and _admissible(axis, lam - away * h):
        direction = -away
    else:
        raise NumericalError(f"no admissible one-sided step at lam = {lam}")
    value = overlap_qfi(lambda x: _normalized_state(axis.make(x), level), lam, h, direction)
    return QfiResult(max(value, 0.0), parameter_name, lam, lam_ep, QfiMethod.NUMERIC_OVERLAP)


def qfi_closed_at(p: ModelParams, level: LevelIndex, parameter_name: str) -> QfiResult:
    """Closed-form QFI at the point ``p`` (inf exactly at the EP)."""
    if not isinstance(level, LevelIndex):
        level = LevelIndex(*level)
    if level.n == 0:
        axis = _axis(p, 1, parameter_name)
        return QfiResult(0.0, parameter_name, axis.lam, math.nan, QfiMethod.CLOSED_FORM)
    axis = _axis(p, level.n, parameter_name)
    try:
        value = qfi_closed(axis.lam, axis.lam_ep)
    except DivergenceError:
        value = math.inf
    return QfiResult(value, parameter_name, axis.lam, axis.lam_ep, QfiMethod.CLOSED_FORM)


def qfi_from_derivative(p: ModelParams, level: LevelIndex, parameter_name: str, step: float | None = None) -> float:
    """4 (<psi'|psi'> - |<psi'|psi>|^2) with psi' from a five-point stencil.

    Independent of the overlap route; the closed-form states are smooth in
    lam on each side of the EP, so no gauge fixing is needed.
    """
    if not isinstance(level, LevelIndex):
        level = LevelIndex(*level)
    if level.n == 0:
        return 0.0
    axis = _axis(p, level.n, parameter_name)
    lam, lam_ep = axis.lam, axis.lam_ep
    dist = abs(lam - lam_ep)
    h = 1e-3 * min(dist, max(lam, lam_ep)) if step is None else float(step)
    if 4 * h >= dist:
        raise ValidationError(f"step {h} too large this close to the EP")
    state = lambda x: _normalized_state(axis.make(x), level)
    if all(_admissible(axis, lam + k * h) for k in (-2, -1, 1, 2)):
        dpsi = (-state(lam + 2 * h) + 8 * state(lam + h) - 8 * state(lam - h) + state(lam - 2 * h)) / (12 * h)
    else:
        s = 1 if all(_admissible(axis, lam + k * h) for k in range(1, 5)) else -1
        pts = [state(lam + s * k * h) for k in range(5)]
        dpsi = s * (-25 * pts[0] + 48 * pts[1] - 36 * pts[2] + 16 * pts[3] - 3 * pts[4]) / (12 * h)
    psi = state(lam)
    return float(4 * (np.vdot(dpsi, dpsi).real - abs(np.vdot(dpsi, psi)) ** 2))


def collapse_curve(points: Iterable[QfiResult]) -> list[tuple[float, float]]:
    """Map results to (lam/lep, (lep^2 F_Q)^(-1/2))."""
    out = []
    for r in points:
        if not r.lam_ep > 0:
            raise ValidationError("collapse needs lam_ep > 0")
        x = r.lam / r.lam_ep
        y = 0.0 if math.isinf(r.value) else 1.0 / math.sqrt(r.lam_ep**2 * r.value)
        out.append((x, y))
    return out


def exponent_fit(points: Sequence[tuple[float, float]], lam_ep: float) -> float:
    """Slope of log F_Q against log |lam - lep|.

    Only points with |lam - lep|/lep in [1e-6, 1e-2] are used; at least
    eight distinct distances are required.
    """
    if not lam_ep > 0:
        raise ValidationError("lam_ep must be > 0")
    xs, ys = [], []
    for lam, f in points:
        r = abs(lam - lam_ep) / lam_ep
        if 1e-6 * (1 - 1e-9) <= r <= 1e-2 * (1 + 1e-9) and f > 0 and math.isfinite(f):
            xs.append(math.log(abs(lam - lam_ep)))
            ys.append(math.log(f))
    if len(xs) < 8:
        raise ValidationError(f"need >= 8 points within the fitting window, got {len(xs)}")
    xs = np.asarray(xs)
    if np.ptp(xs) == 0:
        raise ValidationError("all points sit at the same distance from the EP")
    slope, _ = np.polyfit(xs, np.asarray(ys), 1)
    return float(slope)


def model_supports_qfi(kind: ModelKind) -> bool:
    return kind in EP_PARAMETERS
