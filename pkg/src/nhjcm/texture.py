"""Real-space spinors, spin textures and spin winding numbers.

In the oscillator representation |n> -> phi_n(x) an eigenstate becomes the
spinor psi_+^z(x)|up> + psi_-^z(x)|dn> on the sz basis, with

    psi_+-^z(x) = [C_up phi_{n-1}(x) +- C_dn phi_n(x)] / sqrt(2N).

Textures are evaluated through the sx-basis amplitudes
a = C_up phi_{n-1}/sqrt(N), b = C_dn phi_n/sqrt(N):

    <sx> = |a|^2 - |b|^2,  <sz> = 2 Re(a* b),  <sy> = -2 Im(a* b),

which equals |psi_+^z|^2 - |psi_-^z|^2 etc. term by term but keeps exact
zeros exact (e.g. <sz> == 0 in the broken phases).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ValidationError
from .model import EigenSolution

MAX_OSCILLATOR_N = 200
_ANTIPODAL_TOL = 1e-9
_NEGLIGIBLE = 1e-9
_TAIL_SAMPLES = 513


def oscillator_table(n_max: int, x) -> np.ndarray:
    """phi_0 .. phi_{n_max} at ``x``, shape (n_max + 1, *x.shape).

    Uses the normalized three-term recurrence
    phi_{k+1} = sqrt(2/(k+1)) x phi_k - sqrt(k/(k+1)) phi_{k-1}.
    """
    if isinstance(n_max, bool) or int(n_max) != n_max or n_max < 0:
        raise ValidationError(f"oscillator index must be a nonnegative integer, got {n_max!r}")
    if n_max > MAX_OSCILLATOR_N:
        raise ValidationError(f"oscillator index {n_max} exceeds the stable range n <= {MAX_OSCILLATOR_N}")
    x = np.asarray(x, dtype=float)
    out = np.empty((int(n_max) + 1,) + x.shape)
    out[0] = np.pi**-0.25 * np.exp(-0.5 * x * x)
    if n_max >= 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for k in range(1, int(n_max)):
        out[k + 1] = math.sqrt(2.0 / (k + 1)) * x * out[k] - math.sqrt(k / (k + 1)) * out[k - 1]
    return out


def oscillator_fn(n: int, x):
    """Normalized oscillator eigenfunction phi_n(x)."""
    values = oscillator_table(n, x)[n]
    return float(values) if values.ndim == 0 else values


@dataclass(frozen=True)
class Grid1D:
    x_min: float
    x_max: float
    count: int

    def __post_init__(self):
        if not (math.isfinite(self.x_min) and math.isfinite(self.x_max)) or self.x_min >= self.x_max:
            raise ValidationError(f"grid needs finite x_min < x_max, got [{self.x_min}, {self.x_max}]")
        if isinstance(self.count, bool) or int(self.count) != self.count or self.count < 3 or self.count % 2 == 0:
            raise ValidationError(f"grid count must be an odd integer >= 3, got {self.count!r}")

    def points(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, int(self.count))

    def refined(self) -> "Grid1D":
        """Halve the spacing; every old node stays a node."""
        return Grid1D(self.x_min, self.x_max, 2 * int(self.count) - 1)


def default_grid(n: int) -> Grid1D:
    half = math.sqrt(2 * n + 1) + 6
    return Grid1D(-half, half, 4097)


def spinor_z(sol: EigenSolution, x):
    """(psi_+^z(x), psi_-^z(x)) on the sz basis; phi_{-1} = 0 for n = 0."""
    a, b = _sx_amplitudes(sol, np.asarray(x, dtype=float))
    return (a + b) / math.sqrt(2), (a - b) / math.sqrt(2)


def _sx_amplitudes(sol: EigenSolution, x: np.ndarray):
    n = sol.level.n
    phi = oscillator_table(n, x)
    lower = phi[n - 1] if n >= 1 else np.zeros_like(x)
    scale = 1.0 / math.sqrt(sol.norm)
    return sol.c_up * scale * lower, sol.c_down * scale * phi[n]


@dataclass(frozen=True)
class TextureSample:
    x: float
    s_x: float
    s_y: float
    s_z: float
    rho: float


@dataclass(frozen=True)
class Texture:
    """Spin densities on a grid, one array per component."""

    x: np.ndarray
    s_x: np.ndarray
    s_y: np.ndarray
    s_z: np.ndarray
    rho: np.ndarray

    def component(self, axis: str) -> np.ndarray:
        return {"x": self.s_x, "y": self.s_y, "z": self.s_z}[axis]

    def samples(self) -> list[TextureSample]:
        return [
            TextureSample(float(x), float(sx), float(sy), float(sz), float(r))
            for x, sx, sy, sz, r in zip(self.x, self.s_x, self.s_y, self.s_z, self.rho)
        ]


def texture(sol: EigenSolution, grid: Grid1D | None = None) -> Texture:
    grid = grid or default_grid(sol.level.n)
    x = grid.points()
    a, b = _sx_amplitudes(sol, x)
    aa, bb = np.abs(a) ** 2, np.abs(b) ** 2
    ab = np.conj(a) * b
    return Texture(x, aa - bb, -2 * ab.imag, 2 * ab.real, aa + bb)


class Plane(str, Enum):
    ZX = "zx"
    YX = "yx"
    ZY = "zy"


@dataclass(frozen=True)
class WindingResult:
    plane: Plane
    raw: float
    snapped: float | None
    stable: bool = True

    @property
    def quantized(self) -> bool:
        return self.snapped is not None and self.stable

    @property
    def status(self) -> str:
        return "ok" if self.quantized else "unquantized"


def _angle_steps(first: np.ndarray, second: np.ndarray) -> float:
    """Accumulated planar angle along a polyline, in radians.

    Points of negligible magnitude are dropped.  A step between antipodal
    directions is the curve passing through the origin; it adds nothing,
    as in the integral of (u dv - v du)/(u^2 + v^2).
    """
    mag = np.hypot(first, second)
    top = mag.max(initial=0.0)
    if top == 0:
        return 0.0
    keep = mag > _NEGLIGIBLE * top
    theta = np.arctan2(second[keep], first[keep])
    if theta.size < 2:
        return 0.0
    step = np.remainder(np.diff(theta) + np.pi, 2 * np.pi) - np.pi
    step[np.abs(np.abs(step) - np.pi) < _ANTIPODAL_TOL] = 0.0
    return float(step.sum()) + 0.0


def _tail_vectors(sol: EigenSolution, ratio_from: float, ratio_to: float) -> dict[str, np.ndarray]:
    """Spin direction beyond the grid as phi_{n-1}/phi_n runs to 0.

    Dividing the densities by the positive factor phi_n^2/N leaves
    sx ~ |C_up|^2 t^2 - |C_dn|^2, sz ~ 2 Re(C_up* C_dn) t, sy ~ -2 Im(C_up* C_dn) t.
    """
    t = np.linspace(ratio_from, ratio_to, _TAIL_SAMPLES)
    cross = np.conj(sol.c_up) * sol.c_down
    return {
        "x": abs(sol.c_up) ** 2 * t * t - abs(sol.c_down) ** 2,
        "y": -2 * cross.imag * t,
        "z": 2 * cross.real * t,
    }


def _unit(a: np.ndarray, b: np.ndarray):
    mag = np.hypot(a, b)
    keep = np.flatnonzero(mag > _NEGLIGIBLE * mag.max(initial=0.0))
    return a[keep] / mag[keep], b[keep] / mag[keep], keep


def winding_raw(sol: EigenSolution, plane: Plane | str, grid: Grid1D | None = None) -> float:
    """Total turning of (<s_first>, <s_second>) over the whole line, in turns.

    The grid covers the bulk of the wavefunction; beyond the outermost
    resolved points the direction is followed analytically through the
    ratio phi_{n-1}/phi_n, which runs to zero as |x| grows.  The result
    therefore does not depend on where the grid is cut off.
    """
    plane = Plane(plane)
    grid = grid or default_grid(sol.level.n)
    tex = texture(sol, grid)
    first_axis, second_axis = plane.value
    ua, ub, keep = _unit(tex.component(first_axis), tex.component(second_axis))
    if keep.size == 0:
        return 0.0
    parts_a, parts_b = [ua], [ub]
    n = sol.level.n
    if n >= 1 and sol.c_down != 0:
        ends = tex.x[[keep[0], keep[-1]]]
        phi = oscillator_table(n, ends)
        lower, upper = phi[n - 1], phi[n]
        if upper[0] != 0:
            left = _tail_vectors(sol, 0.0, lower[0] / upper[0])
            la, lb, _ = _unit(left[first_axis], left[second_axis])
            parts_a.insert(0, la)
            parts_b.insert(0, lb)
        if upper[1] != 0:
            right = _tail_vectors(sol, lower[1] / upper[1], 0.0)
            ra, rb, _ = _unit(right[first_axis], right[second_axis])
            parts_a.append(ra)
            parts_b.append(rb)
    return _angle_steps(np.concatenate(parts_a), np.concatenate(parts_b)) / (2 * np.pi) + 0.0


def snap_half(raw: float, tol: float = 1e-3) -> float | None:
    snapped = round(2 * raw) / 2
    return snapped + 0.0 if abs(raw - snapped) < tol else None


def winding(sol: EigenSolution, plane: Plane | str, grid: Grid1D | None = None, refine: bool = True) -> WindingResult:
    """Spin winding number in ``plane``, with a two-step refinement check."""
    plane = Plane(plane)
    grid = grid or default_grid(sol.level.n)
    raw = winding_raw(sol, plane, grid)
    stable = True
    if refine:
        finer = grid.refined()
        values = [raw, winding_raw(sol, plane, finer), winding_raw(sol, plane, finer.refined())]
        stable = max(values) - min(values) < 1e-3
    return WindingResult(plane, raw, snap_half(raw), stable)
