"""Exceptional points, phase labels and the two symmetry expectations.

The order parameter is the antilinear expectation <psi| Pi_x K |psi>, with
K entrywise conjugation on the block basis and Pi_x the swap
|n-1, up> <-> |n, dn>.  Its modulus is 1 in the symmetric phases and drops
below 1 once the symmetry is spontaneously broken.  The parity
e^{i pi a^+a} sx acts as the constant (-1)^(n-1) on block n, so it is never
broken.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import ValidationError
from .model import EigenSolution, LevelIndex, ModelKind, ModelParams, discriminant, ep_tolerance

EP_PARAMETERS = {
    ModelKind.PT: ("g", "gamma"),
    ModelKind.ANTI_PT: ("Gamma", "omega"),
}


class PhaseTag(str, Enum):
    SYMMETRIC = "Symmetric"
    BROKEN = "Broken"
    AT_EP = "AtEP"


class SymmetryKind(str, Enum):
    PT = "PT"
    ANTI_PT = "AntiPT"


@dataclass(frozen=True)
class PhaseLabel:
    tag: PhaseTag
    symmetry: SymmetryKind

    def __str__(self):
        return f"{self.tag.value}({self.symmetry.value})"


@dataclass(frozen=True)
class EpSet:
    parameter_name: str
    values: tuple[float, ...]
    n: int


def _check_name(p: ModelParams, parameter_name: str):
    allowed = EP_PARAMETERS.get(p.kind)
    if allowed is None:
        raise ValidationError("exceptional points are only tabulated for hgamma and hgammaU")
    if parameter_name not in allowed:
        raise ValidationError(
            f"parameter {parameter_name!r} has no EP formula for {p.kind.value}; "
            f"use one of {', '.join(allowed)}"
        )


def ep_locate(p: ModelParams, n: int, parameter_name: str) -> EpSet:
    """Closed-form EP value(s) of ``parameter_name`` in block ``n``.

    The other parameters are held at their values in ``p``.  For omega both
    roots Omega -/+ 2 sqrt(n) Gamma are returned when positive, ascending.
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValidationError(f"EPs exist only for blocks n >= 1, got {n!r}")
    _check_name(p, parameter_name)
    root_n = math.sqrt(n)
    if parameter_name == "g":
        values = (p.gamma / (2 * root_n),)
    elif parameter_name == "gamma":
        values = (2 * root_n * p.g,)
    elif parameter_name == "Gamma":
        values = (abs(p.Omega - p.omega) / (2 * root_n),)
    else:
        shift = 2 * root_n * p.Gamma
        values = tuple(sorted({w for w in (p.Omega - shift, p.Omega + shift) if w > 0}))
    return EpSet(parameter_name, values, int(n))


def detuning_ep(p: ModelParams, n: int) -> float:
    """EP of the detuning |Omega - omega| for hgammaU: 2 sqrt(n) Gamma."""
    return 2 * math.sqrt(n) * p.Gamma


def classify_phase(p: ModelParams, n: int, tol: float | None = None) -> PhaseLabel:
    """Symmetric / Broken / AtEP from the sign of the block discriminant.

    hgamma has real energies in its PT-symmetric phase (discriminant > 0);
    hgammaU is the other way round: the anti-PT-symmetric phase has a
    negative discriminant and complex energies.
    """
    if p.kind is ModelKind.PT:
        symmetry = SymmetryKind.PT
    elif p.kind is ModelKind.ANTI_PT:
        symmetry = SymmetryKind.ANTI_PT
    else:
        raise ValidationError("phase classification needs the hgamma or hgammaU model")
    disc = discriminant(p, n).real
    if tol is None:
        tol = ep_tolerance(p, n)
    if abs(disc) <= tol:
        return PhaseLabel(PhaseTag.AT_EP, symmetry)
    positive = disc > 0
    if symmetry is SymmetryKind.ANTI_PT:
        positive = not positive
    return PhaseLabel(PhaseTag.SYMMETRIC if positive else PhaseTag.BROKEN, symmetry)


def ptk_expectation(sol: EigenSolution) -> complex:
    """<psi| Pi_x K psi> = 2 conj(C_up C_dn) / N."""
    if not sol.norm > 0:
        raise ValidationError("eigen solution has zero norm")
    return 2 * (sol.c_up * sol.c_down).conjugate() / sol.norm


def parity_expectation(level: LevelIndex) -> int:
    """Eigenvalue of e^{i pi a^+a} sx on the level; (-1)^(n-1), and -1 for n = 0."""
    if level.n == 0:
        return -1
    return 1 if (level.n - 1) % 2 == 0 else -1
