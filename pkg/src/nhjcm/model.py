"""Closed-form eigenproblem of the non-Hermitian Jaynes-Cummings model.

The Hamiltonian

    H = w~ a^+ a + (W~/2) sx + g~ (s-~ a^+ + s+~ a),
    w~ = omega - i kappa,  W~ = Omega - i gamma,  g~ = g - i Gamma,

conserves the excitation number a^+ a + sx/2 + 1/2, so it splits into the
one-dimensional sector |0, dn> and 2x2 blocks on (|n-1, up>, |n, dn>) for
n >= 1.  Spin labels up/dn refer to the sx eigenbasis.

Two special cases get their own kinds:

* ``ModelKind.PT``      -- H_gamma: Omega = omega, lossy qubit, real coupling g.
* ``ModelKind.ANTI_PT`` -- H_Gamma: real qubit splitting, coupling +i Gamma.

For these two kinds the block discriminant is real and is evaluated from
its real closed form, which keeps exact zeros exact (the spin textures and
the winding numbers rely on that).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from enum import Enum, IntEnum

import numpy as np

from .errors import ValidationError

PARAM_NAMES = ("omega", "kappa", "Omega", "gamma", "g", "Gamma")
_NONNEGATIVE = ("kappa", "gamma", "g", "Gamma")


class ModelKind(str, Enum):
    GENERIC = "generic"
    PT = "hgamma"
    ANTI_PT = "hgammaU"

    @classmethod
    def parse(cls, text: str) -> "ModelKind":
        aliases = {
            "generic": cls.GENERIC,
            "hgamma": cls.PT,
            "h_gamma": cls.PT,
            "pt": cls.PT,
            "hgammau": cls.ANTI_PT,
            "hbiggamma": cls.ANTI_PT,
            "antipt": cls.ANTI_PT,
            "anti-pt": cls.ANTI_PT,
        }
        if text == "hGamma":
            return cls.ANTI_PT
        try:
            return aliases[text.lower()]
        except KeyError:
            raise ValidationError(
                f"unknown model kind {text!r}; expected one of generic, hgamma, hgammaU"
            ) from None


class Branch(IntEnum):
    MINUS = -1
    PLUS = 1

    @classmethod
    def parse(cls, value) -> "Branch":
        if isinstance(value, str):
            table = {"+": cls.PLUS, "+1": cls.PLUS, "plus": cls.PLUS, "1": cls.PLUS,
                     "-": cls.MINUS, "-1": cls.MINUS, "minus": cls.MINUS}
            try:
                return table[value.strip().lower()]
            except KeyError:
                raise ValidationError(f"bad branch label {value!r}") from None
        if value in (1, -1):
            return cls(int(value))
        raise ValidationError(f"bad branch label {value!r}")

    @property
    def symbol(self) -> str:
        return "+" if self is Branch.PLUS else "-"


@dataclass(frozen=True)
class ModelParams:
    """The six real model parameters plus the model kind.

    Use the :meth:`hgamma`, :meth:`hgammaU` and :meth:`generic` constructors;
    they fill in the values each special model pins.
    """

    omega: float
    kappa: float = 0.0
    Omega: float = 1.0
    gamma: float = 0.0
    g: float = 0.0
    Gamma: float = 0.0
    kind: ModelKind = ModelKind.GENERIC

    def __post_init__(self):
        for name in PARAM_NAMES:
            value = getattr(self, name)
            if not isinstance(value, (int, float, np.floating, np.integer)) or isinstance(value, bool):
                raise ValidationError(f"{name} must be a real number, got {value!r}")
            if not math.isfinite(value):
                raise ValidationError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, float(value))
        object.__setattr__(self, "kind", ModelKind(self.kind))
        if self.omega <= 0:
            raise ValidationError(f"omega must be > 0, got {self.omega}")
        for name in _NONNEGATIVE:
            if getattr(self, name) < 0:
                raise ValidationError(f"{name} must be >= 0, got {getattr(self, name)}")
        if self.kind is ModelKind.PT:
            if self.Omega != self.omega or self.Gamma != 0 or self.kappa != 0:
                raise ValidationError("hgamma requires Omega == omega and Gamma == kappa == 0")
        elif self.kind is ModelKind.ANTI_PT:
            if self.gamma != 0 or self.kappa != 0 or self.g != 0:
                raise ValidationError("hgammaU requires gamma == kappa == g == 0")

    @classmethod
    def hgamma(cls, omega: float, gamma: float, g: float) -> "ModelParams":
        return cls(omega=omega, Omega=omega, gamma=gamma, g=g, kind=ModelKind.PT)

    @classmethod
    def hgammaU(cls, omega: float, Omega: float, Gamma: float) -> "ModelParams":
        return cls(omega=omega, Omega=Omega, Gamma=Gamma, kind=ModelKind.ANTI_PT)

    @classmethod
    def generic(cls, omega, kappa=0.0, Omega=1.0, gamma=0.0, g=0.0, Gamma=0.0) -> "ModelParams":
        return cls(omega, kappa, Omega, gamma, g, Gamma, ModelKind.GENERIC)

    @classmethod
    def build(cls, kind: ModelKind | str, **values) -> "ModelParams":
        """Build params of ``kind`` from a loose mapping, ignoring pinned names."""
        kind = kind if isinstance(kind, ModelKind) else ModelKind.parse(kind)
        unknown = set(values) - set(PARAM_NAMES)
        if unknown:
            raise ValidationError(f"unknown parameter(s): {', '.join(sorted(unknown))}")
        if "omega" not in values:
            raise ValidationError("omega is required")
        if kind is ModelKind.PT:
            return cls.hgamma(values["omega"], values.get("gamma", 0.0), values.get("g", 0.0))
        if kind is ModelKind.ANTI_PT:
            return cls.hgammaU(values["omega"], values.get("Omega", 1.0), values.get("Gamma", 0.0))
        return cls(**values, kind=ModelKind.GENERIC)

    def with_param(self, name: str, value: float) -> "ModelParams":
        """Copy with one parameter replaced; for hgamma, omega drags Omega along."""
        if name not in PARAM_NAMES:
            raise ValidationError(f"unknown parameter {name!r}")
        if self.kind is ModelKind.PT and name in ("omega", "Omega"):
            return replace(self, omega=value, Omega=value)
        return replace(self, **{name: value})

    def as_dict(self) -> dict:
        return {name: getattr(self, name) for name in PARAM_NAMES}


@dataclass(frozen=True, order=True)
class LevelIndex:
    n: int
    eta: Branch = Branch.PLUS

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 0:
            raise ValidationError(f"level n must be a nonnegative integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "eta", Branch.parse(self.eta))
        if self.n == 0:
            # the n = 0 sector has a single state
            object.__setattr__(self, "eta", Branch.PLUS)

    def __str__(self):
        return f"n={self.n}" if self.n == 0 else f"n={self.n},eta={self.eta.symbol}"


@dataclass(frozen=True)
class EigenSolution:
    """One closed-form eigenstate (c_up |n-1,up> + c_down |n,dn>) / sqrt(norm)."""

    level: LevelIndex
    energy: complex
    c_up: complex
    c_down: complex
    norm: float
    at_ep: bool = False

    def state(self) -> np.ndarray:
        """Normalized amplitudes on the ordered block basis (|n-1,up>, |n,dn>)."""
        return np.array([self.c_up, self.c_down], dtype=complex) / math.sqrt(self.norm)


def effective_params(p: ModelParams) -> tuple[complex, complex, complex]:
    """Complex (omega~, Omega~, g~) for the given model kind."""
    omega_t = complex(p.omega, -p.kappa)
    Omega_t = complex(p.Omega, -p.gamma)
    if p.kind is ModelKind.ANTI_PT:
        g_t = complex(0.0, p.Gamma)
    else:
        g_t = complex(p.g, -p.Gamma)
    return omega_t, Omega_t, g_t


def _require_block(n) -> int:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValidationError(f"block index n must be an integer >= 1, got {n!r}")
    return int(n)


def block_hamiltonian(p: ModelParams, n: int) -> np.ndarray:
    """2x2 block of H on (|n-1, up>, |n, dn>)."""
    n = _require_block(n)
    w, W, g = effective_params(p)
    off = g * math.sqrt(n)
    return np.array([[(n - 1) * w + W / 2, off], [off, n * w - W / 2]], dtype=complex)


def discriminant(p: ModelParams, n: int) -> complex:
    """The radicand e_-^2 + n g~^2; it vanishes exactly at the EPs of block n."""
    n = _require_block(n)
    if p.kind is ModelKind.PT:
        return complex(n * p.g**2 - p.gamma**2 / 4, 0.0)
    if p.kind is ModelKind.ANTI_PT:
        return complex((p.Omega - p.omega) ** 2 / 4 - n * p.Gamma**2, 0.0)
    w, W, g = effective_params(p)
    e_minus = (W - w) / 2
    return e_minus * e_minus + n * g * g


def principal_sqrt(z: complex) -> complex:
    """Square root with Re >= 0, and Im >= 0 when Re == 0.

    ``cmath.sqrt`` follows the sign of a signed-zero imaginary part, so the
    branch has to be pinned by hand.
    """
    z = complex(z)
    if z.imag == 0:
        if z.real >= 0:
            return complex(math.sqrt(z.real), 0.0)
        return complex(0.0, math.sqrt(-z.real))
    r = cmath.sqrt(z)
    if r.real < 0 or (r.real == 0 and r.imag < 0):
        r = -r
    return complex(r.real + 0.0, r.imag + 0.0)


def ep_tolerance(p: ModelParams, n: int) -> float:
    return 1e-12 * max(p.Omega**2, n * p.Gamma**2, n * p.g**2, p.gamma**2)


def eigen_closed(p: ModelParams, level: LevelIndex) -> EigenSolution:
    """Closed-form eigenpair for ``level``.

    E = e_+ + eta*sqrt(disc), C_up = e_- + eta*sqrt(disc), C_dn = g~ sqrt(n),
    with e_+ = (n - 1/2) w~, e_- = (W~ - w~)/2.  The branch label eta follows
    the formula, not energy ordering, so it stays well defined through EPs.
    In the decoupled limit with e_- + eta*sqrt(disc) = 0 the formula yields
    the zero vector; the eigenvector then lies entirely on |n, dn>.
    """
    if not isinstance(level, LevelIndex):
        level = LevelIndex(*level)
    w, W, g = effective_params(p)
    n = level.n
    if n == 0:
        return EigenSolution(level, -W / 2, 0j, 1 + 0j, 1.0)
    disc = discriminant(p, n)
    root = int(level.eta) * principal_sqrt(disc)
    e_plus = (n - 0.5) * w
    e_minus = (W - w) / 2
    c_down = g * math.sqrt(n)
    small, large = e_minus + root, e_minus - root
    if abs(small) < abs(large):
        # (e_- + root)(e_- - root) = -n g~^2 avoids the cancellation
        c_up = -n * g * g / large
    else:
        c_up = small
    norm = abs(c_up) ** 2 + abs(c_down) ** 2
    if norm == 0.0:
        # g~ = 0: take the null vector of the first row instead
        c_up, c_down = c_down, root - e_minus
        norm = abs(c_down) ** 2
    if norm == 0.0:
        # ... and e_- = 0 as well: degenerate block, pick basis states
        if level.eta is Branch.PLUS:
            c_up, c_down = 1 + 0j, 0j
        else:
            c_up, c_down = 0j, 1 + 0j
        norm = 1.0
    return EigenSolution(
        level,
        e_plus + root,
        c_up,
        c_down,
        norm,
        at_ep=abs(disc) <= ep_tolerance(p, n),
    )


def levels(n_max: int) -> list[LevelIndex]:
    """All levels up to ``n_max``: ascending n, eta = - before +."""
    if isinstance(n_max, bool) or int(n_max) != n_max or n_max < 0:
        raise ValidationError(f"n_max must be a nonnegative integer, got {n_max!r}")
    out = [LevelIndex(0)]
    for n in range(1, int(n_max) + 1):
        out += [LevelIndex(n, Branch.MINUS), LevelIndex(n, Branch.PLUS)]
    return out


def spectrum(p: ModelParams, n_max: int) -> list[tuple[LevelIndex, complex]]:
    return [(lvl, eigen_closed(p, lvl).energy) for lvl in levels(n_max)]
