"""Spectra, exceptional points, QFI and spin winding of non-Hermitian Jaynes-Cummings models."""

from .errors import DivergenceError, NHJCMError, NumericalError, OutputError, ValidationError
from .model import (
    Branch,
    EigenSolution,
    LevelIndex,
    ModelKind,
    ModelParams,
    block_hamiltonian,
    discriminant,
    effective_params,
    eigen_closed,
    spectrum,
)
from .qfi import QfiMethod, QfiResult, collapse_curve, exponent_fit, qfi_closed, qfi_near_ep, qfi_numeric
from .symmetry import EpSet, PhaseLabel, PhaseTag, classify_phase, ep_locate, parity_expectation, ptk_expectation
from .texture import Grid1D, Plane, TextureSample, WindingResult, oscillator_fn, spinor_z, texture, winding

__version__ = "0.1.0"
