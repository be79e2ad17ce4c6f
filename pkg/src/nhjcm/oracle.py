"""Brute-force references for the closed forms.

Everything here works on the full truncated Fock space |m> (x) {up, dn}
(sx basis, index 2m + s with s = 0 for up) and a general non-Hermitian
eigensolver, so it shares no algebra with :mod:`nhjcm.model` beyond the
definition of the Hamiltonian itself.  Truncating at m = n_max keeps every
block n <= n_max exact; the lone state |n_max, up> belongs to the cut-off
block n_max + 1 and is reported as such.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ValidationError
from .model import (
    Branch,
    LevelIndex,
    ModelKind,
    ModelParams,
    effective_params,
    eigen_closed,
)
from .qfi import _axis, infidelity

MAX_DIMENSION = 4096

# spin operators on the sx basis (up, dn)
SIGMA_X = np.diag([1.0, -1.0]).astype(complex)
RAISE = np.array([[0, 1], [0, 0]], dtype=complex)  # |up><dn|
LOWER = RAISE.T.copy()


@dataclass(frozen=True)
class DenseProblem:
    n_max: int
    matrix: np.ndarray

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class DenseEigenpair:
    value: complex
    vector: np.ndarray
    block: int


def annihilation(n_max: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n_max + 1, dtype=float)), k=1).astype(complex)


def build_dense(p: ModelParams, n_max: int) -> DenseProblem:
    """H = w~ a^+a + (W~/2) sx + g~ (s-~ a^+ + s+~ a) on m = 0..n_max."""
    if isinstance(n_max, bool) or int(n_max) != n_max or n_max < 1:
        raise ValidationError(f"n_max must be an integer >= 1, got {n_max!r}")
    n_max = int(n_max)
    if 2 * (n_max + 1) > MAX_DIMENSION:
        raise ValidationError(f"dimension {2 * (n_max + 1)} exceeds {MAX_DIMENSION}")
    w, W, g = effective_params(p)
    a = annihilation(n_max)
    ad = a.conj().T
    eye_b, eye_s = np.eye(n_max + 1), np.eye(2)
    h = (
        w * np.kron(ad @ a, eye_s)
        + (W / 2) * np.kron(eye_b, SIGMA_X)
        + g * (np.kron(ad, LOWER) + np.kron(a, RAISE))
    )
    return DenseProblem(n_max, h)


def excitation_numbers(n_max: int) -> np.ndarray:
    """U(1) label a^+a + sx/2 + 1/2 of every basis state."""
    m = np.repeat(np.arange(n_max + 1), 2)
    up = np.tile([1, 0], n_max + 1)
    return m + up


def block_indices(n: int) -> tuple[int, int]:
    """Basis positions of |n-1, up> and |n, dn>."""
    return 2 * (n - 1), 2 * n + 1


def dense_eigen(problem: DenseProblem) -> list[DenseEigenpair]:
    """All right eigenpairs, each tagged with the U(1) block it lives in."""
    if problem.dimension > MAX_DIMENSION:
        raise ValidationError(f"dimension {problem.dimension} exceeds {MAX_DIMENSION}")
    try:
        values, vectors = np.linalg.eig(problem.matrix)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"dense eigensolver failed: {exc}") from exc
    if not (np.all(np.isfinite(values)) and np.all(np.isfinite(vectors))):
        raise NumericalError("dense eigensolver returned non-finite values")
    labels = excitation_numbers(problem.n_max)
    out = []
    for k in range(values.size):
        v = vectors[:, k]
        weight = np.bincount(labels, weights=np.abs(v) ** 2, minlength=problem.n_max + 2)
        block = int(np.argmax(weight))
        if weight[block] < 0.5 * weight.sum():
            raise NumericalError(f"eigenvector {k} is not confined to one excitation block")
        out.append(DenseEigenpair(complex(values[k]), fix_phase(v / np.linalg.norm(v)), block))
    out.sort(key=lambda e: (e.block, e.value.real, e.value.imag))
    return out


def fix_phase(v: np.ndarray) -> np.ndarray:
    """Rotate so the largest-modulus component is real and positive."""
    k = int(np.argmax(np.abs(v)))
    if v[k] == 0:
        return v
    return v * (abs(v[k]) / v[k])


def match_levels(p: ModelParams, pairs: list[DenseEigenpair], n_max: int) -> dict[LevelIndex, DenseEigenpair]:
    """Assign dense eigenpairs to closed-form labels by nearest energy per block."""
    by_block: dict[int, list[DenseEigenpair]] = {}
    for e in pairs:
        by_block.setdefault(e.block, []).append(e)
    out = {}
    zero = by_block.get(0, [])
    if len(zero) != 1:
        raise NumericalError(f"expected one state in block 0, found {len(zero)}")
    out[LevelIndex(0)] = zero[0]
    for n in range(1, n_max + 1):
        found = by_block.get(n, [])
        if len(found) != 2:
            raise NumericalError(f"expected two states in block {n}, found {len(found)}")
        e_minus = eigen_closed(p, LevelIndex(n, Branch.MINUS)).energy
        e_plus = eigen_closed(p, LevelIndex(n, Branch.PLUS)).energy
        a, b = found
        straight = max(abs(a.value - e_minus), abs(b.value - e_plus))
        swapped = max(abs(b.value - e_minus), abs(a.value - e_plus))
        if swapped < straight:
            a, b = b, a
        out[LevelIndex(n, Branch.MINUS)] = a
        out[LevelIndex(n, Branch.PLUS)] = b
    return out


def max_spectrum_error(p: ModelParams, n_max: int) -> float:
    """Largest |E_closed - E_dense| over all exact levels up to n_max."""
    matched = match_levels(p, dense_eigen(build_dense(p, n_max)), n_max)
    return max(abs(e.value - eigen_closed(p, lvl).energy) for lvl, e in matched.items())


def block_state(pair: DenseEigenpair, n: int) -> np.ndarray:
    """Dense eigenvector restricted to block n, normalized."""
    if n == 0:
        return np.array([pair.vector[1]]) / abs(pair.vector[1])
    i, j = block_indices(n)
    v = pair.vector[[i, j]]
    return v / np.linalg.norm(v)


def dense_level_state(p: ModelParams, level: LevelIndex, n_max: int | None = None) -> np.ndarray:
    """Normalized dense eigenvector of ``level`` on (|n-1,up>, |n,dn>)."""
    n_max = n_max or level.n + 2
    pairs = dense_eigen(build_dense(p, max(n_max, 1)))
    matched = match_levels(p, pairs, max(n_max, 1))
    return block_state(matched[level], level.n)


def coalescence_overlap(p: ModelParams, n: int, n_max: int | None = None) -> float:
    """|<v_-|v_+>| of the two dense eigenvectors in block n (1 at an EP)."""
    n_max = n_max or n + 2
    pairs = [e for e in dense_eigen(build_dense(p, n_max)) if e.block == n]
    if len(pairs) != 2:
        raise NumericalError(f"expected two states in block {n}, found {len(pairs)}")
    return float(abs(np.vdot(pairs[0].vector, pairs[1].vector)))


def fidelity_susceptibility(p: ModelParams, level: LevelIndex, parameter_name: str, delta: float | None = None) -> float:
    """8 (1 - |<psi(lam)|psi(lam +- delta)>|) / delta^2 from dense eigenvectors.

    The +delta and -delta overlaps are averaged.  Labelling relies on the
    two block energies being well separated; near an EP that fails loudly.
    """
    if not isinstance(level, LevelIndex):
        level = LevelIndex(*level)
    if level.n == 0:
        return 0.0
    axis = _axis(p, level.n, parameter_name)
    lam, lam_ep = axis.lam, axis.lam_ep
    delta = 1e-5 * max(lam, lam_ep) if delta is None else float(delta)
    if abs(lam - lam_ep) <= 2 * delta:
        raise ValidationError(f"delta {delta} reaches across the EP at {lam_ep}")

    def state(x):
        q = axis.make(x)
        gap = abs(eigen_closed(q, LevelIndex(level.n, Branch.PLUS)).energy
                  - eigen_closed(q, LevelIndex(level.n, Branch.MINUS)).energy)
        scale = abs(q.omega) + abs(q.Omega) + abs(q.g) + abs(q.Gamma) + abs(q.gamma)
        if gap < 1e-6 * scale:
            raise NumericalError(
                f"branches of block {level.n} are {gap:.3g} apart at {parameter_name}={x}; "
                "cannot tell the dense eigenvectors apart"
            )
        return dense_level_state(q, level)

    ref = state(lam)
    steps = [s for s in (delta, -delta) if _admissible(axis, lam + s)]
    if not steps:
        raise NumericalError(f"no admissible step around {parameter_name}={lam}")
    return float(np.mean([8 * infidelity(ref, state(lam + s)) / delta**2 for s in steps]))


def _admissible(axis, lam) -> bool:
    try:
        axis.make(lam)
    except ValidationError:
        return False
    return True


def parity_operator(n_max: int) -> np.ndarray:
    """e^{i pi a^+a} sx on the truncated space."""
    signs = (-1.0) ** np.arange(n_max + 1)
    return np.kron(np.diag(signs), SIGMA_X)


def parity_of(pair: DenseEigenpair, n_max: int) -> complex:
    v = pair.vector
    return complex(np.vdot(v, parity_operator(n_max) @ v) / np.vdot(v, v))


def random_params(kind: ModelKind, rng: np.random.Generator) -> ModelParams:
    """Parameters uniform in [0, 2], with omega in [0.01, 2]."""
    omega = rng.uniform(0.01, 2.0)
    if kind is ModelKind.PT:
        return ModelParams.hgamma(omega, rng.uniform(0, 2), rng.uniform(0, 2))
    if kind is ModelKind.ANTI_PT:
        return ModelParams.hgammaU(omega, rng.uniform(0, 2), rng.uniform(0, 2))
    kappa, Omega, gamma, g, Gamma = rng.uniform(0, 2, size=5)
    return ModelParams.generic(omega, kappa, Omega, gamma, g, Gamma)


def eigenvector_residual(p: ModelParams, level: LevelIndex, n_max: int | None = None) -> float:
    """Distance between dense and closed-form block vectors after phase alignment.

    Largest-modulus phase fixing is ambiguous when |C_up| = |C_dn| (every
    symmetric-phase state), so the closed vector is rotated onto the dense
    one by the phase of their overlap instead.
    """
    dense = fix_phase(dense_level_state(p, level, n_max))
    closed = eigen_closed(p, level).state()
    if level.n == 0:
        closed = np.array([1.0 + 0j])
    return math.sqrt(2 * infidelity(dense, closed))


def spin_ladder_check() -> float:
    """Max deviation of (sz -+ i sy)/2, rotated to the sx basis, from |up><dn| and |dn><up|."""
    sy = np.array([[0, -1j], [1j, 0]])
    sz = np.diag([1.0, -1.0]).astype(complex)
    rot = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)  # columns: up, dn
    plus = rot.conj().T @ ((sz - 1j * sy) / 2) @ rot
    minus = rot.conj().T @ ((sz + 1j * sy) / 2) @ rot
    return float(max(np.abs(plus - RAISE).max(), np.abs(minus - LOWER).max()))
