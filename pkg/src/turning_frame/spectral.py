"""Evolution in the energy representation for general system Hamiltonians.

The phase law survives arbitrary Hamiltonians once states are expanded in
energy eigenstates: each coefficient picks up the same accumulated phase
with the eigenvalue substituted for the momentum.  Continuous spectra are
handled by the caller as quadrature nodes with weights folded into the
coefficients.  Observables are supplied as Hermitian matrices in the
eigenbasis; no conjugate "time operator" is exposed.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError, InvalidStateError
from .model import FrameModel

_NORM_TOL = 1e-9
_HERMITICITY_TOL = 1e-12


@dataclass(frozen=True)
class SpectralState:
    """Normalized coefficients over a discrete positive energy spectrum."""

    energies: np.ndarray
    coeffs: np.ndarray
    tau: float = 0.0

    def __post_init__(self):
        energies = np.asarray(self.energies, dtype=np.float64)
        coeffs = np.asarray(self.coeffs, dtype=np.complex128)
        if energies.ndim != 1 or energies.shape != coeffs.shape:
            raise InvalidStateError("energies and coeffs must be matching 1-d arrays")
        if np.any(energies <= 0.0):
            raise DomainError("all energies must be positive")
        if np.any(np.diff(energies) <= 0.0):
            raise DomainError("energies must be strictly increasing")
        norm2 = float(np.sum(np.abs(coeffs) ** 2))
        if abs(norm2 - 1.0) > _NORM_TOL:
            raise InvalidStateError(
                f"coefficient norm^2 {norm2:.12f} deviates from 1 beyond {_NORM_TOL}"
            )
        energies.setflags(write=False)
        coeffs.setflags(write=False)
        object.__setattr__(self, "energies", energies)
        object.__setattr__(self, "coeffs", coeffs)


@dataclass(frozen=True)
class ObservableMatrix:
    """Hermitian matrix in the energy eigenbasis."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InvalidStateError("observable must be a square matrix")
        if np.max(np.abs(m - m.conj().T)) > _HERMITICITY_TOL:
            raise InvalidStateError("observable matrix is not Hermitian")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def propagate(state: SpectralState, tau: float, model: FrameModel) -> SpectralState:
    """Advance spectral coefficients by the turning-point phase law."""
    dphi = (
        _kernels.phase_profile(state.energies, float(tau), model.lam)
        - _kernels.phase_profile(state.energies, float(state.tau), model.lam)
    )
    coeffs = _kernels.apply_phase(np.asarray(state.coeffs), dphi, model.hbar)
    return SpectralState(energies=state.energies, coeffs=coeffs, tau=float(tau))


def expectation(state: SpectralState, obs: ObservableMatrix) -> float:
    """Real expectation value <c, A c> of a Hermitian observable."""
    if obs.dim != state.energies.shape[0]:
        raise DomainError(
            f"observable dimension {obs.dim} does not match spectrum "
            f"length {state.energies.shape[0]}"
        )
    value = complex(np.vdot(state.coeffs, obs.matrix @ state.coeffs))
    if abs(value.imag) > 1e-10:
        raise InvalidStateError(
            f"expectation imaginary residual {value.imag:.3e} exceeds 1e-10"
        )
    return float(value.real)


def save_spectral_csv(state: SpectralState, path) -> None:
    """Write a spectral state as ``E,re,im`` rows."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["E", "re", "im"])
        for e, c in zip(state.energies, state.coeffs):
            writer.writerow([format(e, ".17g"),
                             format(c.real, ".17g"),
                             format(c.imag, ".17g")])


def load_spectral_csv(path, tau: float = 0.0) -> SpectralState:
    """Read an ``E,re,im`` file back into a spectral state."""
    energies, coeffs = [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if [c.strip() for c in header[:3]] != ["E", "re", "im"]:
            raise InvalidStateError(f"unexpected spectral CSV header: {header}")
        for row in reader:
            energies.append(float(row[0]))
            coeffs.append(complex(float(row[1]), float(row[2])))
    return SpectralState(
        energies=np.asarray(energies), coeffs=np.asarray(coeffs), tau=tau
    )


def save_observable_csv(obs: ObservableMatrix, path) -> None:
    """Write an observable as dense rows of ``re:im`` cell pairs."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for row in obs.matrix:
            writer.writerow(
                [f"{format(z.real, '.17g')}:{format(z.imag, '.17g')}" for z in row]
            )


def load_observable_csv(path) -> ObservableMatrix:
    """Read a dense ``re:im`` matrix file back into an observable."""
    rows = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            rows.append([complex(*map(float, cell.split(":"))) for cell in row])
    return ObservableMatrix(matrix=np.asarray(rows))
