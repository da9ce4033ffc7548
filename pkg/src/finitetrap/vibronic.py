"""Rotating-wave interaction Hamiltonian on the two-level x Fock space.

Basis ordering is ``|g,0>..|g,dim-1>, |e,0>..|e,dim-1>``; energies are in
units of hbar * Omega1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coupling import DriveParams, g_eta, sideband_table
from .errors import UsageError
from .steady_state import MotionalState
from .trap import OperatorMatrix, TrapParams, bare_lowering


@dataclass(frozen=True)
class VibronicState:
    amps: np.ndarray
    dim: int

    def __post_init__(self):
        a = np.asarray(self.amps, dtype=complex)
        if a.shape != (2 * self.dim,):
            raise UsageError(f"expected {2 * self.dim} amplitudes, got {a.shape}")
        if abs(np.linalg.norm(a) - 1.0) > 1e-12:
            raise UsageError("vibronic state is not normalized")

    @classmethod
    def ground(cls, motion: MotionalState) -> "VibronicState":
        """``|g> (x) |psi>``."""
        return cls(np.concatenate([motion.amps, np.zeros(motion.dim)]), motion.dim)

    def density(self) -> np.ndarray:
        return np.outer(self.amps, self.amps.conj())


def sideband_block(trap: TrapParams, drive: DriveParams) -> np.ndarray:
    """``(Omega0/Omega1) F_0(n) + g(eta) F_1(n) a`` on levels ``0..n_max``."""
    F0, F1 = sideband_table(trap, drive.eta)
    dim = trap.n_max + 1
    return drive.rabi_ratio * np.diag(F0).astype(complex) + g_eta(drive.eta, trap) * (F1[:, None] * bare_lowering(dim))


def build_interaction_hamiltonian(trap: TrapParams, drive: DriveParams) -> OperatorMatrix:
    """``S+ (x) B + S- (x) B^dag`` with ``B`` from :func:`sideband_block`."""
    if drive.omega1 is not None and drive.omega1 <= 0:
        raise UsageError("Hamiltonian is expressed in units of Omega1 > 0")
    drive.check(trap)
    B = sideband_block(trap, drive)
    dim = B.shape[0]
    H = np.zeros((2 * dim, 2 * dim), dtype=complex)
    H[dim:, :dim] = B
    H[:dim, dim:] = B.conj().T
    return OperatorMatrix(H, label="H_I", hermitian=True)


def _applied(state: MotionalState, trap: TrapParams, drive: DriveParams) -> np.ndarray:
    if state.dim != trap.n_max + 1:
        raise UsageError(f"state has {state.dim} levels, trap keeps {trap.n_max + 1}")
    H = build_interaction_hamiltonian(trap, drive)
    return H.entries @ VibronicState.ground(state).amps


def stationarity_residual(state: MotionalState, trap: TrapParams, drive: DriveParams) -> float:
    """``|| H_I |g, psi> ||`` without the top motional level of the excited block."""
    dim = state.dim
    out = _applied(state, trap, drive)
    return float(np.linalg.norm(np.concatenate([out[:dim], out[dim : 2 * dim - 1]])))


def commutator_norm(state: MotionalState, trap: TrapParams, drive: DriveParams, drop_edge: bool = True) -> float:
    """Frobenius norm of ``[H_I, rho]`` for ``rho = |g,psi><g,psi|``.

    With ``drop_edge`` the top excited-block row and column are removed,
    matching :func:`stationarity_residual`.
    """
    H = build_interaction_hamiltonian(trap, drive).entries
    rho = VibronicState.ground(state).density()
    C = H @ rho - rho @ H
    if drop_edge:
        keep = np.r_[0 : 2 * state.dim - 1]
        C = C[np.ix_(keep, keep)]
    return float(np.linalg.norm(C))
