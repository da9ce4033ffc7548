"""Steady motional state of the driven ion and generic nonlinear coherent states."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .coupling import DriveParams, g_eta, h_n
from .errors import SingularDenominator, TruncationError, UsageError
from .trap import TrapParams

# edge populations at or above this mark a truncation-dominated state
EDGE_FLAG = 0.05
_RESCALE_AT = 1e100


@dataclass(frozen=True)
class MotionalState:
    """Normalized Fock amplitudes ``c_0..c_{dim-1}`` plus provenance."""

    amps: np.ndarray
    trap: Optional[TrapParams] = None
    drive: Optional[DriveParams] = None
    chi: complex = 0j
    terminated_early: bool = False
    termination_reason: str = ""

    def __post_init__(self):
        a = np.array(self.amps, dtype=complex).ravel()
        if a.size == 0:
            raise UsageError("empty state")
        norm = np.linalg.norm(a)
        if norm == 0 or not np.isfinite(norm):
            raise UsageError("state has zero or non-finite norm")
        a = a / norm
        a.setflags(write=False)
        object.__setattr__(self, "amps", a)

    @property
    def dim(self) -> int:
        return self.amps.size

    @property
    def edge_population(self) -> float:
        """``|c_top|^2``; large values mean the truncation shapes the state."""
        return float(abs(self.amps[-1]) ** 2)

    @property
    def truncation_dominated(self) -> bool:
        return self.edge_population >= EDGE_FLAG

    def mean_number(self) -> float:
        return float(np.sum(np.arange(self.dim) * np.abs(self.amps) ** 2))

    def padded(self, dim: int) -> np.ndarray:
        if dim < self.dim:
            raise UsageError(f"workspace {dim} smaller than state dimension {self.dim}")
        out = np.zeros(dim, dtype=complex)
        out[: self.dim] = self.amps
        return out


def chi_of(drive: DriveParams, trap: TrapParams) -> complex:
    """Eigenvalue ``-(Omega0/Omega1) / g(eta)``."""
    g = g_eta(drive.eta, trap)
    if g == 0:
        raise SingularDenominator("eta = 0 gives no sideband coupling")
    return -drive.rabi_ratio / g


def solve_steady_state(
    trap: TrapParams, drive: DriveParams, chi: complex | None = None, dim: int | None = None
) -> MotionalState:
    """Solve ``a h(n) |psi> = chi |psi>`` on levels ``0..dim-1`` (default all bound levels).

    Seeds ``c_0 = 1`` and runs ``c_{n+1} = chi c_n / (sqrt(n+1) h(n+1))``.
    A singular ``h`` stops the recursion; higher levels stay empty and the
    state is marked ``terminated_early``. ``chi`` overrides the value implied
    by the drive. A smaller ``dim`` is for very deep traps, where ``n_max``
    is far larger than any populated level.
    """
    if trap.n_max < 1:
        raise TruncationError(f"N={trap.N} has no excited bound level")
    if dim is None:
        dim = trap.n_max + 1
    if not 2 <= dim <= trap.n_max + 1:
        raise TruncationError(f"dim={dim} outside 2..{trap.n_max + 1}")
    drive.check(trap)
    if chi is None:
        chi = chi_of(drive, trap)
    chi = complex(chi)

    amps = np.zeros(dim, dtype=complex)
    amps[0] = 1.0
    reason = ""
    for n in range(dim - 1):
        if chi == 0:
            break
        try:
            h = h_n(n + 1, drive.eta, trap)
        except SingularDenominator as exc:
            reason = f"h({n + 1}) singular: {exc}"
            break
        amps[n + 1] = chi * amps[n] / (math.sqrt(n + 1) * h)
        peak = abs(amps[n + 1])
        if peak > _RESCALE_AT:
            amps[: n + 2] /= peak
    return MotionalState(amps, trap=trap, drive=drive, chi=chi, terminated_early=bool(reason), termination_reason=reason)


def steady_deformation(trap: TrapParams, eta: float, n_cut: int | None = None) -> np.ndarray:
    """``h(1..n_cut)`` as an array (``n_cut`` defaults to ``n_max``)."""
    n_cut = trap.n_max if n_cut is None else n_cut
    return np.array([h_n(n, eta, trap) for n in range(1, n_cut + 1)])


def build_nlcs(f_values: Sequence[float], alpha: complex, n_cut: int) -> MotionalState:
    """Nonlinear coherent state ``c_n ~ alpha^n / (sqrt(n!) f(1)...f(n))``, n <= n_cut.

    ``f_values[k-1]`` holds ``f(k)``. The common ``f(0)`` factor drops out
    on normalization.
    """
    f = np.asarray(f_values, dtype=float)
    if n_cut < 0:
        raise UsageError("n_cut must be >= 0")
    if f.size < n_cut:
        raise UsageError(f"need {n_cut} deformation values, got {f.size}")
    f = f[:n_cut]
    if np.any(f == 0):
        k = int(np.flatnonzero(f == 0)[0]) + 1
        raise SingularDenominator(f"f({k}) = 0")
    alpha = complex(alpha)
    if alpha == 0:
        amps = np.zeros(n_cut + 1, dtype=complex)
        amps[0] = 1.0
        return MotionalState(amps, chi=alpha)

    n = np.arange(n_cut + 1)
    log_abs_f = np.concatenate(([0.0], np.cumsum(np.log(np.abs(f)))))
    n_neg = np.concatenate(([0], np.cumsum(f < 0)))
    lgam = np.array([math.lgamma(k + 1) for k in n])
    logmag = n * math.log(abs(alpha)) - 0.5 * lgam - log_abs_f
    logmag -= logmag.max()
    phase = np.exp(1j * n * np.angle(alpha)) * np.where(n_neg % 2, -1.0, 1.0)
    return MotionalState(np.exp(logmag) * phase, chi=alpha)


def eigen_residual(state: MotionalState, trap: TrapParams, eta: float, chi: complex) -> tuple[float, float]:
    """Norm of ``(a h(n) - chi)|psi>`` below the top level, and the top-level residue.

    For an early-terminated state the last populated level plays the role
    of the top level.
    """
    c = state.amps
    top = state.dim - 1
    if state.terminated_early:
        top = int(np.flatnonzero(c)[-1])
    out = -chi * c[: top + 1]
    for n in range(1, top + 1):
        out[n - 1] += math.sqrt(n) * h_n(n, eta, trap) * c[n]
    return float(np.linalg.norm(out[:-1])), float(abs(out[-1]))
