"""Modified Poschl-Teller trap as an f-deformed oscillator.

Units are hbar = omega = 1 throughout; lab quantities only enter through
:meth:`TrapParams.from_physical`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError, ShallowTrapWarning, TruncationError, UsageError

HBAR = 1.054571817e-34  # J s

# |s - round(s)| below this counts as an integral s
_INTEGRAL_TOL = 1e-9


@dataclass(frozen=True)
class PhysicalTrap:
    """Lab-frame description of the well (SI units)."""

    mass: float
    omega: float
    width: float
    depth: float

    @property
    def dimensionless_depth(self) -> float:
        return 2.0 * self.mass * self.omega * self.width**2 / HBAR


def _bound_state_count(N: float) -> float:
    return (math.sqrt(1.0 + N * N) - 1.0) / 2.0


def _strict_floor(s: float) -> int:
    k = round(s)
    if abs(s - k) < _INTEGRAL_TOL:
        return max(int(k) - 1, 0)
    return int(math.floor(s))


@dataclass(frozen=True)
class TrapParams:
    """Trap depth ``N = 4D/(hbar omega)`` plus the quantities derived from it.

    Construct with ``TrapParams(N)`` or :meth:`from_physical`. ``n_max`` is
    the highest bound level kept in the truncated Fock basis.
    """

    N: float
    physical: Optional[PhysicalTrap] = field(default=None, compare=False)
    beta: float = field(init=False)
    gamma: float = field(init=False)
    s: float = field(init=False)
    n_max: int = field(init=False)

    def __post_init__(self):
        N = float(self.N)
        if not (N > 0 and math.isfinite(N)):
            raise UsageError(f"trap depth N must be positive and finite, got {self.N!r}")
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "beta", math.sqrt(1.0 + 1.0 / (N * N)))
        object.__setattr__(self, "gamma", 1.0 / N)
        object.__setattr__(self, "s", _bound_state_count(N))
        n_max = _strict_floor(self.s)
        object.__setattr__(self, "n_max", n_max)
        if n_max == 0:
            warnings.warn(f"N={N:g} binds only the ground state", ShallowTrapWarning, stacklevel=3)
        # beta - n/N must stay positive on every kept level
        if self.beta - n_max / N <= 0:
            raise DomainError(f"deformation not positive at n_max={n_max} for N={N}")

    @classmethod
    def from_physical(cls, mass: float, omega: float, width: float, depth: float | None = None) -> "TrapParams":
        """Build from ion mass (kg), harmonic frequency (rad/s) and range (m).

        If ``depth`` (J) is given it must agree with ``m omega^2 width^2 / 2``.
        """
        expected = 0.5 * mass * omega**2 * width**2
        if depth is None:
            depth = expected
        elif abs(depth - expected) > 1e-12 * abs(expected):
            raise UsageError(f"well depth {depth} J inconsistent with m, omega, width (expected {expected} J)")
        phys = PhysicalTrap(mass, omega, width, depth)
        return cls(phys.dimensionless_depth, physical=phys)


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense matrix of an operator in a finite Fock (or vibronic) basis."""

    entries: np.ndarray
    label: str = ""
    hermitian: bool = False

    def __post_init__(self):
        m = np.array(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise UsageError(f"operator matrix must be square, got shape {m.shape}")
        if self.hermitian and not np.allclose(m, m.conj().T, rtol=0, atol=1e-12):
            raise UsageError(f"{self.label or 'matrix'} flagged Hermitian but is not")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def H(self) -> "OperatorMatrix":
        return OperatorMatrix(self.entries.conj().T, label=f"{self.label}^dag", hermitian=self.hermitian)

    def __matmul__(self, other):
        if isinstance(other, OperatorMatrix):
            return OperatorMatrix(self.entries @ other.entries, label=f"{self.label}*{other.label}")
        return self.entries @ other


def truncation_level(trap: TrapParams) -> int:
    """Largest level index strictly below ``s`` (``s - 1`` if ``s`` is integral)."""
    return _strict_floor(_bound_state_count(trap.N))


def deformation_f2(n: int, trap: TrapParams) -> float:
    """Squared deformation ``f^2(n) = beta - n/N``.

    Defined up to ``n_max + 2``; the transition frequency and the sideband
    functions reach that far past the last bound level.
    """
    if n < 0:
        raise DomainError(f"negative level {n}")
    if n > trap.n_max + 2:
        raise TruncationError(f"level {n} beyond n_max + 2 = {trap.n_max + 2}")
    val = trap.beta - n / trap.N
    if val < 0:
        raise DomainError(f"f^2({n}) = {val} < 0 for N={trap.N}")
    return val


def _f2_array(trap: TrapParams, dim: int) -> np.ndarray:
    """f^2(0..dim-1) without the n_max guard (for padded workspaces)."""
    vals = trap.beta - np.arange(dim) / trap.N
    if dim and vals[-1] <= 0:
        raise DomainError(f"f^2 non-positive below level {dim} for N={trap.N}")
    return vals


def energy_mpt(n: int, trap: TrapParams) -> float:
    """Bound-state energy of the well in units of hbar*omega."""
    if n < 0 or n > trap.n_max:
        raise TruncationError(f"level {n} outside 0..{trap.n_max}")
    b = trap.beta - 1.0 / trap.N
    return -(n * n) / trap.N + b * n + 0.5 * b


def energy_deformed(n: int, trap: TrapParams) -> float:
    """``(1/2)[(n+1) f^2(n+1) + n f^2(n)]`` -- same spectrum via the deformed algebra."""
    if n < 0 or n > trap.n_max:
        raise TruncationError(f"level {n} outside 0..{trap.n_max}")
    return 0.5 * ((n + 1) * deformation_f2(n + 1, trap) + n * deformation_f2(n, trap))


def transition_frequency(n: int, trap: TrapParams) -> float:
    """Interaction-picture frequency ``(1/2)[(n+2)f^2(n+2) - n f^2(n)]`` in units of omega."""
    return 0.5 * ((n + 2) * deformation_f2(n + 2, trap) - n * deformation_f2(n, trap))


def _check_dim(trap: TrapParams, dim: int) -> None:
    if dim < 1:
        raise UsageError(f"dim must be positive, got {dim}")
    if dim > trap.n_max + 1:
        raise TruncationError(f"dim={dim} exceeds the {trap.n_max + 1} bound levels of N={trap.N}")


def _lowering(f2: np.ndarray) -> np.ndarray:
    n = np.arange(1, len(f2))
    return np.diag(np.sqrt(n * f2[1:]), 1).astype(complex)


def build_ladder(trap: TrapParams, dim: int) -> tuple[OperatorMatrix, OperatorMatrix]:
    """Deformed lowering/raising pair ``A = a f(n)`` on levels ``0..dim-1``."""
    _check_dim(trap, dim)
    A = _lowering(_f2_array(trap, dim))
    return OperatorMatrix(A, label="A"), OperatorMatrix(A.conj().T, label="A^dag")


def build_position(trap: TrapParams, eta: float, dim: int) -> OperatorMatrix:
    """Position operator ``eta (A + A^dag)`` with the laser wave number set to 1."""
    A, Ad = build_ladder(trap, dim)
    return OperatorMatrix(eta * (A.entries + Ad.entries), label="x", hermitian=True)


def bare_lowering(dim: int) -> np.ndarray:
    """Undeformed annihilation matrix on ``dim`` levels."""
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)


def deformed_lowering(trap: TrapParams, dim: int) -> np.ndarray:
    """``A`` on a workspace that may extend past ``n_max`` (f^2 must stay positive)."""
    return _lowering(_f2_array(trap, dim))
