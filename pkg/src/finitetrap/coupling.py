"""Laser-ion sideband coupling functions for the deformed trap.

The sideband sums alternate in sign, so every term is built as a
(sign, log-magnitude) pair and the terms are combined with an exactly
rounded sum.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import (
    BranchError,
    CancellationWarning,
    DomainError,
    SingularDenominator,
    TruncationError,
    UsageError,
)
from .trap import TrapParams

# |F0| below this fraction of |F1| makes h(n) singular
DENOMINATOR_FLOOR = 1e-12
# |sum| below this fraction of the largest term counts as cancellation
CANCELLATION_FLOOR = 1e-10


@dataclass(frozen=True)
class DriveParams:
    """Bichromatic drive: Lamb-Dicke parameter and carrier/sideband Rabi ratio.

    ``omega0``/``omega1`` are optional; when both are given the ratio is
    derived from them.
    """

    eta: float
    rabi_ratio: float = 0.0
    omega0: Optional[float] = None
    omega1: Optional[float] = None

    def __post_init__(self):
        if self.omega0 is not None and self.omega1 is not None:
            if self.omega1 == 0:
                raise UsageError("sideband Rabi frequency omega1 must be nonzero")
            object.__setattr__(self, "rabi_ratio", abs(self.omega0 / self.omega1))
        if self.rabi_ratio < 0:
            raise UsageError(f"rabi_ratio must be >= 0, got {self.rabi_ratio}")
        object.__setattr__(self, "eta", float(self.eta))
        object.__setattr__(self, "rabi_ratio", float(self.rabi_ratio))

    def check(self, trap: TrapParams) -> None:
        _branch_arg(self.eta, trap)


def critical_eta(trap: TrapParams) -> float:
    return 0.5 * math.pi * math.sqrt(trap.N)


def _branch_arg(eta: float, trap: TrapParams) -> float:
    x = math.sqrt(trap.gamma) * eta
    if not abs(x) < 0.5 * math.pi:
        raise BranchError(f"sqrt(gamma)*eta = {x} is outside (-pi/2, pi/2)")
    return x


def _log_cos(x: float) -> float:
    # log1p form keeps the O(x^2) exponent accurate when gamma -> 0
    return math.log1p(-2.0 * math.sin(0.5 * x) ** 2)


def g_eta(eta: float, trap: TrapParams) -> complex:
    """``(i / sqrt(gamma)) tan(sqrt(gamma) eta)``."""
    x = _branch_arg(eta, trap)
    return 1j * math.tan(x) / math.sqrt(trap.gamma)


def m_factor(n: int, eta: float, trap: TrapParams) -> float:
    """``cos(sqrt(gamma) eta) ** (2n + 1 - beta N)``, evaluated in log space."""
    return math.exp(_log_m(n, eta, trap))


def _log_m(n: int, eta: float, trap: TrapParams) -> float:
    x = _branch_arg(eta, trap)
    # beta*N written as sqrt(N^2 + 1) to avoid the product's roundoff
    return (2 * n + 1 - math.sqrt(trap.N * trap.N + 1.0)) * _log_cos(x)


def _sideband_terms(j: int, n: int, eta: float, trap: TrapParams) -> list[float]:
    if j not in (0, 1):
        raise UsageError(f"sideband index j must be 0 or 1, got {j}")
    if n < 0:
        raise DomainError(f"negative level {n}")
    if n + j > trap.n_max + 1:
        raise TruncationError(f"F_{j}({n}) needs f({n + j}) beyond n_max + 1 = {trap.n_max + 1}")
    x = _branch_arg(eta, trap)

    # log f^2(k) for k = 0..n+j
    f2 = [trap.beta - k / trap.N for k in range(n + j + 1)]
    for k, v in enumerate(f2):
        if v <= 0:
            raise DomainError(f"f^2({k}) = {v} <= 0 inside F_{j}({n})")
    log_f2 = [math.log(v) for v in f2]

    t = math.tan(x)
    if t == 0.0:
        l_top = 0
        log_g2 = 0.0
    else:
        l_top = n
        # |g|^2 = tan^2(x)/gamma; g^(2l) = (-1)^l |g|^(2l)
        log_g2 = 2.0 * math.log(abs(t)) - math.log(trap.gamma)

    log_c = _log_cos(x)
    base_m = 1 - math.sqrt(trap.N * trap.N + 1.0)
    lg_n = math.lgamma(n + 1)
    head = 0.5 * log_f2[n + 1] if j else 0.0

    terms = []
    log_ratio = 0.0  # sum of log f^2(k) for k = n-l+1..n
    for l in range(l_top + 1):
        if l:
            log_ratio += log_f2[n - l + 1]
        logmag = (
            l * log_g2
            - math.lgamma(l + 1)
            - math.lgamma(l + j + 1)
            + log_ratio
            + head
            + lg_n
            - math.lgamma(n - l + 1)
            + (base_m + 2 * (n - l)) * log_c
        )
        terms.append((-1.0) ** l * math.exp(logmag))
    return terms


def f_j(j: int, n: int, eta: float, trap: TrapParams) -> float:
    """Sideband function ``F_j(n, eta)`` for ``j`` in {0, 1}.

    Deformed factorials only appear as ratios, which reduce to products of
    ``f^2(k)`` over ``k = n-l+1..n`` (times ``f(n+1)`` for ``j = 1``).
    Warns with :class:`CancellationWarning` if the alternating sum loses
    more than ten digits.
    """
    terms = _sideband_terms(j, n, eta, trap)
    total = math.fsum(terms)
    biggest = max(abs(t) for t in terms)
    if biggest > 0 and abs(total) < CANCELLATION_FLOOR * biggest:
        warnings.warn(
            f"F_{j}({n}, eta={eta}) = {total:.3e} cancels below {CANCELLATION_FLOOR:g} of its largest term",
            CancellationWarning,
            stacklevel=2,
        )
    return total


def h_n(n: int, eta: float, trap: TrapParams) -> float:
    """Steady-state deformation ``h(n) = F_1(n-1) / F_0(n-1)``."""
    if n < 1:
        raise DomainError(f"h(n) needs n >= 1, got {n}")
    num = f_j(1, n - 1, eta, trap)
    den = f_j(0, n - 1, eta, trap)
    if abs(den) <= DENOMINATOR_FLOOR * abs(num):
        raise SingularDenominator(f"F_0({n - 1}, eta={eta}) = {den:.3e} vanishes relative to F_1 = {num:.3e}")
    return num / den


@lru_cache(maxsize=256)
def sideband_table(trap: TrapParams, eta: float) -> tuple[np.ndarray, np.ndarray]:
    """``(F_0(n), F_1(n))`` for ``n = 0..n_max`` as read-only arrays."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", CancellationWarning)
        F0 = np.array([f_j(0, n, eta, trap) for n in range(trap.n_max + 1)])
        F1 = np.array([f_j(1, n, eta, trap) for n in range(trap.n_max + 1)])
    F0.setflags(write=False)
    F1.setflags(write=False)
    return F0, F1


def laguerre(n: int, k: float, x: float) -> float:
    """Associated Laguerre polynomial ``L_n^k(x)`` by upward recurrence."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    prev, cur = 0.0, 1.0
    for m in range(n):
        prev, cur = cur, ((2 * m + 1 + k - x) * cur - (m + k) * prev) / (m + 1)
    return cur


def laguerre_h(n: int, eta: float) -> float:
    """Harmonic-trap deformation ``L_{n-1}^1(eta^2) / (n L_{n-1}^0(eta^2))``.

    Reference value for :func:`h_n` as ``N -> inf``.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    x = eta * eta
    num = laguerre(n - 1, 1, x)
    den = n * laguerre(n - 1, 0, x)
    if abs(den) <= DENOMINATOR_FLOOR * abs(num):
        raise SingularDenominator(f"L_{n - 1}^0({x}) vanishes")
    return num / den
