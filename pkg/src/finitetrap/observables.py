"""Number statistics, quadrature squeezing and phase-space functions of motional states."""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional

import numpy as np

from .coupling import DriveParams
from .errors import CoverageWarning, FiniteTrapError, UsageError
from .steady_state import MotionalState, solve_steady_state
from .trap import TrapParams, bare_lowering, deformed_lowering

LADDERS = ("bare", "deformed")
DEFAULT_POINTS = 201
LEAKAGE_TOL = 1e-6
_ROWS_PER_CHUNK = 8


def number_distribution(state: MotionalState) -> np.ndarray:
    """``p(n) = |c_n|^2``."""
    return np.abs(state.amps) ** 2


def _lowering(ladder: str, dim: int, trap: Optional[TrapParams]) -> np.ndarray:
    if ladder == "bare":
        return bare_lowering(dim)
    if ladder == "deformed":
        if trap is None:
            raise UsageError("deformed quadratures need the trap parameters")
        return deformed_lowering(trap, dim)
    raise UsageError(f"ladder must be one of {LADDERS}, got {ladder!r}")


def quadrature_variance(state: MotionalState, theta: float, ladder: str = "bare", trap: TrapParams | None = None) -> float:
    """Variance of ``X = (L e^{-i theta} + L^dag e^{i theta}) / 2``.

    ``L`` is the bare annihilation operator by default; ``ladder="deformed"``
    uses the trap's ``A = a f(n)`` instead (``trap`` defaults to
    ``state.trap``).
    """
    trap = trap or state.trap
    w = state.dim + 1  # X|psi> reaches one level above the state
    L = _lowering(ladder, w, trap)
    X = 0.5 * (L * np.exp(-1j * theta) + L.conj().T * np.exp(1j * theta))
    psi = state.padded(w)
    v = X @ psi
    mean = np.vdot(psi, v).real
    return float(np.vdot(v, v).real - mean * mean)


def squeezing_parameter(state: MotionalState, theta: float, ladder: str = "bare", trap: TrapParams | None = None) -> float:
    """``Var(X)/Var_0(X) - 1`` with ``Var_0`` taken in the trap ground state.

    For bare operators this is ``4 Var - 1``. Negative means squeezed.
    """
    trap = trap or state.trap
    vac = MotionalState(np.array([1.0]), trap=trap)
    return quadrature_variance(state, theta, ladder, trap) / quadrature_variance(vac, theta, ladder, trap) - 1.0


@dataclass(frozen=True)
class SqueezeScan:
    theta: float
    depths: np.ndarray
    s_values: np.ndarray
    ladder: str = "deformed"
    failures: dict = field(default_factory=dict)


def squeezing_scan(
    trap_depths: Iterable[float], drive: DriveParams, theta: float = math.pi / 4, ladder: str = "deformed"
) -> SqueezeScan:
    """Squeezing parameter of the steady state across trap depths.

    Depths that fail (too shallow, branch violation, ...) are stored as NaN
    with the reason in ``failures``.
    """
    depths = np.asarray(list(trap_depths), dtype=float)
    out = np.full(depths.shape, np.nan)
    failures = {}
    for i, N in enumerate(depths):
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                trap = TrapParams(N)
                state = solve_steady_state(trap, drive)
                out[i] = squeezing_parameter(state, theta, ladder, trap)
        except FiniteTrapError as exc:
            failures[float(N)] = f"{type(exc).__name__}: {exc}"
    return SqueezeScan(theta, depths, out, ladder, failures)


@dataclass(frozen=True)
class PhaseSpaceGrid:
    """Rectangular grid in the complex alpha plane; ``values[i, j]`` sits at ``re[i] + 1j*im[j]``."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float
    n_re: int = DEFAULT_POINTS
    n_im: int = DEFAULT_POINTS
    values: Optional[np.ndarray] = None
    kind: str = ""

    def __post_init__(self):
        if self.n_re < 1 or self.n_im < 1:
            raise UsageError("grid needs at least one point per axis")
        if self.values is not None:
            v = np.asarray(self.values, dtype=float)
            if v.shape != (self.n_re, self.n_im):
                raise UsageError(f"values shape {v.shape} != {(self.n_re, self.n_im)}")
            v.setflags(write=False)
            object.__setattr__(self, "values", v)

    @classmethod
    def square(cls, half_width: float, points: int = DEFAULT_POINTS) -> "PhaseSpaceGrid":
        return cls(-half_width, half_width, -half_width, half_width, points, points)

    @property
    def re(self) -> np.ndarray:
        return np.linspace(self.re_min, self.re_max, self.n_re)

    @property
    def im(self) -> np.ndarray:
        return np.linspace(self.im_min, self.im_max, self.n_im)

    def alphas(self) -> np.ndarray:
        return self.re[:, None] + 1j * self.im[None, :]

    @property
    def cell_area(self) -> float:
        dre = (self.re_max - self.re_min) / (self.n_re - 1) if self.n_re > 1 else 1.0
        dim = (self.im_max - self.im_min) / (self.n_im - 1) if self.n_im > 1 else 1.0
        return dre * dim

    @property
    def reach(self) -> float:
        """Distance from the origin to the nearest grid edge."""
        return min(-self.re_min, self.re_max, -self.im_min, self.im_max)

    def integral(self) -> float:
        if self.values is None:
            raise UsageError("grid has no values")
        return float(self.values.sum() * self.cell_area)

    def with_values(self, values: np.ndarray, kind: str) -> "PhaseSpaceGrid":
        return replace(self, values=values, kind=kind)


def default_half_width(state: MotionalState) -> float:
    return 2.0 + 2.0 * math.sqrt(state.mean_number() + 1.0)


def default_grid(state: MotionalState, points: int = DEFAULT_POINTS, half_width: float | None = None) -> PhaseSpaceGrid:
    """Square grid ``|Re a|, |Im a| <= 2 + 2 sqrt(<n> + 1)``."""
    if half_width is None:
        half_width = default_half_width(state)
    return PhaseSpaceGrid.square(half_width, points)


def _check_coverage(state: MotionalState, grid: PhaseSpaceGrid) -> None:
    need = 2.0 * math.sqrt(state.mean_number() + 3.0)
    if grid.reach < need:
        warnings.warn(
            f"grid reaches {grid.reach:.3g} from the origin; state needs about {need:.3g}",
            CoverageWarning,
            stacklevel=3,
        )


def thread_count() -> int:
    """Worker threads for grid evaluation (``FINITETRAP_THREADS``; 0 or unset = all cores)."""
    raw = os.environ.get("FINITETRAP_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"FINITETRAP_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise UsageError("FINITETRAP_THREADS must be >= 0")
    return n or (os.cpu_count() or 1)


def _map_rows(fn, alphas: np.ndarray) -> list:
    # fixed chunking keeps every point's arithmetic independent of the thread count
    chunks = [alphas[i : i + _ROWS_PER_CHUNK] for i in range(0, alphas.shape[0], _ROWS_PER_CHUNK)]
    workers = min(thread_count(), len(chunks))
    if workers <= 1:
        return [fn(c) for c in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, chunks))


def coherent_overlap(amps: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    """``<alpha|psi> = exp(-|alpha|^2/2) sum_n c_n conj(alpha)^n / sqrt(n!)``."""
    coeffs = amps * np.exp([-0.5 * math.lgamma(n + 1) for n in range(amps.size)])
    z = np.conj(alpha)
    acc = np.zeros_like(z, dtype=complex)
    for c in coeffs[::-1]:
        acc = acc * z + c
    return np.exp(-0.5 * np.abs(alpha) ** 2) * acc


def q_function(state: MotionalState, grid: PhaseSpaceGrid, workspace: int | None = None) -> PhaseSpaceGrid:
    """Husimi function ``|<alpha|psi>|^2 / pi`` on ``grid``."""
    _check_coverage(state, grid)
    amps = state.padded(workspace or state.dim)

    def rows(alpha):
        return np.abs(coherent_overlap(amps, alpha)) ** 2 / math.pi

    return grid.with_values(np.vstack(_map_rows(rows, grid.alphas())), "Q")


def workspace_size(dim: int, max_abs_alpha: float = 0.0) -> int:
    """Fock workspace for displaced states: ``max(4 dim, dim + 20)``, widened to cover the grid."""
    r = max_abs_alpha + math.sqrt(max(dim - 1, 0))
    return max(4 * dim, dim + 20, math.ceil((r + 3.0) ** 2))


def _displaced_rotated(amps: np.ndarray, beta: np.ndarray, K: int) -> tuple[np.ndarray, np.ndarray]:
    """Real and imaginary parts of ``e^{-ik arg(beta)} <k|D(beta)|psi>``, shape ``(K, P)``.

    ``<m|D|n> = R_mn e^{i(m-n) arg(beta)}`` with real
    ``R_{j+e, j} = sqrt(j!/(j+e)!) |beta|^e e^{-|beta|^2/2} L_j^(e)(|beta|^2)``
    and ``R_{j, j+e} = (-1)^e R_{j+e, j}``. The ``R`` are generated by the
    Laguerre recurrence in ``j`` rescaled so every iterate is a matrix
    element (bounded by 1).
    """
    dim = amps.size
    x = np.abs(beta) ** 2
    with np.errstate(divide="ignore"):
        logr = np.log(np.abs(beta))
    e = np.arange(K)[:, None]
    ef = np.arange(K, dtype=float)
    lg = np.array([math.lgamma(k + 1) for k in range(K)])
    with np.errstate(invalid="ignore"):
        e_logr = np.where(e == 0, 0.0, e * logr[None, :])
    G = np.exp(e_logr - 0.5 * x[None, :] - 0.5 * lg[:, None])
    G_prev = np.zeros_like(G)
    e_minus_x = ef[:, None] - x[None, :]

    n = np.arange(dim)[:, None]
    rot = amps[:, None] * np.exp(-1j * n * np.angle(beta)[None, :])
    ct_re, ct_im = rot.real.copy(), rot.imag.copy()
    alt = np.where(np.arange(dim) % 2, -1.0, 1.0)[:, None]

    out_re = np.zeros((K, beta.size))
    out_im = np.zeros((K, beta.size))
    for j in range(dim):
        if j:
            c1 = 1.0 / np.sqrt(j * (j + ef))
            c2 = np.sqrt((j - 1) * (j - 1 + ef) / (j * (j + ef)))
            G_next = (2 * j - 1) + e_minus_x
            G_next *= G
            G_next *= c1[:, None]
            G_prev *= c2[:, None]
            G_next -= G_prev
            G_prev, G = G, G_next
        span = K - j
        # m = j + e >= n = j
        out_re[j:] += ct_re[j] * G[:span]
        out_im[j:] += ct_im[j] * G[:span]
        hi = dim - j
        if hi > 1:
            # m = j < n = j + e
            w = alt[1:hi] * G[1:hi]
            out_re[j] += np.sum(w * ct_re[j + 1 : dim], axis=0)
            out_im[j] += np.sum(w * ct_im[j + 1 : dim], axis=0)
    return out_re, out_im


def displaced_amplitudes(amps: np.ndarray, beta: np.ndarray, K: int) -> np.ndarray:
    """``<k|D(beta)|psi>`` for ``k < K`` at every point of ``beta``; shape ``(K,) + beta.shape``.

    Matrix elements come from the associated-Laguerre closed form
    ``<m|D|n> = sqrt(n!/m!) beta^(m-n) e^{-|beta|^2/2} L_n^(m-n)(|beta|^2)``
    (mirrored for ``m < n``).
    """
    amps = np.asarray(amps, dtype=complex)
    if K < amps.size:
        raise UsageError(f"workspace {K} smaller than state dimension {amps.size}")
    shape = np.shape(beta)
    b = np.asarray(beta, dtype=complex).ravel()
    re, im = _displaced_rotated(amps, b, K)
    phase = np.exp(1j * np.arange(K)[:, None] * np.angle(b)[None, :])
    return ((re + 1j * im) * phase).reshape((K,) + shape)


def wigner_function(state: MotionalState, grid: PhaseSpaceGrid, workspace: int | None = None) -> PhaseSpaceGrid:
    """Wigner function as displaced parity ``(2/pi) sum_k (-1)^k |<k|D(-alpha)|psi>|^2``.

    The displaced state lives in a zero-padded Fock workspace (default from
    :func:`workspace_size`); population escaping it beyond ``1e-6`` raises
    a :class:`CoverageWarning`.
    """
    _check_coverage(state, grid)
    alphas = grid.alphas()
    if workspace is not None and workspace < state.dim:
        raise UsageError(f"workspace {workspace} smaller than state dimension {state.dim}")

    def rows(alpha):
        # each chunk sizes its own workspace from its farthest point
        K = workspace or workspace_size(state.dim, float(np.abs(alpha).max()))
        re, im = _displaced_rotated(state.amps, -alpha.ravel(), K)
        d = re * re + im * im
        sign = np.where(np.arange(K) % 2, -1.0, 1.0)[:, None]
        return (
            ((2.0 / math.pi) * np.sum(sign * d, axis=0)).reshape(alpha.shape),
            1.0 - np.sum(d, axis=0),
            K,
        )

    parts = _map_rows(rows, alphas)
    values = np.vstack([p[0] for p in parts])
    leak = max(float(p[1].max()) for p in parts)
    if leak > LEAKAGE_TOL:
        K = max(p[2] for p in parts)
        warnings.warn(f"displaced state leaks {leak:.2e} of its norm past workspace K<={K}", CoverageWarning, stacklevel=2)
    return grid.with_values(values, "W")


def parity_at_origin(state: MotionalState) -> float:
    """``W(0) = (2/pi) sum_n (-1)^n p(n)``, independent of the displacement machinery."""
    p = number_distribution(state)
    return float(2.0 / math.pi * np.sum(np.where(np.arange(p.size) % 2, -p, p)))
