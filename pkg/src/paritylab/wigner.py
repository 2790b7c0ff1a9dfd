"""Wigner functions of truncated-Fock-basis states.

Convention (fixed, tagged in every output):

* phase-space point alpha = q + i p,
* normalization  iint W(q, p) dq dp = 1,
* origin identity  W(0, 0) = (2/pi) * <parity>.

Under this convention the vacuum is (2/pi) exp(-2(q^2+p^2)) and the
thermal state with occupation n is the stationary point of the thermal
drift-diffusion flow, (2/(pi(1+2n))) exp(-2(q^2+p^2)/(1+2n)).

W is evaluated through the displaced-parity form
``W(alpha) = (2/pi) Tr[rho D(2 alpha) P]`` with P the parity operator;
the displacement matrix elements are generated by a normalized
associated-Laguerre recurrence along the diagonals of rho instead of
factorial ratios, so dimensions up to ~512 stay stable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .errors import DimensionError, DomainError, ToleranceError, WindowError
from .fock import DensityMatrix, FockState, as_density

CONVENTION = "alpha=q+ip; iint W dq dp = 1; W(0,0) = (2/pi) <parity>"

GRID_MASS_TOL = 1e-3      # Riemann-sum normalization band for well-covered grids
WIGNER_BOUND = 2.0 / math.pi
_IMAG_RAISE = 1e-8        # imaginary residue above this aborts
_BOUND_SLACK = 1e-9


class PhasePoint(NamedTuple):
    q: float
    p: float


@dataclass(frozen=True)
class GridWindow:
    q_min: float
    q_max: float
    p_min: float
    p_max: float
    nq: int
    np_: int

    def __post_init__(self):
        if not (np.isfinite([self.q_min, self.q_max, self.p_min, self.p_max]).all()):
            raise DomainError("grid window must be finite")
        if self.q_max <= self.q_min or self.p_max <= self.p_min:
            raise DomainError("grid window must have positive extent")
        if self.nq < 2 or self.np_ < 2:
            raise DimensionError("grid needs at least 2 points per axis")

    @property
    def qs(self) -> np.ndarray:
        return np.linspace(self.q_min, self.q_max, self.nq)

    @property
    def ps(self) -> np.ndarray:
        return np.linspace(self.p_min, self.p_max, self.np_)

    @property
    def dq(self) -> float:
        return (self.q_max - self.q_min) / (self.nq - 1)

    @property
    def dp(self) -> float:
        return (self.p_max - self.p_min) / (self.np_ - 1)


@dataclass(frozen=True)
class WignerGrid:
    """Sampled W(q, p); ``values[i, j] = W(qs[i], ps[j])``."""

    window: GridWindow
    values: np.ndarray
    convention: str = CONVENTION
    source: str = ""

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.window.nq, self.window.np_):
            raise DimensionError(
                f"values shape {vals.shape} does not match window "
                f"({self.window.nq}, {self.window.np_})")
        worst = float(np.max(np.abs(vals)))
        if worst > WIGNER_BOUND + _BOUND_SLACK:
            raise ToleranceError(f"grid value {worst:g} violates the |W| <= 2/pi bound")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def qs(self) -> np.ndarray:
        return self.window.qs

    @property
    def ps(self) -> np.ndarray:
        return self.window.ps

    def riemann_mass(self) -> float:
        return float(np.sum(self.values)) * self.window.dq * self.window.dp

    def value_at_origin(self) -> float:
        """W at the (0, 0) node; grid must contain it."""
        iq = int(np.argmin(np.abs(self.qs)))
        ip = int(np.argmin(np.abs(self.ps)))
        if abs(self.qs[iq]) > 1e-12 or abs(self.ps[ip]) > 1e-12:
            raise WindowError("grid has no node at the phase-space origin")
        return float(self.values[iq, ip])


# ---------------------------------------------------------------------------
# displacement matrix elements
# ---------------------------------------------------------------------------

def displacement_fock_matrix(beta: complex, dim: int) -> np.ndarray:
    """Matrix <m|D(beta)|n> for m, n < dim, built diagonal by diagonal.

    Each diagonal runs the normalized associated-Laguerre recurrence on
    the bounded elements themselves, so no factorial is ever formed and
    the evaluation stays stable for dimensions in the hundreds.
    """
    if dim < 1:
        raise DimensionError("dim must be >= 1")
    beta = complex(beta)
    x = abs(beta) ** 2
    out = np.zeros((dim, dim), dtype=complex)
    seed_lo = math.exp(-x / 2.0)  # <0|D|d>, raised per diagonal
    for d in range(dim):
        if d > 0:
            seed_lo = seed_lo * (-beta.conjugate()) / math.sqrt(d)
        swap = 1.0 if d == 0 or x == 0.0 else (-beta / beta.conjugate()) ** d
        prev = 0.0
        curr = seed_lo
        for n in range(dim - d):
            out[n, n + d] = curr
            if d > 0:
                out[n + d, n] = curr * swap
            if n == dim - d - 1:
                break
            a_coef = (2.0 * n + d + 1.0 - x) / math.sqrt((n + 1.0) * (n + 1.0 + d))
            b_coef = math.sqrt(n * (n + d) / ((n + 1.0) * (n + 1.0 + d)))
            prev, curr = curr, a_coef * curr - b_coef * prev
    return out


_CHUNK = 4096  # phase-space points per pass; bounds work memory at dim ~512


def _displaced_parity_sum(rho: np.ndarray, beta_flat: np.ndarray) -> np.ndarray:
    if beta_flat.size <= _CHUNK:
        return _displaced_parity_chunk(rho, beta_flat)
    out = np.empty(beta_flat.size, dtype=complex)
    for start in range(0, beta_flat.size, _CHUNK):
        stop = start + _CHUNK
        out[start:stop] = _displaced_parity_chunk(rho, beta_flat[start:stop])
    return out


def _displaced_parity_chunk(rho: np.ndarray, beta_flat: np.ndarray) -> np.ndarray:
    """(2/pi) Tr[rho D(beta) P] for a batch of displacements.

    Walks the diagonals of rho, generating the bounded matrix elements
    E_n = <n|D(beta)|n+d> by the normalized associated-Laguerre
    recurrence.  Along each diagonal the wanted solution dominates the
    recurrence, so the evaluation stays stable for dimensions in the
    hundreds and displacements far outside the occupied phase-space
    disk, where factorial-ratio forms overflow or lose all digits.
    """
    dim = rho.shape[0]
    x = np.abs(beta_flat) ** 2
    bconj = beta_flat.conjugate()
    # unimodular swap factor relating <n|D|n+d> to <n+d|D|n>; the origin
    # point only draws on the main diagonal, so its value is arbitrary
    u = np.where(x > 0.0, -np.divide(beta_flat, bconj, where=bconj != 0.0), 1.0)
    acc = np.zeros(beta_flat.size, dtype=complex)
    seed = np.exp(-x / 2.0)
    u_pow = np.ones_like(seed)
    for d in range(dim):
        if d > 0:
            seed = seed * (-bconj) / math.sqrt(d)
            u_pow = u_pow * u
        diag = rho.diagonal(-d)
        if not np.any(diag):
            continue
        prev = np.zeros_like(seed)
        curr = seed
        for n in range(dim - d):
            sign = -1.0 if (n + d) % 2 else 1.0
            if d == 0:
                acc += (sign * diag[n].real) * curr
            else:
                # lower element rho[n+d, n] pairs with its mirror above
                acc += curr * (sign * diag[n] + (-1.0) ** n * diag[n].conjugate() * u_pow)
            if n == dim - d - 1:
                break
            a_coef = (2.0 * n + d + 1.0 - x) / math.sqrt((n + 1.0) * (n + 1.0 + d))
            b_coef = math.sqrt(n * (n + d) / ((n + 1.0) * (n + 1.0 + d)))
            prev, curr = curr, a_coef * curr - b_coef * prev
    return (2.0 / math.pi) * acc


def wigner_point(state: Union[FockState, DensityMatrix],
                 pt: PhasePoint | tuple[float, float]) -> float:
    """W(q, p) of the state at one phase-space point."""
    rho = as_density(state)
    q, p = pt
    if not (np.isfinite(q) and np.isfinite(p)):
        raise DomainError("phase-space point must be finite")
    beta = 2.0 * (q + 1j * p)
    val = _displaced_parity_sum(rho.entries, np.array([beta]))[0]
    if abs(val.imag) > _IMAG_RAISE:
        raise ToleranceError(
            f"Wigner value has imaginary residue {val.imag:g} above {_IMAG_RAISE:g}")
    return float(val.real)


def default_window(state: Union[FockState, DensityMatrix], points: int = 161) -> GridWindow:
    """Symmetric window wide enough for ~6 sigma of the state's spread."""
    nbar = as_density(state).mean_photon_number()
    half = max(3.0, 3.0 * math.sqrt((1.0 + 2.0 * nbar) / 2.0))
    return GridWindow(-half, half, -half, half, points, points)


def wigner_grid(state: Union[FockState, DensityMatrix],
                window: GridWindow | None = None, source: str = "") -> WignerGrid:
    """Evaluate W on a rectangular grid (vectorized over all nodes)."""
    rho = as_density(state)
    if window is None:
        window = default_window(rho)
    Q, P = np.meshgrid(window.qs, window.ps, indexing="ij")
    beta = 2.0 * (Q + 1j * P)
    vals = _displaced_parity_sum(rho.entries, beta.ravel())
    worst_imag = float(np.max(np.abs(vals.imag)))
    if worst_imag > _IMAG_RAISE:
        raise ToleranceError(
            f"Wigner grid has imaginary residue {worst_imag:g} above {_IMAG_RAISE:g}")
    return WignerGrid(window, vals.real.reshape(window.nq, window.np_), source=source)


def negativity_volume(grid: WignerGrid) -> float:
    """Integral of max(0, -W) over the grid; boundary cells must be nonnegative."""
    vals = grid.values
    boundary = np.concatenate([vals[0, :], vals[-1, :], vals[:, 0], vals[:, -1]])
    if float(boundary.min()) < -1e-12:
        raise WindowError(
            "Wigner grid is negative on the window boundary; enlarge the window")
    neg = np.where(vals < 0.0, -vals, 0.0)
    return float(np.sum(neg)) * grid.window.dq * grid.window.dp
