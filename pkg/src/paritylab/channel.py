"""Evolution of states and Wigner distributions in a thermal environment.

Four mutually cross-validating routes to the same physics:

* closed-form origin trajectories (exact, per Fock level and for the
  photon-added coherent / thermal families),
* a fixed-step fourth-order integrator for the number-basis master
  equation,
* the exact Gaussian (Ornstein-Uhlenbeck) propagator of the phase-space
  drift-diffusion equation, applied as a separable discrete convolution,
* an explicit flux-form finite-difference solver for the same PDE.

Time is always the dimensionless decay time gamma*t.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np

from .errors import (ConfigError, DomainError, RegimeError, ResolutionError,
                     ToleranceError, TruncationError, WindowError)
from .fock import DensityMatrix, FockState, as_density
from .wigner import (GRID_MASS_TOL, WIGNER_BOUND, GridWindow, WignerGrid,
                     default_window, wigner_grid)

logger = logging.getLogger(__name__)

DEFAULT_LINDBLAD_STEP = 1e-3
TOUCH_TOL = 1e-8


@dataclass(frozen=True)
class ChannelParams:
    """Thermal environment: mean occupation n and decay time gamma_t."""

    n: float
    gamma_t: float

    def __post_init__(self):
        if not (np.isfinite(self.n) and self.n >= 0.0):
            raise DomainError(f"environment occupation n must be finite and >= 0, got {self.n!r}")
        if not (np.isfinite(self.gamma_t) and self.gamma_t >= 0.0):
            raise DomainError(f"gamma_t must be finite and >= 0, got {self.gamma_t!r}")


@dataclass(frozen=True)
class OriginTrajectory:
    """W(0,0) sampled along increasing gamma_t values."""

    times: np.ndarray
    w00: np.ndarray
    backend: str
    generator: Callable[[float], float] | None = field(default=None, compare=False)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        w = np.asarray(self.w00, dtype=float)
        if t.ndim != 1 or t.shape != w.shape:
            raise DomainError("times and w00 must be 1-d vectors of equal length")
        if t.size and (np.any(np.diff(t) <= 0.0) or t[0] < 0.0):
            raise DomainError("times must be strictly increasing and >= 0")
        if w.size and float(np.max(np.abs(w))) > WIGNER_BOUND + 1e-9:
            raise ToleranceError("trajectory value violates the |W| <= 2/pi bound")
        t.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "w00", w)


# ---------------------------------------------------------------------------
# thresholds and closed-form origin values
# ---------------------------------------------------------------------------

def threshold_tc(n: float) -> float:
    """Universal decay time ln((2+2n)/(1+2n)) at which added-photon negativity dies."""
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n!r}")
    return math.log((2.0 + 2.0 * n) / (1.0 + 2.0 * n))


def threshold_tc1(alpha_abs: float, n: float) -> float:
    """Early sign-change time of the single-photon excited coherent state.

    Defined for |alpha| >= 1 (below that the trajectory starts negative
    and has no early crossing).
    """
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n!r}")
    a2 = alpha_abs * alpha_abs
    if alpha_abs < 1.0:
        raise RegimeError(
            f"|alpha|={alpha_abs:g} < 1 has no early crossing; only threshold_tc applies")
    return math.log((2.0 * a2 * (1.0 + n) + 2.0 * n) / ((1.0 + 2.0 * n) * (1.0 + a2)))


def fock_origin_wigner(l: int, n: float, gamma_t: float) -> float:
    """Evolved W(0,0) of an initial Fock state |l> in environment n.

    Exact integral of the drift-diffusion propagator against the Fock
    Wigner function:  (2/pi) (sigma-E)^l / (sigma+E)^(l+1)  with
    E = e^{-gamma_t}, sigma = (1+2n)(1-E).  For every l >= 1 this
    vanishes at exactly threshold_tc(n), where sigma = E.
    """
    E = math.exp(-gamma_t)
    sigma = (1.0 + 2.0 * n) * (1.0 - E)
    r = (sigma - E) / (sigma + E)
    return (2.0 / math.pi) * r**l / (sigma + E)


def diagonal_origin_wigner(populations: np.ndarray, n: float, gamma_t: float) -> float:
    """Evolved W(0,0) for any state from its Fock populations only.

    Valid because the origin value of the evolved distribution is a
    rotationally symmetric average, so coherences never contribute.
    """
    pops = np.asarray(populations, dtype=float)
    E = math.exp(-gamma_t)
    sigma = (1.0 + 2.0 * n) * (1.0 - E)
    r = (sigma - E) / (sigma + E)
    weights = r ** np.arange(pops.size) / (sigma + E)
    return (2.0 / math.pi) * float(np.dot(pops, weights))


def ecs_origin_wigner(alpha_abs: float, n: float, gamma_t: float) -> float:
    """Closed-form W(0,0, gamma_t) of the single-photon excited coherent state."""
    if n < 0 or gamma_t < 0:
        raise DomainError("need n >= 0 and gamma_t >= 0")
    a2 = alpha_abs * alpha_abs
    c2 = (math.exp(gamma_t) - 1.0) * (1.0 + 2.0 * n)
    num = 2.0 * math.exp(gamma_t) * (a2 * (1.0 - c2) ** 2 + c2 * c2 - 1.0)
    return num * math.exp(-2.0 * a2 / (1.0 + c2)) / (math.pi * (1.0 + a2) * (1.0 + c2) ** 3)


def ets_origin_wigner(nbar: float, n: float, gamma_t: float) -> float:
    """Closed-form W(0,0, gamma_t) of the single-photon excited thermal state.

    At gamma_t = 0 this reduces to -2/(pi (1+2 nbar)^2) for every n.
    """
    if nbar < 0 or n < 0 or gamma_t < 0:
        raise DomainError("need nbar >= 0, n >= 0 and gamma_t >= 0")
    E = math.exp(gamma_t)
    xi = 2.0 * (nbar - n) + (1.0 + 2.0 * n) * E
    kappa = (-8.0 * (nbar - n) * (1.0 + n)
             + 2.0 * (1.0 + 2.0 * n) ** 2 * E * E
             + 4.0 * (nbar * (1.0 + 2.0 * n) - (1.0 + 2.0 * n) ** 2) * E)
    return kappa / (math.pi * xi**3) * E


def _as_times(times: Sequence[float]) -> np.ndarray:
    t = np.asarray(times, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise DomainError("need a nonempty 1-d vector of times")
    if np.any(t < 0) or np.any(np.diff(t) <= 0):
        raise DomainError("times must be nonnegative and strictly increasing")
    return t


def ecs_origin_trajectory(alpha: complex, n: float,
                          times: Sequence[float]) -> OriginTrajectory:
    """Excited-coherent-state origin trajectory; depends only on |alpha|."""
    t = _as_times(times)
    a = abs(complex(alpha))
    gen = lambda s: ecs_origin_wigner(a, n, s)
    return OriginTrajectory(t, np.array([gen(s) for s in t]), "analytic", gen)


def ets_origin_trajectory(nbar: float, n: float,
                          times: Sequence[float]) -> OriginTrajectory:
    """Excited-thermal-state origin trajectory."""
    t = _as_times(times)
    gen = lambda s: ets_origin_wigner(nbar, n, s)
    return OriginTrajectory(t, np.array([gen(s) for s in t]), "analytic", gen)


def analytic_origin_trajectory(state: Union[FockState, DensityMatrix], n: float,
                               times: Sequence[float]) -> OriginTrajectory:
    """Exact origin trajectory for any state, from its populations."""
    t = _as_times(times)
    pops = as_density(state).populations()
    gen = lambda s: diagonal_origin_wigner(pops, n, s)
    return OriginTrajectory(t, np.array([gen(s) for s in t]), "analytic", gen)


# ---------------------------------------------------------------------------
# master-equation backend
# ---------------------------------------------------------------------------

def _rhs_factory(dim: int, n: float):
    """Right-hand side of the thermal master equation in gamma_t units.

    Ladder sandwiches are index shifts, so one evaluation is O(dim^2).
    """
    l = np.arange(dim, dtype=float)
    s = np.sqrt(l)
    down = np.outer(s[1:], s[1:])      # weights of a rho a^dag
    up = down                          # weights of a^dag rho a, shifted the other way
    lsum = l[:, None] + l[None, :]

    def rhs(rho: np.ndarray) -> np.ndarray:
        out = np.empty_like(rho)
        out[:-1, :-1] = down * rho[1:, 1:]
        out[-1, :] = 0.0
        out[:, -1] = 0.0
        out *= (n + 1.0)
        if n > 0.0:
            heat = np.zeros_like(rho)
            heat[1:, 1:] = up * rho[:-1, :-1]
            out += n * heat
            out -= 0.5 * ((n + 1.0) * lsum + n * (lsum + 2.0)) * rho
        else:
            out -= 0.5 * lsum * rho
        return out

    return rhs


def _lindblad_headroom(dim0: int, n: float, t_max: float) -> int:
    return dim0 + int(math.ceil(8.0 * n * t_max)) + 16


def _rk4_run(rho: np.ndarray, rhs, t_span: float, steps: int) -> tuple[np.ndarray, float]:
    h = t_span / steps
    worst_herm = 0.0
    for _ in range(steps):
        k1 = rhs(rho)
        k2 = rhs(rho + 0.5 * h * k1)
        k3 = rhs(rho + 0.5 * h * k2)
        k4 = rhs(rho + h * k3)
        rho = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        dev = float(np.max(np.abs(rho - rho.conj().T)))
        worst_herm = max(worst_herm, dev)
        rho = 0.5 * (rho + rho.conj().T)
    return rho, worst_herm


def evolve_lindblad(rho0: DensityMatrix, params: ChannelParams,
                    steps: int | None = None) -> DensityMatrix:
    """Evolve rho0 for params.gamma_t with fixed-step fourth-order integration.

    The working space is padded above the input dimension because the
    heating term pumps population upward; the run aborts rather than
    silently truncate if the padded tail still fills up.
    """
    t = params.gamma_t
    if steps is None:
        steps = max(1, int(math.ceil(t / DEFAULT_LINDBLAD_STEP)))
    if steps < 1:
        raise ConfigError("steps must be >= 1")
    dim = _lindblad_headroom(rho0.dim, params.n, t)
    work = np.zeros((dim, dim), dtype=complex)
    work[:rho0.dim, :rho0.dim] = rho0.entries
    if t > 0.0:
        work, worst_herm = _rk4_run(work, _rhs_factory(dim, params.n), t, steps)
        if worst_herm > 1e-12:
            logger.debug("hermiticity deviation %.3e symmetrized away", worst_herm)
    tail = float(np.real(work[-1, -1]))
    if tail > 1e-7:
        raise TruncationError(
            f"population {tail:.3g} reached the dimension cap {dim}; enlarge headroom")
    drift = abs(float(np.real(np.trace(work))) - 1.0)
    if drift > 1e-8:
        raise ToleranceError(f"trace drifted by {drift:.3g}; reduce the step size")
    work /= np.real(np.trace(work))
    return DensityMatrix(work)


def lindblad_origin_trajectory(state: Union[FockState, DensityMatrix], n: float,
                               times: Sequence[float],
                               step: float = DEFAULT_LINDBLAD_STEP) -> OriginTrajectory:
    """W(0,0) along `times` from one continuous master-equation run."""
    t = _as_times(times)
    rho0 = as_density(state)
    dim = _lindblad_headroom(rho0.dim, n, float(t[-1]))
    rhs = _rhs_factory(dim, n)
    work = np.zeros((dim, dim), dtype=complex)
    work[:rho0.dim, :rho0.dim] = rho0.entries
    signs = np.where(np.arange(dim) % 2 == 0, 1.0, -1.0)
    out = np.empty(t.size)
    prev = 0.0
    for i, s in enumerate(t):
        span = float(s - prev)
        if span > 0.0:
            nsteps = max(1, int(math.ceil(span / step)))
            work, _ = _rk4_run(work, rhs, span, nsteps)
        prev = s
        out[i] = (2.0 / math.pi) * float(np.dot(signs, np.real(np.diag(work))))
    tail = float(np.real(work[-1, -1]))
    if tail > 1e-7:
        raise TruncationError(
            f"population {tail:.3g} reached the dimension cap {dim}; enlarge headroom")
    drift = abs(float(np.real(np.trace(work))) - 1.0)
    if drift > 1e-8:
        raise ToleranceError(f"trace drifted by {drift:.3g}; reduce the step size")
    return OriginTrajectory(t, out, "lindblad")


# ---------------------------------------------------------------------------
# Gaussian-propagator backend
# ---------------------------------------------------------------------------

def propagate_wigner_gaussian(grid0: WignerGrid, params: ChannelParams) -> WignerGrid:
    """Exact propagator of the thermal drift-diffusion flow, by convolution.

    W(beta, t) = (2/(pi sigma)) iint W(beta0, 0)
                 exp(-2 |beta - beta0 e^{-gamma_t/2}|^2 / sigma) d^2 beta0,
    sigma = (1+2n)(1-e^{-gamma_t}).  The kernel factorizes over q and p,
    so the convolution is two matrix products.
    """
    t = params.gamma_t
    if t == 0.0:
        return WignerGrid(grid0.window, grid0.values, grid0.convention, grid0.source)
    shrink = math.exp(-t / 2.0)
    sigma = (1.0 + 2.0 * params.n) * (1.0 - math.exp(-t))
    h = max(grid0.window.dq, grid0.window.dp)
    if math.sqrt(sigma) / 2.0 < h:
        raise ResolutionError(
            f"propagation kernel width {math.sqrt(sigma)/2.0:.3g} is below the grid "
            f"spacing {h:.3g}; evaluate this short time directly instead")
    amp = math.sqrt(2.0 / (math.pi * sigma))

    def axis_matrix(xs: np.ndarray, dx: float) -> np.ndarray:
        diff = xs[:, None] - shrink * xs[None, :]
        return amp * dx * np.exp(-2.0 * diff**2 / sigma)

    mq = axis_matrix(grid0.qs, grid0.window.dq)
    mp = axis_matrix(grid0.ps, grid0.window.dp)
    vals = mq @ grid0.values @ mp.T
    mass_in = grid0.riemann_mass()
    mass_out = float(np.sum(vals)) * grid0.window.dq * grid0.window.dp
    if abs(mass_out - mass_in) > GRID_MASS_TOL:
        raise WindowError(
            f"propagation lost {abs(mass_out - mass_in):.3g} of the grid mass; "
            "enlarge the window")
    return WignerGrid(grid0.window, vals, grid0.convention, grid0.source)


def gaussian_origin_trajectory(state: Union[FockState, DensityMatrix], n: float,
                               times: Sequence[float],
                               points: int = 161) -> OriginTrajectory:
    """W(0,0) along `times` through the exact Gaussian propagator."""
    t = _as_times(times)
    grid0 = wigner_grid(as_density(state), default_points_window(state, points))
    out = np.empty(t.size)
    for i, s in enumerate(t):
        if s == 0.0:
            out[i] = grid0.value_at_origin()
        else:
            out[i] = propagate_wigner_gaussian(grid0, ChannelParams(n, float(s))).value_at_origin()
    return OriginTrajectory(t, out, "gaussian")


def default_points_window(state: Union[FockState, DensityMatrix], points: int) -> GridWindow:
    if points % 2 == 0:
        points += 1  # keep a node at the origin
    return default_window(state, points)


# ---------------------------------------------------------------------------
# finite-difference backend
# ---------------------------------------------------------------------------

def _fitted_drift_weight(w: np.ndarray) -> np.ndarray:
    """Interface weighting delta(w) = 1/w - 1/(e^w - 1), exact for Gaussians.

    w is the cell Peclet number (drift * h / D) at the interface.  The
    weights reduce to the centered value 1/2 as w -> 0 and make the
    discrete flux vanish identically on exp(-2 r^2/(1+2n)), so the
    thermal stationary state survives stepping to machine precision.
    """
    out = np.full_like(w, 0.5)
    big = np.abs(w) > 1e-8
    wb = w[big]
    out[big] = 1.0 / wb - 1.0 / np.expm1(wb)
    return out


def propagate_wigner_fd(grid0: WignerGrid, params: ChannelParams,
                        cfl: float = 0.4) -> WignerGrid:
    """Explicit finite-difference solution of the drift-diffusion PDE.

    Forward-time flux form on a five-point stencil: interface fluxes
    J = (r/2) W + D dW/dr with exponentially fitted drift weights and
    Dirichlet zero boundaries; the time step is cfl * h^2 / (2 D) with
    D = (2n+1)/8 in gamma_t units.
    """
    t = params.gamma_t
    if t == 0.0:
        return WignerGrid(grid0.window, grid0.values, grid0.convention, grid0.source)
    h = grid0.window.dq
    if abs(grid0.window.dp - h) > 1e-12 * max(h, grid0.window.dp):
        raise ConfigError("finite-difference stepping needs equal q and p spacing")
    if not (0.0 < cfl <= 0.5):
        raise ConfigError(f"cfl factor {cfl!r} violates the explicit stability bound (0, 0.5]")
    dcoef = (2.0 * params.n + 1.0) / 8.0
    boundary = np.concatenate([grid0.values[0, :], grid0.values[-1, :],
                               grid0.values[:, 0], grid0.values[:, -1]])
    if float(np.max(np.abs(boundary))) >= 1e-10:
        raise WindowError("initial grid boundary is not negligible; enlarge the window")

    dt_max = cfl * h * h / (2.0 * dcoef)
    nsteps = max(1, int(math.ceil(t / dt_max)))
    dt = t / nsteps
    w = grid0.values.copy()
    w[0, :] = w[-1, :] = w[:, 0] = w[:, -1] = 0.0
    mass_in = float(np.sum(w)) * h * h

    q_iface = 0.5 * (grid0.qs[1:] + grid0.qs[:-1])       # drift speed q/2 at interfaces
    p_iface = 0.5 * (grid0.ps[1:] + grid0.ps[:-1])
    dq = _fitted_drift_weight(0.5 * q_iface * h / dcoef)[:, None]
    dp = _fitted_drift_weight(0.5 * p_iface * h / dcoef)[None, :]
    vq = 0.5 * q_iface[:, None]
    vp = 0.5 * p_iface[None, :]
    for _ in range(nsteps):
        jq = vq * ((1.0 - dq) * w[1:, :] + dq * w[:-1, :]) + dcoef * (w[1:, :] - w[:-1, :]) / h
        jp = vp * ((1.0 - dp) * w[:, 1:] + dp * w[:, :-1]) + dcoef * (w[:, 1:] - w[:, :-1]) / h
        w[1:-1, 1:-1] += dt * ((jq[1:, 1:-1] - jq[:-1, 1:-1])
                               + (jp[1:-1, 1:] - jp[1:-1, :-1])) / h
    mass_out = float(np.sum(w)) * h * h
    if abs(mass_out - mass_in) > 1e-6:
        raise WindowError(
            f"finite-difference run leaked {abs(mass_out - mass_in):.3g} of the grid mass; "
            "enlarge the window")
    return WignerGrid(grid0.window, w, grid0.convention, grid0.source)


def _fd_ready_grid(rho: DensityMatrix, points: int) -> WignerGrid:
    """Grid wide enough for the finite-difference boundary requirement.

    Thermal-family states decay slowly, so the generic window is widened
    (at roughly constant spacing) until the edge values are negligible.
    """
    window = default_points_window(rho, points)
    for _ in range(6):
        grid = wigner_grid(rho, window)
        edge = max(float(np.max(np.abs(grid.values[0, :]))),
                   float(np.max(np.abs(grid.values[-1, :]))),
                   float(np.max(np.abs(grid.values[:, 0]))),
                   float(np.max(np.abs(grid.values[:, -1]))))
        if edge < 1e-11:
            return grid
        half = 1.3 * window.q_max
        pts = int(round(window.nq * 1.3)) | 1
        window = GridWindow(-half, half, -half, half, pts, pts)
    raise WindowError("could not find a window with negligible boundary values")


def fd_origin_trajectory(state: Union[FockState, DensityMatrix], n: float,
                         times: Sequence[float], points: int = 241,
                         cfl: float = 0.4) -> OriginTrajectory:
    """W(0,0) along `times` from one continuous finite-difference run."""
    t = _as_times(times)
    grid = _fd_ready_grid(as_density(state), points)
    out = np.empty(t.size)
    prev = 0.0
    for i, s in enumerate(t):
        span = float(s - prev)
        if span > 0.0:
            grid = propagate_wigner_fd(grid, ChannelParams(n, span), cfl)
        prev = s
        out[i] = grid.value_at_origin()
    return OriginTrajectory(t, out, "fd")


# ---------------------------------------------------------------------------
# zero crossings, roots, regimes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ZeroScan:
    """Sign changes (crossings) and tangential zeros (touches) of a trajectory."""

    crossings: tuple[float, ...]
    touches: tuple[float, ...]


def _bisect(f: Callable[[float], float], lo: float, hi: float, flo: float,
            tol: float = 1e-9) -> float:
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if (flo < 0.0) != (fmid < 0.0):
            hi = mid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


def origin_zero_crossings(traj: OriginTrajectory) -> ZeroScan:
    """Locate zeros of a sampled trajectory.

    Sign changes are refined by bisection on the generating function when
    the trajectory carries one, otherwise by linear interpolation.
    Tangential zeros (|W| < 1e-8 with equal signs on both sides) are
    reported separately and never counted as crossings.
    """
    t, w = traj.times, traj.w00
    crossings: list[float] = []
    touches: list[float] = []
    for i in range(t.size - 1):
        a, b = float(w[i]), float(w[i + 1])
        if a == 0.0 or (a < 0.0) == (b < 0.0) or b == 0.0:
            continue
        if traj.generator is not None:
            crossings.append(_bisect(traj.generator, float(t[i]), float(t[i + 1]), a))
        else:
            crossings.append(float(t[i] - a * (t[i + 1] - t[i]) / (b - a)))
    for i in range(1, t.size - 1):
        if abs(w[i]) >= TOUCH_TOL:
            continue
        a, b = float(w[i - 1]), float(w[i + 1])
        if abs(a) <= TOUCH_TOL or abs(b) <= TOUCH_TOL:
            continue
        if (a < 0.0) == (b < 0.0):
            touches.append(float(t[i]))
        elif w[i] == 0.0:
            crossings.append(float(t[i]))  # sign change through an exact zero sample
    crossings.sort()
    return ZeroScan(tuple(crossings), tuple(touches))


def initial_parity_roots(k: int, M: int) -> list[tuple[float, str]]:
    """All eta in (0, 1) where the initial parity of the added binomial state is zero.

    Exact real-root isolation of the integer parity-numerator polynomial
    in x = eta^2; odd multiplicity is a sign crossing, even a touch.
    """
    import sympy

    from .fock import ebs_parity_numerator_coeffs

    if k < 1 or k > 2:
        raise DomainError(f"supported addition orders are k in {{1, 2}}, got {k!r}")
    if M < 0 or M > 30:
        raise DomainError(f"supported binomial orders are M <= 30, got {M!r}")
    coeffs = ebs_parity_numerator_coeffs(k, M)
    x = sympy.Symbol("x")
    poly = sympy.Poly(sum(c * x**d for d, c in enumerate(coeffs)), x)
    if poly.total_degree() == 0:
        return []
    found: list[tuple[float, str]] = []
    roots: dict = {}
    for r in poly.real_roots():
        roots[r] = roots.get(r, 0) + 1
    for r, mult in roots.items():
        if not (bool(r > 0) and bool(r < 1)):
            continue
        eta = math.sqrt(float(r.evalf(30)))
        found.append((eta, "crossing" if mult % 2 == 1 else "touch"))
    found.sort()
    return found


def classify_regime(traj: OriginTrajectory, n: float) -> str:
    """Label the sign pattern of W(0,0, gamma_t) on (0, threshold_tc(n)).

    The trajectory must sample [0, ~tc] densely.  The initial sign is
    three-valued; |W(0,0,0)| below 1e-12 is reported through the sign
    just after zero so boundary states classify by their open-interval
    behavior.
    """
    tc = threshold_tc(n)
    if traj.times[0] > 1e-12 or traj.times[-1] < tc * (1.0 - 1e-6):
        raise DomainError("trajectory must span [0, threshold_tc] to be classified")
    cut = tc * (1.0 - 1e-6)
    inside = traj.times < cut
    if int(np.sum(inside)) < 3:
        raise DomainError("trajectory too sparse on (0, threshold_tc) to classify")
    sub = OriginTrajectory(traj.times[inside], traj.w00[inside], traj.backend,
                           traj.generator)
    scan = origin_zero_crossings(sub)
    crossings = [c for c in scan.crossings if 0.0 < c < cut]
    w0 = float(traj.w00[0])
    start_negative = (w0 < -1e-12) or (abs(w0) <= 1e-12 and float(sub.w00[1]) < 0.0)
    m = len(crossings)
    if m == 0:
        return "negative-throughout" if start_negative else "nonnegative-throughout"
    if m == 1:
        return "negative-then-positive" if start_negative else "positive-then-negative"
    if m == 2 and start_negative:
        return "negative-positive-negative"
    return f"multi-crossing({m})"
