"""Pressure-driven ion Euler-Poisson dynamics on a periodic interval.

State variables are deviations from the rest state: ``rho = n - 1`` (ion
density), ``v`` (ion velocity), ``theta = T - 1`` (ion temperature), all
real fields on a shared grid.  The electric potential ``phi`` is not
evolved; it is slaved to the density through the electron constraint

    -phi'' + e^phi = 1 + rho,

solved afresh (warm-started) whenever a tendency is needed.  The evolution
system, in the form actually stepped here:

    rho_t   = -d/dx ( v + rho * v )
    v_t     = -(1 + theta) d/dx ln(1 + rho) - theta_x - phi_x - v v_x
    theta_t = -v theta_x - (gamma - 1)(1 + theta) v_x

The velocity equation carries the pressure gradient in logarithmic form,
``(d/dx p)/n = (1+theta) d/dx ln(1+rho) + theta_x`` for ``p = n T``, which
keeps the quotient by ``n`` exact instead of series-expanded.

Smooth solutions conserve total mass, momentum, energy and a log-entropy;
`conserved_diagnostics` evaluates the four functionals, and the test suite
verifies the underlying flux identities symbolically before trusting the
discrete drift numbers.

All quadratic products are dealiased by the two-thirds rule.  Pointwise
transcendental terms (log1p, exp) are evaluated on the grid; their residual
aliasing is beyond-all-orders small for the band-limited small-amplitude
states this package studies, and the conservation suite quantifies it.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .dispersion import DispersionParams
from .spectral import Grid1D, SpectralField, field_from_values

__all__ = [
    "PlasmaState",
    "PlasmaTendency",
    "Diagnostics",
    "PoissonError",
    "PositivityError",
    "solve_poisson",
    "rhs",
    "step_rk4",
    "conserved_diagnostics",
    "cfl_limit",
]

# Vacuum guard: tendencies are refused once the density or temperature field
# comes this close to vacuum, well before log1p/exp degrade.
POSITIVITY_FLOOR = 0.1


class PoissonError(RuntimeError):
    """Electron constraint solve failed to reach tolerance."""

    def __init__(self, residual: float, iterations: int):
        super().__init__(
            f"potential solve stalled at residual {residual:.3e} "
            f"after {iterations} iterations"
        )
        self.residual = residual
        self.iterations = iterations


class PositivityError(RuntimeError):
    """Density or temperature left the physical regime."""

    def __init__(self, time: float, min_density: float, min_temperature: float):
        super().__init__(
            f"positivity floor crossed at t={time:.6g}: "
            f"min(1+rho)={min_density:.4f}, min(1+theta)={min_temperature:.4f}"
        )
        self.time = time
        self.min_density = min_density
        self.min_temperature = min_temperature


@dataclass(frozen=True)
class PlasmaState:
    """Deviation variables on a shared grid at one instant."""

    rho: SpectralField
    v: SpectralField
    theta: SpectralField
    gamma: float
    time: float

    def __post_init__(self) -> None:
        g = self.rho.grid
        if self.v.grid != g or self.theta.grid != g:
            raise ValueError("state components must share one grid")
        DispersionParams(gamma=self.gamma)  # validates gamma > 1
        if np.min(1.0 + self.rho.values) <= 0.0:
            raise ValueError("density 1 + rho must stay positive")
        if np.min(1.0 + self.theta.values) <= 0.0:
            raise ValueError("temperature 1 + theta must stay positive")

    @property
    def grid(self) -> Grid1D:
        return self.rho.grid


@dataclass(frozen=True)
class PlasmaTendency:
    d_rho: SpectralField
    d_v: SpectralField
    d_theta: SpectralField


@dataclass(frozen=True)
class Diagnostics:
    mass: float
    momentum: float
    energy: float
    entropy: float


# Internal real-transform helpers.  The public spectrum convention lives in
# `spectral`; inside this hot path we use rfft at half the cost, which is
# representation-equivalent for real fields.

def _rwave(grid: Grid1D) -> np.ndarray:
    return 2.0 * np.pi / grid.length * np.arange(grid.n_points // 2 + 1)


def _rmask(grid: Grid1D) -> np.ndarray:
    kr = _rwave(grid)
    kmax = np.pi * grid.n_points / grid.length
    return kr <= (2.0 / 3.0) * kmax * (1.0 + 1e-12)


def _dx(values: np.ndarray, kr: np.ndarray, n: int) -> np.ndarray:
    return np.fft.irfft(1j * kr * np.fft.rfft(values), n)


def _pd(a: np.ndarray, b: np.ndarray, keep: np.ndarray, n: int) -> np.ndarray:
    # dealiased pointwise product
    spec = np.fft.rfft(a * b)
    spec[~keep] = 0.0
    return np.fft.irfft(spec, n)


def solve_poisson(
    rho: SpectralField,
    initial_guess: np.ndarray | None = None,
    max_iter: int = 50,
) -> SpectralField:
    """Solve ``-phi'' + e^phi = 1 + rho`` for the potential.

    Newton iteration from ``phi = 0`` (or the supplied warm start), with the
    Jacobian replaced by its rest-state value ``1 - d^2/dx^2`` and inverted
    spectrally.  The replacement costs quadratic convergence but contracts
    linearly at rate ``~ max|e^phi - 1|``, far inside ``max_iter`` for the
    near-uniform states this solver sees.  Convergence is measured on the
    preconditioned residual, i.e. the update just taken:
    ``||(1 - d^2/dx^2)^{-1} R||_L2 <= 1e-12 * (1 + ||rho||_L2)``.  The raw
    residual is useless as a stopping measure at high resolution because the
    Laplacian term amplifies machine-level spectral junk by ``k_max^2``; the
    preconditioned norm cancels that factor and is the one that actually
    bounds the error in ``phi``.
    """
    grid = rho.grid
    n = grid.n_points
    r = rho.values
    if np.min(1.0 + r) <= 0.0:
        raise ValueError("density 1 + rho must be positive")
    kr = _rwave(grid)
    inv = 1.0 / (1.0 + kr * kr)
    # ||f||_L2 = sqrt(L * sum |c_k|^2) over full modes; with rfft storage the
    # interior modes count twice
    weights = np.full(kr.shape, 2.0)
    weights[0] = 1.0
    weights[-1] = 1.0
    def l2(values: np.ndarray) -> float:
        spec = np.fft.rfft(values) / n
        return float(np.sqrt(grid.length * np.sum(weights * np.abs(spec) ** 2)))

    tol = 1e-12 * (1.0 + l2(r))
    phi = np.zeros(n) if initial_guess is None else np.array(initial_guess, dtype=np.float64)
    step_norm = np.inf
    for _ in range(max_iter):
        # expm1 keeps the residual accurate to machine RELATIVE precision for
        # small phi; a bare exp(phi) - 1 would inject ~1e-16 broadband noise
        res = np.fft.irfft(kr * kr * np.fft.rfft(phi), n) + np.expm1(phi) - r
        step = np.fft.irfft(inv * np.fft.rfft(res), n)
        phi = phi - step
        step_norm = l2(step)
        if step_norm <= tol:
            return field_from_values(grid, phi)
    raise PoissonError(step_norm, max_iter)


def _tendency_arrays(
    state: PlasmaState, phi_init: np.ndarray | None
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    grid = state.grid
    n = grid.n_points
    r = state.rho.values
    v = state.v.values
    th = state.theta.values
    min_n = float(np.min(1.0 + r))
    min_t = float(np.min(1.0 + th))
    if min_n < POSITIVITY_FLOOR or min_t < POSITIVITY_FLOOR:
        raise PositivityError(state.time, min_n, min_t)

    phi = solve_poisson(state.rho, initial_guess=phi_init).values
    kr = _rwave(grid)
    keep = _rmask(grid)
    gamma = state.gamma

    d_v_of_x = _dx(v, kr, n)
    d_th = _dx(th, kr, n)
    d_phi = _dx(phi, kr, n)
    d_lnr = _dx(np.log1p(r), kr, n)

    rho_t = -_dx(v + _pd(r, v, keep, n), kr, n)
    v_t = -_pd(1.0 + th, d_lnr, keep, n) - d_th - d_phi - _pd(v, d_v_of_x, keep, n)
    theta_t = (
        -_pd(v, d_th, keep, n)
        - (gamma - 1.0) * d_v_of_x
        - (gamma - 1.0) * _pd(th, d_v_of_x, keep, n)
    )

    def masked(values: np.ndarray) -> np.ndarray:
        # keep the whole tendency inside the two-thirds band; the potential
        # and the log-form pressure are transcendental in the state and
        # would otherwise leak past the cut, where product dealiasing can
        # no longer remove their aliases
        spec = np.fft.rfft(values)
        spec[~keep] = 0.0
        return np.fft.irfft(spec, n)

    return masked(rho_t), masked(v_t), masked(theta_t), phi


def rhs(state: PlasmaState, phi_init: np.ndarray | None = None) -> PlasmaTendency:
    """Time derivative of the state; the potential is solved internally."""
    rho_t, v_t, theta_t, _ = _tendency_arrays(state, phi_init)
    grid = state.grid
    return PlasmaTendency(
        d_rho=field_from_values(grid, rho_t),
        d_v=field_from_values(grid, v_t),
        d_theta=field_from_values(grid, theta_t),
    )


def cfl_limit(state: PlasmaState, safety: float = 0.5) -> float:
    """Largest advisable step: ``safety * dx / (sqrt(gamma+1) + max|v|)``."""
    fastest = np.sqrt(state.gamma + 1.0) + float(np.max(np.abs(state.v.values)))
    return safety * state.grid.spacing / fastest


def step_rk4(state: PlasmaState, dt: float, warn_cfl: bool = True) -> PlasmaState:
    """One classical Runge-Kutta step of size ``dt``.

    The potential solve is warm-started stage to stage.  Exceeding the
    advisory CFL bound only warns: the spectral linear phase speeds are
    bounded (max ``|omega| ~ sqrt(gamma+1) k_max``), so stability, not
    accuracy, is governed by the same bound.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if warn_cfl and dt > cfl_limit(state):
        warnings.warn(
            f"dt={dt:.3e} exceeds the advective CFL bound {cfl_limit(state):.3e}",
            RuntimeWarning,
            stacklevel=2,
        )
    grid = state.grid
    gamma = state.gamma
    r, v, th = state.rho.values, state.v.values, state.theta.values

    def stage(rv, vv, tv, t, phi_init):
        st = PlasmaState(
            rho=field_from_values(grid, rv),
            v=field_from_values(grid, vv),
            theta=field_from_values(grid, tv),
            gamma=gamma,
            time=t,
        )
        return _tendency_arrays(st, phi_init)

    h = dt
    a1, b1, c1, phi = stage(r, v, th, state.time, None)
    a2, b2, c2, phi = stage(r + 0.5 * h * a1, v + 0.5 * h * b1, th + 0.5 * h * c1,
                            state.time + 0.5 * h, phi)
    a3, b3, c3, phi = stage(r + 0.5 * h * a2, v + 0.5 * h * b2, th + 0.5 * h * c2,
                            state.time + 0.5 * h, phi)
    a4, b4, c4, phi = stage(r + h * a3, v + h * b3, th + h * c3,
                            state.time + h, phi)
    w = h / 6.0
    out = PlasmaState(
        rho=field_from_values(grid, r + w * (a1 + 2 * a2 + 2 * a3 + a4)),
        v=field_from_values(grid, v + w * (b1 + 2 * b2 + 2 * b3 + b4)),
        theta=field_from_values(grid, th + w * (c1 + 2 * c2 + 2 * c3 + c4)),
        gamma=gamma,
        time=state.time + dt,
    )
    min_n = float(np.min(1.0 + out.rho.values))
    min_t = float(np.min(1.0 + out.theta.values))
    if min_n < POSITIVITY_FLOOR or min_t < POSITIVITY_FLOOR:
        raise PositivityError(out.time, min_n, min_t)
    return out


def conserved_diagnostics(state: PlasmaState) -> Diagnostics:
    """Mass, momentum, energy and log-entropy functionals.

    Periodic trapezoid quadrature, spectrally accurate here.  The energy
    carries the field terms ``(1/2) phi_x^2 + e^phi (phi - 1)`` whose time
    derivative balances the work term ``n u phi_x``; the entropy density is
    ``n ln(T n^{1-gamma})``, materially conserved.
    """
    grid = state.grid
    n = grid.n_points
    dx_w = grid.spacing
    r, v, th = state.rho.values, state.v.values, state.theta.values
    gamma = state.gamma
    phi = solve_poisson(state.rho).values
    dens = 1.0 + r
    temp = 1.0 + th
    phi_x = _dx(phi, _rwave(grid), n)
    mass = dx_w * float(np.sum(r))
    momentum = dx_w * float(np.sum(dens * v))
    energy = dx_w * float(
        np.sum(
            0.5 * dens * v * v
            + dens * temp / (gamma - 1.0)
            + 0.5 * phi_x * phi_x
            + np.exp(phi) * (phi - 1.0)
        )
    )
    entropy = dx_w * float(np.sum(dens * (np.log(temp) + (1.0 - gamma) * np.log(dens))))
    return Diagnostics(mass=mass, momentum=momentum, energy=energy, entropy=entropy)
