"""Characteristic (diagonalizing) variables of the linearized dynamics.

At each wavenumber the linearized system has one zero eigenvalue and the
pair ``+-i omega(k)``.  The columns of

    S(k) = [ 1              1          1        ]
           [ 0             -qhat(k)    qhat(k)  ]
           [ gamma-1-qhat^2  gamma-1    gamma-1 ]

are the corresponding eigenvectors in ``(rho, v, theta)`` order, so writing
``(rho, v, theta)^T = S(k) (U_0, U_1, U_-1)^T`` per wavenumber turns the
linear part into ``dt U_j = j * Omega U_j`` with symbol ``i omega(k)``.
A right-moving wave ``exp(i(k x - omega(k) t))`` therefore rides the
``U_-1`` component, with polarization ``(1, qhat(k), gamma-1)``.

``det S = -2 qhat^3(k)`` never vanishes, so the map is invertible at every
wavenumber; `to_diagonal` inverts it by a batched numerical 3x3 solve
rather than hand-coded cofactors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dispersion import DispersionParams, qhat
from .plasma import PlasmaState
from .spectral import Grid1D, SpectralField, field_from_spectrum

__all__ = [
    "DiagState",
    "smatrix",
    "from_diagonal",
    "to_diagonal",
    "carrier_polarization",
]


@dataclass(frozen=True)
class DiagState:
    """Characteristic components; ``u1`` carries left-movers, ``um1`` right-movers."""

    u0: SpectralField
    u1: SpectralField
    um1: SpectralField
    gamma: float
    time: float

    def __post_init__(self) -> None:
        g = self.u0.grid
        if self.u1.grid != g or self.um1.grid != g:
            raise ValueError("components must share one grid")
        DispersionParams(gamma=self.gamma)

    @property
    def grid(self) -> Grid1D:
        return self.u0.grid


def smatrix(k, gamma: float) -> np.ndarray:
    """Eigenvector matrix, shape ``k.shape + (3, 3)``."""
    p = DispersionParams(gamma=gamma)
    k = np.asarray(k, dtype=np.float64)
    q = np.asarray(qhat(k, p))
    one = np.ones_like(q)
    gm1 = (gamma - 1.0) * one
    rows = [
        [one, one, one],
        [np.zeros_like(q), -q, q],
        [gm1 - q * q, gm1, gm1],
    ]
    return np.stack([np.stack(r, axis=-1) for r in rows], axis=-2)


def carrier_polarization(k0: float, gamma: float) -> np.ndarray:
    """Physical polarization ``(1, qhat(k0), gamma-1)`` of a right-mover."""
    p = DispersionParams(gamma=gamma)
    return np.array([1.0, qhat(k0, p), gamma - 1.0])


def from_diagonal(d: DiagState) -> PlasmaState:
    """Synthesize ``(rho, v, theta)`` from characteristic components."""
    grid = d.grid
    p = DispersionParams(gamma=d.gamma)
    q = np.asarray(qhat(grid.wavenumbers, p))
    s0, s1, sm1 = d.u0.spectrum, d.u1.spectrum, d.um1.spectrum
    gm1 = d.gamma - 1.0
    rho_hat = s0 + s1 + sm1
    v_hat = q * (sm1 - s1)
    theta_hat = (gm1 - q * q) * s0 + gm1 * (s1 + sm1)
    return PlasmaState(
        rho=field_from_spectrum(grid, rho_hat),
        v=field_from_spectrum(grid, v_hat),
        theta=field_from_spectrum(grid, theta_hat),
        gamma=d.gamma,
        time=d.time,
    )


def to_diagonal(s: PlasmaState) -> DiagState:
    """Invert the per-wavenumber eigenbasis; round-trips to 1e-11."""
    grid = s.grid
    mats = smatrix(grid.wavenumbers, s.gamma)
    rhs_vec = np.stack([s.rho.spectrum, s.v.spectrum, s.theta.spectrum], axis=-1)
    sol = np.linalg.solve(mats, rhs_vec[..., None])[..., 0]
    return DiagState(
        u0=field_from_spectrum(grid, sol[:, 0]),
        u1=field_from_spectrum(grid, sol[:, 1]),
        um1=field_from_spectrum(grid, sol[:, 2]),
        gamma=s.gamma,
        time=s.time,
    )
