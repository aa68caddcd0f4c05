"""Dispersion relation of long ion acoustic waves.

Linearizing the pressure-driven Euler-Poisson system about the rest state
(constant density, zero velocity, unit temperature) and eliminating the
potential through the linearized quasi-neutrality constraint gives the phase
speed

    qhat(k) = sqrt(gamma + 1 / (1 + k^2)),

with temporal frequency ``omega(k) = k * qhat(k)``.  The electron screening
term ``1/(1+k^2)`` makes the branch weakly dispersive: ``omega`` is odd,
strictly increasing, concave for ``k > 0``, and approaches the isothermal
sound line ``sqrt(gamma) * k`` at short wavelengths.

Everything here is analytic in ``k``; derivatives are hand-differentiated
closed forms, with finite differences kept to the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "DispersionParams",
    "qhat",
    "qhat_prime",
    "omega",
    "group_velocity",
    "omega_second",
    "resonance_denominator",
    "NonresonanceReport",
    "nonresonance_report",
]


@dataclass(frozen=True)
class DispersionParams:
    """Adiabatic exponent of the ion gas; the branch needs ``gamma > 1``."""

    gamma: float

    def __post_init__(self) -> None:
        if not (self.gamma > 1.0 and np.isfinite(self.gamma)):
            raise ValueError(f"gamma must be finite and > 1, got {self.gamma}")


def qhat(k, p: DispersionParams):
    """Phase speed ``sqrt(gamma + 1/(1+k^2))``."""
    k = np.asarray(k, dtype=np.float64)
    out = np.sqrt(p.gamma + 1.0 / (1.0 + k * k))
    return out if out.shape else float(out)


def qhat_prime(k, p: DispersionParams):
    """d(qhat)/dk = -k / ((1+k^2)^2 qhat)."""
    k = np.asarray(k, dtype=np.float64)
    s = 1.0 + k * k
    out = -k / (s * s * np.sqrt(p.gamma + 1.0 / s))
    return out if out.shape else float(out)


def omega(k, p: DispersionParams):
    """Frequency of the right-moving branch, ``k * qhat(k)``; odd in ``k``."""
    k = np.asarray(k, dtype=np.float64)
    out = k * np.sqrt(p.gamma + 1.0 / (1.0 + k * k))
    return out if out.shape else float(out)


def group_velocity(k, p: DispersionParams):
    """omega'(k) = qhat(k) - k^2 / ((1+k^2)^2 qhat(k))."""
    k = np.asarray(k, dtype=np.float64)
    s = 1.0 + k * k
    q = np.sqrt(p.gamma + 1.0 / s)
    out = q - k * k / (s * s * q)
    return out if out.shape else float(out)


def omega_second(k, p: DispersionParams):
    """omega''(k), from omega'' = 2 qhat' + k qhat''.

    With s = 1 + k^2:

        qhat'  = -k / (s^2 qhat)
        qhat'' = -(s^2 qhat - 4 k^2 s qhat + k^2 / qhat) / (s^4 qhat^2)

    the second line following from differentiating the first and reusing
    qhat' itself.  Odd symmetry of omega makes omega'' odd as well.
    """
    k = np.asarray(k, dtype=np.float64)
    s = 1.0 + k * k
    q = np.sqrt(p.gamma + 1.0 / s)
    qp = -k / (s * s * q)
    qpp = -(s * s * q - 4.0 * k * k * s * q + k * k / q) / (s ** 4 * q * q)
    out = 2.0 * qp + k * qpp
    return out if out.shape else float(out)


def resonance_denominator(j: int, n: int, k, ell, p: DispersionParams):
    """Three-wave mismatch ``-j*omega(k) - omega(k - ell) + n*omega(ell)``.

    ``j`` labels the output characteristic and ``n`` the second input; the
    first input rides the ``-1`` branch at wavenumber ``k - ell``.  Zeros of
    this expression are the resonances the normal-form step must divide by.
    """
    if j not in (-1, 0, 1) or n not in (-1, 0, 1):
        raise ValueError(f"component labels must be in {{-1,0,1}}, got j={j}, n={n}")
    return -j * omega(k, p) - omega(np.asarray(k) - np.asarray(ell), p) + n * omega(ell, p)


@dataclass(frozen=True)
class NonresonanceReport:
    """Margins of the finitely many frequency combinations that could vanish.

    ``entries`` maps a label to the signed combination value; ``margin`` is
    the smallest absolute value; ``all_clear`` is False as soon as any entry
    drops below 1e-6 in magnitude.
    """

    k0: float
    gamma: float
    entries: dict
    margin: float
    all_clear: bool


def nonresonance_report(k0: float, p: DispersionParams) -> NonresonanceReport:
    """Certify the spectral gaps needed by the modulation construction.

    Checks the harmonic mismatches ``-j*omega0 +/- omega(j*k0)`` for
    ``j = 2..5``, the carrier frequency itself, and the group-speed gaps
    ``cg -/+ omega'(0)`` that control the mean-flow divisors.
    """
    if k0 == 0.0:
        raise ValueError("carrier wavenumber must be nonzero")
    w0 = omega(k0, p)
    cg = group_velocity(k0, p)
    c0 = group_velocity(0.0, p)
    entries = {"omega0": w0, "cg": cg}
    for j in range(2, 6):
        wj = omega(j * k0, p)
        entries[f"-{j}*omega0+omega({j}k0)"] = -j * w0 + wj
        entries[f"-{j}*omega0-omega({j}k0)"] = -j * w0 - wj
    entries["cg-omega'(0)"] = cg - c0
    entries["cg+omega'(0)"] = cg + c0
    margin = min(abs(v) for v in entries.values())
    return NonresonanceReport(
        k0=float(k0),
        gamma=p.gamma,
        entries=entries,
        margin=margin,
        all_clear=margin >= 1e-6,
    )
