"""Modulation coefficients by harmonic balance, and the envelope solver.

Feeding the single-carrier ansatz through the characteristic system and
sorting by powers of the amplitude and by harmonic produces, order by
order, the polarization relations of the mean flow and second harmonic
and finally the cubic NLS equation for the envelope,

    dA/dT = i*mu1 * d^2A/dX^2 + i*mu2 * A|A|^2 .

`assemble_coefficients` performs that balance numerically: every
coupling constant is read off the interaction kernels at the relevant
mode pairs, so no closed-form transcription enters the production path.
The same number is recomputed two independent ways (grid operators in
`nu2_from_grid_operators`, a full nonlinear solver run in
`frequency_shift_measurement`), which is what the tests lean on.

Slot order for the per-component 3-vectors is (0, +1, -1), matching the
characteristic component order used everywhere else.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .diagonal import DiagState, from_diagonal, to_diagonal
from .dispersion import (
    DispersionParams,
    group_velocity,
    nonresonance_report,
    omega,
    omega_second,
)
from .kernels import n_apply, n_kernel, q_apply, q_kernel
from .plasma import cfl_limit, step_rk4
from .spectral import Grid1D, fft_coeff, field_from_values, make_grid

__all__ = [
    "NlsCoefficients",
    "Envelope",
    "NlsInvariants",
    "AssemblyError",
    "assemble_coefficients",
    "nu2_from_grid_operators",
    "frequency_shift_measurement",
    "default_envelope",
    "split_step",
    "nls_invariants",
]

_SLOTS = (0, 1, -1)


class AssemblyError(ArithmeticError):
    """The harmonic balance produced an inconsistent coefficient."""


@dataclass(frozen=True)
class NlsCoefficients:
    """Everything the modulation approximation needs at one (gamma, k0).

    `a2_of_a1sq` and `a0_of_a1sq` are the second-harmonic and mean-flow
    amplitudes per unit A^2 and |A|^2 respectively, indexed by component
    in the order (0, +1, -1).
    """

    gamma: float
    k0: float
    omega0: float
    cg: float
    mu1: float
    mu2: float
    gamma20: float
    gamma2p: float
    gamma2m: float
    a2_of_a1sq: tuple[complex, complex, complex]
    a0_of_a1sq: tuple[float, float, float]


def _gamma2(ell: int, k0: float, p: DispersionParams) -> float:
    # second-harmonic source: the (carrier, carrier) pair at output 2*k0
    val = q_kernel(ell, -1, k0, -1, k0, p) / 1j
    if abs(val.imag) > 1e-12 * max(1.0, abs(val)):
        raise AssemblyError(f"gamma2[{ell}] came out complex: {val!r}")
    return float(val.real)


def _gamma0(ell: int, k0: float, p: DispersionParams) -> float:
    # mean-flow source: the (carrier, conjugate-carrier) pair carries a
    # kernel that vanishes at output 0 and grows linearly; its slope is
    # the coefficient of d/dX |A|^2.  Symmetric difference quotients in
    # the output wavenumber, Richardson-extrapolated once.
    def slope(h: float) -> complex:
        up = 2.0 * q_kernel(ell, -1, k0 + h, -1, -k0, p) / (1j * h)
        dn = 2.0 * q_kernel(ell, -1, k0 - h, -1, -k0, p) / (-1j * h)
        return 0.5 * (up + dn)

    s1 = slope(1e-3)
    s2 = slope(5e-4)
    val = (4.0 * s2 - s1) / 3.0
    if abs(val.imag) > 1e-10 * max(1.0, abs(val)):
        raise AssemblyError(f"gamma0[{ell}] came out complex: {val!r}")
    return float(val.real)


def assemble_coefficients(gamma: float, k0: float) -> NlsCoefficients:
    """Harmonic balance of the carrier ansatz at (gamma, k0).

    Raises ValueError when the nonresonance margins fail (the balance
    divides by them) and AssemblyError when the assembled cubic
    coefficient fails to be real, which would mean the kernel bookkeeping
    is inconsistent.
    """
    p = DispersionParams(gamma=gamma)
    rep = nonresonance_report(k0, p)
    if not rep.all_clear:
        raise ValueError(
            f"nonresonance margins too small at gamma={gamma}, k0={k0}: "
            f"margin {rep.margin:.3e}"
        )
    om0 = omega(k0, p)
    cg = group_velocity(k0, p)
    om2 = omega(2.0 * k0, p)
    cg0 = group_velocity(0.0, p)

    g2 = {ell: _gamma2(ell, k0, p) for ell in _SLOTS}
    a2 = {ell: g2[ell] / (-2.0 * om0 - ell * om2) for ell in _SLOTS}
    g0 = {ell: _gamma0(ell, k0, p) for ell in _SLOTS}
    # integrated mean-flow balance: (-cg - ell*omega'(0)) A0 = gamma0 |A|^2
    a0 = {ell: -g0[ell] / (cg + ell * cg0) for ell in _SLOTS}

    kmean = {ell: q_kernel(-1, -1, k0, ell, 0.0, p) for ell in _SLOTS}
    kharm = {ell: q_kernel(-1, -1, -k0, ell, 2.0 * k0, p) for ell in _SLOTS}
    nself = n_kernel(-1, -1, k0, -1, k0, -1, -k0, p)
    # multiplicities: 2 for each distinct unordered pair, 3 for the
    # (carrier, carrier, conjugate) multiset
    nu2 = (
        2.0 * sum(kmean[ell] * a0[ell] for ell in _SLOTS)
        + 2.0 * sum(kharm[ell] * complex(a2[ell]) for ell in _SLOTS)
        + 3.0 * nself
    ) / 1j
    if abs(nu2.imag) > 1e-10 * max(1.0, abs(nu2)):
        raise AssemblyError(f"cubic coefficient not real: {nu2!r}")

    return NlsCoefficients(
        gamma=gamma,
        k0=k0,
        omega0=om0,
        cg=cg,
        mu1=0.5 * omega_second(k0, p),
        mu2=float(nu2.real),
        gamma20=g2[0],
        gamma2p=g2[1],
        gamma2m=g2[-1],
        a2_of_a1sq=tuple(complex(a2[ell]) for ell in _SLOTS),
        a0_of_a1sq=tuple(a0[ell] for ell in _SLOTS),
    )


def nu2_from_grid_operators(c: NlsCoefficients, n_points: int = 64) -> float:
    """Recompute the cubic coefficient with the pseudo-spectral operators.

    Places the unit carrier, the mean-flow and second-harmonic responses
    on a small grid, applies the quadratic and cubic couplings as grid
    operators, and reads the component -1 output at the carrier mode.
    Independent of the scalar kernel path everywhere past the term
    tables.
    """
    p = DispersionParams(gamma=c.gamma)
    g = make_grid(n_points, 2.0 * np.pi / c.k0)
    x = g.x
    zero = np.zeros(n_points, dtype=np.complex128)

    carrier = (zero, zero, np.exp(1j * c.k0 * x))
    conj_carrier = (zero, zero, np.exp(-1j * c.k0 * x))
    mean = tuple(a * np.ones(n_points, dtype=np.complex128) for a in c.a0_of_a1sq)
    harm = tuple(a * np.exp(2j * c.k0 * x) for a in c.a2_of_a1sq)

    total = 2.0 * q_apply(-1, carrier, mean, g, p)
    total += 2.0 * q_apply(-1, conj_carrier, harm, g, p)
    total += 3.0 * n_apply(-1, carrier, carrier, conj_carrier, g, p)
    coef = fft_coeff(total)
    idx = int(np.argmin(np.abs(g.wavenumbers - c.k0)))
    val = coef[idx] / 1j
    if abs(val.imag) > 1e-8 * max(1.0, abs(val)):
        raise AssemblyError(f"grid-operator cubic coefficient not real: {val!r}")
    return float(val.real)


# ------------------------------------------------------------ NLS evolution

@dataclass(frozen=True)
class Envelope:
    """Complex amplitude A on the slow periodic grid, at slow time T."""

    grid: Grid1D
    a: np.ndarray
    slow_time: float

    def __post_init__(self) -> None:
        a = np.asarray(self.a, dtype=np.complex128)
        if a.shape != (self.grid.n_points,):
            raise ValueError("envelope shape does not match grid")
        if not np.all(np.isfinite(a)):
            raise ValueError("envelope must be finite")
        a = a.copy()
        a.setflags(write=False)
        object.__setattr__(self, "a", a)


@dataclass(frozen=True)
class NlsInvariants:
    mass: float
    hamiltonian: float


def default_envelope(grid: Grid1D, amplitude: float = 1.0, width: float = 2.0,
                     slow_time: float = 0.0) -> Envelope:
    """Gaussian bump centered on the slow grid; decays to rounding at the ends."""
    xc = 0.5 * grid.length
    a = amplitude * np.exp(-(((grid.x - xc) / width) ** 2))
    return Envelope(grid=grid, a=a.astype(np.complex128), slow_time=slow_time)


def split_step(e: Envelope, dT: float, c: NlsCoefficients) -> Envelope:
    """One Strang step of the envelope equation.

    Half a nonlinear phase rotation, a full linear spectral step, half a
    rotation again.  Both substeps are exact flows, so the discrete mass
    sum |A|^2 is conserved to rounding per step.
    """
    if not dT > 0.0:
        raise ValueError("dT must be positive")
    a = np.asarray(e.a, dtype=np.complex128)
    a = a * np.exp(0.5j * c.mu2 * dT * np.abs(a) ** 2)
    kk = e.grid.wavenumbers
    a = np.fft.ifft(np.exp(-1j * c.mu1 * kk * kk * dT) * np.fft.fft(a))
    a = a * np.exp(0.5j * c.mu2 * dT * np.abs(a) ** 2)
    return Envelope(grid=e.grid, a=a, slow_time=e.slow_time + dT)


def nls_invariants(e: Envelope, c: NlsCoefficients) -> NlsInvariants:
    """Mass and Hamiltonian of the focusing/defocusing cubic flow."""
    dx = e.grid.spacing
    a = np.asarray(e.a)
    mass = float(dx * np.sum(np.abs(a) ** 2))
    da = np.fft.ifft(1j * e.grid.wavenumbers * np.fft.fft(a))
    ham = float(dx * np.sum(c.mu1 * np.abs(da) ** 2 - 0.5 * c.mu2 * np.abs(a) ** 4))
    return NlsInvariants(mass=mass, hamiltonian=ham)


# ------------------------------------------------------------ physical oracle

def frequency_shift_measurement(
    gamma: float,
    k0: float,
    eps: float,
    amplitude: float = 1.0,
    n_points: int = 64,
    t_end: float | None = None,
    n_samples: int = 64,
) -> float:
    """Measure the cubic coefficient from the full nonlinear solver.

    A constant envelope |A| = amplitude turns the modulation ansatz into a
    uniform wavetrain whose carrier mode rotates at -omega0 plus the
    nonlinear shift nu2 * (eps*amplitude)^2.  Seeds the solver with the
    wavetrain including its mean-flow and second-harmonic responses (the
    shift is wrong without them), demodulates the carrier mode of the -1
    component by the linear rotation, and fits the residual phase drift.
    This is the end-to-end oracle for mu2.

    The window matters.  Imperfections in the seeded second harmonic ring
    against it at the detuning -2*omega0 + omega(2 k0), so t_end defaults
    to two of those beat periods: long enough for a clean slope, short
    enough to stay well inside the wavetrain's nonlinear breakdown time
    (which shrinks like 1/(eps*amplitude); eps*amplitude around 2e-3 keeps
    the measurement in the few-tenths-of-a-percent range, while 0.02 puts
    breakdown inside any useful window and the fit returns noise).
    """
    c = assemble_coefficients(gamma, k0)
    if t_end is None:
        p = DispersionParams(gamma=gamma)
        t_end = 2.0 * 2.0 * np.pi / abs(-2.0 * c.omega0 + omega(2.0 * k0, p))
    g = make_grid(n_points, 2.0 * np.pi / k0)
    x = g.x
    a2_sq = amplitude * amplitude

    fields = []
    for i, ell in enumerate(_SLOTS):
        vals = eps * eps * a2_sq * (
            c.a0_of_a1sq[i] + 2.0 * np.real(c.a2_of_a1sq[i] * np.exp(2j * k0 * x))
        )
        if ell == -1:
            vals = vals + 2.0 * eps * amplitude * np.cos(k0 * x)
        fields.append(field_from_values(g, vals))
    state = from_diagonal(
        DiagState(u0=fields[0], u1=fields[1], um1=fields[2], gamma=gamma, time=0.0)
    )

    dt = 0.9 * cfl_limit(state)
    stride = max(1, int(np.ceil(t_end / dt / n_samples)))
    dt = t_end / (stride * n_samples)
    idx = int(np.argmin(np.abs(g.wavenumbers - k0)))

    # after demodulation the phase moves by nu2*(eps*amplitude)^2 per unit
    # time, far below pi per sample, so unwrapping is safe
    times = np.empty(n_samples + 1)
    phases = np.empty(n_samples + 1)
    times[0] = 0.0
    phases[0] = np.angle(to_diagonal(state).um1.spectrum[idx])
    for s in range(1, n_samples + 1):
        for _ in range(stride):
            state = step_rk4(state, dt, warn_cfl=False)
        times[s] = state.time
        coef = to_diagonal(state).um1.spectrum[idx]
        phases[s] = np.angle(coef * np.exp(1j * c.omega0 * times[s]))

    slope = np.polyfit(times, np.unwrap(phases), 1)[0]
    return float(slope / (eps * eps * a2_sq))
