"""Assemble the slow-modulation approximation on the fast grid.

The approximation is a carrier wave at k0 whose complex amplitude is the
envelope A evaluated at the group-comoving slow coordinate, plus (at the
extended order) the mean-flow and second-harmonic responses slaved to
|A|^2 and A^2.  Everything is assembled in characteristic components and
mapped to physical variables at the end, so the carrier polarization
comes out of the diagonalization rather than being transcribed.

The envelope lives on its own slow periodic grid.  Fields on the fast
grid are obtained by exact spectral evaluation of the (band-limited)
slow spectrum at the shifted points eps*(x - cg*t): zero-padding in
Fourier space, no interpolation.  Each harmonic's amplitude is cut to
the band |K| <= delta/eps in slow wavenumbers before use, which confines
the assembled fast-side spectrum to bands of half-width delta around the
active harmonics.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .diagonal import DiagState, from_diagonal
from .envelope import Envelope, NlsCoefficients
from .plasma import PlasmaState
from .spectral import Grid1D, SpectralField, field_from_spectrum, field_from_values

__all__ = [
    "AnsatzConfig",
    "band_limited_coeffs",
    "build",
    "build_diagonal",
    "evaluate_slow",
    "fourier_cutoff",
    "slow_profile_coeffs",
]

_ORDERS = ("leading", "extended")


@dataclass(frozen=True)
class AnsatzConfig:
    """Everything needed to evaluate the approximation at any time.

    `grid` is the fast grid the state is built on; `envelope` lives on the
    matching slow grid (length `eps` times the fast length) and must have
    been advanced to slow time eps^2 * t before `build(cfg, t)` is called.
    `cutoff_delta` is the fast-side half-width of the harmonic bands and
    must match the weight/projection scale wherever the two meet.
    """

    eps: float
    coeffs: NlsCoefficients
    envelope: Envelope
    grid: Grid1D
    order: str = "extended"
    cutoff_delta: float = field(default=0.0)

    def __post_init__(self) -> None:
        if not 0.0 < self.eps <= 0.3:
            raise ValueError(f"eps must lie in (0, 0.3], got {self.eps}")
        if self.order not in _ORDERS:
            raise ValueError(f"order must be one of {_ORDERS}, got {self.order!r}")
        if self.cutoff_delta == 0.0:
            object.__setattr__(self, "cutoff_delta", 0.45 * self.coeffs.k0)
        k0 = self.coeffs.k0
        if not 0.0 < self.cutoff_delta < 0.5 * k0:
            raise ValueError(
                "cutoff_delta must lie in (0, k0/2) so harmonic bands stay disjoint"
            )
        slow_len = self.eps * self.grid.length
        if slow_len < 40.0 * (1.0 - 1e-12):
            raise ValueError(
                f"eps*length = {slow_len:.3g} < 40: envelope not contained"
            )
        if abs(self.envelope.grid.length - slow_len) > 1e-9 * slow_len:
            raise ValueError("envelope grid length must equal eps times fast length")
        if self.envelope.grid.n_points > self.grid.n_points:
            raise ValueError("slow grid may not carry more modes than the fast grid")
        k_rep = np.pi * self.grid.n_points / self.grid.length
        if 2.0 * k0 + self.cutoff_delta >= k_rep:
            raise ValueError("fast grid cannot represent the second-harmonic band")


def band_limited_coeffs(values: np.ndarray, grid: Grid1D, k_keep: float) -> np.ndarray:
    """Fourier coefficients of a (complex) slow field, zeroed beyond |K| > k_keep."""
    c = np.fft.fft(np.asarray(values, dtype=np.complex128)) / grid.n_points
    c[np.abs(grid.wavenumbers) > k_keep] = 0.0
    return c


def evaluate_slow(
    coeffs: np.ndarray,
    slow_grid: Grid1D,
    n_fast: int,
    shift: float = 0.0,
    derivative: int = 0,
) -> np.ndarray:
    """Evaluate d^n/dX^n of a slow field at n_fast uniform points, shifted.

    The sample points are X_j = j*L_slow/n_fast - shift, which is exactly
    where eps*(x_j - cg*t) lands for shift = eps*cg*t.  Zero-pads the
    spectrum, so the evaluation is exact for band-limited input.
    """
    n_s = slow_grid.n_points
    if coeffs.shape != (n_s,):
        raise ValueError("coefficient array does not match the slow grid")
    if n_fast < n_s:
        raise ValueError("n_fast must be at least the slow mode count")
    kk = slow_grid.wavenumbers
    c = coeffs * np.exp(-1j * kk * shift)
    if derivative:
        c = c * (1j * kk) ** derivative
    freqs = np.rint(kk * slow_grid.length / (2.0 * np.pi)).astype(int)
    out = np.zeros(n_fast, dtype=np.complex128)
    out[freqs % n_fast] = c
    return np.fft.ifft(out) * n_fast


def slow_profile_coeffs(cfg: AnsatzConfig):
    """Band-limited slow coefficients of A, A^2 and |A|^2.

    The squares are formed from the already-cut envelope values and cut
    again, matching the per-amplitude confinement the builder applies.
    """
    e = cfg.envelope
    k_keep = cfg.cutoff_delta / cfg.eps
    c1 = band_limited_coeffs(e.a, e.grid, k_keep)
    a1_slow = np.fft.ifft(c1) * e.grid.n_points
    csq = band_limited_coeffs(a1_slow * a1_slow, e.grid, k_keep)
    cabs = band_limited_coeffs(a1_slow * np.conj(a1_slow), e.grid, k_keep)
    return c1, csq, cabs


def _cut_profiles(cfg: AnsatzConfig, t: float):
    """Band-limited envelope, its square and modulus-square, on the fast grid."""
    e = cfg.envelope
    shift = cfg.eps * cfg.coeffs.cg * t
    n_f = cfg.grid.n_points
    c1, csq, cabs = slow_profile_coeffs(cfg)
    a1 = evaluate_slow(c1, e.grid, n_f, shift)
    if cfg.order == "leading":
        return a1, None, None
    asq = evaluate_slow(csq, e.grid, n_f, shift)
    absq = evaluate_slow(cabs, e.grid, n_f, shift).real
    return a1, asq, absq


def build_diagonal(cfg: AnsatzConfig, t: float) -> DiagState:
    """The approximation in characteristic components, before the physical
    map and its positivity checks.  The residual study evaluates here."""
    if abs(cfg.envelope.slow_time - cfg.eps * cfg.eps * t) > 1e-12:
        raise ValueError(
            f"envelope time mismatch: envelope at T={cfg.envelope.slow_time!r}, "
            f"build asked for eps^2*t={cfg.eps * cfg.eps * t!r}"
        )
    c = cfg.coeffs
    a1, asq, absq = _cut_profiles(cfg, t)
    carrier = np.exp(1j * (c.k0 * cfg.grid.x - c.omega0 * t))
    eps = cfg.eps

    vals = [np.zeros(cfg.grid.n_points) for _ in range(3)]
    vals[2] = 2.0 * eps * np.real(a1 * carrier)
    if cfg.order == "extended":
        second = carrier * carrier
        for i in range(3):
            vals[i] = vals[i] + eps * eps * (
                c.a0_of_a1sq[i] * absq
                + 2.0 * np.real(c.a2_of_a1sq[i] * asq * second)
            )
    fields = [field_from_values(cfg.grid, v) for v in vals]
    return DiagState(
        u0=fields[0], u1=fields[1], um1=fields[2], gamma=c.gamma, time=float(t)
    )


def build(cfg: AnsatzConfig, t: float) -> PlasmaState:
    """The approximation as a genuine plasma state at time t.

    The carrier rides in the -1 characteristic component; complex
    conjugates are summed explicitly so the output is real to rounding.
    """
    return from_diagonal(build_diagonal(cfg, t))


def fourier_cutoff(
    f: SpectralField, centers: list[float], delta: float
) -> SpectralField:
    """Confine a fast field's spectrum to bands of half-width delta.

    Idempotent by construction.  Rejects band layouts that overlap, since
    a mode claimed by two harmonics has no well-defined amplitude.
    """
    if not delta > 0.0:
        raise ValueError("delta must be positive")
    cs = sorted(float(c) for c in centers)
    if len(cs) >= 2 and min(b - a for a, b in zip(cs, cs[1:])) < 2.0 * delta:
        raise ValueError("cutoff bands overlap; shrink delta or thin the centers")
    k = f.grid.wavenumbers
    keep = np.zeros(f.grid.n_points, dtype=bool)
    for c in cs:
        keep |= np.abs(k - c) <= delta
    return field_from_spectrum(f.grid, np.where(keep, f.spectrum, 0.0))
