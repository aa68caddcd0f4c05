"""Periodic pseudospectral toolbox on a uniform one-dimensional grid.

Conventions, fixed once for the whole package:

* grid points ``x_i = i * L / n`` for ``i = 0 .. n-1`` (left endpoint
  included, right endpoint excluded),
* discrete wavenumbers ``k_m = 2*pi*m / L`` with integer ``m`` running over
  ``{-n/2 + 1, ..., n/2}``; the Nyquist mode is stored with the positive
  sign ``+n/2``,
* the forward transform carries the ``1/n`` factor, so spectrum entries are
  the Fourier coefficients of the trigonometric interpolant: the field
  ``exp(i k_m x)`` has spectrum 1 at ``k_m`` and 0 elsewhere.

Fields are real-valued on the grid; the complex spectrum is derived data.
Anything that manipulates complex mode amplitudes directly (interaction
kernel oracles, residual bookkeeping) works on raw numpy arrays with the
module-level helpers instead of going through `SpectralField`.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Grid1D",
    "SpectralField",
    "make_grid",
    "field_from_values",
    "field_from_spectrum",
    "apply_multiplier",
    "dealias",
    "norm_hs",
    "fft_coeff",
    "ifft_coeff",
    "dealias_values",
    "product_dealiased",
    "write_field_csv",
    "write_spectrum_csv",
]


@dataclass(frozen=True)
class Grid1D:
    """Uniform periodic grid on ``[0, length)``.

    ``n_points`` must be a power of two and at least 16 so that transform
    sizes stay fast and the two-thirds dealias cut is unambiguous.
    """

    n_points: int
    length: float

    def __post_init__(self) -> None:
        n = self.n_points
        if n < 16 or (n & (n - 1)) != 0:
            raise ValueError(f"n_points must be a power of two >= 16, got {n}")
        if not (self.length > 0.0 and np.isfinite(self.length)):
            raise ValueError(f"length must be positive and finite, got {self.length}")

    @functools.cached_property
    def x(self) -> np.ndarray:
        return np.arange(self.n_points) * (self.length / self.n_points)

    @functools.cached_property
    def wavenumbers(self) -> np.ndarray:
        """Wavenumbers in FFT layout, Nyquist stored as ``+n/2`` times ``2*pi/L``."""
        n = self.n_points
        m = np.fft.fftfreq(n, d=1.0 / n)
        m[n // 2] = n // 2  # fftfreq puts -n/2 here; the convention is +n/2
        m.setflags(write=False)
        return m * (2.0 * np.pi / self.length)

    @functools.cached_property
    def spacing(self) -> float:
        return self.length / self.n_points

    @functools.cached_property
    def dealias_keep(self) -> np.ndarray:
        """Boolean mask of modes kept by the two-thirds rule."""
        kmax = np.pi * self.n_points / self.length
        keep = np.abs(self.wavenumbers) <= (2.0 / 3.0) * kmax * (1.0 + 1e-12)
        keep.setflags(write=False)
        return keep


def make_grid(n_points: int, length: float) -> Grid1D:
    """Validating constructor for `Grid1D`."""
    return Grid1D(n_points=int(n_points), length=float(length))


class SpectralField:
    """Real field sampled on a `Grid1D`, with its spectrum derived on demand.

    The value array is the canonical representation.  Transforming to the
    spectrum and back reproduces the values to 1e-13 relative; the spectrum
    of a real field satisfies the Hermitian symmetry
    ``F(-k) == conj(F(k))`` up to rounding.
    """

    __slots__ = ("grid", "values", "_spectrum")

    def __init__(self, grid: Grid1D, values: np.ndarray):
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (grid.n_points,):
            raise ValueError(
                f"values shape {values.shape} does not match grid ({grid.n_points},)"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("field values must be finite")
        values = values.copy()
        values.setflags(write=False)
        self.grid = grid
        self.values = values
        self._spectrum = None

    @property
    def spectrum(self) -> np.ndarray:
        if self._spectrum is None:
            spec = np.fft.fft(self.values) / self.grid.n_points
            spec.setflags(write=False)
            self._spectrum = spec
        return self._spectrum

    def __repr__(self) -> str:  # pragma: no cover
        return (
            f"SpectralField(n={self.grid.n_points}, L={self.grid.length:g}, "
            f"max|f|={np.max(np.abs(self.values)):.3e})"
        )


def field_from_values(grid: Grid1D, values: np.ndarray) -> SpectralField:
    return SpectralField(grid, values)


def field_from_spectrum(grid: Grid1D, spectrum: np.ndarray) -> SpectralField:
    """Build the field with the given Fourier coefficients.

    The coefficients must be Hermitian-symmetric up to rounding; the
    (machine-size) imaginary remainder of the inverse transform is dropped.
    """
    spectrum = np.asarray(spectrum, dtype=np.complex128)
    if spectrum.shape != (grid.n_points,):
        raise ValueError("spectrum shape does not match grid")
    return SpectralField(grid, np.fft.ifft(spectrum * grid.n_points).real)


# Raw-array transforms with the same 1/n convention.  Complex input is
# allowed here; these are the building blocks for kernel oracles and for
# hot loops that avoid SpectralField construction per stage.

def fft_coeff(values: np.ndarray) -> np.ndarray:
    values = np.asarray(values)
    return np.fft.fft(values) / values.shape[-1]


def ifft_coeff(spectrum: np.ndarray) -> np.ndarray:
    spectrum = np.asarray(spectrum)
    return np.fft.ifft(spectrum * spectrum.shape[-1])


def dealias_values(grid: Grid1D, values: np.ndarray) -> np.ndarray:
    """Two-thirds-rule projection of a (possibly complex) value array."""
    spec = fft_coeff(values)
    spec[~grid.dealias_keep] = 0.0
    out = ifft_coeff(spec)
    return out if np.iscomplexobj(values) else out.real


def product_dealiased(grid: Grid1D, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Pointwise product followed by the two-thirds projection."""
    return dealias_values(grid, a * b)


def apply_multiplier(f: SpectralField, symbol) -> SpectralField:
    """Apply a Fourier multiplier ``symbol(k)`` to a field.

    ``symbol`` maps wavenumber arrays to complex factors (scalar callables
    are vectorized).  For a real result the symbol must satisfy
    ``symbol(-k) == conj(symbol(k))``; the inverse transform's imaginary
    remainder, at rounding size for such symbols, is dropped.
    """
    k = f.grid.wavenumbers
    with np.errstate(divide="ignore", invalid="ignore"):
        sym = np.asarray(symbol(k), dtype=np.complex128)
    if sym.shape == ():
        sym = np.full(k.shape, complex(sym))
    if sym.shape != k.shape:
        sym = np.asarray([symbol(kk) for kk in k], dtype=np.complex128)
    if not np.all(np.isfinite(sym)):
        raise ValueError("multiplier symbol produced non-finite values")
    return field_from_spectrum(f.grid, sym * f.spectrum)


def dealias(f: SpectralField) -> SpectralField:
    """Zero every mode with ``|k| > (2/3) k_max``; low modes are untouched.

    The output's spectrum is the masked input spectrum itself (not a
    re-transform), so zeroed modes are exactly zero and surviving modes are
    bit-identical to the input's.
    """
    spec = f.spectrum.copy()
    spec[~f.grid.dealias_keep] = 0.0
    out = field_from_spectrum(f.grid, spec)
    spec.setflags(write=False)
    out._spectrum = spec
    return out


def norm_hs(f: SpectralField, s: float) -> float:
    """Sobolev norm ``sqrt(L * sum_k |F(k)|^2 (1 + k^2)^s)``, ``s >= 0``.

    With this normalization ``norm_hs(sin, 0) == sqrt(pi)`` on ``[0, 2*pi)``.
    """
    if s < 0:
        raise ValueError(f"Sobolev index must be nonnegative, got {s}")
    k = f.grid.wavenumbers
    weights = (1.0 + k * k) ** s
    return float(np.sqrt(f.grid.length * np.sum(np.abs(f.spectrum) ** 2 * weights)))


def write_field_csv(f: SpectralField, path) -> None:
    """Write ``x,value`` rows; floats in full round-trip precision."""
    data = np.column_stack([f.grid.x, f.values])
    np.savetxt(path, data, fmt="%.17e", delimiter=",", header="x,value", comments="")


def write_spectrum_csv(f: SpectralField, path) -> None:
    """Write ``k,re,im`` rows sorted by wavenumber."""
    k = f.grid.wavenumbers
    order = np.argsort(k)
    spec = f.spectrum[order]
    data = np.column_stack([k[order], spec.real, spec.imag])
    np.savetxt(path, data, fmt="%.17e", delimiter=",", header="k,re,im", comments="")
