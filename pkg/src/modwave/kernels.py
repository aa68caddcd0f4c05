"""Fourier-space interaction kernels of the characteristic system.

The quadratic and cubic couplings between the components (U0, U1, U-1)
are sums of separable terms: an outer multiplier at the output
wavenumber times one symbol factor per input.  This module stores those
term tables once and exposes them three ways: scalar kernel values for
single Fourier modes (`q_bilinear_out`, `n_cubic_out`), grid-space
operator forms used by the residual study and as an independent oracle
(`q_apply`, `n_apply`), and the closed-form bilinear kernels
(`b11_kernel`) together with the normal-form kernels built from them
(`normalform_kernel`).  `certificates` runs the cancellation and
boundedness checks that the error analysis rests on.

Conventions.  Kernel slots are written (k, k-ell, ell): output
wavenumber first, then the slot that couples to the carrier wave (its
component is always -1), then the free slot of component n.  Bilinear
kernels are symmetrized by averaging the two argument orders; cubic
ones over all six.  Component weights written "gamma-2" or "gamma-1"
acquire an extra -qhat^2(k) when the component is 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dispersion import DispersionParams, qhat, resonance_denominator
from .spectral import Grid1D, dealias_values, fft_coeff, ifft_coeff

__all__ = [
    "Mode",
    "WeightParams",
    "NontrivialResonanceError",
    "CertificateResult",
    "q_kernel",
    "q_bilinear_out",
    "n_kernel",
    "n_cubic_out",
    "q_apply",
    "n_apply",
    "b11_terms",
    "b11_kernel",
    "theta_weight",
    "projection",
    "normalform_kernel",
    "certificates",
]

_COMPONENTS = (0, 1, -1)


@dataclass(frozen=True)
class Mode:
    """A single Fourier mode of one characteristic component."""

    k: float
    component: int
    amp: complex = 1.0 + 0.0j

    def __post_init__(self) -> None:
        if self.component not in _COMPONENTS:
            raise ValueError(f"component must be one of {_COMPONENTS}")
        if not (np.isfinite(self.k) and np.isfinite(self.amp)):
            raise ValueError("mode wavenumber and amplitude must be finite")


@dataclass(frozen=True)
class WeightParams:
    """Parameters of the low-frequency weight and projections.

    `delta` splits wavenumber space at the scale of the carrier (callers
    keep it at or below k0/4, default k0/10); `eps` is the floor the
    weight takes at k=0.  The two are independent: delta must not shrink
    with eps.
    """

    delta: float
    eps: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.delta) and self.delta > 0.0):
            raise ValueError("delta must be positive and finite")
        if not (0.0 < self.eps < 1.0):
            raise ValueError("eps must lie in (0, 1)")


class NontrivialResonanceError(ArithmeticError):
    """A normal-form denominator vanished without the numerator doing so."""

    def __init__(self, kind: str, k: float, ell: float, numer: complex):
        self.kind = kind
        self.k = k
        self.ell = ell
        self.numer = numer
        super().__init__(
            f"nontrivial resonance in {kind} at k={k!r}, ell={ell!r}: "
            f"numerator {numer!r} does not vanish with the denominator"
        )


# ------------------------------------------------------------------ weights

def theta_weight(k, w: WeightParams):
    """Continuous even weight: eps at k=0, rising linearly to 1 at |k|=delta."""
    a = np.abs(np.asarray(k, dtype=np.float64))
    out = np.where(a > w.delta, 1.0, w.eps + (1.0 - w.eps) * a / w.delta)
    return out if out.shape else float(out)


def projection(which: str, k, delta: float):
    """Sharp complementary cutoffs: low = indicator(|k| <= delta), closed at delta."""
    if which not in ("low", "high"):
        raise ValueError("which must be 'low' or 'high'")
    if not delta > 0.0:
        raise ValueError("delta must be positive")
    a = np.abs(np.asarray(k, dtype=np.float64))
    low = np.where(a <= delta, 1.0, 0.0)
    out = low if which == "low" else 1.0 - low
    return out if out.shape else float(out)


# ------------------------------------------------------- component factors
# Each input slot of a term carries one of these symbol factors; `c` is the
# component index of the field placed in the slot, `k` its wavenumber.

def _f_sigma(c, k, p):
    return np.ones_like(np.asarray(k, dtype=np.float64))


def _f_qdiff(c, k, p):
    return c * qhat(k, p)


def _f_gam2(c, k, p):
    g = p.gamma - 2.0
    if c == 0:
        return g - qhat(k, p) ** 2
    return g * np.ones_like(np.asarray(k, dtype=np.float64))


def _f_gam1(c, k, p):
    g = p.gamma - 1.0
    if c == 0:
        return g - qhat(k, p) ** 2
    return g * np.ones_like(np.asarray(k, dtype=np.float64))


def _f_ik(c, k, p):
    return 1j * np.asarray(k, dtype=np.float64)


def _f_ik_q0(c, k, p):
    # derivative acting on the component-0 part of the velocity relation
    if c != 0:
        return np.zeros_like(np.asarray(k, dtype=np.float64)) * 1j
    return 1j * np.asarray(k, dtype=np.float64) * qhat(k, p) ** 2


def _f_ik_qsign(c, k, p):
    return 1j * np.asarray(k, dtype=np.float64) * c * qhat(k, p)


def _f_pois(c, k, p):
    kk = np.asarray(k, dtype=np.float64)
    return 1.0 / (1.0 + kk * kk)


def _q0_terms(p: DispersionParams):
    # (outer(k_out), f1, f2); the mean equation has exactly two couplings
    def out_a1(k):
        return 1.0 / qhat(k, p) ** 2

    def out_a2(k):
        return -(p.gamma - 1.0) / qhat(k, p) ** 2

    return ((out_a1, _f_qdiff, _f_ik_q0), (out_a2, _f_gam2, _f_ik_qsign))


def _qj_terms(j: int, p: DispersionParams):
    def q2(k):
        return qhat(k, p) ** 2

    return (
        (lambda k: -1.0 / (2.0 * q2(k)), _f_qdiff, _f_ik_q0),
        (lambda k: 0.5 * np.ones_like(np.asarray(k, dtype=np.float64)), _f_qdiff, _f_ik),
        (lambda k: 0.5 * np.ones_like(np.asarray(k, dtype=np.float64)), _f_sigma, _f_ik_qsign),
        (lambda k: (p.gamma - 1.0) / (2.0 * q2(k)), _f_gam2, _f_ik_qsign),
        (lambda k: j * 1j * np.asarray(k, dtype=np.float64) / (4.0 * qhat(k, p)), _f_qdiff, _f_qdiff),
        (lambda k: j / (2.0 * qhat(k, p)) * np.ones_like(np.asarray(k, dtype=np.float64)), _f_gam2, _f_ik),
        (
            lambda k: -j
            * 1j
            * np.asarray(k, dtype=np.float64)
            / (4.0 * qhat(k, p) * (1.0 + np.asarray(k, dtype=np.float64) ** 2)),
            _f_pois,
            _f_pois,
        ),
    )


def _q_kernel_ordered(j: int, c1: int, k1: float, c2: int, k2: float, p: DispersionParams) -> complex:
    k = k1 + k2
    terms = _q0_terms(p) if j == 0 else _qj_terms(j, p)
    total = 0.0 + 0.0j
    for outer, f1, f2 in terms:
        total += complex(outer(k)) * complex(f1(c1, k1, p)) * complex(f2(c2, k2, p))
    return total


def q_kernel(j: int, c1: int, k1: float, c2: int, k2: float, p: DispersionParams) -> complex:
    """Symmetrized bilinear kernel value for inputs (c1,k1), (c2,k2)."""
    if j not in _COMPONENTS:
        raise ValueError(f"output component must be one of {_COMPONENTS}")
    return 0.5 * (
        _q_kernel_ordered(j, c1, k1, c2, k2, p) + _q_kernel_ordered(j, c2, k2, c1, k1, p)
    )


def q_bilinear_out(j: int, a: Mode, b: Mode, p: DispersionParams) -> Mode:
    """Output mode of the quadratic coupling applied to two pure modes."""
    val = q_kernel(j, a.component, a.k, b.component, b.k, p)
    return Mode(k=a.k + b.k, component=j, amp=val * a.amp * b.amp)


# --------------------------------------------------------------- cubic part

def _n_outer_pois(j: int, k, p):
    kk = np.asarray(k, dtype=np.float64)
    return -j / (12.0 * qhat(kk, p)) * 1j * kk * (2.0 - kk * kk) / (1.0 + kk * kk) ** 2


def _n_outer_plain(j: int, k, p):
    kk = np.asarray(k, dtype=np.float64)
    return -j / (6.0 * qhat(kk, p)) * 1j * kk


def n_kernel(
    j: int,
    c1: int,
    k1: float,
    c2: int,
    k2: float,
    c3: int,
    k3: float,
    p: DispersionParams,
) -> complex:
    """Fully symmetrized cubic kernel; only j = +-1 equations carry one."""
    if j not in (1, -1):
        raise ValueError("cubic coupling exists only for components +1 and -1")
    k = k1 + k2 + k3
    total = complex(_n_outer_pois(j, k, p)) * complex(_f_pois(c1, k1, p)) * complex(
        _f_pois(c2, k2, p)
    ) * complex(_f_pois(c3, k3, p))
    total += complex(_n_outer_plain(j, k, p))
    # the gamma-1 line: average the slot-1 assignment; the remaining pair
    # enters through the derivative of its plain product, symmetric already
    trip = ((c1, k1, k2 + k3), (c2, k2, k1 + k3), (c3, k3, k1 + k2))
    s = 0.0 + 0.0j
    for c, kc, ksum in trip:
        s += complex(_f_gam1(c, kc, p)) * 1j * ksum
    total += j / (4.0 * qhat(k, p)) * s / 3.0
    return total


def n_cubic_out(j: int, a: Mode, b: Mode, c: Mode, p: DispersionParams) -> Mode:
    """Output mode of the cubic coupling applied to three pure modes."""
    val = n_kernel(j, a.component, a.k, b.component, b.k, c.component, c.k, p)
    return Mode(k=a.k + b.k + c.k, component=j, amp=val * a.amp * b.amp * c.amp)


# ------------------------------------------------------- grid operator forms
# The same term tables applied pseudo-spectrally to complex fields given as
# (u0, u1, um1) value triples.  Shared by the residual study and used in
# tests as the independent oracle for the scalar kernels.

def _apply_factor(factor, spectra, grid: Grid1D, p: DispersionParams) -> np.ndarray:
    k = grid.wavenumbers
    acc = np.zeros(grid.n_points, dtype=np.complex128)
    for c, spec in zip(_COMPONENTS, spectra):
        acc += np.asarray(factor(c, k, p), dtype=np.complex128) * spec
    return ifft_coeff(acc)


def q_apply(j: int, u, v, grid: Grid1D, p: DispersionParams) -> np.ndarray:
    """Quadratic coupling of two complex field triples, as grid values.

    `u` and `v` are (u0, u1, um1) triples of complex value arrays.  Every
    product is dealiased; the symmetrization averages the two orders.
    """
    if j not in _COMPONENTS:
        raise ValueError(f"output component must be one of {_COMPONENTS}")
    su = tuple(fft_coeff(np.asarray(f, dtype=np.complex128)) for f in u)
    sv = tuple(fft_coeff(np.asarray(f, dtype=np.complex128)) for f in v)
    k = grid.wavenumbers
    terms = _q0_terms(p) if j == 0 else _qj_terms(j, p)
    out = np.zeros(grid.n_points, dtype=np.complex128)
    for outer, f1, f2 in terms:
        prod = _apply_factor(f1, su, grid, p) * _apply_factor(f2, sv, grid, p)
        prod += _apply_factor(f1, sv, grid, p) * _apply_factor(f2, su, grid, p)
        spec = fft_coeff(dealias_values(grid, 0.5 * prod))
        out += ifft_coeff(np.asarray(outer(k), dtype=np.complex128) * spec)
    return out


def n_apply(j: int, u, v, w, grid: Grid1D, p: DispersionParams) -> np.ndarray:
    """Cubic coupling of three complex field triples, as grid values.

    Cubic products are formed as nested dealiased quadratic products.
    """
    if j not in (1, -1):
        raise ValueError("cubic coupling exists only for components +1 and -1")
    k = grid.wavenumbers
    spectra = tuple(
        tuple(fft_coeff(np.asarray(f, dtype=np.complex128)) for f in triple)
        for triple in (u, v, w)
    )

    def filtered(factor, i):
        return _apply_factor(factor, spectra[i], grid, p)

    def outer_apply(sym, vals):
        return ifft_coeff(np.asarray(sym, dtype=np.complex128) * fft_coeff(vals))

    pois = [filtered(_f_pois, i) for i in range(3)]
    plain = [filtered(_f_sigma, i) for i in range(3)]

    cubic_pois = dealias_values(grid, dealias_values(grid, pois[0] * pois[1]) * pois[2])
    out = outer_apply(_n_outer_pois(j, k, p), cubic_pois)

    cubic_plain = dealias_values(grid, dealias_values(grid, plain[0] * plain[1]) * plain[2])
    out += outer_apply(_n_outer_plain(j, k, p), cubic_plain)

    acc = np.zeros(grid.n_points, dtype=np.complex128)
    for first in range(3):
        rest = [i for i in range(3) if i != first]
        pair = dealias_values(grid, plain[rest[0]] * plain[rest[1]])
        dpair = ifft_coeff(1j * k * fft_coeff(pair))
        acc += dealias_values(grid, filtered(_f_gam1, first) * dpair)
    out += outer_apply(j / (4.0 * qhat(k, p)) / 3.0, acc)
    return out


# ------------------------------------------------------- closed-form kernels

def b11_terms(j: int, l: int, n: int, k: float, ell: float, p: DispersionParams):
    """Summands of the explicit bilinear kernel at slots (k, k-ell, ell).

    The slot coupling to the carrier sits at wavenumber k-ell with
    component -1; `l` labels which carrier harmonic multiplies the term
    and is validated but does not enter the value.  Exposed term by term
    because the asymptotics certificate inspects a single summand.
    """
    if j not in _COMPONENTS or n not in _COMPONENTS:
        raise ValueError(f"j and n must be in {_COMPONENTS}")
    if l not in (1, -1):
        raise ValueError("l must be +1 or -1")
    g = p.gamma
    qk = qhat(k, p)
    qm = qhat(k - ell, p)
    ql = qhat(ell, p)
    if j == 0 and n == 0:
        return (
            -1j * ell * qm * ql**2 / qk**2,
            (g - 1.0) * 1j * (k - ell) * qm * (g - 2.0 - ql**2) / qk**2,
        )
    if j == 0:
        return (
            -n * (g - 1.0) * (g - 2.0) * 1j * ell * ql / qk**2,
            (g - 1.0) * (g - 2.0) * 1j * (k - ell) * qm / qk**2,
        )
    if n == 0:
        return (
            1j * ell * qm * ql**2 / (2.0 * qk**2),
            -1j * k * qm / 2.0,
            -(g - 1.0) * 1j * (k - ell) * qm * (g - 2.0 - ql**2) / (2.0 * qk**2),
            j * (g - 2.0) * 1j * ell / (2.0 * qk),
            j * 1j * (k - ell) * (g - 2.0 - ql**2) / (2.0 * qk),
            -j * 1j * k / (2.0 * qk * (1.0 + k**2) * (1.0 + (k - ell) ** 2) * (1.0 + ell**2)),
        )
    return (
        -1j * k * qm / 2.0,
        n * 1j * k * ql / 2.0,
        n * (g - 1.0) * (g - 2.0) * 1j * ell * ql / (2.0 * qk**2),
        -j * n * 1j * k * qm * ql / (2.0 * qk),
        # the two transport pieces i*ell and i*(k-ell) merge to i*k; kept
        # merged so the k=0 cancellation is exact in floating point
        j * (g - 2.0) * 1j * k / (2.0 * qk),
        -(g - 1.0) * (g - 2.0) * 1j * (k - ell) * qm / (2.0 * qk**2),
        -j * 1j * k / (2.0 * qk * (1.0 + k**2) * (1.0 + (k - ell) ** 2) * (1.0 + ell**2)),
    )


def b11_kernel(j: int, l: int, n: int, k: float, ell: float, p: DispersionParams) -> complex:
    """Closed-form bilinear kernel; equals twice the symmetrized grid kernel."""
    return complex(sum(b11_terms(j, l, n, k, ell, p)))


# --------------------------------------------------------- normal-form side

_KINDS = ("k01", "k10", "k11")


def _nf_numerator(kind: str, j: int, l: int, n: int, k: float, ell: float,
                  w: WeightParams, p: DispersionParams) -> complex:
    proj = projection("low" if kind == "k01" else "high", k, w.delta)
    if proj == 0.0:
        return 0.0 + 0.0j
    b = b11_kernel(j, l, n, k, ell, p)
    if kind == "k01":
        fac = theta_weight(ell, w) / theta_weight(k, w)
    elif kind == "k10":
        # the weight with its floor removed vanishes linearly at ell = 0,
        # offsetting the resonance of the denominator near k = l*k0
        fac = (theta_weight(ell, w) - w.eps) / theta_weight(k, w)
    else:
        fac = 1.0
    return 1j * proj * b * fac


def normalform_kernel(
    kind: str,
    j: int,
    l: int,
    n: int,
    k: float,
    ell: float,
    w: WeightParams,
    p: DispersionParams,
    resonance_offset: float = 1e-6,
) -> complex:
    """Kernel of one of the three normal-form transforms.

    k01 removes low-frequency quadratic interactions (|k| <= delta), k10
    the carrier-paired ones and k11 the remaining high-frequency ones
    (|k| > delta); all divide by the three-wave denominator.  At an exact
    resonance the value is recovered by symmetric offset evaluation at
    k -+ resonance_offset when the numerator vanishes too (the
    numerator does vanish at every resonance the transform meets; that
    cancellation is what `certificates` pins down).  A non-vanishing
    numerator over a vanishing denominator raises
    NontrivialResonanceError.  For k10/k11 the offset slides ell with k
    so the carrier slot k-ell stays pinned.
    """
    if kind not in _KINDS:
        raise ValueError(f"kind must be one of {_KINDS}")
    numer = _nf_numerator(kind, j, l, n, k, ell, w, p)
    denom = resonance_denominator(j, n, k, ell, p)
    if abs(denom) >= 1e-12:
        return numer / denom
    if abs(numer) >= 1e-10:
        raise NontrivialResonanceError(kind, k, ell, numer)
    h = resonance_offset
    vals = []
    for sgn in (1.0, -1.0):
        ko = k + sgn * h
        lo = ell if kind == "k01" else ell + sgn * h
        no = _nf_numerator(kind, j, l, n, ko, lo, w, p)
        do = resonance_denominator(j, n, ko, lo, p)
        if abs(do) < 1e-12:
            raise NontrivialResonanceError(kind, ko, lo, no)
        vals.append(no / do)
    return 0.5 * (vals[0] + vals[1])


# ------------------------------------------------------------- certificates

@dataclass(frozen=True)
class CertificateResult:
    name: str
    passed: bool
    worst: float
    tol: float
    detail: str


def _cert_b_zero_origin(p: DispersionParams) -> CertificateResult:
    ells = np.linspace(0.05, 5.0, 100)
    worst = 0.0
    for ell in ells:
        for j in _COMPONENTS:
            for l in (1, -1):
                worst = max(worst, abs(b11_kernel(j, l, -1, 0.0, float(ell), p)))
    return CertificateResult(
        name="kernel zero at k=0",
        passed=worst <= 1e-13,
        worst=worst,
        tol=1e-13,
        detail="b_{j,l,-1}(0,-ell,ell) over 100-point ell sample, all j, l",
    )


def _cert_b_zero_second_harmonic(p: DispersionParams) -> CertificateResult:
    ells = np.linspace(0.05, 5.0, 100)
    worst = 0.0
    for ell in ells:
        for l in (1, -1):
            worst = max(worst, abs(b11_kernel(0, l, 1, 2.0 * float(ell), float(ell), p)))
    return CertificateResult(
        name="kernel zero at k=2*ell",
        passed=worst <= 1e-13,
        worst=worst,
        tol=1e-13,
        detail="b_{0,l,1}(2ell,ell,ell) over 100-point ell sample",
    )


def _cert_b_matches_q(p: DispersionParams) -> CertificateResult:
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(40):
        k = float(rng.uniform(-4.0, 4.0))
        ell = float(rng.uniform(-4.0, 4.0))
        j = int(rng.choice(_COMPONENTS))
        ncomp = int(rng.choice(_COMPONENTS))
        b = b11_kernel(j, 1, ncomp, k, ell, p)
        q = 2.0 * q_kernel(j, -1, k - ell, ncomp, ell, p)
        scale = max(1.0, abs(b))
        worst = max(worst, abs(b - q) / scale)
    return CertificateResult(
        name="closed form matches term table",
        passed=worst <= 1e-10,
        worst=worst,
        tol=1e-10,
        detail="b_{j,l,n}(k,k-ell,ell) vs 2*q_kernel((k-ell,-1),(ell,n)), 40 random points",
    )


def _cert_resonance_inequality(p: DispersionParams, k0: float, delta: float) -> CertificateResult:
    ks = np.concatenate([-np.linspace(1e-3 * delta, delta, 60), np.linspace(1e-3 * delta, delta, 60)])
    ells = np.linspace(k0 - delta, k0 + delta, 41)
    cmin = np.inf
    for j in _COMPONENTS:
        for ell in ells:
            d = np.abs(resonance_denominator(j, -1, ks, float(ell), p))
            cmin = min(cmin, float(np.min(d / np.abs(ks))))
    return CertificateResult(
        name="low-frequency resonance inequality",
        passed=cmin > 0.05,
        worst=cmin,
        tol=0.05,
        detail="min |D|/|k| for n=-1, |k| <= delta, ell within delta of k0",
    )


def _cert_n11_asymptote(p: DispersionParams, k0: float) -> CertificateResult:
    k = 1e3
    terms = b11_terms(0, 1, 0, k, k - k0, p)
    val = terms[1] / (1j * k0 * qhat(k0, p))
    target = -2.0 * (p.gamma - 1.0) / p.gamma
    worst = abs(val - target)
    return CertificateResult(
        name="high-k kernel asymptote",
        passed=worst <= 1e-3,
        worst=worst,
        tol=1e-3,
        detail=f"carrier-paired mean-kernel summand at k=1e3 vs limit {target:+.6f}",
    )


def _cert_k10_bounded(p: DispersionParams, k0: float, w: WeightParams) -> CertificateResult:
    # the denominator vanishes as k crosses l*k0; the vanishing weight
    # factor must keep the kernel bounded on a grid straddling it
    worst = 0.0
    for l in (1, -1):
        base = l * k0
        for dk in np.linspace(-w.delta, w.delta, 201):
            if dk == 0.0:
                continue
            k = base + float(dk)
            ell = k - base
            for j in (1, -1):
                for ncomp in _COMPONENTS:
                    try:
                        v = normalform_kernel("k10", j, l, ncomp, k, ell, w, p)
                    except NontrivialResonanceError:
                        return CertificateResult(
                            name="carrier-paired kernel bounded",
                            passed=False,
                            worst=np.inf,
                            tol=1e3,
                            detail="nontrivial resonance encountered",
                        )
                    worst = max(worst, abs(v))
    return CertificateResult(
        name="carrier-paired kernel bounded",
        passed=worst <= 1e3,
        worst=worst,
        tol=1e3,
        detail="sup |n10| for k within delta of +-k0, carrier slot pinned",
    )


def _cert_k01_bounded(p: DispersionParams, k0: float, w: WeightParams) -> CertificateResult:
    worst = 0.0
    ks = np.linspace(-w.delta, w.delta, 81)
    for ell0 in (k0, -k0):
        for dl in (-0.5 * w.delta, 0.0, 0.5 * w.delta):
            ell = ell0 + dl
            for j in _COMPONENTS:
                for ncomp in _COMPONENTS:
                    for k in ks:
                        if abs(resonance_denominator(j, ncomp, float(k), ell, p)) < 1e-12:
                            continue
                        v = normalform_kernel("k01", j, 1, ncomp, float(k), ell, w, p)
                        worst = max(worst, float(theta_weight(k, w)) * abs(v))
    return CertificateResult(
        name="weighted low-frequency kernel bounded",
        passed=worst <= 1e3,
        worst=worst,
        tol=1e3,
        detail="sup |theta(k) n01(k,k-ell,ell)| for |k| <= delta, ell near +-k0",
    )


def certificates(p: DispersionParams, k0: float, delta: float | None = None,
                 eps: float = 0.1) -> tuple[CertificateResult, ...]:
    """Run the full certificate battery for one (gamma, k0)."""
    if not k0 > 0.0:
        raise ValueError("k0 must be positive")
    d = 0.1 * k0 if delta is None else delta
    w = WeightParams(delta=d, eps=eps)
    return (
        _cert_b_zero_origin(p),
        _cert_b_zero_second_harmonic(p),
        _cert_b_matches_q(p),
        _cert_resonance_inequality(p, k0, d),
        _cert_n11_asymptote(p, k0),
        _cert_k10_bounded(p, k0, w),
        _cert_k01_bounded(p, k0, w),
    )
