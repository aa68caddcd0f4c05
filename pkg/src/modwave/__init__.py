"""Spectral workbench for slow-modulation dynamics of ion acoustic waves.

The package has three layers.  The bottom layer (`spectral`, `dispersion`)
provides a periodic pseudospectral toolbox and the ion acoustic dispersion
relation.  The middle layer (`plasma`, `diagonal`, `kernels`) integrates the
full pressure-driven Euler-Poisson system, moves between physical and
characteristic variables, and evaluates the polarized interaction kernels of
the characteristic form, including their normal-form quotients.  The top
layer (`envelope`, `ansatz`, `residual`, `experiments`) assembles the cubic
Schroedinger modulation equation, builds wave-packet approximations, measures
their residuals, and runs the end-to-end validation experiments.
"""

__version__ = "0.1.0"
