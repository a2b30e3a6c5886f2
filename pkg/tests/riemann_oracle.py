"""Brute-force midpoint-rule oracle for the continuum integrals.

Deliberately independent of the adaptive engine: a uniform grid over
[0, 60*cutoff], optionally Richardson-checked by doubling the point count.
"""

import numpy as np

from ptbath.continuum import gamma_integrand_hermitian, gamma_integrand_nh


def riemann_gamma_nh(spec, t, n=2_000_000):
    hi = 60.0 * spec.cutoff
    w = (np.arange(n) + 0.5) * (hi / n)
    return float(gamma_integrand_nh(w, spec, t).sum() * (hi / n))


def riemann_gamma_hermitian(amplitude, cutoff, temperature, t, n=2_000_000):
    hi = 60.0 * cutoff
    w = (np.arange(n) + 0.5) * (hi / n)
    return float(gamma_integrand_hermitian(w, amplitude, cutoff, temperature, t).sum() * (hi / n))
