"""Closed-form dephasing of a qubit coupled to a bath of (possibly
non-Hermitian) harmonic modes.

Everything here is exact algebra: the displacement amplitude xi per mode,
the decoherence exponent Gamma(t) for a discrete bath, and the induced map
on the qubit density matrix.  Units: hbar = k_B = 1, temperatures share
frequency units.
"""

from __future__ import annotations

import cmath
import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

TWO_PI = 2.0 * math.pi


def coth(x: float) -> float:
    """Stable coth for x > 0 (series below 1e-4 to avoid cancellation)."""
    if x < 1e-4:
        return 1.0 / x + x / 3.0 - x**3 / 45.0
    return 1.0 / math.tanh(x)


def thermal_coth(omega: float, temperature: float) -> float:
    """coth(omega / 2T); temperature 0 gives the zero-T limit, exactly 1."""
    if temperature == 0.0:
        return 1.0
    return coth(omega / (2.0 * temperature))


@dataclass(frozen=True)
class Coupling:
    """Complex system-bath coupling stored in polar form.

    The polar form is the source of truth: the phase is a first-class
    control parameter.  Cartesian parts are derived.
    """

    magnitude: float
    phase: float = 0.0

    def __post_init__(self):
        if self.magnitude < 0:
            raise ValueError(f"coupling magnitude must be >= 0, got {self.magnitude}")
        object.__setattr__(self, "phase", self.phase % TWO_PI)

    @property
    def real(self) -> float:
        return self.magnitude * math.cos(self.phase)

    @property
    def imag(self) -> float:
        return self.magnitude * math.sin(self.phase)

    @property
    def as_complex(self) -> complex:
        return complex(self.real, self.imag)

    @classmethod
    def from_complex(cls, g: complex) -> "Coupling":
        return cls(abs(g), cmath.phase(g) % TWO_PI)


@dataclass(frozen=True)
class BathMode:
    omega: float
    coupling: Coupling

    def __post_init__(self):
        if self.omega <= 0:
            raise ValueError(f"mode frequency must be > 0, got {self.omega}")


@dataclass(frozen=True)
class DiscreteBath:
    """Ordered set of oscillator modes with a temperature and a
    non-Hermiticity strength tau (dimensionless, any sign)."""

    modes: tuple[BathMode, ...]
    temperature: float = 0.0
    tau: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple(self.modes))
        if not self.modes:
            raise ValueError("bath needs at least one mode")
        if self.temperature < 0:
            raise ValueError(f"temperature must be >= 0, got {self.temperature}")


@dataclass(frozen=True)
class QubitSystem:
    """Free qubit splitting omega0.  It drops out of the dephasing exponent
    (interaction picture) but is kept for completeness."""

    omega0: float

    def __post_init__(self):
        if self.omega0 <= 0:
            raise ValueError(f"omega0 must be > 0, got {self.omega0}")


class QubitState:
    """2x2 density matrix, validated on construction."""

    def __init__(self, rho):
        rho = np.asarray(rho, dtype=complex)
        if rho.shape != (2, 2):
            raise ValueError(f"expected a 2x2 matrix, got shape {rho.shape}")
        if np.max(np.abs(rho - rho.conj().T)) > 1e-12:
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(rho) - 1.0) > 1e-12:
            raise ValueError("density matrix trace differs from 1")
        if np.linalg.eigvalsh(rho).min() < -1e-12:
            raise ValueError("density matrix has a negative eigenvalue")
        self.rho = rho

    def __repr__(self):
        return f"QubitState({self.rho!r})"


def big_omega(omega: float, tau: float) -> float:
    """Shifted mode frequency omega * sqrt(1 + 4 tau^2)."""
    if omega <= 0:
        raise ValueError(f"omega must be > 0, got {omega}")
    return omega * math.sqrt(1.0 + 4.0 * tau * tau)


def xi_hermitian(g: Coupling, omega: float, t: float) -> complex:
    """Displacement amplitude of the ordinary (tau = 0) spin-boson model:
    (g/omega) * (1 - exp(i omega t))."""
    if omega <= 0:
        raise ValueError(f"omega must be > 0, got {omega}")
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    return g.as_complex / omega * (1.0 - cmath.exp(1j * omega * t))


def xi_non_hermitian(g: Coupling, omega: float, tau: float, t: float) -> complex:
    """Displacement amplitude with non-Hermiticity tau.

    xi = [8 omega sin^2(Omega t/2)/Omega^2] (g/4 + tau^2 Re g)
         - i g sin(Omega t)/Omega,   Omega = omega sqrt(1+4 tau^2).

    Reduces to xi_hermitian at tau = 0 and vanishes at t = 0.
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    Om = big_omega(omega, tau)
    gz = g.as_complex
    s2 = math.sin(0.5 * Om * t) ** 2
    return (8.0 * omega * s2 / Om**2) * (0.25 * gz + tau * tau * g.real) - 1j * gz * math.sin(Om * t) / Om


def gamma_discrete(bath: DiscreteBath, t: float) -> float:
    """Decoherence exponent Gamma(t) for a discrete bath, summed mode by mode
    in the three-term trigonometric form (fast path)."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    tau = bath.tau
    tau2 = tau * tau
    total = 0.0
    for mode in bath.modes:
        w = mode.omega
        g = mode.coupling
        Om = big_omega(w, tau)
        sO = math.sin(Om * t)
        s2 = math.sin(0.5 * Om * t) ** 2
        g2 = g.magnitude**2
        term = (
            32.0 * tau2 * w * g.real * g.imag * sO * s2 / Om**3
            + 8.0 * w * w * s2 * s2 * (g2 + 8.0 * tau2 * g.real**2 * (1.0 + 2.0 * tau2)) / Om**4
            + 2.0 * g2 * sO * sO / Om**2
        )
        total += term * thermal_coth(w, bath.temperature)
    return total


def gamma_discrete_amplitude(bath: DiscreteBath, t: float) -> float:
    """Same exponent via the amplitude route, 2 sum_k |xi_k|^2 coth(w_k/2T).

    Kept as an independent cross-check of gamma_discrete; the two agree to
    machine precision (algebraic identity).
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    total = 0.0
    for mode in bath.modes:
        xi = xi_non_hermitian(mode.coupling, mode.omega, bath.tau, t)
        total += 2.0 * abs(xi) ** 2 * thermal_coth(mode.omega, bath.temperature)
    return total


def coherence_factor(bath: DiscreteBath, t: float) -> float:
    """exp(-Gamma(t)); 1 at t = 0, underflows to 0 for huge exponents."""
    return math.exp(-gamma_discrete(bath, t))


def evolve_qubit(initial: QubitState, gamma: float) -> QubitState:
    """Pure-dephasing map: populations fixed, coherences scaled by e^-gamma."""
    if gamma < 0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    d = math.exp(-gamma)
    rho = initial.rho.copy()
    rho[0, 1] *= d
    rho[1, 0] *= d
    return QubitState(rho)


def load_bath_csv(
    path: str | Path, temperature: float = 0.0, tau: float = 0.0
) -> DiscreteBath:
    """Read a discrete bath from CSV with header ``omega,g_abs,theta``."""
    modes = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        expected = {"omega", "g_abs", "theta"}
        if reader.fieldnames is None or not expected.issubset(reader.fieldnames):
            raise ValueError(
                f"modes file needs columns {sorted(expected)}, got {reader.fieldnames}"
            )
        for row in reader:
            modes.append(
                BathMode(
                    omega=float(row["omega"]),
                    coupling=Coupling(float(row["g_abs"]), float(row["theta"])),
                )
            )
    return DiscreteBath(tuple(modes), temperature=temperature, tau=tau)
