"""Statistical-field quantities on the dust background.

The phase is linear in proper time, S = sign * m c^2 tau, so it is handled in
closed form; only the amplitude R(tau) goes through the d'Alembertian.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .dust import DustSolution, amplitude, amplitude_constant, metric_of
from .geometry import EinsteinComponents, dalembertian

__all__ = [
    "PhaseField",
    "AmplitudeSample",
    "four_velocity_norm",
    "stress_energy_Q",
    "box_amplitude",
    "hj_residual",
    "psi",
    "newtonian_levels",
]


@dataclass(frozen=True)
class PhaseField:
    sign: int = 1
    m: float = 1.0
    c: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        for name in ("m", "c", "hbar"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")

    def S(self, tau: float) -> float:
        return self.sign * self.m * self.c**2 * tau

    @property
    def dS_dtau(self) -> float:
        return self.sign * self.m * self.c**2


@dataclass(frozen=True)
class AmplitudeSample:
    psi: complex
    R: float
    S: float


def four_velocity_norm(p: PhaseField) -> float:
    """u_mu u^mu = g^00 (d_tau S)^2 / m^2 in the comoving gauge."""
    return p.dS_dtau**2 / (p.c**2 * p.m**2)


def stress_energy_Q(p: PhaseField, rho: float) -> EinsteinComponents:
    """T_mn = rho u_m u_n with u_m = d_m S / m, in the x^0 = c tau basis."""
    if rho < 0.0:
        raise ValueError("density must be non-negative")
    u0 = p.dS_dtau / (p.m * p.c)
    return EinsteinComponents(G00=rho * u0 * u0, G01=0.0, G11=0.0, G22=0.0, G33=0.0)


def box_amplitude(p: PhaseField, sol: DustSolution, r: float, tau: float) -> float:
    k = amplitude_constant(sol)
    return dalembertian(metric_of(sol, p.c), lambda rj, tj: k / tj, r, tau)


def hj_residual(p: PhaseField, sol: DustSolution, V: float, r: float, tau: float) -> float:
    """-hbar^2/(2 m R) box R + V - m c^2/2 + grad S . grad S / (2m)."""
    R = amplitude(sol, tau)
    box = box_amplitude(p, sol, r, tau)
    grad_s_sq = p.m**2 * four_velocity_norm(p)
    return -(p.hbar**2) / (2.0 * p.m * R) * box + V - 0.5 * p.m * p.c**2 + grad_s_sq / (2.0 * p.m)


def psi(p: PhaseField, sol: DustSolution, tau: float) -> tuple[AmplitudeSample, AmplitudeSample]:
    """Particle and antiparticle amplitudes R(tau) exp(-/+ i m c^2 tau / hbar)."""
    R = amplitude(sol, tau)
    action = p.m * p.c**2 * tau
    phase = cmath.exp(1j * action / p.hbar)
    particle = AmplitudeSample(R * phase.conjugate(), R, -action)
    antiparticle = AmplitudeSample(R * phase, R, action)
    return particle, antiparticle


def newtonian_levels(G_newton: float, M: float, m: float, hbar: float, n_max: int) -> list[float]:
    """Hydrogen-like spectrum of the -G M m / r potential, n = 1..n_max."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    for name, value in (("G_newton", G_newton), ("M", M), ("m", m), ("hbar", hbar)):
        if not value > 0.0:
            raise ValueError(f"{name} must be positive")
    e1 = -(G_newton**2) * M**2 * m**3 / (2.0 * hbar**2)
    return [e1 / (n * n) for n in range(1, n_max + 1)]
