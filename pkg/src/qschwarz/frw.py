"""Robertson-Walker reading of the G = 0 dust solution.

With chi = F(r)^(2/3) the metric becomes c^2 dtau^2 - a(tau)^2 [dchi^2 +
chi^2 dOmega^2] with a = tau^(2/3) and flat spatial sections.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from . import jets
from .dust import DustSolution, metric_of
from .errors import DomainError, SingularMetric, SingularPoint
from .geometry import metric_jets, slice_ricci_scalar
from .profiles import Profile, eval_jet, evaluate

__all__ = [
    "FrwView",
    "frw_view",
    "chi_of_r",
    "verify_transform",
    "hubble",
    "hubble_paper_claim",
    "HUBBLE_CONVENTIONS",
    "spatial_curvature",
    "induced_slice_curvature",
]

# log-derivative exponents: a = tau^(2/3); the printed prefactor R(tau) = tau^(4/3)
HUBBLE_CONVENTIONS = {"scale_factor": 2.0 / 3.0, "paper_R": 4.0 / 3.0}


@dataclass(frozen=True)
class FrwView:
    a_of_tau: Callable[[float], float]
    k: float = 0.0


def _require_g_zero(sol: DustSolution, r: float) -> None:
    g = eval_jet(sol.G, jets.coord_r(r))
    if g.val != 0.0 or g.d_r != 0.0 or g.d_rr != 0.0:
        raise DomainError("the Robertson-Walker reduction needs G(r) = 0")


def frw_view(sol: DustSolution) -> FrwView:
    if not sol.G.is_constant or evaluate(sol.G, 0.0) != 0.0:
        raise DomainError("the Robertson-Walker reduction needs G(r) = 0")
    q = sol.exponent / 2.0
    return FrwView(a_of_tau=lambda tau: tau**q, k=0.0)


def chi_of_r(F: Profile, r: float) -> float:
    f = evaluate(F, r)
    if not f > 0.0:
        raise DomainError(f"chi = F^(2/3) needs F(r) > 0, got F({r!r}) = {f!r}")
    return f ** (2.0 / 3.0)


def verify_transform(sol: DustSolution, r: float, tau: float) -> float:
    """Residual of the change of radial coordinate r -> chi = F^(2/3).

    Returns max(|e^w - tau^(4/3) chi'^2|, |e^v - tau^(4/3) chi^2|).
    """
    _require_g_zero(sol, r)
    if not tau > 0.0:
        raise SingularPoint(f"comoving metric is singular at tau = {tau!r}")
    try:
        _, _, ew, ev = metric_jets(metric_of(sol), r, tau)
    except SingularMetric as exc:
        raise SingularPoint(str(exc)) from exc
    F = eval_jet(sol.F, jets.coord_r(r))
    if not F.val > 0.0:
        raise SingularPoint(f"F({r!r}) = {F.val!r} is not positive")
    chi = jets.pow_const(F, 2.0 / 3.0)
    scale = tau ** (4.0 / 3.0)
    radial = abs(ew.val - scale * chi.d_r * chi.d_r)
    angular = abs(ev.val - scale * chi.val * chi.val)
    return max(radial, angular)


def hubble(tau: float, convention: str = "scale_factor") -> float:
    """Logarithmic expansion rate of a power law tau^q: q / tau.

    ``scale_factor`` uses a = tau^(2/3); ``paper_R`` uses the printed
    prefactor R(tau) = tau^(4/3).
    """
    if not tau > 0.0:
        raise DomainError(f"Hubble rate needs tau > 0, got {tau!r}")
    try:
        q = HUBBLE_CONVENTIONS[convention]
    except KeyError:
        raise ValueError(f"unknown Hubble convention {convention!r}") from None
    return q / tau


def hubble_paper_claim(tau: float) -> float:
    if not tau > 0.0:
        raise DomainError(f"Hubble rate needs tau > 0, got {tau!r}")
    return 1.0 / tau


def spatial_curvature(sol: DustSolution, chi: float) -> float:
    """Ricci scalar of dchi^2 / (1 - k chi^2) + chi^2 dOmega^2 for the solution's k."""
    if not chi > 0.0:
        raise DomainError(f"chi must be positive, got {chi!r}")
    k = frw_view(sol).k
    return slice_ricci_scalar(
        lambda x: 1.0 / (1.0 - k * x * x),
        lambda x: x * x,
        chi,
    )


def induced_slice_curvature(sol: DustSolution, r: float, tau: float) -> float:
    """Ricci scalar of the comoving slice e^w dr^2 + e^v dOmega^2 at fixed tau."""
    metric = metric_of(sol)
    tj = jets.lift_const(tau)
    try:
        return slice_ricci_scalar(
            lambda x: jets.exp(metric.w_of(x, tj)),
            lambda x: jets.exp(metric.v_of(x, tj)),
            r,
        )
    except SingularMetric as exc:
        raise SingularPoint(str(exc)) from exc
