"""The comoving dust family: e^v = [F(r) tau + G(r)]^p, e^w = e^v v'^2 / 4."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import jets
from .errors import DomainError, SingularMetric, SingularPoint
from .geometry import EinsteinComponents, MetricAnsatz, einstein_tensor, explicit_residuals
from .jets import Jet2
from .profiles import Profile, eval_jet, parse

__all__ = [
    "DustSolution",
    "CurvatureReport",
    "FamilyReport",
    "metric_of",
    "density",
    "amplitude",
    "amplitude_constant",
    "verify_family",
]

EXPONENT = 4.0 / 3.0


@dataclass(frozen=True)
class DustSolution:
    F: Profile
    G: Profile = field(default_factory=lambda: parse("0"))
    exponent: float = EXPONENT
    G_newton: float = 1.0
    m: float = 1.0
    N: float = 1.0

    def __post_init__(self):
        for name in ("G_newton", "m", "N"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive")

    @classmethod
    def from_strings(cls, F: str, G: str = "0", **kwargs) -> "DustSolution":
        return cls(parse(F), parse(G), **kwargs)


def _bracket_jets(sol: DustSolution, rj: Jet2, tj: Jet2) -> tuple[Jet2, Jet2]:
    """[F tau + G] and its r-derivative [F' tau + G'], each as a full jet."""
    F = eval_jet(sol.F, rj)
    dF = eval_jet(sol.F.derivative, rj)
    G = eval_jet(sol.G, rj)
    dG = eval_jet(sol.G.derivative, rj)
    return F * tj + G, dF * tj + dG


def _v(sol: DustSolution, rj: Jet2, tj: Jet2) -> Jet2:
    X, _ = _bracket_jets(sol, rj, tj)
    return sol.exponent * jets.ln(X)


def _w(sol: DustSolution, rj: Jet2, tj: Jet2) -> Jet2:
    X, dX = _bracket_jets(sol, rj, tj)
    v = sol.exponent * jets.ln(X)
    # v' built from F' and G' so that w keeps full second-order accuracy
    dv = sol.exponent * dX / X
    return v + jets.ln(dv * dv / 4.0)


def metric_of(sol: DustSolution, c: float = 1.0) -> MetricAnsatz:
    return MetricAnsatz(
        w_of=lambda r, tau: _w(sol, r, tau),
        v_of=lambda r, tau: _v(sol, r, tau),
        c=c,
    )


def density(sol: DustSolution, r: float, tau: float) -> float:
    """rho = FF' / (6 pi G [F tau + G][F' tau + G'])."""
    rj = jets.lift_const(r)
    try:
        F = eval_jet(sol.F, rj).val
        dF = eval_jet(sol.F.derivative, rj).val
        G = eval_jet(sol.G, rj).val
        dG = eval_jet(sol.G.derivative, rj).val
    except (DomainError, ZeroDivisionError) as exc:
        raise SingularPoint(f"profiles undefined at r={r!r}: {exc}") from exc
    den = (F * tau + G) * (dF * tau + dG)
    if den == 0.0 or not math.isfinite(den):
        raise SingularPoint(f"density denominator vanishes at r={r!r}, tau={tau!r}")
    return F * dF / (6.0 * math.pi * sol.G_newton * den)


def amplitude_constant(sol: DustSolution) -> float:
    return sol.N * math.sqrt(1.0 / (6.0 * math.pi * sol.m * sol.G_newton))


def amplitude(sol: DustSolution, tau: float) -> float:
    """R(tau) = N sqrt(1 / (6 pi m G)) / tau."""
    if tau == 0.0:
        raise SingularPoint("amplitude is singular at tau = 0")
    return amplitude_constant(sol) / tau


@dataclass(frozen=True)
class CurvatureReport:
    r: float
    tau: float
    rho: float | None = None
    residual_11: float | None = None
    residual_12_printed: float | None = None
    residual_13: float | None = None
    residual_14: float | None = None
    residual_14_printed: float | None = None
    einstein: EinsteinComponents | None = None
    error: str | None = None

    @property
    def G01(self) -> float | None:
        return None if self.einstein is None else self.einstein.G01


CHECKED = ("residual_11", "G01", "residual_13", "residual_14")
DISCREPANT = ("residual_12_printed", "residual_14_printed")


@dataclass(frozen=True)
class FamilyReport:
    rows: list[CurvatureReport]
    max_abs: dict[str, float]
    errors: int

    def passed(self, tol: float) -> bool:
        return self.errors == 0 and all(self.max_abs[k] < tol for k in CHECKED)


def _report_point(sol: DustSolution, metric: MetricAnsatz, r: float, tau: float) -> CurvatureReport:
    try:
        rho = density(sol, r, tau)
        res = explicit_residuals(metric, rho, sol.G_newton, r, tau)
        ein = einstein_tensor(metric, r, tau)
    except SingularPoint as exc:
        kind = "SingularMetric" if isinstance(exc, SingularMetric) else "SingularPoint"
        return CurvatureReport(r, tau, error=f"{kind}: {exc}")
    return CurvatureReport(
        r,
        tau,
        rho=rho,
        residual_11=res.residual_11,
        residual_12_printed=res.residual_12_printed,
        residual_13=res.residual_13,
        residual_14=res.residual_14,
        residual_14_printed=res.residual_14_printed,
        einstein=ein,
    )


def verify_family(
    sol: DustSolution,
    r_values: Sequence[float],
    tau_values: Sequence[float],
    c: float = 1.0,
) -> FamilyReport:
    """Evaluate density, explicit residuals and the Einstein tensor on a grid.

    Rows are ordered r-major (all tau for the first r, then the next r).
    Singular points are recorded in the row's ``error`` field.
    """
    metric = metric_of(sol, c)
    rows = [_report_point(sol, metric, float(r), float(tau)) for r in r_values for tau in tau_values]
    max_abs = {k: _max_abs(getattr(row, k) for row in rows) for k in CHECKED + DISCREPANT}
    return FamilyReport(rows, max_abs, sum(row.error is not None for row in rows))


def _max_abs(values: Iterable[float | None]) -> float:
    finite = [abs(v) for v in values if v is not None]
    return max(finite, default=0.0)
