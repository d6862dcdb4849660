"""Curvature of the synchronous, spherically symmetric diagonal metric

    ds^2 = c^2 dtau^2 - e^w dr^2 - e^v (dtheta^2 + sin^2(theta) dphi^2)

with signature (+, -, -, -) and coordinates ordered (tau, r, theta, phi).

Everything is computed from second-order jets of ``w`` and ``v``; the theta
dependence of g_33 is handled analytically. The curvature core works for
any diagonal metric whose components depend on at most two jet variables
plus theta, which lets the spatial 3-slice reuse it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import jets
from .errors import DivisionByZero, DomainError, SingularMetric
from .jets import Jet2

__all__ = [
    "MetricAnsatz",
    "EinsteinComponents",
    "ExplicitResiduals",
    "Curvature",
    "einstein_tensor",
    "dalembertian",
    "explicit_residuals",
    "curvature",
    "slice_ricci_scalar",
    "minkowski",
    "metric_jets",
]

JetFn = Callable[[Jet2, Jet2], Jet2]


@dataclass(frozen=True)
class MetricAnsatz:
    w_of: JetFn
    v_of: JetFn
    c: float = 1.0


@dataclass(frozen=True)
class EinsteinComponents:
    """Covariant components in the (tau, r, theta, phi) coordinate basis.

    ``offdiag_max`` is the largest |G_mn| over off-diagonal pairs other than
    (0, 1).
    """

    G00: float
    G01: float
    G11: float
    G22: float
    G33: float
    offdiag_max: float = 0.0

    def max_abs(self) -> float:
        return max(abs(self.G00), abs(self.G01), abs(self.G11), abs(self.G22), abs(self.G33), self.offdiag_max)


@dataclass(frozen=True)
class ExplicitResiduals:
    """Left minus right side of the four explicit field equations.

    ``residual_12_printed`` and ``residual_14_printed`` transcribe those two
    equations exactly as published; ``residual_14`` is the component
    equation with the coefficients that follow from G_22 (the printed form
    carries 1 instead of 1/2 on v-double-dot and 1/2 instead of 1/4 on v'^2).
    """

    residual_11: float
    residual_12_printed: float
    residual_13: float
    residual_14: float
    residual_14_printed: float


@dataclass(frozen=True)
class Curvature:
    christoffel: np.ndarray  # [l, m, n] = Gamma^l_{mn}
    ricci: np.ndarray
    scalar: float
    einstein: np.ndarray


def minkowski(c: float = 1.0) -> MetricAnsatz:
    """Flat space in the same shape: e^w = 1, e^v = r^2."""
    return MetricAnsatz(
        w_of=lambda r, tau: jets.lift_const(0.0),
        v_of=lambda r, tau: 2.0 * jets.ln(r),
        c=c,
    )


# ------------------------------------------------------------- diagonal core


def curvature(g: np.ndarray, dg: np.ndarray, d2g: np.ndarray) -> Curvature:
    """Christoffels, Ricci, scalar and Einstein tensor of a diagonal metric.

    ``g[i]`` is g_ii, ``dg[i, a]`` its partial along coordinate a and
    ``d2g[i, a, b]`` its second partials.
    """
    n = g.shape[0]
    eye = np.eye(n)
    inv = 1.0 / g
    # Gamma^l_{mn} = 1/(2 g_l) (d_l,n d_m g_l + d_l,m d_n g_l - d_m,n d_l g_m)
    t = (
        np.einsum("ln,lm->lmn", eye, dg)
        + np.einsum("lm,ln->lmn", eye, dg)
        - np.einsum("mn,ml->lmn", eye, dg)
    )
    dt = (
        np.einsum("ln,lma->lmna", eye, d2g)
        + np.einsum("lm,lna->lmna", eye, d2g)
        - np.einsum("mn,mla->lmna", eye, d2g)
    )
    gamma = 0.5 * inv[:, None, None] * t
    dgamma = 0.5 * inv[:, None, None, None] * dt - 0.5 * (dg * (inv * inv)[:, None])[:, None, None, :] * t[..., None]

    # R_mn = d_a G^a_mn - d_n G^a_ma + G^a_ab G^b_mn - G^a_nb G^b_ma
    ricci = (
        np.einsum("amna->mn", dgamma)
        - np.einsum("amai->mi", dgamma)
        + np.einsum("aab,bmn->mn", gamma, gamma)
        - np.einsum("anb,bma->mn", gamma, gamma)
    )
    scalar = float(np.sum(inv * np.diag(ricci)))
    einstein = ricci - 0.5 * np.diag(g) * scalar
    return Curvature(gamma, ricci, scalar, einstein)


def _pack(
    radial: Sequence[Jet2],
    areal: Jet2,
    variables: Sequence[str],
    theta: float,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Arrays (g, dg, d2g) for diag(radial..., areal, areal*sin^2 theta).

    Coordinates are ``variables`` (jet variable names, one per radial entry)
    followed by theta and phi.
    """
    k = len(variables)
    n = k + 2
    th = k
    g = np.zeros(n)
    dg = np.zeros((n, n))
    d2g = np.zeros((n, n, n))

    def fill(i: int, jet: Jet2, scale: float) -> None:
        g[i] = jet.val * scale
        for a, va in enumerate(variables):
            dg[i, a] = jet.grad(va) * scale
            for b, vb in enumerate(variables):
                d2g[i, a, b] = jet.hess(va, vb) * scale

    for i, jet in enumerate(radial):
        fill(i, jet, 1.0)
    fill(th, areal, 1.0)

    s = math.sin(theta) ** 2
    ds = math.sin(2.0 * theta)
    d2s = 2.0 * math.cos(2.0 * theta)
    fill(th + 1, areal, s)
    dg[th + 1, th] = areal.val * ds
    d2g[th + 1, th, th] = areal.val * d2s
    for a, va in enumerate(variables):
        d2g[th + 1, a, th] = d2g[th + 1, th, a] = areal.grad(va) * ds
    return g, dg, d2g


def metric_jets(m: MetricAnsatz, r: float, tau: float) -> tuple[Jet2, Jet2, Jet2, Jet2]:
    rj, tj = jets.coords(r, tau)
    try:
        w = m.w_of(rj, tj)
        v = m.v_of(rj, tj)
        ew = jets.exp(w)
        ev = jets.exp(v)
    except (DomainError, DivisionByZero, ZeroDivisionError, OverflowError) as exc:
        raise SingularMetric(f"metric undefined at r={r!r}, tau={tau!r}: {exc}") from exc
    for name, jet in (("e^w", ew), ("e^v", ev)):
        if not jet.is_finite() or not jet.val > 0.0:
            raise SingularMetric(f"{name} = {jet.val!r} is not finite and positive at r={r!r}, tau={tau!r}")
    if not (w.is_finite() and v.is_finite()):
        raise SingularMetric(f"metric derivatives not finite at r={r!r}, tau={tau!r}")
    return w, v, ew, ev


def _spacetime_arrays(m: MetricAnsatz, r: float, tau: float, theta: float):
    if math.sin(theta) == 0.0:
        raise SingularMetric("coordinate singularity: sin(theta) = 0")
    w, v, ew, ev = metric_jets(m, r, tau)
    g00 = jets.lift_const(m.c * m.c)
    return _pack([g00, -ew], -ev, ("tau", "r"), theta), (w, v, ew, ev)


# ---------------------------------------------------------------- operations


def einstein_tensor(m: MetricAnsatz, r: float, tau: float, theta: float = math.pi / 2) -> EinsteinComponents:
    (g, dg, d2g), _ = _spacetime_arrays(m, r, tau, theta)
    G = curvature(g, dg, d2g).einstein
    off = np.abs(G - np.diag(np.diag(G)))
    off[0, 1] = off[1, 0] = 0.0
    return EinsteinComponents(
        G00=float(G[0, 0]),
        G01=float(G[0, 1]),
        G11=float(G[1, 1]),
        G22=float(G[2, 2]),
        G33=float(G[3, 3]),
        offdiag_max=float(off.max()),
    )


def dalembertian(m: MetricAnsatz, f: JetFn, r: float, tau: float, theta: float = math.pi / 2) -> float:
    """(1/sqrt(-g)) d_mu (sqrt(-g) g^{mu nu} d_nu f) for f = f(r, tau).

    Expanded once by the product rule so only second-order jets are needed:
    sum_mu g^mm f_mm + (d_mu g^mm + g^mm d_mu ln sqrt|g|) f_m.
    """
    (g, dg, _), _ = _spacetime_arrays(m, r, tau, theta)
    rj, tj = jets.coords(r, tau)
    try:
        fj = f(rj, tj)
    except (DomainError, DivisionByZero, ZeroDivisionError) as exc:
        raise SingularMetric(f"wave function undefined at r={r!r}, tau={tau!r}: {exc}") from exc
    inv = 1.0 / g
    dlog_sqrt_g = 0.5 * np.sum(dg * inv[:, None], axis=0)
    total = 0.0
    for mu, var in enumerate(("tau", "r")):
        d_inv = -dg[mu, mu] * inv[mu] * inv[mu]
        total += inv[mu] * fj.hess(var, var) + (d_inv + inv[mu] * dlog_sqrt_g[mu]) * fj.grad(var)
    return float(total)


def explicit_residuals(m: MetricAnsatz, rho: float, G_newton: float, r: float, tau: float) -> ExplicitResiduals:
    """Residuals (LHS - RHS) of the explicit comoving field equations.

    Overdots are derivatives with respect to c*tau, so with c = 1 these are
    the equations as written; the density equation's right side is
    8 pi G rho / c^2.
    """
    w, v, ew, ev = metric_jets(m, r, tau)
    c = m.c
    vp, vpp, wp = v.d_r, v.d_rr, w.d_r
    vd, vdd = v.d_tau / c, v.d_tautau / (c * c)
    wd, wdd = w.d_tau / c, w.d_tautau / (c * c)
    e_w, e_v = ew.val, ev.val

    r11 = (
        -(vpp + 0.75 * vp * vp - 0.5 * wp * vp) / e_w
        + 1.0 / e_v
        + 0.25 * vd * vd
        + 0.5 * vd * wd
        - 8.0 * math.pi * G_newton * rho / (c * c)
    )
    r12 = vp + 0.5 * wp - 0.5 * wd * vp
    r13 = e_w * (vdd + 0.75 * vd * vd + 1.0 / e_v) - 0.25 * vp * vp
    r14 = e_v * (0.5 * vdd + 0.25 * vd * vd + 0.25 * vd * wd + 0.5 * wdd + 0.25 * wd * wd) + (e_v / e_w) * (
        0.25 * wp * vp - 0.5 * vpp - 0.25 * vp * vp
    )
    r14_printed = e_v * (vdd + 0.25 * vd * vd + 0.25 * vd * wd + 0.5 * wdd + 0.25 * wd * wd) + (e_v / e_w) * (
        0.25 * wp * vp - 0.5 * vpp - 0.5 * vp * vp
    )
    return ExplicitResiduals(r11, r12, r13, r14, r14_printed)


def slice_ricci_scalar(
    radial_coeff: Callable[[Jet2], Jet2],
    areal: Callable[[Jet2], Jet2],
    x: float,
    theta: float = math.pi / 3,
) -> float:
    """Ricci scalar of the Riemannian 3-metric A(x) dx^2 + B(x) dOmega^2."""
    if math.sin(theta) == 0.0:
        raise SingularMetric("coordinate singularity: sin(theta) = 0")
    xj = jets.coord_r(x)
    try:
        a, b = radial_coeff(xj), areal(xj)
    except (DomainError, DivisionByZero, ZeroDivisionError) as exc:
        raise SingularMetric(f"3-metric undefined at x={x!r}: {exc}") from exc
    if not (a.val > 0.0 and b.val > 0.0):
        raise SingularMetric(f"3-metric not positive definite at x={x!r}")
    g, dg, d2g = _pack([a], b, ("r",), theta)
    return curvature(g, dg, d2g).scalar
