"""Energy ledgers for the Atwood-machine and pair-annihilation thought experiments.

All shifts are first order in the uniform field, E' = E (1 - g dz / c^2).
Atomic gaps in the corrected cycle follow gap(z) = gap0 (1 - g z / c^2),
which is a modelling choice: the level distortion is asserted to exist but
no formula for it is given.

The ``field`` account is an unbounded reservoir. Depletion of the source mass
(and the resulting change of g) is not modelled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError, UnphysicalShift

__all__ = [
    "ACCOUNTS",
    "GravContext",
    "Atom",
    "Ledger",
    "Outcome",
    "CycleResult",
    "shift_photon",
    "excitation_weight",
    "calibrate_height",
    "run_atwood_cycle",
    "run_pair_cycle",
]

ACCOUNTS = ("atom_internal", "photon", "storage_cell", "field", "kinetic")

# relative resonance width for photon absorption
LINEWIDTH = 1e-9


@dataclass(frozen=True)
class GravContext:
    g: float
    c: float = 1.0

    def __post_init__(self):
        if not (self.g > 0.0 and self.c > 0.0):
            raise ValueError("g and c must be positive")

    def phi(self, z: float) -> float:
        return self.g * z


@dataclass
class Atom:
    gap0: float
    z: float = 0.0
    state: str = "ground"

    def gap(self, ctx: GravContext) -> float:
        value = self.gap0 * (1.0 - ctx.g * self.z / ctx.c**2)
        if not value > 0.0:
            raise DomainError(f"level gap is non-positive at z={self.z!r}")
        return value


@dataclass
class Ledger:
    accounts: dict[str, float] = field(default_factory=lambda: dict.fromkeys(ACCOUNTS, 0.0))
    history: list[tuple[str, dict[str, float]]] = field(default_factory=list)
    totals: list[float] = field(default_factory=list)

    def __post_init__(self):
        self.initial = dict(self.accounts)
        self.initial_total = self.total()

    def post(self, label: str, **deltas: float) -> None:
        unknown = set(deltas) - set(ACCOUNTS)
        if unknown:
            raise KeyError(f"unknown accounts {sorted(unknown)}")
        for name, delta in deltas.items():
            self.accounts[name] += delta
        self.history.append((label, dict(deltas)))
        self.totals.append(self.total())

    def total(self) -> float:
        return math.fsum(self.accounts.values())

    def max_drift(self) -> float:
        return max((abs(t - self.initial_total) for t in self.totals), default=0.0)

    def net_change(self) -> dict[str, float]:
        return {k: self.accounts[k] - self.initial[k] for k in ACCOUNTS}


@dataclass(frozen=True)
class Outcome:
    halted_at: int | None = None

    @property
    def perpetual(self) -> bool:
        return self.halted_at is None

    def __str__(self) -> str:
        return "perpetual" if self.halted_at is None else f"halted({self.halted_at})"


@dataclass(frozen=True)
class CycleResult:
    ledger: Ledger
    outcome: Outcome
    cycles_completed: int


def _check_shift(ctx: GravContext, dz: float) -> float:
    factor = 1.0 - ctx.g * dz / ctx.c**2
    if not factor > 0.0:
        raise UnphysicalShift(f"shift factor {factor!r} for height change {dz!r}")
    return factor


def shift_photon(ctx: GravContext, E: float, z_from: float, z_to: float) -> float:
    """Photon energy after travelling from z_from to z_to."""
    if not E > 0.0:
        raise ValueError("photon energy must be positive")
    return E * _check_shift(ctx, z_to - z_from)


def _shift_delta(ctx: GravContext, E: float, z_from: float, z_to: float) -> float:
    # energy change in isolation, so ledger postings avoid (a + b) - a rounding
    _check_shift(ctx, z_to - z_from)
    return -E * ctx.g * (z_to - z_from) / ctx.c**2


def excitation_weight(ctx: GravContext, delta_E: float) -> float:
    """Extra weight g dE / c^2 of an atom carrying excitation energy dE."""
    if delta_E < 0.0:
        raise ValueError("excitation energy must be non-negative")
    return ctx.g * delta_E / ctx.c**2


def calibrate_height(ctx: GravContext, delta_E: float, level_shift: float) -> float:
    """Height L whose redshift removes exactly ``level_shift`` from a photon of energy delta_E."""
    if not 0.0 < level_shift < delta_E:
        raise DomainError("need 0 < level shift < level spacing")
    return level_shift * ctx.c**2 / (ctx.g * delta_E)


def _resonant(photon: float, gap: float) -> bool:
    return abs(photon - gap) <= LINEWIDTH * gap


def run_atwood_cycle(
    ctx: GravContext,
    delta_E: float,
    L: float,
    mode: str = "corrected",
    cycles: int = 1,
    level_shift: float | None = None,
) -> CycleResult:
    """Run the two-pan cycle and book every energy transfer.

    ``morrison_original``: gaps are height independent; the falling excited
    atom drives the generator, storing g dE L / c^2, and the redshifted photon
    can no longer excite the upper atom.

    ``corrected``: the upper atom's gap is lowered by ``level_shift`` (by
    default the gap model value dE g L / c^2). Descending, the field raises the
    excited atom's gap back to dE; the climbing photon hands its redshift back
    to the field. The cycle continues only while the photon is resonant with
    the upper atom.
    """
    if mode not in ("morrison_original", "corrected"):
        raise ValueError(f"unknown mode {mode!r}")
    if not (delta_E > 0.0 and L > 0.0):
        raise ValueError("delta_E and L must be positive")
    if cycles < 0:
        raise ValueError("cycles must be non-negative")
    _check_shift(ctx, L)

    if mode == "corrected":
        top = Atom(delta_E, z=L)
        bottom_gap = delta_E
        top_gap = top.gap(ctx) if level_shift is None else delta_E - level_shift
        if not top_gap > 0.0:
            raise DomainError("level shift exceeds the level spacing")
    else:
        bottom_gap = top_gap = delta_E

    # start: excited atom in the upper pan, ground-state atom in the lower one
    ledger = Ledger(accounts={**dict.fromkeys(ACCOUNTS, 0.0), "atom_internal": top_gap})
    for n in range(1, cycles + 1):
        if mode == "corrected":
            work = bottom_gap - top_gap
            ledger.post("descend: field raises excited level", atom_internal=work, field=-work)
        else:
            work = excitation_weight(ctx, delta_E) * L
            ledger.post("descend: generator drains weight work", storage_cell=work, field=-work)

        ledger.post("decay at bottom", atom_internal=-bottom_gap, photon=bottom_gap)

        loss = -_shift_delta(ctx, bottom_gap, 0.0, L)
        ledger.post("photon climbs L", photon=-loss, field=loss)

        photon = ledger.accounts["photon"]
        if not _resonant(photon, top_gap):
            return CycleResult(ledger, Outcome(halted_at=n), n - 1)
        ledger.post("absorb at top; pans exchange", photon=-photon, atom_internal=photon)
    return CycleResult(ledger, Outcome(), cycles)


def run_pair_cycle(ctx: GravContext, m: float, L: float) -> Ledger:
    """Lift a (+m, -m) pair to L, annihilate, send the photons down, re-create.

    The pair's rest energy 2 m c^2 is carried in ``atom_internal``.
    """
    if not m > 0.0:
        raise ValueError("mass must be positive")
    if L < 0.0:
        raise ValueError("height must be non-negative")
    if not 2.0 * ctx.g * L / ctx.c**2 < 1.0:
        raise UnphysicalShift("weak-field condition 2 g L / c^2 < 1 violated")
    rest = 2.0 * m * ctx.c**2
    ledger = Ledger(accounts={**dict.fromkeys(ACCOUNTS, 0.0), "atom_internal": rest})
    ledger.post("lift pair (no net weight)")
    ledger.post("annihilate at L", atom_internal=-rest, photon=rest)
    gain = _shift_delta(ctx, rest, L, 0.0)
    ledger.post("photons descend (blueshift)", photon=gain, field=-gain)
    ledger.post("re-create pair at bottom", photon=-(rest + gain), atom_internal=rest, kinetic=gain)
    return ledger
