"""Result containers: condition checks, regime reports, bound values."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:  # pragma: no cover
    from .discrete import ProductInput

# Regime tags reported by the Gaussian classifiers.
PROPORTIONAL_DEGRADED = "ProportionalDegraded"
THREE_USER_SUCCESSIVE = "ThreeUserSuccessive"
TWO_USER_MIXED = "TwoUserMixed"
RANK_ONE_DEGRADED = "RankOneDegraded"
INTERFERENCE_FREE = "InterferenceFree"
NO_REGIME = "None"


@dataclass(frozen=True)
class ConditionCheck:
    """Outcome of one closed-form condition; margin is signed (>= 0 means satisfied
    for inequalities, near 0 means satisfied for equalities)."""

    cond_id: str
    holds: bool
    margin: float

    def to_json(self) -> dict:
        return {"cond_id": self.cond_id, "holds": self.holds, "margin": self.margin}


@dataclass(frozen=True)
class RegimeReport:
    """Classification outcome: which regime, which conditions, certified capacity if any."""

    regime: str
    conditions: tuple[ConditionCheck, ...]
    certified_capacity: Optional[float] = None

    def __post_init__(self):
        if self.certified_capacity is not None and not self.all_hold:
            raise ValueError("certified capacity requires every condition to hold")

    @property
    def all_hold(self) -> bool:
        return all(c.holds for c in self.conditions)

    def to_json(self) -> dict:
        return {
            "regime": self.regime,
            "conditions": [c.to_json() for c in self.conditions],
            "certified_capacity": self.certified_capacity,
        }


@dataclass(frozen=True)
class SearchStats:
    restarts: int
    iterations: int
    trace_len: int

    def to_json(self) -> dict:
        return {"restarts": self.restarts, "iterations": self.iterations, "trace_len": self.trace_len}


@dataclass(frozen=True)
class BoundResult:
    """A bound (or achievable-rate) value with provenance.

    ``certified`` is True only when the conditions backing the expression were
    verified separately (closed-form regime checks, or a falsification run that
    found no counterexample for a condition family the bound requires);
    everything else is heuristic.  ``argmax`` is the maximizing product input
    for discrete searches and None for closed-form Gaussian evaluations (which
    use independent full-power Gaussian inputs with degenerate time sharing).
    """

    value: float
    expression_id: str
    certified: bool = False
    argmax: Optional["ProductInput"] = None
    search_stats: Optional[SearchStats] = None

    def __post_init__(self):
        if self.value < 0.0:
            raise ValueError(f"bound value must be nonnegative, got {self.value}")

    def to_json(self) -> dict:
        out = {
            "value": self.value,
            "expression_id": self.expression_id,
            "certified": self.certified,
        }
        if self.argmax is not None:
            out["argmax"] = self.argmax.to_json()
        if self.search_stats is not None:
            out["search_stats"] = self.search_stats.to_json()
        return out
