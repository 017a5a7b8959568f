"""Result records shared by the checkers."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping, Optional


@dataclass(frozen=True)
class Verdict:
    """Outcome of a single check or an aggregated sweep.

    ``counterexample`` is a small JSON-able mapping naming the violating
    data (pairs, witnesses, triple labels).  ``vacuous`` marks a check whose
    hypotheses were unmet; such checks count as passing and are tallied in
    ``skipped_vacuous`` by aggregators.
    """

    holds: bool
    checked: int = 0
    skipped_vacuous: int = 0
    vacuous: bool = False
    counterexample: Optional[Mapping[str, Any]] = None

    def __bool__(self) -> bool:
        return self.holds

    def to_json(self, **extra: Any) -> dict:
        out: dict[str, Any] = {
            "schema": 1,
            "holds": self.holds,
            "triples_checked": self.checked,
            "skipped_vacuous": self.skipped_vacuous,
        }
        if self.counterexample is not None:
            out["counterexample"] = dict(self.counterexample)
        out.update(extra)
        return out


@dataclass(frozen=True)
class OrderReport:
    """Result of a minimal-order search over a family of algebras.

    ``per_order[i]`` states whether order ``i + 1`` passes everywhere.
    ``definitive_none`` is True when the composite chains stabilised without
    covering the left side, so no order of any size exists (the bound only
    truncates reporting, never the verdict).
    """

    minimal_order: Optional[int]
    bound: int
    per_order: tuple[bool, ...]
    triples_checked: int
    definitive_none: bool = False
    failing: Optional[Mapping[str, Any]] = None
    members: tuple[str, ...] = field(default=())

    @property
    def holds(self) -> bool:
        return self.minimal_order is not None

    def to_json(self, **extra: Any) -> dict:
        out: dict[str, Any] = {
            "schema": 1,
            "holds": self.holds,
            "n": self.minimal_order,
            "bound": self.bound,
            "per_order": list(self.per_order),
            "triples_checked": self.triples_checked,
            "definitive_none": self.definitive_none,
            "members": list(self.members),
        }
        if self.failing is not None:
            out["counterexample"] = dict(self.failing)
        out.update(extra)
        return out
