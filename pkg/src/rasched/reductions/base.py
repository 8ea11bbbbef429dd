"""Shared pieces of the instance constructors."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from ..core import Instance, LRSInstance, SchedError, as_rational, total_size_check
from ..meta import GadgetMeta

# Reductions whose correctness argument rests on the job sizes summing to
# exactly |machines| * T; enforced at construction time.
CONSERVING_KINDS = frozenset({"simple", "rai", "lst", "rar3", "rar2"})


@dataclass(frozen=True)
class ReductionOutput:
    """A constructed instance, its target load, and provenance tags."""

    kind: str
    instance: Instance
    target: Fraction
    meta: Mapping[str, GadgetMeta]
    source: object | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "target", as_rational(self.target))
        object.__setattr__(self, "meta", dict(self.meta))
        if self.kind in CONSERVING_KINDS and not total_size_check(
            self.instance, self.target
        ):
            raise SchedError(
                f"{self.kind}: job sizes do not sum to |machines| * target"
            )


@dataclass(frozen=True)
class AlphaBeta:
    """The two size triples used by the three- and two-resource constructions.

    Both triples sum to 47; any four of the six values exceed 47, any two
    fall short, and no mixed sorted triple hits 47.
    """

    alpha_a: int = 12
    alpha_b: int = 13
    alpha_c: int = 22
    beta_a: int = 14
    beta_b: int = 15
    beta_c: int = 18

    @property
    def target(self) -> int:
        return self.alpha_a + self.alpha_b + self.alpha_c

    def alpha(self, set_name: str) -> int:
        return {"a": self.alpha_a, "b": self.alpha_b, "c": self.alpha_c}[
            set_name.rstrip("'")
        ]

    def beta(self, set_name: str) -> int:
        return {"a": self.beta_a, "b": self.beta_b, "c": self.beta_c}[
            set_name.rstrip("'")
        ]

    def values(self) -> tuple[int, ...]:
        return (
            self.alpha_a,
            self.alpha_b,
            self.alpha_c,
            self.beta_a,
            self.beta_b,
            self.beta_c,
        )


ALPHA_BETA = AlphaBeta()


def config_suffix(config: bool) -> str:
    return "T" if config else "F"
