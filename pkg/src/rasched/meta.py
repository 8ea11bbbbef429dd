"""Provenance tags attached to generated jobs and machines.

Every job and machine produced by an instance constructor carries a
:class:`GadgetMeta` so that schedule extractors and structural checkers can
identify gadget roles without re-deriving them from sizes.
"""

from __future__ import annotations

from dataclasses import dataclass

KINDS = frozenset(
    {
        "CJob",
        "TJob",
        "VJob",
        "BJob",
        "HJob",
        "CMach",
        "TMach",
        "GMach",
        "BMachIn",
        "BMachOut",
        "PrivateLoad",
        "ElementJob",
        "DummyJob",
        "TruthJob",
        "ClauseJob",
        "DummyClause",
        "Triplet",
    }
)

Index = int | str


@dataclass(frozen=True)
class GadgetMeta:
    """Role tag: a kind, the gadget indices, and an optional truth configuration.

    ``truth_config`` is present exactly on the jobs that exist in a paired
    true/false variant; ``True`` marks the top configuration.
    """

    kind: str
    indices: tuple[Index, ...] = ()
    truth_config: bool | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown gadget kind: {self.kind!r}")
        object.__setattr__(self, "indices", tuple(self.indices))


def tag(kind: str, *indices: Index, config: bool | None = None) -> GadgetMeta:
    """Shorthand constructor used by the instance builders."""
    return GadgetMeta(kind, tuple(indices), config)
