"""Three-dimensional matching instances and a brute-force cover oracle."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .core import SchedError, UnknownIdError

# Elements are (set name, index) pairs; primed sets use a trailing apostrophe,
# e.g. ("a'", 3).
Element = tuple[str, int]
Triplet = tuple[Element, Element, Element]


def element_token(x: Element) -> str:
    return f"{x[0]}{x[1]}"


def parse_element(token: str) -> Element:
    name = token.rstrip("0123456789")
    idx = token[len(name) :]
    if not name or not idx:
        raise ValueError(f"bad element token: {token!r}")
    return (name, int(idx))


class MatchingError(SchedError):
    """Structurally invalid matching instance."""


def _validate_cover_assumption(elements: Sequence[Element], triplets: Sequence[Triplet]) -> None:
    covered = {x for e in triplets for x in e}
    missing = [x for x in elements if x not in covered]
    if missing:
        listing = ", ".join(element_token(x) for x in missing)
        raise MatchingError(f"elements in no triplet: {listing}")


@dataclass(frozen=True)
class ThreeDM:
    """Sets A, B, C of size n with triplets drawn from A x B x C."""

    n: int
    triplets: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        triplets = tuple(tuple(t) for t in self.triplets)
        for t in triplets:
            if len(t) != 3 or not all(1 <= i <= self.n for i in t):
                raise MatchingError(f"bad triplet {t} for n={self.n}")
        if len(set(triplets)) != len(triplets):
            raise MatchingError("duplicate triplets")
        object.__setattr__(self, "triplets", triplets)
        _validate_cover_assumption(self.elements(), self.element_triplets())

    def elements(self) -> tuple[Element, ...]:
        return tuple(
            (name, i) for name in ("a", "b", "c") for i in range(1, self.n + 1)
        )

    def element_triplets(self) -> tuple[Triplet, ...]:
        return tuple(
            (("a", i), ("b", j), ("c", k)) for (i, j, k) in self.triplets
        )


def zeta(i: int) -> int:
    """Cyclic successor within each block {3k+1, 3k+2, 3k+3}."""
    k, pos = divmod(i - 1, 3)
    return 3 * k + (pos + 1) % 3 + 1


@dataclass(frozen=True)
class ThreeDMStar:
    """Six element sets of size 3n; the second triplet family is derived.

    The first family contains triplets {a_i or a'_i, b_j, c_j}; the second is
    fixed as {a_i, b'_i, c'_i} and {a'_i, b'_i, c'_zeta(i)} for every i.
    """

    n: int
    e1: tuple[Triplet, ...]

    def __post_init__(self) -> None:
        e1 = tuple(tuple(t) for t in self.e1)
        size = 3 * self.n
        for t in e1:
            (an, ai), (bn, bj), (cn, ck) = t
            if an not in ("a", "a'") or bn != "b" or cn != "c":
                raise MatchingError(f"first-family triplet has wrong shape: {t}")
            if bj != ck:
                raise MatchingError(f"b/c indices must agree in {t}")
            if not (1 <= ai <= size and 1 <= bj <= size):
                raise MatchingError(f"index out of range in {t}")
        if len(set(e1)) != len(e1):
            raise MatchingError("duplicate triplets in first family")
        object.__setattr__(self, "e1", e1)
        _validate_cover_assumption(self.elements(), self.all_triplets())

    @property
    def e2(self) -> tuple[Triplet, ...]:
        out: list[Triplet] = []
        for i in range(1, 3 * self.n + 1):
            out.append((("a", i), ("b'", i), ("c'", i)))
            out.append((("a'", i), ("b'", i), ("c'", zeta(i))))
        return tuple(out)

    def elements(self) -> tuple[Element, ...]:
        return tuple(
            (name, i)
            for name in ("a", "a'", "b", "b'", "c", "c'")
            for i in range(1, 3 * self.n + 1)
        )

    def all_triplets(self) -> tuple[Triplet, ...]:
        return self.e1 + self.e2


def build_3dm_star(n: int, e1: Iterable[Triplet]) -> ThreeDMStar:
    """Star matching instance from the first triplet family only."""
    return ThreeDMStar(n, tuple(e1))


MatchingInstance = ThreeDM | ThreeDMStar


def element_degree(instance: MatchingInstance, x: Element) -> int:
    """Number of triplets containing the element."""
    if x not in instance.elements():
        raise UnknownIdError(f"unknown element: {element_token(x)}")
    if isinstance(instance, ThreeDM):
        triplets = instance.element_triplets()
    else:
        triplets = instance.all_triplets()
    return sum(1 for e in triplets if x in e)


@dataclass(frozen=True)
class MatchingCertificate:
    """A triplet subset covering every element exactly once."""

    triplets: tuple[Triplet, ...]


def is_perfect_cover(instance: MatchingInstance, cert: MatchingCertificate) -> bool:
    """Independent validation: every element in exactly one chosen triplet."""
    if isinstance(instance, ThreeDM):
        allowed = set(instance.element_triplets())
    else:
        allowed = set(instance.all_triplets())
    if any(t not in allowed for t in cert.triplets):
        return False
    if len(set(cert.triplets)) != len(cert.triplets):
        return False
    covered = [x for t in cert.triplets for x in t]
    return sorted(covered) == sorted(instance.elements()) and len(covered) == len(
        set(covered)
    )


DEFAULT_TRIPLET_CAP = 30


def brute_force_match(
    instance: MatchingInstance, triplet_cap: int = DEFAULT_TRIPLET_CAP
) -> MatchingCertificate | None:
    """A perfect cover found by backtracking, or None after exhaustion.

    Branches on the uncovered element with the fewest remaining triplets
    (fail-first), ties broken by element order, so runs are deterministic.
    """
    if isinstance(instance, ThreeDM):
        triplets = instance.element_triplets()
    else:
        triplets = instance.all_triplets()
    if len(triplets) > triplet_cap:
        raise SchedError(f"triplet cap exceeded: {len(triplets)} > {triplet_cap}")

    elements = instance.elements()
    order = {x: k for k, x in enumerate(elements)}
    containing: dict[Element, list[Triplet]] = {x: [] for x in elements}
    for t in triplets:
        for x in t:
            containing[x].append(t)

    covered: set[Element] = set()
    chosen: list[Triplet] = []

    def available(x: Element) -> list[Triplet]:
        return [t for t in containing[x] if covered.isdisjoint(t)]

    def search() -> bool:
        if len(covered) == len(elements):
            return True
        best: Element | None = None
        best_avail: list[Triplet] = []
        for x in elements:
            if x in covered:
                continue
            av = available(x)
            if best is None or len(av) < len(best_avail) or (
                len(av) == len(best_avail) and order[x] < order[best]
            ):
                best, best_avail = x, av
            if not av:
                return False
        assert best is not None
        for t in best_avail:
            covered.update(t)
            chosen.append(t)
            if search():
                return True
            chosen.pop()
            covered.difference_update(t)
        return False

    if search():
        cert = MatchingCertificate(tuple(chosen))
        if not is_perfect_cover(instance, cert):
            raise SchedError("internal error: certificate failed validation")
        return cert
    return None
