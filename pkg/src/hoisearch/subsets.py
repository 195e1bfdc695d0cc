"""Exact combinatorics on the lattice of slit subsets.

Everything in this module is model independent and uses integer arithmetic
only: subsets of ``{0, .., N-1}`` indexing open slits, the signed
coefficients that rebuild the identity from slit projectors in a theory
whose interference terminates at a given order, and the signed pairing
counts that make coherence blocks mutually orthogonal. No floating point
enters anywhere here.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Iterator, Mapping

__all__ = [
    "EnumerationLimitError",
    "SlitSet",
    "SignedSubsetCombination",
    "enumerate_sectors",
    "decomposition_coefficient",
    "identity_decomposition",
    "coherence_expansion",
    "signed_pairing_count",
    "signed_pairing_count_closed",
    "MAX_UNIVERSE",
    "MAX_PAIR_ENUMERATION",
]

# Guards keeping the exact enumeration honest instead of silently exploding.
MAX_UNIVERSE = 30
MAX_PAIR_ENUMERATION = 40


class EnumerationLimitError(RuntimeError):
    """Raised when an exhaustive enumeration would exceed the size guards."""


@dataclass(frozen=True)
class SlitSet:
    """An ordered subset of the slits ``{0, .., universe-1}``.

    The empty set is allowed (it indexes the block-everything projector,
    which is the zero map by convention); member tuples are normalised to
    strictly increasing order so equality and hashing are structural.
    """

    members: tuple[int, ...]
    universe: int

    def __post_init__(self) -> None:
        members = tuple(sorted(set(int(m) for m in self.members)))
        object.__setattr__(self, "members", members)
        if self.universe < 1:
            raise ValueError(f"universe size must be positive, got {self.universe}")
        if members and (members[0] < 0 or members[-1] >= self.universe):
            raise ValueError(
                f"slit indices {members} out of range for universe {self.universe}"
            )

    @classmethod
    def of(cls, members: Iterable[int], universe: int) -> "SlitSet":
        return cls(tuple(members), universe)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, slit: int) -> bool:
        return slit in self.members

    def __repr__(self) -> str:
        inner = ",".join(str(m) for m in self.members)
        return f"{{{inner}}}/{self.universe}"

    @property
    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        """Canonical ordering key: size first, then lexicographic."""
        return (len(self.members), self.members)

    @property
    def mask(self) -> int:
        """Bitmask form, used by the exhaustive pairing enumeration."""
        m = 0
        for i in self.members:
            m |= 1 << i
        return m

    def issubset(self, other: "SlitSet") -> bool:
        self._check_universe(other)
        return set(self.members) <= set(other.members)

    def intersection(self, other: "SlitSet") -> "SlitSet":
        self._check_universe(other)
        return SlitSet(tuple(set(self.members) & set(other.members)), self.universe)

    def subsets(self, *, include_empty: bool = False, max_size: int | None = None) -> Iterator["SlitSet"]:
        """Yield subsets in canonical (size, then lexicographic) order."""
        lo = 0 if include_empty else 1
        hi = len(self.members) if max_size is None else min(max_size, len(self.members))
        for size in range(lo, hi + 1):
            for combo in itertools.combinations(self.members, size):
                yield SlitSet(combo, self.universe)

    def _check_universe(self, other: "SlitSet") -> None:
        if self.universe != other.universe:
            raise ValueError(
                f"universe mismatch: {self.universe} vs {other.universe}"
            )


@dataclass(frozen=True)
class SignedSubsetCombination:
    """A formal integer combination of slit subsets.

    Zero coefficients are dropped, as is any empty-set term (the projector
    with every slit blocked annihilates all states, so the empty set never
    contributes to a formal expansion).
    """

    terms: Mapping[SlitSet, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        cleaned = {
            s: int(c)
            for s, c in dict(self.terms).items()
            if int(c) != 0 and len(s) > 0
        }
        object.__setattr__(self, "terms", cleaned)

    def coefficient(self, subset: SlitSet) -> int:
        return self.terms.get(subset, 0)

    def items(self):
        return self.terms.items()

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SignedSubsetCombination):
            return NotImplemented
        return self.terms == other.terms

    def __add__(self, other: "SignedSubsetCombination") -> "SignedSubsetCombination":
        acc = dict(self.terms)
        for s, c in other.terms.items():
            acc[s] = acc.get(s, 0) + c
        return SignedSubsetCombination(acc)

    def __sub__(self, other: "SignedSubsetCombination") -> "SignedSubsetCombination":
        return self + (-1) * other

    def __mul__(self, scalar: int) -> "SignedSubsetCombination":
        return SignedSubsetCombination({s: scalar * c for s, c in self.terms.items()})

    __rmul__ = __mul__

    def __repr__(self) -> str:
        if not self.terms:
            return "SignedSubsetCombination(0)"
        parts = [
            f"{c:+d}*{s!r}"
            for s, c in sorted(self.terms.items(), key=lambda kv: kv[0].sort_key)
        ]
        return "SignedSubsetCombination(" + " ".join(parts) + ")"


def enumerate_sectors(n_slits: int, order: int) -> list[SlitSet]:
    """All nonempty subsets of ``{0..n_slits-1}`` up to the given size.

    The list is deterministic: subsets appear by size, then lexicographically,
    which fixes the coordinate layout of every sector space built on top.
    """
    if n_slits < 1:
        raise ValueError(f"need at least one slit, got {n_slits}")
    if not 1 <= order <= n_slits:
        raise ValueError(f"order must satisfy 1 <= order <= {n_slits}, got {order}")
    out: list[SlitSet] = []
    for size in range(1, order + 1):
        for combo in itertools.combinations(range(n_slits), size):
            out.append(SlitSet(combo, n_slits))
    return out


def decomposition_coefficient(order: int, subset_size: int, n_slits: int) -> int:
    """Signed overlap-correction coefficient in the identity decomposition.

    For a theory whose interference terminates at `order`, the identity on
    ``n_slits`` distinguishable states expands over slit projectors with this
    coefficient attached to every subset of the given size:
    ``(-1)**(order - size) * binom(n_slits - size - 1, order - size)``.

    Conventions: ``binom(n, 0) = 1`` for every integer n including ``n = -1``
    (so the all-slits-open case collapses to the single full projector), and
    ``binom(n, j) = 0`` for ``0 <= n < j``.
    """
    _check_coefficient_args(order, subset_size, n_slits)
    deficit = order - subset_size
    if deficit == 0:
        return 1
    pool = n_slits - subset_size - 1
    # pool == -1 forces subset_size == n_slits and hence deficit == 0 above.
    if pool < deficit:
        return 0
    return (-1 if deficit % 2 else 1) * comb(pool, deficit)


def identity_decomposition(order: int, n_slits: int) -> dict[SlitSet, int]:
    """Identity expanded over slit projectors, as subset -> coefficient.

    Covers every nonempty subset of size up to `order`; zero coefficients are
    omitted. In canonical sector order.
    """
    if n_slits < 1:
        raise ValueError(f"need at least one slit, got {n_slits}")
    if not 1 <= order <= n_slits:
        raise ValueError(f"order must satisfy 1 <= order <= {n_slits}, got {order}")
    out: dict[SlitSet, int] = {}
    for size in range(1, order + 1):
        coeff = decomposition_coefficient(order, size, n_slits)
        if coeff == 0:
            continue
        for combo in itertools.combinations(range(n_slits), size):
            out[SlitSet(combo, n_slits)] = coeff
    return out


def coherence_expansion(subset: SlitSet) -> SignedSubsetCombination:
    """Coherence block of a subset as a signed combination of slit projectors.

    Inclusion-exclusion over the nonempty subsets: the coefficient of each
    sub-subset is ``(-1)**(|subset| - |sub|)``. The empty-set term vanishes
    under the blocked-everything-is-zero convention, so for a singleton the
    expansion is the slit projector itself.
    """
    if len(subset) == 0:
        raise ValueError("coherence expansion requires a nonempty subset")
    size = len(subset)
    terms = {
        sub: (-1 if (size - len(sub)) % 2 else 1)
        for sub in subset.subsets(include_empty=False)
    }
    return SignedSubsetCombination(terms)


def signed_pairing_count(left: SlitSet, right: SlitSet, meet: SlitSet) -> int:
    """Exhaustive signed count of sub-pairs with a prescribed intersection.

    Enumerates every pair ``(A <= left, B <= right)`` with ``A & B == meet``
    and returns the number of even-parity pairs (``|A| + |B|`` even) minus the
    odd-parity ones. This is the brute-force route; `signed_pairing_count_closed`
    is the constant-time counterpart they are tested against.
    """
    _check_pairing_args(left, right, meet)
    if len(left) + len(right) > MAX_PAIR_ENUMERATION:
        raise EnumerationLimitError(
            f"|left| + |right| = {len(left) + len(right)} exceeds the "
            f"enumeration guard {MAX_PAIR_ENUMERATION}"
        )
    lm, rm, km = left.mask, right.mask, meet.mask
    count = 0
    a = lm
    while True:
        pa = a.bit_count()
        b = rm
        while True:
            if a & b == km:
                count += -1 if (pa + b.bit_count()) % 2 else 1
            if b == 0:
                break
            b = (b - 1) & rm
        if a == 0:
            break
        a = (a - 1) & lm
    return count


def signed_pairing_count_closed(left: SlitSet, right: SlitSet, meet: SlitSet) -> int:
    """Closed form of `signed_pairing_count`: 0 unless the two subsets
    coincide, in which case the count is ``(-1)**(|left| + |meet|)``."""
    _check_pairing_args(left, right, meet)
    if left != right:
        return 0
    return -1 if (len(left) + len(meet)) % 2 else 1


def _check_coefficient_args(order: int, subset_size: int, n_slits: int) -> None:
    if n_slits < 1:
        raise ValueError(f"need at least one slit, got {n_slits}")
    if n_slits > MAX_UNIVERSE:
        raise EnumerationLimitError(
            f"{n_slits} slits exceeds the exact-arithmetic guard {MAX_UNIVERSE}"
        )
    if not 1 <= order <= n_slits:
        raise ValueError(f"order must satisfy 1 <= order <= {n_slits}, got {order}")
    if not 1 <= subset_size <= order:
        raise ValueError(
            f"subset size must satisfy 1 <= size <= {order}, got {subset_size}"
        )


def _check_pairing_args(left: SlitSet, right: SlitSet, meet: SlitSet) -> None:
    inter = left.intersection(right)
    if not meet.issubset(inter):
        raise ValueError(
            f"prescribed intersection {meet!r} is not contained in "
            f"{left!r} & {right!r} = {inter!r}"
        )
