"""Sum-rate expression descriptors shared by the Gaussian and discrete evaluators.

An expression is a min over groups of sums of conditional mutual-information
terms I(X_decoded ; Y_receivers | X_given, Q), with the time-sharing variable Q
always in the conditioning.  A sum-type expression has a single group.  User
and receiver indices are 0-based throughout the library.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class MiTerm:
    decoded: tuple[int, ...]
    receivers: tuple[int, ...]
    given: tuple[int, ...] = ()

    def __post_init__(self):
        if not self.decoded or not self.receivers:
            raise ValueError("an MI term needs at least one decoded user and one receiver")
        if set(self.decoded) & set(self.given):
            raise ValueError("decoded and conditioned user sets overlap")


@dataclass(frozen=True)
class Expression:
    expression_id: str
    groups: tuple[tuple[MiTerm, ...], ...]

    def __post_init__(self):
        if not self.groups or any(not g for g in self.groups):
            raise ValueError("expression needs at least one nonempty term group")

    @property
    def is_sum_type(self) -> bool:
        return len(self.groups) == 1

    def max_index(self) -> int:
        return max(
            max(itertools.chain(t.decoded, t.receivers, t.given, (0,)))
            for g in self.groups
            for t in g
        )


@dataclass(frozen=True)
class DecodeOrder:
    """Per-receiver decoding sequence; entry j lists the users receiver j decodes,
    in order, ending with its own user."""

    orders: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        k = len(self.orders)
        for j, seq in enumerate(self.orders):
            if not seq or seq[-1] != j:
                raise ValueError(f"receiver {j} must decode its own user last, got {seq}")
            if len(set(seq)) != len(seq):
                raise ValueError(f"receiver {j} decodes a user twice: {seq}")
            if any(u < 0 or u >= k for u in seq):
                raise ValueError(f"receiver {j} lists an out-of-range user: {seq}")

    @property
    def num_users(self) -> int:
        return len(self.orders)


def canonical_decode_order(k: int) -> DecodeOrder:
    """Receiver j decodes users K-1, K-2, ..., j (later receivers first, own last)."""
    return DecodeOrder(tuple(tuple(range(k - 1, j - 1, -1)) for j in range(k)))


def per_user_chain_expression(k: int) -> Expression:
    """Sum of I(X_i; Y_i | X_{i+1..K-1}, Q) over all users."""
    if k < 2:
        raise ValueError("need at least two users")
    terms = tuple(MiTerm((i,), (i,), tuple(range(i + 1, k))) for i in range(k))
    return Expression("per_user_chain", (terms,))


def _validate_perm_cuts(k: int, perm: Sequence[int], cuts: Sequence[int]):
    perm = tuple(int(p) for p in perm)
    cuts = tuple(int(c) for c in cuts)
    if sorted(perm) != list(range(k)):
        raise ValueError(f"perm {perm} is not a permutation of 0..{k - 1}")
    if not cuts or cuts[-1] != k or any(c < 1 for c in cuts):
        raise ValueError(f"cuts {cuts} must be positive prefix lengths ending at {k}")
    if any(b <= a for a, b in zip(cuts, cuts[1:])):
        raise ValueError(f"cuts {cuts} must be strictly increasing")
    return perm, cuts


def grouped_chain_expression(k: int, perm: Sequence[int], cuts: Sequence[int]) -> Expression:
    """Permuted, grouped variant of the per-user chain.

    ``perm`` orders the users; ``cuts`` are strictly increasing prefix lengths
    ending at K.  Block theta is perm[cuts[theta-1]:cuts[theta]]; its term is
    I(X_block; Y_{perm[cut-1]} | X_later_blocks, Q).
    """
    perm, cuts = _validate_perm_cuts(k, perm, cuts)
    terms = []
    prev = 0
    for cut in cuts:
        block = perm[prev:cut]
        later = perm[cut:]
        terms.append(MiTerm(tuple(block), (perm[cut - 1],), tuple(later)))
        prev = cut
    return Expression(
        f"grouped_chain(perm={','.join(map(str, perm))};cuts={','.join(map(str, cuts))})",
        (tuple(terms),),
    )


def _validate_groups(k: int, groups: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    groups = tuple(tuple(int(i) for i in g) for g in groups)
    flat = list(itertools.chain.from_iterable(groups))
    if any(not g for g in groups):
        raise ValueError("receiver groups must be nonempty")
    if sorted(flat) != list(range(k)):
        raise ValueError(f"groups {groups} must partition the receivers 0..{k - 1}")
    return groups


def receiver_groups_expression(k: int, groups: Sequence[Sequence[int]]) -> Expression:
    """Chain expression over a partition of the receivers into groups.

    Group i contributes I(X_G(i); Y_G(i) | X_G(i+1..), Q), where X_G(i) are the
    users paired with the receivers in the group.  Singleton groups recover the
    per-user chain.
    """
    groups = _validate_groups(k, groups)
    terms = []
    for i, group in enumerate(groups):
        later = tuple(itertools.chain.from_iterable(groups[i + 1:]))
        terms.append(MiTerm(tuple(group), tuple(group), later))
    label = "|".join(",".join(map(str, g)) for g in groups)
    return Expression(f"receiver_groups({label})", (tuple(terms),))


def tin_expression(k: int) -> Expression:
    """Treating interference as noise: sum of I(X_i; Y_i | Q)."""
    if k < 2:
        raise ValueError("need at least two users")
    terms = tuple(MiTerm((i,), (i,)) for i in range(k))
    return Expression("tin_sum", (terms,))


def successive_decoding_expression(order: DecodeOrder) -> Expression:
    """Min-of-sums expression for the successive decoding scheme.

    Each user's rate is limited at every receiver that decodes it by the MI of
    that decoding step (earlier-decoded users subtracted, the rest noise).  The
    groups enumerate one constraint choice per user; the minimum over groups
    equals the sum of per-user minima.
    """
    k = order.num_users
    per_user: list[list[MiTerm]] = [[] for _ in range(k)]
    for j, seq in enumerate(order.orders):
        done: list[int] = []
        for u in seq:
            per_user[u].append(MiTerm((u,), (j,), tuple(sorted(done))))
            done.append(u)
    groups = tuple(tuple(choice) for choice in itertools.product(*per_user))
    label = ";".join(",".join(map(str, seq)) for seq in order.orders)
    return Expression(f"successive(order={label})", groups)
