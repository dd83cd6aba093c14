"""Closed-form computations for real Gaussian interference channels.

Channel model: Y_j = sum_i gains[j, i] * X_i + Z_j with unit-variance noise and
per-user power budgets.  All rates are in bits.  Every bound and achievable
rate here is evaluated at independent full-power Gaussian inputs with
degenerate time sharing; values are certified only through the regime
classifiers, everything else is heuristic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateChannelError
from .expressions import (
    DecodeOrder,
    Expression,
    canonical_decode_order,
    grouped_chain_expression,
    per_user_chain_expression,
    receiver_groups_expression,
)
from .reports import (
    INTERFERENCE_FREE,
    NO_REGIME,
    PROPORTIONAL_DEGRADED,
    RANK_ONE_DEGRADED,
    THREE_USER_SUCCESSIVE,
    TWO_USER_MIXED,
    BoundResult,
    ConditionCheck,
    RegimeReport,
)

RATIO_RTOL = 1e-9  # relative tolerance for gain-ratio equality conditions
_DIAG_TOL = 1e-12


@dataclass(frozen=True)
class GaussianIC:
    """Gain matrix (gains[j, i] = coupling of transmitter i into receiver j) plus
    power budgets; receiver noise variances are fixed at 1."""

    gains: np.ndarray
    powers: np.ndarray

    def __post_init__(self):
        gains = np.array(self.gains, dtype=float)
        powers = np.array(self.powers, dtype=float)
        if gains.ndim != 2 or gains.shape[0] != gains.shape[1]:
            raise ValueError(f"gains must be a square matrix, got shape {gains.shape}")
        k = gains.shape[0]
        if k < 2:
            raise ValueError("need at least two users")
        if powers.shape != (k,):
            raise ValueError(f"powers must have length {k}, got shape {powers.shape}")
        if not np.all(np.isfinite(gains)):
            raise ValueError("gains must be finite")
        if not np.all(np.isfinite(powers)) or np.any(powers < 0.0):
            raise ValueError("powers must be finite and nonnegative")
        gains.flags.writeable = False
        powers.flags.writeable = False
        object.__setattr__(self, "gains", gains)
        object.__setattr__(self, "powers", powers)

    @property
    def num_users(self) -> int:
        return self.gains.shape[0]

    def is_normalized(self, tol: float = _DIAG_TOL) -> bool:
        return bool(np.all(np.abs(np.diag(self.gains) - 1.0) <= tol))


def psi(x):
    """Gaussian point-to-point capacity function 0.5 * log2(1 + x), x >= 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0):
        raise ValueError(f"psi requires a nonnegative argument, got {x}")
    out = 0.5 * np.log2(1.0 + x)
    return float(out) if out.ndim == 0 else out


def normalize(channel: GaussianIC) -> GaussianIC:
    """Equivalent channel with unit direct gains.

    Rescales each input by its direct gain (X_i' = a_ii X_i, so P_i' = a_ii^2 P_i
    and column i of the gain matrix is divided by a_ii).  This is a bijective
    relabeling of the inputs, so every mutual information against every receiver
    is preserved exactly.
    """
    diag = np.diag(channel.gains)
    if np.any(diag == 0.0):
        raise DegenerateChannelError("zero direct gain; channel cannot be normalized")
    return GaussianIC(channel.gains / diag[None, :], channel.powers * diag**2)


def _as_index_set(users: Iterable[int], k: int, what: str) -> frozenset[int]:
    users = frozenset(int(u) for u in users)
    if any(u < 0 or u >= k for u in users):
        raise ValueError(f"{what} {sorted(users)} out of range for {k} users")
    return users


def gaussian_cmi(
    channel: GaussianIC,
    decoded: Iterable[int],
    known: Iterable[int],
    receiver: int,
) -> float:
    """I(X_decoded ; Y_receiver | X_known) for independent full-power Gaussian inputs.

    Known users are subtracted, users in neither set are noise:
    psi( sum_{i in decoded} a_ji^2 P_i / (1 + sum_{i elsewhere} a_ji^2 P_i) ).
    """
    k = channel.num_users
    dec = _as_index_set(decoded, k, "decoded users")
    kno = _as_index_set(known, k, "known users")
    if dec & kno:
        raise ValueError(f"decoded and known users overlap: {sorted(dec & kno)}")
    if not 0 <= receiver < k:
        raise ValueError(f"receiver {receiver} out of range")
    row = channel.gains[receiver]
    strength = row**2 * channel.powers
    signal = sum(strength[i] for i in sorted(dec))
    noise = 1.0 + sum(strength[i] for i in range(k) if i not in dec and i not in kno)
    return psi(signal / noise)


def gaussian_group_cmi(
    channel: GaussianIC,
    decoded: Iterable[int],
    known: Iterable[int],
    receivers: Iterable[int],
) -> float:
    """Vector version of :func:`gaussian_cmi` for a set of receivers (log-det form)."""
    k = channel.num_users
    dec = _as_index_set(decoded, k, "decoded users")
    kno = _as_index_set(known, k, "known users")
    if dec & kno:
        raise ValueError(f"decoded and known users overlap: {sorted(dec & kno)}")
    recv = sorted(_as_index_set(receivers, k, "receivers"))
    if not recv:
        raise ValueError("need at least one receiver")
    rows = channel.gains[recv, :]

    def logdet_cov(active: list[int]) -> float:
        cov = np.eye(len(recv))
        if active:
            sub = rows[:, active]
            cov = cov + (sub * channel.powers[active]) @ sub.T
        return float(np.linalg.slogdet(cov)[1])

    noise_users = [i for i in range(k) if i not in dec and i not in kno]
    full = logdet_cov(sorted(dec) + noise_users)
    residual = logdet_cov(noise_users)
    return 0.5 * (full - residual) / math.log(2.0)


def check_proportional_degradation(
    channel: GaussianIC,
    pair: tuple[int, int],
    decoded_users: Iterable[int],
    conditioned_users: Iterable[int] = (),
) -> float | None:
    """Common gain ratio alpha making receiver ``pair[0]`` a degraded version of
    ``pair[1]`` given the conditioned users.

    Returns alpha if a_i / b_i is constant over the decoded users with
    |alpha| <= 1 (a = row of pair[0], b = row of pair[1]); users in neither set
    must have zero gain into both receivers.  Returns None when the condition
    fails (including b_i = 0 with a_i != 0).
    """
    k = channel.num_users
    a_recv, b_recv = pair
    dec = _as_index_set(decoded_users, k, "decoded users")
    cond = _as_index_set(conditioned_users, k, "conditioned users")
    if not dec:
        raise ValueError("decoded user set must be nonempty")
    if dec & cond:
        raise ValueError(f"decoded and conditioned users overlap: {sorted(dec & cond)}")
    a_row = channel.gains[a_recv]
    b_row = channel.gains[b_recv]
    for i in range(k):
        if i not in dec and i not in cond:
            if a_row[i] != 0.0 or b_row[i] != 0.0:
                return None
    ratios = []
    for i in sorted(dec):
        if b_row[i] == 0.0:
            if a_row[i] != 0.0:
                return None
            continue  # 0/0: unconstrained
        ratios.append(a_row[i] / b_row[i])
    if not ratios:
        return 0.0
    alpha = ratios[0]
    for r in ratios[1:]:
        if not math.isclose(r, alpha, rel_tol=RATIO_RTOL, abs_tol=1e-12):
            return None
    if abs(alpha) > 1.0 + 1e-12:
        return None
    return float(alpha)


def _require_normalized(channel: GaussianIC, who: str):
    if not channel.is_normalized(1e-9):
        raise ValueError(f"{who} needs a normalized channel (unit direct gains); call normalize() first")


def _ratio_check(cond_id: str, lhs: float, num: float, den: float) -> ConditionCheck:
    """Equality check lhs == num/den at relative tolerance RATIO_RTOL."""
    if den == 0.0:
        return ConditionCheck(cond_id, False, math.inf)
    ratio = num / den
    margin = lhs - ratio
    holds = math.isclose(lhs, ratio, rel_tol=RATIO_RTOL, abs_tol=1e-12)
    return ConditionCheck(cond_id, holds, margin)


def sum_capacity_three_user(channel: GaussianIC) -> float:
    """Certified three-user sum rate:
    min( psi(P1 + a12^2 P2) + psi(P3 / (a31^2 P1 + a32^2 P2 + 1)),
         psi(P1 + a12^2 P2 + a13^2 P3) ).

    Callers wanting a capacity claim must have verified the three-user regime
    conditions first (see :func:`classify_three_user`).
    """
    if channel.num_users != 3:
        raise ValueError("three-user formula requires K = 3")
    g, p = channel.gains, channel.powers
    first = psi(p[0] + g[0, 1] ** 2 * p[1]) + psi(
        p[2] / (g[2, 0] ** 2 * p[0] + g[2, 1] ** 2 * p[1] + 1.0)
    )
    second = psi(p[0] + g[0, 1] ** 2 * p[1] + g[0, 2] ** 2 * p[2])
    return min(first, second)


def classify_three_user(channel: GaussianIC) -> RegimeReport:
    """Check the three-user successive-decoding regime and certify its capacity.

    Gain conditions: |a12| >= 1, |a31| <= 1, |a23| >= 1, a31 = a32/a12 and
    a12 = a13/a23 (relative tolerance 1e-9); power condition:
    P1 + 1 >= a12^2 (a21^2 P1 + 1).  When everything holds the capacity equals
    :func:`sum_capacity_three_user` and successive decoding achieves it.
    """
    if channel.num_users != 3:
        raise ValueError("classify_three_user requires K = 3")
    _require_normalized(channel, "classify_three_user")
    g, p = channel.gains, channel.powers
    a12, a13 = g[0, 1], g[0, 2]
    a21, a23 = g[1, 0], g[1, 2]
    a31, a32 = g[2, 0], g[2, 1]
    checks = [
        ConditionCheck("abs_a12_ge_1", abs(a12) >= 1.0, abs(a12) - 1.0),
        ConditionCheck("abs_a31_le_1", abs(a31) <= 1.0, 1.0 - abs(a31)),
        ConditionCheck("abs_a23_ge_1", abs(a23) >= 1.0, abs(a23) - 1.0),
        _ratio_check("a31_eq_a32_over_a12", a31, a32, a12),
        _ratio_check("a12_eq_a13_over_a23", a12, a13, a23),
    ]
    power_margin = (p[0] + 1.0) - a12**2 * (a21**2 * p[0] + 1.0)
    checks.append(ConditionCheck("power_cross_tradeoff", power_margin >= -1e-12, power_margin))
    certified = sum_capacity_three_user(channel) if all(c.holds for c in checks) else None
    return RegimeReport(THREE_USER_SUCCESSIVE, tuple(checks), certified)


def mixed_regime_two_user(channel: GaussianIC) -> RegimeReport:
    """Two-user mixed-interference regime: |a12| >= 1 and |a21| <= 1.

    When both hold the sum capacity is
    min( psi(P1 + a12^2 P2), psi(P1) + psi(P2 / (a21^2 P1 + 1)) ),
    achieved by successive decoding with user 2 decoded first at receiver 1.
    """
    if channel.num_users != 2:
        raise ValueError("mixed_regime_two_user requires K = 2")
    _require_normalized(channel, "mixed_regime_two_user")
    g, p = channel.gains, channel.powers
    a12, a21 = g[0, 1], g[1, 0]
    checks = (
        ConditionCheck("abs_a12_ge_1", abs(a12) >= 1.0, abs(a12) - 1.0),
        ConditionCheck("abs_a21_le_1", abs(a21) <= 1.0, 1.0 - abs(a21)),
    )
    certified = None
    if all(c.holds for c in checks):
        certified = min(
            psi(p[0] + a12**2 * p[1]),
            psi(p[0]) + psi(p[1] / (a21**2 * p[0] + 1.0)),
        )
    return RegimeReport(TWO_USER_MIXED, checks, certified)


def rank_one_degraded_check(channel: GaussianIC, rtol: float = 1e-9) -> bool:
    """True iff the gain matrix has numerical rank one (second singular value
    below rtol times the first); such a channel is degraded."""
    s = np.linalg.svd(channel.gains, compute_uv=False)
    return bool(s[1] < rtol * s[0])


def interference_free_report(channel: GaussianIC) -> RegimeReport:
    """Trivial regime: no cross gains at all.  Each link is an isolated
    point-to-point channel, so the sum capacity is the sum of the link
    capacities (per-link converse, treating-interference-as-noise achieves it)."""
    off = channel.gains - np.diag(np.diag(channel.gains))
    worst = float(np.abs(off).max())
    check = ConditionCheck("all_cross_gains_zero", worst == 0.0, -worst)
    capacity = None
    if check.holds:
        capacity = float(np.sum(psi(np.diag(channel.gains) ** 2 * channel.powers)))
    return RegimeReport(INTERFERENCE_FREE, (check,), capacity)


def proportional_degradation_report(channel: GaussianIC) -> RegimeReport:
    """Try to order the receivers into a degradation chain via pairwise common
    gain ratios over all users; no capacity value is attached (the capacity is
    the per-user chain maximum, which has no closed form here)."""
    k = channel.num_users
    all_users = tuple(range(k))
    order = sorted(range(k), key=lambda j: -float(np.sum(channel.gains[j] ** 2 * channel.powers)))
    checks = []
    for a_recv, b_recv in zip(order[1:], order[:-1]):
        alpha = check_proportional_degradation(channel, (a_recv, b_recv), all_users)
        cond_id = f"ratio_chain_Y{a_recv + 1}_from_Y{b_recv + 1}"
        if alpha is None:
            checks.append(ConditionCheck(cond_id, False, -math.inf))
        else:
            checks.append(ConditionCheck(cond_id, True, 1.0 - abs(alpha)))
    return RegimeReport(PROPORTIONAL_DEGRADED, tuple(checks), None)


def successive_decoding_sum_rate(channel: GaussianIC, order: DecodeOrder) -> float:
    """Sum rate of the successive decoding scheme under ``order``.

    At each receiver the listed users are decoded in turn (earlier ones
    subtracted, the rest noise), and each user's rate is the minimum of its
    decoding constraints over all receivers that decode it.  The total equals
    the minimum over the combined constraint expressions of the scheme.
    """
    k = channel.num_users
    if order.num_users != k:
        raise ValueError(f"decode order is for {order.num_users} users, channel has {k}")
    best = [math.inf] * k
    for j, seq in enumerate(order.orders):
        done: list[int] = []
        for u in seq:
            rate = gaussian_cmi(channel, (u,), done, j)
            best[u] = min(best[u], rate)
            done.append(u)
    return float(sum(best))


def evaluate_expression_gaussian(channel: GaussianIC, expr: Expression) -> float:
    """Evaluate a sum-rate expression at independent full-power Gaussian inputs
    with degenerate time sharing (single receivers via the psi closed form,
    receiver groups via log-determinants)."""
    if expr.max_index() >= channel.num_users:
        raise ValueError(f"expression {expr.expression_id} indexes beyond {channel.num_users} users")
    values = []
    for group in expr.groups:
        total = 0.0
        for term in group:
            if len(term.receivers) == 1:
                total += gaussian_cmi(channel, term.decoded, term.given, term.receivers[0])
            else:
                total += gaussian_group_cmi(channel, term.decoded, term.given, term.receivers)
        values.append(total)
    return min(values)


def theorem_bound_gaussian(channel: GaussianIC, expr: Expression) -> BoundResult:
    """Evaluate an outer-bound expression (per-user chain, grouped chain, or
    receiver-group chain) for this channel.  Marked heuristic: certification is
    the classifiers' job, not this evaluator's."""
    value = evaluate_expression_gaussian(channel, expr)
    return BoundResult(value=value, expression_id=expr.expression_id, certified=False)


def heuristic_outer_bounds(channel: GaussianIC) -> list[BoundResult]:
    """Convenience set of outer-bound evaluations used for reporting: the
    per-user chain plus, for each receiver, the single-cut full-decoding bound.
    Each value bounds the sum rate only when its own dominance conditions hold;
    all are reported as heuristic."""
    k = channel.num_users
    out = [theorem_bound_gaussian(channel, per_user_chain_expression(k))]
    for j in range(k):
        perm = tuple(i for i in range(k) if i != j) + (j,)
        out.append(theorem_bound_gaussian(channel, grouped_chain_expression(k, perm, (k,))))
    return out


def regime_matched_outer(channel: GaussianIC) -> float:
    """Value of the outer-bound expression family matched to the regime
    classifier for this channel size (the expression whose minimum equals the
    certified capacity when the regime conditions hold)."""
    k = channel.num_users
    off = channel.gains - np.diag(np.diag(channel.gains))
    if float(np.abs(off).max()) == 0.0:
        return theorem_bound_gaussian(channel, per_user_chain_expression(k)).value
    if k == 3:
        return sum_capacity_three_user(channel)
    if k == 2:
        g, p = channel.gains, channel.powers
        return min(
            psi(p[0] + g[0, 1] ** 2 * p[1]),
            psi(p[0]) + psi(p[1] / (g[1, 0] ** 2 * p[0] + 1.0)),
        )
    return theorem_bound_gaussian(channel, per_user_chain_expression(k)).value


__all__ = [
    "GaussianIC",
    "psi",
    "normalize",
    "gaussian_cmi",
    "gaussian_group_cmi",
    "check_proportional_degradation",
    "classify_three_user",
    "sum_capacity_three_user",
    "mixed_regime_two_user",
    "rank_one_degraded_check",
    "proportional_degradation_report",
    "successive_decoding_sum_rate",
    "evaluate_expression_gaussian",
    "theorem_bound_gaussian",
    "heuristic_outer_bounds",
    "DecodeOrder",
    "canonical_decode_order",
    "per_user_chain_expression",
    "grouped_chain_expression",
    "receiver_groups_expression",
]
