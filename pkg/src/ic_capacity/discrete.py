"""Discrete memoryless interference channels.

Evaluation and maximization of sum-rate expressions over product input
distributions, Monte Carlo falsification of less-noisy condition families, and
construction of physically degraded test channels.  Input/output indices are
0-based; display strings use the 1-based X1/Y1 labels.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import NotManyToOneError, SizeCapError
from .expressions import Expression, MiTerm, tin_expression
from .joints import (
    DEFAULT_SIZE_CAP,
    JointDist,
    _cmi_axes,
    _cmi_axes_batch,
    sample_simplex,
)
from .reports import BoundResult, SearchStats

PROB_TOL = 1e-12
VIOLATION_SLACK = 1e-9
_ENGINE_BATCH = 4096  # fixed so results do not depend on memory-driven chunking


@dataclass(frozen=True)
class DiscreteIC:
    """K-user channel with finite alphabets and a dense transition tensor
    P(y_1..y_K | x_1..x_K), shape (*input_cards, *output_cards)."""

    input_cards: tuple[int, ...]
    output_cards: tuple[int, ...]
    transition: np.ndarray

    def __post_init__(self):
        in_cards = tuple(int(c) for c in self.input_cards)
        out_cards = tuple(int(c) for c in self.output_cards)
        if len(in_cards) != len(out_cards):
            raise ValueError("need one output per user")
        if len(in_cards) < 2:
            raise ValueError("need at least two users")
        if any(c < 1 for c in in_cards + out_cards):
            raise ValueError("alphabet sizes must be positive")
        t = np.array(self.transition, dtype=float)
        if t.shape != in_cards + out_cards:
            raise ValueError(f"transition shape {t.shape} != {in_cards + out_cards}")
        if t.min() < 0.0:
            raise ValueError("transition probabilities must be nonnegative")
        sums = t.reshape(int(np.prod(in_cards)), -1).sum(axis=1)
        worst = float(np.abs(sums - 1.0).max())
        if worst > PROB_TOL:
            raise ValueError(f"transition rows deviate from 1 by {worst:.2e} (> {PROB_TOL})")
        t.flags.writeable = False
        object.__setattr__(self, "input_cards", in_cards)
        object.__setattr__(self, "output_cards", out_cards)
        object.__setattr__(self, "transition", t)

    @property
    def num_users(self) -> int:
        return len(self.input_cards)

    def output_marginal(self, receivers: Sequence[int]) -> np.ndarray:
        """P(selected outputs | inputs): transition summed over the other outputs."""
        k = self.num_users
        keep = sorted(set(int(r) for r in receivers))
        if any(r < 0 or r >= k for r in keep):
            raise ValueError(f"receivers {receivers} out of range")
        drop = tuple(k + j for j in range(k) if j not in keep)
        return self.transition.sum(axis=drop) if drop else self.transition


def bsc_kernel(flip: float) -> np.ndarray:
    """Binary symmetric channel matrix with crossover probability ``flip``."""
    if not 0.0 <= flip <= 1.0:
        raise ValueError(f"flip probability must be in [0, 1], got {flip}")
    return np.array([[1.0 - flip, flip], [flip, 1.0 - flip]])


def identity_kernel(card: int) -> np.ndarray:
    return np.eye(card)


def parallel_ic(kernels: Sequence[np.ndarray]) -> DiscreteIC:
    """Interference-free channel: receiver i sees its own input through kernels[i]."""
    kernels = [np.asarray(k, dtype=float) for k in kernels]
    in_cards = tuple(k.shape[0] for k in kernels)
    out_cards = tuple(k.shape[1] for k in kernels)
    n = len(kernels)
    t = np.ones(in_cards + out_cards)
    for i, kern in enumerate(kernels):
        shape = [1] * (2 * n)
        shape[i] = kern.shape[0]
        shape[n + i] = kern.shape[1]
        t = t * kern.reshape(shape)
    return DiscreteIC(in_cards, out_cards, t)


def many_to_one_ic(private_kernels: Sequence[np.ndarray], last_kernel: np.ndarray) -> DiscreteIC:
    """Channel where only the last receiver sees interference.

    ``private_kernels[i]`` is P(y_i | x_i) for users 0..K-2; ``last_kernel`` is
    P(y_K | x_1..x_K) with shape (*input_cards, out_card).
    """
    private_kernels = [np.asarray(k, dtype=float) for k in private_kernels]
    last = np.asarray(last_kernel, dtype=float)
    k = len(private_kernels) + 1
    if last.ndim != k + 1:
        raise ValueError(f"last kernel must have {k} input axes plus one output axis")
    in_cards = tuple(last.shape[:k])
    if any(private_kernels[i].shape[0] != in_cards[i] for i in range(k - 1)):
        raise ValueError("private kernel input alphabets disagree with the last kernel")
    out_cards = tuple(kern.shape[1] for kern in private_kernels) + (last.shape[-1],)
    t = np.ones(in_cards + out_cards)
    for i, kern in enumerate(private_kernels):
        shape = [1] * (2 * k)
        shape[i] = kern.shape[0]
        shape[k + i] = kern.shape[1]
        t = t * kern.reshape(shape)
    shape = list(in_cards) + [1] * (k - 1) + [last.shape[-1]]
    t = t * last.reshape(shape)
    return DiscreteIC(in_cards, out_cards, t)


def build_degraded_chain(
    input_cards: Sequence[int],
    front_end: np.ndarray,
    kernels: Sequence[np.ndarray],
) -> DiscreteIC:
    """Physically degraded channel: inputs -> Y1 -> Y2 -> ... through garbling kernels.

    ``front_end`` is P(y_1 | x_1..x_K) with shape (*input_cards, m_1); each
    kernel is P(y_{i+1} | y_i) and must chain dimensionally.  All outputs of
    the result are (possibly garbled) functions of Y1, so every later receiver
    is less noisy-dominated by every earlier one by construction.
    """
    in_cards = tuple(int(c) for c in input_cards)
    front = np.asarray(front_end, dtype=float)
    if front.shape[: len(in_cards)] != in_cards:
        raise ValueError(f"front end shape {front.shape} does not start with {in_cards}")
    if front.ndim != len(in_cards) + 1:
        raise ValueError("front end must have exactly one output axis")
    if len(kernels) != len(in_cards) - 1:
        raise ValueError(f"need {len(in_cards) - 1} kernels for {len(in_cards)} receivers")
    t = front
    prev_card = front.shape[-1]
    for kern in kernels:
        kern = np.asarray(kern, dtype=float)
        if kern.ndim != 2 or kern.shape[0] != prev_card:
            raise ValueError(f"kernel shape {kern.shape} does not chain from alphabet {prev_card}")
        t = np.einsum("...a,ab->...ab", t, kern)
        prev_card = kern.shape[1]
    out_cards = t.shape[len(in_cards):]
    return DiscreteIC(in_cards, tuple(out_cards), t)


@dataclass(frozen=True)
class ProductInput:
    """Time-sharing weights plus per-branch, per-user input distributions."""

    q_weights: np.ndarray
    branch_dists: tuple[tuple[np.ndarray, ...], ...]

    def __post_init__(self):
        w = np.array(self.q_weights, dtype=float)
        if w.ndim != 1 or w.size < 1:
            raise ValueError("q_weights must be a nonempty vector")
        if w.min() < 0.0 or abs(float(w.sum()) - 1.0) > PROB_TOL:
            raise ValueError("q_weights must be a probability vector")
        branches = []
        for m, branch in enumerate(self.branch_dists):
            dists = []
            for i, d in enumerate(branch):
                d = np.array(d, dtype=float)
                if d.ndim != 1 or d.min() < 0.0 or abs(float(d.sum()) - 1.0) > PROB_TOL:
                    raise ValueError(f"branch {m}, user {i}: not a probability vector")
                d.flags.writeable = False
                dists.append(d)
            branches.append(tuple(dists))
        if len(branches) != w.size:
            raise ValueError("one branch of input distributions per time-sharing weight")
        w.flags.writeable = False
        object.__setattr__(self, "q_weights", w)
        object.__setattr__(self, "branch_dists", tuple(branches))

    @property
    def q_card(self) -> int:
        return self.q_weights.size

    @classmethod
    def uniform(cls, channel: DiscreteIC, q_card: int = 1) -> "ProductInput":
        branch = tuple(np.full(c, 1.0 / c) for c in channel.input_cards)
        return cls(np.full(q_card, 1.0 / q_card), tuple(branch for _ in range(q_card)))

    def to_json(self) -> dict:
        return {
            "q_weights": self.q_weights.tolist(),
            "branch_dists": [[d.tolist() for d in branch] for branch in self.branch_dists],
        }


def _assemble_probs(
    q_weights: np.ndarray,
    branch_dists: Sequence[Sequence[np.ndarray]],
    channel: DiscreteIC,
) -> np.ndarray:
    """Joint tensor over (Q, X_1..X_K, Y_1..Y_K) without JointDist overhead."""
    k = channel.num_users
    m = len(q_weights)
    p = np.asarray(q_weights, dtype=float).reshape((m,) + (1,) * k)
    for i in range(k):
        stacked = np.stack([np.asarray(branch_dists[q][i], dtype=float) for q in range(m)])
        shape = [m] + [1] * k
        shape[1 + i] = channel.input_cards[i]
        p = p * stacked.reshape(shape)
    p = p.reshape(p.shape + (1,) * k) * channel.transition[None, ...]
    return p


def assemble_joint(
    inputs: ProductInput,
    channel: DiscreteIC,
    *,
    size_cap: int = DEFAULT_SIZE_CAP,
) -> JointDist:
    """Joint distribution over (Q, X1..XK, Y1..YK) induced by a product input.

    P(q, x, y) = P(q) * prod_i P(x_i | q) * P(y | x); the channel acts once per
    use, so the joint factors exactly this way.
    """
    k = channel.num_users
    for m, branch in enumerate(inputs.branch_dists):
        if len(branch) != k:
            raise ValueError(f"branch {m} has {len(branch)} user distributions, need {k}")
        for i, d in enumerate(branch):
            if d.size != channel.input_cards[i]:
                raise ValueError(
                    f"branch {m}, user {i}: distribution size {d.size} != alphabet {channel.input_cards[i]}"
                )
    probs = _assemble_probs(inputs.q_weights, inputs.branch_dists, channel)
    variables = [("Q", inputs.q_card)]
    variables += [(f"X{i + 1}", c) for i, c in enumerate(channel.input_cards)]
    variables += [(f"Y{j + 1}", c) for j, c in enumerate(channel.output_cards)]
    return JointDist(variables, probs, size_cap=size_cap)


def evaluate_expression(channel: DiscreteIC, inputs: ProductInput, expr: Expression) -> float:
    """Value of a sum-rate expression at a given product input, in bits.

    Terms are conditional MIs on the assembled joint with Q always conditioned;
    the expression value is the minimum over its term groups of the group sums.
    """
    k = channel.num_users
    if expr.max_index() >= k:
        raise ValueError(f"expression {expr.expression_id} indexes beyond {k} users")
    probs = _assemble_probs(inputs.q_weights, inputs.branch_dists, channel)
    return _expression_on_probs(probs, k, expr)


def _expression_on_probs(probs: np.ndarray, k: int, expr: Expression) -> float:
    q_ax = (0,)
    best = math.inf
    for group in expr.groups:
        total = 0.0
        for term in group:
            a = tuple(1 + i for i in term.decoded)
            b = tuple(1 + k + j for j in term.receivers)
            c = tuple(1 + i for i in term.given) + q_ax
            total += _cmi_axes(probs, a, b, c)
        best = min(best, total)
    return best


@dataclass(frozen=True)
class SearchConfig:
    """Knobs for the multi-start coordinate-ascent search."""

    restarts: int = 64
    tol: float = 1e-9
    q_card: int | None = None  # None: 1 for sum-type, #groups for min-type
    max_sweeps: int = 50

    def __post_init__(self):
        if self.restarts < 1 or self.max_sweeps < 1:
            raise ValueError("restarts and max_sweeps must be >= 1")
        if self.tol <= 0.0:
            raise ValueError("tol must be positive")
        if self.q_card is not None and self.q_card < 1:
            raise ValueError("q_card must be >= 1")


def _golden_max(g, lo: float, hi: float, iters: int = 45) -> tuple[float, float]:
    """Golden-section maximization of g on [lo, hi]; returns (t, g(t))."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    g1, g2 = g(x1), g(x2)
    for _ in range(iters):
        if g1 < g2:
            lo, x1, g1 = x1, x2, g2
            x2 = lo + invphi * (hi - lo)
            g2 = g(x2)
        else:
            hi, x2, g2 = x2, x1, g1
            x1 = hi - invphi * (hi - lo)
            g1 = g(x1)
    return (x1, g1) if g1 >= g2 else (x2, g2)


def maximize_expression(
    channel: DiscreteIC,
    expr: Expression,
    cfg: SearchConfig | None = None,
    rng: np.random.Generator | None = None,
) -> BoundResult:
    """Maximize an expression over product inputs by multi-start coordinate ascent.

    Each restart draws random simplex points for every coordinate (restart 0 is
    uniform), then sweeps the coordinates, improving each by a derivative-free
    line search toward/away from the simplex vertices (coarse grid plus
    golden-section refinement) until a sweep improves by less than ``tol``.
    Sum-type expressions force a degenerate time-sharing variable (a mixture's
    value is the average of its branch values, so degenerate Q attains the
    max); min-type expressions default to one branch per term group.  The
    search is a heuristic: results are never marked certified.
    """
    cfg = cfg or SearchConfig()
    rng = rng or np.random.default_rng(0)
    k = channel.num_users
    if expr.max_index() >= k:
        raise ValueError(f"expression {expr.expression_id} indexes beyond {k} users")
    q_card = cfg.q_card if cfg.q_card is not None else (1 if expr.is_sum_type else len(expr.groups))

    cards = channel.input_cards
    size = q_card * int(np.prod(cards, dtype=np.int64)) * int(np.prod(channel.output_cards, dtype=np.int64))
    if size > DEFAULT_SIZE_CAP:
        raise SizeCapError(f"joint tensor of {size} entries exceeds the cap of {DEFAULT_SIZE_CAP}")

    # state: q weights (index None) plus one simplex vector per (branch, user)
    coords: list[tuple[int, int] | None] = [(m, i) for m in range(q_card) for i in range(k)]
    if q_card > 1:
        coords.append(None)

    def objective(qw: np.ndarray, dists: list[list[np.ndarray]]) -> float:
        probs = _assemble_probs(qw, dists, channel)
        return _expression_on_probs(probs, k, expr)

    def improve_coord(vec: np.ndarray, setter, current: float) -> tuple[np.ndarray, float]:
        d = vec.size
        if d == 1:
            return vec, current
        best_vec, best_val = vec, current
        for vertex in range(1 if d == 2 else d):
            v = best_vec
            if v[vertex] >= 1.0 - 1e-15:
                continue
            t_lo = -v[vertex] / (1.0 - v[vertex])

            def g(t: float) -> float:
                cand = (1.0 - t) * v + t * np.eye(d)[vertex]
                cand = np.clip(cand, 0.0, None)
                cand /= cand.sum()
                return setter(cand)

            ts = np.linspace(t_lo, 1.0, 9)
            vals = [g(t) for t in ts]
            j = int(np.argmax(vals))
            lo = ts[max(j - 1, 0)]
            hi = ts[min(j + 1, len(ts) - 1)]
            t_star, val = _golden_max(g, lo, hi)
            if val > best_val:
                cand = (1.0 - t_star) * v + t_star * np.eye(d)[vertex]
                cand = np.clip(cand, 0.0, None)
                best_vec, best_val = cand / cand.sum(), val
        return best_vec, best_val

    best_val = -math.inf
    best_state: tuple[np.ndarray, list[list[np.ndarray]]] | None = None
    iterations = 0
    trace: list[float] = []

    for restart in range(cfg.restarts):
        if restart == 0:
            qw = np.full(q_card, 1.0 / q_card)
            dists = [[np.full(c, 1.0 / c) for c in cards] for _ in range(q_card)]
        else:
            qw = sample_simplex(q_card, rng)
            dists = [[sample_simplex(c, rng) for c in cards] for _ in range(q_card)]
        value = objective(qw, dists)
        for _ in range(cfg.max_sweeps):
            sweep_start = value
            for coord in coords:
                iterations += 1
                if coord is None:
                    vec = qw

                    def setter(cand, _dists=dists):
                        return objective(cand, _dists)

                else:
                    m, i = coord
                    vec = dists[m][i]

                    def setter(cand, _m=m, _i=i):
                        old = dists[_m][_i]
                        dists[_m][_i] = cand
                        try:
                            return objective(qw, dists)
                        finally:
                            dists[_m][_i] = old

                new_vec, new_val = improve_coord(vec, setter, value)
                if new_val > value:
                    value = new_val
                    if coord is None:
                        qw = new_vec
                    else:
                        dists[coord[0]][coord[1]] = new_vec
            if value - sweep_start < cfg.tol:
                break
        if value > best_val:
            best_val = value
            best_state = (qw.copy(), [[d.copy() for d in branch] for branch in dists])
            trace.append(value)

    assert best_state is not None
    argmax = ProductInput(best_state[0], tuple(tuple(branch) for branch in best_state[1]))
    return BoundResult(
        value=best_val,
        expression_id=expr.expression_id,
        certified=False,
        argmax=argmax,
        search_stats=SearchStats(cfg.restarts, iterations, len(trace)),
    )


# ---------------------------------------------------------------------------
# Quantified less-noisy condition families and their Monte Carlo falsification
# ---------------------------------------------------------------------------


def _mi_label(with_u: bool, decoded: Sequence[int], outputs: Sequence[int], given: Sequence[int], d_card: int) -> str:
    left = (["U"] if with_u else []) + [f"X{i + 1}" for i in sorted(decoded)]
    outs = ",".join(f"Y{j + 1}" for j in sorted(outputs))
    cond = [f"X{i + 1}" for i in sorted(given)] + (["D"] if d_card > 1 else [])
    body = f"{','.join(left)};{outs}"
    return f"I({body}|{','.join(cond)})" if cond else f"I({body})"


@dataclass(frozen=True)
class QuantifiedInequality:
    """One inequality of a condition family: LHS <= RHS must hold for every
    distribution of the stated factorization.

    The sampled joint is P(d, u, x_dep) over the dependency block times an
    arbitrary joint per independent block; decoded inputs sit beside U in both
    mutual informations, given inputs (and D) are conditioned.
    """

    ineq_id: str
    lhs_outputs: tuple[int, ...]
    rhs_outputs: tuple[int, ...]
    decoded: tuple[int, ...]
    given: tuple[int, ...]
    dep_inputs: tuple[int, ...]
    indep_blocks: tuple[tuple[int, ...], ...]
    u_card: int = 1
    d_card: int = 1

    def validate(self, channel: DiscreteIC):
        k = channel.num_users
        covered = list(self.dep_inputs) + [i for blk in self.indep_blocks for i in blk]
        if sorted(covered) != list(range(k)):
            raise ValueError(f"{self.ineq_id}: sampling blocks must cover every input exactly once")
        for group in (self.lhs_outputs, self.rhs_outputs):
            if any(j < 0 or j >= k for j in group) or not group:
                raise ValueError(f"{self.ineq_id}: bad output set {group}")
        if set(self.decoded) & set(self.given):
            raise ValueError(f"{self.ineq_id}: decoded and given inputs overlap")
        if self.u_card < 1 or self.d_card < 1:
            raise ValueError(f"{self.ineq_id}: cardinalities must be >= 1")


@dataclass(frozen=True)
class ConditionSpec:
    """A named family of quantified inequalities to be falsified by sampling."""

    kind: str
    inequalities: tuple[QuantifiedInequality, ...]

    def reversed(self) -> "ConditionSpec":
        """Same family with every inequality direction flipped (adversarial runs)."""
        flipped = tuple(
            QuantifiedInequality(
                ineq_id=f"reversed:{q.ineq_id}",
                lhs_outputs=q.rhs_outputs,
                rhs_outputs=q.lhs_outputs,
                decoded=q.decoded,
                given=q.given,
                dep_inputs=q.dep_inputs,
                indep_blocks=q.indep_blocks,
                u_card=q.u_card,
                d_card=q.d_card,
            )
            for q in self.inequalities
        )
        return ConditionSpec(f"{self.kind}:reversed", flipped)


def _default_u_card(channel: DiscreteIC, dep: Sequence[int]) -> int:
    # functional-representation heuristic: |U| = product of the alphabets U is
    # jointly distributed with is enough to express any violating auxiliary
    return int(np.prod([channel.input_cards[i] for i in dep], dtype=np.int64)) if dep else 1


def _ineq(
    channel: DiscreteIC,
    *,
    lhs: Sequence[int],
    rhs: Sequence[int],
    decoded: Sequence[int] = (),
    given: Sequence[int] = (),
    dep: Sequence[int],
    indep: Sequence[Sequence[int]],
    with_u: bool,
    u_card: int | None = None,
    d_card: int = 1,
) -> QuantifiedInequality:
    uc = 1
    if with_u:
        uc = u_card if u_card is not None else _default_u_card(channel, dep)
    lhs_label = _mi_label(with_u, decoded, lhs, given, d_card)
    rhs_label = _mi_label(with_u, decoded, rhs, given, d_card)
    q = QuantifiedInequality(
        ineq_id=f"{lhs_label}<={rhs_label}",
        lhs_outputs=tuple(sorted(int(j) for j in lhs)),
        rhs_outputs=tuple(sorted(int(j) for j in rhs)),
        decoded=tuple(sorted(int(i) for i in decoded)),
        given=tuple(sorted(int(i) for i in given)),
        dep_inputs=tuple(sorted(int(i) for i in dep)),
        indep_blocks=tuple(tuple(sorted(int(i) for i in blk)) for blk in indep),
        u_card=uc,
        d_card=d_card,
    )
    q.validate(channel)
    return q


def less_noisy_per_user_spec(channel: DiscreteIC, u_card: int | None = None) -> ConditionSpec:
    """For each receiver i >= 1: I(U;Y_{i+1}|X_{i+1..K}) <= I(U;Y_i|X_{i+1..K})
    quantified over joints of (U, X_1..X_i) times independent later users."""
    k = channel.num_users
    ineqs = []
    for i in range(1, k):
        later = list(range(i, k))
        ineqs.append(
            _ineq(
                channel,
                lhs=(i,),
                rhs=(i - 1,),
                given=later,
                dep=list(range(i)),
                indep=[(j,) for j in later],
                with_u=True,
                u_card=u_card,
            )
        )
    return ConditionSpec("less_noisy_per_user", tuple(ineqs))


def chain_less_noisy_spec(channel: DiscreteIC, u_card: int | None = None) -> ConditionSpec:
    """Every earlier receiver is less noisy than receiver i given the later
    users' inputs; the i = 0 member quantifies over an empty receiver set and
    is vacuous, so it is omitted."""
    k = channel.num_users
    ineqs = []
    for i in range(1, k):
        later = list(range(i + 1, k))
        for j in range(i):
            ineqs.append(
                _ineq(
                    channel,
                    lhs=(i,),
                    rhs=(j,),
                    given=later,
                    dep=list(range(i + 1)),
                    indep=[(l,) for l in later],
                    with_u=True,
                    u_card=u_card,
                )
            )
    return ConditionSpec("chain_less_noisy", tuple(ineqs))


def set_less_noisy_spec(
    channel: DiscreteIC,
    omega1: Sequence[int],
    omega2: Sequence[int],
    receiver_pair: tuple[int, int],
    u_card: int | None = None,
) -> ConditionSpec:
    """I(U, X_omega1; Y_a | X_omega2) <= I(U, X_omega1; Y_b | X_omega2) over
    joints of (U, all inputs outside omega2) times independent omega2 inputs.
    When omega1 is exactly the complement of omega2 the auxiliary is dropped."""
    k = channel.num_users
    a, b = receiver_pair
    omega1 = sorted(set(int(i) for i in omega1))
    omega2 = sorted(set(int(i) for i in omega2))
    if set(omega1) & set(omega2):
        raise ValueError("omega1 and omega2 must be disjoint")
    dep = [i for i in range(k) if i not in omega2]
    with_u = set(omega1) != set(dep)
    ineq = _ineq(
        channel,
        lhs=(a,),
        rhs=(b,),
        decoded=omega1,
        given=omega2,
        dep=dep,
        indep=[(i,) for i in omega2],
        with_u=with_u,
        u_card=u_card,
    )
    return ConditionSpec("set_less_noisy", (ineq,))


def grouped_chain_conditions_spec(
    channel: DiscreteIC,
    perm: Sequence[int],
    cuts: Sequence[int],
    u_card: int | None = None,
) -> ConditionSpec:
    """Condition family under which the grouped-chain expression bounds the sum
    rate: within-block chains (plain for the first block, with auxiliary for
    later ones) plus cross-block comparisons at the cut receivers."""
    from .expressions import _validate_perm_cuts

    k = channel.num_users
    perm, cuts = _validate_perm_cuts(k, perm, cuts)
    ineqs = []
    # first block: pairwise chain without auxiliary
    for w in range(1, cuts[0]):
        decoded = list(perm[:w])
        later = list(perm[w:])
        ineqs.append(
            _ineq(
                channel,
                lhs=(perm[w - 1],),
                rhs=(perm[w],),
                decoded=decoded,
                given=later,
                dep=decoded,
                indep=[(j,) for j in later],
                with_u=False,
            )
        )
    # later blocks: chains with auxiliary beside the block prefix
    for theta in range(len(cuts) - 1):
        base = cuts[theta]
        for w in range(1, cuts[theta + 1] - base):
            decoded = list(perm[base:base + w])
            later = list(perm[base + w:])
            ineqs.append(
                _ineq(
                    channel,
                    lhs=(perm[base + w - 1],),
                    rhs=(perm[base + w],),
                    decoded=decoded,
                    given=later,
                    dep=list(perm[:base + w]),
                    indep=[(j,) for j in later],
                    with_u=True,
                    u_card=u_card,
                )
            )
    # cut receivers: each block's lead receiver less noisy than the previous one's
    for theta in range(1, len(cuts)):
        given = list(perm[cuts[theta - 1]:])
        ineqs.append(
            _ineq(
                channel,
                lhs=(perm[cuts[theta] - 1],),
                rhs=(perm[cuts[theta - 1] - 1],),
                given=given,
                dep=list(perm[: cuts[theta - 1]]),
                indep=[(j,) for j in given],
                with_u=True,
                u_card=u_card,
            )
        )
    return ConditionSpec("grouped_chain_conditions", tuple(ineqs))


def receiver_groups_conditions_spec(
    channel: DiscreteIC,
    groups: Sequence[Sequence[int]],
    u_card: int | None = None,
) -> ConditionSpec:
    """Conditions for the receiver-group chain bound: each group's output block
    is dominated by the previous group's given the later groups' inputs, with
    later groups sampled as independent intra-group joint blocks."""
    from .expressions import _validate_groups

    k = channel.num_users
    groups = _validate_groups(k, groups)
    ineqs = []
    for i in range(1, len(groups)):
        later_blocks = [tuple(g) for g in groups[i:]]
        given = [u for blk in later_blocks for u in blk]
        dep = [u for blk in groups[:i] for u in blk]
        ineqs.append(
            _ineq(
                channel,
                lhs=tuple(groups[i]),
                rhs=tuple(groups[i - 1]),
                given=given,
                dep=dep,
                indep=later_blocks,
                with_u=True,
                u_card=u_card,
            )
        )
    return ConditionSpec("receiver_group_conditions", tuple(ineqs))


def many_to_one_condition_spec(channel: DiscreteIC, u_card: int | None = None) -> ConditionSpec:
    """The interfered receiver (last) is dominated by the joint of the others:
    I(U; Y_K | X_K) <= I(U; Y_1..Y_{K-1} | X_K)."""
    k = channel.num_users
    ineq = _ineq(
        channel,
        lhs=(k - 1,),
        rhs=tuple(range(k - 1)),
        given=(k - 1,),
        dep=list(range(k - 1)),
        indep=[(k - 1,)],
        with_u=True,
        u_card=u_card,
    )
    return ConditionSpec("many_to_one_less_noisy", (ineq,))


def two_user_mixed_spec(channel: DiscreteIC, u_card: int | None = None) -> ConditionSpec:
    """Mixed-interference conditions for two users: receiver 2's own signal is
    dominated at receiver 1 given X1, and receiver 1 dominates receiver 2 for
    auxiliaries given X2."""
    if channel.num_users != 2:
        raise ValueError("two_user_mixed_spec requires K = 2")
    strong = _ineq(
        channel,
        lhs=(1,),
        rhs=(0,),
        decoded=(1,),
        given=(0,),
        dep=(1,),
        indep=[(0,)],
        with_u=False,
    )
    weak = _ineq(
        channel,
        lhs=(1,),
        rhs=(0,),
        given=(1,),
        dep=(0,),
        indep=[(1,)],
        with_u=True,
        u_card=u_card,
    )
    return ConditionSpec("two_user_mixed", (strong, weak))


@dataclass(frozen=True)
class Counterexample:
    """A sampled distribution violating one inequality of a condition family."""

    inequality_id: str
    sample_index: int
    margin: float
    dep_inputs: tuple[int, ...]
    joint_block: np.ndarray  # shape (d_card, u_card, *dep alphabet sizes)
    indep_blocks: tuple[tuple[tuple[int, ...], np.ndarray], ...]

    def to_json(self) -> dict:
        return {
            "inequality_id": self.inequality_id,
            "sample_index": self.sample_index,
            "margin": self.margin,
            "dep_inputs": list(self.dep_inputs),
            "joint_block": self.joint_block.tolist(),
            "indep_blocks": [
                {"inputs": list(blk), "probs": arr.tolist()} for blk, arr in self.indep_blocks
            ],
        }


def _check_inequality(
    channel: DiscreteIC,
    ineq: QuantifiedInequality,
    samples: int,
    rng: np.random.Generator,
    slack: float,
) -> Counterexample | None:
    """Sample the inequality's quantifier family and return its first violation."""
    ineq.validate(channel)
    k = channel.num_users
    cards = channel.input_cards
    needed = sorted(set(ineq.lhs_outputs) | set(ineq.rhs_outputs))
    t_marg = channel.output_marginal(needed)
    out_cards = tuple(channel.output_cards[j] for j in needed)
    out_axis = {j: 3 + k + pos for pos, j in enumerate(needed)}

    per_sample = ineq.d_card * ineq.u_card
    per_sample *= int(np.prod(cards, dtype=np.int64)) * int(np.prod(out_cards, dtype=np.int64))
    if per_sample > DEFAULT_SIZE_CAP:
        raise SizeCapError(f"per-sample tensor of {per_sample} entries exceeds the cap")

    dep_cards = tuple(cards[i] for i in ineq.dep_inputs)
    dep_size = ineq.d_card * ineq.u_card * int(np.prod(dep_cards, dtype=np.int64))

    # tensor layout: (batch, D, U, X_1..X_K, selected outputs)
    a_axes = ((2,) if ineq.u_card > 1 else ()) + tuple(3 + i for i in ineq.decoded)
    c_axes = ((1,) if ineq.d_card > 1 else ()) + tuple(3 + i for i in ineq.given)
    lhs_axes = tuple(out_axis[j] for j in ineq.lhs_outputs)
    rhs_axes = tuple(out_axis[j] for j in ineq.rhs_outputs)

    def expand_block(flat: np.ndarray, members: tuple[int, ...], with_du: bool) -> np.ndarray:
        b = flat.shape[0]
        shape = [b, 1, 1] + [1] * k
        if with_du:
            shape[1], shape[2] = ineq.d_card, ineq.u_card
        for i in members:
            shape[3 + i] = cards[i]
        return flat.reshape(shape)

    done = 0
    while done < samples:
        b = min(_ENGINE_BATCH, samples - done)
        dep_flat = rng.exponential(size=(b, dep_size))
        dep_flat /= dep_flat.sum(axis=1, keepdims=True)
        p = expand_block(dep_flat, ineq.dep_inputs, with_du=True)
        block_draws = []
        for blk in ineq.indep_blocks:
            size = int(np.prod([cards[i] for i in blk], dtype=np.int64))
            flat = rng.exponential(size=(b, size))
            flat /= flat.sum(axis=1, keepdims=True)
            block_draws.append(flat)
            p = p * expand_block(flat, blk, with_du=False)
        p = p.reshape(p.shape + (1,) * len(needed)) * t_marg[(None, None, None) + (Ellipsis,)]
        margins = _cmi_axes_batch(p, a_axes, lhs_axes, c_axes) - _cmi_axes_batch(p, a_axes, rhs_axes, c_axes)
        bad = np.nonzero(margins > slack)[0]
        if bad.size:
            first = int(bad[0])
            joint = dep_flat[first].reshape((ineq.d_card, ineq.u_card) + dep_cards)
            indep = tuple(
                (blk, block_draws[pos][first].reshape(tuple(cards[i] for i in blk)))
                for pos, blk in enumerate(ineq.indep_blocks)
            )
            return Counterexample(
                inequality_id=ineq.ineq_id,
                sample_index=done + first,
                margin=float(margins[first]),
                dep_inputs=ineq.dep_inputs,
                joint_block=joint,
                indep_blocks=indep,
            )
        done += b
    return None


def falsify_condition(
    channel: DiscreteIC,
    spec: ConditionSpec,
    samples: int,
    rng: np.random.Generator,
    slack: float = VIOLATION_SLACK,
) -> Counterexample | None:
    """Search for a sampled distribution violating the condition family.

    Draws ``samples`` distributions of the exact factorization each inequality
    quantifies over and returns the first violation whose margin exceeds
    ``slack``; returns None if nothing is found.  Absence is evidence, not a
    proof: the families are universally quantified and we only sample.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    for ineq in spec.inequalities:
        hit = _check_inequality(channel, ineq, samples, rng, slack)
        if hit is not None:
            return hit
    return None


def _many_to_one_kernels(channel: DiscreteIC, tol: float = 1e-12) -> list[np.ndarray]:
    """Verify the many-to-one factorization and return the private kernels.

    Every receiver except the last must depend on its own input only, and the
    transition must equal the product of the private kernels with the last
    receiver's conditional.  Raises NotManyToOneError on failure.
    """
    k = channel.num_users
    kernels = []
    for i in range(k - 1):
        marg = channel.output_marginal([i])  # (*inputs, c_yi)
        axes = tuple(ax for ax in range(k) if ax != i)
        kern = marg.mean(axis=axes)
        expand = [1] * (k + 1)
        expand[i], expand[k] = kern.shape
        dev = float(np.abs(marg - kern.reshape(expand)).max())
        if dev > tol:
            raise NotManyToOneError(
                f"receiver Y{i + 1} depends on other users' inputs (deviation {dev:.2e})"
            )
        kernels.append(kern)
    last = channel.output_marginal([k - 1])
    product = np.ones(channel.input_cards + channel.output_cards)
    for i, kern in enumerate(kernels):
        shape = [1] * (2 * k)
        shape[i], shape[k + i] = kern.shape
        product = product * kern.reshape(shape)
    shape = list(channel.input_cards) + [1] * (k - 1) + [channel.output_cards[-1]]
    product = product * last.reshape(shape)
    dev = float(np.abs(product - channel.transition).max())
    if dev > tol:
        raise NotManyToOneError(f"outputs are not conditionally independent (deviation {dev:.2e})")
    return kernels


def many_to_one_tin_capacity(
    channel: DiscreteIC,
    cfg: SearchConfig | None = None,
    rng: np.random.Generator | None = None,
    samples: int = 10_000,
) -> BoundResult:
    """Treating-interference-as-noise sum rate of a many-to-one channel.

    Verifies the many-to-one factorization (all receivers but the last see only
    their own input), maximizes sum_i I(X_i; Y_i | Q), and certifies the value
    iff the many-to-one less-noisy condition survives falsification over
    ``samples`` draws.
    """
    rng = rng or np.random.default_rng(0)
    _many_to_one_kernels(channel)
    result = maximize_expression(channel, tin_expression(channel.num_users), cfg, rng)
    witness = falsify_condition(channel, many_to_one_condition_spec(channel), samples, rng)
    return BoundResult(
        value=result.value,
        expression_id=result.expression_id,
        certified=witness is None,
        argmax=result.argmax,
        search_stats=result.search_stats,
    )
