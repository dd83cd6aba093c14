"""Independent verification machinery.

Brute-force grid maximization, n-letter inequality checks on random codes,
Gaussian degradation-equivalence checks, and conditioning-preservation
sampling.  Everything here is deliberately simple and separate from the main
evaluation paths so it can serve as an oracle for them at desk scale.
"""

from __future__ import annotations

import itertools
import math
import string
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .discrete import (
    ConditionSpec,
    Counterexample,
    DiscreteIC,
    ProductInput,
    _assemble_probs,
    _expression_on_probs,
    _ineq,
    falsify_condition,
)
from .expressions import Expression
from .joints import DEFAULT_SIZE_CAP, _cmi_axes
from .errors import SizeCapError


# ---------------------------------------------------------------------------
# Random codes and the n-letter inequality
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RandomCode:
    """Per-user codebooks of a fixed blocklength; messages are uniform over
    codewords.  Repeated codewords are allowed (any code qualifies)."""

    blocklength: int
    codebooks: tuple[np.ndarray, ...]

    def __post_init__(self):
        if self.blocklength not in (1, 2):
            raise ValueError("blocklength is capped at 2 for dense n-letter checks")
        books = []
        for l, book in enumerate(self.codebooks):
            book = np.array(book, dtype=int)
            if book.ndim != 2 or book.shape[1] != self.blocklength or book.shape[0] < 1:
                raise ValueError(f"codebook {l} must be a nonempty (M, {self.blocklength}) array")
            book.flags.writeable = False
            books.append(book)
        object.__setattr__(self, "codebooks", tuple(books))

    @classmethod
    def random(
        cls,
        input_cards: Sequence[int],
        blocklength: int,
        codebook_sizes: Sequence[int],
        rng: np.random.Generator,
    ) -> "RandomCode":
        books = tuple(
            rng.integers(0, card, size=(size, blocklength))
            for card, size in zip(input_cards, codebook_sizes)
        )
        return cls(blocklength, books)

    def letter_law(self, user: int, card: int) -> np.ndarray:
        """Empirical distribution of user's codeword, shape (card,) * blocklength."""
        book = self.codebooks[user]
        if book.max(initial=0) >= card:
            raise ValueError(f"codebook {user} uses symbols outside alphabet of size {card}")
        law = np.zeros((card,) * self.blocklength)
        for word in book:
            law[tuple(word)] += 1.0
        return law / book.shape[0]


def _code_joint(
    channel: DiscreteIC, code: RandomCode, receivers: tuple[int, int]
) -> tuple[np.ndarray, dict]:
    """Joint over all per-letter inputs and the two receivers' output sequences.

    Axis layout: user l's letters at axes l*n..l*n+n-1, then receiver a's n
    output letters, then receiver b's.
    """
    k = channel.num_users
    n = code.blocklength
    a, b = receivers
    size = 1
    for l, card in enumerate(channel.input_cards):
        size *= card**n
    size *= (channel.output_cards[a] * channel.output_cards[b]) ** n
    if size > DEFAULT_SIZE_CAP:
        raise SizeCapError(f"n-letter joint of {size} entries exceeds the cap")

    needed = sorted({a, b})
    t_pair = channel.output_marginal(needed)
    # align the marginal's output axes to (a, b) order
    if needed != [a, b]:
        t_pair = np.swapaxes(t_pair, -1, -2)

    p = np.ones(())
    for l, card in enumerate(channel.input_cards):
        law = code.letter_law(l, card)
        p = np.multiply.outer(p, law)
    p = p.reshape(tuple(channel.input_cards[l] for l in range(k) for _ in range(n)))

    letters = string.ascii_lowercase + string.ascii_uppercase
    x_sub = [[letters[l * n + t] for t in range(n)] for l in range(k)]
    next_free = k * n
    cur_sub = "".join(itertools.chain.from_iterable(x_sub))
    for t in range(n):
        ya, yb = letters[next_free], letters[next_free + 1]
        next_free += 2
        t_sub = "".join(x_sub[l][t] for l in range(k)) + ya + yb
        out_sub = cur_sub + ya + yb
        p = np.einsum(f"{cur_sub},{t_sub}->{out_sub}", p, t_pair)
        cur_sub = out_sub
    axes = {
        "x": {l: tuple(l * n + t for t in range(n)) for l in range(k)},
        "ya": tuple(k * n + 2 * t for t in range(n)),
        "yb": tuple(k * n + 2 * t + 1 for t in range(n)),
    }
    return p, axes


def nletter_inequality_check(
    channel: DiscreteIC,
    code: RandomCode,
    omega1: Sequence[int],
    omega2: Sequence[int],
    receivers: tuple[int, int],
) -> float:
    """LHS - RHS of the blocklength-n comparison
    I(X^n_omega1; Y_a^n | X^n_omega2) - I(X^n_omega1; Y_b^n | X^n_omega2)
    for the joint induced by a code on the memoryless channel.

    When the corresponding single-letter condition holds (receiver b dominates
    receiver a for the right quantifier family), the result must be <= 0 up to
    rounding for every code.
    """
    omega1 = sorted(set(int(i) for i in omega1))
    omega2 = sorted(set(int(i) for i in omega2))
    if set(omega1) & set(omega2):
        raise ValueError("omega1 and omega2 must be disjoint")
    if not omega1:
        raise ValueError("omega1 must be nonempty")
    p, axes = _code_joint(channel, code, receivers)
    a_axes = tuple(itertools.chain.from_iterable(axes["x"][l] for l in omega1))
    c_axes = tuple(itertools.chain.from_iterable(axes["x"][l] for l in omega2))
    lhs = _cmi_axes(p, a_axes, axes["ya"], c_axes)
    rhs = _cmi_axes(p, a_axes, axes["yb"], c_axes)
    return lhs - rhs


# ---------------------------------------------------------------------------
# Gaussian degradation equivalence
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GaussianSystem:
    """Two linear observations of the same inputs with unit noise: rows a and b
    over split + rest inputs; the first ``split`` inputs are the decoded ones."""

    a: np.ndarray
    b: np.ndarray
    split: int

    def __post_init__(self):
        a = np.array(self.a, dtype=float)
        b = np.array(self.b, dtype=float)
        if a.shape != b.shape or a.ndim != 1:
            raise ValueError("coefficient rows must be equal-length vectors")
        if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise ValueError("coefficients must be finite")
        if not 1 <= self.split <= a.size:
            raise ValueError(f"split must be in 1..{a.size}")
        a.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)


def degradation_equivalence_check(system: GaussianSystem, alpha: float) -> float:
    """Residual of the explicit degradation construction for output a from output b.

    Builds alpha * Y_b, corrects the non-decoded inputs' coefficients, and adds
    fresh noise of variance 1 - alpha^2; for jointly Gaussian noise the
    resulting conditional law matches Y_a's iff the conditional mean
    coefficients and the conditional variance match, so the residual is the
    largest absolute mismatch among those.  It is zero (up to rounding)
    exactly when a_i = alpha * b_i on the decoded inputs.
    """
    if abs(alpha) > 1.0:
        raise ValueError(f"|alpha| must be <= 1 to keep the added noise real, got {alpha}")
    coeff = alpha * system.b
    coeff = coeff.copy()
    coeff[system.split:] += system.a[system.split:] - alpha * system.b[system.split:]
    mean_mismatch = float(np.abs(coeff - system.a).max())
    variance = alpha**2 * 1.0 + (1.0 - alpha**2) * 1.0
    return max(mean_mismatch, abs(variance - 1.0))


# ---------------------------------------------------------------------------
# Conditioning preservation (extra side variable D)
# ---------------------------------------------------------------------------


def side_conditioned_set_spec(
    channel: DiscreteIC,
    decoded: Sequence[int],
    conditioned: Sequence[int],
    worse: int,
    better: int,
    d_card: int = 2,
) -> ConditionSpec:
    """I(X_dec; Y_worse | X_cond, D) <= I(X_dec; Y_better | X_cond, D) quantified
    over arbitrary joints of (D, all inputs); D -> inputs -> outputs is Markov
    by construction of the sampling."""
    k = channel.num_users
    ineq = _ineq(
        channel,
        lhs=(worse,),
        rhs=(better,),
        decoded=decoded,
        given=conditioned,
        dep=list(range(k)),
        indep=[],
        with_u=False,
        d_card=d_card,
    )
    return ConditionSpec("side_conditioned_set", (ineq,))


def side_conditioned_subset_spec(
    channel: DiscreteIC,
    decoded: Sequence[int],
    conditioned: Sequence[int],
    omega: Sequence[int],
    worse: int,
    better: int,
    d_card: int = 2,
) -> ConditionSpec:
    """Variant with a subset of the decoded users moved into the conditioning."""
    omega = set(int(i) for i in omega)
    decoded = set(int(i) for i in decoded)
    if not omega <= decoded:
        raise ValueError("omega must be a subset of the decoded users")
    k = channel.num_users
    ineq = _ineq(
        channel,
        lhs=(worse,),
        rhs=(better,),
        decoded=sorted(decoded - omega),
        given=sorted(set(conditioned) | omega),
        dep=list(range(k)),
        indep=[],
        with_u=False,
        d_card=d_card,
    )
    return ConditionSpec("side_conditioned_subset", (ineq,))


def side_conditioned_aux_spec(
    channel: DiscreteIC,
    conditioned: Sequence[int],
    worse: int,
    better: int,
    u_card: int = 2,
    d_card: int = 2,
) -> ConditionSpec:
    """Auxiliary-variable variant: I(U; Y_worse | X_cond, D) <= I(U; Y_better |
    X_cond, D) over arbitrary joints of (D, U, all inputs)."""
    k = channel.num_users
    ineq = _ineq(
        channel,
        lhs=(worse,),
        rhs=(better,),
        given=conditioned,
        dep=list(range(k)),
        indep=[],
        with_u=True,
        u_card=u_card,
        d_card=d_card,
    )
    return ConditionSpec("side_conditioned_aux", (ineq,))


def conditioning_preservation_check(
    channel: DiscreteIC,
    spec: ConditionSpec,
    samples: int,
    rng: np.random.Generator,
) -> Counterexample | None:
    """Sample joints with the extra side variable and return the first violation.

    Meant for channels where the unconditioned comparison holds by physical
    degradation; a violation then falsifies the claim that extra conditioning
    preserves the ordering.
    """
    return falsify_condition(channel, spec, samples, rng)


# ---------------------------------------------------------------------------
# Brute-force grid maximization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GridMaximum:
    """Grid maximum (a certified lower bound on the true maximum) plus a coarse
    continuity bound on how far above it the true maximum can sit."""

    value: float
    grid_gap: float
    argmax: ProductInput


def _simplex_grid(card: int, m: int) -> list[np.ndarray]:
    """All probability vectors over ``card`` symbols with entries multiple of 1/m."""

    def compositions(total: int, parts: int):
        if parts == 1:
            yield (total,)
            return
        for head in range(total + 1):
            for rest in compositions(total - head, parts - 1):
                yield (head,) + rest

    return [np.array(c, dtype=float) / m for c in compositions(m, card)]


def _binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return float(-p * math.log2(p) - (1 - p) * math.log2(1 - p))


def brute_force_sum_capacity(
    channel: DiscreteIC,
    expr: Expression,
    grid_m: int = 16,
) -> GridMaximum:
    """Exhaustive maximization of an expression on the product simplex grid.

    Per-user distributions run over the step-1/m grid; sum-type expressions use
    a degenerate time-sharing variable, min-type expressions a two-branch grid.
    The returned value is exact on the grid, hence a certified lower bound on
    the true maximum; ``grid_gap`` is a coarse entropy-continuity bound on the
    possible shortfall (each coordinate is within total variation
    (card-1)/(2m) of a grid point, and an MI term moves by at most
    h(tv) + tv*log2(joint size) per entropy).
    """
    k = channel.num_users
    if any(c > 3 for c in channel.input_cards):
        raise SizeCapError("grid oracle supports binary and ternary input alphabets only")
    if expr.max_index() >= k:
        raise ValueError(f"expression {expr.expression_id} indexes beyond {k} users")
    grids = [_simplex_grid(c, grid_m) for c in channel.input_cards]
    per_user = [len(g) for g in grids]
    q_card = 1 if expr.is_sum_type else 2
    points = int(np.prod(per_user, dtype=np.int64)) ** q_card
    if q_card == 2:
        points *= grid_m + 1
    if points > 10_000_000:
        raise SizeCapError(f"grid of {points} points is too large")

    best = -math.inf
    best_input: ProductInput | None = None

    def consider(qw: np.ndarray, branches) -> None:
        nonlocal best, best_input
        probs = _assemble_probs(qw, branches, channel)
        value = _expression_on_probs(probs, k, expr)
        if value > best:
            best = value
            best_input = ProductInput(qw, tuple(tuple(b) for b in branches))

    if q_card == 1:
        qw = np.ones(1)
        for combo in itertools.product(*grids):
            consider(qw, [list(combo)])
    else:
        weights = [np.array([i / grid_m, 1.0 - i / grid_m]) for i in range(grid_m + 1)]
        for qw in weights:
            for combo1 in itertools.product(*grids):
                for combo2 in itertools.product(*grids):
                    consider(qw, [list(combo1), list(combo2)])

    joint_size = q_card * int(np.prod(channel.input_cards, dtype=np.int64))
    joint_size *= int(np.prod(channel.output_cards, dtype=np.int64))
    max_terms = max(len(g) for g in expr.groups)
    gap = 0.0
    for card in channel.input_cards:
        tv = (card - 1) / (2.0 * grid_m)
        gap += q_card * (_binary_entropy(min(tv, 0.5)) + tv * math.log2(joint_size))
    if q_card > 1:
        tv = (q_card - 1) / (2.0 * grid_m)
        gap += _binary_entropy(min(tv, 0.5)) + tv * math.log2(joint_size)
    gap *= 4 * max_terms

    assert best_input is not None
    return GridMaximum(value=best, grid_gap=gap, argmax=best_input)
