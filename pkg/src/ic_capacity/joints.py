"""Finite-alphabet joint distributions and information measures (bits).

Everything here works on dense probability tensors: one axis per named
variable, entries nonnegative, total mass 1.  All entropies and mutual
informations use base-2 logarithms with the convention 0*log(0) = 0.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np
from scipy.special import xlogy

from .errors import NumericalConsistencyError, ResolutionError, SizeCapError

LN2 = float(np.log(2.0))

# Dense tensors only; anything bigger than this must be restructured by the caller.
DEFAULT_SIZE_CAP = 1 << 20

# Mutual informations in [-MI_CLAMP_TOL, 0) are treated as rounding noise and
# clamped to 0; anything more negative raises NumericalConsistencyError.
MI_CLAMP_TOL = 1e-10

PROB_TOL = 1e-12


def _entropy_marginal(probs: np.ndarray, keep_axes: tuple[int, ...]) -> float:
    """Entropy in bits of the marginal of ``probs`` on ``keep_axes``."""
    drop = tuple(ax for ax in range(probs.ndim) if ax not in keep_axes)
    marg = probs.sum(axis=drop) if drop else probs
    return float(-xlogy(marg, marg).sum() / LN2)


def _entropy_marginal_batch(probs: np.ndarray, keep_axes: tuple[int, ...]) -> np.ndarray:
    """Batched variant: axis 0 of ``probs`` indexes the batch, result has shape (B,)."""
    drop = tuple(ax for ax in range(1, probs.ndim) if ax not in keep_axes)
    marg = probs.sum(axis=drop) if drop else probs
    flat = marg.reshape(marg.shape[0], -1)
    return -xlogy(flat, flat).sum(axis=1) / LN2


def _finalize_mi(value: float, what: str) -> float:
    if value >= 0.0:
        return value
    if value >= -MI_CLAMP_TOL:
        return 0.0
    raise NumericalConsistencyError(f"{what} = {value:.3e} is negative beyond rounding tolerance")


def _cmi_axes(probs: np.ndarray, a: tuple[int, ...], b: tuple[int, ...], c: tuple[int, ...]) -> float:
    """I(A;B|C) on a dense tensor, sets given as axis tuples.  Empty A or B gives 0."""
    if not a or not b:
        return 0.0
    value = (
        _entropy_marginal(probs, a + c)
        + _entropy_marginal(probs, b + c)
        - _entropy_marginal(probs, a + b + c)
        - _entropy_marginal(probs, c)
    )
    return _finalize_mi(value, "conditional mutual information")


def _cmi_axes_batch(probs: np.ndarray, a: tuple[int, ...], b: tuple[int, ...], c: tuple[int, ...]) -> np.ndarray:
    """Batched I(A;B|C); axis 0 is the batch axis and never appears in a/b/c."""
    if not a or not b:
        return np.zeros(probs.shape[0])
    value = (
        _entropy_marginal_batch(probs, a + c)
        + _entropy_marginal_batch(probs, b + c)
        - _entropy_marginal_batch(probs, a + b + c)
        - _entropy_marginal_batch(probs, c)
    )
    worst = value.min() if value.size else 0.0
    if worst < -MI_CLAMP_TOL:
        raise NumericalConsistencyError(
            f"conditional mutual information = {worst:.3e} is negative beyond rounding tolerance"
        )
    return np.maximum(value, 0.0)


class JointDist:
    """Dense joint distribution over named finite variables.

    ``variables`` is an ordered sequence of (name, cardinality) pairs and
    ``probs`` a tensor whose shape matches the cardinalities.  Instances are
    immutable after construction (the tensor is marked read-only), so they are
    safe to share across threads.
    """

    __slots__ = ("variables", "probs")

    def __init__(
        self,
        variables: Sequence[tuple[str, int]],
        probs: np.ndarray,
        *,
        size_cap: int = DEFAULT_SIZE_CAP,
    ):
        variables = tuple((str(n), int(c)) for n, c in variables)
        names = [n for n, _ in variables]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names: {names}")
        if any(c < 1 for _, c in variables):
            raise ValueError("variable cardinalities must be positive")
        shape = tuple(c for _, c in variables)
        size = int(np.prod(shape, dtype=np.int64)) if shape else 1
        if size > size_cap:
            raise SizeCapError(f"joint tensor of {size} entries exceeds the cap of {size_cap}")
        arr = np.array(probs, dtype=float)
        if arr.shape != shape:
            raise ValueError(f"probs shape {arr.shape} does not match cardinalities {shape}")
        if arr.min(initial=0.0) < 0.0:
            raise ValueError(f"negative probability entry: {arr.min()}")
        total = float(arr.sum())
        if abs(total - 1.0) > PROB_TOL:
            raise ValueError(f"probabilities sum to {total!r}, not 1 within {PROB_TOL}")
        arr.flags.writeable = False
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "probs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("JointDist is immutable")

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.variables)

    def cardinality(self, name: str) -> int:
        return self.variables[self.axis(name)][1]

    def axis(self, name: str) -> int:
        for i, (n, _) in enumerate(self.variables):
            if n == name:
                return i
        raise ResolutionError(f"unknown variable {name!r}; have {self.names}")

    def axes(self, names: Iterable[str]) -> tuple[int, ...]:
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError(f"variable set contains duplicates: {names}")
        return tuple(self.axis(n) for n in names)

    def marginal(self, names: Iterable[str]) -> "JointDist":
        """Marginal distribution on ``names`` (original variable order kept)."""
        keep = set(self.axes(names))
        drop = tuple(ax for ax in range(self.probs.ndim) if ax not in keep)
        marg = self.probs.sum(axis=drop) if drop else self.probs
        variables = tuple(v for ax, v in enumerate(self.variables) if ax in keep)
        return JointDist(variables, marg)

    def entropy(self, names: Iterable[str]) -> float:
        """Shannon entropy in bits of the marginal on ``names``."""
        axes = self.axes(names)
        if not axes:
            raise ValueError("entropy requires a nonempty variable set")
        return _entropy_marginal(self.probs, axes)

    def conditional_mi(
        self,
        a: Iterable[str],
        b: Iterable[str],
        c: Iterable[str] = (),
    ) -> float:
        """I(A;B|C) in bits; A, B, C must be pairwise disjoint, C may be empty."""
        a_ax, b_ax, c_ax = self.axes(a), self.axes(b), self.axes(c)
        if not a_ax or not b_ax:
            raise ValueError("conditional_mi requires nonempty A and B")
        combined = a_ax + b_ax + c_ax
        if len(set(combined)) != len(combined):
            raise ValueError("A, B and C must be pairwise disjoint")
        return _cmi_axes(self.probs, a_ax, b_ax, c_ax)

    def to_csv(self, path_or_buf) -> None:
        """Debug dump: one labeled row per cell, variable columns plus probability."""
        close = False
        if isinstance(path_or_buf, (str, bytes)) or hasattr(path_or_buf, "__fspath__"):
            buf = open(path_or_buf, "w", encoding="utf-8")
            close = True
        else:
            buf = path_or_buf
        try:
            buf.write(",".join(self.names) + ",prob\n")
            for idx in np.ndindex(*self.probs.shape):
                cells = [str(i) for i in idx] + [repr(float(self.probs[idx]))]
                buf.write(",".join(cells) + "\n")
        finally:
            if close:
                buf.close()

    def __repr__(self):
        spec = ", ".join(f"{n}:{c}" for n, c in self.variables)
        return f"JointDist({spec})"


def entropy(dist: JointDist, names: Iterable[str]) -> float:
    """Entropy in bits of the marginal of ``dist`` on ``names``."""
    return dist.entropy(names)


def conditional_mi(
    dist: JointDist,
    a: Iterable[str],
    b: Iterable[str],
    c: Iterable[str] = (),
) -> float:
    """Conditional mutual information I(A;B|C) of ``dist`` in bits."""
    return dist.conditional_mi(a, b, c)


def csiszar_korner_residual(
    dist: JointDist,
    n: int,
    *,
    first: str = "Ya",
    second: str = "Yb",
    side: str | None = "W",
) -> float:
    """Residual of the blocklength-n telescoping identity between two sequences.

    The distribution must contain variables ``Ya1..Yan`` and ``Yb1..Ybn`` (the
    prefixes are configurable) and may contain a side variable ``W``; several
    side variables are expressed by merging them into one.  Returns

        sum_t I(Yb_{t+1..n}; Ya_t | W, Ya_{1..t-1})
      - sum_t I(Ya_{1..t-1}; Yb_t | W, Yb_{t+1..n})

    which is zero for every joint distribution; a nonzero value beyond rounding
    noise indicates a broken information-measure implementation.
    """
    if n < 1:
        raise ValueError(f"blocklength must be >= 1, got {n}")
    a_axes = [dist.axis(f"{first}{t}") for t in range(1, n + 1)]
    b_axes = [dist.axis(f"{second}{t}") for t in range(1, n + 1)]
    if side is not None and side in dist.names:
        w_axes: tuple[int, ...] = (dist.axis(side),)
    else:
        w_axes = ()
    probs = dist.probs
    forward = 0.0
    backward = 0.0
    for t in range(1, n + 1):
        future_b = tuple(b_axes[t:])  # Yb_{t+1..n}
        past_a = tuple(a_axes[: t - 1])  # Ya_{1..t-1}
        forward += _cmi_axes(probs, future_b, (a_axes[t - 1],), w_axes + past_a)
        backward += _cmi_axes(probs, past_a, (b_axes[t - 1],), w_axes + future_b)
    return forward - backward


def sample_simplex(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform sample from the probability simplex via normalized exponential spacings."""
    if dim < 1:
        raise ValueError(f"simplex dimension must be >= 1, got {dim}")
    if dim == 1:
        return np.ones(1)
    spacings = rng.exponential(size=dim)
    return spacings / spacings.sum()


def random_joint(
    cards: Sequence[int],
    rng: np.random.Generator,
    names: Sequence[str] | None = None,
) -> JointDist:
    """Uniformly random joint distribution over variables with the given cardinalities."""
    cards = tuple(int(c) for c in cards)
    if names is None:
        names = tuple(f"V{i + 1}" for i in range(len(cards)))
    size = int(np.prod(cards, dtype=np.int64))
    probs = sample_simplex(size, rng).reshape(cards)
    return JointDist(tuple(zip(names, cards)), probs)
