"""Exact counting, enumeration and uniform sampling of linear extensions.

Counting is a dynamic program over the unranked part of the ground set,
memoized on its bitmask: the ranked prefix of any partial schedule is an
order ideal, so the states are exactly the up-sets of the poset.  Counts are
arbitrary-precision integers throughout; n is capped (default 20) so the
state space stays at most 2**20.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import reduce
from typing import Iterator

import numpy as np

from .errors import LimitExceededError, UnsupportedNBlockError
from .poset import Poset
from .spexpr import NBlock, Series, Singleton, SPExpr, expr_size

DEFAULT_N_CAP = 20
DEFAULT_ENUM_CAP = 10**6


@dataclass(frozen=True)
class LinearExtension:
    """Rank assignment: rank[i] is the 1-based position of element i."""

    rank: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.rank) != list(range(1, len(self.rank) + 1)):
            raise ValueError(f"rank vector {self.rank} is not a permutation of 1..n")

    @property
    def order(self) -> tuple[int, ...]:
        """Elements listed from rank 1 to rank n (0-based elements)."""
        n = len(self.rank)
        out = [0] * n
        for elem, r in enumerate(self.rank):
            out[r - 1] = elem
        return tuple(out)

    @classmethod
    def from_order(cls, order) -> "LinearExtension":
        rank = [0] * len(order)
        for pos, elem in enumerate(order):
            rank[elem] = pos + 1
        return cls(tuple(rank))


def is_extension(P: Poset, ext: LinearExtension) -> bool:
    if len(ext.rank) != P.n:
        return False
    rank = np.asarray(ext.rank)
    rows, cols = np.nonzero(P.rel)
    return bool(np.all(rank[rows] < rank[cols]))


def _memo(P: Poset) -> dict[int, int]:
    memo = getattr(P, "_linext_memo", None)
    if memo is None:
        memo = {0: 1}
        P._linext_memo = memo
    return memo


def _count_upset(P: Poset, mask: int) -> int:
    """Number of linear extensions of P restricted to the up-set `mask`."""
    memo = _memo(P)
    got = memo.get(mask)
    if got is not None:
        return got
    preds = P.pred_masks
    total = 0
    m = mask
    while m:
        low = m & -m
        m ^= low
        e = low.bit_length() - 1
        if preds[e] & mask == 0:
            total += _count_upset(P, mask ^ low)
    memo[mask] = total
    return total


def count_extensions(P: Poset, max_n: int = DEFAULT_N_CAP) -> int:
    """Exact number of linear extensions (arbitrary precision)."""
    if P.n > max_n:
        raise LimitExceededError(f"n={P.n} exceeds the counting cap {max_n}")
    return _count_upset(P, (1 << P.n) - 1)


def _ln_big(x: int) -> float:
    """Natural log of a positive big integer, error well below 1e-12."""
    if x <= 0:
        raise ValueError("log of a non-positive count")
    bits = x.bit_length()
    if bits <= 512:
        return math.log(x)
    shift = bits - 64
    return math.log(x >> shift) + shift * math.log(2)


def itlb(P: Poset, max_n: int = DEFAULT_N_CAP) -> float:
    """Information-theoretic lower bound ln |extensions|; 0 for a chain."""
    return _ln_big(count_extensions(P, max_n=max_n))


def _orders_list(P: Poset, cap: int) -> list[tuple[int, ...]]:
    total = count_extensions(P)
    if total > cap:
        raise LimitExceededError(f"{total} extensions exceed the enumeration cap {cap}")
    cached = getattr(P, "_orders_cache", None)
    if cached is not None:
        return cached
    preds = P.pred_masks
    out: list[tuple[int, ...]] = []

    def rec(mask: int, prefix: tuple[int, ...]) -> None:
        if mask == 0:
            out.append(prefix)
            return
        m = mask
        while m:
            low = m & -m
            m ^= low
            e = low.bit_length() - 1
            if preds[e] & mask == 0:
                rec(mask ^ low, prefix + (e,))

    rec((1 << P.n) - 1, ())
    P._orders_cache = out
    return out


def enumerate_extensions(
    P: Poset, max_extensions: int = DEFAULT_ENUM_CAP
) -> Iterator[LinearExtension]:
    """Yield every extension once, in lexicographic order of element sequence."""
    for order in _orders_list(P, max_extensions):
        yield LinearExtension.from_order(order)


def extension_orders(P: Poset, max_extensions: int = DEFAULT_ENUM_CAP) -> np.ndarray:
    """All extensions as an (N, n) array of element sequences, lex order."""
    return np.array(_orders_list(P, max_extensions), dtype=np.int16).reshape(-1, P.n)


def _sample_order(P: Poset, rng: random.Random) -> tuple[int, ...]:
    # Rank 1 first: pick each minimal element of the unranked up-set with
    # probability proportional to the number of completions, in exact
    # integer arithmetic.
    preds = P.pred_masks
    mask = (1 << P.n) - 1
    order = []
    while mask:
        choices = []
        weights = []
        m = mask
        while m:
            low = m & -m
            m ^= low
            e = low.bit_length() - 1
            if preds[e] & mask == 0:
                choices.append((e, low))
                weights.append(_count_upset(P, mask ^ low))
        r = rng.randrange(sum(weights))
        acc = 0
        for (e, low), w in zip(choices, weights):
            acc += w
            if r < acc:
                order.append(e)
                mask ^= low
                break
    return tuple(order)


def sample_extension(P: Poset, seed: int, max_n: int = DEFAULT_N_CAP) -> LinearExtension:
    """One exactly-uniform extension; deterministic given the seed."""
    if P.n > max_n:
        raise LimitExceededError(f"n={P.n} exceeds the sampling cap {max_n}")
    count_extensions(P, max_n=max_n)
    return LinearExtension.from_order(_sample_order(P, random.Random(seed)))


def count_extensions_sp(e: SPExpr) -> int:
    """Exact extension count by structural recursion over an SP expression.

    Series multiplies counts; parallel multiplies counts and the multinomial
    of the block sizes.  N blocks are rejected: no product form applies.
    """
    if isinstance(e, Singleton):
        return 1
    if isinstance(e, NBlock):
        raise UnsupportedNBlockError("extension counts of N blocks have no product form")
    if isinstance(e, Series):
        return reduce(lambda acc, c: acc * count_extensions_sp(c), e.children, 1)
    sizes = [expr_size(c) for c in e.children]
    multinomial = math.factorial(sum(sizes))
    for s in sizes:
        multinomial //= math.factorial(s)
    return multinomial * reduce(lambda acc, c: acc * count_extensions_sp(c), e.children, 1)
