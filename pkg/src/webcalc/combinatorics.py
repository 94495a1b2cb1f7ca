"""Index sets and counting: subsets, crossing statistics, Levi blocks,
d-partitions, standard d-tableaux and colored permutations."""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations, permutations
from math import factorial
from typing import Iterator, Sequence

Subset = tuple  # strictly increasing tuple of ints in 1..n


class ColorMismatch(ValueError):
    pass


def subsets(n: int, k: int) -> list[Subset]:
    """k-subsets of 1..n in lexicographic order (empty list when k > n)."""
    if k < 0 or k > n:
        return []
    return list(combinations(range(1, n + 1), k))


def cross_count(S: Sequence[int], T: Sequence[int]) -> int:
    """Number of pairs (s, t) in S x T with s < t."""
    return sum(1 for s in S for t in T if s < t)


def n_weight(S: Sequence[int], n: int) -> int:
    """|S<N| - |N<S| with N = (1, ..., n)."""
    N = range(1, n + 1)
    return cross_count(S, N) - cross_count(N, S)


# Levi blocks --------------------------------------------------------------

def block_starts(composition: Sequence[int]) -> list[int]:
    starts, acc = [], 0
    for l in composition:
        starts.append(acc)
        acc += l
    return starts


def block_index(flat: int, composition: Sequence[int]) -> tuple[int, int]:
    """Flat basis index 1..n -> (block i, position j), both 1-based."""
    acc = 0
    for i, l in enumerate(composition, start=1):
        if flat <= acc + l:
            return i, flat - acc
        acc += l
    raise ValueError(f"index {flat} exceeds n = {acc}")


def flat_index(i: int, j: int, composition: Sequence[int]) -> int:
    if not (1 <= i <= len(composition) and 1 <= j <= composition[i - 1]):
        raise ValueError(f"no basis vector v_({i},{j}) for composition {tuple(composition)}")
    return sum(composition[: i - 1]) + j


# d-partitions and tableaux ------------------------------------------------

def partitions(m: int, max_rows: int | None = None, max_part: int | None = None) -> Iterator[tuple]:
    """Partitions of m as weakly decreasing tuples, largest first."""
    if max_part is None:
        max_part = m
    if m == 0:
        yield ()
        return
    if max_rows == 0:
        return
    for first in range(min(m, max_part), 0, -1):
        rest_rows = None if max_rows is None else max_rows - 1
        for rest in partitions(m - first, rest_rows, first):
            yield (first,) + rest


def bounded_dpartitions(m: int, limits: Sequence[int | None]) -> list[tuple]:
    """d-partitions of m whose i-th component has at most limits[i] rows (None = unbounded)."""
    d = len(limits)
    out: list[tuple] = []

    def rec(i: int, left: int, acc: tuple):
        if i == d - 1:
            for lam in partitions(left, limits[i]):
                out.append(acc + (lam,))
            return
        for size in range(left, -1, -1):
            for lam in partitions(size, limits[i]):
                rec(i + 1, left - size, acc + (lam,))

    if d == 0:
        return [()] if m == 0 else []
    rec(0, m, ())
    return out


def standard_tableaux(shape: tuple) -> list[tuple]:
    """Standard fillings of a d-partition by 1..m.

    A tableau is a tuple of components; a component is a tuple of rows.
    """
    return [tuple(tuple(tuple(r) for r in comp) for comp in t) for t in _std(tuple(tuple(c) for c in shape))]


@lru_cache(maxsize=None)
def _std(shape: tuple) -> tuple:
    m = sum(sum(c) for c in shape)
    if m == 0:
        return (tuple(() for _ in shape),)
    out = []
    for a, comp in enumerate(shape):
        for r, length in enumerate(comp):
            below = comp[r + 1] if r + 1 < len(comp) else 0
            if length > below:  # removable corner holds the entry m
                smaller = list(comp)
                smaller[r] -= 1
                if smaller[r] == 0:
                    smaller.pop(r)
                sub_shape = shape[:a] + (tuple(smaller),) + shape[a + 1:]
                for t in _std(sub_shape):
                    comp_t = [list(row) for row in t[a]]
                    if r == len(comp_t):
                        comp_t.append([])
                    comp_t[r].append(m)
                    out.append(t[:a] + (tuple(tuple(row) for row in comp_t),) + t[a + 1:])
    return tuple(out)


def count_standard_tableaux(shape: tuple) -> int:
    return len(_std(tuple(tuple(c) for c in shape)))


def entry_position(tableau: tuple, entry: int) -> tuple[int, int, int]:
    """(component a, column b, row c), all 1-based, of ``entry`` in a d-tableau."""
    for a, comp in enumerate(tableau, start=1):
        for c, row in enumerate(comp, start=1):
            if entry in row:
                return a, row.index(entry) + 1, c
    raise ValueError(f"entry {entry} not in tableau")


# Colored permutations -----------------------------------------------------

def longest_decreasing(seq: Sequence[int]) -> int:
    best: list[int] = []
    for i, x in enumerate(seq):
        best.append(1 + max((best[j] for j in range(i) if seq[j] > x), default=0))
    return max(best, default=0)


def colored_permutations(s: Sequence[int], t: Sequence[int], limits: Sequence[int]) -> list[tuple]:
    """Color-preserving permutations from s to t avoiding a decreasing pattern
    of length l_i + 1 among the strands of color i.

    A permutation is returned as a tuple ``sigma`` with ``sigma[j]`` the top
    position (0-based) of the strand starting at bottom position ``j``.
    """
    if sorted(s) != sorted(t):
        raise ColorMismatch(f"color words {tuple(s)} and {tuple(t)} have different multiplicities")
    colors = sorted(set(s))
    bottom = {c: [j for j, x in enumerate(s) if x == c] for c in colors}
    top = {c: [j for j, x in enumerate(t) if x == c] for c in colors}
    per_color = {}
    for c in colors:
        size = len(bottom[c])
        lim = limits[c - 1]
        per_color[c] = [p for p in permutations(range(size)) if longest_decreasing(p) <= lim]
    out = []

    def rec(idx: int, sigma: dict):
        if idx == len(colors):
            out.append(tuple(sigma[j] for j in range(len(s))))
            return
        c = colors[idx]
        for p in per_color[c]:
            nxt = dict(sigma)
            for a, b in enumerate(p):
                nxt[bottom[c][a]] = top[c][b]
            rec(idx + 1, nxt)

    rec(0, {})
    return sorted(out)


def colored_basis_count(m: int, limits: Sequence[int]) -> int:
    """Number of admissible colored permutations summed over all pairs of color words of length m.

    Words with the same color content contribute independently of their
    arrangement, so the sum is grouped by content.
    """
    total = 0
    for content in compositions_with_zeros(m, len(limits)):
        words = factorial(m)
        for x in content:
            words //= factorial(x)
        per = 1
        for x, lim in zip(content, limits):
            per *= sum(1 for p in permutations(range(x)) if longest_decreasing(p) <= lim)
        total += words * words * per
    return total


def compositions_with_zeros(m: int, parts: int) -> Iterator[tuple]:
    if parts == 0:
        if m == 0:
            yield ()
        return
    if parts == 1:
        yield (m,)
        return
    for x in range(m, -1, -1):
        for rest in compositions_with_zeros(m - x, parts - 1):
            yield (x,) + rest


def compositions(n: int) -> Iterator[tuple]:
    """Compositions of n into positive parts."""
    if n == 0:
        yield ()
        return
    for first in range(n, 0, -1):
        for rest in compositions(n - first):
            yield (first,) + rest
