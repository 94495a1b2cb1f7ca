from math import comb, factorial

import pytest
from hypothesis import given, strategies as st

from webcalc import combinatorics as cb


def _key(comp, *rest):
    return "|".join([",".join(map(str, comp))] + [str(x) for x in rest])


@given(st.integers(0, 7), st.integers(0, 8))
def test_subset_count(n, k):
    assert len(cb.subsets(n, k)) == (comb(n, k) if k <= n else 0)


def test_cross_count_and_weight():
    assert cb.cross_count((1, 3), (2, 4)) == 3
    assert cb.n_weight((1,), 2) == 1
    assert cb.n_weight((2,), 2) == -1


@given(st.lists(st.integers(1, 3), min_size=1, max_size=4))
def test_block_index_round_trip(comp):
    n = sum(comp)
    for flat in range(1, n + 1):
        i, j = cb.block_index(flat, comp)
        assert cb.flat_index(i, j, comp) == flat


def test_blob_dimensions_match_tableau_oracle(frozen):
    for key, want in frozen["blob_dimension"].items():
        comp, m = key.split("|")
        comp = tuple(map(int, comp.split(",")))
        shapes = cb.bounded_dpartitions(int(m), comp)
        assert sum(cb.count_standard_tableaux(s) ** 2 for s in shapes) == want, key


def _hook_count(part):
    m = sum(part)
    hooks = 1
    for r, length in enumerate(part):
        for c in range(length):
            arm = length - c - 1
            leg = sum(1 for rr in range(r + 1, len(part)) if part[rr] > c)
            hooks *= arm + leg + 1
    return factorial(m) // hooks


@given(st.integers(1, 7))
def test_single_component_tableaux_follow_hook_lengths(m):
    for lam in cb.partitions(m):
        assert cb.count_standard_tableaux((lam,)) == _hook_count(lam)


def test_colored_counts_match_brute_force(frozen):
    for key, want in frozen["colored_count"].items():
        comp, m = key.split("|")
        comp = tuple(map(int, comp.split(",")))
        assert cb.colored_basis_count(int(m), comp) == want, key


def test_colored_permutations_without_restriction_are_all_matchings():
    perms = cb.colored_permutations((1, 2, 1), (1, 1, 2), (5, 5))
    assert len(perms) == 2


def test_colored_permutations_reject_mismatched_content():
    with pytest.raises(cb.ColorMismatch):
        cb.colored_permutations((1, 1), (1, 2), (1, 1))


def test_entry_position():
    t = cb.standard_tableaux(((2,), (1,)))
    assert len(t) == 3
    pos = {cb.entry_position(x, 3) for x in t}
    assert (2, 1, 1) in pos


@given(st.integers(0, 6))
def test_compositions_count(n):
    assert len(list(cb.compositions(n))) == (2 ** (n - 1) if n else 1)
