"""Brute-force reference values, computed without importing webcalc.

Run once and commit the output; tests only read the frozen JSON:

    python3 tests/oracles/generate_frozen.py > tests/data/frozen_oracles.json

Polynomials are lists of [exponents, coefficient] with exponents ordered
(v, u_1, u_2, ...) and trailing zeros removed.
"""

import json
from collections import Counter
from itertools import combinations, permutations, product


def poly(counter):
    out = []
    for e, c in sorted(counter.items()):
        if c:
            e = list(e)
            while e and e[-1] == 0:
                e.pop()
            out.append([e, c])
    return out


def qbinomial(n, k):
    """Sum over k-subsets S of 1..n of v^(2 inv(S) - k(n-k)), inv counting pairs s > t with t outside S."""
    c = Counter()
    for S in combinations(range(1, n + 1), k):
        inv = sum(1 for s in S for t in range(1, n + 1) if t not in S and s > t)
        c[(2 * inv - k * (n - k),)] += 1
    return poly(c)


def partitions_brute(m, rows):
    """Weakly decreasing tuples of positive ints summing to m with at most ``rows`` parts."""
    out = []
    for r in range(0, min(m, rows) + 1):
        for parts in product(range(1, m + 1), repeat=r):
            if sum(parts) == m and all(parts[i] >= parts[i + 1] for i in range(r - 1)):
                out.append(parts)
    return out if m else [()]


def dpartitions_brute(m, limits):
    out = []
    for sizes in product(range(m + 1), repeat=len(limits)):
        if sum(sizes) != m:
            continue
        for combo in product(*[partitions_brute(s, lim) for s, lim in zip(sizes, limits)]):
            out.append(combo)
    return out


def boxes(shape):
    return [(a, r, c) for a, comp in enumerate(shape) for r, length in enumerate(comp) for c in range(length)]


def standard_fillings(shape):
    bx = boxes(shape)
    m = len(bx)
    found = []
    for perm in permutations(range(1, m + 1)):
        f = dict(zip(bx, perm))
        ok = True
        for (a, r, c), x in f.items():
            if (a, r, c + 1) in f and f[(a, r, c + 1)] < x:
                ok = False
            if (a, r + 1, c) in f and f[(a, r + 1, c)] < x:
                ok = False
        if ok:
            found.append(f)
    return found


def blob_dim(m, limits):
    return sum(len(standard_fillings(s)) ** 2 for s in dpartitions_brute(m, limits))


def has_decreasing(seq, length):
    return any(all(c[i] > c[i + 1] for i in range(length - 1)) for c in combinations(seq, length))


def colored_count(m, limits):
    d = len(limits)
    total = 0
    for s in product(range(d), repeat=m):
        for t in product(range(d), repeat=m):
            for sigma in permutations(range(m)):
                if any(s[j] != t[sigma[j]] for j in range(m)):
                    continue
                ok = True
                for col in range(d):
                    seq = [sigma[j] for j in range(m) if s[j] == col]
                    if has_decreasing(seq, limits[col] + 1):
                        ok = False
                if ok:
                    total += 1
    return total


def levi_circle(k, side, comp):
    """e_k of the v-shifted u's, expanded by brute force over k-subsets."""
    args = []
    for i, l in enumerate(comp, start=1):
        for j in range(1, l + 1):
            e = [0] * (len(comp) + 1)
            e[0] = -(2 * j - 1) if side == "left" else 2 * j - 1
            e[i] = 1 if side == "left" else -1
            args.append(tuple(e))
    c = Counter()
    for S in combinations(range(len(args)), k):
        e = tuple(sum(args[x][y] for x in S) for y in range(len(comp) + 1))
        c[e] += 1
    return poly(c)


def compositions(n):
    if n == 0:
        return [()]
    return [(f,) + r for f in range(n, 0, -1) for r in compositions(n - f)]


def jm_contents(m, i, limits):
    """Distinct (block a, b - c) over entries i of standard tableaux with bounded rows."""
    vals = set()
    for shape in dpartitions_brute(m, limits):
        for f in standard_fillings(shape):
            for (a, r, c), x in f.items():
                if x == i:
                    vals.add((a + 1, c - r))
    return sorted(vals)


def main():
    data = {
        "qbinomial": {f"{n},{k}": qbinomial(n, k) for n in range(0, 5) for k in range(0, n + 1)},
        "blob_dimension": {f"{','.join(map(str, comp))}|{m}": blob_dim(m, comp)
                           for n in range(1, 4) for comp in compositions(n) for m in range(0, 5)},
        "colored_count": {f"{','.join(map(str, comp))}|{m}": colored_count(m, comp)
                          for n in range(1, 4) for comp in compositions(n) for m in range(0, 4)},
        "levi_circle": {f"{','.join(map(str, comp))}|{k}|{side}": levi_circle(k, side, comp)
                        for n in range(1, 5) for comp in compositions(n) for k in range(0, n + 1)
                        for side in ("left", "right")},
        "jm_contents": {f"{','.join(map(str, comp))}|{m}|{i}": jm_contents(m, i, comp)
                        for n in range(1, 4) for comp in compositions(n) for m in range(1, 4)
                        for i in range(1, m + 1)},
        "exterior_dims": {f"{n},{k}": len(list(combinations(range(n), k))) for n in range(1, 5) for k in range(0, 6)},
        # merge(1,1) at n = 2 from the defining coefficient delta * (-q)^(-|T<S|)
        "merge_1_1_n2": [[[1], [2], [[[0], 1]]], [[2], [1], [[[-1], -1]]], [[1], [1], []], [[2], [2], []]],
        # capR(1) at n = 2: q^(|S<N| - |N<S|)
        "capR_1_n2": [[[1], [[[1], 1]]], [[2], [[[-1], 1]]]],
    }
    print(json.dumps(data, indent=1, sort_keys=True))


if __name__ == "__main__":
    main()
