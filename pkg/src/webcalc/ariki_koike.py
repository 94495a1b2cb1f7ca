"""The Ariki-Koike algebra acting on m thin strands in the annulus.

All algebra happens on image matrices: T_0 is the coil on (1, ..., 1) followed
by the strand returning to the far left, T_i (i >= 1) is the thin crossing of
strands i and i+1.  Spans are measured over the monomial basis J^c T_w.
"""

from __future__ import annotations

import random
from functools import lru_cache
from itertools import product

import numpy as np

from . import combinatorics as cb
from . import rep_engine as re_
from .linear_algebra import PRIME, LinMap, compose, rank_mod_p, random_point, scale
from .rep_engine import LeviDatum
from .scalar_field import ONE, DenominatorVanishes, FieldElem, elementary_symmetric


class IndexOutOfRange(IndexError):
    pass


def _strands(m: int) -> tuple:
    return (1,) * m


def _ident(m: int, ctx: LeviDatum) -> LinMap:
    return re_.identity(_strands(m), ctx)


@lru_cache(maxsize=None)
def ak_generator_image(i: int, m: int, ctx: LeviDatum) -> LinMap:
    """Image of T_i on V^(x m)."""
    if m < 1 or not 0 <= i < m:
        raise IndexOutOfRange(f"T_{i} does not exist for m = {m}")
    if i == 0:
        rest = _strands(m - 1)
        coil = re_.coil_matrix(_strands(m), "winding", ctx)
        # the strand that went around comes back to the left crossing in front
        back = re_.move_left(rest, 1, "right", "plain", ctx)
        return compose(back, coil)
    return re_.thin_crossing("over", m, i - 1, ctx)


@lru_cache(maxsize=None)
def jm_image(i: int, m: int, ctx: LeviDatum) -> LinMap:
    """J_1 = T_0 and J_i = T_{i-1} J_{i-1} T_{i-1}."""
    if not 1 <= i <= m:
        raise IndexOutOfRange(f"J_{i} does not exist for m = {m}")
    if i == 1:
        return ak_generator_image(0, m, ctx)
    t = ak_generator_image(i - 1, m, ctx)
    return compose(t, compose(jm_image(i - 1, m, ctx), t))


def _power(f: LinMap, k: int, m: int, ctx: LeviDatum) -> LinMap:
    out = _ident(m, ctx)
    for _ in range(k):
        out = compose(f, out)
    return out


@lru_cache(maxsize=None)
def epsilon_image(k: int, i: int, m: int, ctx: LeviDatum) -> LinMap:
    """eps_k^(1) = e_k(u_1..u_d); eps_k^(i) adds (q^2-1) sum_j (-1)^(j-1) J_{i-1}^j eps_{k-j}^(i-1)."""
    if not 1 <= i <= m:
        raise IndexOutOfRange(f"eps^({i}) needs 1 <= i <= m = {m}")
    if k < 0:
        return LinMap.zero(ctx.space(_strands(m)), ctx.space(_strands(m)))
    if i == 1:
        us = [ctx.u(a) for a in range(1, ctx.d + 1)]
        return scale(_ident(m, ctx), elementary_symmetric(k, us))
    prev = epsilon_image(k, i - 1, m, ctx)
    J = jm_image(i - 1, m, ctx)
    acc = None
    for j in range(1, k + 1):
        term = compose(_power(J, j, m, ctx), epsilon_image(k - j, i - 1, m, ctx))
        term = term if j % 2 else -term
        acc = term if acc is None else acc + term
    if acc is None:
        return prev
    return prev + scale(acc, ctx.qpow(2) - ONE)


@lru_cache(maxsize=None)
def r_element_image(i: int, m: int, ctx: LeviDatum) -> LinMap:
    """R_i = sum_k (-1)^k eps_k^(i) J_i^(d-k)."""
    J = jm_image(i, m, ctx)
    acc = None
    for k in range(ctx.d + 1):
        term = compose(epsilon_image(k, i, m, ctx), _power(J, ctx.d - k, m, ctx))
        term = term if k % 2 == 0 else -term
        acc = term if acc is None else acc + term
    return acc


def predicted_jm_eigenvalues(i: int, m: int, ctx: LeviDatum) -> list[FieldElem]:
    """Distinct u_a q^(2b-2c) over entries i of standard tableaux of admissible shapes."""
    out: list[FieldElem] = []
    for shape in cb.bounded_dpartitions(m, ctx.composition):
        for t in cb.standard_tableaux(shape):
            a, b, c = cb.entry_position(t, i)
            x = ctx.u(a) * ctx.qpow(2 * b - 2 * c)
            if not any(x == y for y in out):
                out.append(x)
    return out


def check_relations(m: int, ctx: LeviDatum) -> dict[str, bool]:
    """Every defining relation of the Ariki-Koike algebra on the images."""
    T = [ak_generator_image(i, m, ctx) for i in range(m)]
    I = _ident(m, ctx)
    q, qi = ctx.qpow(1), ctx.qpow(-1)
    res: dict[str, bool] = {}
    acc = I
    for k in range(1, ctx.d + 1):
        acc = compose(T[0] - scale(I, ctx.u(k)), acc)
    res["cyclotomic"] = acc.is_zero()
    if m >= 2:
        lhs = compose(T[0], compose(T[1], compose(T[0], T[1])))
        rhs = compose(T[1], compose(T[0], compose(T[1], T[0])))
        res["T0T1T0T1"] = lhs == rhs
    for i in range(1, m):
        res[f"quadratic_{i}"] = compose(T[i] - scale(I, q), T[i] + scale(I, qi)).is_zero()
    for i in range(1, m):
        for j in range(i + 1, m):
            if j - i == 1:
                a = compose(T[i], compose(T[j], T[i]))
                b = compose(T[j], compose(T[i], T[j]))
                res[f"braid_{i}_{j}"] = a == b
            else:
                res[f"commute_{i}_{j}"] = compose(T[i], T[j]) == compose(T[j], T[i])
    for j in range(2, m):
        res[f"commute_0_{j}"] = compose(T[0], T[j]) == compose(T[j], T[0])
    return res


def check_jm(m: int, ctx: LeviDatum) -> dict[str, bool]:
    """JM elements commute and are killed by their predicted eigenvalue products."""
    from .linear_algebra import annihilates
    res = {}
    J = [jm_image(i, m, ctx) for i in range(1, m + 1)]
    for a in range(m):
        for b in range(a + 1, m):
            res[f"commute_J{a + 1}_J{b + 1}"] = compose(J[a], J[b]) == compose(J[b], J[a])
    for i in range(1, m + 1):
        res[f"minpoly_J{i}"] = annihilates(J[i - 1], predicted_jm_eigenvalues(i, m, ctx))
    return res


def check_kernel(m: int, ctx: LeviDatum) -> dict[str, bool]:
    """R_1 and R_2 act by zero (meaningful in the Cartan case)."""
    res = {}
    for i in (1, 2):
        if i <= m:
            res[f"R{i}_zero"] = r_element_image(i, m, ctx).is_zero()
    return res


def blob_dimension(m: int, ctx: LeviDatum) -> int:
    return sum(cb.count_standard_tableaux(s) ** 2 for s in cb.bounded_dpartitions(m, ctx.composition))


# Rank of the image ------------------------------------------------------------------

def _matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    # split b into 16-bit limbs so int64 products cannot overflow
    lo = b & 0xFFFF
    hi = b >> 16
    return ((a @ hi) % p * 65536 + (a @ lo)) % p


def _permutation_words(m: int) -> list[tuple]:
    """One reduced word (list of generator indices 1..m-1) per permutation of m, breadth first."""
    start = tuple(range(m))
    seen = {start: ()}
    frontier = [start]
    while frontier:
        nxt = []
        for w in frontier:
            for i in range(1, m):
                v = list(w)
                v[i - 1], v[i] = v[i], v[i - 1]
                v = tuple(v)
                if v not in seen:
                    seen[v] = seen[w] + (i,)
                    nxt.append(v)
        frontier = nxt
    return sorted(seen.values(), key=lambda x: (len(x), x))


def image_span_matrices(m: int, ctx: LeviDatum, v: int, us: list[int], p: int = PRIME) -> list[np.ndarray]:
    """Specialized images of the monomials J_1^c_1 ... J_m^c_m T_w."""
    if m == 0:
        return [np.ones((1, 1), dtype=np.int64)]
    T = [ak_generator_image(i, m, ctx).to_numpy_mod(v, us, p) for i in range(m)]
    dim = T[0].shape[0]
    ident = np.eye(dim, dtype=np.int64)
    J = [T[0]]
    for i in range(2, m + 1):
        t = T[i - 1]
        J.append(_matmul_mod(t, _matmul_mod(J[-1], t, p), p))
    Jpow = [[ident] for _ in range(m)]
    for i in range(m):
        for _ in range(1, ctx.d):
            Jpow[i].append(_matmul_mod(J[i], Jpow[i][-1], p))
    Tw = []
    for word in _permutation_words(m):
        acc = ident
        for g in word:
            acc = _matmul_mod(acc, T[g], p)
        Tw.append(acc)
    out = []
    for c in product(range(ctx.d), repeat=m):
        jm = ident
        for i, e in enumerate(c):
            jm = _matmul_mod(jm, Jpow[i][e], p)
        for t in Tw:
            out.append(_matmul_mod(jm, t, p))
    return out


def image_rank(m: int, ctx: LeviDatum, seed: int = 0, points: int = 3, p: int = PRIME) -> int:
    """Dimension of the span of the monomial images, maximized over random F_p points."""
    rng = random.Random(seed)
    best = 0
    for _ in range(points):
        for _attempt in range(10):
            v, us = random_point(rng, ctx.d, p)
            if ctx.mode == "v1":
                v = 1
            try:
                mats = image_span_matrices(m, ctx, v, us, p)
            except DenominatorVanishes:
                continue
            break
        else:
            raise DenominatorVanishes("no admissible specialization point found")
        best = max(best, rank_mod_p(np.stack([x.reshape(-1) for x in mats]), p))
    return best


def is_cartan(ctx: LeviDatum) -> bool:
    return all(l == 1 for l in ctx.composition)


def ak_report(m: int, ctx: LeviDatum, seed: int = 0, checks: tuple = ("relations", "jm", "dimension", "kernel")) -> dict:
    """Summary of all Ariki-Koike checks; unchecked fields are None."""
    rep = {"m": m, "levi": list(ctx.composition), "blob_dimension": None, "image_rank": None,
           "relations_ok": None, "jm_minpoly_ok": None, "r2_kernel_ok": None}
    if "dimension" in checks:
        rep["blob_dimension"] = blob_dimension(m, ctx)
        rep["image_rank"] = image_rank(m, ctx, seed)
    if "relations" in checks and m >= 1:
        rep["relations_ok"] = all(check_relations(m, ctx).values())
    if "jm" in checks and m >= 1:
        rep["jm_minpoly_ok"] = all(check_jm(m, ctx).values())
    if "kernel" in checks and m >= 1 and is_cartan(ctx):
        rep["r2_kernel_ok"] = all(check_kernel(m, ctx).values())
    return rep


def report_passes(rep: dict) -> bool:
    ok = all(rep[k] is not False for k in ("relations_ok", "jm_minpoly_ok", "r2_kernel_ok"))
    if rep["blob_dimension"] is not None:
        ok = ok and rep["blob_dimension"] == rep["image_rank"]
    return ok
