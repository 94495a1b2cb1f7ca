"""Matrices of the web generators, crossings, Levi crossings, coils and the
quantum group action on tensor products of exterior powers of V = K^n.

Everything here is built from a handful of explicit formulas:

* merge  v_S (x) v_T -> (-q)^(-|T<S|) v_{S u T}          (S, T disjoint)
* split  v_U -> (-1)^(kl) sum_{S u T = U} (-q)^(|S<T|) v_S (x) v_T
* caps and cups pairing v_S with v_S^*, twisted by q^(+-|S,N|) on one side
* the thin (1,1) crossings, and their Levi variants (swap across blocks)

Thick crossings and thick coils are obtained by exploding strands into thin
ones and imploding back, dividing by quantum factorials.  Crossings and coils
with dual (negative) labels are obtained by bending with cups and caps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from . import combinatorics as cb
from .linear_algebra import BasisSpace, LinMap, ShapeMismatch, compose, compose_all, kron, kron_all, scale
from .scalar_field import (ONE, ZERO, FieldElem, LaurentPoly, elementary_symmetric,
                           inverse_quantum_factorial, inverse_u_difference, quantum_integer)


class NegativeLabel(ValueError):
    pass


@dataclass(frozen=True)
class LeviDatum:
    """Rank n, the Levi composition (l_1, ..., l_d) and the parameter mode.

    ``mode`` is ``"generic"`` (v stays symbolic) or ``"v1"`` (v -> 1).
    """

    n: int
    composition: tuple = field(default=None)
    mode: str = "generic"

    def __post_init__(self):
        comp = self.composition if self.composition is not None else (self.n,)
        comp = tuple(int(x) for x in comp)
        object.__setattr__(self, "composition", comp)
        if self.n < 1 or any(x < 1 for x in comp) or sum(comp) != self.n:
            raise ValueError(f"composition {comp} must consist of positive parts summing to n = {self.n}")
        if self.mode not in ("generic", "v1"):
            raise ValueError(f"unknown mode {self.mode!r}")

    @property
    def d(self) -> int:
        return len(self.composition)

    def block(self, flat: int) -> int:
        return cb.block_index(flat, self.composition)[0]

    def with_mode(self, mode: str) -> "LeviDatum":
        return LeviDatum(self.n, self.composition, mode)

    # scalars
    def qpow(self, e: int) -> FieldElem:
        return ONE if self.mode == "v1" or e == 0 else FieldElem.v(e)

    def negqpow(self, e: int) -> FieldElem:
        s = self.qpow(e)
        return -s if e % 2 else s

    def qint(self, m: int) -> FieldElem:
        x = quantum_integer(m)
        return x.at_v1() if self.mode == "v1" else x

    def inv_qfact(self, k: int) -> FieldElem:
        x = inverse_quantum_factorial(k)
        return x.at_v1() if self.mode == "v1" else x

    def u(self, i: int, power: int = 1) -> FieldElem:
        return FieldElem.u(i, power)

    def adapt(self, x: FieldElem) -> FieldElem:
        """Bring a scalar written in v into this context's mode."""
        return x.at_v1() if self.mode == "v1" else x

    def space(self, word: Sequence[int]) -> BasisSpace:
        return BasisSpace(word, self.n)

    def __str__(self) -> str:
        return f"n={self.n}, levi={','.join(map(str, self.composition))}, mode={self.mode}"


# Label helpers --------------------------------------------------------------

def _expand(word: Sequence[int], label: tuple) -> list:
    """Per-entry labels of ``word`` including empty subsets at zero entries."""
    it = iter(label)
    return [() if k == 0 else next(it) for k in word]


def _join(word: Sequence[int], parts: Sequence) -> tuple:
    return tuple(p for k, p in zip(word, parts) if k != 0)


def _check_labels(*labels: int):
    for k in labels:
        if k < 0:
            raise NegativeLabel(f"generator labels must be non-negative, got {k}")


def identity(word: Sequence[int], ctx: LeviDatum) -> LinMap:
    return LinMap.identity(ctx.space(word))


def tensor(*maps: LinMap) -> LinMap:
    return kron_all(*maps)


# Web generators ---------------------------------------------------------------

@lru_cache(maxsize=None)
def merge(k: int, l: int, ctx: LeviDatum) -> LinMap:
    _check_labels(k, l)
    dom_w, cod_w = (k, l), (k + l,)

    def fn(lab):
        S, T = _expand(dom_w, lab)
        if set(S) & set(T):
            return []
        U = tuple(sorted(S + T))
        return [(_join(cod_w, [U]), ctx.negqpow(-cb.cross_count(T, S)))]

    return LinMap.from_function(ctx.space(dom_w), ctx.space(cod_w), fn)


@lru_cache(maxsize=None)
def split(k: int, l: int, ctx: LeviDatum) -> LinMap:
    _check_labels(k, l)
    dom_w, cod_w = (k + l,), (k, l)
    sign = -1 if (k * l) % 2 else 1

    def fn(lab):
        (U,) = _expand(dom_w, lab)
        out = []
        for S in _combos(U, k):
            T = tuple(x for x in U if x not in S)
            c = ctx.negqpow(cb.cross_count(S, T))
            out.append((_join(cod_w, [S, T]), c if sign > 0 else -c))
        return out

    return LinMap.from_function(ctx.space(dom_w), ctx.space(cod_w), fn)


def _combos(U: tuple, k: int):
    from itertools import combinations
    return combinations(U, k)


@lru_cache(maxsize=None)
def cap_left(k: int, ctx: LeviDatum) -> LinMap:
    """(-k, k) -> (): v_S^* (x) v_T -> delta_{S,T}."""
    _check_labels(k)
    dom_w = (-k, k)

    def fn(lab):
        S, T = _expand(dom_w, lab)
        return [((), ONE)] if S == T else []

    return LinMap.from_function(ctx.space(dom_w), ctx.space(()), fn)


@lru_cache(maxsize=None)
def cap_right(k: int, ctx: LeviDatum) -> LinMap:
    """(k, -k) -> (): v_S (x) v_T^* -> q^|S,N| delta_{S,T}."""
    _check_labels(k)
    dom_w = (k, -k)

    def fn(lab):
        S, T = _expand(dom_w, lab)
        return [((), ctx.qpow(cb.n_weight(S, ctx.n)))] if S == T else []

    return LinMap.from_function(ctx.space(dom_w), ctx.space(()), fn)


@lru_cache(maxsize=None)
def cup_left(k: int, ctx: LeviDatum) -> LinMap:
    """() -> (k, -k): 1 -> sum_S v_S (x) v_S^*."""
    _check_labels(k)
    cod_w = (k, -k)
    return LinMap.from_function(
        ctx.space(()), ctx.space(cod_w),
        lambda lab: [(_join(cod_w, [S, S]), ONE) for S in cb.subsets(ctx.n, k)])


@lru_cache(maxsize=None)
def cup_right(k: int, ctx: LeviDatum) -> LinMap:
    """() -> (-k, k): 1 -> sum_S q^(-|S,N|) v_S^* (x) v_S."""
    _check_labels(k)
    cod_w = (-k, k)
    return LinMap.from_function(
        ctx.space(()), ctx.space(cod_w),
        lambda lab: [(_join(cod_w, [S, S]), ctx.qpow(-cb.n_weight(S, ctx.n))) for S in cb.subsets(ctx.n, k)])


def _cup_signed(a: int, ctx: LeviDatum) -> LinMap:
    """Coevaluation () -> (a, -a) for a signed label."""
    return cup_left(a, ctx) if a > 0 else cup_right(-a, ctx)


def _cap_signed(a: int, ctx: LeviDatum) -> LinMap:
    """Evaluation (-a, a) -> () for a signed label."""
    return cap_left(a, ctx) if a > 0 else cap_right(-a, ctx)


def dual_word(word: Sequence[int]) -> tuple:
    return tuple(-k for k in reversed(word))


def coevaluation(word: Sequence[int], ctx: LeviDatum) -> LinMap:
    """() -> word (x) word^*, nested cups."""
    word = tuple(k for k in word if k)
    if not word:
        return identity((), ctx)
    head, last = word[:-1], word[-1]
    inner = coevaluation(head, ctx)
    step = tensor(identity(head, ctx), _cup_signed(last, ctx), identity(dual_word(head), ctx))
    return compose(step, inner)


def evaluation(word: Sequence[int], ctx: LeviDatum) -> LinMap:
    """word^* (x) word -> (), nested caps."""
    word = tuple(k for k in word if k)
    if not word:
        return identity((), ctx)
    head, last = word[:-1], word[-1]
    inner = tensor(identity((-last,), ctx), evaluation(head, ctx), identity((last,), ctx))
    return compose(_cap_signed(last, ctx), inner)


def left_dual(f: LinMap, ctx: LeviDatum) -> LinMap:
    """Rotate f: A -> B by a half turn to get B^* -> A^*."""
    A, B = f.domain.word, f.codomain.word
    Ad, Bd = dual_word(A), dual_word(B)
    step1 = tensor(identity(Bd, ctx), coevaluation(A, ctx))
    step2 = tensor(identity(Bd, ctx), f, identity(Ad, ctx))
    step3 = tensor(evaluation(B, ctx), identity(Ad, ctx))
    return compose_all(step3, step2, step1)


@lru_cache(maxsize=None)
def dmerge(k: int, l: int, ctx: LeviDatum) -> LinMap:
    """(-k, -l) -> (-(k+l)), the rotated split(l, k)."""
    _check_labels(k, l)
    return left_dual(split(l, k, ctx), ctx)


@lru_cache(maxsize=None)
def dsplit(k: int, l: int, ctx: LeviDatum) -> LinMap:
    """(-(k+l)) -> (-k, -l), the rotated merge(l, k)."""
    _check_labels(k, l)
    return left_dual(merge(l, k, ctx), ctx)


# Explosion -------------------------------------------------------------------

@lru_cache(maxsize=None)
def explode(k: int, ctx: LeviDatum) -> LinMap:
    """Iterated split of a k-strand into k thin strands."""
    if k <= 1:
        return identity((k,), ctx)
    return compose(tensor(identity((1,), ctx), explode(k - 1, ctx)), split(1, k - 1, ctx))


@lru_cache(maxsize=None)
def implode(k: int, ctx: LeviDatum) -> LinMap:
    """Iterated merge of k thin strands into a k-strand."""
    if k <= 1:
        return identity((k,), ctx)
    return compose(merge(1, k - 1, ctx), tensor(identity((1,), ctx), implode(k - 1, ctx)))


@lru_cache(maxsize=None)
def dual_explode(k: int, ctx: LeviDatum) -> LinMap:
    if k <= 1:
        return identity((-k,), ctx)
    return compose(tensor(identity((-1,), ctx), dual_explode(k - 1, ctx)), dsplit(1, k - 1, ctx))


@lru_cache(maxsize=None)
def dual_implode(k: int, ctx: LeviDatum) -> LinMap:
    if k <= 1:
        return identity((-k,), ctx)
    return compose(dmerge(1, k - 1, ctx), tensor(identity((-1,), ctx), dual_implode(k - 1, ctx)))


def explode_signed(a: int, ctx: LeviDatum) -> LinMap:
    return explode(a, ctx) if a >= 0 else dual_explode(-a, ctx)


def implode_signed(a: int, ctx: LeviDatum) -> LinMap:
    return implode(a, ctx) if a >= 0 else dual_implode(-a, ctx)


# Thin crossings ----------------------------------------------------------------

THIN_KINDS = ("over", "under", "levi_over", "levi_under")


def _thin_rule(kind: str, i: int, j: int, ctx: LeviDatum) -> list:
    """Image of v_i (x) v_j under a thin crossing, as [((a, b), coeff)]."""
    if kind.startswith("levi") and ctx.block(i) != ctx.block(j):
        return [((j, i), ONE)]
    over = kind.endswith("over")
    q = ctx.qpow(1)
    qi = ctx.qpow(-1)
    if i == j:
        return [((i, i), q if over else qi)]
    if (i < j) == over:
        return [((j, i), ONE)]
    return [((j, i), ONE), ((i, j), (q - qi) if over else (qi - q))]


@lru_cache(maxsize=None)
def thin_crossing(kind: str, m: int, pos: int, ctx: LeviDatum) -> LinMap:
    """Thin crossing of strands pos, pos+1 (0-based) on V^(x m); the left strand moves right."""
    word = (1,) * m

    def fn(lab):
        i, j = lab[pos][0], lab[pos + 1][0]
        out = []
        for (a, b), c in _thin_rule(kind, i, j, ctx):
            new = list(lab)
            new[pos], new[pos + 1] = (a,), (b,)
            out.append((tuple(new), c))
        return out

    sp = ctx.space(word)
    return LinMap.from_function(sp, sp, fn)


def thin_braid(kind_word: Sequence[tuple], m: int, ctx: LeviDatum) -> LinMap:
    """Compose thin crossings given bottom-to-top as (kind, pos) pairs."""
    out = identity((1,) * m, ctx)
    for kind, pos in kind_word:
        out = compose(thin_crossing(kind, m, pos, ctx), out)
    return out


def _group_braid_word(k: int, l: int, kind: str) -> list:
    """Bottom-to-top word moving a group of k strands past a group of l strands."""
    word = []
    for a in range(k - 1, -1, -1):
        for j in range(a, a + l):
            word.append((kind, j))
    return word


def _apply_thin_word(vec: dict, word: Sequence[tuple], ctx: LeviDatum) -> dict:
    """Push a vector on thin strands (keys: tuples of flat indices) through thin crossings."""
    for kind, pos in word:
        out: dict = {}
        for key, c in vec.items():
            for (a, b), x in _thin_rule(kind, key[pos], key[pos + 1], ctx):
                new = key[:pos] + (a, b) + key[pos + 2:]
                y = x * c
                if new in out:
                    out[new] = out[new] + y
                else:
                    out[new] = y
        vec = {k: x for k, x in out.items() if not x.is_zero()}
    return vec


def _columns(m: LinMap) -> list[dict]:
    """Columns of a map into V^(x k) keyed by index tuples."""
    labels = m.codomain.labels
    return [{tuple(x for (x,) in labels[r]): c for r, c in col.items()} for col in m.cols]


@lru_cache(maxsize=None)
def thick_crossing(k: int, l: int, kind: str, ctx: LeviDatum) -> LinMap:
    """(k, l) -> (l, k) for k, l >= 0 by explosion; ``kind`` picks the thin crossings.

    [k]!^-1 [l]!^-1 (implode (x) implode) o braid o (explode (x) explode), with
    the braid applied to one exploded basis vector at a time so that the thin
    tensor power is never built as a matrix.
    """
    _check_labels(k, l)
    if k == 0 or l == 0:
        return identity((k, l), ctx)
    ek, el = _columns(explode(k, ctx)), _columns(explode(l, ctx))
    imp_l, imp_k = implode(l, ctx), implode(k, ctx)
    thin_l, thin_k = imp_l.domain.index, imp_k.domain.index
    braid = _group_braid_word(k, l, kind)
    dom, cod = ctx.space((k, l)), ctx.space((l, k))
    nk = ctx.space((k,)).dim
    factor = ctx.inv_qfact(k) * ctx.inv_qfact(l)
    cols = []
    for lab in dom.labels:
        i, j = divmod(dom.index[lab], ctx.space((l,)).dim)
        vec = {}
        for a, x in ek[i].items():
            for b, y in el[j].items():
                vec[a + b] = x * y
        vec = _apply_thin_word(vec, braid, ctx)
        col: dict = {}
        for key, c in vec.items():
            left = imp_l.cols[thin_l[tuple((x,) for x in key[:l])]]
            right = imp_k.cols[thin_k[tuple((x,) for x in key[l:])]]
            for r1, a in left.items():
                for r2, b in right.items():
                    r = r1 * nk + r2
                    t = a * b * c
                    col[r] = col[r] + t if r in col else t
        cols.append({r: x * factor for r, x in col.items() if not x.is_zero()})
    return LinMap(dom, cod, cols)


def over(k: int, l: int, ctx: LeviDatum) -> LinMap:
    return thick_crossing(k, l, "over", ctx)


def under(k: int, l: int, ctx: LeviDatum) -> LinMap:
    return thick_crossing(k, l, "under", ctx)


def levi_crossing(k: int, l: int, ctx: LeviDatum, sign: int = 1) -> LinMap:
    """Levi crossing (k, l) -> (l, k); sign=+1 puts the k strand in front, -1 the l strand."""
    return thick_crossing(k, l, "levi_over" if sign > 0 else "levi_under", ctx)


@lru_cache(maxsize=None)
def crossing(a: int, b: int, front: str, family: str, ctx: LeviDatum) -> LinMap:
    """Crossing (a, b) -> (b, a) for signed labels.

    ``front`` is ``"left"`` when the strand entering at the bottom left passes
    in front, ``"right"`` otherwise; ``family`` is ``"plain"`` or ``"levi"``.
    Dual labels are handled by bending the positive crossing with cups and caps.
    """
    if a == 0 or b == 0:
        return identity((a, b), ctx)
    base = {"plain": ("over", "under"), "levi": ("levi_over", "levi_under")}[family]
    other = "right" if front == "left" else "left"
    if a > 0 and b > 0:
        return thick_crossing(a, b, base[0] if front == "left" else base[1], ctx)
    if a > 0:
        l = -b
        mid = crossing(l, a, other, family, ctx)
        return compose_all(
            tensor(identity((-l, a), ctx), cap_right(l, ctx)),
            tensor(identity((-l,), ctx), mid, identity((-l,), ctx)),
            tensor(cup_right(l, ctx), identity((a, -l), ctx)),
        )
    k = -a
    mid = crossing(b, k, other, family, ctx)
    return compose_all(
        tensor(cap_left(k, ctx), identity((b, -k), ctx)),
        tensor(identity((-k,), ctx), mid, identity((-k,), ctx)),
        tensor(identity((-k, b), ctx), cup_left(k, ctx)),
    )


def move_right(a: int, rest: Sequence[int], front: str, family: str, ctx: LeviDatum) -> LinMap:
    """(a, rest) -> (rest, a) by successive crossings of the a strand."""
    rest = tuple(rest)
    out = identity((a,) + rest, ctx)
    for j, b in enumerate(rest):
        step = tensor(identity(rest[:j], ctx), crossing(a, b, front, family, ctx), identity(rest[j + 1:], ctx))
        out = compose(step, out)
    return out


def move_left(rest: Sequence[int], a: int, front: str, family: str, ctx: LeviDatum) -> LinMap:
    """(rest, a) -> (a, rest) by successive crossings; ``front`` as in :func:`crossing`."""
    rest = tuple(rest)
    out = identity(rest + (a,), ctx)
    for j in range(len(rest) - 1, -1, -1):
        b = rest[j]
        step = tensor(identity(rest[:j], ctx), crossing(b, a, front, family, ctx), identity(rest[j + 1:], ctx))
        out = compose(step, out)
    return out


def generator_matrix(name: str, args: Sequence[int], ctx: LeviDatum) -> LinMap:
    args = tuple(int(x) for x in args)
    _check_labels(*args)
    table = {
        "merge": (merge, 2), "split": (split, 2), "dmerge": (dmerge, 2), "dsplit": (dsplit, 2),
        "capL": (cap_left, 1), "capR": (cap_right, 1), "cupL": (cup_left, 1), "cupR": (cup_right, 1),
        "over": (over, 2), "under": (under, 2),
    }
    if name not in table:
        raise KeyError(f"unknown generator {name!r}")
    fn, arity = table[name]
    if len(args) != arity:
        raise ShapeMismatch(f"{name} takes {arity} labels, got {len(args)}")
    return fn(*args, ctx)


# Levi structure ------------------------------------------------------------------

@lru_cache(maxsize=None)
def u_map(k: int, ctx: LeviDatum, power: int = 1) -> LinMap:
    """Diagonal map on V^(x k) multiplying v_{i1,j1} (x) ... by (u_{i1} ... u_{ik})^power."""
    def fn(lab):
        out = ONE
        for (x,) in lab:
            out = out * ctx.u(ctx.block(x), power)
        return out

    return LinMap.diagonal(ctx.space((1,) * k), fn)


def longest_word(k: int) -> list[int]:
    """Reduced word s_1 (s_2 s_1) (s_3 s_2 s_1) ... of the longest permutation, 0-based positions."""
    word = []
    for top in range(1, k):
        word.extend(range(top - 1, -1, -1))
    return word


@lru_cache(maxsize=None)
def full_twist(k: int, ctx: LeviDatum, inverse: bool = False, word: tuple | None = None) -> LinMap:
    """Square of the positive Levi lift of the longest word (or the inverse of that)."""
    w = list(word) if word is not None else longest_word(k)
    # a product s_a s_b ... acts with the rightmost letter first
    if inverse:
        letters = [("levi_under", p) for p in w]
    else:
        letters = [("levi_over", p) for p in reversed(w)]
    lift = thin_braid(letters, k, ctx)
    return compose(lift, lift)


@lru_cache(maxsize=None)
def block_projector(i: int, ctx: LeviDatum) -> LinMap:
    """Lagrange interpolation in the thin coil picking out block i of V."""
    U = u_map(1, ctx)
    ident = identity((1,), ctx)
    out = ident
    for j in range(1, ctx.d + 1):
        if j == i:
            continue
        factor = scale(U - scale(ident, ctx.u(j)), inverse_u_difference(i, j))
        out = compose(factor, out)
    return out


@lru_cache(maxsize=None)
def twist_u(k: int, ctx: LeviDatum, inverse: bool = False) -> LinMap:
    """[k]!^-1 implode o ft o u o explode on the k-th exterior power (or its inverse)."""
    if inverse:
        core = compose(u_map(k, ctx, -1), full_twist(k, ctx, inverse=True))
    else:
        core = compose(full_twist(k, ctx), u_map(k, ctx))
    return scale(compose_all(implode(k, ctx), core, explode(k, ctx)), ctx.inv_qfact(k))


# Coils -------------------------------------------------------------------------------

def rotate(word: Sequence[int]) -> tuple:
    word = tuple(word)
    return word[1:] + word[:1]


@lru_cache(maxsize=None)
def coil_matrix(word: tuple, direction: str, ctx: LeviDatum, method: str = "closed") -> LinMap:
    """Image of the coil on ``word`` = (k1, K').

    ``direction="winding"`` maps (k1, K') -> (K', k1); ``"inverse"`` maps
    (K', k1) -> (k1, K').  For thick positive k1, ``method="closed"`` uses the
    full-twist formula and ``method="inductive"`` explodes into thin coils.
    """
    word = tuple(k for k in word if k)
    if not word:
        raise ValueError("coil on the empty word")
    k1, rest = word[0], word[1:]
    if direction not in ("winding", "inverse"):
        raise ValueError(f"unknown coil direction {direction!r}")
    if k1 == 1:
        if direction == "winding":
            return compose(move_right(1, rest, "left", "levi", ctx), tensor(u_map(1, ctx), identity(rest, ctx)))
        return compose(tensor(u_map(1, ctx, -1), identity(rest, ctx)), move_left(rest, 1, "right", "levi", ctx))
    if k1 == -1:
        if direction == "winding":
            big = coil_matrix((1, -1) + rest + (-1,), "inverse", ctx)
            return compose_all(
                tensor(cap_right(1, ctx), identity(rest + (-1,), ctx)),
                big,
                tensor(identity((-1,) + rest, ctx), cup_right(1, ctx)),
            )
        big = coil_matrix((1, -1) + rest + (-1,), "winding", ctx)
        return compose_all(
            tensor(identity((-1,) + rest, ctx), cap_left(1, ctx)),
            big,
            tensor(cup_left(1, ctx), identity(rest + (-1,), ctx)),
        )
    if k1 > 1 and method == "closed":
        if direction == "winding":
            return compose(move_right(k1, rest, "left", "levi", ctx), tensor(twist_u(k1, ctx), identity(rest, ctx)))
        return compose(tensor(twist_u(k1, ctx, inverse=True), identity(rest, ctx)),
                       move_left(rest, k1, "right", "levi", ctx))
    return _coil_inductive(k1, rest, direction, ctx)


def _coil_inductive(k1: int, rest: tuple, direction: str, ctx: LeviDatum) -> LinMap:
    """Explode k1 into thin strands, coil each, implode on the other side."""
    k = abs(k1)
    t = 1 if k1 > 0 else -1
    thin = (t,) * k
    if direction == "winding":
        out = tensor(explode_signed(k1, ctx), identity(rest, ctx))
        current = thin + rest
        for _ in range(k):
            out = compose(coil_matrix(current, "winding", ctx), out)
            current = rotate(current)
        out = compose(tensor(identity(rest, ctx), implode_signed(k1, ctx)), out)
    else:
        out = tensor(identity(rest, ctx), explode_signed(k1, ctx))
        current = rest + thin
        for _ in range(k):
            target = current[-1:] + current[:-1]
            out = compose(coil_matrix(target, "inverse", ctx), out)
            current = target
        out = compose(tensor(implode_signed(k1, ctx), identity(rest, ctx)), out)
    return scale(out, ctx.inv_qfact(k))


# Essential circles -------------------------------------------------------------------

def essential_circle_value(k: int, side: str, ctx: LeviDatum) -> FieldElem:
    """Closure of the coil on (k, -k) by a cup and a cap."""
    if k == 0:
        return ONE
    if side == "left":
        m = compose_all(cap_left(k, ctx), coil_matrix((k, -k), "winding", ctx), cup_left(k, ctx))
    elif side == "right":
        m = compose_all(cap_right(k, ctx), coil_matrix((k, -k), "inverse", ctx), cup_right(k, ctx))
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return m.scalar_value()


def predicted_circle_value(k: int, side: str, ctx: LeviDatum) -> FieldElem:
    args = []
    for i, l in enumerate(ctx.composition, start=1):
        for j in range(1, l + 1):
            if side == "left":
                args.append(FieldElem.v(-(2 * j - 1)) * ctx.u(i))
            elif side == "right":
                args.append(FieldElem.v(2 * j - 1) * ctx.u(i, -1))
            else:
                raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return ctx.adapt(elementary_symmetric(k, args))


# Quantum group action -------------------------------------------------------------------

@dataclass(frozen=True)
class QGGenerator:
    """E_i, F_i (1 <= i < n) or L_i^(+-1) (1 <= i <= n)."""

    kind: str
    index: int
    power: int = 1

    def __str__(self) -> str:
        if self.kind == "L":
            return f"L{self.index}" + ("" if self.power == 1 else "^-1")
        return f"{self.kind}{self.index}"

    def is_levi(self, ctx: LeviDatum) -> bool:
        if self.kind == "L":
            return True
        return ctx.block(self.index) == ctx.block(self.index + 1)


def qg_generators(ctx: LeviDatum, algebra: str = "full") -> list[QGGenerator]:
    gens = [QGGenerator("E", i) for i in range(1, ctx.n)] + [QGGenerator("F", i) for i in range(1, ctx.n)]
    gens += [QGGenerator("L", i, p) for i in range(1, ctx.n + 1) for p in (1, -1)]
    if algebra == "levi":
        gens = [g for g in gens if g.is_levi(ctx)]
    elif algebra != "full":
        raise ValueError(f"algebra must be 'full' or 'levi', got {algebra!r}")
    return gens


def _on_v(kind: str, i: int, power: int, ctx: LeviDatum) -> LinMap:
    """Action on V of E_i, F_i, L_i^power or K_i^power = (L_i L_{i+1}^-1)^power."""
    sp = ctx.space((1,))

    def fn(lab):
        (j,), = lab
        if kind == "E":
            return [(((j - 1,),), ONE)] if j == i + 1 else []
        if kind == "F":
            return [(((j + 1,),), ONE)] if j == i else []
        if kind == "L":
            return [(lab, ctx.qpow(power if j == i else 0))]
        if kind == "K":
            e = (1 if j == i else 0) - (1 if j == i + 1 else 0)
            return [(lab, ctx.qpow(power * e))]
        raise ValueError(kind)

    return LinMap.from_function(sp, sp, fn)


def _grouplike_power(kind: str, i: int, power: int, m: int, ctx: LeviDatum) -> LinMap:
    if m == 0:
        return identity((), ctx)
    return kron_all(*[_on_v(kind, i, power, ctx)] * m)


def _on_thin(kind: str, i: int, power: int, m: int, ctx: LeviDatum) -> LinMap:
    """Action on V^(x m) via the iterated coproduct."""
    sp = ctx.space((1,) * m)
    if kind in ("L", "K"):
        return _grouplike_power(kind, i, power, m, ctx)
    total = LinMap.zero(sp, sp)
    for j in range(m):
        if kind == "E":
            parts = [_grouplike_power("K", i, 0, j, ctx), _on_v("E", i, 1, ctx), _grouplike_power("K", i, 1, m - j - 1, ctx)]
        else:
            parts = [_grouplike_power("K", i, -1, j, ctx), _on_v("F", i, 1, ctx), _grouplike_power("K", i, 0, m - j - 1, ctx)]
        total = total + kron_all(*parts)
    return total


class NotInvariant(AssertionError):
    pass


@lru_cache(maxsize=None)
def _on_factor(a: int, kind: str, i: int, power: int, ctx: LeviDatum) -> LinMap:
    """Action on a single exterior power (a > 0) or its dual (a < 0)."""
    if a < 0:
        # dual action through the antipode: S(E) = -E K^-1, S(F) = -K F, S(L) = L^-1
        k = -a
        if kind == "E":
            m = -compose(_on_factor(k, "E", i, 1, ctx), _on_factor(k, "K", i, -1, ctx))
        elif kind == "F":
            m = -compose(_on_factor(k, "K", i, 1, ctx), _on_factor(k, "F", i, 1, ctx))
        else:
            m = _on_factor(k, kind, i, -power, ctx)
        t = m.transpose()
        # transpose of a map on the k-th power is a map on its dual basis
        dual = ctx.space((a,))
        return LinMap(dual, dual, t.cols)
    thin = _on_thin(kind, i, power, a, ctx)
    ex, im = explode(a, ctx), implode(a, ctx)
    act = scale(compose_all(im, thin, ex), ctx.inv_qfact(a))
    if not compose(ex, act) == compose(thin, ex):
        raise NotInvariant(f"explosion image of the {a}-th power is not stable under {kind}{i}")
    return act


def qg_action(gen: QGGenerator, word: Sequence[int], ctx: LeviDatum) -> LinMap:
    """Action of a generator on the tensor product indexed by ``word``."""
    word = tuple(k for k in word if k)
    sp = ctx.space(word)
    m = len(word)
    i = gen.index
    if m == 0:
        if gen.kind in ("E", "F"):
            return LinMap.zero(sp, sp)
        return identity((), ctx)
    if gen.kind == "L":
        return kron_all(*[_on_factor(a, "L", i, gen.power, ctx) for a in word])
    total = LinMap.zero(sp, sp)
    for j in range(m):
        if gen.kind == "E":
            parts = [identity(word[:j], ctx), _on_factor(word[j], "E", i, 1, ctx)]
            parts += [_on_factor(a, "K", i, 1, ctx) for a in word[j + 1:]]
        else:
            parts = [_on_factor(a, "K", i, -1, ctx) for a in word[:j]]
            parts += [_on_factor(word[j], "F", i, 1, ctx), identity(word[j + 1:], ctx)]
        total = total + kron_all(*[p for p in parts if p.domain.word or len(parts) == 1] or [identity((), ctx)])
    return total


def check_equivariance(f: LinMap, algebra: str, ctx: LeviDatum) -> list[str]:
    """Names of generators that fail to commute with f (empty list = equivariant)."""
    failures = []
    for g in qg_generators(ctx, algebra):
        lhs = compose(qg_action(g, f.codomain.word, ctx), f)
        rhs = compose(f, qg_action(g, f.domain.word, ctx))
        if not lhs == rhs:
            failures.append(str(g))
    return failures
