"""Sparse exact matrices between labeled bases of tensor products of exterior powers."""

from __future__ import annotations

import json
import random
from functools import lru_cache
from itertools import product
from typing import Callable, Iterable, Sequence

import numpy as np

from .combinatorics import subsets
from .scalar_field import ONE, ZERO, DenominatorVanishes, FieldElem, as_field, format_scalar, parse_scalar

PRIME = 2**31 - 1


class ShapeMismatch(ValueError):
    pass


class BasisSpace:
    """Basis of the tensor product of exterior powers indexed by an object word.

    A positive entry k stands for the k-th exterior power of V, a negative
    entry -k for its dual.  Basis labels are tuples of subsets, ordered
    lexicographically; dual factors use the same subsets (read as v_S^*).
    """

    __slots__ = ("word", "n", "labels", "index", "factor_dims")

    def __new__(cls, word: Sequence[int], n: int):
        return _space(tuple(int(k) for k in word if k != 0), n)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def __eq__(self, other) -> bool:
        return self is other or (isinstance(other, BasisSpace) and self.word == other.word and self.n == other.n)

    def __hash__(self) -> int:
        return hash((self.word, self.n))

    def __repr__(self) -> str:
        return f"BasisSpace({list(self.word)}, n={self.n})"

    def concat(self, other: "BasisSpace") -> "BasisSpace":
        return BasisSpace(self.word + other.word, self.n)


@lru_cache(maxsize=None)
def _space(word: tuple, n: int) -> BasisSpace:
    obj = object.__new__(BasisSpace)
    obj.word = word
    obj.n = n
    factors = [subsets(n, abs(k)) for k in word]
    obj.factor_dims = tuple(len(f) for f in factors)
    obj.labels = list(product(*factors))
    obj.index = {lab: i for i, lab in enumerate(obj.labels)}
    return obj


class LinMap:
    """Sparse matrix stored by columns: ``cols[c]`` maps row index to a nonzero scalar."""

    __slots__ = ("domain", "codomain", "cols")

    def __init__(self, domain: BasisSpace, codomain: BasisSpace, cols: list[dict] | None = None):
        self.domain = domain
        self.codomain = codomain
        self.cols = cols if cols is not None else [dict() for _ in range(domain.dim)]

    # constructors
    @classmethod
    def identity(cls, space: BasisSpace) -> "LinMap":
        return cls(space, space, [{i: ONE} for i in range(space.dim)])

    @classmethod
    def zero(cls, domain: BasisSpace, codomain: BasisSpace) -> "LinMap":
        return cls(domain, codomain)

    @classmethod
    def from_function(cls, domain: BasisSpace, codomain: BasisSpace,
                      fn: Callable[[tuple], Iterable[tuple[tuple, FieldElem]]]) -> "LinMap":
        """Build from ``fn(domain_label) -> [(codomain_label, coefficient), ...]``."""
        cols = []
        for lab in domain.labels:
            col: dict = {}
            for out_lab, coeff in fn(lab):
                r = codomain.index[out_lab]
                s = col[r] + coeff if r in col else as_field(coeff)
                if s.is_zero():
                    col.pop(r, None)
                else:
                    col[r] = s
            cols.append(col)
        return cls(domain, codomain, cols)

    @classmethod
    def diagonal(cls, space: BasisSpace, fn: Callable[[tuple], FieldElem]) -> "LinMap":
        cols = []
        for lab in space.labels:
            x = as_field(fn(lab))
            cols.append({} if x.is_zero() else {len(cols): x})
        return cls(space, space, cols)

    # queries
    @property
    def shape(self) -> tuple[int, int]:
        return self.codomain.dim, self.domain.dim

    def entry(self, r: int, c: int) -> FieldElem:
        return self.cols[c].get(r, ZERO)

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols)

    def is_zero(self) -> bool:
        return all(not c for c in self.cols)

    def entries(self) -> Iterable[tuple[int, int, FieldElem]]:
        for c, col in enumerate(self.cols):
            for r in sorted(col):
                yield r, c, col[r]

    def scalar_value(self) -> FieldElem:
        """The single entry of a map between one-dimensional spaces."""
        if self.shape != (1, 1):
            raise ShapeMismatch(f"not a scalar map: shape {self.shape}")
        return self.entry(0, 0)

    def apply(self, vec: dict) -> dict:
        out: dict = {}
        for c, x in vec.items():
            for r, a in self.cols[c].items():
                out[r] = out[r] + a * x if r in out else a * x
        return {r: x for r, x in out.items() if not x.is_zero()}

    # algebra
    def __matmul__(self, other: "LinMap") -> "LinMap":
        return compose(self, other)

    def __add__(self, other: "LinMap") -> "LinMap":
        return add(self, other)

    def __sub__(self, other: "LinMap") -> "LinMap":
        return add(self, scale(other, -ONE))

    def __neg__(self) -> "LinMap":
        return scale(self, -ONE)

    def __rmul__(self, c) -> "LinMap":
        return scale(self, as_field(c))

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinMap):
            return NotImplemented
        return equals(self, other)

    __hash__ = None

    def map_entries(self, fn: Callable[[FieldElem], FieldElem]) -> "LinMap":
        cols = []
        for col in self.cols:
            new = {}
            for r, x in col.items():
                y = fn(x)
                if not y.is_zero():
                    new[r] = y
            cols.append(new)
        return LinMap(self.domain, self.codomain, cols)

    def transpose(self) -> "LinMap":
        cols: list[dict] = [dict() for _ in range(self.codomain.dim)]
        for c, col in enumerate(self.cols):
            for r, x in col.items():
                cols[r][c] = x
        return LinMap(self.codomain, self.domain, cols)

    def to_numpy_mod(self, v: int, u: Sequence[int], p: int = PRIME) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.int64)
        for c, col in enumerate(self.cols):
            for r, x in col.items():
                out[r, c] = x.specialize(v, u, p)
        return out

    def to_json(self) -> dict:
        return {
            "domain": list(self.domain.word),
            "codomain": list(self.codomain.word),
            "entries": [[r, c, format_scalar(x)] for r, c, x in self.entries()],
        }

    @classmethod
    def from_json(cls, data: dict | str, n: int) -> "LinMap":
        if isinstance(data, str):
            data = json.loads(data)
        dom = BasisSpace(data["domain"], n)
        cod = BasisSpace(data["codomain"], n)
        out = cls.zero(dom, cod)
        for r, c, s in data["entries"]:
            x = parse_scalar(s)
            if not x.is_zero():
                out.cols[c][r] = x
        return out

    def __repr__(self) -> str:
        return f"LinMap({list(self.domain.word)} -> {list(self.codomain.word)}, nnz={self.nnz()})"


def compose(f: LinMap, g: LinMap) -> LinMap:
    """f after g."""
    if f.domain != g.codomain:
        raise ShapeMismatch(f"cannot compose {f!r} after {g!r}")
    cols = []
    fcols = f.cols
    for gcol in g.cols:
        acc: dict = {}
        for k, a in gcol.items():
            for r, b in fcols[k].items():
                t = b * a
                if r in acc:
                    acc[r] = acc[r] + t
                else:
                    acc[r] = t
        cols.append({r: x for r, x in acc.items() if not x.is_zero()})
    return LinMap(g.domain, f.codomain, cols)


def compose_all(*maps: LinMap) -> LinMap:
    """compose_all(a, b, c) = a after b after c."""
    out = maps[-1]
    for m in reversed(maps[:-1]):
        out = compose(m, out)
    return out


def kron(f: LinMap, g: LinMap) -> LinMap:
    dom = f.domain.concat(g.domain)
    cod = f.codomain.concat(g.codomain)
    gd = g.codomain.dim
    cols = []
    for fcol in f.cols:
        for gcol in g.cols:
            col = {}
            for r1, a in fcol.items():
                base = r1 * gd
                for r2, b in gcol.items():
                    col[base + r2] = a * b
            cols.append(col)
    return LinMap(dom, cod, cols)


def kron_all(*maps: LinMap) -> LinMap:
    out = maps[0]
    for m in maps[1:]:
        out = kron(out, m)
    return out


def add(f: LinMap, g: LinMap) -> LinMap:
    if f.domain != g.domain or f.codomain != g.codomain:
        raise ShapeMismatch(f"cannot add {f!r} and {g!r}")
    cols = []
    for a, b in zip(f.cols, g.cols):
        col = dict(a)
        for r, x in b.items():
            if r in col:
                s = col[r] + x
                if s.is_zero():
                    del col[r]
                else:
                    col[r] = s
            else:
                col[r] = x
        cols.append(col)
    return LinMap(f.domain, f.codomain, cols)


def scale(f: LinMap, c) -> LinMap:
    c = as_field(c)
    if c.is_zero():
        return LinMap.zero(f.domain, f.codomain)
    return f.map_entries(lambda x: x * c)


def linear_combination(terms: Sequence[tuple], domain: BasisSpace | None = None,
                       codomain: BasisSpace | None = None) -> LinMap:
    """Sum of ``coeff * map`` over ``(coeff, map)`` pairs."""
    out = None
    for c, m in terms:
        t = scale(m, c)
        out = t if out is None else add(out, t)
    if out is None:
        if domain is None or codomain is None:
            raise ValueError("empty linear combination needs explicit spaces")
        return LinMap.zero(domain, codomain)
    return out


def equals(f: LinMap, g: LinMap) -> bool:
    if f.domain != g.domain or f.codomain != g.codomain:
        return False
    for a, b in zip(f.cols, g.cols):
        for r in set(a) | set(b):
            x, y = a.get(r), b.get(r)
            if x is None or y is None:
                return False
            if not x == y:
                return False
    return True


def annihilates(f: LinMap, roots: Sequence) -> bool:
    """True iff the product of (f - root) over ``roots`` is the zero map."""
    if f.domain != f.codomain:
        raise ShapeMismatch("annihilates needs a square map")
    ident = LinMap.identity(f.domain)
    acc = ident
    for root in roots:
        acc = compose(f - scale(ident, root), acc)
        if acc.is_zero():
            return True
    return acc.is_zero()


# Specialization ------------------------------------------------------------

def random_point(rng: random.Random, nu: int, p: int = PRIME, order_bound: int = 64) -> tuple[int, list[int]]:
    """A point (v, u_1..u_nu) of F_p with v of large multiplicative order and distinct nonzero u's."""
    while True:
        v = rng.randrange(2, p - 1)
        if all(pow(v, k, p) != 1 for k in range(1, order_bound + 1)):
            break
    us: list[int] = []
    while len(us) < nu:
        x = rng.randrange(1, p)
        if x not in us:
            us.append(x)
    return v, us


def rank_mod_p(mat: np.ndarray, p: int = PRIME) -> int:
    a = np.array(mat, dtype=np.int64) % p
    rows, cols = a.shape
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        nz = np.nonzero(a[rank:, c])[0]
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            a[[rank, piv]] = a[[piv, rank]]
        inv = pow(int(a[rank, c]), -1, p)
        a[rank] = a[rank] * inv % p
        others = np.nonzero(a[:, c])[0]
        others = others[others != rank]
        if others.size:
            factors = a[others, c].reshape(-1, 1)
            a[others] = (a[others] - factors * a[rank] % p) % p
        rank += 1
    return rank


def rank_specialized(maps: LinMap | Sequence[LinMap], points: int = 3, rng: random.Random | None = None,
                     nu: int = 0, p: int = PRIME, retries: int = 10) -> int:
    """Generic rank of a map, or of the span of a family of maps, via random F_p points."""
    if isinstance(maps, LinMap):
        family, single = [maps], True
    else:
        family, single = list(maps), False
    if not family:
        return 0
    rng = rng or random.Random(0)
    best = 0
    for _ in range(points):
        for _attempt in range(retries):
            v, u = random_point(rng, nu, p)
            try:
                mats = [m.to_numpy_mod(v, u, p) for m in family]
            except DenominatorVanishes:
                continue
            break
        else:
            raise DenominatorVanishes("no admissible specialization point found")
        if single:
            r = rank_mod_p(mats[0], p)
        else:
            r = rank_mod_p(np.stack([m.reshape(-1) for m in mats]), p)
        best = max(best, r)
    return best
