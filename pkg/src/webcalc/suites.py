"""Named verification suites.

Each suite expands a set of bounds into instances.  An instance is a key, a
parameter dict and a zero-argument check returning ``(ok, detail)``; most
checks compare the evaluations of two web terms, with the counterexample
matrices placed in ``detail`` on failure.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Callable, Iterable, Iterator

from . import ariki_koike as ak
from . import combinatorics as cb
from . import rep_engine as re_
from .linear_algebra import LinMap, compose, compose_all, scale
from .rep_engine import LeviDatum
from .scalar_field import ONE, FieldElem, format_scalar, quantum_binomial
from .web_ir import (CoilSlice, Id, SkeinTensor, evaluate, flip_leftright, flip_updown, parse, to_text,
                     typecheck)

SUITES = ("planar_relations", "derived_planar", "annular_relations", "circle_evaluation", "equivariance",
          "proof_lemmas", "monoidality", "ariki_koike", "q1_basis")


class UnknownSuite(KeyError):
    def __str__(self) -> str:
        return f"unknown suite {self.args[0]!r}; choose from {', '.join(SUITES)}"


@dataclass(frozen=True)
class Bounds:
    n_max: int = 3
    label_max: int = 3
    width_max: int = 3
    m_max: int = 3

    @classmethod
    def deep(cls) -> "Bounds":
        return cls(n_max=4, label_max=4, width_max=3, m_max=4)


@dataclass(frozen=True)
class Instance:
    key: str
    params: dict
    check: Callable[[], tuple[bool, dict]] = field(compare=False)


@dataclass(frozen=True)
class SuiteSpec:
    name: str
    bounds: Bounds
    instances: tuple


# Helpers ------------------------------------------------------------------------------

def _ctx_params(ctx: LeviDatum) -> dict:
    return {"n": ctx.n, "levi": list(ctx.composition)}


def _obj(word: Iterable[int]) -> str:
    return "[" + ",".join(str(x) for x in word) + "]"


def _tens(*parts: str) -> str:
    """Planar tensor of slices, dropping identities on the empty word."""
    kept = [p for p in parts if p != "id([])"]
    return " * ".join(kept) if kept else "id([])"


def _id(word: Iterable[int]) -> str:
    return f"id({_obj(word)})"


def _sc(x: FieldElem) -> str:
    return f'scalar "{format_scalar(x)}"'


def _words(width: int, lab: int) -> Iterator[tuple]:
    labels = [x for k in range(1, lab + 1) for x in (k, -k)]
    yield from product(labels, repeat=width)


def _compare_maps(a: LinMap, b: LinMap, extra: dict | None = None) -> tuple[bool, dict]:
    if a == b:
        return True, {}
    detail = dict(extra or {})
    detail["lhs_matrix"] = a.to_json()
    detail["rhs_matrix"] = b.to_json()
    return False, detail


def _term_check(lhs, rhs, ctx: LeviDatum, mode: str = "exact") -> Callable[[], tuple[bool, dict]]:
    def run():
        tl = parse(lhs) if isinstance(lhs, str) else lhs
        tr = parse(rhs) if isinstance(rhs, str) else rhs
        ty_l, ty_r = typecheck(tl), typecheck(tr)
        if ty_l != ty_r:
            return False, {"reason": "type mismatch", "lhs_type": [list(x) for x in ty_l],
                           "rhs_type": [list(x) for x in ty_r]}
        return _compare_maps(evaluate(tl, ctx, mode), evaluate(tr, ctx, mode),
                             {"lhs": to_text(tl), "rhs": to_text(tr)})
    return run


_FLIPS = {
    "": lambda t: t,
    "|ud": flip_updown,
    "|lr": flip_leftright,
    "|ud_lr": lambda t: flip_leftright(flip_updown(t)),
}


def _relation(out: list, key: str, params: dict, lhs: str, rhs: str, ctx: LeviDatum,
              flips: Iterable[str] = ("",)):
    """Add the relation lhs = rhs (and the requested flips of it)."""
    tl, tr = parse(lhs), parse(rhs)
    for tag in flips:
        f = _FLIPS[tag]
        p = dict(params, **_ctx_params(ctx))
        if tag:
            p["flip"] = tag[1:]
        out.append(Instance(key + tag, p, _term_check(f(tl), f(tr), ctx)))


ALL_FLIPS = ("", "|ud", "|lr", "|ud_lr")


def _map_instance(out: list, key: str, params: dict, ctx: LeviDatum, fn: Callable[[], tuple[bool, dict]]):
    out.append(Instance(key, dict(params, **_ctx_params(ctx)), fn))


def _maps_equal(f: Callable[[], LinMap], g: Callable[[], LinMap]) -> Callable[[], tuple[bool, dict]]:
    return lambda: _compare_maps(f(), g())


# planar_relations ---------------------------------------------------------------------

def dumbbell_terms(k: int, l: int, r: int, kind: str) -> str:
    """Crossing expansion of split(r, s) o merge(k, l) as a sum of ladder terms."""
    s = k + l - r
    sgn = 1 if kind == "over" else -1
    terms = []
    for a in range(0, k + 1):
        b = a - k + r
        if b < 0 or b > l:
            continue
        coeff = FieldElem.from_int(-1) ** (r * s + (k - a) * a + b * (l - b))
        coeff = coeff * FieldElem.v(sgn * (k - a) * (l - b)) * FieldElem.from_int(-1) ** ((k - a) * (l - b))
        body = " ; ".join([
            f"split({k - a},{a}) * split({b},{l - b})",
            f"id([{k - a}]) * {kind}({a},{b}) * id([{l - b}])",
            f"merge({k - a},{b}) * merge({a},{l - b})",
        ])
        terms.append(f"{_sc(coeff)} * {body}")
    return " + ".join(terms)


def _planar_relations(b: Bounds, seed: int) -> list[Instance]:
    out: list[Instance] = []
    for n in range(1, b.n_max + 1):
        ctx = LeviDatum(n, (n,))
        L = min(b.label_max, n)

        def exterior(n=n, ctx=ctx):
            dims = {k: ctx.space((k,)).dim for k in range(n + 2)}
            ok = dims[n + 1] == 0 and dims[n] == 1
            return ok, {} if ok else {"dims": dims}
        _map_instance(out, f"n{n}/exterior_top", {}, ctx, exterior)

        for k, l, m in product(range(1, L + 1), repeat=3):
            if k + l + m > L:
                continue
            p = {"k": k, "l": l, "m": m}
            _relation(out, f"n{n}/assoc/{k},{l},{m}", p,
                      f"merge({k},{l}) * id([{m}]) ; merge({k + l},{m})",
                      f"id([{k}]) * merge({l},{m}) ; merge({k},{l + m})", ctx, ALL_FLIPS)
            _relation(out, f"n{n}/assoc_dual/{k},{l},{m}", p,
                      f"dmerge({k},{l}) * id([{-m}]) ; dmerge({k + l},{m})",
                      f"id([{-k}]) * dmerge({l},{m}) ; dmerge({k},{l + m})", ctx, ALL_FLIPS)

        for k, l in product(range(1, L + 1), repeat=2):
            if k + l > L:
                continue
            p = {"k": k, "l": l}
            binom = quantum_binomial(k + l, k)
            _relation(out, f"n{n}/digon/{k},{l}", p, f"split({k},{l}) ; merge({k},{l})",
                      f"{_sc(binom)} * id([{k + l}])", ctx, ("", "|lr"))
            _relation(out, f"n{n}/digon_dual/{k},{l}", p, f"dsplit({k},{l}) ; dmerge({k},{l})",
                      f"{_sc(binom)} * id([{-(k + l)}])", ctx, ("", "|lr"))

        for k, l in product(range(1, min(L, 2) + 1), repeat=2):
            for r in range(0, k + l + 1):
                s = k + l - r
                if r > n or s > n:
                    continue
                for kind in ("over", "under"):
                    _relation(out, f"n{n}/dumbbell_{kind}/{k},{l}->{r},{s}", {"k": k, "l": l, "r": r, "s": s},
                              f"merge({k},{l}) ; split({r},{s})", dumbbell_terms(k, l, r, kind), ctx, ALL_FLIPS)

        for k in range(1, L + 1):
            binom = quantum_binomial(n, k)
            _relation(out, f"n{n}/loop_ccw/{k}", {"k": k}, f"cupL({k}) ; capR({k})", f"{_sc(binom)} * id([])", ctx)
            _relation(out, f"n{n}/loop_cw/{k}", {"k": k}, f"cupR({k}) ; capL({k})", f"{_sc(binom)} * id([])", ctx)
            zig = {
                "up_a": (f"cupL({k}) * id([{k}]) ; id([{k}]) * capL({k})", f"id([{k}])"),
                "up_b": (f"id([{k}]) * cupR({k}) ; capR({k}) * id([{k}])", f"id([{k}])"),
                "down_a": (f"id([{-k}]) * cupL({k}) ; capL({k}) * id([{-k}])", f"id([{-k}])"),
                "down_b": (f"cupR({k}) * id([{-k}]) ; id([{-k}]) * capR({k})", f"id([{-k}])"),
            }
            for name, (lhs, rhs) in zig.items():
                _relation(out, f"n{n}/zigzag_{name}/{k}", {"k": k}, lhs, rhs, ctx)

        qdiff = FieldElem.v(1) - FieldElem.v(-1)
        _relation(out, f"n{n}/skein_thin", {}, 'over(1,1) + scalar "-1" * under(1,1)',
                  f"{_sc(qdiff)} * id([1,1])", ctx, ALL_FLIPS)
    return out


# derived_planar -----------------------------------------------------------------------

def ladder_terms(k: int, l: int, kind: str) -> str:
    """Expansion of a (k, l) crossing into merges and splits."""
    sgn = 1 if kind == "over" else -1
    terms = []
    for bb in range(0, k + 1):
        a = bb - k + l
        if a < 0:
            continue
        coeff = FieldElem.from_int(-1) ** (k * l + (k - bb)) * FieldElem.v(sgn * (k - bb))
        body = " ; ".join([
            f"split({k - bb},{bb}) * id([{l}])",
            f"id([{k - bb}]) * merge({bb},{l})",
            f"id([{k - bb}]) * split({a},{k})",
            f"merge({k - bb},{a}) * id([{k}])",
        ])
        terms.append(f"{_sc(coeff)} * {body}")
    return " + ".join(terms)


def _derived_planar(b: Bounds, seed: int) -> list[Instance]:
    out: list[Instance] = []
    for n in range(1, b.n_max + 1):
        ctx = LeviDatum(n, (n,))
        L = min(b.label_max, n)
        for k in range(1, L + 1):
            e = k * (-k + n + 1)
            for kind, sgn in (("over", 1), ("under", -1)):
                scal = _sc(FieldElem.v(sgn * e))
                right = f"id([{k}]) * cupL({k}) ; {kind}({k},{k}) * id([{-k}]) ; id([{k}]) * capR({k})"
                left = f"cupR({k}) * id([{k}]) ; id([{-k}]) * {kind}({k},{k}) ; capL({k}) * id([{k}])"
                for side, lhs in (("right", right), ("left", left)):
                    _relation(out, f"n{n}/reidemeister1_{kind}_{side}/{k}", {"k": k, "expected": format_scalar(
                        FieldElem.v(sgn * e))}, lhs, f"{scal} * id([{k}])", ctx, ("", "|ud"))

        for k, l in product(range(1, L + 1), repeat=2):
            p = {"k": k, "l": l}
            _relation(out, f"n{n}/reidemeister2_a/{k},{l}", p, f"over({k},{l}) ; under({l},{k})", f"id([{k},{l}])", ctx)
            _relation(out, f"n{n}/reidemeister2_b/{k},{l}", p, f"under({k},{l}) ; over({l},{k})", f"id([{k},{l}])", ctx)

        small = min(L, 2)
        for a, c in product([x for x in range(-small, small + 1) if x], repeat=2):
            if a > 0 and c > 0:
                continue

            def rii(a=a, c=c, ctx=ctx):
                lhs = compose(re_.crossing(c, a, "right", "plain", ctx), re_.crossing(a, c, "left", "plain", ctx))
                return _compare_maps(lhs, re_.identity((a, c), ctx))
            _map_instance(out, f"n{n}/reidemeister2_signed/{a},{c}", {"a": a, "c": c}, ctx, rii)

        for k, l, m in product(range(1, small + 1), repeat=3):
            for kind in ("over", "under"):
                lhs = f"{kind}({k},{l}) * id([{m}]) ; id([{l}]) * {kind}({k},{m}) ; {kind}({l},{m}) * id([{k}])"
                rhs = f"id([{k}]) * {kind}({l},{m}) ; {kind}({k},{m}) * id([{l}]) ; id([{m}]) * {kind}({k},{l})"
                _relation(out, f"n{n}/reidemeister3_{kind}/{k},{l},{m}", {"k": k, "l": l, "m": m}, lhs, rhs, ctx)

        for k, l in product(range(1, small + 1), repeat=2):
            for kind in ("over", "under"):
                _relation(out, f"n{n}/crossing_ladder_{kind}/{k},{l}", {"k": k, "l": l},
                          f"{kind}({k},{l})", ladder_terms(k, l, kind), ctx)

        for k, l, m in product(range(1, small + 1), repeat=3):
            if k + l > n:
                continue
            for kind in ("over", "under"):
                _relation(out, f"n{n}/naturality_{kind}/{k},{l},{m}", {"k": k, "l": l, "m": m},
                          f"merge({k},{l}) * id([{m}]) ; {kind}({k + l},{m})",
                          f"id([{k}]) * {kind}({l},{m}) ; {kind}({k},{m}) * id([{l}]) ; id([{m}]) * merge({k},{l})",
                          ctx, ALL_FLIPS)

        for k, l in product(range(1, L + 1), repeat=2):
            if k + l > n:
                continue
            inv = _sc(quantum_binomial(k + l, k).inverse())
            e = f"({inv} * merge({k},{l}) ; split({k},{l}))"
            _relation(out, f"n{n}/explosion_idempotent/{k},{l}", {"k": k, "l": l}, f"{e} ; {e}", e, ctx)
            _relation(out, f"n{n}/dmerge_right_mate/{k},{l}", {"k": k, "l": l},
                      " ; ".join([f"cupR({k + l}) * id([{-k},{-l}])",
                                  f"id([{-(k + l)}]) * split({l},{k}) * id([{-k},{-l}])",
                                  f"id([{-(k + l)},{l}]) * capR({k}) * id([{-l}])",
                                  f"id([{-(k + l)}]) * capR({l})"]),
                      f"dmerge({k},{l})", ctx)
            _relation(out, f"n{n}/dsplit_right_mate/{k},{l}", {"k": k, "l": l},
                      " ; ".join([f"cupR({k}) * id([{-(k + l)}])",
                                  f"id([{-k}]) * cupR({l}) * id([{k},{-(k + l)}])",
                                  f"id([{-k},{-l}]) * merge({l},{k}) * id([{-(k + l)}])",
                                  f"id([{-k},{-l}]) * capR({k + l})"]),
                      f"dsplit({k},{l})", ctx)

        for k in range(1, L + 1):
            _map_instance(out, f"n{n}/implode_explode/{k}", {"k": k}, ctx, _maps_equal(
                lambda k=k, ctx=ctx: compose(re_.implode(k, ctx), re_.explode(k, ctx)),
                lambda k=k, ctx=ctx: scale(re_.identity((k,), ctx), ctx.inv_qfact(k).inverse())))
    return out


# annular_relations --------------------------------------------------------------------

def _cap(a: int) -> str:
    return f"capR({a})" if a > 0 else f"capL({-a})"


def _rest_words(width: int, lab: int) -> Iterator[tuple]:
    for w in range(0, max(width, 0) + 1):
        yield from _words(w, lab)


def _annular_relations(b: Bounds, seed: int) -> list[Instance]:
    out: list[Instance] = []
    for n in range(1, b.n_max + 1):
        lab = min(2, b.label_max, n)
        for comp in cb.compositions(n):
            ctx = LeviDatum(n, comp)
            tag = f"n{n}/levi{','.join(map(str, comp))}"
            for w in range(1, b.width_max + 1):
                for W in _words(w, lab):
                    rot = W[1:] + W[:1]
                    _relation(out, f"{tag}/coil_inverse/{_obj(W)}", {"word": list(W)},
                              f"coil({_obj(W)}) ; coil_inv({_obj(W)})", _id(W), ctx)
                    _relation(out, f"{tag}/coil_inverse_other/{_obj(W)}", {"word": list(W)},
                              f"coil_inv({_obj(W)}) ; coil({_obj(W)})", _id(rot), ctx)
            for K in _rest_words(b.width_max - 2, lab):
                for k, l in product(range(1, lab + 1), repeat=2):
                    if k + l > n:
                        continue
                    p = {"k": k, "l": l, "K": list(K)}
                    _relation(out, f"{tag}/merge_through_coil/{k},{l}/{_obj(K)}", p,
                              f"coil({_obj((k, l) + K)}) ; coil({_obj((l,) + K + (k,))}) ; "
                              + _tens(_id(K), f"merge({k},{l})"),
                              _tens(f"merge({k},{l})", _id(K)) + f" ; coil({_obj((k + l,) + K)})", ctx, ALL_FLIPS)
                    _relation(out, f"{tag}/dmerge_through_coil/{k},{l}/{_obj(K)}", p,
                              f"coil({_obj((-k, -l) + K)}) ; coil({_obj((-l,) + K + (-k,))}) ; "
                              + _tens(_id(K), f"dmerge({k},{l})"),
                              _tens(f"dmerge({k},{l})", _id(K)) + f" ; coil({_obj((-(k + l),) + K)})", ctx, ALL_FLIPS)
                    binom = quantum_binomial(k + l, k)
                    _relation(out, f"{tag}/annular_digon/{k},{l}/{_obj(K)}", p,
                              _tens(f"split({k},{l})", _id(K)) + f" ; coil({_obj((k, l) + K)}) ; "
                              f"coil({_obj((l,) + K + (k,))}) ; " + _tens(_id(K), f"merge({k},{l})"),
                              f"{_sc(binom)} * coil({_obj((k + l,) + K)})", ctx, ("", "|ud"))
                    _relation(out, f"{tag}/split_half_slide/{k},{l}/{_obj(K)}", p,
                              _tens(f"split({k},{l})", _id(K)) + f" ; coil({_obj((k, l) + K)})",
                              f"coil({_obj((k + l,) + K)}) ; " + _tens(_id(K), f"split({k},{l})")
                              + f" ; coil_inv({_obj((l,) + K + (k,))})", ctx, ALL_FLIPS)
                for a in [x for x in range(-lab, lab + 1) if x]:
                    p = {"a": a, "K": list(K)}
                    _relation(out, f"{tag}/cap_through_coil/{a}/{_obj(K)}", p,
                              f"coil({_obj((a, -a) + K)}) ; coil({_obj((-a,) + K + (a,))}) ; "
                              + _tens(_id(K), _cap(a)),
                              _tens(_cap(a), _id(K)), ctx, ALL_FLIPS)
                    cup = f"cupL({a})" if a > 0 else f"cupR({-a})"
                    _relation(out, f"{tag}/cup_half_slide/{a}/{_obj(K)}", p,
                              _tens(cup, _id(K)) + f" ; coil({_obj((a, -a) + K)})",
                              _tens(_id(K), cup) + f" ; coil_inv({_obj((-a,) + K + (a,))})", ctx, ALL_FLIPS)
            for K in _rest_words(b.width_max - 1, lab):
                for k in range(2, lab + 1):
                    W = (-k,) + K
                    for direction in ("winding", "inverse"):
                        _map_instance(out, f"{tag}/negative_coil_by_bending/{direction}/{_obj(W)}",
                                      {"word": list(W), "direction": direction}, ctx,
                                      _negative_coil_check(k, K, direction, ctx))
    return out


def _negative_coil_check(k: int, K: tuple, direction: str, ctx: LeviDatum):
    """The coil on (-k, K) against the bending of the coil on (k, -k, K, -k)."""
    def run():
        big = re_.coil_matrix((k, -k) + K + (-k,), "inverse" if direction == "winding" else "winding", ctx)
        if direction == "winding":
            bent = compose_all(re_.tensor(re_.cap_right(k, ctx), re_.identity(K + (-k,), ctx)), big,
                               re_.tensor(re_.identity((-k,) + K, ctx), re_.cup_right(k, ctx)))
        else:
            bent = compose_all(re_.tensor(re_.identity((-k,) + K, ctx), re_.cap_left(k, ctx)), big,
                               re_.tensor(re_.cup_left(k, ctx), re_.identity(K + (-k,), ctx)))
        return _compare_maps(re_.coil_matrix((-k,) + K, direction, ctx), bent)
    return run


# circle_evaluation --------------------------------------------------------------------

def _circle_evaluation(b: Bounds, seed: int) -> list[Instance]:
    out: list[Instance] = []
    for n in range(1, b.n_max + 1):
        for comp in cb.compositions(n):
            ctx = LeviDatum(n, comp)
            for k in range(0, n + 1):
                for side in ("left", "right"):
                    def run(k=k, side=side, ctx=ctx):
                        got = re_.essential_circle_value(k, side, ctx)
                        want = re_.predicted_circle_value(k, side, ctx)
                        detail = {"computed": format_scalar(got), "predicted": format_scalar(want)}
                        return got == want, detail
                    _map_instance(out, f"n{n}/levi{','.join(map(str, comp))}/{side}/{k}",
                                  {"k": k, "side": side}, ctx, run)
        ctx = LeviDatum(n, (n,))
        for k in range(0, n + 1):
            for side, sgn in (("left", 1), ("right", -1)):
                def closed(k=k, side=side, sgn=sgn, ctx=ctx, n=n):
                    want = FieldElem.v(-sgn * k * n) * quantum_binomial(n, k) * ctx.u(1, sgn * k)
                    got = re_.essential_circle_value(k, side, ctx)
                    return got == want, {"computed": format_scalar(got), "closed_form": format_scalar(want)}
                _map_instance(out, f"n{n}/single_block_closed_form/{side}/{k}", {"k": k, "side": side}, ctx, closed)
    return out


# equivariance -------------------------------------------------------------------------

def _equivariance(b: Bounds, seed: int) -> list[Instance]:
    out: list[Instance] = []
    for n in range(1, min(b.n_max, 3) + 1):
        L = min(b.label_max, n)
        ctx = LeviDatum(n, (n,))
        planar = []
        for k, l in product(range(1, L + 1), repeat=2):
            if k + l <= n:
                planar += [("merge", (k, l)), ("split", (k, l)), ("dmerge", (k, l)), ("dsplit", (k, l))]
        for k in range(1, L + 1):
            planar += [("capL", (k,)), ("capR", (k,)), ("cupL", (k,)), ("cupR", (k,))]
        for k, l in product(range(1, min(L, 2) + 1), repeat=2):
            planar += [("over", (k, l)), ("under", (k, l))]
        for name, args in planar:
            def run(name=name, args=args, ctx=ctx):
                failures = re_.check_equivariance(re_.generator_matrix(name, args, ctx), "full", ctx)
                return not failures, {"failing_generators": failures} if failures else {}
            _map_instance(out, f"n{n}/full/{name}{args}", {"generator": name, "labels": list(args)}, ctx, run)

        for comp in cb.compositions(n):
            ctx = LeviDatum(n, comp)
            tag = f"n{n}/levi{','.join(map(str, comp))}"
            maps: list[tuple[str, Callable[[], LinMap]]] = []
            lab = min(2, L)
            for w in range(1, 3):
                for W in _words(w, lab):
                    for direction in ("winding", "inverse"):
                        maps.append((f"coil_{direction}{_obj(W)}",
                                     lambda W=W, d=direction, ctx=ctx: re_.coil_matrix(W, d, ctx)))
            for k, l in product(range(1, lab + 1), repeat=2):
                for sign in (1, -1):
                    maps.append((f"levi_crossing({k},{l},{sign:+d})",
                                 lambda k=k, l=l, s=sign, ctx=ctx: re_.levi_crossing(k, l, ctx, s)))
            for i in range(1, ctx.d + 1):
                maps.append((f"block_projector({i})", lambda i=i, ctx=ctx: re_.block_projector(i, ctx)))
            for name, fn in maps:
                def run(fn=fn, ctx=ctx):
                    failures = re_.check_equivariance(fn(), "levi", ctx)
                    return not failures, {"failing_generators": failures} if failures else {}
                _map_instance(out, f"{tag}/levi/{name}", {"map": name}, ctx, run)
            if ctx.d >= 2:
                def witness(ctx=ctx):
                    failures = re_.check_equivariance(re_.coil_matrix((1,), "winding", ctx), "full", ctx)
                    return bool(failures), {"witness": "coil([1])", "failing_generators": failures}
                _map_instance(out, f"{tag}/coil_not_fully_equivariant", {"map": "coil([1])"}, ctx, witness)
    return out


# proof_lemmas -------------------------------------------------------------------------

def _dual_full_twist(k: int, ctx: LeviDatum) -> LinMap:
    """Levi full twist on k downward thin strands, built from signed Levi crossings."""
    word = (-1,) * k
    lift = re_.identity(word, ctx)
    for pos in reversed(re_.longest_word(k)):
        step = re_.tensor(re_.identity(word[:pos], ctx), re_.crossing(-1, -1, "left", "levi", ctx),
                          re_.identity(word[pos + 2:], ctx))
        lift = compose(step, lift)
    return compose(lift, lift)


def _funny_formula(k: int, l: int, ctx: LeviDatum, orientation: str, with_u: bool):
    def run():
        if orientation == "up":
            ft = re_.full_twist(k + l, ctx)
            if with_u:
                ft = compose(ft, re_.u_map(k + l, ctx))
            ex, imp, impk, impl, spl = (re_.explode(k + l, ctx), re_.implode(k + l, ctx), re_.implode(k, ctx),
                                        re_.implode(l, ctx), re_.split(k, l, ctx))
        else:
            ft = _dual_full_twist(k + l, ctx)
            ex, imp, impk, impl, spl = (re_.dual_explode(k + l, ctx), re_.dual_implode(k + l, ctx),
                                        re_.dual_implode(k, ctx), re_.dual_implode(l, ctx), re_.dsplit(k, l, ctx))
        core = compose(ft, ex)
        lhs = scale(compose(re_.tensor(impk, impl), core), ctx.inv_qfact(k) * ctx.inv_qfact(l))
        rhs = scale(compose_all(spl, imp, core), ctx.inv_qfact(k + l))
        return _compare_maps(lhs, rhs)
    return run


def _antisymmetrizer(i: int, m: int, ctx: LeviDatum) -> LinMap:
    """sum_w (-q)^(-len w) T_w (Levi crossings) after projecting every strand to block i."""
    word = (1,) * m
    proj = re_.tensor(*[re_.block_projector(i, ctx)] * m) if m else re_.identity((), ctx)
    total = None
    for perm in permutations(range(m)):
        # bubble sort gives a reduced word for perm
        seq, letters = list(perm), []
        changed = True
        while changed:
            changed = False
            for j in range(m - 1):
                if seq[j] > seq[j + 1]:
                    seq[j], seq[j + 1] = seq[j + 1], seq[j]
                    letters.append(("levi_over", j))
                    changed = True
        t = re_.thin_braid(letters, m, ctx)
        term = scale(t, ctx.negqpow(-len(letters)))
        total = term if total is None else total + term
    return compose(total, proj) if total is not None else proj


def _proof_lemmas(b: Bounds, seed: int) -> list[Instance]:
    out: list[Instance] = []
    for n in range(1, b.n_max + 1):
        L = min(b.label_max, n)
        for comp in cb.compositions(n):
            ctx = LeviDatum(n, comp)
            tag = f"n{n}/levi{','.join(map(str, comp))}"
            for k, l in product(range(1, L + 1), repeat=2):
                if k + l > min(3, n):
                    continue
                for orientation in ("up", "down"):
                    for with_u in ((False, True) if orientation == "up" else (False,)):
                        name = f"full_twist_transport_{orientation}{'_with_u' if with_u else ''}"
                        _map_instance(out, f"{tag}/{name}/{k},{l}", {"k": k, "l": l}, ctx,
                                      _funny_formula(k, l, ctx, orientation, with_u))
            for k in range(2, L + 1):
                for K in _rest_words(1, min(2, L)):
                    for direction in ("winding", "inverse"):
                        W = (k,) + K
                        _map_instance(out, f"{tag}/coil_closed_vs_inductive/{direction}/{_obj(W)}",
                                      {"word": list(W), "direction": direction}, ctx, _maps_equal(
                                          lambda W=W, d=direction, ctx=ctx: re_.coil_matrix(W, d, ctx, "closed"),
                                          lambda W=W, d=direction, ctx=ctx: re_.coil_matrix(W, d, ctx, "inductive")))
            for k in range(1, L + 1):
                def curl(k=k, ctx=ctx):
                    m = compose_all(
                        re_.tensor(re_.identity((k,), ctx), re_.cap_right(k, ctx)),
                        re_.tensor(re_.crossing(k, k, "left", "levi", ctx), re_.identity((-k,), ctx)),
                        re_.tensor(re_.identity((k,), ctx), re_.cup_left(k, ctx)))
                    off = [(r, c) for r, c, _ in m.entries() if r != c]
                    return not off, {} if not off else {"off_diagonal": off[:10], "matrix": m.to_json()}
                _map_instance(out, f"{tag}/levi_curl_diagonal/{k}", {"k": k}, ctx, curl)
            if n >= 3:
                _map_instance(out, f"{tag}/full_twist_other_word/3", {"k": 3, "word": [1, 0, 1]}, ctx, _maps_equal(
                    lambda ctx=ctx: re_.full_twist(3, ctx), lambda ctx=ctx: re_.full_twist(3, ctx, word=(1, 0, 1))))
            for i in range(1, ctx.d + 1):
                def indicator(i=i, ctx=ctx):
                    want = LinMap.diagonal(ctx.space((1,)), lambda lab: ONE if ctx.block(lab[0][0]) == i else
                                           FieldElem.from_int(0))
                    return _compare_maps(re_.block_projector(i, ctx), want)
                _map_instance(out, f"{tag}/projector_indicator/{i}", {"i": i}, ctx, indicator)
                for j in range(1, ctx.d + 1):
                    def orth(i=i, j=j, ctx=ctx):
                        pi, pj = re_.block_projector(i, ctx), re_.block_projector(j, ctx)
                        want = pi if i == j else LinMap.zero(pi.domain, pi.codomain)
                        return _compare_maps(compose(pi, pj), want)
                    _map_instance(out, f"{tag}/projector_product/{i},{j}", {"i": i, "j": j}, ctx, orth)
            _map_instance(out, f"{tag}/projector_sum", {}, ctx, _maps_equal(
                lambda ctx=ctx: sum((re_.block_projector(i, ctx) for i in range(2, ctx.d + 1)),
                                    re_.block_projector(1, ctx)),
                lambda ctx=ctx: re_.identity((1,), ctx)))
            for i, li in enumerate(comp, start=1):
                if li + 1 <= 3:
                    def vanish(i=i, li=li, ctx=ctx):
                        top = _antisymmetrizer(i, li + 1, ctx)
                        below = _antisymmetrizer(i, li, ctx)
                        ok = top.is_zero() and not below.is_zero()
                        return ok, {} if ok else {"vanishes_at_l_plus_1": top.is_zero(),
                                                  "nonzero_at_l": not below.is_zero()}
                    _map_instance(out, f"{tag}/antisymmetrizer_vanishes/{i}", {"block": i, "strands": li + 1},
                                  ctx, vanish)
    return out


# monoidality --------------------------------------------------------------------------

def _monoidality(b: Bounds, seed: int) -> list[Instance]:
    out: list[Instance] = []
    witness = SkeinTensor(CoilSlice((1,), "winding"), Id((1,)))
    for n in range(1, b.n_max + 1):
        for comp in cb.compositions(n):
            ctx = LeviDatum(n, comp)
            tag = f"n{n}/levi{','.join(map(str, comp))}"

            def generic(ctx=ctx):
                s = evaluate(witness, ctx, tensor="skein")
                h = evaluate(witness, ctx, tensor="hopf")
                differ = not s == h
                return differ, {"witness": to_text(witness), "skein_equals_hopf": not differ}

            def at_one(ctx=ctx):
                s = evaluate(witness, ctx, "v1", tensor="skein")
                h = evaluate(witness, ctx, "v1", tensor="hopf")
                return _compare_maps(s, h, {"witness": to_text(witness)})

            if ctx.d >= 2:
                _map_instance(out, f"{tag}/witness_differs_generic", {"mode": "exact"}, ctx, generic)
            else:
                # one block: the coil on V is u_1 id, so the inserted crossings cancel
                _map_instance(out, f"{tag}/witness_agrees_single_block", {"mode": "exact"}, ctx, lambda ctx=ctx:
                              _compare_maps(evaluate(witness, ctx, tensor="skein"),
                                            evaluate(witness, ctx, tensor="hopf")))
            _map_instance(out, f"{tag}/witness_agrees_at_v1", {"mode": "v1"}, ctx, at_one)
            for text in ("(merge(1,1)) @ (id([1]))", "(over(1,1)) @ (cupL(1))", "(capR(1)) & (split(1,1))"):
                def planar(text=text, ctx=ctx):
                    t = parse(text)
                    return _compare_maps(evaluate(t, ctx, tensor="skein"), evaluate(t, ctx, tensor="hopf"),
                                         {"term": text})
                if n >= 2 or "merge" not in text and "split" not in text:
                    _map_instance(out, f"{tag}/planar_products_agree/{text}", {"term": text}, ctx, planar)
    return out


# ariki_koike and q1_basis -------------------------------------------------------------

def _ak_cases(b: Bounds) -> list[tuple[int, tuple, int]]:
    cases = []
    for n in range(1, min(b.n_max, 3) + 1):
        for comp in cb.compositions(n):
            for m in range(1, b.m_max + 1):
                cases.append((n, comp, m))
    if b.m_max < 4:
        for comp in cb.compositions(2):
            cases.append((2, comp, 4))
    return cases


def _ariki_koike(b: Bounds, seed: int) -> list[Instance]:
    out: list[Instance] = []
    for n, comp, m in _ak_cases(b):
        ctx = LeviDatum(n, comp)

        def run(m=m, ctx=ctx):
            rep = ak.ak_report(m, ctx, seed)
            return ak.report_passes(rep), rep
        _map_instance(out, f"n{n}/levi{','.join(map(str, comp))}/m{m}", {"m": m}, ctx, run)
    return out


def _q1_basis(b: Bounds, seed: int) -> list[Instance]:
    out: list[Instance] = []
    for n in range(1, min(b.n_max, 3) + 1):
        comp = (1,) * n
        ctx = LeviDatum(n, comp, "v1")
        for m in range(1, min(b.m_max, 3) + 1):
            def run(m=m, ctx=ctx):
                count = cb.colored_basis_count(m, ctx.composition)
                rank = ak.image_rank(m, ctx, seed)
                return count == rank, {"colored_permutations": count, "image_rank_v1": rank}
            _map_instance(out, f"n{n}/cartan/m{m}", {"m": m}, ctx, run)
    return out


# Runner -------------------------------------------------------------------------------

_BUILDERS = {
    "planar_relations": _planar_relations,
    "derived_planar": _derived_planar,
    "annular_relations": _annular_relations,
    "circle_evaluation": _circle_evaluation,
    "equivariance": _equivariance,
    "proof_lemmas": _proof_lemmas,
    "monoidality": _monoidality,
    "ariki_koike": _ariki_koike,
    "q1_basis": _q1_basis,
}


def suite_spec(name: str, bounds: Bounds | None = None, seed: int = 0) -> SuiteSpec:
    if name not in _BUILDERS:
        raise UnknownSuite(name)
    bounds = bounds or Bounds()
    instances = sorted(_BUILDERS[name](bounds, seed), key=lambda i: i.key)
    return SuiteSpec(name, bounds, tuple(instances))


def run_instance(suite: str, inst: Instance, timing: bool = True) -> dict:
    start = time.perf_counter()
    try:
        ok, detail = inst.check()
        status = "pass" if ok else "fail"
    except Exception as exc:  # a crashing instance is reported, not raised
        status, detail = "error", {"error": f"{type(exc).__name__}: {exc}"}
    elapsed = round((time.perf_counter() - start) * 1000) if timing else 0
    return {"suite": suite, "instance": inst.key, "params": inst.params, "status": status,
            "elapsed_ms": elapsed, "detail": detail}


def run_suite(name: str, bounds: Bounds | None = None, seed: int = 0, timing: bool = True,
              only: Callable[[Instance], bool] | None = None) -> list[dict]:
    """Run every instance of a suite; records come back ordered by instance key."""
    spec = suite_spec(name, bounds, seed)
    return [run_instance(name, inst, timing) for inst in spec.instances if only is None or only(inst)]


def report_lines(records: list[dict]) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)


def all_passed(records: list[dict]) -> bool:
    return all(r["status"] == "pass" for r in records)


def summarize(records: list[dict]) -> dict:
    counts: dict[str, int] = {}
    for r in records:
        counts[r["status"]] = counts.get(r["status"], 0) + 1
    return counts


__all__ = ["Bounds", "Instance", "SuiteSpec", "SUITES", "UnknownSuite", "all_passed", "dumbbell_terms",
           "ladder_terms", "report_lines", "run_instance", "run_suite", "suite_spec", "summarize"]
