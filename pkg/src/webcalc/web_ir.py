"""Annular web terms: AST, text syntax, typechecking, evaluation to matrices,
the skein and Hopf tensor products, and the two diagram flips.

Syntax (whitespace-insensitive, ``#`` starts a comment)::

    top    := sum
    sum    := scaled ('+' scaled)*
    scaled := 'scalar' STRING '*' chain | chain
    chain  := slice (';' slice)*             # bottom to top
    slice  := 'coil' '(' obj ')' | 'coil_inv' '(' obj ')' | planar
    planar := atom ('*' atom)*
    atom   := NAME '(' ints ')' | 'id' '(' obj ')' | group (('@' | '&') group)*
    group  := '(' top ')'
    obj    := '[' ints ']'

``(f) @ (g)`` is the skein tensor with f in front, ``(f) & (g)`` puts g in front.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from . import rep_engine as re_
from .linear_algebra import LinMap, ShapeMismatch, compose, kron, scale
from .rep_engine import LeviDatum, NegativeLabel
from .scalar_field import ONE, FieldElem, format_scalar, parse_scalar

GENERATORS = ("merge", "split", "dmerge", "dsplit", "capL", "capR", "cupL", "cupR", "over", "under")
_ARITY = {"merge": 2, "split": 2, "dmerge": 2, "dsplit": 2, "over": 2, "under": 2,
          "capL": 1, "capR": 1, "cupL": 1, "cupR": 1}


class WebSyntaxError(SyntaxError):
    def __init__(self, msg: str, line: int, col: int, text: str | None = None):
        super().__init__(f"{msg} at line {line}, column {col}")
        self.lineno = line
        self.offset = col
        self.text = text


class UnknownGenerator(KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown generator"


class NotSkeinDecomposable(ValueError):
    pass


def _word(ws: Sequence[int]) -> tuple:
    return tuple(int(k) for k in ws if k != 0)


# AST --------------------------------------------------------------------------------

@dataclass(frozen=True)
class Gen:
    name: str
    labels: tuple


@dataclass(frozen=True)
class Id:
    word: tuple


@dataclass(frozen=True)
class HTensor:
    left: object
    right: object


@dataclass(frozen=True)
class VCompose:
    """``after`` applied on top of ``before``."""
    after: object
    before: object


@dataclass(frozen=True)
class CoilSlice:
    """``word`` = (k1, K'); winding maps it to (K', k1), inverse maps (K', k1) back to it."""
    word: tuple
    direction: str = "winding"


@dataclass(frozen=True)
class SkeinTensor:
    left: object
    right: object
    front: str = "left"


@dataclass(frozen=True)
class Scale:
    scalar: str  # canonical scalar string
    term: object


@dataclass(frozen=True)
class Sum:
    left: object
    right: object


def scaled(x, term) -> Scale:
    return Scale(format_scalar(parse_scalar(x) if isinstance(x, str) else x), term)


# Tokenizer and parser ---------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>\#[^\n]*)
  | (?P<str>"[^"\n]*")
  | (?P<int>-?\d+)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<punct>[()\[\],;*@&+])
""", re.VERBOSE)


@dataclass
class _Tok:
    kind: str
    value: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks, pos, line, line_start = [], 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise WebSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line, line_start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            toks.append(_Tok(kind, m.group(), line, m.start() - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.locs: dict[int, tuple[int, int]] = {}  # id(node) -> (line, col)
        self._keep: list = []

    def mark(self, node, tok: _Tok):
        self.locs[id(node)] = (tok.line, tok.col)
        self._keep.append(node)
        return node

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.peek()
        found = "end of input" if tok.kind == "eof" else repr(tok.value)
        raise WebSyntaxError(f"{msg}, found {found}", tok.line, tok.col)

    def accept(self, value: str) -> bool:
        if self.peek().value == value and self.peek().kind in ("punct", "name"):
            self.i += 1
            return True
        return False

    def expect(self, value: str) -> _Tok:
        tok = self.peek()
        if tok.value != value or tok.kind not in ("punct", "name"):
            self.error(f"expected {value!r}")
        self.i += 1
        return tok

    def parse(self):
        t = self.top()
        if self.peek().kind != "eof":
            self.error("expected end of input")
        return t

    def top(self):
        t = self.scaled()
        while True:
            tok = self.peek()
            if not self.accept("+"):
                return t
            t = self.mark(Sum(t, self.scaled()), tok)

    def scaled(self):
        tok = self.peek()
        if tok.kind == "name" and tok.value == "scalar":
            self.i += 1
            s = self.peek()
            if s.kind != "str":
                self.error("expected a quoted scalar")
            self.i += 1
            try:
                x = parse_scalar(s.value[1:-1])
            except ValueError as e:
                raise WebSyntaxError(f"bad scalar: {e}", s.line, s.col) from None
            self.expect("*")
            return Scale(format_scalar(x), self.chain())
        return self.chain()

    def chain(self):
        t = self.slice()
        while True:
            tok = self.peek()
            if not self.accept(";"):
                return t
            t = self.mark(VCompose(self.slice(), t), tok)

    def slice(self):
        tok = self.peek()
        if tok.kind == "name" and tok.value in ("coil", "coil_inv"):
            self.i += 1
            self.expect("(")
            word = self.obj()
            self.expect(")")
            return self.mark(CoilSlice(word, "winding" if tok.value == "coil" else "inverse"), tok)
        return self.planar()

    def planar(self):
        start = self.peek()
        t = self.atom()
        while self.accept("*"):
            t = HTensor(t, self.atom())
        return self.mark(t, start)

    def atom(self):
        tok = self.peek()
        if tok.kind == "punct" and tok.value == "(":
            t = self.group()
            while self.peek().value in ("@", "&") and self.peek().kind == "punct":
                front = "left" if self.peek().value == "@" else "right"
                self.i += 1
                t = SkeinTensor(t, self.group(), front)
            return t
        if tok.kind != "name":
            self.error("expected a generator, 'id' or '('")
        self.i += 1
        if tok.value == "id":
            self.expect("(")
            word = self.obj()
            self.expect(")")
            return Id(word)
        if tok.value in ("coil", "coil_inv"):
            self.error("coils must form a whole slice; wrap the tensor factor in parentheses", tok)
        if tok.value == "scalar":
            self.error("a scalar prefix must start a term; use parentheses", tok)
        if tok.value not in GENERATORS:
            raise UnknownGenerator(f"unknown generator {tok.value!r} at line {tok.line}, column {tok.col}")
        self.expect("(")
        args = self.ints(")")
        self.expect(")")
        return self.mark(Gen(tok.value, tuple(args)), tok)

    def group(self):
        self.expect("(")
        t = self.top()
        self.expect(")")
        return t

    def obj(self) -> tuple:
        self.expect("[")
        vals = self.ints("]")
        self.expect("]")
        return tuple(vals)

    def ints(self, close: str) -> list[int]:
        vals = []
        if self.peek().value == close:
            return vals
        while True:
            tok = self.peek()
            if tok.kind != "int":
                self.error("expected an integer")
            vals.append(int(tok.value))
            self.i += 1
            if not self.accept(","):
                return vals


def parse(text: str):
    return _Parser(text).parse()


class LocatedTypeError(ShapeMismatch):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{msg} at line {line}, column {col}")
        self.lineno = line
        self.offset = col


def parse_checked(text: str):
    """Parse and typecheck; type errors carry the position of the offending ';', '+' or generator."""
    p = _Parser(text)
    t = p.parse()
    _check_located(t, p.locs, (1, 1))
    return t


def _check_located(t, locs: dict, where: tuple[int, int]):
    here = locs.get(id(t), where)
    for child in _children(t):
        _check_located(child, locs, here)
    try:
        typecheck(t)
    except (ShapeMismatch, NegativeLabel) as e:
        if isinstance(e, LocatedTypeError):
            raise
        if isinstance(e, NegativeLabel):
            raise NegativeLabel(f"{e} at line {here[0]}, column {here[1]}") from None
        raise LocatedTypeError(str(e), *here) from None


def _children(t) -> tuple:
    if isinstance(t, (Gen, Id, CoilSlice)):
        return ()
    if isinstance(t, Scale):
        return (t.term,)
    if isinstance(t, VCompose):
        return (t.before, t.after)
    return (t.left, t.right)


def _fmt_ints(xs) -> str:
    return ",".join(str(x) for x in xs)


def to_text(t) -> str:
    """Print a term so that ``parse(to_text(t)) == t``."""
    return _p_top(t)


def _p_top(t) -> str:
    if isinstance(t, Sum):
        return f"{_p_top(t.left)} + {_p_scaled(t.right)}"
    return _p_scaled(t)


def _p_scaled(t) -> str:
    if isinstance(t, Scale):
        return f'scalar "{t.scalar}" * {_p_chain(t.term)}'
    return _p_chain(t)


def _p_chain(t) -> str:
    if isinstance(t, VCompose):
        return f"{_p_chain(t.before)} ; {_p_slice(t.after)}"
    return _p_slice(t)


def _p_slice(t) -> str:
    if isinstance(t, CoilSlice):
        return f"{'coil' if t.direction == 'winding' else 'coil_inv'}([{_fmt_ints(t.word)}])"
    return _p_planar(t)


def _p_planar(t) -> str:
    if isinstance(t, HTensor):
        return f"{_p_planar(t.left)} * {_p_atom(t.right)}"
    return _p_atom(t)


def _p_atom(t) -> str:
    if isinstance(t, Gen):
        return f"{t.name}({_fmt_ints(t.labels)})"
    if isinstance(t, Id):
        return f"id([{_fmt_ints(t.word)}])"
    if isinstance(t, SkeinTensor):
        op = "@" if t.front == "left" else "&"
        left = _p_atom(t.left) if isinstance(t.left, SkeinTensor) else f"({_p_top(t.left)})"
        return f"{left} {op} ({_p_top(t.right)})"
    return f"({_p_top(t)})"


# Typechecking ---------------------------------------------------------------------------

def generator_type(name: str, labels: Sequence[int]) -> tuple[tuple, tuple]:
    if name not in _ARITY:
        raise UnknownGenerator(f"unknown generator {name!r}")
    if len(labels) != _ARITY[name]:
        raise ShapeMismatch(f"{name} takes {_ARITY[name]} labels, got {len(labels)}")
    for x in labels:
        if x < 0:
            raise NegativeLabel(f"{name}{tuple(labels)}: edge labels must be non-negative")
    if len(labels) == 2:
        k, l = labels
        return {
            "merge": ((k, l), (k + l,)), "split": ((k + l,), (k, l)),
            "dmerge": ((-k, -l), (-(k + l),)), "dsplit": ((-(k + l),), (-k, -l)),
            "over": ((k, l), (l, k)), "under": ((k, l), (l, k)),
        }[name]
    (k,) = labels
    return {"capL": ((-k, k), ()), "capR": ((k, -k), ()), "cupL": ((), (k, -k)), "cupR": ((), (-k, k))}[name]


@lru_cache(maxsize=None)
def typecheck(t) -> tuple[tuple, tuple]:
    """(domain, codomain) object words of a term, zeros removed."""
    if isinstance(t, Gen):
        dom, cod = generator_type(t.name, t.labels)
        return _word(dom), _word(cod)
    if isinstance(t, Id):
        return _word(t.word), _word(t.word)
    if isinstance(t, CoilSlice):
        w = _word(t.word)
        if not w:
            raise ShapeMismatch("coil on the empty object")
        rot = re_.rotate(w)
        return (w, rot) if t.direction == "winding" else (rot, w)
    if isinstance(t, (HTensor, SkeinTensor)):
        d1, c1 = typecheck(t.left)
        d2, c2 = typecheck(t.right)
        return d1 + d2, c1 + c2
    if isinstance(t, VCompose):
        da, ca = typecheck(t.after)
        db, cb = typecheck(t.before)
        if da != cb:
            raise ShapeMismatch(f"cannot stack {list(da)} on top of {list(cb)}")
        return db, ca
    if isinstance(t, Scale):
        return typecheck(t.term)
    if isinstance(t, Sum):
        a, b = typecheck(t.left), typecheck(t.right)
        if a != b:
            raise ShapeMismatch(f"cannot add terms of types {a} and {b}")
        return a
    raise TypeError(f"not a web term: {t!r}")


def has_coils(t) -> bool:
    if isinstance(t, CoilSlice):
        return True
    if isinstance(t, (Gen, Id)):
        return False
    if isinstance(t, (Scale,)):
        return has_coils(t.term)
    if isinstance(t, VCompose):
        return has_coils(t.after) or has_coils(t.before)
    return has_coils(t.left) or has_coils(t.right)


# Evaluation ---------------------------------------------------------------------------

def evaluate(t, ctx: LeviDatum, mode: str = "exact", tensor: str = "skein",
             point: tuple | None = None, p: int | None = None) -> LinMap:
    """Matrix of a term.

    ``mode``: ``exact`` (v generic), ``v1`` (v -> 1) or ``specialized`` (all
    parameters sent to F_p via ``point = (v, [u_1, ...])``; entries become
    integer constants).  ``tensor="hopf"`` evaluates ``@`` as a plain Kronecker
    product instead of inserting crossings.
    """
    typecheck(t)
    if mode == "v1":
        ctx = ctx.with_mode("v1")
    elif mode not in ("exact", "specialized"):
        raise ValueError(f"unknown evaluation mode {mode!r}")
    out = _eval(t, ctx, tensor)
    if mode == "specialized":
        from .linear_algebra import PRIME
        if point is None:
            raise ValueError("specialized mode needs a point (v, [u_1, ...])")
        prime = p or PRIME
        v, us = point
        out = out.map_entries(lambda x: FieldElem.from_int(x.specialize(v, us, prime)))
    return out


@lru_cache(maxsize=4096)
def _eval(t, ctx: LeviDatum, tensor: str) -> LinMap:
    if isinstance(t, Gen):
        return re_.generator_matrix(t.name, t.labels, ctx)
    if isinstance(t, Id):
        return re_.identity(t.word, ctx)
    if isinstance(t, CoilSlice):
        return re_.coil_matrix(_word(t.word), t.direction, ctx)
    if isinstance(t, HTensor):
        return kron(_eval(t.left, ctx, tensor), _eval(t.right, ctx, tensor))
    if isinstance(t, VCompose):
        return compose(_eval(t.after, ctx, tensor), _eval(t.before, ctx, tensor))
    if isinstance(t, Scale):
        return scale(_eval(t.term, ctx, tensor), ctx.adapt(parse_scalar(t.scalar)))
    if isinstance(t, Sum):
        return _eval(t.left, ctx, tensor) + _eval(t.right, ctx, tensor)
    if isinstance(t, SkeinTensor):
        if tensor == "hopf" or not has_coils(t):
            return kron(_eval(t.left, ctx, tensor), _eval(t.right, ctx, tensor))
        if tensor != "skein":
            raise ValueError(f"unknown tensor product {tensor!r}")
        total = None
        for coeff, seq in _lower(t, ctx):
            m = _run(seq, typecheck(t)[0], ctx)
            m = scale(m, coeff)
            total = m if total is None else total + m
        if total is None:
            dom, cod = typecheck(t)
            return LinMap.zero(ctx.space(dom), ctx.space(cod))
        return total
    raise TypeError(f"not a web term: {t!r}")


# Skein tensor lowering: a term becomes a linear combination of bottom-to-top
# slice lists whose entries are matrices or coils spanning the whole word.

@dataclass(frozen=True)
class _Coil:
    word: tuple
    direction: str


def _lower(t, ctx: LeviDatum) -> list[tuple[FieldElem, list]]:
    if not has_coils(t):
        return [(ONE, [_eval(t, ctx, "skein")])]
    if isinstance(t, HTensor):
        raise NotSkeinDecomposable("a Hopf product of annular terms cannot be placed inside a skein tensor")
    if isinstance(t, CoilSlice):
        return [(ONE, [_Coil(_word(t.word), t.direction)])]
    if isinstance(t, VCompose):
        return [(ca * cb, sb + sa) for ca, sa in _lower(t.after, ctx) for cb, sb in _lower(t.before, ctx)]
    if isinstance(t, Scale):
        c = ctx.adapt(parse_scalar(t.scalar))
        return [(c * x, s) for x, s in _lower(t.term, ctx)]
    if isinstance(t, Sum):
        return _lower(t.left, ctx) + _lower(t.right, ctx)
    if isinstance(t, SkeinTensor):
        cl = typecheck(t.left)[1]
        dr = typecheck(t.right)[0]
        left_front = t.front == "left"
        out = []
        for ca, sa in _lower(t.left, ctx):
            lo = [x for s in sa for x in _pad_right(s, dr, left_front, ctx)]
            for cb, sb in _lower(t.right, ctx):
                hi = [x for s in sb for x in _pad_left(s, cl, not left_front, ctx)]
                out.append((ca * cb, lo + hi))
        return out
    raise TypeError(f"not a web term: {t!r}")


def _pad_right(s, L: tuple, in_front: bool, ctx: LeviDatum) -> list:
    """Slice of the left factor with the strands L added on its right."""
    if isinstance(s, LinMap):
        return [re_.tensor(s, re_.identity(L, ctx))]
    if not L:
        return [s]
    k1, rest = s.word[0], s.word[1:]
    full = _Coil((k1,) + rest + L, s.direction)
    if s.direction == "winding":
        # the strand comes around to the far right, then crosses back over L
        back = re_.move_left(L, k1, "right" if in_front else "left", "plain", ctx)
        return [full, re_.tensor(re_.identity(rest, ctx), back)]
    push = re_.move_right(k1, L, "left" if in_front else "right", "plain", ctx)
    return [re_.tensor(re_.identity(rest, ctx), push), full]


def _pad_left(s, K: tuple, in_front: bool, ctx: LeviDatum) -> list:
    """Slice of the right factor with the strands K added on its left."""
    if isinstance(s, LinMap):
        return [re_.tensor(re_.identity(K, ctx), s)]
    if not K:
        return [s]
    l1, rest = s.word[0], s.word[1:]
    full = _Coil((l1,) + K + rest, s.direction)
    if s.direction == "winding":
        # carry the strand across K to the far left first
        carry = re_.move_left(K, l1, "right" if in_front else "left", "plain", ctx)
        return [re_.tensor(carry, re_.identity(rest, ctx)), full]
    ret = re_.move_right(l1, K, "left" if in_front else "right", "plain", ctx)
    return [full, re_.tensor(ret, re_.identity(rest, ctx))]


def _run(seq: list, dom: tuple, ctx: LeviDatum) -> LinMap:
    out = re_.identity(dom, ctx)
    for s in seq:
        m = re_.coil_matrix(s.word, s.direction, ctx) if isinstance(s, _Coil) else s
        out = compose(m, out)
    return out


def skein_tensor(f, g, front: str = "left") -> SkeinTensor:
    typecheck(f)
    typecheck(g)
    return SkeinTensor(f, g, front)


def hopf_tensor(f, g) -> HTensor:
    typecheck(f)
    typecheck(g)
    return HTensor(f, g)


# Flips --------------------------------------------------------------------------------

def flip_updown(t):
    """Reflect a term top to bottom: reverses composition, keeps object words."""
    if isinstance(t, Gen):
        k = t.labels
        swap = {"merge": "split", "split": "merge", "dmerge": "dsplit", "dsplit": "dmerge",
                "capL": "cupR", "cupR": "capL", "capR": "cupL", "cupL": "capR"}
        if t.name in swap:
            return Gen(swap[t.name], k)
        return Gen(t.name, (k[1], k[0]))
    if isinstance(t, Id):
        return t
    if isinstance(t, CoilSlice):
        return CoilSlice(t.word, "inverse" if t.direction == "winding" else "winding")
    if isinstance(t, VCompose):
        return VCompose(flip_updown(t.before), flip_updown(t.after))
    if isinstance(t, HTensor):
        return HTensor(flip_updown(t.left), flip_updown(t.right))
    if isinstance(t, SkeinTensor):
        return SkeinTensor(flip_updown(t.left), flip_updown(t.right), t.front)
    if isinstance(t, Scale):
        return Scale(t.scalar, flip_updown(t.term))
    if isinstance(t, Sum):
        return Sum(flip_updown(t.left), flip_updown(t.right))
    raise TypeError(f"not a web term: {t!r}")


def flip_leftright(t):
    """Mirror a term in a vertical line: reverses object words."""
    if isinstance(t, Gen):
        k = t.labels
        if len(k) == 2:
            return Gen(t.name, (k[1], k[0]))
        swap = {"capL": "capR", "capR": "capL", "cupL": "cupR", "cupR": "cupL"}
        return Gen(swap[t.name], k)
    if isinstance(t, Id):
        return Id(tuple(reversed(t.word)))
    if isinstance(t, CoilSlice):
        w = _word(t.word)
        new = (w[0],) + tuple(reversed(w[1:]))
        return CoilSlice(new, "inverse" if t.direction == "winding" else "winding")
    if isinstance(t, VCompose):
        return VCompose(flip_leftright(t.after), flip_leftright(t.before))
    if isinstance(t, HTensor):
        return HTensor(flip_leftright(t.right), flip_leftright(t.left))
    if isinstance(t, SkeinTensor):
        return SkeinTensor(flip_leftright(t.right), flip_leftright(t.left),
                           "right" if t.front == "left" else "left")
    if isinstance(t, Scale):
        return Scale(t.scalar, flip_leftright(t.term))
    if isinstance(t, Sum):
        return Sum(flip_leftright(t.left), flip_leftright(t.right))
    raise TypeError(f"not a web term: {t!r}")
