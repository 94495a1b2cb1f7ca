"""Exact scalars: Laurent polynomials in v, u_1..u_d and their fraction field.

A ``LaurentPoly`` maps exponent vectors ``(e_v, e_u1, ..., e_ud)`` to
coefficients.  Exponent vectors are stored with trailing zeros stripped so
that polynomials built with different numbers of u-variables compare equal.

A ``FieldElem`` is ``numerator / product(atoms)``.  Atoms are the only
denominators the calculus ever needs: quantum integers ``[m]``, differences
``u_i - u_j`` and, as a fallback, an arbitrary nonzero polynomial.  There is
no polynomial GCD; an atom is cancelled when it divides the numerator exactly.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence


class DenominatorVanishes(ZeroDivisionError):
    pass


class ScalarSyntaxError(ValueError):
    pass


def _strip(e: tuple) -> tuple:
    n = len(e)
    while n and e[n - 1] == 0:
        n -= 1
    return e if n == len(e) else e[:n]


def _add_exp(a: tuple, b: tuple) -> tuple:
    la, lb = len(a), len(b)
    if la == lb:
        return _strip(tuple(x + y for x, y in zip(a, b)))
    if la < lb:
        a, b, la, lb = b, a, lb, la
    return _strip(tuple(x + y for x, y in zip(a, b)) + a[lb:])


def _sub_exp(a: tuple, b: tuple) -> tuple:
    return _add_exp(a, tuple(-x for x in b))


def _pad(e: tuple, n: int) -> tuple:
    return e + (0,) * (n - len(e))


def _div_coeff(c, d):
    if isinstance(c, int) and isinstance(d, int) and c % d == 0:
        return c // d
    return _norm_coeff(Fraction(c) / d)


def _norm_coeff(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class LaurentPoly:
    """Sparse Laurent polynomial with integer (occasionally rational) coefficients."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[tuple, int] | None = None, _clean: bool = False):
        if terms is None:
            self.terms = {}
        elif _clean:
            self.terms = terms
        else:
            acc: dict = {}
            for e, c in terms.items():
                if c:
                    e = _strip(tuple(e))
                    acc[e] = acc.get(e, 0) + c
            self.terms = {e: _norm_coeff(c) for e, c in acc.items() if c}
        self._hash = None

    # constructors
    @classmethod
    def const(cls, c) -> "LaurentPoly":
        return cls({(): _norm_coeff(c)}, _clean=True) if c else cls()

    @classmethod
    def monomial(cls, exps: Sequence[int], c=1) -> "LaurentPoly":
        return cls({_strip(tuple(exps)): c}, _clean=True) if c else cls()

    @classmethod
    def var(cls, index: int, power: int = 1) -> "LaurentPoly":
        e = [0] * (index + 1)
        e[index] = power
        return cls.monomial(e)

    # predicates
    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def constant_value(self):
        """The coefficient if the polynomial is a constant, else None."""
        if not self.terms:
            return 0
        if len(self.terms) == 1 and () in self.terms:
            return self.terms[()]
        return None

    def nvars(self) -> int:
        return max((len(e) for e in self.terms), default=0)

    # arithmetic
    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if not other.terms:
            return self
        if not self.terms:
            return other
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e, 0) + c
            if s:
                t[e] = s
            else:
                t.pop(e, None)
        return LaurentPoly(t, _clean=True)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self.terms.items()}, _clean=True)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        a, b = self.terms, other.terms
        if not a or not b:
            return LaurentPoly()
        if len(a) > len(b):
            a, b = b, a
        t: dict = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = _add_exp(ea, eb)
                s = t.get(e, 0) + ca * cb
                if s:
                    t[e] = s
                else:
                    del t[e]
        return LaurentPoly(t, _clean=True)

    def scale(self, c) -> "LaurentPoly":
        if not c:
            return LaurentPoly()
        return LaurentPoly({e: _norm_coeff(x * c) for e, x in self.terms.items()}, _clean=True)

    def shift(self, exps: tuple) -> "LaurentPoly":
        return LaurentPoly({_add_exp(e, exps): c for e, c in self.terms.items()}, _clean=True)

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            if not self.is_monomial():
                raise ValueError("negative power of a non-monomial Laurent polynomial")
            (e, c), = self.terms.items()
            if c not in (1, -1):
                raise ValueError("monomial with non-unit coefficient is not invertible")
            return LaurentPoly.monomial(tuple(-x for x in e), c) ** (-k)
        out = LaurentPoly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self.terms == other.terms
        if isinstance(other, int):
            return self.terms == ({(): other} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def exact_divide(self, g: "LaurentPoly") -> "LaurentPoly | None":
        """Return ``self / g`` if ``g`` divides ``self`` in the Laurent ring, else None."""
        if not g.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self.terms:
            return LaurentPoly()
        if len(g.terms) == 1:
            (eg, cg), = g.terms.items()
            return LaurentPoly({_sub_exp(e, eg): _div_coeff(c, cg) for e, c in self.terms.items()}, _clean=True)
        n = max(self.nvars(), g.nvars())
        fe = [_pad(e, n) for e in self.terms]
        ge = [_pad(e, n) for e in g.terms]
        # per-variable degree box that any quotient term must lie in
        lo = [min(e[i] for e in fe) - min(e[i] for e in ge) for i in range(n)]
        hi = [max(e[i] for e in fe) - max(e[i] for e in ge) for i in range(n)]
        if any(a > b for a, b in zip(lo, hi)):
            return None
        glead = max(ge)
        gcoef = g.terms[_strip(glead)]
        r = {_pad(e, n): c for e, c in self.terms.items()}
        gpad = [(_pad(e, n), c) for e, c in g.terms.items()]
        q: dict = {}
        while r:
            lt = max(r)
            t = tuple(a - b for a, b in zip(lt, glead))
            if any(x < a or x > b for x, a, b in zip(t, lo, hi)):
                return None
            c = _div_coeff(r[lt], gcoef)
            q[_strip(t)] = c
            for e, cg in gpad:
                k = tuple(a + b for a, b in zip(e, t))
                s = r.get(k, 0) - c * cg
                if s:
                    r[k] = s
                else:
                    r.pop(k, None)
        return LaurentPoly(q, _clean=True)

    def evaluate(self, values: Sequence, p: int | None = None):
        """Substitute ``values[i]`` for variable ``i`` (exact, or modulo the prime ``p``)."""
        total = 0
        cache: dict = {}
        for e, c in self.terms.items():
            term = c % p if p is not None and isinstance(c, int) else c
            if p is not None and isinstance(c, Fraction):
                term = c.numerator % p * pow(c.denominator, -1, p) % p
            for i, x in enumerate(e):
                if x == 0:
                    continue
                key = (i, x)
                if key not in cache:
                    base = values[i]
                    if p is None:
                        cache[key] = Fraction(base) ** x
                    else:
                        if base % p == 0 and x < 0:
                            raise DenominatorVanishes("variable specialized to zero")
                        cache[key] = pow(base, x, p)
                term = term * cache[key]
                if p is not None:
                    term %= p
            total += term
        return total % p if p is not None else total

    def substitute_v(self, value) -> "LaurentPoly":
        """Substitute a constant for v (used for the classical limit v -> 1)."""
        t: dict = {}
        for e, c in self.terms.items():
            k = e[0] if e else 0
            rest = _strip((0,) + e[1:]) if e else ()
            s = t.get(rest, 0) + c * Fraction(value) ** k
            t[rest] = s
        return LaurentPoly({e: c for e, c in t.items() if c})

    def __repr__(self) -> str:
        return f"LaurentPoly({format_poly(self)})"

    def __str__(self) -> str:
        return format_poly(self)


def _var_name(i: int) -> str:
    return "v" if i == 0 else f"u{i}"


def _format_monomial(e: tuple) -> str:
    parts = []
    for i, x in enumerate(e):
        if x == 0:
            continue
        parts.append(_var_name(i) if x == 1 else f"{_var_name(i)}^{x}")
    return "*".join(parts)


def format_poly(p: LaurentPoly) -> str:
    if not p.terms:
        return "0"
    n = p.nvars()
    out = []
    for e in sorted(p.terms, key=lambda e: _pad(e, n)):
        c = p.terms[e]
        mono = _format_monomial(e)
        neg = c < 0
        a = -c if neg else c
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


# Denominator atoms --------------------------------------------------------

def _qint_poly(m: int) -> LaurentPoly:
    if m == 0:
        return LaurentPoly()
    s = 1 if m > 0 else -1
    a = abs(m)
    return LaurentPoly({(a - 1 - 2 * j,): s for j in range(a)})


def _atom_poly(atom: tuple) -> LaurentPoly:
    kind = atom[0]
    if kind == "q":
        return _qint_poly(atom[1])
    if kind == "u":
        return LaurentPoly.var(atom[1]) - LaurentPoly.var(atom[2])
    return atom[1]


def _atom_str(atom: tuple) -> str:
    kind = atom[0]
    if kind == "q":
        return f"[{atom[1]}]"
    if kind == "u":
        return f"(u{atom[1]} - u{atom[2]})"
    return f"({format_poly(atom[1])})"


def _atom_key(atom: tuple):
    if atom[0] == "p":
        n = atom[1].nvars()
        return ("p", tuple(sorted((_pad(e, n), c) for e, c in atom[1].terms.items())))
    return atom


def _normalize_poly_atom(p: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    """Split ``p`` into a unit monomial and a normalized atom polynomial.

    The atom has minimal exponent zero in every variable and a positive
    leading coefficient; recognized shapes become ``q`` or ``u`` atoms.
    """
    n = p.nvars()
    lows = tuple(min(_pad(e, n)[i] for e in p.terms) for i in range(n))
    shifted = p.shift(tuple(-x for x in lows))
    lead = shifted.terms[_strip(max(_pad(e, n) for e in shifted.terms))]
    sign = -1 if lead < 0 else 1
    atom_poly = shifted.scale(sign)
    return LaurentPoly.monomial(lows, sign), atom_poly


class FieldElem:
    """``num / prod(den)`` with ``den`` a sorted tuple of atoms."""

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: tuple = ()):
        self.num = num
        self.den = den

    # constructors
    @classmethod
    def from_int(cls, c) -> "FieldElem":
        return cls(LaurentPoly.const(c))

    @classmethod
    def from_poly(cls, p: LaurentPoly) -> "FieldElem":
        return cls(p)

    @classmethod
    def v(cls, power: int = 1) -> "FieldElem":
        return cls(LaurentPoly.var(0, power))

    @classmethod
    def u(cls, i: int, power: int = 1) -> "FieldElem":
        return cls(LaurentPoly.var(i, power))

    @classmethod
    def make(cls, num: LaurentPoly, atoms: Iterable[tuple]) -> "FieldElem":
        """Build ``num / prod(atoms)`` and cancel what divides exactly."""
        den: list = []
        for a in atoms:
            if a[0] == "q":
                m = a[1]
                if m == 0:
                    raise ZeroDivisionError("[0] is zero")
                if m < 0:
                    num = -num
                    a = ("q", -m)
            elif a[0] == "u":
                i, j = a[1], a[2]
                if i == j:
                    raise ZeroDivisionError("u_i - u_i is zero")
                if i > j:
                    num = -num
                    a = ("u", j, i)
            else:
                unit, ap = _normalize_poly_atom(a[1])
                num = num * (unit ** -1)
                c = ap.constant_value()
                if c is not None:
                    num = num.scale(Fraction(1, c))
                    continue
                a = _recognize_atom(ap) or ("p", ap)
                if a[0] == "q":
                    # ap is v^(m-1) * [m]
                    num = num * LaurentPoly.var(0, 1 - a[1])
            den.append(a)
        return cls(num, ())._with_den(den)

    def _with_den(self, den: list) -> "FieldElem":
        num = self.num
        if num.is_zero():
            return FieldElem(num, ())
        kept = []
        for a in den:
            qt = num.exact_divide(_atom_poly(a))
            if qt is None:
                kept.append(a)
            else:
                num = qt
        kept.sort(key=_atom_key)
        return FieldElem(num, tuple(kept))

    # predicates
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return not self.den

    def denominator_poly(self) -> LaurentPoly:
        out = LaurentPoly.const(1)
        for a in self.den:
            out = out * _atom_poly(a)
        return out

    # arithmetic
    def __add__(self, other) -> "FieldElem":
        if not isinstance(other, FieldElem):
            other = as_field(other)
        if not self.den and not other.den:
            return FieldElem(self.num + other.num)
        if self.den == other.den:
            return FieldElem(self.num + other.num, ())._with_den(list(self.den))
        common, fa, fb = _merge_dens(self.den, other.den)
        num = self.num * fa + other.num * fb
        return FieldElem(num, ())._with_den(common)

    __radd__ = __add__

    def __neg__(self) -> "FieldElem":
        return FieldElem(-self.num, self.den)

    def __sub__(self, other) -> "FieldElem":
        if not isinstance(other, FieldElem):
            other = as_field(other)
        return self + (-other)

    def __rsub__(self, other) -> "FieldElem":
        return as_field(other) - self

    def __mul__(self, other) -> "FieldElem":
        if not isinstance(other, FieldElem):
            if not isinstance(other, (int, Fraction, LaurentPoly)):
                return NotImplemented  # lets matrices scale themselves
            other = as_field(other)
        if not self.den and not other.den:
            return FieldElem(self.num * other.num)
        num = self.num * other.num
        if num.is_zero():
            return FieldElem(num)
        return FieldElem(num, ())._with_den(list(self.den) + list(other.den))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        num = self.denominator_poly()
        p = self.num
        if p.is_monomial():
            (e, c), = p.terms.items()
            inv = LaurentPoly.monomial(tuple(-x for x in e), 1)
            return FieldElem(num * inv, ()).__mul__(FieldElem(LaurentPoly.const(Fraction(1, c))))
        return FieldElem.make(num, [("p", p)])

    def __truediv__(self, other) -> "FieldElem":
        if not isinstance(other, FieldElem):
            other = as_field(other)
        return self * other.inverse()

    def __rtruediv__(self, other) -> "FieldElem":
        return as_field(other) * self.inverse()

    def __pow__(self, k: int) -> "FieldElem":
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldElem):
            try:
                other = as_field(other)
            except TypeError:
                return NotImplemented
        if self.den == other.den:
            return self.num == other.num
        return (self.num * other.denominator_poly() - other.num * self.denominator_poly()).is_zero()

    __hash__ = None  # equality is semantic, so no structural hash

    # substitutions
    def at_v1(self) -> "FieldElem":
        """Substitute v -> 1, keeping the u-variables symbolic."""
        num = self.num.substitute_v(1)
        atoms = []
        for a in self.den:
            if a[0] == "q":
                num = num.scale(Fraction(1, a[1]))
            elif a[0] == "u":
                atoms.append(a)
            else:
                pa = a[1].substitute_v(1)
                if pa.is_zero():
                    raise DenominatorVanishes(f"atom {_atom_str(a)} vanishes at v=1")
                atoms.append(("p", pa))
        return FieldElem.make(num, atoms)

    def specialize(self, v, u: Sequence = (), p: int | None = None):
        values = [v, *u]
        den = 1
        for a in self.den:
            d = _atom_poly(a).evaluate(values, p)
            if d == 0:
                raise DenominatorVanishes(f"atom {_atom_str(a)} vanishes at the chosen point")
            den = den * d % p if p is not None else den * d
        top = self.num.evaluate(values, p)
        if p is not None:
            return top * pow(den, -1, p) % p
        return Fraction(top) / den

    def __str__(self) -> str:
        top = format_poly(self.num)
        if not self.den:
            return top
        if len(self.num.terms) > 1:
            top = f"({top})"
        return f"{top} / " + "*".join(_atom_str(a) for a in self.den)

    def __repr__(self) -> str:
        return f"FieldElem({self})"


def _merge_dens(a: tuple, b: tuple):
    """Common multiple of two atom multisets and the cofactors for each side."""
    ca: dict = {}
    cb: dict = {}
    reps: dict = {}
    for x in a:
        k = _atom_key(x)
        ca[k] = ca.get(k, 0) + 1
        reps[k] = x
    for x in b:
        k = _atom_key(x)
        cb[k] = cb.get(k, 0) + 1
        reps[k] = x
    common: list = []
    fa = LaurentPoly.const(1)
    fb = LaurentPoly.const(1)
    for k, x in reps.items():
        m = max(ca.get(k, 0), cb.get(k, 0))
        common.extend([x] * m)
        poly = _atom_poly(x)
        for _ in range(m - ca.get(k, 0)):
            fa = fa * poly
        for _ in range(m - cb.get(k, 0)):
            fb = fb * poly
    return common, fa, fb


def as_field(x) -> FieldElem:
    if isinstance(x, FieldElem):
        return x
    if isinstance(x, LaurentPoly):
        return FieldElem(x)
    if isinstance(x, (int, Fraction)):
        return FieldElem(LaurentPoly.const(x))
    raise TypeError(f"cannot convert {type(x).__name__} to FieldElem")


ZERO = FieldElem(LaurentPoly())
ONE = FieldElem(LaurentPoly.const(1))


# Quantum numbers ----------------------------------------------------------

def quantum_integer(a: int) -> FieldElem:
    return FieldElem(_qint_poly(a))


def quantum_factorial(b: int) -> FieldElem:
    if b < 0:
        raise ValueError("factorial of a negative integer")
    out = LaurentPoly.const(1)
    for i in range(1, b + 1):
        out = out * _qint_poly(i)
    return FieldElem(out)


def quantum_binomial(a: int, b: int) -> FieldElem:
    if b < 0:
        raise ValueError("quantum_binomial needs b >= 0")
    top = LaurentPoly.const(1)
    for i in range(b):
        top = top * _qint_poly(a - i)
    return FieldElem.make(top, [("q", i) for i in range(1, b + 1)])


def inverse_quantum_factorial(b: int) -> FieldElem:
    return FieldElem.make(LaurentPoly.const(1), [("q", i) for i in range(2, b + 1)])


def inverse_u_difference(i: int, j: int) -> FieldElem:
    return FieldElem.make(LaurentPoly.const(1), [("u", i, j)])


def elementary_symmetric(k: int, args: Sequence) -> FieldElem:
    args = [as_field(a) for a in args]
    if k < 0 or k > len(args):
        return ZERO
    # e_j of the prefix, updated one argument at a time
    e = [ONE] + [ZERO] * k
    for x in args:
        for j in range(k, 0, -1):
            e[j] = e[j] + x * e[j - 1]
    return e[k]


# Parsing ------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(v|u\d+)|(\[-?\d+\])|(\^)|(\*)|(/)|(\+)|(-)|(\()|(\)))")


def _tokenize(text: str) -> list:
    pos = 0
    toks = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ScalarSyntaxError(f"unexpected character at offset {pos}: {text[pos:pos + 10]!r}")
        kinds = ("int", "var", "qint", "^", "*", "/", "+", "-", "(", ")")
        for kind, val in zip(kinds, m.groups()):
            if val is not None:
                toks.append((kind, val, m.start()))
                break
        pos = m.end()
    toks.append(("end", "", pos))
    return toks


class _ScalarParser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            raise ScalarSyntaxError(f"expected {kind} at offset {tok[2]}, found {tok[1] or 'end of input'!r}")
        self.i += 1
        return tok

    def parse(self) -> FieldElem:
        x = self.expr()
        self.take("end")
        return x

    def expr(self) -> FieldElem:
        sign = 1
        if self.peek()[0] in "+-":
            sign = -1 if self.take()[0] == "-" else 1
        x = self.term()
        x = -x if sign < 0 else x
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            y = self.term()
            x = x + y if op == "+" else x - y
        return x

    def term(self) -> FieldElem:
        # everything after '/' in a product is the denominator: "a / b*c" = a/(b*c)
        x = self.factor()
        while self.peek()[0] == "*":
            self.take()
            x = x * self.factor()
        if self.peek()[0] == "/":
            self.take()
            x = x / self.factor()
            while self.peek()[0] == "*":
                self.take()
                x = x / self.factor()
        return x

    def factor(self) -> FieldElem:
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            neg = False
            if self.peek()[0] == "-":
                self.take()
                neg = True
            k = int(self.take("int")[1])
            return base ** (-k if neg else k)
        return base

    def atom(self) -> FieldElem:
        kind, val, pos = self.take()
        if kind == "int":
            return FieldElem.from_int(int(val))
        if kind == "var":
            return FieldElem.v() if val == "v" else FieldElem.u(int(val[1:]))
        if kind == "qint":
            return quantum_integer(int(val[1:-1]))
        if kind == "(":
            x = self.expr()
            self.take(")")
            return x
        raise ScalarSyntaxError(f"unexpected {val or 'end of input'!r} at offset {pos}")


def _recognize_atom(ap: LaurentPoly):
    """Name a normalized atom polynomial as ``[m]`` or ``u_i - u_j`` when it is one."""
    if ap.nvars() <= 1:
        exps = sorted(e[0] if e else 0 for e in ap.terms)
        m = len(exps)
        if all(ap.terms[_strip((x,))] == 1 for x in exps) and exps == list(range(0, 2 * m - 1, 2)):
            return ("q", m)
    if len(ap.terms) == 2:
        items = sorted(ap.terms.items(), key=lambda t: t[1])
        (e1, c1), (e2, c2) = items
        if c1 == -1 and c2 == 1:
            def single(e):
                nz = [(i, x) for i, x in enumerate(e) if x]
                return nz[0][0] if len(nz) == 1 and nz[0][1] == 1 and nz[0][0] > 0 else None
            i, j = single(e2), single(e1)
            if i is not None and j is not None:
                return ("u", i, j)
    return None


def parse_scalar(text: str) -> FieldElem:
    """Parse the canonical scalar syntax, e.g. ``3*v^-2*u1^2 + u2`` or ``(v + 1) / [2]``."""
    return _ScalarParser(text).parse()


def format_scalar(x) -> str:
    return str(as_field(x))
