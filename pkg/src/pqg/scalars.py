"""Exact scalars.

Every coefficient in the toolkit is a :class:`Scalar`: a finite sum

    c * sqrt(m) * F(l+1)^e1 * F(r-2)^e2 * ...

with ``c`` rational, ``m`` a squarefree integer (``m < 0`` stands for
``i*sqrt(|m|)``) and the ``F(...)`` factors invertible positive symbols with
integer or half-integer exponents.  The representation is a normal form, so
equality is structural.

Square roots of rationals are adjoined formally.  Symbols carry a lattice
argument relative to a base (``l`` for the left multiplier, ``r`` for the
right one, or an absolute integer) and can be shifted by colour
translations.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping

import sympy


class ScalarError(ValueError):
    """Base class for scalar arithmetic failures."""


class DegenerateRadicandError(ScalarError):
    pass


class UnsupportedRadicandError(ScalarError):
    pass


class UnknownColorError(ScalarError):
    pass


class ScalarParseError(ScalarError):
    pass


class NotInvertibleError(ZeroDivisionError):
    pass


# --------------------------------------------------------------------------
# radicals

@lru_cache(maxsize=None)
def _split_square(n: int) -> tuple[int, int]:
    """Return ``(s, m)`` with ``n == s*s*m`` and ``m`` squarefree (sign kept)."""
    if n == 0:
        return 0, 0
    sign = -1 if n < 0 else 1
    s, m = 1, 1
    for p, k in sympy.factorint(abs(n)).items():
        s *= p ** (k // 2)
        if k % 2:
            m *= p
    # factorint may hand back gmpy2 integers; keep plain ints so Fractions stay Fractions
    return int(s), int(sign * m)


@lru_cache(maxsize=None)
def _rad_mul(a: int, b: int) -> tuple[int, int]:
    """sqrt(a)*sqrt(b) = coef*sqrt(key) for squarefree a, b."""
    if a == 1:
        return 1, b
    if b == 1:
        return 1, a
    coef = -1 if (a < 0 and b < 0) else 1
    s, m = _split_square(abs(a) * abs(b))
    coef *= s
    if (a < 0) != (b < 0):
        m = -m
    return coef, m


def _rad_generators(m: int) -> set[int]:
    gens = {int(p) for p in sympy.factorint(abs(m))} if abs(m) > 1 else set()
    if m < 0:
        gens.add(-1)
    return gens


# --------------------------------------------------------------------------
# symbols

@dataclass(frozen=True, order=True)
class Symbol:
    """A shift-function symbol ``name(base+offset)``.

    ``base`` is ``"l"`` (left multiplier), ``"r"`` (right multiplier) or
    ``""`` for an absolute lattice point ``offset``.
    """

    name: str
    base: str
    offset: int

    def __str__(self) -> str:
        if not self.base:
            return f"{self.name}({self.offset})"
        if self.offset == 0:
            return f"{self.name}({self.base})"
        sign = "+" if self.offset > 0 else "-"
        return f"{self.name}({self.base}{sign}{abs(self.offset)})"


Monomial = tuple  # tuple[tuple[Symbol, Fraction], ...] sorted by symbol
_ONE_MONO: Monomial = ()


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    acc = dict(a)
    for s, e in b:
        acc[s] = acc.get(s, 0) + e
    return tuple(sorted((s, Fraction(e)) for s, e in acc.items() if e != 0))


def _mono_pow(a: Monomial, k) -> Monomial:
    return tuple((s, e * k) for s, e in a)


def _fmt_exp(e: Fraction) -> str:
    if e.denominator == 1:
        return str(e.numerator)
    return f"({e.numerator}/{e.denominator})"


# --------------------------------------------------------------------------
# the scalar type

def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to an exact rational")


class Scalar:
    """Immutable exact scalar in normal form."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, value=0):
        if isinstance(value, Scalar):
            self._terms = value._terms
        elif isinstance(value, (int, Fraction)):
            v = _frac(value)
            self._terms = {(_ONE_MONO, 1): v} if v else {}
        elif isinstance(value, str):
            self._terms = parse_scalar(value)._terms
        else:
            raise TypeError(f"cannot build a Scalar from {type(value).__name__}")
        self._hash = None

    @classmethod
    def _from_terms(cls, terms: dict) -> "Scalar":
        obj = cls.__new__(cls)
        obj._terms = {k: v for k, v in terms.items() if v}
        obj._hash = None
        return obj

    @classmethod
    def radical(cls, m: int, coef=1) -> "Scalar":
        """``coef * sqrt(m)`` for an integer ``m``."""
        s, key = _split_square(m)
        if key == 0:
            return cls(0)
        return cls._from_terms({(_ONE_MONO, key): _frac(coef) * s})

    @classmethod
    def symbol(cls, name: str, base: str = "", offset: int = 0, exponent=1) -> "Scalar":
        mono = ((Symbol(name, base, offset), Fraction(exponent)),)
        return cls._from_terms({(mono, 1): Fraction(1)})

    # -- inspection ----------------------------------------------------------
    def terms(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_rational(self) -> bool:
        return all(k == (_ONE_MONO, 1) for k in self._terms)

    def to_fraction(self) -> Fraction:
        if not self._terms:
            return Fraction(0)
        if not self.is_rational():
            raise ScalarError(f"{self} is not rational")
        return self._terms[(_ONE_MONO, 1)]

    def has_symbols(self) -> bool:
        return any(mono for mono, _ in self._terms)

    def radicals(self) -> set[int]:
        return {rad for _, rad in self._terms}

    def symbols(self) -> set[Symbol]:
        return {s for mono, _ in self._terms for s, _ in mono}

    def is_real(self) -> bool:
        return all(rad > 0 for _, rad in self._terms)

    # -- arithmetic ----------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "Scalar | None":
        if isinstance(other, Scalar):
            return other
        if isinstance(other, (int, Fraction)):
            return Scalar(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o._terms:
            return self
        if not self._terms:
            return o
        acc = dict(self._terms)
        for k, v in o._terms.items():
            acc[k] = acc.get(k, 0) + v
        return Scalar._from_terms(acc)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._from_terms({k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            f = _frac(other)
            if not f:
                return Scalar(0)
            return Scalar._from_terms({k: v * f for k, v in self._terms.items()})
        if not isinstance(other, Scalar):
            return NotImplemented
        st, ot = self._terms, other._terms
        if not st or not ot:
            return Scalar(0)
        if len(st) == 1 and len(ot) == 1:
            # single terms dominate in practice; skip the generic accumulation
            ((ma, ra), ca), = st.items()
            ((mb, rb), cb), = ot.items()
            if ra == 1:
                c, r = 1, rb
            elif rb == 1:
                c, r = 1, ra
            else:
                c, r = _rad_mul(ra, rb)
            mono = ma if not mb else (mb if not ma else _mono_mul(ma, mb))
            obj = Scalar.__new__(Scalar)
            obj._terms = {(mono, r): ca * cb * c if c != 1 else ca * cb}
            obj._hash = None
            return obj
        acc: dict = {}
        for (ma, ra), ca in self._terms.items():
            for (mb, rb), cb in other._terms.items():
                c, r = _rad_mul(ra, rb)
                key = (_mono_mul(ma, mb), r)
                acc[key] = acc.get(key, 0) + ca * cb * c
        return Scalar._from_terms(acc)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if not self._terms:
            raise NotInvertibleError("division by zero scalar")
        monos = {mono for mono, _ in self._terms}
        if len(monos) != 1:
            raise NotInvertibleError(
                f"{self} mixes several symbol monomials and is not invertible "
                "in the declared shift-function field")
        (mono,) = monos
        tower = Scalar._from_terms({(_ONE_MONO, r): c for (_, r), c in self._terms.items()})
        inv = _tower_inverse(tower)
        if not mono:
            return inv
        return inv * Scalar._from_terms({(_mono_pow(mono, -1), 1): Fraction(1)})

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_rational():
            f = o.to_fraction()
            if not f:
                raise NotInvertibleError("division by zero scalar")
            return self * (1 / f)
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = Scalar(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "Scalar":
        """Complex conjugation; symbols are declared real."""
        return Scalar._from_terms({(m, r): (-c if r < 0 else c) for (m, r), c in self._terms.items()})

    star = conjugate

    # -- comparison ----------------------------------------------------------
    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._terms == o._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- numerics ------------------------------------------------------------
    def approx(self, digits: int = 50):
        """mpmath complex approximation (symbol-free values only)."""
        import mpmath
        if self.has_symbols():
            raise ScalarError("cannot approximate a value that still carries symbols")
        with mpmath.workdps(digits):
            total = mpmath.mpc(0)
            for (_, r), c in self._terms.items():
                root = mpmath.sqrt(abs(r))
                if r < 0:
                    root = root * 1j
                total += mpmath.mpf(c.numerator) / c.denominator * root
            return total

    def sign(self) -> int:
        """Sign of a real value; exact for rationals, certified numerically otherwise."""
        if not self._terms:
            return 0
        if self.is_rational():
            return 1 if self.to_fraction() > 0 else -1
        if not self.is_real():
            raise ScalarError(f"{self} is not real")
        if self.has_symbols():
            mono_parts = {mono for mono, _ in self._terms}
            if len(mono_parts) == 1:
                tower = Scalar._from_terms({(_ONE_MONO, r): c for (_, r), c in self._terms.items()})
                return tower.sign()
            raise ScalarError("sign of a symbolic sum is undetermined")
        import mpmath
        value = self.approx(60).real
        if abs(value) < mpmath.mpf(10) ** -30:
            raise ScalarError(f"cannot certify the sign of {self}")
        return 1 if value > 0 else -1

    def __float__(self):
        return float(self.approx(30).real)

    # -- shift-function structure -------------------------------------------
    def shifted(self, deltas: Mapping[str, int]) -> "Scalar":
        """Translate symbol arguments: ``F(l+k) -> F(l+k+deltas['l'])``."""
        acc: dict = {}
        for (mono, r), c in self._terms.items():
            new = tuple(sorted((Symbol(s.name, s.base, s.offset + deltas.get(s.base, 0)), e)
                               for s, e in mono))
            acc[(new, r)] = acc.get((new, r), 0) + c
        return Scalar._from_terms(acc)

    def evaluate(self, bindings: Mapping[str, int],
                 values: Callable[[str, int], "Scalar"]) -> "Scalar":
        """Substitute lattice points for the bases and concrete values for symbols."""
        total = Scalar(0)
        for (mono, r), c in self._terms.items():
            term = Scalar._from_terms({(_ONE_MONO, r): c})
            for s, e in mono:
                arg = s.offset + (bindings[s.base] if s.base else 0)
                v = Scalar(values(s.name, arg))
                if e.denominator == 1:
                    term = term * v ** int(e)
                elif e.denominator == 2:
                    term = term * sqrt(v) ** int(e.numerator)
                else:
                    raise UnsupportedRadicandError(f"exponent {e} is not supported")
            total = total + term
        return total

    # -- printing ------------------------------------------------------------
    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"Scalar('{format_scalar(self)}')"


def _sort_key(item):
    (mono, r), _ = item
    return (len(mono), tuple((s.name, s.base, s.offset, e) for s, e in mono), abs(r), r)


def format_scalar(x: Scalar) -> str:
    if not x._terms:
        return "0"
    pieces = []
    for (mono, r), c in sorted(x._terms.items(), key=_sort_key):
        parts = []
        if r != 1:
            parts.append(f"sqrt({r})")
        for s, e in mono:
            parts.append(str(s) if e == 1 else f"{s}^{_fmt_exp(e)}")
        if not parts:
            text = str(c)
        elif c == 1:
            text = "*".join(parts)
        elif c == -1:
            text = "-" + "*".join(parts)
        else:
            text = f"{c}*" + "*".join(parts)
        pieces.append(text)
    out = pieces[0]
    for p in pieces[1:]:
        out += p if p.startswith("-") else "+" + p
    return out


def _tower_inverse(x: Scalar) -> Scalar:
    if x.is_rational():
        return Scalar(1 / x.to_fraction())
    gens = set()
    for r in x.radicals():
        gens |= _rad_generators(r)
    g = max(gens)
    # the Galois automorphism negating sqrt(g)
    def flips(r: int) -> bool:
        return r < 0 if g == -1 else (abs(r) % g == 0)
    conj = Scalar._from_terms({(m, r): (-c if flips(r) else c) for (m, r), c in x._terms.items()})
    return conj * _tower_inverse(x * conj)


def sqrt(x) -> Scalar:
    """Square root within the tower.

    Rationals get a formal radical; symbol monomials with a positive
    rational coefficient halve their exponents.  Anything else is rejected.
    """
    x = Scalar(x)
    if not x:
        return Scalar(0)
    if x.is_rational():
        f = x.to_fraction()
        return Scalar.radical(f.numerator * f.denominator, Fraction(1, f.denominator))
    if len(x._terms) == 1:
        (mono, r), c = next(iter(x._terms.items()))
        if r == 1:
            return sqrt(c) * Scalar._from_terms({(_mono_pow(mono, Fraction(1, 2)), 1): Fraction(1)})
    raise UnsupportedRadicandError(f"no square root of {x} in the supported tower")


def gaussian_i() -> Scalar:
    return Scalar.radical(-1)


# --------------------------------------------------------------------------
# field descriptors

@dataclass(frozen=True)
class SymbolDecl:
    name: str
    positive: bool = True
    invertible: bool = True


@dataclass(frozen=True)
class FieldSpec:
    """Description of the coefficient field a computation lives in.

    ``generators`` lists the radical generators (primes, and ``-1`` for i);
    ``colors`` maps each colour to the translation it applies to symbol
    arguments, and must be closed under inversion.
    """

    kind: str = "rational"
    generators: frozenset = frozenset()
    symbols: tuple = ()
    colors: tuple = ()

    def __post_init__(self):
        if self.kind not in ("rational", "sqrt-tower", "shift-function"):
            raise ScalarError(f"unknown field kind {self.kind!r}")
        shifts = dict(self.colors)
        for c, t in shifts.items():
            if -t not in shifts.values():
                raise ScalarError(f"colour {c!r} has no inverse colour")

    def contains(self, x: Scalar) -> bool:
        gens = set()
        for r in Scalar(x).radicals():
            gens |= _rad_generators(r)
        if not gens <= set(self.generators):
            return False
        names = {s.name for s in Scalar(x).symbols()}
        return names <= {d.name for d in self.symbols}

    def color_shift(self, color: str) -> int:
        shifts = dict(self.colors)
        if color not in shifts:
            raise UnknownColorError(f"colour {color!r} is not in the declared group")
        return shifts[color]

    def inverse_color(self, color: str) -> str:
        t = self.color_shift(color)
        for c, s in self.colors:
            if s == -t:
                return c
        raise UnknownColorError(color)

    def shift(self, x: Scalar, color: str, side: str | None = None) -> Scalar:
        t = self.color_shift(color)
        if self.kind != "shift-function":
            raise ScalarError("shifts need a shift-function field")
        if side is None:
            return Scalar(x).shifted({"l": t, "r": t})
        if side not in ("l", "r"):
            raise ScalarError(f"side must be 'l' or 'r', got {side!r}")
        return Scalar(x).shifted({side: t})


RATIONALS = FieldSpec()


def adjoin_sqrt(fld: FieldSpec, x) -> FieldSpec:
    """Extend ``fld`` so that it contains a square root of ``x``.

    Returns ``fld`` unchanged when the root already lives there.
    """
    x = Scalar(x)
    if not x:
        raise DegenerateRadicandError("cannot adjoin the square root of 0")
    s = sqrt(x)
    if fld.contains(s):
        return fld
    gens = set(fld.generators)
    for r in s.radicals():
        gens |= _rad_generators(r)
    kind = fld.kind if fld.kind == "shift-function" else "sqrt-tower"
    return FieldSpec(kind, frozenset(gens), fld.symbols, fld.colors)


def shift(x, color: str, fld: FieldSpec, side: str | None = None) -> Scalar:
    """Apply the colour translation of ``fld`` to every symbol argument."""
    return fld.shift(Scalar(x), color, side)


def podles_shift_field(names: Iterable[str] = ("F",)) -> FieldSpec:
    return FieldSpec("shift-function", frozenset(),
                     tuple(SymbolDecl(n) for n in names), (("+", 1), ("-", -1)))


# --------------------------------------------------------------------------
# literal grammar

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    if "." in text:
        raise ScalarParseError(f"decimal literal {text!r} is not exact; write p/q")
    out, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ScalarParseError(f"unexpected character at {pos} in {text!r}")
        kind = m.lastgroup
        out.append((kind, m.group(kind)))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, value=None):
        if self.i >= len(self.toks):
            return None
        tok = self.toks[self.i]
        if value is not None and tok[1] != value:
            return None
        return tok

    def take(self, value=None):
        tok = self.peek(value)
        if tok is None:
            raise ScalarParseError(f"expected {value or 'token'} in {self.text!r}")
        self.i += 1
        return tok

    def parse(self) -> Scalar:
        if not self.toks:
            raise ScalarParseError("empty scalar literal")
        x = self.expr()
        if self.i != len(self.toks):
            raise ScalarParseError(f"trailing input in {self.text!r}")
        return x

    def expr(self) -> Scalar:
        total = self.term()
        while self.peek("+") or self.peek("-"):
            op = self.take()[1]
            t = self.term()
            total = total + t if op == "+" else total - t
        return total

    def term(self) -> Scalar:
        neg = False
        while self.peek("-") or self.peek("+"):
            if self.take()[1] == "-":
                neg = not neg
        x = self.factor()
        while self.peek("*"):
            self.take("*")
            x = x * self.factor()
        return -x if neg else x

    def rational(self) -> Fraction:
        neg = False
        if self.peek("-"):
            self.take("-")
            neg = True
        num = self.take()
        if num[0] != "num":
            raise ScalarParseError(f"expected an integer in {self.text!r}")
        value = Fraction(int(num[1]))
        if self.peek("/"):
            self.take("/")
            den = self.take()
            if den[0] != "num" or int(den[1]) == 0:
                raise ScalarParseError(f"bad denominator in {self.text!r}")
            value /= int(den[1])
        return -value if neg else value

    def exponent(self) -> Fraction:
        if self.peek("("):
            self.take("(")
            e = self.rational()
            self.take(")")
            return e
        return self.rational()

    def factor(self) -> Scalar:
        tok = self.peek()
        if tok is None:
            raise ScalarParseError(f"unexpected end of {self.text!r}")
        kind, value = tok
        if kind == "num":
            return Scalar(self.rational())
        if value == "(":
            self.take("(")
            x = self.expr()
            self.take(")")
            return x
        if kind == "name":
            self.take()
            self.take("(")
            if value == "sqrt":
                arg = self.rational()
                self.take(")")
                return sqrt(arg)
            sym = self.symbol_arg(value)
            self.take(")")
            exp = Fraction(1)
            if self.peek("^"):
                self.take("^")
                exp = self.exponent()
            if exp.denominator not in (1, 2):
                raise ScalarParseError(f"exponent {exp} not supported")
            return Scalar._from_terms({(((sym, exp),), 1): Fraction(1)})
        raise ScalarParseError(f"unexpected token {value!r} in {self.text!r}")

    def symbol_arg(self, name: str) -> Symbol:
        tok = self.peek()
        if tok and tok[0] == "name":
            base = self.take()[1]
            if base not in ("l", "r"):
                raise ScalarParseError(f"symbol base must be l or r, got {base!r}")
            offset = 0
            if self.peek("+") or self.peek("-"):
                sign = 1 if self.take()[1] == "+" else -1
                n = self.take()
                if n[0] != "num":
                    raise ScalarParseError(f"bad offset in {self.text!r}")
                offset = sign * int(n[1])
            return Symbol(name, base, offset)
        value = self.rational()
        if value.denominator != 1:
            raise ScalarParseError("symbol arguments must be integers")
        return Symbol(name, "", int(value))


def parse_scalar(text: str) -> Scalar:
    """Parse a literal such as ``"3/2*sqrt(5)-F(l+1)^(1/2)"``."""
    if not isinstance(text, str):
        raise ScalarParseError(f"scalar literals must be strings, got {type(text).__name__}")
    return _Parser(text).parse()


def as_scalar(value) -> Scalar:
    """Coerce ints, Fractions, literals and Scalars; floats are refused."""
    if isinstance(value, float):
        raise ScalarParseError("floating point values are not exact")
    if isinstance(value, bool):
        raise ScalarParseError("booleans are not scalars")
    return Scalar(value)


ZERO = Scalar(0)
ONE = Scalar(1)


# --------------------------------------------------------------------------
# sympy bridge (used for characteristic polynomials)

def to_sympy(x):
    import sympy
    x = Scalar(x)
    if x.has_symbols():
        raise ScalarError("symbolic scalars have no sympy image here")
    total = sympy.Integer(0)
    for (_, r), c in x._terms.items():
        coef = sympy.Rational(c.numerator, c.denominator)
        rad = sympy.sqrt(r) if r > 0 else sympy.I * sympy.sqrt(-r)
        total += coef * rad
    return total


def from_sympy(expr) -> Scalar:
    """Convert a sympy number built from rationals, ``I`` and square roots."""
    import sympy
    expr = sympy.nsimplify(sympy.expand(expr)) if not expr.is_Rational else expr
    if expr.is_Rational:
        return Scalar(Fraction(int(expr.p), int(expr.q)))
    if expr is sympy.I:
        return gaussian_i()
    if expr.is_Add:
        out = Scalar(0)
        for a in expr.args:
            out = out + from_sympy(a)
        return out
    if expr.is_Mul:
        out = Scalar(1)
        for a in expr.args:
            out = out * from_sympy(a)
        return out
    if expr.is_Pow and expr.exp == sympy.Rational(1, 2) and expr.base.is_Rational:
        return sqrt(from_sympy(expr.base))
    if expr.is_Pow and expr.exp == sympy.Rational(-1, 2) and expr.base.is_Rational:
        return sqrt(from_sympy(expr.base)).inverse()
    if expr.is_Pow and expr.exp.is_Integer:
        return from_sympy(expr.base) ** int(expr.exp)
    raise ScalarError(f"cannot represent {expr} in the scalar tower")
