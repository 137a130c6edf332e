"""Generators and relations for the algebra of a reciprocal walk.

Elements are noncommutative polynomials in letters ``u[e,f]``, ``u*[e,f]``
and ``1(v|w)``; every letter carries a square grade and products of
non-composable letters vanish.  Ideal membership is decided per grade
block and degree bound by exact row reduction, and every positive answer
comes with a witness ``x = Σ c · P · r · Q`` that can be replayed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping

from . import linalg
from .grading import BigradedSpace, Square
from .partial_hopf import PartialHopfData, SchemaError
from .report import FAIL, PASS, SKIPPED, UNKNOWN, VerificationReport, parallel_map
from .scalars import Scalar, ScalarError, _split_square, as_scalar, sqrt
from .walks import ColoredWalk, ReciprocalWalk, color_walk, podles_walk, walk_from_json, walk_to_json

CERTIFIED = "certified"
FAILED = "failed"
BOUNDARY = "boundary-skipped"
UNKNOWN_AT_D = "unknown-at-degree-d"

_STATUS_TO_REPORT = {CERTIFIED: PASS, FAILED: FAIL, BOUNDARY: SKIPPED, UNKNOWN_AT_D: UNKNOWN}


class PresentationError(ValueError):
    pass


# --------------------------------------------------------------------------
# letters, words and polynomials

def U(e, f):
    return ("u", e, f)


def Ustar(e, f):
    return ("s", e, f)


def One(v, w):
    return ("1", v, w)


def letter_str(letter) -> str:
    kind, a, b = letter
    if kind == "1":
        return f"1({a}|{b})"
    return f"u{'*' if kind == 's' else ''}[{a},{b}]"


def word_str(word) -> str:
    return "·".join(letter_str(x) for x in word) if word else "id"


def parse_letter(text: str):
    text = text.strip()
    if text.startswith("1(") and text.endswith(")") and "|" in text:
        a, b = text[2:-1].split("|", 1)
        return ("1", a, b)
    for prefix, kind in (("u*[", "s"), ("u[", "u")):
        if text.startswith(prefix) and text.endswith("]") and "," in text:
            a, b = text[len(prefix):-1].split(",", 1)
            return (kind, a, b)
    raise PresentationError(f"cannot parse letter {text!r}")


def word_length(word) -> int:
    return sum(1 for x in word if x[0] != "1")


class NCPoly(dict):
    """Finite linear combination ``{word: Scalar}`` of graded words."""

    def clean(self) -> "NCPoly":
        return NCPoly({w: c for w, c in self.items() if c})

    def __add__(self, other):
        out = NCPoly(self)
        for w, c in other.items():
            v = out.get(w, Scalar(0)) + c
            if v:
                out[w] = v
            else:
                out.pop(w, None)
        return out

    def __neg__(self):
        return NCPoly({w: -c for w, c in self.items()})

    def __sub__(self, other):
        return self + (-NCPoly(other))

    def scaled(self, c) -> "NCPoly":
        c = as_scalar(c)
        if not c:
            return NCPoly()
        return NCPoly({w: c * x for w, x in self.items()})

    @property
    def degree(self) -> int:
        return max((word_length(w) for w in self), default=0)

    def __str__(self) -> str:
        if not self:
            return "0"
        return " + ".join(f"({c})*{word_str(w)}" for w, c in sorted(self.items(), key=lambda kv: word_str(kv[0])))

    def to_json(self) -> list:
        return [{"word": [letter_str(x) for x in w], "coef": str(c)}
                for w, c in sorted(self.items(), key=lambda kv: word_str(kv[0]))]

    @classmethod
    def from_json(cls, raw, path="") -> "NCPoly":
        out = cls()
        for n, term in enumerate(raw):
            try:
                w = tuple(parse_letter(x) for x in term["word"])
                out = out + cls({w: as_scalar(term["coef"])})
            except (KeyError, TypeError, PresentationError, ScalarError, ValueError) as exc:
                raise SchemaError(f"{path}/{n}", str(exc)) from None
        return out


def _tadd(t: dict, key, c):
    v = t.get(key)
    v = c if v is None else v + c
    if v:
        t[key] = v
    else:
        t.pop(key, None)


# --------------------------------------------------------------------------
# relations and witnesses

@dataclass
class Relation:
    name: str
    kind: str
    poly: NCPoly
    grade: Square
    assertable: bool
    anchor: str | None = None
    params: tuple = ()

    def to_json(self) -> dict:
        return {"name": self.name, "kind": self.kind, "grade": list(self.grade),
                "assertable": self.assertable, "terms": self.poly.to_json()}


@dataclass(frozen=True)
class WitnessTerm:
    """``coef · left · r · right`` for the relation named ``relation``."""

    coef: Scalar
    left: tuple
    relation: str
    right: tuple

    def to_json(self) -> dict:
        return {"coef": str(self.coef), "left": [letter_str(x) for x in self.left],
                "relation": self.relation, "right": [letter_str(x) for x in self.right]}


@dataclass
class IdealWitness:
    target: NCPoly
    terms: list
    degree: int

    def expand(self, p: "Presentation") -> NCPoly:
        out = NCPoly()
        for t in self.terms:
            out = out + p.sandwich(t.left, p.relation(t.relation).poly, t.right).scaled(t.coef)
        return out

    def replay(self, p: "Presentation") -> bool:
        return (self.expand(p) - self.target).clean() == NCPoly()

    def to_json(self) -> dict:
        return {"target": self.target.to_json(), "degree": self.degree,
                "terms": [t.to_json() for t in self.terms]}


@dataclass
class TensorWitness:
    """Terms ``(coef, side, word, WitnessTerm)``: side ``L`` puts the relation in the left leg."""

    target: dict
    terms: list

    def expand(self, p: "Presentation") -> dict:
        out: dict = {}
        for coef, side, word, t in self.terms:
            rel = p.sandwich(t.left, p.relation(t.relation).poly, t.right)
            for w, c in rel.items():
                key = (w, word) if side == "L" else (word, w)
                _tadd(out, key, coef * t.coef * c)
        return out

    def replay(self, p: "Presentation") -> bool:
        got = self.expand(p)
        tgt = {k: c for k, c in self.target.items() if c}
        return got == tgt


# --------------------------------------------------------------------------
# row reduction with tracked combinations

class _Echelon:
    def __init__(self, key):
        self.key = key
        self.rows: dict = {}

    def reduce(self, vec: dict):
        """Return ``(rem, acc)`` with ``vec = rem + Σ acc[i] · spanner_i``."""
        vec = dict(vec)
        rem: dict = {}
        acc: dict = {}
        while vec:
            w = max(vec, key=self.key)
            c = vec.pop(w)
            row = self.rows.get(w)
            if row is None:
                rem[w] = c
                continue
            rv, rc = row
            for x, y in rv.items():
                if x == w:
                    continue
                v = vec.get(x, 0) - c * y
                if v:
                    vec[x] = v
                else:
                    vec.pop(x, None)
            for i, y in rc.items():
                v = acc.get(i, 0) + c * y
                if v:
                    acc[i] = v
                else:
                    acc.pop(i, None)
        return rem, acc

    def add(self, vec: dict, index: int) -> bool:
        rem, acc = self.reduce(vec)
        if not rem:
            return False
        pivot = max(rem, key=self.key)
        p = rem[pivot]
        combo = {index: 1}
        for i, y in acc.items():
            combo[i] = combo.get(i, 0) - y
        self.rows[pivot] = ({x: y / p for x, y in rem.items()},
                            {i: y / p for i, y in combo.items() if y})
        return True


@dataclass
class _Spanner:
    left: tuple
    relation: Relation
    right: tuple
    poly: NCPoly
    rad: int = 1
    vec: dict | None = None


class _Span:
    """Degree-``d`` part of the ideal in one grade block."""

    def __init__(self, p: "Presentation", K: Square, d: int):
        self.p, self.K, self.d = p, K, d
        self.words = p.words(K, d)
        self.spanners: list[_Spanner] = []
        for P, rel, Q in p._spanner_triples(K, d):
            poly = p.sandwich(P, p._phi_rel(rel), Q)
            if poly:
                self.spanners.append(_Spanner(P, rel, Q, poly))
        self.exact = p.normalizable
        if self.exact:
            for s in self.spanners:
                split = p._normalize(s.poly)
                if len(split) != 1:
                    self.exact = False
                    break
                s.rad, s.vec = next(iter(split.items()))
        self.echelon = _Echelon(p.word_key)
        for i, s in enumerate(self.spanners):
            self.echelon.add(s.vec if self.exact else dict(s.poly), i)

    @property
    def pivots(self) -> set:
        return set(self.echelon.rows)

    def normal_words(self) -> list:
        piv = self.pivots
        return [w for w in self.words if w not in piv]

    def reduce(self, x: Mapping):
        """``(remainder, {spanner index: Scalar})`` for a star-free ``x``."""
        if not self.exact:
            rem, acc = self.echelon.reduce(dict(x))
            return NCPoly(rem).clean(), {i: Scalar(c) for i, c in acc.items()}
        p = self.p
        remainder = NCPoly()
        lam: dict = {}
        for tau, vec in p._normalize(x).items():
            rem, acc = self.echelon.reduce(vec)
            for w, c in rem.items():
                _tadd(remainder, w, Scalar(c) * Scalar.radical(tau) * p._sqrt_kappa(w))
            for i, c in acc.items():
                rho = self.spanners[i].rad
                _tadd(lam, i, Scalar(c) * Scalar.radical(tau) / Scalar.radical(rho))
        return remainder, lam


# --------------------------------------------------------------------------
# the presentation

class Presentation:
    def __init__(self, walk: ReciprocalWalk, eqint: Callable | None = None, name: str = ""):
        self.walk = walk
        self.name = name or f"A({walk.name})"
        self._eqint = eqint
        self._c: dict = {}
        self.relations: list[Relation] = []
        self._by_name: dict = {}
        self._spans: dict = {}
        self._paths: dict = {}
        self._phi_cache: dict = {}
        self._tel_cache: dict = {}
        self._setup_kappa()
        self._build_relations()

    # -- coefficients --------------------------------------------------------
    def c(self, e, f) -> Scalar:
        """Coefficient in ``u[e,f]* = c · u[ē,f̄]``."""
        key = (e, f)
        val = self._c.get(key)
        if val is None:
            w = self.walk
            val = w.sign(e) * w.sign(f) * sqrt(w.weight(f) / w.weight(e))
            if self._eqint is not None:
                val = as_scalar(self._eqint(e, f, val))
            self._c[key] = val
        return val

    def with_eqint(self, fn: Callable, name: str = "") -> "Presentation":
        """Same walk, interchange coefficients replaced by ``fn(e, f, default)``."""
        return Presentation(self.walk, fn, name or self.name + "'")

    @property
    def generators(self) -> list:
        return [(e, f) for e in self.walk.edges for f in self.walk.edges]

    # -- grades --------------------------------------------------------------
    def letter_grade(self, letter) -> Square:
        kind, a, b = letter
        if kind == "1":
            return Square(a, a, b, b)
        ea, eb = self.walk.edges[a], self.walk.edges[b]
        if kind == "u":
            return Square(ea.src, ea.tgt, eb.src, eb.tgt)
        return Square(ea.tgt, ea.src, eb.tgt, eb.src)

    def grade(self, word) -> Square:
        first, last = self.letter_grade(word[0]), self.letter_grade(word[-1])
        return Square(first.k, last.l, first.m, last.n)

    def word_key(self, word):
        idx = self.walk.edge_index
        if word and word[0][0] == "1":
            return (0, ())
        return (len(word), tuple((0 if x[0] == "u" else 1, idx[x[1]], idx[x[2]]) for x in word))

    # -- products ------------------------------------------------------------
    def wmul(self, a: tuple, b: tuple):
        """Product of two words or ``None`` when they do not compose."""
        if not a:
            return b
        if not b:
            return a
        ga, gb = self.letter_grade(a[-1]), self.letter_grade(b[0])
        if (ga.l, ga.n) != (gb.k, gb.m):
            return None
        if a[-1][0] == "1":
            return b
        if b[0][0] == "1":
            return a
        return a + b

    def mul(self, x: Mapping, y: Mapping) -> NCPoly:
        out: dict = {}
        for a, c in x.items():
            for b, d in y.items():
                w = self.wmul(a, b)
                if w is not None:
                    _tadd(out, w, c * d)
        return NCPoly(out)

    def sandwich(self, left: tuple, x: Mapping, right: tuple) -> NCPoly:
        out: dict = {}
        for w, c in x.items():
            v = self.wmul(left, w)
            if v is None:
                continue
            v = self.wmul(v, right)
            if v is not None:
                _tadd(out, v, c)
        return NCPoly(out)

    def star(self, x: Mapping) -> NCPoly:
        out: dict = {}
        flip = {"u": "s", "s": "u", "1": "1"}
        for w, c in x.items():
            _tadd(out, tuple((flip[k], a, b) for k, a, b in reversed(w)), c.conjugate())
        return NCPoly(out)

    def unit(self, v, w) -> NCPoly:
        return NCPoly({(One(v, w),): Scalar(1)})

    # -- star elimination ----------------------------------------------------
    def phi_word(self, word):
        """``(scalar, word)`` with every ``u*`` replaced through the interchange relation."""
        got = self._phi_cache.get(word)
        if got is None:
            c = Scalar(1)
            out = []
            for kind, a, b in word:
                if kind == "s":
                    c = c * self.c(a, b)
                    out.append(U(self.walk.bar(a), self.walk.bar(b)))
                else:
                    out.append((kind, a, b))
            got = self._phi_cache[word] = (c, tuple(out))
        return got

    def eliminate_stars(self, x: Mapping) -> NCPoly:
        out: dict = {}
        for w, c in x.items():
            s, v = self.phi_word(w)
            _tadd(out, v, c * s)
        return NCPoly(out)

    def telescope_word(self, word) -> list:
        """Witness terms summing to ``word − φ(word)``."""
        got = self._tel_cache.get(word)
        if got is None:
            got = []
            for i, (kind, a, b) in enumerate(word):
                if kind != "s":
                    continue
                s, pre = self.phi_word(word[:i])
                got.append(WitnessTerm(s, pre, f"EqInt[{a},{b}]", word[i + 1:]))
            self._tel_cache[word] = got
        return got

    def telescope(self, x: Mapping) -> list:
        out = []
        for w, c in x.items():
            out.extend(WitnessTerm(c * t.coef, t.left, t.relation, t.right) for t in self.telescope_word(w))
        return out

    def _phi_rel(self, rel: Relation) -> NCPoly:
        got = self._phi_cache.get(("rel", rel.name))
        if got is None:
            got = self._phi_cache[("rel", rel.name)] = self.eliminate_stars(rel.poly)
        return got

    # -- relations -----------------------------------------------------------
    def _add(self, rel: Relation):
        self.relations.append(rel)
        self._by_name[rel.name] = rel

    def relation(self, name: str) -> Relation:
        rel = self._by_name.get(name)
        if rel is None:
            raise PresentationError(f"unknown relation {name!r}")
        return rel

    def _build_relations(self):
        w = self.walk
        edges = list(w.edges)
        one = Scalar(1)
        for e in edges:
            for f in edges:
                poly = NCPoly({(Ustar(e, f),): one}) + NCPoly({(U(w.bar(e), w.bar(f)),): -self.c(e, f)})
                self._add(Relation(f"EqInt[{e},{f}]", "EqInt", poly, self.letter_grade(Ustar(e, f)),
                                   True, None, (e, f)))
        inner = set(w.interior)
        for x in w.vertices:
            into = w.in_edges(x)
            for s in w.vertices:
                out = w.out_edges(s)
                for e in out:
                    for f in out:
                        poly = NCPoly()
                        for g in into:
                            poly = poly + NCPoly({(Ustar(g, e), U(g, f)): one})
                        if e == f:
                            poly = poly + NCPoly({(One(x, w.tgt(e)),): -one})
                        if poly:
                            self._add(Relation(f"EqUni1[{x};{e},{f}]", "EqUni1", poly,
                                               Square(x, x, w.tgt(e), w.tgt(f)), x in inner, x, (x, e, f)))
            outx = w.out_edges(x)
            for t in w.vertices:
                into_t = w.in_edges(t)
                for e in into_t:
                    for f in into_t:
                        poly = NCPoly()
                        for g in outx:
                            poly = poly + NCPoly({(U(e, g), Ustar(f, g)): one})
                        if e == f:
                            poly = poly + NCPoly({(One(w.src(e), x),): -one})
                        if poly:
                            self._add(Relation(f"EqUni2[{x};{e},{f}]", "EqUni2", poly,
                                               Square(w.src(e), w.src(f), x, x), x in inner, x, (x, e, f)))
        self._by_left: dict = {}
        for rel in self.relations:
            if rel.kind != "EqInt" and rel.assertable:
                self._by_left.setdefault(rel.grade.left, []).append(rel)

    # -- words and spans -----------------------------------------------------
    def paths(self, v, length: int) -> list:
        key = (v, length)
        got = self._paths.get(key)
        if got is None:
            if length == 0:
                got = [()]
            else:
                got = [p + (e,) for p in self.paths(v, length - 1)
                       for e in self.walk.out_edges(self.walk.tgt(p[-1]) if p else v)]
            self._paths[key] = got
        return got

    def _end(self, v, path):
        return self.walk.tgt(path[-1]) if path else v

    def words(self, K: Square, d: int) -> list:
        out = []
        if K.k == K.l and K.m == K.n:
            out.append((One(K.k, K.m),))
        for n in range(1, d + 1):
            ups = [p for p in self.paths(K.k, n) if self._end(K.k, p) == K.l]
            lows = [p for p in self.paths(K.m, n) if self._end(K.m, p) == K.n]
            for a in ups:
                for b in lows:
                    out.append(tuple(U(e, f) for e, f in zip(a, b)))
        return out

    def _spanner_triples(self, K: Square, d: int):
        for plen in range(0, d - 1):
            for P_up in self.paths(K.k, plen):
                a = self._end(K.k, P_up)
                for P_low in self.paths(K.m, plen):
                    c = self._end(K.m, P_low)
                    P = tuple(U(e, f) for e, f in zip(P_up, P_low))
                    for rel in self._by_left.get((a, c), ()):
                        b, dd = rel.grade.right
                        for qlen in range(0, d - 1 - plen):
                            ups = [q for q in self.paths(b, qlen) if self._end(b, q) == K.l]
                            if not ups:
                                continue
                            lows = [q for q in self.paths(dd, qlen) if self._end(dd, q) == K.n]
                            for qu in ups:
                                for ql in lows:
                                    yield P, rel, tuple(U(e, f) for e, f in zip(qu, ql))

    def span(self, K, d: int) -> _Span:
        K = Square(*K)
        key = (K, d)
        got = self._spans.get(key)
        if got is None:
            got = self._spans[key] = _Span(self, K, d)
        return got

    # -- radical normalisation ----------------------------------------------
    def _setup_kappa(self):
        w = self.walk
        self.normalizable = all(w.weight(e).is_rational() for e in w.edges)
        self._sigma: dict = {}
        if not self.normalizable:
            return
        for e in w.edges:
            b = w.bar(e)
            canonical = w.edge_index[e] <= w.edge_index[b]
            if canonical and e != b:
                f = w.weight(e).to_fraction()
                self._sigma[e] = _split_square(f.numerator * f.denominator)[1]
            else:
                self._sigma[e] = 1

    @lru_cache(maxsize=None)
    def _kappa(self, word) -> int:
        k = 1
        for kind, a, b in word:
            if kind == "u":
                k = _split_square(k * self._sigma[a] * self._sigma[self.walk.bar(b)])[1]
            elif kind == "s":
                raise PresentationError("radical classes are defined on star-free words")
        return k

    def _sqrt_kappa(self, word) -> Scalar:
        return Scalar.radical(self._kappa(word))

    def _normalize(self, x: Mapping) -> dict:
        """Split ``x = Σ_τ √τ · Σ_W q_W √κ(W) W`` into rational vectors ``{τ: {W: q_W}}``."""
        out: dict = {}
        for w, c in x.items():
            k = self._kappa(w)
            n = c * Scalar.radical(k) / k
            for (mono, rad), q in n.terms().items():
                if mono:
                    raise PresentationError("symbolic coefficients cannot be reduced")
                vec = out.setdefault(rad, {})
                v = vec.get(w, 0) + q
                if v:
                    vec[w] = v
                else:
                    vec.pop(w, None)
        return {r: v for r, v in out.items() if v}

    # -- maps on words -------------------------------------------------------
    def counit_word(self, word) -> Scalar:
        for kind, a, b in word:
            if a != b:
                return Scalar(0)
        return Scalar(1)

    def counit(self, x: Mapping) -> Scalar:
        return sum((c * self.counit_word(w) for w, c in x.items()), Scalar(0))

    def antipode(self, x: Mapping) -> NCPoly:
        out: dict = {}
        for w, c in x.items():
            coef = c
            new = []
            for kind, a, b in reversed(w):
                if kind == "u":
                    new.append(Ustar(b, a))
                elif kind == "s":
                    coef = coef * self.c(a, b)
                    new.append(Ustar(self.walk.bar(b), self.walk.bar(a)))
                else:
                    new.append(One(b, a))
            _tadd(out, tuple(new), coef)
        return NCPoly(out)

    def _delta_letter(self, letter) -> list:
        kind, a, b = letter
        if kind == "1":
            return [((One(a, z),), (One(z, b),)) for z in self.walk.vertices]
        return [(((kind, a, g),), ((kind, g, b),)) for g in self.walk.edges]

    def coproduct_word(self, word) -> dict:
        acc = {((), ()): Scalar(1)}
        for letter in word:
            nxt: dict = {}
            pieces = self._delta_letter(letter)
            for (l, r), c in acc.items():
                for pl, pr in pieces:
                    x = self.wmul(l, pl)
                    if x is None:
                        continue
                    y = self.wmul(r, pr)
                    if y is not None:
                        _tadd(nxt, (x, y), c)
            acc = nxt
        return acc

    def coproduct(self, x: Mapping) -> dict:
        out: dict = {}
        for w, c in x.items():
            for k, v in self.coproduct_word(w).items():
                _tadd(out, k, c * v)
        return out

    def vertices_of(self, word) -> set:
        out = set()
        for x in word:
            g = self.letter_grade(x)
            out.update(g)
        return out

    def to_json(self) -> dict:
        return {"kind": "presentation", "name": self.name, "walk": walk_to_json(self.walk),
                "generators": [[e, f] for e, f in self.generators],
                "relations": [r.to_json() for r in self.relations]}


def build_presentation(walk: ReciprocalWalk, eqint: Callable | None = None) -> Presentation:
    return Presentation(walk, eqint)


def presentation_from_json(doc: Mapping) -> Presentation:
    if doc.get("kind") != "presentation":
        raise SchemaError("/kind", "expected 'presentation'")
    if "walk" not in doc:
        raise SchemaError("/walk", "missing field")
    try:
        walk = walk_from_json(doc["walk"])
    except SchemaError as exc:
        raise SchemaError("/walk" + exc.path, exc.message) from None
    p = Presentation(walk, name=str(doc.get("name", "")))
    for n, raw in enumerate(doc.get("relations", [])):
        name = raw.get("name")
        if name not in p._by_name:
            raise SchemaError(f"/relations/{n}/name", f"relation {name!r} is not part of this walk's presentation")
        if "terms" in raw:
            given = NCPoly.from_json(raw["terms"], f"/relations/{n}/terms")
            if (given - p.relation(name).poly).clean():
                raise SchemaError(f"/relations/{n}/terms", "relation does not match the walk data")
    return p


# --------------------------------------------------------------------------
# ideal membership

def _by_grade(p: Presentation, x: Mapping) -> dict:
    out: dict = {}
    for w, c in x.items():
        out.setdefault(p.grade(w), {})[w] = c
    return out


def reduce_mod_ideal(p: Presentation, x: Mapping, d: int):
    """``(remainder, witness)``; the witness is ``None`` unless the remainder vanishes."""
    x = NCPoly(x).clean()
    terms = p.telescope(x)
    y = p.eliminate_stars(x)
    remainder = NCPoly()
    for K, part in _by_grade(p, y).items():
        span = p.span(K, d)
        rem, lam = span.reduce(part)
        remainder = remainder + rem
        for i, l in lam.items():
            s = span.spanners[i]
            terms.append(WitnessTerm(l, s.left, s.relation.name, s.right))
            for t in p.telescope(p.sandwich(s.left, s.relation.poly, s.right)):
                terms.append(WitnessTerm(-l * t.coef, t.left, t.relation, t.right))
    return remainder, (IdealWitness(x, terms, d) if not remainder else None)


def ideal_member(p: Presentation, x: Mapping, d: int):
    """A replayable witness for ``x ∈ I`` at degree ``d``, or ``None`` meaning unknown at that degree."""
    return reduce_mod_ideal(p, x, d)[1]


def reduce_tensor(p: Presentation, x: Mapping, d: int):
    """Decide ``x ∈ I⊗A + A⊗I`` with legs bounded so the total degree stays ``≤ d``.

    Each leg is first reduced at its own degree; the full bound is only
    used when that leaves a remainder.
    """
    x = {k: c for k, c in x.items() if c}
    if not x:
        return {}, TensorWitness(x, [])
    own_l = max(word_length(a) for a, _ in x)
    own_r = max(word_length(b) for _, b in x)
    rem, wit = _reduce_tensor_at(p, x, own_l, own_r)
    full_l, full_r = max(d - own_r, own_l), max(d - own_l, own_r)
    if wit is None and (full_l, full_r) != (own_l, own_r):
        rem, wit = _reduce_tensor_at(p, x, full_l, full_r)
    return rem, wit


def _reduce_tensor_at(p: Presentation, x: dict, dl: int, dr: int):
    terms: list = []
    y: dict = {}
    for (w1, w2), c in x.items():
        s1, v1 = p.phi_word(w1)
        s2, v2 = p.phi_word(w2)
        for t in p.telescope_word(w1):
            terms.append((c, "L", w2, t))
        for t in p.telescope_word(w2):
            terms.append((c * s1, "R", v1, t))
        _tadd(y, (v1, v2), c * s1 * s2)
    if not y:
        return {}, TensorWitness(x, terms)
    middle: dict = {}
    for (w1, w2), c in y.items():
        span = p.span(p.grade(w1), dl)
        rem, lam = span.reduce({w1: Scalar(1)})
        for i, l in lam.items():
            s = span.spanners[i]
            terms.append((c * l, "L", w2, WitnessTerm(Scalar(1), s.left, s.relation.name, s.right)))
            for t in p.telescope(p.sandwich(s.left, s.relation.poly, s.right)):
                terms.append((-c * l, "L", w2, t))
        for n, cn in rem.items():
            _tadd(middle.setdefault(n, {}), w2, c * cn)
    remainder: dict = {}
    for n, right in middle.items():
        for K, part in _by_grade(p, right).items():
            span = p.span(K, dr)
            rem, lam = span.reduce(part)
            for i, l in lam.items():
                s = span.spanners[i]
                terms.append((l, "R", n, WitnessTerm(Scalar(1), s.left, s.relation.name, s.right)))
                for t in p.telescope(p.sandwich(s.left, s.relation.poly, s.right)):
                    terms.append((-l, "R", n, t))
            for w, c in rem.items():
                _tadd(remainder, (n, w), c)
    return remainder, (TensorWitness(x, terms) if not remainder else None)


@dataclass
class GradedBasis:
    grade: Square
    degree: int
    words: list
    dims_by_degree: list

    @property
    def dimension(self) -> int:
        return len(self.words)

    def to_json(self) -> dict:
        return {"grade": list(self.grade), "degree": self.degree, "dimension": self.dimension,
                "dims_by_degree": self.dims_by_degree,
                "words": [[letter_str(x) for x in w] for w in self.words]}


def graded_basis(p: Presentation, K, d: int) -> GradedBasis:
    """Normal words spanning the degree-``≤ d`` part of the quotient in block ``K``."""
    K = Square(*K)
    span = p.span(K, d)
    normal = span.normal_words()
    dims = [0] * (d + 1)
    for w in normal:
        dims[word_length(w)] += 1
    return GradedBasis(K, d, normal, dims)


# --------------------------------------------------------------------------
# well-posedness of the Hopf structure maps

def _trusted(p: Presentation, vertices: Iterable, margin: int) -> bool:
    return all(p.walk.depth(v) >= margin for v in vertices)


def _grade_vertices(grades) -> set:
    out = set()
    for g in grades:
        out.update(g)
    return out


@dataclass
class _Outcome:
    status: str
    witness: dict | None = None
    proof: object = None


def _classify(certified: bool, trusted: bool, boundary: bool) -> str:
    if certified:
        return CERTIFIED
    if boundary:
        return BOUNDARY
    return FAILED if trusted else UNKNOWN_AT_D


def _check_single(p, x, d, margin, label) -> _Outcome:
    x = NCPoly(x).clean()
    if not x:
        return _Outcome(CERTIFIED)
    if x.degree > d:
        return _Outcome(UNKNOWN_AT_D, {"check": label, "reason": f"degree {x.degree} exceeds {d}"})
    rem, wit = reduce_mod_ideal(p, x, x.degree)
    if wit is None and d > x.degree:
        rem, wit = reduce_mod_ideal(p, x, d)
    verts = _grade_vertices(p.grade(w) for w in x)
    trusted = _trusted(p, verts, margin)
    boundary = not _trusted(p, verts, 1)
    status = _classify(wit is not None, trusted, boundary)
    witness = None if wit else {"check": label, "remainder": str(rem)}
    return _Outcome(status, witness, wit)


def _check_tensor_blocks(p, x, d, margin, label) -> list:
    blocks: dict = {}
    for (w1, w2), c in x.items():
        if c:
            blocks.setdefault((p.grade(w1), p.grade(w2)), {})[(w1, w2)] = c
    out = []
    for (K1, K2), part in blocks.items():
        rem, wit = reduce_tensor(p, part, d)
        verts = _grade_vertices((K1, K2))
        trusted = _trusted(p, verts, margin)
        boundary = not _trusted(p, verts, 1)
        status = _classify(wit is not None, trusted, boundary)
        witness = None if wit else {"check": label, "block": [list(K1), list(K2)],
                                    "remainder": {f"{word_str(a)} ⊗ {word_str(b)}": str(c)
                                                  for (a, b), c in list(rem.items())[:8]}}
        out.append(_Outcome(status, witness, wit))
    return out


def _aggregate(statuses: list) -> str:
    if not statuses or all(s == CERTIFIED for s in statuses):
        return CERTIFIED
    if FAILED in statuses:
        return FAILED
    if CERTIFIED in statuses:
        return "certified-interior"
    if UNKNOWN_AT_D in statuses:
        return UNKNOWN_AT_D
    return BOUNDARY


def _record(rep, axiom, outcome: _Outcome, name):
    wit = outcome.witness
    if outcome.status not in (FAILED, UNKNOWN_AT_D):
        wit = None
    if wit is not None:
        wit = dict(wit, relation=name)
    rep.record(axiom, outcome.status == CERTIFIED, wit, status=_STATUS_TO_REPORT[outcome.status])


def check_hopf_wellposed(p: Presentation, d: int, margin: int = 2,
                         relations: Iterable[str] | None = None) -> VerificationReport:
    """Check that ``Δ``, ``ε``, ``S`` and the star respect every relation at degree ``d``.

    Each check is decided per grade block.  A block certifies when the
    exact reduction leaves no remainder; a nonzero remainder counts as a
    failure only when every vertex of the block lies at depth ``≥ margin``
    inside the window, and is reported as unknown or boundary-skipped
    otherwise.  Every certificate is replayed before it is counted.
    """
    rep = VerificationReport(f"hopf-wellposed {p.name} d={d}")
    rels = p.relations if relations is None else [p.relation(n) for n in relations]
    rep.data["degree"] = d
    rep.data["trusted-depth"] = margin

    def work(rel: Relation):
        if not rel.assertable:
            return rel, None
        eps = rel.poly and p.counit(rel.poly)
        eps_out = _Outcome(CERTIFIED) if not eps else _Outcome(
            FAILED if _trusted(p, rel.grade, margin) else UNKNOWN_AT_D,
            {"check": "counit", "value": str(eps)})
        s_out = _check_single(p, p.antipode(rel.poly), d, margin, "antipode")
        st_out = _check_single(p, p.star(rel.poly), d, margin, "star")
        d_outs = _check_tensor_blocks(p, p.coproduct(rel.poly), d, margin, "coproduct")
        return rel, (eps_out, s_out, st_out, d_outs)

    results = parallel_map(work, rels)
    statuses: dict = {}
    replay_ok = replay_total = 0
    for rel, res in results:
        if res is None:
            for axiom in ("coproduct", "counit", "antipode", "star"):
                rep.record(axiom, None, None, status=SKIPPED)
            statuses[rel.name] = {"coproduct": BOUNDARY, "counit": BOUNDARY, "antipode": BOUNDARY,
                                  "star": BOUNDARY}
            continue
        eps_out, s_out, st_out, d_outs = res
        _record(rep, "counit", eps_out, rel.name)
        _record(rep, "antipode", s_out, rel.name)
        _record(rep, "star", st_out, rel.name)
        for o in d_outs:
            _record(rep, "coproduct", o, rel.name)
        statuses[rel.name] = {"counit": eps_out.status, "antipode": s_out.status, "star": st_out.status,
                              "coproduct": _aggregate([o.status for o in d_outs])}
        for o in [s_out, st_out] + d_outs:
            if o.proof is not None:
                replay_total += 1
                ok = o.proof.replay(p)
                replay_ok += ok
                rep.record("witness-replay", ok, None if ok else {"relation": rel.name})
    rep.data["relation-status"] = statuses
    rep.data["witnesses-replayed"] = f"{replay_ok}/{replay_total}"
    counts: dict = {}
    for st in statuses.values():
        for v in st.values():
            counts[v] = counts.get(v, 0) + 1
    rep.data["status-counts"] = dict(sorted(counts.items()))
    return rep


# --------------------------------------------------------------------------
# colored matrix

@dataclass
class ColoredMatrix:
    presentation: Presentation
    coloring: ColoredWalk
    entries: dict
    report: VerificationReport

    def component(self, a, b, v, w) -> NCPoly:
        return self.entries.get((a, b), {}).get((v, w), NCPoly())


def _family_mul(p, X: Mapping, Y: Mapping) -> dict:
    """Blockwise product of two families ``{grade: poly}``."""
    by_left: dict = {}
    for K, y in Y.items():
        by_left.setdefault(K.left, []).append((K, y))
    out: dict = {}
    for K1, x in X.items():
        for K2, y in by_left.get(K1.right, ()):
            K = Square(K1.k, K2.l, K1.m, K2.n)
            out[K] = out.get(K, NCPoly()) + p.mul(x, y)
    return out


def _family_add(*families) -> dict:
    out: dict = {}
    for fam in families:
        for K, x in fam.items():
            out[K] = out.get(K, NCPoly()) + x
    return out


def _family_scale(fam: Mapping, coef: Callable) -> dict:
    """Left multiplication by ``coef(λ, ρ)`` evaluated on the left column of each block."""
    return {K: x.scaled(coef(K.k, K.m)) for K, x in fam.items()}


def _family_star(p, fam: Mapping) -> dict:
    return {K.circ(): p.star(x) for K, x in fam.items()}


def colored_matrix(p: Presentation, cw: ColoredWalk | None = None, d: int = 2) -> ColoredMatrix:
    """The matrix ``(u_{a,b})_{v,w} = u[e_a(v), e_b(w)]`` and its defining relations."""
    if cw is None:
        cw = color_walk(p.walk)
    walk = p.walk
    rep = VerificationReport(f"colored-matrix {p.name}")
    rep.merge(cw.report, "coloring/")
    entries: dict = {}
    fams: dict = {}
    for a in cw.colors:
        for b in cw.colors:
            comp = {}
            fam = {}
            for v in walk.vertices:
                ea = cw.e(a, v)
                if ea is None:
                    continue
                for w in walk.vertices:
                    eb = cw.e(b, w)
                    if eb is None:
                        continue
                    poly = NCPoly({(U(ea, eb),): Scalar(1)})
                    comp[(v, w)] = poly
                    fam[p.letter_grade(U(ea, eb))] = poly
            entries[(a, b)] = comp
            fams[(a, b)] = fam
    units = {Square(v, v, w, w): p.unit(v, w) for v in walk.vertices for w in walk.vertices}
    inner = set(walk.interior)
    for b in cw.colors:
        for c in cw.colors:
            first = _family_add(*[_family_mul(p, _family_star(p, fams[(a, b)]), fams[(a, c)]) for a in cw.colors])
            second = _family_add(*[_family_mul(p, fams[(b, a)], _family_star(p, fams[(c, a)])) for a in cw.colors])
            for axiom, fam in (("unitarity-u*u", first), ("unitarity-uu*", second)):
                for K, x in fam.items():
                    target = x - units[K] if (b == c and K in units) else x
                    if axiom == "unitarity-u*u":
                        ok_zone = K.k in inner and K.l in inner
                    else:
                        ok_zone = K.m in inner and K.n in inner
                    if not ok_zone:
                        rep.record(axiom, None, None, status=SKIPPED)
                        continue
                    wit = ideal_member(p, target, d)
                    rep.record(axiom, wit is not None and wit.replay(p),
                               None if wit else {"colors": [b, c], "block": list(K)})
    for (a, b), comp in entries.items():
        abar, bbar = cw.bar_color[a], cw.bar_color[b]
        for (v, w), poly in comp.items():
            av, bw = cw.act(a, v), cw.act(b, w)
            other = entries.get((abar, bbar), {}).get((av, bw))
            if other is None:
                rep.record("adjoint", None, None, status=SKIPPED)
                continue
            coef = cw.gamma(b, w) / cw.gamma(a, v)
            diff = p.star(poly) - other.scaled(coef)
            wit = ideal_member(p, diff, 1)
            rep.record("adjoint", wit is not None and wit.replay(p),
                       None if wit else {"colors": [a, b], "at": [v, w]})
            # f(λ, ρ) u_{a,b} = u_{a,b} f(āλ, b̄ρ) on opaque per-vertex symbols
            left = Scalar.symbol("f", "", 0) * Scalar.symbol(f"f[{v}]") * Scalar.symbol(f"g[{w}]")
            back_v, back_w = cw.act(abar, av), cw.act(bbar, bw)
            right = (Scalar.symbol("f", "", 0) * Scalar.symbol(f"f[{back_v}]") * Scalar.symbol(f"g[{back_w}]")
                     if back_v is not None and back_w is not None else None)
            rep.record("grading-u", right is not None and left == right, {"colors": [a, b], "at": [v, w]})
    return ColoredMatrix(p, cw, entries, rep)


# --------------------------------------------------------------------------
# dynamical SU(2)

def _podles_F(q: Fraction, x: Fraction) -> Callable:
    Q = abs(q)
    n0 = int(2 * x)

    @lru_cache(maxsize=None)
    def F(k: int) -> Fraction:
        n = n0 + 2 * k
        return (Q ** (n + 2) + 1) / ((Q ** n + 1) * Q) / Q

    return F


def dynamical_su2_report(q, x, window, d: int = 3, relation_q=None, margin: int = 2) -> VerificationReport:
    """Certify the dynamical SU(2) relations for the colored Podleś walk block by block.

    ``relation_q`` replaces ``q`` in the relations only, which is how a
    deliberately wrong deformation parameter is fed in.
    """
    qs, xs = as_scalar(q), as_scalar(x)
    walk = podles_walk(qs, xs, window)
    if not any(walk.depth(v) >= margin for v in walk.vertices):
        raise PresentationError(f"window {list(window)} has no vertex at depth {margin}; "
                                "every block would touch the boundary")
    p = build_presentation(walk)
    cw = color_walk(walk)
    qf = qs.to_fraction()
    rq = as_scalar(relation_q if relation_q is not None else qs)
    F = _podles_F(qf, xs.to_fraction())

    def Fs(k):
        return Scalar(F(int(k)))

    def Fh(k):
        return sqrt(Fs(k))

    rep = VerificationReport(f"dynamical-su2 q={qf} x={xs} window={list(window)} d={d}")
    rep.data["q"] = str(qf)
    rep.data["relation-q"] = str(rq)
    alpha: dict = {}
    beta: dict = {}
    for v in walk.vertices:
        em = cw.e("-", v)
        if em is None:
            continue
        for w in walk.vertices:
            k, m = int(v), int(w)
            ewm, ewp = cw.e("-", w), cw.e("+", w)
            if ewm is not None:
                alpha[p.letter_grade(U(em, ewm))] = NCPoly({(U(em, ewm),): Fh(m - 1) / Fh(k - 1)})
            if ewp is not None:
                beta[p.letter_grade(U(em, ewp))] = NCPoly({(U(em, ewp),): 1 / Fh(k - 1)})
    astar, bstar = _family_star(p, alpha), _family_star(p, beta)
    one = {Square(v, v, w, w): p.unit(v, w) for v in walk.vertices for w in walk.vertices}

    def M(X, Y):
        return _family_mul(p, X, Y)

    def L(fam, fn):
        return _family_scale(fam, lambda lam, rho: fn(int(lam), int(rho)))

    rels = {
        "alpha*beta = q F(rho-1) beta*alpha":
            _family_add(M(alpha, beta), L(M(beta, alpha), lambda l, r: -rq * Fs(r - 1))),
        "alpha*beta^* = q F(lambda) beta^*alpha":
            _family_add(M(alpha, bstar), L(M(bstar, alpha), lambda l, r: -rq * Fs(l))),
        "alpha alpha^* + F(lambda) beta^*beta = 1":
            _family_add(M(alpha, astar), L(M(bstar, beta), lambda l, r: Fs(l)), L(one, lambda l, r: Scalar(-1))),
        "alpha^*alpha + q^-2 F(rho-1)^-1 beta^*beta = 1":
            _family_add(M(astar, alpha), L(M(bstar, beta), lambda l, r: 1 / (rq * rq * Fs(r - 1))),
                        L(one, lambda l, r: Scalar(-1))),
        "F(rho-1)^-1 alpha alpha^* + beta beta^* = F(lambda-1)^-1":
            _family_add(L(M(alpha, astar), lambda l, r: 1 / Fs(r - 1)), M(beta, bstar),
                        L(one, lambda l, r: -1 / Fs(l - 1))),
        "F(lambda) alpha^*alpha + q^-2 beta beta^* = F(rho)":
            _family_add(L(M(astar, alpha), lambda l, r: Fs(l)), L(M(beta, bstar), lambda l, r: 1 / (rq * rq)),
                        L(one, lambda l, r: -Fs(r))),
    }
    # only blocks reached by a product of two generators matter for the relation
    def touched(*fams):
        keys = set()
        for fam in fams:
            keys.update(fam)
        return keys

    supports = {
        "alpha*beta = q F(rho-1) beta*alpha": touched(M(alpha, beta), M(beta, alpha)),
        "alpha*beta^* = q F(lambda) beta^*alpha": touched(M(alpha, bstar), M(bstar, alpha)),
        "alpha alpha^* + F(lambda) beta^*beta = 1": touched(M(alpha, astar), M(bstar, beta)),
        "alpha^*alpha + q^-2 F(rho-1)^-1 beta^*beta = 1": touched(M(astar, alpha), M(bstar, beta)),
        "F(rho-1)^-1 alpha alpha^* + beta beta^* = F(lambda-1)^-1": touched(M(alpha, astar), M(beta, bstar)),
        "F(lambda) alpha^*alpha + q^-2 beta beta^* = F(rho)": touched(M(astar, alpha), M(beta, bstar)),
    }
    for name, fam in rels.items():
        items = [(K, fam[K]) for K in sorted(supports[name], key=lambda K: tuple(int(v) for v in K))]
        outs = parallel_map(lambda kv: _check_single(p, kv[1], d, margin, name), items)
        for (K, _), o in zip(items, outs):
            if o.status != CERTIFIED and not _trusted(p, K, margin):
                o = _Outcome(BOUNDARY)
            wit = None if o.witness is None else dict(o.witness, block=list(K))
            ok = o.status == CERTIFIED and (o.proof is None or o.proof.replay(p))
            rep.record(name, ok if o.status == CERTIFIED else None, wit, status=_STATUS_TO_REPORT[o.status]
                       if o.status != CERTIFIED else (PASS if ok else FAIL))
    # grading: f(λ)g(ρ)α = α f(λ+1)g(ρ+1), f(λ)g(ρ)β = β f(λ+1)g(ρ-1)
    fg = Scalar.symbol("f", "l") * Scalar.symbol("g", "r")
    for label, fam, shift in (("grading-alpha", alpha, {"l": 1, "r": 1}), ("grading-beta", beta, {"l": 1, "r": -1})):
        right = fg.shifted(shift)
        for K in fam:
            vals = lambda name, arg: Scalar.symbol(name, "", arg)
            lhs = fg.evaluate({"l": int(K.k), "r": int(K.m)}, vals)
            rhs = right.evaluate({"l": int(K.l), "r": int(K.n)}, vals)
            rep.record(label, lhs == rhs, {"block": list(K)})
    # coproducts: Δ(α) = Δ(1)(α⊗α − q⁻¹ β⊗β*), Δ(β) = Δ(1)(β⊗α* + α⊗β)
    def tensor_family(X, Y, coef):
        by_upper: dict = {}
        for K, y in Y.items():
            by_upper.setdefault(K.upper, []).append((K, y))
        out: dict = {}
        for K1, a in X.items():
            for K2, b in by_upper.get(K1.lower, ()):
                tgt = Square(K1.k, K1.l, K2.m, K2.n)
                blk = out.setdefault(tgt, {})
                for w1, c1 in a.items():
                    for w2, c2 in b.items():
                        _tadd(blk, (w1, w2), coef * c1 * c2)
        return out

    def tensor_delta(fam):
        return {K: p.coproduct(x) for K, x in fam.items()}

    def tsub(A, *Bs):
        out = {K: dict(v) for K, v in A.items()}
        for B in Bs:
            for K, blk in B.items():
                tgt = out.setdefault(K, {})
                for k, c in blk.items():
                    _tadd(tgt, k, -c)
        return out

    checks = {
        "coproduct-alpha": tsub(tensor_delta(alpha), tensor_family(alpha, alpha, Scalar(1)),
                                tensor_family(beta, bstar, -1 / rq)),
        "coproduct-beta": tsub(tensor_delta(beta), tensor_family(beta, astar, Scalar(1)),
                               tensor_family(alpha, beta, Scalar(1))),
    }
    for name, fam in checks.items():
        for K in sorted(fam, key=lambda K: tuple(int(v) for v in K)):
            blk = fam[K]
            verts = {K.k, K.l, K.m, K.n}
            if not _trusted(p, verts, margin):
                rep.record(name, None, None, status=SKIPPED)
                continue
            # the sum over intermediate edges must be complete for every leg
            rem, wit = reduce_tensor(p, blk, d)
            ok = wit is not None and wit.replay(p)
            rep.record(name, ok, None if ok else {"block": list(K),
                                                  "remainder": {f"{word_str(a)} ⊗ {word_str(b)}": str(c)
                                                                for (a, b), c in list(rem.items())[:8]}})
    # Δ(1) = Σ_k ρ_k ⊗ λ_k on the window
    total: dict = {}
    for v in walk.vertices:
        for w in walk.vertices:
            for k, c in p.coproduct(p.unit(v, w)).items():
                _tadd(total, k, c)
    expected: dict = {}
    for z in walk.vertices:
        for v in walk.vertices:
            for w in walk.vertices:
                _tadd(expected, ((One(v, z),), (One(z, w),)), Scalar(1))
    rep.record("unit-coproduct", total == expected)
    return rep


# --------------------------------------------------------------------------
# truncated Hopf data for one-vertex walks

def truncated_hopf_data(p: Presentation, d: int = 2) -> PartialHopfData:
    """Normal-form words of degree ``≤ d`` with every structure map that stays inside that degree.

    Products that would exceed degree ``d`` are listed as truncated.  Only
    one-vertex walks are supported, where the quotient is an ordinary Hopf
    algebra filtered by degree.
    """
    walk = p.walk
    if len(walk.vertices) != 1:
        raise PresentationError("truncated data is built for one-vertex walks only")
    v = walk.vertices[0]
    K = Square(v, v, v, v)
    span = p.span(K, d)
    basis = span.normal_words()
    pos = {w: i for i, w in enumerate(basis)}
    labels = [word_str(w) for w in basis]
    grades = [K] * len(basis)

    def nf(x: Mapping) -> dict:
        rem, _ = span.reduce(p.eliminate_stars(x))
        out = {}
        for w, c in rem.items():
            if w not in pos:
                raise PresentationError(f"normal form left the basis at {word_str(w)}")
            out[pos[w]] = c
        return out

    product: dict = {}
    truncated: set = set()
    for i, a in enumerate(basis):
        for j, b in enumerate(basis):
            w = p.wmul(a, b)
            if word_length(w) > d:
                truncated.add((i, j))
            else:
                product[(i, j)] = nf({w: Scalar(1)})
    coproduct: dict = {}
    for i, a in enumerate(basis):
        t: dict = {}
        for (w1, w2), c in p.coproduct_word(a).items():
            left, right = nf({w1: Scalar(1)}), nf({w2: Scalar(1)})
            for x, c1 in left.items():
                for y, c2 in right.items():
                    _tadd(t, (x, y), c * c1 * c2)
        coproduct[i] = t
    counit = {i: p.counit_word(w) for i, w in enumerate(basis) if p.counit_word(w)}
    unit_idx = pos[(One(v, v),)]
    units = {(v, v): {unit_idx: Scalar(1)}}
    antipode = {i: nf(p.antipode({w: Scalar(1)})) for i, w in enumerate(basis)}
    star_map = {i: nf(p.star({w: Scalar(1)})) for i, w in enumerate(basis)}
    # Haar functional: invariant on both sides and 1 on the unit
    n = len(basis)
    rows = []
    for i in range(n):
        for side in (0, 1):
            eq = [[Scalar(0)] * n for _ in range(n)]
            for (x, y), c in coproduct[i].items():
                if side == 0:
                    eq[y][x] = eq[y][x] + c      # (φ⊗id)Δ(a) = φ(a)1
                else:
                    eq[x][y] = eq[x][y] + c      # (id⊗φ)Δ(a) = φ(a)1
            eq[unit_idx][i] = eq[unit_idx][i] - 1
            rows.extend(eq)
    null = linalg.nullspace(rows, n)
    integral = None
    if len(null) == 1:
        vec = null[0]
        scale = vec[unit_idx]
        if scale:
            integral = {i: c / scale for i, c in enumerate(vec) if c}
    return PartialHopfData((v,), labels, grades, product, coproduct, counit, units, antipode,
                           star_map, integral, truncated, name=f"{p.name} degree<={d}")


def generating_corep(data: PartialHopfData, p: Presentation):
    """The matrix ``(u[e,f])`` of a one-vertex walk as a corepresentation of its truncated data."""
    from .corep import Corep

    walk = p.walk
    v = walk.vertices[0]
    edges = walk.block_edges(v, v)
    space = BigradedSpace((v,), {(v, v): len(edges)})
    blk = {}
    for i, e in enumerate(edges):
        for j, f in enumerate(edges):
            lab = word_str((U(e, f),))
            if lab in data.index:
                blk[(i, j)] = {data.index[lab]: Scalar(1)}
            else:
                rem, _ = p.span(Square(v, v, v, v), 2).reduce({(U(e, f),): Scalar(1)})
                blk[(i, j)] = {data.index[word_str(w)]: c for w, c in rem.items()}
    return Corep(data, space, {Square(v, v, v, v): blk}, name="u")
