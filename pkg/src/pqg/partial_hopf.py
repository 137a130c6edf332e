"""Finitely supported partial Hopf *-algebras and their axiom verifiers.

Elements of the total algebra are sparse dicts ``{basis index: Scalar}``;
elements of ``A ⊗ A`` are sparse dicts ``{(i, j): Scalar}``.  Every basis
element carries its square ``(k l; m n)``.  Products follow the horizontal
composition of squares, coproducts the vertical one.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from . import linalg
from .grading import Square
from .report import SKIPPED, VerificationReport, parallel_map
from .scalars import Scalar, as_scalar


class TruncationError(RuntimeError):
    """A structure constant lies outside the truncation window."""


class InconsistencyError(ValueError):
    pass


class SchemaError(ValueError):
    """Malformed input document; ``path`` is a JSON pointer."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path or '/'}: {message}")
        self.path = path
        self.message = message


# --------------------------------------------------------------------------
# sparse helpers

def vadd(a: dict, b: dict, coef=1) -> dict:
    out = dict(a)
    for k, v in b.items():
        nv = out.get(k, 0) + v * coef
        if nv:
            out[k] = nv
        else:
            out.pop(k, None)
    return out


def vscale(a: dict, c) -> dict:
    if not c:
        return {}
    return {k: v * c for k, v in a.items()}


def vclean(a: dict) -> dict:
    return {k: Scalar(v) for k, v in a.items() if v}


def vequal(a: dict, b: dict) -> bool:
    return not vadd(a, b, -1)


def tflip(t: dict) -> dict:
    return {(j, i): c for (i, j), c in t.items()}


# --------------------------------------------------------------------------
# the data structure

@dataclass
class PartialHopfData:
    objects: tuple
    labels: list
    grades: list
    product: dict = field(default_factory=dict)
    coproduct: dict = field(default_factory=dict)
    counit: dict = field(default_factory=dict)
    units: dict = field(default_factory=dict)
    antipode: dict | None = None
    star_map: dict | None = None
    integral: dict | None = None
    truncated: set = field(default_factory=set)
    name: str = ""

    def __post_init__(self):
        self.objects = tuple(self.objects)
        self.grades = [Square(*g) for g in self.grades]
        if len(self.labels) != len(self.grades):
            raise ValueError("labels and grades differ in length")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("basis labels must be unique")
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        self.blocks: dict = defaultdict(list)
        self._by_left: dict = defaultdict(list)
        self._by_right: dict = defaultdict(list)
        for i, g in enumerate(self.grades):
            self.blocks[g].append(i)
        order = {o: n for n, o in enumerate(self.objects)}
        self.blocks = dict(sorted(self.blocks.items(),
                                  key=lambda kv: tuple(order[x] for x in kv[0])))
        for i, g in enumerate(self.grades):
            self._by_left[g.left].append(i)
            self._by_right[g.right].append(i)

    # -- shape ---------------------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.labels)

    def block(self, sq) -> list:
        return self.blocks.get(Square(*sq), [])

    def block_dim(self, sq) -> int:
        return len(self.block(sq))

    def composable_right(self, i: int) -> list:
        """Basis indices ``j`` with ``b_i b_j`` grade-composable."""
        return self._by_left.get(self.grades[i].right, [])

    # -- algebra -------------------------------------------------------------
    def mul_basis(self, i: int, j: int) -> dict:
        if self.grades[i].right != self.grades[j].left:
            return {}
        if (i, j) in self.truncated:
            raise TruncationError(f"product {self.labels[i]}·{self.labels[j]} is outside the window")
        return self.product.get((i, j), {})

    def mul(self, a: dict, b: dict) -> dict:
        out: dict = {}
        for i, x in a.items():
            right = self.grades[i].right
            for j, y in b.items():
                if self.grades[j].left != right:
                    continue
                for k, c in self.mul_basis(i, j).items():
                    out[k] = out.get(k, 0) + x * y * c
        return {k: v for k, v in out.items() if v}

    def tmul(self, s: dict, t: dict) -> dict:
        out: dict = {}
        for (i1, i2), x in s.items():
            for (j1, j2), y in t.items():
                if self.grades[i1].right != self.grades[j1].left:
                    continue
                if self.grades[i2].right != self.grades[j2].left:
                    continue
                p1 = self.mul_basis(i1, j1)
                if not p1:
                    continue
                p2 = self.mul_basis(i2, j2)
                for k1, c1 in p1.items():
                    for k2, c2 in p2.items():
                        key = (k1, k2)
                        out[key] = out.get(key, 0) + x * y * c1 * c2
        return {k: v for k, v in out.items() if v}

    def delta(self, a: dict) -> dict:
        out: dict = {}
        for i, x in a.items():
            for key, c in self.coproduct.get(i, {}).items():
                out[key] = out.get(key, 0) + x * c
        return {k: v for k, v in out.items() if v}

    def eps(self, a: dict) -> Scalar:
        total = Scalar(0)
        for i, x in a.items():
            c = self.counit.get(i)
            if c:
                total = total + x * c
        return total

    def S(self, a: dict) -> dict:
        if self.antipode is None:
            raise ValueError("no antipode in this datum")
        out: dict = {}
        for i, x in a.items():
            for k, c in self.antipode.get(i, {}).items():
                out[k] = out.get(k, 0) + x * c
        return {k: v for k, v in out.items() if v}

    def star(self, a: dict) -> dict:
        if self.star_map is None:
            raise ValueError("no star structure in this datum")
        out: dict = {}
        for i, x in a.items():
            xc = x.conjugate()
            for k, c in self.star_map.get(i, {}).items():
                out[k] = out.get(k, 0) + xc * c
        return {k: v for k, v in out.items() if v}

    def phi(self, a: dict) -> Scalar:
        if self.integral is None:
            raise ValueError("no integral in this datum")
        total = Scalar(0)
        for i, x in a.items():
            c = self.integral.get(i)
            if c:
                total = total + x * c
        return total

    def unit(self, k, m) -> dict:
        return dict(self.units.get((k, m), {}))

    def lam(self, p) -> dict:
        """``λ_p = Σ_l 1(p|l)`` as a finite sum."""
        out: dict = {}
        for l in self.objects:
            out = vadd(out, self.unit(p, l))
        return out

    def rho(self, p) -> dict:
        out: dict = {}
        for k in self.objects:
            out = vadd(out, self.unit(k, p))
        return out

    def basis(self, i: int) -> dict:
        return {i: Scalar(1)}

    def grade_of(self, a: dict) -> Square | None:
        grades = {self.grades[i] for i in a}
        if len(grades) == 1:
            return next(iter(grades))
        return None

    def is_homogeneous(self, a: dict) -> bool:
        return len({self.grades[i] for i in a}) == 1

    def tensor_apply(self, t: dict, f1, f2) -> dict:
        """Apply ``f1 ⊗ f2`` (maps on sparse vectors) to a tensor."""
        out: dict = {}
        for (i, j), c in t.items():
            left = f1({i: Scalar(1)})
            right = f2({j: Scalar(1)})
            for a, x in left.items():
                for b, y in right.items():
                    out[(a, b)] = out.get((a, b), 0) + c * x * y
        return {k: v for k, v in out.items() if v}

    def describe(self, a: dict) -> dict:
        return {self.labels[i]: str(c) for i, c in sorted(a.items())}

    def describe_tensor(self, t: dict) -> dict:
        return {f"{self.labels[i]}⊗{self.labels[j]}": str(c) for (i, j), c in sorted(t.items())}


# --------------------------------------------------------------------------
# JSON

def _parse_vector(raw, n, path):
    if not isinstance(raw, list) or len(raw) != n:
        raise SchemaError(path, f"expected an array of length {n}")
    out = []
    for t, x in enumerate(raw):
        try:
            out.append(as_scalar(x))
        except ValueError as exc:
            raise SchemaError(f"{path}/{t}", str(exc)) from None
    return out


def _parse_array(raw, shape, path):
    if len(shape) == 1:
        return _parse_vector(raw, shape[0], path)
    if not isinstance(raw, list) or len(raw) != shape[0]:
        raise SchemaError(path, f"expected an array of length {shape[0]}")
    return [_parse_array(x, shape[1:], f"{path}/{t}") for t, x in enumerate(raw)]


def _square_key(text, path) -> Square:
    try:
        return Square.parse(text)
    except ValueError as exc:
        raise SchemaError(path, str(exc)) from None


def from_json(doc: Mapping) -> PartialHopfData:
    """Build a datum from the block-array JSON format."""
    if doc.get("kind") != "partial_hopf":
        raise SchemaError("/kind", "expected 'partial_hopf'")
    objects = doc.get("objects")
    if not isinstance(objects, list) or not objects:
        raise SchemaError("/objects", "expected a nonempty array of object names")
    objects = [str(o) for o in objects]
    for o in objects:
        if any(ch in o for ch in ",;|"):
            raise SchemaError("/objects", f"object name {o!r} contains a reserved character")
    labels, grades = [], []
    blocks = doc.get("blocks", {})
    if not isinstance(blocks, dict):
        raise SchemaError("/blocks", "expected an object keyed by squares")
    block_index: dict = {}
    for key in blocks:
        sq = _square_key(key, f"/blocks/{key}")
        if any(x not in objects for x in sq):
            raise SchemaError(f"/blocks/{key}", "unknown object in square")
        block_index[sq] = []
        for lab in blocks[key]:
            block_index[sq].append(len(labels))
            labels.append(str(lab))
            grades.append(sq)
    data_kwargs: dict = {}

    def dim(sq):
        return len(block_index.get(sq, []))

    product = {}
    for key, arr in doc.get("product", {}).items():
        path = f"/product/{key}"
        try:
            ka, kb = key.split("|")
        except ValueError:
            raise SchemaError(path, "expected 'K|L'") from None
        a, b = _square_key(ka, path), _square_key(kb, path)
        if a.right != b.left:
            raise SchemaError(path, "squares are not composable")
        c = Square(a.k, b.l, a.m, b.n)
        vals = _parse_array(arr, (dim(a), dim(b), dim(c)), path)
        for x, i in enumerate(block_index.get(a, [])):
            for y, j in enumerate(block_index.get(b, [])):
                vec = {block_index[c][z]: v for z, v in enumerate(vals[x][y]) if v}
                if vec:
                    product[(i, j)] = vec
    coproduct: dict = {}
    for key, arr in doc.get("coproduct", {}).items():
        path = f"/coproduct/{key}"
        try:
            ka, rs = key.split("|")
            r, s = rs.split(",")
        except ValueError:
            raise SchemaError(path, "expected 'K|r,s'") from None
        a = _square_key(ka, path)
        left, right = Square(a.k, a.l, r, s), Square(r, s, a.m, a.n)
        vals = _parse_array(arr, (dim(a), dim(left), dim(right)), path)
        for x, i in enumerate(block_index.get(a, [])):
            for y, j in enumerate(block_index.get(left, [])):
                for z, k in enumerate(block_index.get(right, [])):
                    if vals[x][y][z]:
                        coproduct.setdefault(i, {})[(j, k)] = vals[x][y][z]
    counit = {}
    for key, arr in doc.get("counit", {}).items():
        a = _square_key(key, f"/counit/{key}")
        for x, v in enumerate(_parse_vector(arr, dim(a), f"/counit/{key}")):
            if v:
                counit[block_index[a][x]] = v
    units = {}
    for key, arr in doc.get("units", {}).items():
        try:
            k, m = key.split(",")
        except ValueError:
            raise SchemaError(f"/units/{key}", "expected 'k,m'") from None
        sq = Square(k, k, m, m)
        vec = {block_index[sq][x]: v for x, v in
               enumerate(_parse_vector(arr, dim(sq), f"/units/{key}")) if v}
        if vec:
            units[(k, m)] = vec

    def matrix_map(section, target_of):
        out = {}
        for key, arr in doc[section].items():
            path = f"/{section}/{key}"
            a = _square_key(key, path)
            t = target_of(a)
            vals = _parse_array(arr, (dim(a), dim(t)), path)
            for x, i in enumerate(block_index.get(a, [])):
                vec = {block_index[t][y]: v for y, v in enumerate(vals[x]) if v}
                if vec:
                    out[i] = vec
        return out

    antipode = matrix_map("antipode", lambda a: a.circ_bullet()) if "antipode" in doc else None
    star = matrix_map("star", lambda a: a.circ()) if "star" in doc else None
    integral = None
    if "integral" in doc:
        integral = {}
        for key, arr in doc["integral"].items():
            a = _square_key(key, f"/integral/{key}")
            for x, v in enumerate(_parse_vector(arr, dim(a), f"/integral/{key}")):
                if v:
                    integral[block_index[a][x]] = v
    truncated = set()
    for t, key in enumerate(doc.get("truncated_products", [])):
        try:
            la, lb = key.split("|")
        except ValueError:
            raise SchemaError(f"/truncated_products/{t}", "expected 'label|label'") from None
        lab = {l: i for i, l in enumerate(labels)}
        truncated.add((lab[la], lab[lb]))
    return PartialHopfData(objects, labels, grades, product, coproduct, counit, units,
                           antipode, star, integral, truncated, name=str(doc.get("name", "")))


def to_json(data: PartialHopfData) -> dict:
    """Inverse of :func:`from_json`; zero blocks are omitted."""
    pos = {}
    for sq, idx in data.blocks.items():
        for x, i in enumerate(idx):
            pos[i] = x
    doc: dict = {"kind": "partial_hopf", "name": data.name, "objects": list(data.objects),
                 "blocks": {sq.key(): [data.labels[i] for i in idx] for sq, idx in data.blocks.items()}}

    def zeros_like(*shape):
        if len(shape) == 1:
            return ["0"] * shape[0]
        return [zeros_like(*shape[1:]) for _ in range(shape[0])]

    product: dict = {}
    for (i, j), vec in sorted(data.product.items()):
        a, b = data.grades[i], data.grades[j]
        c = Square(a.k, b.l, a.m, b.n)
        key = f"{a.key()}|{b.key()}"
        arr = product.setdefault(key, zeros_like(len(data.blocks[a]), len(data.blocks[b]),
                                                 len(data.blocks.get(c, []))))
        for k, v in vec.items():
            arr[pos[i]][pos[j]][pos[k]] = str(v)
    doc["product"] = product
    coproduct: dict = {}
    for i, t in sorted(data.coproduct.items()):
        a = data.grades[i]
        for (j, k), v in t.items():
            r, s = data.grades[j].m, data.grades[j].n
            key = f"{a.key()}|{r},{s}"
            arr = coproduct.setdefault(key, zeros_like(
                len(data.blocks[a]), len(data.blocks[data.grades[j]]), len(data.blocks[data.grades[k]])))
            arr[pos[i]][pos[j]][pos[k]] = str(v)
    doc["coproduct"] = coproduct
    counit: dict = {}
    for i, v in sorted(data.counit.items()):
        a = data.grades[i]
        counit.setdefault(a.key(), ["0"] * len(data.blocks[a]))[pos[i]] = str(v)
    doc["counit"] = counit
    units: dict = {}
    for (k, m), vec in data.units.items():
        sq = Square(k, k, m, m)
        arr = units.setdefault(f"{k},{m}", ["0"] * len(data.blocks[sq]))
        for i, v in vec.items():
            arr[pos[i]] = str(v)
    doc["units"] = units

    def dump_map(mapping, target_of):
        out: dict = {}
        for i, vec in sorted(mapping.items()):
            a = data.grades[i]
            t = target_of(a)
            arr = out.setdefault(a.key(), zeros_like(len(data.blocks[a]), len(data.blocks.get(t, []))))
            for k, v in vec.items():
                arr[pos[i]][pos[k]] = str(v)
        return out

    if data.antipode is not None:
        doc["antipode"] = dump_map(data.antipode, lambda a: a.circ_bullet())
    if data.star_map is not None:
        doc["star"] = dump_map(data.star_map, lambda a: a.circ())
    if data.integral is not None:
        integral: dict = {}
        for i, v in sorted(data.integral.items()):
            a = data.grades[i]
            integral.setdefault(a.key(), ["0"] * len(data.blocks[a]))[pos[i]] = str(v)
        doc["integral"] = integral
    if data.truncated:
        doc["truncated_products"] = sorted(f"{data.labels[i]}|{data.labels[j]}" for i, j in data.truncated)
    return doc


def dumps(data: PartialHopfData) -> str:
    return json.dumps(to_json(data), sort_keys=True, indent=1, ensure_ascii=False) + "\n"


# --------------------------------------------------------------------------
# a direct builder for the pair groupoid (independent of reconstruction)

def pair_groupoid(objects: Iterable) -> PartialHopfData:
    """Function algebra of the pair groupoid: units ``1(k|m)`` only."""
    objs = [str(o) for o in objects]
    if not objs:
        raise ValueError("the object set must be nonempty")
    labels, grades, pos = [], [], {}
    for k in objs:
        for m in objs:
            pos[(k, m)] = len(labels)
            labels.append(f"1({k}|{m})")
            grades.append(Square(k, k, m, m))
    one = Scalar(1)
    product = {(pos[(k, m)], pos[(k, m)]): {pos[(k, m)]: one} for k in objs for m in objs}
    coproduct = {pos[(k, m)]: {(pos[(k, l)], pos[(l, m)]): one for l in objs} for k in objs for m in objs}
    counit = {pos[(k, k)]: one for k in objs}
    units = {(k, m): {pos[(k, m)]: one} for k in objs for m in objs}
    antipode = {pos[(k, m)]: {pos[(m, k)]: one} for k in objs for m in objs}
    star = {pos[(k, m)]: {pos[(k, m)]: one} for k in objs for m in objs}
    integral = {pos[(k, m)]: one for k in objs for m in objs}
    return PartialHopfData(objs, labels, grades, product, coproduct, counit, units,
                           antipode, star, integral, name=f"pair-groupoid-{len(objs)}")


def product_hopf(a: PartialHopfData, b: PartialHopfData) -> PartialHopfData:
    """Tensor product of two data over the product object set ``I_a × I_b``."""
    def obj(x, y):
        return f"{x}.{y}"

    objects = [obj(x, y) for x in a.objects for y in b.objects]
    labels, grades, pos = [], [], {}
    for i in range(a.dim):
        for j in range(b.dim):
            ga, gb = a.grades[i], b.grades[j]
            pos[(i, j)] = len(labels)
            labels.append(f"{a.labels[i]}⊗{b.labels[j]}")
            grades.append(Square(obj(ga.k, gb.k), obj(ga.l, gb.l), obj(ga.m, gb.m), obj(ga.n, gb.n)))
    product = {}
    for (i1, i2), v1 in a.product.items():
        for (j1, j2), v2 in b.product.items():
            vec = {pos[(x, y)]: c1 * c2 for x, c1 in v1.items() for y, c2 in v2.items()}
            product[(pos[(i1, j1)], pos[(i2, j2)])] = vec
    coproduct = {}
    for i, t1 in a.coproduct.items():
        for j, t2 in b.coproduct.items():
            coproduct[pos[(i, j)]] = {(pos[(x1, y1)], pos[(x2, y2)]): c1 * c2
                                      for (x1, x2), c1 in t1.items() for (y1, y2), c2 in t2.items()}
    counit = {pos[(i, j)]: c1 * c2 for i, c1 in a.counit.items() for j, c2 in b.counit.items()}
    units = {}
    for (k, m), v1 in a.units.items():
        for (p, q), v2 in b.units.items():
            units[(obj(k, p), obj(m, q))] = {pos[(x, y)]: c1 * c2 for x, c1 in v1.items() for y, c2 in v2.items()}

    def tensor_map(m1, m2):
        if m1 is None or m2 is None:
            return None
        return {pos[(i, j)]: {pos[(x, y)]: c1 * c2 for x, c1 in v1.items() for y, c2 in v2.items()}
                for i, v1 in m1.items() for j, v2 in m2.items()}

    integral = None
    if a.integral is not None and b.integral is not None:
        integral = {pos[(i, j)]: c1 * c2 for i, c1 in a.integral.items() for j, c2 in b.integral.items()}
    return PartialHopfData(objects, labels, grades, product, coproduct, counit, units,
                           tensor_map(a.antipode, b.antipode), tensor_map(a.star_map, b.star_map),
                           integral, name=f"{a.name}×{b.name}")


# --------------------------------------------------------------------------
# verifiers

def _try(report, axiom, fn, witness):
    try:
        return fn()
    except TruncationError as exc:
        report.record(axiom, None, {"where": witness, "reason": str(exc)}, status=SKIPPED)
        return None


def verify_partial_algebra(data: PartialHopfData) -> VerificationReport:
    rep = VerificationReport("partial-algebra")
    rep.declare("associativity")
    rep.declare("unit")
    n = data.dim

    def triple_checks(i):
        out = []
        for j in data.composable_right(i):
            for k in data.composable_right(j):
                def both():
                    left = data.mul(data.mul({i: Scalar(1)}, {j: Scalar(1)}), {k: Scalar(1)})
                    right = data.mul({i: Scalar(1)}, data.mul({j: Scalar(1)}, {k: Scalar(1)}))
                    return left, right
                try:
                    left, right = both()
                except TruncationError as exc:
                    out.append(("skip", (i, j, k), str(exc)))
                    continue
                out.append((vequal(left, right), (i, j, k), (left, right)))
        return out

    for results in parallel_map(triple_checks, range(n)):
        for ok, (i, j, k), extra in results:
            where = {"triple": [data.labels[i], data.labels[j], data.labels[k]],
                     "grades": [data.grades[i].key(), data.grades[j].key(), data.grades[k].key()]}
            if ok == "skip":
                rep.record("associativity", None, {"where": where, "reason": extra}, status=SKIPPED)
            elif ok:
                rep.record("associativity", True)
            else:
                left, right = extra
                where.update({"(ab)c": data.describe(left), "a(bc)": data.describe(right)})
                rep.record("associativity", False, where)
    for i in range(n):
        g = data.grades[i]
        b = {i: Scalar(1)}
        for side, (u, prod) in (("left", (data.unit(g.k, g.m), lambda u: data.mul(u, b))),
                                ("right", (data.unit(g.l, g.n), lambda u: data.mul(b, u)))):
            got = _try(rep, "unit", lambda: prod(u), {"element": data.labels[i], "side": side})
            if got is None:
                continue
            rep.record("unit", vequal(got, b),
                       {"element": data.labels[i], "grade": g.key(), "side": side,
                        "got": data.describe(got)})
    return rep


def verify_partial_bialgebra(data: PartialHopfData) -> VerificationReport:
    rep = VerificationReport("partial-bialgebra")
    one = Scalar(1)
    # (1) comultiplication of units
    for k in data.objects:
        for m in data.objects:
            u = data.unit(k, m)
            got = data.delta(u)
            want: dict = {}
            for l in data.objects:
                left, right = data.unit(k, l), data.unit(l, m)
                for i, x in left.items():
                    for j, y in right.items():
                        want[(i, j)] = want.get((i, j), 0) + x * y
            want = {kk: v for kk, v in want.items() if v}
            rep.record("units-comultiplication", vequal(got, want),
                       {"unit": f"1({k}|{m})", "delta": data.describe_tensor(got),
                        "expected": data.describe_tensor(want)})
    # (2) counit of multiplication
    for i in range(data.dim):
        for j in data.composable_right(i):
            ab = _try(rep, "counit-multiplicative", lambda: data.mul({i: one}, {j: one}),
                      [data.labels[i], data.labels[j]])
            if ab is None:
                continue
            lhs = data.eps(ab)
            rhs = data.eps({i: one}) * data.eps({j: one})
            rep.record("counit-multiplicative", lhs == rhs,
                       {"pair": [data.labels[i], data.labels[j]], "eps(ab)": str(lhs),
                        "eps(a)eps(b)": str(rhs)})
    # (3) non-degeneracy
    for k in data.objects:
        e = data.eps(data.unit(k, k))
        rep.record("non-degeneracy", e == 1, {"object": k, "eps(1(k|k))": str(e)})
    # (4) finiteness holds on finite data; record the bound actually seen
    for i in range(data.dim):
        rep.record("finiteness", True)
    # (5) multiplicativity of Δ
    for i in range(data.dim):
        for j in data.composable_right(i):
            def both():
                ab = data.mul({i: one}, {j: one})
                return data.delta(ab), data.tmul(data.delta({i: one}), data.delta({j: one}))
            res = _try(rep, "comultiplication-multiplicative", both, [data.labels[i], data.labels[j]])
            if res is None:
                continue
            lhs, rhs = res
            rep.record("comultiplication-multiplicative", vequal(lhs, rhs),
                       {"pair": [data.labels[i], data.labels[j]],
                        "delta(ab)": data.describe_tensor(lhs), "delta(a)delta(b)": data.describe_tensor(rhs)})
    # coalgebra axioms
    for i in range(data.dim):
        g = data.grades[i]
        d = data.delta({i: one})
        bad_grade = [(a, b) for (a, b) in d
                     if data.grades[a].upper != g.upper or data.grades[b].lower != g.lower
                     or data.grades[a].lower != data.grades[b].upper]
        rep.record("coproduct-grading", not bad_grade,
                   {"element": data.labels[i], "offending": [[data.labels[a], data.labels[b]] for a, b in bad_grade]})
        left: dict = {}
        right: dict = {}
        for (a, b), c in d.items():
            for (a1, a2), c1 in data.coproduct.get(a, {}).items():
                key = (a1, a2, b)
                left[key] = left.get(key, 0) + c * c1
            for (b1, b2), c2 in data.coproduct.get(b, {}).items():
                key = (a, b1, b2)
                right[key] = right.get(key, 0) + c * c2
        left = {k: v for k, v in left.items() if v}
        right = {k: v for k, v in right.items() if v}
        rep.record("coassociativity", vequal(left, right), {"element": data.labels[i]})
        el: dict = {}
        er: dict = {}
        for (a, b), c in d.items():
            ea = data.counit.get(a)
            if ea:
                el[b] = el.get(b, 0) + c * ea
            eb = data.counit.get(b)
            if eb:
                er[a] = er.get(a, 0) + c * eb
        el = {k: v for k, v in el.items() if v}
        er = {k: v for k, v in er.items() if v}
        ok = vequal(el, {i: one}) and vequal(er, {i: one})
        rep.record("counitality", ok, {"element": data.labels[i], "(eps⊗id)": data.describe(el),
                                       "(id⊗eps)": data.describe(er)})
    for i, e in data.counit.items():
        g = data.grades[i]
        rep.record("counit-support", g.upper == g.lower or not e,
                   {"element": data.labels[i], "grade": g.key()})
    return rep


def compute_projections(data: PartialHopfData, a: dict):
    """``Π^L(a)``, ``Π^R(a)`` as coefficient families and ``E`` as a family of pairs.

    ``Π^L(a) = Σ_p ε(λ_p a) λ_p`` is returned as ``{p: ε(λ_p a)}`` and
    ``Π^R(a) = Σ_p ε(a ρ_p) ρ_p`` as ``{p: ε(a ρ_p)}``; ``E`` is the list of
    ``(l, ("rho", l), ("lambda", l))`` standing for ``Σ_l ρ_l ⊗ λ_l``.
    """
    pil, pir = {}, {}
    for p in data.objects:
        lp_a = {i: c for i, c in a.items() if data.grades[i].k == p}
        a_rp = {i: c for i, c in a.items() if data.grades[i].n == p}
        x, y = data.eps(lp_a), data.eps(a_rp)
        if x:
            pil[p] = x
        if y:
            pir[p] = y
    e = [(l, ("rho", l), ("lambda", l)) for l in data.objects]
    return pil, pir, e


def family_element(data: PartialHopfData, family: Mapping, kind: str) -> dict:
    """Materialise ``Σ_p c_p λ_p`` (``kind='lambda'``) or ``Σ_p c_p ρ_p``."""
    out: dict = {}
    for p, c in family.items():
        out = vadd(out, data.lam(p) if kind == "lambda" else data.rho(p), c)
    return out


def E_element(data: PartialHopfData) -> dict:
    """``E = Σ_l ρ_l ⊗ λ_l`` as a finite tensor."""
    out: dict = {}
    for l in data.objects:
        for i, x in data.rho(l).items():
            for j, y in data.lam(l).items():
                out[(i, j)] = out.get((i, j), 0) + x * y
    return {k: v for k, v in out.items() if v}


def _sum_a1_S_a2(data, a):
    out: dict = {}
    for (x, y), c in data.delta(a).items():
        out = vadd(out, data.mul({x: Scalar(1)}, data.S({y: Scalar(1)})), c)
    return out


def _sum_S_a1_a2(data, a):
    out: dict = {}
    for (x, y), c in data.delta(a).items():
        out = vadd(out, data.mul(data.S({x: Scalar(1)}), {y: Scalar(1)}), c)
    return out


def verify_antipode(data: PartialHopfData) -> VerificationReport:
    rep = VerificationReport("antipode")
    one = Scalar(1)
    if data.antipode is None:
        rep.record("antipode-present", False, {"reason": "no antipode supplied"})
        return rep
    for i in range(data.dim):
        a = {i: one}
        g = data.grades[i]
        pil, pir, _ = compute_projections(data, a)
        got = _try(rep, "antipode-left", lambda: _sum_a1_S_a2(data, a), data.labels[i])
        if got is not None:
            want = family_element(data, pil, "lambda")
            rep.record("antipode-left", vequal(got, want),
                       {"element": data.labels[i], "grade": g.key(),
                        "a1S(a2)": data.describe(got), "PiL(a)": data.describe(want)})
        got = _try(rep, "antipode-right", lambda: _sum_S_a1_a2(data, a), data.labels[i])
        if got is not None:
            want = family_element(data, pir, "rho")
            rep.record("antipode-right", vequal(got, want),
                       {"element": data.labels[i], "grade": g.key(),
                        "S(a1)a2": data.describe(got), "PiR(a)": data.describe(want)})
        img = data.S(a)
        target = g.circ_bullet()
        rep.record("antipode-grading", all(data.grades[j] == target for j in img),
                   {"element": data.labels[i], "image": data.describe(img), "expected-grade": target.key()})
        e1, e2 = data.eps(img), data.eps(a)
        rep.record("counit-antipode", e1 == e2, {"element": data.labels[i], "eps(S(a))": str(e1),
                                                  "eps(a)": str(e2)})
        lhs = data.delta(img)
        rhs = tflip(data.tensor_apply(data.delta(a), data.S, data.S))
        rep.record("antipode-anticomultiplicative", vequal(lhs, rhs),
                   {"element": data.labels[i], "delta(S(a))": data.describe_tensor(lhs),
                    "(S⊗S)delta_op(a)": data.describe_tensor(rhs)})
        for j in data.composable_right(i):
            b = {j: one}
            res = _try(rep, "antipode-antimultiplicative",
                       lambda: (data.S(data.mul(a, b)), data.mul(data.S(b), data.S(a))),
                       [data.labels[i], data.labels[j]])
            if res is None:
                continue
            rep.record("antipode-antimultiplicative", vequal(*res),
                       {"pair": [data.labels[i], data.labels[j]], "S(ab)": data.describe(res[0]),
                        "S(b)S(a)": data.describe(res[1])})
    for k in data.objects:
        for l in data.objects:
            got, want = data.S(data.unit(k, l)), data.unit(l, k)
            rep.record("antipode-units", vequal(got, want),
                       {"unit": f"1({k}|{l})", "S": data.describe(got), "expected": data.describe(want)})
    return rep


# -- canonical maps ---------------------------------------------------------

def _T1(data, t):
    out: dict = {}
    for (a, b), c in t.items():
        for (x, y), d in data.coproduct.get(a, {}).items():
            for z, e in data.mul({y: Scalar(1)}, {b: Scalar(1)}).items():
                out[(x, z)] = out.get((x, z), 0) + c * d * e
    return {k: v for k, v in out.items() if v}


def _T2(data, t):
    out: dict = {}
    for (a, b), c in t.items():
        for (x, y), d in data.coproduct.get(b, {}).items():
            for z, e in data.mul({a: Scalar(1)}, {x: Scalar(1)}).items():
                out[(z, y)] = out.get((z, y), 0) + c * d * e
    return {k: v for k, v in out.items() if v}


def _R1(data, t):
    out: dict = {}
    for (a, b), c in t.items():
        for (x, y), d in data.coproduct.get(a, {}).items():
            for z, e in data.mul(data.S({y: Scalar(1)}), {b: Scalar(1)}).items():
                out[(x, z)] = out.get((x, z), 0) + c * d * e
    return {k: v for k, v in out.items() if v}


def _R2(data, t):
    out: dict = {}
    for (a, b), c in t.items():
        for (x, y), d in data.coproduct.get(b, {}).items():
            for z, e in data.mul({a: Scalar(1)}, data.S({x: Scalar(1)})).items():
                out[(z, y)] = out.get((z, y), 0) + c * d * e
    return {k: v for k, v in out.items() if v}


def _grade_filter(data, t, test):
    return {(a, b): c for (a, b), c in t.items() if test(data.grades[a], data.grades[b])}


_IDEMPOTENTS = {
    # name: (a, b) ↦ kept iff condition
    "E1": lambda ga, gb: ga.m == gb.k,   # Σ ρ_p a ⊗ λ_p b
    "G1": lambda ga, gb: ga.n == gb.m,   # Σ a ρ_p ⊗ ρ_p b
    "E2": lambda ga, gb: ga.n == gb.l,   # Σ a ρ_p ⊗ b λ_p
    "G2": lambda ga, gb: ga.l == gb.k,   # Σ a λ_p ⊗ λ_p b
}


def verify_canonical_maps(data: PartialHopfData) -> VerificationReport:
    rep = VerificationReport("canonical-maps")
    if data.antipode is None:
        rep.record("antipode-present", False, {"reason": "no antipode supplied"})
        return rep
    maps = {1: (_T1, _R1, "E1", "G1"), 2: (_T2, _R2, "E2", "G2")}
    n = data.dim

    def row(a):
        out = []
        for b in range(n):
            t = {(a, b): Scalar(1)}
            for idx, (T, R, En, Gn) in maps.items():
                try:
                    Tt, Rt = T(data, t), R(data, t)
                    TR, RT = T(data, Rt), R(data, Tt)
                    TRT, RTR = T(data, RT), R(data, TR)
                except TruncationError as exc:
                    out.append((idx, a, b, None, str(exc)))
                    continue
                out.append((idx, a, b, {
                    f"T{idx}R{idx}=E{idx}": vequal(TR, _grade_filter(data, t, _IDEMPOTENTS[En])),
                    f"R{idx}T{idx}=G{idx}": vequal(RT, _grade_filter(data, t, _IDEMPOTENTS[Gn])),
                    f"T{idx}R{idx}T{idx}=T{idx}": vequal(TRT, Tt),
                    f"R{idx}T{idx}R{idx}=R{idx}": vequal(RTR, Rt),
                }, None))
        return out

    for results in parallel_map(row, range(n)):
        for idx, a, b, checks, err in results:
            pair = [data.labels[a], data.labels[b]]
            if checks is None:
                for name in ("T{0}R{0}=E{0}", "R{0}T{0}=G{0}", "T{0}R{0}T{0}=T{0}", "R{0}T{0}R{0}=R{0}"):
                    rep.record(name.format(idx), None, {"pair": pair, "reason": err}, status=SKIPPED)
                continue
            for name, ok in checks.items():
                rep.record(name, ok, {"pair": pair, "grades": [data.grades[a].key(), data.grades[b].key()]})
    return rep


# -- integral ---------------------------------------------------------------

def verify_integral(data: PartialHopfData) -> VerificationReport:
    rep = VerificationReport("integral")
    one = Scalar(1)
    if data.integral is None:
        rep.record("integral-present", False, {"reason": "no integral supplied"})
        return rep
    for i, c in data.integral.items():
        g = data.grades[i]
        rep.record("integral-support", (g.k == g.l and g.m == g.n) or not c,
                   {"element": data.labels[i], "grade": g.key()})
    for k in data.objects:
        v = data.phi(data.unit(k, k))
        rep.record("normalization", v == 1, {"object": k, "phi(1(k|k))": str(v)})
        for m in data.objects:
            u = data.unit(k, m)
            if u:
                v = data.phi(u)
                rep.record("units", v == 1, {"unit": f"1({k}|{m})", "phi": str(v)})
    for i in range(data.dim):
        g = data.grades[i]
        d = data.delta({i: one})
        if g.m == g.n:
            # left invariance: a ∈ A(k p; m m)
            for l in data.objects:
                got: dict = {}
                for (x, y), c in d.items():
                    gx = data.grades[x]
                    if gx.m == l and gx.n == l:
                        f = data.phi({y: one})
                        if f:
                            got = vadd(got, {x: c * f})
                want = vscale(data.unit(g.k, l), data.phi({i: one})) if g.k == g.l else {}
                rep.record("left-invariance", vequal(got, want),
                           {"element": data.labels[i], "l": l, "(id⊗phi)delta": data.describe(got),
                            "expected": data.describe(want)})
        if g.k == g.l:
            for l in data.objects:
                got = {}
                for (x, y), c in d.items():
                    gy = data.grades[y]
                    if gy.k == l and gy.l == l:
                        f = data.phi({x: one})
                        if f:
                            got = vadd(got, {y: c * f})
                want = vscale(data.unit(l, g.m), data.phi({i: one})) if g.m == g.n else {}
                rep.record("right-invariance", vequal(got, want),
                           {"element": data.labels[i], "l": l, "(phi⊗id)delta": data.describe(got),
                            "expected": data.describe(want)})
        if data.antipode is not None:
            a, b = data.phi(data.S({i: one})), data.phi({i: one})
            rep.record("phi-antipode", a == b, {"element": data.labels[i], "phi(S(a))": str(a),
                                                "phi(a)": str(b)})
    for sq, idx in data.blocks.items():
        partner = data.block(sq.circ())
        for order in ("ab", "ba"):
            def pairing():
                mat = []
                for i in idx:
                    row = []
                    for j in partner:
                        prod = data.mul({i: one}, {j: one}) if order == "ab" else data.mul({j: one}, {i: one})
                        row.append(data.phi(prod))
                    mat.append(row)
                return mat
            mat = _try(rep, f"faithfulness-{order}", pairing, sq.key())
            if mat is None:
                continue
            r = linalg.rank(mat) if partner else 0
            ok = len(partner) == len(idx) and r == len(idx)
            rep.record(f"faithfulness-{order}", ok,
                       {"block": sq.key(), "dim": len(idx), "partner-dim": len(partner), "rank": r})
    if data.star_map is not None:
        for sq, idx in data.blocks.items():
            def gram():
                stars = [data.star({i: one}) for i in idx]
                return [[data.phi(data.mul(si, {j: one})) for j in idx] for si in stars]
            g = _try(rep, "positivity", gram, sq.key())
            if g is None:
                continue
            ok, mode, witness = linalg.psd_status(g)
            status = None if not ok else ("certified-numeric" if mode != "exact" else None)
            w = {"block": sq.key(), "gram": [[str(x) for x in row] for row in g]}
            if witness:
                w.update(witness)
            rep.record("positivity", ok, w, status=status)
    return rep


# -- star -----------------------------------------------------------------

def verify_star(data: PartialHopfData) -> VerificationReport:
    rep = VerificationReport("star")
    one = Scalar(1)
    if data.star_map is None:
        rep.record("star-present", False, {"reason": "no star supplied"})
        return rep
    for i in range(data.dim):
        a = {i: one}
        g = data.grades[i]
        s = data.star(a)
        rep.record("star-grading", all(data.grades[j] == g.circ() for j in s),
                   {"element": data.labels[i], "image": data.describe(s)})
        rep.record("involutive", vequal(data.star(s), a),
                   {"element": data.labels[i], "a**": data.describe(data.star(s))})
        lhs = data.delta(s)
        rhs = data.tensor_apply(data.delta(a), data.star, data.star)
        rep.record("coproduct-compatibility", vequal(lhs, rhs),
                   {"element": data.labels[i], "delta(a*)": data.describe_tensor(lhs),
                    "(*⊗*)delta(a)": data.describe_tensor(rhs)})
        if data.antipode is not None:
            back = data.star(data.S(data.star(data.S(a))))
            rep.record("S(S(a)*)*=a", vequal(back, a), {"element": data.labels[i], "got": data.describe(back)})
        for j in data.composable_right(i):
            b = {j: one}
            res = _try(rep, "anti-multiplicative",
                       lambda: (data.star(data.mul(a, b)), data.mul(data.star(b), s)),
                       [data.labels[i], data.labels[j]])
            if res is None:
                continue
            rep.record("anti-multiplicative", vequal(*res),
                       {"pair": [data.labels[i], data.labels[j]], "(ab)*": data.describe(res[0]),
                        "b*a*": data.describe(res[1])})
    for k in data.objects:
        for m in data.objects:
            u = data.unit(k, m)
            rep.record("selfadjoint-units", vequal(data.star(u), u), {"unit": f"1({k}|{m})"})
    return rep


def verify_all(data: PartialHopfData) -> VerificationReport:
    """The full battery: algebra, bialgebra, antipode, canonical maps, integral, star."""
    rep = VerificationReport(data.name or "partial-hopf")
    rep.merge(verify_partial_algebra(data), "algebra/")
    rep.merge(verify_partial_bialgebra(data), "bialgebra/")
    if data.antipode is not None:
        rep.merge(verify_antipode(data), "antipode/")
        rep.merge(verify_canonical_maps(data), "canonical/")
    if data.integral is not None:
        rep.merge(verify_integral(data), "integral/")
    if data.star_map is not None:
        rep.merge(verify_star(data), "star/")
    return rep


# -- hyperobjects and linking structures ----------------------------------

def hyperobject_partition(data: PartialHopfData) -> list[list]:
    """Classes of ``k ∼ l ⇔ 1(k|l) ≠ 0``; raises if the relation is not an equivalence."""
    rel = {(k, l) for k in data.objects for l in data.objects if data.unit(k, l)}
    for k in data.objects:
        if (k, k) not in rel:
            raise InconsistencyError(f"1({k}|{k}) vanishes, relation is not reflexive")
    for k, l in rel:
        if (l, k) not in rel:
            raise InconsistencyError(f"1({k}|{l}) ≠ 0 but 1({l}|{k}) = 0")
    parent = {k: k for k in data.objects}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for k, l in rel:
        rk, rl = find(k), find(l)
        if rk != rl:
            parent[rl] = rk
    classes: dict = defaultdict(list)
    for k in data.objects:
        classes[find(k)].append(k)
    for cls in classes.values():
        for k in cls:
            for l in cls:
                if (k, l) not in rel:
                    raise InconsistencyError(f"1({k}|{l}) = 0 although both lie in one class; not transitive")
    return sorted(classes.values(), key=lambda c: data.objects.index(c[0]))


def verify_linking_structures(data: PartialHopfData, partition, mode: str) -> VerificationReport:
    parts = [list(p) for p in partition]
    if len(parts) != 2 or set(parts[0]) & set(parts[1]) or set(parts[0]) | set(parts[1]) != set(data.objects):
        raise ValueError("partition must split the object set into two disjoint parts")
    rep = VerificationReport(f"{mode}-structure")
    one = Scalar(1)
    if mode == "linking":
        for i in range(2):
            for j in range(2):
                e: dict = {}
                for k in parts[i]:
                    for l in parts[j]:
                        e = vadd(e, data.unit(k, l))
                for b in range(data.dim):
                    lhs = data.mul(e, {b: one})
                    rhs = data.mul({b: one}, e)
                    rep.record("central-units", vequal(lhs, rhs),
                               {"unit": f"1({i + 1}|{j + 1})", "element": data.labels[b]})
        for i in range(2):
            for r in parts[i]:
                found = [s for s in parts[1 - i] if data.unit(r, s)]
                rep.record("non-degenerate", bool(found), {"object": r, "part": i + 1})
    elif mode == "colinking":
        for i in range(2):
            for k in parts[i]:
                for l in parts[1 - i]:
                    rep.record("cross-units-vanish", not data.unit(k, l), {"unit": f"1({k}|{l})"})
                found = [l for l in parts[1 - i] if data.block_dim(Square(k, l, k, l))]
                rep.record("cross-blocks", bool(found), {"object": k, "part": i + 1})
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return rep
