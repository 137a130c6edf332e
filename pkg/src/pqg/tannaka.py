"""Reconstruction of partial compact quantum groups from fiber data.

A :class:`FiberData` lists irreducible labels ``a`` with bigraded fibers
``V^a_kl``, fusion isometries and duality maps.  :func:`reconstruct`
returns the algebra spanned by matrix coefficients
``u^a[(k,l,i),(m,n,j)]`` of grade ``(k l; m n)`` with

* coproduct ``Δ_rs(u_{x,y}) = Σ_p u_{x,(r,s,p)} ⊗ u_{(r,s,p),y}``,
* product read off from the fusion isometries,
* ``ε(u_{x,y}) = δ_xy``, ``φ(u^a) = δ_{a,unit}``,
* ``S(u_{x,y}) = u_{y,x}*`` and a star built from the coevaluations.

Fusion is multiplicity free: each channel ``c`` of ``a ⊗ b`` occurs once.
The isometry ``ι^{km}_{ab→c}`` maps ``⊕_l V^a_kl ⊗ V^b_lm`` (ascending
``l``, row-major) into ``V^c_km``; stacking all channels must give a
unitary matrix.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Mapping, Sequence

from . import linalg
from .grading import Square
from .partial_hopf import PartialHopfData, SchemaError
from .report import VerificationReport
from .scalars import Scalar, as_scalar


class FiberError(ValueError):
    pass


@dataclass(frozen=True)
class Irreducible:
    label: str
    dims: Mapping
    dual: str
    unit_of: str | None = None

    def dim(self, k, l) -> int:
        return self.dims.get((k, l), 0)

    def support(self, objects) -> list:
        return [(k, l) for k in objects for l in objects if self.dim(k, l)]


@dataclass
class FiberData:
    objects: tuple
    hyperobject: dict
    irreducibles: dict
    fusion: dict
    coev: dict
    ev: dict
    name: str = ""

    def __post_init__(self):
        self.objects = tuple(self.objects)

    @property
    def hyperobjects(self) -> list:
        seen = []
        for k in self.objects:
            h = self.hyperobject[k]
            if h not in seen:
                seen.append(h)
        return seen

    def irr(self, a) -> Irreducible:
        return self.irreducibles[a]

    def unit_label(self, alpha) -> str:
        for lab, irr in self.irreducibles.items():
            if irr.unit_of == alpha:
                return lab
        raise FiberError(f"hyperobject {alpha!r} has no unit irreducible")

    def domain_index(self, a, b, k, m) -> list:
        """Ordered basis ``(l, i, j)`` of ``⊕_l V^a_kl ⊗ V^b_lm``."""
        A, B = self.irr(a), self.irr(b)
        out = []
        for l in self.objects:
            for i in range(A.dim(k, l)):
                for j in range(B.dim(l, m)):
                    out.append((l, i, j))
        return out

    def channels(self, a, b) -> dict:
        return self.fusion.get((a, b), {})

    def iota(self, a, b, c, k, m):
        return self.fusion.get((a, b), {}).get(c, {}).get((k, m))


# --------------------------------------------------------------------------
# generators

@dataclass(frozen=True)
class FiniteGroup:
    elements: tuple
    table: Mapping
    identity: str

    def mul(self, g, h):
        return self.table[(g, h)]

    def inv(self, g):
        return next(h for h in self.elements if self.table[(g, h)] == self.identity)


def cyclic_group(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("group order must be positive")
    els = tuple(str(i) for i in range(n))
    return FiniteGroup(els, {(str(i), str(j)): str((i + j) % n) for i in range(n) for j in range(n)}, "0")


def _one():
    return [[Scalar(1)]]


def pointed_group_fiber(group: FiniteGroup) -> FiberData:
    """``Vec_G`` with the fiber functor ``F_kl(u_g) = δ_{k,gl} ℂ`` over ``I = G``."""
    objs = tuple(group.elements)
    irr = {}
    for g in group.elements:
        dims = {(group.mul(g, l), l): 1 for l in objs}
        irr[f"u{g}"] = Irreducible(f"u{g}", dims, f"u{group.inv(g)}",
                                   "*" if g == group.identity else None)
    fusion = {}
    for g in group.elements:
        for h in group.elements:
            gh = group.mul(g, h)
            fusion[(f"u{g}", f"u{h}")] = {f"u{gh}": {(group.mul(gh, m), m): _one() for m in objs}}
    coev, ev = {}, {}
    for g in group.elements:
        a = f"u{g}"
        coev[a] = {(group.mul(g, l), l): _one() for l in objs}
        # ev for a at object n, component k: V^ā_nk × V^a_kn, with k = g n
        ev[a] = {(n, group.mul(g, n)): _one() for n in objs}
    return FiberData(objs, {k: "*" for k in objs}, irr, fusion, coev, ev,
                     name=f"Vec_G(|G|={len(objs)})")


def pair_groupoid_fiber(objects: Sequence) -> FiberData:
    """Unit-only fiber data: one hyperobject, ``V_kk = ℂ``."""
    objs = tuple(str(o) for o in objects)
    if not objs:
        raise FiberError("the object set must be nonempty")
    unit = Irreducible("1", {(k, k): 1 for k in objs}, "1", "*")
    fusion = {("1", "1"): {"1": {(k, k): _one() for k in objs}}}
    coev = {"1": {(k, k): _one() for k in objs}}
    ev = {"1": {(k, k): _one() for k in objs}}
    return FiberData(objs, {k: "*" for k in objs}, {"1": unit}, fusion, coev, ev,
                     name=f"pair-groupoid-{len(objs)}")


def matrix_units_fiber(objects: Sequence) -> FiberData:
    """Every object is its own hyperobject and ``u_{αβ}`` has ``V_{αβ} = ℂ``.

    The reconstruction is the function algebra of the matrix units
    ``e_αβ``, grouplike in ``A(α β; α β)``.
    """
    objs = tuple(str(o) for o in objects)
    irr, fusion, coev, ev = {}, {}, {}, {}
    for a in objs:
        for b in objs:
            lab = f"e{a}{b}"
            irr[lab] = Irreducible(lab, {(a, b): 1}, f"e{b}{a}", a if a == b else None)
            coev[lab] = {(a, b): _one()}
            ev[lab] = {(b, a): _one()}
    for a in objs:
        for b in objs:
            for c in objs:
                for d in objs:
                    chans = {}
                    if b == c:
                        chans[f"e{a}{d}"] = {(a, d): _one()}
                    fusion[(f"e{a}{b}", f"e{c}{d}")] = chans
    return FiberData(objs, {k: k for k in objs}, irr, fusion, coev, ev,
                     name=f"matrix-units-{len(objs)}")


# --------------------------------------------------------------------------
# validation

def _is_identity(m) -> bool:
    return linalg.equal(m, linalg.identity(len(m))) if m and len(m) == len(m[0]) else False


def _stacked_iota(fd: FiberData, a, b, k, m):
    dom = fd.domain_index(a, b, k, m)
    rows, labels = [], []
    for c in sorted(fd.channels(a, b)):
        mat = fd.iota(a, b, c, k, m)
        dc = fd.irr(c).dim(k, m)
        if mat is None:
            if dc and dom:
                return None, None, f"missing ι for {a}⊗{b}→{c} at ({k},{m})"
            continue
        if len(mat) != dc or any(len(r) != len(dom) for r in mat):
            return None, None, f"ι for {a}⊗{b}→{c} at ({k},{m}) has the wrong shape"
        for p, row in enumerate(mat):
            rows.append(row)
            labels.append((c, p))
    return rows, labels, dom


def validate_fiber_data(fd: FiberData) -> VerificationReport:
    rep = VerificationReport("fiber-data")
    objs = fd.objects
    for k in objs:
        rep.record("hyperobject-map", k in fd.hyperobject, {"object": k})
    for alpha in fd.hyperobjects:
        try:
            u = fd.irr(fd.unit_label(alpha))
        except FiberError as exc:
            rep.record("unitality", False, {"hyperobject": alpha, "reason": str(exc)})
            continue
        for k in objs:
            for l in objs:
                want = 1 if (k == l and fd.hyperobject[k] == alpha) else 0
                rep.record("unitality", u.dim(k, l) == want,
                           {"unit": u.label, "block": [k, l], "dim": u.dim(k, l)})
    for lab, irr in fd.irreducibles.items():
        supp = irr.support(objs)
        lam = {fd.hyperobject[k] for k, _ in supp}
        rho = {fd.hyperobject[l] for _, l in supp}
        rep.record("bigrading", len(lam) == 1 and len(rho) == 1,
                   {"irreducible": lab, "row-classes": sorted(lam), "column-classes": sorted(rho)})
        rep.record("local-finiteness", True)
    # fusion isometries
    labels = sorted(fd.irreducibles)
    for a in labels:
        for b in labels:
            for k in objs:
                for m in objs:
                    rows, chan, dom = _stacked_iota(fd, a, b, k, m)
                    if rows is None:
                        rep.record("fusion-unitary", False, {"pair": [a, b], "block": [k, m], "reason": dom})
                        continue
                    if not dom and not rows:
                        continue
                    square = len(rows) == len(dom)
                    ok = square and _is_identity(linalg.matmul(rows, linalg.adjoint(rows))) \
                        and _is_identity(linalg.matmul(linalg.adjoint(rows), rows))
                    rep.record("fusion-unitary", ok,
                               {"pair": [a, b], "block": [k, m], "domain-dim": len(dom),
                                "channel-dim": len(rows)})
    # unit channels act trivially
    for alpha in fd.hyperobjects:
        try:
            u = fd.unit_label(alpha)
        except FiberError:
            continue
        for a in labels:
            for side in ("left", "right"):
                pair = (u, a) if side == "left" else (a, u)
                chans = fd.channels(*pair)
                supp = fd.irr(a).support(objs)
                touches = any(fd.hyperobject[k if side == "left" else l] == alpha for k, l in supp)
                if not touches:
                    rep.record("unit-fusion", not chans, {"pair": list(pair)})
                    continue
                ok = set(chans) == {a}
                if ok:
                    for (k, m), mat in chans[a].items():
                        ok = ok and _is_identity(mat)
                rep.record("unit-fusion", ok, {"pair": list(pair)})
    _check_coherence(fd, rep)
    _check_duality(fd, rep)
    return rep


def _fuse_map(fd, a, b, k, m):
    """Matrix ``⊕_l V^a_kl⊗V^b_lm → ⊕_c V^c_km`` with row labels ``(c, p)``."""
    rows, chan, dom = _stacked_iota(fd, a, b, k, m)
    return rows, chan, dom


def _check_coherence(fd: FiberData, rep: VerificationReport):
    """Associativity constraint check for every triple of irreducibles.

    For each ``(a, b, e)`` and endpoints ``(k, n)`` both bracketings
    identify ``⊕_{l,m} V^a_kl⊗V^b_lm⊗V^e_mn`` with a sum of channel spaces.
    The transition matrix must be block diagonal in the final channel with
    a block ``R_f ⊗ id`` whose ``R_f`` does not depend on ``(k, n)``.
    """
    objs = fd.objects
    labels = sorted(fd.irreducibles)
    for a in labels:
        for b in labels:
            for e in labels:
                seen: dict = {}
                for k in objs:
                    for n in objs:
                        res = _recoupling(fd, a, b, e, k, n)
                        if res is None:
                            continue
                        ok, blocks, why = res
                        witness = {"triple": [a, b, e], "endpoints": [k, n]}
                        if not ok:
                            witness["reason"] = why
                            rep.record("coherence", False, witness)
                            continue
                        consistent = True
                        for f, mat in blocks.items():
                            if f in seen and not linalg.equal(seen[f][0], mat):
                                consistent = False
                                witness.update({"channel": f, "first-seen-at": seen[f][1],
                                                "reason": "recoupling depends on the fiber indices"})
                            seen.setdefault(f, (mat, [k, n]))
                        rep.record("coherence", consistent, witness)


def _triple_basis(fd, a, b, e, k, n):
    A, B, E = fd.irr(a), fd.irr(b), fd.irr(e)
    out = []
    for l in fd.objects:
        for m in fd.objects:
            for i in range(A.dim(k, l)):
                for j in range(B.dim(l, m)):
                    for t in range(E.dim(m, n)):
                        out.append((l, m, i, j, t))
    return out


def _recoupling(fd, a, b, e, k, n):
    basis = _triple_basis(fd, a, b, e, k, n)
    if not basis:
        return None
    pos = {x: t for t, x in enumerate(basis)}
    # left bracketing: (a⊗b)→c, then c⊗e→f; rows labelled (c, f, p)
    left_rows, left_lab = [], []
    for c in sorted(fd.channels(a, b)):
        for f in sorted(fd.channels(c, e)):
            mat = fd.iota(c, e, f, k, n)
            if mat is None:
                continue
            dom_ce = fd.domain_index(c, e, k, n)
            for p, row in enumerate(mat):
                vec = [Scalar(0)] * len(basis)
                for col, (m, q, t) in enumerate(dom_ce):
                    if not row[col]:
                        continue
                    inner = fd.iota(a, b, c, k, m)
                    if inner is None:
                        continue
                    dom_ab = fd.domain_index(a, b, k, m)
                    for col2, (l, i, j) in enumerate(dom_ab):
                        x = inner[q][col2]
                        if x:
                            vec[pos[(l, m, i, j, t)]] += row[col] * x
                left_rows.append(vec)
                left_lab.append((c, f, p))
    right_rows, right_lab = [], []
    for d in sorted(fd.channels(b, e)):
        for f in sorted(fd.channels(a, d)):
            mat = fd.iota(a, d, f, k, n)
            if mat is None:
                continue
            dom_ad = fd.domain_index(a, d, k, n)
            for p, row in enumerate(mat):
                vec = [Scalar(0)] * len(basis)
                for col, (l, i, q) in enumerate(dom_ad):
                    if not row[col]:
                        continue
                    inner = fd.iota(b, e, d, l, n)
                    if inner is None:
                        continue
                    dom_be = fd.domain_index(b, e, l, n)
                    for col2, (m, j, t) in enumerate(dom_be):
                        x = inner[q][col2]
                        if x:
                            vec[pos[(l, m, i, j, t)]] += row[col] * x
                right_rows.append(vec)
                right_lab.append((d, f, p))
    if len(left_rows) != len(basis) or len(right_rows) != len(basis):
        return False, {}, "bracketings do not exhaust the triple tensor space"
    R = linalg.matmul(right_rows, linalg.adjoint(left_rows))
    if not _is_identity(linalg.matmul(R, linalg.adjoint(R))):
        return False, {}, "recoupling is not unitary"
    blocks: dict = {}
    for r, (d, f, p) in enumerate(right_lab):
        for s, (c, f2, p2) in enumerate(left_lab):
            x = R[r][s]
            if f != f2 or p != p2:
                if x:
                    return False, {}, "recoupling mixes channels or fiber vectors"
                continue
            blocks.setdefault(f, {})[(d, c, p)] = x
    frozen = {}
    for f, entries in blocks.items():
        ds = sorted({d for d, _, _ in entries})
        cs = sorted({c for _, c, _ in entries})
        ps = sorted({p for _, _, p in entries})
        mat = [[entries.get((d, c, ps[0]), Scalar(0)) for c in cs] for d in ds]
        for p in ps[1:]:
            other = [[entries.get((d, c, p), Scalar(0)) for c in cs] for d in ds]
            if not linalg.equal(other, mat):
                return False, {}, "recoupling is not of the form R_f ⊗ id"
        frozen[f] = mat
    return True, frozen, None


def _check_duality(fd: FiberData, rep: VerificationReport):
    for lab, irr in sorted(fd.irreducibles.items()):
        dual = fd.irreducibles.get(irr.dual)
        if dual is None or dual.dual != lab:
            rep.record("duality", False, {"irreducible": lab, "reason": "dual label is not an involution"})
            continue
        coev = fd.coev.get(lab, {})
        ev = fd.ev.get(lab, {})
        for (k, n) in irr.support(fd.objects):
            M = coev.get((k, n))
            E = ev.get((n, k))
            w = {"irreducible": lab, "block": [k, n]}
            if M is None or E is None:
                rep.record("snake", False, dict(w, reason="missing coev or ev component"))
                continue
            if dual.dim(n, k) != irr.dim(k, n):
                rep.record("snake", False, dict(w, reason="dual block has another dimension"))
                continue
            ok = _is_identity(linalg.matmul(M, E)) and _is_identity(linalg.matmul(E, M))
            rep.record("snake", ok, w)
            dual_coev = fd.coev.get(irr.dual, {}).get((n, k))
            if dual_coev is not None:
                conj_e = [[x.conjugate() for x in row] for row in E]
                rep.record("duality-unitary", linalg.equal(dual_coev, conj_e), w)


# --------------------------------------------------------------------------
# reconstruction

@dataclass
class ReconstructionOutput:
    data: PartialHopfData
    provenance: dict
    fiber: FiberData

    def coefficient(self, a, k, l, i, m, n, j) -> int:
        return self.data.index[_label(a, k, l, i, m, n, j)]


def _label(a, k, l, i, m, n, j) -> str:
    return f"u[{a}]({k},{l},{i}|{m},{n},{j})"


def reconstruct(fd: FiberData, check: bool = True) -> ReconstructionOutput:
    if check:
        rep = validate_fiber_data(fd)
        if not rep.ok:
            raise FiberError(f"fiber data failed validation: {rep.failed_axioms()}")
    objs = fd.objects
    labels, grades, prov = [], [], {}
    index: dict = {}
    for a in sorted(fd.irreducibles):
        irr = fd.irr(a)
        supp = irr.support(objs)
        for (k, l) in supp:
            for (m, n) in supp:
                for i in range(irr.dim(k, l)):
                    for j in range(irr.dim(m, n)):
                        lab = _label(a, k, l, i, m, n, j)
                        index[(a, k, l, i, m, n, j)] = len(labels)
                        prov[lab] = {"irreducible": a, "row": [k, l, i], "col": [m, n, j]}
                        labels.append(lab)
                        grades.append(Square(k, l, m, n))
    one = Scalar(1)
    coproduct, counit, integral = {}, {}, {}
    for (a, k, l, i, m, n, j), t in index.items():
        irr = fd.irr(a)
        terms = {}
        for (r, s) in irr.support(objs):
            for p in range(irr.dim(r, s)):
                terms[(index[(a, k, l, i, r, s, p)], index[(a, r, s, p, m, n, j)])] = one
        coproduct[t] = terms
        if (k, l) == (m, n) and i == j:
            counit[t] = one
        if irr.unit_of is not None:
            integral[t] = one
    units = {}
    for k in objs:
        for m in objs:
            if fd.hyperobject[k] == fd.hyperobject[m]:
                u = fd.unit_label(fd.hyperobject[k])
                units[(k, m)] = {index[(u, k, k, 0, m, m, 0)]: one}
    # product
    product: dict = {}
    by_irr: dict = {}
    for key, t in index.items():
        by_irr.setdefault(key[0], []).append(key)
    for a in sorted(fd.irreducibles):
        for b in sorted(fd.irreducibles):
            chans = fd.channels(a, b)
            if not chans:
                continue
            for (_, k, l, i, r, s, j) in by_irr[a]:
                for (_, l2, mm, i2, s2, tt, j2) in by_irr[b]:
                    if l2 != l or s2 != s:
                        continue
                    vec: dict = {}
                    for c, blocks in chans.items():
                        left = blocks.get((k, mm))
                        right = blocks.get((r, tt))
                        if left is None or right is None:
                            continue
                        dom_l = fd.domain_index(a, b, k, mm)
                        dom_r = fd.domain_index(a, b, r, tt)
                        x = dom_l.index((l, i, i2))
                        y = dom_r.index((s, j, j2))
                        for p in range(len(left)):
                            cl = left[p][x]
                            if not cl:
                                continue
                            cl = cl.conjugate()
                            for p2 in range(len(right)):
                                cr = right[p2][y]
                                if cr:
                                    key = index[(c, k, mm, p, r, tt, p2)]
                                    vec[key] = vec.get(key, 0) + cl * cr
                    vec = {kk: v for kk, v in vec.items() if v}
                    if vec:
                        product[(index[(a, k, l, i, r, s, j)], index[(b, l, mm, i2, s, tt, j2)])] = vec
    # star from coevaluations:
    # (u^a_{(k l i),(r s j)})* = Σ ((M^{(k)}_l)^T)^{-1}[i,i'] u^ā_{(l k i'),(s r j')} M^{(r)}_s[j,j']
    star: dict = {}
    inv_t: dict = {}
    for a in sorted(fd.irreducibles):
        irr = fd.irr(a)
        for (k, l) in irr.support(objs):
            inv_t[(a, k, l)] = linalg.inverse(linalg.transpose(fd.coev[a][(k, l)]))
    for (a, k, l, i, r, s, j), t in index.items():
        abar = fd.irr(a).dual
        left = inv_t[(a, k, l)]
        right = fd.coev[a][(r, s)]
        vec = {}
        for i2 in range(len(left[i])):
            x = left[i][i2]
            if not x:
                continue
            for j2 in range(len(right[j])):
                y = right[j][j2]
                if y:
                    key = index[(abar, l, k, i2, s, r, j2)]
                    vec[key] = vec.get(key, 0) + x * y
        star[t] = {kk: v for kk, v in vec.items() if v}
    # antipode S(u_{x,y}) = (u_{y,x})*
    antipode = {}
    for (a, k, l, i, m, n, j), t in index.items():
        antipode[t] = star[index[(a, m, n, j, k, l, i)]]
    data = PartialHopfData(objs, labels, grades, product, coproduct, counit, units,
                           antipode, star, integral, name=f"reconstruction({fd.name})")
    return ReconstructionOutput(data, prov, fd)


def brute_force_dimension(fd: FiberData) -> int:
    """``Σ_a Σ_{(k,l),(m,n)} dim Hom(V^a_mn, V^a_kl)`` by direct enumeration."""
    total = 0
    for irr in fd.irreducibles.values():
        for k, l, m, n in iproduct(fd.objects, repeat=4):
            total += irr.dim(k, l) * irr.dim(m, n)
    return total


# --------------------------------------------------------------------------
# JSON

def _mat_json(m):
    return [[str(x) for x in row] for row in m]


def fiber_to_json(fd: FiberData) -> dict:
    irr = []
    for lab in sorted(fd.irreducibles):
        x = fd.irreducibles[lab]
        irr.append({"label": lab, "dual": x.dual, "unit_of": x.unit_of,
                    "dims": {f"{k},{l}": d for (k, l), d in sorted(x.dims.items())}})
    fusion = []
    for (a, b) in sorted(fd.fusion):
        for c in sorted(fd.fusion[(a, b)]):
            fusion.append({"a": a, "b": b, "c": c,
                           "iota": {f"{k},{m}": _mat_json(mat)
                                    for (k, m), mat in sorted(fd.fusion[(a, b)][c].items())}})
    empty = sorted([list(p) for p, ch in fd.fusion.items() if not ch])
    return {"kind": "fiber", "name": fd.name, "objects": list(fd.objects),
            "hyperobjects": {k: fd.hyperobject[k] for k in fd.objects},
            "irreducibles": irr, "fusion": fusion, "zero_products": empty,
            "coev": {a: {f"{k},{l}": _mat_json(m) for (k, l), m in sorted(fd.coev[a].items())}
                     for a in sorted(fd.coev)},
            "ev": {a: {f"{k},{l}": _mat_json(m) for (k, l), m in sorted(fd.ev[a].items())}
                   for a in sorted(fd.ev)}}


def _pair(text, path):
    try:
        k, l = text.split(",")
    except ValueError:
        raise SchemaError(path, "expected 'k,l'") from None
    return k, l


def _mat(raw, path):
    if not isinstance(raw, list) or not all(isinstance(r, list) for r in raw):
        raise SchemaError(path, "expected a matrix (array of arrays)")
    out = []
    for i, row in enumerate(raw):
        r = []
        for j, x in enumerate(row):
            try:
                r.append(as_scalar(x))
            except ValueError as exc:
                raise SchemaError(f"{path}/{i}/{j}", str(exc)) from None
        out.append(r)
    return out


def fiber_from_json(doc: Mapping) -> FiberData:
    if doc.get("kind") != "fiber":
        raise SchemaError("/kind", "expected 'fiber'")
    try:
        objects = tuple(str(o) for o in doc["objects"])
        hyper = {str(k): str(v) for k, v in doc["hyperobjects"].items()}
    except (KeyError, AttributeError, TypeError):
        raise SchemaError("/objects", "objects and hyperobjects are required") from None
    irr = {}
    for t, x in enumerate(doc.get("irreducibles", [])):
        path = f"/irreducibles/{t}"
        try:
            dims = {_pair(key, f"{path}/dims/{key}"): int(d) for key, d in x["dims"].items()}
            irr[x["label"]] = Irreducible(x["label"], dims, x["dual"], x.get("unit_of"))
        except KeyError as exc:
            raise SchemaError(path, f"missing field {exc}") from None
    fusion: dict = {}
    for pair in doc.get("zero_products", []):
        fusion[(pair[0], pair[1])] = {}
    for t, x in enumerate(doc.get("fusion", [])):
        path = f"/fusion/{t}"
        blocks = {_pair(key, f"{path}/iota/{key}"): _mat(m, f"{path}/iota/{key}")
                  for key, m in x.get("iota", {}).items()}
        fusion.setdefault((x["a"], x["b"]), {})[x["c"]] = blocks
    coev = {a: {_pair(key, f"/coev/{a}/{key}"): _mat(m, f"/coev/{a}/{key}") for key, m in blocks.items()}
            for a, blocks in doc.get("coev", {}).items()}
    ev = {a: {_pair(key, f"/ev/{a}/{key}"): _mat(m, f"/ev/{a}/{key}") for key, m in blocks.items()}
          for a, blocks in doc.get("ev", {}).items()}
    return FiberData(objects, hyper, irr, fusion, coev, ev, name=str(doc.get("name", "")))


# --------------------------------------------------------------------------
# irreducible coreps and the round trip

def canonical_coreps(out: ReconstructionOutput) -> dict:
    """The unitary coreps ``X^a`` whose matrix coefficients are the ``u^a``."""
    from .corep import Corep
    from .grading import BigradedSpace
    fd, data = out.fiber, out.data
    result = {}
    for a in sorted(fd.irreducibles):
        irr = fd.irr(a)
        supp = irr.support(fd.objects)
        space = BigradedSpace(fd.objects, {kl: irr.dim(*kl) for kl in supp})
        blocks = {}
        for (k, l) in supp:
            for (m, n) in supp:
                entries = {}
                for i in range(irr.dim(k, l)):
                    for j in range(irr.dim(m, n)):
                        entries[(i, j)] = {data.index[_label(a, k, l, i, m, n, j)]: Scalar(1)}
                blocks[Square(k, l, m, n)] = entries
        result[a] = Corep(data, space, blocks, name=a)
    return result


def roundtrip_check(out: ReconstructionOutput) -> VerificationReport:
    """Recover irreducibles and fusion rules from the reconstructed algebra."""
    from . import corep as cr
    rep = VerificationReport("roundtrip")
    fd, data = out.fiber, out.data
    canon = canonical_coreps(out)
    found: list = []
    for sq, idx in data.blocks.items():
        for i in idx:
            reg = cr.regular_corep_from_element(data, {i: Scalar(1)})
            for summand in cr.decompose(reg).summands:
                if not any(cr.equivalent(summand.irrep, f) for f in found):
                    found.append(summand.irrep)
    rep.record("irreducible-count", len(found) == len(fd.irreducibles),
               {"found": len(found), "input": len(fd.irreducibles)})
    matched = {}
    for t, x in enumerate(found):
        hits = [a for a, X in canon.items() if cr.equivalent(x, X)]
        ok = len(hits) == 1
        rep.record("irreducible-match", ok, {"found-index": t, "matches": hits})
        if ok:
            a = hits[0]
            matched[a] = x
            dims_ok = all(x.space.dim(k, l) == fd.irr(a).dim(k, l) for k in fd.objects for l in fd.objects)
            rep.record("block-dimensions", dims_ok, {"irreducible": a, "found": x.space.dims,
                                                     "input": fd.irr(a).dims})
    rep.record("all-input-irreducibles-found", set(matched) == set(fd.irreducibles),
               {"missing": sorted(set(fd.irreducibles) - set(matched))})
    table = {}
    for a in sorted(canon):
        for b in sorted(canon):
            prod = cr.tensor(canon[a], canon[b])
            mult: dict = {}
            if prod.space.total_dim():
                for summand in cr.decompose(prod).summands:
                    hits = [c for c, X in canon.items() if cr.equivalent(summand.irrep, X)]
                    for c in hits:
                        mult[c] = mult.get(c, 0) + summand.multiplicity
            want = {c: 1 for c in fd.channels(a, b)}
            table[f"{a}⊗{b}"] = {c: mult[c] for c in sorted(mult)}
            rep.record("fusion-multiplicities", mult == want,
                       {"pair": [a, b], "found": mult, "input": want})
    rep.data["fusion-table"] = table
    return rep
