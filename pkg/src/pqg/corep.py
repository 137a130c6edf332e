"""Corepresentations of partial Hopf algebras.

A corep on a bigraded space ``V`` is a family of element matrices
``X(k l; m n)`` with rows indexed by a basis of ``V_kl``, columns by a basis
of ``V_mn`` and entries in ``A(k l; m n)``.  Entries are sparse vectors over
the host's basis.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import linalg
from .grading import BigradedSpace, BlockMap, Square, balanced_tensor_index, trivial_space
from .partial_hopf import PartialHopfData, SchemaError, vadd, vscale
from .report import NUMERIC, VerificationReport
from .scalars import Scalar, ScalarError, UnsupportedRadicandError, from_sympy, sqrt, to_sympy


class CorepError(ValueError):
    pass


class DecompositionError(CorepError):
    pass


def _outer(a: dict, b: dict) -> dict:
    return {(i, j): x * y for i, x in a.items() for j, y in b.items()}


@dataclass
class Corep:
    host: PartialHopfData
    space: BigradedSpace
    blocks: dict
    name: str = ""

    def entry(self, sq, i, j) -> dict:
        return self.blocks.get(Square(*sq), {}).get((i, j), {})

    def matrix(self, sq) -> list:
        sq = Square(*sq)
        rows, cols = self.space.dim(sq.k, sq.l), self.space.dim(sq.m, sq.n)
        blk = self.blocks.get(sq, {})
        return [[blk.get((i, j), {}) for j in range(cols)] for i in range(rows)]

    def squares(self) -> list:
        supp = self.space.blocks()
        return [Square(k, l, m, n) for (k, l) in supp for (m, n) in supp]

    @property
    def dim(self) -> int:
        return self.space.total_dim()

    def coefficients(self) -> list:
        """``[(square, i, j, vector)]`` over all blocks, in block order."""
        out = []
        for sq in self.squares():
            for i in range(self.space.dim(sq.k, sq.l)):
                for j in range(self.space.dim(sq.m, sq.n)):
                    out.append((sq, i, j, self.entry(sq, i, j)))
        return out


@dataclass
class CorepMorphism:
    source: Corep
    target: Corep
    map: BlockMap


# --------------------------------------------------------------------------
# element-matrix helpers

def _emul(data, A, B) -> list:
    """Product of element matrices ``A·B``."""
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    out = []
    for row in A:
        acc = [{} for _ in range(cols)]
        for t in range(inner):
            if not row[t]:
                continue
            for j in range(cols):
                if B[t][j]:
                    acc[j] = vadd(acc[j], data.mul(row[t], B[t][j]))
        out.append(acc)
    return out


def _eadd(A, B) -> list:
    return [[vadd(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


def _scal_left(T, A) -> list:
    """``(1 ⊗ T) A`` for a scalar matrix ``T``."""
    cols = len(A[0]) if A else 0
    out = []
    for row in T:
        acc = [{} for _ in range(cols)]
        for t, c in enumerate(row):
            if not c:
                continue
            for j in range(cols):
                if A[t][j]:
                    acc[j] = vadd(acc[j], A[t][j], c)
        out.append(acc)
    return out


def _scal_right(A, T) -> list:
    cols = len(T[0]) if T else 0
    out = []
    for row in A:
        acc = [{} for _ in range(cols)]
        for t, x in enumerate(row):
            if not x:
                continue
            for j in range(cols):
                c = T[t][j]
                if c:
                    acc[j] = vadd(acc[j], x, c)
        out.append(acc)
    return out


def _eequal(A, B) -> bool:
    if len(A) != len(B):
        return False
    for ra, rb in zip(A, B):
        if len(ra) != len(rb):
            return False
        for x, y in zip(ra, rb):
            if vadd(x, y, -1):
                return False
    return True


def _eapply(f, A) -> list:
    return [[f(x) if x else {} for x in row] for row in A]


def _escalar(data, A, functional) -> list:
    return [[functional(x) if x else Scalar(0) for x in row] for row in A]


def _unit_times_id(data, k, m, d) -> list:
    u = data.unit(k, m)
    return [[dict(u) if i == j else {} for j in range(d)] for i in range(d)]


# --------------------------------------------------------------------------
# construction and verification

def verify_corep(X: Corep) -> VerificationReport:
    data = X.host
    rep = VerificationReport(f"corep {X.name}".strip())
    for sq in X.squares():
        for (i, j), vec in X.blocks.get(sq, {}).items():
            ok = all(data.grades[t] == sq for t in vec)
            rep.record("grading", ok, {"square": sq, "entry": [i, j]})
    supp = X.space.blocks()
    for sq in X.squares():
        for i in range(X.space.dim(sq.k, sq.l)):
            for j in range(X.space.dim(sq.m, sq.n)):
                lhs = data.delta(X.entry(sq, i, j))
                rhs: dict = {}
                for (r, s) in supp:
                    up = Square(sq.k, sq.l, r, s)
                    down = Square(r, s, sq.m, sq.n)
                    for p in range(X.space.dim(r, s)):
                        rhs = vadd(rhs, _outer(X.entry(up, i, p), X.entry(down, p, j)))
                rep.record("comultiplication", not vadd(lhs, rhs, -1),
                           {"square": sq, "entry": [i, j]})
                want = 1 if (sq.upper == sq.lower and i == j) else 0
                rep.record("counit", data.eps(X.entry(sq, i, j)) == want,
                           {"square": sq, "entry": [i, j]})
    return rep


def corep_from_blocks(data, space, blocks, name="") -> Corep:
    return Corep(data, space, {Square(*sq): b for sq, b in blocks.items()}, name)


def trivial_corep(data: PartialHopfData) -> Corep:
    """``U`` on ``ℂ^(I)`` with ``U(k k; m m) = 1(k|m)``."""
    space = trivial_space(data.objects)
    blocks = {}
    for k in data.objects:
        for m in data.objects:
            u = data.unit(k, m)
            if u:
                blocks[Square(k, k, m, m)] = {(0, 0): u}
    return Corep(data, space, blocks, "U")


def regular_corep_from_element(data: PartialHopfData, a: dict) -> Corep:
    """Corep on the span of first legs of ``Δ(a)`` for homogeneous ``a``."""
    a = {i: Scalar(c) for i, c in a.items() if c}
    if not a:
        raise CorepError("the generating element must be nonzero")
    sq0 = data.grade_of(a)
    if sq0 is None:
        raise CorepError("the generating element must be homogeneous")
    full = data.delta(a)
    legs: dict = {}
    for (s, t), c in full.items():
        legs.setdefault(data.grades[s].lower, {}).setdefault(t, {})[s] = c
    bases: dict = {}
    dims = {}
    for (p, q), by_t in legs.items():
        idx = sorted({s for vec in by_t.values() for s in vec})
        rows = [[vec.get(s, Scalar(0)) for s in idx] for vec in by_t.values()]
        ech, piv = linalg.rref(rows)
        ech = ech[:len(piv)]
        if not ech:
            continue
        bases[(p, q)] = (idx, ech, piv)
        dims[(p, q)] = len(ech)
    space = BigradedSpace(data.objects, dims)

    def coords(kl, vec):
        idx, ech, piv = bases[kl]
        return [vec.get(idx[c], Scalar(0)) for c in piv]

    def basis_vec(kl, j):
        idx, ech, _ = bases[kl]
        return {idx[c]: x for c, x in enumerate(ech[j]) if x}

    blocks: dict = {}
    for (m, n) in dims:
        for j in range(dims[(m, n)]):
            b = basis_vec((m, n), j)
            split: dict = {}
            for (s, t), c in data.delta(b).items():
                split.setdefault(data.grades[s].lower, {}).setdefault(t, {})[s] = c
            for (k, l), by_t in split.items():
                if (k, l) not in bases:
                    raise CorepError("first legs left the generated space")
                for t, vec in by_t.items():
                    cs = coords((k, l), vec)
                    for i, c in enumerate(cs):
                        if c:
                            cell = blocks.setdefault(Square(k, l, m, n), {})
                            cell[(i, j)] = vadd(cell.get((i, j), {}), {t: c})
    return Corep(data, space, blocks, f"regular({data.describe(a)})")


def tensor(X: Corep, Y: Corep) -> Corep:
    if X.host is not Y.host:
        raise CorepError("tensor product needs a common host")
    data = X.host
    idx = balanced_tensor_index(X.space, Y.space)
    space = BigradedSpace(data.objects, {km: len(e) for km, e in idx.items()})
    blocks: dict = {}
    for (k, p), rows in idx.items():
        for (m, q), cols in idx.items():
            sq = Square(k, p, m, q)
            cell = {}
            for r, (l, i, i2) in enumerate(rows):
                for c, (n, j, j2) in enumerate(cols):
                    x = X.entry((k, l, m, n), i, j)
                    if not x:
                        continue
                    y = Y.entry((l, p, n, q), i2, j2)
                    if not y:
                        continue
                    v = data.mul(x, y)
                    if v:
                        cell[(r, c)] = v
            if cell:
                blocks[sq] = cell
    return Corep(data, space, blocks, f"({X.name}⊛{Y.name})")


def direct_sum(coreps: list) -> tuple[Corep, list]:
    """Direct sum with the list of block offsets of each summand."""
    data = coreps[0].host
    dims: dict = {}
    offsets = []
    for X in coreps:
        off = {}
        for kl, d in X.space.dims.items():
            off[kl] = dims.get(kl, 0)
            dims[kl] = off[kl] + d
        offsets.append(off)
    space = BigradedSpace(data.objects, dims)
    blocks: dict = {}
    for X, off in zip(coreps, offsets):
        for sq, cell in X.blocks.items():
            o1, o2 = off[sq.upper], off[sq.lower]
            tgt = blocks.setdefault(sq, {})
            for (i, j), v in cell.items():
                tgt[(i + o1, j + o2)] = v
    return Corep(data, space, blocks, "⊕".join(X.name for X in coreps)), offsets


def left_dual(X: Corep) -> Corep:
    """``X̂(k l; m n)_{ij} = S(x^{(n m; l k)}_{ji})`` on ``V̂_kl = V_lk*``."""
    data = X.host
    space = X.space.dual()
    blocks = {}
    for sq in [Square(k, l, m, n) for (k, l) in space.blocks() for (m, n) in space.blocks()]:
        src = Square(sq.n, sq.m, sq.l, sq.k)
        cell = {}
        for (j, i), v in X.blocks.get(src, {}).items():
            s = data.S(v)
            if s:
                cell[(i, j)] = s
        if cell:
            blocks[sq] = cell
    return Corep(data, space, blocks, f"{X.name}^")


def double_dual(X: Corep) -> Corep:
    """``(S² ⊗ id) X``."""
    data = X.host
    blocks = {sq: {ij: data.S(data.S(v)) for ij, v in cell.items()} for sq, cell in X.blocks.items()}
    return Corep(data, X.space, blocks, f"{X.name}^^")


def evaluation_map(X: Corep) -> BlockMap:
    """``ev: X̂ ⊛ X → U`` with ``ev_kk = Σ_p ev_{V_pk}``."""
    data = X.host
    dual = X.space.dual()
    idx = balanced_tensor_index(dual, X.space)
    src = BigradedSpace(data.objects, {km: len(e) for km, e in idx.items()})
    tgt = trivial_space(data.objects)
    blocks = {}
    for (k, m), entries in idx.items():
        if k != m:
            continue
        blocks[(k, k)] = [[Scalar(1 if i == j else 0) for (_, i, j) in entries]]
    return BlockMap(src, tgt, blocks)


def coevaluation_map(X: Corep) -> BlockMap:
    """``coev: U → X ⊛ X̂`` with ``coev_kk = Σ_p coev_{V_kp}``."""
    data = X.host
    idx = balanced_tensor_index(X.space, X.space.dual())
    tgt = BigradedSpace(data.objects, {km: len(e) for km, e in idx.items()})
    src = trivial_space(data.objects)
    blocks = {}
    for k in data.objects:
        entries = idx.get((k, k), [])
        blocks[(k, k)] = [[Scalar(1 if i == j else 0)] for (_, i, j) in entries]
    return BlockMap(src, tgt, blocks)


def _snake_x(X: Corep) -> bool:
    """``(id_X ⊗ ev)(coev ⊗ id_X) = id_X`` on the fibre spaces."""
    for (k, n), d in X.space.dims.items():
        for a in range(d):
            # coev ⊗ id: e_a ↦ Σ_{l,i} e_i^{V_kl} ⊗ ê_i^{V_kl} ⊗ e_a
            out: dict = {}
            for l in X.space.objects:
                for i in range(X.space.dim(k, l)):
                    # id ⊗ ev pairs ê_i ∈ V_kl* with e_a ∈ V_kn: nonzero only for l = n
                    if l == n and i == a:
                        out[(l, i)] = out.get((l, i), 0) + 1
            if out != {(n, a): 1}:
                return False
    return True


def _snake_dual(X: Corep) -> bool:
    """``(ev ⊗ id_X̂)(id_X̂ ⊗ coev) = id_X̂`` on the fibre spaces."""
    dual = X.space.dual()
    for (k, n), d in dual.dims.items():
        for a in range(d):
            out: dict = {}
            for p in X.space.objects:
                for i in range(X.space.dim(n, p)):
                    # ê_a ⊗ e_i^{V_np} ⊗ ê_i; ev pairs ê_a ∈ V_nk* with e_i ∈ V_np
                    if p == k and i == a:
                        out[(p, i)] = out.get((p, i), 0) + 1
            if out != {(k, a): 1}:
                return False
    return True


def dual_report(X: Corep) -> VerificationReport:
    rep = VerificationReport(f"left dual of {X.name}".strip())
    Xh = left_dual(X)
    U = trivial_corep(X.host)
    rep.merge(verify_corep(Xh), "dual/")
    bad = morphism_defect(evaluation_map(X), tensor(Xh, X), U)
    rep.record("ev-morphism", bad is None, {"corep": X.name, "square": bad})
    bad = morphism_defect(coevaluation_map(X), U, tensor(X, Xh))
    rep.record("coev-morphism", bad is None, {"corep": X.name, "square": bad})
    rep.record("snake-X", _snake_x(X), {"corep": X.name})
    rep.record("snake-dual", _snake_dual(X), {"corep": X.name})
    return rep


# --------------------------------------------------------------------------
# generalized inverse and unitarity

def generalized_inverse(X: Corep) -> dict:
    """``Z(k l; m n) = (S ⊗ id) X(n m; l k)``, rows ``V_nm``, columns ``V_lk``."""
    data = X.host
    Z = {}
    supp = X.space.blocks()
    for (n, m) in supp:
        for (l, k) in supp:
            src = Square(n, m, l, k)
            Z[Square(k, l, m, n)] = _eapply(data.S, X.matrix(src))
    return Z


def _zmat(X, Z, sq):
    sq = Square(*sq)
    got = Z.get(sq)
    if got is not None:
        return got
    return [[{} for _ in range(X.space.dim(sq.l, sq.k))] for _ in range(X.space.dim(sq.n, sq.m))]


def generalized_inverse_report(X: Corep) -> VerificationReport:
    data = X.host
    Z = generalized_inverse(X)
    rep = VerificationReport(f"generalized inverse of {X.name}".strip())
    objs = data.objects
    sp = X.space
    rep.note("block-orthogonality",
             "products X(k l;m n)Z(l k';n m') with m'≠m and Z(n m;l k)X(m n';k l') with n≠n' "
             "compose maps between distinct fibre blocks and vanish by the Hom grading")
    for k in objs:
        for l in objs:
            dkl = sp.dim(k, l)
            if not dkl:
                continue
            for m in objs:
                for k2 in objs:
                    if not sp.dim(k2, l):
                        continue
                    acc = [[{} for _ in range(sp.dim(k2, l))] for _ in range(dkl)]
                    for n in objs:
                        if not sp.dim(m, n):
                            continue
                        acc = _eadd(acc, _emul(data, X.matrix((k, l, m, n)), _zmat(X, Z, (l, k2, n, m))))
                    if k == k2:
                        want = _unit_times_id(data, k, m, dkl)
                    else:
                        want = [[{} for _ in range(sp.dim(k2, l))] for _ in range(dkl)]
                    rep.record("XZ-partial-identity", _eequal(acc, want),
                               {"k": k, "l": l, "m": m, "k'": k2})
    for n in objs:
        for l in objs:
            for k in objs:
                dkl = sp.dim(k, l)
                if not dkl:
                    continue
                for l2 in objs:
                    if not sp.dim(k, l2):
                        continue
                    acc = [[{} for _ in range(sp.dim(k, l2))] for _ in range(dkl)]
                    for m in objs:
                        if not sp.dim(m, n):
                            continue
                        acc = _eadd(acc, _emul(data, _zmat(X, Z, (n, m, l, k)), X.matrix((m, n, k, l2))))
                    if l == l2:
                        want = _unit_times_id(data, n, l, dkl)
                    else:
                        want = [[{} for _ in range(sp.dim(k, l2))] for _ in range(dkl)]
                    rep.record("ZX-partial-identity", _eequal(acc, want),
                               {"n": n, "l": l, "k": k, "l'": l2})
    # XZX = X and ZXZ = Z in coefficient form
    supp = sp.blocks()
    for (k, l) in supp:
        for (m, q) in supp:
            acc = [[{} for _ in range(sp.dim(m, q))] for _ in range(sp.dim(k, l))]
            for n in objs:
                if not sp.dim(m, n):
                    continue
                for b in objs:
                    if not sp.dim(b, l):
                        continue
                    xz = _emul(data, X.matrix((k, l, m, n)), _zmat(X, Z, (l, b, n, m)))
                    acc = _eadd(acc, _emul(data, xz, X.matrix((b, l, m, q))))
            rep.record("XZX=X", _eequal(acc, X.matrix((k, l, m, q))), {"square": Square(k, l, m, q)})
    for (n, m) in supp:
        for (b, k) in supp:
            # (ZXZ)(k b; m n) = Σ_{l,d} Z(k l; m n) X(l k; n d) Z(k b; d n)
            acc = [[{} for _ in range(sp.dim(b, k))] for _ in range(sp.dim(n, m))]
            for l in objs:
                if not sp.dim(l, k):
                    continue
                for d in objs:
                    if not sp.dim(n, d):
                        continue
                    zx = _emul(data, _zmat(X, Z, (k, l, m, n)), X.matrix((l, k, n, d)))
                    acc = _eadd(acc, _emul(data, zx, _zmat(X, Z, (k, b, d, n))))
            rep.record("ZXZ=Z", _eequal(acc, _zmat(X, Z, (k, b, m, n))), {"square": Square(k, b, m, n)})
    return rep


def is_unitary(X: Corep) -> bool:
    """Generalized inverse equals the blockwise adjoint: ``Z(k l;m n) = X(l k;n m)*``."""
    data = X.host
    Z = generalized_inverse(X)
    for sq, zm in Z.items():
        xm = X.matrix((sq.l, sq.k, sq.n, sq.m))
        adj = [[data.star(xm[q][p]) if xm[q][p] else {} for q in range(len(xm))]
               for p in range(len(xm[0]) if xm else 0)]
        if not _eequal(zm, adj):
            return False
    return True


# --------------------------------------------------------------------------
# morphisms

def is_morphism(T: BlockMap, X: Corep, Y: Corep) -> bool:
    """``(1 ⊗ T_kl) X(k l; m n) = Y(k l; m n)(1 ⊗ T_mn)`` on every square."""
    return morphism_defect(T, X, Y) is None


def morphism_defect(T: BlockMap, X: Corep, Y: Corep):
    """First square on which ``T`` fails to intertwine, or ``None``."""
    for (k, l) in Y.space.blocks():
        for (m, n) in X.space.blocks():
            sq = Square(k, l, m, n)
            lhs = _scal_left(T.block(k, l), X.matrix(sq)) if X.space.dim(k, l) else \
                [[{} for _ in range(X.space.dim(m, n))] for _ in range(Y.space.dim(k, l))]
            rhs = _scal_right(Y.matrix(sq), T.block(m, n)) if Y.space.dim(m, n) else \
                [[{} for _ in range(X.space.dim(m, n))] for _ in range(Y.space.dim(k, l))]
            if not _eequal(lhs, rhs):
                return sq
    return None


def hom_space(X: Corep, Y: Corep) -> list:
    """Basis of the intertwiners ``X → Y`` as :class:`BlockMap` objects."""
    common = [kl for kl in X.space.blocks() if Y.space.dim(*kl)]
    unknowns = []
    pos = {}
    for kl in common:
        for a in range(Y.space.dim(*kl)):
            for b in range(X.space.dim(*kl)):
                pos[(kl, a, b)] = len(unknowns)
                unknowns.append((kl, a, b))
    if not unknowns:
        return []
    rows: list = []
    for (k, l) in Y.space.blocks():
        for (m, n) in X.space.blocks():
            sq = Square(k, l, m, n)
            xm = X.matrix(sq) if X.space.dim(k, l) else None
            ym = Y.matrix(sq) if Y.space.dim(m, n) else None
            for a in range(Y.space.dim(k, l)):
                for j in range(X.space.dim(m, n)):
                    eq: dict = {}
                    if xm is not None:
                        for i in range(X.space.dim(k, l)):
                            for t, c in xm[i][j].items():
                                eq.setdefault(t, {})[pos[((k, l), a, i)]] = \
                                    eq.get(t, {}).get(pos[((k, l), a, i)], 0) + c
                    if ym is not None:
                        for j2 in range(Y.space.dim(m, n)):
                            for t, c in ym[a][j2].items():
                                u = pos[((m, n), j2, j)]
                                eq.setdefault(t, {})[u] = eq.get(t, {}).get(u, 0) - c
                    for coeffs in eq.values():
                        row = {u: c for u, c in coeffs.items() if c}
                        if row:
                            rows.append(row)
    uniq = {tuple(sorted(r.items(), key=lambda kv: kv[0])) for r in rows}
    dense = [[dict(r).get(u, Scalar(0)) for u in range(len(unknowns))] for r in uniq]
    null = linalg.nullspace(dense, len(unknowns))
    out = []
    for vec in null:
        blocks = {kl: linalg.zeros(Y.space.dim(*kl), X.space.dim(*kl)) for kl in common}
        for u, c in enumerate(vec):
            if c:
                kl, a, b = unknowns[u]
                blocks[kl][a][b] = Scalar(c)
        out.append(BlockMap(X.space, Y.space, blocks))
    return out


def is_irreducible(X: Corep) -> bool:
    return X.dim > 0 and len(hom_space(X, X)) == 1


def equivalent(X: Corep, Y: Corep) -> bool:
    """Equivalence test for irreducible coreps."""
    if X.space.dims != Y.space.dims:
        return False
    return bool(hom_space(X, Y))


def average_intertwiner(T, X: Corep, Y: Corep, m, n, side: str = "left") -> BlockMap:
    """Average a linear map ``T: V_mn → W_mn`` into a morphism ``X → Y``.

    ``side="left"`` gives ``Ť_kl = (φ⊗id)(Z_Y(n m; l k)(1⊗T)X(m n; k l))``;
    ``side="right"`` gives ``T̂_kl = (φ⊗id)(Y(k l; m n)(1⊗T)Z_X(l k; n m))``.
    """
    data = X.host
    blocks = {}
    common = [kl for kl in X.space.blocks() if Y.space.dim(*kl)]
    if side == "left":
        ZY = generalized_inverse(Y)
        for (k, l) in common:
            prod = _emul(data, _scal_right(_zmat(Y, ZY, (n, m, l, k)), T), X.matrix((m, n, k, l)))
            blocks[(k, l)] = _escalar(data, prod, data.phi)
    elif side == "right":
        ZX = generalized_inverse(X)
        for (k, l) in common:
            prod = _emul(data, _scal_right(Y.matrix((k, l, m, n)), T), _zmat(X, ZX, (l, k, n, m)))
            blocks[(k, l)] = _escalar(data, prod, data.phi)
    else:
        raise ValueError("side must be 'left' or 'right'")
    return BlockMap(X.space, Y.space, blocks)


def restrict(X: Corep, P: dict, L: dict, dims: dict, name="") -> Corep:
    """Sub-corep ``L X P`` for an invariant subspace with embedding ``P`` and left inverse ``L``."""
    data = X.host
    space = BigradedSpace(data.objects, dims)
    blocks = {}
    for (k, l) in space.blocks():
        for (m, n) in space.blocks():
            sq = Square(k, l, m, n)
            mat = _scal_right(_scal_left(L[(k, l)], X.matrix(sq)), P[(m, n)])
            cell = {(i, j): v for i, row in enumerate(mat) for j, v in enumerate(row) if v}
            if cell:
                blocks[sq] = cell
    return Corep(data, space, blocks, name or f"sub({X.name})")


# --------------------------------------------------------------------------
# decomposition

@dataclass
class Summand:
    irrep: Corep
    multiplicity: int
    embeddings: list
    isometric: bool


@dataclass
class Decomposition:
    source: Corep
    summands: list
    report: VerificationReport


def _endo_matrix(X: Corep, T: BlockMap):
    """Block diagonal assembly of ``T`` over the carrier blocks."""
    order = X.space.blocks()
    n = X.dim
    big = linalg.zeros(n, n)
    off = 0
    for kl in order:
        d = X.space.dim(*kl)
        blk = T.block(*kl)
        for i in range(d):
            for j in range(d):
                big[off + i][off + j] = blk[i][j]
        off += d
    return big


def _poly_eval(coeffs, M):
    """Horner evaluation of a polynomial (highest degree first) at a matrix."""
    n = len(M)
    out = linalg.zeros(n, n)
    for c in coeffs:
        out = linalg.matmul(out, M)
        for i in range(n):
            out[i][i] = out[i][i] + c
    return out


def _primary_factors(T: BlockMap, X: Corep):
    import sympy
    big = _endo_matrix(X, T)
    try:
        sm = sympy.Matrix([[to_sympy(x) for x in row] for row in big])
    except ScalarError:
        return None
    lam = sympy.Symbol("lam")
    poly = sm.charpoly(lam).as_expr()
    rads = sorted({r for row in big for x in row for r in x.radicals() if r != 1})
    ext = [sympy.sqrt(r) if r > 0 else sympy.I * sympy.sqrt(-r) for r in rads]
    _, factors = sympy.factor_list(poly, lam, extension=ext) if ext else sympy.factor_list(poly, lam)
    if len(factors) == 1 and sympy.degree(factors[0][0], lam) == 2:
        p = sympy.Poly(factors[0][0], lam)
        a, b, c = p.all_coeffs()
        disc = sympy.nsimplify(b * b - 4 * a * c)
        if disc.is_Rational:
            ext = ext + [sympy.sqrt(disc)]
            _, factors = sympy.factor_list(poly, lam, extension=ext)
    out = []
    for f, mult in factors:
        coeffs = sympy.Poly(f, lam).all_coeffs()
        try:
            out.append(([from_sympy(c) for c in coeffs], mult))
        except ScalarError:
            return None
    return out


def _split(X: Corep, rng: random.Random):
    """Split ``X`` into invariant pieces; ``None`` when irreducible."""
    basis = hom_space(X, X)
    if len(basis) <= 1:
        return None
    candidates = list(basis)
    for _ in range(12):
        comb = None
        for T in basis:
            c = Scalar(rng.randint(-5, 5))
            part = {kl: linalg.scale(T.block(*kl), c) for kl in T.blocks}
            if comb is None:
                comb = part
            else:
                comb = {kl: linalg.add(comb.get(kl, linalg.zeros(len(v), len(v[0]) if v else 0)), v)
                        for kl, v in part.items()}
        candidates.append(BlockMap(X.space, X.space, comb))
    for T in candidates:
        factors = _primary_factors(T, X)
        if not factors or len(factors) < 2:
            continue
        pieces = []
        for coeffs, mult in factors:
            sub = {}
            for kl in X.space.blocks():
                M = T.block(*kl)
                N = linalg.matpow(_poly_eval(coeffs, M), mult)
                ker = linalg.nullspace(N, len(M))
                if ker:
                    sub[kl] = ker
            pieces.append(sub)
        if all(sum(len(v) for v in p.values()) for p in pieces):
            return pieces
    raise DecompositionError(f"could not split the endomorphism algebra of {X.name} "
                             f"(dimension {len(basis)}) over the scalar tower")


def _orthonormalize(cols: list):
    """Gram-Schmidt on column vectors; returns ``(Q, R)`` with ``cols = Q R`` or ``None``."""
    q: list = []
    n = len(cols)
    R = linalg.zeros(n, n)
    for j, v in enumerate(cols):
        w = list(v)
        for i, u in enumerate(q):
            c = sum((x.conjugate() * y for x, y in zip(u, v)), Scalar(0))
            R[i][j] = c
            w = [a - c * b for a, b in zip(w, u)]
        norm2 = sum((x.conjugate() * x for x in w), Scalar(0))
        try:
            nrm = sqrt(norm2)
        except (UnsupportedRadicandError, ScalarError):
            return None
        R[j][j] = nrm
        inv = nrm.inverse()
        q.append([x * inv for x in w])
    return q, R


def _pieces(X: Corep, rng) -> list:
    """Recursive split into irreducibles; returns ``[(corep, P)]`` with ``P`` the embedding."""
    parts = _split(X, rng)
    if parts is None:
        P = {kl: linalg.identity(d) for kl, d in X.space.dims.items()}
        return [(X, P)]
    out = []
    order = X.space.blocks()
    full = {}
    for kl in order:
        cols = [c for piece in parts for c in piece.get(kl, [])]
        full[kl] = linalg.inverse(linalg.transpose(cols))
    offs = {kl: 0 for kl in order}
    for piece in parts:
        dims = {kl: len(v) for kl, v in piece.items()}
        P = {kl: linalg.transpose(v) for kl, v in piece.items()}
        L = {}
        for kl in piece:
            L[kl] = full[kl][offs[kl]:offs[kl] + dims[kl]]
            offs[kl] += dims[kl]
        sub = restrict(X, P, L, dims, name=f"{X.name}|")
        for irr, Q in _pieces(sub, rng):
            out.append((irr, {kl: linalg.matmul(P[kl], Q[kl]) for kl in Q}))
    return out


def _make_isometric(X: Corep, irr: Corep, P: dict):
    """Rechoose the basis of ``irr`` so the embedding has orthonormal columns."""
    Pn, Rs, Rinv = {}, {}, {}
    for kl, mat in P.items():
        res = _orthonormalize(linalg.transpose(mat))
        if res is None:
            return irr, P, False
        q, R = res
        Pn[kl] = linalg.transpose(q)
        Rs[kl] = R
        Rinv[kl] = linalg.inverse(R)
    # irr' = R irr R^{-1}
    blocks = {}
    for sq, cell in irr.blocks.items():
        mat = _scal_right(_scal_left(Rs[sq.upper], irr.matrix(sq)), Rinv[sq.lower])
        new = {(i, j): v for i, row in enumerate(mat) for j, v in enumerate(row) if v}
        if new:
            blocks[sq] = new
    return Corep(X.host, irr.space, blocks, irr.name), Pn, True


def decompose(X: Corep, seed: int = 0, isometric: bool = True) -> Decomposition:
    rep = VerificationReport(f"decomposition of {X.name}".strip())
    if X.dim == 0:
        return Decomposition(X, [], rep)
    rng = random.Random(seed)
    found = _pieces(X, rng)
    groups: list = []
    for irr, P in found:
        iso = False
        if isometric and X.host.star_map is not None:
            irr, P, iso = _make_isometric(X, irr, P)
        for g in groups:
            if equivalent(g[0], irr):
                g[1].append((P, iso))
                break
        else:
            groups.append((irr, [(P, iso)]))
    summands = [Summand(irr, len(emb), [BlockMap(irr.space, X.space, P) for P, _ in emb],
                        all(i for _, i in emb)) for irr, emb in groups]
    total: dict = {}
    for s in summands:
        for kl, d in s.irrep.space.dims.items():
            total[kl] = total.get(kl, 0) + d * s.multiplicity
    rep.record("dimension-count", total == X.space.dims, {"pieces": total, "source": X.space.dims})
    for s in summands:
        rep.record("irreducible", is_irreducible(s.irrep), {"summand": s.irrep.name})
        for emb in s.embeddings:
            rep.record("embedding-morphism", is_morphism(emb, s.irrep, X))
    for a in range(len(summands)):
        for b in range(a + 1, len(summands)):
            rep.record("pairwise-inequivalent", not hom_space(summands[a].irrep, summands[b].irrep),
                       {"pair": [a, b]})
    return Decomposition(X, summands, rep)


# --------------------------------------------------------------------------
# orthogonality and characters

def _trace_all(T: BlockMap, X: Corep) -> Scalar:
    total = Scalar(0)
    for kl in X.space.blocks():
        total = total + linalg.trace(T.block(*kl))
    return total


def _modular_F(X: Corep):
    Xhh = double_dual(X)
    basis = hom_space(X, Xhh)
    if len(basis) != 1:
        raise CorepError(f"expected a one-dimensional space of maps X → X^^, got {len(basis)}")
    F = basis[0]
    tr = _trace_all(F, X)
    if tr.sign() < 0:
        F = BlockMap(F.source, F.target, {kl: linalg.scale(m, Scalar(-1)) for kl, m in F.blocks.items()})
    return F


def _row_classes(X: Corep):
    rows = sorted({k for k, _ in X.space.blocks()}, key=X.space.objects.index)
    cols = sorted({l for _, l in X.space.blocks()}, key=X.space.objects.index)
    return rows, cols


def modular_data(X: Corep) -> dict:
    """``F``, ``G = F⁻¹``, ``d_F`` and ``d_G`` for an irreducible corep."""
    F = _modular_F(X)
    G = BlockMap(X.space, X.space, {kl: linalg.inverse(F.block(*kl)) for kl in X.space.blocks()})
    rows, cols = _row_classes(X)
    dG = {l: sum((linalg.trace(G.block(k, l)) for k in rows if X.space.dim(k, l)), Scalar(0)) for l in cols}
    dF = {m: sum((linalg.trace(F.block(m, n)) for n in cols if X.space.dim(m, n)), Scalar(0)) for m in rows}
    return {"F": F, "G": G, "dG": dG, "dF": dF}


def schur_report(X: Corep, Y: Corep) -> VerificationReport:
    data = X.host
    rep = VerificationReport(f"orthogonality {X.name} / {Y.name}")
    for Z in (X, Y):
        if not is_irreducible(Z):
            raise CorepError(f"{Z.name} is not irreducible")
    if X is not Y:
        if hom_space(X, Y):
            rep.note("equivalent-pair", "inputs are equivalent but distinct; compare each with itself")
            return rep
        for (sa, i, j, a) in X.coefficients():
            for (sb, p, q, b) in Y.coefficients():
                if not a or not b:
                    continue
                bs = data.star(b)
                rep.record("inequivalent-phi(b*a)", not data.phi(data.mul(bs, a)),
                           {"a": [sa, i, j], "b": [sb, p, q]})
                rep.record("inequivalent-phi(ab*)", not data.phi(data.mul(a, bs)),
                           {"a": [sa, i, j], "b": [sb, p, q]})
        return rep
    md = modular_data(X)
    F, G, dG, dF = md["F"], md["G"], md["dG"], md["dF"]
    rep.data["d_G"] = dG
    rep.data["d_F"] = dF
    gvals, fvals = set(dG.values()), set(dF.values())
    rep.record("d_G-independent", len(gvals) == 1 and all(gvals), {"d_G": dG})
    rep.record("d_F-independent", len(fvals) == 1 and all(fvals), {"d_F": dF})
    if len(gvals) != 1 or len(fvals) != 1 or not all(gvals) or not all(fvals):
        return rep
    dg, df = next(iter(gvals)), next(iter(fvals))
    for kl in X.space.blocks():
        ok, mode, w = linalg.psd_status(F.block(*kl))
        rep.record("F-positive", ok, w, status=None if not ok or mode == "exact" else NUMERIC)
    Z = generalized_inverse(X)
    sp = X.space
    for sq in X.squares():
        k, l, m, n = sq
        dkl, dmn = sp.dim(k, l), sp.dim(m, n)
        # trace formulas
        zx = _escalar(data, _emul(data, _zmat(X, Z, (l, k, n, m)), X.matrix(sq)), data.phi)
        want = linalg.scale(linalg.identity(dmn), linalg.trace(G.block(k, l)) / dg)
        rep.record("trace-formula-G", linalg.equal(zx, want), {"square": sq})
        xz = _escalar(data, _emul(data, X.matrix(sq), _zmat(X, Z, (l, k, n, m))), data.phi)
        want = linalg.scale(linalg.identity(dkl), linalg.trace(F.block(m, n)) / df)
        rep.record("trace-formula-F", linalg.equal(xz, want), {"square": sq})
        # entrywise forms: φ(z_pq x_ij) = δ_pj G[i][q]/d_G, φ(x_ij z_pq) = δ_iq F[p][j]/d_F
        zm = _zmat(X, Z, (l, k, n, m))
        Gb, Fb = G.block(k, l), F.block(m, n)
        for i in range(dkl):
            for j in range(dmn):
                x = X.entry(sq, i, j)
                for p in range(dmn):
                    for q in range(dkl):
                        z = zm[p][q]
                        lhs = data.phi(data.mul(z, x))
                        rhs = Gb[i][q] / dg if p == j else Scalar(0)
                        rep.record("flip-formula-G", lhs == rhs, {"square": sq, "entry": [i, j, p, q]})
                        lhs = data.phi(data.mul(x, z))
                        rhs = Fb[p][j] / df if i == q else Scalar(0)
                        rep.record("flip-formula-F", lhs == rhs, {"square": sq, "entry": [i, j, p, q]})
    if data.star_map is not None and is_unitary(X):
        for sq in X.squares():
            k, l, m, n = sq
            Gb, Fb = G.block(k, l), F.block(m, n)
            for i in range(sp.dim(k, l)):
                for j in range(sp.dim(m, n)):
                    x = X.entry(sq, i, j)
                    for p in range(sp.dim(k, l)):
                        for q in range(sp.dim(m, n)):
                            y = data.star(X.entry(sq, p, q))
                            lhs = data.phi(data.mul(y, x))
                            rhs = Gb[i][p] / dg if q == j else Scalar(0)
                            rep.record("unitary-inner-product-G", lhs == rhs,
                                       {"square": sq, "entry": [i, j, p, q]})
                            lhs = data.phi(data.mul(x, y))
                            rhs = Fb[q][j] / df if i == p else Scalar(0)
                            rep.record("unitary-inner-product-F", lhs == rhs,
                                       {"square": sq, "entry": [i, j, p, q]})
    else:
        rep.note("unitary-inner-product", "input is not unitary; only the general forms were checked")
    return rep


@dataclass
class CharacterTable:
    host: PartialHopfData
    irreps: list
    F: dict
    zs: list
    functionals: dict
    report: VerificationReport = field(default_factory=VerificationReport)

    def f(self, z: int) -> dict:
        return self.functionals[z]

    def evaluate(self, z: int, a: dict) -> Scalar:
        fz = self.functionals[z]
        return sum((c * fz.get(i, Scalar(0)) for i, c in a.items()), Scalar(0))

    def to_json(self) -> dict:
        data = self.host
        out = {"irreducibles": [], "functionals": {}}
        for X in self.irreps:
            F = self.F[X.name]
            out["irreducibles"].append({
                "name": X.name,
                "F": {f"{k},{l}": [[str(x) for x in row] for row in F.block(k, l)]
                      for (k, l) in X.space.blocks()}})
        for z in self.zs:
            fz = self.functionals[z]
            out["functionals"][str(z)] = {data.labels[i]: str(c) for i, c in sorted(fz.items()) if c}
        out["report"] = self.report.to_json()
        return out


def peter_weyl_matrix(data: PartialHopfData, irreps: list):
    cols = []
    labels = []
    for X in irreps:
        for sq, i, j, vec in X.coefficients():
            cols.append(vec)
            labels.append((X.name, sq, i, j))
    M = [[cols[c].get(r, Scalar(0)) for c in range(len(cols))] for r in range(data.dim)]
    return M, labels


def peter_weyl_report(data: PartialHopfData, irreps: list) -> VerificationReport:
    rep = VerificationReport("peter-weyl")
    M, labels = peter_weyl_matrix(data, irreps)
    r = linalg.rank(M) if M and M[0] else 0
    rep.record("coefficients-span", r == data.dim, {"rank": r, "dim": data.dim})
    rep.record("coefficients-independent", r == len(labels), {"rank": r, "coefficients": len(labels)})
    return rep


def woronowicz_characters(data: PartialHopfData, irreps: list, zs) -> CharacterTable:
    zs = sorted({int(z) for z in zs})
    rep = VerificationReport("characters")
    M, labels = peter_weyl_matrix(data, irreps)
    if len(labels) != data.dim or linalg.rank(M) != data.dim:
        raise CorepError("matrix coefficients of the given irreducibles do not form a basis")
    Minv = linalg.inverse(M)
    Fs = {}
    for X in irreps:
        md = modular_data(X)
        dg = next(iter(md["dG"].values()))
        df = next(iter(md["dF"].values()))
        c = sqrt(dg / df)
        F = BlockMap(X.space, X.space, {kl: linalg.scale(md["F"].block(*kl), c) for kl in X.space.blocks()})
        Fs[X.name] = F
        rows, cols = _row_classes(X)
        newF = {sum((linalg.trace(F.block(m, n)) for n in cols if X.space.dim(m, n)), Scalar(0)) for m in rows}
        Ginv = {kl: linalg.inverse(F.block(*kl)) for kl in X.space.blocks()}
        newG = {sum((linalg.trace(Ginv[(k, l)]) for k in rows if X.space.dim(k, l)), Scalar(0)) for l in cols}
        rep.record("scaling-d_F=d_G", newF == newG and len(newF) == 1, {"irreducible": X.name})
    need = set(zs) | {0, 1, -1, 2}
    need |= {a + b for a in zs for b in zs} | {-z for z in zs}
    cache = {}

    def functional(z):
        if z in cache:
            return cache[z]
        vals = []
        for (name, sq, i, j) in labels:
            if sq.upper != sq.lower:
                vals.append(Scalar(0))
                continue
            Fz = linalg.matpow(Fs[name].block(sq.k, sq.l), z)
            vals.append(Fz[i][j])
        # f_z(b_t) = Σ_P vals_P (M^{-1})_{P,t}
        fz = {}
        for t in range(data.dim):
            s = Scalar(0)
            for p, v in enumerate(vals):
                if v and Minv[p][t]:
                    s = s + v * Minv[p][t]
            if s:
                fz[t] = s
        cache[z] = fz
        return fz

    for z in sorted(need):
        functional(z)

    def ev(z, a):
        fz = cache[z]
        return sum((c * fz.get(i, Scalar(0)) for i, c in a.items()), Scalar(0))

    table = CharacterTable(data, irreps, Fs, zs, cache, rep)
    basis = range(data.dim)
    # f_0 = ε
    rep.record("f0-is-counit", all(ev(0, {t: Scalar(1)}) == data.eps({t: Scalar(1)}) for t in basis))
    for z in zs:
        for t in basis:
            g = data.grades[t]
            if g.upper != g.lower:
                rep.record("support", not ev(z, {t: Scalar(1)}), {"z": z, "basis": data.labels[t]})
        for a in zs:
            for t in basis:
                d = data.delta({t: Scalar(1)})
                lhs = sum((c * cache[z].get(i, Scalar(0)) * cache[a].get(j, Scalar(0))
                           for (i, j), c in d.items()), Scalar(0))
                rep.record("convolution", lhs == ev(z + a, {t: Scalar(1)}),
                           {"z": z, "z'": a, "basis": data.labels[t]})
        for l in data.objects:
            for n in data.objects:
                u = data.unit(l, n)
                if u:
                    rep.record("units", ev(z, u) == (1 if l == n else 0), {"z": z, "unit": [l, n]})
        for t in basis:
            rep.record("antipode", ev(z, data.S({t: Scalar(1)})) == ev(-z, {t: Scalar(1)}),
                       {"z": z, "basis": data.labels[t]})
            if data.star_map is not None:
                rep.record("conjugation", ev(z, data.star({t: Scalar(1)})).conjugate() == ev(-z, {t: Scalar(1)}),
                           {"z": z, "basis": data.labels[t]})
        for s in basis:
            for t in data.composable_right(s):
                ab = data.mul({s: Scalar(1)}, {t: Scalar(1)})
                rep.record("multiplicative", ev(z, ab) == ev(z, {s: Scalar(1)}) * ev(z, {t: Scalar(1)}),
                           {"z": z, "pair": [data.labels[s], data.labels[t]]})

    def conv3(fl, fr, a):
        out: dict = {}
        for (i, j), c in data.delta(a).items():
            for (j1, j2), c2 in data.delta({j: Scalar(1)}).items():
                x = c * c2 * cache[fl].get(i, Scalar(0)) * cache[fr].get(j2, Scalar(0))
                if x:
                    out[j1] = out.get(j1, 0) + x
        return {k: v for k, v in out.items() if v}

    sigma = {t: conv3(1, 1, {t: Scalar(1)}) for t in basis}
    for t in basis:
        b = {t: Scalar(1)}
        s2 = data.S(data.S(b))
        rep.record("S^2-implemented", not vadd(s2, conv3(1, -1, b), -1), {"basis": data.labels[t]})
        rep.record("f2-is-eps-sigma", ev(2, b) == data.eps(sigma[t]), {"basis": data.labels[t]})
    if data.integral is not None:
        for s in basis:
            for t in basis:
                a, b = {s: Scalar(1)}, {t: Scalar(1)}
                rep.record("modular-automorphism", data.phi(data.mul(a, b)) == data.phi(data.mul(b, sigma[s])),
                           {"pair": [data.labels[s], data.labels[t]]})
    rep.note("growth", "the analytic growth clause is not machine-checked")
    rep.declare("growth")
    return table


def find_irreducibles(data: PartialHopfData) -> list:
    """Pairwise inequivalent irreducibles found in the regular coreps of the basis elements."""
    found: list = []
    for idx in data.blocks.values():
        for i in idx:
            reg = regular_corep_from_element(data, {i: Scalar(1)})
            for summand in decompose(reg).summands:
                if not any(equivalent(summand.irrep, f) for f in found):
                    found.append(summand.irrep)
    for n, X in enumerate(found):
        X.name = f"irr{n}"
    return found
