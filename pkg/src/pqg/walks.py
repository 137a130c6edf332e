"""Reciprocal random walks, the R map and edge colorings."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg
from .grading import BigradedSpace, BlockMap, balanced_tensor_index, trivial_space
from .partial_hopf import SchemaError
from .report import SKIPPED, VerificationReport
from .scalars import Scalar, ScalarError, as_scalar, sqrt


class WalkError(ValueError):
    pass


class ColoringError(WalkError):
    pass


@dataclass(frozen=True)
class Edge:
    id: str
    src: str
    tgt: str
    weight: Scalar
    sign: int
    bar: str
    color: str | None = None


@dataclass
class ReciprocalWalk:
    vertices: tuple
    interior: tuple
    edges: dict
    t: Scalar
    name: str = ""
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.vertices = tuple(str(v) for v in self.vertices)
        self.interior = tuple(str(v) for v in self.interior)
        self._out: dict = {v: [] for v in self.vertices}
        self._in: dict = {v: [] for v in self.vertices}
        self.edge_index = {}
        for n, (eid, e) in enumerate(self.edges.items()):
            if e.src not in self._out or e.tgt not in self._in:
                raise WalkError(f"edge {eid} leaves the vertex set")
            self._out[e.src].append(eid)
            self._in[e.tgt].append(eid)
            self.edge_index[eid] = n
        self._depth = None

    def out_edges(self, v) -> list:
        return self._out.get(v, [])

    def in_edges(self, v) -> list:
        return self._in.get(v, [])

    def edge(self, eid) -> Edge:
        return self.edges[eid]

    def src(self, eid):
        return self.edges[eid].src

    def tgt(self, eid):
        return self.edges[eid].tgt

    def bar(self, eid):
        return self.edges[eid].bar

    def weight(self, eid) -> Scalar:
        return self.edges[eid].weight

    def sign(self, eid) -> int:
        return self.edges[eid].sign

    def is_interior(self, v) -> bool:
        return v in set(self.interior)

    def depth(self, v) -> float:
        """Graph distance from ``v`` to the nearest non-interior vertex."""
        if self._depth is None:
            inner = set(self.interior)
            dist = {u: 0 for u in self.vertices if u not in inner}
            frontier = list(dist)
            while frontier:
                nxt = []
                for u in frontier:
                    for eid in self._out[u] + self._in[u]:
                        e = self.edges[eid]
                        for z in (e.src, e.tgt):
                            if z not in dist:
                                dist[z] = dist[u] + 1
                                nxt.append(z)
                frontier = nxt
            self._depth = dist
        return self._depth.get(v, float("inf"))

    @property
    def abs_t(self) -> Scalar:
        return self.t if self.t.sign() > 0 else -self.t

    def hilbert_space(self) -> BigradedSpace:
        dims: dict = {}
        for e in self.edges.values():
            dims[(e.src, e.tgt)] = dims.get((e.src, e.tgt), 0) + 1
        return BigradedSpace(self.vertices, dims)

    def block_edges(self, v, w) -> list:
        """Edges ``v → w`` in walk order; their position is the basis index in ``H_vw``."""
        return [eid for eid in self._out.get(v, []) if self.edges[eid].tgt == w]


# --------------------------------------------------------------------------
# validation

def validate_walk(walk: ReciprocalWalk) -> VerificationReport:
    rep = VerificationReport(f"walk {walk.name}".strip())
    tsign = walk.t.sign()
    if not walk.t:
        rep.record("parameter", False, {"reason": "t must be nonzero"})
        return rep
    for eid, e in walk.edges.items():
        b = walk.edges.get(e.bar)
        if b is None:
            rep.record("involution", False, {"edge": eid, "reason": "bar edge missing"})
            continue
        ok = b.bar == eid and b.src == e.tgt and b.tgt == e.src
        rep.record("involution", ok, {"edge": eid, "bar": e.bar})
        rep.record("weight-positive", e.weight.is_real() and e.weight.sign() > 0, {"edge": eid})
        rep.record("weight-reciprocality", e.weight * b.weight == 1,
                   {"edge": eid, "w(e)": e.weight, "w(bar e)": b.weight})
        rep.record("sign-values", e.sign in (1, -1), {"edge": eid})
        rep.record("sign-reciprocality", e.sign * b.sign == tsign,
                   {"edge": eid, "sgn(e)": e.sign, "sgn(bar e)": b.sign, "sgn(t)": tsign})
    abs_t = walk.abs_t
    inner = set(walk.interior)
    for v in walk.vertices:
        total = sum((walk.weight(e) for e in walk.out_edges(v)), Scalar(0))
        if v in inner:
            rep.record("random-walk", total == abs_t, {"vertex": v, "sum": total, "|t|": abs_t})
        else:
            rep.record("random-walk", None, {"vertex": v, "sum": total}, status=SKIPPED)
    degree = max((len(walk.out_edges(v)) + len(walk.in_edges(v)) for v in walk.vertices), default=0)
    rep.record("finite-degree", True)
    rep.data["max-degree"] = degree
    return rep


# --------------------------------------------------------------------------
# generators

def _podles_weights(q: Fraction, x: Fraction, k: int):
    """``(w(k,k+1), w(k,k-1))`` for rational ``|q|`` and ``x ∈ ½ℤ``.

    With ``Q = |q|`` and ``H(k) = Q^{x+k} + Q^{-(x+k)}``, the ratio
    ``H(k±1)/H(k)`` is rational because ``2(x+k)`` is an integer.
    """
    Q = abs(q)
    two_x = 2 * x
    if two_x.denominator != 1:
        raise WalkError("x must be an integer or half-integer for exact weights")
    n = int(two_x) + 2 * k

    def g(m):
        return Q ** m + 1

    up = g(n + 2) / (g(n) * Q)
    down = g(n - 2) * Q / g(n)
    return up, down


def podles_walk(q, x, window: Sequence[int]) -> ReciprocalWalk:
    q = as_scalar(q)
    x = as_scalar(x)
    if not q.is_rational() or not x.is_rational():
        raise WalkError("q and x must be rational")
    qf, xf = q.to_fraction(), x.to_fraction()
    if not (0 < abs(qf) < 1):
        raise WalkError("the Podleś walk needs 0 < |q| < 1")
    lo, hi = int(window[0]), int(window[1])
    if lo > hi:
        raise WalkError("empty window")
    sgn_q = 1 if qf > 0 else -1
    t = -(qf + 1 / qf)
    edges = {}
    for k in range(lo, hi + 1):
        up, down = _podles_weights(qf, xf, k)
        if k + 1 <= hi:
            edges[f"{k}->{k + 1}"] = Edge(f"{k}->{k + 1}", str(k), str(k + 1), Scalar(up), 1,
                                           f"{k + 1}->{k}", "+")
        if k - 1 >= lo:
            edges[f"{k}->{k - 1}"] = Edge(f"{k}->{k - 1}", str(k), str(k - 1), Scalar(down), -sgn_q,
                                           f"{k - 1}->{k}", "-")
    verts = tuple(str(k) for k in range(lo, hi + 1))
    interior = tuple(str(k) for k in range(lo + 1, hi))
    return ReciprocalWalk(verts, interior, edges, Scalar(t), name=f"podles(q={qf},x={xf},[{lo},{hi}])",
                          params={"family": "podles", "q": str(qf), "x": str(xf), "window": [lo, hi]})


def one_vertex_walk(q=1) -> ReciprocalWalk:
    """Two loops ``e``, ``ebar`` at one vertex with weights ``|q|`` and ``|q|⁻¹``."""
    q = as_scalar(q)
    if not q.is_rational() or not q:
        raise WalkError("q must be a nonzero rational")
    qf = q.to_fraction()
    if abs(qf) > 1:
        raise WalkError("the one-vertex walk uses 0 < |q| <= 1")
    Q = abs(qf)
    sgn_q = 1 if qf > 0 else -1
    edges = {
        "e": Edge("e", "0", "0", Scalar(Q), 1, "ebar", "a"),
        "ebar": Edge("ebar", "0", "0", Scalar(1 / Q), -sgn_q, "e", "abar"),
    }
    return ReciprocalWalk(("0",), ("0",), edges, Scalar(-(qf + 1 / qf)), name=f"one-vertex(q={qf})",
                          params={"family": "one-vertex", "q": str(qf)})


def shift_isomorphism_report(q, x, window, walk: ReciprocalWalk | None = None,
                             shifted: ReciprocalWalk | None = None) -> VerificationReport:
    """Shifting ``x`` by one matches the walk translated by one vertex.

    ``walk`` and ``shifted`` default to the generated windows for ``x`` and
    ``x + 1``; passing them lets a caller check walks from elsewhere.
    """
    rep = VerificationReport("podles-translation")
    lo, hi = window
    a = walk if walk is not None else podles_walk(q, x, (lo, hi))
    b = shifted if shifted is not None else podles_walk(q, as_scalar(x) + 1, (lo - 1, hi - 1))
    for eid, e in b.edges.items():
        s, t = int(e.src) + 1, int(e.tgt) + 1
        other = a.edges.get(f"{s}->{t}")
        rep.record("weights-match", other is not None and other.weight == e.weight,
                   {"edge": eid, "image": f"{s}->{t}"})
    return rep


# --------------------------------------------------------------------------
# the R map

def build_r_map(walk: ReciprocalWalk) -> BlockMap:
    """``R δ_v = Σ_{s(e)=v} sgn(e)√w(e) δ_e ⊗ δ_ē`` as a block map ``ℂ^(V) → H ⊗ H``."""
    H = walk.hilbert_space()
    idx = balanced_tensor_index(H, H)
    tgt = BigradedSpace(walk.vertices, {km: len(e) for km, e in idx.items()})
    src = trivial_space(walk.vertices)
    blocks = {}
    for v in walk.vertices:
        entries = idx.get((v, v), [])
        col = [[Scalar(0)] for _ in entries]
        pos = {ent: n for n, ent in enumerate(entries)}
        for eid in walk.out_edges(v):
            e = walk.edge(eid)
            i = walk.block_edges(e.src, e.tgt).index(eid)
            j = walk.block_edges(e.tgt, e.src).index(e.bar)
            col[pos[(e.tgt, i, j)]][0] = e.sign * sqrt(e.weight)
        blocks[(v, v)] = col
    return BlockMap(src, tgt, blocks)


def _r_coeffs(walk, R):
    """``{v: {(edge, edge'): coefficient}}`` read back from the block map."""
    H = walk.hilbert_space()
    idx = balanced_tensor_index(H, H)
    out = {}
    for v in walk.vertices:
        col = R.block(v, v)
        got = {}
        for n, (l, i, j) in enumerate(idx.get((v, v), [])):
            c = col[n][0]
            if c:
                got[(walk.block_edges(v, l)[i], walk.block_edges(l, v)[j])] = c
        out[v] = got
    return out


def verify_conjugate_equations(walk: ReciprocalWalk, R: BlockMap) -> VerificationReport:
    rep = VerificationReport(f"conjugate equations {walk.name}".strip())
    coeffs = _r_coeffs(walk, R)
    abs_t = walk.abs_t
    tsign = walk.t.sign()
    rep.data["|q|+|q|^-1"] = abs_t
    for v in walk.vertices:
        norm = sum((c.conjugate() * c for c in coeffs[v].values()), Scalar(0))
        if not walk.out_edges(v):
            rep.record("R*R", None, {"vertex": v, "reason": "no outgoing edges"}, status=SKIPPED)
        elif walk.is_interior(v):
            rep.record("R*R", norm == abs_t, {"vertex": v, "value": norm})
        else:
            rep.record("R*R", None, {"vertex": v, "value": norm}, status=SKIPPED)
    # (R*⊗1)(1⊗R) δ_f = Σ_{(g,h) ∈ R δ_{t(f)}} conj(R_{s(f)}[(f, g)]) c_gh δ_h
    for fid, f in walk.edges.items():
        out: dict = {}
        for (g, h), c in coeffs[f.tgt].items():
            left = coeffs[f.src].get((fid, g))
            if left:
                out[h] = out.get(h, 0) + left.conjugate() * c
        out = {h: c for h, c in out.items() if c}
        witness = {"edge": fid, "image": out}
        if walk.is_interior(f.src) and walk.is_interior(f.tgt):
            rep.record("snake", out == {fid: Scalar(tsign)}, witness)
        else:
            rep.record("snake", None, witness, status=SKIPPED)
    rep.data["snake-scalar"] = tsign
    return rep


# --------------------------------------------------------------------------
# colorings

@dataclass
class ColoredWalk:
    walk: ReciprocalWalk
    colors: tuple
    color_of: dict
    bar_color: dict
    report: VerificationReport

    def e(self, a, v):
        """The edge of color ``a`` leaving ``v`` or ``None``."""
        for eid in self.walk.out_edges(v):
            if self.color_of[eid] == a:
                return eid
        return None

    def f(self, w, a):
        """The edge of color ``a`` arriving at ``w`` or ``None``."""
        for eid in self.walk.in_edges(w):
            if self.color_of[eid] == a:
                return eid
        return None

    def act(self, a, v):
        eid = self.e(a, v)
        return None if eid is None else self.walk.tgt(eid)

    def w_a(self, a, v) -> Scalar:
        return self.walk.weight(self.e(a, v))

    def sgn_a(self, a, v) -> int:
        return self.walk.sign(self.e(a, v))

    def gamma(self, a, v) -> Scalar:
        eid = self.e(a, v)
        return self.walk.sign(eid) * sqrt(self.walk.weight(eid))


def color_walk(walk: ReciprocalWalk, coloring: Mapping | None = None) -> ColoredWalk:
    """Attach a coloring (edge id → color); defaults to the colors stored on the edges."""
    if coloring is None:
        coloring = {eid: e.color for eid, e in walk.edges.items()}
    missing = [eid for eid in walk.edges if coloring.get(eid) is None]
    if missing:
        raise ColoringError(f"coloring is not a partition: uncolored edges {missing[:5]}")
    extra = [eid for eid in coloring if eid not in walk.edges]
    if extra:
        raise ColoringError(f"coloring names unknown edges {extra[:5]}")
    colors = tuple(sorted({coloring[e] for e in walk.edges}))
    for v in walk.vertices:
        seen: dict = {}
        for eid in walk.out_edges(v):
            a = coloring[eid]
            if a in seen:
                raise ColoringError(f"color {a!r} has two edges {seen[a]!r}, {eid!r} leaving vertex {v}")
            seen[a] = eid
    bar_color: dict = {}
    for eid, e in walk.edges.items():
        a, b = coloring[eid], coloring[e.bar]
        if bar_color.setdefault(a, b) != b:
            raise ColoringError(f"color {a!r} has no consistent conjugate color")
    rep = VerificationReport("coloring")
    cw = ColoredWalk(walk, colors, dict(coloring), bar_color, rep)
    for a in colors:
        if bar_color.get(bar_color.get(a)) != a:
            rep.record("color-involution", False, {"color": a})
        else:
            rep.record("color-involution", True)
    for v in walk.interior:
        for a in colors:
            eid = cw.e(a, v)
            rep.record("unique-edge", eid is not None, {"color": a, "vertex": v})
            if eid is None:
                continue
            abar = bar_color[a]
            av = walk.tgt(eid)
            rep.record("bar-compatibility", walk.bar(eid) == cw.e(abar, av),
                       {"color": a, "vertex": v})
    for a in colors:
        images: dict = {}
        for v in walk.interior:
            av = cw.act(a, v)
            if av is None:
                continue
            rep.record("action-injective", av not in images, {"color": a, "vertex": v, "image": av})
            images[av] = v
            back = cw.act(bar_color[a], av)
            rep.record("action-inverse", back == v, {"color": a, "vertex": v})
    return cw


# --------------------------------------------------------------------------
# JSON

def walk_to_json(walk: ReciprocalWalk) -> dict:
    out = {"kind": "walk", "name": walk.name, "t": str(walk.t),
           "vertices": list(walk.vertices), "interior": list(walk.interior),
           "edges": []}
    for eid, e in walk.edges.items():
        ent = {"id": eid, "src": e.src, "tgt": e.tgt, "weight": str(e.weight), "sign": e.sign, "bar": e.bar}
        if e.color is not None:
            ent["color"] = e.color
        out["edges"].append(ent)
    if walk.params:
        out["params"] = walk.params
    return out


def walk_from_json(doc: Mapping) -> ReciprocalWalk:
    if doc.get("kind", "walk") != "walk":
        raise SchemaError("/kind", "expected 'walk'")
    for key in ("t", "vertices", "edges"):
        if key not in doc:
            raise SchemaError(f"/{key}", "missing field")
    try:
        t = as_scalar(doc["t"])
    except (ScalarError, ValueError) as exc:
        raise SchemaError("/t", str(exc)) from None
    verts = [str(v) for v in doc["vertices"]]
    interior = [str(v) for v in doc.get("interior", verts)]
    edges = {}
    for n, ent in enumerate(doc["edges"]):
        path = f"/edges/{n}"
        for key in ("id", "src", "tgt", "weight", "sign", "bar"):
            if key not in ent:
                raise SchemaError(f"{path}/{key}", "missing field")
        try:
            w = as_scalar(ent["weight"])
        except (ScalarError, ValueError) as exc:
            raise SchemaError(f"{path}/weight", str(exc)) from None
        if ent["sign"] not in (1, -1) or isinstance(ent["sign"], bool):
            raise SchemaError(f"{path}/sign", "sign must be +1 or -1")
        eid = str(ent["id"])
        edges[eid] = Edge(eid, str(ent["src"]), str(ent["tgt"]), w, int(ent["sign"]), str(ent["bar"]),
                          ent.get("color"))
    try:
        return ReciprocalWalk(verts, interior, edges, t, name=str(doc.get("name", "")),
                              params=dict(doc.get("params", {})))
    except WalkError as exc:
        raise SchemaError("/edges", str(exc)) from None
