"""Object sets, squares and bigraded spaces."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, NamedTuple

from . import linalg
from .scalars import Scalar


class GradingError(ValueError):
    pass


class Square(NamedTuple):
    """The square ``(k l; m n)``: upper row ``(k, l)``, lower row ``(m, n)``."""

    k: object
    l: object
    m: object
    n: object

    @property
    def upper(self):
        return (self.k, self.l)

    @property
    def lower(self):
        return (self.m, self.n)

    @property
    def left(self):
        return (self.k, self.m)

    @property
    def right(self):
        return (self.l, self.n)

    def circ(self) -> "Square":
        """Swap the two columns."""
        return Square(self.l, self.k, self.n, self.m)

    def bullet(self) -> "Square":
        """Swap the two rows."""
        return Square(self.m, self.n, self.k, self.l)

    def circ_bullet(self) -> "Square":
        return Square(self.n, self.m, self.l, self.k)

    def key(self) -> str:
        return f"{self.k},{self.l};{self.m},{self.n}"

    @classmethod
    def parse(cls, text: str) -> "Square":
        try:
            top, bottom = text.split(";")
            k, l = top.split(",")
            m, n = bottom.split(",")
        except ValueError:
            raise GradingError(f"square key {text!r} is not of the form 'k,l;m,n'") from None
        return cls(k.strip(), l.strip(), m.strip(), n.strip())

    def __str__(self) -> str:
        return f"({self.k} {self.l}; {self.m} {self.n})"


UNDEFINED = None


def compose_squares(a: Square, b: Square, direction: str = "horizontal") -> Square | None:
    """Horizontal product ``a·b`` or vertical composite ``a∗b``; ``None`` if undefined."""
    if direction == "horizontal":
        if a.right != b.left:
            return UNDEFINED
        return Square(a.k, b.l, a.m, b.n)
    if direction == "vertical":
        if a.lower != b.upper:
            return UNDEFINED
        return Square(a.k, a.l, b.m, b.n)
    raise GradingError(f"unknown direction {direction!r}")


def circ_bullet(sq: Square) -> Square:
    return Square(*sq).circ_bullet()


# --------------------------------------------------------------------------
# bigraded spaces

@dataclass(frozen=True)
class BigradedSpace:
    """Finitely supported family of blocks ``V_kl`` with orthonormal bases."""

    objects: tuple
    dims: Mapping = field(default_factory=dict)

    def __post_init__(self):
        objs = set(self.objects)
        clean = {}
        for (k, l), d in self.dims.items():
            if k not in objs or l not in objs:
                raise GradingError(f"block ({k},{l}) uses an unknown object")
            if d < 0:
                raise GradingError(f"negative dimension on block ({k},{l})")
            if d:
                clean[(k, l)] = int(d)
        object.__setattr__(self, "dims", clean)
        object.__setattr__(self, "objects", tuple(self.objects))

    def dim(self, k, l) -> int:
        return self.dims.get((k, l), 0)

    def blocks(self):
        order = {o: i for i, o in enumerate(self.objects)}
        return sorted(self.dims, key=lambda kl: (order[kl[0]], order[kl[1]]))

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def dual(self) -> "BigradedSpace":
        return BigradedSpace(self.objects, {(l, k): d for (k, l), d in self.dims.items()})

    def to_json(self) -> dict:
        return {"objects": list(self.objects),
                "blocks": [{"row": k, "col": l, "dim": self.dims[(k, l)]} for k, l in self.blocks()]}

    @classmethod
    def from_json(cls, data: Mapping) -> "BigradedSpace":
        try:
            objects = tuple(data["objects"])
            dims = {(b["row"], b["col"]): int(b["dim"]) for b in data["blocks"]}
        except (KeyError, TypeError) as exc:
            raise GradingError(f"malformed bigraded space: {exc}") from None
        return cls(objects, dims)


def balanced_tensor_index(v: BigradedSpace, w: BigradedSpace) -> dict:
    """Basis bookkeeping for ``V ⊗_I W``.

    Maps each block ``(k, m)`` to the list of ``(l, i, j)`` triples, ordered
    by ascending ``l`` (object order) and then row-major in ``(i, j)``.
    """
    if tuple(v.objects) != tuple(w.objects):
        raise GradingError("balanced tensor needs the same object set on both factors")
    index: dict = {}
    for k in v.objects:
        for m in v.objects:
            entries = []
            for l in v.objects:
                dv, dw = v.dim(k, l), w.dim(l, m)
                for i in range(dv):
                    for j in range(dw):
                        entries.append((l, i, j))
            if entries:
                index[(k, m)] = entries
    return index


def balanced_tensor(v: BigradedSpace, w: BigradedSpace) -> BigradedSpace:
    idx = balanced_tensor_index(v, w)
    return BigradedSpace(v.objects, {km: len(e) for km, e in idx.items()})


def trivial_space(objects: Iterable) -> BigradedSpace:
    objs = tuple(objects)
    return BigradedSpace(objs, {(k, k): 1 for k in objs})


# --------------------------------------------------------------------------
# rcf checks

@dataclass(frozen=True)
class BandTemplate:
    """Assignment on ℤ×ℤ supported on ``{(k, k+d) : d in offsets}``.

    ``offsets=None`` means full support.
    """

    offsets: frozenset | None


def check_rcf(assignment) -> bool:
    """Row-and-column finiteness of ``(k, l) ↦ value``.

    Finite mappings are always rcf; lattice templates are rcf exactly when
    their band of offsets is finite.
    """
    if isinstance(assignment, BandTemplate):
        return assignment.offsets is not None
    if isinstance(assignment, Mapping):
        return True
    raise GradingError("check_rcf expects a finite mapping or a BandTemplate")


# --------------------------------------------------------------------------
# block maps

@dataclass
class BlockMap:
    """Grading preserving map ``V → W`` given by matrices ``T_kl``."""

    source: BigradedSpace
    target: BigradedSpace
    blocks: dict

    def __post_init__(self):
        for (k, l), mat in self.blocks.items():
            rows, cols = self.target.dim(k, l), self.source.dim(k, l)
            if len(mat) != rows or any(len(r) != cols for r in mat):
                raise GradingError(f"block ({k},{l}) has the wrong shape")

    def block(self, k, l):
        got = self.blocks.get((k, l))
        if got is None:
            return linalg.zeros(self.target.dim(k, l), self.source.dim(k, l))
        return got

    def is_zero(self) -> bool:
        return all(linalg.is_zero_matrix(m) for m in self.blocks.values())

    def compose(self, other: "BlockMap") -> "BlockMap":
        """``self ∘ other``."""
        keys = set(self.blocks) | set(other.blocks)
        return BlockMap(other.source, self.target,
                        {kl: linalg.matmul(self.block(*kl), other.block(*kl)) for kl in keys})

    @classmethod
    def identity(cls, v: BigradedSpace) -> "BlockMap":
        return cls(v, v, {kl: linalg.identity(d) for kl, d in v.dims.items()})
