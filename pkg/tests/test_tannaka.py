import json
from itertools import product

import pytest

from pqg import linalg
from pqg import partial_hopf as ph
from pqg import tannaka as tk


def hom_count(group: tk.FiniteGroup) -> int:
    """Σ_{g,k,l,m,n} dim Hom(u_k, u_g ⊗ u_l)·[m, n likewise], counted from the group table alone."""
    elems = group.elements
    blocks = 0
    for g in elems:
        support = [(k, l) for k, l in product(elems, elems) if k == group.mul(g, l)]
        blocks += len(support) ** 2
    return blocks


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_vec_group_dimension(n):
    group = tk.cyclic_group(n)
    fd = tk.pointed_group_fiber(group)
    dim = tk.reconstruct(fd).data.dim
    assert dim == n ** 3 == hom_count(group) == tk.brute_force_dimension(fd)


def test_z2_fiber_shape():
    fd = tk.pointed_group_fiber(tk.cyclic_group(2))
    assert len(fd.objects) == 2
    assert len(fd.irreducibles) == 2
    assert all(d in (0, 1) for a in fd.irreducibles for d in fd.irr(a).dims.values())


def test_trivial_group_is_the_scalars():
    assert tk.reconstruct(tk.pointed_group_fiber(tk.cyclic_group(1))).data.dim == 1


@pytest.mark.parametrize("n", [1, 2, 3])
def test_pair_groupoid_fiber(n):
    objs = [str(i) for i in range(n)]
    out = tk.reconstruct(tk.pair_groupoid_fiber(objs))
    assert out.data.dim == n * n
    # every block is A(k k; m m) spanned by one unit
    assert all(sq.k == sq.l and sq.m == sq.n for sq in out.data.blocks)
    assert ph.verify_all(out.data).ok


def test_matrix_units_two_points():
    out = tk.reconstruct(tk.matrix_units_fiber(["1", "2"]))
    assert out.data.dim == 4
    assert ph.verify_all(out.data).ok
    assert ph.hyperobject_partition(out.data) == [["1"], ["2"]]


@pytest.mark.parametrize("fd", [
    tk.pointed_group_fiber(tk.cyclic_group(2)),
    tk.pointed_group_fiber(tk.cyclic_group(3)),
    tk.pair_groupoid_fiber(["a", "b", "c"]),
    tk.matrix_units_fiber(["a", "b"]),
], ids=["z2", "z3", "groupoid", "matrix-units"])
def test_validate_and_roundtrip(fd):
    assert tk.validate_fiber_data(fd).ok
    out = tk.reconstruct(fd)
    rt = tk.roundtrip_check(out)
    assert rt.ok, rt.failed_axioms()


def test_fusion_table_of_z3():
    out = tk.reconstruct(tk.pointed_group_fiber(tk.cyclic_group(3)))
    table = tk.roundtrip_check(out).data["fusion-table"]
    assert table["u1⊗u1"] == {"u2": 1}
    assert table["u1⊗u2"] == {"u0": 1}


def test_flipped_isometry_breaks_coherence():
    fd = tk.pointed_group_fiber(tk.cyclic_group(3))
    blocks = fd.fusion[("u1", "u1")]["u2"]
    km = next(iter(blocks))
    blocks[km] = linalg.scale(blocks[km], -1)
    rep = tk.validate_fiber_data(fd)
    assert rep.failed_axioms() == ["coherence"]
    assert rep.result("coherence").witnesses[0]["triple"] == ["u1", "u1", "u1"]


def test_invalid_fiber_is_not_reconstructed():
    fd = tk.pointed_group_fiber(tk.cyclic_group(2))
    coev = fd.coev["u1"]
    km = next(iter(coev))
    coev[km] = linalg.scale(coev[km], 3)
    with pytest.raises(tk.FiberError):
        tk.reconstruct(fd)


def test_fiber_json_round_trip():
    fd = tk.pointed_group_fiber(tk.cyclic_group(3))
    doc = tk.fiber_to_json(fd)
    again = tk.fiber_to_json(tk.fiber_from_json(json.loads(json.dumps(doc))))
    assert again == doc


def test_provenance_names_every_basis_element():
    out = tk.reconstruct(tk.pointed_group_fiber(tk.cyclic_group(2)))
    assert set(out.provenance) == set(out.data.labels)
    some = out.data.labels[3]
    info = out.provenance[some]
    assert out.coefficient(info["irreducible"], *info["row"], *info["col"]) == 3
