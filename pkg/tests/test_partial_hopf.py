import pytest

from pqg import partial_hopf as ph
from pqg import tannaka as tk
from pqg.grading import Square
from pqg.partial_hopf import InconsistencyError, SchemaError, TruncationError
from pqg.report import PASS
from pqg.scalars import Scalar


@pytest.fixture
def groupoid():
    return ph.pair_groupoid(["a", "b", "c"])


@pytest.fixture
def vecz2():
    return tk.reconstruct(tk.pointed_group_fiber(tk.cyclic_group(2))).data


def test_pair_groupoid_shape(groupoid):
    assert groupoid.dim == 9
    assert len(groupoid.blocks) == 9
    assert groupoid.block(Square("a", "a", "b", "b")) == [groupoid.index["1(a|b)"]]


def test_units_are_orthogonal_idempotents(groupoid):
    u = groupoid.unit
    assert groupoid.mul(u("a", "b"), u("a", "b")) == u("a", "b")
    assert groupoid.mul(u("a", "b"), u("b", "c")) == {}
    assert groupoid.mul(u("a", "b"), u("a", "c")) == {}


def test_unit_comultiplication(groupoid):
    d = groupoid.delta(groupoid.unit("a", "c"))
    want = {(groupoid.index[f"1(a|{l})"], groupoid.index[f"1({l}|c)"]) for l in "abc"}
    assert set(d) == want


@pytest.mark.parametrize("make", ["groupoid", "vecz2"])
def test_verifiers_pass(make, request):
    data = request.getfixturevalue(make)
    for verifier in (ph.verify_partial_algebra, ph.verify_partial_bialgebra, ph.verify_antipode,
                     ph.verify_canonical_maps, ph.verify_integral, ph.verify_star):
        rep = verifier(data)
        assert rep.ok, (verifier.__name__, rep.failed_axioms())


def test_antipode_squares_to_identity_for_z3():
    data = tk.reconstruct(tk.pointed_group_fiber(tk.cyclic_group(3))).data
    for t in range(data.dim):
        assert data.S(data.S({t: Scalar(1)})) == {t: Scalar(1)}


def test_perturbed_constant_is_named(groupoid):
    groupoid.product[(1, 1)] = {1: Scalar(2)}
    rep = ph.verify_partial_algebra(groupoid)
    # squaring an idempotent to twice itself stays associative but breaks the unit law
    assert rep.failed_axioms() == ["unit"]
    assert {w["element"] for w in rep.result("unit").witnesses} == {"1(a|b)"}


def test_vanishing_counit_breaks_non_degeneracy(groupoid):
    del groupoid.counit[groupoid.index["1(b|b)"]]
    rep = ph.verify_partial_bialgebra(groupoid)
    assert "non-degeneracy" in rep.failed_axioms()


def test_missing_antipode_block_is_the_witness(groupoid):
    t = groupoid.index["1(a|b)"]
    groupoid.antipode[t] = {}
    rep = ph.verify_antipode(groupoid)
    assert not rep.ok
    assert any("1(a|b)" in str(w) for a in rep.failed_axioms()
               for w in rep.result(a).witnesses)


def test_projections_of_units(groupoid):
    pil, pir, e = ph.compute_projections(groupoid, groupoid.unit("b", "b"))
    assert pil == {"b": 1} and pir == {"b": 1}
    # off the diagonal the counit vanishes, so both projections vanish
    pil, pir, _ = ph.compute_projections(groupoid, groupoid.unit("a", "b"))
    assert pil == {} and pir == {}
    assert [x[0] for x in e] == ["a", "b", "c"]


def test_canonical_product_e_matches_direct_sum(groupoid):
    e = ph.E_element(groupoid)
    want = {}
    for l in "abc":
        for k in "abc":
            for m in "abc":
                want[(groupoid.index[f"1({k}|{l})"], groupoid.index[f"1({l}|{m})"])] = 1
    assert e == want


def test_integral_scaled_on_one_block_fails_normalization(groupoid):
    groupoid.integral[groupoid.index["1(a|a)"]] = Scalar(2)
    assert "normalization" in ph.verify_integral(groupoid).failed_axioms()


def test_gram_matrices_exact(vecz2):
    rep = ph.verify_integral(vecz2)
    assert rep.status("positivity") == PASS


def test_star_without_coproduct_compatibility(vecz2):
    t = next(t for t, v in vecz2.star_map.items() if v)
    vecz2.star_map[t] = {k: -v for k, v in vecz2.star_map[t].items()}
    assert "coproduct-compatibility" in ph.verify_star(vecz2).failed_axioms()


def test_hyperobjects(groupoid, vecz2):
    assert ph.hyperobject_partition(groupoid) == [["a", "b", "c"]]
    assert ph.hyperobject_partition(vecz2) == [list(vecz2.objects)]
    two = tk.reconstruct(tk.matrix_units_fiber(["x", "y"])).data
    assert ph.hyperobject_partition(two) == [["x"], ["y"]]


def test_asymmetric_units_are_inconsistent(groupoid):
    groupoid.units[("b", "a")] = {}
    with pytest.raises(InconsistencyError, match="1\\(a\\|b\\)"):
        ph.hyperobject_partition(groupoid)


def test_linking_and_colinking():
    groupoid = ph.pair_groupoid(["1", "2"])
    assert ph.verify_linking_structures(groupoid, [["1"], ["2"]], "linking").ok
    # units cross the partition, so the groupoid is linking but not co-linking
    assert not ph.verify_linking_structures(groupoid, [["1"], ["2"]], "colinking").ok
    m2 = tk.reconstruct(tk.matrix_units_fiber(["1", "2"])).data
    assert ph.verify_linking_structures(m2, [["1"], ["2"]], "colinking").ok


def test_product_with_matrix_units_is_colinking():
    z2 = tk.reconstruct(tk.pointed_group_fiber(tk.cyclic_group(2))).data
    m2 = tk.reconstruct(tk.matrix_units_fiber(["1", "2"])).data
    prod = ph.product_hopf(z2, m2)
    assert prod.dim == z2.dim * m2.dim
    assert ph.verify_all(prod).ok
    parts = [[o for o in prod.objects if o.endswith(s)] for s in (".1", ".2")]
    assert ph.verify_linking_structures(prod, parts, "colinking").ok


def test_bad_partition():
    with pytest.raises(ValueError):
        ph.verify_linking_structures(ph.pair_groupoid(["1", "2"]), [["1"]], "linking")


def test_truncated_products_raise():
    data = ph.pair_groupoid(["a"])
    data.truncated.add((0, 0))
    with pytest.raises(TruncationError):
        data.mul_basis(0, 0)


def test_json_round_trip(vecz2):
    doc = ph.to_json(vecz2)
    again = ph.from_json(doc)
    assert ph.dumps(again) == ph.dumps(vecz2)


def test_schema_errors_carry_paths(vecz2):
    doc = ph.to_json(vecz2)
    doc["blocks"]["nonsense"] = ["x"]
    with pytest.raises(SchemaError, match="/blocks"):
        ph.from_json(doc)
