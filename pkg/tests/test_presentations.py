import json
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pqg import corep as cr
from pqg import partial_hopf as ph
from pqg import presentations as pr
from pqg import walks as wk
from pqg.report import PASS
from pqg.scalars import Scalar

HALF = Fraction(1, 2)
DIAG = ("0", "0", "0", "0")


@pytest.fixture(scope="module")
def su2():
    return pr.build_presentation(wk.one_vertex_walk(1))


@pytest.fixture(scope="module")
def podles():
    return pr.build_presentation(wk.podles_walk(HALF, 0, (-3, 3)))


def random_su2(rng):
    v = rng.normal(size=4)
    a, b = complex(v[0], v[1]), complex(v[2], v[3])
    n = np.sqrt(abs(a) ** 2 + abs(b) ** 2)
    a, b = a / n, b / n
    return np.array([[a, b], [-b.conjugate(), a.conjugate()]])


def classical_filtration_dim(d):
    """Rank of all words of length ≤ d in the matrix entries, sampled on SU(2)."""
    rng = np.random.default_rng(7)
    idx = {"e": 0, "ebar": 1}
    letters = list(product(idx, idx))
    words = [w for n in range(d + 1) for w in product(letters, repeat=n)]
    rows = []
    for _ in range(4 * len(words)):
        u = random_su2(rng)
        rows.append([np.prod([u[idx[e], idx[f]] for e, f in w]) for w in words])
    return np.linalg.matrix_rank(np.array(rows), tol=1e-8)


def test_generator_counts(su2):
    assert len(su2.generators) == 4
    podles = pr.build_presentation(wk.podles_walk(HALF, 0, (-2, 2)))
    assert len(podles.generators) == len(podles.walk.edges) ** 2 == 64


def test_conjugation_relations_at_q1(su2):
    rel = su2.relation("EqInt[e,ebar]")
    assert rel.poly == pr.NCPoly({(pr.Ustar("e", "ebar"),): Scalar(1), (pr.U("ebar", "e"),): Scalar(1)})


@pytest.mark.parametrize("d", [0, 1, 2])
def test_graded_dims_match_classical_su2(su2, d):
    basis = pr.graded_basis(su2, DIAG, d)
    assert basis.dims_by_degree == [1, 4, 9][: d + 1]
    assert basis.dimension == classical_filtration_dim(d)


def test_each_relation_is_in_the_ideal(su2, podles):
    for p in (su2, podles):
        for rel in p.relations:
            if not rel.assertable:
                continue
            w = pr.ideal_member(p, rel.poly, rel.poly.degree)
            assert w is not None and w.replay(p), rel.name


def test_non_member_has_remainder(su2):
    rem, wit = pr.reduce_mod_ideal(su2, {(pr.U("e", "e"),): Scalar(1)}, 2)
    assert wit is None and rem


def test_coproduct_of_unitarity_lies_in_tensor_ideal(su2):
    rel = next(r for r in su2.relations if r.kind == "EqUni1")
    rem, wit = pr.reduce_tensor(su2, su2.coproduct(rel.poly), 4)
    assert rem == {}
    assert wit.replay(su2)


@pytest.mark.parametrize("d", [2, 4])
def test_hopf_maps_are_well_posed_on_su2(su2, d):
    rep = pr.check_hopf_wellposed(su2, d)
    assert rep.ok, rep.failed_axioms()
    done, total = rep.data["witnesses-replayed"].split("/")
    assert done == total and int(total) > 0


def test_hopf_maps_on_a_podles_window(podles):
    rep = pr.check_hopf_wellposed(podles, 2)
    assert rep.ok, rep.failed_axioms()
    # blocks touching the edge of the window are reported, never counted as failures
    assert "failed" not in rep.data["status-counts"]


def test_colored_matrix(podles, su2):
    cm = pr.colored_matrix(podles)
    assert cm.report.ok, cm.report.failed_axioms()
    assert sorted(cm.entries) == [("+", "+"), ("+", "-"), ("-", "+"), ("-", "-")]
    assert pr.colored_matrix(su2).report.ok


@pytest.mark.parametrize("q,x", [(HALF, 0), (HALF, HALF), (Fraction(-1, 3), HALF)])
def test_dynamical_relations(q, x):
    rep = pr.dynamical_su2_report(q, x, (-4, 4))
    assert rep.ok, rep.failed_axioms()
    assert rep.status("unit-coproduct") == PASS


def test_dynamical_window_too_small():
    with pytest.raises(pr.PresentationError, match="depth"):
        pr.dynamical_su2_report(HALF, 0, (-1, 1))


def test_wrong_deformation_parameter_fails():
    rep = pr.dynamical_su2_report(HALF, 0, (-4, 4), relation_q=Fraction(1, 4))
    assert not rep.ok


@pytest.mark.parametrize("q", [1, HALF])
def test_truncated_data(su2, q):
    p = su2 if q == 1 else pr.build_presentation(wk.one_vertex_walk(q))
    data = pr.truncated_hopf_data(p, 2)
    assert data.dim == 14
    assert ph.verify_all(data).ok
    u = pr.generating_corep(data, p)
    assert cr.verify_corep(u).ok
    assert [s.irrep.dim for s in cr.decompose(cr.tensor(u, u)).summands] == [1, 3]


def test_truncated_data_needs_one_vertex(podles):
    with pytest.raises(pr.PresentationError):
        pr.truncated_hopf_data(podles, 2)


def test_polynomial_json_round_trip(su2):
    for rel in su2.relations:
        assert pr.NCPoly.from_json(json.loads(json.dumps(rel.poly.to_json()))) == rel.poly


def test_presentation_json_round_trip(podles):
    text = json.dumps(podles.to_json(), sort_keys=True)
    again = pr.presentation_from_json(json.loads(text))
    assert json.dumps(again.to_json(), sort_keys=True) == text


def test_tampered_relation_is_rejected(su2):
    doc = su2.to_json()
    doc["relations"][0]["terms"][0]["coef"] = "2"
    with pytest.raises(ph.SchemaError, match="/relations/0"):
        pr.presentation_from_json(doc)


sandwich_terms = st.lists(
    st.tuples(st.integers(0, 11), st.integers(0, 4), st.integers(0, 4), st.integers(-3, 3)),
    min_size=1, max_size=4)


@settings(max_examples=25, deadline=None)
@given(sandwich_terms)
def test_sandwiched_relations_are_members(terms):
    p = pr.build_presentation(wk.one_vertex_walk(1))
    letters = [()] + [(pr.U(*g),) for g in p.generators]
    x = pr.NCPoly()
    for r, left, right, c in terms:
        rel = p.relations[r]
        x = x + p.sandwich(letters[left], rel.poly, letters[right]).scaled(Scalar(c))
    x = x.clean()
    w = pr.ideal_member(p, x, 4)
    assert w is not None
    assert w.replay(p)
