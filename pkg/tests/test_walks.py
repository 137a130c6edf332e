import dataclasses
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pqg import walks as wk
from pqg.partial_hopf import SchemaError
from pqg.report import PASS
from pqg.scalars import Scalar, sqrt

HALF = Fraction(1, 2)


def podles_weight(q, x, k, step):
    """Closed-form Podleś weight w(k, k+step), evaluated directly in rationals."""
    a = abs(Fraction(q))
    def two(e):
        return a ** e + a ** (-e)
    return Fraction(two(x + k + step), two(x + k))


def test_podles_weights_match_closed_form():
    walk = wk.podles_walk(HALF, 0, (-8, 8))
    assert walk.edge("0->1").weight == Fraction(5, 4)
    for k in range(-8, 8):
        assert walk.edge(f"{k}->{k + 1}").weight == podles_weight(HALF, 0, k, 1)
        assert walk.edge(f"{k + 1}->{k}").weight == podles_weight(HALF, 0, k + 1, -1)


def test_podles_local_identities_at_zero():
    walk = wk.podles_walk(HALF, 0, (-3, 3))
    w01, w10 = walk.edge("0->1").weight, walk.edge("1->0").weight
    assert w01 * w10 == 1
    p = (walk.edge("0->1").weight + walk.edge("0->-1").weight) / walk.abs_t
    assert p == 1
    assert walk.t == Scalar(Fraction(-5, 2))


def test_signs_follow_q():
    pos = wk.podles_walk(HALF, 0, (-2, 2))
    neg = wk.podles_walk(-HALF, 0, (-2, 2))
    assert pos.edge("0->1").sign == 1 and pos.edge("0->-1").sign == -1
    assert neg.edge("0->-1").sign == 1
    assert wk.validate_walk(neg).ok


def test_one_vertex_walk_q1():
    walk = wk.one_vertex_walk(1)
    rep = wk.validate_walk(walk)
    assert rep.ok
    assert [walk.edge(e).weight for e in ("e", "ebar")] == [1, 1]
    assert [walk.edge(e).sign for e in ("e", "ebar")] == [1, -1]
    assert walk.t == -2


def test_interior_and_depth():
    walk = wk.podles_walk(HALF, 0, (-4, 4))
    assert walk.interior == tuple(str(k) for k in range(-3, 4))
    assert walk.depth("-4") == 0 and walk.depth("-3") == 1 and walk.depth("0") == 4
    rep = wk.validate_walk(walk)
    assert rep.result("random-walk").counts == {PASS: 7, "skipped-boundary": 2}


def test_perturbed_weight_is_localized():
    walk = wk.podles_walk(HALF, 0, (-4, 4))
    e = walk.edge("0->1")
    walk.edges["0->1"] = dataclasses.replace(e, weight=e.weight * 2)
    rep = wk.validate_walk(walk)
    assert "weight-reciprocality" in rep.failed_axioms()
    edges = {w.get("edge") for w in rep.result("weight-reciprocality").witnesses}
    assert edges & {"0->1", "1->0"}


def test_bad_parameters():
    with pytest.raises(wk.WalkError):
        wk.podles_walk(2, 0, (-2, 2))
    with pytest.raises(wk.WalkError):
        wk.podles_walk(0, 0, (-2, 2))
    with pytest.raises(wk.WalkError):
        wk.podles_walk(HALF, Fraction(1, 3), (-2, 2))
    with pytest.raises(wk.WalkError):
        wk.podles_walk(HALF, 0, (2, -2))


def test_r_map_one_vertex():
    walk = wk.one_vertex_walk(1)
    col = wk.build_r_map(walk).block("0", "0")
    # basis order e⊗e, e⊗ē, ē⊗e, ē⊗ē
    assert [row[0] for row in col] == [0, 1, -1, 0]
    rep = wk.verify_conjugate_equations(walk, wk.build_r_map(walk))
    assert rep.ok
    assert rep.data["|q|+|q|^-1"] == 2 and rep.data["snake-scalar"] == -1


def test_r_map_podles_vertex_zero():
    walk = wk.podles_walk(HALF, 0, (-2, 2))
    col = wk.build_r_map(walk).block("0", "0")
    # δ_{0→-1}⊗δ_{-1→0} carries sgn = -1, δ_{0→1}⊗δ_{1→0} carries sgn = +1
    assert [row[0] for row in col] == [-sqrt(Fraction(5, 4)), sqrt(Fraction(5, 4))]


def test_sign_flip_breaks_snake():
    walk = wk.podles_walk(HALF, 0, (-4, 4))
    e = walk.edge("0->1")
    walk.edges["0->1"] = dataclasses.replace(e, sign=-e.sign)
    rep = wk.verify_conjugate_equations(walk, wk.build_r_map(walk))
    assert rep.failed_axioms() == ["snake"]
    assert {w["edge"] for w in rep.result("snake").witnesses} <= {"0->1", "1->0", "1->2", "-1->0", "0->-1", "2->1"}


def test_colorings():
    walk = wk.podles_walk(HALF, 0, (-4, 4))
    cw = wk.color_walk(walk)
    assert cw.report.ok
    assert cw.act("+", "0") == "1" and cw.act("-", "0") == "-1"
    assert cw.bar_color["+"] == "-"
    assert cw.gamma("+", "0") == sqrt(Fraction(5, 4))
    one = wk.color_walk(wk.one_vertex_walk(1))
    assert one.report.ok and set(one.colors) == {"a", "abar"}


def test_merged_colors_are_rejected():
    walk = wk.podles_walk(HALF, 0, (-4, 4))
    with pytest.raises(wk.ColoringError, match="vertex"):
        wk.color_walk(walk, {eid: "+" for eid in walk.edges})
    with pytest.raises(wk.ColoringError):
        wk.color_walk(walk, {"0->1": "+"})


def test_translation_invariance():
    assert wk.shift_isomorphism_report(HALF, 0, (-4, 4)).ok
    assert wk.shift_isomorphism_report(Fraction(1, 3), HALF, (-3, 3)).ok


def test_json_round_trip_is_byte_stable():
    walk = wk.podles_walk(HALF, 0, (-3, 3))
    text = json.dumps(wk.walk_to_json(walk), sort_keys=True)
    again = wk.walk_from_json(json.loads(text))
    assert json.dumps(wk.walk_to_json(again), sort_keys=True) == text


def test_json_rejects_floats_and_missing_fields():
    doc = wk.walk_to_json(wk.one_vertex_walk(1))
    doc["edges"][0]["weight"] = "1.0"
    with pytest.raises(Exception):
        wk.walk_from_json(doc)
    doc = wk.walk_to_json(wk.one_vertex_walk(1))
    del doc["edges"][0]["bar"]
    with pytest.raises(SchemaError, match="/edges/0"):
        wk.walk_from_json(doc)


q_values = st.builds(Fraction, st.integers(1, 6), st.integers(2, 9)).filter(lambda f: f < 1)
x_values = st.integers(-6, 6).map(lambda n: Fraction(n, 2))


@settings(max_examples=25, deadline=None)
@given(q_values, st.booleans(), x_values, st.integers(2, 5))
def test_generated_windows_are_reciprocal(q, negative, x, half):
    q = -q if negative else q
    walk = wk.podles_walk(q, x, (-half, half))
    rep = wk.validate_walk(walk)
    assert rep.ok, rep.failed_axioms()
    conj = wk.verify_conjugate_equations(walk, wk.build_r_map(walk))
    assert conj.ok
    a = abs(q)
    assert conj.data["|q|+|q|^-1"] == Scalar(a + 1 / a)
    assert conj.data["snake-scalar"] == (-1 if q > 0 else 1)
