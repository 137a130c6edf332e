from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pqg import walks as wk
from pqg.grading import (
    BandTemplate, BigradedSpace, BlockMap, GradingError, Square, balanced_tensor, check_rcf,
    circ_bullet, compose_squares, trivial_space,
)
from pqg.linalg import identity

labels = st.sampled_from("abcdef")
squares = st.builds(Square, labels, labels, labels, labels)


def test_horizontal_composition():
    assert compose_squares(Square(*"abcd"), Square(*"bedf")) == Square(*"aecf")
    assert compose_squares(Square(*"abcd"), Square(*"xedf")) is None


def test_vertical_composition():
    assert compose_squares(Square(*"abcd"), Square(*"cdef"), "vertical") == Square(*"abef")
    with pytest.raises(GradingError):
        compose_squares(Square(*"abcd"), Square(*"abcd"), "diagonal")


def test_circ_bullet_formula():
    assert circ_bullet(Square(*"klmn")) == Square(*"nmlk")
    assert circ_bullet(Square(*"kkkk")) == Square(*"kkkk")


@given(squares)
def test_square_symmetries_are_involutions(sq):
    assert sq.circ().circ() == sq
    assert sq.bullet().bullet() == sq
    assert sq.circ().bullet() == sq.circ_bullet() == sq.bullet().circ()
    assert Square.parse(sq.key()) == sq


@given(squares, squares, squares)
def test_horizontal_composition_is_associative(a, b, c):
    ab = compose_squares(a, b)
    bc = compose_squares(b, c)
    left = compose_squares(ab, c) if ab else None
    right = compose_squares(a, bc) if bc else None
    if ab and bc:
        assert left == right


def test_balanced_tensor_multiplies_dimensions():
    objs = ("a", "b", "c")
    v = BigradedSpace(objs, {("a", "b"): 2})
    w = BigradedSpace(objs, {("b", "c"): 3})
    assert balanced_tensor(v, w).dims == {("a", "c"): 6}


def test_trivial_space_is_a_unit():
    objs = ("a", "b")
    v = BigradedSpace(objs, {("a", "b"): 2, ("b", "b"): 1})
    assert balanced_tensor(v, trivial_space(objs)).dims == v.dims
    assert balanced_tensor(trivial_space(objs), v).dims == v.dims


def test_podles_carrier_counts_paths():
    # block (0,0) of H ⊗ H counts the two length-two loops 0→±1→0
    walk = wk.podles_walk(Fraction(1, 2), 0, (-2, 2))
    h = walk.hilbert_space()
    assert balanced_tensor(h, h).dim("0", "0") == 2


def test_rcf():
    assert check_rcf({("0", "0"): 1})
    assert check_rcf(BandTemplate(frozenset({0})))
    assert not check_rcf(BandTemplate(None))
    assert check_rcf(BandTemplate(frozenset({-1, 1})))  # Podleś edge grading
    with pytest.raises(GradingError):
        check_rcf([1, 2])


def test_space_validation_and_json():
    with pytest.raises(GradingError):
        BigradedSpace(("a",), {("a", "z"): 1})
    with pytest.raises(GradingError):
        BigradedSpace(("a",), {("a", "a"): -1})
    v = BigradedSpace(("a", "b"), {("a", "b"): 2, ("b", "a"): 0})
    assert v.dims == {("a", "b"): 2}
    assert BigradedSpace.from_json(v.to_json()) == v
    assert v.dual().dims == {("b", "a"): 2}


def test_block_map_shapes_and_identity():
    v = BigradedSpace(("a",), {("a", "a"): 2})
    ident = BlockMap.identity(v)
    assert ident.compose(ident).blocks == {("a", "a"): identity(2)}
    with pytest.raises(GradingError):
        BlockMap(v, v, {("a", "a"): [[1]]})
