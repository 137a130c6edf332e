from fractions import Fraction

import pytest

from pqg import corep as cr
from pqg import linalg
from pqg import partial_hopf as ph
from pqg import presentations as pr
from pqg import tannaka as tk
from pqg import walks as wk
from pqg.grading import BlockMap
from pqg.scalars import Scalar, sqrt

HALF = Fraction(1, 2)


@pytest.fixture(scope="module")
def z3():
    return tk.reconstruct(tk.pointed_group_fiber(tk.cyclic_group(3)))


@pytest.fixture(scope="module")
def z2():
    return tk.reconstruct(tk.pointed_group_fiber(tk.cyclic_group(2)))


@pytest.fixture(scope="module")
def su2_half():
    """Degree-four truncation of the one-vertex walk at q = 1/2 with its first three irreducibles."""
    p = pr.build_presentation(wk.one_vertex_walk(HALF))
    data = pr.truncated_hopf_data(p, 4)
    u = pr.generating_corep(data, p)
    spin1 = [s.irrep for s in cr.decompose(cr.tensor(u, u)).summands if s.irrep.dim == 3][0]
    return data, u, spin1


def canon(out):
    return tk.canonical_coreps(out)


def test_trivial_corep(z3):
    U = cr.trivial_corep(z3.data)
    assert cr.verify_corep(U).ok
    assert cr.is_unitary(U)
    assert cr.equivalent(cr.left_dual(U), U)


def test_zeroed_block_fails_counit(z3):
    X = canon(z3)["u1"]
    sq = X.squares()[0]
    blocks = {k: v for k, v in X.blocks.items() if k != sq}
    broken = cr.Corep(X.host, X.space, blocks, "broken")
    assert "counit" in cr.verify_corep(broken).failed_axioms()


def test_regular_corep_of_a_unit_is_trivial_block():
    data = ph.pair_groupoid(["a", "b"])
    X = cr.regular_corep_from_element(data, data.unit("a", "b"))
    # one dimension per fibre block, equivalent to the trivial corepresentation
    assert set(X.space.dims.values()) == {1}
    assert cr.verify_corep(X).ok
    assert cr.equivalent(X, cr.trivial_corep(data))


def test_regular_coreps_in_z2_are_irreducible(z2):
    for t in range(z2.data.dim):
        X = cr.regular_corep_from_element(z2.data, {t: Scalar(1)})
        assert set(X.space.dims.values()) == {1} and cr.is_irreducible(X)


def test_zero_element_is_rejected(z2):
    with pytest.raises(cr.CorepError):
        cr.regular_corep_from_element(z2.data, {})


def test_tensor_unit_law(z3):
    U = cr.trivial_corep(z3.data)
    X = canon(z3)["u2"]
    assert cr.equivalent(cr.tensor(U, X), X)
    assert cr.equivalent(cr.tensor(X, U), X)


def test_tensor_follows_fusion(z3):
    c = canon(z3)
    dec = cr.decompose(cr.tensor(c["u1"], c["u1"]))
    assert len(dec.summands) == 1
    assert cr.equivalent(dec.summands[0].irrep, c["u2"])


def test_z2_tensor_square_is_trivial(z2):
    c = canon(z2)
    dec = cr.decompose(cr.tensor(c["u1"], c["u1"]))
    assert [s.irrep.dim for s in dec.summands] == [2]
    assert cr.equivalent(dec.summands[0].irrep, c["u0"])


def test_trivial_corep_splits_by_hyperobject():
    data = tk.reconstruct(tk.matrix_units_fiber(["a", "b"])).data
    dec = cr.decompose(cr.trivial_corep(data))
    assert sorted(s.irrep.dim for s in dec.summands) == [1, 1]


def test_duals_and_snakes(z3):
    for X in canon(z3).values():
        assert cr.dual_report(X).ok
        assert cr.generalized_inverse_report(X).ok
        assert cr.is_unitary(X)
    assert cr.equivalent(cr.left_dual(canon(z3)["u1"]), canon(z3)["u2"])


def test_unitary_tensor_stays_unitary(su2_half):
    _, u, spin1 = su2_half
    assert cr.is_unitary(u) and cr.is_unitary(spin1)


def test_average_of_zero_is_zero(z3):
    X = canon(z3)["u1"]
    T = [[Scalar(0)]]
    m, n = X.space.blocks()[0]
    assert cr.average_intertwiner(T, X, X, m, n).is_zero()


def test_average_between_inequivalent_irreducibles_vanishes(z3):
    c = canon(z3)
    X, Y = c["u1"], c["u2"]
    shared = [kl for kl in X.space.blocks() if Y.space.dim(*kl)]
    for (m, n) in shared:
        assert cr.average_intertwiner([[Scalar(1)]], X, Y, m, n).is_zero()


def test_average_of_a_morphism_is_proportional(su2_half):
    _, u, _ = su2_half
    (m, n), = u.space.blocks()
    ident = linalg.identity(2)
    avg = cr.average_intertwiner(ident, u, u, m, n)
    block = avg.block(m, n)
    assert block[0][1] == 0 and block[1][0] == 0 and block[0][0] == block[1][1] != 0


def test_schur_on_pair_groupoid():
    data = ph.pair_groupoid(["a", "b", "c"])
    irr = cr.find_irreducibles(data)
    assert len(irr) == 1 and irr[0].dim == 3
    rep = cr.schur_report(irr[0], irr[0])
    assert rep.ok
    assert set(rep.data["d_G"].values()) == {Scalar(1)}


def test_schur_cross_terms_vanish(z2):
    c = canon(z2)
    rep = cr.schur_report(c["u0"], c["u1"])
    assert rep.ok and rep.result("inequivalent-phi(b*a)").checked > 0


def normalized_trace(F):
    """Trace of ``λF`` with ``λ`` fixed by ``Tr(λF) = Tr((λF)^{-1})``."""
    tr = sum((F[i][i] for i in range(len(F))), Scalar(0))
    inv = linalg.inverse(F)
    tr_inv = sum((inv[i][i] for i in range(len(F))), Scalar(0))
    lam = sqrt(tr_inv / tr)
    return lam * tr


def q_integer(n, q):
    return sum((Scalar(q) ** (n - 1 - 2 * k) for k in range(n)), Scalar(0))


def test_modular_data_gives_quantum_dimensions(su2_half):
    _, u, spin1 = su2_half
    for X, n in ((u, 2), (spin1, 3)):
        F = cr.modular_data(X)["F"].block("0", "0")
        assert normalized_trace(F) == q_integer(n, HALF)


def test_schur_with_nontrivial_modular_data(su2_half):
    _, u, spin1 = su2_half
    rep = cr.schur_report(u, u)
    assert rep.ok
    assert rep.data["d_G"] == {"0": Scalar(5)}
    assert rep.data["d_F"] == {"0": Scalar(Fraction(5, 4))}
    assert cr.schur_report(spin1, spin1).ok
    assert cr.schur_report(u, spin1).ok


def test_non_irreducible_input_is_rejected(z2):
    c = canon(z2)
    reducible, _ = cr.direct_sum([c["u0"], c["u1"]])
    assert not cr.is_irreducible(reducible)
    with pytest.raises(cr.CorepError):
        cr.schur_report(reducible, reducible)


def test_peter_weyl_needs_every_irreducible(z3):
    irr = list(canon(z3).values())
    assert cr.peter_weyl_report(z3.data, irr).ok
    assert not cr.peter_weyl_report(z3.data, irr[:2]).ok


@pytest.mark.parametrize("name", ["z2", "z3"])
def test_characters(name, request):
    out = request.getfixturevalue(name)
    table = cr.woronowicz_characters(out.data, list(canon(out).values()), [-2, -1, 0, 1, 2])
    assert table.report.ok, table.report.failed_axioms()
    eps = {t: out.data.eps({t: Scalar(1)}) for t in range(out.data.dim)}
    assert table.f(0) == {t: v for t, v in eps.items() if v}
    for k in out.data.objects:
        for m in out.data.objects:
            assert table.evaluate(1, out.data.unit(k, m)) == (1 if k == m else 0)


def test_f2_against_modular_automorphism(z3):
    """f₂ = ε∘σ with σ(a) = f₁ ∗ a ∗ f₁, recomputed from the coproduct."""
    data = z3.data
    table = cr.woronowicz_characters(data, list(canon(z3).values()), [1, 2])
    for t in range(data.dim):
        sigma = {}
        for (x, y), c in data.delta({t: Scalar(1)}).items():
            for (y1, y2), c2 in data.delta({y: Scalar(1)}).items():
                val = c * c2 * table.evaluate(1, {x: Scalar(1)}) * table.evaluate(1, {y2: Scalar(1)})
                if val:
                    sigma[y1] = sigma.get(y1, 0) + val
        assert table.evaluate(2, {t: Scalar(1)}) == data.eps(sigma)


def test_character_table_serializes(z2):
    table = cr.woronowicz_characters(z2.data, list(canon(z2).values()), [0, 1])
    doc = table.to_json()
    assert [x["name"] for x in doc["irreducibles"]] == ["u0", "u1"]
    # f_0 is the counit: 1 on the diagonal coefficients, which are the only nonzero values
    assert set(doc["functionals"]["0"].values()) == {"1"}
    assert len(doc["functionals"]["0"]) == 4


def test_block_map_type_of_average(z3):
    X = canon(z3)["u1"]
    m, n = X.space.blocks()[0]
    assert isinstance(cr.average_intertwiner([[Scalar(1)]], X, X, m, n), BlockMap)
