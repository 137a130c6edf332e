"""Single-point perturbations, one per verifier.

Each entry builds a valid input, perturbs exactly one structure constant,
sign or weight, and runs the verifier.  The result is either a report that
must fail with a witness, or an exception whose message names the
offending location.
"""

from __future__ import annotations

import dataclasses
from fractions import Fraction

from pqg import corep as cr
from pqg import partial_hopf as ph
from pqg import presentations as pr
from pqg import tannaka as tk
from pqg import walks as wk
from pqg import linalg
from pqg.scalars import Scalar

HALF = Fraction(1, 2)


def _z3():
    return tk.reconstruct(tk.pointed_group_fiber(tk.cyclic_group(3)))


def _doubled(vec: dict) -> dict:
    return {k: v * 2 for k, v in vec.items()}


def _first(d: dict):
    return next(iter(d))


def _irreps(out):
    return list(tk.canonical_coreps(out).values())


def _perturbed_corep(X: cr.Corep) -> cr.Corep:
    sq = X.squares()[0]
    blocks = dict(X.blocks)
    blk = dict(blocks[sq])
    ij = _first(blk)
    blk[ij] = _doubled(blk[ij])
    blocks[sq] = blk
    return cr.Corep(X.host, X.space, blocks, X.name + "'")


def algebra():
    data = _z3().data
    key = _first(data.product)
    data.product[key] = _doubled(data.product[key])
    return ph.verify_partial_algebra(data)


def bialgebra():
    data = _z3().data
    t = _first(data.coproduct)
    c = dict(data.coproduct[t])
    c[_first(c)] = c[_first(c)] * 2
    data.coproduct[t] = c
    return ph.verify_partial_bialgebra(data)


def antipode():
    data = _z3().data
    data.antipode[5] = _doubled(data.antipode[5])
    return ph.verify_antipode(data)


def canonical_maps():
    data = _z3().data
    data.antipode[5] = _doubled(data.antipode[5])
    return ph.verify_canonical_maps(data)


def integral():
    data = _z3().data
    data.integral[_first(data.integral)] = Scalar(2)
    return ph.verify_integral(data)


def star():
    data = _z3().data
    data.star_map[5] = _doubled(data.star_map[5])
    return ph.verify_star(data)


def linking():
    data = ph.pair_groupoid(["a", "b", "c"])
    data.units[("a", "c")] = {}
    return ph.verify_linking_structures(data, [["a", "b"], ["c"]], "linking")


def fiber():
    fd = tk.pointed_group_fiber(tk.cyclic_group(3))
    coev = fd.coev["u1"]
    kl = _first(coev)
    coev[kl] = linalg.scale(coev[kl], 2)
    return tk.validate_fiber_data(fd)


def roundtrip():
    out = _z3()
    out.data.coproduct[5] = _doubled(out.data.coproduct[5])
    return tk.roundtrip_check(out)


def corep():
    return cr.verify_corep(_perturbed_corep(_irreps(_z3())[1]))


def generalized_inverse():
    return cr.generalized_inverse_report(_perturbed_corep(_irreps(_z3())[1]))


def dual():
    return cr.dual_report(_perturbed_corep(_irreps(_z3())[1]))


def schur():
    out = _z3()
    out.data.integral[_first(out.data.integral)] = Scalar(2)
    X = _irreps(out)[1]
    return cr.schur_report(X, X)


def peter_weyl():
    out = _z3()
    return cr.peter_weyl_report(out.data, _irreps(out)[:2])


def characters():
    out = _z3()
    out.data.integral[_first(out.data.integral)] = Scalar(2)
    return cr.woronowicz_characters(out.data, _irreps(out), [-1, 0, 1]).report


def walk():
    w = wk.podles_walk(HALF, 0, (-8, 8))
    e = w.edges["0->1"]
    w.edges["0->1"] = dataclasses.replace(e, weight=e.weight * 2)
    return wk.validate_walk(w)


def conjugate_equations():
    w = wk.podles_walk(HALF, 0, (-8, 8))
    e = w.edges["0->1"]
    w.edges["0->1"] = dataclasses.replace(e, sign=-e.sign)
    return wk.verify_conjugate_equations(w, wk.build_r_map(w))


def coloring():
    w = wk.podles_walk(HALF, 0, (-4, 4))
    return wk.color_walk(w, {eid: "+" for eid in w.edges}).report


def translation():
    shifted = wk.podles_walk(HALF, 1, (-5, 3))
    e = shifted.edges["0->1"]
    shifted.edges["0->1"] = dataclasses.replace(e, weight=e.weight * 2)
    return wk.shift_isomorphism_report(HALF, 0, (-4, 4), shifted=shifted)


def hopf_wellposed():
    p = pr.build_presentation(wk.one_vertex_walk(HALF))
    bad = p.with_eqint(lambda e, f, c: c.inverse() if (e, f) == ("e", "ebar") else c)
    return pr.check_hopf_wellposed(bad, 2)


def colored_matrix():
    p = pr.build_presentation(wk.one_vertex_walk(HALF))
    bad = p.with_eqint(lambda e, f, c: -c if (e, f) == ("e", "ebar") else c)
    return pr.colored_matrix(bad).report


def dynamical():
    return pr.dynamical_su2_report(HALF, 0, (-6, 6), d=3, relation_q=HALF ** 2)


CATALOGUE = {
    "partial-algebra": algebra,
    "partial-bialgebra": bialgebra,
    "antipode": antipode,
    "canonical-maps": canonical_maps,
    "integral": integral,
    "star": star,
    "linking-structure": linking,
    "fiber-data": fiber,
    "roundtrip": roundtrip,
    "corep": corep,
    "generalized-inverse": generalized_inverse,
    "dual": dual,
    "schur-orthogonality": schur,
    "peter-weyl": peter_weyl,
    "characters": characters,
    "walk": walk,
    "conjugate-equations": conjugate_equations,
    "coloring": coloring,
    "translation": translation,
    "hopf-wellposed": hopf_wellposed,
    "colored-matrix": colored_matrix,
    "dynamical-su2": dynamical,
}


def run(name: str):
    """Return ``(report, error)``; exactly one is not ``None``."""
    try:
        return CATALOGUE[name](), None
    except (ValueError, RuntimeError) as exc:
        return None, exc


def localized(report) -> bool:
    """The report fails and every failing axiom carries at least one non-empty witness."""
    if report.ok:
        return False
    return all(report.result(a).witnesses and all(report.result(a).witnesses)
               for a in report.failed_axioms())
