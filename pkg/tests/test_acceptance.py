"""End-to-end acceptance checks, one test per criterion.

Run under pytest for a summary block, or directly with
``python3 tests/test_acceptance.py`` for one pass/fail line per criterion.
"""

from __future__ import annotations

import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import mutations  # noqa: E402
from pqg import corep as cr  # noqa: E402
from pqg import partial_hopf as ph  # noqa: E402
from pqg import presentations as pr  # noqa: E402
from pqg import tannaka as tk  # noqa: E402
from pqg import walks as wk  # noqa: E402
from pqg.report import PASS  # noqa: E402
from pqg.scalars import Scalar  # noqa: E402

HALF = Fraction(1, 2)


def shipped():
    """Name → (data, reconstruction output or None) for every shipped finite example."""
    out = {"pair-groupoid-3": (ph.pair_groupoid(["a", "b", "c"]), None)}
    for n in (2, 3):
        rec = tk.reconstruct(tk.pointed_group_fiber(tk.cyclic_group(n)))
        out[f"vec-z{n}"] = (rec.data, rec)
    rec = tk.reconstruct(tk.matrix_units_fiber(["a", "b"]))
    out["matrix-units-2"] = (rec.data, rec)
    return out


def irreducibles(data, rec):
    if rec is not None:
        return list(tk.canonical_coreps(rec).values())
    return cr.find_irreducibles(data)


EXPECTED_VERIFIERS = {"algebra", "bialgebra", "antipode", "canonical", "integral", "star"}


def test_criterion_1_axiom_suite():
    start = time.perf_counter()
    cases = {"pair-groupoid-3": ph.pair_groupoid(["a", "b", "c"])}
    for n in (2, 3):
        cases[f"vec-z{n}"] = tk.reconstruct(tk.pointed_group_fiber(tk.cyclic_group(n))).data
    for name, data in cases.items():
        rep = ph.verify_all(data)
        assert rep.ok, (name, rep.failed_axioms())
        assert {a.split("/")[0] for a in rep.axioms} == EXPECTED_VERIFIERS
        # exact PSD certificates only, no numeric fallbacks
        assert all(rep.status(a) == PASS for a in rep.axioms), name
        assert rep.status("integral/positivity") == PASS
    assert time.perf_counter() - start < 10


def test_criterion_2_dimension_oracle():
    for n in (1, 2, 3, 4):
        objs = [f"o{i}" for i in range(n)]
        assert ph.pair_groupoid(objs).dim == n * n
        fd = tk.pair_groupoid_fiber(objs)
        assert tk.reconstruct(fd).data.dim == n * n == tk.brute_force_dimension(fd)
    for n in (2, 3):
        fd = tk.pointed_group_fiber(tk.cyclic_group(n))
        assert tk.reconstruct(fd).data.dim == n ** 3 == tk.brute_force_dimension(fd)


def test_criterion_3_peter_weyl():
    for name, (data, rec) in shipped().items():
        irr = irreducibles(data, rec)
        rep = cr.peter_weyl_report(data, irr)
        assert rep.ok, (name, rep.failed_axioms())
        assert set(rep.axioms) == {"coefficients-span", "coefficients-independent"}
        if rec is not None:
            rt = tk.roundtrip_check(rec)
            assert rt.ok, (name, rt.failed_axioms())
            assert rt.result("irreducible-count").checked == 1
            assert rt.result("fusion-multiplicities").checked == len(rec.fiber.irreducibles) ** 2


def test_criterion_4_schur_orthogonality():
    for name, (data, rec) in shipped().items():
        irr = irreducibles(data, rec)
        for i, X in enumerate(irr):
            for Y in irr[i:]:
                rep = cr.schur_report(X, Y)
                assert rep.ok, (name, X.name, Y.name, rep.failed_axioms())
                if X is Y:
                    for axiom in ("d_G-independent", "trace-formula-G", "trace-formula-F",
                                  "flip-formula-G", "flip-formula-F"):
                        assert rep.status(axiom) == PASS, (name, X.name, axiom)
                else:
                    assert rep.status("inequivalent-phi(b*a)") == PASS
                    assert rep.status("inequivalent-phi(ab*)") == PASS
        table = cr.woronowicz_characters(data, irr, [0, 1])
        assert table.report.status("scaling-d_F=d_G") == PASS, name


def test_criterion_5_characters():
    zs = [-2, -1, 0, 1, 2]
    for name, (data, rec) in shipped().items():
        table = cr.woronowicz_characters(data, irreducibles(data, rec), zs)
        rep = table.report
        assert rep.ok, (name, rep.failed_axioms())
        for axiom in ("f0-is-counit", "convolution", "units", "S^2-implemented",
                      "modular-automorphism"):
            assert rep.status(axiom) == PASS, (name, axiom)
        assert rep.result("convolution").checked >= len(zs) ** 2


def test_criterion_6_walks():
    start = time.perf_counter()
    walk = wk.podles_walk(HALF, 0, (-8, 8))
    rep = wk.validate_walk(walk)
    assert rep.ok, rep.failed_axioms()
    interior = len(walk.interior)
    assert rep.result("random-walk").counts.get(PASS) == interior
    assert rep.status("weight-reciprocality") == PASS
    conj = wk.verify_conjugate_equations(walk, wk.build_r_map(walk))
    assert conj.ok
    assert conj.data["|q|+|q|^-1"] == Scalar(Fraction(5, 2))
    assert conj.data["snake-scalar"] == -1
    assert conj.result("R*R").counts.get(PASS) == interior
    assert time.perf_counter() - start < 1


def test_criterion_7_hopf_wellposed():
    start = time.perf_counter()
    for walk in (wk.one_vertex_walk(1), wk.podles_walk(HALF, 0, (-4, 4))):
        rep = pr.check_hopf_wellposed(pr.build_presentation(walk), 4)
        assert rep.ok, (walk.name, rep.failed_axioms())
        done, total = rep.data["witnesses-replayed"].split("/")
        assert done == total and int(total) > 0
        assert rep.status("witness-replay") == PASS
        for axiom in ("counit", "antipode", "star", "coproduct"):
            assert rep.result(axiom).counts.get(PASS, 0) > 0, (walk.name, axiom)
    assert time.perf_counter() - start < 60


DYNAMICAL_RELATIONS = 6


def test_criterion_8_dynamical_su2():
    start = time.perf_counter()
    rep = pr.dynamical_su2_report(HALF, 0, (-6, 6), d=3)
    assert rep.ok, rep.failed_axioms()
    relations = [a for a in rep.axioms if "alpha" in a and "beta" in a
                 and not a.startswith(("coproduct", "grading"))]
    assert len(relations) == DYNAMICAL_RELATIONS
    for axiom in ("grading-alpha", "grading-beta", "coproduct-alpha", "coproduct-beta"):
        assert rep.status(axiom) == PASS
    bad = pr.dynamical_su2_report(HALF, 0, (-6, 6), d=3, relation_q=HALF ** 2)
    assert not bad.ok
    assert time.perf_counter() - start < 120


def test_criterion_9_negative_controls():
    missed = []
    for name in mutations.CATALOGUE:
        report, error = mutations.run(name)
        if report is not None:
            if not mutations.localized(report):
                missed.append(name)
        elif "vertex" not in str(error) and "edge" not in str(error):
            missed.append(name)
    assert not missed


if __name__ == "__main__":
    tests = sorted((n, f) for n, f in globals().items() if n.startswith("test_criterion_"))
    tests.sort(key=lambda nf: int(nf[0].split("_")[2]))
    failed = 0
    for name, fn in tests:
        n = name.split("_")[2]
        label = " ".join(name.split("_")[3:])
        start = time.perf_counter()
        try:
            fn()
            status = "PASS"
        except Exception as exc:  # report and keep going
            status = f"FAIL ({type(exc).__name__}: {exc})"
            failed += 1
        print(f"criterion {n}: {status}  {label}  ({time.perf_counter() - start:.2f} s)")
    sys.exit(1 if failed else 0)
