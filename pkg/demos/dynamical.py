"""Dynamical SU(2) relations on colored Podleś windows, and what a wrong q looks like."""

from fractions import Fraction

from pqg import presentations as pr

for q, x in ((Fraction(1, 2), 0), (Fraction(-1, 3), Fraction(1, 2))):
    rep = pr.dynamical_su2_report(q, x, (-4, 4), d=3)
    print(f"q={q} x={x}: {'all relations certified' if rep.ok else rep.failed_axioms()}")
    for axiom in rep.axioms:
        print(f"  {rep.status(axiom):<8} {axiom}")

bad = pr.dynamical_su2_report(Fraction(1, 2), 0, (-4, 4), d=3, relation_q=Fraction(1, 4))
print("relations written with q^2 instead of q fail at:", bad.failed_axioms())
