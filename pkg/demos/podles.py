"""A finite window of the Podleś walk at q = 1/2: weights, solutions of the conjugate equations, coloring."""

from fractions import Fraction

from pqg import presentations as pr
from pqg import walks as wk

walk = wk.podles_walk(Fraction(1, 2), 0, (-4, 4))
print("t =", walk.t)
for k in range(-2, 3):
    up, down = walk.edge(f"{k}->{k + 1}").weight, walk.edge(f"{k + 1}->{k}").weight
    print(f"  w({k},{k + 1}) = {up}   w({k + 1},{k}) = {down}")

print("reciprocal walk:", wk.validate_walk(walk).ok)
conj = wk.verify_conjugate_equations(walk, wk.build_r_map(walk))
print("conjugate equations:", conj.ok, {k: str(v) for k, v in conj.data.items()})

colored = wk.color_walk(walk)
print("coloring:", colored.report.ok, "  bar(+) =", colored.bar_color["+"])

p = pr.build_presentation(wk.podles_walk(Fraction(1, 2), 0, (-3, 3)))
rep = pr.check_hopf_wellposed(p, 2)
print(f"Hopf maps respect the relations at degree 2: {rep.ok}")
print("  statuses:", rep.data["status-counts"], " replayed:", rep.data["witnesses-replayed"])
