"""Pair groupoid on three points: its partial Hopf structure, hyperobjects and irreducibles."""

from pqg import corep as cr
from pqg import partial_hopf as ph
from pqg import tannaka as tk

data = ph.pair_groupoid(["a", "b", "c"])
print(f"{data.name}: dimension {data.dim}, {len(data.blocks)} nonzero blocks")
rep = ph.verify_all(data)
print(f"all axioms hold: {rep.ok} ({len(rep.axioms)} checks)")
print("hyperobjects:", ph.hyperobject_partition(data))

irr = cr.find_irreducibles(data)
print("irreducible dimensions:", [X.dim for X in irr])
print("Peter-Weyl complete:", cr.peter_weyl_report(data, irr).ok)

# two matrix-unit points split into two hyperobjects and form a co-linking structure
m2 = tk.reconstruct(tk.matrix_units_fiber(["1", "2"])).data
print("matrix units hyperobjects:", ph.hyperobject_partition(m2))
print("co-linking:", ph.verify_linking_structures(m2, [["1"], ["2"]], "colinking").ok)
