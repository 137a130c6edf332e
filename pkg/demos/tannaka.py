"""Rebuild Vec(Z/3) from its fiber functor and read back the fusion rules."""

from pqg import corep as cr
from pqg import partial_hopf as ph
from pqg import tannaka as tk

fd = tk.pointed_group_fiber(tk.cyclic_group(3))
out = tk.reconstruct(fd)
print(f"reconstructed dimension {out.data.dim}, brute-force count {tk.brute_force_dimension(fd)}")
print("axioms hold:", ph.verify_all(out.data).ok)

rt = tk.roundtrip_check(out)
print("round trip:", rt.ok)
for pair, summands in sorted(rt.data["fusion-table"].items()):
    print(f"  {pair} = {summands}")

irreps = list(tk.canonical_coreps(out).values())
table = cr.woronowicz_characters(out.data, irreps, [-1, 0, 1])
print("characters consistent:", table.report.ok)
