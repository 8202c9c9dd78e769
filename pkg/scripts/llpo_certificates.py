"""Print the LLPO separation certificates and sigma-split checks in full."""

from degreelab import suites
from degreelab.llpo_family import separation_search, witness_sigma_split

for P, Q in suites.llpo_certificate_pairs():
    print(separation_search(P, Q, 0).report())

for k, w, d in ((2, 3, 3), (2, 4, 3), (3, 4, 3)):
    f, b = witness_sigma_split(k, w, d).check()
    print(f"sigma split k={k} width={w} depth={d}: forward {f.holds} backward {b.holds}")
