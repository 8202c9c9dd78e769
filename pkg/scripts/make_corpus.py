"""Write the example input files under corpus/ (clones, lattices, problems, mass problems)."""

import os
import sys

from degreelab import algebra as alg
from degreelab import suites
from degreelab.baire_model import SpaceSpec, bottom, format_problem, make_problem
from degreelab.clones import format_clone
from degreelab.llpo_family import llpo_inf_n, llpo_n1
from degreelab.medvedev import format_mass, mass

ROOT = sys.argv[1] if len(sys.argv) > 1 else os.path.join(os.path.dirname(__file__), "..", "corpus")


def write(rel, text):
    path = os.path.join(ROOT, rel)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w") as fh:
        fh.write(text)


write("clones/cons3.clone", format_clone(suites.cons3_clone()))
write("clones/kleene6.clone", format_clone(suites.kleene6_clone()))
for L in alg.standard_corpus():
    write(f"lattices/{L.name.replace('^', 'pow').replace('+', 'plus')}.lat", alg.format_lattice(L))

sp, osp = SpaceSpec(2, 1), SpaceSpec(3, 1)
write("problems/P.prob", format_problem(make_problem(sp, osp, [((0,), [(2,)]), ((1,), [(0,), (1,)])], "P")))
write("problems/Q.prob", format_problem(make_problem(sp, osp, [((0,), [(0,)]), ((1,), [(1,)])], "Q")))
write("problems/bot.prob", format_problem(bottom(sp, osp)))
for P in suites.kleene_family()[2:4]:
    write(f"problems/{P.name}.prob", format_problem(P))
write("problems/llpo31.prob", format_problem(llpo_n1(3, 3, 3).renamed("LLPO31")))
write("problems/llpo21.prob", format_problem(llpo_n1(2, 3, 3).renamed("LLPO21")))
write("problems/llpo_inf1.prob", format_problem(llpo_inf_n(1, 3, 2, 4).renamed("LLPOinf1")))

msp = SpaceSpec(3, 1)
write("mass/A.mass", format_mass(mass(msp, [(1,), (2,)], "A")))
write("mass/B.mass", format_mass(mass(msp, [(2,)], "B")))
print(f"corpus written to {os.path.normpath(ROOT)}")
