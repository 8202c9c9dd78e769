"""Degree quotient of the Kleene family and the axiom report."""

import sys

from degreelab import suites

star = int(sys.argv[1]) if len(sys.argv) > 1 else 3
D, rep = suites.kleene_suite(star_budget=star)
print(D.report())
print(rep.report())
