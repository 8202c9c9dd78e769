"""Run the acceptance suites outside pytest and print one line per criterion.

usage: python scripts/run_acceptance.py [--jobs N] [--skip-determinism]
"""

import argparse
import sys
import time

from degreelab import suites


def line(num, ok, detail):
    print(f"criterion {num} {'PASS' if ok else 'FAIL'}: {detail}", flush=True)
    return ok


def summary(tallies):
    return ", ".join(f"{t.law} {t.checked - t.failed}/{t.checked}" for t in tallies.values())


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--skip-determinism", action="store_true")
    args = ap.parse_args()
    results = []

    t = time.time()
    cons = suites.construction_suite(suites.ConstructionConfig(count=100), args.jobs)
    secs = time.time() - t
    results.append(line(1, cons.passed and secs <= 60, f"{summary(cons)} in {secs:.1f}s"))

    D, rep = suites.kleene_suite()
    results.append(line(2, rep.passed, f"{len(D.classes)} classes; "
                                       + "; ".join(r.line() for r in rep.results)))

    imp = suites.implication_suite(jobs=args.jobs)
    mp, res = imp["modus-ponens"], imp["residuation"]
    n = mp.checked + mp.skipped
    results.append(line(3, n >= 20 and mp.passed and res.passed and res.skipped <= 0.3 * n,
                        f"{n} instances: {mp.line().strip()}; {res.line().strip()}"))
    results.append(line(4, imp["arrow-times"].passed and imp["arrow-pointed"].passed,
                        f"{imp['arrow-times'].line().strip()}; {imp['arrow-pointed'].line().strip()}"))

    llpo = suites.llpo_suite()
    results.append(line(5, llpo.passed, f"identity in {llpo.identity_seconds:.3f}s; "
                        + "; ".join(f"{c.P_name} vs {c.Q_name} {c.status}" for c in llpo.certificates)))

    alg = suites.algebra_suite()
    results.append(line(6, alg.passed, summary(alg)))

    med = suites.medvedev_suite(jobs=args.jobs)
    results.append(line(7, med.passed, summary(med)))

    if not args.skip_determinism:
        # reuse the subprocess comparison from the test module
        sys.path.insert(0, "tests")
        from test_acceptance import COMMANDS, _cli
        bad = [a[0] for a in COMMANDS
               if len({_cli(a + ["--jobs", str(j)], h) for j, h in ((1, 0), (1, 1), (4, 2))}) != 1]
        results.append(line(8, not bad, f"{len(COMMANDS)} invocations, differing: {bad or 'none'}"))
    return 0 if all(results) else 1


if __name__ == "__main__":
    sys.exit(main())
