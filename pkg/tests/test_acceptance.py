"""Acceptance criteria 1-8, one PASS/FAIL line each on the terminal."""

import os
import subprocess
import sys
import time
from pathlib import Path

import pytest

from degreelab import suites

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"


@pytest.fixture
def report(capsys):
    def emit(num, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {num} {'PASS' if ok else 'FAIL'}: {detail}")
    return emit


def test_criterion_1_constructions(report):
    cfg = suites.ConstructionConfig(alphabet=2, depth=2, star_budget=3, seed=0, count=100)
    t = time.time()
    tallies = suites.construction_suite(cfg)
    secs = time.time() - t
    failed = sum(x.failed for x in tallies.values())
    checked = sum(x.checked for x in tallies.values())
    ok = tallies.passed and secs <= 60 and cfg.count >= 100
    report(1, ok, f"{cfg.count} triples, {checked} checks, {failed} failures, {secs:.1f}s")
    assert ok, "\n".join(x.line() for x in tallies.values())


def test_criterion_2_kleene(report):
    D, rep = suites.kleene_suite(star_budget=3)
    gens = len(suites.kleene6_clone().generators)
    ok = rep.passed and len(D.classes) <= 12 and gens == 8
    bad = [r.axiom for r in rep.results if not r.passed]
    report(2, ok, f"{len(D.classes)} classes, {gens} generators, failing axioms {bad or 'none'}")
    assert ok, rep.report()


@pytest.fixture(scope="module")
def implication_tallies():
    return suites.implication_suite(seed=0, size=24)


def test_criterion_3_heyting(report, implication_tallies):
    mp, res = implication_tallies["modus-ponens"], implication_tallies["residuation"]
    n = mp.checked + mp.skipped
    skip_rate = res.skipped / n
    ok = n >= 20 and mp.passed and mp.skipped == 0 and res.passed and skip_rate <= 0.30
    report(3, ok, f"{n} instances, modus ponens {mp.checked - mp.failed}/{mp.checked}, "
                  f"residuation {res.checked - res.failed}/{res.checked}, skipped {skip_rate:.0%}")
    assert ok, "\n".join([mp.line(), res.line()] + res.notes)


def test_criterion_4_arrows(report, implication_tallies):
    at, ap = implication_tallies["arrow-times"], implication_tallies["arrow-pointed"]
    ok = at.passed and ap.passed and at.checked > 0 and ap.checked > 0
    report(4, ok, f"arrow-times {at.checked - at.failed}/{at.checked}, "
                  f"arrow-pointed {ap.checked - ap.failed}/{ap.checked}")
    assert ok, "\n".join([at.line(), ap.line()])


def test_criterion_5_llpo(report):
    r = suites.llpo_suite(modulus=0)
    certs = ", ".join(f"{c.P_name} vs {c.Q_name}: {c.status}"
                      f"{' exhaustive' if c.exhaustive else ''}" for c in r.certificates)
    report(5, r.passed, f"(a) {'found' if r.identity_found else 'missing'} in {r.identity_seconds:.3f}s; "
                        f"(b) {certs}; (c) {len(r.split_checks)} split checks; "
                        f"(d) split-choice {r.split_choice.checked - r.split_choice.failed}/{r.split_choice.checked}")
    assert r.passed


def test_criterion_6_algebra(report):
    tallies = suites.algebra_suite(seed=0, extra=5)
    summary = ", ".join(f"{t.law} {t.checked - t.failed}/{t.checked}" for t in tallies.values())
    report(6, tallies.passed, summary)
    assert tallies.passed, "\n".join(t.line() for t in tallies.values())


def test_criterion_7_medvedev(report):
    tallies = suites.medvedev_suite(seed=0, count=50)
    summary = ", ".join(f"{t.law} {t.checked - t.failed}/{t.checked}" for t in tallies.values())
    report(7, tallies.passed, f"50 pairs: {summary}")
    assert tallies.passed, "\n".join(t.line() for t in tallies.values())


def c(*parts):
    return str(CORPUS.joinpath(*parts))


COMMANDS = [
    ["laws", "--count", "20"],
    ["reduce", c("problems", "P.prob"), c("problems", "Q.prob"), "--class", "clone",
     "--clone", c("clones", "cons3.clone")],
    ["implication", c("problems", "P.prob"), c("problems", "Q.prob"), "--class", "modulus"],
    ["lattice", c("lattices", "N5.lat"), "--check", "jankov-iff"],
    ["lattice", c("lattices", "chain3.lat"), "--formula", "~p0 | ~~p0", "--check", "jankov-iff"],
    ["llpo", "separate", "--inf", "2"],
    ["llpo", "sigma-split", "--n", "3", "--width", "4"],
    ["quotient", "--family", "kleene", "--kleene"],
    ["medvedev", c("mass", "A.mass"), c("mass", "B.mass"), "--class", "modulus"],
]


def _cli(argv, hashseed):
    env = dict(os.environ, PYTHONHASHSEED=str(hashseed))
    p = subprocess.run([sys.executable, "-m", "degreelab.cli", *argv], capture_output=True, env=env)
    return p.returncode, p.stdout


def test_criterion_8_determinism(report):
    bad = []
    for argv in COMMANDS:
        runs = {_cli(argv + ["--jobs", str(j)], h) for j, h in ((1, 0), (1, 1), (2, 2), (4, 3))}
        if len(runs) != 1:
            bad.append(argv[0])
    ok = not bad
    report(8, ok, f"{len(COMMANDS)} invocations x 4 runs (hash seeds 0-3, jobs 1/2/4), "
                  f"differing: {bad or 'none'}")
    assert ok
