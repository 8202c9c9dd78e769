from pathlib import Path

import pytest

from degreelab.cli import main

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def c(*parts):
    return str(CORPUS.joinpath(*parts))


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_reduce_finds_identity(capsys):
    code, out, _ = run(capsys, "reduce", c("problems", "llpo31.prob"), c("problems", "llpo21.prob"),
                       "--class", "modulus")
    assert code == 0 and "FOUND" in out and "witness" in out


def test_reduce_porcelain(capsys):
    code, out, _ = run(capsys, "reduce", c("problems", "bot.prob"), c("problems", "P.prob"),
                       "--class", "modulus", "--porcelain")
    assert code == 0 and "status=" in out


def test_lattice(capsys):
    code, out, _ = run(capsys, "lattice", c("lattices", "chain3.lat"), "--formula", "p0 | ~p0")
    assert code == 0 and "INVALID at p0=1" in out
    code, out, _ = run(capsys, "lattice", c("lattices", "chain3.lat"), "--check", "jankov-iff")
    assert code == 0 and "HOLDS" in out
    code, out, _ = run(capsys, "lattice", c("lattices", "2pow2.lat"), "--check", "jankov-iff")
    assert code == 0 and "EXCLUDED" in out


def test_llpo_split_and_make(capsys):
    code, out, _ = run(capsys, "llpo", "sigma-split", "--n", "2", "--width", "3", "--depth", "3")
    assert code == 0 and "FAILS" not in out
    code, out, _ = run(capsys, "llpo", "make", "--kind", "inf", "--n", "2", "--width", "2", "--depth", "2")
    assert code == 0 and out.startswith("problem")


def test_medvedev(capsys):
    code, out, _ = run(capsys, "medvedev", c("mass", "A.mass"), c("mass", "B.mass"), "--class", "modulus")
    assert code == 0 and "DISAGREES" not in out


def test_exit_codes(capsys, tmp_path):
    bad = tmp_path / "bad.clone"
    bad.write_text(CORPUS.joinpath("clones", "cons3.clone").read_text().replace("end", "garbage"))
    code, _, err = run(capsys, "reduce", c("problems", "P.prob"), c("problems", "Q.prob"),
                       "--class", "clone", "--clone", str(bad))
    assert code == 2 and err.startswith("error:")
    code, _, err = run(capsys, "reduce", c("problems", "P.prob"), str(tmp_path / "missing.prob"))
    assert code == 2
    code, _, _ = run(capsys, "llpo", "separate")
    assert code == 2
    with pytest.raises(SystemExit) as e:
        main(["nonsense"])
    assert e.value.code == 2


def test_budget_exit(capsys):
    code, _, err = run(capsys, "llpo", "separate", "--inf", "2", "--budget", "1")
    assert code == 1


@pytest.mark.parametrize("argv", [
    ["quotient", "--family", "kleene"],
    ["implication", c("problems", "P.prob"), c("problems", "Q.prob"), "--class", "modulus"],
    ["llpo", "separate", "--inf", "2", "--porcelain"],
])
def test_deterministic(capsys, argv):
    first = run(capsys, *argv)
    assert first == run(capsys, *argv)
