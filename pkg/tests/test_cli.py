import subprocess
import sys

import pytest

from quadrep import cli
from quadrep.certificate import serialize
from quadrep.descent import represent_n5


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_repr_41(capsys):
    assert run(capsys, "repr", 41) == (0, "41 = 6^2 + 5*1^2\n", "")


def test_repr_wrong_class(capsys):
    code, out, err = run(capsys, "repr", 7)
    assert code == 3 and out == ""
    assert "7 mod 20" in err


def test_repr_fermat(capsys):
    code, out, _ = run(capsys, "repr", 13, "--n", 1)
    assert code == 0
    assert out in ("13 = 2^2 + 1*3^2\n", "13 = 3^2 + 1*2^2\n")


@pytest.mark.parametrize(
    "argv, code",
    [
        (("repr", 21), 2),
        (("repr", 1), 2),
        (("repr", 2**64 + 1), 4),
        (("repr", 11, "--n", 2), 0),
        (("repr", 7, "--n", 2), 3),
        (("pair", 2, 2), 3),
        (("pair", 3, 9), 2),
        (("pair", 3, 41), 3),
        (("form", 41), 3),
        (("form", 21), 2),
        (("repr", "abc"), 2),
        (("repr", 41, "--n", 4), 2),
        (("scan", "--max", 10**9 + 1), 4),
        (("nonsense",), 2),
    ],
)
def test_exit_codes(capsys, argv, code):
    assert run_catching(capsys, *argv) == code


def run_catching(capsys, *argv):
    try:
        return run(capsys, *argv)[0]
    except SystemExit as exc:  # argparse errors
        capsys.readouterr()
        return exc.code


def test_pair_examples(capsys):
    code, out, _ = run(capsys, "pair", 3, 7)
    assert code == 0 and out in ("21 = 1^2 + 5*2^2\n", "21 = 4^2 + 5*1^2\n")
    assert run(capsys, "pair", 2, 3)[:2] == (0, "6 = 1^2 + 5*1^2\n")


@pytest.mark.parametrize(
    "p, line",
    [(23, "23 = 2*(-1)^2 + 2*(-1)*3 + 3*3^2\n"), (7, "7 = 2*(1)^2 + 2*(1)*1 + 3*1^2\n")],
)
def test_form(capsys, p, line):
    assert run(capsys, "form", p)[:2] == (0, line)


def test_scan_n5_100(capsys):
    code, out, _ = run(capsys, "scan", "--n", 5, "--max", 100)
    assert code == 0
    lines = out.splitlines()
    assert lines == [
        "29\t9\t3\t2\tok",
        "41\t1\t6\t1\tok",
        "61\t1\t4\t3\tok",
        "89\t9\t3\t4\tok",
        "4 primes, 4 verified",
    ]


def test_scan_empty(capsys):
    assert run(capsys, "scan", "--n", 5, "--max", 10)[:2] == (0, "0 primes, 0 verified\n")


def test_scan_n1(capsys):
    code, out, _ = run(capsys, "scan", "--n", 1, "--max", 30, "--verify")
    assert code == 0
    assert [int(line.split("\t")[0]) for line in out.splitlines()[:-1]] == [5, 13, 17, 29]
    assert out.splitlines()[-1] == "4 primes, 4 verified"


def test_scan_classes_filter(capsys):
    code, out, _ = run(capsys, "scan", "--max", 200, "--classes", "9")
    assert code == 0
    ps = [int(line.split("\t")[0]) for line in out.splitlines()[:-1]]
    assert ps == [29, 89, 109, 149]


def test_scan_jobs_match_serial(capsys):
    serial = run(capsys, "scan", "--max", 30000, "--verify")
    parallel = run(capsys, "scan", "--max", 30000, "--verify", "--jobs", 2)
    assert serial == parallel
    assert serial[0] == 0


def test_scan_reports_failures(capsys, monkeypatch):
    monkeypatch.setattr(cli.certificate, "verify", lambda cert: False)
    code, out, _ = run(capsys, "scan", "--max", 100, "--verify")
    assert code == 6
    assert out.splitlines()[-1] == "4 primes, 0 verified"
    assert "FAIL" in out


def test_cert_output_and_verify(capsys, tmp_path):
    path = tmp_path / "41.cert"
    assert run(capsys, "repr", 41, "--cert", path)[0] == 0
    assert path.read_text() == serialize(represent_n5(41)[1])
    assert run(capsys, "verify", path)[:2] == (0, "ok: 41 = 6^2 + 5*1^2\n")

    pair_path = tmp_path / "pair.cert"
    assert run(capsys, "pair", 7, 7, "--cert", pair_path)[0] == 0
    assert run(capsys, "verify", pair_path)[0] == 0


def test_verify_mutated(capsys, tmp_path):
    path = tmp_path / "29.cert"
    text = serialize(represent_n5(29)[1]).replace("out=(6,4)", "out=(6,5)")
    path.write_text(text)
    code, _, err = run(capsys, "verify", path)
    assert code == 6
    assert "step 3" in err


def test_verify_truncated(capsys, tmp_path):
    path = tmp_path / "29.cert"
    text = serialize(represent_n5(29)[1])
    path.write_text(text[: text.index("HALVE")])
    code, _, err = run(capsys, "verify", path)
    assert code == 5
    assert "line 5" in err


def test_verify_missing_file(capsys, tmp_path):
    assert run(capsys, "verify", tmp_path / "nope")[0] == 5


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "quadrep", "repr", "89"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert proc.stdout == "89 = 3^2 + 5*4^2\n"
    proc = subprocess.run([sys.executable, "-m", "quadrep", "repr", "7"], capture_output=True, text=True)
    assert proc.returncode == 3
