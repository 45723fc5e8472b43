"""Command-line behavior: outputs, exit codes, stream discipline.

Most cases drive main() in process for speed; one subprocess case checks
the module entry point.  The scan-bearing cases use a tiny prime so a
full certify finishes in well under a second.
"""

import json
import subprocess
import sys
import textwrap
from pathlib import Path

import pytest

from kcover.cli import main
from kcover.frobcount import scan_range
from kcover.modarith import PrimeField
from kcover.permcomb import RamificationType, genus_Ck

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

# x -> x^5 at ell = 101 = 1 mod 5: twenty split fibers of 10 pairs each,
# so the count 200 beats the clamped bound 102 despite the tiny prime
POWER5 = """\
[cover]
n = 5
p = [0, 0, 0, 0, 0, 1]

[prime]
ell = 101
r = 0

[ramification]
branch = ["5^1", "5^1"]

[task]
k = 2
"""

QUINTIC = """\
[cover]
n = 5
p = [0, -5, 0, 0, 0, 1]

[prime]
ell = 101
r = 0

[ramification]
branch = ["2^1.1^3", "2^1.1^3", "2^1.1^3", "2^1.1^3", "5^1"]

[task]
k = 2
"""


def write(tmp_path, text, name="c.toml"):
    path = tmp_path / name
    path.write_text(textwrap.dedent(text))
    return str(path)


def run(capsys, *argv):
    rc = main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def test_validate_fixture(capsys):
    rc, out, _ = run(capsys, "validate", str(FIXTURES / "m23.toml"))
    assert rc == 0
    assert "(47000081, alpha - 21962641)" in out


def test_validate_bad_file(capsys, tmp_path):
    rc, _, err = run(capsys, "validate", write(tmp_path, "[cover]\nn = 1"))
    assert rc == 11
    assert "n must be" in err


def test_genus_values(capsys):
    rc, out, _ = run(capsys, "genus", str(FIXTURES / "m23.toml"))
    assert rc == 0 and "genus = 3285" in out
    rc, out, _ = run(capsys, "genus", str(FIXTURES / "co3.toml"))
    assert rc == 0 and "genus = 40782" in out
    rc, out, _ = run(capsys, "genus", str(FIXTURES / "sp6f2_deg36.toml"))
    assert rc == 0 and "genus = 1275" in out


def test_genus_bound_mode_and_k_override(capsys):
    rc, out, _ = run(capsys, "genus", str(FIXTURES / "m23.toml"), "--mode", "bound")
    assert rc == 0 and "genus = 3345" in out
    ram = RamificationType.from_strings(
        23, ["4^4.2^2.1^3", "2^8.1^7", "23^1"]
    )
    expected = genus_Ck(ram, 2, mode="exact").g
    rc, out, _ = run(capsys, "genus", str(FIXTURES / "m23.toml"), "--k", "2")
    assert rc == 0 and f"genus = {expected}" in out


def test_genus_requires_ramification(capsys, tmp_path):
    path = write(tmp_path, "[cover]\nn = 5\n[task]\nk = 2")
    rc, _, err = run(capsys, "genus", path)
    assert rc == 11 and "ramification" in err


def test_genus_requires_k(capsys, tmp_path):
    path = write(
        tmp_path, "[cover]\nn = 5\n[ramification]\nbranch = [\"5^1\", \"5^1\"]"
    )
    rc, _, err = run(capsys, "genus", path)
    assert rc == 11 and "--k" in err


def test_bound_output(capsys):
    rc, out, _ = run(capsys, "bound", str(FIXTURES / "m23.toml"))
    assert rc == 0
    assert "hasse-weil upper bound = 92041771" in out
    assert "threshold 4g^2/(d-1)^2 = 43164900" in out
    rc, out, _ = run(capsys, "bound", str(FIXTURES / "co3.toml"))
    assert rc == 0 and "hasse-weil upper bound = 13824133842" in out


def test_bound_requires_prime(capsys, tmp_path):
    path = write(
        tmp_path,
        "[cover]\nn = 5\n[ramification]\nbranch = [\"5^1\", \"5^1\"]\n[task]\nk = 2",
    )
    rc, _, err = run(capsys, "bound", path)
    assert rc == 11 and "prime" in err


def test_certify_negative_genus_no_scan(capsys, tmp_path):
    rc, out, err = run(capsys, "certify", str(FIXTURES / "cyclic5_inert.toml"))
    assert rc == 0
    cert = json.loads(out)  # stdout must be exactly one JSON document
    assert cert["verdict"] == "NegativeGenusContradiction"
    assert cert["hw_bound"] is None
    assert "refuted without scanning" in err


def test_certify_violation(capsys, tmp_path):
    path = write(tmp_path, POWER5)
    rc, out, err = run(capsys, "certify", path, "--clamp-nonnegative-genus")
    assert rc == 0
    cert = json.loads(out)
    assert cert["verdict"] == "NotKTransitive"
    assert cert["count_lower"] == 200
    assert cert["hw_bound"] == 102
    assert cert["genus"]["clamped_to_zero"] is True
    assert "scan done" in err and "scan done" not in out


def test_certify_inconclusive_exit_10(capsys, tmp_path):
    path = write(tmp_path, QUINTIC)
    rc, out, _ = run(capsys, "certify", path)
    assert rc == 10
    cert = json.loads(out)
    assert cert["verdict"] == "Inconclusive"
    F = PrimeField(101)
    ref = scan_range(F.poly([0, 96, 0, 0, 0, 1]), F.poly([1]), 2, 0, 101)
    assert cert["count_lower"] == ref.total
    assert cert["hw_bound"] == 101 + 1 + 20
    assert cert["advisory"]["ramified_census_ok"] is True


def test_certify_deterministic_bytes(capsys, tmp_path):
    path = write(tmp_path, POWER5)
    _, out1, _ = run(capsys, "certify", path, "--clamp-nonnegative-genus")
    _, out2, _ = run(
        capsys, "certify", path, "--clamp-nonnegative-genus", "--chunk", "16"
    )
    _, out3, _ = run(
        capsys,
        "certify", path, "--clamp-nonnegative-genus", "--chunk", "16",
        "--threads", "2",
    )
    assert out1 == out2 == out3


def test_certify_early_exit(capsys, tmp_path):
    path = write(tmp_path, POWER5)
    rc, out, _ = run(
        capsys,
        "certify", path, "--clamp-nonnegative-genus", "--early-exit",
        "--chunk", "16",
    )
    assert rc == 0
    cert = json.loads(out)
    assert cert["verdict"] == "NotKTransitive"
    assert cert["advisory"]["early_exit"] is True
    assert cert["count_lower"] > 102


def test_certify_histogram_file(capsys, tmp_path):
    path = write(tmp_path, POWER5)
    hist = tmp_path / "hist.txt"
    run(
        capsys,
        "certify", path, "--clamp-nonnegative-genus", "--histogram", str(hist),
    )
    lines = hist.read_text().splitlines()
    assert "5 0 20" in lines
    assert "0 0 80" in lines


def test_certify_checkpoint_roundtrip(capsys, tmp_path):
    path = write(tmp_path, POWER5)
    ck = tmp_path / "scan.ck"
    _, out1, _ = run(
        capsys,
        "certify", path, "--clamp-nonnegative-genus",
        "--checkpoint", str(ck), "--chunk", "16",
    )
    assert ck.exists()
    # resuming over a complete checkpoint rescans nothing, same certificate
    _, out2, _ = run(
        capsys,
        "certify", path, "--clamp-nonnegative-genus",
        "--checkpoint", str(ck), "--resume", "--chunk", "16",
    )
    assert out1 == out2


def test_certify_checkpoint_mismatch_exit_12(capsys, tmp_path):
    path = write(tmp_path, POWER5)
    other = write(tmp_path, QUINTIC, name="other.toml")
    ck = tmp_path / "scan.ck"
    run(
        capsys,
        "certify", path, "--clamp-nonnegative-genus", "--checkpoint", str(ck),
    )
    rc, out, err = run(
        capsys, "certify", other, "--checkpoint", str(ck), "--resume"
    )
    assert rc == 12
    assert out == ""
    assert "checkpoint mismatch" in err


def test_certify_requires_cover(capsys):
    rc, _, err = run(capsys, "certify", str(FIXTURES / "m23.toml"))
    assert rc == 11 and "cover coefficients" in err


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "kcover.cli", "genus", str(FIXTURES / "m23.toml")],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "genus = 3285" in proc.stdout


def test_no_subcommand_is_usage_error():
    with pytest.raises(SystemExit):
        main([])
