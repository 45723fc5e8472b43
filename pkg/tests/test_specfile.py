"""Cover-file parsing and cross-validation."""

import textwrap
from fractions import Fraction
from pathlib import Path

import pytest

from kcover.errors import SpecFileError
from kcover.specfile import load_spec

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

FULL = """\
[field]
min_poly = [-2, 0, 1]

[cover]
n = 2
p = [[0, 0], ["1/2", 1], [1]]
q = [3]

[prime]
ell = 7
alpha_plus_c = 4

[ramification]
branch = ["2^1", "2^1"]

[task]
k = 1
"""


def write(tmp_path, text, name="c.toml"):
    path = tmp_path / name
    path.write_text(textwrap.dedent(text))
    return str(path)


def test_full_round_trip(tmp_path):
    spec = load_spec(write(tmp_path, FULL))
    assert spec.field_spec.min_poly == (-2, 0, 1)
    assert spec.n == 2
    assert spec.cover is not None
    assert spec.cover.p[1].coords == (Fraction(1, 2), Fraction(1))
    # scalar shorthand pads the remaining coordinates with zeros
    assert spec.cover.p[2].coords == (Fraction(1), Fraction(0))
    assert spec.cover.q[0].coords == (Fraction(3), Fraction(0))
    # alpha_plus_c = 4 means the ideal (7, alpha + 4) = (7, alpha - 3)
    assert spec.prime.ell == 7 and spec.prime.r == 3
    assert spec.ramification.m == 2
    assert spec.k == 1


def test_defaults(tmp_path):
    # no field section: the cover is over the rationals; no q: constant 1
    spec = load_spec(
        write(
            tmp_path,
            """
            [cover]
            n = 2
            p = [0, 0, 1]

            [prime]
            ell = 13
            r = 0
            """,
        )
    )
    assert spec.field_spec.degree == 1
    assert spec.cover.q == (spec.field_spec.rational(1),)
    assert spec.ramification is None and spec.k is None


def test_genus_only_file(tmp_path):
    spec = load_spec(
        write(
            tmp_path,
            """
            [cover]
            n = 23

            [ramification]
            branch = ["4^4.2^2.1^3", "2^8.1^7", "23^1"]
            """,
        )
    )
    assert spec.cover is None and spec.prime is None
    assert spec.ramification.n == 23


def test_shipped_fixtures_load():
    paths = sorted(FIXTURES.glob("*.toml"))
    assert len(paths) >= 8
    for path in paths:
        spec = load_spec(str(path))
        assert spec.n >= 2


@pytest.mark.parametrize(
    "text,needle",
    [
        ("[junk]\nx = 1\n[cover]\nn = 5", "unknown section"),
        ("[cover]\nn = 5\nextra = 1", "unknown key"),
        ("[task]\nk = 2", "[cover]"),
        ("[cover]\nn = 1", "n must be"),
        ("[cover]\nn = 5\nq = [1]", "q given without p"),
        ("[cover]\nn = 5\np = [0, 1]", "degree"),
        ("[cover]\nn = 2\np = [0, 0, 1.5]", "integer or 'a/b'"),
        ("[cover]\nn = 2\np = [0, 0, \"1/0\"]", "cannot parse"),
        ("[field]\nmin_poly = [2, 2]\n[cover]\nn = 3\np = [0, 0, 0, 1]", "monic"),
        ("[cover]\nn = 2\np = [[1, 2], 0, 1]", "exceeds field degree"),
        ("[cover]\nn = 5\n[prime]\nr = 3", "ell is required"),
        ("[cover]\nn = 5\n[prime]\nell = 12\nr = 0", "not prime"),
        ("[cover]\nn = 5\n[prime]\nell = 13", "exactly one"),
        ("[cover]\nn = 5\n[prime]\nell = 13\nr = 1\nalpha_plus_c = 2", "exactly one"),
        ("[cover]\nn = 5\n[ramification]\nbranch = [\"4^2\"]", "degree"),
        ("[cover]\nn = 5\n[ramification]\nbranch = [3]", "cycle-type strings"),
        ("[cover]\nn = 5\n[task]\nk = 5", "k must be"),
        ("[cover]\nn = 5\n[task]\nk = 0", "k must be"),
        ("not toml ===", "TOML syntax"),
    ],
)
def test_rejects(tmp_path, text, needle):
    with pytest.raises(SpecFileError) as err:
        load_spec(write(tmp_path, text))
    assert needle in str(err.value)


def test_nonroot_residue_rejected(tmp_path):
    # 1 is not a root of x^2 - 2 mod 7 (the roots are 3 and 4)
    with pytest.raises(SpecFileError) as err:
        load_spec(
            write(
                tmp_path,
                """
                [field]
                min_poly = [-2, 0, 1]
                [cover]
                n = 2
                p = [0, 0, 1]
                [prime]
                ell = 7
                r = 1
                """,
            )
        )
    assert "prime ideal" in str(err.value)
    load_spec(
        write(
            tmp_path,
            """
            [field]
            min_poly = [-2, 0, 1]
            [cover]
            n = 2
            p = [0, 0, 1]
            [prime]
            ell = 7
            r = 3
            """,
            name="ok.toml",
        )
    )


def test_declared_n_must_match_coefficients(tmp_path):
    with pytest.raises(SpecFileError, match="declared n = 3"):
        load_spec(
            write(
                tmp_path,
                """
                [cover]
                n = 3
                p = [0, 0, 0, 0, 1]
                """,
            )
        )


def test_missing_file():
    with pytest.raises(SpecFileError):
        load_spec("/nonexistent/cover.toml")
