"""TOML cover-description files.

Sections:

  [field]         min_poly = [c0, c1, ..., 1]          (omitted: rationals)
  [cover]         n = 23
                  p = [[..coords..], ...]              (ascending, optional)
                  q = [[..coords..], ...]              (omitted: constant 1)
  [prime]         ell = 47000081, and r = ... or alpha_plus_c = ...
  [ramification]  branch = ["4^4.2^2.1^3", "2^8.1^7", "23^1"]
  [task]          k = 5

Coefficients are coordinate vectors over the power basis of the field;
entries are integers or exact rationals written "a/b".  A bare integer or
string is shorthand for a vector with that single leading coordinate.
Unknown sections or keys are errors: silently ignoring a typo in an input
that feeds a multi-hour scan is worse than refusing to start.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .errors import KcoverError, SpecFileError
from .numfield import CoverSpec, NumberFieldSpec, PrimeIdealSpec, validate_prime
from .permcomb import RamificationType

_SECTIONS = {
    "field": {"min_poly"},
    "cover": {"n", "p", "q"},
    "prime": {"ell", "r", "alpha_plus_c"},
    "ramification": {"branch"},
    "task": {"k"},
}


@dataclass(frozen=True)
class ParsedSpec:
    """A loaded and validated cover file; optional parts are None."""

    path: str
    field_spec: NumberFieldSpec
    n: int
    cover: CoverSpec | None
    prime: PrimeIdealSpec | None
    ramification: RamificationType | None
    k: int | None


def _fail(path, where, msg):
    raise SpecFileError(f"{path}: [{where}] {msg}")


def _check_keys(path, doc):
    for section, body in doc.items():
        if section not in _SECTIONS:
            _fail(path, section, "unknown section")
        if not isinstance(body, dict):
            _fail(path, section, "must be a table")
        for key in body:
            if key not in _SECTIONS[section]:
                _fail(path, section, f"unknown key {key!r}")


def _coord(path, where, value):
    if isinstance(value, bool) or isinstance(value, float):
        _fail(path, where, f"coordinate {value!r} must be an integer or 'a/b' string")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError):
            _fail(path, where, f"cannot parse rational {value!r}")
    _fail(path, where, f"coordinate {value!r} must be an integer or 'a/b' string")


def _coeff_vector(path, where, entry, field_spec):
    if not isinstance(entry, list):
        entry = [entry]  # scalar shorthand for a rational coefficient
    if len(entry) > field_spec.degree:
        _fail(
            path, where,
            f"coordinate vector of length {len(entry)} exceeds field degree "
            f"{field_spec.degree}",
        )
    coords = [_coord(path, where, v) for v in entry]
    coords += [Fraction(0)] * (field_spec.degree - len(coords))
    return field_spec.element(coords)


def _coeff_list(path, name, raw, field_spec):
    if not isinstance(raw, list) or not raw:
        _fail(path, "cover", f"{name} must be a nonempty list of coefficients")
    return tuple(
        _coeff_vector(path, f"cover.{name}[{i}]", entry, field_spec)
        for i, entry in enumerate(raw)
    )


def load_spec(path: str) -> ParsedSpec:
    """Read, parse, and cross-validate a cover file."""
    try:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    except OSError as exc:
        raise SpecFileError(f"{path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise SpecFileError(f"{path}: TOML syntax: {exc}") from exc

    _check_keys(path, doc)

    field_tbl = doc.get("field", {})
    min_poly = field_tbl.get("min_poly", [0, 1])
    if (
        not isinstance(min_poly, list)
        or not min_poly
        or not all(isinstance(c, int) and not isinstance(c, bool) for c in min_poly)
    ):
        _fail(path, "field", "min_poly must be a list of integers")
    try:
        field_spec = NumberFieldSpec(tuple(min_poly))
    except ValueError as exc:
        _fail(path, "field", str(exc))

    cover_tbl = doc.get("cover")
    if cover_tbl is None or "n" not in cover_tbl:
        _fail(path, "cover", "section with n is required")
    n = cover_tbl["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        _fail(path, "cover", f"n must be an integer >= 2, got {n!r}")

    cover = None
    if "p" in cover_tbl:
        p = _coeff_list(path, "p", cover_tbl["p"], field_spec)
        if "q" in cover_tbl:
            q = _coeff_list(path, "q", cover_tbl["q"], field_spec)
        else:
            q = (field_spec.rational(1),)
        try:
            cover_obj = CoverSpec(field_spec, p, q)
        except ValueError as exc:
            _fail(path, "cover", str(exc))
        if cover_obj.n != n:
            _fail(
                path, "cover",
                f"declared n = {n} but the coefficients give degree {cover_obj.n}",
            )
        cover = cover_obj
    elif "q" in cover_tbl:
        _fail(path, "cover", "q given without p")

    prime = None
    prime_tbl = doc.get("prime")
    if prime_tbl is not None:
        if "ell" not in prime_tbl:
            _fail(path, "prime", "ell is required")
        ell = prime_tbl["ell"]
        if not isinstance(ell, int) or isinstance(ell, bool):
            _fail(path, "prime", "ell must be an integer")
        has_r = "r" in prime_tbl
        has_c = "alpha_plus_c" in prime_tbl
        if has_r == has_c:
            _fail(path, "prime", "give exactly one of r or alpha_plus_c")
        raw = prime_tbl["r"] if has_r else prime_tbl["alpha_plus_c"]
        if not isinstance(raw, int) or isinstance(raw, bool):
            _fail(path, "prime", "residue must be an integer")
        # (ell, alpha + c) and (ell, alpha - r) name the same ideal when r = -c
        r = raw if has_r else -raw
        try:
            prime = validate_prime(field_spec, ell, r)
        except KcoverError as exc:
            raise SpecFileError(f"{path}: [prime] {exc}") from exc

    ramification = None
    ram_tbl = doc.get("ramification")
    if ram_tbl is not None:
        branches = ram_tbl.get("branch")
        if not isinstance(branches, list) or not all(
            isinstance(b, str) for b in branches
        ):
            _fail(path, "ramification", "branch must be a list of cycle-type strings")
        try:
            ramification = RamificationType.from_strings(n, branches)
        except KcoverError as exc:
            raise SpecFileError(f"{path}: [ramification] {exc}") from exc

    k = None
    task_tbl = doc.get("task")
    if task_tbl is not None and "k" in task_tbl:
        k = task_tbl["k"]
        if not isinstance(k, int) or isinstance(k, bool) or not 1 <= k <= n - 1:
            _fail(path, "task", f"k must be an integer in [1, {n - 1}], got {k!r}")

    return ParsedSpec(
        path=path,
        field_spec=field_spec,
        n=n,
        cover=cover,
        prime=prime,
        ramification=ramification,
        k=k,
    )
