"""Verdict assembly: compare the scanned lower bound against the curve bound.

The logic chain: a k-transitive monodromy group forces the induced k-subset
cover to be an irreducible curve of the genus computed from the ramification
type; an irreducible curve of genus g has at most lam + 1 + 2g*sqrt(lam)
rational points; the scanner produced a lower bound on those points.  A lower
bound exceeding the upper bound, or a negative computed genus, refutes the
transitivity hypothesis.  Anything else proves nothing, and the certificate
says so explicitly.

All comparisons are exact integer arithmetic.  sqrt(lam) is irrational in
every interesting case, so the bound is materialized as
B = lam + 1 + isqrt(4 g^2 lam) and the violation test L > B is checked to
agree with the square-free form L > lam+1 and (L-lam-1)^2 > 4 g^2 lam.

A certificate is a plain JSON document with a fixed key order, so two runs
over the same inputs produce byte-identical files regardless of worker
count or resume history.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, isqrt

from .errors import InconsistencyError, PrimalityError
from .frobcount import ScanResult
from .modarith import is_prime_u64
from .permcomb import GenusReport

VERDICT_NOT_K_TRANSITIVE = "NotKTransitive"
VERDICT_INCONCLUSIVE = "Inconclusive"
VERDICT_NEGATIVE_GENUS = "NegativeGenusContradiction"

DEFAULT_ADVISORY_D = 2
DEFAULT_MARGIN = 2


def hasse_weil_upper(lam: int, g: int) -> int:
    """B = lam + 1 + floor(2g*sqrt(lam)): no irreducible genus-g curve over
    F_lam has more rational points than this."""
    if g < 0:
        raise ValueError("genus must be nonnegative")
    if not is_prime_u64(lam):
        raise PrimalityError(f"{lam} is not prime")
    return lam + 1 + isqrt(4 * g * g * lam)


def hw_violates(lam: int, g: int, count: int) -> bool:
    """Exact squared-form test: does count exceed lam + 1 + 2g*sqrt(lam)?"""
    if g < 0:
        raise ValueError("genus must be nonnegative")
    excess = count - lam - 1
    return excess > 0 and excess * excess > 4 * g * g * lam


def expected_sum(d: int, lam: int) -> int:
    """d*lam: the equidistribution prediction for the scan total when the
    group action has d orbits on k-subsets."""
    if d < 1:
        raise ValueError("orbit count must be >= 1")
    return d * lam


def prime_size_threshold(g: int, d: int) -> Fraction:
    """4g^2/(d-1)^2: primes at or below this cannot separate d >= 2 orbits
    from transitivity; lam should exceed it by a healthy margin."""
    if d < 2:
        raise ValueError("threshold is defined for d >= 2")
    if g < 0:
        raise ValueError("genus must be nonnegative")
    return Fraction(4 * g * g, (d - 1) ** 2)


ASSUMPTION_GOOD_REDUCTION = (
    "good reduction: the monodromy group of the cover reduced at the chosen "
    "prime equals the monodromy group over the number field (supplied by the "
    "user, not verified here)"
)
ASSUMPTION_FULL_CONSTANT_FIELD = (
    "equality of arithmetic and geometric monodromy at this prime, so the "
    "induced k-subset cover is geometrically irreducible with full constant "
    "field (required for the point-count bound to apply)"
)


def _assumption_hypothesis(k: int) -> str:
    return (
        f"{k}-transitivity of the monodromy group is the hypothesis under "
        "refutation; the genus and the point-count bound are computed under it"
    )


def _rat_to_json(v):
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return int(v)
        return f"{v.numerator}/{v.denominator}"
    return int(v)


def _rat_from_json(v):
    if isinstance(v, str):
        num, den = v.split("/")
        return Fraction(int(num), int(den))
    return int(v)


@dataclass(frozen=True)
class Certificate:
    """Everything needed to audit a verdict, in serialization-ready form.

    The fields mirror the JSON document one-to-one; `genus` and `advisory`
    are nested dicts, rationals encoded as "numerator/denominator" strings.
    """

    problem: dict
    genus: dict
    hw_bound: int | None
    count_lower: int | None
    verdict: str
    assumptions: tuple
    advisory: dict
    skipped_fibers: tuple

    def to_json_dict(self) -> dict:
        return {
            "problem": self.problem,
            "genus": self.genus,
            "hw_bound": self.hw_bound,
            "count_lower": self.count_lower,
            "verdict": self.verdict,
            "assumptions": list(self.assumptions),
            "advisory": self.advisory,
            "skipped_fibers": list(self.skipped_fibers),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2) + "\n"


def certificate_from_json(text: str) -> Certificate:
    doc = json.loads(text)
    for key in ("problem", "genus", "verdict", "assumptions", "advisory"):
        if key not in doc:
            raise ValueError(f"certificate is missing the {key} field")
    if not doc["assumptions"]:
        raise ValueError("a certificate with no recorded assumptions is invalid")
    return Certificate(
        problem=doc["problem"],
        genus=doc["genus"],
        hw_bound=doc.get("hw_bound"),
        count_lower=doc.get("count_lower"),
        verdict=doc["verdict"],
        assumptions=tuple(doc["assumptions"]),
        advisory=doc["advisory"],
        skipped_fibers=tuple(doc.get("skipped_fibers") or ()),
    )


def build_certificate(
    genus: GenusReport,
    scan: ScanResult | None,
    lam: int,
    k: int,
    meta: dict | None = None,
    advisory_d: int = DEFAULT_ADVISORY_D,
    margin: int = DEFAULT_MARGIN,
    clamp_nonnegative_genus: bool = False,
    declared_branch_points: int | None = None,
) -> Certificate:
    """Assemble the verdict object.

    scan may be None only when the genus alone already refutes (negative
    genus): that verdict needs no point count.  Otherwise the scan must cover
    all of [0, lam) unless it stopped on an early-exit trigger.

    clamp_nonnegative_genus replaces a negative genus by 0 for the bound
    computation (recorded in the certificate); the bound then degenerates to
    lam + 1, which is still a valid upper bound for an irreducible rational
    curve, so a count beating it keeps its force.
    """
    if not is_prime_u64(lam):
        raise PrimalityError(f"{lam} is not prime")
    g_raw = genus.g
    g_int = g_raw if isinstance(g_raw, int) else ceil(g_raw)
    clamped = False
    if g_int < 0 and clamp_nonnegative_genus:
        g_for_bound = 0
        clamped = True
    elif g_int < 0:
        g_for_bound = None
    else:
        g_for_bound = g_int

    if scan is None:
        if not genus.contradiction_flag:
            raise ValueError("a scan is required unless the genus already refutes")
        total = None
    else:
        if scan.ranges != ((0, lam),) and not scan.early_exit_triggered:
            raise ValueError(
                f"scan covers {scan.ranges}, not all of [0, {lam}), "
                "and no early exit was triggered"
            )
        total = scan.total

    hw = None
    verdict = VERDICT_INCONCLUSIVE
    if genus.contradiction_flag and not clamped:
        verdict = VERDICT_NEGATIVE_GENUS
        if g_for_bound is not None:
            hw = hasse_weil_upper(lam, g_for_bound)
    else:
        hw = hasse_weil_upper(lam, g_for_bound)
        if total is not None:
            violates = total > hw
            if violates != hw_violates(lam, g_for_bound, total):
                raise InconsistencyError(
                    "floor-form and squared-form bound tests disagree"
                )
            if violates:
                verdict = VERDICT_NOT_K_TRANSITIVE

    notes = []
    if verdict == VERDICT_NEGATIVE_GENUS:
        notes.append(
            "the computed genus is negative; no irreducible curve exists with "
            "these invariants, so the transitivity hypothesis fails with no "
            "counting needed"
        )
    if clamped:
        notes.append(
            "the computed genus was negative (itself already a refutation) and "
            "was clamped to 0 for the bound computation as requested"
        )
    if verdict == VERDICT_INCONCLUSIVE and total is not None:
        notes.append(
            "the counted lower bound does not exceed the curve bound; this is "
            "consistent with k-transitivity and proves nothing either way"
        )
    if scan is not None and scan.early_exit_triggered:
        notes.append(
            "the scan stopped early once the running total passed the bound; "
            "the reported count is a partial-coverage lower bound"
        )
    if scan is not None and scan.skipped_points:
        notes.append(
            f"{len(scan.skipped_points)} fiber(s) skipped on degree drop >= 2; "
            "their omission only lowers the count"
        )

    prime_size = None
    if g_for_bound is not None and g_for_bound > 0 and advisory_d >= 2:
        threshold = prime_size_threshold(g_for_bound, advisory_d)
        ratio = Fraction(lam) / threshold if threshold else None
        sufficient = ratio is not None and ratio >= margin
        prime_size = {
            "threshold": _rat_to_json(threshold),
            "ratio": _rat_to_json(ratio) if ratio is not None else None,
            "margin": margin,
            "sufficient": sufficient,
        }
        if not sufficient:
            notes.append(
                f"lam is less than {margin}x the discrimination threshold "
                "4g^2/(d-1)^2; a non-violating count may reflect the prime "
                "being too small rather than actual transitivity"
            )

    ram_count = len(scan.ramified_points) if scan is not None else 0
    census_ok = None
    if scan is not None and declared_branch_points is not None:
        census_ok = len(set(scan.ramified_points)) <= declared_branch_points
        if not census_ok:
            notes.append(
                f"{len(set(scan.ramified_points))} ramified fibers exceed the "
                f"{declared_branch_points} declared branch points; the "
                "declared ramification type is suspect"
            )

    advisory = {
        "expected_total_if_transitive": expected_sum(1, lam),
        "expected_total_if_d_orbits": {
            "d": advisory_d,
            "value": expected_sum(advisory_d, lam),
        },
        "prime_size": prime_size,
        "ramified_fiber_count": ram_count,
        "declared_branch_points": declared_branch_points,
        "ramified_census_ok": census_ok,
        "early_exit": bool(scan.early_exit_triggered) if scan is not None else False,
        "skipped_fiber_count": len(scan.skipped_points) if scan is not None else 0,
        "notes": notes,
    }

    genus_doc = {
        "mode": genus.mode,
        "g": _rat_to_json(g_raw),
        "g_for_bound": g_for_bound,
        "clamped_to_zero": clamped,
        "contradiction_flag": bool(genus.contradiction_flag),
        "per_branch_indices": [_rat_to_json(v) for v in genus.per_branch_indices],
    }

    problem = {"lam": lam, "k": k}
    if meta:
        problem.update(meta)

    return Certificate(
        problem=problem,
        genus=genus_doc,
        hw_bound=hw,
        count_lower=total,
        verdict=verdict,
        assumptions=(
            ASSUMPTION_GOOD_REDUCTION,
            ASSUMPTION_FULL_CONSTANT_FIELD,
            _assumption_hypothesis(k),
        ),
        advisory=advisory,
        skipped_fibers=tuple(scan.skipped_points) if scan is not None else (),
    )
