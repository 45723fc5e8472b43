"""Cycle-type combinatorics for the induced action on k-element subsets.

A permutation is only ever known here by its cycle type.  That is enough: the
number of invariant k-subsets is a generating-function coefficient, the number
of cycles of the induced permutation on k-subsets falls out of orbit counting
over the cyclic group the permutation generates, and from those two the
Riemann-Hurwitz genus of the induced cover follows.  No permutation on
C(n,k) points is ever materialized.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd, lcm

from .errors import CycleTypeError, InconsistencyError

_PART_RE = re.compile(r"^(\d+)(?:\^(\d+))?$")


@dataclass(frozen=True)
class CycleType:
    """Multiset of cycle lengths, stored as (length, multiplicity) pairs
    sorted by decreasing length."""

    parts: tuple  # ((length, multiplicity), ...)

    def __post_init__(self):
        seen = set()
        for length, mult in self.parts:
            if length < 1 or mult < 1:
                raise CycleTypeError(f"bad part {length}^{mult}")
            if length in seen:
                raise CycleTypeError(f"repeated cycle length {length}")
            seen.add(length)
        object.__setattr__(
            self, "parts", tuple(sorted(self.parts, key=lambda p: -p[0]))
        )

    @property
    def n(self) -> int:
        return sum(length * mult for length, mult in self.parts)

    @property
    def order(self) -> int:
        """lcm of the cycle lengths: the order of any permutation of this type."""
        return lcm(*(length for length, _ in self.parts)) if self.parts else 1

    @property
    def cycle_count(self) -> int:
        return sum(mult for _, mult in self.parts)

    def __str__(self):
        return ".".join(
            f"{length}^{mult}" if mult > 1 else str(length)
            for length, mult in self.parts
        )


def parse_cycle_type(text: str, n: int) -> CycleType:
    """Parse `part ("." part)*` with part = length["^"multiplicity],
    e.g. "2^132.1^12"; the total must equal n."""
    parts = []
    for chunk in text.strip().split("."):
        m = _PART_RE.match(chunk.strip())
        if not m:
            raise CycleTypeError(f"cannot parse cycle-type part {chunk!r} in {text!r}")
        length = int(m.group(1))
        mult = int(m.group(2)) if m.group(2) else 1
        parts.append((length, mult))
    ct = CycleType(tuple(parts))
    if ct.n != n:
        raise CycleTypeError(f"cycle type {text!r} has degree {ct.n}, expected {n}")
    return ct


def _pi_from_pairs(pairs, k: int) -> int:
    """x^k coefficient of prod (1 + x^length)^mult over (length, mult) pairs
    with distinct lengths; lengths above k cannot contribute and are skipped."""
    dp = [0] * (k + 1)
    dp[0] = 1
    for length, mult in pairs:
        if length > k:
            continue
        new = [0] * (k + 1)
        for base in range(k + 1):
            if dp[base]:
                v = dp[base]
                for j in range(0, mult + 1):
                    idx = base + j * length
                    if idx > k:
                        break
                    new[idx] += v * comb(mult, j)
        dp = new
    return dp[k]


def pi_k(ct: CycleType, k: int) -> int:
    """Number of k-subsets invariant under a permutation of this type.

    An invariant subset is a union of whole cycles, so the count is a
    generating-function coefficient over the cycle lengths.
    """
    n = ct.n
    if not 0 <= k <= n:
        raise ValueError(f"k={k} out of range [0, {n}]")
    return _pi_from_pairs(ct.parts, k)


def cycle_type_power(ct: CycleType, j: int) -> CycleType:
    """Cycle type of s^j: a length-c cycle splits into gcd(c,j) cycles of
    length c/gcd(c,j)."""
    if j < 0:
        raise ValueError("power must be >= 0")
    if j == 0:
        return CycleType(((1, ct.n),)) if ct.n else CycleType(())
    acc = {}
    for length, mult in ct.parts:
        g = gcd(length, j)
        acc[length // g] = acc.get(length // g, 0) + g * mult
    return CycleType(tuple(acc.items()))


def induced_cycle_count(ct: CycleType, k: int) -> int:
    """Cycles of the permutation induced on k-subsets, 1 <= k <= n-1.

    Orbits of the cyclic group <s> on k-subsets: average of pi_k over all
    powers of s.  The average is an integer when pi_k is correct; a remainder
    means the combinatorics above broke.
    """
    n = ct.n
    if not 1 <= k <= n - 1:
        raise ValueError(f"k={k} out of range [1, {n - 1}]")
    order = ct.order
    total = sum(pi_k(cycle_type_power(ct, j), k) for j in range(order))
    q, r = divmod(total, order)
    if r:
        raise InconsistencyError(
            f"orbit sum {total} not divisible by group order {order}"
        )
    return q


def induced_index(ct: CycleType, k: int) -> int:
    """C(n,k) minus the induced cycle count."""
    return comb(ct.n, k) - induced_cycle_count(ct, k)


def index_upper_bound(ct: CycleType, k: int) -> Fraction:
    """(C(n,k) - pi_k) * (1 - 1/order), an exact rational upper bound on the
    induced index; coincides with it when the order is prime."""
    n = ct.n
    if not 1 <= k <= n - 1:
        raise ValueError(f"k={k} out of range [1, {n - 1}]")
    order = ct.order
    return Fraction(comb(n, k) - pi_k(ct, k)) * Fraction(order - 1, order)


@dataclass(frozen=True)
class RamificationType:
    """Degree n plus the ordered cycle types over the m >= 2 branch points."""

    n: int
    branch_types: tuple

    def __post_init__(self):
        if len(self.branch_types) < 2:
            raise CycleTypeError("need at least two branch points")
        for ct in self.branch_types:
            if ct.n != self.n:
                raise CycleTypeError(
                    f"branch type {ct} has degree {ct.n}, expected {self.n}"
                )
        # the degree-n cover itself (k=1) should close up to a genus-0 base;
        # an inconsistent type is suspicious but not necessarily fatal
        ind_sum = sum(self.n - ct.cycle_count for ct in self.branch_types)
        if ind_sum % 2 or 1 - self.n + ind_sum // 2 < 0:
            warnings.warn(
                f"ramification type is not consistent with a genus-0 degree-{self.n} "
                f"cover (total index {ind_sum})",
                stacklevel=2,
            )

    @property
    def m(self) -> int:
        return len(self.branch_types)

    @classmethod
    def from_strings(cls, n: int, texts) -> "RamificationType":
        return cls(n, tuple(parse_cycle_type(t, n) for t in texts))


@dataclass(frozen=True)
class GenusReport:
    """Genus of the induced cover plus the per-branch indices that built it."""

    g: object  # int in exact mode, Fraction in bound mode
    per_branch_indices: tuple
    contradiction_flag: bool
    mode: str


def genus_Ck(ram: RamificationType, k: int, mode: str = "exact") -> GenusReport:
    """Riemann-Hurwitz genus of the induced cover on k-subsets.

    mode="exact" uses the true indices and demands an even total; the result
    is an integer, and a negative one is flagged: no irreducible curve has
    negative genus, so the transitivity assumption that produced it is false.
    mode="bound" substitutes the rational per-branch upper bounds, giving an
    upper estimate of g (what a Hasse-Weil application needs).
    """
    if mode not in ("exact", "bound"):
        raise ValueError(f"unknown mode {mode!r}")
    n = ram.n
    if not 1 <= k <= n - 1:
        raise ValueError(f"k={k} out of range [1, {n - 1}]")
    deg = comb(n, k)
    if mode == "exact":
        indices = tuple(induced_index(ct, k) for ct in ram.branch_types)
        total = sum(indices)
        if total % 2:
            raise InconsistencyError(f"total induced index {total} is odd")
        g = 1 - deg + total // 2
    else:
        indices = tuple(index_upper_bound(ct, k) for ct in ram.branch_types)
        g = Fraction(1 - deg) + sum(indices) / 2
    return GenusReport(
        g=g,
        per_branch_indices=indices,
        contradiction_flag=g < 0,
        mode=mode,
    )
