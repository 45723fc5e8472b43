"""Number-field containers and reduction modulo a degree-1 prime ideal.

The field K = Q(alpha) is described only by the monic integer minimal
polynomial of alpha; elements are rational coordinate vectors in the power
basis.  A degree-1 prime (ell, alpha - r) sends alpha to r, so reduction is
plain substitution with denominators inverted mod ell.  Nothing here does
ideal arithmetic: one validated prime of residue degree 1 is all the pipeline
needs, and the residue field is then just F_ell.

Irreducibility of the minimal polynomial and coprimality of the cover pair
over K are trusted as stated by the input file; what IS checked is everything
cheap that a bad prime would break: the defining congruence m(r) = 0 mod ell,
denominators prime to ell, no leading-coefficient collapse, and coprimality
after reduction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BadReduction, NotAPrimeIdeal, PrimalityError
from .modarith import FPoly, PrimeField, is_prime_u64, MODULUS_CAP, poly_gcd
from .permcomb import RamificationType


@dataclass(frozen=True)
class NumberFieldSpec:
    """K = Q(alpha) given by the monic integer min_poly of alpha, ascending
    coefficients; degree >= 1.  Irreducibility is the caller's claim."""

    min_poly: tuple

    def __post_init__(self):
        mp = tuple(int(c) for c in self.min_poly)
        if len(mp) < 2:
            raise ValueError("minimal polynomial must have degree >= 1")
        if mp[-1] != 1:
            raise ValueError("minimal polynomial must be monic")
        object.__setattr__(self, "min_poly", mp)

    @property
    def degree(self) -> int:
        return len(self.min_poly) - 1

    def element(self, coords) -> "NFElement":
        return NFElement(self, tuple(Fraction(c) for c in coords))

    def rational(self, value) -> "NFElement":
        return self.element((value,) + (0,) * (self.degree - 1))

    def alpha(self) -> "NFElement":
        if self.degree == 1:
            # alpha = -m[0] is itself rational
            return self.rational(-self.min_poly[0])
        return self.element((0, 1) + (0,) * (self.degree - 2))


@dataclass(frozen=True)
class NFElement:
    """Element of K as d_K rational coordinates over 1, alpha, ..., alpha^(d-1)."""

    field_spec: NumberFieldSpec
    coords: tuple

    def __post_init__(self):
        d = self.field_spec.degree
        cs = tuple(Fraction(c) for c in self.coords)
        if len(cs) != d:
            raise ValueError(f"expected {d} coordinates, got {len(cs)}")
        object.__setattr__(self, "coords", cs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])


@dataclass(frozen=True)
class PrimeIdealSpec:
    """(ell, alpha - r): a residue-degree-1 prime above ell; lambda = ell.

    Build through validate_prime, which proves the congruence m(r) = 0 mod ell
    actually holds.
    """

    ell: int
    r: int


def validate_prime(field_spec: NumberFieldSpec, ell: int, r: int) -> PrimeIdealSpec:
    """Check ell prime and m(r) = 0 mod ell; only then hand out the spec."""
    if not isinstance(ell, int) or not 2 < ell < MODULUS_CAP:
        raise PrimalityError(f"need a prime in (2, 2**62), got {ell!r}")
    if not is_prime_u64(ell):
        raise PrimalityError(f"{ell} is not prime")
    r %= ell
    acc = 0
    for c in reversed(field_spec.min_poly):
        acc = (acc * r + c) % ell
    if acc:
        raise NotAPrimeIdeal(
            f"m({r}) = {acc} != 0 mod {ell}; (ell, alpha - r) is not a prime ideal"
        )
    return PrimeIdealSpec(ell=ell, r=r)


def reduce_element(e: NFElement, spec: PrimeIdealSpec) -> int:
    """Sum of coords_i * r^i mod ell, denominators inverted mod ell."""
    ell = spec.ell
    acc = 0
    rpow = 1
    for c in e.coords:
        den = c.denominator % ell
        if den == 0:
            raise BadReduction(f"coordinate {c} has denominator divisible by {ell}")
        acc = (acc + c.numerator * pow(den, -1, ell) * rpow) % ell
        rpow = rpow * spec.r % ell
    return acc


@dataclass(frozen=True)
class CoverSpec:
    """The map x -> p(x)/q(x) with K-coefficients, degree n = max(deg p, deg q),
    plus the (optional) declared ramification type used for genus work."""

    field_spec: NumberFieldSpec
    p: tuple  # NFElement coefficients, ascending, trimmed
    q: tuple
    ramification: RamificationType | None = None

    def __post_init__(self):
        for name, coeffs in (("p", self.p), ("q", self.q)):
            if not coeffs:
                raise ValueError(f"{name} must be nonzero")
            for c in coeffs:
                if not isinstance(c, NFElement) or c.field_spec != self.field_spec:
                    raise ValueError(f"{name} coefficients must live in the cover's field")
            if all(x == 0 for x in coeffs[-1].coords):
                raise ValueError(f"{name} has a zero leading coefficient")
        if self.n < 2:
            raise ValueError("cover degree must be >= 2")
        if self.ramification is not None and self.ramification.n != self.n:
            raise ValueError(
                f"ramification degree {self.ramification.n} != cover degree {self.n}"
            )

    @property
    def n(self) -> int:
        return max(len(self.p), len(self.q)) - 1


def reduce_cover(cover: CoverSpec, spec: PrimeIdealSpec):
    """Reduce both cover polynomials coefficient-wise; returns (p, q) as FPoly.

    The prime is rejected (BadReduction) if either polynomial drops degree or
    the reductions share a factor, since both break the fiber-counting
    correspondence downstream.
    """
    F = PrimeField(spec.ell)
    out = []
    for name, coeffs in (("p", cover.p), ("q", cover.q)):
        red = FPoly(F, [reduce_element(c, spec) for c in coeffs])
        if red.degree != len(coeffs) - 1:
            raise BadReduction(
                f"leading coefficient of {name} vanishes mod {spec.ell}; "
                "choose a different prime"
            )
        out.append(red)
    p_red, q_red = out
    g = poly_gcd(p_red, q_red)
    if g.degree != 0:
        raise BadReduction(
            f"reductions of p and q share the factor {g}; "
            "either the cover pair is not coprime or the prime is bad"
        )
    return p_red, q_red
