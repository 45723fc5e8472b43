"""Arithmetic in F_lam and dense univariate polynomials over it.

Elements of F_lam are plain Python ints in [0, lam).  Polynomials are
coefficient lists in ascending order with no trailing zeros; [] is the zero
polynomial.  The public surface wraps these in :class:`PrimeField` and
:class:`FPoly`; the underscore functions below operate on raw lists and are
what the fiber scanner calls in its hot loop.

The modulus is capped below 2**62 so coefficient products stay cheap native
big-int work; every product is reduced exactly (Python ints never overflow).

Multiplication is schoolbook for small operands and Kronecker substitution
(pack coefficients into one integer, multiply once, unpack) for large ones;
reduction modulo a fixed polynomial uses a precomputed power-series inverse
(Barrett-style) once the degree makes long division quadratic pain.  Both
paths are bit-exact and cross-checked in the test suite.
"""

from __future__ import annotations

from .errors import InconsistencyError, PrimalityError

MODULUS_CAP = 1 << 62

NEG_INF = float("-inf")  # degree of the zero polynomial

# Witnesses proving Miller-Rabin deterministic for all n < 3.3e24 > 2**64.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_KRONECKER_CUTOFF = 24  # min operand length above which packing wins
_BARRETT_CUTOFF = 48  # modulus degree above which series-inverse reduction wins


def is_prime_u64(n: int) -> bool:
    """Deterministic primality test for n < 2**64."""
    if n < 2:
        return False
    for p in _MR_WITNESSES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class PrimeField:
    """The field F_lam for a prime modulus lam, 2 < lam < 2**62."""

    __slots__ = ("modulus",)

    def __init__(self, modulus: int):
        if not isinstance(modulus, int) or not 2 < modulus < MODULUS_CAP:
            raise PrimalityError(f"modulus must be a prime in (2, 2**62), got {modulus!r}")
        if not is_prime_u64(modulus):
            raise PrimalityError(f"modulus {modulus} is not prime")
        self.modulus = modulus

    def element(self, x: int) -> int:
        return x % self.modulus

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.modulus

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.modulus

    def mul(self, a: int, b: int) -> int:
        return a * b % self.modulus

    def inv(self, a: int) -> int:
        if a % self.modulus == 0:
            raise ZeroDivisionError(f"inverse of zero in F_{self.modulus}")
        return pow(a, -1, self.modulus)

    def pow(self, a: int, e: int) -> int:
        return pow(a, e, self.modulus)

    def poly(self, coeffs) -> "FPoly":
        """Build an FPoly from an iterable of ints (ascending order)."""
        return FPoly(self, coeffs)

    def x(self) -> "FPoly":
        return FPoly(self, (0, 1))

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.modulus == self.modulus

    def __hash__(self):
        return hash(("PrimeField", self.modulus))

    def __repr__(self):
        return f"PrimeField({self.modulus})"


class FPoly:
    """A polynomial over a PrimeField, stored dense and trimmed."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: PrimeField, coeffs=()):
        lam = field.modulus
        c = [int(v) % lam for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.field = field
        self.coeffs = tuple(c)

    @property
    def degree(self):
        """Degree as an int, or NEG_INF for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def monic(self) -> "FPoly":
        if not self.coeffs or self.coeffs[-1] == 1:
            return self
        return FPoly(self.field, _monic(list(self.coeffs), self.field.modulus))

    def derivative(self) -> "FPoly":
        lam = self.field.modulus
        return FPoly(self.field, [i * c % lam for i, c in enumerate(self.coeffs)][1:])

    def evaluate(self, x: int) -> int:
        lam = self.field.modulus
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % lam
        return acc

    def _check(self, other: "FPoly") -> "FPoly":
        if not isinstance(other, FPoly) or other.field != self.field:
            raise TypeError("operands live over different prime fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        return FPoly(self.field, _add(list(self.coeffs), list(other.coeffs), self.field.modulus))

    def __sub__(self, other):
        other = self._check(other)
        return FPoly(self.field, _sub(list(self.coeffs), list(other.coeffs), self.field.modulus))

    def __neg__(self):
        lam = self.field.modulus
        return FPoly(self.field, [(-c) % lam for c in self.coeffs])

    def __mul__(self, other):
        other = self._check(other)
        return FPoly(self.field, _mul(list(self.coeffs), list(other.coeffs), self.field.modulus))

    def __divmod__(self, other):
        other = self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q, r = _divmod(list(self.coeffs), list(other.coeffs), self.field.modulus)
        return FPoly(self.field, q), FPoly(self.field, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        return (
            isinstance(other, FPoly)
            and other.field == self.field
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash((self.field, self.coeffs))

    def __repr__(self):
        if not self.coeffs:
            return "FPoly(0)"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append("X" if c == 1 else f"{c}*X")
            else:
                terms.append(f"X^{i}" if c == 1 else f"{c}*X^{i}")
        return f"FPoly({' + '.join(terms)} over F_{self.field.modulus})"


# ---------------------------------------------------------------------------
# raw kernel: coefficient lists, ascending, trimmed


def _trim(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


def _add(a: list, b: list, lam: int) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, v in enumerate(b):
        out[i] = (out[i] + v) % lam
    return _trim(out)


def _sub(a: list, b: list, lam: int) -> list:
    out = list(a) + [0] * (len(b) - len(a))
    for i, v in enumerate(b):
        out[i] = (out[i] - v) % lam
    return _trim(out)


def _mul_schoolbook(a: list, b: list, lam: int) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _trim([v % lam for v in out])


def _slot_bytes(a_len: int, b_len: int, lam: int) -> int:
    # each convolution coefficient < min_len * (lam-1)^2; round to whole bytes
    bits = 2 * (lam - 1).bit_length() + min(a_len, b_len).bit_length() + 1
    return (bits + 7) // 8


def _pack(a: list, nb: int) -> int:
    return int.from_bytes(b"".join(c.to_bytes(nb, "little") for c in a), "little")


def _unpack(packed: int, n_slots: int, nb: int, lam: int) -> list:
    raw = packed.to_bytes(n_slots * nb, "little")
    out = [0] * n_slots
    for i in range(n_slots):
        out[i] = int.from_bytes(raw[i * nb : (i + 1) * nb], "little") % lam
    return _trim(out)


def _mul_kronecker(a: list, b: list, lam: int) -> list:
    nb = _slot_bytes(len(a), len(b), lam)
    prod = _pack(a, nb) * _pack(b, nb)
    return _unpack(prod, len(a) + len(b) - 1, nb, lam)


def _mul(a: list, b: list, lam: int) -> list:
    if not a or not b:
        return []
    if min(len(a), len(b)) < _KRONECKER_CUTOFF:
        return _mul_schoolbook(a, b, lam)
    return _mul_kronecker(a, b, lam)


def _sqr(a: list, lam: int) -> list:
    if not a:
        return []
    n = len(a)
    if n >= _KRONECKER_CUTOFF:
        nb = _slot_bytes(n, n, lam)
        pa = _pack(a, nb)
        return _unpack(pa * pa, 2 * n - 1, nb, lam)
    out = [0] * (2 * n - 1)
    for i, ai in enumerate(a):
        if ai:
            out[2 * i] += ai * ai
            for j in range(i + 1, n):
                out[i + j] += 2 * ai * a[j]
    return _trim([v % lam for v in out])


def _mul_trunc(a: list, b: list, prec: int, lam: int) -> list:
    """a*b mod X^prec."""
    a = a[:prec]
    b = b[:prec]
    if not a or not b:
        return []
    if min(len(a), len(b)) >= _KRONECKER_CUTOFF:
        return _mul_kronecker(a, b, lam)[:prec]
    out = [0] * min(prec, len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j in range(min(len(b), prec - i)):
                out[i + j] += ai * b[j]
    return _trim([v % lam for v in out])


def _monic(a: list, lam: int) -> list:
    if not a or a[-1] == 1:
        return list(a)
    inv = pow(a[-1], -1, lam)
    return [c * inv % lam for c in a]


def _divmod(a: list, b: list, lam: int):
    da, db = len(a) - 1, len(b) - 1
    if da < db:
        return [], list(a)
    rem = list(a)
    inv_lead = pow(b[-1], -1, lam) if b[-1] != 1 else 1
    q = [0] * (da - db + 1)
    for sh in range(da - db, -1, -1):
        c = rem[sh + db]
        if c:
            c = c * inv_lead % lam
            q[sh] = c
            for i in range(db):
                if b[i]:
                    rem[sh + i] = (rem[sh + i] - c * b[i]) % lam
            rem[sh + db] = 0
    del rem[db:]
    return q, _trim(rem)


def _rem(a: list, b: list, lam: int) -> list:
    return _divmod(a, b, lam)[1]


def _exact_div(a: list, b: list, lam: int) -> list:
    q, r = _divmod(a, b, lam)
    if r:
        raise InconsistencyError("expected exact polynomial division")
    return q


def _gcd(a: list, b: list, lam: int) -> list:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _rem(a, b, lam)
    return _monic(a, lam)


def _series_inv(f: list, prec: int, lam: int) -> list:
    """Inverse of the power series f (f[0] != 0) modulo X^prec, by Newton."""
    g = [pow(f[0], -1, lam)]
    k = 1
    while k < prec:
        k = min(2 * k, prec)
        t = _mul_trunc(f, g, k, lam)
        t = [(-c) % lam for c in t] + [0] * (1 - len(t))
        t[0] = (t[0] + 2) % lam
        g = _mul_trunc(g, t, k, lam)
    return g


class _QuotientCtx:
    """Reduction context for a fixed nonconstant modulus.

    Stores the monic form once; small degrees reduce by sparse elimination
    steps, large degrees by two truncated multiplications against a
    precomputed series inverse of the reversed modulus.
    """

    __slots__ = ("lam", "mod", "deg", "steps", "rinv")

    def __init__(self, f: list, lam: int):
        f = _monic(f, lam)
        self.lam = lam
        self.mod = f
        self.deg = len(f) - 1
        self.steps = tuple((j, c) for j, c in enumerate(f[:-1]) if c)
        if self.deg >= _BARRETT_CUTOFF:
            self.rinv = _series_inv(f[::-1], self.deg, lam)
        else:
            self.rinv = None

    def reduce(self, c: list) -> list:
        deg = self.deg
        if len(c) <= deg:
            return _trim(c)
        if self.rinv is not None:
            # series inverse only covers quotients from products of reduced
            # operands; anything longer goes through plain division
            if len(c) - deg > deg:
                return _rem(c, self.mod, self.lam)
            return self._reduce_big(c)
        lam = self.lam
        steps = self.steps
        for i in range(len(c) - 1, deg - 1, -1):
            coef = c[i]
            if coef:
                base = i - deg
                for j, fc in steps:
                    c[base + j] = (c[base + j] - coef * fc) % lam
        del c[deg:]
        return _trim(c)

    def _reduce_big(self, c: list) -> list:
        lam = self.lam
        deg = self.deg
        m = len(c) - deg  # quotient coefficient count
        q_rev = _mul_trunc(c[::-1], self.rinv, m, lam)
        q = q_rev[::-1]
        q = [0] * (m - len(q)) + q if len(q) < m else q
        s = _mul_trunc(q, self.mod, deg, lam)
        out = [(c[i] - (s[i] if i < len(s) else 0)) % lam for i in range(deg)]
        return _trim(out)

    def mulmod(self, a: list, b: list) -> list:
        return self.reduce(_mul(a, b, self.lam))

    def sqrmod(self, a: list) -> list:
        return self.reduce(_sqr(a, self.lam))

    def mul_by_x(self, a: list) -> list:
        a = [0] + a
        if len(a) - 1 == self.deg:
            coef = a.pop()
            if coef:
                lam = self.lam
                for j, fc in self.steps:
                    a[j] = (a[j] - coef * fc) % lam
            _trim(a)
        return a


def _x_pow_lam(ctx: _QuotientCtx) -> list:
    """X^lam reduced modulo the context's polynomial."""
    lam = ctx.lam
    if ctx.deg == 1:
        return _trim([(-ctx.mod[0]) % lam])
    h = [0, 1]
    for bit in bin(lam)[3:]:
        h = ctx.sqrmod(h)
        if bit == "1":
            h = ctx.mul_by_x(h)
    return h


def _pow_lam(h: list, ctx: _QuotientCtx) -> list:
    """h^lam modulo the context's polynomial (one Frobenius level)."""
    lam = ctx.lam
    r = list(h)
    for bit in bin(lam)[3:]:
        r = ctx.sqrmod(r)
        if bit == "1":
            r = ctx.mulmod(r, h)
    return r


def _compose_mod(h: list, u: list, ctx: _QuotientCtx) -> list:
    """h(u) modulo the context's polynomial, by Horner."""
    if not h:
        return []
    res = [h[-1]]
    for c in reversed(h[:-1]):
        res = ctx.mulmod(res, u)
        if c:
            if res:
                res[0] = (res[0] + c) % ctx.lam
                _trim(res)
            else:
                res = [c]
    return res


def _frobenius_step(h: list, h1: list, ctx: _QuotientCtx) -> list:
    """Map h = X^(lam^j) mod g to X^(lam^(j+1)) mod g.

    Raising to the lam-th power and substituting X^lam (= h1) agree exactly;
    the cheaper one is chosen from the operation counts: a power ladder costs
    about 1.5*bits(lam) products, Horner composition about deg(g) of them.
    """
    if ctx.deg <= (3 * ctx.lam.bit_length()) // 2:
        return _compose_mod(h, h1, ctx)
    return _pow_lam(h, ctx)


def _ddf(f: list, k: int, lam: int) -> list:
    """Distinct-degree counts (d_1..d_k) of a separable f, by the gcd cascade.

    Level i takes gcd(X^(lam^i) - X, g) where g is f with all factors of
    degree < i already divided out, so the gcd is exactly the product of the
    degree-i factors and contributes deg/i of them.
    """
    counts = [0] * k
    g = _monic(f, lam)
    ctx = _QuotientCtx(g, lam)
    h = _x_pow_lam(ctx)  # X^lam mod g
    h1 = h  # X^lam mod current g, kept alongside for composition steps
    for i in range(1, k + 1):
        dg = len(g) - 1
        if dg < i:
            break
        if i > 1:
            h = _frobenius_step(h, h1, ctx)
        hx = _sub(h, [0, 1], lam)
        p = _gcd(hx, g, lam) if hx else list(g)
        dp = len(p) - 1
        if dp > 0:
            if dp % i:
                raise InconsistencyError(
                    f"degree-{i} gcd has degree {dp}, not a multiple of {i}; "
                    "input polynomial was not separable"
                )
            counts[i - 1] = dp // i
            g = _exact_div(g, p, lam)
            if len(g) - 1 >= i + 1 and i < k:
                ctx = _QuotientCtx(g, lam)
                h = ctx.reduce(h)
                h1 = ctx.reduce(list(h1))
    return counts


# ---------------------------------------------------------------------------
# public operations


def poly_mul_mod(a: FPoly, b: FPoly, f: FPoly) -> FPoly:
    """a*b reduced modulo f; f must have degree >= 1."""
    if f.degree == NEG_INF or f.degree < 1:
        raise ValueError("modulus polynomial must have degree >= 1")
    lam = f.field.modulus
    prod = _mul(list(a.coeffs), list(b.coeffs), lam)
    return FPoly(f.field, _rem(prod, list(f.coeffs), lam))


def poly_gcd(a: FPoly, b: FPoly) -> FPoly:
    """Monic greatest common divisor; inputs must not both be zero."""
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    return FPoly(a.field, _gcd(list(a.coeffs), list(b.coeffs), a.field.modulus))


def frobenius_power(f: FPoly, i: int) -> FPoly:
    """X^(lam^i) mod f, as i successive lam-th powers inside F_lam[X]/(f).

    The enormous exponent lam^i is never formed; each level is one
    square-and-multiply ladder over the quotient ring.
    """
    if f.degree == NEG_INF or f.degree < 1:
        raise ValueError("modulus polynomial must have degree >= 1")
    if i < 1:
        raise ValueError("Frobenius power index must be >= 1")
    ctx = _QuotientCtx(list(f.coeffs), f.field.modulus)
    h = _x_pow_lam(ctx)
    for _ in range(i - 1):
        h = _pow_lam(h, ctx)
    return FPoly(f.field, h)


def distinct_degree_counts(f: FPoly, k: int):
    """(d_1, ..., d_k): the number of irreducible factors of f of each degree.

    f must be separable; a non-divisible gcd degree inside the cascade raises
    InconsistencyError, which is the symptom of an inseparable input.
    """
    if f.degree == NEG_INF or f.degree < 1:
        raise ValueError("polynomial must have degree >= 1")
    if k < 1:
        raise ValueError("k must be >= 1")
    return tuple(_ddf(list(f.coeffs), k, f.field.modulus))
