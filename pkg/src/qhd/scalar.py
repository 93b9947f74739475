"""Exact arithmetic in Q and in the cyclotomic fields Q(zeta_N).

A CycScalar is a residue mod the N-th cyclotomic polynomial, stored as a
coefficient vector of length phi(N) over Q.  Working mod Phi_N (and not mod
x^N - 1, which has zero divisors) makes equality of sums of roots of unity
an honest field equality, which every identity check below relies on.

Coefficients are kept as plain ints whenever possible and only become
Fractions where division forces them to; the two mix freely.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache

Rational = Fraction


class ScalarError(ValueError):
    pass


class OrderMismatchError(ScalarError):
    """Raised when scalars from different cyclotomic orders are mixed."""


class ZeroDivisionScalarError(ScalarError):
    pass


def cyclotomic_polynomial(n: int) -> list[int]:
    """Coefficients of Phi_n, ascending degree, monic over Z."""
    if n < 1:
        raise ScalarError(f"cyclotomic order must be >= 1, got {n}")
    return list(_cyclotomic(n))


@lru_cache(maxsize=None)
def _cyclotomic(n: int) -> tuple[int, ...]:
    # Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d, by exact division over Z.
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_div_exact(poly, _cyclotomic(d))
    return tuple(poly)


def _poly_div_exact(num: list[int], den) -> list[int]:
    """Divide num by monic den, requiring zero remainder."""
    num = list(num)
    dd = len(den) - 1
    q = [0] * (len(num) - dd)
    for i in range(len(q) - 1, -1, -1):
        c = num[i + dd]
        q[i] = c
        if c:
            for j, dj in enumerate(den):
                num[i + j] -= c * dj
    if any(num[:dd]):
        raise ScalarError("non-exact polynomial division")
    return q


@lru_cache(maxsize=None)
def _field_data(n: int):
    """(phi, reduction rows) where rows[j] reduces x^(phi+j) mod Phi_n."""
    poly = _cyclotomic(n)
    phi = len(poly) - 1
    # x^phi = -(lower part of Phi_n); higher powers follow by shifting.
    rows = []
    cur = [-c for c in poly[:phi]]
    rows.append(tuple(cur))
    for _ in range(phi - 2):
        top = cur[phi - 1]
        cur = [0] + cur[: phi - 1]
        if top:
            cur = [a + top * b for a, b in zip(cur, rows[0])]
        rows.append(tuple(cur))
    return phi, tuple(rows)


class CycScalar:
    """Element of Q(zeta_N), N fixed per instance.

    Immutable; all operations are pure and exact.  Mixing different orders
    raises OrderMismatchError rather than coercing.
    """

    __slots__ = ("order", "coeffs", "_hash")

    def __init__(self, order: int, coeffs):
        phi, _ = _field_data(order)
        coeffs = tuple(coeffs)
        if len(coeffs) != phi:
            raise ScalarError(
                f"need {phi} coefficients for order {order}, got {len(coeffs)}"
            )
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("CycScalar is immutable")

    # -- construction helpers ------------------------------------------------

    @staticmethod
    def from_rational(order: int, value) -> "CycScalar":
        phi, _ = _field_data(order)
        if phi == 0:  # unreachable; phi(n) >= 1
            raise ScalarError("bad field")
        c = [0] * phi
        c[0] = value if isinstance(value, int) else Fraction(value)
        return CycScalar(order, c)

    @staticmethod
    def zero(order: int) -> "CycScalar":
        return _cached_const(order, 0)

    @staticmethod
    def one(order: int) -> "CycScalar":
        return _cached_const(order, 1)

    # -- predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and not any(self.coeffs[1:])

    # -- ring operations -----------------------------------------------------

    def _check(self, other: "CycScalar"):
        if self.order != other.order:
            raise OrderMismatchError(
                f"cannot mix cyclotomic orders {self.order} and {other.order}"
            )

    def __add__(self, other: "CycScalar") -> "CycScalar":
        self._check(other)
        return CycScalar(self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "CycScalar") -> "CycScalar":
        self._check(other)
        return CycScalar(self.order, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "CycScalar":
        return CycScalar(self.order, tuple(-a for a in self.coeffs))

    def __mul__(self, other: "CycScalar") -> "CycScalar":
        self._check(other)
        a, b = self.coeffs, other.coeffs
        phi, rows = _field_data(self.order)
        if phi == 1:
            return CycScalar(self.order, (a[0] * b[0],))
        conv = [0] * (2 * phi - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        conv[i + j] += ai * bj
        out = conv[:phi]
        for j in range(phi - 1):
            t = conv[phi + j]
            if t:
                row = rows[j]
                for i in range(phi):
                    if row[i]:
                        out[i] += t * row[i]
        return CycScalar(self.order, out)

    def inverse(self) -> "CycScalar":
        """Multiplicative inverse via the extended Euclidean algorithm."""
        if self.is_zero():
            raise ZeroDivisionScalarError("inverse of zero")
        modulus = [Fraction(c) for c in _cyclotomic(self.order)]
        a = [Fraction(c) for c in self.coeffs]
        # invariants: r0 = s0*a (mod Phi), r1 = s1*a (mod Phi)
        r0, s0 = modulus, [Fraction(0)]
        r1, s1 = a, [Fraction(1)]
        while True:
            r1 = _trim(r1)
            if len(r1) == 1:
                inv = 1 / r1[0]
                phi = len(self.coeffs)
                _, rem = _poly_divmod([c * inv for c in s1], modulus)
                rem = list(rem) + [Fraction(0)] * phi
                return CycScalar(self.order, tuple(rem[:phi]))
            q, r = _poly_divmod(r0, r1)
            s = _poly_sub(s0, _poly_mul(q, s1))
            r0, s0, r1, s1 = r1, s1, r, s

    def __truediv__(self, other: "CycScalar") -> "CycScalar":
        return self * other.inverse()

    # -- comparisons / hashing -----------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, CycScalar):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.order, self.coeffs))
            object.__setattr__(self, "_hash", h)
        return h

    # -- conversions ---------------------------------------------------------

    def to_complex(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.order)
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * z + complex(c)
        return acc

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                mag = "" if abs(c) == 1 else f"{abs(c)}*"
                var = "z" if i == 1 else f"z^{i}"
                sign = "-" if c < 0 else ("+" if terms else "")
                terms.append(f"{sign}{mag}{var}" if not terms else f" {sign} {mag}{var}")
        return "".join(terms) if terms else "0"

    def __repr__(self) -> str:
        return f"CycScalar({self.order}, {self.coeffs!r})"


@lru_cache(maxsize=None)
def _cached_const(order: int, value: int) -> CycScalar:
    return CycScalar.from_rational(order, value)


@lru_cache(maxsize=None)
def root_of_unity(order: int, k: int) -> CycScalar:
    """zeta_order^k as a CycScalar, reduced mod Phi_order."""
    phi, rows = _field_data(order)
    k %= order
    if k < phi:
        c = [0] * phi
        c[k] = 1
        return CycScalar(order, c)
    # shift-and-reduce x^k mod Phi_order, one power at a time
    cur = [0] * phi
    cur[phi - 1] = 1
    for _ in range(k - phi + 1):
        top = cur[phi - 1]
        cur = [0] + cur[: phi - 1]
        if top:
            row = rows[0]
            cur = [a + top * b for a, b in zip(cur, row)]
    return CycScalar(order, cur)


def scalar_arith(a: CycScalar, b: CycScalar, op: str) -> CycScalar:
    """Named-op wrapper around +, -, *; mixing orders raises."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ScalarError(f"unknown op {op!r}")


def scalar_invert(a: CycScalar) -> CycScalar:
    return a.inverse()


# -- small Fraction-coefficient polynomial helpers (used by inverse only) ----


def _trim(p):
    i = len(p)
    while i > 1 and p[i - 1] == 0:
        i -= 1
    return p[:i]


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _poly_divmod(num, den):
    num = list(num)
    den = _trim(list(den))
    dd = len(den) - 1
    lead = den[dd]
    if len(num) <= dd:
        return [Fraction(0)], num
    q = [Fraction(0)] * (len(num) - dd)
    for i in range(len(q) - 1, -1, -1):
        c = num[i + dd] / lead
        q[i] = c
        if c:
            for j, dj in enumerate(den):
                num[i + j] -= c * dj
    return q, _trim(num[:dd]) if dd else [Fraction(0)]
