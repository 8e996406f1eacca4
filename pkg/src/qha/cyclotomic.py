"""Exact arithmetic in cyclotomic fields.

A `CycloNumber` is a rational linear combination of powers of a primitive
M-th root of unity zeta_M, stored sparsely as a map {exponent: Fraction}
with exponents reduced mod M.  M is called the conductor of the
representation.  Numbers at different conductors interoperate: binary
operations embed both sides into the lcm conductor via
zeta_M = zeta_{kM}^k.

Representations are normalized on construction:

- exponents reduced mod M, like terms combined, zero coefficients dropped;
- the conductor is lowered whenever every exponent shares a common factor
  with M (so zeta_9**3 is stored as zeta_3, and rationals always have
  conductor 1).

Zero testing is exact.  Sparse fast paths cover 0-, 1- and 2-term
representations (a 2-term value c1*z^a + c2*z^b vanishes iff M is even,
a - b = M/2 mod M and c1 == c2); the general case reduces the
representing polynomial modulo the cyclotomic polynomial Phi_M, which is
the minimal polynomial of zeta_M, so the reduction is zero iff the value
is zero.  Phi_M is computed once per conductor by exact division of
x^M - 1 by all Phi_d with d | M, d < M, and cached.

The fast paths matter: monomial values (single term, the common case for
character and cocycle values) never trigger a Phi_M computation, so huge
conductors cost nothing as long as values stay monomial.
"""

from __future__ import annotations

from fractions import Fraction as Q
from functools import lru_cache
from math import gcd, lcm
from typing import Iterable, Mapping, Union

Scalar = Union[int, Q, "CycloNumber"]

# ---------------------------------------------------------------------------
# dense polynomial helpers over Q (coefficient lists, index = degree)
# ---------------------------------------------------------------------------


def _poly_trim(p: list[Q]) -> list[Q]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(num: list[Q], den: list[Q]) -> tuple[list[Q], list[Q]]:
    num = list(num)
    q = [Q(0)] * max(0, len(num) - len(den) + 1)
    dlead = den[-1]
    for i in range(len(num) - len(den), -1, -1):
        c = num[i + len(den) - 1] / dlead
        if c != 0:
            q[i] = c
            for j, dj in enumerate(den):
                num[i + j] -= c * dj
    return _poly_trim(q), _poly_trim(num)


def _poly_mul(a: list[Q], b: list[Q]) -> list[Q]:
    out = [Q(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return _poly_trim(out)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[Q, ...]:
    """Coefficients of Phi_m, lowest degree first."""
    if m < 1:
        raise ValueError("conductor must be positive")
    if m == 1:
        return (Q(-1), Q(1))
    # x^m - 1 = prod_{d | m} Phi_d
    num: list[Q] = [Q(-1)] + [Q(0)] * (m - 1) + [Q(1)]
    for d in range(1, m):
        if m % d == 0:
            num, rem = _poly_divmod(num, list(cyclotomic_polynomial(d)))
            assert not rem, f"x^{m}-1 not divisible by Phi_{d}"
    return tuple(num)


def _poly_xgcd(a: list[Q], b: list[Q]) -> tuple[list[Q], list[Q], list[Q]]:
    """Extended Euclid: returns (g, u, v) with u*a + v*b = g."""
    r0, r1 = list(a), list(b)
    s0, s1 = [Q(1)], []
    t0, t1 = [], [Q(1)]
    while r1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_trim([x - y for x, y in _zip_pad(s0, _poly_mul(q, s1) if q and s1 else [])])
        t0, t1 = t1, _poly_trim([x - y for x, y in _zip_pad(t0, _poly_mul(q, t1) if q and t1 else [])])
    return r0, s0, t0


def _zip_pad(a: list[Q], b: list[Q]) -> Iterable[tuple[Q, Q]]:
    n = max(len(a), len(b))
    for i in range(n):
        yield (a[i] if i < len(a) else Q(0), b[i] if i < len(b) else Q(0))


# ---------------------------------------------------------------------------
# CycloNumber
# ---------------------------------------------------------------------------


class CycloNumber:
    """An element of the cyclotomic field Q(zeta_M), exact."""

    __slots__ = ("conductor", "terms")

    def __init__(self, conductor: int, terms: Mapping[int, Q] | None = None):
        if conductor < 1:
            raise ValueError("conductor must be positive")
        clean: dict[int, Q] = {}
        if terms:
            for e, c in terms.items():
                c = c if isinstance(c, Q) else Q(c)
                if c == 0:
                    continue
                e %= conductor
                acc = clean.get(e)
                if acc is None:
                    clean[e] = c
                else:
                    acc = acc + c
                    if acc == 0:
                        del clean[e]
                    else:
                        clean[e] = acc
        # lower the conductor when all exponents share a factor with it
        if clean:
            g = conductor
            for e in clean:
                g = gcd(g, e)
                if g == 1:
                    break
            if g > 1:
                conductor //= g
                clean = {e // g: c for e, c in clean.items()}
        else:
            conductor = 1
        self.conductor = conductor
        self.terms = clean

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zeta(m: int, e: int = 1) -> "CycloNumber":
        """zeta_m ** e."""
        return CycloNumber(m, {e: Q(1)})

    @staticmethod
    def from_rational(q: int | Q) -> "CycloNumber":
        return CycloNumber(1, {0: Q(q)})

    @staticmethod
    def zero() -> "CycloNumber":
        return CycloNumber(1, {})

    @staticmethod
    def one() -> "CycloNumber":
        return CycloNumber(1, {0: Q(1)})

    # -- representation utilities -------------------------------------------

    def embedded(self, m2: int) -> "CycloNumber":
        """The same value represented at conductor m2 (self.conductor | m2)."""
        m = self.conductor
        if m2 == m:
            return self
        if m2 % m != 0:
            raise ValueError(f"cannot embed conductor {m} into {m2}")
        k = m2 // m
        out = CycloNumber.__new__(CycloNumber)
        out.conductor = m2
        out.terms = {e * k: c for e, c in self.terms.items()}
        return out

    @staticmethod
    def _align(a: "CycloNumber", b: "CycloNumber") -> tuple["CycloNumber", "CycloNumber"]:
        if a.conductor == b.conductor:
            return a, b
        m = lcm(a.conductor, b.conductor)
        return a.embedded(m), b.embedded(m)

    def _phi_coords(self) -> list[Q]:
        """Coordinates in the power basis {1, z, ..., z^(deg-1)} mod Phi_M."""
        phi = list(cyclotomic_polynomial(self.conductor))
        poly = [Q(0)] * self.conductor
        for e, c in self.terms.items():
            poly[e] += c
        _, rem = _poly_divmod(_poly_trim(poly), phi)
        return rem

    # -- predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        t = self.terms
        if not t:
            return True
        if len(t) == 1:
            return False
        if len(t) == 2:
            (a, ca), (b, cb) = t.items()
            m = self.conductor
            if m % 2 == 0 and (a - b) % m == m // 2:
                return ca == cb
            return False
        return not self._phi_coords()

    def is_one(self) -> bool:
        return (self - _ONE).is_zero()

    def is_rational(self) -> bool:
        if not self.terms:
            return True
        if self.conductor == 1:
            return True
        coords = self._phi_coords()
        return len(coords) <= 1

    def as_rational(self) -> Q:
        if not self.terms:
            return Q(0)
        if self.conductor == 1:
            return self.terms[0]
        coords = self._phi_coords()
        if len(coords) > 1:
            raise ValueError("not a rational number")
        return coords[0] if coords else Q(0)

    def as_unit_monomial(self) -> tuple[int, int] | None:
        """Return (conductor, exponent) if this is syntactically zeta_M^e,
        else None.  (Recognizes the normalized sparse form only; a unit
        hidden in a sum, like -1 - zeta_3 = zeta_3^2, is not detected.)"""
        if len(self.terms) != 1:
            return None
        (e, c), = self.terms.items()
        if c == 1:
            return (self.conductor, e)
        if c == -1:
            m = self.conductor
            if m % 2 == 0:
                return (m, (e + m // 2) % m)
            # -zeta_M^e = zeta_{2M}^{M + 2e}
            return (2 * m, (m + 2 * e) % (2 * m))
        return None

    def root_of_unity_order(self) -> int | None:
        """Multiplicative order if this is a recognized root of unity."""
        mono = self.as_unit_monomial()
        if mono is None:
            return None
        m, e = mono
        return m // gcd(m, e)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: Scalar) -> "CycloNumber":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = CycloNumber._align(self, other)
        terms = dict(a.terms)
        for e, c in b.terms.items():
            terms[e] = terms.get(e, Q(0)) + c
        return CycloNumber(a.conductor, terms)

    __radd__ = __add__

    def __neg__(self) -> "CycloNumber":
        out = CycloNumber.__new__(CycloNumber)
        out.conductor = self.conductor
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __sub__(self, other: Scalar) -> "CycloNumber":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "CycloNumber":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other: Scalar) -> "CycloNumber":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.terms or not other.terms:
            return CycloNumber.zero()
        # scalar fast path
        if other.conductor == 1:
            q = other.terms.get(0, Q(0))
            return CycloNumber(self.conductor, {e: c * q for e, c in self.terms.items()})
        if self.conductor == 1:
            q = self.terms.get(0, Q(0))
            return CycloNumber(other.conductor, {e: c * q for e, c in other.terms.items()})
        a, b = CycloNumber._align(self, other)
        m = a.conductor
        terms: dict[int, Q] = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = (e1 + e2) % m
                terms[e] = terms.get(e, Q(0)) + c1 * c2
        return CycloNumber(m, terms)

    __rmul__ = __mul__

    def inverse(self) -> "CycloNumber":
        if not self.terms:
            raise ZeroDivisionError("division by zero cyclotomic number")
        if len(self.terms) == 1:
            (e, c), = self.terms.items()
            return CycloNumber(self.conductor, {-e: 1 / c})
        m = self.conductor
        phi = list(cyclotomic_polynomial(m))
        poly = [Q(0)] * m
        for e, c in self.terms.items():
            poly[e] += c
        _, rem = _poly_divmod(_poly_trim(poly), phi)
        if not rem:
            raise ZeroDivisionError("division by zero cyclotomic number")
        g, u, _ = _poly_xgcd(rem, phi)
        # g is a nonzero constant (Phi_M is irreducible over Q)
        assert len(g) == 1, "xgcd of value with irreducible Phi_M must be constant"
        scale = 1 / g[0]
        return CycloNumber(m, {i: c * scale for i, c in enumerate(u)})

    def __truediv__(self, other: Scalar) -> "CycloNumber":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: Scalar) -> "CycloNumber":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int) -> "CycloNumber":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = CycloNumber.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "CycloNumber":
        """Complex conjugation: zeta -> zeta^{-1}."""
        m = self.conductor
        return CycloNumber(m, {(-e) % m: c for e, c in self.terms.items()})

    # -- comparison / hashing -------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Q)):
            other = CycloNumber.from_rational(other)
        if not isinstance(other, CycloNumber):
            return NotImplemented
        # monomial fast path: normalized forms are unique per (conductor, exp)
        if len(self.terms) == 1 and len(other.terms) == 1:
            if self.conductor == other.conductor:
                (e1, c1), = self.terms.items()
                (e2, c2), = other.terms.items()
                if e1 == e2:
                    return c1 == c2
                # same conductor, different exponents: equal only via -1 at even M
                if self.conductor % 2 == 1:
                    return False
        return (self - other).is_zero()

    def __bool__(self) -> bool:
        return not self.is_zero()

    # values at different conductors can be equal, so there is no cheap
    # conductor-stable hash; keep instances unhashable
    __hash__ = None  # type: ignore[assignment]

    # -- conversion / display --------------------------------------------------

    def approx_complex(self) -> complex:
        from cmath import exp, pi

        m = self.conductor
        return sum(float(c) * exp(2j * pi * e / m) for e, c in self.terms.items()) or 0j

    def to_json(self) -> dict:
        terms = sorted(self.terms.items())
        return {"conductor": self.conductor, "terms": [[e, str(c)] for e, c in terms]}

    @staticmethod
    def from_json(obj: dict) -> "CycloNumber":
        if not isinstance(obj, dict) or "conductor" not in obj or "terms" not in obj:
            raise ValueError("cyclotomic number needs 'conductor' and 'terms'")
        m = obj["conductor"]
        if not isinstance(m, int) or m < 1:
            raise ValueError("conductor must be a positive integer")
        terms: dict[int, Q] = {}
        for pair in obj["terms"]:
            if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                raise ValueError("each term must be [exponent, coefficient]")
            e, c = pair
            if not isinstance(e, int):
                raise ValueError("term exponent must be an integer")
            terms[e % m] = terms.get(e % m, Q(0)) + Q(str(c))
        return CycloNumber(m, terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "Cyclo(0)"
        parts = []
        for e, c in sorted(self.terms.items()):
            if e == 0:
                parts.append(f"{c}")
            elif c == 1:
                parts.append(f"z{self.conductor}^{e}")
            else:
                parts.append(f"{c}*z{self.conductor}^{e}")
        return "Cyclo(" + " + ".join(parts) + ")"


def _coerce(x: Scalar) -> "CycloNumber":
    if isinstance(x, CycloNumber):
        return x
    if isinstance(x, (int, Q)):
        return CycloNumber.from_rational(x)
    return NotImplemented


_ONE = CycloNumber.one()


def zeta(m: int, e: int = 1) -> CycloNumber:
    """Convenience constructor for zeta_m ** e."""
    return CycloNumber.zeta(m, e)
