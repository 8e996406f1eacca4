"""Finite abelian groups, their characters, and group-algebra idempotents.

A group is a product of cyclic factors Z_{m_1} x ... x Z_{m_theta};
elements are exponent tuples (a_1, ..., a_theta) with 0 <= a_i < m_i.

The character group is identified with the group itself:
chi_g(h) = prod_i zeta_{m_i}^{a_i b_i} for g = (a_i), h = (b_i).
Characters are evaluated as exponents at the lcm conductor, so they are
always unit monomials and never trigger polynomial reduction.

The "doubling" of G replaces each order m_i by m_i**2.  G embeds into
its doubling by g_i -> G_i^{m_i} and the doubling projects back by
reducing exponents mod m_i; the kernel of the projection is exactly the
embedded copy of G.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q
from itertools import product
from math import gcd, lcm, prod
from typing import Iterator

from qha.cyclotomic import CycloNumber
from qha.errors import GroupMismatch

Element = tuple[int, ...]


def reduce_with_defect(x: int, m: int) -> tuple[int, int]:
    """Return (x mod m, defect) with defect = (x mod m) - x, a multiple
    of m.  For x in (-m, m) the defect is 0 or m."""
    r = x % m
    return r, r - x


@dataclass(frozen=True)
class AbelianGroup:
    orders: tuple[int, ...]

    def __post_init__(self):
        if not all(isinstance(m, int) and m >= 1 for m in self.orders):
            raise ValueError("cyclic factor orders must be positive integers")

    # -- basic structure -----------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def size(self) -> int:
        return prod(self.orders)

    @property
    def exponent(self) -> int:
        return lcm(*self.orders) if self.orders else 1

    @property
    def identity(self) -> Element:
        return (0,) * len(self.orders)

    def elements(self) -> Iterator[Element]:
        return product(*(range(m) for m in self.orders))

    def normalize(self, g: Element) -> Element:
        if len(g) != len(self.orders):
            raise GroupMismatch(f"element length {len(g)} != rank {len(self.orders)}")
        return tuple(x % m for x, m in zip(g, self.orders))

    def mul(self, a: Element, b: Element) -> Element:
        return tuple((x + y) % m for x, y, m in zip(a, b, self.orders))

    def inv(self, a: Element) -> Element:
        return tuple((-x) % m for x, m in zip(a, self.orders))

    def pow(self, a: Element, n: int) -> Element:
        return tuple((x * n) % m for x, m in zip(a, self.orders))

    def element_order(self, a: Element) -> int:
        return lcm(*(m // gcd(m, x) for x, m in zip(a, self.orders))) if self.orders else 1

    def generator(self, i: int) -> Element:
        return tuple(1 if j == i else 0 for j in range(len(self.orders)))

    # -- characters -----------------------------------------------------------

    def chi_exponent(self, g: Element, h: Element) -> int:
        """Exponent e with chi_g(h) = zeta_L^e at L = exponent of the group."""
        L = self.exponent
        return sum((L // m) * a * b for a, b, m in zip(g, h, self.orders)) % L

    def chi(self, g: Element, h: Element) -> CycloNumber:
        return CycloNumber.zeta(self.exponent, self.chi_exponent(g, h))

    # -- doubling ---------------------------------------------------------------

    def doubled(self) -> "AbelianGroup":
        return AbelianGroup(tuple(m * m for m in self.orders))


@dataclass(frozen=True)
class Doubling:
    """The pair (G, GG) with GG = doubling of G, plus the standard maps."""

    base: AbelianGroup

    @property
    def big(self) -> AbelianGroup:
        return self.base.doubled()

    def iota(self, g: Element) -> Element:
        """Embedding G -> GG, g_i -> G_i^{m_i}."""
        return tuple(x * m for x, m in zip(g, self.base.orders))

    def bar(self, f: Element) -> Element:
        """Projection GG -> G, exponents mod m_i."""
        return tuple(x % m for x, m in zip(f, self.base.orders))

    def in_iota_image(self, f: Element) -> bool:
        return all(x % m == 0 for x, m in zip(f, self.base.orders))

    def iota_preimage(self, f: Element) -> Element:
        """For f in the image of iota, the g with iota(g) = f."""
        if not self.in_iota_image(f):
            raise ValueError(f"{f} is not in the embedded copy of the base group")
        return tuple(x // m for x, m in zip(f, self.base.orders))


class GroupAlgebraElement:
    """An element of the group algebra over the cyclotomics, as a sparse
    map from group elements to coefficients.  Small-scale utility used for
    idempotent identities and for oracle computations; the main algebra
    engine works in the idempotent basis instead."""

    __slots__ = ("group", "coeffs")

    def __init__(self, group: AbelianGroup, coeffs: dict[Element, CycloNumber] | None = None):
        self.group = group
        clean: dict[Element, CycloNumber] = {}
        if coeffs:
            for g, c in coeffs.items():
                if not isinstance(c, CycloNumber):
                    c = CycloNumber.from_rational(c)
                if not c.is_zero():
                    clean[group.normalize(g)] = c
        self.coeffs = clean

    @staticmethod
    def of_group_element(group: AbelianGroup, g: Element) -> "GroupAlgebraElement":
        return GroupAlgebraElement(group, {g: CycloNumber.one()})

    @staticmethod
    def one(group: AbelianGroup) -> "GroupAlgebraElement":
        return GroupAlgebraElement.of_group_element(group, group.identity)

    @staticmethod
    def idempotent(group: AbelianGroup, g: Element) -> "GroupAlgebraElement":
        """1_g = (1/|G|) sum_h chi_g(h) h, satisfying 1_g * h = chi_g(h)^{-1} 1_g."""
        n = Q(1, group.size)
        return GroupAlgebraElement(
            group, {h: n * group.chi(g, h) for h in group.elements()}
        )

    def _check(self, other: "GroupAlgebraElement") -> None:
        if self.group != other.group:
            raise GroupMismatch("group algebra elements over different groups")

    def __add__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        self._check(other)
        out = dict(self.coeffs)
        for g, c in other.coeffs.items():
            out[g] = out.get(g, CycloNumber.zero()) + c
        return GroupAlgebraElement(self.group, out)

    def __sub__(self, other: "GroupAlgebraElement") -> "GroupAlgebraElement":
        return self + (-1) * other

    def __rmul__(self, scalar) -> "GroupAlgebraElement":
        return GroupAlgebraElement(
            self.group, {g: scalar * c for g, c in self.coeffs.items()}
        )

    def __mul__(self, other) -> "GroupAlgebraElement":
        if not isinstance(other, GroupAlgebraElement):
            return GroupAlgebraElement(
                self.group, {g: c * other for g, c in self.coeffs.items()}
            )
        self._check(other)
        out: dict[Element, CycloNumber] = {}
        for g, c in self.coeffs.items():
            for h, d in other.coeffs.items():
                k = self.group.mul(g, h)
                out[k] = out.get(k, CycloNumber.zero()) + c * d
        return GroupAlgebraElement(self.group, out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupAlgebraElement):
            return NotImplemented
        self._check(other)
        keys = set(self.coeffs) | set(other.coeffs)
        z = CycloNumber.zero()
        return all(self.coeffs.get(k, z) == other.coeffs.get(k, z) for k in keys)

    __hash__ = None  # type: ignore[assignment]

    def is_zero(self) -> bool:
        return not self.coeffs

    def __repr__(self) -> str:
        if not self.coeffs:
            return "GA(0)"
        parts = [f"{c!r}*{g}" for g, c in sorted(self.coeffs.items())]
        return "GA(" + " + ".join(parts) + ")"
