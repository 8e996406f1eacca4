"""Finite-dimensional quasi-Hopf algebras presented by root-vector
generators over a twisted abelian group algebra.

Elements live in a PBW normal form: every element is a linear combination
of monomials X^w * 1_f where X^w is a product of root-vector letters in a
fixed convex order and 1_f is a character idempotent of the base group
(abgroup.GroupAlgebraElement.idempotent).  Group elements act diagonally
on idempotents, so they never appear inside words; the commutation
g X_i g^{-1} = chi_i(iota(g)) X_i is absorbed into the label shift

    1_f * X_i = X_i * 1_{f + rho_i},

with rho_i the character row of X_i reduced to the base group.  Products
of monomials are therefore label-sparse: (X^u 1_f)(X^v 1_g) vanishes
unless g = f + rho(v).

The defining relations (braided Serre relations, linking relations,
root-vector power relations, and the definitions of compound letters as
iterated braided commutators) seed a rewrite system; rules are oriented
by (total height, then letter-tuple order) and kept per idempotent label
because scalar coefficients vary with the label.  Overlap completion runs
on all ambiguities below the PBW weight bound, after which the set of
irreducible monomials is enumerated and compared against the expected
PBW basis -- any discrepancy raises DimensionMismatch instead of letting
a wrong presentation produce a wrong algebra.

Coproduct, antipode and the distinguished element alpha are evaluated
through the gauge 2-cochain J_c (cohomology.j_cochain), as scalar ratios
of J_c values on lifted labels:

    psi_i(f, g)  : coefficient of X_i 1_f (x) 1_g   in Delta(X_i)
    theta_i(f)   : coefficient of 1_f (x) X_i       in Delta(X_i)
    upsilon(g)   : coefficient of 1_g               in alpha
    effe_i(g)    : coefficient of X_i 1_g           in S(X_i)

so every structure constant of the quasi-Hopf structure has a single
source.  The associator is the standard 3-cocycle representative of the
parameter family evaluated on idempotent triples, and beta = 1.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from pathlib import Path
from typing import Iterator, NamedTuple

from .abgroup import AbelianGroup, Element, GroupAlgebraElement
from .cartan import height, root_system
from .cohomology import Cochain3, CocycleParams, phi_cochain
from .cyclotomic import CycloNumber
from .datum import (
    CartanDatum,
    Root,
    dimension,
    solve_gamma,
    u_alpha,
    validate_datum,
    validate_linking,
    validate_rootparams,
)
from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    GammaViolation,
    GroupMismatch,
    NotDoubledDatum,
    UnsupportedType,
)

Word = tuple[int, ...]
Monomial = tuple[Word, Element]

DEFAULT_BUDGET = 5000
_RULE_CAP = 200_000
_ENGINE_VERSION = 1

__all__ = [
    "DEFAULT_BUDGET",
    "PBWWord",
    "RootLetter",
    "RootVector",
    "AlgElt",
    "TensorElt",
    "QuasiHopfAlgebra",
    "StructureMaps",
    "EFReport",
    "braided_commutator",
    "root_vector",
    "build",
    "structure_maps",
    "ef_presentation",
]


@lru_cache(maxsize=None)
def _zeta(conductor: int, exponent: int) -> CycloNumber:
    return CycloNumber.zeta(conductor, exponent % conductor)


def _coerce(x) -> CycloNumber:
    if isinstance(x, CycloNumber):
        return x
    return CycloNumber.from_rational(x)


def _j_exponent(D: CartanDatum, params: CocycleParams, x: Element, y: Element) -> int:
    """Exponent e with J_c(x, y) = zeta_L^e on the doubled group, L its
    exponent.  Scalar counterpart of cohomology.j_cochain."""
    big = D.big_group
    m = D.base_group.orders
    L = big.exponent
    x = big.normalize(x)
    y = big.normalize(y)
    e = 0
    for l, c in enumerate(params.diag):
        if c:
            defect = (x[l] % m[l]) - x[l]
            e += c * (L // (m[l] * m[l])) * defect * y[l]
    for (s, t), c in params.pair_dict.items():
        defect = (x[s] % m[s]) - x[s]
        e += c * (L // (m[s] * m[t])) * defect * y[t]
    return e % L


# ---------------------------------------------------------------------------
# root vectors and letters


@dataclass(frozen=True)
class RootVector:
    """Iterated braided-commutator expression for a positive root vector.

    Either a plain generator (vertex is set) or [left, right]_c with the
    braiding scalar chi_{right.root}(h_{left.root})."""

    root: Root
    vertex: int | None = None
    left: "RootVector | None" = None
    right: "RootVector | None" = None
    braiding: CycloNumber | None = None

    @property
    def is_simple(self) -> bool:
        return self.vertex is not None


def _pair_scalar(D: CartanDatum, beta: Root, gamma: Root) -> CycloNumber:
    """chi_gamma(h_beta) for positive roots beta, gamma."""
    big = D.big_group
    e = big.chi_exponent(D.chi_alpha_exps(gamma), D.h_alpha(beta))
    return _zeta(big.exponent, e)


def _local_convex_order(D: CartanDatum, comp_index: int) -> list[Root]:
    comp = D.component_types[comp_index]
    sub = D.matrix.submatrix(comp.indices)
    return list(root_system(sub).convex_order)


def _globalize(D: CartanDatum, comp_index: int, local: Root) -> Root:
    comp = D.component_types[comp_index]
    full = [0] * D.theta
    for pos, coeff in zip(comp.indices, local):
        full[pos] = coeff
    return tuple(full)


def _decompose_local(letter: str, order: list[Root], beta: Root) -> tuple[Root, Root]:
    """Split a nonsimple root into a pair of smaller roots gamma + delta with
    positions sandwiching beta in the convex order."""
    pos = {r: k for k, r in enumerate(order)}
    p = pos[beta]
    if letter == "A" and len(beta) > 2:
        # chain convention: peel the lowest simple coordinate from the left
        s = min(k for k, c in enumerate(beta) if c)
        gamma = tuple(int(k == s) for k in range(len(beta)))
        delta = tuple(b - g for b, g in zip(beta, gamma))
        return gamma, delta
    best = None
    for k in range(p):
        gamma = order[k]
        delta = tuple(b - g for b, g in zip(beta, gamma))
        q = pos.get(delta)
        if q is None or q <= p:
            continue
        span = q - k
        if best is None or span < best[0]:
            best = (span, gamma, delta)
    if best is None:
        raise ValueError(f"no convex decomposition for root {beta}")
    return best[1], best[2]


def root_vector(D: CartanDatum, beta: Root) -> RootVector:
    """The root vector of a positive root as an iterated braided commutator
    along the convex order of its component.

    Simple roots give plain generators.  Components of type A use the
    left-peeling chain [X_s, [X_{s+1}, ...]]; rank-2 components use the
    minimal-span convex decomposition.  Nonsimple roots in components of
    type B/C/D/E/F of rank >= 3 raise UnsupportedType."""
    beta = tuple(int(b) for b in beta)
    if len(beta) != D.theta:
        raise ValueError(f"root has {len(beta)} coordinates, datum has {D.theta}")
    support = [i for i, b in enumerate(beta) if b]
    if not support:
        raise ValueError("zero vector is not a root")
    if height(beta) == 1:
        return RootVector(root=beta, vertex=support[0])
    comp_index = D.component_of(support[0])
    comp = D.component_types[comp_index]
    if any(D.component_of(i) != comp_index for i in support):
        raise ValueError(f"{beta} is not a root: support spans components")
    local = tuple(beta[i] for i in comp.indices)
    order = _local_convex_order(D, comp_index)
    if local not in order:
        raise ValueError(f"{beta} is not a positive root")
    if comp.letter != "A" and comp.rank >= 3:
        raise UnsupportedType(
            f"nonsimple root vectors of type {comp.label} need rank <= 2 or type A"
        )
    lg, ld = _decompose_local(comp.letter, order, local)
    gamma = _globalize(D, comp_index, lg)
    delta = _globalize(D, comp_index, ld)
    return RootVector(
        root=beta,
        left=root_vector(D, gamma),
        right=root_vector(D, delta),
        braiding=_pair_scalar(D, gamma, delta),
    )


@dataclass(frozen=True)
class RootLetter:
    """One PBW letter: a root vector in the convex order, with the data the
    rewrite engine needs about it."""

    index: int
    root: Root
    component: int
    vertex: int | None  # set for simple roots
    nilpotency: int  # N of its component
    height: int
    shift: Element  # rho: base-group label shift when sliding past 1_f
    char_row: Element  # doubled-group exponents of chi_root
    hvec: Element  # doubled-group exponents of h_root


def _letters(D: CartanDatum) -> tuple[tuple[RootLetter, ...], tuple[RootVector, ...]]:
    G = D.base_group
    big = D.big_group
    letters: list[RootLetter] = []
    vectors: list[RootVector] = []
    for ci, comp in enumerate(D.component_types):
        N = D.component_orders[ci]
        for local in _local_convex_order(D, ci):
            root = _globalize(D, ci, local)
            row = D.chi_alpha_exps(root)
            vertex = None
            if height(root) == 1:
                vertex = next(i for i, b in enumerate(root) if b)
            letters.append(
                RootLetter(
                    index=len(letters),
                    root=root,
                    component=ci,
                    vertex=vertex,
                    nilpotency=N,
                    height=height(root),
                    shift=G.normalize(row[: G.rank]),
                    char_row=big.normalize(row),
                    hvec=D.h_alpha(root),
                )
            )
            vectors.append(root_vector(D, root))
    return tuple(letters), tuple(vectors)


# ---------------------------------------------------------------------------
# rewrite engine


class _Rewriter:
    """Label-indexed rewrite system on words of letters.

    A rule ((w, f) -> {w': c'}) rewrites the factor X^w seen at local label
    f; all right-hand words carry the same label.  Orientation: the
    left-hand word is the maximum of the relation's support in the order
    (total height, then tuple order), which every substitution strictly
    decreases, so reduction terminates."""

    def __init__(self, group: AbelianGroup, letters: tuple[RootLetter, ...]):
        self.group = group
        self.letters = letters
        self.heights = tuple(l.height for l in letters)
        self.shifts = tuple(l.shift for l in letters)
        self.maxweight = sum((l.nilpotency - 1) * l.height for l in letters)
        self.rules: dict[Monomial, dict[Word, CycloNumber]] = {}
        self.lhs_words: set[Word] = set()
        self.max_lhs_len = 0

    def weight(self, w: Word) -> int:
        return sum(self.heights[t] for t in w)

    def word_shift(self, w: Word) -> Element:
        g = self.group.identity
        for t in w:
            g = self.group.mul(g, self.shifts[t])
        return g

    def _find(self, w: Word, f: Element) -> tuple[int, int, dict[Word, CycloNumber]] | None:
        n = len(w)
        if not self.lhs_words or n == 0:
            return None
        group = self.group
        # suffix label shifts: suf[k] = rho(w[k:])
        suf = [group.identity] * (n + 1)
        for i in range(n - 1, -1, -1):
            suf[i] = group.mul(self.shifts[w[i]], suf[i + 1])
        for b in range(n):
            top = min(self.max_lhs_len, n - b)
            for length in range(top, 0, -1):
                cand = w[b : b + length]
                if cand not in self.lhs_words:
                    continue
                local = group.mul(f, group.inv(suf[b + length]))
                rhs = self.rules.get((cand, local))
                if rhs is not None:
                    return b, length, rhs
        return None

    def reduce_into(
        self, w: Word, f: Element, c: CycloNumber, out: dict[Monomial, CycloNumber]
    ) -> None:
        stack = [(w, c)]
        while stack:
            word, coeff = stack.pop()
            hit = self._find(word, f)
            if hit is None:
                key = (word, f)
                acc = out.get(key)
                out[key] = coeff if acc is None else acc + coeff
                continue
            b, length, rhs = hit
            prefix, suffix = word[:b], word[b + length :]
            for w2, c2 in rhs.items():
                stack.append((prefix + w2 + suffix, coeff * c2))

    def normal_form(self, terms: dict[Monomial, CycloNumber]) -> dict[Monomial, CycloNumber]:
        out: dict[Monomial, CycloNumber] = {}
        for (w, f), c in terms.items():
            if not c.is_zero():
                self.reduce_into(w, f, c, out)
        return {k: v for k, v in out.items() if not v.is_zero()}

    def add_relation(self, terms: dict[Monomial, CycloNumber]) -> bool:
        nf = self.normal_form(terms)
        if not nf:
            return False
        labels = {f for (_, f) in nf}
        if len(labels) != 1:
            raise DimensionMismatch("relation mixes idempotent labels")
        lead = max(nf, key=lambda k: (self.weight(k[0]), k[0]))
        lc = nf.pop(lead)
        inv = lc.inverse()
        rhs = {w: -(c * inv) for (w, _), c in nf.items()}
        self.rules[lead] = rhs
        self.lhs_words.add(lead[0])
        self.max_lhs_len = max(self.max_lhs_len, len(lead[0]))
        if len(self.rules) > _RULE_CAP:
            raise BudgetExceeded(
                f"straightening produced more than {_RULE_CAP} rules"
            )
        return True

    def _apply_at(
        self, w: Word, f: Element, b: int, length: int, rhs: dict[Word, CycloNumber]
    ) -> dict[Monomial, CycloNumber]:
        out: dict[Monomial, CycloNumber] = {}
        prefix, suffix = w[:b], w[b + length :]
        for w2, c2 in rhs.items():
            self.reduce_into(prefix + w2 + suffix, f, c2, out)
        return {k: v for k, v in out.items() if not v.is_zero()}

    def _ambiguities(self, u: Word, v: Word) -> Iterator[tuple[Word, int]]:
        """Words w containing u at 0 and v at offset b, from suffix-prefix
        overlaps and proper containments."""
        for k in range(1, min(len(u), len(v))):
            if u[len(u) - k :] == v[:k]:
                yield u + v[k:], len(u) - k
        if len(v) < len(u):
            for b in range(len(u) - len(v) + 1):
                if u[b : b + len(v)] == v:
                    yield u, b
        elif len(v) == len(u) and u == v:
            pass  # identical rules have no proper self-containment

    def complete(self) -> None:
        group = self.group
        elements = sorted(group.elements())
        while True:
            changed = False
            for u in sorted(self.lhs_words):
                for v in sorted(self.lhs_words):
                    for w, b in self._ambiguities(u, v):
                        if self.weight(w) > self.maxweight:
                            continue
                        tail_u = self.word_shift(w[len(u) :])
                        tail_v = self.word_shift(w[b + len(v) :])
                        for f in elements:
                            ru = self.rules.get((u, group.mul(f, group.inv(tail_u))))
                            rv = self.rules.get((v, group.mul(f, group.inv(tail_v))))
                            if ru is None or rv is None:
                                continue
                            one = CycloNumber.one()
                            a_terms = self._apply_at(w, f, 0, len(u), ru)
                            b_terms = self._apply_at(w, f, b, len(v), rv)
                            diff = dict(a_terms)
                            for key, c in b_terms.items():
                                acc = diff.get(key)
                                diff[key] = -c if acc is None else acc - c
                            diff = {k: c for k, c in diff.items() if not c.is_zero()}
                            if diff and self.add_relation(diff):
                                changed = True
            if not changed:
                return

    def enumerate_basis(self, cap: int) -> list[Monomial]:
        group = self.group
        elements = sorted(group.elements())
        out: list[Monomial] = []

        def dead(w2: Word, f: Element) -> bool:
            top = min(self.max_lhs_len, len(w2))
            for length in range(1, top + 1):
                s = w2[len(w2) - length :]
                if s in self.lhs_words and (s, f) in self.rules:
                    return True
            return False

        def rec(word: Word, alive: list[Element]) -> None:
            for f in alive:
                out.append((word, f))
            if len(out) > cap:
                raise DimensionMismatch(len(out), cap)
            for t in range(len(self.letters)):
                # no weight prune here: an under-completed rule set must
                # surface as an inflated irreducible count, not be masked
                w2 = word + (t,)
                alive2 = []
                for a in alive:
                    f = group.mul(a, self.shifts[t])
                    if not dead(w2, f):
                        alive2.append(f)
                if alive2:
                    rec(w2, alive2)

        rec((), elements)
        return out


# ---------------------------------------------------------------------------
# elements


class PBWWord(NamedTuple):
    """Basis monomial: letter exponents in convex order plus the idempotent
    label of the base group."""

    root_exps: tuple[int, ...]
    group_part: Element

    def __repr__(self) -> str:
        xs = " ".join(
            f"X{t}" + (f"^{e}" if e > 1 else "")
            for t, e in enumerate(self.root_exps)
            if e
        )
        head = xs if xs else "1"
        return f"{head}*e{self.group_part}"


def _word_to_exps(word: Word, nletters: int) -> tuple[int, ...]:
    exps = [0] * nletters
    for t in word:
        exps[t] += 1
    return tuple(exps)


def _exps_to_word(exps: tuple[int, ...]) -> Word:
    w: tuple[int, ...] = ()
    for t, e in enumerate(exps):
        w += (t,) * e
    return w


class AlgElt:
    """Algebra element in PBW normal form: a sparse map monomial -> scalar."""

    __slots__ = ("parent", "terms")

    def __init__(self, parent: "QuasiHopfAlgebra", terms: dict[Monomial, CycloNumber]):
        self.parent = parent
        self.terms = {k: c for k, c in terms.items() if not c.is_zero()}

    def _check(self, other: "AlgElt") -> None:
        if self.parent is not other.parent:
            raise GroupMismatch("elements of different algebras")

    def coefficients(self) -> dict[PBWWord, CycloNumber]:
        n = len(self.parent.letters)
        return {
            PBWWord(_word_to_exps(w, n), f): c for (w, f), c in self.terms.items()
        }

    def __add__(self, other: "AlgElt") -> "AlgElt":
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            acc = out.get(k)
            out[k] = c if acc is None else acc + c
        return AlgElt(self.parent, out)

    def __sub__(self, other: "AlgElt") -> "AlgElt":
        return self + (-other)

    def __neg__(self) -> "AlgElt":
        return AlgElt(self.parent, {k: -c for k, c in self.terms.items()})

    def __rmul__(self, scalar) -> "AlgElt":
        c = _coerce(scalar)
        return AlgElt(self.parent, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other) -> "AlgElt":
        if not isinstance(other, AlgElt):
            c = _coerce(other)
            return AlgElt(self.parent, {k: v * c for k, v in self.terms.items()})
        self._check(other)
        H = self.parent
        group = H.group
        rw = H._rw
        by_label: dict[Element, list[tuple[Word, CycloNumber]]] = {}
        for (w1, f1), c1 in self.terms.items():
            by_label.setdefault(f1, []).append((w1, c1))
        out: dict[Monomial, CycloNumber] = {}
        for (w2, f2), c2 in other.terms.items():
            # label gate: f2 must equal f1 + rho(w2)
            need = group.mul(f2, group.inv(H._rho(w2)))
            for w1, c1 in by_label.get(need, ()):
                rw.reduce_into(w1 + w2, f2, c1 * c2, out)
        return AlgElt(H, out)

    def __pow__(self, n: int) -> "AlgElt":
        if n < 0:
            raise ValueError("negative powers are not defined")
        acc = self.parent.one()
        for _ in range(n):
            acc = acc * self
        return acc

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlgElt):
            return NotImplemented
        return self.parent is other.parent and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self) -> str:
        if not self.terms:
            return "AlgElt(0)"
        n = len(self.parent.letters)
        parts = []
        for (w, f), c in sorted(self.terms.items())[:4]:
            parts.append(f"{c!r}*{PBWWord(_word_to_exps(w, n), f)!r}")
        more = "" if len(self.terms) <= 4 else f" +{len(self.terms) - 4} terms"
        return "AlgElt(" + " + ".join(parts) + more + ")"


class TensorElt:
    """Element of a tensor power (rank 2, 3 or 4) of the algebra, sparse over
    tuples of monomials, with componentwise multiplication."""

    __slots__ = ("parent", "rank", "terms", "_diag")

    def __init__(
        self,
        parent: "QuasiHopfAlgebra",
        rank: int,
        terms: dict[tuple[Monomial, ...], CycloNumber],
    ):
        self.parent = parent
        self.rank = rank
        self.terms = {k: c for k, c in terms.items() if not c.is_zero()}
        self._diag: bool | None = None

    def _check(self, other: "TensorElt") -> None:
        if self.parent is not other.parent or self.rank != other.rank:
            raise GroupMismatch("tensors of different type")

    def is_group_diagonal(self) -> bool:
        """True when every slot of every term is a bare idempotent."""
        if self._diag is None:
            self._diag = all(
                not w for key in self.terms for (w, _) in key
            )
        return self._diag

    def __add__(self, other: "TensorElt") -> "TensorElt":
        self._check(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            acc = out.get(k)
            out[k] = c if acc is None else acc + c
        return TensorElt(self.parent, self.rank, out)

    def __sub__(self, other: "TensorElt") -> "TensorElt":
        return self + (-other)

    def __neg__(self) -> "TensorElt":
        return TensorElt(self.parent, self.rank, {k: -c for k, c in self.terms.items()})

    def __rmul__(self, scalar) -> "TensorElt":
        c = _coerce(scalar)
        return TensorElt(self.parent, self.rank, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other) -> "TensorElt":
        if not isinstance(other, TensorElt):
            c = _coerce(other)
            return TensorElt(
                self.parent, self.rank, {k: v * c for k, v in self.terms.items()}
            )
        self._check(other)
        H = self.parent
        group = H.group
        out: dict[tuple[Monomial, ...], CycloNumber] = {}
        if self.is_group_diagonal():
            # (empty, a) * (w, f) = [f == a + rho(w)] (w, f)
            for key2, c2 in other.terms.items():
                lk = tuple(
                    ((), group.mul(f, group.inv(H._rho(w)))) for (w, f) in key2
                )
                c1 = self.terms.get(lk)
                if c1 is not None:
                    acc = out.get(key2)
                    prod = c1 * c2
                    out[key2] = prod if acc is None else acc + prod
            return TensorElt(H, self.rank, out)
        if other.is_group_diagonal():
            # (w, f) * (empty, b) = [b == f] (w, f)
            for key1, c1 in self.terms.items():
                lk = tuple(((), f) for (_, f) in key1)
                c2 = other.terms.get(lk)
                if c2 is not None:
                    acc = out.get(key1)
                    prod = c1 * c2
                    out[key1] = prod if acc is None else acc + prod
            return TensorElt(H, self.rank, out)
        # slot gates force the left labels: f_left = f_right - rho(w_right)
        by_label: dict[tuple[Element, ...], list] = {}
        for key1, c1 in self.terms.items():
            lab = tuple(f for (_, f) in key1)
            by_label.setdefault(lab, []).append((key1, c1))
        for key2, c2 in other.terms.items():
            need = tuple(
                group.mul(f, group.inv(H._rho(w))) for (w, f) in key2
            )
            bucket = by_label.get(need)
            if bucket is None:
                continue
            for key1, c1 in bucket:
                slot_results = []
                dead = False
                for s1, s2 in zip(key1, key2):
                    r = H._mono_mul(s1, s2)
                    if not r:
                        dead = True
                        break
                    slot_results.append(list(r.items()))
                if dead:
                    continue
                base = c1 * c2
                for combo in product(*slot_results):
                    key = tuple(mono for mono, _ in combo)
                    c = base
                    for _, cc in combo:
                        c = c * cc
                    acc = out.get(key)
                    out[key] = c if acc is None else acc + c
        return TensorElt(H, self.rank, out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TensorElt):
            return NotImplemented
        return (
            self.parent is other.parent
            and self.rank == other.rank
            and self.terms == other.terms
        )

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self) -> str:
        return f"TensorElt(rank={self.rank}, {len(self.terms)} terms)"


# ---------------------------------------------------------------------------
# seed relations


def _serre_word_terms(D: CartanDatum, i: int, j: int) -> dict[Word, CycloNumber]:
    """ad_c(X_i)^{1-a_ij}(X_j) expanded over free words in the vertices."""
    big = D.big_group
    L = big.exponent
    one = CycloNumber.one()
    cur: dict[Word, CycloNumber] = {(j,): one}
    for _ in range(1 - D.matrix.a(i, j)):
        nxt: dict[Word, CycloNumber] = {}
        for w, c in cur.items():
            left = (i,) + w
            acc = nxt.get(left)
            nxt[left] = c if acc is None else acc + c
            e = sum(D.q_exponent(i, v) for v in w) % L
            right = w + (i,)
            cr = -(c * _zeta(L, e))
            acc = nxt.get(right)
            nxt[right] = cr if acc is None else acc + cr
        cur = nxt
    return cur


def _seed_relations(
    D: CartanDatum,
    lam: dict[tuple[int, int], object],
    mu: dict[Root, object],
    letters: tuple[RootLetter, ...],
    vectors: tuple[RootVector, ...],
) -> list[list[tuple[Word, GroupAlgebraElement]]]:
    """Defining relations as lists of (word, right group-algebra coefficient)
    pairs, each list summing to zero."""
    G = D.base_group
    dbl = D.doubling
    big = D.big_group
    L = big.exponent
    letter_of: dict[Root, int] = {l.root: l.index for l in letters}
    vertex_letter = {
        l.vertex: l.index for l in letters if l.vertex is not None
    }
    one = GroupAlgebraElement.one(G)
    rels: list[list[tuple[Word, GroupAlgebraElement]]] = []

    # compound-letter definitions: X_d = X_a X_b - q X_b X_a
    for d, vec in enumerate(vectors):
        if vec.is_simple:
            continue
        a = letter_of[vec.left.root]
        b = letter_of[vec.right.root]
        rels.append(
            [
                ((a, b), one),
                ((b, a), (-vec.braiding) * one),
                ((d,), -1 * one),
            ]
        )

    # braided Serre relations within components (both orders)
    for ct in D.component_types:
        for i in ct.indices:
            for j in ct.indices:
                if i == j:
                    continue
                terms = _serre_word_terms(D, i, j)
                rels.append(
                    [
                        (tuple(vertex_letter[v] for v in w), c * one)
                        for w, c in sorted(terms.items())
                    ]
                )

    # cross-component commutations with linking corrections
    for i in range(D.theta):
        for j in range(i + 1, D.theta):
            if D.same_component(i, j):
                continue
            li, lj = vertex_letter[i], vertex_letter[j]
            rel = [
                ((li, lj), one),
                ((lj, li), (-D.q(i, j)) * one),
            ]
            val = lam.get((i, j), 0)
            lam_c = _coerce(val)
            if not lam_c.is_zero():
                gij = dbl.iota_preimage(big.mul(D.h[i], D.h[j]))
                rel.append(
                    (
                        (),
                        GroupAlgebraElement(
                            G, {G.identity: -lam_c, gij: lam_c}
                        ),
                    )
                )
            rels.append(rel)

    # root-vector power relations X_t^N = u_{root(t)}
    for l in letters:
        u = u_alpha(D, mu, l.root)
        rel = [(((l.index,) * l.nilpotency), one)]
        if not u.is_zero():
            rel.append(((), GroupAlgebraElement(G, {g: -c for g, c in u.coeffs.items()})))
        rels.append(rel)

    return rels


def _instantiate(
    group: AbelianGroup,
    rel: list[tuple[Word, GroupAlgebraElement]],
    f: Element,
) -> dict[Monomial, CycloNumber]:
    """Multiply a relation sum_k X^{w_k} E_k = 0 by 1_f on the right:
    E 1_f = (sum_g E[g] chi_f(g)^{-1}) 1_f."""
    L = group.exponent
    out: dict[Monomial, CycloNumber] = {}
    for w, E in rel:
        c = CycloNumber.zero()
        for g, cg in E.coeffs.items():
            c = c + cg * _zeta(L, -group.chi_exponent(f, g))
        if c.is_zero():
            continue
        key = (w, f)
        acc = out.get(key)
        out[key] = c if acc is None else acc + c
    return out


# ---------------------------------------------------------------------------
# the algebra


class QuasiHopfAlgebra:
    """A finite-dimensional quasi-Hopf algebra built from a Cartan-type
    datum, linking and root parameters, and a cocycle parameter family.

    Use build() to construct one; it runs the validation, membership,
    budget and dimension gates in order."""

    def __init__(
        self,
        datum: CartanDatum,
        linking: dict[tuple[int, int], object],
        rootparams: dict[Root, object],
        params: CocycleParams,
        letters: tuple[RootLetter, ...],
        vectors: tuple[RootVector, ...],
        rewriter: _Rewriter,
        basis: list[Monomial],
        budget: int,
    ):
        self.datum = datum
        self.linking = dict(linking)
        self.rootparams = dict(rootparams)
        self.params = params
        self.letters = letters
        self.root_vectors = vectors
        self.group = datum.base_group
        self.big = datum.big_group
        self.budget = budget
        self.dimension = len(basis)
        self.phi_cochain: Cochain3 = phi_cochain(params)
        self._rw = rewriter
        self._basis = basis
        self._rho_cache: dict[Word, Element] = {}
        self._delta_letter_cache: dict[int, TensorElt] = {}
        self._s_letter_cache: dict[int, AlgElt] = {}
        self._delta_word_cache: dict[Word, TensorElt] = {}
        self._delta_idem_cache: dict[Element, TensorElt] = {}

    # -- scalars ----------------------------------------------------------

    def _lift(self, f: Element) -> Element:
        """Base-group element read as a doubled-group element with small
        exponents (the section with zero defect)."""
        return self.big.normalize(f)

    def psi(self, i: int, f: Element, g: Element) -> CycloNumber:
        """Coefficient of X_i 1_f (x) 1_g in Delta(X_i), i a vertex."""
        D = self.datum
        big = self.big
        a = big.normalize(
            tuple(x - r for x, r in zip(self._lift(f), D.char_exps[i]))
        )
        e = _j_exponent(D, self.params, a, self._lift(g))
        return _zeta(big.exponent, e)

    def theta(self, i: int, f: Element) -> CycloNumber:
        """Coefficient of 1_f (x) X_i in Delta(X_i), i a vertex."""
        big = self.big
        e = -big.chi_exponent(self._lift(f), self.datum.h[i])
        return _zeta(big.exponent, e)

    def upsilon(self, g: Element) -> CycloNumber:
        """Coefficient of 1_g in the distinguished element alpha."""
        big = self.big
        x = self._lift(g)
        e = -_j_exponent(self.datum, self.params, big.inv(x), x)
        return _zeta(big.exponent, e)

    def effe(self, i: int, g: Element) -> CycloNumber:
        """Coefficient of X_i 1_g in S(X_i), i a vertex."""
        D = self.datum
        big = self.big
        a = big.normalize(
            tuple(x - r for x, r in zip(self._lift(g), D.char_exps[i]))
        )
        e = big.chi_exponent(a, D.h[i]) + _j_exponent(D, self.params, a, big.inv(a))
        return -_zeta(big.exponent, e)

    # -- element constructors ----------------------------------------------

    def zero(self) -> AlgElt:
        return AlgElt(self, {})

    def one(self) -> AlgElt:
        one = CycloNumber.one()
        return AlgElt(self, {((), f): one for f in self.group.elements()})

    def scalar(self, c) -> AlgElt:
        return _coerce(c).__rmul__(self.one())

    def idempotent(self, f: Element) -> AlgElt:
        return AlgElt(self, {((), self.group.normalize(f)): CycloNumber.one()})

    def group_element(self, a: Element) -> AlgElt:
        G = self.group
        L = G.exponent
        a = G.normalize(a)
        return AlgElt(
            self,
            {
                ((), f): _zeta(L, -G.chi_exponent(f, a))
                for f in G.elements()
            },
        )

    def generator(self, i: int) -> AlgElt:
        """The root-vector generator X_i of a vertex i."""
        t = self._vertex_letter(i)
        one = CycloNumber.one()
        return AlgElt(self, {((t,), f): one for f in self.group.elements()})

    def letter_element(self, t: int) -> AlgElt:
        one = CycloNumber.one()
        return AlgElt(self, {((t,), f): one for f in self.group.elements()})

    def root_vector_element(self, beta: Root) -> AlgElt:
        """The root vector of a positive root, as an algebra element."""
        for l in self.letters:
            if l.root == tuple(beta):
                return self.letter_element(l.index)
        raise ValueError(f"{beta} is not a positive root of the datum")

    def monomial(self, word: PBWWord | tuple) -> AlgElt:
        exps, f = word
        w = _exps_to_word(tuple(exps))
        return AlgElt(self, {(w, self.group.normalize(f)): CycloNumber.one()})

    def monomial_raw(self, m: Monomial) -> AlgElt:
        """Element for an internal (letter word, label) monomial key."""
        return AlgElt(self, {m: CycloNumber.one()})

    def basis(self) -> list[PBWWord]:
        n = len(self.letters)
        return [PBWWord(_word_to_exps(w, n), f) for (w, f) in self._basis]

    def _vertex_letter(self, i: int) -> int:
        for l in self.letters:
            if l.vertex == i:
                return l.index
        raise ValueError(f"vertex {i} out of range")

    # -- internal helpers ---------------------------------------------------

    def _rho(self, w: Word) -> Element:
        got = self._rho_cache.get(w)
        if got is None:
            got = self._rw.word_shift(w)
            self._rho_cache[w] = got
        return got

    def _mono_mul(self, s1: Monomial, s2: Monomial) -> dict[Monomial, CycloNumber]:
        (w1, f1), (w2, f2) = s1, s2
        if f2 != self.group.mul(f1, self._rho(w2)):
            return {}
        out: dict[Monomial, CycloNumber] = {}
        self._rw.reduce_into(w1 + w2, f2, CycloNumber.one(), out)
        return {k: v for k, v in out.items() if not v.is_zero()}

    # -- tensors -------------------------------------------------------------

    def tensor_product(self, *factors: AlgElt) -> TensorElt:
        rank = len(factors)
        if rank not in (2, 3, 4):
            raise ValueError("tensor rank must be 2, 3 or 4")
        terms: dict[tuple[Monomial, ...], CycloNumber] = {}
        keys = [list(f.terms.items()) for f in factors]
        for combo in product(*keys):
            key = tuple(mono for mono, _ in combo)
            c = CycloNumber.one()
            for _, cc in combo:
                c = c * cc
            acc = terms.get(key)
            terms[key] = c if acc is None else acc + c
        return TensorElt(self, rank, terms)

    def tensor_one(self, rank: int) -> TensorElt:
        return self.tensor_product(*([self.one()] * rank))

    # -- quasi-Hopf structure -------------------------------------------------

    def counit(self, x: AlgElt) -> CycloNumber:
        return x.terms.get(((), self.group.identity), CycloNumber.zero())

    def _delta_idem(self, f: Element) -> TensorElt:
        got = self._delta_idem_cache.get(f)
        if got is None:
            G = self.group
            one = CycloNumber.one()
            got = TensorElt(
                self,
                2,
                {
                    (((), a), ((), G.mul(f, G.inv(a)))): one
                    for a in G.elements()
                },
            )
            self._delta_idem_cache[f] = got
        return got

    def _delta_letter(self, t: int) -> TensorElt:
        got = self._delta_letter_cache.get(t)
        if got is not None:
            return got
        letter = self.letters[t]
        if letter.vertex is not None:
            i = letter.vertex
            terms: dict[tuple[Monomial, ...], CycloNumber] = {}
            for f in self.group.elements():
                th = self.theta(i, f)
                for g in self.group.elements():
                    terms[(((t,), f), ((), g))] = self.psi(i, f, g)
                    terms[((((), f)), ((t,), g))] = th
            got = TensorElt(self, 2, terms)
        else:
            vec = self.root_vectors[t]
            a = self._letter_of_root(vec.left.root)
            b = self._letter_of_root(vec.right.root)
            da, db = self._delta_letter(a), self._delta_letter(b)
            got = da * db - vec.braiding * (db * da)
        self._delta_letter_cache[t] = got
        return got

    def _letter_of_root(self, root: Root) -> int:
        for l in self.letters:
            if l.root == root:
                return l.index
        raise ValueError(f"{root} has no letter")

    def _delta_word(self, w: Word) -> TensorElt:
        got = self._delta_word_cache.get(w)
        if got is None:
            if not w:
                G = self.group
                one = CycloNumber.one()
                got = TensorElt(
                    self,
                    2,
                    {
                        (((), a), ((), b)): one
                        for a in G.elements()
                        for b in G.elements()
                    },
                )  # Delta(1) = 1 (x) 1
            else:
                got = self._delta_word(w[:-1]) * self._delta_letter(w[-1])
            self._delta_word_cache[w] = got
        return got

    def coproduct(self, x: AlgElt) -> TensorElt:
        out = TensorElt(self, 2, {})
        for (w, f), c in x.terms.items():
            out = out + c * (self._delta_word(w) * self._delta_idem(f))
        return out

    def coproduct_on_slot(self, T: TensorElt, slot: int) -> TensorElt:
        """Apply the coproduct to one slot of a tensor, raising the rank."""
        if T.rank + 1 not in (2, 3, 4):
            raise ValueError("resulting rank must be at most 4")
        out: dict[tuple[Monomial, ...], CycloNumber] = {}
        for key, c in T.terms.items():
            w, f = key[slot]
            expanded = self._delta_word(w) * self._delta_idem(f)
            for (m1, m2), c2 in expanded.terms.items():
                nk = key[:slot] + (m1, m2) + key[slot + 1 :]
                cc = c * c2
                acc = out.get(nk)
                out[nk] = cc if acc is None else acc + cc
        return TensorElt(self, T.rank + 1, out)

    def counit_on_slot(self, T: TensorElt, slot: int) -> "TensorElt | AlgElt":
        """Apply the counit to one slot, lowering the rank."""
        ident = self.group.identity
        out: dict = {}
        for key, c in T.terms.items():
            w, f = key[slot]
            if w or f != ident:
                continue
            nk = key[:slot] + key[slot + 1 :]
            acc = out.get(nk)
            out[nk] = c if acc is None else acc + c
        if T.rank == 2:
            return AlgElt(self, {k[0]: c for k, c in out.items()})
        return TensorElt(self, T.rank - 1, out)

    def embed(self, x: AlgElt, slot: int, rank: int) -> TensorElt:
        """1 (x) ... (x) x (x) ... (x) 1 with x in the given slot."""
        factors = [self.one()] * rank
        factors[slot] = x
        return self.tensor_product(*factors)

    def associator(self) -> TensorElt:
        phi = self.phi_cochain
        terms: dict[tuple[Monomial, ...], CycloNumber] = {}
        for f in self.group.elements():
            for g in self.group.elements():
                for h in self.group.elements():
                    terms[(((), f), ((), g), ((), h))] = phi.value(f, g, h)
        return TensorElt(self, 3, terms)

    def associator_inv(self) -> TensorElt:
        phi = self.phi_cochain
        terms: dict[tuple[Monomial, ...], CycloNumber] = {}
        for f in self.group.elements():
            for g in self.group.elements():
                for h in self.group.elements():
                    e = -phi.exponent(f, g, h)
                    terms[(((), f), ((), g), ((), h))] = _zeta(phi.conductor, e)
        return TensorElt(self, 3, terms)

    def alpha(self) -> AlgElt:
        return AlgElt(
            self, {((), g): self.upsilon(g) for g in self.group.elements()}
        )

    def beta(self) -> AlgElt:
        return self.one()

    def _s_letter(self, t: int) -> AlgElt:
        got = self._s_letter_cache.get(t)
        if got is not None:
            return got
        letter = self.letters[t]
        if letter.vertex is not None:
            i = letter.vertex
            got = AlgElt(
                self,
                {((t,), g): self.effe(i, g) for g in self.group.elements()},
            )
        else:
            vec = self.root_vectors[t]
            a = self._letter_of_root(vec.left.root)
            b = self._letter_of_root(vec.right.root)
            sa, sb = self._s_letter(a), self._s_letter(b)
            got = sb * sa - vec.braiding * (sa * sb)
        self._s_letter_cache[t] = got
        return got

    def antipode(self, x: AlgElt) -> AlgElt:
        G = self.group
        out = self.zero()
        for (w, f), c in x.terms.items():
            acc = self.idempotent(G.inv(f))
            for t in reversed(w):
                acc = acc * self._s_letter(t)
            out = out + c * acc
        return out


class StructureMaps(NamedTuple):
    """Bound structure maps of an algebra, bundled for inspection."""

    coproduct: object
    counit: object
    associator: object
    associator_inv: object
    antipode: object
    alpha: object
    beta: object
    psi: object
    theta: object
    upsilon: object
    effe: object


def structure_maps(H: QuasiHopfAlgebra) -> StructureMaps:
    return StructureMaps(
        coproduct=H.coproduct,
        counit=H.counit,
        associator=H.associator,
        associator_inv=H.associator_inv,
        antipode=H.antipode,
        alpha=H.alpha,
        beta=H.beta,
        psi=H.psi,
        theta=H.theta,
        upsilon=H.upsilon,
        effe=H.effe,
    )


def braided_commutator(a: AlgElt, b: AlgElt, braiding) -> AlgElt:
    """[a, b]_c = a b - braiding * b a."""
    return a * b - _coerce(braiding) * (b * a)


# ---------------------------------------------------------------------------
# construction


def _canonical_scalar(x) -> object:
    return _coerce(x).to_json()


def _cache_key(
    D: CartanDatum,
    lam: dict[tuple[int, int], object],
    mu: dict[Root, object],
    params: CocycleParams,
) -> str:
    payload = {
        "v": _ENGINE_VERSION,
        "orders": list(D.base_group.orders),
        "h": [list(r) for r in D.h],
        "r": [list(r) for r in D.char_exps],
        "A": [list(r) for r in D.matrix.entries],
        "lam": sorted(
            (list(k), _canonical_scalar(v)) for k, v in lam.items()
        ),
        "mu": sorted((list(k), _canonical_scalar(v)) for k, v in mu.items()),
        "params": {
            "diag": list(params.diag),
            "pair": [[list(k), v] for k, v in params.pair],
            "triple": [[list(k), v] for k, v in params.triple],
        },
    }
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def _save_rules(path: Path, rw: _Rewriter) -> None:
    data = [
        {
            "lhs": list(w),
            "label": list(f),
            "rhs": [[list(w2), c.to_json()] for w2, c in rhs.items()],
        }
        for (w, f), rhs in sorted(rw.rules.items())
    ]
    path.write_text(json.dumps(data))


def _load_rules(path: Path, rw: _Rewriter) -> bool:
    try:
        data = json.loads(path.read_text())
    except (OSError, ValueError):
        return False
    for entry in data:
        w = tuple(entry["lhs"])
        f = tuple(entry["label"])
        rhs = {
            tuple(w2): CycloNumber.from_json(cj) for w2, cj in entry["rhs"]
        }
        rw.rules[(w, f)] = rhs
        rw.lhs_words.add(w)
        rw.max_lhs_len = max(rw.max_lhs_len, len(w))
    return True


def build(
    D: CartanDatum,
    lam: dict[tuple[int, int], object] | None = None,
    mu: dict[Root, object] | None = None,
    params: CocycleParams | None = None,
    *,
    budget: int | None = None,
    cache_dir: str | Path | None = None,
) -> QuasiHopfAlgebra:
    """Construct the quasi-Hopf algebra of a datum with linking parameters
    lam, root parameters mu and cocycle parameters.

    Gates, in order: datum/linking/root validation (ValueError), cocycle
    parameter membership in the congruence solution set (GammaViolation),
    dimension within budget (BudgetExceeded, default 5000), supported
    letter construction (UnsupportedType), and the irreducible-monomial
    count against the PBW prediction (DimensionMismatch)."""
    lam = dict(lam or {})
    mu = dict(mu or {})
    if params is None:
        params = CocycleParams.make(D.base_group)
    if params.group != D.base_group:
        raise GroupMismatch("cocycle parameters are not over the base group")

    rep = validate_datum(D)
    if not rep.ok:
        names = ", ".join(c.name for c in rep.failing())
        raise ValueError(f"datum validation failed: {names}")
    rep = validate_linking(D, lam)
    if not rep.ok:
        names = ", ".join(c.name for c in rep.failing())
        raise ValueError(f"linking validation failed: {names}")
    for (i, j), v in lam.items():
        if not _coerce(v).is_zero() and D.same_component(i, j):
            raise ValueError(f"linking within one component: ({i}, {j})")
    rep = validate_rootparams(D, mu)
    if not rep.ok:
        names = ", ".join(c.name for c in rep.failing())
        raise ValueError(f"root parameter validation failed: {names}")

    if params not in solve_gamma(D):
        raise GammaViolation(
            "cocycle parameters are outside the congruence solution set of the datum"
        )

    dim = dimension(D)
    limit = DEFAULT_BUDGET if budget is None else budget
    if dim > limit:
        raise BudgetExceeded(f"dimension {dim} exceeds budget {limit}")

    letters, vectors = _letters(D)
    G = D.base_group
    rw = _Rewriter(G, letters)

    loaded = False
    cache_file = None
    if cache_dir is not None:
        cache_file = Path(cache_dir) / f"rules-{_cache_key(D, lam, mu, params)}.json"
        loaded = cache_file.exists() and _load_rules(cache_file, rw)

    if not loaded:
        for rel in _seed_relations(D, lam, mu, letters, vectors):
            for f in sorted(G.elements()):
                terms = _instantiate(G, rel, f)
                if terms:
                    rw.add_relation(terms)
        rw.complete()
        if cache_file is not None:
            cache_file.parent.mkdir(parents=True, exist_ok=True)
            _save_rules(cache_file, rw)

    basis = rw.enumerate_basis(cap=dim)
    expected: set[Monomial] = set()
    for exps in product(*[range(l.nilpotency) for l in letters]):
        w = _exps_to_word(exps)
        for f in G.elements():
            expected.add((w, f))
    if set(basis) != expected:
        raise DimensionMismatch(
            f"irreducible monomials ({len(basis)}) do not match the PBW basis "
            f"({len(expected)} = predicted dimension {dim})"
        )

    return QuasiHopfAlgebra(
        datum=D,
        linking=lam,
        rootparams=mu,
        params=params,
        letters=letters,
        vectors=vectors,
        rewriter=rw,
        basis=sorted(basis),
        budget=limit,
    )


# ---------------------------------------------------------------------------
# doubled-datum presentation


@dataclass(frozen=True)
class EFReport:
    """Result of rewriting the algebra in raising/lowering generator form:
    relation residues, structure-map cross-checks and the triangular
    dimension count."""

    n: int
    relations: dict[str, bool]
    coproduct_match: bool
    antipode_match: bool
    triangular_ok: bool
    dims: tuple[int, int, int]  # (dim of +part, |G|, dim of -part)

    @property
    def ok(self) -> bool:
        return (
            all(self.relations.values())
            and self.coproduct_match
            and self.antipode_match
            and self.triangular_ok
        )


def _check_doubled(H: QuasiHopfAlgebra) -> int:
    D = H.datum
    if D.theta % 2:
        raise NotDoubledDatum("vertex count is odd")
    n = D.theta // 2
    big = H.big
    A = D.matrix
    for i in range(n):
        if D.h[i] != D.h[n + i]:
            raise NotDoubledDatum(f"h_{i} != h_{n + i}")
        neg = big.normalize(tuple(-x for x in D.char_exps[n + i]))
        if D.char_exps[i] != neg:
            raise NotDoubledDatum(f"chi_{i} is not the inverse of chi_{n + i}")
        if not D.doubling.in_iota_image(D.h[i]):
            raise NotDoubledDatum(f"h_{i} is not a base-group element")
    for i in range(n):
        for j in range(n):
            if A.a(i, j) != A.a(n + i, n + j):
                raise NotDoubledDatum("matrix halves differ")
            if A.a(i, n + j) != 0 or A.a(n + i, j) != 0:
                raise NotDoubledDatum("matrix halves are coupled")
    for (i, j) in H.linking:
        if not (j == i + n and i < n):
            raise NotDoubledDatum(
                "linking must pair each vertex with its double"
            )
    for v in H.rootparams.values():
        if not _coerce(v).is_zero():
            raise NotDoubledDatum("root parameters must vanish")
    return n


def _f_braiding(D: CartanDatum, n: int, gamma: Root, delta: Root) -> CycloNumber:
    """Braiding scalar for lowering-operator root vectors: the inverse
    transpose of the raising braiding, on half-size roots."""
    big = D.big_group
    L = big.exponent
    e = 0
    for u in range(n):
        for v in range(n):
            if gamma[u] and delta[v]:
                e -= gamma[u] * delta[v] * D.q_exponent(v, u)
    return _zeta(L, e)


def _f_root_vector(
    H: QuasiHopfAlgebra, n: int, F: list[AlgElt], vec: RootVector
) -> AlgElt:
    if vec.is_simple:
        return F[vec.vertex]
    left = _f_root_vector(H, n, F, vec.left)
    right = _f_root_vector(H, n, F, vec.right)
    q = _f_braiding(H.datum, n, vec.left.root[:n], vec.right.root[:n])
    return braided_commutator(left, right, q)


def ef_presentation(H: QuasiHopfAlgebra) -> EFReport:
    """Rewrite a doubled-datum algebra through raising operators E_i = X_i
    and lowering operators F_i = X_{n+i} hbar_i^{-1}, checking the four
    relation families, the closed-form coproduct and antipode of the
    generators, and the triangular dimension factorization."""
    n = _check_doubled(H)
    D = H.datum
    G = H.group
    big = H.big
    dbl = D.doubling
    L = big.exponent

    ell = G.exponent
    hbar = [dbl.iota_preimage(D.h[i]) for i in range(n)]
    E = [H.generator(i) for i in range(n)]
    F = [
        H.generator(n + i) * H.group_element(G.inv(hbar[i]))
        for i in range(n)
    ]

    relations: dict[str, bool] = {}

    # family 1: diagonal group action on the generators
    ok = True
    for k in range(G.rank):
        g = G.generator(k)
        ge = H.group_element(g)
        gi = H.group_element(G.inv(g))
        for j in range(n):
            cj = _zeta(L, D.chi_exponent(j, dbl.iota(g)))
            if not (ge * E[j] * gi - cj * E[j]).is_zero():
                ok = False
            if not (ge * F[j] * gi - cj.inverse() * F[j]).is_zero():
                ok = False
    relations["group_action"] = ok

    # family 2: raising/lowering commutators with linking values
    ok = True
    for i in range(n):
        for j in range(n):
            lhs = E[i] * F[j] - F[j] * E[i]
            lam_c = _coerce(H.linking.get((j, j + n), 0)) if i == j else CycloNumber.zero()
            rhs = H.zero()
            if not lam_c.is_zero():
                rhs = lam_c * (
                    H.group_element(G.inv(hbar[j])) - H.group_element(hbar[i])
                )
            if not (lhs - rhs).is_zero():
                ok = False
    relations["cross_commutators"] = ok

    # family 3: braided Serre relations for both sets
    ok = True
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            power = 1 - D.matrix.a(i, j)
            acc_e = E[j]
            acc_f = F[j]
            for step in range(power):
                # ad of E_i uses the raising braiding, of F_i the lowering one
                nu = tuple(
                    (step * (u == i)) + (u == j) for u in range(n)
                )
                qe = _zeta(L, sum(nu[v] * D.q_exponent(i, v) for v in range(n)))
                qf = _zeta(L, -sum(nu[v] * D.q_exponent(v, i) for v in range(n)))
                acc_e = E[i] * acc_e - qe * (acc_e * E[i])
                acc_f = F[i] * acc_f - qf * (acc_f * F[i])
            if not acc_e.is_zero() or not acc_f.is_zero():
                ok = False
    relations["serre"] = ok

    # family 4: root-vector power relations on both sets
    ok = True
    half_letters = [l for l in H.letters if all(l.root[n:][k] == 0 for k in range(n))]
    for l in half_letters:
        if not (H.letter_element(l.index) ** l.nilpotency).is_zero():
            ok = False
        falg = _f_root_vector(H, n, F, root_vector(D, l.root))
        if not (falg ** l.nilpotency).is_zero():
            ok = False
    relations["root_powers"] = ok

    # closed-form coproducts of the generators
    cop_ok = True
    for i in range(n):
        expect = TensorElt(H, 2, {})
        for f in G.elements():
            idf = H.idempotent(f)
            for g in G.elements():
                expect = expect + H.psi(i, f, g) * H.tensor_product(
                    E[i] * idf, H.idempotent(g)
                )
        expect = expect + H.tensor_product(H.group_element(hbar[i]), E[i])
        if H.coproduct(E[i]) != expect:
            cop_ok = False

        expect = TensorElt(H, 2, {})
        for f in G.elements():
            Ff = F[i] * H.idempotent(f)
            for g in G.elements():
                cg = _zeta(ell, G.chi_exponent(g, hbar[i]))
                expect = expect + (H.psi(n + i, f, g) * cg) * H.tensor_product(
                    Ff, H.idempotent(g)
                )
        expect = expect + H.tensor_product(H.one(), F[i])
        if H.coproduct(F[i]) != expect:
            cop_ok = False

    # closed-form antipodes of the generators
    ant_ok = True
    for i in range(n):
        expect = H.zero()
        for g in G.elements():
            expect = expect + H.effe(i, g) * (E[i] * H.idempotent(g))
        if H.antipode(E[i]) != expect:
            ant_ok = False

        lead = _zeta(L, D.chi_exponent(n + i, D.h[i]))
        expect = H.zero()
        for g in G.elements():
            c = H.effe(n + i, g) * _zeta(
                L, -2 * big.chi_exponent(H._lift(g), D.h[i])
            )
            expect = expect + c * (F[i] * H.idempotent(g))
        expect = lead * expect
        if H.antipode(F[i]) != expect:
            ant_ok = False

    dim_plus = 1
    dim_minus = 1
    for l in H.letters:
        if any(l.root[:n]):
            dim_plus *= l.nilpotency
        else:
            dim_minus *= l.nilpotency
    tri = dim_plus * G.size * dim_minus == H.dimension

    return EFReport(
        n=n,
        relations=relations,
        coproduct_match=cop_ok,
        antipode_match=ant_ok,
        triangular_ok=tri,
        dims=(dim_plus, G.size, dim_minus),
    )


