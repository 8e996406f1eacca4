"""Cartan data over doubled abelian groups.

A datum fixes the base group G = Z_{m_1} x ... x Z_{m_n}, its doubling
GG (orders m_i**2), group-likes h_1, ..., h_theta in GG, characters
chi_i of GG given by exponent rows r_ij (chi_i(GG_j) = zeta_{mm_j}^{r_ij}),
and a finite Cartan matrix.  Derived data: s_ij (exponents of h_i),
braiding constants q_ij = chi_j(h_i), connected components, and the
common orders N_J of the q_ii per component.

The admissible cocycle parameters form a product of per-variable
congruence solution sets:

    c_j  r_ij == s_ij   (mod m_j)   for every vertex i,
    c_ij r_lj == 0      (mod m_j)   for every vertex l,
    c_ij m_i  == 0      (mod m_j),
    c_rst = 0.

Each variable is solved by the gcd criterion (a x == b mod n solvable
iff gcd(a, n) | b, solutions an arithmetic progression) and the
progressions are intersected by CRT, so the result is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from math import gcd, prod

from qha.abgroup import AbelianGroup, Doubling, Element, GroupAlgebraElement
from qha.cartan import CartanMatrix, ComponentType, classify, positive_roots, symmetrizer
from qha.cohomology import CocycleParams
from qha.cyclotomic import CycloNumber
from qha.errors import GroupMismatch, UnsupportedRecursion
from qha.modlinalg import crt_pair

Root = tuple[int, ...]


# ---------------------------------------------------------------------------
# validation reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[CheckResult, ...]
    notes: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failing(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "checks": [
                {"name": c.name, "passed": c.passed, "detail": c.detail}
                for c in self.checks
            ],
            "notes": list(self.notes),
        }


# ---------------------------------------------------------------------------
# the datum
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CartanDatum:
    base_group: AbelianGroup
    h: tuple[Element, ...]  # exponent tuples over the doubled group
    char_exps: tuple[tuple[int, ...], ...]  # r[i][j] with chi_i(GG_j) = zeta^{r_ij}
    matrix: CartanMatrix

    def __post_init__(self):
        big = self.base_group.doubled()
        if self.matrix.rank != len(self.h) or len(self.char_exps) != len(self.h):
            raise GroupMismatch("matrix rank, h, and character rows must agree")
        object.__setattr__(self, "h", tuple(big.normalize(x) for x in self.h))
        object.__setattr__(
            self, "char_exps", tuple(big.normalize(r) for r in self.char_exps)
        )

    # -- basic views ----------------------------------------------------------

    @property
    def theta(self) -> int:
        return len(self.h)

    @cached_property
    def doubling(self) -> Doubling:
        return Doubling(self.base_group)

    @cached_property
    def big_group(self) -> AbelianGroup:
        return self.doubling.big

    @property
    def s_matrix(self) -> tuple[Element, ...]:
        return self.h

    def s(self, i: int, j: int) -> int:
        return self.h[i][j]

    def r(self, i: int, j: int) -> int:
        return self.char_exps[i][j]

    # -- characters and braiding constants ------------------------------------

    def chi_exponent(self, i: int, f: Element) -> int:
        """Exponent e with chi_i(f) = zeta_L^e, L = exponent of GG."""
        big = self.big_group
        L = big.exponent
        return sum(
            (L // m) * r * x for r, x, m in zip(self.char_exps[i], f, big.orders)
        ) % L

    def chi(self, i: int, f: Element) -> CycloNumber:
        return CycloNumber.zeta(self.big_group.exponent, self.chi_exponent(i, f))

    def q_exponent(self, i: int, j: int) -> int:
        """q_ij = chi_j(h_i) as an exponent at the big-group conductor."""
        return self.chi_exponent(j, self.h[i])

    def q(self, i: int, j: int) -> CycloNumber:
        return CycloNumber.zeta(self.big_group.exponent, self.q_exponent(i, j))

    def q_order(self, i: int) -> int:
        L = self.big_group.exponent
        return L // gcd(L, self.q_exponent(i, i))

    def chi_alpha_exps(self, alpha: Root) -> Element:
        """Character row of chi_alpha = prod chi_i^{alpha_i}."""
        big = self.big_group
        return tuple(
            sum(a * self.char_exps[i][j] for i, a in enumerate(alpha)) % big.orders[j]
            for j in range(big.rank)
        )

    def h_alpha(self, alpha: Root) -> Element:
        big = self.big_group
        out = big.identity
        for i, a in enumerate(alpha):
            out = big.mul(out, big.pow(self.h[i], a))
        return out

    # -- components -------------------------------------------------------------

    @cached_property
    def component_types(self) -> tuple[ComponentType, ...]:
        return tuple(classify(self.matrix))

    def component_of(self, i: int) -> int:
        for k, comp in enumerate(self.component_types):
            if i in comp.indices:
                return k
        raise ValueError(f"vertex {i} out of range")

    def same_component(self, i: int, j: int) -> bool:
        return self.component_of(i) == self.component_of(j)

    @cached_property
    def component_orders(self) -> tuple[int, ...]:
        """N_J per component: the common order of the q_ii, i in J."""
        out = []
        for comp in self.component_types:
            orders = {self.q_order(i) for i in comp.indices}
            if len(orders) != 1:
                raise ValueError(f"q_ii orders differ on component {comp.indices}")
            out.append(orders.pop())
        return tuple(out)

    def N_of_vertex(self, i: int) -> int:
        return self.component_orders[self.component_of(i)]

    @cached_property
    def positive_roots_by_component(self) -> tuple[tuple[Root, ...], ...]:
        """Positive roots of each component, embedded in Z^theta coordinates."""
        out = []
        for comp in self.component_types:
            sub = self.matrix.submatrix(comp.indices)
            embedded = []
            for root in positive_roots(sub):
                full = [0] * self.theta
                for pos, coeff in zip(comp.indices, root):
                    full[pos] = coeff
                embedded.append(tuple(full))
            out.append(tuple(embedded))
        return tuple(out)

    @cached_property
    def all_positive_roots(self) -> tuple[Root, ...]:
        return tuple(r for comp in self.positive_roots_by_component for r in comp)

    def simple_root(self, i: int) -> Root:
        return tuple(int(k == i) for k in range(self.theta))


def dimension(D: CartanDatum) -> int:
    """|G| * prod_J N_J^{#positive roots of J}, PBW exponents 0..N_J-1."""
    return D.base_group.size * prod(
        N ** len(roots)
        for N, roots in zip(D.component_orders, D.positive_roots_by_component)
    )


# ---------------------------------------------------------------------------
# datum validation
# ---------------------------------------------------------------------------


def _lemma_q_exponent(D: CartanDatum, comp: ComponentType, N: int) -> int | None:
    """Exponent x with q_ii = (zeta_N^x)^{2 d_i} for all i in the component,
    q = zeta_N^x of odd order; None if no such x exists."""
    d = symmetrizer(D.matrix.submatrix(comp.indices))
    L = D.big_group.exponent
    sol = (0, 1)
    for pos, i in enumerate(comp.indices):
        e = D.q_exponent(i, i)
        # q_ii = zeta_N^{e'} with e' = e / (L/N); need 2 d_i x == e' (mod N)
        ep = e // (L // N)
        step = solve_congruence(2 * d[pos], ep, N)
        if step is None:
            return None
        sol = intersect_progressions(sol, step)
        if sol is None:
            return None
    return sol[0]


def validate_datum(D: CartanDatum) -> ValidationReport:
    """Structured pass/fail over all datum axioms; never raises on a
    mathematical failure."""
    checks: list[CheckResult] = []
    notes: list[str] = []

    try:
        comps = D.component_types
        checks.append(CheckResult("cartan_matrix", True, f"{[c.label for c in comps]}"))
    except Exception as exc:  # NotCartan / NotFiniteType
        checks.append(CheckResult("cartan_matrix", False, str(exc)))
        return ValidationReport(tuple(checks), tuple(notes))

    bad = []
    for i in range(D.theta):
        for j in range(D.theta):
            lhs = D.q(i, j) * D.q(j, i)
            rhs = D.q(i, i) ** D.matrix.a(i, j)
            if lhs != rhs:
                bad.append(f"q_{i}{j} q_{j}{i} != q_{i}{i}^a_{i}{j}")
    checks.append(CheckResult("braiding_compatibility", not bad, "; ".join(bad)))

    bad = [f"q_{i}{i} has even order {D.q_order(i)}" for i in range(D.theta) if D.q_order(i) % 2 == 0]
    checks.append(CheckResult("odd_order", not bad, "; ".join(bad)))

    bad = []
    orders_by_comp: list[int | None] = []
    for comp in comps:
        orders = {D.q_order(i) for i in comp.indices}
        if len(orders) != 1:
            bad.append(f"orders {sorted(orders)} differ on component {comp.indices}")
            orders_by_comp.append(None)
        else:
            orders_by_comp.append(orders.pop())
    checks.append(CheckResult("constant_order_per_component", not bad, "; ".join(bad)))

    bad = [
        f"component {comp.indices} is G2 with order divisible by 3"
        for comp, N in zip(comps, orders_by_comp)
        if comp.letter == "G" and N is not None and N % 3 == 0
    ]
    checks.append(CheckResult("g2_order_prime_to_3", not bad, "; ".join(bad)))

    bad = []
    witnesses = []
    for comp, N in zip(comps, orders_by_comp):
        if N is None or N % 2 == 0:
            continue
        x = _lemma_q_exponent(D, comp, N)
        if x is None:
            bad.append(f"no q with q_ii = q^(2 d_i) on component {comp.indices}")
        else:
            witnesses.append(f"{comp.indices}: q = zeta_{N}^{x}")
    checks.append(
        CheckResult("symmetrized_root_exists", not bad, "; ".join(bad or witnesses))
    )

    notes.append("root-vector exponents range over 0..N_J-1 (strict PBW bound)")
    return ValidationReport(tuple(checks), tuple(notes))


# ---------------------------------------------------------------------------
# congruences and the admissible parameter set
# ---------------------------------------------------------------------------


def solve_congruence(a: int, b: int, n: int) -> tuple[int, int] | None:
    """Solutions of a x == b (mod n) as (base, step) with step | n, or None.
    Solvable iff gcd(a, n) divides b."""
    if n == 1:
        return (0, 1)
    a %= n
    b %= n
    g = gcd(a, n)
    if b % g:
        return None
    if a == 0:
        return (0, 1) if b == 0 else None
    step = n // g
    base = (b // g) * pow(a // g, -1, step) % step
    return (base, step)


def intersect_progressions(
    p1: tuple[int, int] | None, p2: tuple[int, int] | None
) -> tuple[int, int] | None:
    if p1 is None or p2 is None:
        return None
    return crt_pair(p1[0], p1[1], p2[0], p2[1])


@dataclass(frozen=True)
class Progression:
    """{x in [0, limit) : x == base (mod step)}."""

    base: int
    step: int
    limit: int

    def __contains__(self, x: int) -> bool:
        return 0 <= x < self.limit and x % self.step == self.base

    def values(self) -> range:
        return range(self.base, self.limit, self.step)

    def min_value(self) -> int:
        return self.base

    def min_nonzero(self) -> int | None:
        if self.base > 0:
            return self.base
        nxt = self.step
        return nxt if nxt < self.limit else None


@dataclass(frozen=True)
class Congruence:
    variable: tuple  # ("diag", j) or ("pair", (i, j))
    coeff: int
    rhs: int
    modulus: int  # gcd-reduced: gcd(coeff, modulus) = 1, or marker below
    solvable: bool = True


def gamma_conditions(D: CartanDatum) -> list[Congruence]:
    """The per-variable congruence system, gcd-reduced."""
    m = D.base_group.orders
    n = D.base_group.rank
    out: list[Congruence] = []

    def reduced(var, a, b, mod):
        a %= mod
        b %= mod
        g = gcd(a, mod)  # mod >= 1, so g >= 1
        if b % g:
            return Congruence(var, a, b, mod, solvable=False)
        if a == 0:
            return Congruence(var, 0, 0, 1)
        return Congruence(var, a // g, b // g, mod // g)

    for j in range(n):
        for i in range(D.theta):
            out.append(reduced(("diag", j), D.r(i, j), D.s(i, j), m[j]))
    for i in range(n):
        for j in range(i + 1, n):
            for l in range(D.theta):
                out.append(reduced(("pair", (i, j)), D.r(l, j), 0, m[j]))
            out.append(reduced(("pair", (i, j)), m[i], 0, m[j]))
    return out


@dataclass(frozen=True)
class GammaSet:
    """Per-variable solution progressions; the admissible set is their
    product (triple parameters are forced to zero)."""

    group: AbelianGroup
    diag: tuple[Progression | None, ...]
    pair: tuple[tuple[tuple[int, int], Progression | None], ...]

    @property
    def is_empty(self) -> bool:
        return any(p is None for p in self.diag) or any(
            p is None for _, p in self.pair
        )

    def __contains__(self, params: CocycleParams) -> bool:
        if params.group != self.group:
            raise GroupMismatch("parameters over a different group")
        if self.is_empty or params.triple:
            return False
        if any(p is not None and c not in p for c, p in zip(params.diag, self.diag)):
            return False
        pd = params.pair_dict
        return all(pd.get(key, 0) in p for key, p in self.pair)

    def size(self) -> int:
        if self.is_empty:
            return 0
        return prod(len(p.values()) for p in self.diag) * prod(
            len(p.values()) for _, p in self.pair
        )

    def enumerate_params(self):
        """All admissible parameter sequences, lexicographically."""
        if self.is_empty:
            return
        pair_keys = [key for key, _ in self.pair]
        for diag in product(*(p.values() for p in self.diag)):
            for pairvals in product(*(p.values() for _, p in self.pair)):
                yield CocycleParams.make(
                    self.group, diag=diag, pair=dict(zip(pair_keys, pairvals))
                )

    def canonical_nonzero(self) -> CocycleParams | None:
        """Lexicographically smallest admissible nonzero parameter sequence
        (variable order: diagonal, then pairs)."""
        if self.is_empty:
            return None
        mins = [p.min_value() for p in self.diag] + [
            p.min_value() for _, p in self.pair
        ]
        progs = list(self.diag) + [p for _, p in self.pair]
        vals = mins
        if not any(mins):
            # all-minimum is zero: bump the last variable that can be nonzero
            for k in range(len(progs) - 1, -1, -1):
                nz = progs[k].min_nonzero()
                if nz is not None:
                    vals = mins[:]
                    vals[k] = nz
                    break
            else:
                return None
        n = self.group.rank
        return CocycleParams.make(
            self.group,
            diag=vals[:n],
            pair={key: v for (key, _), v in zip(self.pair, vals[n:])},
        )


def solve_gamma(D: CartanDatum) -> GammaSet:
    """Exact solution of the admissibility congruences, per variable."""
    m = D.base_group.orders
    n = D.base_group.rank
    solved: dict[tuple, tuple[int, int] | None] = {}
    for c in gamma_conditions(D):
        prev = solved.get(c.variable, (0, 1))
        if not c.solvable:
            solved[c.variable] = None
        else:
            solved[c.variable] = intersect_progressions(
                prev, solve_congruence(c.coeff, c.rhs, c.modulus)
            )
    def prog(var, limit):
        sol = solved.get(var, (0, 1))
        if sol is None:
            return None
        base, step = sol
        if base >= limit:
            return None
        return Progression(base, step, limit)

    diag = tuple(prog(("diag", j), m[j]) for j in range(n))
    pair = tuple(
        ((i, j), prog(("pair", (i, j)), gcd(m[i], m[j])))
        for i in range(n)
        for j in range(i + 1, n)
    )
    return GammaSet(D.base_group, diag, pair)


# ---------------------------------------------------------------------------
# linking and root-vector parameters
# ---------------------------------------------------------------------------


def _is_zero_scalar(x) -> bool:
    if isinstance(x, CycloNumber):
        return x.is_zero()
    return x == 0


def validate_linking(D: CartanDatum, lam: dict[tuple[int, int], object]) -> ValidationReport:
    """lam maps (i, j) with i < j, i not ~ j to scalars; checks the base
    conditions (h_i h_j != 1, chi_i chi_j trivial) and the membership
    h_i h_j in the embedded base group for every nonzero entry."""
    checks: list[CheckResult] = []
    big = D.big_group
    dbl = D.doubling
    for (i, j), val in sorted(lam.items()):
        name = f"lambda[{i},{j}]"
        if _is_zero_scalar(val):
            checks.append(CheckResult(name, True, "zero"))
            continue
        if not 0 <= i < j < D.theta:
            checks.append(CheckResult(name, False, "indices must satisfy i < j"))
            continue
        if D.same_component(i, j):
            checks.append(CheckResult(name, False, "vertices are connected"))
            continue
        hh = big.mul(D.h[i], D.h[j])
        if hh == big.identity:
            checks.append(CheckResult(name, False, "h_i h_j = 1"))
            continue
        chi_sum = tuple(
            (a + b) % mm for a, b, mm in zip(D.char_exps[i], D.char_exps[j], big.orders)
        )
        if any(chi_sum):
            checks.append(CheckResult(name, False, "chi_i chi_j is not trivial"))
            continue
        if not dbl.in_iota_image(hh):
            checks.append(CheckResult(name, False, "h_i h_j outside the embedded base group"))
            continue
        checks.append(CheckResult(name, True))
    if not checks:
        checks.append(CheckResult("lambda", True, "no entries"))
    return ValidationReport(tuple(checks))


def validate_rootparams(D: CartanDatum, mu: dict[Root, object]) -> ValidationReport:
    """mu maps positive roots (coordinate tuples over the vertices) to
    scalars; nonzero entries need h_alpha^N != 1, chi_alpha^N trivial,
    and h_alpha^N in the embedded base group."""
    checks: list[CheckResult] = []
    notes: list[str] = []
    big = D.big_group
    dbl = D.doubling
    roots = set(D.all_positive_roots)
    simples = {D.simple_root(i) for i in range(D.theta)}
    for alpha, val in sorted(mu.items()):
        name = f"mu[{','.join(map(str, alpha))}]"
        if _is_zero_scalar(val):
            checks.append(CheckResult(name, True, "zero"))
            continue
        if alpha not in roots:
            checks.append(CheckResult(name, False, "not a positive root"))
            continue
        if alpha not in simples:
            notes.append(f"{name}: nonsimple root parameter needs the general recursion")
        comp = D.component_of(next(i for i, a in enumerate(alpha) if a))
        N = D.component_orders[comp]
        hN = big.pow(D.h_alpha(alpha), N)
        if hN == big.identity:
            checks.append(CheckResult(name, False, "h_alpha^N = 1"))
            continue
        chiN = tuple((a * N) % mm for a, mm in zip(D.chi_alpha_exps(alpha), big.orders))
        if any(chiN):
            checks.append(CheckResult(name, False, "chi_alpha^N is not trivial"))
            continue
        if not dbl.in_iota_image(hN):
            checks.append(
                CheckResult(name, False, "h_alpha^N outside the embedded base group")
            )
            continue
        checks.append(CheckResult(name, True))
    if not checks:
        checks.append(CheckResult("mu", True, "no entries"))
    return ValidationReport(tuple(checks), tuple(notes))


def u_alpha(D: CartanDatum, mu: dict[Root, object], alpha: Root) -> GroupAlgebraElement:
    """Right-hand side of the root vector relation X_alpha^N = u_alpha, an
    element of the base group algebra.  Simple alpha_i with mu_i != 0 gives
    mu_i (1 - iota^{-1}(h_i^N)); zero parameters give 0.  Nonsimple roots
    with nonzero parameter need the general recursion, which is out of
    scope."""
    val = mu.get(alpha, 0)
    zero = GroupAlgebraElement(D.base_group)
    if _is_zero_scalar(val):
        return zero
    if alpha not in set(D.all_positive_roots):
        raise ValueError(f"{alpha} is not a positive root")
    i = next(k for k, a in enumerate(alpha) if a)
    if alpha != D.simple_root(i):
        raise UnsupportedRecursion(
            f"root parameter at nonsimple root {alpha} requires the braided "
            "coproduct recursion"
        )
    N = D.N_of_vertex(i)
    hN = D.big_group.pow(D.h[i], N)
    if not D.doubling.in_iota_image(hN):
        raise ValueError("h_alpha^N outside the embedded base group; validate mu first")
    g = D.doubling.iota_preimage(hN)
    one = GroupAlgebraElement.one(D.base_group)
    return val * (one - GroupAlgebraElement.of_group_element(D.base_group, g))
