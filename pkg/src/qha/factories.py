"""Ready-made admissible data: cyclic, two-vertex, rank-2, doubled, and
series constructors.

Every factory returns a FactoryOutput (datum, linking, rootparams, params):
a validated CartanDatum, linking scalars lambda, root-vector scalars mu,
and a suggested admissible parameter sequence, verified by substitution.
Invalid inputs raise InvalidFactoryParams naming the violated constraint.

The series constructors (types A, B, C, D, E6, E7, E8, F4) share one
engine.  Vertices split into "plain" and "defect" classes so that every
edge joins a plain vertex to a defect vertex.  A plain vertex k owns two
generators of orders (p d, q d); a defect vertex owns two generators of
orders (p d^2, q d^2).  Each plain block is covered by exactly one defect
group-like (its parent, the smallest-index defect neighbor); covering a
plain block twice is inconsistent: the two defect characters would need
block sums adding to zero on the shared block, which kills the mod-d^2
solvability of the admissibility congruences.  Character block values are
fixed by the braiding equations q_ij q_ji = q_ii^{a_ij}:

    chi_k (plain):  beta_k on its own block; beta_k (a_ki - 2) on the
        parent block; beta_k a_ki on other defect neighbors' blocks.
    chi_i (defect): (zeta_{d^4}, zeta_{d^4}^{x_i d^2 - 1}) on its own pair
        with x_i = 2 beta_i - 2 sum(beta_k, k child); beta_k on each
        child block.

Here beta is the symmetrizer of the realized Cartan matrix, so every
q_ii = zeta_{d^2}^{2 beta_i p q} has exact order d^2.
"""

from __future__ import annotations

from math import gcd
from typing import NamedTuple

from qha.abgroup import AbelianGroup
from qha.cartan import CartanMatrix, classify, symmetrizer
from qha.cohomology import CocycleParams
from qha.datum import (
    CartanDatum,
    solve_gamma,
    validate_datum,
    validate_linking,
    validate_rootparams,
)
from qha.errors import InvalidFactoryParams, NotCartan, NotFiniteType

Root = tuple[int, ...]

SERIES_TYPES = ("A", "B", "C", "D", "E6", "E7", "E8", "F4")
RANK2_TYPES = ("A2", "B2", "G2")


class FactoryOutput(NamedTuple):
    datum: CartanDatum
    linking: dict[tuple[int, int], object]
    rootparams: dict[Root, object]
    params: CocycleParams


# ---------------------------------------------------------------------------
# shared input checks
# ---------------------------------------------------------------------------


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise InvalidFactoryParams(message)


def _require_odd(**vals: int) -> None:
    for name, v in vals.items():
        _require(isinstance(v, int), f"{name} must be an integer, got {v!r}")
        _require(v % 2 == 1, f"{name} must be odd, got {v}")


def _require_coprime(**vals: int) -> None:
    items = list(vals.items())
    for a in range(len(items)):
        for b in range(a + 1, len(items)):
            (na, va), (nb, vb) = items[a], items[b]
            _require(
                gcd(va, vb) == 1,
                f"{na} and {nb} must be coprime, got {va} and {vb}",
            )


def _finalize(
    D: CartanDatum,
    linking: dict[tuple[int, int], object],
    rootparams: dict[Root, object],
    params: CocycleParams,
) -> FactoryOutput:
    """Post-condition gate: the datum, both parameter maps, and the
    suggested cocycle parameters must all validate."""
    report = validate_datum(D)
    _require(
        report.ok,
        "constructed datum fails validation: "
        + "; ".join(c.name + (f" ({c.detail})" if c.detail else "") for c in report.failing()),
    )
    _require(params in solve_gamma(D), "suggested parameters fail the admissibility congruences")
    rep = validate_linking(D, linking)
    _require(rep.ok, "linking scalars fail validation: " + "; ".join(c.name for c in rep.failing()))
    rep = validate_rootparams(D, rootparams)
    _require(rep.ok, "root-vector scalars fail validation: " + "; ".join(c.name for c in rep.failing()))
    return FactoryOutput(D, linking, rootparams, params)


# ---------------------------------------------------------------------------
# cyclic base group
# ---------------------------------------------------------------------------


def factory_cyclic(m: int, s_vec, r_vec) -> FactoryOutput:
    """Base group Z_m with h_i = GG^{s_i} and chi_i(GG) = zeta_{m^2}^{r_i}.

    The Cartan matrix is inferred: a_ij is the unique value in
    {0, -1, -2, -3} with q_ij q_ji = q_ii^{a_ij}.  The suggested
    parameter is the least s in (0, m) with s r_i == s_i (mod m) for
    every vertex i.
    """
    _require(isinstance(m, int) and m > 1, f"m must be an integer above 1, got {m!r}")
    _require_odd(m=m)
    s_vec = tuple(int(x) for x in s_vec)
    r_vec = tuple(int(x) for x in r_vec)
    _require(len(s_vec) == len(r_vec), "s_vec and r_vec must have equal length")
    _require(len(s_vec) >= 1, "at least one vertex is required")
    mm = m * m
    for name, vec in (("s_vec", s_vec), ("r_vec", r_vec)):
        for x in vec:
            _require(0 < x < mm, f"{name} entries must lie strictly between 0 and m^2, got {x}")
    matrix = _infer_cartan(mm, s_vec, r_vec)
    D = CartanDatum(
        AbelianGroup((m,)),
        tuple((s,) for s in s_vec),
        tuple((r,) for r in r_vec),
        matrix,
    )
    params = solve_gamma(D).canonical_nonzero()
    _require(
        params is not None,
        "no nonzero admissible parameter: s r_i == s_i (mod m) has no solution s in (0, m)",
    )
    return _finalize(D, {}, {}, params)


def _infer_cartan(mm: int, s_vec: tuple[int, ...], r_vec: tuple[int, ...]) -> CartanMatrix:
    theta = len(s_vec)
    rows = [[2] * theta for _ in range(theta)]
    for i in range(theta):
        qii = (s_vec[i] * r_vec[i]) % mm
        _require(qii != 0, f"q_{i}{i} = 1: each vertex needs a nontrivial braiding value")
        for j in range(theta):
            if i == j:
                continue
            lhs = (s_vec[i] * r_vec[j] + s_vec[j] * r_vec[i]) % mm
            cands = [a for a in (0, -1, -2, -3) if (lhs - a * qii) % mm == 0]
            _require(
                bool(cands),
                f"braiding at vertex pair ({i}, {j}) admits no Cartan "
                "entry in {0, -1, -2, -3}",
            )
            # candidates can only collide as {a, a-3} with q_ii of order 3,
            # where a - 3 would violate the order restriction; keep the top
            rows[i][j] = max(cands)
    try:
        matrix = CartanMatrix.make(rows)
        classify(matrix)
    except (NotCartan, NotFiniteType) as exc:
        raise InvalidFactoryParams(f"inferred matrix is not finite Cartan: {exc}") from exc
    return matrix


# ---------------------------------------------------------------------------
# two linked vertices over Z_{Nd}
# ---------------------------------------------------------------------------


def factory_sl2_quasi(N: int, d: int, c: int, lam) -> FactoryOutput:
    """Two vertices of type A1 x A1 over Z_{Nd}, both group-likes GG^{Nd},
    characters zeta_{(Nd)^2}^{+-2d}, linked with scalar lam.

    The admissible diagonal parameters are the multiples of N below Nd;
    c must be one of them (d = 1 forces c = 0, the ordinary case).
    """
    _require(isinstance(N, int) and N > 2, f"N must be an integer above 2, got {N!r}")
    _require(isinstance(d, int) and d >= 1, f"d must be a positive integer, got {d!r}")
    _require_odd(N=N, d=d)
    _require(isinstance(c, int), f"c must be an integer, got {c!r}")
    m = N * d
    mm = m * m
    D = CartanDatum(
        AbelianGroup((m,)),
        ((m,), (m,)),
        (((2 * d) % mm,), ((-2 * d) % mm,)),
        CartanMatrix.make([[2, 0], [0, 2]]),
    )
    params = CocycleParams.make(D.base_group, diag=(c % m,))
    _require(
        params in solve_gamma(D),
        f"c = {c} is not admissible: need a multiple of {N} (mod {m})",
    )
    return _finalize(D, {(0, 1): lam}, {}, params)


# ---------------------------------------------------------------------------
# rank 2 over Z_md x Z_nd x Z_md^2 x Z_nd^2
# ---------------------------------------------------------------------------

# type -> (a, b, k, realized Cartan matrix)
_RANK2_RECIPES: dict[str, tuple[int, int, int, list[list[int]]]] = {
    "A2": (1, -3, 0, [[2, -1], [-1, 2]]),
    "B2": (1, -3, -1, [[2, -1], [-2, 2]]),
    "G2": (3, -9, -4, [[2, -1], [-3, 2]]),
}


def factory_rank2(kind: str, m: int, n: int, d: int) -> FactoryOutput:
    """Two vertices over Z_md x Z_nd x Z_md^2 x Z_nd^2 with braiding of
    order d^2 realizing the given rank-2 type.

    h_1 = (GG_1 GG_2)^{mn}, h_2 = (GG_1 GG_2 GG_3 GG_4)^{mn}; the
    characters take the values zeta_{d^2}^a, zeta_{d^2}^b, zeta_{d^4},
    zeta_{d^4}^{k d^2 - 1} with (a, b, k) fixed per type.
    """
    _require(kind in _RANK2_RECIPES, f"kind must be one of {RANK2_TYPES}, got {kind!r}")
    for name, v in (("m", m), ("n", n), ("d", d)):
        _require(isinstance(v, int) and v > 1, f"{name} must be an integer above 1, got {v!r}")
    _require_odd(m=m, n=n, d=d)
    _require_coprime(m=m, n=n, d=d)
    if kind == "G2":
        for name, v in (("m", m), ("n", n), ("d", d)):
            _require(v % 3 != 0, f"{name} must be coprime to 3 for G2, got {v}")
    a, b, k, rows = _RANK2_RECIPES[kind]
    d2 = d * d
    G = AbelianGroup((m * d, n * d, m * d2, n * d2))
    mn = m * n
    h = ((mn, mn, 0, 0), (mn, mn, mn, mn))
    chars = (
        (a * m * m, a * n * n, b * m * m * d2, b * n * n * d2),
        (a * m * m, a * n * n, m * m, (k * d2 - 1) * n * n),
    )
    D = CartanDatum(G, h, chars, CartanMatrix.make(rows))
    params = solve_gamma(D).canonical_nonzero()
    _require(params is not None, "no nonzero admissible parameters for these sizes")
    mu = {D.simple_root(0): 1}
    return _finalize(D, {}, mu, params)


# ---------------------------------------------------------------------------
# doubled datum over Z_m^n (m = pN) with linked vertex pairs
# ---------------------------------------------------------------------------


def factory_small_qgroup(matrix, N: int, p: int, l: int, k_vec) -> FactoryOutput:
    """Doubled datum over Z_{pN}^n: vertices i and i + n share the
    group-like GG_i^{pNl} and carry opposite characters
    chi_i(GG_j) = zeta_{(pN)^2}^{p d_i a_ij}, chi_{i+n} = chi_i^{-1}.

    Vertex pairs (i, i + n) are linked with scalar 1.  The suggested
    diagonal parameters are k_i N (with 0 < k_i < p), pair parameters 0.
    """
    try:
        matrix = matrix if isinstance(matrix, CartanMatrix) else CartanMatrix.make(matrix)
        comps = classify(matrix)
    except (NotCartan, NotFiniteType) as exc:
        raise InvalidFactoryParams(f"matrix is not finite Cartan: {exc}") from exc
    n = matrix.rank
    _require(n >= 1, "matrix must have positive rank")
    _require(isinstance(N, int) and N > 1, f"N must be an integer above 1, got {N!r}")
    _require(isinstance(p, int) and p > 1, f"p must be an integer above 1, got {p!r}")
    _require_odd(N=N, p=p)
    if any(comp.letter == "G" for comp in comps):
        _require(N % 3 != 0, f"N must be coprime to 3 when a G2 component is present, got {N}")
    m = p * N
    _require(isinstance(l, int) and 0 < l < m, f"l must lie strictly between 0 and {m}, got {l!r}")
    _require(l * p % m != 0, f"l p must be nonzero mod {m}, got l = {l}")
    k_vec = tuple(int(x) for x in k_vec)
    _require(len(k_vec) == n, f"k_vec must have {n} entries, got {len(k_vec)}")
    for ki in k_vec:
        _require(0 < ki < p, f"k_vec entries must lie strictly between 0 and {p}, got {ki}")

    dsym = symmetrizer(matrix)
    mm = m * m
    G = AbelianGroup((m,) * n)
    hrow = lambda i: tuple(m * l if j == i else 0 for j in range(n))  # noqa: E731
    h = tuple(hrow(i) for i in range(n)) + tuple(hrow(i) for i in range(n))
    top = [
        tuple((p * dsym[i] * matrix.a(i, j)) % mm for j in range(n))
        for i in range(n)
    ]
    chars = tuple(top) + tuple(tuple(-x % mm for x in row) for row in top)
    big = [[0] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        for j in range(n):
            big[i][j] = matrix.a(i, j)
            big[n + i][n + j] = matrix.a(i, j)
    D = CartanDatum(G, h, chars, CartanMatrix.make(big))
    params = CocycleParams.make(G, diag=tuple(ki * N for ki in k_vec))
    linking = {(i, i + n): 1 for i in range(n)}
    return _finalize(D, linking, {}, params)


# ---------------------------------------------------------------------------
# series engine
# ---------------------------------------------------------------------------


def _series_layout(kind: str, n: int) -> tuple[list[tuple[int, int]], set[int], list[int]]:
    """Edges, defect vertex set, and beta weights (0-based vertices)."""
    if kind in ("A", "B", "C"):
        _require(n >= 3, f"series {kind} needs n >= 3, got {n}")
        edges = [(i, i + 1) for i in range(n - 1)]
        defect = set(range(1, n, 2))
        beta = [1] * n
        if kind == "B":
            beta[0] = 2
        elif kind == "C":
            beta = [2] * n
            beta[0] = 1
    elif kind == "D":
        _require(n >= 4, f"series D needs n >= 4, got {n}")
        edges = [(0, 2), (1, 2)] + [(i, i + 1) for i in range(2, n - 1)]
        defect = set(range(2, n, 2))
        beta = [1] * n
    elif kind in ("E6", "E7", "E8"):
        rank = int(kind[1])
        _require(n == rank, f"series {kind} needs n = {rank}, got {n}")
        edges = [(0, 1), (1, 2), (2, 3), (2, 4), (4, 5), (5, 6), (6, 7)][: n - 1]
        defect = {0, 2, 5, 7} & set(range(n))
        beta = [1] * n
    elif kind == "F4":
        _require(n == 4, f"series F4 needs n = 4, got {n}")
        edges = [(0, 1), (1, 2), (2, 3)]
        defect = {1, 3}
        beta = [1, 1, 2, 2]
    else:
        raise InvalidFactoryParams(f"kind must be one of {SERIES_TYPES}, got {kind!r}")
    return edges, defect, beta


def factory_series(kind: str, n: int, p: int, q: int, d: int) -> FactoryOutput:
    """Datum of the given series type with braiding of order d^2 over a
    base group with two generators per vertex (orders p d, q d on plain
    vertices; p d^2, q d^2 on defect vertices).

    Root-vector scalars are 1 at every plain simple root; the suggested
    parameters are the least admissible values, nonzero at every
    generator.
    """
    _require(isinstance(n, int) and n >= 1, f"n must be a positive integer, got {n!r}")
    for name, v in (("p", p), ("q", q), ("d", d)):
        _require(isinstance(v, int) and v > 1, f"{name} must be an integer above 1, got {v!r}")
    _require_odd(p=p, q=q, d=d)
    _require_coprime(p=p, q=q, d=d)
    edges, defect, beta = _series_layout(kind, n)

    rows = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for u, v in edges:
        g = gcd(beta[u], beta[v])
        rows[u][v] = -beta[v] // g
        rows[v][u] = -beta[u] // g
    matrix = CartanMatrix.make(rows)

    nbrs: dict[int, list[int]] = {v: [] for v in range(n)}
    for u, v in edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    parent = {
        k: min(i for i in nbrs[k] if i in defect)
        for k in range(n)
        if k not in defect
    }
    children: dict[int, list[int]] = {i: [] for i in defect}
    for k, i in parent.items():
        children[i].append(k)

    d2, d4 = d * d, d**4
    orders = []
    for v in range(n):
        scale = d2 if v in defect else d
        orders += [p * scale, q * scale]
    G = AbelianGroup(tuple(orders))
    conds = [o * o for o in orders]

    covered = {i: sorted({i, *children[i]}) if i in defect else [i] for i in range(n)}
    h = []
    for i in range(n):
        row = [0] * (2 * n)
        for blk in covered[i]:
            row[2 * blk] = row[2 * blk + 1] = p * q
        h.append(tuple(row))

    def put_d2(row: list[int], blk: int, y: int) -> None:
        for g in (2 * blk, 2 * blk + 1):
            row[g] = (row[g] + y * (conds[g] // d2)) % conds[g]

    chars = []
    for i in range(n):
        row = [0] * (2 * n)
        if i in defect:
            row[2 * i] = conds[2 * i] // d4
            row[2 * i + 1] = (
                (2 * beta[i] - 2 * sum(beta[k] for k in children[i])) * d2 - 1
            ) * (conds[2 * i + 1] // d4) % conds[2 * i + 1]
            for k in children[i]:
                put_d2(row, k, beta[k])
        else:
            put_d2(row, i, beta[i])
            for j in nbrs[i]:
                shift = -2 if j == parent[i] else 0
                put_d2(row, j, beta[i] * (matrix.a(i, j) + shift))
        chars.append(tuple(row))

    D = CartanDatum(G, tuple(h), tuple(chars), matrix)
    params = solve_gamma(D).canonical_nonzero()
    _require(params is not None, "no nonzero admissible parameters for these sizes")
    mu = {D.simple_root(k): 1 for k in range(n) if k not in defect}
    return _finalize(D, {}, mu, params)
