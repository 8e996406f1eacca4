"""Finite Cartan matrices: validation, Dynkin classification up to vertex
relabeling, symmetrizers, root systems, and convex orders of positive
roots from a deterministic longest-word algorithm.

Roots are integer coordinate vectors over the simple roots.  The longest
word is built greedily: starting from the identity, repeatedly apply the
simple reflection with the smallest index that still increases the
length (w(alpha_i) > 0), which makes the resulting reduced word - and
hence every convex order and PBW basis downstream - reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q
from functools import reduce
from math import gcd

from qha.errors import NotCartan, NotFiniteType

Root = tuple[int, ...]


@dataclass(frozen=True)
class CartanMatrix:
    entries: tuple[tuple[int, ...], ...]

    @staticmethod
    def make(rows) -> "CartanMatrix":
        entries = tuple(tuple(int(x) for x in row) for row in rows)
        n = len(entries)
        if any(len(row) != n for row in entries):
            raise NotCartan("matrix is not square")
        for i in range(n):
            if entries[i][i] != 2:
                raise NotCartan(f"diagonal entry a[{i}][{i}] = {entries[i][i]} != 2")
            for j in range(n):
                if i == j:
                    continue
                if entries[i][j] > 0:
                    raise NotCartan(f"positive off-diagonal entry a[{i}][{j}]")
                if (entries[i][j] == 0) != (entries[j][i] == 0):
                    raise NotCartan(f"zero pattern asymmetric at ({i},{j})")
        return CartanMatrix(entries)

    @property
    def rank(self) -> int:
        return len(self.entries)

    def a(self, i: int, j: int) -> int:
        return self.entries[i][j]

    def submatrix(self, indices: tuple[int, ...]) -> "CartanMatrix":
        return CartanMatrix(
            tuple(tuple(self.entries[i][j] for j in indices) for i in indices)
        )


def components(A: CartanMatrix) -> list[tuple[int, ...]]:
    """Connected components of the Dynkin diagram, each sorted, in order
    of smallest vertex."""
    n = A.rank
    seen = [False] * n
    out = []
    for start in range(n):
        if seen[start]:
            continue
        comp = []
        stack = [start]
        seen[start] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(n):
                if not seen[j] and A.a(i, j) != 0:
                    seen[j] = True
                    stack.append(j)
        out.append(tuple(sorted(comp)))
    return out


# ---------------------------------------------------------------------------
# Dynkin templates (Bourbaki labeling) and classification
# ---------------------------------------------------------------------------


def _chain(n: int) -> list[list[int]]:
    m = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i in range(n - 1):
        m[i][i + 1] = m[i + 1][i] = -1
    return m


def _template(letter: str, n: int) -> tuple[tuple[int, ...], ...] | None:
    if letter == "A" and n >= 1:
        m = _chain(n)
    elif letter == "B" and n >= 2:
        m = _chain(n)
        m[n - 1][n - 2] = -2  # the short root's row carries the -2
    elif letter == "C" and n >= 3:
        m = _chain(n)
        m[n - 2][n - 1] = -2
    elif letter == "D" and n >= 4:
        m = _chain(n - 1)
        for row in m:
            row.append(0)
        m.append([0] * n)
        m[n - 1][n - 1] = 2
        m[n - 2][n - 1] = m[n - 1][n - 2] = 0
        m[n - 3][n - 1] = m[n - 1][n - 3] = -1
    elif letter == "E" and n in (6, 7, 8):
        m = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
        edges = [(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)]
        if n >= 7:
            edges.append((5, 6))
        if n == 8:
            edges.append((6, 7))
        for i, j in edges:
            m[i][j] = m[j][i] = -1
    elif letter == "F" and n == 4:
        m = _chain(4)
        m[2][1] = -2
    elif letter == "G" and n == 2:
        m = [[2, -1], [-3, 2]]
    else:
        return None
    return tuple(tuple(row) for row in m)


def _match_template(A: CartanMatrix, comp: tuple[int, ...], T) -> tuple[int, ...] | None:
    """Backtracking search for a bijection comp -> template vertices
    preserving all matrix entries; returns the relabeling or None."""
    n = len(comp)
    assign = [-1] * n
    used = [False] * n

    def ok(i: int, j: int) -> bool:
        for k in range(i):
            if A.a(comp[i], comp[k]) != T[j][assign[k]]:
                return False
            if A.a(comp[k], comp[i]) != T[assign[k]][j]:
                return False
        return True

    def bt(i: int) -> bool:
        if i == n:
            return True
        for j in range(n):
            if not used[j] and ok(i, j):
                assign[i] = j
                used[j] = True
                if bt(i + 1):
                    return True
                assign[i] = -1
                used[j] = False
        return False

    return tuple(assign) if bt(0) else None


@dataclass(frozen=True)
class ComponentType:
    indices: tuple[int, ...]  # vertices of the component, sorted
    letter: str  # one of A B C D E F G
    relabel: tuple[int, ...]  # indices[k] plays template vertex relabel[k]

    @property
    def rank(self) -> int:
        return len(self.indices)

    @property
    def label(self) -> str:
        return f"{self.letter}{self.rank}"


def classify(A) -> list[ComponentType]:
    """Validate the Cartan axioms and classify every connected component
    against the finite-type templates up to relabeling."""
    if not isinstance(A, CartanMatrix):
        A = CartanMatrix.make(A)
    out = []
    for comp in components(A):
        n = len(comp)
        found = None
        for letter in "ABCDEFG":
            T = _template(letter, n)
            if T is None:
                continue
            relabel = _match_template(A, comp, T)
            if relabel is not None:
                found = ComponentType(comp, letter, relabel)
                break
        if found is None:
            raise NotFiniteType(f"component {comp} matches no finite Dynkin type")
        out.append(found)
    return out


def symmetrizer(A) -> tuple[int, ...]:
    """Minimal positive integers d with d_i a_ij = d_j a_ji, per component."""
    if not isinstance(A, CartanMatrix):
        A = CartanMatrix.make(A)
    classify(A)
    n = A.rank
    d: list[Q | None] = [None] * n
    for comp in components(A):
        root = comp[0]
        d[root] = Q(1)
        stack = [root]
        while stack:
            i = stack.pop()
            for j in comp:
                if A.a(i, j) != 0 and i != j:
                    val = d[i] * Q(A.a(i, j), A.a(j, i))
                    if d[j] is None:
                        d[j] = val
                        stack.append(j)
                    elif d[j] != val:
                        raise NotCartan("matrix is not symmetrizable")
        denom = reduce(lambda x, y: x * y // gcd(x, y), (d[i].denominator for i in comp))
        nums = [d[i] * denom for i in comp]
        g = reduce(gcd, (int(x) for x in nums))
        for i in comp:
            d[i] = Q(int(d[i] * denom) // g)
    return tuple(int(x) for x in d)


# ---------------------------------------------------------------------------
# roots, longest word, convex order
# ---------------------------------------------------------------------------


def _reflect(A: CartanMatrix, i: int, v: Root) -> Root:
    w = list(v)
    w[i] -= sum(A.a(i, j) * v[j] for j in range(A.rank))
    return tuple(w)


def positive_roots(A) -> list[Root]:
    """All positive roots (nonnegative coordinate vectors in the closure
    of the simple roots under simple reflections), sorted."""
    if not isinstance(A, CartanMatrix):
        A = CartanMatrix.make(A)
    classify(A)
    n = A.rank
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    roots = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for v in frontier:
            for i in range(n):
                w = _reflect(A, i, v)
                if w not in roots:
                    roots.add(w)
                    nxt.append(w)
        frontier = nxt
    return sorted(v for v in roots if all(x >= 0 for x in v))


def longest_word(A) -> tuple[int, ...]:
    """Deterministic reduced word for the longest Weyl element: always
    apply the smallest simple reflection that increases the length."""
    if not isinstance(A, CartanMatrix):
        A = CartanMatrix.make(A)
    P = len(positive_roots(A))
    n = A.rank
    # columns of w acting on the simple roots
    cols = [list(tuple(int(i == j) for i in range(n))) for j in range(n)]
    word = []
    for _ in range(P):
        pick = None
        for i in range(n):
            col = cols[i]
            if any(col) and all(x >= 0 for x in col):
                pick = i
                break
        assert pick is not None, "ran out of ascents before reaching w0"
        word.append(pick)
        ci = cols[pick][:]
        for j in range(n):
            aij = A.a(pick, j)
            if j == pick:
                cols[j] = [-x for x in ci]
            elif aij:
                cols[j] = [x - aij * y for x, y in zip(cols[j], ci)]
    assert all(not all(x >= 0 for x in col) for col in cols)
    return tuple(word)


def convex_order(A, word: tuple[int, ...]) -> list[Root]:
    """beta_l = s_{i_1} ... s_{i_{l-1}} (alpha_{i_l}) along a reduced word."""
    if not isinstance(A, CartanMatrix):
        A = CartanMatrix.make(A)
    n = A.rank
    out = []
    w = [tuple(int(i == j) for j in range(n)) for i in range(n)]  # images of simples
    for idx in word:
        out.append(w[idx])
        ci = w[idx]
        new = []
        for j in range(n):
            aij = A.a(idx, j)
            if j == idx:
                new.append(tuple(-x for x in ci))
            elif aij:
                new.append(tuple(x - aij * y for x, y in zip(w[j], ci)))
            else:
                new.append(w[j])
        w = new
    return out


def height(v: Root) -> int:
    return sum(v)


@dataclass(frozen=True)
class RootSystem:
    matrix: CartanMatrix
    positive_roots: tuple[Root, ...]
    simple: tuple[Root, ...]
    longest_word: tuple[int, ...]
    convex_order: tuple[Root, ...]


def root_system(A) -> RootSystem:
    if not isinstance(A, CartanMatrix):
        A = CartanMatrix.make(A)
    pos = positive_roots(A)
    word = longest_word(A)
    conv = convex_order(A, word)
    assert sorted(conv) == pos, "convex order does not enumerate the positive roots"
    n = A.rank
    return RootSystem(
        A,
        tuple(pos),
        tuple(tuple(int(i == j) for j in range(n)) for i in range(n)),
        word,
        tuple(conv),
    )
