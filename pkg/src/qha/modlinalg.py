"""Exact linear algebra over Z and Z/p^k for congruence systems.

Two engines:

1. `smith_normal_form`: classic SNF over Z with unimodular transforms,
   for small dense systems and cross-validation.

2. `PrimePowerEchelon`: a row-echelon (Howell-form) engine over Z/p^k
   with vectorized batch insertion, built for deciding solvability of
   A x = b (mod p^k) where A has tens of thousands of rows.

   Rows are inserted incrementally; each pivot is normalized to p^v
   (unit part divided out).  Whenever a pivot with valuation v > 0 is
   created, its annihilator multiple p^(k-v) * row is fed back in; this
   closure makes the form complete over Z/p^k (a la Howell): every
   row-space element whose leading coordinate is at column >= j is a
   combination of kept rows with pivot column >= j.

   Solvability of A x = B c (mod q), simultaneously for a whole family
   of right-hand sides parameterized linearly by c, reduces to the rows
   of the echelon of [A | B] whose A-part is zero: their B-parts w give
   the complete condition system {w . c = 0 (mod q)}.  (The row space of
   [A | B] is the image of y -> (y A, y B); pairs (0, w) in it are
   exactly w = y B with y A = 0, and such y range over the annihilator
   of the column space of A, which by duality over Z/q cuts out exactly
   that column space.)
"""

from __future__ import annotations

from math import gcd

import numpy as np

# ---------------------------------------------------------------------------
# Smith normal form over Z
# ---------------------------------------------------------------------------


def smith_normal_form(
    mat: list[list[int]],
) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Return (D, U, V) with U @ mat @ V = D diagonal, U, V unimodular,
    and each diagonal entry dividing the next."""
    A = [row[:] for row in mat]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_op(i, j, a, b, c, d):  # (row_i, row_j) <- (a ri + b rj, c ri + d rj)
        for M in (A, U):
            ri, rj = M[i], M[j]
            for k in range(len(ri)):
                ri[k], rj[k] = a * ri[k] + b * rj[k], c * ri[k] + d * rj[k]

    def col_op(i, j, a, b, c, d):
        for M in (A, V):
            for row in M:
                row[i], row[j] = a * row[i] + b * row[j], c * row[i] + d * row[j]

    def xgcd(a, b):
        old_r, r = a, b
        old_s, s = 1, 0
        old_t, t = 0, 1
        while r:
            qq = old_r // r
            old_r, r = r, old_r - qq * r
            old_s, s = s, old_s - qq * s
            old_t, t = t, old_t - qq * t
        return old_r, old_s, old_t

    t = 0
    while t < min(m, n):
        piv = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j]:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        i, j = piv
        if i != t:
            row_op(t, i, 0, 1, 1, 0)
        if j != t:
            col_op(t, j, 0, 1, 1, 0)
        while True:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    done = False
                    if A[i][t] % A[t][t] == 0:
                        row_op(t, i, 1, 0, -(A[i][t] // A[t][t]), 1)
                    else:
                        g, x, y = xgcd(A[t][t], A[i][t])
                        a, b = A[t][t] // g, A[i][t] // g
                        row_op(t, i, x, y, -b, a)
            for j in range(t + 1, n):
                if A[t][j]:
                    done = False
                    if A[t][j] % A[t][t] == 0:
                        col_op(t, j, 1, 0, -(A[t][j] // A[t][t]), 1)
                    else:
                        g, x, y = xgcd(A[t][t], A[t][j])
                        a, b = A[t][t] // g, A[t][j] // g
                        col_op(t, j, x, y, -b, a)
            if done:
                break
        bad = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if A[i][j] % A[t][t] != 0:
                    bad = i
                    break
            if bad:
                break
        if bad is not None:
            row_op(t, bad, 1, 1, 0, 1)
            continue
        if A[t][t] < 0:
            for k in range(n):
                A[t][k] = -A[t][k]
            for k in range(m):
                U[t][k] = -U[t][k]
        t += 1
    return A, U, V


def solve_linear_mod_snf(A: list[list[int]], b: list[int], q: int) -> list[int] | None:
    """Solve A x = b (mod q) via SNF over Z of [A | q I].  Small systems
    only.  Returns a witness x (mod q) or None."""
    m = len(A)
    n = len(A[0]) if m else 0
    M = [A[i][:] + [q if j == i else 0 for j in range(m)] for i in range(m)]
    D, U, V = smith_normal_form(M)
    ub = [sum(U[i][k] * b[k] for k in range(m)) for i in range(m)]
    # [A | qI] has full row rank, so D has m nonzero diagonal entries
    y = [0] * (n + m)
    for i in range(m):
        d = D[i][i]
        assert d != 0
        if ub[i] % d != 0:
            return None
        y[i] = ub[i] // d
    x_full = [sum(V[i][k] * y[k] for k in range(m)) for i in range(n + m)]
    return [x_full[i] % q for i in range(n)]


# ---------------------------------------------------------------------------
# Howell-style echelon over Z/p^k
# ---------------------------------------------------------------------------


def _valuation(x: int, p: int) -> int:
    v = 0
    while x and x % p == 0:
        x //= p
        v += 1
    return v


class PrimePowerEchelon:
    """Incremental Howell-form echelon over Z/p^k."""

    def __init__(self, ncols: int, p: int, k: int):
        self.ncols = ncols
        self.p = p
        self.k = k
        self.q = p**k
        # residues and elimination products stay below q^2
        self.dtype = np.int32 if (self.q - 1) ** 2 < 2**31 else np.int64
        self._store = np.zeros((ncols, ncols), dtype=self.dtype)
        self.nrows = 0
        self.pivot_of_col = np.full(ncols, -1, dtype=np.int64)
        self.val_of_col = np.full(ncols, k + 1, dtype=np.int64)

    @property
    def rows(self) -> np.ndarray:
        return self._store[: self.nrows]

    # -- scalar helpers ------------------------------------------------------

    def _normalize_row(self, row: np.ndarray, lead: int) -> tuple[np.ndarray, int]:
        """Scale row so its entry at `lead` becomes exactly p^v."""
        x = int(row[lead])
        v = _valuation(x, self.p)
        unit = x // (self.p**v)
        if unit % self.q != 1:
            row = (row * pow(unit, -1, self.q)) % self.q
        return row, v

    def _append_pivot(self, row: np.ndarray, lead: int) -> list[np.ndarray]:
        """Install row as the pivot for column `lead`; return displaced and
        annihilator rows that must be re-inserted."""
        row, v = self._normalize_row(row, lead)
        out = []
        old = int(self.pivot_of_col[lead])
        if old >= 0:
            assert v < self.val_of_col[lead], "exchange requires smaller valuation"
            out.append(self._store[old].copy())
            self._store[old] = row
        else:
            self._store[self.nrows] = row
            self.pivot_of_col[lead] = self.nrows
            self.nrows += 1
        self.val_of_col[lead] = v
        if v > 0:
            ann = (row * (self.q // self.p**v)) % self.q
            if ann.any():
                out.append(ann)
        return out

    # -- batch insertion ------------------------------------------------------

    def insert(self, block: np.ndarray) -> None:
        """Insert rows (shape (m, ncols), any int dtype) into the echelon."""
        pending: list[np.ndarray] = [
            (np.asarray(block, dtype=np.int64) % self.q).astype(self.dtype)
        ]
        while pending:
            C = pending.pop()
            if C.ndim == 1:
                C = C[None, :]
            while C.shape[0]:
                C = C[C.any(axis=1)]
                if not C.shape[0]:
                    break
                nrows = C.shape[0]
                lead = np.argmax(C != 0, axis=1)
                lead_entry = C[np.arange(nrows), lead]
                lead_val = self._valuations(lead_entry)
                prow = self.pivot_of_col[lead]
                pval = self.val_of_col[lead]
                can_elim = (prow >= 0) & (pval <= lead_val)
                if can_elim.any():
                    idx = np.nonzero(can_elim)[0]
                    pv = self.p ** pval[idx]
                    factors = ((lead_entry[idx] // pv) % self.q).astype(self.dtype)
                    C[idx] = (C[idx] - factors[:, None] * self._store[prow[idx]]) % self.q
                rest = np.nonzero(~can_elim)[0]
                if rest.size:
                    # install one new pivot per distinct lead column
                    order = np.argsort(lead[rest], kind="stable")
                    rest = rest[order]
                    chosen = np.ones(rest.size, dtype=bool)
                    chosen[1:] = lead[rest][1:] != lead[rest][:-1]
                    extras: list[np.ndarray] = []
                    for i in rest[chosen]:
                        extras.extend(self._append_pivot(C[i].copy(), int(lead[i])))
                    if extras:
                        pending.append(np.stack(extras))
                    keep = np.ones(C.shape[0], dtype=bool)
                    keep[rest[chosen]] = False
                    C = C[keep]

    def _valuations(self, x: np.ndarray) -> np.ndarray:
        v = np.zeros(x.shape, dtype=np.int64)
        cur = x.copy()
        for _ in range(self.k):
            divisible = (cur % self.p == 0) & (cur != 0)
            v += divisible
            cur = np.where(divisible, cur // self.p, cur)
        return v

    # -- closure + canonical clearing ------------------------------------------

    def close(self) -> None:
        """Annihilator closure, then clear pivot columns in other rows."""
        while True:
            before = (self.nrows, int(self.val_of_col.sum()))
            extras = []
            for col in np.nonzero(self.pivot_of_col >= 0)[0]:
                v = int(self.val_of_col[col])
                if v > 0:
                    ann = (self._store[self.pivot_of_col[col]] * (self.q // self.p**v)) % self.q
                    if ann.any():
                        extras.append(ann)
            if extras:
                self.insert(np.stack(extras))
            if (self.nrows, int(self.val_of_col.sum())) == before:
                break
        for col in np.nonzero(self.pivot_of_col >= 0)[0]:
            r = int(self.pivot_of_col[col])
            v = int(self.val_of_col[col])
            pv = self.p**v
            entries = self.rows[:, col].copy()
            entries[r] = 0
            tgt = np.nonzero((entries % pv == 0) & (entries != 0))[0]
            if tgt.size:
                factors = (entries[tgt] // pv) % self.q
                self._store[tgt] = (self._store[tgt] - factors[:, None] * self._store[r]) % self.q

    # -- queries -----------------------------------------------------------------

    def condition_rows(self, split: int) -> np.ndarray:
        """Rows whose part left of `split` is zero: their right parts span
        all row-space elements supported right of the split."""
        live = self.rows[(self.rows[:, :split] == 0).all(axis=1)]
        return live[:, split:][live[:, split:].any(axis=1)]

    def back_substitute(self, split: int) -> np.ndarray | None:
        """For an echelon of [A | b] (b = single last column), return x with
        A x = b (mod q), free variables set to 0, or None if inconsistent."""
        n = split
        if self.condition_rows(split).size:
            return None
        x = np.zeros(n, dtype=np.int64)
        cols = sorted(
            (int(c) for c in np.nonzero(self.pivot_of_col[:n] >= 0)[0]), reverse=True
        )
        for col in cols:
            r = self._store[int(self.pivot_of_col[col])]
            v = int(self.val_of_col[col])
            pv = self.p**v
            rhs = (int(r[n]) - int(r[:n] @ x)) % self.q
            if rhs % pv != 0:
                return None
            x[col] = rhs // pv
        return x


def echelon_blocks(blocks, ncols: int, q: int) -> list[tuple[int, int, np.ndarray]]:
    """Echelonize the row blocks (mod each prime power of q).  Returns
    (p, k, rows) per factor.  The kept rows have the same solution set as
    the input system when the columns are read as [coefficients | rhs]:
    every operation is an invertible row transform, a consequence-row
    insertion, or a zero-row drop."""
    factors = _prime_power_factors(q)
    echelons = [PrimePowerEchelon(ncols, p, k) for p, k in factors]
    for blk in blocks:
        blk = np.asarray(blk)
        for e in echelons:
            e.insert(blk)
    out = []
    for e in echelons:
        e.close()
        out.append((e.p, e.k, e.rows.copy()))
    return out


def solve_family_conditions(
    blocks, nunknowns: int, nparams: int, q: int
) -> list[tuple[int, np.ndarray]]:
    """Echelonize [A | B] (mod each prime power of q) blockwise.  `blocks`
    yields row blocks of the concatenated matrix [A | B].  Returns a list
    of (prime_power, condition_matrix): A x = B c (mod p^k) is solvable
    iff w . c = 0 (mod p^k) for every condition row w."""
    out = []
    for p, k, rows in echelon_blocks(blocks, nunknowns + nparams, q):
        live = rows[(rows[:, :nunknowns] == 0).all(axis=1)]
        conds = live[:, nunknowns:]
        out.append((p**k, conds[conds.any(axis=1)]))
    return out


def snf_mod_prime_power(A: np.ndarray, p: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Smith normal form of A over Z/p^k: returns (diag_vals, U) where U is
    invertible mod p^k and U A V = diag(p^v) for some invertible V.  A row
    with diag_vals[i] = k corresponds to a zero diagonal entry.  A x = b
    (mod p^k) is solvable iff p^{diag_vals[i]} divides (U b)[i] for all i."""
    q = p**k
    A = np.asarray(A, dtype=np.int64) % q
    r, n = A.shape
    U = np.eye(r, dtype=np.int64)
    diag_vals = np.full(r, k, dtype=np.int64)

    def val(x: np.ndarray) -> np.ndarray:
        v = np.zeros(x.shape, dtype=np.int64)
        cur = x.copy()
        for _ in range(k):
            d = (cur % p == 0) & (cur != 0)
            v += d
            cur = np.where(d, cur // p, cur)
        v[x == 0] = k
        return v

    t = 0
    while t < min(r, n):
        sub = A[t:, t:]
        units = sub % p != 0
        if units.any():
            v = 0
            i, j = np.unravel_index(int(units.argmax()), sub.shape)
        else:
            vals = val(sub)
            v = int(vals.min())
            if v >= k:
                break
            i, j = np.unravel_index(int(vals.argmin()), vals.shape)
        i += t
        j += t
        if i != t:
            A[[t, i]] = A[[i, t]]
            U[[t, i]] = U[[i, t]]
        if j != t:
            A[:, [t, j]] = A[:, [j, t]]
        pv = p**v
        u = int(A[t, t]) // pv
        uinv = pow(u, -1, q)
        A[t] = A[t] * uinv % q
        U[t] = U[t] * uinv % q
        # clear column t in every other row (all entries have valuation >= v)
        fac = A[:, t] // pv
        fac[t] = 0
        nz = np.nonzero(fac)[0]
        if nz.size:
            A[nz] = (A[nz] - fac[nz, None] * A[t][None, :]) % q
            U[nz] = (U[nz] - fac[nz, None] * U[t][None, :]) % q
        # clearing row t is a pure column transform: col t is zero off-pivot
        A[t, :] = 0
        A[t, t] = pv
        diag_vals[t] = v
        t += 1
    return diag_vals, U


def solve_linear_mod(A: np.ndarray, b: np.ndarray, q: int) -> np.ndarray | None:
    """Solve A x = b (mod q) exactly; returns a witness or None."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    m, n = A.shape
    sols = []
    for p, k in _prime_power_factors(q):
        e = PrimePowerEchelon(n + 1, p, k)
        e.insert(np.concatenate([A, b[:, None]], axis=1))
        e.close()
        x = e.back_substitute(n)
        if x is None:
            return None
        sols.append((p**k, x))
    x = np.zeros(n, dtype=np.int64)
    mod = 1
    for pk, xp in sols:
        x = _crt_vec(x, mod, xp, pk)
        mod *= pk
    return x % q


def _crt_vec(a: np.ndarray, m: int, b: np.ndarray, n: int) -> np.ndarray:
    if m == 1:
        return b.copy()
    inv = pow(m % n, -1, n)
    t = ((b - a) % n) * inv % n
    return a + m * t


def _prime_power_factors(q: int) -> list[tuple[int, int]]:
    out = []
    d = 2
    while d * d <= q:
        if q % d == 0:
            k = 0
            while q % d == 0:
                q //= d
                k += 1
            out.append((d, k))
        d += 1
    if q > 1:
        out.append((q, 1))
    return out


def crt_pair(r1: int, m1: int, r2: int, m2: int) -> tuple[int, int] | None:
    """Combine x = r1 (mod m1), x = r2 (mod m2); None if incompatible."""
    g = gcd(m1, m2)
    if (r1 - r2) % g != 0:
        return None
    l = m1 // g * m2
    if m2 == g:
        return r1 % l, l
    t = ((r2 - r1) // g * pow(m1 // g, -1, m2 // g)) % (m2 // g)
    return (r1 + m1 * t) % l, l
