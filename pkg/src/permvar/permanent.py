"""Exact permanent engines, permanental rank, and permanental-ideal builders.

Also builds the derived integer and symbolic matrices whose entries are
sub-permanents of a fixed point: the symmetric matrices controlling tangent
directions, and the Kirkup matrices together with the determinantal
generators of the nondegenerate permanental ideal.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .errors import (
    CapacityError,
    InternalConsistencyError,
    PreconditionError,
    StructuralError,
)
from .ring import (
    DEGREVLEX,
    ZZ,
    MPoly,
    PolyMatrix,
    PolyRing,
    VarUniverse,
    matrix_det,
)

SYMBOLIC_PERM_BOUND = 7


# ---------------------------------------------------------------------------
# plain numeric matrices (lists of lists of int / Fraction)


def _num_dims(mat):
    m = len(mat)
    n = len(mat[0]) if m else 0
    if any(len(r) != n for r in mat):
        raise StructuralError("ragged matrix")
    return m, n


def perm_numeric(mat, method: str = "ryser"):
    """Exact permanent of a square constant matrix.

    ``ryser`` walks subsets in Gray-code order updating row sums in O(n);
    ``glynn`` is the +-1 vector formula and serves as a cross-check engine.
    """
    m, n = _num_dims(mat)
    if m != n:
        raise StructuralError("permanent of a non-square matrix")
    if n == 0:
        return 1
    if method == "ryser":
        return _perm_ryser(mat, n)
    if method == "glynn":
        return _perm_glynn(mat, n)
    raise StructuralError(f"unknown permanent method {method!r}")


def _perm_ryser(mat, n):
    # perm(A) = (-1)^n sum_{S != 0} (-1)^{|S|} prod_i sum_{j in S} a_ij
    sums = [0] * n
    total = 0
    size = 0
    gray = 0
    for g in range(1, 1 << n):
        new_gray = g ^ (g >> 1)
        bit = gray ^ new_gray
        j = bit.bit_length() - 1
        if new_gray & bit:
            size += 1
            for i in range(n):
                sums[i] += mat[i][j]
        else:
            size -= 1
            for i in range(n):
                sums[i] -= mat[i][j]
        gray = new_gray
        prod = 1
        for s in sums:
            if s == 0:
                prod = 0
                break
            prod *= s
        if prod:
            total += -prod if (size & 1) else prod
    return -total if (n & 1) else total


def _perm_glynn(mat, n):
    # perm(A) = 2^{1-n} sum_{d in {1,-1}^n, d_1 = 1} (prod d) prod_j sum_i d_i a_ij
    sums = [sum(mat[i][j] for i in range(n)) for j in range(n)]
    total = 1
    for s in sums:
        total *= s
    sign = 1
    gray = 0
    for g in range(1, 1 << (n - 1)):
        new_gray = g ^ (g >> 1)
        bit = gray ^ new_gray
        i = bit.bit_length()  # flip delta_i for row i (rows 1..n-1)
        gray = new_gray
        flip = -2 if new_gray & bit else 2
        for j in range(n):
            sums[j] += flip * mat[i][j]
        sign = -sign
        prod = 1
        for s in sums:
            if s == 0:
                prod = 0
                break
            prod *= s
        total += sign * prod
    if isinstance(total, Fraction):
        return total / (1 << (n - 1))
    q, r = divmod(total, 1 << (n - 1))
    if r:
        raise InternalConsistencyError("Glynn sum not divisible by 2^(n-1)")
    return q


def prk(mat) -> int:
    """Permanental rank: the largest h with a nonzero h x h sub-permanent.

    Exhaustive search descending from min(dims), with a Laplace-expansion
    memo shared across all (row set, column set) pairs of one call.
    """
    m, n = _num_dims(mat)
    memo = {(): {(): 1}}

    def perm_sub(rows: tuple, cols: tuple):
        by_cols = memo.setdefault(rows, {})
        val = by_cols.get(cols)
        if val is None:
            r0 = rows[0]
            rest = rows[1:]
            val = 0
            for idx, c in enumerate(cols):
                a = mat[r0][c]
                if a:
                    val += a * perm_sub(rest, cols[:idx] + cols[idx + 1 :])
            by_cols[cols] = val
        return val

    for h in range(min(m, n), 0, -1):
        for rows in combinations(range(m), h):
            for cols in combinations(range(n), h):
                if perm_sub(rows, cols) != 0:
                    return h
    return 0


def matrix_from_json(text_or_obj):
    """Parse a JSON grid of integer/rational strings (or numbers)."""
    obj = json.loads(text_or_obj) if isinstance(text_or_obj, str) else text_or_obj
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise StructuralError("matrix JSON must be a non-empty list of rows")
    out = []
    for r in obj:
        row = []
        for x in r:
            if isinstance(x, int):
                row.append(x)
            elif isinstance(x, str):
                f = Fraction(x)
                row.append(f.numerator if f.denominator == 1 else f)
            else:
                raise StructuralError(f"bad matrix entry {x!r}")
        out.append(row)
    _num_dims(out)
    return out


def matrix_to_json(mat) -> list:
    return [[str(x) for x in r] for r in mat]


# ---------------------------------------------------------------------------
# symbolic matrices and ideals


def generic_matrix(k: int, n: int, domain=ZZ, order=DEGREVLEX) -> PolyMatrix:
    """The k x n matrix of independent variables x_i_j."""
    ring = PolyRing(VarUniverse.matrix(k, n), domain, order)
    return PolyMatrix([[ring.var(i, j) for j in range(1, n + 1)] for i in range(1, k + 1)])


def hankel_matrix_2xn(n: int, domain=ZZ, order=DEGREVLEX) -> PolyMatrix:
    """2 x n matrix constant on anti-diagonals over variables x0..xn."""
    if n < 2:
        raise StructuralError("Hankel matrix needs n >= 2")
    ring = PolyRing(VarUniverse.free([f"x{i}" for i in range(n + 1)]), domain, order)
    g = ring.gens()
    return PolyMatrix([[g[i + j] for j in range(n)] for i in range(2)])


def circulant_hankel_matrix(k: int, n: int, nvars: int, domain=ZZ, order=DEGREVLEX) -> PolyMatrix:
    """k x n matrix with entry (i, j) = x_{(i+j-2) mod nvars}, 1-based,
    named x_1_1 .. x_1_nvars."""
    ring = PolyRing(VarUniverse.matrix(1, nvars), domain, order)
    g = ring.gens()
    return PolyMatrix([[g[(i + j) % nvars] for j in range(n)] for i in range(k)])


@dataclass(frozen=True)
class GenericMatrixSpec:
    """Which matrix to build and which size of permanents to take."""

    k: int
    n: int
    h: int | None = None
    pattern: str = "generic"  # generic | hankel2xn | circulant
    period: int | None = None  # circulant only: number of distinct variables

    def __post_init__(self):
        h = self.h if self.h is not None else self.k
        if h > min(self.k, self.n):
            raise StructuralError(f"h={h} exceeds min{self.k, self.n}")
        if self.pattern not in ("generic", "hankel2xn", "circulant"):
            raise StructuralError(f"unknown pattern {self.pattern!r}")
        if self.pattern == "hankel2xn" and self.k != 2:
            raise StructuralError("hankel2xn pattern requires k = 2")
        if self.period is not None and self.pattern != "circulant":
            raise StructuralError("period only applies to circulant patterns")

    @property
    def perm_size(self) -> int:
        return self.h if self.h is not None else self.k

    def matrix(self, domain=ZZ, order=DEGREVLEX) -> PolyMatrix:
        if self.pattern == "generic":
            return generic_matrix(self.k, self.n, domain, order)
        if self.pattern == "hankel2xn":
            return hankel_matrix_2xn(self.n, domain, order)
        nvars = self.period if self.period is not None else self.k + 1
        return circulant_hankel_matrix(self.k, self.n, nvars, domain, order)


def perm_symbolic(M: PolyMatrix, bound: int = SYMBOLIC_PERM_BOUND) -> MPoly:
    """Exact permanent of a square PolyMatrix by column-subset DP."""
    m, n = M.dims
    if m != n:
        raise StructuralError("permanent of a non-square matrix")
    if n > bound and not M.is_constant():
        raise CapacityError(
            f"symbolic permanent of size {n} exceeds bound {bound}; evaluate "
            "numerically or raise the bound for structured entries"
        )
    ring = M.ring
    if M.is_constant():
        return ring.const(perm_numeric(M.constant_rows()))
    # states: column subset used so far -> accumulated polynomial
    states = {0: ring.one}
    for i in range(n):
        row = M.rows[i]
        nxt: dict = {}
        for mask, poly in states.items():
            for j in range(n):
                bit = 1 << j
                if mask & bit or not row[j]:
                    continue
                prod = poly * row[j]
                key = mask | bit
                if key in nxt:
                    nxt[key] = nxt[key] + prod
                else:
                    nxt[key] = prod
        states = nxt
        if not states:
            return ring.zero
    return states.get((1 << n) - 1, ring.zero)


def subpermanent(M: PolyMatrix, rows, cols, bound: int = SYMBOLIC_PERM_BOUND) -> MPoly:
    return perm_symbolic(M.submatrix(rows, cols), bound)


def permanental_ideal(spec: GenericMatrixSpec, domain=ZZ, order=DEGREVLEX):
    """All h x h permanents of the described matrix.

    Subsets are enumerated in colexicographic order, columns outermost, so
    for the maximal case h = k, n = k+1 the list is
    [perm dropping column k+1, ..., perm dropping column 1].
    """
    M = spec.matrix(domain, order)
    return matrix_permanents(spec.perm_size, M)


def matrix_permanents(h: int, M: PolyMatrix, bound: int = SYMBOLIC_PERM_BOUND):
    """All h x h permanents of M, colex subset order, columns outermost."""
    m, n = M.dims
    if h > min(m, n):
        raise StructuralError(f"{h}x{h} permanents of a {m}x{n} matrix")
    out = []
    for cols in _colex_subsets(n, h):
        for rows in _colex_subsets(m, h):
            out.append(subpermanent(M, rows, cols, bound))
    return out


def _colex_subsets(n: int, h: int):
    subs = sorted(combinations(range(n), h), key=lambda s: tuple(reversed(s)))
    return subs


# ---------------------------------------------------------------------------
# Kirkup matrices


@dataclass(frozen=True)
class KirkupMatrix:
    """Integer k x (k+1) matrix all of whose maximal permanents vanish."""

    k: int
    rows: tuple = field(repr=False)

    def as_lists(self):
        return [list(r) for r in self.rows]

    def weight_zero_part(self):
        """Rows 2..k, the nonzero part of the associated fixed point."""
        return [list(r) for r in self.rows[1:]]


def kirkup_matrix(k: int) -> KirkupMatrix:
    """Build the k x (k+1) Kirkup matrix and verify all k x k permanents vanish."""
    if k < 3:
        raise PreconditionError("Kirkup matrices need k >= 3")
    rows = []
    for _ in range(k - 2):
        rows.append([1] * k + [2 - 3 * k])
    rows.append([1] * (k - 1) + [2 - 2 * k, (k - 2) * (k - 1)])
    rows.append([1] * (k - 1) + [k, (2 * k - 1) * (k - 2)])
    mat = [tuple(r) for r in rows]
    for j in range(k + 1):
        cols = [c for c in range(k + 1) if c != j]
        sub = [[r[c] for c in cols] for r in mat]
        if perm_numeric(sub) != 0:
            raise InternalConsistencyError(
                f"Kirkup construction broken: permanent dropping column {j+1} is nonzero"
            )
    return KirkupMatrix(k, tuple(mat))


# ---------------------------------------------------------------------------
# derived matrices of sub-permanents


def derivative_matrices(p, mode: str):
    """Symmetric matrix of sub-permanents of a constant matrix.

    mode "B1": p is (k-1) x (k+1); entry (i, j), i != j, is the permanent of
    p omitting columns i and j.  mode "L": p is (k-2) x k, same recipe.
    The diagonal is zero and the result is symmetric by construction.
    """
    m, n = _num_dims(p)
    if mode == "B1":
        if n != m + 2:
            raise StructuralError(f"mode B1 expects (k-1) x (k+1), got {m}x{n}")
    elif mode == "L":
        if n != m + 2:
            raise StructuralError(f"mode L expects (k-2) x k, got {m}x{n}")
    else:
        raise StructuralError(f"unknown mode {mode!r}")
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            cols = [c for c in range(n) if c != i and c != j]
            val = perm_numeric([[row[c] for c in cols] for row in p])
            out[i][j] = val
            out[j][i] = val
    return out


def derivative_matrix_symbolic(M: PolyMatrix, bound: int = SYMBOLIC_PERM_BOUND) -> PolyMatrix:
    """Symbolic analogue: entries are permanents of M omitting column pairs."""
    m, n = M.dims
    if n != m + 2:
        raise StructuralError(f"expected m x (m+2) input, got {m}x{n}")
    ring = M.ring
    rows = [[ring.zero] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            cols = [c for c in range(n) if c != i and c != j]
            val = subpermanent(M, range(m), cols, bound)
            rows[i][j] = val
            rows[j][i] = val
    return PolyMatrix(rows)


def perm_partial_matrices(k: int, domain=ZZ):
    """The per-row-variable partials of the maximal permanents of the
    generic k x (k+1) matrix, as a nested lookup.

    partials[l][i][j] = d perm_j / d x_{l+1, i+1}: the (k-1) x (k-1)
    permanent of the generic matrix omitting row l and columns i and j
    (zero when i = j).  All indices 0-based.
    """
    M = generic_matrix(k, k + 1, domain)
    ring = M.ring
    n = k + 1
    out = []
    for ell in range(k):
        rows_kept = [r for r in range(k) if r != ell]
        grid = [[ring.zero] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                cols = [c for c in range(n) if c != i and c != j]
                grid[i][j] = subpermanent(M, rows_kept, cols)
        out.append(grid)
    return out


def kirkup_generators(k: int, domain=ZZ, bound: int = 4):
    """Determinantal members of the nondegenerate permanental ideal.

    Returns (f_list, g_list): f_j is the determinant of the partials matrix
    A_j with its zero column removed (j = 1..k+1), and g_l the determinant of
    the symmetric matrix B_l (l = 1..k).
    """
    if k < 3:
        raise PreconditionError("needs k >= 3")
    if k > bound:
        raise CapacityError(f"symbolic generators for k={k} exceed bound {bound}")
    partials = perm_partial_matrices(k, domain)
    n = k + 1
    f_list = []
    for j in range(n):
        # A_j rows l = 1..k, columns i = 1..k+1; its column j is zero
        rows = [[partials[ell][i][j] for i in range(n) if i != j] for ell in range(k)]
        f_list.append(matrix_det(PolyMatrix(rows)))
    g_list = []
    for ell in range(k):
        rows = [[partials[ell][i][j] for j in range(n)] for i in range(n)]
        g_list.append(matrix_det(PolyMatrix(rows)))
    return f_list, g_list


def partials_matrix_A(k: int, j: int, domain=ZZ) -> PolyMatrix:
    """The k x (k+1) matrix of partials of perm_j (1-based j); column j is zero."""
    partials = perm_partial_matrices(k, domain)
    n = k + 1
    return PolyMatrix(
        [[partials[ell][i][j - 1] for i in range(n)] for ell in range(k)]
    )


def partials_matrix_B(k: int, ell: int, domain=ZZ) -> PolyMatrix:
    """The symmetric (k+1) x (k+1) matrix of partials along row ell (1-based)."""
    partials = perm_partial_matrices(k, domain)
    n = k + 1
    return PolyMatrix(
        [[partials[ell - 1][i][j] for j in range(n)] for i in range(n)]
    )
