"""Exact dense linear algebra over ZZ, QQ and prime fields.

Everything here works on plain lists of lists holding ``int`` or
``fractions.Fraction`` entries (or ints reduced mod p for the ``_modp``
variants).  No floating point anywhere.
"""

from fractions import Fraction
from math import gcd

from .errors import StructuralError


def _dims(rows):
    m = len(rows)
    n = len(rows[0]) if m else 0
    if any(len(r) != n for r in rows):
        raise StructuralError("ragged matrix")
    return m, n


def bareiss_det(rows):
    """Determinant by fraction-free (Bareiss) elimination.

    Exact over ZZ (stays integral throughout) and over QQ.
    """
    m, n = _dims(rows)
    if m != n:
        raise StructuralError("determinant of a non-square matrix")
    if n == 0:
        return 1
    a = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * pivot - a[i][k] * a[k][j]
                q, r = divmod(num, prev) if isinstance(num, int) else (num / prev, 0)
                if r != 0:
                    raise AssertionError("Bareiss division not exact")
                a[i][j] = q
            a[i][k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def rank(rows):
    """Rank over the field of fractions, via fraction-free elimination."""
    m, n = _dims(rows)
    a = [list(r) for r in rows]
    rk = 0
    row = 0
    for col in range(n):
        piv = None
        for i in range(row, m):
            if a[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        pr = a[row]
        for i in range(row + 1, m):
            f = a[i][col]
            if f == 0:
                continue
            p = pr[col]
            a[i] = [x * p - f * y for x, y in zip(a[i], pr)]
            g = 0
            for x in a[i]:
                g = gcd(g, x) if isinstance(x, int) else 0
                if g == 1:
                    break
            if g > 1:
                a[i] = [x // g for x in a[i]]
        row += 1
        rk += 1
        if row == m:
            break
    return rk


def rref_fraction(rows):
    """Reduced row echelon form over QQ. Returns (rref, pivot_columns)."""
    m, n = _dims(rows)
    a = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    row = 0
    for col in range(n):
        piv = None
        for i in range(row, m):
            if a[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        inv = a[row][col]
        a[row] = [x / inv for x in a[row]]
        for i in range(m):
            if i != row and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[row])]
        pivots.append(col)
        row += 1
        if row == m:
            break
    return a, pivots


def kernel_basis(rows):
    """Basis of the right null space over QQ, as primitive integer vectors.

    Each basis vector is scaled to integer entries with content 1 and a
    positive leading (first nonzero) entry sign convention.
    """
    m, n = _dims(rows)
    if m == 0:
        return [[1 if j == i else 0 for j in range(n)] for i in range(n)]
    a, pivots = rref_fraction(rows)
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -a[r][f]
        basis.append(_primitive(v))
    return basis


def _primitive(vec):
    den = 1
    for x in vec:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in vec]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g > 1:
        ints = [x // g for x in ints]
    for x in ints:
        if x != 0:
            if x < 0:
                ints = [-y for y in ints]
            break
    return ints


def solve_is_consistent(rows, rhs):
    """Whether ``rows * x = rhs`` has a solution over QQ."""
    m, n = _dims(rows)
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    return rank(aug) == rank(rows)


# ---------------------------------------------------------------------------
# prime-field versions


def rank_modp(rows, p):
    m, n = _dims(rows)
    a = [[x % p for x in r] for r in rows]
    rk = 0
    row = 0
    for col in range(n):
        piv = None
        for i in range(row, m):
            if a[i][col]:
                piv = i
                break
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        inv = pow(a[row][col], p - 2, p)
        a[row] = [x * inv % p for x in a[row]]
        for i in range(row + 1, m):
            f = a[i][col]
            if f:
                pr = a[row]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], pr)]
        row += 1
        rk += 1
        if row == m:
            break
    return rk


def det_modp(rows, p):
    m, n = _dims(rows)
    if m != n:
        raise StructuralError("determinant of a non-square matrix")
    a = [[x % p for x in r] for r in rows]
    det = 1
    for col in range(n):
        piv = None
        for i in range(col, n):
            if a[i][col]:
                piv = i
                break
        if piv is None:
            return 0
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = p - det
        det = det * a[col][col] % p
        inv = pow(a[col][col], p - 2, p)
        for i in range(col + 1, n):
            f = a[i][col] * inv % p
            if f:
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[col])]
    return det % p


def rank_modp_numpy(mat, p):
    """Rank of an integer numpy matrix mod p (p below 2**31 so products fit int64)."""
    import numpy as np

    a = np.array(mat, dtype=np.int64) % p
    m, n = a.shape
    row = 0
    for col in range(n):
        if row == m:
            break
        nz = np.nonzero(a[row:, col])[0]
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            a[[row, piv]] = a[[piv, row]]
        inv = pow(int(a[row, col]), p - 2, p)
        a[row] = a[row] * inv % p
        below = a[row + 1 :, col]
        mask = below != 0
        if mask.any():
            a[row + 1 :][mask] = (a[row + 1 :][mask] - np.outer(below[mask], a[row])) % p
        row += 1
    return row
