"""Integer and rational linear algebra on plain nested lists.

Matrices are lists of rows.  Entries are Python ``int`` (arbitrary precision)
or :class:`fractions.Fraction`; nothing here ever touches floating point.
"""
from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd
from typing import List, Optional, Sequence, Tuple

Matrix = List[List[int]]
Vector = Tuple[int, ...]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(M: Sequence[Sequence]) -> list:
    return [list(col) for col in zip(*M)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list:
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A: Sequence[Sequence], v: Sequence) -> list:
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def content(v: Sequence[int]) -> int:
    return reduce(gcd, (abs(int(x)) for x in v), 0)


def primitive(v: Sequence) -> Vector:
    """Scale a nonzero rational vector to the primitive integer vector on its ray."""
    fr = [Fraction(x) for x in v]
    den = reduce(lambda a, b: a * b // gcd(a, b), (x.denominator for x in fr), 1)
    ints = [int(x * den) for x in fr]
    g = content(ints)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in ints)


def det(M: Sequence[Sequence]) -> int | Fraction:
    """Determinant by fraction-free Bareiss elimination (exact)."""
    n = len(M)
    if n == 0:
        return 1
    if any(len(r) != n for r in M):
        raise ValueError("determinant of a non-square matrix")
    if all(isinstance(x, int) for r in M for x in r):
        A = [list(r) for r in M]
        sign, prev = 1, 1
        for k in range(n - 1):
            if A[k][k] == 0:
                for i in range(k + 1, n):
                    if A[i][k] != 0:
                        A[k], A[i] = A[i], A[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
            prev = A[k][k]
        return sign * A[n - 1][n - 1]
    R = rref([[Fraction(x) for x in r] for r in M], want_det=True)
    return R[2]


def rref(M: Sequence[Sequence], want_det: bool = False):
    """Reduced row echelon form over Q.  Returns ``(R, pivots)`` (and det)."""
    A = [[Fraction(x) for x in r] for r in M]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    pivots: List[int] = []
    d = Fraction(1)
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if A[i][c] != 0), None)
        if p is None:
            d = Fraction(0)
            continue
        if p != r:
            A[r], A[p] = A[p], A[r]
            d = -d
        piv = A[r][c]
        d *= piv
        A[r] = [x / piv for x in A[r]]
        for i in range(rows):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [x - f * y for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    if want_det:
        if len(pivots) < rows:
            d = Fraction(0)
        return A, pivots, d
    return A, pivots


def rank(M: Sequence[Sequence]) -> int:
    if not M:
        return 0
    return len(rref(M)[1])


def nullspace_q(M: Sequence[Sequence], ncols: Optional[int] = None) -> List[List[Fraction]]:
    """Basis of the rational null space {x : M x = 0}."""
    if not M:
        n = ncols or 0
        return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    n = len(M[0])
    R, pivots = rref(M)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -R[i][f]
        basis.append(v)
    return basis


def solve_q(M: Sequence[Sequence], b: Sequence) -> Optional[List[Fraction]]:
    """One rational solution of M x = b, or None."""
    n = len(M[0])
    aug = [list(r) + [bi] for r, bi in zip(M, b)]
    R, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for i, p in enumerate(pivots):
        x[p] = R[i][n]
    return x


def inverse_q(M: Sequence[Sequence]) -> List[List[Fraction]]:
    n = len(M)
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(M)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]


def _xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def hermite_normal_form(M: Sequence[Sequence[int]]) -> Tuple[Matrix, Matrix]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``H = U M`` in row echelon
    form: pivots positive, entries above each pivot reduced into
    ``[0, pivot)``, zero rows at the bottom.  ``H`` is unique for the row
    lattice of ``M``.
    """
    H = [list(map(int, r)) for r in M]
    m = len(H)
    n = len(H[0]) if m else 0
    U = identity(m)
    r = 0
    for c in range(n):
        if r == m:
            break
        # gcd-combine the column below r into row r
        for i in range(r + 1, m):
            if H[i][c] == 0:
                continue
            a, b = H[r][c], H[i][c]
            g, s, t = _xgcd(a, b)
            ua, ub = a // g, b // g
            Hr, Hi = H[r], H[i]
            H[r] = [s * x + t * y for x, y in zip(Hr, Hi)]
            H[i] = [-ub * x + ua * y for x, y in zip(Hr, Hi)]
            Ur, Ui = U[r], U[i]
            U[r] = [s * x + t * y for x, y in zip(Ur, Ui)]
            U[i] = [-ub * x + ua * y for x, y in zip(Ur, Ui)]
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-x for x in H[r]]
            U[r] = [-x for x in U[r]]
        p = H[r][c]
        for i in range(r):
            q = H[i][c] // p
            if q:
                H[i] = [x - q * y for x, y in zip(H[i], H[r])]
                U[i] = [x - q * y for x, y in zip(U[i], U[r])]
        r += 1
    return H, U


def smith_normal_form(M: Sequence[Sequence[int]]) -> Tuple[Matrix, Matrix, Matrix]:
    """Smith normal form ``D = U M V`` with unimodular ``U``, ``V``.

    The diagonal of ``D`` is nonnegative and each entry divides the next.
    """
    D = [list(map(int, r)) for r in M]
    m = len(D)
    n = len(D[0]) if m else 0
    U, V = identity(m), identity(n)

    def row_op(i, j, s, t, u, v):
        # rows (i, j) <- (s*Ri + t*Rj, u*Ri + v*Rj)
        for A in (D, U):
            Ri, Rj = A[i], A[j]
            A[i] = [s * x + t * y for x, y in zip(Ri, Rj)]
            A[j] = [u * x + v * y for x, y in zip(Ri, Rj)]

    def col_op(i, j, s, t, u, v):
        for A in (D, V):
            for row in A:
                x, y = row[i], row[j]
                row[i], row[j] = s * x + t * y, u * x + v * y

    for k in range(min(m, n)):
        while True:
            entries = [(abs(D[i][j]), i, j) for i in range(k, m) for j in range(k, n) if D[i][j]]
            if not entries:
                return D, U, V
            _, pi, pj = min(entries)
            if pi != k:
                D[k], D[pi] = D[pi], D[k]
                U[k], U[pi] = U[pi], U[k]
            if pj != k:
                for A in (D, V):
                    for row in A:
                        row[k], row[pj] = row[pj], row[k]
            for i in range(k + 1, m):
                if D[i][k]:
                    a, b = D[k][k], D[i][k]
                    if b % a == 0:
                        row_op(k, i, 1, 0, -(b // a), 1)
                    else:
                        g, s, t = _xgcd(a, b)
                        row_op(k, i, s, t, -b // g, a // g)
            for j in range(k + 1, n):
                if D[k][j]:
                    a, b = D[k][k], D[k][j]
                    if b % a == 0:
                        col_op(k, j, 1, 0, -(b // a), 1)
                    else:
                        g, s, t = _xgcd(a, b)
                        col_op(k, j, s, t, -b // g, a // g)
            if any(D[i][k] for i in range(k + 1, m)):
                continue
            p = D[k][k]
            bad = next((i for i in range(k + 1, m) for j in range(k + 1, n) if D[i][j] % p), None)
            if bad is None:
                break
            # pull the offending row up so the next pass lowers the pivot
            D[k] = [x + y for x, y in zip(D[k], D[bad])]
            U[k] = [x + y for x, y in zip(U[k], U[bad])]
        if D[k][k] < 0:
            D[k] = [-x for x in D[k]]
            U[k] = [-x for x in U[k]]
    return D, U, V


def smith_invariants(M: Sequence[Sequence[int]]) -> List[int]:
    D, _, _ = smith_normal_form(M)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0)) if D[i][i]]


def kernel_lattice(M: Sequence[Sequence[int]]) -> List[Vector]:
    """Z-basis of {v in Z^n : M v = 0}, Hermite-reduced (unique)."""
    m = len(M)
    n = len(M[0]) if m else 0
    # column HNF of M via row HNF of M^T: U M^T = H, so M U^T = H^T
    H, U = hermite_normal_form(transpose(M)) if m else ([], identity(n))
    r = sum(1 for row in H if any(row)) if m else 0
    K = [row for row in U[r:]]
    if not K:
        return []
    Hk, _ = hermite_normal_form(K)
    return [tuple(row) for row in Hk if any(row)]


def saturation_basis(vectors: Sequence[Sequence[int]]) -> List[Vector]:
    """Z-basis (as rows) of span_Q(vectors) intersected with Z^n."""
    n = len(vectors[0])
    perp = kernel_lattice(vectors)
    if not perp:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    return kernel_lattice(perp)


def lattice_coordinates(basis: Sequence[Sequence[int]], v: Sequence) -> Optional[List[Fraction]]:
    """Coordinates of ``v`` in the (row) ``basis``; None if outside the Q-span."""
    return solve_q(transpose(basis), list(v))


def solve_z(M: Sequence[Sequence[int]], b: Sequence[int]) -> Optional[List[int]]:
    """One integer solution of M x = b, or None if there is none."""
    D, U, V = smith_normal_form(M)
    c = matvec(U, b)
    n = len(M[0])
    y = [0] * n
    for i in range(len(D)):
        di = D[i][i] if i < n else 0
        if di == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % di:
                return None
            y[i] = c[i] // di
    return matvec(V, y)
