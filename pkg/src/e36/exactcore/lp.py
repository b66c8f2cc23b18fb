"""Exact feasibility LPs over the rationals (dense tableau simplex, Bland's rule).

Only feasibility is needed downstream: regularity witnesses and
convex-hull membership.  Problem sizes are a few dozen rows.
"""
from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence


def feasible_nonneg(A: Sequence[Sequence], b: Sequence) -> Optional[List[Fraction]]:
    """A point ``x >= 0`` with ``A x = b``, or None.  Phase I of the simplex method."""
    m = len(A)
    n = len(A[0]) if m else 0
    if m == 0:
        return [Fraction(0)] * n
    rows = []
    for r, bi in zip(A, b):
        r = [Fraction(x) for x in r]
        bi = Fraction(bi)
        if bi < 0:
            r, bi = [-x for x in r], -bi
        rows.append(r + [bi])
    # columns 0..n-1 original, n..n+m-1 artificial; last column rhs
    T = [r[:n] + [Fraction(int(i == j)) for j in range(m)] + [r[n]] for i, r in enumerate(rows)]
    basis = list(range(n, n + m))
    width = n + m
    # objective: minimise the sum of artificials; reduced costs row
    cost = [Fraction(0)] * (width + 1)
    for r in T:
        for j in range(n):
            cost[j] -= r[j]
        cost[width] -= r[width]
    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        best = None
        for i, r in enumerate(T):
            if r[enter] > 0:
                ratio = r[width] / r[enter]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:  # unbounded direction; cannot happen in phase I
            break
        _pivot(T, cost, best[1], enter)
        basis[best[1]] = enter
    if cost[width] != 0:
        return None
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = T[i][width]
    return x


def _pivot(T, cost, r, c):
    p = T[r][c]
    T[r] = [x / p for x in T[r]]
    pr = T[r]
    for i, row in enumerate(T):
        if i != r and row[c] != 0:
            f = row[c]
            T[i] = [x - f * y for x, y in zip(row, pr)]
    if cost[c] != 0:
        f = cost[c]
        cost[:] = [x - f * y for x, y in zip(cost, pr)]


def feasible_point(G: Sequence[Sequence], h: Sequence) -> Optional[List[Fraction]]:
    """A point ``x`` (free sign) with ``G x >= h`` componentwise, or None."""
    n = len(G[0])
    A = []
    for row in G:
        A.append([Fraction(x) for x in row] + [-Fraction(x) for x in row] +
                 [Fraction(0)] * len(G))
    for i in range(len(G)):
        A[i][2 * n + i] = Fraction(-1)
    sol = feasible_nonneg(A, h)
    if sol is None:
        return None
    return [sol[j] - sol[n + j] for j in range(n)]


def in_convex_hull(p: Sequence, points: Sequence[Sequence]) -> Optional[List[Fraction]]:
    """Convex weights expressing ``p`` from ``points``, or None."""
    if not points:
        return None
    d = len(p)
    A = [[Fraction(q[i]) for q in points] for i in range(d)] + [[Fraction(1)] * len(points)]
    return feasible_nonneg(A, [Fraction(x) for x in p] + [Fraction(1)])


def in_cone(p: Sequence, gens: Sequence[Sequence]) -> Optional[List[Fraction]]:
    """Nonnegative coefficients expressing ``p`` from ``gens``, or None."""
    if not gens:
        return [] if not any(p) else None
    d = len(p)
    A = [[Fraction(g[i]) for g in gens] for i in range(d)]
    return feasible_nonneg(A, [Fraction(x) for x in p])


def strict_feasible(G: Sequence[Sequence]) -> Optional[List[Fraction]]:
    """A rational ``x`` with ``G x > 0`` row by row, or None.

    A floating point solve proposes a candidate which is rounded to nearby
    rationals and accepted only if it passes the exact test.  Otherwise,
    or when the float solver reports infeasibility, the exact simplex
    decides.
    """
    cand = _float_candidate(G)
    if cand is not None:
        return cand
    return feasible_point(G, [1] * len(G))


def _float_candidate(G):
    try:
        import numpy as np
        from scipy.optimize import linprog
    except ImportError:  # pragma: no cover - scipy is a declared dependency
        return None
    A = np.array([[float(x) for x in row] for row in G])
    n = A.shape[1]
    res = linprog(np.zeros(n), A_ub=-A, b_ub=-np.ones(len(G)), bounds=[(None, None)] * n,
                  method="highs")
    if res.status != 0:
        return None
    for den in (1, 10, 1000, 10 ** 6):
        x = [Fraction(round(v * den), den) for v in res.x]
        if all(sum(Fraction(a) * b for a, b in zip(row, x)) > 0 for row in G):
            return x
    return None
