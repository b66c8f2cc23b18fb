"""The configuration matrix, its relation lattice L and the projection to Z^4."""
from __future__ import annotations

from functools import lru_cache
from typing import Sequence, Tuple

from . import lattice

PHI_A: Tuple[Tuple[int, ...], ...] = (
    (1, 0, 0, 1, 1, 0, 0, 0, 0),
    (0, 1, 0, 0, 0, 1, 1, 0, 0),
    (0, 0, 1, 0, 0, 0, 0, 1, 1),
    (0, 0, 0, -1, -1, 0, 1, 1, 0),
    (0, 0, 0, 1, 0, -1, -1, 0, 1),
)
PI4_SLICE = slice(3, 7)


def in_L(v: Sequence[int]) -> bool:
    return len(v) == 9 and not any(lattice.matvec(PHI_A, v))


@lru_cache(maxsize=None)
def L_basis() -> Tuple[Tuple[int, ...], ...]:
    return tuple(lattice.kernel_lattice(PHI_A))


@lru_cache(maxsize=None)
def _pi4_inverse_matrix():
    B = L_basis()
    P = [list(b[PI4_SLICE]) for b in B]   # rows: pi4 images of the basis
    Pinv = lattice.inverse_q(P)
    if any(x.denominator != 1 for r in Pinv for x in r):
        raise ArithmeticError("pi4 is not unimodular on L")
    return [[int(x) for x in r] for r in Pinv]


def pi4(v: Sequence[int]) -> Tuple[int, ...]:
    if not in_L(v):
        raise ValueError(f"{tuple(v)} is not in L")
    return tuple(int(x) for x in v[PI4_SLICE])


def pi4_inv(w: Sequence[int]) -> Tuple[int, ...]:
    """The unique element of L whose coordinates 4..7 are ``w``."""
    if len(w) != 4:
        raise ValueError("expected a vector of length 4")
    coeffs = lattice.matvec(lattice.transpose(_pi4_inverse_matrix()), list(w))
    B = L_basis()
    return tuple(sum(c * b[i] for c, b in zip(coeffs, B)) for i in range(9))


def minor3(A: Sequence[Sequence], i: int, j: int, k: int):
    """Determinant of columns i < j < k (1-indexed) of a 3 x n matrix."""
    if not (1 <= i < j < k <= len(A[0])):
        raise ValueError("column indices must satisfy 1 <= i < j < k <= n")
    cols = [i - 1, j - 1, k - 1]
    return lattice.det([[A[r][c] for c in cols] for r in range(3)])


def laplace_det(M: Sequence[Sequence]):
    """Cofactor expansion along the first row (oracle for small determinants)."""
    n = len(M)
    if n == 1:
        return M[0][0]
    return sum((-1) ** j * M[0][j] * laplace_det([r[:j] + r[j + 1:] for r in M[1:]])
               for j in range(n) if M[0][j])
