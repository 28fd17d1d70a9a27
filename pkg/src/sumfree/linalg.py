"""Exact rank computations over the rationals and over prime fields."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

Matrix = Sequence[Sequence]


def _integer_rows(rows: Matrix) -> list[list[int]]:
    out = []
    for row in rows:
        fr = [Fraction(x) for x in row]
        scale = math.lcm(*(f.denominator for f in fr)) if fr else 1
        out.append([int(f * scale) for f in fr])
    return out


def rank_rational(rows: Matrix) -> int:
    """Rank over Q by fraction-free (Bareiss) elimination."""
    A = [r for r in _integer_rows(rows) if any(r)]
    if not A:
        return 0
    ncols = len(A[0])
    rank, prev = 0, 1
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(A)) if A[i][col]), None)
        if pivot is None:
            continue
        A[rank], A[pivot] = A[pivot], A[rank]
        p = A[rank][col]
        for i in range(rank + 1, len(A)):
            a = A[i][col]
            A[i] = [(p * A[i][c] - a * A[rank][c]) // prev for c in range(ncols)]
        prev = p
        rank += 1
        if rank == len(A):
            break
    return rank


def rank_mod_p(rows: Matrix, p: int) -> int:
    """Rank over ``F_p`` of an integer matrix."""
    A = [[int(x) % p for x in row] for row in rows]
    A = [r for r in A if any(r)]
    if not A:
        return 0
    ncols = len(A[0])
    rank = 0
    for col in range(ncols):
        pivot = next((i for i in range(rank, len(A)) if A[i][col]), None)
        if pivot is None:
            continue
        A[rank], A[pivot] = A[pivot], A[rank]
        inv = pow(A[rank][col], -1, p)
        A[rank] = [(v * inv) % p for v in A[rank]]
        for i in range(len(A)):
            if i != rank and A[i][col]:
                a = A[i][col]
                A[i] = [(x - a * y) % p for x, y in zip(A[i], A[rank])]
        rank += 1
        if rank == len(A):
            break
    return rank


def in_span(v: Sequence, basis: Matrix) -> bool:
    return rank_rational(list(basis) + [v]) == rank_rational(basis)
