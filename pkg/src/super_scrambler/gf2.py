"""GF(2) linear algebra on bit-packed rows (ints as bitsets)."""

from __future__ import annotations

from typing import Iterable, List

import numpy as np


def gf2_rank(rows: Iterable[int]) -> int:
    """Rank over GF(2) of a matrix given as integer rows (bit i = column i).

    Word-parallel elimination: each XOR cancels a whole packed row at once,
    pivots are keyed by highest set bit.
    """
    pivots: dict[int, int] = {}
    rank = 0
    for row in rows:
        while row:
            h = row.bit_length() - 1
            p = pivots.get(h)
            if p is None:
                pivots[h] = row
                rank += 1
                break
            row ^= p
    return rank


def pack_bit_matrix(matrix: np.ndarray) -> List[int]:
    """Pack a 2D 0/1 array into one int per row, column j at bit j."""
    matrix = np.asarray(matrix)
    if matrix.ndim != 2:
        raise ValueError("expected a 2D bit matrix")
    rows = []
    for r in matrix:
        row = 0
        for j, v in enumerate(r):
            if v & 1:
                row |= 1 << j
        rows.append(row)
    return rows


def rank_of_bit_matrix(matrix: np.ndarray) -> int:
    return gf2_rank(pack_bit_matrix(matrix))
