"""Rowsum arithmetic: solve x² + y² + z² = 4n − 1 and apply the sign rule.

If (A, B, C, D) define good matrices of odd order n then row(A) = 1 (skew
cancellation) and row(B)² + row(C)² + row(D)² = 4n − 1.  Moreover, once
b_0 = c_0 = d_0 = +1 is fixed by negation-normalization, each of the three
rowsums is congruent to n modulo 4.  Since 4n − 1 ≡ 3 (mod 8) every
decomposition consists of odd magnitudes, so for each magnitude exactly one
of ±magnitude hits the right residue: the sign rule picks unique signs.
"""

from __future__ import annotations

from math import isqrt
from typing import NamedTuple

from .errors import InternalError, InvalidInputError


class RowsumTriple(NamedTuple):
    """Signed rowsums (row(B), row(C), row(D)) stored sorted ascending."""

    x: int
    y: int
    z: int


def _check_order(n: int) -> None:
    if n < 1 or n % 2 == 0:
        raise InvalidInputError(f"order must be odd and positive, got {n}")


def three_squares(n: int) -> frozenset[tuple[int, int, int]]:
    """All multisets {|x|, |y|, |z|} with x² + y² + z² = 4n − 1, sorted ascending.

    An empty result is a legal answer and implies no good matrices of order n
    exist.  Exhaustive by a bounded double loop: x ≤ y are enumerated and z is
    recovered from the remainder.
    """
    _check_order(n)
    target = 4 * n - 1
    out = set()
    for x in range(isqrt(target) + 1):
        rest_x = target - x * x
        for y in range(x, isqrt(rest_x) + 1):
            rest = rest_x - y * y
            z = isqrt(rest)
            if z * z == rest and z >= y:
                out.add((x, y, z))
    return frozenset(out)


def _apply_sign(magnitude: int, n: int) -> int:
    """The unique sign making an odd magnitude ≡ n (mod 4)."""
    if magnitude % 2 == 0:
        raise InternalError(
            f"even rowsum magnitude {magnitude} for order {n}: "
            "4n-1 decompositions must be all-odd"
        )
    return magnitude if magnitude % 4 == n % 4 else -magnitude


def signed_rowsums(n: int) -> frozenset[RowsumTriple]:
    """three_squares(n) with the mod-4 sign rule applied, triples sorted."""
    _check_order(n)
    out = set()
    for triple in three_squares(n):
        signed = sorted(_apply_sign(v, n) for v in triple)
        out.add(RowsumTriple(*signed))
    return frozenset(out)


def rowsum_components(rowsums: frozenset[RowsumTriple]) -> frozenset[int]:
    """All signed values appearing in any triple (the membership filter set)."""
    return frozenset(v for triple in rowsums for v in triple)
