"""Candidate row generation: the 2^d brute-force sweep with PSD filtering.

For each of the 2^d free-entry assignments X we form the skew row
A = (1, X, −rev X) and the symmetric row B = (1, X, rev X).  compress3(A)
enters s_sk iff PSD_A(k) ≤ 4n + ε for all k; compress3(B) enters s_sy iff it
passes the same PSD bound AND rowsum(B) occurs as a component of some signed
rowsum triple.  Both sets are deduplicated by exact entrywise equality only —
equivalence-level reduction happens later, at the compressed-quad stage.

The sweep is vectorized: a chunk of counter values becomes a (chunk × d) sign
matrix, full rows are assembled by concatenation, and PSD profiles for the
whole chunk are one complex matmul against the cached DFT basis.  Enumeration
order is plain binary counting, and the result is independent of chunking.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, TextIO

import numpy as np

from .diophantine import RowsumTriple, rowsum_components
from .errors import InvalidInputError, ParseError
from .seqcore import Row
from .spectral import EPS, dft_basis

_CHUNK = 1 << 15


@dataclass(frozen=True)
class CandidateSets:
    """Compressed candidate rows surviving step 2: s_sk skew, s_sy symmetric."""

    s_sk: frozenset[Row]
    s_sy: frozenset[Row]
    n: int
    m: int
    d: int


def generate_candidates(
    n: int,
    rowsums: frozenset[RowsumTriple],
    *,
    eps: float = EPS,
    psd_filter: bool = True,
    rowsum_filter: bool = True,
) -> CandidateSets:
    """Run the 2^d sweep for order n (odd, divisible by 3)."""
    if n < 3 or n % 2 == 0 or n % 3 != 0:
        raise InvalidInputError(f"order must be odd, >= 3 and divisible by 3, got {n}")
    m, d = n // 3, n // 2
    if not rowsums:
        return CandidateSets(frozenset(), frozenset(), n, m, d)

    allowed = np.array(sorted(rowsum_components(rowsums)), dtype=np.int64)
    basis = dft_basis(n)
    bound = 4 * n + eps
    bit_cols = np.arange(d, dtype=np.uint32)

    s_sk: set[Row] = set()
    s_sy: set[Row] = set()
    for lo in range(0, 1 << d, _CHUNK):
        hi = min(lo + _CHUNK, 1 << d)
        counters = np.arange(lo, hi, dtype=np.uint32)
        halves = 1 - 2 * ((counters[:, None] >> bit_cols) & 1).astype(np.int64)
        ones = np.ones((len(halves), 1), dtype=np.int64)
        rev = halves[:, ::-1]

        skew = np.hstack([ones, halves, -rev])
        sym = np.hstack([ones, halves, rev])

        keep_sk = _psd_ok(skew, basis, bound) if psd_filter else _all(len(skew))
        keep_sy = _psd_ok(sym, basis, bound) if psd_filter else _all(len(sym))
        if rowsum_filter:
            keep_sy &= np.isin(1 + 2 * halves.sum(axis=1), allowed)

        _collect(s_sk, skew[keep_sk], m)
        _collect(s_sy, sym[keep_sy], m)
    return CandidateSets(frozenset(s_sk), frozenset(s_sy), n, m, d)


def _psd_ok(rows: np.ndarray, basis: np.ndarray, bound: float) -> np.ndarray:
    psd = np.abs(rows.astype(np.float64) @ basis) ** 2
    return (psd <= bound).all(axis=1)


def _all(count: int) -> np.ndarray:
    return np.ones(count, dtype=bool)


def _collect(dest: set[Row], rows: np.ndarray, m: int) -> None:
    if len(rows) == 0:
        return
    compressed = rows[:, :m] + rows[:, m : 2 * m] + rows[:, 2 * m :]
    dest.update(map(tuple, compressed.tolist()))


# ── optional on-disk spill ──────────────────────────────────────────────────

def write_compressed_rows(fp: TextIO, rows: Iterable[Row]) -> None:
    """One compressed row per line as comma-separated integers."""
    for row in rows:
        fp.write(",".join(str(e) for e in row) + "\n")


def read_compressed_rows(fp: TextIO) -> list[Row]:
    out = []
    for lineno, line in enumerate(fp, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            row = tuple(int(tok) for tok in line.split(","))
        except ValueError:
            raise ParseError(f"bad compressed row on line {lineno}: {line!r}") from None
        if not set(row) <= {-3, -1, 1, 3}:
            raise ParseError(
                f"entry outside the 3-compression alphabet on line {lineno}: {line!r}"
            )
        out.append(row)
    return out
