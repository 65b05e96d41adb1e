"""Compressed-quadruple matching: the pair-filter + sort-join stage.

A compressed quadruple (A′, B′, C′, D′) ∈ s_sk × s_sy³ can belong to good
matrices only if Σ PSD(k) = 4n at every k, equivalently (exactly, in
integers): Σ PAF′(k) = 0 for 1 ≤ k < m together with the k = 0 identity
1 + row(B′)² + row(C′)² + row(D′)² = 4n.

Testing all |s_sy|³ combinations directly is wasteful, so:

  (i)   build the pair lists AB ⊆ s_sk × s_sy and CD ⊆ {(C′,D′) : C′ ≤ D′}
        that survive the pairwise PSD bound Σ PSD ≤ 4n + ε;
  (ii)  key AB by the integer vector (PAF_A′(k) + PAF_B′(k))_{k=1..⌊m/2⌋}
        and CD by its negation, so matching keys mean the four PAFs cancel
        at every 1 ≤ k < m (PAF(k) = PAF(m−k) covers the upper half);
  (iii) sort both lists and join equal keys;
  (iv)  confirm each joined quadruple with the exact integer identity before
        emitting, restoring both (C′, D′) orientations.

Keys are exact integer vectors under lexicographic order, so the join is
bit-exact.  The pair filter is the only approximate step and it only ever
discards pairs whose PSD sum exceeds the bound by more than ε — never a pair
that can reach the exact equality.
"""

from __future__ import annotations

from typing import Iterator, Sequence, TextIO

import numpy as np

from .candidates import CandidateSets
from .equiv import quad_key, row_key
from .errors import InvalidInputError, ParseError
from .seqcore import CompressedQuad, Row
from .spectral import EPS, dft_basis, paf

PafKey = tuple[int, ...]

_PAIR_CHUNK = 128
_EMIT_CHUNK = 1 << 16


def paf_key(x: Sequence[int], y: Sequence[int]) -> PafKey:
    """Join key: PAF_x(k) + PAF_y(k) for k = 1..⌊m/2⌋, exact integers."""
    if len(x) != len(y):
        raise InvalidInputError("paf_key needs rows of equal length")
    return tuple(paf(x, k) + paf(y, k) for k in range(1, len(x) // 2 + 1))


def match_quadruples(
    cands: CandidateSets,
    n: int,
    *,
    eps: float = EPS,
    pair_filter: bool = True,
) -> list[CompressedQuad]:
    """All compressed quadruples satisfying the exact matching identity.

    Returns a sorted duplicate-free list; every ordered placement that
    satisfies the identity is present (downstream dedup reduces these to
    equivalence-class representatives).
    """
    if n != cands.n:
        raise InvalidInputError(f"candidate sets were generated for n={cands.n}, not {n}")
    m = cands.m
    sk = sorted(cands.s_sk, key=row_key)
    sy = sorted(cands.s_sy, key=row_key)
    if not sk or not sy:
        return []

    sk_arr = np.array(sk, dtype=np.int64)
    sy_arr = np.array(sy, dtype=np.int64)
    paf_sk = _paf_matrix(sk_arr)
    paf_sy = _paf_matrix(sy_arr)
    rs_sy = sy_arr.sum(axis=1)

    bound = 4 * n + eps
    if pair_filter:
        basis = dft_basis(m)
        psd_sk = np.abs(sk_arr.astype(np.float64) @ basis) ** 2
        psd_sy = np.abs(sy_arr.astype(np.float64) @ basis) ** 2
        ab_i, ab_j = _filtered_pairs(psd_sk, psd_sy, bound, symmetric=False)
        cd_i, cd_j = _filtered_pairs(psd_sy, psd_sy, bound, symmetric=True)
    else:
        ab_i, ab_j = _all_pairs(len(sk), len(sy), symmetric=False)
        cd_i, cd_j = _all_pairs(len(sy), len(sy), symmetric=True)

    half = m // 2
    keys_ab = paf_sk[ab_i, 1 : half + 1] + paf_sy[ab_j, 1 : half + 1]
    keys_cd = -(paf_sy[cd_i, 1 : half + 1] + paf_sy[cd_j, 1 : half + 1])

    out: set[CompressedQuad] = set()
    for ab_run, cd_run in _join_runs(keys_ab, keys_cd):
        for a_sel, c_sel in _cross_chunks(ab_run, cd_run):
            ia, jb = ab_i[a_sel], ab_j[a_sel]
            ic, jd = cd_i[c_sel], cd_j[c_sel]
            # exact confirmation: k = 0 rowsum identity + the full PAF sums
            ok = 1 + rs_sy[jb] ** 2 + rs_sy[ic] ** 2 + rs_sy[jd] ** 2 == 4 * n
            total = paf_sk[ia] + paf_sy[jb] + paf_sy[ic] + paf_sy[jd]
            ok &= (total[:, 1:] == 0).all(axis=1)
            for t in np.flatnonzero(ok):
                a, b = sk[ia[t]], sy[jb[t]]
                c, d = sy[ic[t]], sy[jd[t]]
                out.add(CompressedQuad(a, b, c, d))
                out.add(CompressedQuad(a, b, d, c))
    return sorted(out, key=quad_key)


def _paf_matrix(rows: np.ndarray) -> np.ndarray:
    """Integer PAF values, one row per input row, columns k = 0..m-1."""
    m = rows.shape[1]
    cols = [(rows * np.roll(rows, -k, axis=1)).sum(axis=1) for k in range(m)]
    return np.stack(cols, axis=1)


def _all_pairs(nl: int, nr: int, *, symmetric: bool) -> tuple[np.ndarray, np.ndarray]:
    if symmetric:
        return np.triu_indices(nl)
    i = np.repeat(np.arange(nl), nr)
    j = np.tile(np.arange(nr), nl)
    return i, j


def _filtered_pairs(
    psd_l: np.ndarray, psd_r: np.ndarray, bound: float, *, symmetric: bool
) -> tuple[np.ndarray, np.ndarray]:
    """Index pairs whose summed PSD profile stays below the bound everywhere."""
    parts_i, parts_j = [], []
    for lo in range(0, len(psd_l), _PAIR_CHUNK):
        block = psd_l[lo : lo + _PAIR_CHUNK]
        ok = ((block[:, None, :] + psd_r[None, :, :]) <= bound).all(axis=2)
        ii, jj = np.nonzero(ok)
        ii = ii + lo
        if symmetric:
            keep = jj >= ii
            ii, jj = ii[keep], jj[keep]
        parts_i.append(ii)
        parts_j.append(jj)
    return np.concatenate(parts_i), np.concatenate(parts_j)


def _join_runs(
    keys_l: np.ndarray, keys_r: np.ndarray
) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Sort both key lists and yield (left indices, right indices) per equal key."""
    if len(keys_l) == 0 or len(keys_r) == 0:
        return
    if keys_l.shape[1] == 0:  # m = 1: empty keys, everything joins
        yield np.arange(len(keys_l)), np.arange(len(keys_r))
        return
    runs_l = _runs(keys_l)
    runs_r = _runs(keys_r)
    li = ri = 0
    while li < len(runs_l) and ri < len(runs_r):
        key_l, idx_l = runs_l[li]
        key_r, idx_r = runs_r[ri]
        if key_l == key_r:
            yield idx_l, idx_r
            li += 1
            ri += 1
        elif key_l < key_r:
            li += 1
        else:
            ri += 1


def _runs(keys: np.ndarray) -> list[tuple[tuple[int, ...], np.ndarray]]:
    order = np.lexsort(keys.T[::-1])
    sorted_keys = keys[order]
    change = np.flatnonzero((sorted_keys[1:] != sorted_keys[:-1]).any(axis=1)) + 1
    bounds = np.concatenate(([0], change, [len(keys)]))
    return [
        (tuple(sorted_keys[bounds[t]].tolist()), order[bounds[t] : bounds[t + 1]])
        for t in range(len(bounds) - 1)
    ]


def _cross_chunks(
    left: np.ndarray, right: np.ndarray
) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Cross product of two index arrays, yielded in bounded-size chunks."""
    rows_per_chunk = max(1, _EMIT_CHUNK // max(1, len(right)))
    for lo in range(0, len(left), rows_per_chunk):
        sub = left[lo : lo + rows_per_chunk]
        yield np.repeat(sub, len(right)), np.tile(right, len(sub))


# ── persistence: one quadruple per record, four comma-separated rows ────────

def write_quadruples(fp: TextIO, quads: Sequence[CompressedQuad]) -> None:
    for q in quads:
        for row in q.rows():
            fp.write(",".join(str(e) for e in row) + "\n")
        fp.write("\n")


def read_quadruples(fp: TextIO) -> list[CompressedQuad]:
    quads: list[CompressedQuad] = []
    block: list[Row] = []
    for lineno, line in enumerate(fp, start=1):
        line = line.strip()
        if line:
            try:
                block.append(tuple(int(tok) for tok in line.split(",")))
            except ValueError:
                raise ParseError(f"bad compressed row on line {lineno}: {line!r}") from None
            if len(block) > 4:
                raise ParseError(f"more than four rows in a record (line {lineno})")
        elif block:
            quads.append(_finish(block, lineno))
            block = []
    if block:
        quads.append(_finish(block, lineno))
    return quads


def _finish(block: list[Row], lineno: int) -> CompressedQuad:
    if len(block) != 4:
        raise ParseError(f"record before line {lineno} has {len(block)} rows, expected 4")
    return CompressedQuad(*block)
