"""Candidate generation: the 2^d sweep with PSD and rowsum screens.

Oracle: a pure-Python re-derivation (no numpy, no shared helpers beyond the
row constructors) of the compressed candidate sets.
"""

import cmath
import io

import pytest

from goodmat.candidates import (
    CandidateSets,
    generate_candidates,
    read_compressed_rows,
    write_compressed_rows,
)
from goodmat.diophantine import rowsum_components, signed_rowsums
from goodmat.errors import InvalidInputError, ParseError
from goodmat.seqcore import compress3, iter_halves, make_skew, make_symmetric


def oracle_candidates(n, rowsums, psd_filter=True, rowsum_filter=True):
    d = n // 2
    bound = 4 * n + 1e-2
    allowed = rowsum_components(rowsums)

    def psd_ok(row):
        return all(
            abs(sum(v * cmath.exp(2j * cmath.pi * j * k / n)
                    for j, v in enumerate(row))) ** 2 <= bound
            for k in range(n)
        )

    s_sk, s_sy = set(), set()
    for half in iter_halves(d):
        row = make_skew(half, n)
        if not psd_filter or psd_ok(row):
            s_sk.add(compress3(row))
        row = make_symmetric(half, n)
        if rowsum_filter and sum(row) not in allowed:
            continue
        if not psd_filter or psd_ok(row):
            s_sy.add(compress3(row))
    return s_sk, s_sy


@pytest.mark.parametrize("n", [3, 9, 15, 21])
def test_matches_pure_python_oracle(n):
    rowsums = signed_rowsums(n)
    got = generate_candidates(n, rowsums)
    want_sk, want_sy = oracle_candidates(n, rowsums)
    assert got.s_sk == want_sk
    assert got.s_sy == want_sy
    assert (got.n, got.m, got.d) == (n, n // 3, n // 2)


def test_frozen_counts_n9_n15():
    # Counts independently confirmed by oracle_candidates above.
    c9 = generate_candidates(9, signed_rowsums(9))
    assert (len(c9.s_sk), len(c9.s_sy)) == (4, 6)
    c15 = generate_candidates(15, signed_rowsums(15))
    assert (len(c15.s_sk), len(c15.s_sy)) == (12, 20)


def test_filters_only_shrink():
    n = 15
    rowsums = signed_rowsums(n)
    full = generate_candidates(n, rowsums, psd_filter=False, rowsum_filter=False)
    filt = generate_candidates(n, rowsums)
    assert filt.s_sk < full.s_sk
    assert filt.s_sy < full.s_sy


def test_unfiltered_oracle_agreement():
    n = 9
    rowsums = signed_rowsums(n)
    got = generate_candidates(n, rowsums, psd_filter=False, rowsum_filter=False)
    want_sk, want_sy = oracle_candidates(n, rowsums, psd_filter=False,
                                         rowsum_filter=False)
    assert got.s_sk == want_sk and got.s_sy == want_sy


def test_compressed_alphabet_and_first_entries():
    n = 15
    cands = generate_candidates(n, signed_rowsums(n))
    for row in cands.s_sk | cands.s_sy:
        assert len(row) == n // 3
        assert set(row) <= {-3, -1, 1, 3}
    # Skew rows always compress to first entry exactly 1; symmetric rows to
    # 1 + 2·x_m ∈ {3, -1}.
    assert {row[0] for row in cands.s_sk} == {1}
    assert {row[0] for row in cands.s_sy} <= {3, -1}


def test_empty_rowsums_short_circuits():
    got = generate_candidates(9, frozenset())
    assert got.s_sk == frozenset() and got.s_sy == frozenset()


def test_order_validation():
    rowsums = signed_rowsums(9)
    with pytest.raises(InvalidInputError):
        generate_candidates(8, rowsums)
    with pytest.raises(InvalidInputError):
        generate_candidates(5, rowsums)   # odd but not divisible by 3
    with pytest.raises(InvalidInputError):
        generate_candidates(1, rowsums)


def test_compressed_rows_round_trip():
    rows = [(1, 3, -1), (1, -3, 1)]
    buf = io.StringIO()
    write_compressed_rows(buf, rows)
    buf.seek(0)
    assert read_compressed_rows(buf) == rows


def test_read_compressed_rows_rejects_garbage():
    with pytest.raises(ParseError):
        read_compressed_rows(io.StringIO("1, x, 3\n"))
    with pytest.raises(ParseError):
        read_compressed_rows(io.StringIO("1, 2, 3\n"))  # 2 not in the alphabet
