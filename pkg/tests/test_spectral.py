"""Power spectral density, periodic autocorrelation, and the exact certificate.

The oracle here is a from-scratch O(n²) DFT using cmath — no shared code with
the numpy implementation under test.
"""

import cmath

import pytest
from hypothesis import given
from hypothesis import strategies as st

from goodmat.errors import InvalidInputError
from goodmat.seqcore import DefiningQuad
from goodmat.spectral import (
    EPS,
    dft_basis,
    full_psd_sum,
    paf,
    paf_certificate,
    paf_vector,
    passes_psd_filter,
    psd_profile,
    psd_values,
)

rows = st.integers(1, 40).flatmap(
    lambda n: st.tuples(*([st.sampled_from((1, -1))] * n))
)
int_rows = st.integers(1, 24).flatmap(
    lambda n: st.tuples(*([st.integers(-3, 3)] * n))
)


def oracle_psd(x, k):
    n = len(x)
    f = sum(v * cmath.exp(2j * cmath.pi * j * k / n) for j, v in enumerate(x))
    return abs(f) ** 2


def oracle_paf(x, k):
    n = len(x)
    return sum(x[j] * x[(j + k) % n] for j in range(n))


# ── PSD ──────────────────────────────────────────────────────────────────────

@given(int_rows)
def test_psd_values_match_dft_oracle(x):
    vals = psd_values(x)
    assert len(vals) == len(x) // 2 + 1
    for k, got in enumerate(vals):
        assert got == pytest.approx(oracle_psd(x, k), abs=1e-6)


@given(rows)
def test_psd_conjugate_symmetry(x):
    n = len(x)
    for k in range(n):
        assert oracle_psd(x, k) == pytest.approx(oracle_psd(x, (n - k) % n), abs=1e-6)


def test_psd_zero_is_rowsum_squared(known27):
    for row in known27.rows():
        assert psd_values(row)[0] == pytest.approx(sum(row) ** 2, abs=1e-9)


@given(rows)
def test_parseval(x):
    n = len(x)
    assert full_psd_sum(x) == pytest.approx(n * n, abs=EPS)


def test_dft_basis_cached_and_shaped():
    assert dft_basis(9) is dft_basis(9)
    assert dft_basis(9).shape == (9, 5)


def test_psd_profile_max(known27):
    prof = psd_profile(known27.a)
    assert prof.max == pytest.approx(max(prof.values))


# ── PAF ──────────────────────────────────────────────────────────────────────

@given(int_rows, st.integers(0, 30))
def test_paf_matches_oracle(x, k):
    assert paf(x, k % len(x)) == oracle_paf(x, k % len(x))


@given(int_rows)
def test_paf_reflection_symmetry(x):
    n = len(x)
    for k in range(n):
        assert paf(x, k) == paf(x, (n - k) % n)


def test_paf_vector_shape_and_zero_lag(known27):
    vec = paf_vector(known27.b)
    assert len(vec.values) == 27 // 2 + 1
    assert vec.values[0] == 27  # ±1 row: zero-lag autocorrelation is n


# ── the exact goodness certificate ───────────────────────────────────────────

def test_certificate_on_known_quads(known3, known27, known57):
    for quad in (known3, known27, known57):
        assert paf_certificate(quad)


def test_certificate_rejects_single_flip(known27):
    a = list(known27.a)
    a[3] = -a[3]
    a[27 - 3] = -a[27 - 3]  # keep the row skew so only goodness breaks
    broken = DefiningQuad(tuple(a), known27.b, known27.c, known27.d)
    assert not paf_certificate(broken)


def test_certificate_is_exact_integer_arithmetic(known3):
    # The certificate must not depend on the float epsilon at all.
    assert paf_certificate(known3)
    bad = DefiningQuad(known3.a, known3.b, known3.c, (1, 1, 1))
    assert not paf_certificate(bad)


# ── the PSD filter ───────────────────────────────────────────────────────────

def test_good_quad_rows_saturate_filter(known27):
    # For a good quad the four PSDs sum to exactly 4n at every k.
    assert passes_psd_filter(known27.rows(), 27)
    total = sum(psd_values(r) for r in known27.rows())
    assert total == pytest.approx([4 * 27] * 14, abs=1e-6)


def test_filter_rejects_overshooting_row():
    n = 9
    assert not passes_psd_filter([(1,) * 9], n)  # PSD(0) = 81 > 36 + ε


def test_filter_requires_nonempty_equal_lengths():
    with pytest.raises(InvalidInputError):
        passes_psd_filter([], 9)
    with pytest.raises(InvalidInputError):
        passes_psd_filter([(1, 1, -1), (1, 1, 1, 1, 1)], 9)


@given(st.sampled_from([3, 9, 15]), st.data())
def test_filter_monotone_in_eps(n, data):
    d = n // 2
    half = data.draw(st.tuples(*([st.sampled_from((1, -1))] * d)))
    row = (1,) + half + tuple(half[::-1])
    if passes_psd_filter([row], n, eps=0.0):
        assert passes_psd_filter([row], n, eps=1.0)
