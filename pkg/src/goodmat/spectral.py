"""Power spectral density, periodic autocorrelation, and the two tests built
on them: the one-sided PSD filter and the exact integer PAF certificate.

For a sequence X of length n and omega = exp(2*pi*i/n),

    PSD_X(k) = |sum_j x_j omega^(j k)|^2        (float, k = 0..floor(n/2)),
    PAF_X(k) = sum_j x_j x_{j+k mod n}          (exact integer).

Both are symmetric about n/2, so profiles store k = 0..floor(n/2) only.
A quad of defining rows yields good matrices iff sum_X PSD_X(k) = 4n for all
k, equivalently iff sum_X PAF_X(k) = 0 for all 1 <= k <= floor(n/2).  The
filter uses the PSD form (any subset of rows must satisfy sum <= 4n) with a
slack of EPS; the final accept/reject decision always uses the integer PAF
form, so floating point can never drop a solution.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import InvalidInputError
from .seqcore import DefiningQuad

#: Slack used for every floating-point comparison in the pipeline.
EPS = 1e-2


@dataclass(frozen=True)
class SpectralProfile:
    """PSD values at k = 0..floor(n/2), with the tolerance they carry."""

    values: tuple[float, ...]
    eps: float = EPS

    @property
    def max(self) -> float:
        return max(self.values)


@dataclass(frozen=True)
class PafVector:
    """Integer PAF values at k = 0..floor(n/2)."""

    values: tuple[int, ...]


@lru_cache(maxsize=None)
def dft_basis(n: int) -> np.ndarray:
    """Complex matrix F with F[j, k] = omega^(j k) for k = 0..floor(n/2).

    X @ F gives the half-spectrum of X; PSD is its squared magnitude.
    """
    j = np.arange(n)[:, None]
    k = np.arange(n // 2 + 1)[None, :]
    return np.exp(2j * np.pi * j * k / n)


def psd_values(x: Sequence[int]) -> np.ndarray:
    """PSD_X(k) for k = 0..floor(n/2) as a float array."""
    spec = np.asarray(x, dtype=np.float64) @ dft_basis(len(x))
    return np.abs(spec) ** 2


def psd_profile(x: Sequence[int]) -> SpectralProfile:
    return SpectralProfile(tuple(psd_values(x).tolist()))


def full_psd_sum(x: Sequence[int]) -> float:
    """Sum of PSD_X(k) over ALL k = 0..n-1, expanded from the half profile."""
    n = len(x)
    vals = psd_values(x)
    if n % 2 == 0:
        # k = n/2 is its own mirror image
        return float(vals[0] + vals[-1] + 2.0 * vals[1:-1].sum())
    return float(vals[0] + 2.0 * vals[1:].sum())


def paf(x: Sequence[int], k: int) -> int:
    """Exact periodic autocorrelation at shift k."""
    n = len(x)
    k %= n
    return sum(x[j] * x[(j + k) % n] for j in range(n))


def paf_vector(x: Sequence[int]) -> PafVector:
    return PafVector(tuple(paf(x, k) for k in range(len(x) // 2 + 1)))


def passes_psd_filter(rows: Sequence[Sequence[int]], n: int, eps: float = EPS) -> bool:
    """True iff sum of the rows' PSDs is <= 4n + eps at every k.

    `n` is the UNCOMPRESSED order: the 4n bound applies unchanged to
    compressed rows (of length n/3).  All rows must have equal length.
    """
    if not rows:
        raise InvalidInputError("PSD filter needs a nonempty set of rows")
    length = len(rows[0])
    if any(len(r) != length for r in rows):
        raise InvalidInputError("all rows must have the same length")
    total = psd_values(rows[0]).copy()
    for row in rows[1:]:
        total += psd_values(row)
    return bool((total <= 4 * n + eps).all())


def paf_certificate(quad: DefiningQuad) -> bool:
    """Exact, float-free acceptance test for good matrices.

    True iff PAF_A(k) + PAF_B(k) + PAF_C(k) + PAF_D(k) = 0 for every
    1 <= k <= floor(n/2).  (At k = 0 the sum is 4n automatically for ±1
    rows, so it is not checked.)
    """
    n = quad.n
    if any(len(r) != n for r in quad.rows()):
        raise InvalidInputError("quad rows must have equal lengths")
    a, b, c, d = quad.rows()
    for k in range(1, n // 2 + 1):
        if paf(a, k) + paf(b, k) + paf(c, k) + paf(d, k) != 0:
            return False
    return True
