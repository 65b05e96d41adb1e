"""Equivalence operations and canonical representatives.

Two quads of defining rows generate equivalent good matrices when one is
reachable from the other by compositions of three operations:

  1. reorder B, C, D arbitrarily;
  2. negate any of B, C, D;
  3. apply an index automorphism y_i = x_{u·i mod n} with gcd(u, n) = 1
     to all four rows simultaneously.

The canonical representative of a quad is the minimum of its orbit under a
fixed global order: entries compare +1 < −1 (and +3 < +1 < −1 < −3 for
compressed entries), rows compare lexicographically, quads compare on the
concatenation A‖B‖C‖D.  This matches byte order of the on-disk ±-string
format ('+' < '-'), so sorted row files and sorted in-memory lists agree.

Because negation is undone by sign normalization, the minimum over the full
orbit equals the minimum over automorphisms of the sign-normalized, sorted
quad — which is what canonical_form computes.

Compressed quads have their own, smaller group (negation is unavailable:
first entries stay pinned at +1 during the search): reorders of Bc, Cc, Dc
and the induced index action j ↦ u·j mod m.  Every unit u mod n induces
u mod m, and conversely every unit mod m lifts to one mod n (m | n), so
acting with all units mod m is exactly the induced action, not a proxy.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Callable, Iterable, Sequence, TypeVar

from .errors import InvalidInputError
from .seqcore import CompressedQuad, DefiningQuad, Row

T = TypeVar("T")


# ── the global order ────────────────────────────────────────────────────────

def row_key(row: Sequence[int]):
    """Sort key realizing +3 < +1 < −1 < −3 entrywise, then left-to-right."""
    return tuple(-e for e in row)


def quad_key(quad: Sequence[Sequence[int]]):
    """Sort key for quads: the global order on A‖B‖C‖D."""
    return tuple(-e for row in quad for e in row)


def row_less(r1: Sequence[int], r2: Sequence[int]) -> bool:
    return row_key(r1) < row_key(r2)


# ── the operations ──────────────────────────────────────────────────────────

def negate_row(row: Sequence[int]) -> Row:
    return tuple(-e for e in row)


def normalize_signs_and_order(quad: DefiningQuad) -> DefiningQuad:
    """Negate B, C, D to positive first entries, then sort them; A unchanged."""
    a, b, c, d = quad.rows()
    fixed = [negate_row(x) if x[0] < 0 else tuple(x) for x in (b, c, d)]
    fixed.sort(key=row_key)
    return DefiningQuad(tuple(a), *fixed)


@lru_cache(maxsize=None)
def units(n: int) -> tuple[int, ...]:
    """The units modulo n (automorphism multipliers)."""
    if n == 1:
        return (1,)
    return tuple(u for u in range(1, n) if gcd(u, n) == 1)


def permute_row(row: Sequence[int], u: int) -> Row:
    """y_i = x_{u·i mod n}."""
    n = len(row)
    return tuple(row[(u * i) % n] for i in range(n))


def apply_automorphism(quad: DefiningQuad, u: int) -> DefiningQuad:
    """Apply y_i = x_{u·i mod n} to all four rows; needs gcd(u, n) = 1."""
    n = quad.n
    if gcd(u, n) != 1:
        raise InvalidInputError(f"{u} is not a unit modulo {n}")
    return DefiningQuad(*(permute_row(r, u) for r in quad.rows()))


# ── canonical forms ─────────────────────────────────────────────────────────

@dataclass(frozen=True)
class CanonicalQuad:
    """A defining quad that is the minimum of its full equivalence orbit."""

    quad: DefiningQuad
    certified: bool = True

    def sort_key(self):
        return quad_key(self.quad)


def canonical_form(quad: DefiningQuad) -> CanonicalQuad:
    """Minimum over all automorphisms of the sign/order-normalized quad."""
    best = None
    best_key = None
    for u in units(quad.n):
        cand = normalize_signs_and_order(apply_automorphism(quad, u))
        key = quad_key(cand)
        if best_key is None or key < best_key:
            best, best_key = cand, key
    return CanonicalQuad(quad=best, certified=True)


def canonical_compressed(cq: CompressedQuad, n: int) -> CompressedQuad:
    """Minimum over reorders of Bc, Cc, Dc and index maps j ↦ u·j mod m."""
    m = n // 3
    if n % 3 != 0 or cq.m != m:
        raise InvalidInputError(f"compressed quad length {cq.m} does not match n={n}")
    ac, bc, cc, dc = cq.rows()
    best = None
    best_key = None
    for u in units(m):
        pa = permute_row(ac, u)
        rest = sorted((permute_row(bc, u), permute_row(cc, u), permute_row(dc, u)),
                      key=row_key)
        cand = CompressedQuad(pa, *rest)
        key = quad_key(cand)
        if best_key is None or key < best_key:
            best, best_key = cand, key
    return best


def dedup(items: Iterable[T], canonicalizer: Callable[[T], object],
          sort_key: Callable | None = None) -> list:
    """One representative per canonical form, sorted by the global order.

    The first occurrence of each class decides nothing (the canonical form is
    the representative either way); it is kept only in the sense that later
    equivalent items are ignored.
    """
    seen: dict = {}
    for item in items:
        canon = canonicalizer(item)
        if canon not in seen:
            seen[canon] = canon
    out = list(seen.values())
    if sort_key is None:
        sort_key = _default_sort_key
    out.sort(key=sort_key)
    return out


def _default_sort_key(canon):
    if isinstance(canon, CanonicalQuad):
        return canon.sort_key()
    return quad_key(canon)
