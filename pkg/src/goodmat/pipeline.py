"""End-to-end enumeration, independent verification, oracle, and reporting.

The enumeration pipeline for an odd order n divisible by 3:

  1. signed_rowsums(n):      solve row(B)²+row(C)²+row(D)² = 4n−1 with signs;
  2. generate_candidates:    2^d sweep → compressed candidate sets s_sk, s_sy;
  3. match_quadruples:       pair filter + exact sort-join → S_q;
  4. canonical_compressed dedup → one SAT instance per compressed class;
  5. solve_all per instance (CDCL + PSD theory callback) → defining quads;
  6. canonical_form dedup → the sorted list of inequivalent good matrices.

Verification is deliberately independent of the search code: it materializes
the circulant matrices and checks the defining identity, amicability after
row reversal, and the 4n-order skew Hadamard block construction with exact
integer matrix arithmetic.  The brute-force oracle re-derives small orders
(n ≤ 15) from nothing but the PAF certificate, bypassing candidates/matching
/satsearch entirely.
"""

from __future__ import annotations

import hashlib
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .candidates import CandidateSets, generate_candidates
from .diophantine import signed_rowsums
from .equiv import CanonicalQuad, canonical_compressed, canonical_form, dedup, quad_key
from .errors import ConstructionError, InvalidInputError, PartialResultError
from .matching import match_quadruples
from .satsearch import AuditRecord, build_instance, solve_all
from .seqcore import (
    CompressedQuad,
    DefiningQuad,
    format_row,
    iter_halves,
    make_skew,
    make_symmetric,
)
from .spectral import EPS, paf_certificate, paf_vector

REPORT_SCHEMA_VERSION = 1

#: Orders above this need an explicit opt-in (allow_large / --allow-large):
#: beyond it the published search needed cluster-scale budgets.
UNLIMITED_MAX_ORDER = 39


@dataclass(frozen=True)
class FilterConfig:
    """Switches for every pruning device that is not part of the exact core.

    The first four flags are *filters*: float spectral/rowsum screens that
    discard candidates early.  They are redundant with the exact integer
    checks (PAF certificate, exact matching identity), so disabling them must
    not change the solution set, only the running time — a tested property
    of the pipeline (see ``no_filters``).

    The last two flags are not filters but proved reductions: the product-rule
    clauses encode a theorem about every solution, and the compressed-level
    dedup collapses provably equivalent instances.  They too are toggleable
    (and toggling them is exercised at small orders), but turning both off
    makes the solver enumerate the raw model space of the compression
    constraints, which is astronomically larger — that is a complexity
    consequence, not a correctness one.
    """

    psd_candidates: bool = True   # per-row PSD bound in the 2^d sweep
    rowsum_candidates: bool = True  # rowsum membership for symmetric rows
    psd_pairs: bool = True        # pairwise PSD bound before the join
    prefix_checks: bool = True    # 1/2/3-row PSD checks in the callback
    parity_clauses: bool = True   # product-rule clauses in the encoding
    dedup_instances: bool = True  # compressed-level equivalence dedup

    @classmethod
    def no_filters(cls) -> "FilterConfig":
        """Every float filter off; the exact constraints alone drive the search."""
        return cls(psd_candidates=False, rowsum_candidates=False,
                   psd_pairs=False, prefix_checks=False)

    @classmethod
    def all_disabled(cls) -> "FilterConfig":
        """Filters *and* reductions off.  Tractable only at tiny orders."""
        return cls(False, False, False, False, False, False)


@dataclass
class SearchReport:
    """What a run did: counts, timings, shard, and a digest of the answer."""

    n: int
    wall_time_s: float
    instance_count: int
    solutions_found: int
    inequivalent_count: int
    stage_seconds: dict[str, float] = field(default_factory=dict)
    solver_stats: dict[str, int] = field(default_factory=dict)
    shard: Optional[tuple[int, int]] = None
    exhaustive: bool = True
    digest: str = ""
    schema_version: int = REPORT_SCHEMA_VERSION

    def to_json(self) -> str:
        payload = {
            "schema_version": self.schema_version,
            "n": self.n,
            "wall_time_s": round(self.wall_time_s, 3),
            "instance_count": self.instance_count,
            "solutions_found": self.solutions_found,
            "inequivalent_count": self.inequivalent_count,
            "stage_seconds": {k: round(v, 3) for k, v in self.stage_seconds.items()},
            "solver_stats": dict(self.solver_stats),
            "shard": list(self.shard) if self.shard else None,
            "exhaustive": self.exhaustive,
            "digest": self.digest,
        }
        return json.dumps(payload, indent=1) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "SearchReport":
        data = json.loads(text)
        return cls(
            n=data["n"],
            wall_time_s=data["wall_time_s"],
            instance_count=data["instance_count"],
            solutions_found=data["solutions_found"],
            inequivalent_count=data["inequivalent_count"],
            stage_seconds=dict(data.get("stage_seconds", {})),
            solver_stats=dict(data.get("solver_stats", {})),
            shard=tuple(data["shard"]) if data.get("shard") else None,
            exhaustive=data.get("exhaustive", True),
            digest=data.get("digest", ""),
            schema_version=data.get("schema_version", REPORT_SCHEMA_VERSION),
        )


def solution_digest(quads: Sequence[CanonicalQuad]) -> str:
    """SHA-256 of the sorted canonical row file — the auditable fingerprint."""
    buf = io.StringIO()
    for cq in quads:
        for row in cq.quad.rows():
            buf.write(format_row(row) + "\n")
        buf.write("\n")
    return hashlib.sha256(buf.getvalue().encode()).hexdigest()


def _validate_order(n: int, allow_large: bool) -> None:
    if n < 3 or n % 2 == 0 or n % 3 != 0:
        raise InvalidInputError(f"order must be odd, >= 3 and divisible by 3, got {n}")
    if n > UNLIMITED_MAX_ORDER and not allow_large:
        raise InvalidInputError(
            f"order {n} exceeds the desk-scale limit {UNLIMITED_MAX_ORDER}; "
            "pass allow_large=True (CLI: --allow-large) to proceed anyway"
        )


def prepare_instances(
    n: int,
    *,
    eps: float = EPS,
    filters: FilterConfig = FilterConfig(),
    allow_large: bool = False,
) -> tuple[list[CompressedQuad], CandidateSets, dict[str, float]]:
    """Stages 1–4: rowsums, candidates, matching, compressed dedup."""
    _validate_order(n, allow_large)
    timings: dict[str, float] = {}

    t0 = time.perf_counter()
    rowsums = signed_rowsums(n)
    timings["rowsums"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    cands = generate_candidates(
        n, rowsums, eps=eps,
        psd_filter=filters.psd_candidates,
        rowsum_filter=filters.rowsum_candidates,
    )
    timings["candidates"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    s_q = match_quadruples(cands, n, eps=eps, pair_filter=filters.psd_pairs)
    timings["matching"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    if filters.dedup_instances:
        instances = dedup(s_q, lambda cq: canonical_compressed(cq, n))
    else:
        instances = sorted(set(s_q), key=quad_key)
    timings["instance_dedup"] = time.perf_counter() - t0
    return instances, cands, timings


def _solve_one(args) -> tuple[list[DefiningQuad], dict]:
    cq, n, parity, prefix_checks, eps, seed, max_conflicts = args
    instance = build_instance(cq, parity=parity)
    quads = solve_all(
        instance, seed=seed, max_conflicts=max_conflicts,
        eps=eps, prefix_checks=prefix_checks,
    )
    return quads, instance.stats


def enumerate_good_matrices(
    n: int,
    *,
    eps: float = EPS,
    filters: FilterConfig = FilterConfig(),
    shard: Optional[tuple[int, int]] = None,
    seed: int = 0,
    jobs: int = 1,
    max_conflicts: Optional[int] = None,
    allow_large: bool = False,
    audit: Optional[list[AuditRecord]] = None,
) -> tuple[list[CanonicalQuad], SearchReport]:
    """Run the full pipeline; returns (sorted canonical quads, report).

    With shard=(i, N), only instances with index ≡ i (mod N) in the sorted
    deduped instance list are solved: N shards jointly cover the search
    exactly once and their union equals the unsharded result.
    """
    start = time.perf_counter()
    instance_quads, _, timings = prepare_instances(
        n, eps=eps, filters=filters, allow_large=allow_large
    )
    if shard is not None:
        i, total = shard
        if not (0 <= i < total):
            raise InvalidInputError(f"shard index {i} not in range 0..{total - 1}")
        instance_quads = instance_quads[i::total]

    t0 = time.perf_counter()
    raw_solutions: list[DefiningQuad] = []
    partial = False
    stats_total = {"conflicts": 0, "decisions": 0, "propagations": 0,
                   "restarts": 0, "theory_clauses": 0, "raw_models": 0}
    try:
        if jobs > 1 and audit is None:
            args = [
                (cq, n, filters.parity_clauses, filters.prefix_checks,
                 eps, seed, max_conflicts)
                for cq in instance_quads
            ]
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                for quads, stats in pool.map(_solve_one, args, chunksize=4):
                    raw_solutions.extend(quads)
                    _accumulate(stats_total, stats)
        else:
            for cq in instance_quads:
                instance = build_instance(cq, parity=filters.parity_clauses)
                quads = solve_all(
                    instance, seed=seed, max_conflicts=max_conflicts,
                    eps=eps, prefix_checks=filters.prefix_checks, audit=audit,
                )
                raw_solutions.extend(quads)
                _accumulate(stats_total, instance.stats)
    except PartialResultError as exc:
        raw_solutions.extend(exc.solutions)
        partial = True
    timings["solving"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    canonical = dedup(raw_solutions, canonical_form)
    timings["postprocess"] = time.perf_counter() - t0

    report = SearchReport(
        n=n,
        wall_time_s=time.perf_counter() - start,
        instance_count=len(instance_quads),
        solutions_found=len(raw_solutions),
        inequivalent_count=len(canonical),
        stage_seconds=timings,
        solver_stats=stats_total,
        shard=shard,
        exhaustive=(shard is None and not partial),
        digest=solution_digest(canonical),
    )
    if partial:
        raise PartialResultError(
            f"enumeration of order {n} exceeded its conflict budget",
            solutions=canonical,
            report=report,
        )
    return canonical, report


def _accumulate(total: dict, stats: dict) -> None:
    for key in total:
        total[key] += stats.get(key, 0)


# ── independent verification family ─────────────────────────────────────────

def circulant(row: Sequence[int]) -> np.ndarray:
    """Integer circulant matrix: each row is the previous one shifted right."""
    n = len(row)
    r = np.asarray(row, dtype=np.int64)
    i, j = np.indices((n, n))
    return r[(j - i) % n]


def verify_definition(quad: DefiningQuad) -> bool:
    """Exact check of the defining identity on materialized matrices.

    A skew (unit diagonal, off-diagonal antisymmetric), B, C, D symmetric,
    and AAᵀ + B² + C² + D² = 4n·I — all in integer arithmetic, independent
    of the spectral code path.
    """
    a, b, c, d = (circulant(r) for r in quad.rows())
    n = quad.n
    for mat in (a, b, c, d):
        if not np.isin(mat, (-1, 1)).all():
            return False
    if not (np.diag(a) == 1).all() or not (a + a.T == 2 * np.eye(n, dtype=np.int64)).all():
        return False
    for mat in (b, c, d):
        if not (mat == mat.T).all():
            return False
    lhs = a @ a.T + b @ b + c @ c + d @ d
    return bool((lhs == 4 * n * np.eye(n, dtype=np.int64)).all())


def recover_amicable(quad: DefiningQuad) -> tuple[np.ndarray, ...]:
    """A unchanged; B, C, D with row order reversed — restores amicability.

    Reversing the rows of a circulant matrix built from a symmetric defining
    row yields a symmetric back-circulant matrix; any two of those commute
    with transposition, which is the amicability condition XYᵀ = YXᵀ.
    """
    if not verify_definition(quad):
        raise InvalidInputError("quad does not satisfy the defining identity")
    a = circulant(quad.a)
    rest = [circulant(r)[::-1, :] for r in quad.rows()[1:]]
    mats = (a, *rest)
    for x in mats:
        for y in mats:
            if not (x @ y.T == y @ x.T).all():
                raise ConstructionError("amicability failed after row reversal")
    total = sum(x @ x.T for x in mats)
    if not (total == 4 * quad.n * np.eye(quad.n, dtype=np.int64)).all():
        raise ConstructionError("defining identity lost after row reversal")
    return mats


def build_skew_hadamard(quad: DefiningQuad) -> np.ndarray:
    """The 4n-order skew Hadamard block matrix, verified exactly.

    Block layout (A, B, C, D amicable good matrices):

        [  A   B   C   D ]
        [ -B   A   D  -C ]
        [ -C  -D   A   B ]
        [ -D   C  -B   A ]
    """
    a, b, c, d = recover_amicable(quad)
    h = np.block([
        [a, b, c, d],
        [-b, a, d, -c],
        [-c, -d, a, b],
        [-d, c, -b, a],
    ])
    order = 4 * quad.n
    eye = np.eye(order, dtype=np.int64)
    if not (h @ h.T == order * eye).all():
        raise ConstructionError("block matrix is not Hadamard")
    if not (h + h.T == 2 * eye).all():
        raise ConstructionError("block matrix is not skew")
    return h


# ── the brute-force oracle ──────────────────────────────────────────────────

ORACLE_MAX_ORDER = 15


def brute_force_oracle(n: int) -> list[CanonicalQuad]:
    """Ground-truth enumeration for n ≤ 15, from the PAF certificate alone.

    Walks all 4^(n−1) half-assignment combinations (as a keyed join over the
    2^d skew and 2^d symmetric rows: the PAF sums of (A, B) must cancel those
    of (C, D), which prunes without ever discarding a certified quad).  Uses
    no code from the candidates/matching/satsearch path.
    """
    if n < 1 or n % 2 == 0:
        raise InvalidInputError(f"order must be odd and positive, got {n}")
    if n > ORACLE_MAX_ORDER:
        raise InvalidInputError(
            f"brute-force oracle refuses n={n} > {ORACLE_MAX_ORDER} (4^(n-1) blow-up)"
        )
    d = n // 2
    skews = [make_skew(h, n) for h in iter_halves(d)]
    syms = [make_symmetric(h, n) for h in iter_halves(d)]
    paf_of = {row: paf_vector(row).values[1:] for row in set(skews) | set(syms)}

    cd_index: dict[tuple[int, ...], list[tuple]] = {}
    for c in syms:
        pc = paf_of[c]
        for dd in syms:
            key = tuple(-x - y for x, y in zip(pc, paf_of[dd]))
            cd_index.setdefault(key, []).append((c, dd))

    found: list[DefiningQuad] = []
    for a in skews:
        pa = paf_of[a]
        for b in syms:
            key = tuple(x + y for x, y in zip(pa, paf_of[b]))
            for c, dd in cd_index.get(key, ()):
                quad = DefiningQuad(a, b, c, dd)
                assert paf_certificate(quad)
                found.append(quad)
    return dedup(found, canonical_form)
