"""Chunked, mergeable range scans running every enabled check on every
consecutive-prime pair.

The scan loop is a fused re-statement of the per-record checks in
`claims`; it keeps exact counters and only materializes outcome objects
for violations.  Equivalence of the two paths is pinned by tests.
Determinism contract: the final report never depends on worker count,
scheduling, or chunking (chunk merges happen in range order).

Reports are value objects that merge associatively, so a scan can be
partitioned, checkpointed, and resumed without changing its result.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass, field
from multiprocessing import get_context
from typing import Callable, Iterable

from .claims import PAIR_CLAIMS, ClaimId, ClaimOutcome, Status, check_identities
from .errors import (
    CheckpointCorruptError,
    CheckpointMismatchError,
    IdentityCheckError,
    InvalidRangeError,
    OverlappingRangesError,
)
from .midpoint import MidpointRecord, PrimePair
from .primes import UNIVERSE_LIMIT, iter_consecutive_pairs

DEFAULT_CHUNK_SIZE = 1 << 24
MIN_CHUNK_SIZE = 1 << 10
DEFAULT_VIOLATION_CAP = 100
CHECKPOINT_VERSION = 1

# Test hook: set to a claim name to force a FAIL on the first pair of each
# chunk (IDENTITIES escalates to the internal-error abort path).
INJECT_ENV_VAR = "GAPSCAN_INJECT_FAIL"


def _available_workers() -> int:
    return os.cpu_count() or 1


@dataclass(frozen=True)
class ScanConfig:
    """Parameters of one scan over [start, stop)."""

    start: int
    stop: int
    chunk_size: int = DEFAULT_CHUNK_SIZE
    workers: int = field(default_factory=_available_workers)
    claims: frozenset[ClaimId] = frozenset(PAIR_CLAIMS)
    violation_cap: int = DEFAULT_VIOLATION_CAP
    checkpoint_path: str | None = None
    output_format: str = "json"

    def validate(self) -> None:
        if self.start < 2:
            raise ValueError(f"scan start must be >= 2, got {self.start}")
        if self.start >= self.stop:
            raise ValueError(f"empty or reversed range [{self.start}, {self.stop})")
        if self.stop > UNIVERSE_LIMIT:
            raise ValueError(f"scan stop {self.stop} exceeds 2**63")
        if self.chunk_size < MIN_CHUNK_SIZE:
            raise ValueError(f"chunk_size must be >= {MIN_CHUNK_SIZE}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        if self.violation_cap < 0:
            raise ValueError("violation_cap must be >= 0")
        bad = set(self.claims) - set(PAIR_CLAIMS)
        if bad:
            names = ", ".join(sorted(c.value for c in bad))
            raise ValueError(f"not a per-pair claim: {names}")
        if self.output_format not in ("json", "csv"):
            raise ValueError(f"unknown output format {self.output_format!r}")

    def digest(self) -> str:
        """Hex digest over the fields that determine the report."""
        payload = json.dumps(
            {
                "start": self.start,
                "stop": self.stop,
                "chunk_size": self.chunk_size,
                "claims": sorted(c.value for c in self.claims),
                "violation_cap": self.violation_cap,
            },
            sort_keys=True,
        )
        return hashlib.sha256(payload.encode()).hexdigest()


@dataclass(frozen=True)
class ClaimCounter:
    checked: int = 0
    passed: int = 0
    vacuous: int = 0
    failed: int = 0

    def __add__(self, other: "ClaimCounter") -> "ClaimCounter":
        return ClaimCounter(
            self.checked + other.checked,
            self.passed + other.passed,
            self.vacuous + other.vacuous,
            self.failed + other.failed,
        )


@dataclass(frozen=True)
class GapRecord:
    """A pair whose gap exceeds every gap at smaller primes in the scanned
    prefix."""

    p: int
    g: int


@dataclass(frozen=True)
class RatioRecord:
    """The exact fraction g**3 / p**2 of the pair maximizing it, kept as the
    integer pair (g_cubed, p_squared) so comparisons never round."""

    g_cubed: int
    p_squared: int
    p: int
    g: int

    def beats(self, other: "RatioRecord") -> bool:
        return self.g_cubed * other.p_squared > other.g_cubed * self.p_squared


@dataclass(eq=True)
class ScanReport:
    """Mergeable aggregate of one scanned range.

    elapsed_ns is wall-clock bookkeeping and is excluded from equality:
    everything else is deterministic for a given range and configuration.
    """

    start: int
    stop: int
    pairs_checked: int
    per_claim: dict[ClaimId, ClaimCounter]
    violations: list[ClaimOutcome]
    max_ratio: RatioRecord | None
    gap_records: list[GapRecord]
    c_histogram: dict[int, int]
    violation_cap: int
    elapsed_ns: int = field(default=0, compare=False)

    @classmethod
    def empty(
        cls,
        start: int,
        stop: int,
        claims: Iterable[ClaimId] = PAIR_CLAIMS,
        violation_cap: int = DEFAULT_VIOLATION_CAP,
    ) -> "ScanReport":
        return cls(
            start=start,
            stop=stop,
            pairs_checked=0,
            per_claim={c: ClaimCounter() for c in claims},
            violations=[],
            max_ratio=None,
            gap_records=[],
            c_histogram={},
            violation_cap=violation_cap,
        )

    def to_json_dict(self) -> dict:
        """Decimal-string JSON form (no integer precision loss anywhere)."""
        per_claim = {}
        for claim in PAIR_CLAIMS:
            counter = self.per_claim.get(claim)
            if counter is None:
                continue
            per_claim[claim.value] = {
                "checked": str(counter.checked),
                "passed": str(counter.passed),
                "vacuous": str(counter.vacuous),
                "failed": str(counter.failed),
            }
        ratio = None
        if self.max_ratio is not None:
            ratio = {
                "g_cubed": str(self.max_ratio.g_cubed),
                "p_squared": str(self.max_ratio.p_squared),
                "p": str(self.max_ratio.p),
                "g": str(self.max_ratio.g),
            }
        return {
            "range": [str(self.start), str(self.stop)],
            "pairs_checked": str(self.pairs_checked),
            "per_claim": per_claim,
            "violations": [
                {
                    "claim": v.claim.value,
                    "pair_p": str(v.pair_p),
                    "status": v.status.value,
                    "lhs": str(v.lhs),
                    "rhs": str(v.rhs),
                }
                for v in self.violations
            ],
            "max_ratio": ratio,
            "gap_records": [{"p": str(r.p), "g": str(r.g)} for r in self.gap_records],
            "c_histogram": {
                str(k): str(v) for k, v in sorted(self.c_histogram.items())
            },
            "violation_cap": str(self.violation_cap),
            "elapsed_ns": str(self.elapsed_ns),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "ScanReport":
        ratio = None
        if data.get("max_ratio") is not None:
            r = data["max_ratio"]
            ratio = RatioRecord(
                g_cubed=int(r["g_cubed"]),
                p_squared=int(r["p_squared"]),
                p=int(r["p"]),
                g=int(r["g"]),
            )
        return cls(
            start=int(data["range"][0]),
            stop=int(data["range"][1]),
            pairs_checked=int(data["pairs_checked"]),
            per_claim={
                ClaimId(name): ClaimCounter(
                    checked=int(c["checked"]),
                    passed=int(c["passed"]),
                    vacuous=int(c["vacuous"]),
                    failed=int(c["failed"]),
                )
                for name, c in data["per_claim"].items()
            },
            violations=[
                ClaimOutcome(
                    claim=ClaimId(v["claim"]),
                    pair_p=int(v["pair_p"]),
                    status=Status(v["status"]),
                    lhs=int(v["lhs"]),
                    rhs=int(v["rhs"]),
                )
                for v in data["violations"]
            ],
            max_ratio=ratio,
            gap_records=[
                GapRecord(p=int(r["p"]), g=int(r["g"])) for r in data["gap_records"]
            ],
            c_histogram={int(k): int(v) for k, v in data["c_histogram"].items()},
            violation_cap=int(data["violation_cap"]),
            elapsed_ns=int(data.get("elapsed_ns", "0")),
        )

    def total_failed(self) -> int:
        return sum(c.failed for c in self.per_claim.values())


def plan_chunks(config: ScanConfig) -> list[tuple[int, int]]:
    """Disjoint ordered chunks covering [start, stop) exactly, each at most
    chunk_size wide.  A pair belongs to the chunk containing its first
    element."""
    if config.start >= config.stop:
        raise InvalidRangeError(f"empty or reversed range [{config.start}, {config.stop})")
    chunks = []
    lo = config.start
    while lo < config.stop:
        hi = min(lo + config.chunk_size, config.stop)
        chunks.append((lo, hi))
        lo = hi
    return chunks


def _icbrt(n: int) -> int:
    """Floor cube root, exact for arbitrarily large n."""
    if n <= 0:
        return 0
    x = int(round(n ** (1.0 / 3.0)))
    while x > 0 and x * x * x > n:
        x -= 1
    while (x + 1) ** 3 <= n:
        x += 1
    return x


def _injected_claim() -> ClaimId | None:
    name = os.environ.get(INJECT_ENV_VAR)
    if not name:
        return None
    try:
        return ClaimId(name.strip().upper())
    except ValueError:
        raise ValueError(f"{INJECT_ENV_VAR} names no claim: {name!r}")


def _identity_abort(p: int, q: int) -> IdentityCheckError:
    # Recompute through the record path so the error carries the first
    # violated equation's sides.
    g = q - p
    b = g // 2
    pair = PrimePair(p=p, q=q, g=g, m=p + b, b=b)
    m2 = pair.m * pair.m
    two_p = 2 * p
    two_q = 2 * q
    c_lo = (b * b) // two_p
    c_hi = (b * b) // two_q
    alpha = q + 2 * c_lo
    beta = p + 2 * c_hi
    record = MidpointRecord(
        pair=pair,
        m2=m2,
        alpha_mult=alpha,
        beta_mult=beta,
        c_lo=c_lo,
        c_hi=c_hi,
        x_lo=(m2 - p) % two_p,
        x_hi=(m2 - q) % two_q,
        delta=beta * q - alpha * p,
    )
    outcome = check_identities(record)
    return IdentityCheckError(
        f"identity failed at pair ({p}, {q}): lhs={outcome.lhs} rhs={outcome.rhs}"
    )


def scan_chunk(
    lo: int,
    hi: int,
    claims: Iterable[ClaimId] | None = None,
    violation_cap: int = DEFAULT_VIOLATION_CAP,
) -> ScanReport:
    """Scan every pair owned by [lo, hi) (ownership by first element).

    The pair at p = 2 has no integral midpoint, so it only sees the cubed
    gap bound; all other enabled checks run on every pair.
    """
    t0 = time.perf_counter_ns()
    if lo >= hi:
        raise InvalidRangeError(f"empty or reversed chunk [{lo}, {hi})")
    enabled = frozenset(PAIR_CLAIMS) if claims is None else frozenset(claims)
    inject = _injected_claim()

    do_ident = ClaimId.IDENTITIES in enabled
    do_order = ClaimId.LEMMA_ORDER in enabled
    do_bound = ClaimId.COR_BOUND in enabled
    do_product = ClaimId.COR_PRODUCT in enabled
    do_ratio = ClaimId.LEMMA_RATIO in enabled
    do_sqrt = ClaimId.LEMMA_SQRT in enabled
    do_theorem = ClaimId.THEOREM_CUBE_BOUND in enabled

    pairs = 0
    mid_pairs = 0
    theorem_checked = 0
    vacuous_product = 0
    failed: dict[ClaimId, int] = {c: 0 for c in enabled}
    violations: list[ClaimOutcome] = []
    hist_zero = 0
    hist: dict[int, int] = {}
    gap_records: list[GapRecord] = []
    best_gap = 0
    # Max-ratio tracker with a lazily raised gap bar that prunes the exact
    # cross-multiplied comparison to the rare candidate pairs.
    bg3 = bp2 = 0
    best_p = best_g = 0
    ratio_bar = -1
    bar_valid_until = 0

    def fail(claim: ClaimId, p: int, lhs: int, rhs: int) -> None:
        failed[claim] += 1
        if len(violations) < violation_cap:
            violations.append(ClaimOutcome(claim, p, Status.FAIL, lhs, rhs))

    inject_pending = inject is not None
    for p, q in iter_consecutive_pairs(lo, hi):
        pairs += 1
        g = q - p

        if g > best_gap:
            best_gap = g
            gap_records.append(GapRecord(p=p, g=g))
        if bg3 == 0:
            bg3 = g * g * g
            bp2 = p * p
            best_p, best_g = p, g
            ratio_bar = _icbrt(bg3 * p * p // bp2)
            bar_valid_until = p << 2
        else:
            if p > bar_valid_until:
                ratio_bar = _icbrt(bg3 * p * p // bp2)
                bar_valid_until = p << 2
            if g > ratio_bar:
                g3 = g * g * g
                p2 = p * p
                if g3 * bp2 > bg3 * p2:
                    bg3, bp2, best_p, best_g = g3, p2, p, g
                    ratio_bar = _icbrt(bg3 * p * p // bp2)
                    bar_valid_until = p << 2

        if p == 2:
            # Fault injection targets the first pair its claim applies to;
            # only the cubed gap bound applies here.
            injected = None
            if inject_pending and inject is ClaimId.THEOREM_CUBE_BOUND:
                injected = inject
                inject_pending = False
            if do_theorem:
                theorem_checked += 1
                if injected is ClaimId.THEOREM_CUBE_BOUND or g * g * g >= 16 * p * p:
                    fail(ClaimId.THEOREM_CUBE_BOUND, p, g * g * g, 16 * p * p)
            continue

        injected = inject if inject_pending else None
        inject_pending = False

        mid_pairs += 1
        b = g >> 1
        m = p + b
        m2 = m * m
        b2 = b * b
        two_p = p << 1
        two_q = q << 1
        c_lo = b2 // two_p
        c_hi = b2 // two_q
        x_lo = (m2 - p) % two_p
        x_hi = (m2 - q) % two_q
        alpha = q + (c_lo << 1)
        beta = p + (c_hi << 1)
        ap = alpha * p
        bq = beta * q
        delta = bq - ap

        if c_lo:
            hist[c_lo] = hist.get(c_lo, 0) + 1
        else:
            hist_zero += 1

        if do_ident:
            if (
                injected is ClaimId.IDENTITIES
                or m2 - p * q != b2
                or ap != m2 - x_lo
                or bq != m2 - x_hi
                or delta != x_lo - x_hi
            ):
                if injected is ClaimId.IDENTITIES:
                    raise IdentityCheckError(
                        f"injected identity failure at pair ({p}, {q})"
                    )
                raise _identity_abort(p, q)
        if do_order and (c_hi > c_lo or injected is ClaimId.LEMMA_ORDER):
            fail(ClaimId.LEMMA_ORDER, p, c_hi, c_lo)
        if do_bound and (delta >= two_p or injected is ClaimId.COR_BOUND):
            fail(ClaimId.COR_BOUND, p, delta, two_p)
        if do_product:
            rhs = (c_lo * g) << 1
            if delta != rhs or injected is ClaimId.COR_PRODUCT:
                fail(ClaimId.COR_PRODUCT, p, delta, rhs)
            elif rhs == 0:
                vacuous_product += 1
        if do_ratio:
            lhs = c_lo * g
            if lhs >= p or injected is ClaimId.LEMMA_RATIO:
                fail(ClaimId.LEMMA_RATIO, p, lhs, p)
        if do_sqrt:
            rhs = (p << 3) * (c_lo + 1)
            if g * g >= rhs or injected is ClaimId.LEMMA_SQRT:
                fail(ClaimId.LEMMA_SQRT, p, g * g, rhs)
        if do_theorem:
            theorem_checked += 1
            # g < 256 and p > 1024 give g**3 <= 255**3 < 16*1024**2 < 16*p**2;
            # everything else takes the exact products.
            if g >= 256 or p <= 1024 or injected is ClaimId.THEOREM_CUBE_BOUND:
                if injected is ClaimId.THEOREM_CUBE_BOUND or g * g * g >= 16 * p * p:
                    fail(ClaimId.THEOREM_CUBE_BOUND, p, g * g * g, 16 * p * p)

    if hist_zero:
        hist[0] = hist_zero

    per_claim: dict[ClaimId, ClaimCounter] = {}
    for claim in enabled:
        if claim is ClaimId.THEOREM_CUBE_BOUND:
            checked = theorem_checked
        else:
            checked = mid_pairs
        n_failed = failed[claim]
        vacuous = vacuous_product if claim is ClaimId.COR_PRODUCT else 0
        per_claim[claim] = ClaimCounter(
            checked=checked,
            passed=checked - vacuous - n_failed,
            vacuous=vacuous,
            failed=n_failed,
        )

    max_ratio = None
    if bg3:
        max_ratio = RatioRecord(g_cubed=bg3, p_squared=bp2, p=best_p, g=best_g)

    return ScanReport(
        start=lo,
        stop=hi,
        pairs_checked=pairs,
        per_claim=per_claim,
        violations=violations,
        max_ratio=max_ratio,
        gap_records=gap_records,
        c_histogram=hist,
        violation_cap=violation_cap,
        elapsed_ns=time.perf_counter_ns() - t0,
    )


def merge_reports(a: ScanReport, b: ScanReport) -> ScanReport:
    """Combine two reports over adjacent or disjoint ranges (a before b).

    Associative; the zero-width report is the identity.  Violations stay in
    increasing-p order and are re-capped; gap records are re-filtered so the
    strictly-increasing invariant holds across the boundary.
    """
    if a.stop > b.start:
        raise OverlappingRangesError(
            f"[{a.start}, {a.stop}) must lie entirely before [{b.start}, {b.stop})"
        )
    if a.violation_cap != b.violation_cap:
        raise ValueError("cannot merge reports with different violation caps")

    per_claim = dict(a.per_claim)
    for claim, counter in b.per_claim.items():
        per_claim[claim] = per_claim.get(claim, ClaimCounter()) + counter

    violations = (a.violations + b.violations)[: a.violation_cap]

    if a.max_ratio is None:
        max_ratio = b.max_ratio
    elif b.max_ratio is None or not b.max_ratio.beats(a.max_ratio):
        max_ratio = a.max_ratio
    else:
        max_ratio = b.max_ratio

    gap_records = list(a.gap_records)
    largest = gap_records[-1].g if gap_records else 0
    for record in b.gap_records:
        if record.g > largest:
            gap_records.append(record)
            largest = record.g

    c_histogram = dict(a.c_histogram)
    for key, count in b.c_histogram.items():
        c_histogram[key] = c_histogram.get(key, 0) + count

    return ScanReport(
        start=a.start,
        stop=b.stop,
        pairs_checked=a.pairs_checked + b.pairs_checked,
        per_claim=per_claim,
        violations=violations,
        max_ratio=max_ratio,
        gap_records=gap_records,
        c_histogram=c_histogram,
        violation_cap=a.violation_cap,
        elapsed_ns=a.elapsed_ns + b.elapsed_ns,
    )


@dataclass
class CheckpointState:
    """Resumable scan progress: which plan prefix is done and its merged
    partial report."""

    config_digest: str
    completed: list[tuple[int, int]]
    partial: ScanReport | None


def save_checkpoint(state: CheckpointState, path: str) -> None:
    document = {
        "version": CHECKPOINT_VERSION,
        "config_digest": state.config_digest,
        "completed": [[str(lo), str(hi)] for lo, hi in state.completed],
        "partial": None if state.partial is None else state.partial.to_json_dict(),
    }
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(document, fh)
    os.replace(tmp, path)


def load_checkpoint(path: str) -> CheckpointState:
    try:
        with open(path, encoding="utf-8") as fh:
            document = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CheckpointCorruptError(f"unreadable checkpoint {path}: {exc}") from exc
    try:
        version = int(document["version"])
        if version != CHECKPOINT_VERSION:
            raise CheckpointMismatchError(
                f"checkpoint version {version}, expected {CHECKPOINT_VERSION}"
            )
        completed = [(int(lo), int(hi)) for lo, hi in document["completed"]]
        partial = None
        if document["partial"] is not None:
            partial = ScanReport.from_json_dict(document["partial"])
        return CheckpointState(
            config_digest=str(document["config_digest"]),
            completed=completed,
            partial=partial,
        )
    except CheckpointMismatchError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise CheckpointCorruptError(f"malformed checkpoint {path}: {exc}") from exc


def _scan_chunk_task(args: tuple[int, int, tuple[str, ...], int]) -> ScanReport:
    lo, hi, claim_names, cap = args
    claims = frozenset(ClaimId(name) for name in claim_names)
    return scan_chunk(lo, hi, claims, cap)


def run_scan(
    config: ScanConfig,
    progress: Callable[[int, int, tuple[int, int]], None] | None = None,
    halt_after_chunks: int | None = None,
) -> ScanReport:
    """Execute a full scan: plan chunks, fan out to workers, merge in range
    order, checkpointing each completed prefix.

    `progress` is called as progress(done, total, chunk) after each merge.
    `halt_after_chunks` stops early after that many newly merged chunks
    (the checkpoint, if configured, then allows an exact resume); used to
    exercise interrupt/resume.
    """
    config.validate()
    plan = plan_chunks(config)
    digest = config.digest()

    done = 0
    partial: ScanReport | None = None
    if config.checkpoint_path and os.path.exists(config.checkpoint_path):
        state = load_checkpoint(config.checkpoint_path)
        if state.config_digest != digest:
            raise CheckpointMismatchError(
                "checkpoint was written by a different scan configuration"
            )
        if state.completed != plan[: len(state.completed)]:
            raise CheckpointMismatchError(
                "checkpoint chunk list does not match the scan plan"
            )
        done = len(state.completed)
        partial = state.partial

    remaining = plan[done:]
    claim_names = tuple(sorted(c.value for c in config.claims))
    cap = config.violation_cap

    newly_done = 0

    def absorb(chunk: tuple[int, int], report: ScanReport) -> ScanReport | None:
        nonlocal partial, done, newly_done
        partial = report if partial is None else merge_reports(partial, report)
        done += 1
        newly_done += 1
        if config.checkpoint_path:
            save_checkpoint(
                CheckpointState(digest, plan[:done], partial), config.checkpoint_path
            )
        if progress is not None:
            progress(done, len(plan), chunk)
        if halt_after_chunks is not None and newly_done >= halt_after_chunks:
            return partial
        return None

    if config.workers == 1 or len(remaining) <= 1:
        for chunk in remaining:
            report = scan_chunk(chunk[0], chunk[1], config.claims, cap)
            early = absorb(chunk, report)
            if early is not None:
                return early
    else:
        tasks = [(lo, hi, claim_names, cap) for lo, hi in remaining]
        ctx = get_context()
        with ctx.Pool(processes=min(config.workers, len(tasks))) as pool:
            for chunk, report in zip(remaining, pool.imap(_scan_chunk_task, tasks)):
                early = absorb(chunk, report)
                if early is not None:
                    pool.terminate()
                    return early

    assert partial is not None  # plan is never empty for a validated config
    return partial
