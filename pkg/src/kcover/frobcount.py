"""Fiber scanner: lower-bound the rational point count of the induced cover.

For each t0 in a range, specialize f = p - t0*q over F_lam, classify the
fiber (ramified, degree-dropped, or counted), extract the distinct-degree
counts d_1..d_k of f, and add the invariant-k-subset value they encode.
Summed over all unramified t0, that is a lower bound for the number of
rational points on the induced k-subset cover: each degree-k factor of f is
one rational point over t0.

Ramified fibers and fibers whose degree drops by 2 or more are excluded
rather than analyzed; both exclusions only lower the total, and the verdict
machinery downstream needs only a lower bound.  A degree drop of exactly 1
signals one rational fiber point at infinity and adds 1 to d_1.

Scanning is embarrassingly parallel over disjoint t0 chunks.  Each chunk's
result is exact integer data; the full result is the order-independent merge
of chunk results, so totals are bit-identical for any worker count.  Chunks
are also the unit of checkpointing: a record is appended only when its chunk
is complete, and a checkpoint binds (lam, k, hash of p and q) so it cannot
be replayed against a different problem.
"""

from __future__ import annotations

import hashlib
import os
import warnings
from dataclasses import dataclass
from multiprocessing import Pool, Value

from .errors import CheckpointMismatch, InconsistencyError
from .modarith import FPoly, _ddf, _gcd, _trim
from .permcomb import _pi_from_pairs

DEFAULT_CHUNK = 1 << 16
DEFAULT_CHECK_EVERY = 1 << 16

_CKPT_MAGIC = "kcover-checkpoint"
_CKPT_VERSION = 1

STATUS_COUNTED = "counted"
STATUS_RAMIFIED = "ramified"
STATUS_SKIPPED = "degree_drop_skipped"


@dataclass(frozen=True)
class FiberPattern:
    """Classification of one fiber: counted fibers carry the distinct-degree
    counts (after any degree-drop adjustment) and their subset-count value."""

    t0: int
    status: str
    counts: tuple | None = None
    pi_k: int | None = None


@dataclass(frozen=True)
class ScanResult:
    """Aggregate over a set of scanned t0 intervals.

    ranges are half-open [start, end) pairs, sorted, disjoint, coalesced.
    fiber_histogram maps counts tuples to occurrences; its weighted sum
    reproduces total exactly.  Treat instances as immutable: the dict is
    never to be mutated after construction.
    """

    ranges: tuple
    total: int
    fiber_histogram: dict
    ramified_points: tuple
    skipped_points: tuple
    early_exit_triggered: bool

    def points_scanned(self) -> int:
        return sum(e - s for s, e in self.ranges)


def zero_result() -> ScanResult:
    return ScanResult((), 0, {}, (), (), False)


def specialize(p: FPoly, q: FPoly, t0: int):
    """(f, degree_drop) with f = p - t0*q in canonical form."""
    lam = p.field.modulus
    n = max(len(p.coeffs), len(q.coeffs)) - 1
    fc = _specialize_raw(list(p.coeffs), list(q.coeffs), t0 % lam, lam)
    if not fc:
        raise InconsistencyError(
            f"specialization at t0={t0} vanished identically; p and q share a factor"
        )
    return FPoly(p.field, fc), n - (len(fc) - 1)


def _specialize_raw(pc: list, qc: list, t0: int, lam: int) -> list:
    width = max(len(pc), len(qc))
    f = [0] * width
    for i, c in enumerate(pc):
        f[i] = c
    for i, c in enumerate(qc):
        f[i] = (f[i] - t0 * c) % lam
    return _trim(f)


def fiber_pi_k(f: FPoly, degree_drop: int, k: int) -> FiberPattern:
    """Classify one specialized fiber and evaluate its subset count.

    Order of the gates: ramification (gcd with the derivative) first, then
    the degree-drop skip, then counting with the drop-1 adjustment.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    status, counts, pi = _fiber_raw(
        list(f.coeffs), degree_drop, k, f.field.modulus
    )
    return FiberPattern(t0=-1, status=status, counts=counts, pi_k=pi)


def _fiber_raw(fc: list, drop: int, k: int, lam: int):
    """(status, counts, pi) for a specialized fiber given as a raw list."""
    deriv = _trim([i * c % lam for i, c in enumerate(fc)][1:])
    if len(fc) > 1 and len(_gcd(fc, deriv, lam)) > 1:
        return STATUS_RAMIFIED, None, None
    if drop >= 2:
        return STATUS_SKIPPED, None, None
    if len(fc) == 1:
        # constant fiber without a big drop cannot happen for a real cover
        raise InconsistencyError("constant specialization with degree drop < 2")
    counts = _ddf(fc, k, lam)
    if drop == 1:
        counts[0] += 1
    counts = tuple(counts)
    pi = _pi_from_pairs(((i + 1, d) for i, d in enumerate(counts) if d), k)
    return STATUS_COUNTED, counts, pi


def _scan_raw(pc, qc, lam, k, start, end, threshold, counter, check_every):
    """Scan [start, end); returns (stop, total, hist, ram, skip, early).

    stop is one past the last t0 actually scanned (== end unless early exit).
    When a shared counter is given, the local delta is published to it every
    check_every fibers and the threshold is tested against the global value;
    otherwise the local total is tested.
    """
    total = 0
    pending = 0
    hist = {}
    ram = []
    skip = []
    early = False
    q_const = len(qc) == 1
    q0 = qc[0] if q_const else 0
    width = max(len(pc), len(qc))
    since_check = 0
    t0 = start
    while t0 < end:
        if q_const:
            fc = list(pc)
            fc[0] = (fc[0] - t0 * q0) % lam
            _trim(fc)
        else:
            fc = _specialize_raw(pc, qc, t0, lam)
        if not fc:
            raise InconsistencyError(
                f"specialization at t0={t0} vanished identically"
            )
        drop = width - len(fc)
        status, counts, pi = _fiber_raw(fc, drop, k, lam)
        if status == STATUS_COUNTED:
            total += pi
            pending += pi
            hist[counts] = hist.get(counts, 0) + 1
        elif status == STATUS_RAMIFIED:
            ram.append(t0)
        else:
            skip.append(t0)
        t0 += 1
        since_check += 1
        if threshold is not None and since_check >= check_every:
            since_check = 0
            if counter is not None:
                with counter.get_lock():
                    counter.value += pending
                    seen = counter.value
                pending = 0
            else:
                seen = total
            if seen > threshold:
                early = True
                break
    if counter is not None and pending:
        with counter.get_lock():
            counter.value += pending
            if threshold is not None and counter.value > threshold:
                early = True
    return t0, total, hist, ram, skip, early


def scan_range(
    p: FPoly,
    q: FPoly,
    k: int,
    start: int,
    end: int,
    early_exit_threshold: int | None = None,
    check_every: int = DEFAULT_CHECK_EVERY,
) -> ScanResult:
    """Single-process scan of [start, end) subset of [0, lam)."""
    lam = p.field.modulus
    if not 0 <= start <= end <= lam:
        raise ValueError(f"range [{start}, {end}) outside [0, {lam})")
    if k < 1:
        raise ValueError("k must be >= 1")
    if start == end:
        return zero_result()
    stop, total, hist, ram, skip, early = _scan_raw(
        list(p.coeffs), list(q.coeffs), lam, k,
        start, end, early_exit_threshold, None, check_every,
    )
    hist = {key: hist[key] for key in sorted(hist)}
    return ScanResult(
        ranges=((start, stop),),
        total=total,
        fiber_histogram=hist,
        ramified_points=tuple(ram),
        skipped_points=tuple(skip),
        early_exit_triggered=early,
    )


def merge(a: ScanResult, b: ScanResult) -> ScanResult:
    """Combine results over disjoint ranges; commutative and associative."""
    intervals = sorted(a.ranges + b.ranges)
    coalesced = []
    for s, e in intervals:
        if coalesced and s < coalesced[-1][1]:
            raise ValueError(
                f"overlapping scan ranges: [{s}, {e}) meets {coalesced[-1]}"
            )
        if coalesced and s == coalesced[-1][1]:
            coalesced[-1] = (coalesced[-1][0], e)
        else:
            coalesced.append((s, e))
    hist = {}
    for src in (a.fiber_histogram, b.fiber_histogram):
        for key, cnt in src.items():
            hist[key] = hist.get(key, 0) + cnt
    hist = {key: hist[key] for key in sorted(hist)}
    return ScanResult(
        ranges=tuple(coalesced),
        total=a.total + b.total,
        fiber_histogram=hist,
        ramified_points=tuple(sorted(a.ramified_points + b.ramified_points)),
        skipped_points=tuple(sorted(a.skipped_points + b.skipped_points)),
        early_exit_triggered=a.early_exit_triggered or b.early_exit_triggered,
    )


# ---------------------------------------------------------------------------
# checkpointing


def problem_digest(p: FPoly, q: FPoly, k: int) -> str:
    lam = p.field.modulus
    blob = "lam={};k={};p={};q={}".format(
        lam, k, ",".join(map(str, p.coeffs)), ",".join(map(str, q.coeffs))
    )
    return hashlib.sha256(blob.encode()).hexdigest()


def _ckpt_header(p, q, k):
    return f"{_CKPT_MAGIC} {_CKPT_VERSION} {p.field.modulus} {k} {problem_digest(p, q, k)}"


def _fmt_points(pts) -> str:
    return ",".join(map(str, pts)) if pts else "-"


def _fmt_hist(hist) -> str:
    if not hist:
        return "-"
    return ";".join(
        "{}:{}".format(",".join(map(str, key)), cnt) for key, cnt in sorted(hist.items())
    )


def _record_line(start, end, total, hist, ram, skip) -> str:
    return (
        f"{start} {end} {total} ram={_fmt_points(ram)} "
        f"skip={_fmt_points(skip)} hist={_fmt_hist(hist)}"
    )


def _parse_points(tok: str, tag: str):
    body = tok.removeprefix(tag + "=")
    if body == tok:
        raise ValueError(f"expected {tag}= field")
    return () if body == "-" else tuple(int(x) for x in body.split(","))


def _parse_record(line: str):
    toks = line.split()
    if len(toks) != 6:
        raise ValueError("wrong field count")
    start, end, total = int(toks[0]), int(toks[1]), int(toks[2])
    ram = _parse_points(toks[3], "ram")
    skip = _parse_points(toks[4], "skip")
    hist_tok = toks[5].removeprefix("hist=")
    if hist_tok == toks[5]:
        raise ValueError("expected hist= field")
    hist = {}
    if hist_tok != "-":
        for item in hist_tok.split(";"):
            key_s, cnt_s = item.split(":")
            hist[tuple(int(x) for x in key_s.split(","))] = int(cnt_s)
    if not 0 <= start < end:
        raise ValueError("bad interval")
    return ScanResult(((start, end),), total, hist, ram, skip, False)


def load_checkpoint(path: str, p: FPoly, q: FPoly, k: int) -> ScanResult:
    """Read a checkpoint, verify it binds to this problem, and merge its
    records.  A malformed final line (interrupted write) is dropped; a
    malformed line anywhere else is corruption and a hard error."""
    with open(path, "r", encoding="ascii") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise CheckpointMismatch(f"{path}: empty checkpoint")
    if lines[0] != _ckpt_header(p, q, k):
        raise CheckpointMismatch(
            f"{path}: header does not match this problem "
            f"(expected {_ckpt_header(p, q, k)!r})"
        )
    acc = zero_result()
    for idx, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        try:
            rec = _parse_record(line)
        except ValueError as exc:
            if idx == len(lines):
                break  # torn tail from an interrupted run
            raise CheckpointMismatch(f"{path}:{idx}: corrupt record ({exc})") from exc
        try:
            acc = merge(acc, rec)
        except ValueError as exc:
            raise CheckpointMismatch(f"{path}:{idx}: {exc}") from exc
    return acc


class _CheckpointWriter:
    def __init__(self, path: str, p, q, k, fresh: bool):
        self.path = path
        header = _ckpt_header(p, q, k)
        if fresh or not os.path.exists(path):
            self.fh = open(path, "w", encoding="ascii")
            self.fh.write(header + "\n")
        else:
            self.fh = open(path, "a", encoding="ascii")
        self.fh.flush()

    def record(self, res_tuple):
        start, end, total, hist, ram, skip = res_tuple
        self.fh.write(_record_line(start, end, total, dict(hist), ram, skip) + "\n")
        self.fh.flush()

    def close(self):
        self.fh.close()


# ---------------------------------------------------------------------------
# parallel driver

_W = {}


def _worker_init(pc, qc, lam, k, threshold, counter, check_every):
    _W.update(
        pc=pc, qc=qc, lam=lam, k=k,
        threshold=threshold, counter=counter, check_every=check_every,
    )


def _worker_chunk(bounds):
    start, end = bounds
    counter = _W["counter"]
    if _W["threshold"] is not None and counter is not None:
        with counter.get_lock():
            if counter.value > _W["threshold"]:
                return None  # already past the target; skip untouched
    stop, total, hist, ram, skip, early = _scan_raw(
        _W["pc"], _W["qc"], _W["lam"], _W["k"],
        start, end, _W["threshold"], counter, _W["check_every"],
    )
    return (start, stop, total, tuple(sorted(hist.items())), tuple(ram), tuple(skip), early)


def scan_parallel(
    p: FPoly,
    q: FPoly,
    k: int,
    workers: int = 1,
    chunk: int = DEFAULT_CHUNK,
    early_exit_threshold: int | None = None,
    check_every: int = DEFAULT_CHECK_EVERY,
    checkpoint_path: str | None = None,
    resume: bool = False,
    expected_branch_points: int | None = None,
) -> ScanResult:
    """Scan all of [0, lam) across worker processes, chunk by chunk.

    The returned result is the sorted-order merge of per-chunk results and is
    identical for every worker count.  With a checkpoint path, completed
    chunks are appended as they finish; with resume=True, chunks already in
    the file are not rescanned.  Early exit (when a threshold is given) stops
    scheduling new work once the shared running total passes it.
    """
    lam = p.field.modulus
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if chunk < 1:
        raise ValueError("chunk must be >= 1")

    done = zero_result()
    if resume:
        if not checkpoint_path:
            raise ValueError("resume requires a checkpoint path")
        done = load_checkpoint(checkpoint_path, p, q, k)

    covered = list(done.ranges)
    todo = []
    cursor = 0
    for s, e in covered + [(lam, lam)]:
        while cursor < s:
            todo.append((cursor, min(cursor + chunk, s)))
            cursor = todo[-1][1]
        cursor = max(cursor, e)

    writer = None
    if checkpoint_path:
        writer = _CheckpointWriter(checkpoint_path, p, q, k, fresh=not resume)

    pc, qc = list(p.coeffs), list(q.coeffs)
    chunk_results = []
    try:
        if workers == 1:
            running = done.total
            for start, end in todo:
                if early_exit_threshold is not None and running > early_exit_threshold:
                    break
                stop, total, hist, ram, skip, early = _scan_raw(
                    pc, qc, lam, k, start, end,
                    early_exit_threshold, None, check_every,
                )
                if early_exit_threshold is not None:
                    # local totals do not see other chunks; track across chunks
                    running += total
                    early = early or running > early_exit_threshold
                res = (start, stop, total, tuple(sorted(hist.items())), tuple(ram), tuple(skip), early)
                chunk_results.append(res)
                if writer:
                    writer.record((start, stop, total, res[3], res[4], res[5]))
        else:
            counter = Value("q", done.total)
            with Pool(
                processes=workers,
                initializer=_worker_init,
                initargs=(pc, qc, lam, k, early_exit_threshold, counter, check_every),
            ) as pool:
                for res in pool.imap_unordered(_worker_chunk, todo):
                    if res is None:
                        continue
                    chunk_results.append(res)
                    if writer:
                        writer.record((res[0], res[1], res[2], res[3], res[4], res[5]))
    finally:
        if writer:
            writer.close()

    acc = done
    for start, stop, total, hist_items, ram, skip, early in sorted(chunk_results):
        if start == stop:
            continue
        acc = merge(
            acc,
            ScanResult(
                ((start, stop),), total, dict(hist_items), ram, skip, early
            ),
        )
    if expected_branch_points is not None:
        distinct = len(set(acc.ramified_points))
        if distinct > expected_branch_points:
            warnings.warn(
                f"{distinct} ramified fibers found but the declared ramification "
                f"type has only {expected_branch_points} branch points; the type "
                "is probably wrong for this cover",
                stacklevel=2,
            )
    return acc


def histogram_lines(result: ScanResult):
    """Render the pattern histogram as sorted `d1 d2 ... dk count` lines."""
    return [
        "{} {}".format(" ".join(map(str, key)), cnt)
        for key, cnt in sorted(result.fiber_histogram.items())
    ]
