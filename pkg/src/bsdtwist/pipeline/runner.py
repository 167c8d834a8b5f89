"""Batch orchestration: curve filtering, twist lists, Sha batches and RS reports."""

from __future__ import annotations

import hashlib
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Optional, Sequence

from ..algebra.ntheory import factorize, fundamental_discriminant, kronecker
from ..bsdfilter import (
    Branch,
    EligibilityVerdict,
    IncompleteDataError,
    RankMismatchError,
    algorithm1,
    base_curve,
    enumerate_twists,
    generic_family,
    twist_context,
)
from ..curve import make_curve
from ..lseries.sha import ShaAnalytic, ShaStatus, analytic_sha_rank0
from ..records import CurveDBRecord
from ..rsstats import MIN_ABS_D, DistanceReport, RSParams, ZEntry, ZFamily, ZSample, distances, rs_params, z_value
from .config import RunConfig
from .report import SeriesBundle, write_csv, write_distance_svg, write_svg

LOW_SAMPLE = 30

ELIGIBLE_COLUMNS = (
    "label", "conductor", "branch", "a3", "A", "disc_valuations", "root_number",
    "two_torsion_rank", "lalg", "isogenous_sha", "s_witness", "tags",
)
REJECTED_COLUMNS = ("label", "conductor", "reason")
TWIST_COLUMNS = ("d", "fundamental_discriminant", "prime_divisors", "twist_conductor", "twist_root_number", "branch")
SHA_COLUMNS = (
    "d", "twist_conductor", "l_value", "omega", "tamagawa", "torsion", "raw", "snapped",
    "residual", "status", "n_terms", "error_bound",
)
Z_COLUMNS = ("d", "sha", "z")
DISTANCE_COLUMNS = ("X", "n", "ks", "w1")
SUMMARY_COLUMNS = (
    "label", "family", "X", "galois_class", "mu", "sigma2", "total", "retained",
    "excluded_vanishing", "excluded_budget", "excluded_anomaly", "anomalies", "low_sample",
)


class NotEligibleError(RuntimeError):
    pass


class CheckpointMismatch(RuntimeError):
    pass


# -- filter ---------------------------------------------------------------------------


@dataclass
class FilterOutcome:
    verdicts: list[EligibilityVerdict] = field(default_factory=list)
    errors: list[tuple[str, str]] = field(default_factory=list)

    @property
    def accepted(self) -> list[EligibilityVerdict]:
        return [v for v in self.verdicts if v.accepted]


def _filter_one(args) -> EligibilityVerdict | tuple[str, str]:
    record, cfg = args
    try:
        return algorithm1(
            None, record, strict_a3=cfg.strict_a3, s_witness_bound=cfg.s_witness_bound,
            precision_bits=cfg.precision_bits, seed=cfg.seed,
        )
    except (IncompleteDataError, RankMismatchError, ArithmeticError, ValueError) as exc:
        return record.label, f"{type(exc).__name__}: {exc}"


def _pool_map(fn, items: Sequence, workers: int, chunksize: int = 1, initializer=None, initargs=()) -> Iterator:
    """Ordered map, in-process for one worker."""
    if workers <= 1 or len(items) <= 1:
        if initializer is not None:
            initializer(*initargs)
        yield from map(fn, items)
        return
    ex = ProcessPoolExecutor(max_workers=workers, initializer=initializer, initargs=initargs)
    try:
        yield from ex.map(fn, items, chunksize=chunksize)
    finally:
        # an abandoned iteration must not wait for the queued remainder
        ex.shutdown(wait=True, cancel_futures=True)


def filter_curves(records: Sequence[CurveDBRecord], config: RunConfig) -> FilterOutcome:
    out = FilterOutcome()
    for res in _pool_map(_filter_one, [(r, config) for r in records], config.workers):
        if isinstance(res, tuple):
            out.errors.append(res)
        else:
            out.verdicts.append(res)
    return out


def eligible_rows(outcome: FilterOutcome) -> list[tuple]:
    rows = []
    for v in outcome.accepted:
        ev = v.evidence
        vals = ev.get("disc_valuations", {})
        rows.append((
            v.label, ev.get("conductor"), v.branch, ev.get("a3"), ev.get("A"),
            " ".join(f"{p}:{e}" for p, e in sorted(vals.items())), ev.get("root_number"),
            ev.get("two_torsion_rank"), ev.get("lalg"), ev.get("isogenous_sha"), ev.get("s_witness"),
            list(v.tags),
        ))
    return rows


def rejected_rows(outcome: FilterOutcome) -> list[tuple]:
    rows = [(v.label, v.evidence.get("conductor"), v.reason) for v in outcome.verdicts if not v.accepted]
    rows += [(label, None, f"error: {msg}") for label, msg in outcome.errors]
    return rows


def find_record(records: Iterable[CurveDBRecord], label: str) -> CurveDBRecord:
    for r in records:
        if r.label == label:
            return r
    raise KeyError(f"label {label!r} not found in input")


def eligibility(record: CurveDBRecord, config: RunConfig) -> EligibilityVerdict:
    res = _filter_one((record, config))
    if isinstance(res, tuple):
        raise NotEligibleError(res[1])
    return res


# -- twists ---------------------------------------------------------------------------


def twist_list(record: CurveDBRecord, config: RunConfig, d_lo: int, d_hi: int) -> tuple[Branch, list[tuple]]:
    verdict = eligibility(record, config)
    if not verdict.accepted:
        raise NotEligibleError(f"{record.label} is not eligible ({verdict.reason.value})")
    base = base_curve(record.curve(), config.seed)
    N, w = base.conductor, base.root_number
    rows = []
    for tv in enumerate_twists(base, verdict.branch, d_lo, d_hi):
        D = fundamental_discriminant(tv.d)
        rows.append((tv.d, D, factorize(abs(tv.d)).primes, N * D * D, w * kronecker(D, -N), verdict.branch))
    return verdict.branch, rows


# -- Sha batches with checkpointing ---------------------------------------------------

_WORKER_BASE = None


def _init_worker(ainvs: tuple[int, ...], seed: int) -> None:
    global _WORKER_BASE
    _WORKER_BASE = base_curve(make_curve(*ainvs), seed)


def _sha_task(args) -> ShaAnalytic:
    d, budget, bits = args
    return analytic_sha_rank0(_WORKER_BASE, d, term_budget=budget, precision_bits=bits)


def _sha_to_json(s: ShaAnalytic) -> str:
    obj = asdict(s)
    obj["status"] = s.status.value
    obj["notes"] = list(s.notes)
    return json.dumps(obj, sort_keys=True)


def _sha_from_json(obj: dict) -> ShaAnalytic:
    obj = dict(obj)
    obj["status"] = ShaStatus(obj["status"])
    obj["notes"] = tuple(obj["notes"])
    return ShaAnalytic(**obj)


def sha_row(s: ShaAnalytic) -> tuple:
    return (s.d, s.twist_conductor, s.l_value, s.omega, s.tamagawa, s.torsion, s.raw, s.snapped,
            s.residual, s.status, s.n_terms, s.error_bound)


def _header(ainvs, ds: Sequence[int], config: RunConfig) -> dict:
    digest = hashlib.sha256(",".join(map(str, ds)).encode()).hexdigest()
    return {"kind": "sha-checkpoint", "ainvs": list(ainvs), "ds": digest, "n": len(ds), **config.fingerprint()}


def _load_checkpoint(path: Path, header: dict, ds: Sequence[int]) -> list[ShaAnalytic]:
    """Valid prefix of a checkpoint; a torn final line is dropped and the file trimmed."""
    if not path.exists():
        return []
    raw = path.read_bytes()
    # the piece after the final newline is unterminated and never trusted
    lines = raw.split(b"\n")[:-1]
    if not lines or not lines[0].strip():
        return []
    try:
        found = json.loads(lines[0])
    except ValueError:
        found = None
    if found != header:
        raise CheckpointMismatch(f"{path} was written for a different run; remove it to start over")
    done: list[ShaAnalytic] = []
    keep = len(lines[0]) + 1
    for line in lines[1:]:
        if not line.strip():
            break
        try:
            rec = _sha_from_json(json.loads(line))
        except (ValueError, TypeError, KeyError):
            break
        if len(done) >= len(ds) or rec.d != ds[len(done)]:
            raise CheckpointMismatch(f"{path}: entries are not in the expected order")
        done.append(rec)
        keep += len(line) + 1
    if keep < len(raw):
        with open(path, "r+b") as fh:
            fh.truncate(keep)
    return done


@dataclass
class ShaBatch:
    results: list[ShaAnalytic]
    complete: bool


def sha_batch(
    ainvs: Sequence[int],
    ds: Sequence[int],
    config: RunConfig,
    checkpoint: Optional[Path] = None,
    max_new: Optional[int] = None,
    deadline: Optional[float] = None,
) -> ShaBatch:
    """Analytic Sha for every d, in the given order.

    With a checkpoint file, finished results are appended as they arrive
    (always in d-order) and a rerun resumes after the last complete line.
    ``max_new`` stops after that many fresh results and ``deadline`` (a
    ``time.monotonic`` value) at the first result past it; both leave the run
    resumable.
    """
    ainvs = tuple(ainvs)
    ds = list(ds)
    header = _header(ainvs, ds, config)
    done: list[ShaAnalytic] = []
    fh = None
    if checkpoint is not None:
        checkpoint = Path(checkpoint)
        checkpoint.parent.mkdir(parents=True, exist_ok=True)
        done = _load_checkpoint(checkpoint, header, ds)
        fh = open(checkpoint, "a" if done else "w", encoding="utf-8")
        if not done:
            fh.write(json.dumps(header) + "\n")
            fh.flush()
    todo = ds[len(done):]
    if max_new is not None:
        todo = todo[:max_new]
    tasks = [(d, config.term_budget, config.precision_bits) for d in todo]
    try:
        for res in _pool_map(_sha_task, tasks, config.workers, chunksize=4,
                             initializer=_init_worker, initargs=(ainvs, config.seed)):
            done.append(res)
            if fh is not None:
                fh.write(_sha_to_json(res) + "\n")
                fh.flush()
            if deadline is not None and time.monotonic() > deadline:
                break
    finally:
        if fh is not None:
            fh.close()
    return ShaBatch(done, len(done) == len(ds))


# -- RS reports -----------------------------------------------------------------------


@dataclass
class RSReport:
    label: str
    family: str
    X: int
    params: RSParams
    sample: ZSample
    anomalies: int
    distances: list[tuple[int, Optional[DistanceReport]]]
    files: list[Path] = field(default_factory=list)
    complete: bool = True

    @property
    def low_sample(self) -> bool:
        return len(self.sample.entries) < LOW_SAMPLE


def family_members(record: CurveDBRecord, config: RunConfig, family: str, X: int) -> list[int]:
    """The d of a family with MIN_ABS_D <= |d| <= X, ordered by |d| then d."""
    if family == "bsd":
        verdict = eligibility(record, config)
        if not verdict.accepted:
            raise NotEligibleError(f"{record.label} is not eligible ({verdict.reason.value})")
        ctx = twist_context(base_curve(record.curve(), config.seed), verdict.branch)
        ds = [tv.d for tv in enumerate_twists(ctx, verdict.branch, -X, X)]
    else:
        base = base_curve(record.curve(), config.seed)
        if base.root_number != 1:
            raise NotEligibleError(f"{record.label} has root number -1")
        ds = generic_family(base, X)
    return sorted((d for d in ds if abs(d) >= MIN_ABS_D), key=lambda d: (abs(d), d))


def checkpoints(X: int) -> list[int]:
    return sorted({max(1, X // 8), max(1, X // 4), max(1, X // 2), X})


def _stem(label: str, family: str, X: int) -> str:
    return f"{label}-{family}-X{X}"


def rs_report(
    record: CurveDBRecord,
    config: RunConfig,
    family: str,
    X: int,
    max_new: Optional[int] = None,
    write: bool = True,
    deadline: Optional[float] = None,
    bins: Optional[int] = None,
) -> RSReport:
    E = base_curve(record.curve(), config.seed).E
    ds = family_members(record, config, family, X)
    stem = _stem(record.label, family, X)
    out = Path(config.out)
    batch = sha_batch(E.ainvs, ds, config, out / "checkpoints" / f"{stem}.jsonl", max_new, deadline)
    params = rs_params(E)
    tag = ZFamily.BSD if family == "bsd" else ZFamily.GENERIC
    sample = ZSample(tag)
    anomalies = 0
    for s in batch.results:
        if s.status is ShaStatus.EXCLUDED_VANISHING:
            sample.excluded_vanishing += 1
        elif s.status is ShaStatus.EXCLUDED_BUDGET:
            sample.excluded_budget += 1
        elif s.snapped < 1:
            anomalies += 1
            sample.excluded_anomaly += 1
        else:
            anomalies += s.status is ShaStatus.ANOMALY
            sample.entries.append(ZEntry(s.d, s.snapped, z_value(s.snapped, s.d, params)))
    dists = []
    for c in checkpoints(X):
        zs = [e.z for e in sample.entries if abs(e.d) <= c]
        dists.append((c, distances(zs) if zs else None))
    report = RSReport(record.label, family, X, params, sample, anomalies, dists, complete=batch.complete)
    if write and batch.complete:
        report.files = write_rs_files(report, out, batch.results, bins)
    return report


def write_rs_files(report: RSReport, out: Path, results: Sequence[ShaAnalytic],
                   bins: Optional[int] = None) -> list[Path]:
    stem = _stem(report.label, report.family, report.X)
    p = report.params
    s = report.sample
    files = [
        write_csv(out / f"sha-{stem}.csv", SHA_COLUMNS, [sha_row(r) for r in results]),
        write_csv(out / f"z-{stem}.csv", Z_COLUMNS, [(e.d, e.sha, e.z) for e in s.entries]),
        write_csv(out / f"distances-{stem}.csv", DISTANCE_COLUMNS,
                  [(c, r.n, r.ks, r.w1) if r else (c, 0, None, None) for c, r in report.distances]),
        write_csv(out / f"summary-{stem}.csv", SUMMARY_COLUMNS, [(
            report.label, report.family, report.X, p.galois_class, p.mu, p.sigma2, s.total,
            len(s.entries), s.excluded_vanishing, s.excluded_budget, s.excluded_anomaly, report.anomalies, report.low_sample,
        )]),
    ]
    if s.entries:
        title = f"{report.label}, {report.family} family, |d| <= {report.X}, n = {len(s.entries)}"
        files.append(write_svg(SeriesBundle([e.z for e in s.entries], title, bins), out / f"rs-{stem}.svg"))
        pts = [(c, r) for c, r in report.distances if r is not None]
        files.append(write_distance_svg([c for c, _ in pts], [r.ks for _, r in pts], [r.w1 for _, r in pts],
                                        out / f"distances-{stem}.svg", report.label))
    return files
