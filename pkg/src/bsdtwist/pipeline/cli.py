"""Command-line entry point: ``bsdtwist <subcommand> [options]``."""

from __future__ import annotations

import argparse
import logging
import sys
import time
from importlib import resources
from pathlib import Path

from ..bsdfilter import algorithm2, base_curve
from ..lseries.sha import ShaStatus, analytic_sha_rank0
from .config import FAMILIES, RunConfig
from .ingest import ingest
from .report import write_csv
from .runner import (
    ELIGIBLE_COLUMNS,
    REJECTED_COLUMNS,
    SHA_COLUMNS,
    TWIST_COLUMNS,
    CheckpointMismatch,
    NotEligibleError,
    eligibility,
    eligible_rows,
    filter_curves,
    find_record,
    rejected_rows,
    rs_report,
    sha_row,
    twist_list,
)

EXIT_OK, EXIT_FATAL, EXIT_RECORD_ERRORS = 0, 1, 2
log = logging.getLogger("bsdtwist")


def fixture_path() -> Path:
    """The bundled database of optimal curves of conductor at most 150."""
    return Path(str(resources.files("bsdtwist").joinpath("data/cond150.jsonl")))


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("run options")
    g.add_argument("--input", type=Path, help="curve records (.jsonl or .csv); default: bundled fixture")
    g.add_argument("--out", type=Path, default=Path("out"), help="output directory")
    g.add_argument("--precision-bits", type=int, default=RunConfig.precision_bits)
    g.add_argument("--term-budget", type=int, default=RunConfig.term_budget,
                   help="largest number of series terms per L-value")
    g.add_argument("--s-witness-bound", type=int, default=RunConfig.s_witness_bound)
    g.add_argument("--strict-a3", action="store_true", help="also require a_3 != 0")
    g.add_argument("--seed", type=int, default=RunConfig.seed)
    g.add_argument("--workers", type=int, default=1)
    g.add_argument("-v", "--verbose", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="bsdtwist", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("filter-curves", parents=[common], help="run the eligibility filter over the input")
    p.add_argument("--conductor-bound", type=int)
    p.add_argument("--ledger", action="store_true", help="also write every rejection with its reason")

    p = sub.add_parser("twists", parents=[common], help="admissible twists of an eligible curve")
    p.add_argument("label")
    p.add_argument("--d-lo", type=int, default=1)
    p.add_argument("--d-hi", type=int, default=1000)

    p = sub.add_parser("sha", parents=[common], help="analytic Sha of one twist")
    p.add_argument("label")
    p.add_argument("d", type=int)
    p.add_argument("--unchecked", action="store_true", help="skip the admissibility checks")

    p = sub.add_parser("rs-report", parents=[common], help="normalised Sha distribution of a twist family")
    p.add_argument("label")
    p.add_argument("--family", choices=FAMILIES, default="bsd")
    p.add_argument("--X", "-X", dest="X", type=int, required=True, help="bound on |d|")
    p.add_argument("--bins", type=int, help="histogram bins (default: Freedman-Diaconis)")
    p.add_argument("--max-seconds", type=float, help="stop after this long; rerun to resume")
    return parser


def _config(args) -> RunConfig:
    return RunConfig(
        input=args.input,
        out=args.out,
        conductor_bound=getattr(args, "conductor_bound", None),
        precision_bits=args.precision_bits,
        term_budget=args.term_budget,
        s_witness_bound=args.s_witness_bound,
        strict_a3=args.strict_a3,
        seed=args.seed,
        workers=args.workers,
        family=getattr(args, "family", "bsd"),
    ).with_env()


def _load(cfg: RunConfig):
    res = ingest(cfg.input or fixture_path(), cfg.conductor_bound)
    for e in res.errors:
        log.warning("line %d: %s", e.line, e.message)
    for q in res.quarantined:
        log.warning("line %d (%s) quarantined: %s", q.line, q.label, q.reason)
    return res


def cmd_filter_curves(args, cfg: RunConfig) -> int:
    data = _load(cfg)
    outcome = filter_curves(data.records, cfg)
    path = write_csv(cfg.out / "eligible.csv", ELIGIBLE_COLUMNS, eligible_rows(outcome))
    if args.ledger:
        write_csv(cfg.out / "rejected.csv", REJECTED_COLUMNS, rejected_rows(outcome))
    for label, msg in outcome.errors:
        log.error("%s: %s", label, msg)
    print(f"{len(outcome.accepted)} of {len(data.records)} curves eligible -> {path}")
    bad = data.errors or data.quarantined or outcome.errors
    return EXIT_RECORD_ERRORS if bad else EXIT_OK


def cmd_twists(args, cfg: RunConfig) -> int:
    record = find_record(_load(cfg).records, args.label)
    branch, rows = twist_list(record, cfg, args.d_lo, args.d_hi)
    path = write_csv(cfg.out / f"twists-{args.label}-{args.d_lo}-{args.d_hi}.csv", TWIST_COLUMNS, rows)
    print(f"{len(rows)} admissible d in [{args.d_lo}, {args.d_hi}] ({branch.value}) -> {path}")
    return EXIT_OK


def cmd_sha(args, cfg: RunConfig) -> int:
    record = find_record(_load(cfg).records, args.label)
    if not args.unchecked:
        verdict = eligibility(record, cfg)
        if not verdict.accepted:
            raise NotEligibleError(f"{args.label} is not eligible ({verdict.reason.value}); use --unchecked")
        tv = algorithm2(base_curve(record.curve(), cfg.seed), verdict.branch, args.d)
        if not tv.accepted:
            raise NotEligibleError(f"d = {args.d} is not admissible ({tv.reason.value}); use --unchecked")
    base = base_curve(record.curve(), cfg.seed)
    res = analytic_sha_rank0(base, args.d, term_budget=cfg.term_budget, precision_bits=cfg.precision_bits)
    path = write_csv(cfg.out / f"sha-{args.label}-{args.d}.csv", SHA_COLUMNS, [sha_row(res)])
    print(f"d = {args.d}: status {res.status.value}, Sha = {res.snapped} (residual {res.residual:.3g}) -> {path}")
    return EXIT_RECORD_ERRORS if res.status is ShaStatus.ANOMALY else EXIT_OK


def cmd_rs_report(args, cfg: RunConfig) -> int:
    record = find_record(_load(cfg).records, args.label)
    deadline = time.monotonic() + args.max_seconds if args.max_seconds else None
    rep = rs_report(record, cfg, args.family, args.X, deadline=deadline, bins=args.bins)
    s = rep.sample
    if not rep.complete:
        print(f"stopped early; rerun the same command to resume from {cfg.out / 'checkpoints'}")
        return EXIT_RECORD_ERRORS
    print(f"{args.label} {args.family} |d| <= {args.X}: {len(s.entries)} retained, "
          f"{s.excluded_vanishing} vanishing, {s.excluded_budget} over budget, {rep.anomalies} anomalies")
    for c, r in rep.distances:
        if r is not None:
            print(f"  X = {c}: n = {r.n}, KS = {r.ks:.4f}, W1 = {r.w1:.4f}")
    if rep.low_sample:
        print("warning: fewer than 30 retained values", file=sys.stderr)
    return EXIT_RECORD_ERRORS if rep.anomalies else EXIT_OK


COMMANDS = {
    "filter-curves": cmd_filter_curves,
    "twists": cmd_twists,
    "sha": cmd_sha,
    "rs-report": cmd_rs_report,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        cfg = _config(args)
        return COMMANDS[args.command](args, cfg)
    except (NotEligibleError, KeyError, ValueError, CheckpointMismatch, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
