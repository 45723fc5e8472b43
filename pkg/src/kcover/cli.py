"""Command-line front end.

Four subcommands: validate, genus, bound, certify.  The certify command
writes the certificate JSON to stdout and nothing else there; progress and
warnings go to stderr so the certificate stream stays machine-readable.

Exit codes: 0 means a refutation was proven (verdict NotKTransitive or
NegativeGenusContradiction), 10 means Inconclusive, 11 input or usage
error, 12 checkpoint mismatch, 13 internal inconsistency.
"""

from __future__ import annotations

import argparse
import os
import sys
from math import ceil

from .certify import (
    VERDICT_INCONCLUSIVE,
    build_certificate,
    expected_sum,
    hasse_weil_upper,
    prime_size_threshold,
)
from .errors import CheckpointMismatch, InconsistencyError, KcoverError
from .frobcount import (
    DEFAULT_CHUNK,
    histogram_lines,
    scan_parallel,
)
from .numfield import reduce_cover
from .permcomb import genus_Ck
from .specfile import load_spec

EXIT_PROVEN = 0
EXIT_INCONCLUSIVE = 10
EXIT_USAGE = 11
EXIT_CHECKPOINT = 12
EXIT_INCONSISTENT = 13


class _CliError(Exception):
    pass


def _say(*parts):
    print(*parts, file=sys.stderr)


def _resolve_k(spec, args):
    k = getattr(args, "k", None)
    if k is None:
        k = spec.k
    if k is None:
        raise _CliError("no k given: add [task] k to the file or pass --k")
    if not 1 <= k <= spec.n - 1:
        raise _CliError(f"k = {k} out of range for n = {spec.n}")
    return k


def _need_ram(spec):
    if spec.ramification is None:
        raise _CliError(f"{spec.path} has no [ramification] section; genus unavailable")
    return spec.ramification


def cmd_validate(args):
    spec = load_spec(args.specfile)
    print(f"{spec.path}: ok")
    print(f"  field degree {spec.field_spec.degree}, n = {spec.n}")
    if spec.cover is not None:
        print(
            f"  cover deg p = {len(spec.cover.p) - 1},"
            f" deg q = {len(spec.cover.q) - 1}"
        )
    if spec.prime is not None:
        print(f"  prime ideal ({spec.prime.ell}, alpha - {spec.prime.r})")
        if spec.cover is not None:
            # surfaces bad-reduction problems (denominators, degree drop) now
            pbar, qbar = reduce_cover(spec.cover, spec.prime)
            print(
                f"  reduction mod {spec.prime.ell}: deg {pbar.degree}"
                f" / deg {qbar.degree}, coprime"
            )
    if spec.ramification is not None:
        branches = ", ".join(str(b) for b in spec.ramification.branch_types)
        print(f"  ramification over {spec.ramification.m} branch points: {branches}")
    if spec.k is not None:
        print(f"  task k = {spec.k}")
    return 0


def cmd_genus(args):
    spec = load_spec(args.specfile)
    ram = _need_ram(spec)
    k = _resolve_k(spec, args)
    report = genus_Ck(ram, k, mode=args.mode)
    print(f"n = {spec.n}  k = {k}  mode = {args.mode}")
    for ct, ind in zip(ram.branch_types, report.per_branch_indices):
        print(f"branch {ct}: induced index {ind}")
    print(f"genus = {report.g}")
    if report.contradiction_flag:
        print(
            "genus < 0: no irreducible cover has this ramification,"
            " so k-transitivity already fails"
        )
    return 0


def cmd_bound(args):
    spec = load_spec(args.specfile)
    ram = _need_ram(spec)
    k = _resolve_k(spec, args)
    if spec.prime is None:
        raise _CliError(f"{spec.path} has no [prime] section; bound needs ell")
    lam = spec.prime.ell
    report = genus_Ck(ram, k, mode=args.mode)
    g = report.g
    print(f"lam = {lam}")
    print(f"genus = {g}  (mode {args.mode}, k = {k})")
    if report.contradiction_flag:
        print("genus < 0: bound vacuous, refutation needs no point count")
        return 0
    g_int = ceil(g)
    bound = hasse_weil_upper(lam, g_int)
    print(f"hasse-weil upper bound = {bound}")
    d = args.d
    print(f"expected count for d = {d} orbit(s): {expected_sum(d, lam)}")
    if d >= 2:
        thr = prime_size_threshold(g_int, d)
        ratio = lam / thr
        verdict = "yes" if ratio >= args.margin else "no"
        print(f"prime size threshold 4g^2/(d-1)^2 = {thr}")
        print(
            f"lam/threshold = {float(ratio):.3f}"
            f"  (margin {args.margin} met: {verdict})"
        )
    return 0


def cmd_certify(args):
    spec = load_spec(args.specfile)
    ram = _need_ram(spec)
    k = _resolve_k(spec, args)
    if spec.cover is None:
        raise _CliError(f"{spec.path} has no cover coefficients; nothing to scan")
    if spec.prime is None:
        raise _CliError(f"{spec.path} has no [prime] section")
    lam = spec.prime.ell

    report = genus_Ck(ram, k, mode=args.mode)
    meta = {
        "n": spec.n,
        "prime_ideal": f"({spec.prime.ell}, alpha - {spec.prime.r})",
        "ramification": [str(ct) for ct in ram.branch_types],
    }

    if report.contradiction_flag and not args.clamp_nonnegative_genus:
        _say(f"genus {report.g} < 0: refuted without scanning")
        cert = build_certificate(
            report, None, lam, k, meta=meta, declared_branch_points=ram.m
        )
        sys.stdout.write(cert.to_json())
        return EXIT_PROVEN

    g = report.g
    g_int = ceil(g)
    if args.clamp_nonnegative_genus and g_int < 0:
        g_int = 0
    threshold = None
    if args.early_exit:
        threshold = hasse_weil_upper(lam, g_int)
        _say(f"early exit armed at count > {threshold}")

    pbar, qbar = reduce_cover(spec.cover, spec.prime)
    workers = args.threads if args.threads else (os.cpu_count() or 1)
    _say(
        f"scanning {lam} fibers, k = {k}, genus = {g},"
        f" workers = {workers}, chunk = {args.chunk}"
    )
    scan = scan_parallel(
        pbar,
        qbar,
        k,
        workers=workers,
        chunk=args.chunk,
        early_exit_threshold=threshold,
        checkpoint_path=args.checkpoint,
        resume=args.resume,
        expected_branch_points=ram.m,
    )
    _say(
        f"scan done: counted {scan.total} over {scan.points_scanned()} fibers,"
        f" {len(scan.ramified_points)} ramified,"
        f" {len(scan.skipped_points)} skipped"
    )

    cert = build_certificate(
        report,
        scan,
        lam,
        k,
        meta=meta,
        clamp_nonnegative_genus=args.clamp_nonnegative_genus,
        declared_branch_points=ram.m,
    )
    if args.histogram:
        with open(args.histogram, "w") as fh:
            for line in histogram_lines(scan):
                fh.write(line + "\n")
        _say(f"histogram written to {args.histogram}")
    sys.stdout.write(cert.to_json())
    return EXIT_INCONCLUSIVE if cert.verdict == VERDICT_INCONCLUSIVE else EXIT_PROVEN


def _build_parser():
    ap = argparse.ArgumentParser(
        prog="kcover",
        description="refute k-transitivity of a rational cover's monodromy"
        " by genus bound versus fiber count",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("specfile", help="TOML cover description")

    kmode = argparse.ArgumentParser(add_help=False)
    kmode.add_argument("--k", type=int, default=None, help="override [task] k")
    kmode.add_argument(
        "--mode",
        choices=("exact", "bound"),
        default="exact",
        help="genus from exact induced cycle counts, or upper bound",
    )

    sub.add_parser(
        "validate", parents=[common], help="parse and cross-check a cover file"
    ).set_defaults(func=cmd_validate)

    sub.add_parser(
        "genus", parents=[common, kmode], help="genus of the induced k-subset cover"
    ).set_defaults(func=cmd_genus)

    bp = sub.add_parser(
        "bound", parents=[common, kmode], help="hasse-weil budget for the count"
    )
    bp.add_argument("--d", type=int, default=2, help="orbit count for the advisory")
    bp.add_argument("--margin", type=int, default=2, help="required lam/threshold")
    bp.set_defaults(func=cmd_bound)

    cp = sub.add_parser(
        "certify",
        parents=[common, kmode],
        help="scan all fibers and emit a verdict certificate on stdout",
    )
    cp.add_argument("--threads", type=int, default=0, help="0 = all cores")
    cp.add_argument("--chunk", type=int, default=DEFAULT_CHUNK)
    cp.add_argument(
        "--early-exit",
        action="store_true",
        help="stop as soon as the count exceeds the bound",
    )
    cp.add_argument("--checkpoint", default=None, help="append progress to this file")
    cp.add_argument(
        "--resume", action="store_true", help="reuse ranges already in the checkpoint"
    )
    cp.add_argument("--histogram", default=None, help="write fiber histogram here")
    cp.add_argument(
        "--clamp-nonnegative-genus",
        action="store_true",
        help="scan with g = max(g, 0) instead of stopping on negative genus",
    )
    cp.set_defaults(func=cmd_certify)
    return ap


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _CliError as exc:
        _say(f"error: {exc}")
        return EXIT_USAGE
    except CheckpointMismatch as exc:
        _say(f"checkpoint mismatch: {exc}")
        return EXIT_CHECKPOINT
    except InconsistencyError as exc:
        _say(f"internal inconsistency: {exc}")
        return EXIT_INCONSISTENT
    except KcoverError as exc:
        _say(f"error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
