"""Command-line interface.

One executable, ``moranspec``, with subcommands for validation, spectrum
construction, orthogonality and completeness checks, Hadamard companions,
spectrality certification, density estimation, tiling checks, and the
built-in example suite.  Reports go to stdout; optional CSV files carry the
plot data.  Exit codes: 0 success, 64 usage error, 66 unreadable or
malformed system file, 2/3 for failed/inconclusive certification.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import corpus
from .certificates import certify
from .core import (
    LevelClass,
    MoranError,
    MoranSystem,
    atoms,
    parse_system,
)
from .density import (
    density_histogram,
    density_verdict,
    support_cover,
    tiling_check,
    uniformity_check,
)
from .hadamard import hadamard_triple
from .spectrum import (
    check_orthogonal,
    level_spectrum,
    q_partial,
    q_sum_finite,
)

EXIT_OK = 0
EXIT_USAGE = 64
EXIT_FILE = 66


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_sigma(text: str) -> tuple[int, ...]:
    """Sign prefix from '+-+' or '+1,-1,+1' style input."""
    text = text.strip()
    if not text:
        return ()
    if set(text) <= {"+", "-"}:
        return tuple(1 if c == "+" else -1 for c in text)
    try:
        vals = tuple(int(tok) for tok in text.split(","))
    except ValueError:
        raise UsageError(f"cannot parse sigma prefix {text!r}")
    if any(v not in (-1, 1) for v in vals):
        raise UsageError("sigma entries must be +1 or -1")
    return vals


def write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(f"{v:.15g}" if isinstance(v, float) else str(v)
                              for v in row) + "\n")


def load_system(path: str) -> MoranSystem:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise FileNotFoundError(f"cannot read {path}: {exc}") from exc
    return parse_system(text)


def build_parser() -> _Parser:
    parser = _Parser(prog="moranspec", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, with_file=True):
        p = sub.add_parser(name, help=help_text)
        if with_file:
            p.add_argument("system", help="path to a .moran system file")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for all sampled checks (default 0)")
        p.add_argument("-o", "--output", default=None, help="CSV output path")
        return p

    add("validate", "parse a system file and print per-level classification")

    p = add("spectrum", "construct the level-n candidate spectrum")
    p.add_argument("--level", type=int, default=6)
    p.add_argument("--sigma", default="",
                   help="sign prefix, e.g. '+-+' (leading '-' needs --sigma=-+)")

    p = add("ortho", "exact pairwise orthogonality of the level-n spectrum")
    p.add_argument("--level", type=int, default=6)
    p.add_argument("--sigma", default="")

    p = add("qsum", "quadratic sum Q(xi) of the level-n spectrum on a grid")
    p.add_argument("--level", type=int, default=6)
    p.add_argument("--sigma", default="")
    p.add_argument("--grid", type=int, default=200)
    p.add_argument("--xmin", type=float, default=-5.0)
    p.add_argument("--xmax", type=float, default=5.0)
    p.add_argument("--depth", type=int, default=0,
                   help="evaluate against this tail depth instead of the level")
    p.add_argument("--tol", type=float, default=1e-9,
                   help="completeness tolerance on |Q - 1| (default 1e-9)")

    add("hadamard", "companion sets and unitarity residuals per level")

    p = add("certify", "assemble the spectrality certificate")
    p.add_argument("--sigma", default="")
    p.add_argument("--depth", type=int, default=30)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--scan-levels", type=int, default=24)

    p = add("density", "histogram density estimate over the support hull")
    p.add_argument("--level", type=int, default=6)
    p.add_argument("--bins", type=int, default=4096)
    p.add_argument("--tol", type=float, default=0.1,
                   help="relative tolerance for the uniformity check")

    p = add("tiling", "check integer-translate tiling of the support cover")
    p.add_argument("--level", type=int, default=6)
    p.add_argument("--window", type=int, default=None,
                   help="translate range (default: smallest window covering the diameter)")
    p.add_argument("--samples", type=int, default=10000)

    p = add("examples", "run the built-in example corpus", with_file=False)
    p.add_argument("--name", default=None, help="run a single example by name")
    return parser


def cmd_validate(args) -> int:
    system = load_system(args.system)
    print(f"{'level':<12}{'p':>6}  {'digits':<20}{'class':<9}notes")
    for where, lvl in system.distinct_levels():
        notes = "; ".join(lvl.digits.violations + lvl.digits.warnings)
        print(f"{where:<12}{lvl.p:>6}  {str(lvl.digits):<20}"
              f"{lvl.digits.cls.value:<9}{notes}")
    bad = system.invalid_levels()
    print(f"admissible: {'yes' if not bad else 'no'}")
    return EXIT_OK


def cmd_spectrum(args) -> int:
    system = load_system(args.system)
    pts = level_spectrum(system, args.level, parse_sigma(args.sigma))
    print(f"level {args.level} spectrum: {len(pts)} points, "
          f"sigma prefix {pts.sigma}")
    print(" ".join(str(p) for p in pts.points))
    if args.output:
        write_csv(args.output, ["index", "lambda"],
                  list(enumerate(pts.points)))
        print(f"wrote {args.output}")
    return EXIT_OK


def cmd_ortho(args) -> int:
    system = load_system(args.system)
    pts = level_spectrum(system, args.level, parse_sigma(args.sigma))
    report = check_orthogonal(system, pts, max_level=args.level)
    print(f"points: {report.point_count}  pairs: {report.pairs_checked}  "
          f"failures: {len(report.failures)}")
    print(f"witness levels used: {list(report.witness_levels)}")
    if report.failures:
        for a, b in report.failures[:20]:
            print(f"  pair ({a}, {b}): difference {a - b} misses the zero set")
        return 1
    print("orthogonality: exact pass")
    return EXIT_OK


def cmd_qsum(args) -> int:
    system = load_system(args.system)
    pts = level_spectrum(system, args.level, parse_sigma(args.sigma))
    xs = np.linspace(args.xmin, args.xmax, args.grid)
    depth = args.depth if args.depth > 0 else args.level
    if depth < args.level:
        raise UsageError("--depth must be at least the spectrum level")
    rows = []
    for x in xs:
        q = (q_sum_finite(system, args.level, pts, x) if depth == args.level
             else q_partial(system, pts, depth, x))
        rows.append((float(x), q))
    qs = np.array([r[1] for r in rows])
    print(f"Q over [{args.xmin}, {args.xmax}] at {args.grid} points, "
          f"level {args.level}, depth {depth}:")
    dev = float(np.max(np.abs(qs - 1.0)))
    print(f"  min {qs.min():.12f}  max {qs.max():.12f}  max|Q-1| {dev:.3g}")
    if depth == args.level:
        verdict = "complete" if dev < args.tol else "NOT complete"
        print(f"  {verdict} at tolerance {args.tol:g}")
    if args.output:
        write_csv(args.output, ["xi", "Q"], rows)
        print(f"wrote {args.output}")
    return EXIT_OK


def cmd_hadamard(args) -> int:
    system = load_system(args.system)
    for where, lvl in system.distinct_levels():
        if lvl.digits.cls is LevelClass.INVALID:
            print(f"{where}: p={lvl.p} D={lvl.digits} not admissible "
                  f"({'; '.join(lvl.digits.violations)})")
            continue
        triple = hadamard_triple(lvl.p, lvl.digits)
        print(f"{where}: p={lvl.p} D={lvl.digits} "
              f"L={{{','.join(str(v) for v in triple.L)}}} "
              f"residual={triple.residual:.3e}")
    return EXIT_OK


def cmd_certify(args) -> int:
    system = load_system(args.system)
    print(f"seed: {args.seed}")
    cert = certify(
        system,
        sigma=parse_sigma(args.sigma),
        levels_to_scan=args.scan_levels,
        samples=args.samples,
        depth=args.depth,
        seed=args.seed,
        system_id=args.system,
    )
    print(f"verdict: {cert.verdict.value}")
    print(cert.diagnostics)
    return cert.exit_code


def cmd_density(args) -> int:
    system = load_system(args.system)
    hist = density_histogram(system, args.level, args.bins)
    lo, hi = hist.hull
    print(f"level {args.level}: {hist.atom_count} atoms on [{lo}, {hi}], "
          f"{len(hist.density)} bins")
    print(f"total mass: {hist.total_mass:.12f}")
    print(f"empty bin fraction: {hist.empty_fraction:.3f}")
    uniform = uniformity_check(hist, args.tol)
    print(f"uniform within {args.tol:g}: {'yes' if uniform else 'no'}")
    print(f"verdict: {density_verdict(hist, args.tol)}")
    if args.output:
        write_csv(args.output, ["bin_center", "density"],
                  zip(hist.centers.tolist(), hist.density.tolist()))
        print(f"wrote {args.output}")
    return EXIT_OK


def cmd_tiling(args) -> int:
    system = load_system(args.system)
    cover = support_cover(system, args.level)
    lo, hi = cover.hull
    window = args.window
    if window is None:
        window = int(hi - lo) + 1
    print(f"support cover at level {args.level}: {len(cover.intervals)} "
          f"interval(s), hull [{lo}, {hi}], length {float(cover.total_length):.6g}")
    ok = tiling_check(cover, window, args.samples)
    print(f"tiling by integer translates (window {window}, "
          f"{args.samples} samples): {'yes' if ok else 'no'}")
    return EXIT_OK


def cmd_examples(args) -> int:
    results = (corpus.run_example(args.name, seed=args.seed) if args.name
               else corpus.run_all(seed=args.seed))
    print(f"seed: {args.seed}")
    width = max(len(r.example) for r in results) + 2
    cwidth = max(len(r.check) for r in results) + 2
    ok_all = True
    for r in results:
        mark = "ok" if r.ok else "MISMATCH"
        ok_all &= r.ok
        print(f"{r.example:<{width}}{r.check:<{cwidth}}"
              f"expected: {r.expected:<28} observed: {r.observed:<28} {mark}")
    print(f"examples: {'all reproduced' if ok_all else 'MISMATCHES FOUND'}")
    return EXIT_OK if ok_all else 1


_COMMANDS = {
    "validate": cmd_validate,
    "spectrum": cmd_spectrum,
    "ortho": cmd_ortho,
    "qsum": cmd_qsum,
    "hadamard": cmd_hadamard,
    "certify": cmd_certify,
    "density": cmd_density,
    "tiling": cmd_tiling,
    "examples": cmd_examples,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"file error: {exc}", file=sys.stderr)
        return EXIT_FILE
    except MoranError as exc:
        print(f"system file error: {exc}", file=sys.stderr)
        return EXIT_FILE


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
