"""Command-line front end: render, scan, peaks, psd, fit, pipeline.

Exit codes: 0 success, 2 usage error, 1 runtime error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import io
from .escape import DEFAULT_MAX_ITER, SCAN_MAX_ITER, MapConfig, set_threads
from .pipeline import PipelineParams, replay, run_pipeline, summarize
from .points import DegenerateProcessError
from .projections import ProjectionSpec, escape_grid, render_pgm
from .radial import DEFAULT_PROMINENCE, default_scan_window, extract_peaks, radial_profile
from .spectral import (BINS_PER_DECADE, FIT_DECADES, FitError, bin_periodogram, default_fit_band,
                       default_freq_grid, fit_alpha, periodogram)

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _floats(text: str, n: int | None = None, name: str = "value") -> tuple[float, ...]:
    try:
        vals = tuple(float(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"{name}: expected comma-separated numbers, got {text!r}") from None
    if n is not None and len(vals) != n:
        raise UsageError(f"{name}: expected {n} values, got {len(vals)}")
    return vals


def _map_config(args, default_max_iter: int) -> MapConfig:
    z0 = _floats(args.z0, 4, "--z0") if args.z0 else (0.5, 0.0, 0.0, 0.0)
    max_iter = args.max_iter if args.max_iter is not None else default_max_iter
    return MapConfig(z0, args.threshold, max_iter)


def _add_map_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--z0", help="initial value a,b,c,d (default 0.5,0,0,0)")
    p.add_argument("--threshold", type=float, default=1e10, help="escape norm bound")
    p.add_argument("--max-iter", type=int, default=None, help="iteration horizon")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quatnoise", description=__doc__.splitlines()[0])
    parser.add_argument("--threads", type=int, default=None, help="cap worker threads (default: all cores)")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("render", help="escape-time image of a 2D slice M_ab as PGM")
    _add_map_flags(p)
    p.add_argument("--axes", default="2,3", help="varying coordinates a,b with 1<=a<b<=4")
    p.add_argument("--window", help="u_min,u_max,v_min,v_max")
    p.add_argument("--res", default="512,512", help="width,height")
    p.add_argument("--out", required=True)

    p = sub.add_parser("scan", help="escape time vs radius along a ray of M_23")
    _add_map_flags(p)
    p.add_argument("--r-min", type=float)
    p.add_argument("--r-max", type=float)
    p.add_argument("-n", "--samples", type=int, default=100_000)
    p.add_argument("--angle", type=float, default=0.0, help="ray direction in the (r2, r3) plane, radians")
    p.add_argument("--out", required=True)

    p = sub.add_parser("peaks", help="peak radii of a profile CSV")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--prominence", type=float, default=DEFAULT_PROMINENCE)
    p.add_argument("--out", required=True)

    p = sub.add_parser("psd", help="periodogram of a point-process CSV")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--n-freqs", type=int, default=1000)
    p.add_argument("--freqs", help="explicit comma-separated frequencies instead of the default grid")
    p.add_argument("--no-harmonic", action="store_true", help="do not snap the grid to multiples of 1/span")
    p.add_argument("--out", required=True)

    p = sub.add_parser("fit", help="spectral exponent of a periodogram CSV")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--bins-per-decade", type=int, default=BINS_PER_DECADE, help="0 fits the raw periodogram")
    p.add_argument("--decades", type=float, default=FIT_DECADES, help="default band width above the lowest frequency")
    p.add_argument("--f-lo", type=float)
    p.add_argument("--f-hi", type=float)
    p.add_argument("--out", help="report path (stdout always gets a copy)")

    p = sub.add_parser("pipeline", help="scan -> peaks -> psd -> fit with a replayable manifest")
    _add_map_flags(p)
    p.add_argument("--manifest", help="replay this manifest; other parameters are ignored")
    p.add_argument("--r-min", type=float)
    p.add_argument("--r-max", type=float)
    p.add_argument("-n", "--samples", type=int, default=100_000)
    p.add_argument("--angle", type=float, default=0.0)
    p.add_argument("--prominence", type=float, default=DEFAULT_PROMINENCE)
    p.add_argument("--n-freqs", type=int, default=1000)
    p.add_argument("--no-harmonic", action="store_true")
    p.add_argument("--bins-per-decade", type=int, default=BINS_PER_DECADE)
    p.add_argument("--decades", type=float, default=FIT_DECADES)
    p.add_argument("--seed", type=int, default=0, help="seed of the Poisson control process")
    p.add_argument("--out", required=True, help="output directory")
    return parser


def _prepare(args):
    """Validate arguments and return a zero-argument callable that does the work."""
    cmd = args.command
    if cmd == "render":
        axes = tuple(int(x) for x in _floats(args.axes, 2, "--axes"))
        window = _floats(args.window, 4, "--window") if args.window else None
        res = tuple(int(x) for x in _floats(args.res, 2, "--res"))
        spec = ProjectionSpec(axes, window, res)
        cfg = _map_config(args, DEFAULT_MAX_ITER)

        def run():
            grid = escape_grid(spec, cfg)
            Path(args.out).write_bytes(render_pgm(grid))
            print(f"axes={spec.axes[0]},{spec.axes[1]} res={res[0]}x{res[1]} "
                  f"bounded_fraction={grid.bounded_fraction():.6f}")
        return run

    if cmd == "scan":
        cfg = _map_config(args, SCAN_MAX_ITER)
        if args.samples < 2:
            raise UsageError("--samples must be >= 2")
        if args.r_min is not None and args.r_max is not None and not 0 <= args.r_min < args.r_max:
            raise UsageError("need 0 <= --r-min < --r-max")

        def run():
            lo, hi = args.r_min, args.r_max
            if lo is None or hi is None:
                dlo, dhi = default_scan_window(cfg)
                lo = dlo if lo is None else lo
                hi = dhi if hi is None else hi
            prof = radial_profile(lo, hi, args.samples, args.angle, cfg)
            io.write_profile(args.out, prof)
            print(f"samples={len(prof)} r_min={lo!r} r_max={hi!r}")
        return run

    if cmd == "peaks":
        if args.prominence < 1:
            raise UsageError("--prominence must be >= 1")

        def run():
            pp = extract_peaks(io.read_profile(args.inp), args.prominence)
            io.write_points(args.out, pp)
            print(f"peaks={len(pp)}")
        return run

    if cmd == "psd":
        freqs = _floats(args.freqs, None, "--freqs") if args.freqs else None
        if args.n_freqs < 2:
            raise UsageError("--n-freqs must be >= 2")

        def run():
            pp = io.read_points(args.inp)
            grid = freqs if freqs is not None else default_freq_grid(pp, args.n_freqs, not args.no_harmonic)
            pg = periodogram(pp, grid)
            io.write_periodogram(args.out, pg)
            print(f"events={len(pp)} freqs={len(pg)}")
        return run

    if cmd == "fit":
        if args.bins_per_decade < 0:
            raise UsageError("--bins-per-decade must be >= 0")

        def run():
            pg = io.read_periodogram(args.inp)
            if args.bins_per_decade:
                pg = bin_periodogram(pg, args.bins_per_decade)
            lo, hi = default_fit_band(pg, args.decades)
            fit = fit_alpha(pg, args.f_lo if args.f_lo is not None else lo,
                            args.f_hi if args.f_hi is not None else hi)
            if args.out:
                io.write_fit(args.out, fit)
            sys.stdout.write(fit.report())
        return run

    if cmd == "pipeline":
        if args.manifest:
            def run():
                manifest, changed = replay(args.manifest, args.out)
                print(summarize(manifest))
                if changed:
                    print("outputs differ from manifest: " + ", ".join(changed), file=sys.stderr)
                    return EXIT_RUNTIME
            return run
        params = PipelineParams(
            z0=_map_config(args, SCAN_MAX_ITER).z0, threshold=args.threshold,
            max_iter=args.max_iter if args.max_iter is not None else SCAN_MAX_ITER,
            r_min=args.r_min, r_max=args.r_max, samples=args.samples, angle=args.angle,
            prominence=args.prominence, n_freqs=args.n_freqs, harmonic=not args.no_harmonic,
            bins_per_decade=args.bins_per_decade, fit_decades=args.decades, seed=args.seed)
        params.validate()

        def run():
            print(summarize(run_pipeline(params, args.out)))
        return run

    raise UsageError(f"unknown command {cmd}")


_LIST_FLAGS = ("--window", "--z0", "--freqs", "--axes", "--res")


def _glue_negative_lists(argv: list[str]) -> list[str]:
    """Turn ``--window -1.6,1.6,...`` into ``--window=-1.6,1.6,...``; argparse reads a leading '-' as a flag."""
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in _LIST_FLAGS:
            nxt = next(it, None)
            if nxt is None:
                out.append(tok)
            elif nxt.startswith("-") and len(nxt) > 1 and (nxt[1].isdigit() or nxt[1] == "."):
                out.append(f"{tok}={nxt}")
            else:
                out.extend([tok, nxt])
        else:
            out.append(tok)
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_glue_negative_lists(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.threads is not None and args.threads < 1:
            raise UsageError("--threads must be >= 1")
        set_threads(args.threads)
        job = _prepare(args)
    except (UsageError, ValueError) as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return job() or EXIT_OK
    except (OSError, ValueError, FitError, DegenerateProcessError, ArithmeticError) as exc:
        print(f"{parser.prog}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
