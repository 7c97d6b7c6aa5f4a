"""Command line entry point: ``jamsim <preset|sweep|validate> ...``."""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import sweeps

log = logging.getLogger("jamsim")

TARGETS = tuple(sweeps.PRESETS) + ("sweep", "validate")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="jamsim",
        description="Sum-SE sweeps and Monte Carlo validation for a massive MIMO "
                    "uplink attacked by an energy-splitting jammer.")
    p.add_argument("target", choices=TARGETS,
                   help="figure preset, 'sweep' (kind taken from --config) or 'validate'")
    p.add_argument("--config", help="JSON file with scenario/sweep overrides")
    p.add_argument("--out", help="output CSV path (default: output_path from config, else stdout)")
    p.add_argument("--seed", type=int, help="unsigned 64-bit seed")
    p.add_argument("--drops", type=int, help="number of user drops per sweep point")
    p.add_argument("--blocks", type=int, help="Monte Carlo blocks for 'validate'")
    p.add_argument("--sequential", action="store_true",
                   help="single worker; output is byte-identical to parallel runs either way")
    p.add_argument("--workers", type=int, default=None, help="parallel workers (default: CPU count)")
    p.add_argument("--redraw-drops", action="store_true", default=None,
                   help="draw fresh user drops at every grid point")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
        log.info("wrote %s", out)
    else:
        sys.stdout.write(text)


def _validate(args, config: dict, workers: int) -> int:
    spec = sweeps.validation_spec_from_config(config, seed=args.seed, num_blocks=args.blocks)
    report = sweeps.run_validation(
        spec.params(), spec.split(), spec.num_blocks, spec.seed,
        reference=spec.reference, field=spec.field, workers=workers, threshold=spec.threshold)
    out = args.out or spec.output_path
    _emit(sweeps.rows_to_csv(report.rows(), sweeps.VALIDATION_COLUMNS), out)
    for row in report.rows():
        print(f"user {row['user']}: closed form {row['closed_form_sinr']:.6g}  "
              f"monte carlo {row['montecarlo_sinr']:.6g}  "
              f"deviation {100 * row['relative_deviation']:.3f}%  {row['status']}",
              file=sys.stderr)
    print(f"validation: {report.status} ({report.num_blocks} blocks, "
          f"threshold {100 * report.threshold:g}%)", file=sys.stderr)
    return 1 if report.status == "fail" else 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.seed is not None and not 0 <= args.seed < 2**64:
        print("error: --seed must be an unsigned 64-bit integer", file=sys.stderr)
        return 2
    workers = 1 if args.sequential else (args.workers or os.cpu_count() or 1)
    try:
        config = sweeps.load_config(args.config) if args.config else {}
        target = args.target
        if target == "sweep" and config.get("kind") == "validate":
            target = "validate"
        if target == "validate":
            return _validate(args, config, workers)
        spec = sweeps.sweep_spec_from_config(
            None if target == "sweep" else target, config,
            seed=args.seed, num_drops=args.drops, redraw_drops=args.redraw_drops)
        rows = sweeps.run_sweep(spec, workers=workers)
        _emit(sweeps.rows_to_csv(rows), args.out or spec.output_path)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
