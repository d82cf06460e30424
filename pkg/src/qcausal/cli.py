"""Command line driver: ``qcausal sweep | infer | selftest``.

Exit codes: 0 success, 2 config/input error, 3 numerical failure.
"""

import argparse
import sys
from pathlib import Path

from . import selftest
from .errors import IncompleteTableError
from .harness import (
    ConfigError,
    NumericalError,
    emit_csv,
    emit_report,
    import_lab_table,
    load_config,
    run_config,
)

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


def _sweep(args) -> int:
    cfg = load_config(args.config)
    if args.epsilon is not None:
        cfg.epsilon = args.epsilon
    if args.pathway is not None:
        cfg.pathway = args.pathway
    if args.out is not None:
        cfg.csv_path = Path(args.out)
        cfg.report_path = cfg.csv_path.with_suffix(".report.txt")
    rows = run_config(cfg)
    if cfg.csv_path is None:
        raise ConfigError("no output CSV path: set output.csv in the config or pass --out")
    emit_csv(rows, cfg.csv_path)
    if cfg.report_path is not None:
        emit_report(rows, cfg.report_path, cfg)
    for r in rows:
        print(f"{r.param}={r.value:.6g}  f_R={r.f_R:.6g}  f_MAB={r.f_MAB:.6g}  "
              f"f_MBA={r.f_MBA:.6g}  {r.verdict.value}")
    print(f"wrote {cfg.csv_path}")
    return EXIT_OK


def _infer(args) -> int:
    if args.epsilon is None:
        raise ConfigError("infer needs an explicit --epsilon (e.g. 0.02 for lab data)")
    verdict = import_lab_table(args.table, args.epsilon)
    record = verdict.to_record()
    if args.out:
        Path(args.out).write_text(record)
    sys.stdout.write(record)
    return EXIT_OK


def _selftest(args) -> int:
    return EXIT_OK if selftest.run() else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qcausal", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="run a parameter sweep from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", help="CSV output path (report goes next to it)")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--pathway", choices=["closed_form", "scattering"])
    p.set_defaults(func=_sweep)

    p = sub.add_parser("infer", help="classify a single expectation-table CSV")
    p.add_argument("table")
    p.add_argument("--epsilon", type=float)
    p.add_argument("--out", help="write the verdict record here as well")
    p.set_defaults(func=_infer)

    p = sub.add_parser("selftest", help="run the built-in derived-oracle checks")
    p.set_defaults(func=_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, IncompleteTableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
