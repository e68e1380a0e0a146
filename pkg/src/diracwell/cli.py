"""``diracwell`` command-line entry point.

Exit codes: 0 success, 2 configuration error, 3 physics-domain error,
4 validation failure.
"""
from __future__ import annotations

import argparse
import logging
import sys

from . import output, sweeps, validation
from .config import MODES, build_config, load_config_file
from .errors import ConfigError, DomainError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DOMAIN = 3
EXIT_VALIDATION = 4

log = logging.getLogger("diracwell")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="diracwell",
        description="Group delay of Dirac particles crossing a square potential well.",
    )
    p.add_argument("mode", choices=MODES)
    p.add_argument("--config", help="flat 'key = value' file; flags override it")
    p.add_argument("--alpha", type=float, help="E / mu c^2 (central energy in packet mode)")
    p.add_argument("--beta", type=float, help="V0 / mu c^2")
    p.add_argument("--gamma", type=float, help="hbar / (a mu c) for energy-sweep")
    p.add_argument("--width-min", type=float, help="k'a at the start of the width grid")
    p.add_argument("--width-max", type=float, help="k'a at the end of the width grid")
    p.add_argument("--alpha-min", type=float)
    p.add_argument("--alpha-max", type=float)
    p.add_argument("--beta-min", type=float)
    p.add_argument("--beta-max", type=float)
    p.add_argument("--points", type=int, help="grid points of the swept variable")
    p.add_argument("--w", type=float, help="temporal packet width in tau0")
    p.add_argument("--nodes", type=int, help="Gauss-Legendre nodes for packet mode")
    p.add_argument("--window-max", type=float, help="upper energy bound of the packet spectrum")
    p.add_argument("--out", help="CSV output path")
    p.add_argument("--plot", action="store_true", default=None, help="also write a gnuplot script")
    p.add_argument("--trace-dir", help="packet mode: write per-width intensity traces here")
    p.add_argument("--jobs", type=int, help="parallel rows in packet mode")
    p.add_argument("--quick", action="store_true", default=None, help="validate: skip wave-packet checks")
    p.add_argument("--skip", help="validate: comma-separated check names to leave out")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def _overrides(ns) -> dict:
    keys = (
        "alpha", "beta", "gamma", "width_min", "width_max", "alpha_min", "alpha_max",
        "beta_min", "beta_max", "points", "w", "nodes", "window_max", "out", "plot",
        "trace_dir", "jobs", "quick", "skip",
    )
    return {k: getattr(ns, k) for k in keys}


def _run_validate(config) -> int:
    skip = [s.strip() for s in config.skip.split(",") if s.strip()]
    unknown = set(skip) - set(validation.CHECKS)
    if unknown:
        raise ConfigError(f"skip: unknown check(s) {sorted(unknown)}", field="skip")
    checks = validation.run_checks(skip=skip, quick=config.quick)
    for c in checks:
        print(c.line())
    failed = [c.name for c in checks if not c.passed]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    return EXIT_VALIDATION if failed else EXIT_OK


def _run_sweep(config) -> int:
    table = sweeps.run(config)
    path = config.output_path()
    output.write_csv(table, path)
    written = [path]
    if config.plot:
        written.append(output.write_plot_script(table, path))
    if table.summary:
        written.append(output.write_summary(table, path.with_suffix(".summary.txt")))
        for k, v in sorted(table.summary.items()):
            print(f"{k} = {v}")
    if config.trace_dir and table.traces:
        written.extend(output.write_traces(table, config.trace_dir))
    for p in written:
        log.info("wrote %s", p)
    return EXIT_OK


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        file_values = load_config_file(ns.config) if ns.config else {}
        config = build_config(ns.mode, file_values, _overrides(ns))
        if config.mode == "validate":
            return _run_validate(config)
        return _run_sweep(config)
    except ConfigError as exc:
        print(f"diracwell: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"diracwell: physics domain error in mode {ns.mode}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"diracwell: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
