"""CLI entry point for slopegap."""

import argparse
import logging
import os
import sys
from fractions import Fraction

from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape

from slopegap import __version__
from slopegap import closed_form, distribution as dist_mod, oracle, reporter
from slopegap.checks import run_checks
from slopegap.closed_form import ClosedFormError
from slopegap.config import (
    ConfigError,
    ConfigInvariantError,
    UnresolvedConstantError,
    describe,
    load_config,
)
from slopegap.display import Display
from slopegap.distribution import DistributionError
from slopegap.expr import ExpressionError
from slopegap.geometry import GeometryError
from slopegap.oracle import OracleError
from slopegap.pipeline import Pipeline
from slopegap.realfield import FieldError
from slopegap.section import SectionError
from slopegap.subdivision import CoverageError
from slopegap.surface import SurfaceError
from slopegap.winners import WinnerError

log = logging.getLogger("slopegap")

LOG_ENV = "SLOPEGAP_LOG_LEVEL"

EXIT_CONFIG = 2
EXIT_COMPUTATION = 3
EXIT_VERIFY = 4
EXIT_UNRESOLVED = 5
EXIT_INVARIANT = 6

COMPUTATION_ERRORS = {
    FieldError: "realfield",
    ExpressionError: "expr",
    GeometryError: "geometry",
    SurfaceError: "surface",
    SectionError: "section",
    WinnerError: "winners",
    CoverageError: "subdivision",
    DistributionError: "distribution",
    ClosedFormError: "closed_form",
    OracleError: "oracle",
}

CSV_HELP = "CSV columns: t, pdf, cdf (header row, UTF-8, '.' decimal separator)"


def _setup_logging(verbosity):
    level = os.environ.get(LOG_ENV) or ("DEBUG" if verbosity >= 2 else "INFO" if verbosity == 1 else "WARNING")
    if not isinstance(logging.getLevelName(level.upper()), int):
        level = "WARNING"
    logging.basicConfig(
        level=level.upper(),
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
    )


def _pipeline(args):
    config = load_config(args.config)
    return Pipeline(config, threads=args.threads)


def _display(args):
    return Display(animate=not args.no_animate)


def _cmd_winners(args):
    """Sweep the top edge of Ω for its left winners."""
    p = _pipeline(args)
    if args.json_output:
        print(reporter.to_json(reporter.winners_payload(p.config, p.records)))
        return
    display = _display(args)
    display.show_banner(p.config.description)
    display.config_summary(describe(p.config))
    with display.working("Sweeping winners..."):
        records = p.records
    display.show_winners(records)


def _cmd_subdivide(args):
    """Split Ω into winner regions."""
    p = _pipeline(args)
    if args.json_output:
        print(reporter.to_json(reporter.regions_payload(p.config, p.regions)))
        return
    display = _display(args)
    with display.working("Sweeping winners and subdividing Ω..."):
        regions = p.regions
    display.show_regions(regions, p.transversal.area())


def _cmd_breakpoints(args):
    """Points where the gap density changes formula."""
    p = _pipeline(args)
    if args.json_output:
        print(reporter.to_json(reporter.breakpoints_payload(p.config, p.distribution)))
        return
    display = _display(args)
    with display.working("Building the distribution..."):
        dist = p.distribution
    display.show_breakpoints(dist.breakpoints, p.config.expected.breakpoints)


def _grid(t_min, t_max, samples):
    if samples < 2 or not 0 < t_min < t_max:
        raise DistributionError("grid needs 0 < t-min < t-max and at least two samples")
    step = (t_max - t_min) / (samples - 1)
    return [t_min + k * step for k in range(samples)]


def _cmd_distribution(args):
    """CDF and PDF of the renormalized gaps on a grid."""
    p = _pipeline(args)
    n = p.config.numerics
    ts = _grid(
        args.t_min if args.t_min is not None else n.t_min,
        args.t_max if args.t_max is not None else n.t_max,
        args.samples if args.samples is not None else n.samples,
    )
    rows = dist_mod.cdf_grid(p.distribution, ts, with_pdf=not args.no_pdf)
    if args.csv:
        sys.stdout.write(reporter.write_rows(reporter.DISTRIBUTION_COLUMNS, reporter.distribution_rows(rows)))
        return
    _display(args).show_distribution(rows)


def _cmd_volume(args):
    """Integral of the return time over Ω."""
    p = _pipeline(args)
    if args.json_output:
        print(reporter.to_json(reporter.volume_payload(p.config, p.volume)))
        return
    display = _display(args)
    with display.working("Integrating the return time..."):
        result = p.volume
    display.show_volume(result, p.config.expected.volume)


def _cmd_empirical(args):
    """Saddle-connection slopes up to radius R and their renormalized gaps."""
    p = _pipeline(args)
    radius = args.radius if args.radius is not None else p.config.numerics.radius
    emp = oracle.empirical_gaps(p.surface, radius, threads=p.threads)
    if args.csv == "gaps":
        sys.stdout.write(reporter.write_rows(reporter.GAP_COLUMNS, reporter.gap_rows(emp)))
        return
    if args.csv == "histogram":
        densities, edges = oracle.gap_histogram(emp, args.bins or p.config.numerics.histogram_bins)
        sys.stdout.write(reporter.write_rows(reporter.HISTOGRAM_COLUMNS, reporter.histogram_rows(densities, edges)))
        return
    ks = None if args.no_ks else oracle.ks_distance(emp, p.distribution)
    summary = reporter.empirical_payload(p.config, emp, ks)
    if args.json_output:
        print(reporter.to_json(summary))
        return
    _display(args).show_empirical(summary)


def _cmd_closed_form(args):
    """Compare the closed-form heptagon CDF with the sweep, branch by branch."""
    p = _pipeline(args)
    if not p.config.expected.closed_form:
        raise ClosedFormError(f"no closed form is known for {p.config.name}")
    n = p.config.numerics
    ts = closed_form.comparison_grid(
        args.t_min if args.t_min is not None else n.t_min,
        args.t_max if args.t_max is not None else n.t_max,
        args.grid if args.grid is not None else n.samples,
    )
    dist = p.distribution
    report = closed_form.compare_with_sweep(p.region_cdf_by_winner, lambda t: dist_mod.cdf(dist, t), ts)
    if args.json_output:
        print(reporter.to_json(reporter.closed_form_payload(p.config, report)))
        return
    _display(args).show_closed_form(report)


def _cmd_verify(args):
    """Run the acceptance suite; exit 4 on any failure."""
    p = _pipeline(args)
    if args.json_output:
        results = run_checks(p, empirical=not args.skip_empirical, seed=args.seed)
        print(reporter.to_json(reporter.checks_payload(p.config, results)))
    else:
        display = _display(args)
        display.show_banner(p.config.description)
        results = run_checks(p, empirical=not args.skip_empirical, seed=args.seed, progress=display.show_check)
        display.show_checks(results)
    if not all(r.passed for r in results):
        sys.exit(EXIT_VERIFY)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="slopegap",
        description="Slope gap distributions of single-cusp Veech surfaces, computed from winning vectors.",
    )
    parser.add_argument("--version", "-v", action="version", version=f"slopegap {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--config", "-c", default=None,
        help="Bundled surface name (heptagon, pentagon) or a TOML path (default: $SLOPEGAP_CONFIG or heptagon)",
    )
    common.add_argument("--threads", "-j", type=int, default=1, help="Worker threads (default: 1)")
    common.add_argument("--verbose", "-V", action="count", default=0, help="-V for progress, -VV for debug logs")
    common.add_argument("--no-animate", action="store_true", help="Disable spinners")

    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    for name, text in (
        ("winners", "Winners on the top edge of Ω and their intervals"),
        ("subdivide", "Winner regions of Ω"),
        ("breakpoints", "Non-analyticity points, exact and decimal"),
        ("volume", "Volume of Ω under the return time"),
    ):
        sub = subparsers.add_parser(name, help=text, parents=[common])
        sub.add_argument("--json", dest="json_output", action="store_true", help="Output as JSON")

    dist_parser = subparsers.add_parser(
        "distribution", help="CDF and PDF on a grid", parents=[common], epilog=CSV_HELP
    )
    dist_parser.add_argument("--t-min", type=float, default=None, help="Grid start (default from config)")
    dist_parser.add_argument("--t-max", type=float, default=None, help="Grid end (default from config)")
    dist_parser.add_argument("--samples", type=int, default=None, help="Grid points (default from config)")
    dist_parser.add_argument("--no-pdf", action="store_true", help="Leave the pdf column empty")
    dist_parser.add_argument("--csv", action="store_true", help="Write CSV to stdout")

    emp_parser = subparsers.add_parser(
        "empirical", help="Empirical renormalized gaps from enumerated saddle connections", parents=[common]
    )
    emp_parser.add_argument(
        "--radius", "-R", type=Fraction, default=None, help="Horizontal bound R, e.g. 40 or 81/2 (default from config)"
    )
    emp_parser.add_argument("--csv", choices=("gaps", "histogram"), default=None, help="Write CSV to stdout")
    emp_parser.add_argument("--bins", type=int, default=None, help="Histogram bins")
    emp_parser.add_argument("--no-ks", action="store_true", help="Skip the KS distance to the analytic cdf")
    emp_parser.add_argument("--json", dest="json_output", action="store_true", help="Output as JSON")

    cf_parser = subparsers.add_parser(
        "closed-form", help="Closed-form heptagon CDF against the sweep, per branch", parents=[common]
    )
    cf_parser.add_argument("--grid", type=int, default=None, help="Uniform grid size (default 200)")
    cf_parser.add_argument("--t-min", type=float, default=None, help="Grid start")
    cf_parser.add_argument("--t-max", type=float, default=None, help="Grid end")
    cf_parser.add_argument("--json", dest="json_output", action="store_true", help="Output as JSON")

    verify_parser = subparsers.add_parser("verify", help="Run the acceptance suite", parents=[common])
    verify_parser.add_argument("--skip-empirical", action="store_true", help="Skip the R = 40 enumeration")
    verify_parser.add_argument("--seed", type=int, default=0, help="Seed for random test points")
    verify_parser.add_argument("--json", dest="json_output", action="store_true", help="Output as JSON")

    return parser


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)

    if args.command is None:
        parser.print_help()
        sys.exit(EXIT_CONFIG)

    _setup_logging(args.verbose)

    commands = {
        "winners": _cmd_winners,
        "subdivide": _cmd_subdivide,
        "breakpoints": _cmd_breakpoints,
        "distribution": _cmd_distribution,
        "volume": _cmd_volume,
        "empirical": _cmd_empirical,
        "closed-form": _cmd_closed_form,
        "verify": _cmd_verify,
    }

    err = Console(stderr=True)
    try:
        commands[args.command](args)
    except KeyboardInterrupt:
        err.print("\nAborted.")
        sys.exit(130)
    except ConfigError as e:
        err.print(f"[bold red]Error:[/] {escape(f'[config] {e}')}")
        if isinstance(e, UnresolvedConstantError):
            sys.exit(EXIT_UNRESOLVED)
        if isinstance(e, ConfigInvariantError):
            sys.exit(EXIT_INVARIANT)
        sys.exit(EXIT_CONFIG)
    except tuple(COMPUTATION_ERRORS) as e:
        module = next(name for cls, name in COMPUTATION_ERRORS.items() if isinstance(e, cls))
        err.print(f"[bold red]Error:[/] {escape(f'[{module}] {e}')}")
        sys.exit(EXIT_COMPUTATION)
    except Exception as e:
        log.debug("unexpected failure", exc_info=True)
        err.print(f"[bold red]Error:[/] {escape(str(e))}")
        sys.exit(1)


if __name__ == "__main__":
    main()
