"""Command-line interface for coarsequot."""

from collections.abc import Callable
from fractions import Fraction
from typing import Any, TypeVar

import click
from click import Context

from coarsequot import formatting
from coarsequot.coning.runner import ConeOffRunner
from coarsequot.config import ExperimentConfig
from coarsequot.constants import DEFAULT_SEED
from coarsequot.core import ExperimentBase
from coarsequot.errors import CoarsequotError, ConfigError
from coarsequot.graphs.runner import AnalyzeRunner
from coarsequot.hhs.core import BuiltinKind
from coarsequot.hhs.runner import HhsVerifyRunner
from coarsequot.ledger.runner import ConstantsRunner
from coarsequot.projcomplex.runner import ProjComplexRunner
from coarsequot.randwalk.runner import WalkRunner
from coarsequot.reports import PlotData
from coarsequot.spinning.runner import QuotientRunner

F = TypeVar("F", bound=Callable[..., Any])


class AsciiArtHelpGroup(click.Group):
    """Click group with ASCII art help."""

    def get_help(self, ctx: Context) -> str:
        """Get help text with ASCII art.

        Args:
            ctx: Click context.

        Returns:
            Formatted help text with ASCII art.
        """
        formatting.print_ascii_art()
        help_text: str = super().get_help(ctx)

        help_text = help_text.replace("Usage:", click.style("Usage:", fg="green", bold=True))
        help_text = help_text.replace("Options:", click.style("Options:", fg="green", bold=True))
        help_text = help_text.replace("Commands:", click.style("Commands:", fg="green", bold=True))

        return help_text


class AsciiArtHelpCommand(click.Command):
    """Click command with ASCII art help."""

    def get_help(self, ctx: Context) -> str:
        """Get help text with ASCII art.

        Args:
            ctx: Click context.

        Returns:
            Formatted help text with ASCII art.
        """
        formatting.print_ascii_art(self.name or "")
        help_text: str = super().get_help(ctx)

        help_text = help_text.replace("Usage:", click.style("Usage:", fg="green", bold=True))
        help_text = help_text.replace("Options:", click.style("Options:", fg="green", bold=True))
        help_text = help_text.replace("[Examples]", click.style("Examples:", fg="green", bold=True))

        # Commands in yellow, their captions in cyan
        styled_lines: list[str] = []
        for line in help_text.split("\n"):
            if line.strip().startswith("$"):
                styled_lines.append(click.style(line, fg="yellow"))
            elif line.startswith("    ") and line.rstrip().endswith(":"):
                styled_lines.append(click.style(line, fg="cyan"))
            else:
                styled_lines.append(line)

        return "\n".join(styled_lines)


class FractionType(click.ParamType):
    """An exact rational such as ``3``, ``5/2`` or ``0.25``."""

    name = "fraction"

    def convert(self, value: Any, param: click.Parameter | None, ctx: Context | None) -> Fraction:
        """Parse the value.

        Returns:
            The rational.
        """
        if isinstance(value, Fraction):
            return value
        try:
            return Fraction(str(value))
        except ValueError:
            self.fail(f"{value!r} is not a rational number", param, ctx)


FRACTION = FractionType()


def common_options(func: F) -> F:
    """Attach the options every experiment command shares."""
    func = click.option(
        "-v", "--verbose", is_flag=True, help="Enable verbose output showing stage progress"
    )(func)
    func = click.option(
        "-o",
        "--out",
        "out_dir",
        type=click.Path(file_okay=False, writable=True),
        help="Directory for the JSON report and CSV rows (default: print a summary)",
    )(func)
    func = click.option(
        "-c",
        "--config",
        "config_path",
        type=click.Path(exists=True, dir_okay=False),
        help="JSON configuration file; command-line options override it",
    )(func)
    func = click.option(
        "-s", "--seed", type=int, help=f"Seed of the experiment (default: {DEFAULT_SEED})"
    )(func)
    return func


def validate_config(config_path: str | None, **overrides: Any) -> ExperimentConfig:
    """Load the configuration file and apply command-line overrides.

    Args:
        config_path: Optional JSON configuration file.
        **overrides: Options given on the command line; ``None`` means not given.

    Returns:
        The validated configuration.

    Raises:
        click.Abort: If the configuration is invalid.
    """
    try:
        return ExperimentConfig.load(config_path, **overrides)
    except ConfigError as e:
        formatting.print_error(f"Invalid configuration: {e}")
        raise click.Abort() from e


def validate_runner(factory: Callable[[], ExperimentBase]) -> ExperimentBase:
    """Construct a runner, turning rejected option combinations into an abort.

    Args:
        factory: Builds the runner.

    Returns:
        The runner.

    Raises:
        click.Abort: If the runner rejects its inputs.
    """
    try:
        return factory()
    except ConfigError as e:
        formatting.print_error(str(e))
        raise click.Abort() from e


def parse_ranks(text: str | None) -> tuple[int, ...]:
    """Parse comma-separated factor ranks such as ``1,1``.

    Args:
        text: The option value.

    Returns:
        The ranks.

    Raises:
        click.Abort: If a rank is not a positive integer.
    """
    if not text:
        return ()
    try:
        ranks = tuple(int(part) for part in text.split(","))
    except ValueError:
        ranks = ()
    if not ranks or any(r < 1 for r in ranks):
        formatting.print_error(f"Factor ranks must be positive integers, got '{text}'.")
        raise click.Abort()
    return ranks


@click.group(cls=AsciiArtHelpGroup)
def cli() -> None:
    """Coarsequot - A workbench for coarse geometry on finite graphs.

    Measure hyperbolicity and projections, cone families off, build projection complexes,
    evaluate the constants ledger and run random-quotient experiments, with every report
    written as deterministic JSON.
    """
    pass


@cli.command(cls=AsciiArtHelpCommand)
@click.argument("graph", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "-f", "--family", type=click.Path(exists=True, dir_okay=False), help="Family of subspaces"
)
@click.option("-d", "--dot", type=click.Path(dir_okay=False), help="Also write the graph as DOT")
@click.option("-n", "--samples", type=int, help="Sampled tuples on graphs too large to exhaust")
@common_options
def analyze(
    graph: str,
    family: str | None,
    dot: str | None,
    samples: int | None,
    seed: int | None,
    config_path: str | None,
    out_dir: str | None,
    verbose: bool,
) -> None:
    r"""Measure a graph and its family of subspaces.

    Reports the slimness and four-point constants, each member's quasiconvexity, the
    separation constant and the ledger those measurements imply.

    \b
    [Examples]

    \b
    Measure a tree:
        $ python -m coarsequot analyze tree.edges
        $ coarsequot analyze tree.edges

    \b
    Measure a graph with a family and save the report:
        $ python -m coarsequot analyze ball.json -f axes.json -o reports
    """
    config = validate_config(config_path, seed=seed, samples=samples)
    runner = AnalyzeRunner(config, graph, family, dot, out_dir, verbose)
    runner.run()


@cli.command(cls=AsciiArtHelpCommand)
@click.option(
    "-b", "--base", type=click.Path(exists=True, dir_okay=False), help="JSON file of base constants"
)
@click.option("-m", "--m0", "m0_sweep", type=FRACTION, multiple=True, help="M₀ value to sweep")
@click.option("-L", "--threshold", "L", type=FRACTION, help="Threshold L for τ(L)")
@click.option("-t", "--table", "markdown", is_flag=True, help="Print the ledger as markdown")
@common_options
def constants(
    base: str | None,
    m0_sweep: tuple[Fraction, ...],
    L: Fraction | None,
    markdown: bool,
    seed: int | None,
    config_path: str | None,
    out_dir: str | None,
    verbose: bool,
) -> None:
    r"""Derive every constant from a base and check the identities.

    Without a base file the all-zero base is used.

    \b
    [Examples]

    \b
    The worked base with τ(1000):
        $ python -m coarsequot constants -L 1000 -t

    \b
    Sweep M₀ for a measured base:
        $ python -m coarsequot constants -b base.json -m 0 -m 10 -m 20 -m 40
    """
    config = validate_config(config_path, seed=seed)
    runner = ConstantsRunner(config, base, m0_sweep, L, markdown, out_dir, verbose)
    runner.run()


@cli.command(cls=AsciiArtHelpCommand)
@click.argument("graph", type=click.Path(exists=True, dir_okay=False))
@click.argument("family", type=click.Path(exists=True, dir_okay=False))
@click.option("-t", "--radius", "t", type=int, default=1, help="Closeness radius t (default: 1)")
@common_options
def coneoff(
    graph: str,
    family: str,
    t: int,
    seed: int | None,
    config_path: str | None,
    out_dir: str | None,
    verbose: bool,
) -> None:
    r"""Cone a family off and check the cone-off lemmas.

    \b
    [Examples]

    \b
    Cone off the axes of a ball:
        $ python -m coarsequot coneoff ball.json axes.json
    """
    if t < 0:
        formatting.print_error("The closeness radius must not be negative.")
        raise click.Abort()
    config = validate_config(config_path, seed=seed)
    runner = ConeOffRunner(config, graph, family, t, out_dir, verbose)
    runner.run()


@cli.command(cls=AsciiArtHelpCommand)
@click.option("-g", "--graph", type=click.Path(exists=True, dir_okay=False), help="Graph file")
@click.option(
    "-f", "--family", type=click.Path(exists=True, dir_okay=False), help="Family of subspaces"
)
@click.option(
    "-e",
    "--explicit",
    "table",
    type=click.Path(exists=True, dir_okay=False),
    help="Explicit family as a JSON distance table",
)
@click.option("--theta", type=FRACTION, help="θ for an explicit family (default: its claim)")
@common_options
def projcplx(
    graph: str | None,
    family: str | None,
    table: str | None,
    theta: Fraction | None,
    seed: int | None,
    config_path: str | None,
    out_dir: str | None,
    verbose: bool,
) -> None:
    r"""Check the projection axioms on a family and build its projection complex.

    \b
    [Examples]

    \b
    A geometric family of a coned ball:
        $ python -m coarsequot projcplx -g ball.json -f axes.json

    \b
    An explicit family at θ = 2:
        $ python -m coarsequot projcplx -e family.json --theta 2
    """
    config = validate_config(config_path, seed=seed)
    runner = validate_runner(
        lambda: ProjComplexRunner(config, graph, family, table, theta, out_dir, verbose)
    )
    runner.run()


@cli.command(cls=AsciiArtHelpCommand)
@click.option("-p", "--presentation", help="Presentation JSON file (default: free group F₂)")
@click.option("-n", "--walk-length", type=int, help="Walk length n")
@click.option("-k", "--seeds", type=int, help="Derived seeds for the pass fractions")
@click.option("-T", "--trials", type=int, help="Trials of the drift estimate")
@common_options
def walk(
    presentation: str | None,
    walk_length: int | None,
    seeds: int | None,
    trials: int | None,
    seed: int | None,
    config_path: str | None,
    out_dir: str | None,
    verbose: bool,
) -> None:
    r"""Estimate the drift and the translation-length and matching pass fractions.

    \b
    [Examples]

    \b
    Drift of the simple walk on F₂:
        $ python -m coarsequot walk -n 2000 -T 200

    \b
    Matching statistics over 100 seeds:
        $ python -m coarsequot walk -n 200 -k 100 -o reports
    """
    config = validate_config(
        config_path,
        seed=seed,
        presentation=presentation,
        walk_length=walk_length,
        seeds=seeds,
        trials=trials,
    )
    runner = WalkRunner(config, out_dir, verbose)
    runner.run()


@cli.command(cls=AsciiArtHelpCommand)
@click.option("-p", "--presentation", help="Presentation JSON file (default: free group F₂)")
@click.option("-n", "--walk-length", type=int, help="Walk length n")
@click.option("-k", "--walks", type=int, help="Independent walks, one relator each")
@click.option("-r", "--radius", "ball_radius", type=int, help="Cayley ball radius")
@click.option("-b", "--budget", type=int, help="Saturation budget")
@click.option("-T", "--triangles", type=int, help="Random quotient triangles to lift")
@click.option("-H", "--hhs", is_flag=True, help="Also check the quotient hierarchy")
@common_options
def quotient(
    presentation: str | None,
    walk_length: int | None,
    walks: int | None,
    ball_radius: int | None,
    budget: int | None,
    triangles: int | None,
    hhs: bool,
    seed: int | None,
    config_path: str | None,
    out_dir: str | None,
    verbose: bool,
) -> None:
    r"""Run the random-quotient pipeline from walks to triangle lifts.

    Exits nonzero when any hard check fails; the report names the failing stages.

    \b
    [Examples]

    \b
    F₂ modulo one walk of length 60 in the ball of radius 8:
        $ python -m coarsequot quotient -n 60 -r 8 -s 7

    \b
    Two walks and the quotient hierarchy, saved:
        $ python -m coarsequot quotient -n 60 -k 2 -H -o reports
    """
    config = validate_config(
        config_path,
        seed=seed,
        presentation=presentation,
        walk_length=walk_length,
        walks=walks,
        ball_radius=ball_radius,
        budget=budget,
        triangles=triangles,
        hhs=hhs or None,
    )
    runner = QuotientRunner(config, out_dir, verbose)
    runner.run()


@cli.command(name="hhs-verify", cls=AsciiArtHelpCommand)
@click.option(
    "-B",
    "--builtin",
    type=click.Choice([k.value for k in BuiltinKind]),
    help="Built-in structure to verify",
)
@click.option(
    "-S",
    "--structure",
    type=click.Path(exists=True, dir_okay=False),
    help="Structure fixture as JSON",
)
@click.option("-r", "--radius", "ball_radius", type=int, help="Cayley ball radius")
@click.option("-F", "--factor-ranks", help="Comma-separated factor ranks (default: 1,1)")
@click.option("-p", "--presentation", help="Presentation for the trivial structure")
@click.option("-q", "--quotient", "spin", is_flag=True, help="Also verify a random quotient")
@click.option("-n", "--walk-length", type=int, help="Walk length n of the quotient relator")
@common_options
def hhs_verify(
    builtin: str | None,
    structure: str | None,
    ball_radius: int | None,
    factor_ranks: str | None,
    presentation: str | None,
    spin: bool,
    walk_length: int | None,
    seed: int | None,
    config_path: str | None,
    out_dir: str | None,
    verbose: bool,
) -> None:
    r"""Verify the hierarchy axioms on a structure and, optionally, on a random quotient.

    \b
    [Examples]

    \b
    The one-domain structure of F₂:
        $ python -m coarsequot hhs-verify -B trivial -r 3

    \b
    The free product Z * Z and a random quotient of it:
        $ python -m coarsequot hhs-verify -B rel_free_product -F 1,1 -r 4 -q -n 12
    """
    ranks = parse_ranks(factor_ranks) or (1, 1)
    kind = BuiltinKind(builtin) if builtin is not None else None
    config = validate_config(
        config_path,
        seed=seed,
        ball_radius=ball_radius,
        presentation=presentation,
        walk_length=walk_length,
    )
    runner = validate_runner(
        lambda: HhsVerifyRunner(config, kind, structure, ranks, spin, out_dir, verbose)
    )
    runner.run()


@cli.command(name="plot-data", cls=AsciiArtHelpCommand)
@click.argument("reports", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
@click.option(
    "-o",
    "--output",
    "output_file",
    type=click.Path(dir_okay=False, writable=True),
    help="Save the rows to the specified CSV file",
)
@click.option("-nt", "--no-table", is_flag=True, help="Output tab-separated rows, not a table")
@click.option("-v", "--verbose", is_flag=True, help="Enable verbose output")
def plot_data(
    reports: tuple[str, ...], output_file: str | None, no_table: bool, verbose: bool
) -> None:
    r"""Collect the summary rows of many reports into one CSV, sorted by seed.

    \b
    [Examples]

    \b
    Gather a seed sweep:
        $ python -m coarsequot plot-data reports/quotient-seed*.json -o quotient.csv
    """
    try:
        PlotData(reports, output_file, no_table, verbose).run()
    except (CoarsequotError, OSError) as e:
        formatting.print_error(str(e))
        raise SystemExit(1) from e


def main() -> None:
    """Main entry point when running as a module."""
    cli()
