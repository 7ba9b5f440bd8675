# :coding: utf-8

import collections
import datetime
import logging
import os
import shlex
import textwrap

import click

import smtflow
import smtflow.benchmark
import smtflow.config
import smtflow.design
import smtflow.exception
import smtflow.filesystem
import smtflow.flow
import smtflow.history
import smtflow.logging
import smtflow.report
import smtflow.symbol
import smtflow.validator
from smtflow import __version__

# Initiate logging handler to display potential warning when fetching config.
smtflow.logging.initiate()

#: Retrieve configuration mapping to initialize default values.
_CONFIG = smtflow.config.fetch()

#: Click default context for all commands.
CONTEXT_SETTINGS = dict(
    max_content_width=_CONFIG.get("command", {}).get("max_content_width", 80),
    help_option_names=["-h", "--help"],
)


class _MainGroup(click.Group):
    """Extended click Group for smtflow command line main entry point."""

    def parse_args(self, context, arguments):
        """Update *context* from passed *arguments*.

        Record initial command from *arguments*.

        """
        context.obj = {
            "initial_input": shlex.join(["smtflow"] + list(arguments)),
        }

        return super(_MainGroup, self).parse_args(context, arguments)


@click.group(
    context_settings=CONTEXT_SETTINGS,
    cls=_MainGroup,
    help=textwrap.dedent(
        """
        Smtflow reduces the standby leakage of a placed gate-level netlist
        with high threshold cells and MT-cells sharing switch transistors.

        Example:

        \b
        >>> smtflow gen --cells 800 --layers 20 --seed 1 -o bench.smt
        >>> smtflow run --design bench.smt --mode improved --report out.json
        >>> smtflow compare --design bench.smt

        """
    ),
)
@click.version_option(version=__version__)
@click.option(
    "-v", "--verbosity",
    help="Set the logging output verbosity.",
    type=click.Choice(smtflow.logging.LEVEL_MAPPING.keys()),
    default=_CONFIG.get("command", {}).get("verbosity", "info"),
    show_default=True
)
@click.option(
    "--record",
    help="Record flow execution history into a directory for debugging.",
    type=click.Path(exists=True, file_okay=False)
)
@click.pass_context
def main(click_context, **kwargs):
    """Main entry point for the command line interface."""
    smtflow.logging.initiate(console_level=kwargs["verbosity"])

    if kwargs["record"] is not None:
        smtflow.history.start_recording(
            command=click_context.obj["initial_input"]
        )

    click_context.obj["recording_path"] = kwargs["record"]


@main.command(
    name="gen",
    help=textwrap.dedent(
        """
        Generate a benchmark design file.

        The netlist is a seeded layered random DAG of low threshold gates
        placed on a grid. The clock period is set so that the critical path
        uses a *tightness* ratio of it.

        Example:

        \b
        >>> smtflow gen --cells 400 --layers 12 --seed 2 -o bench_b.smt

        """
    ),
    short_help="Generate a benchmark design.",
    context_settings=CONTEXT_SETTINGS
)
@click.option(
    "--cells",
    help="Number of logic cells.",
    type=click.IntRange(min=1),
    default=_CONFIG.get("command", {}).get("gen", {}).get("cells", 100),
    show_default=True
)
@click.option(
    "--layers",
    help="Number of logic layers.",
    type=click.IntRange(min=1),
    default=_CONFIG.get("command", {}).get("gen", {}).get("layers", 10),
    show_default=True
)
@click.option(
    "--seed",
    help="Seed of the generator.",
    type=click.IntRange(min=0, max=2 ** 64 - 1),
    default=_CONFIG.get("command", {}).get("gen", {}).get("seed", 0),
    show_default=True
)
@click.option(
    "--tightness",
    help="Ratio of the critical path delay to the clock period.",
    type=click.FloatRange(min=0, max=1, min_open=True),
    default=_CONFIG.get("command", {}).get("gen", {}).get("tightness", 0.9),
    show_default=True
)
@click.option(
    "-o", "--output",
    help="Path to the design file to generate.",
    type=click.Path(dir_okay=False),
    required=True
)
@click.option(
    "--overwrite",
    help="Overwrite the output file if it exists.",
    is_flag=True,
    default=False
)
@click.pass_context
def smtflow_gen(click_context, **kwargs):
    """Generate a benchmark design."""
    logger = logging.getLogger(__name__ + ".smtflow_gen")
    exit_code = 0

    try:
        design = smtflow.benchmark.generate_benchmark(
            kwargs["cells"], kwargs["layers"], seed=kwargs["seed"],
            tightness=kwargs["tightness"]
        )
        path = smtflow.design.export(
            kwargs["output"], design, overwrite=kwargs["overwrite"]
        )
        logger.info(
            "Benchmark exported in '{}' [clock period: {} ps].".format(
                path, design.constraints.t_clk
            )
        )

    except smtflow.exception.SmtError as error:
        exit_code = _handle_error(error)

    _export_history_if_requested(click_context)
    click_context.exit(exit_code)


@main.command(
    name="run",
    help=textwrap.dedent(
        """
        Run the design flow of one technique on a design file.

        The modes are "dualvth" (high and low threshold cells only),
        "conventional" (MT-cells with built-in switch and holder) and
        "improved" (MT-cells clustered on shared switches with holders only
        where required).

        The report is emitted before the final timing is checked, so a
        design missing timing still produces its outputs.

        Example:

        \b
        >>> smtflow run --design bench.smt --mode improved --report out.json
        >>> smtflow run --design bench.smt --table out.txt --svg out.svg

        """
    ),
    short_help="Run the design flow of one technique.",
    context_settings=CONTEXT_SETTINGS
)
@click.option(
    "--design",
    help="Path to the design file.",
    type=click.Path(dir_okay=False),
    required=True
)
@click.option(
    "--mode",
    help="Technique to apply.",
    type=click.Choice(smtflow.symbol.MODES),
    default=_CONFIG.get("command", {}).get(
        "mode", smtflow.symbol.IMPROVED_MODE
    ),
    show_default=True
)
@click.option(
    "--config",
    help="Path to a TOML file overriding constraints and flow settings.",
    type=click.Path(dir_okay=False)
)
@click.option(
    "--seed",
    help="Override the seed of the design.",
    type=click.IntRange(min=0, max=2 ** 64 - 1)
)
@click.option(
    "--report",
    help="Path to the JSON report to export.",
    type=click.Path(dir_okay=False)
)
@click.option(
    "--table",
    help="Path to the text table to export.",
    type=click.Path(dir_okay=False)
)
@click.option(
    "--svg",
    help="Path to the SVG rendering to export.",
    type=click.Path(dir_okay=False)
)
@click.option(
    "--design-output",
    help="Path to the final design file to export.",
    type=click.Path(dir_okay=False)
)
@click.option(
    "--clusters",
    help="Path to the switch cluster dump to export.",
    type=click.Path(dir_okay=False)
)
@click.option(
    "--overwrite",
    help="Overwrite output files if they exist.",
    is_flag=True,
    default=False
)
@click.pass_context
def smtflow_run(click_context, **kwargs):
    """Run the design flow of one technique."""
    logger = logging.getLogger(__name__ + ".smtflow_run")
    exit_code = 0

    try:
        config = _fetch_config(kwargs)
        design = smtflow.load_design(
            kwargs["design"], config=config, seed=kwargs["seed"]
        )
        result, report = smtflow.run(
            design, mode=kwargs["mode"], config=config
        )

        click.echo("\n" + report.table())
        _export_report(report, kwargs, result=result)

        if kwargs["design_output"] is not None:
            path = smtflow.design.export(
                kwargs["design_output"], result.design,
                overwrite=kwargs["overwrite"]
            )
            logger.info("Final design exported in '{}'.".format(path))

        if kwargs["clusters"] is not None:
            path = smtflow.report.export_clusters(
                kwargs["clusters"], result.structure,
                overwrite=kwargs["overwrite"]
            )
            logger.info("Cluster dump exported in '{}'.".format(path))

        smtflow.flow.check_timing(result)

    except smtflow.exception.SmtError as error:
        exit_code = _handle_error(error)

    _export_history_if_requested(click_context)
    click_context.exit(exit_code)


@main.command(
    name="compare",
    help=textwrap.dedent(
        """
        Run the design flow of every technique on a design file and display
        area and leakage normalized to the Dual-Vth technique.

        Example:

        \b
        >>> smtflow compare --design bench.smt --report out.json

        """
    ),
    short_help="Compare the three techniques.",
    context_settings=CONTEXT_SETTINGS
)
@click.option(
    "--design",
    help="Path to the design file.",
    type=click.Path(dir_okay=False),
    required=True
)
@click.option(
    "--config",
    help="Path to a TOML file overriding constraints and flow settings.",
    type=click.Path(dir_okay=False)
)
@click.option(
    "--seed",
    help="Override the seed of the design.",
    type=click.IntRange(min=0, max=2 ** 64 - 1)
)
@click.option(
    "--report",
    help="Path to the JSON report to export.",
    type=click.Path(dir_okay=False)
)
@click.option(
    "--table",
    help="Path to the text table to export.",
    type=click.Path(dir_okay=False)
)
@click.option(
    "--overwrite",
    help="Overwrite output files if they exist.",
    is_flag=True,
    default=False
)
@click.pass_context
def smtflow_compare(click_context, **kwargs):
    """Compare the three techniques."""
    exit_code = 0

    try:
        config = _fetch_config(kwargs)
        design = smtflow.load_design(
            kwargs["design"], config=config, seed=kwargs["seed"]
        )
        results, report = smtflow.compare(design, config=config)

        click.echo("\n" + report.table())
        _export_report(report, kwargs)

        for result in results.values():
            smtflow.flow.check_timing(result)

    except smtflow.exception.SmtError as error:
        exit_code = _handle_error(error)

    _export_history_if_requested(click_context)
    click_context.exit(exit_code)


@main.command(
    name="check",
    help=textwrap.dedent(
        """
        Check a design file and display every rule violation.

        Example:

        \b
        >>> smtflow check --design bench.smt

        """
    ),
    short_help="Check a design file.",
    context_settings=CONTEXT_SETTINGS
)
@click.option(
    "--design",
    help="Path to the design file.",
    type=click.Path(dir_okay=False),
    required=True
)
@click.pass_context
def smtflow_check(click_context, **kwargs):
    """Check a design file."""
    logger = logging.getLogger(__name__ + ".smtflow_check")
    exit_code = 0

    try:
        design = smtflow.design.load(kwargs["design"], validate=False)
        diagnostics = smtflow.validator.validate(design)

        if len(diagnostics) > 0:
            raise smtflow.exception.ValidationError(diagnostics)

        logger.info("No issue found in '{}'.".format(kwargs["design"]))

    except smtflow.exception.SmtError as error:
        exit_code = _handle_error(error)

    _export_history_if_requested(click_context)
    click_context.exit(exit_code)


@main.command(
    name="view",
    help=textwrap.dedent(
        """
        Display a summary of a design file.

        Example:

        \b
        >>> smtflow view --design bench.smt

        """
    ),
    short_help="View summary of a design file.",
    context_settings=CONTEXT_SETTINGS
)
@click.option(
    "--design",
    help="Path to the design file.",
    type=click.Path(dir_okay=False),
    required=True
)
@click.pass_context
def smtflow_view(click_context, **kwargs):
    """Display summary of a design file."""
    exit_code = 0

    try:
        design = smtflow.design.load(kwargs["design"])
        display_design(design)

    except smtflow.exception.SmtError as error:
        exit_code = _handle_error(error)

    _export_history_if_requested(click_context)
    click_context.exit(exit_code)


def display_design(design):
    """Display summary of *design*."""
    click.echo(
        "\nStage: {}\nDie: {}\nPorts: {}\nNets: {}\nCells: {}".format(
            design.flow_stage,
            " x ".join(
                "{:.3f} um".format((design.die[i + 2] - design.die[i]) / 1e3)
                for i in range(2)
            ),
            len(design.ports), len(design.nets), len(design.cells)
        )
    )

    counts = collections.Counter(
        (cell.kind, cell.variant) for cell in design.cells.values()
    )

    columns = smtflow.report.create_columns(["Kind", "Variant", "Count"])
    for (kind, variant), count in sorted(counts.items()):
        smtflow.report.create_row(kind, columns[0])
        smtflow.report.create_row(variant, columns[1])
        smtflow.report.create_row(count, columns[2])

    click.echo("\n" + smtflow.report.format_table(columns))

    columns = smtflow.report.create_columns(["Constraint", "Value"])
    for key in smtflow.symbol.CONSTRAINT_FIELDS:
        smtflow.report.create_row(key, columns[0])
        smtflow.report.create_row(getattr(design.constraints, key), columns[1])

    click.echo(smtflow.report.format_table(columns))


def _fetch_config(kwargs):
    """Return configuration mapping from command line *kwargs*."""
    logger = logging.getLogger(__name__ + "._fetch_config")

    if kwargs["config"] is None:
        return smtflow.config.fetch()

    config = smtflow.config.load(kwargs["config"])
    logger.debug("Configuration loaded from '{}'.".format(kwargs["config"]))
    return config


def _export_report(report, kwargs, result=None):
    """Export *report* files requested in command line *kwargs*."""
    logger = logging.getLogger(__name__ + "._export_report")

    paths = smtflow.report.emit_report(
        report,
        report_path=kwargs["report"],
        table_path=kwargs["table"],
        svg_path=kwargs.get("svg"),
        result=result,
        overwrite=kwargs["overwrite"]
    )

    for name, path in paths.items():
        logger.info("Exported {} in '{}'.".format(name, path))


def _handle_error(error):
    """Log and record *error* and return its exit code."""
    logger = logging.getLogger(__name__ + "._handle_error")
    logger.error(str(error))

    smtflow.history.record_action(
        smtflow.symbol.EXCEPTION_RAISE_ACTION, error=error
    )

    return error.exit_code


def _export_history_if_requested(click_context):
    """Export recorded history if a recording path is set."""
    logger = logging.getLogger(__name__ + "._export_history_if_requested")

    if click_context.obj["recording_path"] is None:
        return

    for stage, duration in smtflow.history.stage_durations().items():
        logger.debug("Stage '{}' took {:.3f}s".format(stage, duration))

    history = smtflow.history.get(serialized=True)
    path = os.path.join(
        os.path.abspath(click_context.obj["recording_path"]),
        "smtflow-{}.dump".format(datetime.datetime.now().isoformat())
    )
    smtflow.filesystem.export(path, history, compressed=True)
    logger.info("History recorded and exported in '{}'".format(path))
