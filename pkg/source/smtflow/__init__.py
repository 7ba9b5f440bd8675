# :coding: utf-8

import smtflow.config
import smtflow.design
import smtflow.flow
import smtflow.report
import smtflow.symbol
from ._version import __version__


def load_design(path, config=None, seed=None):
    """Return design loaded from *path* and configured from *config*.

    :param path: Path to a design file.

    :param config: Configuration mapping whose optional "constraints" table
        overrides constraints of the design. Default is None.

    :param seed: Seed overriding the design seed. Default is None.

    :return: Instance of :class:`smtflow.design.Design`.

    """
    design = smtflow.design.load(path)
    return smtflow.flow.configure_design(design, config=config, seed=seed)


def run(design, mode=smtflow.symbol.IMPROVED_MODE, config=None):
    """Run design flow of *mode* on *design* and return result and report.

    :param design: Instance of :class:`smtflow.design.Design`.

    :param mode: One of "dualvth", "conventional" or "improved". Default is
        "improved".

    :param config: Configuration mapping holding the "flow" settings.
        Default is the fetched configuration.

    :return: Tuple containing the :class:`smtflow.flow.FlowResult` and the
        :class:`smtflow.report.FlowReport`.

    """
    settings = smtflow.config.flow_settings(
        smtflow.config.fetch() if config is None else config
    )

    result = smtflow.flow.run_flow(design, mode=mode, settings=settings)
    report = smtflow.report.FlowReport(
        {mode: result},
        seed=design.constraints.seed,
        config_hash=smtflow.report.create_config_hash(
            design.constraints, settings
        )
    )
    return result, report


def compare(design, config=None):
    """Run every design flow on *design* and return results and report.

    :param design: Instance of :class:`smtflow.design.Design`.

    :param config: Configuration mapping holding the "flow" settings.
        Default is the fetched configuration.

    :return: Tuple containing the mapping of mode to
        :class:`smtflow.flow.FlowResult` and the
        :class:`smtflow.report.FlowReport`.

    """
    settings = smtflow.config.flow_settings(
        smtflow.config.fetch() if config is None else config
    )

    results = smtflow.flow.compare_modes(design, settings=settings)
    report = smtflow.report.FlowReport(
        results,
        seed=design.constraints.seed,
        config_hash=smtflow.report.create_config_hash(
            design.constraints, settings
        )
    )
    return results, report
