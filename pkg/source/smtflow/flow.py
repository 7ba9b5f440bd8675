# :coding: utf-8

import collections
import logging

import smtflow.assignment
import smtflow.config
import smtflow.design
import smtflow.exception
import smtflow.interconnect
import smtflow.logging
import smtflow.switch
import smtflow.symbol
import smtflow.timing
import smtflow.validator


#: Outcome of a flow run.
#:
#: *structure* is None in the Dual-Vth and conventional modes and
#: *bounce_limit* is None in the Dual-Vth mode. *bounce* maps switch (or
#: conventional MT-cell) identifiers to their voltage bounce in V and
#: *stages* lists the executed stage names in order.
FlowResult = collections.namedtuple(
    "FlowResult", [
        "mode", "design", "structure", "annotation", "parasitics", "bounce",
        "bounce_limit", "stages"
    ]
)

#: Flow stages at which routed parasitics are available.
POST_ROUTE_STAGES = {
    smtflow.symbol.STAGE_ROUTED,
    smtflow.symbol.STAGE_REOPTIMIZED,
    smtflow.symbol.STAGE_CONVENTIONAL,
}


def configure_design(design, config=None, seed=None):
    """Return copy of *design* with constraints overridden.

    :param design: Instance of :class:`smtflow.design.Design`.

    :param config: Configuration mapping whose optional "constraints" table
        overrides constraint fields. Default is None.

    :param seed: Seed overriding the design seed. Default is None.

    :raise: :exc:`smtflow.exception.ConfigError` if an overridden field is
        unknown or has an incorrect type.

    """
    overrides = dict((config or {}).get("constraints", {}))
    if seed is not None:
        overrides["seed"] = seed

    unknown = sorted(
        set(overrides.keys()).difference(smtflow.symbol.CONSTRAINT_FIELDS)
    )
    if len(unknown) > 0:
        raise smtflow.exception.ConfigError(
            "Unknown constraints: {}".format(", ".join(unknown))
        )

    for key, value in overrides.items():
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise smtflow.exception.ConfigError(
                "Constraint {!r} must be a number.".format(key)
            )

        if key in smtflow.symbol.INTEGER_CONSTRAINTS and (
            int(value) != value
        ):
            raise smtflow.exception.ConfigError(
                "Constraint {!r} must be an integer.".format(key)
            )

        if key in smtflow.symbol.INTEGER_CONSTRAINTS:
            overrides[key] = int(value)

    design = design.copy()
    design.constraints = design.constraints._replace(**overrides)
    return design


def conventional_smt_mode(design, limit=None):
    """Return copy of *design* built with conventional MT-cells.

    Every MT-cell is replaced by an MT-cell containing its own switch and
    output holder. The built-in switch is sized alone with a simultaneous
    switching factor of 1 and without VGND wire.

    :param design: Instance of :class:`smtflow.design.Design` at the
        "assigned" stage.

    :param limit: Voltage bounce limit in V. Default is the design
        ``v_bounce_max``.

    :return: Tuple containing the design and a mapping of MT-cell identifier
        to voltage bounce in V.

    :raise: :exc:`smtflow.exception.ContractError` if the design is not at
        the "assigned" stage or has MT-cells without MTE net.

    """
    if design.flow_stage != smtflow.symbol.STAGE_ASSIGNED:
        raise smtflow.exception.ContractError(
            "Impossible to build conventional MT-cells at stage '{}'.".format(
                design.flow_stage
            )
        )

    design = design.copy()
    members = design.mt_cells()

    if len(members) > 0 and design.mte_net is None:
        raise smtflow.exception.ContractError(
            "Impossible to build conventional MT-cells in a design without "
            "MTE net."
        )

    bounce = {}

    for identifier in members:
        sizing = smtflow.switch.size_switch(
            design, [identifier], limit=limit, alpha=1.0
        )

        cell = design.cells[identifier]
        cell.variant = smtflow.symbol.MT_BUILT_IN
        cell.width = sizing.width
        design.connect(identifier, smtflow.symbol.MTE_PIN, design.mte_net)

        bounce[identifier] = sizing.v_bounce

    design.flow_stage = smtflow.symbol.STAGE_CONVENTIONAL
    return design, bounce


def _endpoint_terminal(design, endpoint):
    """Return (identifier, pin) of the sink behind *endpoint*.

    The pin is None for primary outputs.

    """
    if endpoint.identifier.startswith(smtflow.symbol.PORT_PREFIX):
        return endpoint.identifier[len(smtflow.symbol.PORT_PREFIX):], None

    identifier, pin = endpoint.identifier.rsplit("/", 1)
    return identifier, pin


def eco_hold_fix(
    design, parasitics, bounce=None, iterations=100, detour_max=0.25
):
    """Return copy of *design* without hold violation.

    While an endpoint violates the hold constraint, a high threshold buffer
    is inserted in front of the worst violating endpoint (ties broken by
    identifier) and timing is analyzed again.

    :param design: Instance of :class:`smtflow.design.Design` at a post
        route stage.

    :param parasitics: Mapping of net identifier to post route
        :class:`~smtflow.timing.NetParasitics`.

    :param bounce: Mapping of switch identifier to voltage bounce in V.
        Default is None.

    :param iterations: Maximum number of inserted buffers. Default is 100.

    :param detour_max: Maximum relative detour used to extract new nets.
        Default is 0.25.

    :return: Tuple containing the design, the updated parasitics and the
        final :class:`~smtflow.timing.TimingAnnotation`.

    :raise: :exc:`smtflow.exception.ContractError` if the design is not
        routed.

    :raise: :exc:`smtflow.exception.HoldFixError` if violations remain after
        *iterations* buffers.

    """
    logger = logging.getLogger(__name__ + ".eco_hold_fix")

    if design.flow_stage not in POST_ROUTE_STAGES:
        raise smtflow.exception.ContractError(
            "Impossible to fix hold violations at stage '{}'.".format(
                design.flow_stage
            )
        )

    design = design.copy()
    parasitics = dict(parasitics)

    kind = design.library.find(smtflow.symbol.BUF)
    cells = design.fresh_identifiers("hbuf")
    nets = design.fresh_identifiers("hnet", namespace="net")
    inserted = 0

    while True:
        annotation = smtflow.timing.run_sta(design, parasitics, bounce=bounce)
        violations = annotation.hold_violations()
        if len(violations) == 0:
            break

        if inserted >= iterations:
            raise smtflow.exception.HoldFixError(violations)

        worst = violations[0]
        identifier, pin = _endpoint_terminal(design, worst)

        if pin is None:
            position = design.ports[identifier].position
        else:
            position = design.cells[identifier].position

        buffer, net = next(cells), next(nets)

        design.add_net(smtflow.design.Net(net))
        design.add_cell(
            smtflow.design.CellInstance(
                buffer, kind.name, smtflow.symbol.HIGH_VTH, position,
                pins={kind.inputs[0]: worst.net, kind.output: net}
            )
        )

        if pin is None:
            design.set_port_net(identifier, net)
        else:
            design.connect(identifier, pin, net)

        for _net in [worst.net, net]:
            parasitics[_net] = smtflow.interconnect.extract_rc_postroute(
                design, _net, detour_max=detour_max
            )

        inserted += 1
        logger.debug(
            "Buffer '{}' inserted before '{}' [hold slack: {} ps]".format(
                buffer, worst.identifier, worst.hold_slack
            )
        )

    if inserted > 0:
        logger.info("{} hold buffer(s) inserted.".format(inserted))

    return design, parasitics, annotation


def assign_thresholds(design, mode, settings):
    """Return assigned copy of *design* and bounce limit of *mode*.

    Thresholds are assigned with guard-banded pre-route parasitics. The
    selective MT modes also reserve the bounce budget and the holder loads
    while timing.

    A design which meets timing with plain pre-route parasitics but not
    with the guard band is assigned without guard band, bounce budget or
    holder loads. Its switches are then sized at ``v_bounce_max`` and the
    final timing analysis reports the resulting violations.

    :param design: Instance of :class:`smtflow.design.Design` at the
        "all_low" stage.

    :param mode: One of "dualvth", "conventional" or "improved".

    :param settings: Flow settings mapping as returned by
        :func:`smtflow.config.flow_settings`.

    :return: Tuple with the assigned design and the bounce limit in V, which
        is None in the Dual-Vth mode.

    :raise: :exc:`smtflow.exception.InfeasibleTiming` if the low threshold
        design misses timing with plain pre-route parasitics.

    """
    logger = logging.getLogger(__name__ + ".assign_thresholds")

    preroute = smtflow.interconnect.estimate_all(design)
    guarded = smtflow.interconnect.guard_band(
        preroute, detour_max=settings["detour_max"]
    )

    try:
        if mode == smtflow.symbol.DUAL_VTH_MODE:
            return (
                smtflow.assignment.dual_vth_only_mode(design, guarded), None
            )

        limit = smtflow.assignment.bounce_limit(
            design, guarded,
            steps=settings["bounce_search_steps"],
            share=settings["bounce_share"]
        )
        return smtflow.assignment.assign_dual_vth(
            design, guarded, bounce_budget=limit, holder_aware=True
        ), limit

    except smtflow.exception.InfeasibleTiming:
        annotation = smtflow.timing.run_sta(design, preroute)
        if annotation.worst_setup_slack < 0:
            raise

    logger.warning(
        "No timing margin left for routing and voltage bounce [slack: {} "
        "ps], thresholds are assigned without guard band.".format(
            annotation.worst_setup_slack
        )
    )

    if mode == smtflow.symbol.DUAL_VTH_MODE:
        return smtflow.assignment.dual_vth_only_mode(design, preroute), None

    return (
        smtflow.assignment.assign_dual_vth(design, preroute),
        design.constraints.v_bounce_max
    )


def run_flow(design, mode=smtflow.symbol.IMPROVED_MODE, settings=None):
    """Execute the design flow of *mode* on *design*.

    The flow validates the design, initializes every logic cell to low
    threshold and assigns threshold variants with
    :func:`assign_thresholds`. The selective MT modes then insert holders
    and switches (improved mode) or build conventional MT-cells, distribute
    MTE, route the design and fix hold violations before the final timing
    analysis.

    A final setup violation does not raise, use :func:`check_timing` on the
    result.

    :param design: Instance of :class:`smtflow.design.Design` at the
        "input" stage.

    :param mode: One of "dualvth", "conventional" or "improved". Default is
        "improved".

    :param settings: Flow settings mapping as returned by
        :func:`smtflow.config.flow_settings`. Default is None, which uses
        the default settings.

    :return: Instance of :class:`FlowResult`.

    :raise: :exc:`smtflow.exception.ValidationError` if the design is not
        valid.

    :raise: :exc:`smtflow.exception.InfeasibleTiming` if the low threshold
        design misses timing with plain pre-route parasitics.

    """
    logger = logging.getLogger(__name__ + ".run_flow")

    if mode not in smtflow.symbol.MODES:
        raise smtflow.exception.ContractError(
            "Unknown flow mode '{}'.".format(mode)
        )

    if settings is None:
        settings = smtflow.config.flow_settings({})

    detour_max = settings["detour_max"]
    stages = []
    structure = None
    limit = None
    bounce = {}

    logger.info(
        "Run {} flow.".format(smtflow.symbol.MODE_LABELS[mode])
    )

    with smtflow.logging.stage("validate", stages):
        diagnostics = smtflow.validator.validate(design)
        if len(diagnostics) > 0:
            raise smtflow.exception.ValidationError(diagnostics)

    with smtflow.logging.stage("initialize", stages):
        design = smtflow.assignment.initialize_low_vth(design)

    with smtflow.logging.stage("assign", stages):
        design, limit = assign_thresholds(design, mode, settings)

    if mode == smtflow.symbol.IMPROVED_MODE:
        with smtflow.logging.stage("holders", stages):
            design = smtflow.switch.insert_holders(design)

        with smtflow.logging.stage("initial_switch", stages):
            design, structure = smtflow.switch.insert_initial_switch(
                design, limit=limit
            )

        with smtflow.logging.stage("cluster", stages):
            structure = smtflow.switch.cluster_switches(design, structure)
            design = smtflow.switch.apply_structure(
                design, structure, stage=smtflow.symbol.STAGE_CLUSTERED
            )

        with smtflow.logging.stage("buffer_mte", stages):
            design = smtflow.interconnect.buffer_mte(design)

        with smtflow.logging.stage("route", stages):
            design.flow_stage = smtflow.symbol.STAGE_ROUTED
            parasitics = smtflow.interconnect.extract_all(
                design, detour_max=detour_max
            )

        with smtflow.logging.stage("reoptimize", stages):
            structure = smtflow.switch.reoptimize_switches(
                design, structure, detour_max=detour_max
            )
            design = smtflow.switch.apply_structure(design, structure)
            design = smtflow.interconnect.buffer_mte(design)
            design.flow_stage = smtflow.symbol.STAGE_REOPTIMIZED
            parasitics = smtflow.interconnect.extract_all(
                design, detour_max=detour_max
            )
            bounce = structure.bounce()

    elif mode == smtflow.symbol.CONVENTIONAL_MODE:
        with smtflow.logging.stage("conventional", stages):
            design, bounce = conventional_smt_mode(design, limit=limit)

        with smtflow.logging.stage("buffer_mte", stages):
            design = smtflow.interconnect.buffer_mte(design)

        with smtflow.logging.stage("route", stages):
            parasitics = smtflow.interconnect.extract_all(
                design, detour_max=detour_max
            )

    else:
        with smtflow.logging.stage("route", stages):
            design.flow_stage = smtflow.symbol.STAGE_ROUTED
            parasitics = smtflow.interconnect.extract_all(
                design, detour_max=detour_max
            )

    with smtflow.logging.stage("hold_fix", stages):
        design, parasitics, _ = eco_hold_fix(
            design, parasitics, bounce=bounce,
            iterations=settings["hold_fix_iterations"],
            detour_max=detour_max
        )

    with smtflow.logging.stage("sta", stages):
        if mode != smtflow.symbol.CONVENTIONAL_MODE:
            design.flow_stage = smtflow.symbol.STAGE_FINAL

        annotation = smtflow.timing.run_sta(design, parasitics, bounce=bounce)

        diagnostics = smtflow.validator.validate(design)
        if len(diagnostics) > 0:
            raise smtflow.exception.ContractError(
                "The flow produced an invalid design:\n{}".format(
                    "\n".join(str(diagnostic) for diagnostic in diagnostics)
                )
            )

    critical = smtflow.timing.critical_cells(
        design, annotation,
        margin=settings["critical_margin"] * design.constraints.t_clk
    )
    logger.info(
        "Worst setup slack: {} ps, worst hold slack: {} ps, {} critical "
        "cell(s).".format(
            annotation.worst_setup_slack, annotation.worst_hold_slack,
            len(critical)
        )
    )

    return FlowResult(
        mode=mode,
        design=design,
        structure=structure,
        annotation=annotation,
        parasitics=parasitics,
        bounce=bounce,
        bounce_limit=limit,
        stages=stages
    )


def check_timing(result):
    """Raise if the final timing of flow *result* is violated.

    :raise: :exc:`smtflow.exception.InfeasibleTiming` if an endpoint has a
        negative setup slack.

    """
    violations = result.annotation.setup_violations()
    if len(violations) > 0:
        raise smtflow.exception.InfeasibleTiming(
            "{} flow misses timing:".format(
                smtflow.symbol.MODE_LABELS[result.mode]
            ),
            endpoints=violations
        )


def compare_modes(design, settings=None, modes=None):
    """Return mapping of mode to :class:`FlowResult` for *design*.

    :param modes: List of modes to run. Default is every mode in the order
        "dualvth", "conventional", "improved".

    """
    return collections.OrderedDict(
        (mode, run_flow(design, mode=mode, settings=settings))
        for mode in modes or smtflow.symbol.MODES
    )
