# :coding: utf-8

import logging
import math

import smtflow.design
import smtflow.exception
import smtflow.symbol
import smtflow.timing
import smtflow.utility


def net_positions(design, net):
    """Return positions in nanometers of every terminal of *net*."""
    return [
        design.position(terminal)
        for terminal in design.drivers(net) + design.sinks(net)
    ]


def estimate_rc_preroute(design, net):
    """Return pre-route :class:`~smtflow.timing.NetParasitics` of *net*.

    The wire length is the half-perimeter of the bounding box of the net
    terminals, computed exactly in nanometers.

    Example::

        >>> estimate_rc_preroute(design, "n1").routed_length
        7.0

    """
    constraints = design.constraints
    length = smtflow.utility.to_micrometers(
        smtflow.utility.half_perimeter(net_positions(design, net))
    )

    return smtflow.timing.NetParasitics(
        r_net=constraints.r_wire * length,
        c_net=constraints.c_wire * length,
        routed_length=length,
        stage=smtflow.symbol.PRE_ROUTE
    )


def detour(seed, identifier, detour_max=0.25):
    """Return deterministic detour factor in [1, 1 + *detour_max*).

    :param seed: 64-bit seed of the design.

    :param identifier: Identifier of the routed entity (net or cluster).

    :param detour_max: Maximum relative detour. Default is 0.25.

    """
    return 1.0 + detour_max * smtflow.utility.unit_interval(seed, identifier)


def extract_rc_postroute(design, net, seed=None, detour_max=0.25):
    """Return post-route :class:`~smtflow.timing.NetParasitics` of *net*.

    Routing is simulated by scaling the half-perimeter wire length with a
    :func:`detour` factor derived from *seed* and the net identifier.

    :param design: Instance of :class:`smtflow.design.Design`.

    :param net: Net identifier.

    :param seed: 64-bit seed. Default is the seed of the design constraints.

    :param detour_max: Maximum relative detour. Default is 0.25.

    """
    constraints = design.constraints
    if seed is None:
        seed = constraints.seed

    length = smtflow.utility.to_micrometers(
        smtflow.utility.half_perimeter(net_positions(design, net))
    )
    length *= detour(seed, net, detour_max=detour_max)

    return smtflow.timing.NetParasitics(
        r_net=constraints.r_wire * length,
        c_net=constraints.c_wire * length,
        routed_length=length,
        stage=smtflow.symbol.POST_ROUTE
    )


def estimate_all(design):
    """Return mapping of every net to its pre-route parasitics."""
    return {
        net: estimate_rc_preroute(design, net) for net in sorted(design.nets)
    }


def extract_all(design, seed=None, detour_max=0.25):
    """Return mapping of every net to its post-route parasitics."""
    return {
        net: extract_rc_postroute(
            design, net, seed=seed, detour_max=detour_max
        )
        for net in sorted(design.nets)
    }


def guard_band(parasitics, detour_max=0.25):
    """Return *parasitics* scaled by the worst detour factor.

    The scaled values bound every post-route value extracted with the same
    *detour_max*.

    """
    factor = 1.0 + detour_max

    return {
        net: value._replace(
            r_net=value.r_net * factor,
            c_net=value.c_net * factor,
            routed_length=value.routed_length * factor,
        )
        for net, value in parasitics.items()
    }


def buffer_mte(design):
    """Return copy of *design* with a rebuilt MTE buffer tree.

    Existing MTE buffers are removed. Switches, holders and conventional
    MT-cells are then sorted in Morton order and chunked into groups of
    maximum fanout. One high threshold buffer is placed at the centroid of
    each group and the buffer level is recursively buffered until the MTE
    port drives at most the maximum fanout.

    :raise: :exc:`smtflow.exception.ContractError` if the design has no MTE
        net while MTE sinks exist, or if the maximum fanout is lower than 2.

    """
    logger = logging.getLogger(__name__ + ".buffer_mte")

    fanout = design.constraints.mte_max_fanout
    if fanout < 2:
        raise smtflow.exception.ContractError(
            "MTE maximum fanout must be at least 2 [{}].".format(fanout)
        )

    design = design.copy()

    for identifier in design.cells_by_function(smtflow.symbol.MTEBUF):
        net = design.output_net(identifier)
        design.remove_cell(identifier)

        if net is not None and net != design.mte_net and net in design.nets:
            design.remove_net(net)

    level = []

    for identifier in sorted(design.cells):
        cell = design.cells[identifier]
        function = design.function(identifier)

        if function in {smtflow.symbol.HOLDER, smtflow.symbol.SWITCH} or (
            cell.variant == smtflow.symbol.MT_BUILT_IN
        ):
            level.append((identifier, smtflow.symbol.MTE_PIN, cell.position))

    if len(level) == 0:
        return design

    if design.mte_net is None:
        raise smtflow.exception.ContractError(
            "Impossible to distribute MTE in a design without MTE net."
        )

    kind = design.library.find(smtflow.symbol.MTEBUF)
    identifiers = design.fresh_identifiers("mtebuf")
    origin = design.die[:2]
    depth = 0

    while len(level) > fanout:
        codes = smtflow.utility.morton_codes(
            [position for _, _, position in level], origin=origin
        )
        ordered = [entry for _, entry in sorted(zip(codes, level))]

        next_level = []

        for index in range(int(math.ceil(len(ordered) / float(fanout)))):
            group = ordered[index * fanout:(index + 1) * fanout]

            identifier = next(identifiers)
            net = "mte_{}".format(identifier)
            position = smtflow.utility.centroid(
                [_position for _, _, _position in group]
            )

            design.add_net(smtflow.design.Net(net))
            design.add_cell(
                smtflow.design.CellInstance(
                    identifier, kind.name, smtflow.symbol.HIGH_VTH, position,
                    pins={
                        kind.inputs[0]: design.mte_net,
                        kind.output: net
                    }
                )
            )

            for cell, pin, _ in group:
                design.connect(cell, pin, net)

            next_level.append((identifier, kind.inputs[0], position))

        level = next_level
        depth += 1

    for cell, pin, _ in level:
        design.connect(cell, pin, design.mte_net)

    logger.debug(
        "MTE tree built with {} level(s) of buffers.".format(depth)
    )

    return design
