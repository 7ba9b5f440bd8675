# :coding: utf-8

import collections
import logging
import math

import smtflow.design
import smtflow.exception
import smtflow.history
import smtflow.interconnect
import smtflow.symbol
import smtflow.utility


#: Result of a switch sizing.
#:
#: *width* is in µm, *v_bounce* and *v_wire* in V, *i_eff* in mA,
#: *wire_resistance* in Ω (worst member path), *star_length* in µm and
#: *position* is the (x, y) switch location in integer nanometers.
SwitchSizing = collections.namedtuple(
    "SwitchSizing", [
        "width", "v_bounce", "i_eff", "v_wire", "wire_resistance",
        "star_length", "position"
    ]
)


def switch_bounce(i_eff, r0_switch, width, v_wire=0.0):
    """Return voltage bounce in V of a switch.

    :param i_eff: Effective discharge current in mA.

    :param r0_switch: Switch resistance-width product in Ω·µm.

    :param width: Switch width in µm.

    :param v_wire: Voltage drop of the worst VGND wire path in V. Default
        is 0.

    """
    return i_eff * (r0_switch / width) / 1000.0 + v_wire


def size_switch(
    design, members, limit=None, alpha=None, detour=1.0, center=None
):
    """Return minimum :class:`SwitchSizing` for *members* of *design*.

    The effective current is ``alpha * sum(i_peak)`` and the wire drop is
    caused by the largest member current flowing through the VGND wire of
    the farthest member. The width is the smallest width above ``w_min``
    keeping the bounce under *limit*::

        width = max(w_min, r0_switch * i_eff / (limit - v_wire))

    :param design: Instance of :class:`smtflow.design.Design`.

    :param members: Non empty list of MT-cell identifiers.

    :param limit: Voltage bounce limit in V. Default is the design
        ``v_bounce_max``.

    :param alpha: Simultaneous switching factor. Default is the design
        ``alpha``.

    :param detour: Routing detour factor applied to VGND wires. Default is
        1.0.

    :param center: (x, y) switch position in nanometers. Default is the
        centroid of *members*.

    :raise: :exc:`smtflow.exception.InfeasibleWire` if the wire drop alone
        reaches the limit.

    """
    constraints = design.constraints
    limit = constraints.v_bounce_max if limit is None else limit
    alpha = constraints.alpha if alpha is None else alpha

    positions = [design.cells[member].position for member in members]
    currents = [design.parameters(member).i_peak for member in members]

    if center is None:
        center = smtflow.utility.centroid(positions)

    farthest = max(
        smtflow.utility.manhattan(position, center) for position in positions
    )
    wire_resistance = (
        constraints.r_wire * smtflow.utility.to_micrometers(farthest) * detour
    )

    i_eff = alpha * sum(currents)
    v_wire = max(currents) * wire_resistance / 1000.0

    if v_wire >= limit:
        raise smtflow.exception.InfeasibleWire(v_wire, limit)

    width = max(
        constraints.w_min,
        constraints.r0_switch * i_eff / 1000.0 / (limit - v_wire)
    )

    # Floating point rounding can leave the closed form above the limit.
    while switch_bounce(i_eff, constraints.r0_switch, width, v_wire) > limit:
        width = math.nextafter(width, math.inf)

    return SwitchSizing(
        width=width,
        v_bounce=switch_bounce(i_eff, constraints.r0_switch, width, v_wire),
        i_eff=i_eff,
        v_wire=v_wire,
        wire_resistance=wire_resistance,
        star_length=smtflow.utility.to_micrometers(
            smtflow.utility.star_length(positions, center)
        ) * detour,
        position=center
    )


class SwitchCluster(object):
    """MT-cells sharing one switch transistor."""

    def __init__(self, identifier, members, sizing, detour=1.0):
        """Initialize cluster.

        :param identifier: Identifier of the switch instance.

        :param members: List of MT-cell identifiers.

        :param sizing: Instance of :class:`SwitchSizing`.

        :param detour: Routing detour factor of the VGND wires. Default is
            1.0.

        """
        self.identifier = identifier
        self.members = tuple(sorted(members))
        self.position = sizing.position
        self.width = sizing.width
        self.v_bounce = sizing.v_bounce
        self.v_wire = sizing.v_wire
        self.i_eff = sizing.i_eff
        self.wire_resistance = sizing.wire_resistance
        self.star_length = sizing.star_length
        self.detour = detour

    def __repr__(self):
        """Representing a cluster."""
        return "<SwitchCluster id='{}' members={} width={:.4g}>".format(
            self.identifier, len(self.members), self.width
        )

    def data(self):
        """Return ordered mapping of the cluster.

        Positions are given in micrometers.

        """
        return collections.OrderedDict([
            ("id", self.identifier),
            ("members", list(self.members)),
            ("position", [
                smtflow.utility.to_micrometers(self.position[0]),
                smtflow.utility.to_micrometers(self.position[1]),
            ]),
            ("width", self.width),
            ("v_bounce", self.v_bounce),
            ("v_wire", self.v_wire),
            ("i_eff", self.i_eff),
            ("wire_resistance", self.wire_resistance),
            ("star_length", self.star_length),
            ("detour", self.detour),
        ])


class SwitchStructure(object):
    """Partition of MT-cells into :class:`SwitchCluster` instances."""

    def __init__(self, clusters, stage, bounce_limit):
        """Initialize structure.

        :param clusters: List of :class:`SwitchCluster` instances.

        :param stage: One of "initial", "clustered" or "reoptimized".

        :param bounce_limit: Voltage bounce limit used for sizing in V.

        """
        self.clusters = list(clusters)
        self.stage = stage
        self.bounce_limit = bounce_limit

    def __repr__(self):
        """Representing a structure."""
        return "<SwitchStructure stage='{}' clusters={}>".format(
            self.stage, len(self.clusters)
        )

    def cluster_of(self, cell):
        """Return :class:`SwitchCluster` containing *cell* or None."""
        for cluster in self.clusters:
            if cell in cluster.members:
                return cluster
        return None

    def members(self):
        """Return sorted list of all clustered MT-cells."""
        return sorted(
            member for cluster in self.clusters for member in cluster.members
        )

    def bounce(self):
        """Return mapping of switch identifier to voltage bounce in V."""
        return {
            cluster.identifier: cluster.v_bounce for cluster in self.clusters
        }

    def total_width(self):
        """Return sum of switch widths in µm."""
        return sum(cluster.width for cluster in self.clusters)

    def data(self):
        """Return ordered mapping of the structure (the cluster dump)."""
        return collections.OrderedDict([
            ("format", smtflow.symbol.FORMAT_VERSION),
            ("stage", self.stage),
            ("bounce_limit", self.bounce_limit),
            ("clusters", [cluster.data() for cluster in self.clusters]),
        ])


def _is_mt(design, terminal):
    """Indicate whether sink *terminal* is an MT-cell input."""
    if terminal.is_port:
        return False

    return (
        design.cells[terminal.identifier].variant
        in smtflow.symbol.MT_VARIANTS
    )


def holder_required(design, net):
    """Indicate whether *net* requires an output holder.

    A holder is required when the net is driven by an MT-cell and at least
    one sink is not an MT-cell. Primary outputs count as non MT sinks and
    existing holders are ignored.

    """
    driver = design.driver(net)
    if driver is None or driver.is_port:
        return False

    if design.cells[driver.identifier].variant not in (
        smtflow.symbol.MT_VARIANTS
    ):
        return False

    for sink in design.sinks(net):
        if not sink.is_port and (
            design.function(sink.identifier) == smtflow.symbol.HOLDER
        ):
            continue

        if not _is_mt(design, sink):
            return True

    return False


def insert_holders(design):
    """Return copy of *design* with output holders inserted.

    Exactly one holder is attached to each net requiring one (see
    :func:`holder_required`). The holder is placed at the position of the
    driver of the net and its MTE pin is bound to the MTE net.

    :raise: :exc:`smtflow.exception.ContractError` if the design is not at
        the "assigned" stage, or if a holder is required in a design without
        MTE net.

    """
    logger = logging.getLogger(__name__ + ".insert_holders")

    if design.flow_stage != smtflow.symbol.STAGE_ASSIGNED:
        raise smtflow.exception.ContractError(
            "Impossible to insert holders at stage '{}'.".format(
                design.flow_stage
            )
        )

    design = design.copy()
    kind = design.library.find(smtflow.symbol.HOLDER)
    identifiers = design.fresh_identifiers("hold")

    nets = [net for net in sorted(design.nets) if holder_required(design, net)]

    if len(nets) > 0 and design.mte_net is None:
        raise smtflow.exception.ContractError(
            "Impossible to insert holders in a design without MTE net."
        )

    for net in nets:
        driver = design.driver(net)
        design.add_cell(
            smtflow.design.CellInstance(
                next(identifiers), kind.name, smtflow.symbol.HIGH_VTH,
                design.cells[driver.identifier].position,
                pins={
                    smtflow.symbol.HOLDER_PIN: net,
                    smtflow.symbol.MTE_PIN: design.mte_net
                }
            )
        )
        design.nets[net].holder = True

    logger.debug("{} holder(s) inserted.".format(len(nets)))
    return design


def apply_structure(design, structure, stage=None):
    """Return copy of *design* wired to *structure*.

    Existing switches are replaced by one switch per cluster, placed at the
    cluster position with its MTE pin bound to the MTE net, and every
    member is connected to its switch through the ``vgnd`` attribute.

    :param design: Instance of :class:`smtflow.design.Design`.

    :param structure: Instance of :class:`SwitchStructure`.

    :param stage: Flow stage of the returned design. Default is the stage of
        *design*.

    """
    design = design.copy()

    for identifier in design.cells_by_function(smtflow.symbol.SWITCH):
        design.remove_cell(identifier)

    if len(structure.clusters) > 0 and design.mte_net is None:
        raise smtflow.exception.ContractError(
            "Impossible to insert switches in a design without MTE net."
        )

    kind = design.library.find(smtflow.symbol.SWITCH)

    for cluster in structure.clusters:
        design.add_cell(
            smtflow.design.CellInstance(
                cluster.identifier, kind.name, smtflow.symbol.HIGH_VTH,
                cluster.position,
                pins={smtflow.symbol.MTE_PIN: design.mte_net},
                width=cluster.width
            )
        )

        for member in cluster.members:
            cell = design.cells[member]
            cell.variant = smtflow.symbol.MT_WITH_VGND
            cell.vgnd = cluster.identifier

    if stage is not None:
        design.flow_stage = stage

    return design


def insert_initial_switch(design, limit=None):
    """Return copy of *design* with one switch shared by every MT-cell.

    The switch is placed at the centroid of the MT-cells and sized with
    :func:`size_switch`. Wire length and member count limits are not
    enforced at this stage. When the wire drop alone exceeds the limit the
    switch gets the minimum width.

    :param design: Instance of :class:`smtflow.design.Design` at the
        "assigned" stage with holders inserted.

    :param limit: Voltage bounce limit in V. Default is the design
        ``v_bounce_max``.

    :return: Tuple containing the switched design and the initial
        :class:`SwitchStructure`.

    """
    logger = logging.getLogger(__name__ + ".insert_initial_switch")

    if design.flow_stage != smtflow.symbol.STAGE_ASSIGNED:
        raise smtflow.exception.ContractError(
            "Impossible to insert a switch at stage '{}'.".format(
                design.flow_stage
            )
        )

    constraints = design.constraints
    limit = constraints.v_bounce_max if limit is None else limit

    members = design.mt_cells()
    clusters = []

    if len(members) > 0:
        try:
            sizing = size_switch(design, members, limit=limit)

        except smtflow.exception.InfeasibleWire as error:
            logger.warning(
                "Initial switch cannot meet the bounce limit: {}".format(error)
            )
            i_eff = constraints.alpha * sum(
                design.parameters(member).i_peak for member in members
            )
            positions = [design.cells[member].position for member in members]
            center = smtflow.utility.centroid(positions)

            sizing = SwitchSizing(
                width=constraints.w_min,
                v_bounce=switch_bounce(
                    i_eff, constraints.r0_switch, constraints.w_min,
                    error.wire_bounce
                ),
                i_eff=i_eff,
                v_wire=error.wire_bounce,
                wire_resistance=constraints.r_wire * max(
                    smtflow.utility.to_micrometers(
                        smtflow.utility.manhattan(position, center)
                    )
                    for position in positions
                ),
                star_length=smtflow.utility.to_micrometers(
                    smtflow.utility.star_length(positions, center)
                ),
                position=center
            )

        clusters.append(SwitchCluster("sw1", members, sizing))

    structure = SwitchStructure(
        clusters, smtflow.symbol.STRUCTURE_INITIAL, limit
    )

    design = apply_structure(
        design, structure, stage=smtflow.symbol.STAGE_SWITCHED
    )
    return design, structure


def _feasible_sizing(design, members, limit, detour=1.0):
    """Return :class:`SwitchSizing` if *members* can share a switch.

    None is returned when a cluster limit (member count, VGND star length or
    wire drop) is exceeded.

    """
    constraints = design.constraints

    if len(members) > constraints.n_cells_max:
        return None

    try:
        sizing = size_switch(design, members, limit=limit, detour=detour)
    except smtflow.exception.InfeasibleWire:
        return None

    if sizing.star_length > constraints.l_vgnd_max:
        return None

    return sizing


def _identifier_index(identifier):
    """Return integer suffix of switch *identifier* or 0."""
    digits = identifier[len("sw"):]
    return int(digits) if digits.isdigit() else 0


def cluster_switches(design, structure, limit=None):
    """Return clustered :class:`SwitchStructure` from initial *structure*.

    MT-cells are visited in Morton order of their position (ties broken by
    identifier) and greedily appended to the current cluster while the
    member count, the VGND star length and the switch sizing remain within
    limits. Otherwise the cluster is closed and a new one is opened.

    :param design: Instance of :class:`smtflow.design.Design` containing
        the members of *structure*.

    :param structure: Instance of :class:`SwitchStructure` at the "initial"
        stage.

    :param limit: Voltage bounce limit in V. Default is the bounce limit of
        *structure*.

    :raise: :exc:`smtflow.exception.ContractError` if *structure* is not at
        the "initial" stage.

    :raise: :exc:`smtflow.exception.ClusteringError` if a cell cannot meet
        the limits even alone.

    """
    logger = logging.getLogger(__name__ + ".cluster_switches")

    if structure.stage != smtflow.symbol.STRUCTURE_INITIAL:
        raise smtflow.exception.ContractError(
            "Impossible to cluster a switch structure at stage '{}'.".format(
                structure.stage
            )
        )

    limit = structure.bounce_limit if limit is None else limit

    members = structure.members()
    order = smtflow.utility.morton_order(
        members, [design.cells[member].position for member in members],
        origin=design.die[:2]
    )

    clusters = []
    current, current_sizing = [], None

    def _close():
        """Append current cluster to the results."""
        identifier = "sw{}".format(len(clusters) + 1)
        clusters.append(SwitchCluster(identifier, current, current_sizing))

    for cell in order:
        sizing = _feasible_sizing(design, current + [cell], limit)
        if sizing is not None:
            current.append(cell)
            current_sizing = sizing
            continue

        if len(current) > 0:
            _close()

        sizing = _feasible_sizing(design, [cell], limit)
        if sizing is None:
            raise smtflow.exception.ClusteringError(
                "MT-cell '{}' cannot meet switch limits even alone.".format(
                    cell
                )
            )

        current, current_sizing = [cell], sizing

    if len(current) > 0:
        _close()

    logger.debug(
        "{} MT-cell(s) grouped into {} cluster(s).".format(
            len(members), len(clusters)
        )
    )

    return SwitchStructure(
        clusters, smtflow.symbol.STRUCTURE_CLUSTERED, limit
    )


def reoptimize_switches(design, structure, detour_max=0.25, limit=None):
    """Return re-optimized :class:`SwitchStructure` after routing.

    Each VGND star is routed with the detour factor derived from the design
    seed and the cluster identifier. Switches are resized against the routed
    wires, and a cluster exceeding a limit evicts its member farthest from
    the switch (ties broken by identifier) until it fits. Evicted members
    form a new cluster which is optimized the same way.

    :param design: Instance of :class:`smtflow.design.Design` at the
        "routed" stage.

    :param structure: Instance of :class:`SwitchStructure` at the
        "clustered" stage.

    :param detour_max: Maximum relative detour of VGND wires. Default is
        0.25.

    :param limit: Voltage bounce limit in V. Default is the bounce limit of
        *structure*.

    :raise: :exc:`smtflow.exception.ContractError` if *structure* or
        *design* is at the wrong stage.

    :raise: :exc:`smtflow.exception.ClusteringError` if a single cell cannot
        meet the limits.

    """
    logger = logging.getLogger(__name__ + ".reoptimize_switches")

    if structure.stage != smtflow.symbol.STRUCTURE_CLUSTERED:
        raise smtflow.exception.ContractError(
            "Impossible to re-optimize a switch structure at stage "
            "'{}'.".format(structure.stage)
        )

    if design.flow_stage != smtflow.symbol.STAGE_ROUTED:
        raise smtflow.exception.ContractError(
            "Impossible to re-optimize switches at stage '{}'.".format(
                design.flow_stage
            )
        )

    limit = structure.bounce_limit if limit is None else limit
    seed = design.constraints.seed

    queue = collections.deque(
        (cluster.identifier, list(cluster.members))
        for cluster in structure.clusters
    )
    index = max(
        [
            _identifier_index(cluster.identifier)
            for cluster in structure.clusters
        ] or [0]
    )

    clusters = []

    while len(queue) > 0:
        identifier, members = queue.popleft()
        detour = smtflow.interconnect.detour(
            seed, identifier, detour_max=detour_max
        )

        spill = []
        sizing = _feasible_sizing(design, members, limit, detour=detour)

        while sizing is None:
            if len(members) == 1:
                raise smtflow.exception.ClusteringError(
                    "MT-cell '{}' cannot meet switch limits even "
                    "alone.".format(members[0])
                )

            center = smtflow.utility.centroid(
                [design.cells[member].position for member in members]
            )
            farthest = min(
                members, key=lambda member: (
                    -smtflow.utility.manhattan(
                        design.cells[member].position, center
                    ),
                    member
                )
            )
            members.remove(farthest)
            spill.append(farthest)

            sizing = _feasible_sizing(design, members, limit, detour=detour)

        clusters.append(SwitchCluster(identifier, members, sizing, detour))

        if len(spill) > 0:
            index += 1
            split = "sw{}".format(index)
            queue.append((split, sorted(spill)))

            smtflow.history.record_action(
                smtflow.symbol.CLUSTER_SPLIT_ACTION,
                cluster=identifier, split=split, members=sorted(spill)
            )
            logger.debug(
                "Cluster '{}' split: {} member(s) moved to '{}'.".format(
                    identifier, len(spill), split
                )
            )

    return SwitchStructure(
        clusters, smtflow.symbol.STRUCTURE_REOPTIMIZED, limit
    )
