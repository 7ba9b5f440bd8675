# :coding: utf-8

import collections
import math

import networkx

import smtflow.exception
import smtflow.symbol
import smtflow.utility


#: Parasitics of a net.
#:
#: *r_net* is in Ω, *c_net* in fF, *routed_length* in µm and *stage* is
#: either "pre_route" or "post_route".
NetParasitics = collections.namedtuple(
    "NetParasitics", ["r_net", "c_net", "routed_length", "stage"]
)

#: Load driven by a gate: input capacitance of the sink pins in fF and
#: :class:`NetParasitics` of the driven net.
Load = collections.namedtuple("Load", ["c_pins", "parasitics"])

#: Timing endpoint (primary output or register data input) in ps.
Endpoint = collections.namedtuple(
    "Endpoint", [
        "identifier", "net", "arrival_max", "arrival_min", "required",
        "slack", "hold_slack"
    ]
)

#: Parasitics of a net without wire.
ZERO_PARASITICS = NetParasitics(0.0, 0.0, 0.0, smtflow.symbol.PRE_ROUTE)


def gate_delay(kind, variant, load, v_bounce=0.0, k_bounce=2.0, v_dd=1.0):
    """Return delay in integer picoseconds of a gate driving *load*.

    The lumped delay is computed as::

        d = [d0 + r_drive * (c_net + c_pins) + r_net * c_pins] * m

    where *r_net* is converted to kΩ and *m* equals
    ``1 + k_bounce * v_bounce / v_dd`` for MT variants and 1 otherwise. The
    result is rounded half up.

    :param kind: Instance of :class:`smtflow.library.CellKind`.

    :param variant: Threshold variant of the gate.

    :param load: Instance of :class:`Load`.

    :param v_bounce: Voltage bounce of the virtual ground in V. Default is 0.

    :param k_bounce: Delay degradation coefficient. Default is 2.0.

    :param v_dd: Supply voltage in V. Default is 1.0.

    :raise: :exc:`smtflow.exception.CharacterizationError` if *variant* is
        not characterized for *kind*.

    :raise: :exc:`smtflow.exception.ContractError` if *v_bounce* is
        negative.

    """
    if v_bounce < 0:
        raise smtflow.exception.ContractError(
            "Voltage bounce must be positive [{}].".format(v_bounce)
        )

    parameters = kind.parameters(variant)
    parasitics = load.parasitics

    delay = (
        parameters.d0
        + parameters.r_drive * (parasitics.c_net + load.c_pins)
        + parasitics.r_net / 1000.0 * load.c_pins
    )

    if variant in smtflow.symbol.MT_VARIANTS:
        delay *= 1.0 + k_bounce * v_bounce / v_dd

    return smtflow.utility.round_half_up(delay)


def pin_load(design, net):
    """Return sum of input capacitance of cell pins sinking *net* in fF."""
    total = 0.0

    for sink in design.sinks(net):
        if sink.is_port:
            continue

        cell = design.cells[sink.identifier]
        kind = design.library.get(cell.kind)
        if kind.function == smtflow.symbol.SWITCH:
            continue

        total += kind.parameters(cell.variant).c_in

    return total


def cell_bounce(cell, bounce):
    """Return voltage bounce seen by *cell* from *bounce* mapping.

    MT-cells connected to a shared switch are looked up by switch
    identifier, conventional MT-cells by their own identifier.

    """
    if cell.variant == smtflow.symbol.MT_WITH_VGND:
        return bounce.get(cell.vgnd, 0.0)

    if cell.variant == smtflow.symbol.MT_BUILT_IN:
        return bounce.get(cell.identifier, 0.0)

    return 0.0


def timing_graph(design):
    """Return :class:`networkx.DiGraph` of timed cells.

    Edges link the driver of a net to its sinks. Register inputs are not
    linked as a register output does not depend on its data input.

    """
    graph = networkx.DiGraph()
    mte_nets = design.mte_tree_nets()

    cells = design.logic_cells()
    graph.add_nodes_from(cells)

    for identifier in cells:
        net = design.output_net(identifier)
        if net is None or net in mte_nets:
            continue

        for sink in design.sinks(net):
            if sink.is_port or sink.identifier not in graph:
                continue

            if design.function(sink.identifier) == smtflow.symbol.DFF:
                continue

            graph.add_edge(identifier, sink.identifier)

    return graph


def topological_order(graph):
    """Return deterministic topological order of *graph* nodes.

    :raise: :exc:`smtflow.exception.ContractError` if the graph has a
        cycle.

    """
    try:
        return list(networkx.lexicographical_topological_sort(graph))
    except networkx.NetworkXUnfeasible:
        raise smtflow.exception.ContractError(
            "Impossible to time a design with combinational cycles."
        )


def endpoints(design):
    """Return sorted list of (identifier, net) timing endpoints.

    Endpoints are primary outputs and register data inputs.

    """
    mte_nets = design.mte_tree_nets()
    results = []

    for identifier in sorted(design.ports):
        port = design.ports[identifier]
        if port.direction == smtflow.symbol.OUTPUT and (
            port.net not in mte_nets
        ):
            results.append((port.terminal.identifier, port.net))

    for identifier in design.cells_by_function(smtflow.symbol.DFF):
        kind = design.kind(identifier)
        for pin in kind.inputs:
            net = design.cells[identifier].pins.get(pin)
            if net is not None:
                results.append(("{}/{}".format(identifier, pin), net))

    return sorted(results)


class TimingAnnotation(object):
    """Result of a static timing analysis.

    Arrival, required times and slacks are keyed by net identifier, each net
    having a single driver.

    """

    def __init__(
        self, t_clk, delays, arrival_max, arrival_min, required, endpoints
    ):
        """Initialize annotation.

        :param t_clk: Clock period in ps.

        :param delays: Mapping of cell identifier to gate delay in ps.

        :param arrival_max: Mapping of net identifier to latest arrival.

        :param arrival_min: Mapping of net identifier to earliest arrival.

        :param required: Mapping of net identifier to required time.

        :param endpoints: Sorted list of :class:`Endpoint` instances.

        """
        self.t_clk = t_clk
        self.delays = delays
        self.arrival_max = arrival_max
        self.arrival_min = arrival_min
        self.required = required
        self.endpoints = endpoints

        self.slack = {
            net: required[net] - arrival_max[net]
            for net in arrival_max if net in required
        }

    def __repr__(self):
        """Representing an annotation."""
        return "<TimingAnnotation setup={} hold={}>".format(
            self.worst_setup_slack, self.worst_hold_slack
        )

    @property
    def worst_setup_slack(self):
        """Return worst setup slack in ps among endpoints.

        A design without endpoint returns the clock period.

        """
        return min(
            (endpoint.slack for endpoint in self.endpoints),
            default=self.t_clk
        )

    @property
    def worst_hold_slack(self):
        """Return worst hold slack in ps among endpoints."""
        return min(
            (endpoint.hold_slack for endpoint in self.endpoints),
            default=self.t_clk
        )

    def setup_violations(self):
        """Return endpoints with negative setup slack, worst first."""
        return sorted(
            (endpoint for endpoint in self.endpoints if endpoint.slack < 0),
            key=lambda endpoint: (endpoint.slack, endpoint.identifier)
        )

    def hold_violations(self):
        """Return endpoints with negative hold slack, worst first."""
        return sorted(
            (
                endpoint for endpoint in self.endpoints
                if endpoint.hold_slack < 0
            ),
            key=lambda endpoint: (endpoint.hold_slack, endpoint.identifier)
        )


def run_sta(design, parasitics, bounce=None):
    """Return :class:`TimingAnnotation` of *design*.

    Arrival times are propagated in topological order from primary inputs
    and register outputs (launched at t=0) to primary outputs and register
    inputs where the required time is the clock period.

    :param design: Valid instance of :class:`smtflow.design.Design`.

    :param parasitics: Mapping of net identifier to :class:`NetParasitics`.

    :param bounce: Mapping of switch identifier (or conventional MT-cell
        identifier) to voltage bounce in V. Default is None, which means
        that MT-cells have no bounce.

    :raise: :exc:`smtflow.exception.ContractError` if a net misses
        parasitics or if the design has a combinational cycle.

    """
    constraints = design.constraints
    bounce = bounce or {}

    graph = timing_graph(design)
    order = topological_order(graph)

    delays = {}
    arrival_max = {}
    arrival_min = {}

    for port in design.ports.values():
        if port.direction == smtflow.symbol.INPUT:
            arrival_max[port.net] = 0
            arrival_min[port.net] = 0

    for identifier in order:
        cell = design.cells[identifier]
        kind = design.library.get(cell.kind)
        net = design.output_net(identifier)

        if net not in parasitics:
            raise smtflow.exception.ContractError(
                "Net '{}' has no parasitics.".format(net)
            )

        delay = gate_delay(
            kind, cell.variant, Load(pin_load(design, net), parasitics[net]),
            v_bounce=cell_bounce(cell, bounce),
            k_bounce=constraints.k_bounce,
            v_dd=constraints.v_dd
        )
        delays[identifier] = delay

        if kind.function == smtflow.symbol.DFF:
            arrival_max[net] = delay
            arrival_min[net] = delay
            continue

        inputs = design.input_nets(identifier)
        arrival_max[net] = max(arrival_max[_net] for _net in inputs) + delay
        arrival_min[net] = min(arrival_min[_net] for _net in inputs) + delay

    required = {}
    endpoint_nets = set(net for _, net in endpoints(design))

    def _required(_net):
        """Return required time of *_net* from its sinks."""
        value = constraints.t_clk if _net in endpoint_nets else math.inf

        for sink in design.sinks(_net):
            if sink.is_port or sink.identifier not in graph:
                continue

            if design.function(sink.identifier) == smtflow.symbol.DFF:
                continue

            output = design.output_net(sink.identifier)
            value = min(value, required[output] - delays[sink.identifier])

        return value

    for identifier in reversed(order):
        net = design.output_net(identifier)
        required[net] = _required(net)

    for port in design.ports.values():
        if port.direction == smtflow.symbol.INPUT and (
            port.net not in required
        ):
            required[port.net] = _required(port.net)

    results = []
    for identifier, net in endpoints(design):
        results.append(
            Endpoint(
                identifier, net,
                arrival_max[net],
                arrival_min[net],
                constraints.t_clk,
                constraints.t_clk - arrival_max[net],
                arrival_min[net] - constraints.hold_min,
            )
        )

    return TimingAnnotation(
        constraints.t_clk, delays, arrival_max, arrival_min, required, results
    )


def critical_cells(design, annotation, margin=None):
    """Return set of cells lying on a path whose slack is below *margin*.

    The slack of the output net of a cell is the slack of the worst path
    through the cell, so a cell is critical when this slack is below
    *margin*.

    :param design: Instance of :class:`smtflow.design.Design`.

    :param annotation: Instance of :class:`TimingAnnotation` computed on
        *design*.

    :param margin: Criticality margin in ps. Default is 5% of the clock
        period.

    """
    if margin is None:
        margin = 0.05 * design.constraints.t_clk

    results = set()

    for identifier in annotation.delays:
        net = design.output_net(identifier)
        if annotation.slack.get(net, math.inf) < margin:
            results.add(identifier)

    return results
