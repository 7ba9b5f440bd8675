# :coding: utf-8

import heapq
import logging

import smtflow.exception
import smtflow.history
import smtflow.symbol
import smtflow.timing
import smtflow.utility


def initialize_low_vth(design):
    """Return copy of *design* where every logic cell is low threshold.

    :raise: :exc:`smtflow.exception.ContractError` if the design is not at
        the "input" or "all_low" stage.

    """
    if design.flow_stage not in {
        smtflow.symbol.STAGE_INPUT, smtflow.symbol.STAGE_ALL_LOW
    }:
        raise smtflow.exception.ContractError(
            "Impossible to initialize a design at stage '{}'.".format(
                design.flow_stage
            )
        )

    design = design.copy()

    for identifier in design.logic_cells():
        design.cells[identifier].variant = smtflow.symbol.LOW_VTH

    design.flow_stage = smtflow.symbol.STAGE_ALL_LOW
    return design


def candidates(design):
    """Return cells which can be replaced by high threshold cells.

    Cells are sorted by descending leakage saving, then by identifier.
    Registers, holders, switches and MTE buffers are never candidates.

    """
    results = []

    for identifier in design.logic_cells():
        kind = design.kind(identifier)
        if kind.function in smtflow.symbol.FIXED_FUNCTIONS:
            continue

        saving = (
            kind.parameters(smtflow.symbol.LOW_VTH).leak_standby
            - kind.parameters(smtflow.symbol.HIGH_VTH).leak_standby
        )
        if saving > 0:
            results.append((-saving, identifier))

    return [identifier for _, identifier in sorted(results)]


def assign_dual_vth(design, parasitics, bounce_budget=0.0, holder_aware=False):
    """Return copy of *design* with threshold variants assigned.

    Candidates are replaced by high threshold cells in the order given by
    :func:`candidates` whenever timing is still met. Remaining low threshold
    logic cells become MT-cells without VGND port.

    :param design: Instance of :class:`smtflow.design.Design` at the
        "all_low" stage.

    :param parasitics: Mapping of net identifier to
        :class:`~smtflow.timing.NetParasitics`.

    :param bounce_budget: Voltage bounce in V reserved for MT-cells while
        timing. Default is 0.

    :param holder_aware: Indicate whether nets driven by future MT-cells
        with a non MT sink are timed with the load of their output holder.
        Default is False.

    :raise: :exc:`smtflow.exception.ContractError` if the design is not at
        the "all_low" stage.

    :raise: :exc:`smtflow.exception.InfeasibleTiming` if the low threshold
        design does not meet timing.

    """
    design = _assign(design, parasitics, bounce_budget, holder_aware)

    for identifier in design.logic_cells():
        cell = design.cells[identifier]
        if (
            cell.variant == smtflow.symbol.LOW_VTH
            and design.function(identifier)
            not in smtflow.symbol.FIXED_FUNCTIONS
        ):
            cell.variant = smtflow.symbol.MT_NO_VGND

    return design


def dual_vth_only_mode(design, parasitics):
    """Return copy of *design* assigned with the Dual-Vth technique.

    Same greedy pass as :func:`assign_dual_vth` without bounce and holder
    loads, remaining cells stay low threshold.

    """
    return _assign(design, parasitics, 0.0, False)


def _assign(design, parasitics, bounce_budget, holder_aware):
    """Return copy of *design* after the greedy replacement pass."""
    logger = logging.getLogger(__name__ + "._assign")

    if design.flow_stage != smtflow.symbol.STAGE_ALL_LOW:
        raise smtflow.exception.ContractError(
            "Impossible to assign thresholds at stage '{}'.".format(
                design.flow_stage
            )
        )

    design = design.copy()
    projection = _Projection(
        design, parasitics, bounce=bounce_budget, holder_aware=holder_aware
    )

    if projection.worst_slack() < 0:
        raise smtflow.exception.InfeasibleTiming(
            "The low threshold design does not meet timing:",
            endpoints=projection.violations()
        )

    swapped = 0

    for identifier in candidates(design):
        cell = design.cells[identifier]
        cell.variant = smtflow.symbol.HIGH_VTH
        projection.update(identifier)

        if projection.worst_slack() >= 0:
            swapped += 1
            smtflow.history.record_action(
                smtflow.symbol.VTH_SWAP_ACTION, cell=identifier
            )
            continue

        cell.variant = smtflow.symbol.LOW_VTH
        projection.update(identifier)

    logger.debug(
        "{} cell(s) replaced by high threshold cells.".format(swapped)
    )

    design.flow_stage = smtflow.symbol.STAGE_ASSIGNED
    return design


def maximum_bounce(design, parasitics, steps=32, holder_aware=True):
    """Return largest bounce at which the all MT design meets timing.

    Every candidate of *design* is timed as an MT-cell and the bounce is
    searched by bisection in [0, v_dd].

    :param design: Instance of :class:`smtflow.design.Design` at the
        "all_low" stage.

    :param parasitics: Mapping of net identifier to
        :class:`~smtflow.timing.NetParasitics`.

    :param steps: Number of bisection steps. Default is 32.

    :param holder_aware: Indicate whether holder loads are projected.
        Default is True.

    :raise: :exc:`smtflow.exception.InfeasibleTiming` if timing is not met
        even without bounce.

    """
    def _slack(bounce):
        """Return worst slack when MT-cells see *bounce*."""
        return _Projection(
            design, parasitics, bounce=bounce, holder_aware=holder_aware
        )

    projection = _slack(0.0)
    if projection.worst_slack() < 0:
        raise smtflow.exception.InfeasibleTiming(
            "The MT design does not meet timing without bounce:",
            endpoints=projection.violations()
        )

    lower, upper = 0.0, design.constraints.v_dd
    if _slack(upper).worst_slack() >= 0:
        return upper

    for _ in range(steps):
        middle = (lower + upper) / 2.0
        if _slack(middle).worst_slack() >= 0:
            lower = middle
        else:
            upper = middle

    return lower


def bounce_limit(design, parasitics, steps=32, share=0.5):
    """Return voltage bounce limit used to size switches of *design*.

    The limit is ``min(v_bounce_max, share * b)`` where *b* is the
    :func:`maximum_bounce` of the design.

    :raise: :exc:`smtflow.exception.InfeasibleTiming` if no positive bounce
        can be afforded.

    """
    logger = logging.getLogger(__name__ + ".bounce_limit")

    maximum = maximum_bounce(design, parasitics, steps=steps)
    limit = min(design.constraints.v_bounce_max, share * maximum)

    if limit <= 0:
        raise smtflow.exception.InfeasibleTiming(
            "No voltage bounce can be afforded by MT-cells without missing "
            "timing."
        )

    logger.debug(
        "Bounce limit: {:.6g} V (timing allows {:.6g} V)".format(
            limit, maximum
        )
    )
    return limit


class _Projection(object):
    """Incremental max-delay timing of a design under threshold swaps.

    Low threshold candidates are timed as future MT-cells seeing *bounce*
    and, if *holder_aware*, loaded by the holder they will receive.

    """

    def __init__(self, design, parasitics, bounce=0.0, holder_aware=False):
        """Initialize from *design* which is referenced, not copied."""
        self._design = design
        self._parasitics = parasitics
        self._bounce = bounce
        self._holder_aware = holder_aware

        constraints = design.constraints
        self._t_clk = constraints.t_clk
        self._factor = 1.0 + constraints.k_bounce * bounce / constraints.v_dd

        self._holder_load = 0.0
        if holder_aware:
            kind = design.library.find(smtflow.symbol.HOLDER)
            self._holder_load = kind.parameters(smtflow.symbol.HIGH_VTH).c_in

        graph = smtflow.timing.timing_graph(design)
        self._order = smtflow.timing.topological_order(graph)
        self._index = {cell: index for index, cell in enumerate(self._order)}

        self._output = {
            cell: design.output_net(cell) for cell in self._order
        }
        self._inputs = {
            cell: design.input_nets(cell) for cell in self._order
        }
        self._register = {
            cell for cell in self._order
            if design.function(cell) == smtflow.symbol.DFF
        }
        self._fixed = {
            cell for cell in self._order
            if design.function(cell) in smtflow.symbol.FIXED_FUNCTIONS
        }
        self._fanout = {
            cell: sorted(graph.successors(cell)) for cell in self._order
        }
        self._fanin_drivers = {}
        for cell in self._order:
            drivers = set()
            for net in self._inputs[cell]:
                driver = design.driver(net)
                if driver is not None and driver.identifier in self._index:
                    drivers.add(driver.identifier)
            self._fanin_drivers[cell] = sorted(drivers)

        self._endpoint_nets = [
            (identifier, net)
            for identifier, net in smtflow.timing.endpoints(design)
        ]

        self._arrival = {}
        for port in design.ports.values():
            if port.direction == smtflow.symbol.INPUT:
                self._arrival[port.net] = 0

        self._delays = {}
        for cell in self._order:
            self._delays[cell] = self._delay(cell)
            self._arrival[self._output[cell]] = self._arrival_of(cell)

    def _is_future_mt(self, cell):
        """Indicate whether *cell* would become an MT-cell."""
        return (
            cell not in self._fixed
            and self._design.cells[cell].variant == smtflow.symbol.LOW_VTH
        )

    def _delay(self, cell):
        """Return projected delay of *cell*."""
        design = self._design
        instance = design.cells[cell]
        net = self._output[cell]

        if net not in self._parasitics:
            raise smtflow.exception.ContractError(
                "Net '{}' has no parasitics.".format(net)
            )

        future_mt = self._is_future_mt(cell)
        c_pins = smtflow.timing.pin_load(design, net)

        if self._holder_aware and future_mt and any(
            sink.is_port or not self._is_sink_mt(sink.identifier)
            for sink in design.sinks(net)
        ):
            c_pins += self._holder_load

        kind = design.library.get(instance.kind)
        parameters = kind.parameters(instance.variant)
        parasitics = self._parasitics[net]

        delay = (
            parameters.d0
            + parameters.r_drive * (parasitics.c_net + c_pins)
            + parasitics.r_net / 1000.0 * c_pins
        )

        if future_mt:
            delay *= self._factor

        return smtflow.utility.round_half_up(delay)

    def _is_sink_mt(self, cell):
        """Indicate whether sink *cell* is or would become an MT-cell."""
        if cell not in self._index:
            return False

        return (
            self._is_future_mt(cell)
            or self._design.cells[cell].variant
            in smtflow.symbol.MT_VARIANTS
        )

    def _arrival_of(self, cell):
        """Return latest arrival at the output of *cell*."""
        if cell in self._register:
            return self._delays[cell]

        return max(
            self._arrival[net] for net in self._inputs[cell]
        ) + self._delays[cell]

    def update(self, cell):
        """Update timing after the variant of *cell* changed.

        The delays of *cell* and of the drivers of its inputs are recomputed
        and arrival changes are propagated through the fan-out cone in
        topological order.

        """
        heap = []
        queued = set()

        for identifier in [cell] + self._fanin_drivers[cell]:
            delay = self._delay(identifier)
            if delay != self._delays[identifier]:
                self._delays[identifier] = delay
                if identifier not in queued:
                    queued.add(identifier)
                    heapq.heappush(heap, (self._index[identifier], identifier))

        while len(heap) > 0:
            _, identifier = heapq.heappop(heap)

            net = self._output[identifier]
            arrival = self._arrival_of(identifier)
            if arrival == self._arrival[net]:
                continue

            self._arrival[net] = arrival

            for sink in self._fanout[identifier]:
                if sink not in queued:
                    queued.add(sink)
                    heapq.heappush(heap, (self._index[sink], sink))

    def arrival(self, net):
        """Return latest arrival time projected on *net*."""
        return self._arrival[net]

    def worst_slack(self):
        """Return worst projected setup slack among endpoints."""
        return min(
            (
                self._t_clk - self._arrival[net]
                for _, net in self._endpoint_nets
            ),
            default=self._t_clk
        )

    def violations(self):
        """Return projected endpoints with negative slack, worst first."""
        results = []

        for identifier, net in self._endpoint_nets:
            slack = self._t_clk - self._arrival[net]
            if slack < 0:
                results.append(
                    smtflow.timing.Endpoint(
                        identifier, net, self._arrival[net], None,
                        self._t_clk, slack, None
                    )
                )

        return sorted(
            results, key=lambda endpoint: (endpoint.slack, endpoint.identifier)
        )
