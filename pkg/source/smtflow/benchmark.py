# :coding: utf-8

import logging
import math
import random

import smtflow.design
import smtflow.exception
import smtflow.interconnect
import smtflow.library
import smtflow.symbol
import smtflow.timing

#: Logic functions used by generated benchmarks.
GATES = [
    smtflow.symbol.INV,
    smtflow.symbol.NAND2,
    smtflow.symbol.NOR2,
    smtflow.symbol.AND2,
]

#: Horizontal distance between two layers in nanometers.
LAYER_PITCH = 6000

#: Vertical distance between two rows in nanometers.
ROW_PITCH = 2000

#: Identifier of the MTE port and net of generated benchmarks.
MTE_IDENTIFIER = "mte"

#: Probability to read a primary input from the second pin of a gate.
PRIMARY_INPUT_RATIO = 0.1

#: Maximum number of layers looked back for the second pin of a gate.
LOOKBACK = 3


def _check_parameters(n_cells, n_layers, seed, tightness):
    """Raise if benchmark parameters are incorrect."""
    for name, value in [("n_cells", n_cells), ("n_layers", n_layers)]:
        if isinstance(value, bool) or not isinstance(value, int) or value < 1:
            raise smtflow.exception.ContractError(
                "{!r} must be a positive integer [{!r}].".format(name, value)
            )

    if isinstance(seed, bool) or not isinstance(seed, int) or not (
        0 <= seed < 2 ** 64
    ):
        raise smtflow.exception.ContractError(
            "'seed' must be a 64-bit unsigned integer [{!r}].".format(seed)
        )

    if not 0 < tightness <= 1:
        raise smtflow.exception.ContractError(
            "'tightness' must be in (0, 1] [{!r}].".format(tightness)
        )


def _local(rng, nets, row, size, spread=1):
    """Return net from *nets* close to *row* of a layer of *size* rows."""
    center = row * len(nets) // size
    index = center + rng.randint(-spread, spread)
    return nets[min(len(nets) - 1, max(0, index))]


def generate_benchmark(n_cells, n_layers, seed=0, tightness=0.9, library=None):
    """Return generated benchmark :class:`~smtflow.design.Design`.

    The netlist is a layered random DAG of INV, NAND2, NOR2 and AND2 gates,
    all low threshold. The first pin of a gate reads a net of the previous
    layer from a nearby row while the second pin reads a net from one of
    the previous layers or a primary input. Unread gate outputs drive
    primary outputs. Cells are placed on a grid with one column per layer.

    The clock period is set to ``ceil(D / tightness)`` where *D* is the
    critical path delay of the design with pre-route parasitics.

    Example::

        >>> design = generate_benchmark(800, 20, seed=1, tightness=0.9)

    :param n_cells: Number of logic cells.

    :param n_layers: Number of logic layers. It is capped by *n_cells*.

    :param seed: 64-bit seed of the generator, also recorded as the design
        seed. Default is 0.

    :param tightness: Ratio in (0, 1] of critical path delay to clock
        period. Default is 0.9.

    :param library: Instance of :class:`smtflow.library.Library`. Default
        is the library shipped with the package.

    :raise: :exc:`smtflow.exception.ContractError` if a parameter is
        incorrect.

    """
    logger = logging.getLogger(__name__ + ".generate_benchmark")
    _check_parameters(n_cells, n_layers, seed, tightness)

    if library is None:
        library = smtflow.library.load()

    rng = random.Random(seed)
    n_layers = min(n_layers, n_cells)
    sizes = [
        n_cells // n_layers + (1 if index < n_cells % n_layers else 0)
        for index in range(n_layers)
    ]

    inputs = ["pi{}".format(index + 1) for index in range(max(2, sizes[0]))]

    layers = []
    records = []
    count = 0

    for layer, size in enumerate(sizes):
        nets = []

        for row in range(size):
            count += 1
            function = (
                smtflow.symbol.INV if n_cells == 1 else rng.choice(GATES)
            )
            kind = library.find(function)

            if layer == 0:
                sources = rng.sample(inputs, len(kind.inputs))

            else:
                sources = [_local(rng, layers[layer - 1], row, size)]

                if len(kind.inputs) > 1:
                    if rng.random() < PRIMARY_INPUT_RATIO:
                        source = rng.choice(inputs)
                    else:
                        back = rng.randint(1, min(LOOKBACK, layer))
                        source = _local(
                            rng, layers[layer - back], row, size, spread=2
                        )

                    if source == sources[0]:
                        source = rng.choice(inputs)

                    sources.append(source)

            net = "n{}".format(count)
            nets.append(net)
            records.append(
                ("u{}".format(count), kind, layer, row, sources, net)
            )

        layers.append(nets)

    read = set(
        source for record in records for source in record[4]
    )

    die = (
        0, 0,
        (n_layers + 1) * LAYER_PITCH,
        max(max(sizes), len(inputs)) * ROW_PITCH
    )

    ports = [
        smtflow.design.Port(
            MTE_IDENTIFIER, MTE_IDENTIFIER, smtflow.symbol.INPUT, (0, 0)
        )
    ]
    nets = [smtflow.design.Net(MTE_IDENTIFIER)]
    cells = []

    for index, identifier in enumerate(inputs):
        if identifier not in read:
            continue

        ports.append(
            smtflow.design.Port(
                identifier, identifier, smtflow.symbol.INPUT,
                (0, index * ROW_PITCH + ROW_PITCH // 2)
            )
        )
        nets.append(smtflow.design.Net(identifier))

    outputs = 0

    for identifier, kind, layer, row, sources, net in records:
        position = (
            (layer + 1) * LAYER_PITCH, row * ROW_PITCH + ROW_PITCH // 2
        )

        pins = dict(zip(kind.inputs, sources))
        pins[kind.output] = net

        cells.append(
            smtflow.design.CellInstance(
                identifier, kind.name, smtflow.symbol.LOW_VTH, position,
                pins=pins
            )
        )
        nets.append(smtflow.design.Net(net))

        if net not in read:
            outputs += 1
            ports.append(
                smtflow.design.Port(
                    "po{}".format(outputs), net, smtflow.symbol.OUTPUT,
                    (die[2], position[1])
                )
            )

    design = smtflow.design.Design(
        library,
        smtflow.design.DEFAULT_CONSTRAINTS._replace(seed=seed),
        die, ports=ports, cells=cells, nets=nets, mte_net=MTE_IDENTIFIER
    )

    annotation = smtflow.timing.run_sta(
        design, smtflow.interconnect.estimate_all(design)
    )
    delay = max(endpoint.arrival_max for endpoint in annotation.endpoints)

    design.constraints = design.constraints._replace(
        t_clk=max(1, int(math.ceil(delay / float(tightness))))
    )

    logger.debug(
        "Benchmark generated: {} cell(s), {} layer(s), critical path {} ps, "
        "clock period {} ps.".format(
            n_cells, n_layers, delay, design.constraints.t_clk
        )
    )

    return design
