# :coding: utf-8

import collections
import json
import logging

import ujson

import smtflow.exception
import smtflow.filesystem
import smtflow.library
import smtflow.symbol
import smtflow.utility
import smtflow.validator


#: Timing, electrical and physical constraints of a design.
#:
#: Units are ps (t_clk, hold_min), V (v_dd, v_bounce_max), µm (l_vgnd_max,
#: w_min), Ω·µm (r0_switch), nA/µm (l_sw), µm²/µm (a_sw), Ω/µm (r_wire) and
#: fF/µm (c_wire).
Constraints = collections.namedtuple(
    "Constraints", smtflow.symbol.CONSTRAINT_FIELDS
)

#: Default constraints used when a field is omitted.
DEFAULT_CONSTRAINTS = Constraints(
    t_clk=1000,
    hold_min=0,
    v_dd=1.0,
    v_bounce_max=0.05,
    l_vgnd_max=100.0,
    n_cells_max=16,
    alpha=0.5,
    k_bounce=2.0,
    r0_switch=2000.0,
    l_sw=0.5,
    a_sw=0.15,
    w_min=0.2,
    r_wire=0.2,
    c_wire=0.1,
    mte_max_fanout=16,
    seed=0,
)


class Terminal(collections.namedtuple("Terminal", ["identifier", "pin"])):
    """Pin of a cell instance, or primary port when *pin* is None."""

    __slots__ = ()

    def __str__(self):
        """Return human readable representation."""
        if self.pin is None:
            return self.identifier
        return "{}/{}".format(self.identifier, self.pin)

    @property
    def is_port(self):
        """Indicate whether the terminal is a primary port."""
        return self.pin is None


class Port(
    collections.namedtuple(
        "Port", ["identifier", "net", "direction", "position"]
    )
):
    """Primary input or output placed at *position* in nanometers."""

    __slots__ = ()

    @property
    def terminal(self):
        """Return :class:`Terminal` of the port."""
        return Terminal(smtflow.symbol.PORT_PREFIX + self.identifier, None)

    def data(self):
        """Return ordered mapping of the port."""
        return collections.OrderedDict([
            ("id", self.identifier),
            ("net", self.net),
            ("direction", self.direction),
            ("x", smtflow.utility.to_micrometers(self.position[0])),
            ("y", smtflow.utility.to_micrometers(self.position[1])),
        ])


class CellInstance(object):
    """Placed cell instance."""

    __slots__ = (
        "identifier", "kind", "variant", "position", "pins", "vgnd", "width"
    )

    def __init__(
        self, identifier, kind, variant, position, pins=None, vgnd=None,
        width=None
    ):
        """Initialize cell instance.

        :param identifier: Unique cell identifier.

        :param kind: Name of the :class:`~smtflow.library.CellKind`.

        :param variant: Threshold variant (e.g. "high_vth").

        :param position: (x, y) center in integer nanometers.

        :param pins: Mapping of pin name to net identifier. Default is None.

        :param vgnd: Identifier of the switch cell an MT-cell is connected to.
            Default is None.

        :param width: Switch width in µm for switch cells and conventional
            MT-cells. Default is None.

        """
        self.identifier = identifier
        self.kind = kind
        self.variant = variant
        self.position = tuple(position)
        self.pins = dict(pins or {})
        self.vgnd = vgnd
        self.width = width

    def __repr__(self):
        """Representing a cell instance."""
        return "<CellInstance id='{}' kind='{}' variant='{}'>".format(
            self.identifier, self.kind, self.variant
        )

    def copy(self):
        """Return copy of the instance."""
        return CellInstance(
            self.identifier, self.kind, self.variant, self.position,
            pins=self.pins, vgnd=self.vgnd, width=self.width
        )

    def data(self):
        """Return ordered mapping of the instance."""
        data = collections.OrderedDict([
            ("id", self.identifier),
            ("kind", self.kind),
            ("variant", self.variant),
            ("x", smtflow.utility.to_micrometers(self.position[0])),
            ("y", smtflow.utility.to_micrometers(self.position[1])),
            ("pins", collections.OrderedDict(sorted(self.pins.items()))),
        ])

        if self.vgnd is not None:
            data["vgnd"] = self.vgnd

        if self.width is not None:
            data["width"] = self.width

        return data


class Net(object):
    """Net of a design.

    Driver and sinks are derived from the pin bindings of the design.

    """

    __slots__ = ("identifier", "holder")

    def __init__(self, identifier, holder=False):
        """Initialize net *identifier* with *holder* flag."""
        self.identifier = identifier
        self.holder = holder

    def __repr__(self):
        """Representing a net."""
        return "<Net id='{}' holder={}>".format(self.identifier, self.holder)

    def data(self):
        """Return ordered mapping of the net."""
        data = collections.OrderedDict([("id", self.identifier)])
        if self.holder:
            data["holder"] = True
        return data


class Design(object):
    """Placed gate-level netlist with its library and constraints."""

    def __init__(
        self, library, constraints, die, ports=None, cells=None, nets=None,
        mte_net=None, flow_stage=smtflow.symbol.STAGE_INPUT
    ):
        """Initialize design.

        :param library: Instance of :class:`smtflow.library.Library`.

        :param constraints: Instance of :class:`Constraints`.

        :param die: (x_min, y_min, x_max, y_max) bounding box in integer
            nanometers.

        :param ports: List of :class:`Port` instances. Default is None.

        :param cells: List of :class:`CellInstance` instances. Default is
            None.

        :param nets: List of :class:`Net` instances. Default is None.

        :param mte_net: Identifier of the MTE control net. Default is None.

        :param flow_stage: Flow stage tag. Default is "input".

        :raise: :exc:`smtflow.exception.DuplicateIdentifier` if an identifier
            is declared several times.

        """
        self._library = library
        self._constraints = constraints
        self._die = tuple(die)
        self._ports = {}
        self._cells = {}
        self._nets = {}
        self._mte_net = mte_net
        self.flow_stage = flow_stage

        # Connectivity index which is invalidated by netlist changes.
        self._connections = None

        for net in nets or []:
            self.add_net(net)

        for port in ports or []:
            self.add_port(port)

        for cell in cells or []:
            self.add_cell(cell)

    def __repr__(self):
        """Representing a design."""
        return "<Design stage='{}' cells={} nets={}>".format(
            self.flow_stage, len(self._cells), len(self._nets)
        )

    def __eq__(self, other):
        """Compare structurally with *other*."""
        return isinstance(other, Design) and self.data() == other.data()

    def __ne__(self, other):
        """Compare structurally with *other*."""
        return not self.__eq__(other)

    @property
    def library(self):
        """Return :class:`smtflow.library.Library` instance."""
        return self._library

    @property
    def constraints(self):
        """Return :class:`Constraints` instance."""
        return self._constraints

    @constraints.setter
    def constraints(self, value):
        """Set :class:`Constraints` instance."""
        self._constraints = value

    @property
    def die(self):
        """Return (x_min, y_min, x_max, y_max) in integer nanometers."""
        return self._die

    @property
    def mte_net(self):
        """Return identifier of the MTE control net or None."""
        return self._mte_net

    @property
    def ports(self):
        """Return mapping of port identifier to :class:`Port`."""
        return self._ports

    @property
    def cells(self):
        """Return mapping of cell identifier to :class:`CellInstance`."""
        return self._cells

    @property
    def nets(self):
        """Return mapping of net identifier to :class:`Net`."""
        return self._nets

    def add_port(self, port):
        """Add :class:`Port` instance."""
        if port.identifier in self._ports:
            raise smtflow.exception.DuplicateIdentifier(
                "port", port.identifier
            )

        self._ports[port.identifier] = port
        self._connections = None

    def set_port_net(self, identifier, net):
        """Bind port *identifier* to *net*."""
        self._ports[identifier] = self._ports[identifier]._replace(net=net)
        self._connections = None

    def add_cell(self, cell):
        """Add :class:`CellInstance` instance."""
        if cell.identifier in self._cells:
            raise smtflow.exception.DuplicateIdentifier(
                "cell", cell.identifier
            )

        self._cells[cell.identifier] = cell
        self._connections = None

    def remove_cell(self, identifier):
        """Remove cell *identifier*."""
        del self._cells[identifier]
        self._connections = None

    def add_net(self, net):
        """Add :class:`Net` instance."""
        if net.identifier in self._nets:
            raise smtflow.exception.DuplicateIdentifier("net", net.identifier)

        self._nets[net.identifier] = net
        self._connections = None

    def remove_net(self, identifier):
        """Remove net *identifier*."""
        del self._nets[identifier]
        self._connections = None

    def connect(self, cell, pin, net):
        """Bind *pin* of *cell* identifier to *net* identifier."""
        self._cells[cell].pins[pin] = net
        self._connections = None

    def fresh_identifiers(self, prefix, namespace="cell"):
        """Yield unused identifiers starting with *prefix*.

        :param prefix: Identifier prefix (e.g. "sw").

        :param namespace: Either "cell" or "net". Default is "cell".

        Example::

            >>> identifiers = design.fresh_identifiers("sw")
            >>> next(identifiers)
            "sw1"

        """
        existing = self._cells if namespace == "cell" else self._nets

        index = 1
        while True:
            identifier = "{}{}".format(prefix, index)
            if identifier not in existing:
                yield identifier
            index += 1

    def kind(self, cell):
        """Return :class:`~smtflow.library.CellKind` of *cell* identifier."""
        return self._library.get(self._cells[cell].kind)

    def function(self, cell):
        """Return function tag of *cell* identifier."""
        return self.kind(cell).function

    def parameters(self, cell):
        """Return :class:`~smtflow.library.Parameters` of *cell*."""
        instance = self._cells[cell]
        return self._library.get(instance.kind).parameters(instance.variant)

    def drivers(self, net):
        """Return sorted list of :class:`Terminal` driving *net*."""
        return self._connectivity().get(net, ([], []))[0]

    def driver(self, net):
        """Return :class:`Terminal` driving *net* or None."""
        drivers = self.drivers(net)
        return drivers[0] if len(drivers) > 0 else None

    def sinks(self, net):
        """Return sorted list of :class:`Terminal` sinking *net*."""
        return self._connectivity().get(net, ([], []))[1]

    def output_net(self, cell):
        """Return net driven by *cell* identifier or None."""
        output = self.kind(cell).output
        if output is None:
            return None
        return self._cells[cell].pins.get(output)

    def input_nets(self, cell):
        """Return list of nets bound to the logic inputs of *cell*."""
        instance = self._cells[cell]
        return [
            instance.pins[pin] for pin in self.kind(cell).inputs
            if pin != smtflow.symbol.MTE_PIN and pin in instance.pins
        ]

    def position(self, terminal):
        """Return (x, y) position of *terminal* in nanometers."""
        if terminal.is_port:
            identifier = terminal.identifier[
                len(smtflow.symbol.PORT_PREFIX):
            ]
            return self._ports[identifier].position
        return self._cells[terminal.identifier].position

    def cells_by_function(self, *functions):
        """Return sorted identifiers of cells implementing *functions*."""
        return sorted(
            identifier for identifier, cell in self._cells.items()
            if self._library.get(cell.kind).function in functions
        )

    def logic_cells(self):
        """Return sorted identifiers of logic cells."""
        return self.cells_by_function(*smtflow.symbol.LOGIC_FUNCTIONS)

    def mt_cells(self):
        """Return sorted identifiers of MT-cells."""
        return sorted(
            identifier for identifier, cell in self._cells.items()
            if cell.variant in smtflow.symbol.MT_VARIANTS
        )

    def mte_tree_nets(self):
        """Return set of nets distributing the MTE control signal."""
        if self._mte_net is None:
            return set()

        nets = {self._mte_net}
        for identifier in self.cells_by_function(smtflow.symbol.MTEBUF):
            net = self.output_net(identifier)
            if net is not None:
                nets.add(net)

        return nets

    def copy(self):
        """Return copy of the design.

        The library is shared as it is never mutated.

        """
        return Design(
            self._library, self._constraints, self._die,
            ports=list(self._ports.values()),
            cells=[cell.copy() for cell in self._cells.values()],
            nets=[
                Net(net.identifier, holder=net.holder)
                for net in self._nets.values()
            ],
            mte_net=self._mte_net,
            flow_stage=self.flow_stage
        )

    def data(self):
        """Return canonical ordered mapping of the design.

        Entities are sorted by identifier so that the mapping only depends on
        the design structure.

        """
        return collections.OrderedDict([
            ("format", smtflow.symbol.FORMAT_VERSION),
            ("flow_stage", self.flow_stage),
            ("library", self._library.data()),
            ("constraints", collections.OrderedDict(
                (key, getattr(self._constraints, key))
                for key in smtflow.symbol.CONSTRAINT_FIELDS
            )),
            ("die", collections.OrderedDict([
                ("x_min", smtflow.utility.to_micrometers(self._die[0])),
                ("y_min", smtflow.utility.to_micrometers(self._die[1])),
                ("x_max", smtflow.utility.to_micrometers(self._die[2])),
                ("y_max", smtflow.utility.to_micrometers(self._die[3])),
            ])),
            ("ports", [
                self._ports[key].data() for key in sorted(self._ports)
            ]),
            ("cells", [
                self._cells[key].data() for key in sorted(self._cells)
            ]),
            ("nets", [
                self._nets[key].data() for key in sorted(self._nets)
            ]),
            ("mte_net", self._mte_net),
        ])

    def _connectivity(self):
        """Return mapping of net identifier to (drivers, sinks) lists."""
        if self._connections is not None:
            return self._connections

        connections = {net: ([], []) for net in self._nets}

        for port in self._ports.values():
            entry = connections.setdefault(port.net, ([], []))
            if port.direction == smtflow.symbol.INPUT:
                entry[0].append(port.terminal)
            else:
                entry[1].append(port.terminal)

        for cell in self._cells.values():
            kind = self._library.get(cell.kind)
            for pin, net in cell.pins.items():
                entry = connections.setdefault(net, ([], []))
                if pin == kind.output:
                    entry[0].append(Terminal(cell.identifier, pin))
                else:
                    entry[1].append(Terminal(cell.identifier, pin))

        for drivers, sinks in connections.values():
            drivers.sort(key=_terminal_key)
            sinks.sort(key=_terminal_key)

        self._connections = connections
        return connections


def _terminal_key(terminal):
    """Return sorting key for *terminal*."""
    return terminal.identifier, terminal.pin or ""


def parse_design(text, validate=True):
    """Return :class:`Design` instance decoded from *text*.

    :param text: Content of a design file.

    :param validate: Indicate whether the design should be validated.
        Default is True.

    :raise: :exc:`smtflow.exception.DesignSyntaxError` if *text* cannot be
        decoded or does not follow the design file schema.

    :raise: :exc:`smtflow.exception.UnresolvedReference` if an entity
        references an undeclared entity.

    :raise: :exc:`smtflow.exception.DuplicateIdentifier` if an identifier
        is declared several times.

    :raise: :exc:`smtflow.exception.ValidationError` if the design does not
        satisfy its invariants.

    .. seealso:: :ref:`design_file`

    """
    try:
        data = ujson.loads(text)

    except ValueError as error:
        # Decode again with the standard parser to locate the issue.
        try:
            json.loads(text)
        except ValueError as json_error:
            raise smtflow.exception.DesignSyntaxError(
                json_error.msg, json_error.lineno, json_error.colno
            )

        raise smtflow.exception.DesignSyntaxError(str(error))

    design = create(data)

    if validate:
        diagnostics = smtflow.validator.validate(design)
        if len(diagnostics) > 0:
            raise smtflow.exception.ValidationError(diagnostics)

    return design


def create(data):
    """Return :class:`Design` instance from *data* mapping.

    :raise: :exc:`smtflow.exception.DesignSyntaxError` if *data* does not
        follow the design file schema.

    :raise: :exc:`smtflow.exception.UnresolvedReference` if an entity
        references an undeclared entity.

    :raise: :exc:`smtflow.exception.DuplicateIdentifier` if an identifier
        is declared several times.

    """
    logger = logging.getLogger(__name__ + ".create")

    smtflow.validator.validate_data(data)

    if data.get("library") is not None:
        library = smtflow.library.Library(data["library"])
    else:
        logger.debug("No library in design, use default library.")
        library = smtflow.library.load()

    constraints = DEFAULT_CONSTRAINTS._replace(**data.get("constraints", {}))

    die = (
        smtflow.utility.to_nanometers(data["die"]["x_min"]),
        smtflow.utility.to_nanometers(data["die"]["y_min"]),
        smtflow.utility.to_nanometers(data["die"]["x_max"]),
        smtflow.utility.to_nanometers(data["die"]["y_max"]),
    )

    design = Design(
        library, constraints, die,
        nets=[
            Net(record["id"], holder=record.get("holder", False))
            for record in data.get("nets", [])
        ],
        mte_net=data.get("mte_net"),
        flow_stage=data["flow_stage"]
    )

    for record in data.get("ports", []):
        if record["net"] not in design.nets:
            raise smtflow.exception.UnresolvedReference(
                "net", record["net"],
                referrer=smtflow.symbol.PORT_PREFIX + record["id"]
            )

        design.add_port(
            Port(
                record["id"], record["net"], record["direction"],
                _position(record)
            )
        )

    for record in data.get("cells", []):
        if record["kind"] not in library:
            raise smtflow.exception.UnresolvedReference(
                "cell kind", record["kind"], referrer=record["id"]
            )

        for net in record.get("pins", {}).values():
            if net not in design.nets:
                raise smtflow.exception.UnresolvedReference(
                    "net", net, referrer=record["id"]
                )

        design.add_cell(
            CellInstance(
                record["id"], record["kind"], record["variant"],
                _position(record),
                pins=record.get("pins", {}),
                vgnd=record.get("vgnd"),
                width=record.get("width"),
            )
        )

    for cell in design.cells.values():
        if cell.vgnd is not None and cell.vgnd not in design.cells:
            raise smtflow.exception.UnresolvedReference(
                "cell", cell.vgnd, referrer=cell.identifier
            )

    if design.mte_net is not None and design.mte_net not in design.nets:
        raise smtflow.exception.UnresolvedReference("net", design.mte_net)

    return design


def _position(record):
    """Return (x, y) position in nanometers from *record* in µm."""
    return (
        smtflow.utility.to_nanometers(record["x"]),
        smtflow.utility.to_nanometers(record["y"]),
    )


def write_design(design, validate=True):
    """Return canonical serialization of *design*.

    Entities are sorted by identifier so that two structurally equal designs
    are serialized into identical texts.

    :param design: Instance of :class:`Design`.

    :param validate: Indicate whether the design should be validated first.
        Default is True.

    :raise: :exc:`smtflow.exception.ValidationError` if the design does not
        satisfy its invariants.

    """
    if validate:
        diagnostics = smtflow.validator.validate(design)
        if len(diagnostics) > 0:
            raise smtflow.exception.ValidationError(diagnostics)

    return json.dumps(
        design.data(),
        indent=4,
        separators=(",", ": "),
        ensure_ascii=False
    )


def load(path, validate=True):
    """Load and return a design from *path*.

    :param path: Design file path.

    :param validate: Indicate whether the design should be validated.
        Default is True.

    :return: Instance of :class:`Design`.

    """
    return parse_design(smtflow.filesystem.read(path), validate=validate)


def export(path, design, overwrite=False):
    """Export *design* to *path*.

    :param path: Target design file path.

    :param design: Instance of :class:`Design`.

    :param overwrite: Indicate whether existing file will be overwritten.
        Default is False.

    :return: Path to exported design.

    :raise: :exc:`smtflow.exception.FileExists` if *path* already exists and
        overwrite is False.

    """
    return smtflow.filesystem.export(
        path, write_design(design), overwrite=overwrite
    )
