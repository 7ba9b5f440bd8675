# :coding: utf-8

import collections

import networkx

import smtflow.exception
import smtflow.library
import smtflow.symbol


class Diagnostic(
    collections.namedtuple("Diagnostic", ["rule", "identifiers", "message"])
):
    """Broken design invariant.

    *rule* names the invariant (e.g. "dangling-net") and *identifiers* is the
    sorted tuple of entities involved.

    """

    __slots__ = ()

    def __str__(self):
        """Return human readable representation."""
        return "[{}] {}".format(self.rule, self.message)


def validate_data(data):
    """Validate *data* mapping used to create a design.

    An error will be raised if the *data* mapping cannot be used to create an
    instance of :class:`smtflow.design.Design`.

    :param data: Mapping to validate.

    :raise: :exc:`smtflow.exception.DesignSyntaxError` if the *data* mapping
        is incorrect.

    .. seealso:: :ref:`design_file`

    """
    keywords = {
        "format", "flow_stage", "library", "constraints", "die", "ports",
        "cells", "nets", "mte_net"
    }

    try:
        validate_type(data, dict)
        validate_keywords(data, keywords)

        validate_required(data.get("format"), label="'format'")
        if data["format"] != smtflow.symbol.FORMAT_VERSION:
            raise ValueError(
                "'format' {!r} is not supported.".format(data["format"])
            )

        validate_required(data.get("flow_stage"), label="'flow_stage'")
        validate_choice(
            data["flow_stage"], smtflow.symbol.STAGES, label="'flow_stage'"
        )

        validate_library_keyword(data)
        validate_constraints_keyword(data)
        validate_die_keyword(data)
        validate_ports_keyword(data)
        validate_cells_keyword(data)
        validate_nets_keyword(data)

        validate_type(data.get("mte_net"), str, label="'mte_net'")

    except ValueError as error:
        raise smtflow.exception.DesignSyntaxError(str(error))


def validate_library_keyword(data):
    """Validate 'library' keyword within *data* mapping.

    A correct *data* mapping should be in the form of::

        {
            "library": {
                "INV": {
                    "function": "INV",
                    "inputs": ["A"],
                    "output": "Y",
                    "variants": {
                        "high_vth": {
                            "area": 1.2, "leak_standby": 1.0, "d0": 22.4,
                            "r_drive": 1.2, "c_in": 1.6, "i_peak": 0.1
                        },
                        ...
                    }
                },
                ...
            }
        }

    :raise: :exc:`ValueError` if the *data* mapping is incorrect.

    """
    data = data.get("library")
    validate_type(data, dict, label="'library'")

    for name, record in (data or {}).items():
        label = "'library/{}'".format(name)
        validate_type(record, dict, label=label)
        validate_keywords(
            record, {"function", "inputs", "output", "variants"}, label=label
        )

        validate_required(record.get("function"), label=label + "/function")
        validate_choice(
            record["function"], smtflow.symbol.FUNCTIONS,
            label=label + "/function"
        )

        validate_type(record.get("inputs"), list, label=label + "/inputs")
        for pin in record.get("inputs") or []:
            validate_type(pin, str, label=label + "/inputs")

        validate_type(record.get("output"), str, label=label + "/output")

        variants = record.get("variants")
        validate_type(variants, dict, label=label + "/variants")

        for variant, parameters in (variants or {}).items():
            _label = "{}/variants/{}".format(label, variant)
            validate_choice(
                variant, smtflow.symbol.CHARACTERIZED_VARIANTS, label=_label
            )
            validate_type(parameters, dict, label=_label)
            validate_keywords(
                parameters, set(smtflow.library.PARAMETERS), label=_label
            )

            for key in smtflow.library.PARAMETERS:
                validate_required(
                    parameters.get(key), label="{}/{}".format(_label, key)
                )
                validate_number(
                    parameters[key], label="{}/{}".format(_label, key)
                )


def validate_constraints_keyword(data):
    """Validate 'constraints' keyword within *data* mapping.

    :raise: :exc:`ValueError` if the *data* mapping is incorrect.

    """
    data = data.get("constraints")
    validate_type(data, dict, label="'constraints'")
    validate_keywords(
        data or {}, set(smtflow.symbol.CONSTRAINT_FIELDS),
        label="'constraints'"
    )

    for key, value in (data or {}).items():
        label = "'constraints/{}'".format(key)
        validate_required(value, label=label)

        if key in smtflow.symbol.INTEGER_CONSTRAINTS:
            validate_integer(value, label=label)
        else:
            validate_number(value, label=label)


def validate_die_keyword(data):
    """Validate 'die' keyword within *data* mapping.

    A correct *data* mapping should be in the form of::

        {
            "die": {"x_min": 0.0, "y_min": 0.0, "x_max": 60.0, "y_max": 20.0}
        }

    :raise: :exc:`ValueError` if the *data* mapping is incorrect.

    """
    data = data.get("die")
    validate_required(data, label="'die'")
    validate_type(data, dict, label="'die'")

    keywords = {"x_min", "y_min", "x_max", "y_max"}
    validate_keywords(data, keywords, label="'die'")

    for key in sorted(keywords):
        validate_required(data.get(key), label="'die/{}'".format(key))
        validate_number(data[key], label="'die/{}'".format(key))


def validate_ports_keyword(data):
    """Validate 'ports' keyword within *data* mapping.

    :raise: :exc:`ValueError` if the *data* mapping is incorrect.

    """
    data = data.get("ports")
    validate_type(data, list, label="'ports'")

    for index, record in enumerate(data or []):
        label = "'ports/{}'".format(index)
        validate_type(record, dict, label=label)
        validate_keywords(
            record, {"id", "net", "direction", "x", "y"}, label=label
        )

        validate_identifier(record, label=label)
        validate_required(record.get("net"), label=label + "/net")
        validate_type(record["net"], str, label=label + "/net")
        validate_required(record.get("direction"), label=label + "/direction")
        validate_choice(
            record["direction"],
            [smtflow.symbol.INPUT, smtflow.symbol.OUTPUT],
            label=label + "/direction"
        )
        validate_coordinates(record, label=label)


def validate_cells_keyword(data):
    """Validate 'cells' keyword within *data* mapping.

    A correct *data* mapping should be in the form of::

        {
            "cells": [
                {
                    "id": "u1",
                    "kind": "INV",
                    "variant": "low_vth",
                    "x": 6.0,
                    "y": 2.0,
                    "pins": {"A": "a", "Y": "y"}
                },
                ...
            ]
        }

    :raise: :exc:`ValueError` if the *data* mapping is incorrect.

    """
    data = data.get("cells")
    validate_type(data, list, label="'cells'")

    keywords = {"id", "kind", "variant", "x", "y", "pins", "vgnd", "width"}

    for index, record in enumerate(data or []):
        label = "'cells/{}'".format(index)
        validate_type(record, dict, label=label)
        validate_keywords(record, keywords, label=label)

        validate_identifier(record, label=label)

        validate_required(record.get("kind"), label=label + "/kind")
        validate_type(record["kind"], str, label=label + "/kind")

        validate_required(record.get("variant"), label=label + "/variant")
        validate_choice(
            record["variant"], smtflow.symbol.VARIANTS,
            label=label + "/variant"
        )

        validate_coordinates(record, label=label)

        pins = record.get("pins")
        validate_type(pins, dict, label=label + "/pins")
        for pin, net in (pins or {}).items():
            validate_type(net, str, label="{}/pins/{}".format(label, pin))

        validate_type(record.get("vgnd"), str, label=label + "/vgnd")
        if record.get("width") is not None:
            validate_number(record["width"], label=label + "/width")


def validate_nets_keyword(data):
    """Validate 'nets' keyword within *data* mapping.

    :raise: :exc:`ValueError` if the *data* mapping is incorrect.

    """
    data = data.get("nets")
    validate_type(data, list, label="'nets'")

    for index, record in enumerate(data or []):
        label = "'nets/{}'".format(index)
        validate_type(record, dict, label=label)
        validate_keywords(record, {"id", "holder"}, label=label)
        validate_identifier(record, label=label)
        validate_type(record.get("holder"), bool, label=label + "/holder")


def validate_identifier(data, label="Data"):
    """Ensure that *data* mapping has a correct 'id' keyword.

    :raise: :exc:`ValueError` if *data* is incorrect.

    """
    identifier = data.get("id")
    validate_required(identifier, label=label + "/id")
    validate_type(identifier, str, label=label + "/id")

    if len(identifier) == 0 or identifier.startswith(
        smtflow.symbol.PORT_PREFIX
    ):
        raise ValueError("{}/id is incorrect.".format(label))


def validate_coordinates(data, label="Data"):
    """Ensure that *data* mapping has correct 'x' and 'y' keywords.

    :raise: :exc:`ValueError` if *data* is incorrect.

    """
    for key in ["x", "y"]:
        validate_required(data.get(key), label="{}/{}".format(label, key))
        validate_number(data[key], label="{}/{}".format(label, key))


def validate_keywords(data, keywords, label="Data"):
    """Ensure that no invalid keywords are in *data* mapping.

    :param data: Mapping to validate.

    :param keywords: Set of authorized keywords.

    :param label: String to describe *data* if an error is raised. Default is
        "Data".

    :raise: :exc:`ValueError` if the *data* mapping is incorrect.

    """
    remaining_keywords = set(data.keys()).difference(keywords)
    if remaining_keywords != set():
        raise ValueError(
            "{} contains invalid keywords: {}"
            .format(label, ", ".join(sorted(remaining_keywords)))
        )


def validate_required(data, label="Data"):
    """Ensure that *data* exists.

    :raise: :exc:`ValueError` if *data* is incorrect.

    """
    if data is None:
        raise ValueError("{} is required.".format(label))


def validate_type(data, data_type, label="Data"):
    """Ensure that *data* has correct type.

    :param data: Content to validate.

    :param data_type: Type expected for *data*. It can be a tuple if several
        types are authorized.

    :param label: String to describe *data* if an error is raised. Default is
        "Data".

    :raise: :exc:`ValueError` if *data* is incorrect.

    """
    if data is not None and not isinstance(data, data_type):
        raise ValueError("{} has incorrect type.".format(label))


def validate_number(data, label="Data"):
    """Ensure that *data* is an integer or a float number.

    :raise: :exc:`ValueError` if *data* is incorrect.

    """
    if isinstance(data, bool) or not isinstance(data, (int, float)):
        raise ValueError("{} should be a number.".format(label))


def validate_integer(data, label="Data"):
    """Ensure that *data* is an integer number.

    :raise: :exc:`ValueError` if *data* is incorrect.

    """
    if isinstance(data, bool) or not isinstance(data, int):
        raise ValueError("{} should be an integer.".format(label))


def validate_choice(data, choices, label="Data"):
    """Ensure that *data* is one of *choices*.

    :raise: :exc:`ValueError` if *data* is incorrect.

    """
    if data not in choices:
        raise ValueError(
            "{} should be one of {}.".format(label, ", ".join(choices))
        )


def validate(design):
    """Return sorted list of :class:`Diagnostic` for *design*.

    The list is empty if and only if all design invariants hold and the
    logic network is acyclic.

    :param design: Instance of :class:`smtflow.design.Design`.

    """
    diagnostics = []
    diagnostics.extend(_check_constraints(design))
    diagnostics.extend(_check_library(design))
    diagnostics.extend(_check_cells(design))
    diagnostics.extend(_check_nets(design))
    diagnostics.extend(_check_mte_tree(design))
    diagnostics.extend(_check_cycles(design))

    return sorted(diagnostics)


def _check_constraints(design):
    """Yield diagnostics for incorrect constraint values."""
    constraints = design.constraints

    positives = [
        "t_clk", "v_dd", "v_bounce_max", "n_cells_max", "r0_switch", "l_sw",
        "a_sw", "w_min", "r_wire", "c_wire"
    ]
    for key in positives:
        if getattr(constraints, key) <= 0:
            yield _invalid_constraint(key, "must be strictly positive")

    for key in ["hold_min", "l_vgnd_max", "k_bounce", "seed"]:
        if getattr(constraints, key) < 0:
            yield _invalid_constraint(key, "must be positive")

    if not 0 < constraints.alpha <= 1:
        yield _invalid_constraint("alpha", "must be in (0, 1]")

    if constraints.v_bounce_max >= constraints.v_dd:
        yield _invalid_constraint("v_bounce_max", "must be lower than v_dd")

    if constraints.mte_max_fanout < 2:
        yield _invalid_constraint("mte_max_fanout", "must be at least 2")

    if constraints.seed >= 2 ** 64:
        yield _invalid_constraint("seed", "must hold on 64 bits")


def _invalid_constraint(key, reason):
    """Return 'invalid-constraint' diagnostic for *key*."""
    return Diagnostic(
        "invalid-constraint", (key,),
        "Constraint '{}' {}.".format(key, reason)
    )


def _check_library(design):
    """Yield diagnostics for incorrect library characterizations."""
    for kind in design.library.kinds:
        if kind.function in smtflow.symbol.LOGIC_FUNCTIONS:
            required = smtflow.symbol.CHARACTERIZED_VARIANTS
        elif kind.function == smtflow.symbol.SWITCH:
            required = []
        else:
            required = [smtflow.symbol.HIGH_VTH]

        for variant in required:
            if not kind.has_variant(variant):
                yield Diagnostic(
                    "missing-variant", (kind.name,),
                    "Cell kind '{}' is not characterized for '{}'.".format(
                        kind.name, variant
                    )
                )

        if kind.function in smtflow.symbol.LOGIC_FUNCTIONS:
            for variant in kind.variants:
                if kind.parameters(variant).i_peak <= 0:
                    yield Diagnostic(
                        "library-ordering", (kind.name,),
                        "Cell kind '{}' has no peak current for '{}'.".format(
                            kind.name, variant
                        )
                    )

        if not all(
            kind.has_variant(variant)
            for variant in smtflow.symbol.CHARACTERIZED_VARIANTS
        ):
            continue

        high = kind.parameters(smtflow.symbol.HIGH_VTH)
        low = kind.parameters(smtflow.symbol.LOW_VTH)

        if not (
            high.d0 > low.d0 and high.r_drive >= low.r_drive
            and low.leak_standby > high.leak_standby
        ):
            yield Diagnostic(
                "library-ordering", (kind.name,),
                "Cell kind '{}' high threshold variant must be slower and "
                "less leaky than the low threshold variant.".format(kind.name)
            )


def _check_cells(design):
    """Yield diagnostics for cells incorrectly bound or placed."""
    stage = design.flow_stage
    x_min, y_min, x_max, y_max = design.die

    for identifier in sorted(design.cells):
        cell = design.cells[identifier]
        kind = design.library.get(cell.kind)

        required = set(kind.pins)
        if cell.variant == smtflow.symbol.MT_BUILT_IN:
            required.add(smtflow.symbol.MTE_PIN)

        for pin in sorted(required.difference(cell.pins)):
            yield Diagnostic(
                "unbound-pin", (identifier,),
                "Pin '{}' of cell '{}' is not bound.".format(pin, identifier)
            )

        for pin in sorted(set(cell.pins).difference(required)):
            yield Diagnostic(
                "unknown-pin", (identifier,),
                "Cell '{}' binds unknown pin '{}'.".format(identifier, pin)
            )

        x, y = cell.position
        if not (x_min <= x <= x_max and y_min <= y <= y_max):
            yield Diagnostic(
                "outside-die", (identifier,),
                "Cell '{}' is placed outside of the die.".format(identifier)
            )

        if kind.function != smtflow.symbol.SWITCH and not kind.has_variant(
            cell.variant
        ):
            yield Diagnostic(
                "missing-variant", (identifier,),
                "Cell '{}' uses variant '{}' which is not characterized for "
                "kind '{}'.".format(identifier, cell.variant, kind.name)
            )

        for diagnostic in _check_variant_stage(design, cell, stage):
            yield diagnostic

        if kind.function == smtflow.symbol.SWITCH or (
            cell.variant == smtflow.symbol.MT_BUILT_IN
        ):
            if cell.width is None or cell.width < design.constraints.w_min:
                yield Diagnostic(
                    "switch-width", (identifier,),
                    "Switch width of cell '{}' is lower than the minimum "
                    "width.".format(identifier)
                )

    for identifier in sorted(design.ports):
        x, y = design.ports[identifier].position
        if not (x_min <= x <= x_max and y_min <= y <= y_max):
            yield Diagnostic(
                "outside-die", (smtflow.symbol.PORT_PREFIX + identifier,),
                "Port '{}' is placed outside of the die.".format(identifier)
            )


def _check_variant_stage(design, cell, stage):
    """Yield diagnostics for MT variants used at the wrong *stage*."""
    allowed = {
        smtflow.symbol.MT_NO_VGND: {smtflow.symbol.STAGE_ASSIGNED},
        smtflow.symbol.MT_WITH_VGND: {
            smtflow.symbol.STAGE_SWITCHED, smtflow.symbol.STAGE_CLUSTERED,
            smtflow.symbol.STAGE_ROUTED, smtflow.symbol.STAGE_REOPTIMIZED,
            smtflow.symbol.STAGE_FINAL
        },
        smtflow.symbol.MT_BUILT_IN: {smtflow.symbol.STAGE_CONVENTIONAL},
    }

    if cell.variant in allowed and stage not in allowed[cell.variant]:
        yield Diagnostic(
            "variant-stage", (cell.identifier,),
            "Variant '{}' of cell '{}' is not allowed at stage '{}'.".format(
                cell.variant, cell.identifier, stage
            )
        )

    if cell.variant == smtflow.symbol.MT_WITH_VGND:
        switch = design.cells.get(cell.vgnd)
        if switch is None or (
            design.library.get(switch.kind).function != smtflow.symbol.SWITCH
        ):
            yield Diagnostic(
                "missing-switch", (cell.identifier,),
                "MT-cell '{}' is not connected to a switch.".format(
                    cell.identifier
                )
            )


def _check_nets(design):
    """Yield diagnostics for incorrectly driven or loaded nets."""
    holders = collections.defaultdict(list)
    for identifier in design.cells_by_function(smtflow.symbol.HOLDER):
        net = design.cells[identifier].pins.get(smtflow.symbol.HOLDER_PIN)
        if net is not None:
            holders[net].append(identifier)

    for identifier in sorted(design.nets):
        drivers = design.drivers(identifier)

        if len(drivers) > 1:
            yield Diagnostic(
                "multiple-drivers", (identifier,),
                "Net '{}' has several drivers: {}".format(
                    identifier, ", ".join(str(driver) for driver in drivers)
                )
            )

        elif len(drivers) == 0:
            yield Diagnostic(
                "undriven-net", (identifier,),
                "Net '{}' has no driver.".format(identifier)
            )

        if len(design.sinks(identifier)) == 0 and (
            identifier != design.mte_net
        ):
            yield Diagnostic(
                "dangling-net", (identifier,),
                "Net '{}' has no sink.".format(identifier)
            )

        count = len(holders.get(identifier, []))
        if design.nets[identifier].holder != (count > 0) or count > 1:
            yield Diagnostic(
                "holder-flag", (identifier,),
                "Net '{}' holder flag does not match its {} holder(s)."
                .format(identifier, count)
            )


def _check_mte_tree(design):
    """Yield diagnostics for incorrect MTE control tree."""
    nets = design.mte_tree_nets()

    check_fanout = design.flow_stage in {
        smtflow.symbol.STAGE_ROUTED, smtflow.symbol.STAGE_REOPTIMIZED,
        smtflow.symbol.STAGE_FINAL, smtflow.symbol.STAGE_CONVENTIONAL
    }

    for net in sorted(nets):
        sinks = design.sinks(net)

        for sink in sinks:
            if sink.is_port:
                continue

            cell = design.cells[sink.identifier]
            function = design.library.get(cell.kind).function

            if function in smtflow.symbol.MTE_FUNCTIONS and (
                sink.pin == smtflow.symbol.MTE_PIN
                or function == smtflow.symbol.MTEBUF
            ):
                continue

            if (
                sink.pin == smtflow.symbol.MTE_PIN
                and cell.variant == smtflow.symbol.MT_BUILT_IN
            ):
                continue

            yield Diagnostic(
                "mte-logic-sink", (sink.identifier,),
                "Cell '{}' sinks the MTE control net '{}'.".format(
                    sink.identifier, net
                )
            )

        if check_fanout and len(sinks) > design.constraints.mte_max_fanout:
            yield Diagnostic(
                "mte-fanout", (net,),
                "MTE net '{}' drives {} sinks which exceeds the maximum "
                "fanout.".format(net, len(sinks))
            )


def _check_cycles(design):
    """Yield diagnostics for combinational cycles."""
    graph = networkx.DiGraph()
    mte_nets = design.mte_tree_nets()

    breaking = {smtflow.symbol.DFF, smtflow.symbol.MTEBUF}

    for identifier in design.logic_cells():
        if design.function(identifier) in breaking:
            continue

        graph.add_node(identifier)

        net = design.output_net(identifier)
        if net is None or net in mte_nets:
            continue

        for sink in design.sinks(net):
            if sink.is_port or sink.identifier not in design.cells:
                continue

            if design.function(sink.identifier) not in (
                smtflow.symbol.LOGIC_FUNCTIONS.difference(breaking)
            ):
                continue

            graph.add_edge(identifier, sink.identifier)

    for component in networkx.strongly_connected_components(graph):
        members = tuple(sorted(component))

        if len(members) == 1 and not graph.has_edge(members[0], members[0]):
            continue

        yield Diagnostic(
            "combinational-cycle", members,
            "Combinational cycle through cells: {}".format(", ".join(members))
        )
