# :coding: utf-8

import json
import os

import pytest

import smtflow.design
import smtflow.exception
import smtflow.symbol
from smtflow.design import Terminal


def test_create(design_data):
    """Create design from data mapping."""
    design = smtflow.design.create(design_data)

    assert design.flow_stage == "input"
    assert design.die == (0, 0, 12000, 2000)
    assert design.mte_net == "mte"
    assert sorted(design.nets) == ["a", "mte", "y"]
    assert sorted(design.ports) == ["a", "mte", "y"]
    assert list(design.cells) == ["u1"]

    cell = design.cells["u1"]
    assert cell.kind == "INV"
    assert cell.variant == "low_vth"
    assert cell.position == (6000, 1000)
    assert cell.pins == {"A": "a", "Y": "y"}

    assert design.constraints == smtflow.design.DEFAULT_CONSTRAINTS._replace(
        t_clk=500, seed=7
    )


def test_create_with_library(design_data, library):
    """Create design with embedded library."""
    design_data["library"] = library.data()
    design = smtflow.design.create(design_data)
    assert design.library == library


@pytest.mark.parametrize("update, message", [
    (
        {"cells": [{
            "id": "u1", "kind": "INV", "variant": "low_vth",
            "x": 6.0, "y": 1.0, "pins": {"A": "a", "Y": "n7"}
        }]},
        "Unresolved net reference 'n7' in 'u1'."
    ),
    (
        {"cells": [{
            "id": "u1", "kind": "XOR2", "variant": "low_vth",
            "x": 6.0, "y": 1.0, "pins": {"A": "a", "Y": "y"}
        }]},
        "Unresolved cell kind reference 'XOR2' in 'u1'."
    ),
    (
        {"mte_net": "enable"},
        "Unresolved net reference 'enable'."
    ),
    (
        {"ports": [{
            "id": "a", "net": "b", "direction": "input", "x": 0.0, "y": 1.0
        }]},
        "Unresolved net reference 'b' in 'port:a'."
    ),
], ids=[
    "net",
    "kind",
    "mte-net",
    "port-net",
])
def test_create_unresolved(design_data, update, message):
    """Fail to create design with unresolved references."""
    design_data.update(update)

    with pytest.raises(smtflow.exception.UnresolvedReference) as error:
        smtflow.design.create(design_data)

    assert str(error.value) == message
    assert error.value.exit_code == 2


def test_create_unresolved_vgnd(design_data):
    """Fail to create design with MT-cell connected to unknown switch."""
    design_data["cells"][0]["vgnd"] = "sw1"

    with pytest.raises(smtflow.exception.UnresolvedReference) as error:
        smtflow.design.create(design_data)

    assert str(error.value) == "Unresolved cell reference 'sw1' in 'u1'."


def test_create_duplicated(design_data):
    """Fail to create design with duplicated identifiers."""
    design_data["nets"].append({"id": "a"})

    with pytest.raises(smtflow.exception.DuplicateIdentifier) as error:
        smtflow.design.create(design_data)

    assert str(error.value) == "Duplicate net identifier 'a'."


@pytest.mark.parametrize("update, message", [
    ({"format": 2}, "'format' 2 is not supported."),
    ({"flow_stage": "unknown"}, "'flow_stage' should be one of"),
    ({"die": None}, "'die' is required."),
    ({"unknown": True}, "Data contains invalid keywords: unknown"),
    ({"constraints": {"seed": 1.5}}, "'constraints/seed' should be an "),
    ({"constraints": {"t_clk": "1"}}, "'constraints/t_clk' should be a"),
    ({"constraints": {"unknown": 1}}, "invalid keywords: unknown"),
    ({"nets": [{"id": "port:a"}]}, "'nets/0'/id is incorrect."),
    ({"nets": [{"id": "a", "holder": 1}]}, "'nets/0'/holder has incorrect"),
], ids=[
    "format",
    "stage",
    "missing-die",
    "unknown-keyword",
    "float-seed",
    "string-clock",
    "unknown-constraint",
    "reserved-identifier",
    "holder-type",
])
def test_create_syntax_error(design_data, update, message):
    """Fail to create design from incorrect data mapping."""
    design_data.update(update)

    with pytest.raises(smtflow.exception.DesignSyntaxError) as error:
        smtflow.design.create(design_data)

    assert message in str(error.value)


def test_parse_design_syntax_error():
    """Fail to parse incorrect JSON text with its location."""
    with pytest.raises(smtflow.exception.DesignSyntaxError) as error:
        smtflow.design.parse_design("{\n  \"format\": 1,\n  oops\n}")

    assert error.value.line == 3
    assert str(error.value).startswith(
        "Syntax error in design file: line 3, column 3:"
    )


def test_parse_design_invalid(design_data):
    """Fail to parse a design which breaks invariants."""
    design_data["nets"].append({"id": "n7"})
    text = json.dumps(design_data)

    with pytest.raises(smtflow.exception.ValidationError) as error:
        smtflow.design.parse_design(text)

    assert "[dangling-net] Net 'n7' has no sink." in str(error.value)
    assert "[undriven-net] Net 'n7' has no driver." in str(error.value)

    design = smtflow.design.parse_design(text, validate=False)
    assert "n7" in design.nets


def test_connectivity(chain_design):
    """Derive drivers and sinks from the bindings."""
    design = chain_design()

    assert design.drivers("a") == [Terminal("port:a", None)]
    assert design.driver("a").is_port is True
    assert design.sinks("a") == [Terminal("u1", "A"), Terminal("u2", "B")]
    assert design.driver("n2") == Terminal("u2", "Y")
    assert design.sinks("y") == [Terminal("port:y", None)]
    assert design.driver("unknown") is None
    assert design.sinks("unknown") == []

    assert design.output_net("u2") == "n2"
    assert design.input_nets("u2") == ["n1", "a"]
    assert design.position(Terminal("port:y", None)) == (24000, 1000)
    assert design.position(Terminal("u3", "A")) == (18000, 1000)

    assert design.logic_cells() == ["u1", "u2", "u3"]
    assert design.cells_by_function("INV") == ["u1", "u3"]
    assert design.mt_cells() == []
    assert design.mte_tree_nets() == {"mte"}

    assert str(design.driver("n1")) == "u1/Y"
    assert str(design.driver("a")) == "port:a"


def test_connectivity_update(chain_design):
    """Refresh connectivity after netlist changes."""
    design = chain_design()
    assert design.sinks("n2") == [Terminal("u3", "A")]

    design.connect("u3", "A", "n1")
    assert design.sinks("n2") == []
    assert design.sinks("n1") == [Terminal("u2", "A"), Terminal("u3", "A")]

    design.remove_cell("u3")
    assert design.sinks("n1") == [Terminal("u2", "A")]
    assert design.driver("y") is None

    design.set_port_net("y", "n2")
    assert design.sinks("n2") == [Terminal("port:y", None)]


def test_add_duplicated(chain_design):
    """Fail to add entities with existing identifiers."""
    design = chain_design()

    with pytest.raises(smtflow.exception.DuplicateIdentifier):
        design.add_cell(
            smtflow.design.CellInstance("u1", "INV", "low_vth", (0, 0))
        )

    with pytest.raises(smtflow.exception.DuplicateIdentifier):
        design.add_net(smtflow.design.Net("n1"))

    with pytest.raises(smtflow.exception.DuplicateIdentifier):
        design.add_port(
            smtflow.design.Port("a", "a", "input", (0, 0))
        )


def test_fresh_identifiers(chain_design):
    """Yield unused identifiers."""
    design = chain_design()

    identifiers = design.fresh_identifiers("u")
    assert next(identifiers) == "u4"
    assert next(identifiers) == "u5"

    identifiers = design.fresh_identifiers("n", namespace="net")
    assert next(identifiers) == "n3"


def test_copy(chain_design):
    """Copy design without sharing mutable entities."""
    design = chain_design()
    copied = design.copy()

    assert copied == design
    assert copied.library is design.library

    copied.cells["u1"].variant = "high_vth"
    copied.nets["n1"].holder = True
    copied.flow_stage = "all_low"

    assert design.cells["u1"].variant == "low_vth"
    assert design.nets["n1"].holder is False
    assert design.flow_stage == "input"
    assert copied != design


def test_write_design(design_data):
    """Serialize design canonically."""
    design = smtflow.design.create(design_data)
    text = smtflow.design.write_design(design)

    data = json.loads(text)
    assert list(data.keys()) == [
        "format", "flow_stage", "library", "constraints", "die", "ports",
        "cells", "nets", "mte_net"
    ]
    assert [port["id"] for port in data["ports"]] == ["a", "mte", "y"]
    assert data["cells"] == [{
        "id": "u1", "kind": "INV", "variant": "low_vth", "x": 6.0, "y": 1.0,
        "pins": {"A": "a", "Y": "y"}
    }]
    assert data["constraints"]["t_clk"] == 500
    assert data["die"] == {
        "x_min": 0.0, "y_min": 0.0, "x_max": 12.0, "y_max": 2.0
    }

    # Entities declared in another order give the same text.
    design_data["ports"].reverse()
    design_data["nets"].reverse()
    assert smtflow.design.write_design(
        smtflow.design.create(design_data)
    ) == text


def test_write_design_round_trip(design_data):
    """Parse written design into an equal design."""
    design = smtflow.design.create(design_data)
    design.cells["u1"].variant = "high_vth"

    text = smtflow.design.write_design(design)
    parsed = smtflow.design.parse_design(text)

    assert parsed == design
    assert smtflow.design.write_design(parsed) == text


def test_write_design_invalid(design_data):
    """Fail to serialize an invalid design."""
    design = smtflow.design.create(design_data)
    design.add_net(smtflow.design.Net("n7"))

    with pytest.raises(smtflow.exception.ValidationError):
        smtflow.design.write_design(design)

    assert "n7" in smtflow.design.write_design(design, validate=False)


def test_export_and_load(design_data, temporary_directory):
    """Export design and load it back."""
    design = smtflow.design.create(design_data)
    path = os.path.join(temporary_directory, "design.smt")

    assert smtflow.design.export(path, design) == path
    assert smtflow.design.load(path) == design

    with pytest.raises(smtflow.exception.FileExists):
        smtflow.design.export(path, design)

    smtflow.design.export(path, design, overwrite=True)


def test_load_missing(temporary_directory):
    """Fail to load a missing design."""
    with pytest.raises(smtflow.exception.OutputError):
        smtflow.design.load(os.path.join(temporary_directory, "missing.smt"))


def test_cell_data():
    """Serialize cell instance with optional attributes."""
    cell = smtflow.design.CellInstance(
        "u1", "INV", "mt_with_vgnd", (1500, 2000), pins={"Y": "y", "A": "a"},
        vgnd="sw1"
    )
    assert cell.data() == {
        "id": "u1", "kind": "INV", "variant": "mt_with_vgnd",
        "x": 1.5, "y": 2.0, "pins": {"A": "a", "Y": "y"}, "vgnd": "sw1"
    }
    assert list(cell.data()["pins"].keys()) == ["A", "Y"]

    switch = smtflow.design.CellInstance(
        "sw1", "SWITCH", "high_vth", (0, 0), pins={"MTE": "mte"}, width=0.5
    )
    assert switch.data()["width"] == 0.5
    assert "vgnd" not in switch.data()


def test_net_data():
    """Serialize net with holder flag."""
    assert smtflow.design.Net("n1").data() == {"id": "n1"}
    assert smtflow.design.Net("n1", holder=True).data() == {
        "id": "n1", "holder": True
    }
