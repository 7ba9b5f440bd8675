# :coding: utf-8

import copy
import logging
import os
import shutil
import tempfile
import uuid

import pytest

import smtflow.design
import smtflow.library
import smtflow.symbol


@pytest.fixture()
def unique_name():
    """Return a unique name."""
    return "unique-{0}".format(uuid.uuid4())


@pytest.fixture()
def temporary_file(request):
    """Return a temporary file path."""
    file_handle, path = tempfile.mkstemp()
    os.close(file_handle)

    def cleanup():
        """Remove temporary file."""
        try:
            os.remove(path)
        except OSError:
            pass

    request.addfinalizer(cleanup)
    return path


@pytest.fixture()
def temporary_directory(request):
    """Return a temporary directory path."""
    path = tempfile.mkdtemp()

    def cleanup():
        """Remove temporary directory."""
        shutil.rmtree(path)

    request.addfinalizer(cleanup)

    return path


@pytest.fixture(autouse=True)
def logger(mocker):
    """Mock logger."""
    return mocker.Mock(
        warning=mocker.patch.object(logging.Logger, "warning"),
        error=mocker.patch.object(logging.Logger, "error"),
        info=mocker.patch.object(logging.Logger, "info"),
    )


@pytest.fixture()
def library():
    """Return default library."""
    return smtflow.library.load()


@pytest.fixture()
def design_data():
    """Return data mapping of a design with one inverter."""
    return {
        "format": 1,
        "flow_stage": "input",
        "constraints": {"t_clk": 500, "seed": 7},
        "die": {"x_min": 0.0, "y_min": 0.0, "x_max": 12.0, "y_max": 2.0},
        "ports": [
            {"id": "a", "net": "a", "direction": "input", "x": 0.0, "y": 1.0},
            {
                "id": "y", "net": "y", "direction": "output",
                "x": 12.0, "y": 1.0
            },
            {
                "id": "mte", "net": "mte", "direction": "input",
                "x": 0.0, "y": 0.0
            },
        ],
        "cells": [
            {
                "id": "u1", "kind": "INV", "variant": "low_vth",
                "x": 6.0, "y": 1.0, "pins": {"A": "a", "Y": "y"}
            }
        ],
        "nets": [{"id": "a"}, {"id": "y"}, {"id": "mte"}],
        "mte_net": "mte"
    }


@pytest.fixture()
def create_design(library):
    """Return factory creating a design from compact descriptions.

    Cells are given as (identifier, kind, variant, (x, y), pins) tuples and
    ports as (identifier, net, direction, (x, y)) tuples with positions in
    nanometers. Nets are deduced from the bindings and an MTE port is added
    at the origin.

    """
    def _create(
        cells, ports, die=(0, 0, 24000, 2000), constraints=None,
        stage=smtflow.symbol.STAGE_INPUT, library=library
    ):
        nets = set(["mte"])
        for _, net, _, _ in ports:
            nets.add(net)
        for _, _, _, _, pins in cells:
            nets.update(pins.values())

        _ports = [
            smtflow.design.Port(*port) for port in ports
        ] + [smtflow.design.Port("mte", "mte", "input", (0, 0))]

        return smtflow.design.Design(
            library,
            smtflow.design.DEFAULT_CONSTRAINTS._replace(**(constraints or {})),
            die,
            ports=_ports,
            cells=[
                smtflow.design.CellInstance(
                    identifier, kind, variant, position, pins=copy.copy(pins)
                )
                for identifier, kind, variant, position, pins in cells
            ],
            nets=[smtflow.design.Net(net) for net in sorted(nets)],
            mte_net="mte",
            flow_stage=stage
        )

    return _create


@pytest.fixture()
def chain_design(create_design):
    """Return factory creating an INV -> NAND2 -> INV chain.

    The three cells are placed on one row, 6 µm apart, between the primary
    input "a" and the primary output "y". The NAND2 also reads "a".

    """
    def _create(stage=smtflow.symbol.STAGE_INPUT, **constraints):
        return create_design(
            [
                ("u1", "INV", "low_vth", (6000, 1000), {"A": "a", "Y": "n1"}),
                (
                    "u2", "NAND2", "low_vth", (12000, 1000),
                    {"A": "n1", "B": "a", "Y": "n2"}
                ),
                ("u3", "INV", "low_vth", (18000, 1000), {"A": "n2", "Y": "y"}),
            ],
            [
                ("a", "a", "input", (0, 1000)),
                ("y", "y", "output", (24000, 1000)),
            ],
            constraints=constraints,
            stage=stage
        )

    return _create
