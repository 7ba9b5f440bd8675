# :coding: utf-8

import json
import os

import pytest

import smtflow.config
import smtflow.design
import smtflow.exception
import smtflow.flow
import smtflow.report


@pytest.fixture()
def compared(chain_design):
    """Return results of every mode on a chain with tight timing."""
    return smtflow.flow.compare_modes(chain_design(t_clk=80))


def test_cell_leakage(chain_design):
    """Return standby leakage of each cell variant."""
    design = chain_design(stage="switched")
    design.cells["u1"].variant = "high_vth"
    design.cells["u2"].variant = "mt_with_vgnd"
    design.cells["u3"].variant = "mt_built_in"
    design.cells["u3"].width = 4.0
    design.add_cell(
        smtflow.design.CellInstance(
            "sw1", "SWITCH", "high_vth", (6000, 0), pins={"MTE": "mte"},
            width=2.0
        )
    )

    assert smtflow.report.cell_leakage(design, "u1") == 1.0
    assert smtflow.report.cell_leakage(design, "u2") == 0.0
    assert smtflow.report.cell_leakage(design, "u3") == pytest.approx(4.0)
    assert smtflow.report.cell_leakage(design, "sw1") == pytest.approx(1.0)

    assert smtflow.report.standby_leakage(design) == pytest.approx(6.0)


def test_cell_area(chain_design):
    """Return area of each cell variant."""
    design = chain_design(stage="switched")
    design.cells["u3"].variant = "mt_built_in"
    design.cells["u3"].width = 4.0
    design.add_cell(
        smtflow.design.CellInstance(
            "sw1", "SWITCH", "high_vth", (6000, 0), pins={"MTE": "mte"},
            width=2.0
        )
    )

    assert smtflow.report.cell_area(design, "u1") == pytest.approx(1.2)
    assert smtflow.report.cell_area(design, "u3") == pytest.approx(2.8)
    assert smtflow.report.cell_area(design, "sw1") == pytest.approx(0.3)

    assert smtflow.report.total_area(design) == pytest.approx(5.9)


def test_component_counts(compared):
    """Count components of each mode."""
    counts = {
        mode: dict(smtflow.report.component_counts(result.design))
        for mode, result in compared.items()
    }

    assert counts == {
        "dualvth": {
            "hvt": 2, "lvt": 1, "mt": 0, "holders": 0, "switches": 0,
            "mte_buffers": 0
        },
        "conventional": {
            "hvt": 2, "lvt": 0, "mt": 1, "holders": 1, "switches": 1,
            "mte_buffers": 0
        },
        "improved": {
            "hvt": 2, "lvt": 0, "mt": 1, "holders": 1, "switches": 1,
            "mte_buffers": 0
        },
    }


def test_summarize(compared):
    """Summarize a flow result."""
    summary = smtflow.report.summarize(compared["improved"])

    assert list(summary.keys()) == [
        "total_area", "standby_leakage", "worst_setup_slack",
        "worst_hold_slack", "counts", "bounce_limit"
    ]
    assert summary["total_area"] == pytest.approx(5.3)
    assert summary["standby_leakage"] == pytest.approx(5.4)
    assert summary["worst_setup_slack"] >= 0
    assert summary["bounce_limit"] == 0.05
    assert list(summary["counts"].keys()) == smtflow.report.COUNTS


def test_flow_report_normalized(compared):
    """Normalize area and leakage to the Dual-Vth mode."""
    report = smtflow.report.FlowReport(compared, 0, "hash")

    assert report.modes == ["dualvth", "conventional", "improved"]
    assert report.normalized() == {
        "dualvth": {"area": 100.0, "leakage": 100.0},
        "conventional": {"area": 140.0, "leakage": 28.57},
        "improved": {"area": 132.5, "leakage": 24.11},
    }


def test_flow_report_table(compared):
    """Format comparison table in percent of the Dual-Vth mode."""
    report = smtflow.report.FlowReport(compared, 0, "hash")

    assert report.table() == (
        "Technique   Area      Leakage\n"
        "---------   -------   -------\n"
        "Dual-Vth    100.00%   100.00%\n"
        "Con.-SMT    140.00%   28.57%\n"
        "Imp.-SMT    132.50%   24.11%\n"
    )


def test_flow_report_without_reference(compared):
    """Format raw values without the Dual-Vth mode."""
    results = {"improved": compared["improved"]}
    report = smtflow.report.FlowReport(results, 0, "hash")

    assert report.normalized() == {}
    assert report.table() == (
        "Technique   Area       Leakage\n"
        "---------   --------   -------\n"
        "Imp.-SMT    5.30 um2   5.40 nA\n"
    )


def test_flow_report_data(compared):
    """Serialize a report with its metadata."""
    report = smtflow.report.FlowReport(compared, 7, "abc")
    data = json.loads(report.encode())

    assert data["format"] == 1
    assert data["metadata"]["seed"] == 7
    assert data["metadata"]["config_hash"] == "abc"
    assert data["metadata"]["bounce_limit"] == {
        "dualvth": None, "conventional": 0.05, "improved": 0.05
    }
    assert data["metadata"]["stages"]["dualvth"] == [
        "validate", "initialize", "assign", "route", "hold_fix", "sta"
    ]
    assert list(data["modes"].keys()) == [
        "dualvth", "conventional", "improved"
    ]
    assert data["modes"]["improved"]["counts"]["switches"] == 1
    assert data["normalized"]["improved"]["leakage"] == 24.11

    assert report.encode().endswith("}\n")


@pytest.mark.parametrize("value, reference, expected", [
    (5.0, 10.0, 50.0),
    (1.0, 3.0, 33.33),
    (0.0, 0.0, 100.0),
    (1.0, 0.0, float("inf")),
], ids=[
    "half",
    "rounded",
    "zero",
    "zero-reference",
])
def test_percentage(value, reference, expected):
    """Return value in percent of a reference."""
    assert smtflow.report._percentage(value, reference) == expected


def test_create_config_hash(chain_design):
    """Return identical hashes for identical configurations."""
    constraints = chain_design().constraints
    settings = smtflow.config.flow_settings({})

    digest = smtflow.report.create_config_hash(constraints, settings)
    assert len(digest) == 40
    assert digest == smtflow.report.create_config_hash(
        constraints, dict(settings)
    )
    assert digest != smtflow.report.create_config_hash(
        constraints._replace(alpha=0.4), settings
    )


def test_format_table():
    """Format columns as a text table."""
    columns = smtflow.report.create_columns(["Name", "Value"])
    smtflow.report.create_row("long-name", columns[0])
    smtflow.report.create_row("1", columns[1])

    assert smtflow.report.format_table(columns) == (
        "Name        Value\n"
        "---------   -----\n"
        "long-name   1\n"
    )


def test_export_report(temporary_directory, compared):
    """Export report and table."""
    report = smtflow.report.FlowReport(compared, 0, "hash")

    path = smtflow.report.export_report(
        os.path.join(temporary_directory, "report.json"), report
    )
    with open(path, "r") as stream:
        assert stream.read() == report.encode()

    path = smtflow.report.export_table(
        os.path.join(temporary_directory, "table.txt"), report
    )
    with open(path, "r") as stream:
        assert stream.read() == report.table()


def test_export_report_exists(temporary_file, compared):
    """Fail to export report into an existing file."""
    report = smtflow.report.FlowReport(compared, 0, "hash")

    with pytest.raises(smtflow.exception.FileExists):
        smtflow.report.export_report(temporary_file, report)

    smtflow.report.export_report(temporary_file, report, overwrite=True)


def test_export_clusters(temporary_directory, compared):
    """Export cluster dump."""
    path = smtflow.report.export_clusters(
        os.path.join(temporary_directory, "clusters.json"),
        compared["improved"].structure
    )

    with open(path, "r") as stream:
        data = json.load(stream)

    assert data["stage"] == "reoptimized"
    assert [cluster["id"] for cluster in data["clusters"]] == ["sw1"]
    assert data["clusters"][0]["members"] == ["u3"]


def test_export_clusters_empty(temporary_directory):
    """Export empty cluster dump without structure."""
    path = smtflow.report.export_clusters(
        os.path.join(temporary_directory, "clusters.json"), None
    )

    with open(path, "r") as stream:
        assert json.load(stream) == {"format": 1, "clusters": []}


@pytest.mark.parametrize("mode", [
    "dualvth",
    "conventional",
    "improved",
], ids=[
    "dualvth",
    "conventional",
    "improved",
])
def test_render_svg(temporary_directory, compared, mode):
    """Render flow result as SVG."""
    path = smtflow.report.render_svg(
        os.path.join(temporary_directory, "layout.svg"), compared[mode]
    )

    with open(path, "r") as stream:
        content = stream.read()

    assert content.startswith("<?xml")
    assert "</svg>" in content


def test_render_svg_exists(temporary_file, compared):
    """Fail to render into an existing file."""
    with pytest.raises(smtflow.exception.FileExists):
        smtflow.report.render_svg(temporary_file, compared["improved"])


def test_emit_report(temporary_directory, compared):
    """Export report in every requested format."""
    report = smtflow.report.FlowReport(compared, 0, "hash")

    paths = smtflow.report.emit_report(
        report,
        report_path=os.path.join(temporary_directory, "report.json"),
        svg_path=os.path.join(temporary_directory, "layout.svg"),
        result=compared["improved"]
    )

    assert list(paths.keys()) == ["json", "svg"]

    with open(paths["json"], "r") as stream:
        assert json.load(stream) == json.loads(report.encode())

    assert not os.path.exists(os.path.join(temporary_directory, "table.txt"))


def test_emit_report_nothing(compared):
    """Export nothing when no path is requested."""
    report = smtflow.report.FlowReport(compared, 0, "hash")
    assert smtflow.report.emit_report(report) == {}


def test_emit_report_svg_without_result(temporary_directory, compared):
    """Fail to render a report without flow result."""
    report = smtflow.report.FlowReport(compared, 0, "hash")

    with pytest.raises(smtflow.exception.ContractError) as error:
        smtflow.report.emit_report(
            report, svg_path=os.path.join(temporary_directory, "layout.svg")
        )

    assert "A flow result is required to render" in str(error.value)
