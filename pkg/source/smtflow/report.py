# :coding: utf-8

import collections
import io
import json

import matplotlib
matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy  # noqa: E402
import scipy.spatial  # noqa: E402

import smtflow.exception
import smtflow.filesystem
import smtflow.symbol
import smtflow.utility

#: Ordered component counters of a mode summary.
COUNTS = ["hvt", "lvt", "mt", "holders", "switches", "mte_buffers"]


def _holder_parameters(design):
    """Return :class:`~smtflow.library.Parameters` of the holder kind."""
    return design.library.find(smtflow.symbol.HOLDER).parameters(
        smtflow.symbol.HIGH_VTH
    )


def cell_leakage(design, identifier):
    """Return standby leakage in nA of cell *identifier*.

    MT-cells connected to a shared switch do not leak in standby as their
    ground path is cut by the switch. Switches leak proportionally to their
    width and conventional MT-cells leak through their built-in switch and
    holder.

    """
    constraints = design.constraints
    cell = design.cells[identifier]
    function = design.function(identifier)

    if function == smtflow.symbol.SWITCH:
        return constraints.l_sw * cell.width

    if cell.variant == smtflow.symbol.MT_BUILT_IN:
        return (
            constraints.l_sw * cell.width
            + _holder_parameters(design).leak_standby
        )

    if cell.variant in smtflow.symbol.MT_VARIANTS:
        return 0.0

    return design.parameters(identifier).leak_standby


def cell_area(design, identifier):
    """Return area in µm² of cell *identifier*."""
    constraints = design.constraints
    cell = design.cells[identifier]
    function = design.function(identifier)

    if function == smtflow.symbol.SWITCH:
        return constraints.a_sw * cell.width

    area = design.parameters(identifier).area

    if cell.variant == smtflow.symbol.MT_BUILT_IN:
        area += constraints.a_sw * cell.width + _holder_parameters(design).area

    return area


def standby_leakage(design):
    """Return total standby leakage in nA of *design*."""
    return sum(
        cell_leakage(design, identifier) for identifier in sorted(design.cells)
    )


def total_area(design):
    """Return total cell area in µm² of *design*."""
    return sum(
        cell_area(design, identifier) for identifier in sorted(design.cells)
    )


def component_counts(design):
    """Return ordered mapping of component counts of *design*.

    Conventional MT-cells count as one holder and one switch each.

    """
    counts = collections.OrderedDict((key, 0) for key in COUNTS)

    for identifier in sorted(design.cells):
        cell = design.cells[identifier]
        function = design.function(identifier)

        if function == smtflow.symbol.HOLDER:
            counts["holders"] += 1
        elif function == smtflow.symbol.SWITCH:
            counts["switches"] += 1
        elif function == smtflow.symbol.MTEBUF:
            counts["mte_buffers"] += 1
        elif cell.variant == smtflow.symbol.HIGH_VTH:
            counts["hvt"] += 1
        elif cell.variant == smtflow.symbol.LOW_VTH:
            counts["lvt"] += 1
        else:
            counts["mt"] += 1

            if cell.variant == smtflow.symbol.MT_BUILT_IN:
                counts["holders"] += 1
                counts["switches"] += 1

    return counts


def summarize(result):
    """Return ordered summary mapping of flow *result*."""
    design = result.design
    annotation = result.annotation

    return collections.OrderedDict([
        ("total_area", total_area(design)),
        ("standby_leakage", standby_leakage(design)),
        ("worst_setup_slack", annotation.worst_setup_slack),
        ("worst_hold_slack", annotation.worst_hold_slack),
        ("counts", component_counts(design)),
        ("bounce_limit", result.bounce_limit),
    ])


def _percentage(value, reference):
    """Return *value* in percent of *reference* rounded to 2 decimals."""
    if reference == 0:
        return 100.0 if value == 0 else float("inf")
    return round(100.0 * value / reference, 2)


class FlowReport(object):
    """Area, leakage and timing of one or several flow modes."""

    def __init__(self, results, seed, config_hash):
        """Initialize report.

        :param results: Mapping of mode to :class:`smtflow.flow.FlowResult`.

        :param seed: Seed of the analyzed design.

        :param config_hash: :term:`SHA-1` digest of the configuration.

        """
        self._modes = [
            mode for mode in smtflow.symbol.MODES if mode in results
        ]
        self._summaries = collections.OrderedDict(
            (mode, summarize(results[mode])) for mode in self._modes
        )
        self._stages = collections.OrderedDict(
            (mode, list(results[mode].stages)) for mode in self._modes
        )
        self._seed = seed
        self._config_hash = config_hash

    def __repr__(self):
        """Representing a report."""
        return "<FlowReport modes={}>".format(self._modes)

    @property
    def modes(self):
        """Return ordered list of reported modes."""
        return list(self._modes)

    def summary(self, mode):
        """Return summary mapping of *mode*."""
        return self._summaries[mode]

    def normalized(self):
        """Return area and leakage of each mode in percent of Dual-Vth.

        An empty mapping is returned when the Dual-Vth mode is not reported.

        """
        if smtflow.symbol.DUAL_VTH_MODE not in self._summaries:
            return collections.OrderedDict()

        reference = self._summaries[smtflow.symbol.DUAL_VTH_MODE]

        return collections.OrderedDict(
            (
                mode, collections.OrderedDict([
                    ("area", _percentage(
                        summary["total_area"], reference["total_area"]
                    )),
                    ("leakage", _percentage(
                        summary["standby_leakage"],
                        reference["standby_leakage"]
                    )),
                ])
            )
            for mode, summary in self._summaries.items()
        )

    def data(self):
        """Return ordered mapping of the report."""
        return collections.OrderedDict([
            ("format", smtflow.symbol.FORMAT_VERSION),
            ("metadata", collections.OrderedDict([
                ("seed", self._seed),
                ("config_hash", self._config_hash),
                ("bounce_limit", collections.OrderedDict(
                    (mode, summary["bounce_limit"])
                    for mode, summary in self._summaries.items()
                )),
                ("stages", self._stages),
            ])),
            ("modes", self._summaries),
            ("normalized", self.normalized()),
        ])

    def encode(self):
        """Return :term:`JSON` representation of the report."""
        return json.dumps(
            self.data(), indent=4, separators=(",", ": "), ensure_ascii=False
        ) + "\n"

    def table(self):
        """Return comparison table of the report.

        Area and leakage are given in percent of the Dual-Vth mode when it
        is reported, as raw values otherwise.

        Example::

            Technique   Area      Leakage
            ---------   -------   -------
            Dual-Vth    100.00%   100.00%
            Con.-SMT    164.84%   14.58%
            Imp.-SMT    133.18%   9.42%

        """
        normalized = self.normalized()
        columns = create_columns(["Technique", "Area", "Leakage"])

        for mode in self._modes:
            create_row(smtflow.symbol.MODE_LABELS[mode], columns[0])

            if len(normalized) > 0:
                create_row(
                    "{:.2f}%".format(normalized[mode]["area"]), columns[1]
                )
                create_row(
                    "{:.2f}%".format(normalized[mode]["leakage"]), columns[2]
                )

            else:
                summary = self._summaries[mode]
                create_row(
                    "{:.2f} um2".format(summary["total_area"]), columns[1]
                )
                create_row(
                    "{:.2f} nA".format(summary["standby_leakage"]), columns[2]
                )

        return format_table(columns)


def create_config_hash(constraints, settings):
    """Return :term:`SHA-1` digest of *constraints* and flow *settings*."""
    return smtflow.utility.compute_hash({
        "constraints": dict(constraints._asdict()),
        "flow": dict(settings),
    })


def create_columns(titles):
    """Create columns from *titles*."""
    return [
        {"size": len(title), "rows": [], "title": title} for title in titles
    ]


def create_row(element, column, resize=True):
    """Add row with *element* in *column*."""
    _element = str(element)
    column["rows"].append(_element)

    if resize:
        column["size"] = max(len(_element), column["size"])


def format_table(columns):
    """Return text table from *columns*."""
    lines = [
        "   ".join(
            column["title"].ljust(column["size"]) for column in columns
        ).rstrip(),
        "   ".join("-" * column["size"] for column in columns),
    ]

    for row in zip(*[column["rows"] for column in columns]):
        lines.append(
            "   ".join(
                row[index].ljust(columns[index]["size"])
                for index in range(len(row))
            ).rstrip()
        )

    return "\n".join(lines) + "\n"


def export_report(path, report, overwrite=False):
    """Export *report* as :term:`JSON` into *path* and return the path."""
    return smtflow.filesystem.export(
        path, report.encode(), overwrite=overwrite
    )


def export_table(path, report, overwrite=False):
    """Export comparison table of *report* into *path* and return the path."""
    return smtflow.filesystem.export(
        path, report.table(), overwrite=overwrite
    )


def emit_report(
    report, report_path=None, table_path=None, svg_path=None, result=None,
    overwrite=False
):
    """Export *report* in every requested format.

    :param report: Instance of :class:`FlowReport`.

    :param report_path: Path of the :term:`JSON` report. Default is None.

    :param table_path: Path of the comparison table. Default is None.

    :param svg_path: Path of the :term:`SVG` rendering of *result*. Default is
        None.

    :param result: Instance of :class:`smtflow.flow.FlowResult` to render.
        Required when *svg_path* is set.

    :param overwrite: Indicate whether existing files can be overwritten.
        Default is False.

    :return: Ordered mapping of format name ("json", "table", "svg") to
        exported path.

    :raise: :exc:`smtflow.exception.ContractError` if *svg_path* is set
        without *result*.

    :raise: :exc:`smtflow.exception.FileExists` if a path exists and
        *overwrite* is False.

    """
    if svg_path is not None and result is None:
        raise smtflow.exception.ContractError(
            "A flow result is required to render '{}'.".format(svg_path)
        )

    paths = collections.OrderedDict()

    if report_path is not None:
        paths["json"] = export_report(
            report_path, report, overwrite=overwrite
        )

    if table_path is not None:
        paths["table"] = export_table(table_path, report, overwrite=overwrite)

    if svg_path is not None:
        paths["svg"] = render_svg(svg_path, result, overwrite=overwrite)

    return paths


def export_clusters(path, structure, overwrite=False):
    """Export cluster dump of *structure* into *path* and return the path.

    An empty dump is written when *structure* is None.

    """
    data = collections.OrderedDict([
        ("format", smtflow.symbol.FORMAT_VERSION), ("clusters", [])
    ])
    if structure is not None:
        data = structure.data()

    return smtflow.filesystem.export(
        path,
        json.dumps(
            data, indent=4, separators=(",", ": "), ensure_ascii=False
        ) + "\n",
        overwrite=overwrite
    )


def render_svg(path, result, overwrite=False):
    """Render flow *result* as :term:`SVG` into *path* and return the path.

    Cells are drawn at their position and coloured by threshold variant,
    clusters are outlined by the convex hull of their members and the MTE
    distribution tree is drawn from each MTE buffer to its sinks.

    :raise: :exc:`smtflow.exception.FileExists` if *path* exists and
        *overwrite* is False.

    """
    design = result.design
    colors = {
        smtflow.symbol.HIGH_VTH: "tab:blue",
        smtflow.symbol.LOW_VTH: "tab:red",
        smtflow.symbol.MT_NO_VGND: "tab:orange",
        smtflow.symbol.MT_WITH_VGND: "tab:orange",
        smtflow.symbol.MT_BUILT_IN: "tab:purple",
    }

    def _micrometers(position):
        """Return *position* in micrometers."""
        return (
            smtflow.utility.to_micrometers(position[0]),
            smtflow.utility.to_micrometers(position[1]),
        )

    figure = plt.figure(figsize=(10, 8))
    axes = figure.gca()

    x_min, y_min, x_max, y_max = [
        smtflow.utility.to_micrometers(value) for value in design.die
    ]
    axes.plot(
        [x_min, x_max, x_max, x_min, x_min],
        [y_min, y_min, y_max, y_max, y_min],
        color="black", linewidth=0.8
    )

    for variant, color in sorted(colors.items()):
        points = [
            _micrometers(design.cells[identifier].position)
            for identifier in design.logic_cells()
            if design.cells[identifier].variant == variant
        ]
        if len(points) > 0:
            xs, ys = zip(*points)
            axes.scatter(xs, ys, c=color, s=8, label=variant)

    if result.structure is not None:
        for cluster in result.structure.clusters:
            points = numpy.array([
                _micrometers(design.cells[member].position)
                for member in cluster.members
            ])
            _draw_hull(axes, points)

        switches = [
            _micrometers(cluster.position)
            for cluster in result.structure.clusters
        ]
        if len(switches) > 0:
            xs, ys = zip(*switches)
            axes.scatter(
                xs, ys, c="black", marker="s", s=24, label="switch"
            )

    mte_nets = design.mte_tree_nets()
    for net in sorted(mte_nets):
        driver = design.driver(net)
        if driver is None:
            continue

        origin = _micrometers(design.position(driver))
        for sink in design.sinks(net):
            target = _micrometers(design.position(sink))
            axes.plot(
                [origin[0], target[0]], [origin[1], target[1]],
                color="tab:green", linewidth=0.4, alpha=0.6
            )

    axes.set_title(
        "{} [{}]".format(
            smtflow.symbol.MODE_LABELS[result.mode], design.flow_stage
        )
    )
    axes.set_xlabel("X (um)")
    axes.set_ylabel("Y (um)")
    axes.grid(True, alpha=0.3)
    axes.legend(loc="upper right")

    stream = io.StringIO()
    matplotlib.rcParams["svg.hashsalt"] = "smtflow"
    figure.savefig(stream, format="svg", metadata={"Date": None})
    plt.close(figure)

    return smtflow.filesystem.export(
        path, stream.getvalue(), overwrite=overwrite
    )


def _draw_hull(axes, points):
    """Draw outline of *points* on *axes*.

    Degenerate hulls are drawn as a segment or a point.

    """
    unique = numpy.unique(points, axis=0)

    if len(unique) == 1:
        axes.scatter(
            unique[:, 0], unique[:, 1], facecolors="none",
            edgecolors="tab:gray", s=40
        )
        return

    try:
        hull = scipy.spatial.ConvexHull(unique)

    except scipy.spatial.QhullError:
        order = unique[numpy.lexsort((unique[:, 1], unique[:, 0]))]
        axes.plot(
            [order[0, 0], order[-1, 0]], [order[0, 1], order[-1, 1]],
            color="tab:gray", linewidth=1.0
        )
        return

    vertices = list(hull.vertices) + [hull.vertices[0]]
    axes.plot(
        unique[vertices, 0], unique[vertices, 1],
        color="tab:gray", linewidth=1.0
    )
