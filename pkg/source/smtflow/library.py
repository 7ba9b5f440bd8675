# :coding: utf-8

import collections
import os

import ujson

import smtflow.exception
import smtflow.symbol

#: Ordered parameters of a variant record.
PARAMETERS = ["area", "leak_standby", "d0", "r_drive", "c_in", "i_peak"]

#: Path to the default library shipped with the package.
DEFAULT_PATH = os.path.join(
    os.path.dirname(__file__), "package_data", "library.json"
)


#: Electrical characterization of one cell kind variant.
#:
#: Units are µm² (area), nA (leak_standby), ps (d0), kΩ (r_drive),
#: fF per input pin (c_in) and mA (i_peak).
Parameters = collections.namedtuple("Parameters", PARAMETERS)


def load(path=None):
    """Load and return a library from *path*.

    :param path: :term:`JSON` file path which contains a library mapping.
        Default is the library shipped with the package.

    :return: Instance of :class:`Library`.

    """
    with open(path or DEFAULT_PATH, "r") as stream:
        return Library(ujson.load(stream))


def characterized_variant(variant):
    """Return variant holding the characterization of *variant*.

    MT variants share the low threshold parameters.

    Example::

        >>> characterized_variant("mt_with_vgnd")
        "low_vth"

    """
    if variant in smtflow.symbol.MT_VARIANTS:
        return smtflow.symbol.LOW_VTH
    return variant


class CellKind(object):
    """Characterized cell kind."""

    def __init__(self, name, data):
        """Initialize cell kind *name* from *data* mapping.

        The mapping should be in the form of::

            {
                "function": "NAND2",
                "inputs": ["A", "B"],
                "output": "Y",
                "variants": {
                    "high_vth": {
                        "area": 1.6, "leak_standby": 1.4, "d0": 30.8,
                        "r_drive": 1.44, "c_in": 1.8, "i_peak": 0.14
                    },
                    "low_vth": {...}
                }
            }

        """
        self._name = name
        self._function = data["function"]
        self._inputs = tuple(data.get("inputs", []))
        self._output = data.get("output")
        self._variants = {
            variant: Parameters(**{
                key: float(value[key]) for key in PARAMETERS
            })
            for variant, value in data.get("variants", {}).items()
        }

    def __repr__(self):
        """Representing a cell kind."""
        return "<CellKind name='{}' function='{}'>".format(
            self._name, self._function
        )

    @property
    def name(self):
        """Return kind name."""
        return self._name

    @property
    def function(self):
        """Return logic function tag (e.g. "NAND2")."""
        return self._function

    @property
    def inputs(self):
        """Return tuple of ordered input pin names."""
        return self._inputs

    @property
    def output(self):
        """Return output pin name or None."""
        return self._output

    @property
    def pins(self):
        """Return tuple of all pin names, output last."""
        if self._output is None:
            return self._inputs
        return self._inputs + (self._output,)

    @property
    def variants(self):
        """Return sorted list of characterized variants."""
        return sorted(self._variants.keys())

    def has_variant(self, variant):
        """Indicate whether *variant* can be resolved for this kind."""
        return characterized_variant(variant) in self._variants

    def parameters(self, variant):
        """Return :class:`Parameters` for *variant*.

        MT variants use the low threshold delay parameters.

        :raise: :exc:`smtflow.exception.CharacterizationError` if the
            variant is not characterized.

        """
        parameters = self._variants.get(characterized_variant(variant))
        if parameters is None:
            raise smtflow.exception.CharacterizationError(self._name, variant)
        return parameters

    def data(self):
        """Return ordered mapping of the kind."""
        return collections.OrderedDict([
            ("function", self._function),
            ("inputs", list(self._inputs)),
            ("output", self._output),
            ("variants", collections.OrderedDict([
                (variant, collections.OrderedDict([
                    (key, getattr(self._variants[variant], key))
                    for key in PARAMETERS
                ]))
                for variant in self.variants
            ])),
        ])


class Library(object):
    """Mapping of cell kinds."""

    def __init__(self, data):
        """Initialize library from *data* mapping of kind name to record.

        :raise: :exc:`smtflow.exception.DesignError` if a kind has an
            unknown function tag.

        """
        self._kinds = {}

        for name, record in data.items():
            if record.get("function") not in smtflow.symbol.FUNCTIONS:
                raise smtflow.exception.DesignError(
                    "Cell kind '{}' has an unknown function '{}'.".format(
                        name, record.get("function")
                    )
                )

            self._kinds[name] = CellKind(name, record)

    def __repr__(self):
        """Representing a library."""
        return "<Library kinds={}>".format(len(self._kinds))

    def __contains__(self, name):
        """Indicate whether *name* is a kind of the library."""
        return name in self._kinds

    def __eq__(self, other):
        """Compare with *other*."""
        return isinstance(other, Library) and self.data() == other.data()

    def __ne__(self, other):
        """Compare with *other*."""
        return not self.__eq__(other)

    @property
    def kinds(self):
        """Return list of :class:`CellKind` sorted by name."""
        return [self._kinds[name] for name in sorted(self._kinds)]

    def get(self, name):
        """Return :class:`CellKind` *name*.

        :raise: :exc:`smtflow.exception.UnresolvedReference` if the kind does
            not exist.

        """
        kind = self._kinds.get(name)
        if kind is None:
            raise smtflow.exception.UnresolvedReference("cell kind", name)
        return kind

    def find(self, function):
        """Return first :class:`CellKind` implementing *function*.

        Kinds are looked up in name order.

        :raise: :exc:`smtflow.exception.UnresolvedReference` if no kind
            implements *function*.

        """
        for kind in self.kinds:
            if kind.function == function:
                return kind

        raise smtflow.exception.UnresolvedReference(
            "cell kind for function", function
        )

    def data(self):
        """Return ordered mapping of the library."""
        return collections.OrderedDict([
            (kind.name, kind.data()) for kind in self.kinds
        ])
