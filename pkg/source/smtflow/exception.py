# :coding: utf-8

import traceback


class SmtError(Exception):
    """Base class for flow specific errors."""

    #: Process exit code returned by the command line for this error.
    exit_code = 1

    def __init__(self, message):
        """Initialize with *message*.

        :param message: Message describing the issue.

        """
        self.message = message
        self.traceback = traceback.format_exc()

    def __str__(self):
        """Return human readable representation."""
        return str(self.message)

    def __eq__(self, other):
        """Compare with *other*."""
        if isinstance(other, SmtError):
            return self.message == other.message
        return False

    def __hash__(self):
        """Return hash from message."""
        return hash(self.message)


class DesignError(SmtError):
    """Raise when a design is incorrect."""

    exit_code = 2

    def __init__(self, message):
        """Initialize with *message*.

        :param message: Message describing the issue.

        """
        super(DesignError, self).__init__(message=message)


class DesignSyntaxError(DesignError):
    """Raise when a design file cannot be decoded."""

    def __init__(self, message, line=None, column=None):
        """Initialize with *message* and location.

        :param message: Message describing the issue.

        :param line: Line number of the issue if known. Default is None.

        :param column: Column number of the issue if known. Default is None.

        """
        self.line = line
        self.column = column

        if line is not None:
            message = "line {}, column {}: {}".format(line, column, message)

        super(DesignSyntaxError, self).__init__(
            message="Syntax error in design file: {}".format(message)
        )


class UnresolvedReference(DesignError):
    """Raise when a design entity references an undeclared entity."""

    def __init__(self, kind, identifier, referrer=None):
        """Initialize with unresolved *kind* and *identifier*.

        :param kind: Kind of the entity referenced (e.g. "net").

        :param identifier: Identifier of the entity which cannot be found.

        :param referrer: Identifier of the entity holding the reference.
            Default is None.

        """
        self.kind = kind
        self.identifier = identifier

        message = "Unresolved {} reference '{}'".format(kind, identifier)
        if referrer is not None:
            message += " in '{}'".format(referrer)

        super(UnresolvedReference, self).__init__(message=message + ".")


class DuplicateIdentifier(DesignError):
    """Raise when an identifier is declared several times."""

    def __init__(self, kind, identifier):
        """Initialize with *kind* and duplicated *identifier*.

        :param kind: Kind of the entity (e.g. "cell").

        :param identifier: Duplicated identifier.

        """
        self.kind = kind
        self.identifier = identifier

        super(DuplicateIdentifier, self).__init__(
            message="Duplicate {} identifier '{}'.".format(kind, identifier)
        )


class ValidationError(DesignError):
    """Raise when a design does not satisfy its invariants."""

    def __init__(self, diagnostics):
        """Initialize with a list of *diagnostics*.

        :param diagnostics: List of :class:`smtflow.validator.Diagnostic`
            instances.

        """
        self.diagnostics = diagnostics

        super(ValidationError, self).__init__(
            message=(
                "The design is invalid:\n{}".format(
                    "\n".join(
                        "  * {}".format(diagnostic)
                        for diagnostic in diagnostics
                    )
                )
            )
        )


class CharacterizationError(SmtError):
    """Raise when a cell kind misses parameters for a variant."""

    exit_code = 2

    def __init__(self, kind, variant):
        """Initialize with cell *kind* name and *variant*.

        :param kind: Name of the cell kind.

        :param variant: Threshold variant which is not characterized.

        """
        self.kind = kind
        self.variant = variant

        super(CharacterizationError, self).__init__(
            message="Cell kind '{}' is not characterized for variant "
            "'{}'.".format(kind, variant)
        )


class ContractError(SmtError):
    """Raise when an operation is called outside of its preconditions."""

    exit_code = 2

    def __init__(self, message):
        """Initialize with *message*.

        :param message: Message describing the issue.

        """
        super(ContractError, self).__init__(message=message)


class ConfigError(SmtError):
    """Raise when a configuration file is incorrect."""

    exit_code = 2

    def __init__(self, message):
        """Initialize with *message*.

        :param message: Message describing the issue.

        """
        super(ConfigError, self).__init__(message=message)


class InfeasibleTiming(SmtError):
    """Raise when timing constraints cannot be met."""

    exit_code = 3

    def __init__(self, message, endpoints=None):
        """Initialize with *message* and violating *endpoints*.

        :param message: Message describing the issue.

        :param endpoints: List of :class:`smtflow.timing.Endpoint` instances
            which violate the constraint. Default is None.

        """
        self.endpoints = endpoints or []

        if len(self.endpoints) > 0:
            message += "\n{}".format(
                "\n".join(
                    "  * {} [slack: {} ps]".format(
                        endpoint.identifier, endpoint.slack
                    )
                    for endpoint in self.endpoints[:5]
                )
            )

        super(InfeasibleTiming, self).__init__(message=message)


class HoldFixError(InfeasibleTiming):
    """Raise when hold violations remain after the ECO iteration cap."""

    def __init__(self, endpoints):
        """Initialize with residual violating *endpoints*.

        :param endpoints: List of :class:`smtflow.timing.Endpoint` instances
            still violating the hold constraint.

        """
        super(HoldFixError, self).__init__(
            message="Hold violations remain after the ECO iteration cap:",
            endpoints=[]
        )

        self.endpoints = endpoints
        self.message += "\n{}".format(
            "\n".join(
                "  * {} [hold slack: {} ps]".format(
                    endpoint.identifier, endpoint.hold_slack
                )
                for endpoint in endpoints
            )
        )


class InfeasibleWire(SmtError):
    """Raise when the VGND wire alone exceeds the bounce limit."""

    exit_code = 4

    def __init__(self, wire_bounce, limit):
        """Initialize with *wire_bounce* and bounce *limit* in Volts.

        :param wire_bounce: Voltage drop along the worst VGND wire.

        :param limit: Bounce limit which cannot be satisfied.

        """
        self.wire_bounce = wire_bounce
        self.limit = limit

        super(InfeasibleWire, self).__init__(
            message="VGND wire bounce {:.6g} V reaches the limit "
            "{:.6g} V.".format(wire_bounce, limit)
        )


class ClusteringError(SmtError):
    """Raise when a switch structure cannot be constructed."""

    exit_code = 4

    def __init__(self, message):
        """Initialize with *message*.

        :param message: Message describing the issue.

        """
        super(ClusteringError, self).__init__(message=message)


class FileExists(SmtError):
    """Raise when a file already exists."""

    exit_code = 5

    def __init__(self, path):
        """Initialize with *path*.

        :param path: File path.

        """
        super(FileExists, self).__init__(
            message="{!r} already exists.".format(path)
        )


class OutputError(SmtError):
    """Raise when a file cannot be read or written."""

    exit_code = 5

    def __init__(self, path, reason):
        """Initialize with *path* and *reason*.

        :param path: File path.

        :param reason: Description of the underlying error.

        """
        super(OutputError, self).__init__(
            message="Impossible to access {!r} [{}]".format(path, reason)
        )
