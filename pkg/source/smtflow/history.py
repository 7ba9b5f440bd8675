# :coding: utf-8

import collections
import datetime
import getpass
import json
import platform
import time
import traceback

import smtflow.symbol
from ._version import __version__

#: Indicate whether the history should be recorded.
_IS_HISTORY_RECORDED = False

#: Indicate whether actions should only include 'identifier' keyword.
_MINIMAL_ACTIONS_REQUIRED = False

#: Mapping containing the entire flow execution history report.
_HISTORY = {
    "version": __version__,
    "user": None,
    "hostname": None,
    "timestamp": None,
    "timezone": None,
    "command": None,
    "actions": []
}


def get(serialized=False):
    """Return recorded history mapping.

    :param serialized: Indicate whether the returned history should be
        serialized as a :term:`JSON` string. Default is False.

    :return: History mapping - serialized or not - in the form of
        ::

            {
                "version": "0.1.0",
                "user": "john-doe",
                "hostname": "ws123",
                "timestamp": "2020-08-14T10:56:58.529201",
                "timezone": "PDT",
                "command": "smtflow --record /tmp run --design bench.smt",
                "actions": [
                    {"identifier": "FLOW_STAGE", "stage": "assign", ...},
                    ...
                ]
            }

    """
    if serialized:
        return json.dumps(_HISTORY, default=_json_default).encode("utf-8")
    return _HISTORY


def start_recording(command=None, minimal_actions=False):
    """Start recording the flow execution history.

    The execution context (user, host, time) is added to the history and
    actions passed to :func:`record_action` are kept until
    :func:`stop_recording` is called.

    :param command: Command line which is being executed. Default is None.

    :param minimal_actions: Indicate whether actions should only include the
        'identifier' keyword. Default is False.

    """
    global _IS_HISTORY_RECORDED
    _IS_HISTORY_RECORDED = True

    global _MINIMAL_ACTIONS_REQUIRED
    _MINIMAL_ACTIONS_REQUIRED = minimal_actions

    global _HISTORY
    _HISTORY = {
        "version": __version__,
        "user": getpass.getuser(),
        "hostname": platform.node(),
        "timestamp": datetime.datetime.now().isoformat(),
        "timezone": time.tzname[time.daylight],
        "command": command,
        "actions": []
    }


def stop_recording():
    """Stop recording the history."""
    global _IS_HISTORY_RECORDED
    _IS_HISTORY_RECORDED = False


def record_action(identifier, **kwargs):
    """Add an action to the history.

    Designs and switch structures passed as arguments are recorded as a
    snapshot of their data, so later edits of a copy are not reflected in
    the history.

    :param identifier: Action identifier, usually one of the ``*_ACTION``
        constants from :mod:`smtflow.symbol`.

    .. warning::

        This operation will be discarded if the history is not being
        :func:`recorded <start_recording>`.

    """
    if not _IS_HISTORY_RECORDED:
        return

    action = {"identifier": identifier}

    if not _MINIMAL_ACTIONS_REQUIRED:
        action.update(
            (key, _snapshot(value)) for key, value in kwargs.items()
        )

        if isinstance(action.get("error"), Exception):
            action["traceback"] = traceback.format_exc().splitlines()

    _HISTORY["actions"].append(action)


def stage_durations():
    """Return total duration in seconds of each recorded flow stage.

    Stages are returned in the order of their first execution. A stage
    executed several times, for instance by
    :func:`~smtflow.flow.compare_modes`, is summed.

    """
    durations = collections.OrderedDict()

    for action in _HISTORY["actions"]:
        if action["identifier"] != smtflow.symbol.FLOW_STAGE_ACTION:
            continue

        stage = action.get("stage")
        if stage is None:
            continue

        durations.setdefault(stage, 0.0)
        durations[stage] += action.get("duration", 0.0)

    return durations


def _snapshot(value):
    """Return recordable copy of *value*."""
    from smtflow.design import Design
    from smtflow.switch import SwitchStructure

    if isinstance(value, (Design, SwitchStructure)):
        return _snapshot(value.data())

    elif isinstance(value, (set, frozenset)):
        return sorted(value)

    elif isinstance(value, dict):
        return {key: _snapshot(item) for key, item in value.items()}

    elif isinstance(value, (list, tuple)):
        return [_snapshot(item) for item in value]

    return value


def _json_default(_object):
    """Serialize objects unknown to :func:`json.dumps`."""
    if isinstance(_object, Exception):
        return str(_object)

    raise TypeError("{} is not JSON serializable.".format(_object))
