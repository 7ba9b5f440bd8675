# :coding: utf-8

import copy
import logging
import os

import toml

import smtflow.exception
import smtflow.filesystem
import smtflow.utility

#: Global configuration mapping.
_CONFIG = None


def fetch(refresh=False):
    """Fetch configuration mapping.

    The configuration created is cached for future usage so that configuration
    previously fetched will be returned.

    :param refresh: Indicate whether the configuration should be re-created
        instead of using configuration previously created whenever possible.
        Default is False.

    :return: Configuration mapping.

    """
    logger = logging.getLogger(__name__ + ".fetch")

    global _CONFIG

    if _CONFIG is not None and not refresh:
        return _CONFIG

    config = {}

    # Fetch all configurations paths.
    root = os.path.dirname(__file__)
    paths = [
        os.path.join(root, "package_data", "config.toml"),
        os.path.join(os.path.expanduser("~"), ".smtflow", "config.toml")
    ]

    for file_path in paths:
        if not os.path.isfile(file_path):
            continue

        try:
            smtflow.utility.deep_update(config, toml.load(file_path))
        except Exception as error:
            logger.warning(
                "Failed to load configuration from \"{0}\" [{1}]"
                .format(file_path, error)
            )

    _CONFIG = config
    return _CONFIG


def load(path):
    """Return run configuration mapping merged over the fetched one.

    Only the "constraints" and "flow" tables of *path* are taken into
    account.

    :param path: Path to a :term:`TOML` configuration file.

    :return: Configuration mapping.

    :raise: :exc:`smtflow.exception.OutputError` if *path* cannot be read.

    :raise: :exc:`smtflow.exception.ConfigError` if *path* is not a valid
        configuration file.

    """
    content = smtflow.filesystem.read(path)

    try:
        data = toml.loads(content)
    except toml.TomlDecodeError as error:
        raise smtflow.exception.ConfigError(
            "Impossible to decode configuration {!r} [{}]".format(path, error)
        )

    unknown = sorted(set(data.keys()).difference(["constraints", "flow"]))
    if len(unknown) > 0:
        raise smtflow.exception.ConfigError(
            "Unknown configuration tables in {!r}: {}".format(
                path, ", ".join(unknown)
            )
        )

    config = copy.deepcopy(fetch())
    smtflow.utility.deep_update(config, data)
    return config


def flow_settings(config):
    """Return flow settings mapping from *config*.

    Missing settings are replaced by their defaults and values are
    checked.

    :raise: :exc:`smtflow.exception.ConfigError` if a value is out of range.

    """
    settings = {
        "detour_max": 0.25,
        "bounce_share": 0.5,
        "critical_margin": 0.05,
        "hold_fix_iterations": 100,
        "bounce_search_steps": 32,
    }
    settings.update(config.get("flow", {}))

    unknown = sorted(
        set(settings.keys()).difference([
            "detour_max", "bounce_share", "critical_margin",
            "hold_fix_iterations", "bounce_search_steps"
        ])
    )
    if len(unknown) > 0:
        raise smtflow.exception.ConfigError(
            "Unknown flow settings: {}".format(", ".join(unknown))
        )

    if settings["detour_max"] < 0:
        raise smtflow.exception.ConfigError(
            "Flow setting 'detour_max' must be positive."
        )

    if not 0 < settings["bounce_share"] <= 1:
        raise smtflow.exception.ConfigError(
            "Flow setting 'bounce_share' must be in (0, 1]."
        )

    if not 0 <= settings["critical_margin"] < 1:
        raise smtflow.exception.ConfigError(
            "Flow setting 'critical_margin' must be in [0, 1)."
        )

    for key in ["hold_fix_iterations", "bounce_search_steps"]:
        if int(settings[key]) != settings[key] or settings[key] < 1:
            raise smtflow.exception.ConfigError(
                "Flow setting {!r} must be a positive integer.".format(key)
            )

    return settings
