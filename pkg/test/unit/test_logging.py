# :coding: utf-8

import getpass
import importlib
import logging
import os
import tempfile

import pytest

import smtflow.config
import smtflow.exception
import smtflow.history
import smtflow.logging
import smtflow.symbol


@pytest.fixture(autouse=True)
def mock_getuser(mocker):
    """Mock getpass.getuser function."""
    mocker.patch.object(getpass, "getuser", return_value="__USER__")


@pytest.fixture()
def mocked_gettempdir(mocker):
    """Return mocked tempfile.gettempdir function."""
    return mocker.patch.object(tempfile, "gettempdir")


@pytest.fixture()
def mocked_config_fetch(mocker):
    """Return mocked smtflow.config.fetch function."""
    return mocker.patch.object(smtflow.config, "fetch")


@pytest.fixture()
def mocked_dict_config(mocker):
    """Return mocked logging.config.dictConfig function."""
    return mocker.patch.object(logging.config, "dictConfig")


@pytest.fixture()
def mocked_record_action(mocker):
    """Return mocked smtflow.history.record_action function."""
    return mocker.patch.object(smtflow.history, "record_action")


def _expected_config(directory, level=logging.INFO):
    """Return expected logging configuration."""
    return {
        "version": 1,
        "root": {
            "handlers": ["console", "file"],
            "level": logging.DEBUG
        },
        "formatters": {
            "standard": {
                "class": "coloredlogs.ColoredFormatter",
                "format": "%(message)s"
            },
            "detailed": {
                "class": "logging.Formatter",
                "format": "%(asctime)s - %(levelname)s - %(name)s - %(message)s"
            }
        },
        "handlers": {
            "console": {
                "class": "logging.StreamHandler",
                "formatter": "standard",
                "stream": "ext://sys.stdout",
                "level": level
            },
            "file": {
                "class": "logging.handlers.RotatingFileHandler",
                "formatter": "detailed",
                "level": logging.INFO,
                "filename": os.path.join(
                    directory, "smtflow", "logs", "__USER__.log"
                ),
                "maxBytes": 10485760,
                "backupCount": 20,
            }
        }
    }


@pytest.mark.parametrize("options, level", [
    ({}, logging.INFO),
    ({"console_level": "info"}, logging.INFO),
    ({"console_level": "debug"}, logging.DEBUG),
    ({"console_level": "warning"}, logging.WARNING),
    ({"console_level": "error"}, logging.ERROR),
], ids=[
    "simple",
    "info",
    "debug",
    "warning",
    "error",
])
def test_initiate(
    temporary_directory, mocked_gettempdir, mocked_config_fetch,
    mocked_dict_config, options, level
):
    """Initiate logger configuration."""
    mocked_gettempdir.return_value = temporary_directory
    mocked_config_fetch.return_value = {}
    importlib.reload(smtflow.logging)

    assert not os.path.isdir(smtflow.logging.PATH)

    smtflow.logging.initiate(**options)

    assert os.path.isdir(smtflow.logging.PATH)
    assert oct(os.stat(smtflow.logging.PATH).st_mode) == oct(0o40777)

    mocked_dict_config.assert_called_once_with(
        _expected_config(temporary_directory, level=level)
    )


def test_initiate_with_config(
    temporary_directory, mocked_gettempdir, mocked_config_fetch,
    mocked_dict_config
):
    """Initiate logger configuration with custom config."""
    mocked_gettempdir.return_value = temporary_directory
    mocked_config_fetch.return_value = {
        "logging": {
            "root": {
                "handlers": ["console"]
            },
            "formatters": {
                "standard": {
                    "format": "%(asctime)s - %(message)s"
                }
            }
        }
    }
    importlib.reload(smtflow.logging)

    smtflow.logging.initiate()

    expected = _expected_config(temporary_directory)
    expected["root"]["handlers"] = ["console"]
    expected["formatters"]["standard"]["format"] = "%(asctime)s - %(message)s"

    mocked_dict_config.assert_called_once_with(expected)


def test_initiate_with_existing_folder(
    temporary_directory, mocked_gettempdir, mocked_config_fetch,
    mocked_dict_config
):
    """Initiate logger configuration with existing folder."""
    path = os.path.join(temporary_directory, "smtflow", "logs")

    os.umask(0)
    os.makedirs(path)

    mocked_gettempdir.return_value = temporary_directory
    mocked_config_fetch.return_value = {}
    importlib.reload(smtflow.logging)

    assert os.path.isdir(smtflow.logging.PATH)

    smtflow.logging.initiate()

    assert os.path.isdir(smtflow.logging.PATH)
    assert oct(os.stat(smtflow.logging.PATH).st_mode) == oct(0o40777)


def test_stage(mocker, logger, mocked_record_action):
    """Log, time and record a stage."""
    stages = []

    with smtflow.logging.stage("assign", stages):
        pass

    assert stages == ["assign"]

    assert logger.info.call_count == 1
    args, _ = logger.info.call_args
    assert args[0].startswith("Stage 'assign' completed [")

    mocked_record_action.assert_called_once_with(
        smtflow.symbol.FLOW_STAGE_ACTION, stage="assign", duration=mocker.ANY
    )


def test_stage_error(logger, mocked_record_action):
    """Log stage name when an error is raised within a stage."""
    stages = []

    with pytest.raises(smtflow.exception.ClusteringError):
        with smtflow.logging.stage("cluster", stages):
            raise smtflow.exception.ClusteringError("Oops.")

    assert stages == []

    logger.error.assert_called_once_with("Stage 'cluster' failed.")
    logger.info.assert_not_called()
    mocked_record_action.assert_not_called()
