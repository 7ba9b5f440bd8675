# :coding: utf-8

import os
import re
import shutil

from setuptools import setup, find_packages
from setuptools.command.build_py import build_py

ROOT_PATH = os.path.dirname(os.path.realpath(__file__))
SOURCE_PATH = os.path.join(ROOT_PATH, "source")
README_PATH = os.path.join(ROOT_PATH, "README.rst")

PACKAGE_NAME = "smtflow"

# Read version from source.
with open(
    os.path.join(SOURCE_PATH, PACKAGE_NAME, "_version.py")
) as _version_file:
    VERSION = re.match(
        r".*__version__ = \"(.*?)\"", _version_file.read(), re.DOTALL
    ).group(1)

# Compute dependencies.
INSTALL_REQUIRES = [
    "click >= 8, < 9",
    "coloredlogs >= 14.0, < 16",
    "matplotlib >= 3.4, < 4",
    "networkx >= 2.6, < 4",
    "numpy >= 1.20, < 3",
    "scipy >= 1.8, < 2",
    "toml >= 0.10.1, < 1",
    "ujson >= 5, < 6"
]

DOC_REQUIRES = [
    "sphinx >= 4, < 8",
    "sphinx_rtd_theme >= 1, < 3",
    "lowdown >= 0.1.0, < 2",
    "sphinx-click >= 3"
]

TEST_REQUIRES = [
    "pytest >= 7, < 9",
    "pytest-benchmark >= 3.4, < 5",
    "pytest-cov >= 3, < 6",
    "pytest-mock >= 3.6, < 4",
    "pytest-xdist >= 2.5, < 4"
]

DEV_REQUIRES = [
    "versup >= 1.0.1",
]


class BuildExtended(build_py):
    """Custom command to build package with custom configuration."""

    # Extended options
    user_options = build_py.user_options + [
        (
            "smtflow-config-file=", None,
            "Path to TOML file to embed in installed location as the default "
            "smtflow configuration."
        ),
        (
            "smtflow-library-file=", None,
            "Path to JSON cell library to embed in installed location as the "
            "default library."
        )
    ]

    # Initialize extended options.
    smtflow_config_file = None
    smtflow_library_file = None

    def run(self):
        """Run installation command."""
        build_py.run(self)

        build_path = os.path.join(self.build_lib, PACKAGE_NAME)
        data_path = os.path.join(build_path, "package_data")

        if self.smtflow_config_file is not None:
            shutil.copy(
                self.smtflow_config_file,
                os.path.join(data_path, "config.toml")
            )

        if self.smtflow_library_file is not None:
            shutil.copy(
                self.smtflow_library_file,
                os.path.join(data_path, "library.json")
            )


setup(
    name="smtflow",
    version=VERSION,
    description=(
        "Leakage reduction flow with selective multi-threshold cells sharing "
        "switch transistors."
    ),
    long_description=open(README_PATH).read(),
    keywords="eda, leakage, mtcmos, power gating, static timing analysis",
    packages=find_packages(SOURCE_PATH),
    package_dir={
        "": "source"
    },
    package_data={
        PACKAGE_NAME: ["package_data/*.toml", "package_data/*.json"]
    },
    include_package_data=True,
    python_requires=">= 3.9",
    install_requires=INSTALL_REQUIRES,
    tests_require=TEST_REQUIRES,
    extras_require={
        "doc": DOC_REQUIRES,
        "test": TEST_REQUIRES,
        "dev": DOC_REQUIRES + TEST_REQUIRES + DEV_REQUIRES
    },
    zip_safe=False,
    entry_points={
        "console_scripts": [
            "smtflow = smtflow.__main__:main"
        ]
    },
    cmdclass={
        "build_py": BuildExtended,
    },
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Topic :: Scientific/Engineering :: Electronic Design Automation (EDA)",
    ],
)
