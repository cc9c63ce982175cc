"""
Version and build information for MP-OLSR Sim.

`mpolsr-version` prints the package metadata together with the protocol
defaults a run uses unless a scenario file overrides them.

Author: Alberto Barrago
License: BSD 3-Clause License - 2025
"""

import json
import sys
from typing import Dict

import numpy as np

from mpolsr.config.const import Constant
from mpolsr.config.scenario import Variant
from mpolsr.version import (
    __author__,
    __description__,
    __license__,
    __python_requires__,
    __repository__,
    __requires__,
    __status__,
    __title__,
    __version__,
)


def get_protocol_defaults() -> Dict[str, object]:
    return {
        "hello_interval_s": Constant.hello_interval_s,
        "tc_interval_s": Constant.tc_interval_s,
        "hold_multiplier": Constant.neighb_hold_multiplier,
        "n_routes": Constant.n_routes,
        "fp_multiplier": Constant.fp_multiplier,
        "fe_multiplier": Constant.fe_multiplier,
        "recovery_cap": Constant.recovery_cap,
        "mdc": f"{Constant.mdc_m} of {Constant.mdc_n}",
        "tx_range_m": Constant.tx_range_m,
        "bandwidth_bps": Constant.bandwidth_bps,
    }


def get_version_info() -> Dict[str, object]:
    """
    Return version information as a dictionary.
    """
    return {
        "name": __title__,
        "version": __version__,
        "description": __description__,
        "author": __author__,
        "license": __license__,
        "repository": __repository__,
        "status": __status__,
        "dependencies": __requires__,
        "python_requires": __python_requires__,
        "numpy": np.__version__,
        "variants": [v.value for v in Variant],
        "defaults": get_protocol_defaults(),
    }


def print_version_info(print_json=False):
    """
    Print version information to the console.

    Args:
        print_json: If True, print information in JSON format.
    """
    info = get_version_info()

    if print_json:
        print(json.dumps(info, indent=2))
        return

    print(f"{info['name']} v{info['version']} ({info['status']})")
    print(f"{info['description']}")
    print(f"License: {info['license']}, {info['repository']}")
    print(f"Variants: {', '.join(info['variants'])}")
    print("\nProtocol defaults:")
    for key, value in info["defaults"].items():
        print(f"  {key}: {value}")
    print("\nDependencies:")
    for dep in info["dependencies"]:
        print(f"  - {dep}")
    print(f"\nRequires Python {info['python_requires']}, numpy {info['numpy']}")


if __name__ == "__main__":
    print_version_info(print_json="--json" in sys.argv)
