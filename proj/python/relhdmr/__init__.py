"""Active-learning Kriging-HDMR reliability analysis."""

import json as _json
import os as _os

from . import _core
from ._core import (
    __version__,
    ConfigError,
    Error,
    Kriging,
    estimate_pf,
    lsf_coupled,
    lsf_example1,
    lsf_linear,
    to_physical,
)

_DATA_DIR = _os.path.join(_os.path.dirname(__file__), "data")


def example_config(name, nd=0):
    """Problem document of a bundled example as a dict."""
    return _json.loads(_core.example_config(name, nd))


def run(config, base_dir=None):
    """Run every analysis of a problem dict and return the report dict.

    Relative truss paths resolve against base_dir, defaulting to the
    bundled data directory.
    """
    if base_dir is None:
        base_dir = _DATA_DIR if _os.path.isdir(_DATA_DIR) else _core.data_dir()
    return _json.loads(_core.run(_json.dumps(config), str(base_dir)))


__all__ = [
    "__version__",
    "ConfigError",
    "Error",
    "Kriging",
    "estimate_pf",
    "example_config",
    "lsf_coupled",
    "lsf_example1",
    "lsf_linear",
    "run",
    "to_physical",
]
