"""Bethe-ansatz scalar products as KP tau functions."""

import json

from ._taubethe import SCHEMA, __version__, command_names
from ._taubethe import run as _run

__all__ = ["SCHEMA", "__version__", "command_names", "run"]


def run(command, config, perturb=None, precision=None, seed=None):
    """Run a command on a config dict; returns (report dict, exit code)."""
    text = config if isinstance(config, str) else json.dumps(config)
    report, code = _run(command, text, perturb, precision, seed)
    return json.loads(report), code
