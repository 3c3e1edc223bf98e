"""RIS and decode-and-forward relay transmit power minimisation."""

import json

from ._risrelay import *  # noqa: F401,F403
from ._risrelay import normalize_config as _normalize_config
from ._risrelay import run_experiment as _run_experiment


def run_experiment(config):
    """Run a sweep. `config` is a dict or a JSON string with the config keys."""
    if not isinstance(config, str):
        config = json.dumps(config)
    return _run_experiment(config)


def normalize_config(config):
    """Parse, validate and return the full config as a dict."""
    if not isinstance(config, str):
        config = json.dumps(config)
    return json.loads(_normalize_config(config))
