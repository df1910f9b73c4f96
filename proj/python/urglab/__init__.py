"""Python bindings for the urglab simulation library."""

import json as _json

from ._urglab import *  # noqa: F401,F403
from ._urglab import __version__, run as _run


def run(kind, values=None):
    """Run an experiment and return its manifest as a dict."""
    values = {k: str(v) for k, v in (values or {}).items()}
    return _json.loads(_run(kind, values))
