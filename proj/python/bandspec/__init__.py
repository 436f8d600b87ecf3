"""Python bindings for the bandspec C++ core."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import __version__
from ._core import diagram_census as _diagram_census


def diagram_census(W, max_length, strengthened=True):
    """Census of contracted diagrams as a dict."""
    return _json.loads(_diagram_census(W, max_length, strengthened))
