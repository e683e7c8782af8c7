"""Select the simulation core at import time.

The compiled core is used when it was built; set ``PLANAR_BACKLOG_BACKEND=python``
to force the pure-Python one.
"""

import os

from . import _core_py

try:
    from . import _core as _core_c
except ImportError:  # extension not built
    _core_c = None

BACKENDS = {"python": _core_py.Core}
if _core_c is not None:
    BACKENDS["compiled"] = _core_c.Core

_choice = os.environ.get("PLANAR_BACKLOG_BACKEND", "").strip().lower()
if _choice and _choice not in BACKENDS:
    raise ImportError(f"backend {_choice!r} unavailable; have {sorted(BACKENDS)}")
DEFAULT = _choice or ("compiled" if "compiled" in BACKENDS else "python")
HAVE_COMPILED = "compiled" in BACKENDS


def get_core(name: str | None = None):
    """Core class for ``name`` (``"compiled"`` or ``"python"``; default: best available)."""
    name = name or DEFAULT
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} unavailable; have {sorted(BACKENDS)}") from None
