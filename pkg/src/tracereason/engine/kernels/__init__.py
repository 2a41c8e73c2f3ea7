"""Join kernels behind the fixpoint engine.

Two interchangeable backends share one contract: ``numba`` (compiled loops,
the default when numba imports) and ``numpy`` (vectorised). Set
``TRACEREASON_JIT=0`` to force the numpy path.
"""

from __future__ import annotations

import logging
import os
from types import SimpleNamespace

from . import _numpy

log = logging.getLogger(__name__)

_NAMES = ("seed_pairs", "seed_loops", "extend", "filter_edges", "cross")


def _namespace(module, name):
    return SimpleNamespace(name=name, **{k: getattr(module, k) for k in _NAMES})


NUMPY = _namespace(_numpy, "numpy")

try:
    from . import _numba
except ImportError:  # pragma: no cover - depends on the environment
    NUMBA = None
else:
    NUMBA = _namespace(_numba, "numba")


def jit_enabled():
    flag = os.environ.get("TRACEREASON_JIT", "1").strip().lower()
    return flag not in ("0", "false", "no", "off")


def get_backend(name=None):
    """Kernel namespace for ``name`` ("numba" / "numpy"), or the env default."""
    if name is None:
        name = "numba" if (NUMBA is not None and jit_enabled()) else "numpy"
    if name == "numpy":
        return NUMPY
    if name == "numba":
        if NUMBA is None:
            log.warning("numba is not installed; using the numpy kernels")
            return NUMPY
        return NUMBA
    raise ValueError(f"unknown kernel backend {name!r}")
