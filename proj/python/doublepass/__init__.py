"""Gaussian simulator for the double-pass light-atom loop.

Exposes the C++ core: lossless input-output maps and their noisy
generalizations for the exponential quantum memory and the two-mode
squeezing source, fidelity and entanglement metrics, the slice-level
reference integrator, and the figure/sweep table builders used by the
command-line tool.
"""

try:
    from ._core import *  # noqa: F401,F403  (installed package layout)
except ImportError:  # build-tree layout: _core sits directly on sys.path
    from _core import *  # noqa: F401,F403

from importlib import metadata as _metadata

try:
    __version__ = _metadata.version("doublepass")
except _metadata.PackageNotFoundError:  # running from the build tree
    __version__ = "0.0.0"
del _metadata
