"""Extremum seeking control lab.

Python bindings for the C++ core: dither design and validation, cost
functions with derivative oracles, perturbation-based gradient/Hessian
estimators, GESC/NESC flows in direct and log coordinates, exact-period
averaging, and stability experiments.
"""

try:
    from ._esclab import *  # noqa: F401,F403
    from ._esclab import __version__  # noqa: F401
except ImportError:  # pragma: no cover - build-tree layout
    from _esclab import *  # noqa: F401,F403
    from _esclab import __version__  # noqa: F401
