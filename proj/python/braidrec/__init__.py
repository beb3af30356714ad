"""Strand-based braid reconstruction: synthesis, fitting, refinement."""

try:
    from ._braidrec import *  # noqa: F401,F403  (installed layout)
except ImportError:  # extension on sys.path but outside the package (in-tree builds)
    from _braidrec import *  # noqa: F401,F403
