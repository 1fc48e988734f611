"""Reset-free quality-diversity learning in a persistent arena.

Thin wrapper around the compiled extension: a seeded surrogate world that is
never reset, an unstructured behaviour archive, a probabilistic dynamics
ensemble for imagined rollouts, the safety-filtered learning loop, and the
maze-navigation consumer that plans over a trained archive.
"""

from ._core import *  # noqa: F401,F403

__version__ = "0.1.0"
