"""hqgeo: geometry kernel for the quaternionic Heisenberg group."""

from hqgeo.version import __version__

__all__ = ['__version__']
