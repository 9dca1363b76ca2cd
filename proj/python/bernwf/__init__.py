"""Python surface of the bernwf toolkit (thin wrapper over the C++ core)."""

try:
    from bernwf._core import *          # installed package layout
    from bernwf._core import __version__
except ImportError:                     # in-tree build: _core on PYTHONPATH
    from _core import *
    from _core import __version__
