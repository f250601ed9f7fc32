"""Transaction classification pipeline: python bindings over the C++ core.

The extension module lives at ``trxcat._trxcat`` in installed builds; for
in-tree development builds it is importable from the CMake build directory
(add ``build/bindings`` to ``PYTHONPATH``).
"""

try:
    from ._trxcat import *  # noqa: F401,F403
    from ._trxcat import __version__  # noqa: F401
except ImportError:  # development build: extension next to the package on sys.path
    from _trxcat import *  # noqa: F401,F403
    from _trxcat import __version__  # noqa: F401
