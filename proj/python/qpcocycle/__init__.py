"""Quasi-periodic Schrodinger cocycle toolkit.

Thin wrapper over the compiled extension.  When installed normally the
extension lives next to this file; for in-tree runs against a plain CMake
build, point QPCOCYCLE_EXT_DIR at the directory containing the built
``_core`` module.
"""

import os
import sys

try:
    from ._core import *  # noqa: F401,F403
    from ._core import __version__  # noqa: F401
except ImportError:
    _ext_dir = os.environ.get("QPCOCYCLE_EXT_DIR")
    if not _ext_dir:
        raise
    if _ext_dir not in sys.path:
        sys.path.insert(0, _ext_dir)
    from _core import *  # noqa: F401,F403
    from _core import __version__  # noqa: F401
