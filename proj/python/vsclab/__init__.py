"""Variational source condition toolkit.

Thin wrapper around the compiled extension. When the package is not
installed (e.g. running from a source checkout), the extension can be
located through the VSCLAB_EXT_DIR environment variable pointing at the
CMake build directory.
"""

import os
import sys

try:
    from ._vsclab import *  # noqa: F401,F403
    from ._vsclab import __doc__  # noqa: F401
except ImportError:
    _ext_dir = os.environ.get("VSCLAB_EXT_DIR")
    if not _ext_dir:
        raise
    sys.path.insert(0, _ext_dir)
    from _vsclab import *  # noqa: F401,F403
