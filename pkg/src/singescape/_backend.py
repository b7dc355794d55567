"""Kinematics kernel selection.

The compiled extension is preferred when importable; setting the
environment variable SINGESCAPE_PURE forces the NumPy fallback.
"""

import os

if os.environ.get("SINGESCAPE_PURE"):
    from . import _purekin as impl

    BACKEND = "python"
else:
    try:
        from . import _fastkin as impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        from . import _purekin as impl  # type: ignore[no-redef]

        BACKEND = "python"

link_transform = impl.link_transform
fk_chain = impl.fk_chain
dh_jacobian = impl.dh_jacobian
