"""Monte-Carlo kernel selection: compiled extension with numpy fallback.

Set ``DSEPP_KERNEL=numpy`` or ``DSEPP_KERNEL=cython`` to force a backend;
forcing the extension raises if it was not built.
"""

from __future__ import annotations

import os

_force = os.environ.get("DSEPP_KERNEL", "").strip().lower()

if _force == "numpy":
    from ._mc_numpy import run_block
    KERNEL_NAME = "numpy"
elif _force == "cython":
    from ._mc_cython import run_block  # noqa: F401
    KERNEL_NAME = "cython"
else:
    try:
        from ._mc_cython import run_block  # noqa: F401
        KERNEL_NAME = "cython"
    except ImportError:
        from ._mc_numpy import run_block  # noqa: F401
        KERNEL_NAME = "numpy"
