"""Kernel backend selection.

The compiled extension is preferred when importable; the numpy fallback
keeps the package fully functional without a compiler.  Set NLQW_BACKEND=c
or NLQW_BACKEND=python to force a choice (an ImportError surfaces if the
forced backend cannot be loaded).
"""

import os

_choice = os.environ.get("NLQW_BACKEND", "").strip().lower()

if _choice == "python":
    from . import _pykernels as kernels
elif _choice == "c":
    from . import _kernels as kernels  # type: ignore[no-redef]
elif _choice == "":
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        from . import _pykernels as kernels
else:
    raise ImportError(
        f"NLQW_BACKEND must be 'c' or 'python', got {_choice!r}"
    )

BACKEND = kernels.BACKEND

walk_step = kernels.walk_step
walk_series = kernels.walk_series
loop_step = kernels.loop_step
loop_series = kernels.loop_series
