"""Backend selection for the coverage integrals.

The compiled Cython kernels are preferred when importable; the pure-numpy
implementation is a drop-in fallback.  ``UAVCOV_BACKEND=pure|compiled|auto``
overrides the choice (``compiled`` raises if the extension is missing).
"""

import os

from . import _pure

_requested = os.environ.get("UAVCOV_BACKEND", "auto").lower()
if _requested not in ("auto", "pure", "compiled"):
    raise RuntimeError(f"UAVCOV_BACKEND must be auto, pure or compiled, not {_requested!r}")

if _requested == "pure":
    backend = _pure
    BACKEND_NAME = "pure"
else:
    try:
        from . import _kernels as backend  # type: ignore[attr-defined]
        BACKEND_NAME = "compiled"
    except ImportError:
        if _requested == "compiled":
            raise
        backend = _pure
        BACKEND_NAME = "pure"


def get_backend(name: str | None = None):
    """Return a backend module by name (None = the selected default)."""
    if name is None or name == BACKEND_NAME:
        return backend
    if name == "pure":
        return _pure
    if name == "compiled":
        from . import _kernels  # raises ImportError when unavailable
        return _kernels
    raise ValueError(f"unknown backend {name!r}")
