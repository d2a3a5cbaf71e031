"""Backend selection for the F_p polynomial kernels.

The compiled extension is used when it imports; setting the environment
variable ``CARLITZLAB_PURE=1`` forces the numpy/pure-Python fallback.
"""

from __future__ import annotations

import os

from . import _fallback

BACKEND = "python"
_impl = _fallback

if os.environ.get("CARLITZLAB_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]
    except ImportError:  # pragma: no cover - depends on the build
        pass
    else:
        _impl = _compiled
        BACKEND = "compiled"

mul = _impl.mul
mullow = _impl.mullow
series_inv = _impl.series_inv
divmod_ = _impl.divmod_
gcd = _impl.gcd

__all__ = ["BACKEND", "mul", "mullow", "series_inv", "divmod_", "gcd"]
