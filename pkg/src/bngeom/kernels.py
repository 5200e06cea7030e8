"""Backend selection for the batched bitnet kernels.

The compiled extension is used when it imports; setting
``BNGEOM_PURE_PYTHON=1`` forces the numpy fallback.  ``BACKEND`` names the
active implementation.
"""

import os

import numpy as np

from bngeom import _pykernels

_c_batch = None
if os.environ.get("BNGEOM_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from bngeom._ckernels import bitnet_batch as _c_batch
    except ImportError:  # extension not built
        _c_batch = None

BACKEND = "cython" if _c_batch is not None else "python"

__all__ = ["BACKEND", "bitnet_batch", "bitnet_ricci_batch", "bitnet_half_log_pi_batch"]


def bitnet_batch(model, theta, want_ricci=True, backend=None):
    """``(ricci, half_log_pi)`` for each row of ``theta``.

    ``half_log_pi = 0.5 * sum_j log pi_j``, so the volume element is
    ``exp(half_log_pi) * prod_j (theta_j (1 - theta_j))**-0.5``.
    """
    theta = np.atleast_2d(np.asarray(theta, dtype=np.float64))
    bits, slots = model.enumeration
    backend = backend or BACKEND
    if backend == "cython":
        if _c_batch is None:
            raise RuntimeError("compiled kernels are not available")
        return _c_batch(theta, bits, slots, want_ricci)
    return _pykernels.bitnet_batch(theta, bits, slots, want_ricci)


def bitnet_ricci_batch(model, theta, backend=None):
    return bitnet_batch(model, theta, True, backend)[0]


def bitnet_half_log_pi_batch(model, theta, backend=None):
    return bitnet_batch(model, theta, False, backend)[1]
