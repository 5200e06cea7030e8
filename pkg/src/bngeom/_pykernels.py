"""Pure numpy implementation of the batched bitnet kernels.

Same contract as the compiled ``_ckernels`` module; selected automatically
when the extension is unavailable.
"""

from functools import lru_cache

import numpy as np
from scipy import sparse

CHUNK_ENTRIES = 4_000_000


@lru_cache(maxsize=64)
def _scatter(bits_bytes, slots_bytes, shape, dim):
    bits = np.frombuffer(bits_bytes, dtype=np.int8).reshape(shape)
    slots = np.frombuffer(slots_bytes, dtype=np.int64).reshape(shape)
    A, n = shape
    a1, k1 = np.nonzero(bits == 1)
    pi_map = sparse.csr_matrix(
        (np.ones(a1.size), (np.arange(a1.size), slots[a1, k1])), shape=(a1.size, dim)
    )
    trip = [(a, k, kk) for a, k in zip(a1, k1) for kk in range(n) if kk != k]
    if trip:
        ta, tk, tkk = (np.array(v, dtype=np.int64) for v in zip(*trip))
    else:
        ta = tk = tkk = np.zeros(0, dtype=np.int64)
    sign = np.where(bits[ta, tkk] == 1, 1.0, -1.0)
    flat = slots[ta, tkk] * dim + slots[ta, tk]
    d_map = sparse.csr_matrix(
        (sign, (np.arange(ta.size), flat)), shape=(ta.size, dim * dim)
    )
    return (a1, k1, pi_map), (ta, tk, tkk, d_map)


def bitnet_batch(theta, bits, slots, want_ricci=True):
    """Ricci scalar and ``0.5 * sum_j log pi_j`` at each row of ``theta``.

    ``bits[a, k]`` is node k's value in assignment a and ``slots[a, k]`` the
    parameter slot node k reads in that assignment.
    """
    theta = np.ascontiguousarray(theta, dtype=np.float64)
    B, d = theta.shape
    A, n = bits.shape
    (a1, k1, pi_map), (ta, tk, tkk, d_map) = _scatter(
        np.ascontiguousarray(bits, dtype=np.int8).tobytes(),
        np.ascontiguousarray(slots, dtype=np.int64).tobytes(),
        bits.shape,
        d,
    )
    per_row = max(A * n, ta.size, d * d, 1)
    step = max(1, CHUNK_ENTRIES // per_row)
    ric = np.zeros(B)
    hlp = np.zeros(B)
    for s in range(0, B, step):
        th = theta[s:s + step]
        t = th[:, slots]
        f = np.where(bits[None] == 1, t, 1.0 - t)
        p = f.prod(axis=2)
        pi = np.asarray((pi_map.T @ (p[:, a1] / f[:, a1, k1]).T).T)
        hlp[s:s + step] = 0.5 * np.log(pi).sum(axis=1)
        if want_ricci and d > 1:
            vals = p[:, ta] / (f[:, ta, tk] * f[:, ta, tkk])
            dpi = np.asarray((d_map.T @ vals.T).T).reshape(-1, d, d)
            ric[s:s + step] = _diag_ricci(th, pi, dpi)
    return ric, hlp


def _diag_ricci(th, pi, dpi):
    u = th * (1.0 - th)
    h = pi / u
    D = dpi / u[:, None, :]
    dd = pi * (2.0 * th - 1.0) / u**2
    idx = np.arange(th.shape[1])
    D[:, idx, idx] = dd
    hi = h[:, :, None]
    hj = h[:, None, :]
    Dt = D.transpose(0, 2, 1)
    cross = np.einsum("bmi,bm,bmj->bij", D, 1.0 / h, D)
    t = (
        Dt**2 / (4 * hi)
        + D**2 / (4 * hj)
        + D * dd[:, :, None] / (2 * hi)
        + Dt * dd[:, None, :] / (2 * hj)
        - cross / 4
    )
    t[:, idx, idx] = 0.0
    return (t / (hi * hj)).sum(axis=(1, 2))
