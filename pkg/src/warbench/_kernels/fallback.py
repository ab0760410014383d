"""Pure-numpy kernels, operation-for-operation twins of the compiled ones.

The arithmetic order matches ``_corekernels.pyx``: the real-path kernel
is bit-identical across backends; the complex-step kernel can differ by
one ulp on some paths (numpy's and C's complex products round the cross
terms independently).
"""

from __future__ import annotations

import numpy as np


def propagate_terminal(b0, r0, r_rate, b_rate, pi, dt, shocks):
    """Terminal (B, R) of clamped paths under given shock realizations.

    shocks: uint8 array (n_paths, n_steps, 2), [..., 0] = z_B, [..., 1] = z_R.
    Returns two float arrays of length n_paths.
    """
    shocks = np.asarray(shocks, dtype=np.uint8)
    m, n, _ = shocks.shape
    B = np.full(m, float(b0))
    R = np.full(m, float(r0))
    rdt = r_rate * dt
    bdt = pi * b_rate * dt
    for k in range(n):
        zb = shocks[:, k, 0]
        zr = shocks[:, k, 1]
        nB = B - rdt * (zr * R)
        nR = R - bdt * (zb * B)
        np.maximum(nB, 0.0, out=nB)
        np.maximum(nR, 0.0, out=nR)
        B, R = nB, nR
    return B, R


def propagate_terminal_cstep(b0, r0, r_rate, b_rate, pi, h, dt, shocks):
    """Unclamped complex-step propagation at allocation ``pi + i*h``.

    Returns complex terminal arrays (B, R) plus a bool array flagging
    paths whose real part went negative at any step (where clamping
    would have activated in the real dynamics).
    """
    shocks = np.asarray(shocks, dtype=np.uint8)
    m, n, _ = shocks.shape
    B = np.full(m, b0, dtype=np.complex128)
    R = np.full(m, r0, dtype=np.complex128)
    rdt = r_rate * dt
    bdt = complex(pi, h) * (b_rate * dt)
    clamped = np.zeros(m, dtype=bool)
    for k in range(n):
        zb = shocks[:, k, 0]
        zr = shocks[:, k, 1]
        nB = B - rdt * (zr * R)
        nR = R - bdt * (zb * B)
        clamped |= (nB.real < 0.0) | (nR.real < 0.0)
        B, R = nB, nR
    return B, R, clamped
