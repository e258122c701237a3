"""Pure numpy fallback for the hot evaluation loops.

Same contract as the compiled module `unicurve._kernels`: all coefficient data
arrives packed (flat complex arrays plus offset tables) so both backends can be
swapped without touching callers.
"""

from __future__ import annotations

import numpy as np

IMPLEMENTATION = "pure"


def polyval(coeffs, z):
    """Horner evaluation; coeffs ascending, z any complex array."""
    z = np.asarray(z, dtype=np.complex128)
    acc = np.zeros_like(z)
    for c in coeffs[::-1]:
        acc = acc * z + c
    return acc


def rational_block_sum(num_flat, num_off, den_flat, den_off, centers, zs, exclude=-1):
    """out[p, j] = sum over blocks k != exclude of N_{k,j}(z_p - a_k) / D_{k,j}(z_p - a_k).

    Offsets index entry i = k*n + j into the flat coefficient arrays; entry i
    spans [off[i], off[i+1]).  A zero-length numerator means the component is
    identically zero for that block.
    """
    zs = np.asarray(zs, dtype=np.complex128)
    nblocks = len(centers)
    ncomp = (len(num_off) - 1) // nblocks if nblocks else 0
    out = np.zeros(zs.shape + (ncomp,), dtype=np.complex128)
    for k in range(nblocks):
        if k == exclude:
            continue
        w = zs - centers[k]
        for j in range(ncomp):
            i = k * ncomp + j
            ncs = num_flat[num_off[i] : num_off[i + 1]]
            if len(ncs) == 0:
                continue
            dcs = den_flat[den_off[i] : den_off[i + 1]]
            out[..., j] += polyval(ncs, w) / polyval(dcs, w)
    return out
