"""Pure-Python implementations of the hot kernels.

tfm._speedups is the compiled twin; tfm.kernel picks whichever is
available at import time.  Both must return identical values on all
inputs (asserted by the test suite), so everything here is exact
integer arithmetic.
"""

from __future__ import annotations

BACKEND = "python"


def bareiss_rank(rows) -> int:
    """Rank of an integer matrix via fraction-free elimination."""
    m = [list(r) for r in rows]
    nr = len(m)
    nc = len(m[0]) if nr else 0
    rank = 0
    prev = 1
    col = 0
    while rank < nr and col < nc:
        pr = next((i for i in range(rank, nr) if m[i][col] != 0), None)
        if pr is None:
            col += 1
            continue
        if pr != rank:
            m[rank], m[pr] = m[pr], m[rank]
        piv = m[rank][col]
        for i in range(rank + 1, nr):
            mi = m[i]
            mr = m[rank]
            f = mi[col]
            for j in range(col + 1, nc):
                mi[j] = (mi[j] * piv - f * mr[j]) // prev
            mi[col] = 0
        prev = piv
        rank += 1
        col += 1
    return rank


def scan_weight_masks(rays_flat, n, nums, dens, box, limit):
    """Count lattice weights in [-box, box]^n by violated-ray bitmask.

    rays_flat: ray coordinates concatenated, ray r at [r*n:(r+1)*n].
    nums/dens: divisor coefficients a_r as num/den with den > 0.
    Bit r of a mask is set when <m, u_r> < -a_r, i.e.
    den_r * dot(m, u_r) + num_r < 0.

    Returns {mask: count}.  Raises ValueError when the box holds more
    than `limit` weights.
    """
    nrays = len(nums)
    width = 2 * box + 1
    total = width ** n
    if total > limit:
        raise ValueError(
            "weight scan over %d cells exceeds the %d cell cap; "
            "use a smaller instance or raise TFM_MAX_CELLS" % (total, limit)
        )
    counts: dict[int, int] = {}
    m = [-box] * n
    # dots[r] = <m, u_r>, updated incrementally along the odometer walk
    dots = [sum(-box * rays_flat[r * n + k] for k in range(n)) for r in range(nrays)]
    while True:
        mask = 0
        for r in range(nrays):
            if dens[r] * dots[r] + nums[r] < 0:
                mask |= 1 << r
        counts[mask] = counts.get(mask, 0) + 1
        k = n - 1
        while k >= 0 and m[k] == box:
            k -= 1
        if k < 0:
            break
        m[k] += 1
        for r in range(nrays):
            dots[r] += rays_flat[r * n + k]
        for j in range(k + 1, n):
            step = -2 * box  # box -> -box reset
            m[j] = -box
            for r in range(nrays):
                dots[r] += step * rays_flat[r * n + j]
    return counts
