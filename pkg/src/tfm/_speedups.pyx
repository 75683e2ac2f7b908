# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled twins of the tfm._pykernel hot loops.

The weight scan has a C fast path guarded by an exact overflow bound;
everything else stays arbitrary-precision Python integers so results
are bit-identical to the pure-Python backend.
"""

from libc.stdlib cimport free, malloc

BACKEND = "compiled"


def bareiss_rank(rows):
    """Rank of an integer matrix via fraction-free elimination."""
    cdef list m = [list(r) for r in rows]
    cdef Py_ssize_t nr = len(m)
    cdef Py_ssize_t nc = len(m[0]) if nr else 0
    cdef Py_ssize_t rank = 0, col = 0, i, j, pr
    cdef list mi, mr
    prev = 1
    while rank < nr and col < nc:
        pr = -1
        for i in range(rank, nr):
            if (<list>m[i])[col] != 0:
                pr = i
                break
        if pr < 0:
            col += 1
            continue
        if pr != rank:
            m[rank], m[pr] = m[pr], m[rank]
        mr = <list>m[rank]
        piv = mr[col]
        for i in range(rank + 1, nr):
            mi = <list>m[i]
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

    Same contract as tfm._pykernel.scan_weight_masks.
    """
    cdef Py_ssize_t cn = n
    cdef Py_ssize_t nrays = len(nums)
    width = 2 * box + 1
    total = width ** n
    if total > limit:
        raise ValueError(
            "weight scan over %d cells exceeds the %d cell cap; "
            "use a smaller instance or raise TFM_MAX_CELLS" % (total, limit)
        )
    # exact bound on |den*dot + num| decides whether C ints are safe
    bound = 0
    for r in range(nrays):
        maxdot = sum(abs(rays_flat[r * n + k]) for k in range(n)) * box
        cand = dens[r] * maxdot + abs(nums[r])
        if cand > bound:
            bound = cand
    if nrays <= 63 and bound < (<long long>1) << 62:
        return _scan_c(rays_flat, cn, nums, dens, box)
    return _scan_object(rays_flat, cn, nums, dens, box)


cdef _scan_c(rays_flat, Py_ssize_t n, nums, dens, long long box):
    cdef Py_ssize_t nrays = len(nums)
    cdef Py_ssize_t r, k, j
    cdef long long mask, step
    cdef dict counts = {}
    cdef long long *cray = <long long *> malloc(nrays * n * sizeof(long long))
    cdef long long *cnum = <long long *> malloc(nrays * sizeof(long long))
    cdef long long *cden = <long long *> malloc(nrays * sizeof(long long))
    cdef long long *dots = <long long *> malloc(nrays * sizeof(long long))
    cdef long long *m = <long long *> malloc((n if n else 1) * sizeof(long long))
    if not (cray and cnum and cden and dots and m):
        free(cray); free(cnum); free(cden); free(dots); free(m)
        raise MemoryError()
    try:
        for r in range(nrays):
            cnum[r] = nums[r]
            cden[r] = dens[r]
            dots[r] = 0
            for k in range(n):
                cray[r * n + k] = rays_flat[r * n + k]
                dots[r] += -box * cray[r * n + k]
        for k in range(n):
            m[k] = -box
        while True:
            mask = 0
            for r in range(nrays):
                if cden[r] * dots[r] + cnum[r] < 0:
                    mask |= (<long long>1) << r
            if mask in counts:
                counts[mask] += 1
            else:
                counts[mask] = 1
            k = n - 1
            while k >= 0 and m[k] == box:
                k -= 1
            if k < 0:
                break
            m[k] += 1
            for r in range(nrays):
                dots[r] += cray[r * n + k]
            step = -2 * box
            for j in range(k + 1, n):
                m[j] = -box
                for r in range(nrays):
                    dots[r] += step * cray[r * n + j]
        return counts
    finally:
        free(cray); free(cnum); free(cden); free(dots); free(m)


cdef _scan_object(rays_flat, Py_ssize_t n, nums, dens, box):
    cdef Py_ssize_t nrays = len(nums)
    cdef Py_ssize_t r, k, j
    cdef dict counts = {}
    cdef list m = [-box] * n
    cdef list dots = [
        sum(-box * rays_flat[r * n + k] for k in range(n)) for r in range(nrays)
    ]
    while True:
        mask = 0
        for r in range(nrays):
            if dens[r] * dots[r] + nums[r] < 0:
                mask |= 1 << r
        if mask in counts:
            counts[mask] += 1
        else:
            counts[mask] = 1
        k = n - 1
        while k >= 0 and m[k] == box:
            k -= 1
        if k < 0:
            break
        m[k] += 1
        for r in range(nrays):
            dots[r] += rays_flat[r * n + k]
        step = -2 * box
        for j in range(k + 1, n):
            m[j] = -box
            for r in range(nrays):
                dots[r] += step * rays_flat[r * n + j]
    return counts
