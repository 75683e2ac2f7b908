import random

from hypothesis import given, settings
from hypothesis import strategies as st

from tfm import _pykernel, kernel, lattice


def reference_scan(rays, nums, dens, box):
    """Naive per-weight re-scan (test oracle for the incremental kernels)."""
    n = len(rays[0]) if rays else 0
    counts = {}

    def walk(prefix):
        if len(prefix) == n:
            mask = 0
            for r, u in enumerate(rays):
                if dens[r] * lattice.dot(prefix, u) + nums[r] < 0:
                    mask |= 1 << r
            counts[mask] = counts.get(mask, 0) + 1
            return
        for v in range(-box, box + 1):
            walk(prefix + [v])

    walk([])
    return counts


def flat(rays):
    return [x for u in rays for x in u]


def test_scan_small_known():
    # P^1 with O(-2): rays +1/-1, coefficients (-2, 0); only m=1 violates both
    rays = [(1,), (-1,)]
    nums = [-2, 0]
    dens = [1, 1]
    got = kernel.scan_weight_masks(flat(rays), 1, nums, dens, 3, 10**7)
    assert got == reference_scan(rays, nums, dens, 3)
    assert got[0b11] == 1


def test_backends_agree_randomized():
    rng = random.Random(20240817)
    for _ in range(25):
        n = rng.randint(1, 3)
        nrays = rng.randint(1, 6)
        rays = [
            tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(nrays)
        ]
        nums = [rng.randint(-4, 4) for _ in range(nrays)]
        dens = [rng.randint(1, 3) for _ in range(nrays)]
        box = rng.randint(0, 3)
        expected = reference_scan(rays, nums, dens, box)
        via_py = _pykernel.scan_weight_masks(flat(rays), n, nums, dens, box, 10**7)
        via_sel = kernel.scan_weight_masks(flat(rays), n, nums, dens, box, 10**7)
        assert via_py == expected
        assert via_sel == expected


def test_scan_bignum_coefficients():
    # force the object path in the compiled backend
    rays = [(1, 0), (0, 1)]
    nums = [-(10**40), 10**39]
    dens = [1, 10**30]
    box = 2
    expected = reference_scan(rays, nums, dens, box)
    assert kernel.scan_weight_masks(flat(rays), 2, nums, dens, box, 10**7) == expected
    assert _pykernel.scan_weight_masks(flat(rays), 2, nums, dens, box, 10**7) == expected


def test_scan_limit_guard():
    import pytest

    with pytest.raises(ValueError, match="cell cap"):
        kernel.scan_weight_masks([1], 1, [0], [1], 10**8, 10**7)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_bareiss_rank_matches_rational_rank(nr, nc, data):
    rows = [
        [data.draw(st.integers(-9, 9)) for _ in range(nc)] for _ in range(nr)
    ]
    assert kernel.bareiss_rank(rows) == lattice.rational_rank(rows)
    assert _pykernel.bareiss_rank(rows) == lattice.rational_rank(rows)


def test_bareiss_rank_bigints():
    rows = [[10**30, 1], [10**30, 1], [0, 10**25]]
    assert kernel.bareiss_rank(rows) == 2
    assert _pykernel.bareiss_rank(rows) == 2
