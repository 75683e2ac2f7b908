from fractions import Fraction
from itertools import combinations

from hypothesis import given, settings
from hypothesis import strategies as st

from tfm import lattice, polyhedra


def brute_force_rays(ineqs, dim):
    """Extreme rays of {x : Ax >= 0} by subset enumeration (test oracle)."""
    rays = set()
    for subset in combinations(range(len(ineqs)), dim - 1):
        rows = [ineqs[i] for i in subset]
        kernel = lattice.rational_kernel(rows, ncols=dim)
        if len(kernel) != 1:
            continue
        for cand in (kernel[0], lattice.vec_neg(kernel[0])):
            if all(lattice.dot(a, cand) >= 0 for a in ineqs):
                active = [a for a in ineqs if lattice.dot(a, cand) == 0]
                if lattice.rational_rank(active) == dim - 1:
                    rays.add(lattice.primitivize(cand))
    return rays


def test_dd_quadrant():
    res = polyhedra.dd_vrep([(1, 0), (0, 1)], 2)
    assert not res.lineality
    assert set(res.rays) == {(1, 0), (0, 1)}


def test_dd_halfplane_has_lineality():
    res = polyhedra.dd_vrep([(1, 0)], 2)
    assert len(res.lineality) == 1
    assert res.lineality[0][0] == 0
    assert len(res.rays) == 1
    assert res.rays[0][0] > 0


def test_dd_empty_interior():
    # x >= 0 and -x >= 0 collapses to the y-axis line
    res = polyhedra.dd_vrep([(1, 0), (-1, 0)], 2)
    assert not res.rays
    assert len(res.lineality) == 1


def test_dd_with_equations():
    res = polyhedra.dd_vrep([(1, 0, 0), (0, 1, 0)], 3, eqs=[(1, 1, 1)])
    assert not res.lineality
    assert set(res.rays) == {
        lattice.primitivize((1, 0, -1)),
        lattice.primitivize((0, 1, -1)),
    }


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 4), st.data())
def test_dd_matches_brute_force(dim, data):
    n_ineq = data.draw(st.integers(dim, 7))
    ineqs = []
    for _ in range(n_ineq):
        v = tuple(data.draw(st.integers(-3, 3)) for _ in range(dim))
        if any(v):
            ineqs.append(v)
    if not ineqs:
        return
    res = polyhedra.dd_vrep(ineqs, dim)
    if res.lineality:
        # brute force oracle below only covers pointed outputs
        for l in res.lineality:
            assert all(lattice.dot(a, l) == 0 for a in ineqs)
        return
    assert set(res.rays) == brute_force_rays(ineqs, dim)
    for r in res.rays:
        assert all(lattice.dot(a, r) >= 0 for a in ineqs)


def test_cone_hrep_simplicial():
    hrep = polyhedra.cone_hrep([(1, 0), (1, 2)], 2)
    assert not hrep.span_eqs
    assert len(hrep.facets) == 2
    assert hrep.contains((1, 1))
    assert not hrep.contains((-1, 0))
    assert hrep.contains((2, 4))


def test_cone_hrep_lower_dimensional():
    hrep = polyhedra.cone_hrep([(1, 1, 0)], 3)
    assert len(hrep.span_eqs) == 2
    assert hrep.contains((2, 2, 0))
    assert not hrep.contains((1, 1, 1))
    assert not hrep.contains((-1, -1, 0))


def test_cone_is_pointed():
    assert polyhedra.cone_is_pointed([(1, 0), (0, 1)], 2)
    assert not polyhedra.cone_is_pointed([(1, 0), (-1, 0)], 2)
    # the zero cone is pointed
    assert polyhedra.cone_is_pointed([], 2)
    assert polyhedra.cone_is_pointed([], 0)


def test_extreme_generator_indices():
    # (1,1) is interior to the quadrant
    idx = polyhedra.extreme_generator_indices([(1, 0), (1, 1), (0, 1)], 2)
    assert idx == [0, 2]
    # duplicates collapse to the first representative
    idx = polyhedra.extreme_generator_indices([(1, 0), (2, 0), (0, 1)], 2)
    assert idx == [0, 2]


def test_facet_ray_sets():
    facets = polyhedra.facet_ray_sets([(1, 0, 0), (0, 1, 0), (0, 0, 1)], 3)
    members = sorted(m for _, m in facets)
    assert members == [(0, 1), (0, 2), (1, 2)]


def test_lp_feasible_basic():
    # x >= 1, y >= 1, x + y = 3
    sol = polyhedra.lp_feasible(
        2, eqs=[((1, 1), 3)], ineqs=[((1, 0), 1), ((0, 1), 1)]
    )
    assert sol is not None
    assert sol[0] + sol[1] == 3
    assert sol[0] >= 1 and sol[1] >= 1


def test_lp_infeasible():
    sol = polyhedra.lp_feasible(1, ineqs=[((1,), 1), ((-1,), 0)])
    assert sol is None


def test_lp_exact_fractions():
    sol = polyhedra.lp_feasible(1, eqs=[((3,), 1)])
    assert sol == (Fraction(1, 3),)


def test_lp_unconstrained():
    assert polyhedra.lp_feasible(2) == (0, 0)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.data())
def test_lp_random_consistency(nvars, data):
    n_ineq = data.draw(st.integers(1, 6))
    ineqs = []
    for _ in range(n_ineq):
        a = tuple(data.draw(st.integers(-3, 3)) for _ in range(nvars))
        b = data.draw(st.integers(-3, 3))
        ineqs.append((a, b))
    sol = polyhedra.lp_feasible(nvars, ineqs=ineqs)
    if sol is not None:
        for a, b in ineqs:
            assert lattice.dot(a, sol) >= b


def test_dd_matches_brute_force_higher_dims():
    """Heavier seeded comparison at the dimensions the Mori cone uses."""
    import random

    rng = random.Random(424242)
    cases = 0
    while cases < 12:
        dim = rng.choice([5, 6])
        n_ineq = rng.randint(dim + 1, 12)
        ineqs = []
        for _ in range(n_ineq):
            v = tuple(rng.randint(-2, 2) for _ in range(dim))
            if any(v):
                ineqs.append(v)
        if len(ineqs) < dim:
            continue
        res = polyhedra.dd_vrep(ineqs, dim)
        for r in res.rays:
            assert all(lattice.dot(a, r) >= 0 for a in ineqs)
        for l in res.lineality:
            assert all(lattice.dot(a, l) == 0 for a in ineqs)
        if res.lineality:
            continue
        assert set(res.rays) == brute_force_rays(ineqs, dim)
        cases += 1
