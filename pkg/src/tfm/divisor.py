"""Torus-invariant divisors: Cartier data, wall intersections, nef/ample
tests, polytopes, and pullback along refinements.

Divisors are stored as one rational coefficient per fan ray.  All
intersection numbers use the lattice-quotient formula, which works on
walls of non-simplicial fans as well; agreement with the multiplicity
formula on simplicial fans is a test invariant.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import ceil, floor
from typing import NamedTuple, Optional, Sequence

from tfm import polyhedra
from tfm.fan import Fan, Wall, enumerate_walls, is_complete, refines
from tfm.lattice import (
    dot,
    integer_kernel,
    rational_kernel,
    rational_rank,
    solve_linear,
    vec_sub,
)


class TorusDivisor:
    """Divisor sum a_rho D_rho, coefficients aligned with fan.rays."""

    def __init__(self, coeffs: Sequence):
        self.coeffs = tuple(Fraction(c) for c in coeffs)

    def __repr__(self):
        return "TorusDivisor(%s)" % (self.coeffs,)

    def __eq__(self, other):
        return isinstance(other, TorusDivisor) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        return TorusDivisor(
            tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __sub__(self, other):
        return TorusDivisor(
            tuple(a - b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __neg__(self):
        return TorusDivisor(tuple(-a for a in self.coeffs))

    def __rmul__(self, scalar):
        return TorusDivisor(tuple(Fraction(scalar) * a for a in self.coeffs))

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def is_effective(self) -> bool:
        return all(c >= 0 for c in self.coeffs)

    def support(self):
        return tuple(i for i, c in enumerate(self.coeffs) if c != 0)


def zero_divisor(f: Fan) -> TorusDivisor:
    return TorusDivisor((0,) * len(f.rays))


def ray_divisor(f: Fan, i: int) -> TorusDivisor:
    return TorusDivisor(tuple(1 if j == i else 0 for j in range(len(f.rays))))


def toric_canonical(f: Fan) -> TorusDivisor:
    """K_X = -sum of all prime invariant divisors."""
    return TorusDivisor((-1,) * len(f.rays))


def principal_divisor(f: Fan, m: Sequence) -> TorusDivisor:
    """div(chi^m) = sum <m, u_rho> D_rho."""
    return TorusDivisor(tuple(dot(m, r) for r in f.rays))


class CartierData(NamedTuple):
    """Per-maximal-cone local functionals m_sigma with
    <m_sigma, u_rho> = -a_rho on the cone's rays."""

    m: tuple

    def is_cartier(self) -> bool:
        return all(
            Fraction(x).denominator == 1 for vec in self.m for x in vec
        )


def qcartier_data(f: Fan, d: TorusDivisor) -> Optional[CartierData]:
    """Exact local data for a Q-Cartier divisor, None when some cone
    admits no linear functional matching the coefficients."""
    ms = []
    for cone in f.max_cones:
        rows = [f.rays[i] for i in cone]
        rhs = [-d.coeffs[i] for i in cone]
        sol = solve_linear(rows, rhs)
        if sol is None:
            return None
        ms.append(sol)
    return CartierData(tuple(ms))


def is_cartier(f: Fan, d: TorusDivisor) -> bool:
    data = qcartier_data(f, d)
    return data is not None and data.is_cartier()


def wall_quotient_vector(f: Fan, wall: Wall):
    """A lattice vector mapping to the positive primitive generator of
    N / (N ∩ span(wall)), oriented towards side_b."""
    span_rows = [f.rays[i] for i in wall.rays]
    if span_rows:
        kernel = integer_kernel(span_rows)
    else:
        kernel = [tuple(1 if i == j else 0 for j in range(f.dim)) for i in range(f.dim)]
    if len(kernel) != 1:
        raise ValueError("wall rays do not span a codimension-1 subspace")
    ell = kernel[0]  # primitive functional vanishing on the wall
    far = next(i for i in f.max_cones[wall.side_b] if i not in wall.rays)
    sign = dot(ell, f.rays[far])
    if sign == 0:
        raise ValueError("wall is not a facet of its adjacent cone")
    if sign < 0:
        ell = tuple(-x for x in ell)
    # any integral w with <ell, w> = 1 lifts the quotient generator
    from tfm.lattice import integer_solve

    w = integer_solve([ell], (1,))
    assert w is not None  # ell is primitive, so it is surjective
    return w


def intersect_wall(f: Fan, data: CartierData, wall: Wall) -> Fraction:
    """D . V(wall) = <m_a - m_b, w> with w the side_b lift of the
    primitive quotient generator; well-defined because m_a - m_b
    vanishes on the wall span."""
    w = wall_quotient_vector(f, wall)
    ma = data.m[wall.side_a]
    mb = data.m[wall.side_b]
    return Fraction(dot(vec_sub(ma, mb), w))


def divisor_wall_pairing(f: Fan, d: TorusDivisor, wall: Wall) -> Fraction:
    data = qcartier_data(f, d)
    if data is None:
        raise ValueError("divisor is not Q-Cartier")
    return intersect_wall(f, data, wall)


def is_nef(f: Fan, d: TorusDivisor) -> bool:
    if not is_complete(f):
        raise ValueError("nefness is decided on complete fans")
    data = qcartier_data(f, d)
    if data is None:
        raise ValueError("divisor is not Q-Cartier")
    return all(intersect_wall(f, data, w) >= 0 for w in enumerate_walls(f))


def is_ample(f: Fan, d: TorusDivisor) -> bool:
    if not is_complete(f):
        raise ValueError("ampleness is decided on complete fans")
    data = qcartier_data(f, d)
    if data is None:
        raise ValueError("divisor is not Q-Cartier")
    return all(intersect_wall(f, data, w) > 0 for w in enumerate_walls(f))


class Polytope(NamedTuple):
    """{m : <m, u_rho> >= -a_rho}; vertices computed exactly."""

    ineq_rows: tuple   # the u_rho
    ineq_rhs: tuple    # the -a_rho
    vertices: tuple

    def dim(self) -> int:
        if not self.vertices:
            return -1
        v0 = self.vertices[0]
        return rational_rank([vec_sub(v, v0) for v in self.vertices[1:]]) if len(self.vertices) > 1 else 0

    def contains(self, m) -> bool:
        return all(dot(row, m) >= rhs for row, rhs in zip(self.ineq_rows, self.ineq_rhs))


def divisor_polytope(f: Fan, d: TorusDivisor) -> Polytope:
    """Section polytope of the divisor; vertex enumeration is a brute
    force over n-subsets of the defining inequalities."""
    n = f.dim
    rows = tuple(f.rays)
    rhs = tuple(-c for c in d.coeffs)
    if n == 0:
        return Polytope(rows, rhs, ((),))
    vertices = set()
    for subset in combinations(range(len(rows)), n):
        sys_rows = [rows[i] for i in subset]
        if rational_rank(sys_rows) != n:
            continue
        sol = solve_linear(sys_rows, [rhs[i] for i in subset])
        if sol is None:
            continue
        if all(dot(row, sol) >= b for row, b in zip(rows, rhs)):
            vertices.add(tuple(Fraction(x) for x in sol))
    if not vertices:
        # distinguish empty from unbounded (the latter cannot occur on
        # complete fans: the rays positively span the lattice)
        if polyhedra.lp_feasible(n, ineqs=list(zip(rows, rhs))) is not None:
            raise RuntimeError("divisor polytope is unbounded; fan not complete?")
    return Polytope(rows, rhs, tuple(sorted(vertices)))


def lattice_points(p: Polytope):
    """All integer points of the polytope by bounding-box scan."""
    if not p.vertices:
        return []
    n = len(p.vertices[0])
    if n == 0:
        return [()]
    lo = [min(v[i] for v in p.vertices) for i in range(n)]
    hi = [max(v[i] for v in p.vertices) for i in range(n)]
    lo = [ceil(x) for x in lo]
    hi = [floor(x) for x in hi]
    pts = []

    def walk(prefix):
        k = len(prefix)
        if k == n:
            if p.contains(prefix):
                pts.append(tuple(prefix))
            return
        for v in range(lo[k], hi[k] + 1):
            walk(prefix + [v])

    walk([])
    return pts


def pullback(f: Fan, refined: Fan, data: CartierData) -> TorusDivisor:
    """Pull a Q-Cartier divisor back along a refinement: the support
    function is evaluated on every ray of the refined fan."""
    if not refines(refined, f):
        raise ValueError("second fan does not refine the first")
    coeffs = []
    for ray in refined.rays:
        ci = f.containing_max_cone(ray)
        assert ci is not None
        coeffs.append(-Fraction(dot(data.m[ci], ray)))
    return TorusDivisor(coeffs)


class CurveClassSpace(NamedTuple):
    """Numerical curve classes as functionals on the Q-Cartier
    coefficient space.

    basis: Q-Cartier divisor coefficient vectors spanning the space;
    wall_classes[i]: pairing of each wall curve with the basis divisors,
    in the order of enumerate_walls(f).
    """

    fan: Fan
    basis: tuple
    wall_classes: tuple
    dim: int

    def divisor_coordinates(self, d: TorusDivisor):
        """Coordinates of a Q-Cartier divisor in the chosen basis."""
        cols = list(zip(*self.basis))
        sol = solve_linear(cols, d.coeffs)
        if sol is None:
            raise ValueError("divisor is not Q-Cartier")
        return sol

    def divisor_from_coordinates(self, coords) -> TorusDivisor:
        total = [Fraction(0)] * len(self.fan.rays)
        for c, b in zip(coords, self.basis):
            for i, x in enumerate(b):
                total[i] += Fraction(c) * x
        return TorusDivisor(total)

    def pair(self, d: TorusDivisor, wall_index: int) -> Fraction:
        coords = self.divisor_coordinates(d)
        return Fraction(dot(coords, self.wall_classes[wall_index]))


def qcartier_coefficient_basis(f: Fan):
    """Basis of {a : sum a_rho D_rho is Q-Cartier} inside Q^#rays.

    A coefficient vector is Q-Cartier iff for every maximal cone it is
    orthogonal to all linear relations among the cone's rays.
    """
    nrays = len(f.rays)
    conditions = []
    for cone in f.max_cones:
        rows = [f.rays[i] for i in cone]
        for rel in rational_kernel(list(zip(*rows)), ncols=len(cone)):
            cond = [Fraction(0)] * nrays
            for pos, i in enumerate(cone):
                cond[i] = rel[pos]
            conditions.append(tuple(cond))
    if not conditions:
        return [
            tuple(Fraction(int(i == j)) for j in range(nrays))
            for i in range(nrays)
        ]
    return rational_kernel(conditions, ncols=nrays)


def curve_class_space(f: Fan) -> CurveClassSpace:
    if "curve_class_space" in f._cache:
        return f._cache["curve_class_space"]
    basis = qcartier_coefficient_basis(f)
    walls = enumerate_walls(f)
    datas = [qcartier_data(f, TorusDivisor(b)) for b in basis]
    classes = []
    for w in walls:
        classes.append(
            tuple(intersect_wall(f, data, w) for data in datas)
        )
    space = CurveClassSpace(f, tuple(basis), tuple(classes), len(basis))
    f._cache["curve_class_space"] = space
    return space
