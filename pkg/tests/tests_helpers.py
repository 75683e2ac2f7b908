"""Small shared helpers for the test modules."""

from tfm import polyhedra
from tfm.divisor import TorusDivisor, curve_class_space


def ample_for(f) -> TorusDivisor:
    """Some ample divisor on a projective fan (rational coefficients)."""
    space = curve_class_space(f)
    sol = polyhedra.lp_feasible(
        space.dim, ineqs=[(cls, 1) for cls in space.wall_classes]
    )
    assert sol is not None, "fan is not projective"
    return space.divisor_from_coordinates(sol)
