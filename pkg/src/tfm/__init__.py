"""tfm: exact Mori-theoretic invariants of toric foliated pairs.

Fans, torus-invariant divisors, toric foliations, the Kleiman-Mori
cone with extremal-ray lengths and contractions, combinatorial sheaf
cohomology, and a foliated minimal model program runner.  All
arithmetic is exact (ints and fractions); no floating point anywhere.
"""

from tfm.divisor import TorusDivisor
from tfm.fan import Fan
from tfm.foliation import FoliatedPair, FoliationSubspace
from tfm.kernel import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = [
    "Fan",
    "TorusDivisor",
    "FoliatedPair",
    "FoliationSubspace",
    "KERNEL_BACKEND",
    "__version__",
]
