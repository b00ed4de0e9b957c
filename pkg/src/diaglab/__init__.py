"""Exact arithmetic for diagonals of rational functions, the linear
differential operators that annihilate them, and the special-function
series (hypergeometric, Heun, algebraic, modular) those diagonals turn
out to be.

Everything is computed over Q or a quadratic extension Q(sqrt(d)) with
arbitrary-precision rationals; no floating point anywhere.
"""

__version__ = "0.1.0"

from .field import QQ, QuadExt, qe  # noqa: F401
from .series import PSeries, ps_from_coeffs  # noqa: F401
