"""Random instance generation for cross-check suites."""

from __future__ import annotations

import random

from ilpath.instance import IlpInstance


def random_instance(
    rng: random.Random,
    max_vars: int = 4,
    max_constraints: int = 3,
    coeff_bound: int = 3,
    rhs_bound: int = 5,
) -> IlpInstance:
    """Draw a small instance with uniform coefficients.

    Sizes are uniform in ``[1, max_vars] x [1, max_constraints]``; entries
    of A lie in ``[-coeff_bound, coeff_bound]`` and entries of b in
    ``[-rhs_bound, rhs_bound]``.  Zero rows and zero columns are allowed on
    purpose; downstream code must cope with them.
    """
    n = rng.randint(1, max_vars)
    m = rng.randint(1, max_constraints)
    coeffs = tuple(
        tuple(rng.randint(-coeff_bound, coeff_bound) for _ in range(n))
        for _ in range(m)
    )
    rhs = tuple(rng.randint(-rhs_bound, rhs_bound) for _ in range(m))
    names = tuple(f"x{i}" for i in range(1, n + 1))
    return IlpInstance(coeffs=coeffs, rhs=rhs, var_names=names)
