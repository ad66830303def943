"""Shared test helpers: seeded random generators and independent oracles.

The oracles here deliberately avoid the code paths they are used to check:
derivatives are reconstructed from function values by exact interpolation,
and linear systems are solved by a local Gaussian elimination.
"""

from __future__ import annotations

import random
from fractions import Fraction

from noetherjet.algebra import Expr, JetVar
from noetherjet.calculus import VectorField, multi_indices

COORD_VARS = [JetVar.coordinate(c) for c in ("x", "y", "t")]
ORDER0_VARS = COORD_VARS + [JetVar.derivative(0, 0, 0)]
ORDER1_VARS = ORDER0_VARS + [JetVar(None, idx) for idx in multi_indices(1)]
ORDER2_VARS = ORDER1_VARS + [JetVar(None, idx) for idx in multi_indices(2)]


def random_fraction(rng: random.Random, bound: int = 9) -> Fraction:
    denominator = rng.randint(1, 5)
    numerator = rng.randint(-bound * denominator, bound * denominator)
    return Fraction(numerator, denominator)


def nonzero_fraction(rng: random.Random, bound: int = 9) -> Fraction:
    while True:
        q = random_fraction(rng, bound)
        if q:
            return q


def random_expr(
    rng: random.Random,
    pool: list[JetVar],
    max_terms: int = 4,
    max_factors: int = 3,
    max_exp: int = 2,
) -> Expr:
    """A small random polynomial over the given variables (possibly zero)."""
    result = Expr.constant(0)
    for _ in range(rng.randint(0, max_terms)):
        term = Expr.constant(nonzero_fraction(rng))
        for _ in range(rng.randint(0, max_factors)):
            var = rng.choice(pool)
            term = term * Expr.variable(var) ** rng.randint(1, max_exp)
        result = result + term
    return result


def random_point(
    rng: random.Random, variables: list[JetVar], bound: int = 5
) -> dict[JetVar, Fraction]:
    return {
        var: Fraction(rng.randint(-bound * 4, bound * 4), 4) for var in variables
    }


def random_vector_field(rng: random.Random) -> VectorField:
    """A random point field with small order-0 polynomial components."""
    comps = [
        random_expr(rng, ORDER0_VARS, max_terms=2, max_factors=2, max_exp=2)
        for _ in range(4)
    ]
    return VectorField(*comps)


# -- interpolation oracle for partial derivatives -------------------------------


def _solve_gaussian(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    n = len(matrix)
    aug = [row[:] + [b] for row, b in zip(matrix, rhs)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[pivot] = aug[pivot], aug[col]
        scale = aug[col][col]
        aug[col] = [v / scale for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [v - factor * p for v, p in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


def partial_via_interpolation(
    e: Expr, var: JetVar, point: dict[JetVar, Fraction]
) -> Fraction:
    """d e/d var at ``point``, reconstructed from plain evaluations of e.

    Restrict e to the line where only ``var`` moves, sample it at
    0, 1, ..., d, fit the exact univariate polynomial through the samples,
    and differentiate the fitted coefficients.  Exact for any polynomial of
    degree <= d in ``var``.
    """
    degree = max((m.exponent(var) for m, _ in e.terms), default=0)
    samples = []
    for s in range(degree + 1):
        shifted = dict(point)
        shifted[var] = Fraction(s)
        samples.append(e.evaluate(shifted))
    # Vandermonde fit: sum_k c_k s^k = samples[s]
    matrix = [
        [Fraction(s) ** k for k in range(degree + 1)] for s in range(degree + 1)
    ]
    coeffs = _solve_gaussian(matrix, samples)
    at = point[var]
    return sum(
        (k * c * at ** (k - 1) for k, c in enumerate(coeffs) if k > 0),
        Fraction(0),
    )
