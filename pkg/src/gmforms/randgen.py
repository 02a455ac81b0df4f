"""Seeded random generators for scalars, Laurent polynomials, lattices and pairs.

Everything takes an explicit ``random.Random`` so suites are reproducible.
"""

from __future__ import annotations

import random

from .groupscheme import GPoint, make_point
from .laurent import GeneratorExpression, LaurentPoly
from .lattices import (
    GradedSpace,
    Lattice,
    admissible,
    admissible_closure,
    conductor_depth,
    hnf,
    lattice_sum,
)
from .linalg import determinant, matmul
from .scalars import Scalar, ValuedField


def random_unit(field: ValuedField, rng: random.Random) -> Scalar:
    if field.cfg.kind == "rational-padic":
        p = field.p
        num = rng.choice([x for x in range(-2 * p - 3, 2 * p + 4) if x % p])
        den = rng.choice([x for x in range(1, 2 * p + 3) if x % p])
        return field(num) / den
    modulus = field.characteristic or 7
    c0 = rng.randint(1, modulus - 1) * rng.choice([1, -1])
    num = [c0] + [rng.randint(-3, 3) for _ in range(rng.randint(0, 2))]
    den = [1] + [rng.randint(-2, 2) for _ in range(rng.randint(0, 1))]
    return field.poly(num) / field.poly(den)


def random_integral(field: ValuedField, rng: random.Random, size: int = 6) -> Scalar:
    """An element of O, zero with small probability."""
    if rng.random() < 0.1:
        return field.zero
    return random_unit(field, rng) * field.pi_power(rng.randint(0, size // 2))


def random_scalar(field: ValuedField, rng: random.Random, vmin: int = -3, vmax: int = 3) -> Scalar:
    """A nonzero scalar with valuation in [vmin, vmax]."""
    return random_unit(field, rng) * field.pi_power(rng.randint(vmin, vmax))


def random_laurent(
    field: ValuedField,
    rng: random.Random,
    lo: int = -3,
    hi: int = 3,
    terms: int = 4,
    vmin: int = -2,
    vmax: int = 2,
) -> LaurentPoly:
    coeffs = {}
    for _ in range(rng.randint(1, terms)):
        coeffs[rng.randint(lo, hi)] = random_scalar(field, rng, vmin, vmax)
    return LaurentPoly(coeffs)


def random_polynomial(field: ValuedField, rng: random.Random, degree: int = 8) -> LaurentPoly:
    """Non-negative support, degree at most ``degree``."""
    return random_laurent(field, rng, 0, degree, degree + 1)


def random_member(field: ValuedField, rng: random.Random, shift: int = 3, length: int = 4) -> LaurentPoly:
    """A nonzero T^-m sum a_n ((T - 1)/f)^n with random integral a_n: always in S_k."""
    while True:
        coeffs = tuple(random_integral(field, rng, 4) for _ in range(rng.randint(1, length)))
        if any(coeffs):
            return GeneratorExpression(rng.randint(0, shift), coeffs, field).expand()


def random_point(field: ValuedField, rng: random.Random, ring="O", size: int = 6) -> GPoint:
    """x random in O, t = 1 + f x (redrawn until t is a unit, which matters for k = 0)."""
    while True:
        x = random_integral(field, rng, size)
        t = 1 + field.f * x
        if field.is_unit(t):
            return make_point(t, x, ring, field)


def random_unimodular(r: int, field: ValuedField, rng: random.Random, steps: int = 6):
    """Product of integral elementary matrices and unit diagonals."""
    u = [[field.one if i == j else field.zero for j in range(r)] for i in range(r)]
    for _ in range(steps):
        if r > 1:
            i, j = rng.sample(range(r), 2)
            c = random_integral(field, rng, 2)
            u = [
                [u[a][b] + (c * u[j][b] if a == i else 0) for b in range(r)]
                for a in range(r)
            ]
        i = rng.randrange(r)
        s = random_unit(field, rng)
        u = [[x * s if a == i else x for x in row] for a, row in enumerate(u)]
    return u


def random_lattice(r: int, field: ValuedField, rng: random.Random, depth: int = 3) -> Lattice:
    """A random lattice inside the window pi^depth O^r in M in pi^-depth O^r."""
    while True:
        exps = [rng.randint(-depth, depth) for _ in range(r)]
        u = random_unimodular(r, field, rng)
        basis = [[x * field.pi_power(exps[j]) for j, x in enumerate(row)] for row in u]
        lat = hnf(basis, field)
        if conductor_depth(lat) <= depth:
            return lat


def random_degrees(r: int, rng: random.Random, lo: int = -3, hi: int = 3) -> GradedSpace:
    return GradedSpace(tuple(rng.randint(lo, hi) for _ in range(r)))


def random_admissible_pair(field: ValuedField, rng: random.Random, rmax: int = 4, depth: int = 3):
    """Admissible closure of a random lattice; it stays inside the same window."""
    r = rng.randint(1, rmax)
    space = random_degrees(r, rng)
    return space, admissible_closure(space, random_lattice(r, field, rng, depth), field)


def random_nonadmissible_pair(field: ValuedField, rng: random.Random, rmax: int = 4, depth: int = 3, tries: int = 200):
    for _ in range(tries):
        r = rng.randint(2, max(2, rmax))
        space = random_degrees(r, rng)
        if len(set(space.degrees)) == 1:
            continue
        lat = random_lattice(r, field, rng, depth)
        if not admissible(space, lat, field).admissible:
            return space, lat
    raise RuntimeError("no non-admissible lattice found")


def random_graded_map(space: GradedSpace, field: ValuedField, rng: random.Random):
    """Block-diagonal (graded) matrix with integral, nonsingular blocks."""
    r = space.rank
    while True:
        phi = [
            [random_integral(field, rng, 2) if space.degrees[i] == space.degrees[j] else field.zero for j in range(r)]
            for i in range(r)
        ]
        if determinant(phi, field):
            return phi


def random_injective_morphism(field: ValuedField, rng: random.Random, rmax: int = 3, depth: int = 2):
    """(phi, source pair, target pair) with phi graded, injective and phi M in M'."""
    space, m = random_admissible_pair(field, rng, rmax, depth)
    phi = random_graded_map(space, field, rng)
    image = hnf(matmul(phi, [list(r) for r in m.matrix]), field)
    extra = random_lattice(space.rank, field, rng, depth)
    if rng.random() < 0.5:
        extra = image
    target = admissible_closure(space, lattice_sum(image, extra), field)
    return phi, (space, m), (space, target)


__all__ = [
    "random_unit", "random_integral", "random_scalar", "random_laurent", "random_polynomial",
    "random_member", "random_point", "random_unimodular", "random_lattice", "random_degrees",
    "random_admissible_pair", "random_nonadmissible_pair", "random_graded_map",
    "random_injective_morphism",
]
