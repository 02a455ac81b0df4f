"""Graded spaces, O-lattices and the admissibility test C_n M in M.

A graded space is F^r with a degree attached to each standard basis vector.
C_n acts on the degree-i part by f^n binom(i, n).  A full-rank lattice M is
admissible when C_n M lies in M for every n >= 0; :func:`stability_bound`
reduces this to finitely many n.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property

from .linalg import (
    SingularMatrixError,
    determinant,
    diag,
    from_columns,
    hermite_columns,
    inverse,
    matmul,
    matvec,
    transpose,
)
from .scalars import UnsupportedError, ValuedField, binom


@dataclass(frozen=True)
class GradedSpace:
    degrees: tuple

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(int(d) for d in self.degrees))
        if not self.degrees:
            raise ValueError("a graded space needs at least one basis vector")

    @property
    def rank(self) -> int:
        return len(self.degrees)

    def pieces(self) -> dict[int, list[int]]:
        """degree -> coordinates carrying that degree."""
        out: dict[int, list[int]] = {}
        for c, d in enumerate(self.degrees):
            out.setdefault(d, []).append(c)
        return out


@dataclass(frozen=True, eq=False)
class Lattice:
    """Full-rank O-lattice in F^r, stored by its Hermite normal form.

    ``matrix`` holds the basis as columns (rows of the tuple are coordinates).
    """

    matrix: tuple
    exponents: tuple
    field: ValuedField = dc_field(repr=False)

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def basis_columns(self) -> list[list]:
        return transpose(self.matrix)

    @cached_property
    def inverse(self) -> list[list]:
        return inverse([list(r) for r in self.matrix], self.field)

    def coordinates(self, v) -> list:
        """Solve basis * c = v by forward substitution (the basis is lower triangular)."""
        h = self.matrix
        c = []
        for i in range(self.rank):
            acc = v[i]
            for j in range(i):
                if h[i][j] and c[j]:
                    acc = acc - h[i][j] * c[j]
            c.append(acc / h[i][i])
        return c

    def __eq__(self, other):
        return isinstance(other, Lattice) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def to_json(self) -> list:
        fmt = self.field.format
        return [[fmt(x) for x in col] for col in self.basis_columns()]


def hnf(basis, field: ValuedField) -> Lattice:
    """Canonical lattice from a square nonsingular basis matrix (columns = vectors)."""
    n = len(basis)
    if any(len(row) != n for row in basis):
        raise ValueError("basis matrix must be square")
    return lattice_from_generators(transpose(basis), field)


def lattice_from_generators(cols, field: ValuedField) -> Lattice:
    """O-span of the given column vectors (must have full rank)."""
    cols = [[field(x) for x in c] for c in cols]
    hcols, exps = hermite_columns(cols, field)
    return Lattice(tuple(tuple(r) for r in from_columns(hcols)), tuple(exps), field)


def standard_lattice(r: int, field: ValuedField, shift: int = 0) -> Lattice:
    """pi^shift O^r."""
    return hnf(diag([field.pi_power(shift)] * r, field), field)


def lattice_membership(v, m: Lattice) -> bool:
    return all(m.field.is_integral(c) for c in m.coordinates(v))


def lattice_contains(m: Lattice, sub: Lattice) -> bool:
    return all(lattice_membership(col, m) for col in sub.basis_columns())


def lattice_sum(m: Lattice, other: Lattice) -> Lattice:
    return lattice_from_generators(m.basis_columns() + other.basis_columns(), m.field)


def dual_lattice(m: Lattice) -> Lattice:
    """{y : y . x in O for all x in M}, basis (M^-1)^T."""
    return hnf(transpose(m.inverse), m.field)


def lattice_intersect(m: Lattice, other: Lattice) -> Lattice:
    return dual_lattice(lattice_sum(dual_lattice(m), dual_lattice(other)))


def lattice_index(m: Lattice, sub: Lattice) -> int:
    """Length of M/M' for M' inside M (sum of elementary-divisor exponents)."""
    if not lattice_contains(m, sub):
        raise ValueError("lattice_index needs the second lattice inside the first")
    return sum(sub.exponents) - sum(m.exponents)


def valuation_of_det(basis, field: ValuedField) -> int:
    det = determinant(basis, field)
    if not det:
        raise SingularMatrixError("matrix is singular")
    return field.valuation(det)


def scale_lattice(m: Lattice, a: int) -> Lattice:
    """pi^a M."""
    s = m.field.pi_power(a)
    return hnf([[x * s for x in row] for row in m.matrix], m.field)


# --- C_n and admissibility -----------------------------------------------------


def c_entries(space: GradedSpace, n: int, field: ValuedField) -> list:
    fn = field.f_power(n)
    return [fn * binom(d, n) for d in space.degrees]


def c_operator(space: GradedSpace, n: int, field: ValuedField) -> list[list]:
    """Diagonal matrix of C_n: f^n binom(d_j, n) at position j."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return diag(c_entries(space, n, field), field)


def conductor_depth(m: Lattice) -> int:
    """Least D >= 0 with pi^D O^r in M in pi^-D O^r."""
    fld = m.field
    worst = 0
    for mat in (m.matrix, m.inverse):
        for row in mat:
            for x in row:
                if x:
                    worst = max(worst, -fld.valuation(x))
    return worst


def stability_bound(space: GradedSpace, m: Lattice, field: ValuedField) -> int:
    """N such that C_n M in M for 1 <= n <= N forces it for every n.

    Residue characteristic 0: C_n is an O-polynomial in C_1, so N = 1.
    Otherwise C_n has entries of valuation >= nk, and any diagonal operator
    whose entries have valuation >= 2D preserves M; hence N = ceil(2D/k).
    """
    if field.cfg.kind == "ratfunc-char0":
        return 1
    if field.k == 0:
        raise UnsupportedError(
            "admissibility with k = 0 in positive residue characteristic has no "
            "finite criterion (binom(-1, n) is a unit for every n)"
        )
    return -(-2 * conductor_depth(m) // field.k)


def conjugated_c(space: GradedSpace, m: Lattice, n: int, field: ValuedField):
    """C_n written in the lattice basis: M^-1 C_n M."""
    entries = c_entries(space, n, field)
    scaled = [[entries[i] * x for x in row] for i, row in enumerate(m.matrix)]
    return matmul(m.inverse, scaled)


@dataclass(frozen=True)
class AdmissibilityVerdict:
    admissible: bool
    bound: int
    n: int | None = None
    column: int | None = None
    image: tuple | None = None

    def __bool__(self):
        return self.admissible

    def to_json(self, field: ValuedField) -> dict:
        out = {"admissible": self.admissible, "bound": self.bound}
        if not self.admissible:
            out["witness"] = {
                "n": self.n,
                "column": self.column,
                "image": [field.format(x) for x in self.image],
            }
        return out


def is_graded(space: GradedSpace, m: Lattice) -> bool:
    """Every graded component of every basis vector lies in M."""
    for col in m.basis_columns():
        for coords in space.pieces().values():
            proj = [x if c in coords else m.field.zero for c, x in enumerate(col)]
            if not lattice_membership(proj, m):
                return False
    return True


def first_unstable(space: GradedSpace, m: Lattice, field: ValuedField, upto: int):
    """Least n in [1, upto] and column j with C_n m_j outside M, or None."""
    for n in range(1, upto + 1):
        k_n = conjugated_c(space, m, n, field)
        for j in range(m.rank):
            if not all(field.is_integral(k_n[i][j]) for i in range(m.rank)):
                image = tuple(matvec(c_operator(space, n, field), m.basis_columns()[j]))
                return n, j, image
    return None


def admissible(space: GradedSpace, m: Lattice, field: ValuedField) -> AdmissibilityVerdict:
    """Decide C_n M in M for all n >= 0."""
    if space.rank != m.rank:
        raise ValueError("graded space and lattice have different ranks")
    bound = stability_bound(space, m, field)
    if field.k == 0:
        # f = 1, residue characteristic 0: admissible iff M is graded
        if is_graded(space, m):
            return AdmissibilityVerdict(True, bound)
        hit = first_unstable(space, m, field, 1)
        if hit is None:
            raise AssertionError("ungraded lattice stable under C_1 in characteristic 0")
        return AdmissibilityVerdict(False, bound, *hit)
    hit = first_unstable(space, m, field, bound)
    if hit is None:
        return AdmissibilityVerdict(True, bound)
    return AdmissibilityVerdict(False, bound, *hit)


def admissible_closure(space: GradedSpace, m: Lattice, field: ValuedField) -> Lattice:
    """Smallest admissible lattice containing M."""
    while True:
        bound = stability_bound(space, m, field)
        gens = m.basis_columns()
        for n in range(1, bound + 1):
            c = c_entries(space, n, field)
            gens += [[c[i] * x for i, x in enumerate(col)] for col in m.basis_columns()]
        if field.k == 0:
            for coords in space.pieces().values():
                gens += [
                    [x if i in coords else field.zero for i, x in enumerate(col)]
                    for col in m.basis_columns()
                ]
        bigger = lattice_from_generators(gens, field)
        if bigger == m:
            return m
        m = bigger


def brute_force_unstable(space: GradedSpace, m: Lattice, field: ValuedField, upto: int):
    """Least n <= upto with some C_n m_j not in M, tested vector by vector."""
    cols = m.basis_columns()
    for n in range(1, upto + 1):
        op = c_operator(space, n, field)
        for col in cols:
            if not lattice_membership(matvec(op, col), m):
                return n
    return None


def lattice_from_json(data, field: ValuedField) -> Lattice:
    """Column-major list of string/number entries."""
    cols = [[field.parse(x) if isinstance(x, str) else field(x) for x in col] for col in data]
    return hnf(transpose(cols), field)


def pair_from_json(data: dict, field: ValuedField) -> tuple[GradedSpace, Lattice]:
    space = GradedSpace(tuple(data["degrees"]))
    if "basis" in data:
        lat = lattice_from_json(data["basis"], field)
    else:
        lat = standard_lattice(space.rank, field)
    if lat.rank != space.rank:
        raise ValueError("basis size does not match the number of degrees")
    return space, lat


def pair_to_json(space: GradedSpace, m: Lattice) -> dict:
    return {"degrees": list(space.degrees), "basis": m.to_json()}


def window_contains(m: Lattice, a: int) -> bool:
    """pi^a O^r in M in pi^-a O^r."""
    return conductor_depth(m) <= a


__all__ = [
    "GradedSpace", "Lattice", "hnf", "lattice_from_generators", "standard_lattice",
    "lattice_membership", "lattice_contains", "lattice_sum", "lattice_intersect",
    "lattice_index", "dual_lattice", "valuation_of_det", "scale_lattice", "c_operator",
    "conductor_depth", "stability_bound", "admissible", "AdmissibilityVerdict",
    "admissible_closure", "is_graded", "brute_force_unstable", "first_unstable",
    "conjugated_c", "pair_from_json", "pair_to_json", "lattice_from_json",
]
