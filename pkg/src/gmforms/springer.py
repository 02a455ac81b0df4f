"""C-stable lattices in a graded F_q(e)-space inside a valuation window.

Lattices M with e^a L in M in e^-a L (L the standard lattice) are listed by
their Hermite normal forms and filtered by C_n M in M.  An independent
oracle enumerates the same objects as submodules of e^-a L / e^a L over F_q.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction

from .lattices import GradedSpace, Lattice, first_unstable, stability_bound, window_contains
from .scalars import BackendConfig, UnsupportedError, binom, finite, is_prime

DEFAULT_CEILING = 10**6
DEFAULT_QS = (2, 3, 5, 7)


class CeilingExceededError(RuntimeError):
    def __init__(self, estimate: int, ceiling: int):
        super().__init__(f"search space of {estimate} candidates exceeds the ceiling {ceiling}")
        self.estimate = estimate
        self.ceiling = ceiling


class UnderdeterminedFitError(ValueError):
    pass


@dataclass(frozen=True)
class WindowSpec:
    degrees: tuple
    k: int
    a: int
    q: int
    index: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(int(d) for d in self.degrees))
        if not self.degrees:
            raise ValueError("need at least one degree")
        if self.k < 1:
            raise ValueError("k must be positive")
        if self.a < 0:
            raise ValueError("window radius must be non-negative")
        BackendConfig("ratfunc-fq", q=self.q, k=self.k)  # validates q
        if not is_prime(self.q):
            raise UnsupportedError("only prime q is supported")

    @property
    def rank(self) -> int:
        return len(self.degrees)

    @property
    def field(self):
        return finite(self.q, self.k)

    @property
    def space(self) -> GradedSpace:
        return GradedSpace(self.degrees)

    def with_q(self, q: int) -> "WindowSpec":
        return WindowSpec(self.degrees, self.k, self.a, q, self.index)

    def to_json(self) -> dict:
        out = {"degrees": list(self.degrees), "k": self.k, "a": self.a, "q": self.q}
        if self.index is not None:
            out["index"] = self.index
        return out


@dataclass(frozen=True)
class StableLatticeSet:
    spec: WindowSpec
    lattices: tuple

    def strata(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for lat in self.lattices:
            i = sum(lat.exponents)
            out[i] = out.get(i, 0) + 1
        return dict(sorted(out.items()))

    def __len__(self):
        return len(self.lattices)

    def to_json(self) -> dict:
        return {
            "spec": self.spec.to_json(),
            "count": len(self.lattices),
            "strata": [{"index": i, "count": n} for i, n in self.strata().items()],
            "lattices": [lat.to_json() for lat in self.lattices],
        }


# --- HNF enumeration ------------------------------------------------------------


def candidate_count(spec: WindowSpec) -> int:
    """Number of HNF matrices with pivot exponents in [-a, a] and entries in e^-a O."""
    span = range(2 * spec.a + 1)
    total = 1
    for i in range(spec.rank):
        total *= sum(spec.q ** (i * b) for b in span)
    return total


def _exponent_types(spec: WindowSpec):
    for exps in itertools.product(range(-spec.a, spec.a + 1), repeat=spec.rank):
        if spec.index is None or sum(exps) == spec.index:
            yield exps


def _hnf_candidates(spec: WindowSpec, exps: tuple):
    """All lower-triangular HNFs with the given pivot exponents inside e^-a O."""
    field = spec.field
    r, a, q = spec.rank, spec.a, spec.q
    slots = [(i, j) for i in range(r) for j in range(i)]
    digit_ranges = [exps[i] + a for i, _ in slots]
    choices = [
        itertools.product(range(q), repeat=n) if n > 0 else [()] for n in digit_ranges
    ]
    for digits in itertools.product(*[list(c) for c in choices]):
        mat = [[field.zero] * r for _ in range(r)]
        for i in range(r):
            mat[i][i] = field.pi_power(exps[i])
        for (i, j), ds in zip(slots, digits):
            if any(ds):
                mat[i][j] = field.poly(ds, -a)
        yield Lattice(tuple(tuple(row) for row in mat), tuple(exps), field)


def is_c_stable(space: GradedSpace, lat: Lattice, field) -> bool:
    """C_n M in M for every n, using the finite bound (no characteristic-0 shortcut)."""
    return first_unstable(space, lat, field, stability_bound(space, lat, field)) is None


def _sort_key(lat: Lattice) -> str:
    return json.dumps(lat.to_json())


def window_lattices(spec: WindowSpec, ceiling: int = DEFAULT_CEILING, stable_only: bool = True):
    estimate = candidate_count(spec)
    if estimate > ceiling:
        raise CeilingExceededError(estimate, ceiling)
    space, field = spec.space, spec.field
    found = []
    for exps in _exponent_types(spec):  # independent partitions
        for lat in _hnf_candidates(spec, exps):
            if not window_contains(lat, spec.a):
                continue
            if stable_only and not is_c_stable(space, lat, field):
                continue
            found.append(lat)
    found.sort(key=_sort_key)
    return found


def enumerate_stable_lattices(spec: WindowSpec, ceiling: int = DEFAULT_CEILING) -> StableLatticeSet:
    return StableLatticeSet(spec, tuple(window_lattices(spec, ceiling)))


def count_stable_lattices(spec: WindowSpec, ceiling: int = DEFAULT_CEILING) -> dict[int, int]:
    """index (sum of pivot exponents) -> number of stable lattices."""
    return enumerate_stable_lattices(spec, ceiling).strata()


# --- submodule oracle --------------------------------------------------------------
#
# W = e^-a L / e^a L is an F_p-space with basis e^t u_c, t in [-a, a), c < r.
# Coordinates are stored at position c * 2a + (t + a).


def _insert(basis: dict, v: list, p: int) -> bool:
    """Add v to a reduced row-echelon basis (pivot -> row); False if dependent."""
    v = list(v)
    for piv, row in basis.items():
        c = v[piv]
        if c:
            v = [(x - c * y) % p for x, y in zip(v, row)]
    lead = next((i for i, x in enumerate(v) if x), None)
    if lead is None:
        return False
    inv = pow(v[lead], p - 2, p)
    v = [(x * inv) % p for x in v]
    for piv, row in list(basis.items()):
        c = row[lead]
        if c:
            basis[piv] = [(x - c * y) % p for x, y in zip(row, v)]
    basis[lead] = v
    return True


def _key(basis: dict) -> tuple:
    return tuple(tuple(basis[piv]) for piv in sorted(basis))


def _operators(spec: WindowSpec):
    """e and the C_n with nk < 2a, as functions on coordinate vectors."""
    r, w, p = spec.rank, 2 * spec.a, spec.q

    def shift_by(v, s, scale):
        out = [0] * (r * w)
        for c in range(r):
            m = scale[c] % p
            if not m:
                continue
            for t in range(w - s):
                x = v[c * w + t]
                if x:
                    out[c * w + t + s] = (x * m) % p
        return out

    ops = [lambda v: shift_by(v, 1, [1] * r)]
    n = 1
    while n * spec.k < w:
        scale = [binom(d, n) for d in spec.degrees]
        ops.append(lambda v, s=n * spec.k, sc=scale: shift_by(v, s, sc))
        n += 1
    return ops


def oracle_submodules(spec: WindowSpec) -> set:
    """All subspaces of W stable under e and every C_n, as reduced-echelon keys.

    Every such submodule N != 0 contains a stable N' with N/N' one-dimensional
    and killed by all operators, so a breadth-first search from 0 that adds one
    vector v with op(v) in N at a time reaches them all.
    """
    p = spec.q
    dim = spec.rank * 2 * spec.a
    ops = _operators(spec)
    start: dict = {}
    seen = {_key(start)}
    frontier = [start]
    while frontier:
        nxt = []
        for basis in frontier:
            for v in _socle_lines(basis, ops, dim, p):
                grown = dict(basis)
                _insert(grown, v, p)
                key = _key(grown)
                if key not in seen:
                    seen.add(key)
                    nxt.append(grown)
        frontier = nxt
    return seen


def _reduced(basis: dict, v: list, p: int) -> list:
    for piv, row in basis.items():
        c = v[piv]
        if c:
            v = [(x - c * y) % p for x, y in zip(v, row)]
    return v


def _socle_lines(basis: dict, ops, dim: int, p: int):
    """One vector per line of K/N, where K = {v : op(v) in N for every op}."""
    width = len(ops) * dim
    pivots: dict = {}
    kernel = []
    for i in range(dim):
        unit = [0] * dim
        unit[i] = 1
        row = [x for op in ops for x in _reduced(basis, op(unit), p)] + unit
        for col, prow in pivots.items():
            c = row[col]
            if c:
                row = [(x - c * y) % p for x, y in zip(row, prow)]
        lead = next((j for j in range(width) if row[j]), None)
        if lead is None:
            kernel.append(row[width:])
        else:
            inv = pow(row[lead], p - 2, p)
            pivots[lead] = [(x * inv) % p for x in row]
    # vectors reduced modulo N are independent modulo N iff independent
    comp: dict = {}
    for v in kernel:
        _insert(comp, _reduced(basis, v, p), p)
    gens = list(comp.values())
    for coeffs in itertools.product(range(p), repeat=len(gens)):
        if next((c for c in coeffs if c), None) != 1:
            continue
        v = [0] * dim
        for c, g in zip(coeffs, gens):
            if c:
                v = [(x + c * y) % p for x, y in zip(v, g)]
        yield v


def oracle_counts(spec: WindowSpec) -> dict[int, int]:
    """index -> count from the submodule oracle; index = a r - dim N."""
    out: dict[int, int] = {}
    for key in oracle_submodules(spec):
        i = spec.a * spec.rank - len(key)
        if spec.index is None or i == spec.index:
            out[i] = out.get(i, 0) + 1
    return dict(sorted(out.items()))


def lattice_submodule_key(lat: Lattice, spec: WindowSpec) -> tuple:
    """Image of M in W, as a reduced-echelon key comparable with the oracle."""
    field, a, p = spec.field, spec.a, spec.q
    w = 2 * a
    basis: dict = {}
    for col in lat.basis_columns():
        for s in range(w):
            v = [0] * (spec.rank * w)
            for c, x in enumerate(col):
                y = field.reduce(x * field.pi_power(s), a)
                if not y:
                    continue
                for i, coef in enumerate(y.num):
                    t = y.v + i
                    if -a <= t < a:
                        v[c * w + t + a] = coef % p
            _insert(basis, v, p)
    return _key(basis)


# --- polynomiality in q -------------------------------------------------------------


def degree_bound(spec: WindowSpec, index: int) -> int:
    """Largest number of free F_q-digits among HNF types in the stratum."""
    best = -1
    for exps in itertools.product(range(-spec.a, spec.a + 1), repeat=spec.rank):
        if sum(exps) == index:
            best = max(best, sum(i * (e + spec.a) for i, e in enumerate(exps)))
    return best


def _interpolate(points):
    """Coefficients (constant first) of the polynomial through the given points."""
    n = len(points)
    coeffs = [Fraction(0)] * n
    for i, (xi, yi) in enumerate(points):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for d in range(len(basis) - 1):
                basis[d] -= xj * basis[d + 1]
            denom *= xi - xj
        for d, b in enumerate(basis):
            coeffs[d] += yi * b / denom
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _poly_eval(coeffs, x):
    total = Fraction(0)
    for c in reversed(coeffs):
        total = total * x + c
    return total


def format_q_polynomial(coeffs) -> str:
    terms = []
    for d in range(len(coeffs) - 1, -1, -1):
        c = coeffs[d]
        if not c:
            continue
        mono = "" if d == 0 else ("q" if d == 1 else f"q^{d}")
        if d and c == 1:
            body = mono
        elif d and c == -1:
            body = "-" + mono
        else:
            body = str(c) + ("*" + mono if mono else "")
        terms.append(body)
    if not terms:
        return "0"
    out = terms[0]
    for t in terms[1:]:
        out += " - " + t[1:] if t.startswith("-") else " + " + t
    return out


def fit_counts(counts: dict, bounds: dict) -> dict:
    """Fit counts[q][index] to polynomials in q of degree <= bounds[index].

    Uses the first deg + 1 values of q and re-checks the remaining ones.
    """
    qs = sorted(counts)
    indices = sorted({i for per_q in counts.values() for i in per_q} | set(bounds))
    strata = []
    ok = True
    total: list = []
    for i in indices:
        deg = max(bounds.get(i, 0), 0)
        if len(qs) < deg + 1:
            raise UnderdeterminedFitError(
                f"stratum {i} needs {deg + 1} values of q, got {len(qs)}"
            )
        pts = [(q, counts[q].get(i, 0)) for q in qs]
        coeffs = _interpolate(pts[: deg + 1])
        matches = all(_poly_eval(coeffs, q) == n for q, n in pts)
        nonneg = all(c >= 0 and c.denominator == 1 for c in coeffs)
        ok = ok and matches
        total = [x + y for x, y in itertools.zip_longest(total, coeffs, fillvalue=Fraction(0))]
        strata.append({
            "index": i,
            "counts": {str(q): n for q, n in pts},
            "polynomial": format_q_polynomial(coeffs),
            "coefficients": [str(c) for c in coeffs],
            "matches": matches,
            "nonnegative_integer": nonneg,
        })
    return {"qs": qs, "strata": strata, "polynomial": format_q_polynomial(total), "ok": ok}


def polynomiality_check(template: WindowSpec, qs=DEFAULT_QS, ceiling: int = DEFAULT_CEILING) -> dict:
    counts = {q: count_stable_lattices(template.with_q(q), ceiling) for q in qs}
    indices = {i for per_q in counts.values() for i in per_q}
    bounds = {i: degree_bound(template, i) for i in indices}
    report = fit_counts(counts, bounds)
    spec = template.to_json()
    spec.pop("q")
    report["spec"] = spec
    return report


__all__ = [
    "WindowSpec", "StableLatticeSet", "CeilingExceededError", "UnderdeterminedFitError",
    "DEFAULT_CEILING", "candidate_count", "enumerate_stable_lattices", "count_stable_lattices",
    "window_lattices", "is_c_stable", "oracle_submodules", "oracle_counts",
    "lattice_submodule_key", "degree_bound", "fit_counts", "polynomiality_check",
    "format_q_polynomial",
]
