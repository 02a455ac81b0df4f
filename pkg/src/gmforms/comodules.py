"""Comodules attached to admissible pairs, their morphisms and torsion quotients.

For a graded space V and a lattice M with basis m_1..m_r, the grading
coaction sum_i x_i -> sum_i T^i (x) x_i restricts to M as

    Delta_M(m_j) = sum_l s_lj (x) m_l,    s_lj = sum_c (M^-1)_lc M_cj T^(d_c).

The entries lie in S_k exactly when the pair is admissible; in general they
lie in S_infinity (each s_lj has coefficient sum delta_lj).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .groupscheme import GPoint, comult, counit
from .laurent import (
    LaurentPoly,
    LaurentVector,
    MultiLaurent,
    express_in_generators,
    format_laurent,
    l_functional,
    parse_laurent,
    s_infinity_membership,
    s_membership,
    s_tensor_membership,
)
from .lattices import (
    AdmissibilityVerdict,
    GradedSpace,
    Lattice,
    admissible,
    hnf,
    lattice_membership,
)
from .linalg import (
    SingularMatrixError,
    determinant,
    inverse,
    matmul,
    smith_form,
    transpose,
)
from .scalars import ValuedField


class NotAdmissibleError(ValueError):
    def __init__(self, verdict: AdmissibilityVerdict):
        super().__init__(f"pair is not admissible: C_{verdict.n} fails on column {verdict.column}")
        self.verdict = verdict


@dataclass(frozen=True, eq=False)
class ComoduleMatrix:
    """Coaction of a lattice in a fixed basis; ``entries[l][j]`` is s_lj.

    ``hopf`` is "S_k" for pairs built from admissible data and "S_inf" for
    arbitrary gradings.
    """

    entries: tuple
    space: GradedSpace
    basis: tuple
    field: ValuedField = dc_field(repr=False)
    hopf: str = "S_k"

    @property
    def rank(self) -> int:
        return len(self.entries)

    def to_json(self) -> dict:
        fmt = self.field.format
        return {
            "degrees": list(self.space.degrees),
            "basis": [[fmt(x) for x in col] for col in transpose(self.basis)],
            "hopf": self.hopf,
            "entries": [[format_laurent(s, self.field) for s in row] for row in self.entries],
        }

    def __eq__(self, other):
        return isinstance(other, ComoduleMatrix) and self.entries == other.entries


def coaction_entries(space: GradedSpace, basis, field: ValuedField) -> tuple:
    """s_lj for an arbitrary basis (columns of ``basis``)."""
    basis = [list(r) for r in basis]
    binv = inverse(basis, field)
    r = len(basis)
    rows = []
    for l in range(r):
        row = []
        for j in range(r):
            coeffs: dict = {}
            for c, d in enumerate(space.degrees):
                a, b = binv[l][c], basis[c][j]
                if a and b:
                    coeffs[d] = coeffs.get(d, 0) + a * b
            row.append(LaurentPoly(coeffs))
        rows.append(tuple(row))
    return tuple(rows)


def grading_coaction(space: GradedSpace, v) -> LaurentVector:
    """Delta_N(v) = sum_i T^i (x) (degree-i part of v)."""
    terms: dict = {}
    r = space.rank
    for c, d in enumerate(space.degrees):
        vec = terms.setdefault(d, [0] * r)
        vec[c] = v[c]
    return LaurentVector(terms, r)


def base_change_check(cm: ComoduleMatrix) -> bool:
    """sum_l s_lj (x) m_l equals Delta_N(m_j) inside F[T,T^-1] (x) F^r."""
    r = cm.rank
    cols = transpose(cm.basis)
    for j in range(r):
        terms: dict = {}
        for l in range(r):
            for i, c in cm.entries[l][j].items():
                vec = terms.setdefault(i, [cm.field.zero] * r)
                for a in range(r):
                    if cols[l][a]:
                        vec[a] = vec[a] + c * cols[l][a]
        if LaurentVector(terms, r) != grading_coaction(cm.space, cols[j]):
            return False
    return True


def build_comodule(space: GradedSpace, m: Lattice, field: ValuedField) -> ComoduleMatrix:
    """The S_k-comodule structure on an admissible lattice (HNF basis)."""
    verdict = admissible(space, m, field)
    if not verdict.admissible:
        raise NotAdmissibleError(verdict)
    cm = ComoduleMatrix(coaction_entries(space, m.matrix, field), space, m.matrix, field)
    for row in cm.entries:
        for s in row:
            if not s_membership(s, field).member:
                raise AssertionError("admissible pair produced an entry outside S_k")
    if not base_change_check(cm):
        raise AssertionError("coaction does not extend the grading coaction")
    return cm


def naive_comodule(space: GradedSpace, m: Lattice, field: ValuedField, hopf="S_k") -> ComoduleMatrix:
    """Coaction matrix without any admissibility check."""
    return ComoduleMatrix(coaction_entries(space, m.matrix, field), space, m.matrix, field, hopf)


def first_integrality_failure(cm: ComoduleMatrix):
    """Least functional index n at which some entry leaves S_k, or None."""
    best = None
    for row in cm.entries:
        for s in row:
            v = s_membership(s, cm.field)
            if not v.member and (best is None or v.n < best):
                best = v.n
    return best


def coassociativity_defects(entries, field: ValuedField, moduli=None) -> list:
    """(m, j) pairs where Delta(s_mj) differs from sum_l s_lj (x) s_ml.

    With ``moduli`` (one exponent a_m per basis vector) the difference only
    has to lie in pi^(a_m) (S_k (x) S_k).
    """
    r = len(entries)
    bad = []
    for m in range(r):
        for j in range(r):
            rhs = MultiLaurent(2)
            for l in range(r):
                if entries[l][j] and entries[m][l]:
                    rhs = rhs + MultiLaurent.tensor(entries[l][j], entries[m][l])
            diff = comult(entries[m][j]) - rhs
            if moduli is None:
                ok = not diff and s_tensor_membership(rhs, field).member
            else:
                ok = s_tensor_membership(diff * field.pi_power(-moduli[m]), field).member
            if not ok:
                bad.append((m, j))
    return bad


def verify_comodule(cm: ComoduleMatrix) -> dict:
    """Exact check of coassociativity, counit and integrality."""
    fld = cm.field
    r = cm.rank
    counit_bad = [
        (l, j)
        for l in range(r)
        for j in range(r)
        if counit(cm.entries[l][j], fld) != (fld.one if l == j else fld.zero)
    ]
    if cm.hopf == "S_inf":
        integ_bad = [
            (l, j) for l in range(r) for j in range(r)
            if not s_infinity_membership(cm.entries[l][j], fld)
        ]
        coassoc_bad = []
        for m in range(r):
            for j in range(r):
                rhs = MultiLaurent(2)
                for l in range(r):
                    rhs = rhs + MultiLaurent.tensor(cm.entries[l][j], cm.entries[m][l])
                if comult(cm.entries[m][j]) != rhs:
                    coassoc_bad.append((m, j))
    else:
        integ_bad = [
            (l, j) for l in range(r) for j in range(r)
            if not s_membership(cm.entries[l][j], fld).member
        ]
        coassoc_bad = coassociativity_defects(cm.entries, fld)
    checks = {"coassoc": coassoc_bad, "counit": counit_bad, "integrality": integ_bad}
    return {
        "axioms": {name: "pass" if not bad else "fail" for name, bad in checks.items()},
        "failures": {name: [list(x) for x in bad] for name, bad in checks.items() if bad},
        "ok": not any(checks.values()),
    }


def extract_pair(cm: ComoduleMatrix) -> tuple[GradedSpace, Lattice]:
    """Recover (V, M) from the coaction and the embedding F (x) M = F^r.

    The coefficient matrix of T^i in (s_lj) is the degree-i projector in the
    lattice basis; conjugating by the basis must give a diagonal 0/1 matrix.
    """
    fld = cm.field
    r = cm.rank
    basis = [list(row) for row in cm.basis]
    binv = inverse(basis, fld)
    degs = sorted({i for row in cm.entries for s in row for i in s.degrees()})
    degrees = [None] * r
    for i in degs:
        proj = [[cm.entries[l][j].coeff(i) for j in range(r)] for l in range(r)]
        proj = [[fld(x) for x in row] for row in proj]
        p = matmul(matmul(basis, proj), binv)
        for a in range(r):
            for b in range(r):
                x = p[a][b]
                if a != b and x:
                    raise ValueError("coaction is not diagonal in the ambient coordinates")
                if a == b and x not in (0, 1):
                    raise ValueError("coaction projector is not idempotent")
                if a == b and x == 1:
                    if degrees[a] is not None:
                        raise ValueError("coordinate carries two degrees")
                    degrees[a] = i
    if any(d is None for d in degrees):
        raise ValueError("projectors do not sum to the identity")
    return GradedSpace(tuple(degrees)), hnf(basis, fld)


# --- points -----------------------------------------------------------------


def point_action(cm: ComoduleMatrix, pt: GPoint):
    """rho(t, x): each entry evaluated through its generator expression."""
    fld = cm.field
    if pt.ring == "F":
        return [[s.evaluate(pt.t) for s in row] for row in cm.entries]
    t_inv = 1 / pt.t
    out = []
    for row in cm.entries:
        out_row = []
        for s in row:
            value = express_in_generators(s, fld).evaluate(t_inv, pt.x)
            if not fld.is_integral(value):
                raise AssertionError("coaction entry evaluated outside O")
            if isinstance(pt.ring, int):
                value = fld.reduce(value, pt.ring)
            out_row.append(value)
        out.append(out_row)
    return out


def matrices_equal(a, b, ring, field: ValuedField) -> bool:
    for ra, rb in zip(a, b):
        for x, y in zip(ra, rb):
            if isinstance(ring, int):
                if field.valuation(x - y) < ring:
                    return False
            elif x != y:
                return False
    return True


def reduce_matrix(a, ring, field: ValuedField):
    if not isinstance(ring, int):
        return a
    return [[field.reduce(x, ring) for x in row] for row in a]


# --- morphisms ------------------------------------------------------------------


@dataclass(frozen=True)
class PairMorphism:
    matrix: tuple
    source: tuple
    target: tuple


@dataclass(frozen=True)
class Rejection:
    reason: str
    detail: object = None

    def __bool__(self):
        return False


def lattice_coordinates_matrix(phi, src: Lattice, tgt: Lattice):
    """Phi = M'^-1 phi M."""
    return matmul(tgt.inverse, matmul(phi, [list(r) for r in src.matrix]))


def coaction_square_commutes(phi, src_cm: ComoduleMatrix, tgt_cm: ComoduleMatrix) -> bool:
    """Delta_M' o phi == (id (x) phi) o Delta_M, i.e. S' Phi == Phi S entrywise."""
    fld = src_cm.field
    big = matmul(inverse([list(r) for r in tgt_cm.basis], fld), matmul(phi, [list(r) for r in src_cm.basis]))
    r_t, r_s = tgt_cm.rank, src_cm.rank
    for a in range(r_t):
        for j in range(r_s):
            left = LaurentPoly()
            for l in range(r_t):
                if big[l][j]:
                    left = left + tgt_cm.entries[a][l] * big[l][j]
            right = LaurentPoly()
            for l in range(r_s):
                if big[a][l]:
                    right = right + src_cm.entries[l][j] * big[a][l]
            if left != right:
                return False
    return True


def morphism_check(phi, source: tuple, target: tuple, field: ValuedField):
    """Accept phi: (V, M) -> (V', M') if it is graded and phi M lies in M'."""
    (v_s, m_s), (v_t, m_t) = source, target
    phi = [[field(x) for x in row] for row in phi]
    if len(phi) != v_t.rank or any(len(row) != v_s.rank for row in phi):
        raise ValueError("morphism matrix has the wrong shape")
    for a, row in enumerate(phi):
        for b, x in enumerate(row):
            if x and v_t.degrees[a] != v_s.degrees[b]:
                return Rejection("not graded", {"row": a, "column": b})
    image = matmul(phi, [list(r) for r in m_s.matrix])
    for j, col in enumerate(transpose(image)):
        if not lattice_membership(col, m_t):
            return Rejection("phi M not inside M'", {"column": j})
    src_cm = naive_comodule(v_s, m_s, field)
    tgt_cm = naive_comodule(v_t, m_t, field)
    if not coaction_square_commutes(phi, src_cm, tgt_cm):
        raise AssertionError("graded map failed to commute with the coactions")
    return PairMorphism(tuple(tuple(r) for r in phi), source, target)


# --- torsion quotients ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TorsionComodule:
    """M'/phi M = sum_i O/pi^(a_i) with the induced coaction.

    ``entries[l][j]`` represents s_lj modulo pi^(a_l) S_k, reduced through its
    generator expression.  ``basis`` holds lifts of the generators in F^r.
    """

    moduli: tuple
    entries: tuple
    basis: tuple
    field: ValuedField = dc_field(repr=False)
    report: dict = dc_field(default_factory=dict)

    @property
    def length(self) -> int:
        return sum(self.moduli)

    def to_json(self) -> dict:
        return {
            "moduli": list(self.moduli),
            "length": self.length,
            "entries": [[format_laurent(s, self.field) for s in row] for row in self.entries],
            "axioms": self.report.get("axioms", {}),
        }


def reduce_in_s(s: LaurentPoly, a: int, field: ValuedField) -> LaurentPoly:
    """A canonical-ish representative of s modulo pi^a S_k."""
    expr = express_in_generators(s, field)
    coeffs = tuple(field.reduce(c, a) for c in expr.coeffs)
    return type(expr)(expr.shift, coeffs, field).expand()


def verify_torsion(moduli, entries, field: ValuedField) -> dict:
    r = len(moduli)
    well_bad, counit_bad, integ_bad = [], [], []
    for l in range(r):
        for j in range(r):
            s = entries[l][j]
            if not s_membership(s, field).member:
                integ_bad.append((l, j))
            delta = field.one if l == j else field.zero
            if field.valuation(counit(s, field) - delta) < moduli[l]:
                counit_bad.append((l, j))
            # pi^(a_j) kills generator j, so it must kill its coaction
            if moduli[j] < moduli[l]:
                scaled = s * field.pi_power(moduli[j] - moduli[l])
                if not s_membership(scaled, field).member:
                    well_bad.append((l, j))
    coassoc_bad = coassociativity_defects(entries, field, moduli)
    checks = {
        "coassoc": coassoc_bad,
        "counit": counit_bad,
        "integrality": integ_bad,
        "well_defined": well_bad,
    }
    return {
        "axioms": {n: "pass" if not b else "fail" for n, b in checks.items()},
        "failures": {n: [list(x) for x in b] for n, b in checks.items() if b},
        "ok": not any(checks.values()),
    }


def quotient_comodule(morphism: PairMorphism, field: ValuedField) -> TorsionComodule:
    """The G_k-module M'/phi M presented by an injective morphism of pairs."""
    (_, m_s), (v_t, m_t) = morphism.source, morphism.target
    phi = [list(r) for r in morphism.matrix]
    if len(phi) != len(phi[0]) or not determinant(phi, field):
        raise SingularMatrixError("quotient_comodule needs an injective (square, nonsingular) phi")
    k_mat = lattice_coordinates_matrix(phi, m_s, m_t)
    p, exps, _ = smith_form(k_mat, field)
    # new basis of M': columns of M' P^-1; phi M is spanned by pi^(a_i) times them
    new_basis = matmul([list(r) for r in m_t.matrix], inverse(p, field))
    keep = [i for i, a in enumerate(exps) if a > 0]
    full = coaction_entries(v_t, new_basis, field)
    moduli = tuple(exps[i] for i in keep)
    entries = tuple(
        tuple(reduce_in_s(full[l][j], exps[l], field) for j in keep) for l in keep
    )
    basis_cols = [transpose(new_basis)[i] for i in keep]
    report = verify_torsion(moduli, entries, field)
    return TorsionComodule(moduli, entries, tuple(tuple(c) for c in basis_cols), field, report)


def torsion_point_action(tc: TorsionComodule, pt: GPoint):
    """Action on sum O/pi^(a_i): row l of the matrix is read modulo pi^(a_l)."""
    fld = tc.field
    t_inv = 1 / pt.t
    out = []
    for l, row in enumerate(tc.entries):
        out.append([
            fld.reduce(express_in_generators(s, fld).evaluate(t_inv, pt.x), tc.moduli[l])
            for s in row
        ])
    return out


# --- S_infinity ---------------------------------------------------------------


def grading_comodule(m: Lattice, degrees, field: ValuedField) -> dict:
    """Check that an arbitrary grading gives an S_infinity-comodule structure on M."""
    space = GradedSpace(tuple(degrees))
    cm = naive_comodule(space, m, field, hopf="S_inf")
    report = verify_comodule(cm)
    sums_ok = all(
        l_functional(cm.entries[l][j], 0, field) == (1 if l == j else 0)
        for l in range(cm.rank)
        for j in range(cm.rank)
    )
    report["coefficient_sums"] = "pass" if sums_ok else "fail"
    report["ok"] = report["ok"] and sums_ok
    report["entries"] = cm.to_json()["entries"]
    return report


def comodule_from_json(data: dict, field: ValuedField) -> ComoduleMatrix:
    """Rebuild a ComoduleMatrix from its JSON form (entries taken verbatim)."""
    space = GradedSpace(tuple(data["degrees"]))
    cols = [[field.parse(x) if isinstance(x, str) else field(x) for x in col] for col in data["basis"]]
    basis = tuple(tuple(r) for r in transpose(cols))
    entries = tuple(tuple(parse_laurent(s, field) for s in row) for row in data["entries"])
    return ComoduleMatrix(entries, space, basis, field, data.get("hopf", "S_k"))
