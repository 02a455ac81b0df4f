import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import FIELDS, seeds
from gmforms.comodules import (
    ComoduleMatrix,
    NotAdmissibleError,
    build_comodule,
    coaction_square_commutes,
    comodule_from_json,
    extract_pair,
    first_integrality_failure,
    grading_comodule,
    morphism_check,
    naive_comodule,
    point_action,
    quotient_comodule,
    torsion_point_action,
    verify_comodule,
)
from gmforms.groupscheme import group_identity, group_law, make_point
from gmforms.lattices import (
    GradedSpace,
    admissible,
    hnf,
    scale_lattice,
    standard_lattice,
)
from gmforms.laurent import LaurentPoly
from gmforms.linalg import determinant, identity, matmul
from gmforms.randgen import (
    random_admissible_pair,
    random_injective_morphism,
    random_nonadmissible_pair,
    random_point,
)
from gmforms.scalars import padic

F3 = padic(3, 1)
CM_FIELDS = st.sampled_from(["padic2", "padic3", "padic3k2", "char0", "fq2", "fq3"])
EXAMPLE = hnf([[1, 0], [1, 3]], F3)
BAD = hnf([[1, 0], [1, 9]], F3)
V12 = GradedSpace((1, 2))


def T(field, i=1):
    return LaurentPoly.T(field, i)


def test_standard_lattice_is_diagonal():
    v = GradedSpace((-1, 0, 4))
    cm = build_comodule(v, standard_lattice(3, F3), F3)
    for l in range(3):
        for j in range(3):
            assert cm.entries[l][j] == (T(F3, v.degrees[j]) if l == j else LaurentPoly())
    assert verify_comodule(cm)["ok"]


def test_worked_example_by_hand():
    # m1 = x1 + x2, m2 = 3 x2: Delta(m1) = T m1 + (T^2 - T)/3 m2, Delta(m2) = T^2 m2
    cm = build_comodule(V12, EXAMPLE, F3)
    expected = ((T(F3), LaurentPoly()), ((T(F3, 2) - T(F3)) / 3, T(F3, 2)))
    assert cm.entries == expected
    assert verify_comodule(cm)["ok"]
    assert extract_pair(cm) == (V12, EXAMPLE)


def test_homothety_gives_same_matrix():
    for a in (-2, 1, 3):
        assert build_comodule(V12, scale_lattice(EXAMPLE, a), F3) == build_comodule(V12, EXAMPLE, F3)


def test_non_admissible_rejected_with_witness():
    with pytest.raises(NotAdmissibleError) as exc:
        build_comodule(V12, BAD, F3)
    assert exc.value.verdict.n == 1
    assert first_integrality_failure(naive_comodule(V12, BAD, F3)) == 1
    assert not verify_comodule(naive_comodule(V12, BAD, F3))["ok"]


def test_corruption_is_detected():
    cm = build_comodule(V12, EXAMPLE, F3)
    rows = [list(r) for r in cm.entries]
    rows[0][0] = rows[0][0] + LaurentPoly({0: F3.pi_power(-1)})
    bad = ComoduleMatrix(tuple(map(tuple, rows)), cm.space, cm.basis, F3)
    report = verify_comodule(bad)
    assert not report["ok"]
    assert report["axioms"]["counit"] == "fail"
    assert report["axioms"]["integrality"] == "fail"


def test_json_round_trip():
    cm = build_comodule(V12, EXAMPLE, F3)
    assert comodule_from_json(cm.to_json(), F3) == cm


def test_point_action_examples():
    cm = build_comodule(V12, EXAMPLE, F3)
    assert point_action(cm, group_identity(F3)) == identity(2, F3)
    pt = make_point(4, 1, "O", F3)
    assert point_action(cm, pt) == [[4, 0], [4, 16]]  # [[t, 0], [t x, t^2]]
    diag = build_comodule(GradedSpace((2, -1)), standard_lattice(2, F3), F3)
    assert point_action(diag, pt) == [[16, 0], [0, F3.parse("1/4")]]


def test_morphism_examples():
    src = (V12, EXAMPLE)
    assert morphism_check(identity(2, F3), src, src, F3)
    assert morphism_check([[3, 0], [0, 3]], src, src, F3)
    rej = morphism_check([[0, 1], [1, 0]], src, src, F3)
    assert not rej and rej.reason == "not graded"
    rej = morphism_check([[F3.parse("1/3"), 0], [0, F3.parse("1/3")]], src, src, F3)
    assert not rej and rej.reason == "phi M not inside M'"


def test_quotient_examples():
    v = GradedSpace((0, 2, 5))
    std = (v, standard_lattice(3, F3))
    tc = quotient_comodule(morphism_check([[3, 0, 0], [0, 3, 0], [0, 0, 3]], std, std, F3), F3)
    assert tc.moduli == (1, 1, 1) and tc.report["ok"]
    pt = make_point(4, 1, "O", F3)
    assert torsion_point_action(tc, pt) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]  # 4 = 1 mod 3
    pt = make_point(F3.parse("-2"), -1, "O", F3)
    assert torsion_point_action(tc, pt) == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]  # 4 and -32 are 1 mod 3
    tc0 = quotient_comodule(morphism_check(identity(3, F3), std, std, F3), F3)
    assert tc0.length == 0
    src = (V12, EXAMPLE)
    tc = quotient_comodule(morphism_check([[3, 0], [0, 3]], src, src, F3), F3)
    assert tc.length == 2 and tc.report["ok"]


def test_grading_contrast():
    assert not admissible(V12, BAD, F3).admissible
    report = grading_comodule(BAD, (1, 2), F3)
    assert report["ok"] and report["coefficient_sums"] == "pass"
    diag = grading_comodule(standard_lattice(2, F3), (3, -1), F3)
    assert diag["entries"] == [["T^3", "0"], ["0", "T^-1"]]


@given(seeds, CM_FIELDS)
def test_admissible_pairs_give_comodules(seed, name):
    f = FIELDS[name]
    rng = random.Random(seed)
    space, m = random_admissible_pair(f, rng, 3, 2)
    cm = build_comodule(space, m, f)
    assert verify_comodule(cm)["ok"]
    assert extract_pair(cm) == (space, m)


@given(seeds, CM_FIELDS)
def test_nonadmissible_witness_matches(seed, name):
    f = FIELDS[name]
    rng = random.Random(seed)
    space, m = random_nonadmissible_pair(f, rng, 3, 2)
    verdict = admissible(space, m, f)
    assert first_integrality_failure(naive_comodule(space, m, f)) == verdict.n
    # but every grading is fine over S_inf
    assert grading_comodule(m, space.degrees, f)["ok"]


@given(seeds, st.sampled_from(["padic2", "padic3", "char0", "fq3"]), st.sampled_from([4, "O"]))
def test_point_action_is_a_homomorphism(seed, name, ring):
    f = FIELDS[name]
    rng = random.Random(seed)
    space, m = random_admissible_pair(f, rng, 3, 2)
    cm = build_comodule(space, m, f)
    a, b = random_point(f, rng, ring), random_point(f, rng, ring)
    lhs = point_action(cm, group_law(a, b, f))
    rhs = matmul(point_action(cm, a), point_action(cm, b))
    for x, y in zip(lhs, rhs):
        for u, w in zip(x, y):
            assert f.valuation(u - w) >= ring if isinstance(ring, int) else u == w
    assert f.is_unit(determinant(point_action(cm, a), f))


@given(seeds, CM_FIELDS)
def test_quotient_length_matches_elementary_divisors(seed, name):
    f = FIELDS[name]
    rng = random.Random(seed)
    phi, src, tgt = random_injective_morphism(f, rng)
    mor = morphism_check(phi, src, tgt, f)
    assert mor
    tc = quotient_comodule(mor, f)
    assert tc.length == f.valuation(determinant(phi, f)) + sum(src[1].exponents) - sum(tgt[1].exponents)
    assert tc.report["ok"]


@given(seeds, CM_FIELDS)
def test_scalar_morphisms_commute(seed, name):
    f = FIELDS[name]
    rng = random.Random(seed)
    space, m = random_admissible_pair(f, rng, 3, 2)
    cm = build_comodule(space, m, f)
    pi = [[f.pi if i == j else 0 for j in range(space.rank)] for i in range(space.rank)]
    assert morphism_check(pi, (space, m), (space, m), f)
    assert coaction_square_commutes(pi, cm, cm)
