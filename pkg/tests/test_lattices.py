import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import FIELDS, seeds
from gmforms.lattices import (
    GradedSpace,
    admissible,
    admissible_closure,
    brute_force_unstable,
    c_operator,
    conductor_depth,
    first_unstable,
    hnf,
    is_graded,
    lattice_contains,
    lattice_from_generators,
    lattice_from_json,
    lattice_index,
    lattice_intersect,
    lattice_membership,
    lattice_sum,
    pair_from_json,
    pair_to_json,
    scale_lattice,
    stability_bound,
    standard_lattice,
)
from gmforms.linalg import (
    SingularMatrixError,
    determinant,
    identity,
    inverse,
    is_integral_matrix,
    matmul,
    smith_form,
)
from gmforms.randgen import random_degrees, random_lattice, random_unimodular
from gmforms.scalars import UnsupportedError, char0, finite, padic

F3 = padic(3, 1)
LATTICE_FIELDS = st.sampled_from(["padic2", "padic3", "padic3k2", "char0", "fq2", "fq3"])


def test_hnf_examples():
    f = F3
    assert hnf(identity(2, f), f).matrix == tuple(map(tuple, identity(2, f)))
    a = hnf([[1, 0], [1, 9]], f)
    b = hnf([[1, 1], [1, 10]], f)  # second column replaced by the sum
    assert a == b
    d = hnf([[3, 0], [0, f.parse("1/3")]], f)
    assert d.matrix == ((3, 0), (0, f.parse("1/3")))
    assert d.exponents == (1, -1)
    with pytest.raises(SingularMatrixError):
        hnf([[1, 2], [2, 4]], f)


def test_membership_and_index():
    f = F3
    m = hnf([[1, 0], [1, 3]], f)
    for col in m.basis_columns():
        assert lattice_membership(col, m)
    assert not lattice_membership([0, 1], m)
    std = standard_lattice(3, f)
    assert lattice_index(std, scale_lattice(std, 1)) == 3
    with pytest.raises(ValueError):
        lattice_index(scale_lattice(std, 1), std)


def test_c_operator_examples():
    f = F3
    v = GradedSpace((1, 2))
    assert c_operator(v, 0, f) == identity(2, f)
    assert c_operator(v, 1, f) == [[3, 0], [0, 6]]
    assert c_operator(v, 2, f) == [[0, 0], [0, 9]]


def test_conductor_depth_examples():
    f = F3
    assert conductor_depth(standard_lattice(2, f)) == 0
    assert conductor_depth(hnf([[27, 0], [0, 1]], f)) == 3
    assert conductor_depth(hnf([[1, 0], [1, 3]], f)) == 1


def test_stability_bound_examples():
    v = GradedSpace((1, 2))
    c = char0(1)
    assert stability_bound(v, hnf([[1, 0], [1, c.pi_power(3)]], c), c) == 1
    assert stability_bound(v, standard_lattice(2, F3), F3) == 0
    assert stability_bound(v, hnf([[1, 0], [1, 3]], F3), F3) == 2
    with pytest.raises(UnsupportedError):
        stability_bound(v, standard_lattice(2, padic(3, 0)), padic(3, 0))
    with pytest.raises(UnsupportedError):
        admissible(v, standard_lattice(2, finite(3, 0)), finite(3, 0))


def test_admissible_examples():
    f = F3
    v = GradedSpace((1, 2))
    good = hnf([[1, 0], [1, 3]], f)
    verdict = admissible(v, good, f)
    assert verdict.admissible and verdict.bound == 2
    assert brute_force_unstable(v, good, f, 2 * verdict.bound + 4) is None
    bad = hnf([[1, 0], [1, 9]], f)
    verdict = admissible(v, bad, f)
    assert not verdict.admissible and verdict.n == 1 and verdict.column == 0
    assert list(verdict.image) == [3, 6]
    assert not lattice_membership(list(verdict.image), bad)
    assert brute_force_unstable(v, bad, f, 10) == 1


def test_graded_lattices_are_admissible():
    rng = random.Random(2)
    for name in ("padic2", "padic3", "char0", "fq3"):
        f = FIELDS[name]
        for _ in range(10):
            v = random_degrees(3, rng)
            diag = [[f.pi_power(rng.randint(-3, 3)) if i == j else 0 for j in range(3)] for i in range(3)]
            m = hnf(diag, f)
            assert is_graded(v, m)
            assert admissible(v, m, f).admissible


def test_char0_k0_uses_gradedness():
    f = char0(0)
    v = GradedSpace((0, 1))
    assert admissible(v, hnf([[1, 0], [0, 1]], f), f).admissible
    verdict = admissible(v, hnf([[1, 0], [1, f.pi]], f), f)
    assert not verdict.admissible and verdict.n == 1


def test_json_round_trip():
    f = F3
    data = {"degrees": [1, 2], "basis": [["1", "1"], ["0", "3"]]}
    v, m = pair_from_json(data, f)
    assert pair_to_json(v, m) == data
    assert lattice_from_json(data["basis"], f) == m


def test_smith_form_example():
    f = F3
    k = [[3, 1], [0, 9]]
    p, exps, q = smith_form(k, f)
    assert exps == [0, 3]
    d = matmul(matmul(p, k), q)
    assert d == [[1, 0], [0, 27]]


@given(seeds, LATTICE_FIELDS)
def test_smith_form_properties(seed, name):
    f = FIELDS[name]
    rng = random.Random(seed)
    k = [list(r) for r in random_lattice(3, f, rng, 2).matrix]
    p, exps, q = smith_form(k, f)
    d = matmul(matmul(p, k), q)
    assert d == [[f.pi_power(exps[i]) if i == j else 0 for j in range(3)] for i in range(3)]
    assert exps == sorted(exps)
    for u in (p, q):
        assert is_integral_matrix(u, f) and f.is_unit(determinant(u, f))


@given(seeds, LATTICE_FIELDS)
def test_hnf_canonical_under_unimodular_change(seed, name):
    f = FIELDS[name]
    rng = random.Random(seed)
    m = random_lattice(3, f, rng, 3)
    u = random_unimodular(3, f, rng)
    assert hnf(matmul([list(r) for r in m.matrix], u), f) == m
    # extra redundant generators do not change the span
    extra = [[a + b for a, b in zip(*m.basis_columns()[:2])]]
    assert lattice_from_generators(m.basis_columns() + extra, f) == m


@given(seeds, LATTICE_FIELDS)
def test_sum_and_intersection(seed, name):
    f = FIELDS[name]
    rng = random.Random(seed)
    a, b = random_lattice(2, f, rng, 2), random_lattice(2, f, rng, 2)
    s, i = lattice_sum(a, b), lattice_intersect(a, b)
    assert lattice_contains(s, a) and lattice_contains(s, b)
    assert lattice_contains(a, i) and lattice_contains(b, i)
    assert lattice_index(s, a) == lattice_index(b, i)
    # intersection by brute force: vectors of a (mod pi^4 a) lying in b span i
    inv_i = inverse([list(r) for r in i.matrix], f)
    assert is_integral_matrix(matmul(inv_i, [list(r) for r in i.matrix]), f)
    for col in a.basis_columns():
        assert lattice_membership(col, i) == lattice_membership(col, b)


@given(seeds, LATTICE_FIELDS)
def test_containment_consistency(seed, name):
    f = FIELDS[name]
    rng = random.Random(seed)
    a, b = random_lattice(2, f, rng, 2), random_lattice(2, f, rng, 2)
    assert lattice_contains(a, b) == all(lattice_membership(c, a) for c in b.basis_columns())


@given(seeds, st.sampled_from(["padic2", "padic3", "padic3k2", "padic5", "fq2", "fq3"]))
def test_bound_matches_brute_force(seed, name):
    f = FIELDS[name]
    rng = random.Random(seed)
    v = random_degrees(3, rng)
    m = random_lattice(3, f, rng, 2)
    verdict = admissible(v, m, f)
    brute = brute_force_unstable(v, m, f, 2 * verdict.bound + 4)
    if verdict.admissible:
        assert brute is None
    else:
        assert brute == verdict.n <= verdict.bound
        assert not lattice_membership(list(verdict.image), m)


@given(seeds)
def test_char0_first_operator_decides(seed):
    f = char0(1)
    rng = random.Random(seed)
    v = random_degrees(3, rng)
    m = random_lattice(3, f, rng, 2)
    c1 = first_unstable(v, m, f, 1) is None
    assert c1 == (brute_force_unstable(v, m, f, 20) is None)
    assert c1 == admissible(v, m, f).admissible


@given(seeds, LATTICE_FIELDS, st.integers(-3, 3))
def test_homothety_invariance(seed, name, a):
    f = FIELDS[name]
    rng = random.Random(seed)
    v = random_degrees(2, rng)
    m = random_lattice(2, f, rng, 2)
    assert admissible(v, m, f).admissible == admissible(v, scale_lattice(m, a), f).admissible


@given(seeds, LATTICE_FIELDS)
def test_closure_is_smallest_admissible(seed, name):
    f = FIELDS[name]
    rng = random.Random(seed)
    v = random_degrees(3, rng)
    m = random_lattice(3, f, rng, 2)
    c = admissible_closure(v, m, f)
    assert lattice_contains(c, m)
    assert admissible(v, c, f).admissible
    assert conductor_depth(c) <= 2
    if admissible(v, m, f).admissible:
        assert c == m
