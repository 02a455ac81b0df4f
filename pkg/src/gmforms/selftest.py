"""Seeded randomized property suites.

Each check takes a ``random.Random`` and a trial count and returns the number
of trials run plus a list of failure descriptions.  ``run_selftest`` bundles
them into a deterministic JSON-ready report.
"""

from __future__ import annotations

import random

from .comodules import (
    NotAdmissibleError,
    build_comodule,
    coaction_square_commutes,
    extract_pair,
    first_integrality_failure,
    grading_comodule,
    matrices_equal,
    morphism_check,
    naive_comodule,
    point_action,
    quotient_comodule,
    reduce_matrix,
    verify_comodule,
)
from .groupscheme import generators, group_identity, group_law, verify_hopf_axioms
from .laurent import (
    LaurentPoly,
    divided_power,
    express_in_generators,
    l_functional,
    s_infinity_membership,
    s_membership,
    taylor_coefficients,
)
from .lattices import (
    GradedSpace,
    admissible,
    brute_force_unstable,
    first_unstable,
    hnf,
    lattice_membership,
    scale_lattice,
    stability_bound,
    valuation_of_det,
)
from .linalg import determinant, matmul
from .randgen import (
    random_admissible_pair,
    random_degrees,
    random_graded_map,
    random_injective_morphism,
    random_lattice,
    random_laurent,
    random_member,
    random_nonadmissible_pair,
    random_point,
    random_polynomial,
    random_scalar,
)
from .scalars import char0, finite, padic
from .springer import (
    WindowSpec,
    enumerate_stable_lattices,
    lattice_submodule_key,
    oracle_submodules,
    polynomiality_check,
)


def _cycle(items, i):
    return items[i % len(items)]


def core_fields():
    return [padic(2, 1), padic(3, 1), padic(5, 2), char0(1), char0(2)]


# --- scalars ---------------------------------------------------------------------


def check_scalars(rng: random.Random, trials: int):
    fields = core_fields() + [finite(2, 1), finite(7, 1)]
    fails = []
    for t in range(trials):
        fld = _cycle(fields, t)
        x, y = random_scalar(fld, rng), random_scalar(fld, rng)
        if fld.valuation(x * y) != fld.valuation(x) + fld.valuation(y):
            fails.append(f"{fld.cfg.kind}: v(xy)")
        if x + y and fld.valuation(x + y) < min(fld.valuation(x), fld.valuation(y)):
            fails.append(f"{fld.cfg.kind}: ultrametric")
        if fld.parse(fld.format(x)) != x:
            fails.append(f"{fld.cfg.kind}: round trip {fld.format(x)}")
        if x * (1 / x) != fld.one:
            fails.append(f"{fld.cfg.kind}: inverse")
    return trials, fails


# --- laurent ---------------------------------------------------------------------


def check_leibniz(rng: random.Random, trials: int, fields=None):
    """D^[n](gh) = sum D^[r] g D^[n-r] h and the same for L_n."""
    fields = fields or [padic(2, 1), padic(3, 1), padic(5, 1), char0(1)]
    fails = []
    for t in range(trials):
        fld = _cycle(fields, t)
        g, h = random_laurent(fld, rng), random_laurent(fld, rng)
        n = rng.randint(0, 5)
        gh = g * h
        rhs = LaurentPoly()
        lsum = fld.zero
        for r in range(n + 1):
            rhs = rhs + divided_power(g, r) * divided_power(h, n - r)
            lsum = lsum + l_functional(g, r, fld) * l_functional(h, n - r, fld)
        if divided_power(gh, n) != rhs:
            fails.append(f"{fld.cfg.kind}: Leibniz n={n}")
        if l_functional(gh, n, fld) != lsum:
            fails.append(f"{fld.cfg.kind}: L multiplicativity n={n}")
    return trials, fails


def check_taylor(rng: random.Random, trials: int):
    """h = sum L_n(h) ((T-1)/f)^n and h = sum c_n (T-1)^n for non-negative support."""
    fields = core_fields()
    fails = []
    for t in range(trials):
        fld = _cycle(fields, t)
        h = random_polynomial(fld, rng)
        x = LaurentPoly({1: fld.one, 0: -fld.one}) / fld.f
        total, power = LaurentPoly(), LaurentPoly({0: fld.one})
        for n in range(h.max_degree + 1):
            total = total + power * l_functional(h, n, fld)
            power = power * x
        if total != h:
            fails.append(f"{fld.cfg.kind}: L-Taylor")
        cs = taylor_coefficients(h)
        y = LaurentPoly({1: fld.one, 0: -fld.one})
        total, power = LaurentPoly(), LaurentPoly({0: fld.one})
        for c in cs:
            total = total + power * c
            power = power * y
        if total != h:
            fails.append(f"{fld.cfg.kind}: Taylor coefficients")
    return trials, fails


def _member_sample(fld, rng):
    g = random_member(fld, rng)
    if rng.random() < 0.5:
        g = g * random_member(fld, rng)
    if rng.random() < 0.3:
        g = g + random_member(fld, rng)
    return g


def check_express(rng: random.Random, trials: int):
    fields = core_fields()
    fails = []
    for t in range(trials):
        fld = _cycle(fields, t)
        g = _member_sample(fld, rng)
        expr = express_in_generators(g, fld)
        if expr.expand() != g or not all(fld.is_integral(a) for a in expr.coeffs):
            fails.append(f"{fld.cfg.kind}: round trip")
        if expr.shift != max(0, -g.min_degree):
            fails.append(f"{fld.cfg.kind}: shift not minimal")
    return trials, fails


def _margin_consistent(g, fld, verdict) -> bool:
    """L_n for n up to 2m + 4 never contradicts the verdict."""
    m = verdict.bound
    if verdict.member:
        return all(fld.is_integral(l_functional(g, n, fld)) for n in range(2 * m + 5))
    return all(fld.is_integral(l_functional(g, n, fld)) for n in range(verdict.n)) and not fld.is_integral(verdict.value)


def check_membership(rng: random.Random, trials: int, fields=None):
    """Generators are members; sums and products stay members; perturbations are rejected."""
    fields = fields or [padic(2, 1), padic(3, 1), padic(2, 2), char0(1), char0(3)]
    fails = []
    for fld in fields:
        for gen in generators(fld):
            if not s_membership(gen, fld).member:
                fails.append(f"{fld.cfg.kind}: generator rejected")
    for t in range(trials):
        fld = _cycle(fields, t)
        g, h = _member_sample(fld, rng), _member_sample(fld, rng)
        for combo in (g + h, g * h, g - h):
            v = s_membership(combo, fld)
            if not v.member or not _margin_consistent(combo, fld, v):
                fails.append(f"{fld.cfg.kind}: closure")
        # g + lam T^i ((T - 1)/f)^j with v(lam) < 0: least failing index is j
        c = rng.randint(1, 4)
        lam = random_scalar(fld, rng, -c, -c)
        i, j = rng.randint(-3, 3), rng.randint(0, 3)
        x = LaurentPoly({1: fld.one, 0: -fld.one}) / fld.f
        bad = g + (x**j) * LaurentPoly({i: lam})
        v = s_membership(bad, fld)
        if v.member or v.n != j or not _margin_consistent(bad, fld, v):
            fails.append(f"{fld.cfg.kind}: perturbation j={j} gave {v.n}")
        plain = g + LaurentPoly({i: lam})
        v = s_membership(plain, fld)
        if v.member or v.n != 0:
            fails.append(f"{fld.cfg.kind}: monomial perturbation")
    return trials, fails


# --- Hopf structure ----------------------------------------------------------------


def check_hopf(rng: random.Random, trials: int, ks=(0, 1, 2, 3), ps=(2, 3)):
    fails = []
    count = 0
    for k in ks:
        for p in ps:
            fld = padic(p, k)
            samples = generators(fld) + [random_member(fld, rng, 2, 3) for _ in range(trials)]
            report = verify_hopf_axioms(fld, samples)
            count += len(samples)
            if not report["ok"]:
                fails.append(f"p={p} k={k}: {sorted(report['failures'])}")
    return count, fails


def check_tower(rng: random.Random, trials: int, kmax: int = 3):
    fails = []
    count = 0
    for k in range(kmax + 1):
        for base in ((lambda kk: padic(2, kk)), (lambda kk: padic(3, kk)), (lambda kk: char0(kk))):
            fld, nxt = base(k), base(k + 1)
            for _ in range(trials):
                g = random_member(fld, rng)
                count += 1
                if not s_membership(g, nxt).member:
                    fails.append(f"{fld.cfg.kind} k={k}: not in S_(k+1)")
                if not s_infinity_membership(g, fld):
                    fails.append(f"{fld.cfg.kind} k={k}: not in S_inf")
    return count, fails


# --- comodules -----------------------------------------------------------------------


def comodule_fields():
    return [padic(2, 1), padic(3, 1), padic(3, 2), char0(1), finite(2, 1), finite(3, 1)]


def check_comodules(rng: random.Random, trials: int):
    """Admissible pairs give verified comodules; non-admissible ones fail with matching witnesses."""
    fields = comodule_fields()
    fails = []
    for t in range(trials):
        fld = _cycle(fields, t)
        space, m = random_admissible_pair(fld, rng)
        cm = build_comodule(space, m, fld)
        if not verify_comodule(cm)["ok"]:
            fails.append(f"{fld.cfg.kind}: axioms")
        if extract_pair(cm) != (space, m):
            fails.append(f"{fld.cfg.kind}: round trip")
        if build_comodule(space, scale_lattice(m, 1), fld) != cm:
            fails.append(f"{fld.cfg.kind}: homothety")
        if not grading_comodule(m, space.degrees, fld)["ok"]:
            fails.append(f"{fld.cfg.kind}: S_inf functoriality")
        space, m = random_nonadmissible_pair(fld, rng)
        verdict = admissible(space, m, fld)
        try:
            build_comodule(space, m, fld)
            fails.append(f"{fld.cfg.kind}: non-admissible pair accepted")
        except NotAdmissibleError as exc:
            if exc.verdict != verdict:
                fails.append(f"{fld.cfg.kind}: wrong verdict")
        if first_integrality_failure(naive_comodule(space, m, fld)) != verdict.n:
            fails.append(f"{fld.cfg.kind}: witness mismatch")
    return trials, fails


def check_points(rng: random.Random, comodules: int, pairs: int):
    """rho(ab) = rho(a) rho(b), rho(1, 0) = id, det rho a unit; over O/pi^6 and O."""
    fields = [padic(2, 1), padic(3, 1), padic(3, 2), char0(1), finite(3, 1)]
    fails = []
    count = 0
    for c in range(comodules):
        fld = _cycle(fields, c)
        space, m = random_admissible_pair(fld, rng, 3, 2)
        cm = build_comodule(space, m, fld)
        for ring in (6, "O"):
            ident = point_action(cm, group_identity(fld, ring))
            if not matrices_equal(ident, [[int(i == j) for j in range(cm.rank)] for i in range(cm.rank)], ring, fld):
                fails.append(f"{fld.cfg.kind}: identity")
            for _ in range(pairs):
                count += 1
                a, b = random_point(fld, rng, ring), random_point(fld, rng, ring)
                lhs = point_action(cm, group_law(a, b, fld))
                rhs = reduce_matrix(matmul(point_action(cm, a), point_action(cm, b)), ring, fld)
                if not matrices_equal(lhs, rhs, ring, fld):
                    fails.append(f"{fld.cfg.kind}: multiplicativity over {ring}")
                if not fld.is_unit(determinant(point_action(cm, a), fld)):
                    fails.append(f"{fld.cfg.kind}: determinant")
    return count, fails


def check_shortcut(rng: random.Random, trials: int):
    """char 0: C_1-stability decides admissibility; p-adic: the 2D/k bound is exact."""
    fails = []
    fld = char0(1)
    for _ in range(trials):
        r = rng.randint(1, 3)
        space = random_degrees(r, rng)
        m = random_lattice(r, fld, rng, 2)
        c1 = first_unstable(space, m, fld, 1) is None
        if c1 != (brute_force_unstable(space, m, fld, 20) is None):
            fails.append("char0: C_1 shortcut disagrees with n <= 20")
        if c1 != admissible(space, m, fld).admissible:
            fails.append("char0: verdict")
    for t in range(trials):
        fld = _cycle([padic(2, 1), padic(3, 1), padic(2, 2), padic(5, 1)], t)
        r = rng.randint(1, 3)
        space = random_degrees(r, rng)
        m = random_lattice(r, fld, rng, 2)
        verdict = admissible(space, m, fld)
        bound = stability_bound(space, m, fld)
        brute = brute_force_unstable(space, m, fld, 2 * bound + 4)
        if verdict.admissible != (brute is None) or (brute is not None and brute != verdict.n):
            fails.append(f"p={fld.p} k={fld.k}: bound verdict disagrees with brute force")
    return 2 * trials, fails


def check_quotients(rng: random.Random, trials: int):
    fields = comodule_fields()
    fails = []
    for t in range(trials):
        fld = _cycle(fields, t)
        phi, src, tgt = random_injective_morphism(fld, rng)
        mor = morphism_check(phi, src, tgt, fld)
        if not mor:
            fails.append(f"{fld.cfg.kind}: constructed morphism rejected")
            continue
        tc = quotient_comodule(mor, fld)
        oracle = valuation_of_det(phi, fld) + sum(src[1].exponents) - sum(tgt[1].exponents)
        if tc.length != oracle:
            fails.append(f"{fld.cfg.kind}: length {tc.length} != {oracle}")
        if not tc.report["ok"]:
            fails.append(f"{fld.cfg.kind}: torsion axioms {tc.report['failures']}")
    return trials, fails


def check_morphisms(rng: random.Random, trials: int):
    """Acceptance iff the map is graded with phi M in M'; graded maps commute with coactions."""
    fields = comodule_fields()
    fails = []
    for t in range(trials):
        fld = _cycle(fields, t)
        space, m = random_admissible_pair(fld, rng, 3, 2)
        m2 = random_lattice(space.rank, fld, rng, 2)
        phi = random_graded_map(space, fld, rng)
        src, tgt = naive_comodule(space, m, fld), naive_comodule(space, m2, fld)
        inside = all(
            lattice_membership(col, m2)
            for col in zip(*matmul(phi, [list(r) for r in m.matrix]))
        )
        accepted = bool(morphism_check(phi, (space, m), (space, m2), fld))
        if accepted != inside or not coaction_square_commutes(phi, src, tgt):
            fails.append(f"{fld.cfg.kind}: graded map")
        if len(set(space.degrees)) > 1:
            i = next(i for i in range(space.rank) if space.degrees[i] != space.degrees[0])
            bad = [list(row) for row in phi]
            bad[i][0] = random_scalar(fld, rng, 0, 2)
            if morphism_check(bad, (space, m), (space, m2), fld) or coaction_square_commutes(bad, src, tgt):
                fails.append(f"{fld.cfg.kind}: degree-mixing map accepted")
    return trials, fails


def check_gradings(rng: random.Random, trials: int):
    """Every grading of every lattice is an S_inf-comodule, admissible or not."""
    fields = comodule_fields()
    fails = []
    bad_seen = 0
    for t in range(trials):
        fld = _cycle(fields, t)
        if t % 2:
            space, m = random_nonadmissible_pair(fld, rng)
            bad_seen += 1
        else:
            r = rng.randint(1, 4)
            space, m = random_degrees(r, rng), random_lattice(r, fld, rng, 3)
        if not grading_comodule(m, space.degrees, fld)["ok"]:
            fails.append(f"{fld.cfg.kind}: grading {space.degrees}")
    fld = padic(3, 1)
    example = hnf([[1, 0], [1, 9]], fld)
    if admissible(GradedSpace((1, 2)), example, fld).admissible:
        fails.append("contrast example unexpectedly admissible")
    if not grading_comodule(example, (1, 2), fld)["ok"]:
        fails.append("contrast example fails for S_inf")
    return trials, fails


# --- springer --------------------------------------------------------------------------


ORACLE_CASES = [
    ((0,), 1, 2, 2), ((2,), 1, 3, 3),
    ((0, 1), 1, 1, 2), ((0, 1), 1, 1, 3), ((0, 1), 1, 1, 5), ((0, 1), 1, 1, 7),
    ((1, 2), 1, 1, 2), ((1, 2), 1, 1, 3), ((1, 2), 1, 1, 5), ((1, 2), 1, 1, 7),
    ((0, 1), 1, 2, 2), ((0, 2), 2, 1, 3), ((0, 1, 2), 1, 1, 2), ((0, 1), 3, 1, 2),
]


def check_springer_oracle(cases=ORACLE_CASES):
    fails = []
    for degrees, k, a, q in cases:
        spec = WindowSpec(degrees, k, a, q)
        found = enumerate_stable_lattices(spec)
        keys = [lattice_submodule_key(lat, spec) for lat in found.lattices]
        if len(set(keys)) != len(keys):
            fails.append(f"{spec.to_json()}: duplicates")
        if set(keys) != oracle_submodules(spec):
            fails.append(f"{spec.to_json()}: oracle disagreement")
        for lat in found.lattices:
            space = spec.space
            if brute_force_unstable(space, lat, spec.field, 2 * stability_bound(space, lat, spec.field) + 4):
                fails.append(f"{spec.to_json()}: unstable lattice listed")
                break
    return len(cases), fails


def check_springer_polynomial(templates=(((0, 1), 1, 1), ((1, 2), 1, 1)), qs=(2, 3, 5, 7)):
    fails = []
    for degrees, k, a in templates:
        report = polynomiality_check(WindowSpec(degrees, k, a, qs[0]), qs)
        if not report["ok"]:
            fails.append(f"{degrees}: no polynomial fit")
        if not all(s["nonnegative_integer"] for s in report["strata"]):
            fails.append(f"{degrees}: negative or fractional coefficient")
    for a in range(4):
        for q in qs:
            n = len(enumerate_stable_lattices(WindowSpec((a + 1,), 1, a, q)))
            if n != 2 * a + 1:
                fails.append(f"rank 1, a={a}, q={q}: {n}")
    return len(templates), fails


# --- runner -------------------------------------------------------------------------


SUITES = {
    "scalars": lambda rng: check_scalars(rng, 60),
    "leibniz": lambda rng: check_leibniz(rng, 60),
    "taylor": lambda rng: check_taylor(rng, 30),
    "express": lambda rng: check_express(rng, 30),
    "membership": lambda rng: check_membership(rng, 30),
    "hopf": lambda rng: check_hopf(rng, 4, ks=(0, 1, 2), ps=(2, 3)),
    "tower": lambda rng: check_tower(rng, 5),
    "comodules": lambda rng: check_comodules(rng, 8),
    "points": lambda rng: check_points(rng, 3, 5),
    "shortcut": lambda rng: check_shortcut(rng, 20),
    "quotients": lambda rng: check_quotients(rng, 6),
    "morphisms": lambda rng: check_morphisms(rng, 6),
    "gradings": lambda rng: check_gradings(rng, 10),
    "springer": lambda rng: check_springer_oracle(ORACLE_CASES[:6]),
}


def run_suite(name: str, seed: int) -> dict:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    rng = random.Random(f"{seed}:{name}")
    trials, fails = SUITES[name](rng)
    return {
        "suite": name,
        "trials": trials,
        "failed": len(fails),
        "failures": fails[:5],
        "passed": not fails,
    }


def run_selftest(seed: int = 42, suites=None) -> dict:
    names = list(SUITES) if not suites else list(suites)
    results = [run_suite(n, seed) for n in names]
    return {"seed": seed, "suites": results, "ok": all(r["passed"] for r in results)}
