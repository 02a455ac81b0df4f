"""The group scheme G_k: points, Hopf structure and the X-presentation.

For an O-algebra R, G_k(R) = {(t, x) in R^x * R : t - 1 = f x}, with
(t, x)(t', x') = (tt', x + x' + f x x').  Its coordinate ring is
S_k = O[X]_(1 + fX); inside F[T, T^-1] the variable X is (T - 1)/f.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .laurent import (
    LaurentPoly,
    MultiLaurent,
    express_in_generators,
    s_membership,
    s_tensor_membership,
)
from .scalars import Scalar, ValuedField


# --- points -----------------------------------------------------------------


def _ring_label(ring) -> str:
    return ring if isinstance(ring, str) else f"O/pi^{ring}"


def parse_ring(label: str):
    if label in ("O", "F"):
        return label
    if label.startswith("O/pi^"):
        m = int(label[5:])
        if m < 1:
            raise ValueError("O/pi^m needs m >= 1")
        return m
    raise ValueError(f"unknown ring tag {label!r}")


@dataclass(frozen=True)
class GPoint:
    """A point (t, x) of G_k over O, F, or O/pi^m (``ring`` is "O", "F" or m).

    Over O/pi^m the coordinates are canonical representatives modulo pi^m.
    """

    t: Scalar
    x: Scalar
    ring: object = "O"

    def to_json(self, field: ValuedField) -> dict:
        return {"t": field.format(self.t), "x": field.format(self.x), "ring": _ring_label(self.ring)}


def _equal_in(a, b, ring, field: ValuedField) -> bool:
    if isinstance(ring, int):
        return field.valuation(a - b) >= ring
    return a == b


def make_point(t, x, ring, field: ValuedField) -> GPoint:
    """Validate and normalize a point; raises ValueError if (t, x) is not in G(R)."""
    t, x = field(t), field(x)
    if ring == "F":
        if not t:
            raise ValueError("t must be invertible")
    else:
        if not field.is_unit(t):
            raise ValueError(f"t = {field.format(t)} is not a unit of O")
        if not field.is_integral(x):
            raise ValueError(f"x = {field.format(x)} is not in O")
        if isinstance(ring, int):
            t, x = field.reduce(t, ring), field.reduce(x, ring)
    if not _equal_in(t - 1, field.f * x, ring, field):
        raise ValueError("point violates t - 1 = f x")
    return GPoint(t, x, ring)


def group_identity(field: ValuedField, ring="O") -> GPoint:
    return GPoint(field.one, field.zero, ring)


def group_law(a: GPoint, b: GPoint, field: ValuedField) -> GPoint:
    if a.ring != b.ring:
        raise ValueError("points over different rings")
    t = a.t * b.t
    x = a.x + b.x + field.f * a.x * b.x
    if isinstance(a.ring, int):
        t, x = field.reduce(t, a.ring), field.reduce(x, a.ring)
    return GPoint(t, x, a.ring)


def group_inverse(a: GPoint, field: ValuedField) -> GPoint:
    if not a.t or (a.ring != "F" and not field.is_unit(a.t)):
        raise ValueError("t is not invertible")
    t_inv = 1 / a.t
    t, x = t_inv, -t_inv * a.x
    if isinstance(a.ring, int):
        t, x = field.reduce(t, a.ring), field.reduce(x, a.ring)
    return GPoint(t, x, a.ring)


def points_equal(a: GPoint, b: GPoint, field: ValuedField) -> bool:
    return (
        a.ring == b.ring
        and _equal_in(a.t, b.t, a.ring, field)
        and _equal_in(a.x, b.x, a.ring, field)
    )


def g_points_membership(t: Scalar, field: ValuedField) -> GPoint | None:
    """G_k(O) = {t in O^x : t = 1 mod pi^k}; returns the point or None."""
    t = field(t)
    if not field.is_unit(t) or field.valuation(t - 1) < field.k:
        return None
    return GPoint(t, (t - 1) / field.f, "O")


# --- Hopf structure on the T-presentation -----------------------------------


def comult(g: LaurentPoly) -> MultiLaurent:
    """Delta(T^i) = T^i (x) T^i."""
    return MultiLaurent(2, {(i, i): c for i, c in g.items()})


def counit(g: LaurentPoly, field: ValuedField) -> Scalar:
    return sum((c for _, c in g.items()), field.zero)


def antipode(g: LaurentPoly) -> LaurentPoly:
    return g.invert_variable()


# --- X-presentation ----------------------------------------------------------


def _pmul(a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
    return _ptrim(out)


def _ptrim(a):
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return tuple(a)


def _padd(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return _ptrim(out)


@dataclass(frozen=True)
class XPresElement:
    """numerator(X) / (1 + fX)^m with numerator in O[X] (coefficients low -> high).

    Canonical: the numerator is not divisible by 1 + fX unless m = 0.
    """

    numerator: tuple
    m: int
    field: ValuedField = dc_field(repr=False, compare=False)

    @classmethod
    def make(cls, numerator, m: int, field: ValuedField) -> "XPresElement":
        num = _ptrim(numerator)
        if not all(field.is_integral(c) for c in num):
            raise ValueError("X-presentation numerators must have coefficients in O")
        u = (field.one, field.f)
        while m > 0 and num:
            q = _divide_exact(num, u)
            if q is None:
                break
            num, m = q, m - 1
        if not num:
            m = 0
        return cls(num, m, field)

    @classmethod
    def X(cls, field: ValuedField) -> "XPresElement":
        return cls((field.zero, field.one), 0, field)

    @classmethod
    def const(cls, c, field: ValuedField) -> "XPresElement":
        return cls.make((field(c),), 0, field)

    def _u_power(self, n: int) -> tuple:
        out = (self.field.one,)
        u = (self.field.one, self.field.f)
        for _ in range(n):
            out = _pmul(out, u)
        return out

    def _lift(self, m: int) -> tuple:
        return _pmul(self.numerator, self._u_power(m - self.m))

    def __add__(self, other: "XPresElement") -> "XPresElement":
        m = max(self.m, other.m)
        return XPresElement.make(_padd(self._lift(m), other._lift(m)), m, self.field)

    def __neg__(self):
        return XPresElement(tuple(-c for c in self.numerator), self.m, self.field)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "XPresElement") -> "XPresElement":
        return XPresElement.make(
            _pmul(self.numerator, other.numerator), self.m + other.m, self.field
        )

    def counit(self) -> Scalar:
        return self.numerator[0] if self.numerator else self.field.zero

    def to_T(self) -> LaurentPoly:
        fld = self.field
        x = LaurentPoly({1: fld.one, 0: -fld.one}) / fld.f
        total = LaurentPoly()
        power = LaurentPoly({0: fld.one})
        for c in self.numerator:
            if c:
                total = total + power * c
            power = power * x
        return total.shift(-self.m)


def _divide_exact(a: tuple, u: tuple):
    """a / (1 + fX) if it divides exactly (quotient is then in O[X])."""
    one, f = u
    if len(a) < 2:
        return None
    q = [a[0]]
    for i in range(1, len(a) - 1):
        q.append(a[i] - f * q[i - 1])
    if a[-1] != f * q[-1]:
        return None
    return tuple(q)


def from_T(g: LaurentPoly, field: ValuedField) -> XPresElement:
    """Convert a member of S_k; raises NotAMemberError otherwise."""
    expr = express_in_generators(g, field)
    return XPresElement.make(expr.coeffs, expr.shift, field)


def to_T(a: XPresElement) -> LaurentPoly:
    return a.to_T()


@dataclass(frozen=True)
class XPres2:
    """Two-variable analogue: numerator(X1, X2) / ((1 + fX1)(1 + fX2))^m."""

    numerator: dict
    m: int
    field: ValuedField = dc_field(repr=False, compare=False)

    def to_T(self) -> MultiLaurent:
        fld = self.field
        x1 = MultiLaurent(2, {(1, 0): fld.one, (0, 0): -fld.one}) * (1 / fld.f)
        x2 = MultiLaurent(2, {(0, 1): fld.one, (0, 0): -fld.one}) * (1 / fld.f)
        one = MultiLaurent(2, {(0, 0): fld.one})
        p1, p2 = [one], [one]
        total = MultiLaurent(2)
        for (i, j), c in self.numerator.items():
            while len(p1) <= i:
                p1.append(p1[-1] * x1)
            while len(p2) <= j:
                p2.append(p2[-1] * x2)
            total = total + p1[i] * p2[j] * c
        return total.map_monomials(2, lambda e: (e[0] - self.m, e[1] - self.m))


def comult_X(a: XPresElement) -> XPres2:
    """Delta(X) = X(x)1 + 1(x)X + f X(x)X and Delta(1 + fX) = (1 + fX)(x)(1 + fX)."""
    fld = a.field
    f = fld.f
    dx = {(1, 0): fld.one, (0, 1): fld.one, (1, 1): f}
    out: dict = {}
    power: dict = {(0, 0): fld.one}
    for c in a.numerator:
        if c:
            for e, v in power.items():
                out[e] = out.get(e, 0) + c * v
        power = _mul2(power, dx)
    return XPres2({e: v for e, v in out.items() if v}, a.m, fld)


def _mul2(a: dict, b: dict) -> dict:
    out: dict = {}
    for (i, j), x in a.items():
        for (k, l), y in b.items():
            key = (i + k, j + l)
            out[key] = out.get(key, 0) + x * y
    return {e: v for e, v in out.items() if v}


def antipode_X(a: XPresElement) -> XPresElement:
    """S(X) = -X/(1 + fX) and S(1 + fX) = (1 + fX)^-1."""
    fld = a.field
    d = max(len(a.numerator) - 1, 0)
    u = (fld.one, fld.f)
    neg_x = (fld.zero, -fld.one)
    num: tuple = ()
    for i, c in enumerate(a.numerator):
        if c:
            term = (c,)
            for _ in range(i):
                term = _pmul(term, neg_x)
            for _ in range(d - i):
                term = _pmul(term, u)
            num = _padd(num, term)
    if a.m >= d:
        for _ in range(a.m - d):
            num = _pmul(num, u)
        return XPresElement.make(num, 0, fld)
    return XPresElement.make(num, d - a.m, fld)


# --- axiom verification ---------------------------------------------------------


def _delta_left(x: MultiLaurent) -> MultiLaurent:
    """(Delta (x) id) on a two-variable element."""
    return x.map_monomials(3, lambda e: (e[0], e[0], e[1]))


def _delta_right(x: MultiLaurent) -> MultiLaurent:
    return x.map_monomials(3, lambda e: (e[0], e[1], e[1]))


def hopf_checks(g: LaurentPoly, field: ValuedField) -> dict[str, bool]:
    """Every Hopf identity for one element, each as an exact equality."""
    d = comult(g)
    eps = counit(g, field)
    unit_eps = LaurentPoly({0: eps})
    left_counit = LaurentPoly({j: c for (i, j), c in d.items()})  # (eps (x) id) Delta
    right_counit = LaurentPoly({i: c for (i, j), c in d.items()})
    s_left = d.map_monomials(1, lambda e: (-e[0] + e[1],))
    s_right = d.map_monomials(1, lambda e: (e[0] - e[1],))
    return {
        "coassoc": _delta_left(d) == _delta_right(d),
        "counit": left_counit == g and right_counit == g,
        "antipode": all(
            LaurentPoly({e[0]: c for e, c in s.items()}) == unit_eps for s in (s_left, s_right)
        ),
        "closure": s_tensor_membership(d, field).member,
        "antipode_closure": s_membership(antipode(g), field).member,
        "counit_antipode": counit(antipode(g), field) == eps,
    }


def verify_hopf_axioms(field: ValuedField, samples: list[LaurentPoly]) -> dict:
    """Check the Hopf algebra axioms on sampled members of S_k.

    Pairs of consecutive samples are used for multiplicativity of Delta and of
    the counit.  Each sample is also pushed through the X-presentation and the
    Hopf maps are compared across presentations.
    """
    names = [
        "coassoc", "counit", "antipode", "closure", "antipode_closure",
        "counit_antipode", "multiplicative", "presentation",
    ]
    failures: dict[str, list] = {n: [] for n in names}
    for idx, g in enumerate(samples):
        if not s_membership(g, field).member:
            raise ValueError(f"sample {idx} is not a member of S_k")
        for name, ok in hopf_checks(g, field).items():
            if not ok:
                failures[name].append(idx)
        h = samples[(idx + 1) % len(samples)]
        if comult(g * h) != comult(g) * comult(h) or counit(g * h, field) != counit(
            g, field
        ) * counit(h, field):
            failures["multiplicative"].append(idx)
        a = from_T(g, field)
        if (
            a.to_T() != g
            or comult_X(a).to_T() != comult(g)
            or antipode_X(a).to_T() != antipode(g)
            or a.counit() != counit(g, field)
        ):
            failures["presentation"].append(idx)
    return {
        "samples": len(samples),
        "checks": {n: ("pass" if not failures[n] else "fail") for n in names},
        "failures": {n: v for n, v in failures.items() if v},
        "ok": not any(failures.values()),
    }


def generators(field: ValuedField) -> list[LaurentPoly]:
    one = field.one
    return [
        LaurentPoly({1: one}),
        LaurentPoly({-1: one}),
        LaurentPoly({1: one, 0: -one}) / field.f,
    ]
