"""Laurent polynomials over F, divided powers, the functionals L_n and
membership tests for S_k, S_k (x) S_k and S_infinity.

S_k is the O-subalgebra of F[T, T^-1] generated by T, T^-1 and (T - 1)/f
with f = pi^k.  It is also cut out by the integrality conditions
``L_n(g) in O`` for all n >= 0, and only finitely many of those need to be
checked: once f^n clears every denominator of g the rest hold automatically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Iterable, Mapping

from .expr import Evaluator
from .scalars import Scalar, ValuedField, binom


class NotAMemberError(ValueError):
    """Raised when an operation needs an element of S_k and did not get one."""

    def __init__(self, verdict: "MembershipVerdict"):
        super().__init__(
            f"not a member of S_k: L_{verdict.n} = {verdict.value} is not integral"
        )
        self.verdict = verdict


class LaurentPoly:
    """Finite sum of c_i T^i with c_i in F; zero coefficients are never stored."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, Scalar] | None = None):
        self._c = {i: c for i, c in (coeffs or {}).items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, coeffs: dict) -> "LaurentPoly":
        out = cls.__new__(cls)
        out._c = coeffs
        out._hash = None
        return out

    @classmethod
    def monomial(cls, c: Scalar, i: int = 0) -> "LaurentPoly":
        return cls({i: c})

    @classmethod
    def T(cls, field: ValuedField, i: int = 1) -> "LaurentPoly":
        return cls({i: field.one})

    @classmethod
    def constant(cls, c: Scalar) -> "LaurentPoly":
        return cls({0: c})

    def items(self):
        return sorted(self._c.items())

    def degrees(self) -> list[int]:
        return sorted(self._c)

    def coeff(self, i: int):
        return self._c.get(i, 0)

    @property
    def coeffs(self) -> dict:
        return dict(self._c)

    @property
    def min_degree(self) -> int:
        return min(self._c)

    @property
    def max_degree(self) -> int:
        return max(self._c)

    def __len__(self):
        return len(self._c)

    def __bool__(self):
        return bool(self._c)

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self._c == other._c
        if other == 0:
            return not self._c
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __repr__(self):
        return f"LaurentPoly({dict(self.items())!r})"

    def __neg__(self):
        return LaurentPoly._raw({i: -c for i, c in self._c.items()})

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(other)
        out = dict(self._c)
        for i, c in other._c.items():
            s = out.get(i)
            s = c if s is None else s + c
            if s:
                out[i] = s
            else:
                out.pop(i, None)
        return LaurentPoly._raw(out)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            if not other:
                return LaurentPoly._raw({})
            return LaurentPoly._raw({i: c * other for i, c in self._c.items()})
        out: dict = {}
        for i, a in self._c.items():
            for j, b in other._c.items():
                s = out.get(i + j)
                out[i + j] = a * b if s is None else s + a * b
        return LaurentPoly(out)

    def __rmul__(self, other):
        return self * other

    def is_monomial(self) -> bool:
        return len(self._c) == 1

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_monomial():
                raise ValueError("only monomials are invertible in F[T, T^-1]")
            (i, c), = self._c.items()
            return LaurentPoly({-i * (-n): (1 / c) ** (-n)})
        out = LaurentPoly({0: 1})
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __truediv__(self, other):
        if isinstance(other, LaurentPoly):
            return self * other ** -1
        return LaurentPoly._raw({i: c / other for i, c in self._c.items()})

    def shift(self, m: int) -> "LaurentPoly":
        """Multiply by T^m."""
        return LaurentPoly._raw({i + m: c for i, c in self._c.items()})

    def invert_variable(self) -> "LaurentPoly":
        """Substitute T -> T^-1."""
        return LaurentPoly._raw({-i: c for i, c in self._c.items()})

    def evaluate(self, t: Scalar):
        """Value at T = t; t must be a unit of F (nonzero)."""
        if not t:
            raise ValueError("cannot evaluate a Laurent polynomial at T = 0")
        total = 0
        for i, c in self._c.items():
            total = total + c * t**i
        return total

    def map_coefficients(self, fn) -> "LaurentPoly":
        return LaurentPoly({i: fn(c) for i, c in self._c.items()})


class MultiLaurent:
    """Laurent polynomial in ``nvars`` variables, keyed by exponent tuples.

    With two variables this is F[T1^+-1, T2^+-1] = F[T,T^-1] (x)_F F[T,T^-1];
    the three-variable form is only used to check coassociativity.
    """

    __slots__ = ("nvars", "_c")

    def __init__(self, nvars: int, coeffs: Mapping[tuple, Scalar] | None = None):
        self.nvars = nvars
        self._c = {e: c for e, c in (coeffs or {}).items() if c}

    @classmethod
    def tensor(cls, *factors: LaurentPoly) -> "MultiLaurent":
        out = {(): 1}
        for g in factors:
            out = {e + (i,): a * b for e, a in out.items() for i, b in g._c.items()}
        return cls(len(factors), out)

    def items(self):
        return sorted(self._c.items())

    def __bool__(self):
        return bool(self._c)

    def __eq__(self, other):
        if isinstance(other, MultiLaurent):
            return self.nvars == other.nvars and self._c == other._c
        if other == 0:
            return not self._c
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self._c.items())))

    def __repr__(self):
        return f"MultiLaurent({self.nvars}, {dict(self.items())!r})"

    def _combine(self, other, sign):
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")
        out = dict(self._c)
        for e, c in other._c.items():
            s = out.get(e)
            c = c if sign > 0 else -c
            out[e] = c if s is None else s + c
        return MultiLaurent(self.nvars, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return MultiLaurent(self.nvars, {e: -c for e, c in self._c.items()})

    def __mul__(self, other):
        if not isinstance(other, MultiLaurent):
            return MultiLaurent(self.nvars, {e: c * other for e, c in self._c.items()})
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")
        out: dict = {}
        for e1, a in self._c.items():
            for e2, b in other._c.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                s = out.get(e)
                out[e] = a * b if s is None else s + a * b
        return MultiLaurent(self.nvars, out)

    def __rmul__(self, other):
        return self * other

    def map_monomials(self, nvars: int, fn) -> "MultiLaurent":
        """Apply the monomial substitution ``exponents -> fn(exponents)``."""
        out: dict = {}
        for e, c in self._c.items():
            e2 = fn(e)
            s = out.get(e2)
            out[e2] = c if s is None else s + c
        return MultiLaurent(nvars, out)

    def evaluate(self, *point: Scalar):
        total = 0
        for e, c in self._c.items():
            term = c
            for t, i in zip(point, e):
                term = term * t**i
            total = total + term
        return total

    def slice_first(self) -> dict[int, LaurentPoly]:
        """Write a two-variable element as sum_i T1^i (x) h_i(T2)."""
        if self.nvars != 2:
            raise ValueError("slice_first needs two variables")
        rows: dict[int, dict] = {}
        for (i, j), c in self._c.items():
            rows.setdefault(i, {})[j] = c
        return {i: LaurentPoly(r) for i, r in rows.items()}


LaurentPoly2 = MultiLaurent


@dataclass(frozen=True)
class LaurentVector:
    """sum_i T^i (x) x_i with x_i in F^r."""

    terms: Mapping[int, tuple]
    dim: int

    def __post_init__(self):
        clean = {i: tuple(v) for i, v in self.terms.items() if any(v)}
        for v in clean.values():
            if len(v) != self.dim:
                raise ValueError("vectors of a LaurentVector must share one dimension")
        object.__setattr__(self, "terms", clean)

    def coordinate(self, c: int) -> LaurentPoly:
        return LaurentPoly({i: v[c] for i, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, LaurentVector) and self.dim == other.dim and dict(
            self.terms
        ) == dict(other.terms)


# --- divided powers and the functionals ------------------------------------


def divided_power(g: LaurentPoly, n: int) -> LaurentPoly:
    """D^[n](sum b_i T^i) = sum binom(i, n) b_i T^(i - n)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return g
    return LaurentPoly({i - n: binom(i, n) * c for i, c in g._c.items()})


def l_functional(g: LaurentPoly, n: int, field: ValuedField) -> Scalar:
    """L_n(sum b_i T^i) = f^n sum binom(i, n) b_i."""
    if n < 0:
        raise ValueError("n must be non-negative")
    total = field.zero
    for i, c in g._c.items():
        b = binom(i, n)
        if b:
            total = total + b * c
    return total * field.f_power(n) if n else total


def bold_l(x: LaurentVector, n: int, field: ValuedField) -> tuple:
    """Vector analogue of L_n on sum_i T^i (x) x_i."""
    total = [field.zero] * x.dim
    for i, v in x.terms.items():
        b = binom(i, n)
        if b:
            for c in range(x.dim):
                total[c] = total[c] + b * v[c]
    fn = field.f_power(n)
    return tuple(t * fn for t in total)


def first_variable_l(x: MultiLaurent, n: int, field: ValuedField) -> LaurentPoly:
    """L_n applied in the first tensor factor, as a polynomial in T2."""
    out: dict = {}
    for (i, j), c in x._c.items():
        b = binom(i, n)
        if b:
            s = out.get(j)
            out[j] = b * c if s is None else s + b * c
    fn = field.f_power(n)
    return LaurentPoly({j: c * fn for j, c in out.items()})


def taylor_coefficients(h: LaurentPoly) -> list:
    """(c_0, ..., c_d) with h = sum c_n (T - 1)^n; h must have no negative degrees."""
    if not h:
        return []
    if h.min_degree < 0:
        raise ValueError(
            "taylor_coefficients needs non-negative support; multiply by T^m first"
        )
    d = h.max_degree
    cs = []
    for n in range(d + 1):
        total = 0
        for i, c in h._c.items():
            if i >= n:
                total = total + math.comb(i, n) * c
        cs.append(total)
    one = next(iter(h._c.values())) ** 0
    if _expand_taylor(cs, one) != h:
        raise AssertionError("Taylor reconstruction failed")
    return cs


def _expand_taylor(cs, one) -> LaurentPoly:
    tm1 = LaurentPoly({1: one, 0: -one})
    power = LaurentPoly({0: one})
    total = LaurentPoly()
    for c in cs:
        total = total + power * c
        power = power * tm1
    return total


def min_valuation(values: Iterable[Scalar], field: ValuedField):
    return min((field.valuation(c) for c in values), default=math.inf)


def _denominator_bound(c: int | float, k: int) -> int:
    if c <= 0:
        return 0
    return -(-int(c) // k)


# --- membership -------------------------------------------------------------


@dataclass(frozen=True)
class GeneratorExpression:
    """g = T^-shift * sum_n coeffs[n] * ((T - 1)/f)^n with integral coeffs."""

    shift: int
    coeffs: tuple
    field: ValuedField = dc_field(repr=False, compare=False)

    def expand(self) -> LaurentPoly:
        fld = self.field
        x = LaurentPoly({1: fld.one, 0: -fld.one}) / fld.f
        power = LaurentPoly({0: fld.one})
        total = LaurentPoly()
        for a in self.coeffs:
            if a:
                total = total + power * a
            power = power * x
        return total.shift(-self.shift)

    def evaluate(self, t_inv: Scalar, x: Scalar):
        """Value at a point (t, x) of G_k, given t^-1 and x."""
        total = 0
        for a in reversed(self.coeffs):
            total = total * x + a
        return total * t_inv**self.shift

    def to_json(self) -> dict:
        return {"shift": self.shift, "coeffs": [self.field.format(a) for a in self.coeffs]}


@dataclass(frozen=True)
class MembershipVerdict:
    """Outcome of a membership test.

    On failure ``n`` is the least index whose functional is not integral and
    ``value`` the offending scalar (for tensor membership: the non-member
    first-variable slice, with the inner verdict in ``inner``).  ``bound`` is
    the number of functionals that had to be inspected.
    """

    member: bool
    bound: int
    n: int | None = None
    value: object = None
    inner: "MembershipVerdict | None" = None
    element: object = dc_field(default=None, repr=False, compare=False)
    field: ValuedField | None = dc_field(default=None, repr=False, compare=False)

    def __bool__(self):
        return self.member

    @cached_property
    def expression(self) -> GeneratorExpression | None:
        if not self.member or not isinstance(self.element, LaurentPoly):
            return None
        return express_in_generators(self.element, self.field)

    def to_json(self) -> dict:
        out: dict = {"member": self.member, "bound": self.bound}
        if not self.member:
            value = self.value
            if isinstance(value, LaurentPoly):
                value = format_laurent(value, self.field)
            else:
                value = self.field.format(value)
            out["witness"] = {"n": self.n, "value": value}
            if self.inner is not None:
                out["witness"]["inner"] = self.inner.to_json()
        elif self.expression is not None:
            out["expression"] = self.expression.to_json()
        return out


def s_membership(g: LaurentPoly, field: ValuedField) -> MembershipVerdict:
    """Decide g in S_k."""
    c = -min_valuation(g._c.values(), field)
    if field.k == 0:
        # f = 1: S_0 = O[T, T^-1]
        if c <= 0:
            return MembershipVerdict(True, 0, element=g, field=field)
        # the first non-integral L_n appears among the Taylor indices of T^m g
        span = g.max_degree - min(g.min_degree, 0)
        for n in range(span + 1):
            value = l_functional(g, n, field)
            if not field.is_integral(value):
                return MembershipVerdict(False, span + 1, n, value, element=g, field=field)
        raise AssertionError("non-integral coefficients but every L_n integral")
    m = _denominator_bound(c, field.k)
    for n in range(m):
        value = l_functional(g, n, field)
        if not field.is_integral(value):
            return MembershipVerdict(False, m, n, value, element=g, field=field)
    return MembershipVerdict(True, m, element=g, field=field)


def express_in_generators(g: LaurentPoly, field: ValuedField) -> GeneratorExpression:
    """Write a member of S_k as T^-m * sum a_n ((T - 1)/f)^n with a_n in O."""
    verdict = s_membership(g, field)
    if not verdict.member:
        raise NotAMemberError(verdict)
    if not g:
        return GeneratorExpression(0, (), field)
    m = max(0, -g.min_degree)
    h = g.shift(m)
    coeffs = tuple(l_functional(h, n, field) for n in range(h.max_degree + 1))
    if not all(field.is_integral(a) for a in coeffs):
        raise AssertionError("member of S_k with non-integral generator coefficients")
    expr = GeneratorExpression(m, coeffs, field)
    if expr.expand() != g:
        raise AssertionError("generator expression does not reproduce its input")
    return expr


def s_tensor_membership(x: MultiLaurent, field: ValuedField) -> MembershipVerdict:
    """Decide x in S_k (x)_O S_k inside F[T1^+-1, T2^+-1]."""
    c = -min_valuation(x._c.values(), field)
    if field.k == 0:
        if c <= 0:
            return MembershipVerdict(True, 0, element=x, field=field)
        for n in range(max(e[0] for e in x._c) - min(min(e[0] for e in x._c), 0) + 1):
            y = first_variable_l(x, n, field)
            inner = s_membership(y, field)
            if not inner.member:
                return MembershipVerdict(False, n + 1, n, y, inner, element=x, field=field)
        raise AssertionError("non-integral coefficients but every slice in S_0")
    m = _denominator_bound(c, field.k)
    for n in range(m):
        y = first_variable_l(x, n, field)
        inner = s_membership(y, field)
        if not inner.member:
            return MembershipVerdict(False, m, n, y, inner, element=x, field=field)
    return MembershipVerdict(True, m, element=x, field=field)


def s_infinity_membership(g: LaurentPoly, field: ValuedField) -> bool:
    """g lies in S_infinity iff its coefficient sum L_0(g) is integral."""
    return field.is_integral(l_functional(g, 0, field))


# --- text and JSON ------------------------------------------------------------


def _coeff_atom(c, field: ValuedField) -> str:
    s = field.format(c)
    if field.cfg.kind != "rational-padic" and (
        " " in s or "/" in s or s.startswith("(")
    ):
        return f"({s})"
    return s


def _monomial_str(exps: tuple, names: tuple) -> str:
    parts = []
    for name, i in zip(names, exps):
        if i == 0:
            continue
        parts.append(name if i == 1 else f"{name}^{i}")
    return "*".join(parts)


def _terms_str(items, names, field: ValuedField) -> str:
    out = ""
    for exps, c in items:
        neg = False
        if field.characteristic == 0:
            lead = field.format(c)
            if lead.startswith("-") and not lead.startswith("-(") and " " not in lead:
                neg, c = True, -c
        coeff = _coeff_atom(c, field)
        mono = _monomial_str(exps, names)
        if not mono:
            body = coeff
        elif coeff == "1":
            body = mono
        else:
            body = f"{coeff}*{mono}"
        if not out:
            out = ("-" if neg else "") + body
        else:
            out += (" - " if neg else " + ") + body
    return out or "0"


def format_laurent(g: LaurentPoly, field: ValuedField) -> str:
    return _terms_str([((i,), c) for i, c in g.items()], ("T",), field)


def format_laurent2(x: MultiLaurent, field: ValuedField) -> str:
    names = ("T1", "T2", "T3")[: x.nvars]
    return _terms_str(x.items(), names, field)


def _laurent_evaluator(field: ValuedField, variables: dict, make_const) -> Evaluator:
    def var(name, pos):
        if name in variables:
            return variables[name]
        if name == "e" and field.cfg.kind != "rational-padic":
            return make_const(field.pi)
        raise KeyError(name)

    def div(a, b, pos):
        if isinstance(b, LaurentPoly):
            if not b.is_monomial():
                raise ValueError("can only divide by a monomial c*T^i")
            return a * b**-1
        # MultiLaurent divisor
        if len(b._c) != 1:
            raise ValueError("can only divide by a monomial")
        (e, c), = b._c.items()
        inv = MultiLaurent(b.nvars, {tuple(-i for i in e): 1 / c})
        return a * inv

    def power(a, n, pos):
        if isinstance(a, LaurentPoly):
            return a**n
        if n < 0:
            if len(a._c) != 1:
                raise ValueError("only monomials can be raised to negative powers")
            (e, c), = a._c.items()
            return MultiLaurent(a.nvars, {tuple(-i * -n for i in e): (1 / c) ** -n})
        out = make_const(field.one)
        for _ in range(n):
            out = out * a
        return out

    return Evaluator(lambda n: make_const(field(n)), var, div, power)


def parse_laurent(text: str, field: ValuedField) -> LaurentPoly:
    """Parse e.g. ``"(T-1)/2"`` or ``"3*T^-2 + e*T"``."""
    ev = _laurent_evaluator(field, {"T": LaurentPoly.T(field)}, LaurentPoly.constant)
    return ev(text)


def parse_laurent2(text: str, field: ValuedField) -> MultiLaurent:
    """Parse a two-variable expression in T1, T2."""
    one = field.one
    variables = {
        "T1": MultiLaurent(2, {(1, 0): one}),
        "T2": MultiLaurent(2, {(0, 1): one}),
    }
    ev = _laurent_evaluator(field, variables, lambda c: MultiLaurent(2, {(0, 0): c}))
    return ev(text)


def laurent_to_json(g: LaurentPoly, field: ValuedField) -> dict:
    return {"coeffs": {str(i): field.format(c) for i, c in g.items()}}


def laurent_from_json(data: dict, field: ValuedField) -> LaurentPoly:
    return LaurentPoly({int(i): field.parse(s) for i, s in data["coeffs"].items()})


def laurent2_to_json(x: MultiLaurent, field: ValuedField) -> dict:
    return {"coeffs": {",".join(map(str, e)): field.format(c) for e, c in x.items()}}


def laurent2_from_json(data: dict, field: ValuedField) -> MultiLaurent:
    coeffs = {
        tuple(int(s) for s in key.split(",")): field.parse(v)
        for key, v in data["coeffs"].items()
    }
    return MultiLaurent(2, coeffs)
