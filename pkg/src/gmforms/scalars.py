"""Exact arithmetic in a discretely valued field F with valuation ring O.

Three backends sit behind the :class:`ValuedField` interface:

``rational-padic``
    F = Q, O = Z localized at p, uniformizer p.  Elements are
    :class:`fractions.Fraction`.
``ratfunc-char0``
    F = Q(e), O = Q[e] localized at e, uniformizer e.  Elements are
    :class:`RatFunc`.
``ratfunc-fq``
    F = F_p(e), O = F_p[e] localized at e.  Elements are :class:`RatFunc`.

Rational functions regular at e = 0 stand in for formal power series; every
computation here touches finitely many coefficients, so nothing is truncated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .expr import Evaluator, ParseError  # noqa: F401  (re-exported)

INF = math.inf

KINDS = ("rational-padic", "ratfunc-char0", "ratfunc-fq")


class UnsupportedError(ValueError):
    """A configuration the library deliberately does not handle."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _prime_power_base(q: int) -> int | None:
    for p in range(2, q + 1):
        if is_prime(p) and q % p == 0:
            while q % p == 0:
                q //= p
            return p if q == 1 else None
    return None


@dataclass(frozen=True)
class BackendConfig:
    kind: str
    p: int | None = None
    q: int | None = None
    k: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown backend {self.kind!r}; expected one of {KINDS}")
        if not isinstance(self.k, int) or self.k < 0:
            raise ValueError("k must be a non-negative integer")
        if self.kind == "rational-padic":
            if self.p is None or not is_prime(self.p):
                raise ValueError(f"rational-padic needs a prime p, got {self.p}")
        if self.kind == "ratfunc-fq":
            if self.q is None or self.q > 16 or _prime_power_base(self.q) is None:
                raise ValueError(f"ratfunc-fq needs a prime power q <= 16, got {self.q}")
            if not is_prime(self.q):
                raise UnsupportedError(
                    f"q = {self.q} is not prime; only prime fields F_q are implemented"
                )

    def to_json(self) -> dict:
        out = {"kind": self.kind, "k": self.k}
        if self.kind == "rational-padic":
            out["p"] = self.p
        if self.kind == "ratfunc-fq":
            out["q"] = self.q
        return out


# --- dense univariate polynomials, coefficients low -> high -------------------
# p == 0 means rational coefficients (int or Fraction), otherwise ints mod p.


def _inv(c, p):
    return pow(c, -1, p) if p else Fraction(1) / c


def _trim(a: list) -> list:
    while a and not a[-1]:
        a.pop()
    return a


def _padd(a, b, p):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    if p:
        out = [c % p for c in out]
    return _trim(out)


def _pscale(a, c, p):
    if p:
        return _trim([x * c % p for x in a])
    return _trim([x * c for x in a])


def _pmul(a, b, p):
    if not a or not b:
        return []
    if len(a) == 1:
        return _pscale(b, a[0], p)
    if len(b) == 1:
        return _pscale(a, b[0], p)
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    if p:
        out = [c % p for c in out]
    return _trim(out)


def _pdivmod(a, b, p):
    a = list(a)
    inv = _inv(b[-1], p)
    db = len(b) - 1
    if len(a) <= db:
        return [], a
    quot = [0] * (len(a) - db)
    for i in range(len(a) - 1 - db, -1, -1):
        c = a[i + db] * inv
        if p:
            c %= p
        quot[i] = c
        if c:
            for j, y in enumerate(b):
                a[i + j] -= c * y
                if p:
                    a[i + j] %= p
    return _trim(quot), _trim(a[:db])


def _pgcd(a, b, p):
    while b:
        a, b = b, _pdivmod(a, b, p)[1]
    return _pscale(a, _inv(a[-1], p), p)


def _series_div(num, den, prec, p):
    """First ``prec`` coefficients of num/den as a power series (den[0] != 0)."""
    inv0 = _inv(den[0], p)
    out = []
    for n in range(prec):
        acc = num[n] if n < len(num) else 0
        for j in range(1, min(n, len(den) - 1) + 1):
            acc -= den[j] * out[n - j]
        c = acc * inv0
        out.append(c % p if p else c)
    return _trim(out)


def _poly_str(a, var: str) -> str:
    terms = []
    for i, c in enumerate(a):
        if not c:
            continue
        neg = c < 0
        mag = -c if neg else c
        if i == 0:
            body = str(mag)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        terms.append((neg, body))
    if not terms:
        return "0"
    neg, body = terms[0]
    out = ("-" if neg else "") + body
    for neg, body in terms[1:]:
        out += (" - " if neg else " + ") + body
    return out


class RatFunc:
    """An element e^v * num(e)/den(e) of Q(e) or F_p(e).

    Canonical form: num[0] != 0, den[0] != 0, den monic, gcd(num, den) = 1.
    Zero is ``num == ()`` with v = 0.
    """

    __slots__ = ("v", "num", "den", "p")

    def __init__(self, v: int, num: tuple, den: tuple, p: int):
        self.v = v
        self.num = num
        self.den = den
        self.p = p

    @classmethod
    def make(cls, v, num, den, p) -> "RatFunc":
        num = _trim([c % p for c in num] if p else list(num))
        den = _trim([c % p for c in den] if p else list(den))
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            return cls(0, (), (1,), p)
        s = 0
        while not num[s]:
            s += 1
        t = 0
        while not den[t]:
            t += 1
        v += s - t
        num, den = num[s:], den[t:]
        if len(den) > 1 and len(num) > 1:
            g = _pgcd(num, den, p)
            if len(g) > 1:
                num = _pdivmod(num, g, p)[0]
                den = _pdivmod(den, g, p)[0]
        lc = den[-1]
        if lc != 1:
            inv = _inv(lc, p)
            num = _pscale(num, inv, p)
            den = _pscale(den, inv, p)
        return cls(v, tuple(num), tuple(den), p)

    @classmethod
    def const(cls, c, p) -> "RatFunc":
        if p:
            if isinstance(c, Fraction):
                c = c.numerator * pow(c.denominator, -1, p)
            c %= p
        return cls.make(0, [c], [1], p)

    def _coerce(self, other) -> "RatFunc":
        if isinstance(other, RatFunc):
            if other.p != self.p:
                raise TypeError("mixing rational functions of different characteristic")
            return other
        if isinstance(other, (int, Fraction)):
            return RatFunc.const(other, self.p)
        return NotImplemented

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.v == other.v and self.num == other.num and self.den == other.den

    def __hash__(self):
        if self.v == 0 and len(self.num) <= 1 and self.den == (1,):
            return hash(self.num[0] if self.num else 0)
        return hash((self.v, self.num, self.den))

    def __neg__(self):
        p = self.p
        return RatFunc(self.v, tuple((-c) % p if p else -c for c in self.num), self.den, p)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.num:
            return other
        if not other.num:
            return self
        p = self.p
        w = min(self.v, other.v)
        a = [0] * (self.v - w) + list(self.num)
        b = [0] * (other.v - w) + list(other.num)
        if self.den == other.den:
            return RatFunc.make(w, _padd(a, b, p), self.den, p)
        num = _padd(_pmul(a, other.den, p), _pmul(b, self.den, p), p)
        return RatFunc.make(w, num, _pmul(self.den, other.den, p), p)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.num or not other.num:
            return RatFunc(0, (), (1,), self.p)
        p = self.p
        return RatFunc.make(
            self.v + other.v, _pmul(self.num, other.num, p), _pmul(self.den, other.den, p), p
        )

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.num:
            raise ZeroDivisionError("division by zero in F")
        return RatFunc.make(-self.v, list(self.den), list(self.num), self.p)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = RatFunc.const(1, self.p)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def numerator_poly(self) -> tuple:
        """Numerator as a polynomial in e when v >= 0 (else without the e^v)."""
        return (0,) * max(self.v, 0) + self.num

    def denominator_poly(self) -> tuple:
        return (0,) * max(-self.v, 0) + self.den

    def __repr__(self):
        return f"RatFunc({_ratfunc_str(self)!r}, p={self.p})"

    def __str__(self):
        return _ratfunc_str(self)


def _ratfunc_str(x: RatFunc) -> str:
    num = _poly_str(x.numerator_poly(), "e")
    den = x.denominator_poly()
    if den == (1,):
        return num
    if len([c for c in x.num if c]) > 1:
        num = f"({num})"
    dstr = _poly_str(den, "e")
    if len([c for c in den if c]) > 1 or dstr.startswith("-") or "*" in dstr:
        dstr = f"({dstr})"
    return f"{num}/{dstr}"


Scalar = Union[Fraction, RatFunc]


class ValuedField:
    """Common interface of the three backends.

    ``pi`` is the uniformizer and ``f = pi^k`` the distinguished element.
    """

    cfg: BackendConfig
    k: int
    pi: Scalar
    f: Scalar
    characteristic: int

    def __init__(self, cfg: BackendConfig):
        self.cfg = cfg
        self.k = cfg.k
        self._fpow = [self(1)]
        self.f = self.pi_power(cfg.k)

    # construction
    def __call__(self, value) -> Scalar:
        raise NotImplementedError

    @property
    def zero(self) -> Scalar:
        return self(0)

    @property
    def one(self) -> Scalar:
        return self(1)

    def pi_power(self, n: int) -> Scalar:
        return self.pi**n

    def f_power(self, n: int) -> Scalar:
        while len(self._fpow) <= n:
            self._fpow.append(self._fpow[-1] * self.f)
        return self._fpow[n]

    # valuation
    def valuation(self, x: Scalar) -> int | float:
        raise NotImplementedError

    def is_integral(self, x: Scalar) -> bool:
        return self.valuation(x) >= 0

    def is_unit(self, x: Scalar) -> bool:
        return self.valuation(x) == 0

    def reduce(self, x: Scalar, a: int) -> Scalar:
        """Canonical representative of x modulo pi^a O (any integer a)."""
        raise NotImplementedError

    def unit_part(self, x: Scalar) -> Scalar:
        return x / self.pi_power(self.valuation(x))

    # text
    def parse(self, text: str) -> Scalar:
        return self._evaluator()(text)

    def format(self, x: Scalar) -> str:
        raise NotImplementedError

    def _var(self, name: str, pos: int):
        raise KeyError(name)

    def _evaluator(self) -> Evaluator:
        def div(a, b, pos):
            if not b:
                raise ZeroDivisionError("division by zero")
            return a / b

        def power(a, n, pos):
            if n < 0 and not a:
                raise ZeroDivisionError("zero to a negative power")
            return a**n

        return Evaluator(self, self._var, div, power)

    def __eq__(self, other):
        return isinstance(other, ValuedField) and other.cfg == self.cfg

    def __hash__(self):
        return hash(self.cfg)

    def __repr__(self):
        return f"{type(self).__name__}({self.cfg})"


class PadicRationals(ValuedField):
    """Q with the p-adic valuation."""

    def __init__(self, cfg: BackendConfig):
        self.p = cfg.p
        self.characteristic = 0
        self.pi = Fraction(cfg.p)
        super().__init__(cfg)

    def __call__(self, value) -> Fraction:
        if isinstance(value, RatFunc):
            raise TypeError("rational function given to the p-adic backend")
        return Fraction(value)

    def pi_power(self, n: int) -> Fraction:
        return Fraction(self.p) ** n

    def valuation(self, x) -> int | float:
        x = Fraction(x)
        if not x:
            return INF
        p = self.p
        v = 0
        n, d = x.numerator, x.denominator
        while n % p == 0:
            n //= p
            v += 1
        while d % p == 0:
            d //= p
            v -= 1
        return v

    def reduce(self, x, a: int) -> Fraction:
        x = Fraction(x)
        v = self.valuation(x)
        if v >= a:
            return Fraction(0)
        s = max(0, -v)
        y = x * self.p**s
        mod = self.p ** (a + s)
        n = y.numerator * pow(y.denominator, -1, mod) % mod
        return Fraction(n, self.p**s)

    def format(self, x) -> str:
        return str(Fraction(x))


class RationalFunctions(ValuedField):
    """Q(e) or F_p(e) with the e-adic valuation."""

    def __init__(self, cfg: BackendConfig):
        self.characteristic = cfg.q if cfg.kind == "ratfunc-fq" else 0
        self.p = self.characteristic
        self.pi = RatFunc.make(1, [1], [1], self.p)
        super().__init__(cfg)

    def __call__(self, value) -> RatFunc:
        if isinstance(value, RatFunc):
            if value.p != self.p:
                raise TypeError("rational function of the wrong characteristic")
            return value
        return RatFunc.const(value, self.p)

    def pi_power(self, n: int) -> RatFunc:
        return RatFunc(n, (1,), (1,), self.p)

    def poly(self, coeffs, shift: int = 0) -> RatFunc:
        """The element e^shift * sum(coeffs[i] e^i)."""
        return RatFunc.make(shift, list(coeffs), [1], self.p)

    def valuation(self, x) -> int | float:
        x = self(x)
        return x.v if x.num else INF

    def reduce(self, x, a: int) -> RatFunc:
        x = self(x)
        if not x.num or x.v >= a:
            return self.zero
        coeffs = _series_div(x.num, x.den, a - x.v, self.p)
        return RatFunc.make(x.v, coeffs, [1], self.p)

    def _var(self, name: str, pos: int):
        if name == "e":
            return self.pi
        return super()._var(name, pos)

    def format(self, x) -> str:
        return _ratfunc_str(self(x))


def make_field(cfg: BackendConfig) -> ValuedField:
    if cfg.kind == "rational-padic":
        return PadicRationals(cfg)
    return RationalFunctions(cfg)


def padic(p: int, k: int = 1) -> PadicRationals:
    return PadicRationals(BackendConfig("rational-padic", p=p, k=k))


def char0(k: int = 1) -> RationalFunctions:
    return RationalFunctions(BackendConfig("ratfunc-char0", k=k))


def finite(q: int, k: int = 1) -> RationalFunctions:
    return RationalFunctions(BackendConfig("ratfunc-fq", q=q, k=k))


def parse_scalar(text: str, cfg: BackendConfig | ValuedField) -> Scalar:
    field = cfg if isinstance(cfg, ValuedField) else make_field(cfg)
    return field.parse(text)


def format_scalar(x: Scalar, cfg: BackendConfig | ValuedField) -> str:
    field = cfg if isinstance(cfg, ValuedField) else make_field(cfg)
    return field.format(x)


def binom(i: int, n: int) -> int:
    """binom(i, n) = i(i-1)...(i-n+1)/n! for every integer i and n >= 0."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if i >= 0:
        return math.comb(i, n)
    # upper negation: binom(-m, n) = (-1)^n binom(m + n - 1, n)
    return (-1) ** n * math.comb(n - i - 1, n)
