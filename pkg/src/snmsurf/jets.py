"""Order-3 jets: a value together with its first three derivatives.

A ``Jet3`` stores derivatives (not Taylor coefficients), so ``Jet3(x, 1, 0, 0)``
is the identity jet at ``x``.  Elementary functions accept either a float or a
jet; on jets they compose through the truncated Faa di Bruno formula.
"""

from __future__ import annotations

import math
from numbers import Real

__all__ = [
    "Jet3",
    "JetError",
    "DomainError",
    "NonFiniteError",
    "compose",
    "const",
    "variable",
    "exp",
    "log",
    "sin",
    "cos",
    "tan",
    "asin",
    "atan",
    "atanh",
    "tanh",
    "sqrt",
    "real_power",
    "int_power",
    "FUNCTIONS",
]


class JetError(ValueError):
    pass


class DomainError(JetError):
    """Argument outside the real domain of a function."""


class NonFiniteError(JetError, ArithmeticError):
    """A computed value overflowed or became NaN."""


class Jet3:
    __slots__ = ("v0", "v1", "v2", "v3")
    __array_ufunc__ = None  # make numpy scalars defer to our operators

    def __init__(self, v0, v1=0.0, v2=0.0, v3=0.0):
        self.v0 = float(v0)
        self.v1 = float(v1)
        self.v2 = float(v2)
        self.v3 = float(v3)

    @classmethod
    def variable(cls, x) -> "Jet3":
        return cls(x, 1.0, 0.0, 0.0)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.v0, self.v1, self.v2, self.v3)

    def __iter__(self):
        return iter(self.as_tuple())

    def __repr__(self):
        return f"Jet3({self.v0!r}, {self.v1!r}, {self.v2!r}, {self.v3!r})"

    def __eq__(self, other):
        if isinstance(other, Jet3):
            return self.as_tuple() == other.as_tuple()
        if isinstance(other, Real):
            return self.as_tuple() == (float(other), 0.0, 0.0, 0.0)
        return NotImplemented

    def __hash__(self):
        return hash(self.as_tuple())

    def is_finite(self) -> bool:
        return all(math.isfinite(c) for c in self.as_tuple())

    def derivative(self) -> "Jet3":
        """Shift down one order; the unknown top slot becomes NaN."""
        return Jet3(self.v1, self.v2, self.v3, math.nan)

    # arithmetic

    def __neg__(self):
        return Jet3(-self.v0, -self.v1, -self.v2, -self.v3)

    def __pos__(self):
        return self

    def __add__(self, other):
        if isinstance(other, Jet3):
            return Jet3(self.v0 + other.v0, self.v1 + other.v1,
                        self.v2 + other.v2, self.v3 + other.v3)
        if isinstance(other, Real):
            return Jet3(self.v0 + other, self.v1, self.v2, self.v3)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Jet3):
            return Jet3(self.v0 - other.v0, self.v1 - other.v1,
                        self.v2 - other.v2, self.v3 - other.v3)
        if isinstance(other, Real):
            return Jet3(self.v0 - other, self.v1, self.v2, self.v3)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, Real):
            return Jet3(other - self.v0, -self.v1, -self.v2, -self.v3)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Jet3):
            a0, a1, a2, a3 = self.v0, self.v1, self.v2, self.v3
            b0, b1, b2, b3 = other.v0, other.v1, other.v2, other.v3
            return Jet3(
                a0 * b0,
                a1 * b0 + a0 * b1,
                a2 * b0 + 2.0 * a1 * b1 + a0 * b2,
                a3 * b0 + 3.0 * (a2 * b1 + a1 * b2) + a0 * b3,
            )
        if isinstance(other, Real):
            return Jet3(self.v0 * other, self.v1 * other,
                        self.v2 * other, self.v3 * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet3):
            return self * _reciprocal(other)
        if isinstance(other, Real):
            if other == 0:
                raise DomainError("division by zero")
            return Jet3(self.v0 / other, self.v1 / other,
                        self.v2 / other, self.v3 / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, Real):
            return _reciprocal(self) * other
        return NotImplemented

    def __pow__(self, p):
        if isinstance(p, int) or (isinstance(p, Real) and float(p).is_integer()):
            return int_power(self, int(p))
        if isinstance(p, Real):
            return real_power(self, float(p))
        return NotImplemented


def const(c) -> Jet3:
    return Jet3(c, 0.0, 0.0, 0.0)


def variable(x) -> Jet3:
    return Jet3(x, 1.0, 0.0, 0.0)


def compose(tower, u: Jet3) -> Jet3:
    """Jet of phi(u) from phi's derivative tower (phi, phi', phi'', phi''') at u.v0."""
    d0, d1, d2, d3 = tower
    u1, u2, u3 = u.v1, u.v2, u.v3
    return Jet3(
        d0,
        d1 * u1,
        d2 * u1 * u1 + d1 * u2,
        d3 * u1 * u1 * u1 + 3.0 * d2 * u1 * u2 + d1 * u3,
    )


def _reciprocal(u: Jet3) -> Jet3:
    x = u.v0
    if x == 0.0:
        raise DomainError("division by zero")
    r = 1.0 / x
    return compose((r, -r * r, 2.0 * r ** 3, -6.0 * r ** 4), u)


def _lift(name, value_fn, tower_fn, check=None):
    """Build a function acting on floats directly and on jets via its tower."""

    def fn(x):
        if isinstance(x, Jet3):
            if check is not None:
                check(x.v0, True)
            return compose(tower_fn(x.v0), x)
        x = float(x)
        if check is not None:
            check(x, False)
        return value_fn(x)

    fn.__name__ = name
    fn.__qualname__ = name
    fn.tower = tower_fn
    return fn


def _exp_tower(x):
    e = math.exp(x)
    return (e, e, e, e)


def _exp_value(x):
    try:
        return math.exp(x)
    except OverflowError:
        raise NonFiniteError(f"exp({x}) overflows") from None


def _check_exp(x, jet):
    if x > 709.78:
        raise NonFiniteError(f"exp({x}) overflows")


def _check_log(x, jet):
    if not x > 0.0:
        raise DomainError(f"log of non-positive argument {x}")


def _log_tower(x):
    r = 1.0 / x
    return (math.log(x), r, -r * r, 2.0 * r ** 3)


def _sin_tower(x):
    s, c = math.sin(x), math.cos(x)
    return (s, c, -s, -c)


def _cos_tower(x):
    s, c = math.sin(x), math.cos(x)
    return (c, -s, -c, s)


def _check_tan(x, jet):
    if math.cos(x) == 0.0:
        raise DomainError(f"tan pole at {x}")


def _tan_tower(x):
    t = math.tan(x)
    q = 1.0 + t * t
    return (t, q, 2.0 * t * q, (2.0 + 6.0 * t * t) * q)


def _check_asin(x, jet):
    if jet and not -1.0 < x < 1.0:
        raise DomainError(f"asin not differentiable at {x}")
    if not -1.0 <= x <= 1.0:
        raise DomainError(f"asin argument {x} outside [-1, 1]")


def _asin_tower(x):
    r = 1.0 / math.sqrt(1.0 - x * x)
    return (math.asin(x), r, x * r ** 3, (1.0 + 2.0 * x * x) * r ** 5)


def _atan_tower(x):
    q = 1.0 / (1.0 + x * x)
    return (math.atan(x), q, -2.0 * x * q * q, (6.0 * x * x - 2.0) * q ** 3)


def _check_atanh(x, jet):
    if not -1.0 < x < 1.0:
        raise DomainError(f"atanh argument {x} outside (-1, 1)")


def _atanh_tower(x):
    q = 1.0 / (1.0 - x * x)
    return (math.atanh(x), q, 2.0 * x * q * q, (2.0 + 6.0 * x * x) * q ** 3)


def _tanh_tower(x):
    t = math.tanh(x)
    q = 1.0 - t * t
    return (t, q, -2.0 * t * q, (6.0 * t * t - 2.0) * q)


def _check_sqrt(x, jet):
    if jet and not x > 0.0:
        raise DomainError(f"sqrt not differentiable at {x}")
    if x < 0.0:
        raise DomainError(f"sqrt of negative argument {x}")


def _sqrt_tower(x):
    r = math.sqrt(x)
    return (r, 0.5 / r, -0.25 / (r * x), 0.375 / (r * x * x))


exp = _lift("exp", _exp_value, _exp_tower, _check_exp)
log = _lift("log", math.log, _log_tower, _check_log)
sin = _lift("sin", math.sin, _sin_tower)
cos = _lift("cos", math.cos, _cos_tower)
tan = _lift("tan", math.tan, _tan_tower, _check_tan)
asin = _lift("asin", math.asin, _asin_tower, _check_asin)
atan = _lift("atan", math.atan, _atan_tower)
atanh = _lift("atanh", math.atanh, _atanh_tower, _check_atanh)
tanh = _lift("tanh", math.tanh, _tanh_tower)
sqrt = _lift("sqrt", math.sqrt, _sqrt_tower, _check_sqrt)

FUNCTIONS = {
    f.__name__: f for f in (exp, log, sin, cos, tan, asin, atan, atanh, tanh, sqrt)
}


def real_power(x, p: float):
    """x**p for real p; the base must be positive."""
    base = x.v0 if isinstance(x, Jet3) else float(x)
    if not base > 0.0:
        raise DomainError(f"non-integer power {p} of non-positive base {base}")
    try:
        if isinstance(x, Jet3):
            return compose(
                (base ** p,
                 p * base ** (p - 1.0),
                 p * (p - 1.0) * base ** (p - 2.0),
                 p * (p - 1.0) * (p - 2.0) * base ** (p - 3.0)),
                x,
            )
        return base ** p
    except OverflowError:
        raise NonFiniteError(f"{base} ** {p} overflows") from None


def int_power(x, n: int):
    """x**n by repeated multiplication (square-and-multiply)."""
    if n < 0:
        den = int_power(x, -n)
        if (den.v0 if isinstance(den, Jet3) else den) == 0.0:
            raise DomainError("negative power of zero")
        return 1.0 / den
    result = None
    square = x
    while n:
        if n & 1:
            result = square if result is None else result * square
        n >>= 1
        if n:
            square = square * square
    if result is None:
        return Jet3(1.0) if isinstance(x, Jet3) else 1.0
    return result
