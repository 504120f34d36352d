"""Constant-curvature generalized cylinders.

A generalized cylinder is a translation surface with one linear profile.  For
each family the curved profile is produced from its first integral: either the
squared slope as a function of the profile value (``grid_on == "value"``, the
profile is recovered by quadrature of 1/sqrt(P)), or as a function of the
parameter (``grid_on == "parameter"``, the profile is the quadrature of
sqrt(P)).  Explicit families (planes, grim reapers) are plain expressions.

Every first integral here is a Mobius function of mu = exp(rate * t) (or of
mu = t), which makes the positivity domain and its endpoint behaviour exact.
"""

from __future__ import annotations

import bisect
import math
import warnings
from dataclasses import dataclass, field
from typing import ClassVar

import numpy as np
from scipy import integrate

from . import jets
from .expr import Add, Call, Div, Expr, Mul, Num, Pow, Var, eval_jet, num
from .jets import DomainError, Jet3, NonFiniteError
from .surface import TranslationSurface, sectional_curvature_closed

__all__ = [
    "ConstraintError",
    "SingularEndpointError",
    "QuadratureError",
    "Interval",
    "Mobius",
    "CylinderFamily",
    "Plane",
    "GrimReaper",
    "T51",
    "T52a0",
    "T52K0zero",
    "T52gen",
    "T53K1",
    "T53gen",
    "T52corr",
    "T53corr",
    "FAMILY_TAGS",
    "family_from_json",
    "maximal_domain",
    "first_integral",
    "quadrature_profile",
    "ProfileSample",
    "ProfileCurve",
    "LiftedProfile",
    "grim_reaper",
    "ode_residual",
    "k1_obstruction",
    "k1_obstruction_sampled",
    "classification_property_test",
    "ClassificationReport",
    "random_family",
    "EXAMPLES",
    "example_curve",
    "domain_discrepancy",
]


class ConstraintError(ValueError):
    """Family parameters violate the family's constraints."""


class SingularEndpointError(DomainError):
    pass


class QuadratureError(ArithmeticError):
    pass


# domains

FINITE = "finite-singular"
INFINITE = "infinite"


@dataclass(frozen=True)
class Interval:
    """Open interval with endpoint kinds and the first integral's limit there.

    ``*_limit`` is ``"zero"`` (slope -> 0), ``"pole"`` (slope -> infinity),
    ``"finite"`` (slope tends to a nonzero constant) or ``"blowup"`` (the
    explicit profile itself leaves every bound).
    """

    lower: float
    upper: float
    lower_kind: str = INFINITE
    upper_kind: str = INFINITE
    lower_limit: str = "finite"
    upper_limit: str = "finite"

    def __contains__(self, t) -> bool:
        return self.lower < t < self.upper

    @property
    def length(self) -> float:
        return self.upper - self.lower

    def window(self, fraction: float = 0.9, far: float = 10.0) -> tuple[float, float]:
        """Central ``fraction`` of the interval; infinite ends are cut ``far`` from the other end."""
        lo, hi = self.lower, self.upper
        if math.isinf(lo) and math.isinf(hi):
            lo, hi = -far, far
        elif math.isinf(lo):
            lo = hi - far
        elif math.isinf(hi):
            hi = lo + far
        margin = 0.5 * (1.0 - fraction) * (hi - lo)
        return lo + margin, hi - margin

    def as_tuple(self):
        return (self.lower, self.upper)


@dataclass(frozen=True)
class Mobius:
    """P(t) = (n0 + n1 mu)/(d0 + d1 mu) with mu = exp(rate t), or mu = t if rate is None."""

    n0: float
    n1: float
    d0: float
    d1: float
    rate: float | None

    def mu(self, t):
        return t if self.rate is None else jets.exp(self.rate * t)

    def __call__(self, t):
        m = self.mu(t)
        return (self.n0 + self.n1 * m) / (self.d0 + self.d1 * m)

    def _value_mu(self, m: float) -> float:
        den = self.d0 + self.d1 * m
        return (self.n0 + self.n1 * m) / den if den != 0 else math.nan

    def positive_pieces(self) -> list[Interval]:
        """Connected components of {P > 0} as intervals in t."""
        if self.n0 * self.d1 == self.n1 * self.d0:
            raise ConstraintError("first integral is constant (plane), not a curved profile")
        lo, hi = (-math.inf, math.inf) if self.rate is None else (0.0, math.inf)
        crit = {}
        if self.n1 != 0:
            crit[-self.n0 / self.n1] = "zero"
        if self.d1 != 0:
            crit[-self.d0 / self.d1] = "pole"
        cuts = sorted(m for m in crit if lo < m < hi)
        edges = [lo] + cuts + [hi]
        pieces = []
        for a, b in zip(edges[:-1], edges[1:]):
            if math.isinf(a) and math.isinf(b):
                probe = 0.0
            elif math.isinf(a):
                probe = b - 1.0 - abs(b)
            elif math.isinf(b):
                probe = a + 1.0 + abs(a)
            else:
                probe = 0.5 * (a + b)
            if self._value_mu(probe) > 0:
                pieces.append(self._to_t(a, b, crit))
        return pieces

    def _limit_at(self, m):
        if math.isinf(m):
            num_, den = self.n1, self.d1
        else:
            num_, den = self.n0, self.d0
        if den == 0:
            return "pole"
        return "zero" if num_ == 0 else "finite"

    def _to_t(self, a, b, crit) -> Interval:
        def conv(m):
            if self.rate is None:
                return m
            if m == 0.0:
                return -math.inf if self.rate > 0 else math.inf
            if math.isinf(m):
                return math.inf if self.rate > 0 else -math.inf
            return math.log(m) / self.rate

        ends = []
        for m in (a, b):
            t = conv(m)
            if m in crit:
                ends.append((t, FINITE, crit[m]))
            else:
                ends.append((t, INFINITE, self._limit_at(m)))
        ends.sort(key=lambda e: e[0])
        (t0, k0, l0), (t1, k1, l1) = ends
        return Interval(t0, t1, k0, k1, l0, l1)


# families

def _b(a):
    return 1.0 + a * a


def _need(cond, message):
    if not cond:
        raise ConstraintError(message)


def _sign_of(sign) -> float:
    if sign in ("+", 1, 1.0, None):
        return 1.0
    if sign in ("-", -1, -1.0):
        return -1.0
    raise ConstraintError(f"sign must be '+' or '-', got {sign!r}")


def _linear(a: float, name: str) -> Expr:
    return Mul(num(a), Var(name))


@dataclass(frozen=True)
class CylinderFamily:
    """Base of the tagged cylinder families.

    Subclasses declare the surface type, which profile is curved and the
    variable it depends on; value-grid families implement ``integrand``
    (the squared slope as a function of the profile value).
    """

    tag: ClassVar[str] = ""
    surface_kind: ClassVar[str] = "I"
    curved: ClassVar[str] = "f"
    grid_on: ClassVar[str] = "value"
    # which identity the family was derived from: "true" or "printed"
    identity: ClassVar[str] = "true"

    def __post_init__(self):
        self._validate()
        dom = self._compute_domain()
        object.__setattr__(self, "_domain", dom)

    def _validate(self):
        pass

    # overridden by subclasses

    def integrand(self, t):
        raise NotImplementedError

    def mobius(self) -> Mobius:
        raise NotImplementedError

    @property
    def linear_slope(self) -> float:
        return self.a

    def printed_domain(self):
        return None

    # shared behaviour

    @property
    def sigma(self) -> float:
        return _sign_of(getattr(self, "sign", "+"))

    @property
    def variable(self) -> str:
        if self.surface_kind == "I":
            return "x" if self.curved == "f" else "y"
        return "y" if self.curved == "f" else "z"

    @property
    def linear_variable(self) -> str:
        if self.surface_kind == "I":
            return "y" if self.curved == "f" else "x"
        return "z" if self.curved == "f" else "y"

    def _compute_domain(self) -> Interval:
        pieces = self.mobius().positive_pieces()
        branch = getattr(self, "branch", None)
        if not pieces:
            raise ConstraintError(f"{self.tag}: first integral is nowhere positive for {self}")
        if len(pieces) == 1:
            _need(branch is None,
                  f"{self.tag}: positivity set is a single interval; branch must be omitted")
            return pieces[0]
        _need(branch in ("low", "high"),
              f"{self.tag}: positivity set has two intervals; choose branch 'low' or 'high'")
        return pieces[0] if branch == "low" else pieces[-1]

    @property
    def domain(self) -> Interval:
        return self._domain

    def to_json(self) -> dict:
        out = {"tag": self.tag}
        for k, v in self.__dict__.items():
            if k.startswith("_") or v is None:
                continue
            out[k] = v
        return out

    def profile_expr(self):
        return None

    def linear_expr(self) -> Expr:
        return _linear(self.linear_slope, self.linear_variable)


@dataclass(frozen=True)
class Plane(CylinderFamily):
    """Type I: z = c x + a y.  Type II: x = a y + c z."""

    kind: str = "I"
    a: float = 0.0
    c: float = 0.0
    tag: ClassVar[str] = "Plane"
    grid_on: ClassVar[str] = "parameter"

    def _validate(self):
        _need(self.kind in ("I", "II"), f"Plane kind must be 'I' or 'II', got {self.kind!r}")

    def _compute_domain(self):
        return Interval(-math.inf, math.inf)

    @property
    def surface_kind(self):
        return self.kind

    @property
    def K0(self):
        a2, c2 = self.a ** 2, self.c ** 2
        if self.kind == "I":
            return (a2 + c2) / (1.0 + a2 + c2)
        return (1.0 + a2) / (1.0 + a2 + c2)

    @property
    def curved(self):
        return "f" if self.kind == "I" else "g"

    def profile_expr(self):
        return _linear(self.c, self.variable)

    def integrand(self, t):
        return self.c * self.c + 0.0 * t


@dataclass(frozen=True)
class GrimReaper(CylinderFamily):
    kind: str = "T51"
    a: float = 0.0
    c: float = 0.0
    d: float = 0.0
    tag: ClassVar[str] = "GrimReaper"
    grid_on: ClassVar[str] = "parameter"

    def _validate(self):
        _need(self.kind in ("T51", "T52b", "T53"), f"unknown grim reaper kind {self.kind!r}")
        if self.kind == "T52b":
            _need(self.a != 0, "T52b grim reaper requires a != 0")

    @property
    def surface_kind(self):
        return "I" if self.kind == "T51" else "II"

    @property
    def curved(self):
        return "g" if self.kind == "T53" else "f"

    @property
    def identity(self):
        return "true" if self.kind == "T51" else "printed"

    @property
    def K0(self):
        return 0.0 if self.kind == "T53" else 1.0

    def _compute_domain(self):
        b = _b(self.a)
        half = 0.5 * math.pi
        if self.kind == "T51":
            lo, hi = -self.c - half * math.sqrt(b), -self.c + half * math.sqrt(b)
        elif self.kind == "T52b":
            k = self.a ** 2 / math.sqrt(b)
            lo, hi = (-half - self.c) / k, (half - self.c) / k
        else:
            k = math.sqrt(b)
            lo, hi = (-half - self.c) / k, (half - self.c) / k
        return Interval(lo, hi, FINITE, FINITE, "blowup", "blowup")

    def profile_expr(self):
        return grim_reaper(self.kind, self.a, self.c, self.d)

    def integrand(self, t):
        return eval_jet(self.profile_expr(), t).v1 ** 2


@dataclass(frozen=True)
class T51(CylinderFamily):
    """z = f(x) + a y with f'^2 = (E - cK0)/(cK0 - E - c) - a^2, E = exp(2f/(1+a^2))."""

    a: float = 0.0
    K0: float = 0.5
    c: float = 1.0
    sign: str = "+"
    tag: ClassVar[str] = "T51"

    def _validate(self):
        _need(self.K0 > 0, "T51 requires K0 > 0 (the first integral must be positive)")
        _need(self.K0 != 1, "T51 requires K0 != 1 (K0 = 1 is the grim reaper)")
        _need(self.c > 0, "T51 requires c > 0")
        _sign_of(self.sign)

    def integrand(self, t):
        b = _b(self.a)
        e = jets.exp(2.0 * t / b)
        ck = self.c * self.K0
        return (e - ck) / (ck - e - self.c) - self.a ** 2

    def mobius(self):
        b, c, k = _b(self.a), self.c, self.K0
        return Mobius(-c * (b * k - self.a ** 2), b, c * (k - 1.0), -1.0, 2.0 / b)

    def printed_domain(self):
        b, c, k = _b(self.a), self.c, self.K0
        hi = b * math.log(math.sqrt(c * k))
        if k < 1:
            return [(-math.inf, hi)]
        return [(b * math.log(math.sqrt(c * (k - 1.0))), hi)]


@dataclass(frozen=True)
class T52a0(CylinderFamily):
    """x = f(y) with f'^2 = -(1 + c + 2(1-K0) f)/(c + 2(1-K0) f)."""

    K0: float = -1.0
    c: float = 0.0
    sign: str = "+"
    tag: ClassVar[str] = "T52a0"
    surface_kind: ClassVar[str] = "II"
    identity: ClassVar[str] = "printed"

    @property
    def a(self):
        return 0.0

    def _validate(self):
        _need(self.K0 != 1, "T52a0 requires K0 != 1 (K0 = 1 is the plane)")
        _sign_of(self.sign)

    def integrand(self, t):
        k = 2.0 * (1.0 - self.K0)
        return -(1.0 + self.c + k * t) / (self.c + k * t)

    def mobius(self):
        k = 2.0 * (1.0 - self.K0)
        return Mobius(-(1.0 + self.c), -k, self.c, k, None)

    def printed_domain(self):
        k = 2.0 * (self.K0 - 1.0)
        if self.K0 < 1:
            return [((self.c + 1.0) / k, self.c / k)]
        return [(self.c / k, (self.c + 1.0) / k)]

    def to_json(self):
        return {"tag": self.tag, "a": 0.0, "K0": self.K0, "c": self.c, "sign": self.sign}


@dataclass(frozen=True)
class T52K0zero(CylinderFamily):
    """x = f(y) + a z, K0 = 0: f'^2 = (c b E - 1)/(1 - c E), E = exp(2a^2 f/b)."""

    a: float = 1.0
    c: float = 1.0
    sign: str = "+"
    tag: ClassVar[str] = "T52K0zero"
    surface_kind: ClassVar[str] = "II"
    identity: ClassVar[str] = "printed"

    @property
    def K0(self):
        return 0.0

    def _validate(self):
        _need(self.a != 0, "T52K0zero requires a != 0")
        _need(self.c > 0, "T52K0zero requires c > 0")
        _sign_of(self.sign)

    def integrand(self, t):
        b = _b(self.a)
        e = jets.exp(2.0 * self.a ** 2 * t / b)
        return (self.c * e * b - 1.0) / (1.0 - self.c * e)

    def mobius(self):
        b = _b(self.a)
        return Mobius(-1.0, self.c * b, 1.0, -self.c, 2.0 * self.a ** 2 / b)

    def printed_domain(self):
        b, a2, c = _b(self.a), self.a ** 2, self.c
        return [(-b / (2 * a2) * math.log(c * b), -b / (2 * a2) * math.log(c))]


@dataclass(frozen=True)
class T52gen(CylinderFamily):
    """x = f(y) + a z, K0 not in {0, 1}.

    f'^2 = (tau (b K0 - 1) - b)/(1 - (K0 - 1) tau),  tau = -c exp(-2a^2 f/b).

    c > 0 covers K0 < 1; the K0 > 1/b solutions need c < 0, which is allowed.
    """

    a: float = 1.0
    K0: float = 0.5
    c: float = 1.0
    sign: str = "+"
    branch: str | None = None
    tag: ClassVar[str] = "T52gen"
    surface_kind: ClassVar[str] = "II"
    identity: ClassVar[str] = "printed"

    def _validate(self):
        _need(self.a != 0, "T52gen requires a != 0")
        _need(self.K0 not in (0, 1), "T52gen requires K0 not in {0, 1}")
        _need(self.c != 0, "T52gen requires c != 0")
        _need(self.branch in (None, "low", "high"), f"unknown branch {self.branch!r}")
        _sign_of(self.sign)

    def integrand(self, t):
        b = _b(self.a)
        tau = -self.c * jets.exp(-2.0 * self.a ** 2 * t / b)
        return (tau * (b * self.K0 - 1.0) - b) / (1.0 - (self.K0 - 1.0) * tau)

    def mobius(self):
        b, k, c = _b(self.a), self.K0, self.c
        return Mobius(-b, -c * (b * k - 1.0), 1.0, c * (k - 1.0), -2.0 * self.a ** 2 / b)

    def printed_domain(self):
        b, a2, c, k = _b(self.a), self.a ** 2, self.c, self.K0
        s = b / (2 * a2)

        def lg(x):
            return math.log(x) if x > 0 else math.nan

        if k <= 1.0 / b:
            return [(s * lg(c * (1.0 - k)), math.inf)]
        if k < 1:
            lam = min(lg(c * (k - 1.0 / b)), lg(c * (1.0 - k)))
            mu = max(lg(c * (k - 1.0 / b)), lg(c * (1.0 - k)))
            return [(-math.inf, s * lam), (s * mu, math.inf)]
        return [(s * lg(c * (k - 1.0 / b)), math.inf)]


@dataclass(frozen=True)
class T53K1(CylinderFamily):
    """x = a y + g(z), K0 = 1: g'^2 = b c/(exp(2g) - c)."""

    a: float = 0.0
    c: float = 1.0
    sign: str = "+"
    tag: ClassVar[str] = "T53K1"
    surface_kind: ClassVar[str] = "II"
    curved: ClassVar[str] = "g"
    identity: ClassVar[str] = "printed"

    @property
    def K0(self):
        return 1.0

    def _validate(self):
        _need(self.c > 0, "T53K1 requires c > 0")
        _sign_of(self.sign)

    def integrand(self, t):
        return _b(self.a) * self.c / (jets.exp(2.0 * t) - self.c)

    def mobius(self):
        return Mobius(_b(self.a) * self.c, 0.0, -self.c, 1.0, 2.0)

    def printed_domain(self):
        return [(math.log(math.sqrt(self.c)), math.inf)]


@dataclass(frozen=True)
class T53gen(CylinderFamily):
    """x = a y + g(z), K0 not in {0, 1}: g'^2 = -b (c + (K0-1) E)/(c + K0 E), E = exp(2g)."""

    a: float = 0.0
    K0: float = 0.5
    c: float = 1.0
    sign: str = "+"
    tag: ClassVar[str] = "T53gen"
    surface_kind: ClassVar[str] = "II"
    curved: ClassVar[str] = "g"
    identity: ClassVar[str] = "printed"

    def _validate(self):
        _need(self.K0 not in (0, 1), "T53gen requires K0 not in {0, 1}")
        _need(self.K0 < 1, "T53gen requires K0 < 1 (the first integral must be positive)")
        _need(self.c > 0, "T53gen requires c > 0")
        _sign_of(self.sign)

    def integrand(self, t):
        e = jets.exp(2.0 * t)
        return -_b(self.a) * (self.c + (self.K0 - 1.0) * e) / (self.c + self.K0 * e)

    def mobius(self):
        b = _b(self.a)
        return Mobius(-b * self.c, -b * (self.K0 - 1.0), self.c, self.K0, 2.0)

    def printed_domain(self):
        lo = math.log(self.c / (1.0 - self.K0))
        if self.K0 < 0:
            return [(lo, math.log(self.c / -self.K0))]
        return [(lo, math.inf)]


@dataclass(frozen=True)
class T52corr(CylinderFamily):
    """x = f(y) + a z with constant curvature K0/2 under the true type II identity.

    f'^2 = (c E (b K0 - 1) - b)/(1 - c E (K0 - 1)),  E = exp(2 a f / b),  a != 0.
    (For a = 0 every cylinder x = f(y) has K = 1/2.)
    """

    a: float = 1.0
    K0: float = 0.5
    c: float = 1.0
    sign: str = "+"
    branch: str | None = None
    tag: ClassVar[str] = "T52corr"
    surface_kind: ClassVar[str] = "II"

    def _validate(self):
        _need(self.a != 0, "T52corr requires a != 0")
        _need(self.c != 0, "T52corr requires c != 0")
        _sign_of(self.sign)

    def integrand(self, t):
        b = _b(self.a)
        ce = self.c * jets.exp(2.0 * self.a * t / b)
        return (ce * (b * self.K0 - 1.0) - b) / (1.0 - ce * (self.K0 - 1.0))

    def mobius(self):
        b, k, c = _b(self.a), self.K0, self.c
        return Mobius(-b, c * (b * k - 1.0), 1.0, -c * (k - 1.0), 2.0 * self.a / b)


@dataclass(frozen=True)
class T53corr(CylinderFamily):
    """x = a y + g(z) with constant curvature K0/2 under the true type II identity.

    g'(z)^2 = b c/(K0 c - exp(2z)) - b; the slope is explicit in z, so the grid
    runs over z and g is the quadrature of the slope.
    """

    a: float = 0.0
    K0: float = 0.5
    c: float = 1.0
    sign: str = "+"
    branch: str | None = None
    tag: ClassVar[str] = "T53corr"
    surface_kind: ClassVar[str] = "II"
    curved: ClassVar[str] = "g"
    grid_on: ClassVar[str] = "parameter"

    def _validate(self):
        _need(self.c != 0, "T53corr requires c != 0")
        _sign_of(self.sign)

    def integrand(self, t):
        b = _b(self.a)
        return b * self.c / (self.K0 * self.c - jets.exp(2.0 * t)) - b

    def mobius(self):
        b, k, c = _b(self.a), self.K0, self.c
        return Mobius(b * c * (1.0 - k), b, k * c, -1.0, 2.0)


FAMILY_TAGS = {
    cls.tag: cls
    for cls in (Plane, GrimReaper, T51, T52a0, T52K0zero, T52gen, T53K1, T53gen, T52corr, T53corr)
}


def family_from_json(obj: dict) -> CylinderFamily:
    """Build a family from {tag, a, K0?, c?, d?, sign?, branch?, kind?}."""
    obj = dict(obj)
    tag = obj.pop("tag", None)
    cls = FAMILY_TAGS.get(tag)
    if cls is None:
        raise ConstraintError(f"unknown family tag {tag!r}")
    if cls is T52a0:
        a = obj.pop("a", 0.0)
        _need(a == 0, "T52a0 has a = 0")
    allowed = {k for k in cls.__dataclass_fields__ if not k.startswith("_")}
    unknown = set(obj) - allowed
    _need(not unknown, f"{tag}: unexpected fields {sorted(unknown)}")
    for k, v in obj.items():
        if k not in ("sign", "branch", "kind"):
            _need(isinstance(v, (int, float)) and not isinstance(v, bool),
                  f"{tag}: field {k!r} must be a number")
            obj[k] = float(v)
    return cls(**obj)


def maximal_domain(fam: CylinderFamily) -> Interval:
    return fam.domain


def _as_float(x) -> float:
    return x.v0 if isinstance(x, Jet3) else float(x)


def first_integral(fam: CylinderFamily, t: float) -> float:
    """Squared slope prescribed by the family's first integral at t."""
    dom = fam.domain
    if t == dom.lower or t == dom.upper:
        raise SingularEndpointError(f"{fam.tag}: t = {t} is an endpoint of {dom.as_tuple()}")
    if t not in dom:
        raise DomainError(f"{fam.tag}: t = {t} outside the maximal domain {dom.as_tuple()}")
    p = _as_float(fam.integrand(float(t)))
    if not math.isfinite(p):
        raise NonFiniteError(f"{fam.tag}: first integral not finite at {t}")
    return p


# quadrature

@dataclass(frozen=True)
class ProfileSample:
    param: float
    value: float
    slope: float


class _Integrator:
    """Integrates 1/sqrt(P) over values (value grid) or sqrt(P) over parameters."""

    epsabs = 1e-13
    epsrel = 1e-12

    def __init__(self, fam: CylinderFamily):
        self.fam = fam
        dom = fam.domain
        singular = "zero" if fam.grid_on == "value" else "pole"
        self.sing = None
        if dom.lower_kind == FINITE and dom.lower_limit == singular:
            self.sing = (dom.lower, -1.0)
        elif dom.upper_kind == FINITE and dom.upper_limit == singular:
            self.sing = (dom.upper, 1.0)

    def density(self, t: float) -> float:
        p = _as_float(self.fam.integrand(t))
        if not p > 0 or not math.isfinite(p):
            raise QuadratureError(f"{self.fam.tag}: integrand invalid at t = {t} (P = {p})")
        return 1.0 / math.sqrt(p) if self.fam.grid_on == "value" else math.sqrt(p)

    def integral(self, a: float, b: float) -> float:
        if a == b:
            return 0.0
        if a > b:
            return -self.integral(b, a)
        if self.sing is None:
            fn, lo, hi, scale = self.density, a, b, 1.0
        else:
            e, side = self.sing
            # t = e + side * s^2 removes the inverse square-root singularity at e
            if side > 0:
                lo, hi, scale = math.sqrt(e - b), math.sqrt(e - a), 1.0
            else:
                lo, hi, scale = math.sqrt(a - e), math.sqrt(b - e), 1.0

            def fn(s, e=e, side=side):
                return 2.0 * s * self.density(e - s * s if side > 0 else e + s * s)

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            val, err = integrate.quad(fn, lo, hi, epsabs=self.epsabs, epsrel=self.epsrel, limit=200)
        if not math.isfinite(val):
            raise QuadratureError(f"{self.fam.tag}: non-finite quadrature on [{a}, {b}]")
        if err > 1e-10 * max(1.0, abs(val)):
            raise QuadratureError(
                f"{self.fam.tag}: quadrature error {err:.2e} on [{a}, {b}] too close to a singular end")
        return scale * val


def _check_grid(fam, t_grid):
    t_grid = [float(t) for t in t_grid]
    if not t_grid:
        raise ValueError("empty grid")
    if any(b <= a for a, b in zip(t_grid[:-1], t_grid[1:])):
        raise ValueError("grid must be strictly increasing")
    dom = fam.domain
    for t in (t_grid[0], t_grid[-1]):
        if t not in dom:
            raise DomainError(f"{fam.tag}: grid point {t} not strictly inside {dom.as_tuple()}")
    return t_grid


@dataclass
class ProfileCurve:
    samples: list[ProfileSample]
    family: CylinderFamily
    domain: Interval
    grid: list[float] = field(default_factory=list)

    @property
    def params(self) -> np.ndarray:
        return np.array([s.param for s in self.samples])

    @property
    def values(self) -> np.ndarray:
        return np.array([s.value for s in self.samples])

    @property
    def slopes(self) -> np.ndarray:
        return np.array([s.slope for s in self.samples])

    def profile(self):
        """The curved profile as an object evaluable on floats and jets."""
        expr = self.family.profile_expr()
        return expr if expr is not None else LiftedProfile(self)

    def lift(self, linear_range=(-1.0, 1.0)) -> TranslationSurface:
        fam = self.family
        ps = self.params
        span = (float(ps.min()), float(ps.max()))
        if span[0] == span[1]:
            span = (span[0] - 1e-9, span[1] + 1e-9)
        prof, lin = self.profile(), fam.linear_expr()
        if fam.curved == "f":
            return TranslationSurface(fam.surface_kind, prof, lin, (span, linear_range))
        return TranslationSurface(fam.surface_kind, lin, prof, (linear_range, span))

    def surface_point(self, i: int, linear_value: float = 0.0) -> tuple[float, float]:
        p = self.samples[i].param
        return (p, linear_value) if self.family.curved == "f" else (linear_value, p)


def quadrature_profile(fam: CylinderFamily, t_grid) -> ProfileCurve:
    """Profile samples over a grid strictly inside the maximal domain.

    Value-grid families: param(t) = sign * int_{t0}^{t} P^{-1/2}, so the first
    grid point sits at parameter 0.  Parameter-grid families with a first
    integral: value(t) = sign * int_{t0}^{t} P^{1/2}, anchored at value 0.
    Explicit families are sampled directly.
    """
    t_grid = _check_grid(fam, t_grid)
    sigma = fam.sigma
    samples = []
    expr = fam.profile_expr()
    if expr is not None:
        for t in t_grid:
            j = eval_jet(expr, t)
            samples.append(ProfileSample(t, j.v0, j.v1))
        return ProfileCurve(samples, fam, fam.domain, t_grid)
    integ = _Integrator(fam)
    acc = 0.0
    prev = t_grid[0]
    for t in t_grid:
        acc += integ.integral(prev, t)
        prev = t
        slope = sigma * math.sqrt(first_integral(fam, t))
        if fam.grid_on == "value":
            samples.append(ProfileSample(sigma * acc, t, slope))
        else:
            samples.append(ProfileSample(t, sigma * acc, slope))
    return ProfileCurve(samples, fam, fam.domain, t_grid)


class LiftedProfile:
    """A quadrature profile as a function of its own parameter.

    ``evaluate`` accepts floats and jets.  Derivatives come from the first
    integral: for value-grid families f' = sign sqrt(P(f)), f'' = P'(f)/2 and
    f''' = P''(f) f'/2; for parameter-grid families f' = sign sqrt(P(x)).
    """

    def __init__(self, curve: ProfileCurve):
        self.curve = curve
        self.fam = curve.family
        self.sigma = self.fam.sigma
        self._integ = _Integrator(self.fam)
        pairs = sorted((s.param, s.value) for s in curve.samples)
        self._params = [p for p, _ in pairs]
        self._values = [v for _, v in pairs]
        self._exact = dict(pairs)

    def _nearest(self, x):
        i = bisect.bisect_left(self._params, x)
        cands = [j for j in (i - 1, i) if 0 <= j < len(self._params)]
        return min(cands, key=lambda j: abs(self._params[j] - x))

    def _value_at(self, x: float) -> float:
        """Profile value at parameter x (inverting the quadrature for value grids)."""
        if x in self._exact:
            return self._exact[x]
        i = self._nearest(x)
        x0, t0 = self._params[i], self._values[i]
        if self.fam.grid_on == "parameter":
            if x not in self.fam.domain:
                raise DomainError(f"parameter {x} outside {self.fam.domain.as_tuple()}")
            return t0 + self.sigma * self._integ.integral(x0, x)
        dom = self.fam.domain
        t = t0
        for _ in range(60):
            r = x0 + self.sigma * self._integ.integral(t0, t) - x
            if abs(r) <= 2e-16 * max(1.0, abs(x)):
                break
            step = -r * self.sigma * math.sqrt(_as_float(self.fam.integrand(t)))
            t_new = t + step
            while t_new not in dom:
                step *= 0.5
                t_new = t + step
                if abs(step) < 1e-300:
                    raise DomainError(f"parameter {x} maps outside the maximal domain")
            if t_new == t:
                break
            t = t_new
        return t

    def tower(self, x: float) -> tuple[float, float, float, float]:
        if self.fam.grid_on == "parameter":
            value = self._value_at(x)
            slope = jets.sqrt(self.fam.integrand(Jet3.variable(x))) * self.sigma
            return (value, slope.v0, slope.v1, slope.v2)
        t = self._value_at(x)
        p = self.fam.integrand(Jet3.variable(t))
        f1 = self.sigma * math.sqrt(p.v0)
        return (t, f1, 0.5 * p.v1, 0.5 * p.v2 * f1)

    def evaluate(self, x):
        if isinstance(x, Jet3):
            return jets.compose(self.tower(x.v0), x)
        return self.tower(float(x))[0]


# closed forms

def grim_reaper(kind: str, a: float, c: float = 0.0, d: float = 0.0) -> Expr:
    """Grim reaper profile as an expression.

    T51:  f(x) = b log(cos((x + c)/sqrt(b))) + d
    T52b: f(y) = d + (b/a^2) log(cos((a^2/sqrt(b)) y + c))
    T53:  g(z) = -log(cos(sqrt(b) z + c)) + d
    with b = 1 + a^2.
    """
    b = _b(a)

    def shifted(inner, const):
        return inner if const == 0 else Add(inner, num(const))

    def scaled(coef, e):
        return e if coef == 1 else Mul(num(coef), e)

    if kind == "T51":
        arg = shifted(Var("x"), c)
        if b != 1:
            arg = Div(arg, num(math.sqrt(b)))
        return shifted(scaled(b, Call("log", Call("cos", arg))), d)
    if kind == "T52b":
        if a == 0:
            raise ConstraintError("T52b grim reaper requires a != 0")
        arg = shifted(scaled(a * a / math.sqrt(b), Var("y")), c)
        return shifted(scaled(b / (a * a), Call("log", Call("cos", arg))), d)
    if kind == "T53":
        arg = shifted(scaled(math.sqrt(b), Var("z")), c)
        return shifted(scaled(-1.0, Call("log", Call("cos", arg))), d)
    raise ConstraintError(f"unknown grim reaper kind {kind!r}")


def _d(j):
    """(v1, v2) of a jet or a derivative tuple."""
    if isinstance(j, Jet3):
        return j.v1, j.v2
    return float(j[1]), float(j[2])


def ode_residual(kind: str, *, K0: float, a: float = 0.0, f=None, g=None) -> float:
    """Left minus right side of a profile equation, at jets of the profiles.

    Relation to the closed-form curvature K (for the same f, g):

    * ``T51ode``  (z = f(x) + a y):   residual = -2w^2 (K - K0/2)
    * ``MasterI``:                    residual = -2w^2 (K - K0/2)
    * ``MasterII``:                   residual = -2w^2 (K' - K0/2), K' the printed type II variant
    * ``MasterIIcorrected``:          residual = -2w^2 (K - K0/2)
    * ``T52ode``  (x = f(y) + a z):   residual = -2w^2 (K' - K0/2)/(1 + f'^2)
    * ``T53ode``  (x = a y + g(z)):   residual = -4w^2 (K' - K0/2)/(1 + a^2)
    """
    b = _b(a)
    if kind == "T51ode":
        f1, f2 = _d(f)
        w = b + f1 * f1
        return w * w * (K0 - 1.0) + w + b * f2
    if kind == "T52ode":
        f1, f2 = _d(f)
        q = 1.0 + f1 * f1
        return (b + f1 * f1) * (K0 - 1.0) + a * a * K0 + K0 * a ** 4 / q + b * f2 / q
    if kind == "T53ode":
        g1, g2 = _d(g)
        Q = g1 * g1
        return 2.0 * (b + Q) * (K0 - 1.0) + 2.0 * K0 * Q * (1.0 + Q / b) + 2.0 * g2
    if kind in ("MasterI", "MasterII", "MasterIIcorrected"):
        f1, f2 = _d(f)
        g1, g2 = _d(g)
        w = 1.0 + f1 * f1 + g1 * g1
        if kind == "MasterI":
            rhs = w * (w - 1.0) + f2 * (g2 - g1 * g1 - 1.0) + g2 * (f2 - f1 * f1 - 1.0)
        elif kind == "MasterII":
            rhs = w * (1.0 + f1 * f1) + f2 * (g2 - g1 * g1 - 1.0) + g2 * (f2 - f1 * f1 - 1.0)
        else:
            rhs = (w * (1.0 + f1 * f1) + f2 * (g2 + g1 * (1.0 + g1 * g1))
                   + g2 * (f2 + g1 * (1.0 + f1 * f1)))
        return w * w * K0 - rhs
    raise ValueError(f"unknown equation {kind!r}")


def k1_obstruction(c3: float, c4: float, c5: float, c6: float):
    """Coefficients A0..A3 of the K0 = 1 obstruction polynomial A0 + A1 X + A2 Y + A3 XY."""
    if 0 in (c3, c4, c5, c6):
        raise ValueError("k1_obstruction needs nonzero inputs")
    A0 = 1 + c3 * c5 + c4 * c6 - 2 * c3 * c4 * c5 * c6
    A1 = 1 + c5 + c4 * c6 - 2 * c4 * c5 * c6
    A2 = 1 + c3 * c5 + c6 - 2 * c3 * c5 * c6
    A3 = c5 + c6 - 2 * c5 * c6
    return A0, A1, A2, A3


def k1_obstruction_sampled(c3: float, c4: float, c5: float, c6: float):
    """The same coefficients read off by sampling the polynomial at the unit square.

    With X = f'^2, Y = g'^2, f'' = c5 (c3 + X), g'' = c6 (c4 + Y), the K0 = 1
    master equation reduces to w + (1+Y) f'' + (1+X) g'' - 2 f'' g'' = 0.
    """
    def q(X, Y):
        fpp = c5 * (c3 + X)
        gpp = c6 * (c4 + Y)
        return (1 + X + Y) + (1 + Y) * fpp + (1 + X) * gpp - 2 * fpp * gpp

    q00, q10, q01, q11 = q(0, 0), q(1, 0), q(0, 1), q(1, 1)
    return q00, q10 - q00, q01 - q00, q11 - q10 - q01 + q00


# classification

@dataclass
class ClassificationReport:
    n: int
    spreads: list[float]
    threshold: float
    candidates: list[dict]
    controls: dict[str, float]

    @property
    def min_spread(self) -> float:
        return min(self.spreads, default=math.inf)

    @property
    def passed(self) -> bool:
        return not self.candidates


def _random_curved_poly(rng, name: str, radius: float) -> Expr:
    """Quartic whose second derivative stays at least 0.3 away from zero on [-radius, radius]."""
    alpha = rng.uniform(0.5, 1.0) * rng.choice([-1.0, 1.0])
    budget = abs(alpha) - 0.3
    beta = rng.uniform(-1, 1) * budget / (2 * radius)
    gamma = rng.uniform(-1, 1) * budget / (2 * radius * radius)
    lin = rng.uniform(-1, 1)
    x = Var(name)
    # f = lin x + alpha x^2/2 + beta x^3/6 + gamma x^4/12, so f'' = alpha + beta x + gamma x^2
    terms = [Mul(num(lin), x), Mul(num(alpha / 2), Pow(x, Num(2.0))),
             Mul(num(beta / 6), Pow(x, Num(3.0))), Mul(num(gamma / 12), Pow(x, Num(4.0)))]
    out = terms[0]
    for t in terms[1:]:
        out = Add(out, t)
    return out


def _spread(s: TranslationSurface, grid, curvature=sectional_curvature_closed) -> float:
    ks = [curvature(s, u, v) for u, v in grid]
    return max(ks) - min(ks)


def classification_property_test(seed: int, n: int, threshold: float = 1e-3,
                                 grid_n: int = 5, radius: float = 1.0) -> ClassificationReport:
    """Non-cylindrical translation surfaces must have non-constant K.

    Draws ``n`` surfaces (alternating type I and II) with f'' and g'' bounded
    away from zero on the grid and records the spread max K - min K on a
    ``grid_n`` x ``grid_n`` grid.  Spreads at or below ``threshold`` are
    reported as counterexample candidates.  Control cases (a grim reaper
    cylinder, f = x^2, g = y^2, and the Scherk-type surface) are included.
    """
    if n < 1:
        raise ValueError("n must be positive")
    rng = np.random.default_rng(seed)
    ticks = np.linspace(-radius, radius, grid_n)
    grid = [(float(u), float(v)) for u in ticks for v in ticks]
    spreads, cands = [], []
    for i in range(n):
        kind = "I" if i % 2 == 0 else "II"
        names = ("x", "y") if kind == "I" else ("y", "z")
        f = _random_curved_poly(rng, names[0], radius)
        g = _random_curved_poly(rng, names[1], radius)
        s = TranslationSurface(kind, f, g)
        sp = _spread(s, grid)
        spreads.append(sp)
        if not sp > threshold:
            cands.append({"kind": kind, "f": str(f), "g": str(g), "spread": sp})
    controls = {}
    gr = TranslationSurface("I", grim_reaper("T51", 0.0), "0", ((-1.2, 1.2), (-1, 1)))
    small = [(0.5 * u, v) for u, v in grid]
    controls["grim_reaper_cylinder"] = _spread(gr, small)
    controls["x^2+y^2"] = _spread(TranslationSurface("I", "x^2", "y^2"), grid)
    scherk = TranslationSurface("I", "-log(cos(x))", "log(cos(y))")
    controls["scherk"] = _spread(scherk, small)
    return ClassificationReport(n, spreads, threshold, cands, controls)


# random valid families

def random_family(tag: str, rng, max_tries: int = 1000) -> CylinderFamily:
    """Draw valid parameters for ``tag`` by rejection sampling."""
    cls = FAMILY_TAGS[tag]
    for _ in range(max_tries):
        a = float(rng.uniform(-2, 2))
        K0 = float(rng.uniform(-3, 3))
        c = float(rng.uniform(0.2, 5))
        signed_c = c * float(rng.choice([-1.0, 1.0]))
        sign = "+" if rng.random() < 0.5 else "-"
        if cls is Plane:
            kw = dict(kind=str(rng.choice(["I", "II"])), a=a, c=float(rng.uniform(-2, 2)))
        elif cls is GrimReaper:
            kw = dict(kind=str(rng.choice(["T51", "T52b", "T53"])), a=a,
                      c=float(rng.uniform(-1, 1)), d=float(rng.uniform(-1, 1)))
        elif cls is T51:
            kw = dict(a=a, K0=float(rng.uniform(0.05, 3)), c=c, sign=sign)
        elif cls is T52a0:
            kw = dict(K0=K0, c=float(rng.uniform(-3, 3)), sign=sign)
        elif cls in (T52K0zero, T53K1):
            kw = dict(a=a, c=c, sign=sign)
        elif cls is T53gen:
            kw = dict(a=a, K0=float(rng.uniform(-3, 1)), c=c, sign=sign)
        else:
            kw = dict(a=a, K0=K0, c=signed_c, sign=sign)
        try:
            return cls(**kw)
        except ConstraintError as exc:
            if "branch" not in str(exc):
                continue
        try:
            return cls(**kw, branch=str(rng.choice(["low", "high"])))
        except ConstraintError:
            continue
    raise ConstraintError(f"could not draw valid parameters for {tag}")


# closed-form examples and printed-domain comparison

def _ex01(f):
    e2 = math.exp(2 * f)
    s = math.sqrt(-math.expm1(4 * f))
    # atanh(s) = log(1 + s) - 2f when 1 - s^2 = exp(4f)
    return 0.5 * (math.asin(e2) - (math.log1p(s) - 2 * f))


def _ex02(f):
    e2 = math.exp(2 * f)
    return (math.asin(math.sqrt(e2 / 3 - 1))
            - math.atan(math.sqrt((2 * e2 - 6) / (6 - e2))) / math.sqrt(2))


def _ex11(f):
    return (math.sqrt(1 - 2 * f) * math.sqrt(4 * f - 1) / (2 * math.sqrt(2))
            - 0.25 * math.asin(math.sqrt(2 - 4 * f)))


def _ex12(f):
    return (-math.sqrt(1 - 2 * f) * math.sqrt(f) / math.sqrt(2)
            + 0.5 * math.asin(math.sqrt(2) * math.sqrt(f)))


# name -> (family, closed form of the '+' branch, printed interval of the profile value)
EXAMPLES = {
    "int-cyl-01": (T51(a=0.0, K0=0.5, c=2.0), _ex01, (-math.inf, 0.0)),
    "int-cyl-02": (T51(a=0.0, K0=2.0, c=3.0), _ex02, (math.log(math.sqrt(3)), math.log(math.sqrt(6)))),
    "int-cyl-11": (T52a0(K0=-1.0, c=-2.0), _ex11, (0.25, 0.5)),
    "int-cyl-12": (T52a0(K0=2.0, c=0.0), _ex12, (0.0, 0.5)),
}


def example_curve(name: str, n: int = 101, lower: float | None = None):
    """(profile values, closed-form parameter) on the interior of an example's interval."""
    fam, fn, (lo, hi) = EXAMPLES[name]
    if lower is not None:
        lo = lower
    elif math.isinf(lo):
        lo = hi - 3.0
    margin = 0.05 * (hi - lo)
    ts = np.linspace(lo + margin, hi - margin, n)
    return ts, np.array([fn(float(t)) for t in ts])


def domain_discrepancy(fam: CylinderFamily) -> dict:
    """Computed maximal domain against the printed interval(s), if any."""
    printed = fam.printed_domain()
    computed = fam.domain.as_tuple()
    out = {"tag": fam.tag, "computed": computed, "printed": printed}
    if printed is None:
        out["match"] = None
        return out

    def close(x, y):
        return (math.isinf(x) and x == y) or (math.isfinite(x) and math.isfinite(y)
                                              and abs(x - y) <= 1e-9 * max(1.0, abs(x)))

    out["match"] = len(printed) == 1 and all(close(x, y) for x, y in zip(computed, printed[0]))
    return out
