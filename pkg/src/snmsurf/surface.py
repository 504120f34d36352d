"""Translation surfaces z = f(x) + g(y) (type I) and x = f(y) + g(z) (type II).

Two independent routes to the sectional curvature of the induced connection:

* ``sectional_curvature_closed``: the closed-form identities in f', f'', g', g''.
* ``sectional_curvature_gauss``: the Gauss equation assembled from the ambient
  curvature tensor on the frame fields, the second fundamental form and the
  normal part of dz.  It shares no curvature formula with the closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .ambient import DZ, AmbientField, cov_deriv, curvature
from .expr import Expr, eval_jet, parse_expression
from .jets import DomainError, Jet3, JetError, NonFiniteError, compose

__all__ = [
    "TranslationSurface",
    "FundamentalData",
    "CurvatureReport",
    "PointRecord",
    "profile_jet",
    "profile_slope",
    "fundamental_data",
    "sectional_curvature_closed",
    "sectional_curvature_printed",
    "sectional_curvature_gauss",
    "ambient_curvature_terms",
    "frame_fields",
    "second_form_equality_check",
    "grid_points",
    "curvature_grid",
]

_KINDS = {"I": "I", "TypeI": "I", "type1": "I", "1": "I",
          "II": "II", "TypeII": "II", "type2": "II", "2": "II"}
_UNBOUNDED = ((-math.inf, math.inf), (-math.inf, math.inf))


def _as_profile(p):
    if isinstance(p, str):
        return parse_expression(p)
    if not hasattr(p, "evaluate"):
        raise TypeError(f"profile must be an expression or have .evaluate(), got {type(p)}")
    return p


@dataclass(frozen=True)
class TranslationSurface:
    """Type I: psi(x, y) = (x, y, f(x) + g(y)).  Type II: psi(y, z) = (f(y) + g(z), y, z).

    ``f`` and ``g`` are expressions (or strings to parse) or any object whose
    ``evaluate`` accepts floats and jets.
    """

    kind: str
    f: Expr
    g: Expr
    domain: tuple = _UNBOUNDED

    def __post_init__(self):
        kind = _KINDS.get(str(self.kind))
        if kind is None:
            raise ValueError(f"unknown surface kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "f", _as_profile(self.f))
        object.__setattr__(self, "g", _as_profile(self.g))
        (u0, u1), (v0, v1) = self.domain
        if not (u0 < u1 and v0 < v1):
            raise ValueError(f"empty parameter rectangle {self.domain}")
        object.__setattr__(self, "domain", ((float(u0), float(u1)), (float(v0), float(v1))))

    @property
    def parameter_names(self) -> tuple[str, str]:
        return ("x", "y") if self.kind == "I" else ("y", "z")

    def contains(self, u, v) -> bool:
        (u0, u1), (v0, v1) = self.domain
        return u0 <= u <= u1 and v0 <= v <= v1

    def check_domain(self, u, v):
        if not self.contains(u, v):
            raise DomainError(f"point ({u}, {v}) outside parameter domain {self.domain}")

    def point(self, u, v):
        """psi(u, v); generic over floats and jets."""
        h = self.f.evaluate(u) + self.g.evaluate(v)
        if self.kind == "I":
            return (u, v, h)
        return (h, u, v)

    def swapped(self) -> "TranslationSurface":
        (u0, u1), (v0, v1) = self.domain
        return TranslationSurface(self.kind, self.g, self.f, ((v0, v1), (u0, u1)))


def profile_jet(prof, x: float) -> Jet3:
    return eval_jet(prof, x)


def profile_slope(prof, x):
    """f'(x) for a float x, or the jet of f' along a jet argument."""
    if isinstance(x, Jet3):
        tower = eval_jet(prof, x.v0).derivative()
        return compose(tower.as_tuple(), x)
    return eval_jet(prof, x).v1


@dataclass(frozen=True)
class FundamentalData:
    E: float
    F: float
    G: float
    w: float
    xi: np.ndarray
    h11: float
    h12: float
    h22: float
    e1: np.ndarray
    e2: np.ndarray


def _derivs(s: TranslationSurface, u, v):
    s.check_domain(u, v)
    jf = profile_jet(s.f, u)
    jg = profile_jet(s.g, v)
    return jf, jg


def fundamental_data(s: TranslationSurface, u: float, v: float) -> FundamentalData:
    jf, jg = _derivs(s, u, v)
    f1, f2, g1, g2 = jf.v1, jf.v2, jg.v1, jg.v2
    w = 1.0 + f1 * f1 + g1 * g1
    if not math.isfinite(w):
        raise NonFiniteError(f"w overflows at ({u}, {v})")
    r = math.sqrt(w)
    if s.kind == "I":
        e1 = np.array([1.0, 0.0, f1])
        e2 = np.array([0.0, 1.0, g1])
        xi = np.array([-f1, -g1, 1.0]) / r
    else:
        e1 = np.array([f1, 1.0, 0.0])
        e2 = np.array([g1, 0.0, 1.0])
        xi = np.array([1.0, -f1, -g1]) / r
    return FundamentalData(
        E=1.0 + f1 * f1, F=f1 * g1, G=1.0 + g1 * g1, w=w, xi=xi,
        h11=f2 / r, h12=0.0, h22=g2 / r, e1=e1, e2=e2,
    )


def _closed_from_derivs(kind, f1, f2, g1, g2) -> float:
    w = 1.0 + f1 * f1 + g1 * g1
    if kind == "I":
        num = w * (f1 * f1 + g1 * g1) + f2 * (g2 - g1 * g1 - 1.0) + g2 * (f2 - f1 * f1 - 1.0)
    else:
        num = (w * (1.0 + f1 * f1) + f2 * (g2 + g1 * (1.0 + g1 * g1))
               + g2 * (f2 + g1 * (1.0 + f1 * f1)))
    return num / (2.0 * w * w)


def sectional_curvature_closed(s: TranslationSurface, u: float, v: float) -> float:
    """Closed-form K at (u, v).

    Type I:  2w^2 K = w(f'^2+g'^2) + f''(g''-g'^2-1) + g''(f''-f'^2-1)
    Type II: 2w^2 K = w(1+f'^2) + f''(g''+g'(1+g'^2)) + g''(f''+g'(1+f'^2))

    In type II the normal component of dz is -g'/sqrt(w), which is where the
    g' terms come from.
    """
    jf, jg = _derivs(s, u, v)
    return _closed_from_derivs(s.kind, jf.v1, jf.v2, jg.v1, jg.v2)


def sectional_curvature_printed(s: TranslationSurface, u: float, v: float) -> float:
    """Variant whose type II identity takes <dz, xi> = 1/sqrt(w):

        2w^2 K = w(1+f'^2) + f''(g''-g'^2-1) + g''(f''-f'^2-1)

    It is not the curvature of the surface; the cylinder families of the type II
    theorems are built from it, so it is kept to check them for self-consistency.
    Type I is identical to ``sectional_curvature_closed``.
    """
    jf, jg = _derivs(s, u, v)
    f1, f2, g1, g2 = jf.v1, jf.v2, jg.v1, jg.v2
    if s.kind == "I":
        return _closed_from_derivs("I", f1, f2, g1, g2)
    w = 1.0 + f1 * f1 + g1 * g1
    num = w * (1.0 + f1 * f1) + f2 * (g2 - g1 * g1 - 1.0) + g2 * (f2 - f1 * f1 - 1.0)
    return num / (2.0 * w * w)


# Gauss-equation route

def frame_fields(s: TranslationSurface) -> tuple[AmbientField, AmbientField]:
    """Coordinate frame e1, e2 extended off the surface as ambient fields.

    They depend only on the surface parameters, which are ambient coordinates
    for both types, so their jets along ambient lines are exact.
    """
    f, g = s.f, s.g
    if s.kind == "I":
        e1 = AmbientField(lambda x, y, z: (1.0, 0.0, profile_slope(f, x)))
        e2 = AmbientField(lambda x, y, z: (0.0, 1.0, profile_slope(g, y)))
    else:
        e1 = AmbientField(lambda x, y, z: (profile_slope(f, y), 1.0, 0.0))
        e2 = AmbientField(lambda x, y, z: (profile_slope(g, z), 0.0, 1.0))
    return e1, e2


def _surface_point(s, u, v) -> np.ndarray:
    s.check_domain(u, v)
    return np.array([float(c.v0 if isinstance(c, Jet3) else c) for c in s.point(u, v)])


def ambient_curvature_terms(s: TranslationSurface, u: float, v: float) -> tuple[float, float]:
    """(<R~(e1,e2)e2, e1>, <R~(e2,e1)e1, e2>) at psi(u, v)."""
    e1, e2 = frame_fields(s)
    p = _surface_point(s, u, v)
    E1, E2 = e1(p), e2(p)
    return (float(curvature(e1, e2, e2, p) @ E1), float(curvature(e2, e1, e1, p) @ E2))


def _unit_normal(E1, E2) -> np.ndarray:
    n = np.cross(E1, E2)
    return n / np.linalg.norm(n)


def sectional_curvature_gauss(s: TranslationSurface, u: float, v: float) -> float:
    e1, e2 = frame_fields(s)
    p = _surface_point(s, u, v)
    E1, E2 = e1(p), e2(p)
    E, F, G = E1 @ E1, E1 @ E2, E2 @ E2
    xi = _unit_normal(E1, E2)
    w_perp = (DZ @ xi) * xi

    def h(X, Y):
        return (cov_deriv(X, Y, p) @ xi) * xi

    h11, h12, h21, h22 = h(e1, e1), h(e1, e2), h(e2, e1), h(e2, e2)
    rt1 = curvature(e1, e2, e2, p) @ E1
    rt2 = curvature(e2, e1, e1, p) @ E2
    # <R(X,Y)Z,U> = <R~(X,Y)Z,U> - <h(X,Z),h(Y,U)> + <h(Y,Z),h(X,U)>
    #               - <W_perp,h(Y,Z)><X,U> + <W_perp,h(X,Z)><Y,U>
    r1 = rt1 - h12 @ h21 + h22 @ h11 - (w_perp @ h22) * E + (w_perp @ h12) * F
    r2 = rt2 - h21 @ h12 + h11 @ h22 - (w_perp @ h11) * G + (w_perp @ h21) * F
    return float((r1 + r2) / (2.0 * (E * G - F * F)))


def second_form_equality_check(s: TranslationSurface, u: float, v: float) -> float:
    """max |h - h0| over the frame, where h uses nabla~ and h0 the flat derivative."""
    e1, e2 = frame_fields(s)
    p = _surface_point(s, u, v)
    xi = _unit_normal(e1(p), e2(p))
    worst = 0.0
    for X in (e1, e2):
        for Y in (e1, e2):
            h = cov_deriv(X, Y, p) @ xi
            h0 = Y.derivative(p, X(p)) @ xi
            worst = max(worst, abs(h - h0))
    return float(worst)


# reports and grids

@dataclass
class PointRecord:
    u: float
    v: float
    K_closed: float
    K_gauss: float | None = None
    K_oracle: float | None = None
    err_closed: float | None = None
    err_gauss: float | None = None
    rel_err_closed: float | None = None
    rel_err_gauss: float | None = None
    flag: str = "ok"
    passed: bool = True


@dataclass
class CurvatureReport:
    points: list[PointRecord] = field(default_factory=list)
    tolerance: float = 1e-6

    @property
    def max_err_closed(self) -> float:
        errs = [p.err_closed for p in self.points if p.err_closed is not None]
        return max(errs, default=0.0)

    @property
    def max_err_gauss(self) -> float:
        errs = [p.err_gauss for p in self.points if p.err_gauss is not None]
        return max(errs, default=0.0)

    @property
    def spread(self) -> float:
        ks = [p.K_closed for p in self.points if p.flag == "ok"]
        return max(ks) - min(ks) if ks else 0.0

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.points)


def grid_points(u0, v0, u1, v1, nu: int, nv: int) -> list[tuple[float, float]]:
    """Row-major (u outer, v inner) tensor grid including the corners."""
    us = np.linspace(u0, u1, nu) if nu > 1 else np.array([0.5 * (u0 + u1)])
    vs = np.linspace(v0, v1, nv) if nv > 1 else np.array([0.5 * (v0 + v1)])
    return [(float(u), float(v)) for u in us for v in vs]


def curvature_grid(s: TranslationSurface, points, *, gauss: bool = False) -> list[PointRecord]:
    """Closed-form K (optionally also Gauss-route K) on a list of points.

    Points where evaluation fails are kept and flagged instead of dropped.
    """
    out = []
    for u, v in points:
        try:
            k = sectional_curvature_closed(s, u, v)
            if not math.isfinite(k):
                raise NonFiniteError("non-finite curvature")
            rec = PointRecord(u, v, k)
            if gauss:
                rec.K_gauss = sectional_curvature_gauss(s, u, v)
                rec.err_gauss = abs(rec.K_gauss - k)
        except NonFiniteError:
            rec = PointRecord(u, v, math.nan, flag="overflow", passed=False)
        except (JetError, ArithmeticError, ValueError) as exc:
            rec = PointRecord(u, v, math.nan, flag=f"domain: {exc}", passed=False)
        out.append(rec)
    return out
