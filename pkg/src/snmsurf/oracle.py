"""Intrinsic curvature of the induced connection by finite differences.

Nothing here uses fundamental forms or curvature identities.  The tangent
frame comes from forward-mode jets of the parametrization psi(u, v); tangent
vector fields are coefficient functions over the parameters; the induced
connection is

    nabla_X Y = tangential part of (D_X Y + <dz, Y> X)

with D_X differentiated over the parameters by centered differences, and the
curvature is the commutator of two such derivatives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .jets import DomainError, Jet3, NonFiniteError
from .surface import (
    CurvatureReport,
    PointRecord,
    TranslationSurface,
    sectional_curvature_closed,
    sectional_curvature_gauss,
)

__all__ = [
    "OracleConfig",
    "StencilError",
    "TangentField",
    "induced_cov_deriv",
    "curvature_fd",
    "intrinsic_K_fd",
    "intrinsic_K_orthonormal",
    "compare",
    "E1",
    "E2",
]

TOLERANCES = {"strict": 1e-6, "loose": 1e-4}

TangentField = Callable[[float, float], "np.ndarray"]


@dataclass(frozen=True)
class OracleConfig:
    step: float = 1e-4
    stencil_order: int = 2
    tolerance: str = "strict"

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError("step must be positive")
        if self.stencil_order not in (2, 4):
            raise ValueError("stencil_order must be 2 or 4")
        if self.tolerance not in TOLERANCES:
            raise ValueError(f"tolerance must be one of {sorted(TOLERANCES)}")

    @property
    def tol(self) -> float:
        return TOLERANCES[self.tolerance]

    @property
    def reach(self) -> int:
        return self.stencil_order // 2


class StencilError(DomainError):
    pass


def E1(u, v):
    return np.array([1.0, 0.0])


def E2(u, v):
    return np.array([0.0, 1.0])


def _slot1(c) -> float:
    return c.v1 if isinstance(c, Jet3) else 0.0


class _Patch:
    """Memoized tangent frame of psi at parameter points."""

    def __init__(self, s: TranslationSurface, cfg: OracleConfig):
        self.s = s
        self.cfg = cfg
        self._frames = {}

    def frame(self, u: float, v: float) -> np.ndarray:
        key = (u, v)
        fr = self._frames.get(key)
        if fr is None:
            if not self.s.contains(u, v):
                raise StencilError(f"stencil point ({u}, {v}) leaves the parameter domain")
            du = self.s.point(Jet3.variable(u), v)
            dv = self.s.point(u, Jet3.variable(v))
            fr = np.array([[_slot1(c) for c in du], [_slot1(c) for c in dv]])
            if not np.all(np.isfinite(fr)):
                raise NonFiniteError(f"non-finite tangent frame at ({u}, {v})")
            self._frames[key] = fr
        return fr

    def ambient(self, Y: TangentField, u, v) -> np.ndarray:
        return np.asarray(Y(u, v), dtype=float) @ self.frame(u, v)

    def diff(self, fn, u, v, axis: int):
        """Centered difference of fn over parameter ``axis`` at (u, v)."""
        h = self.cfg.step

        def at(k):
            return fn(u + k * h, v) if axis == 0 else fn(u, v + k * h)

        if self.cfg.stencil_order == 2:
            return (at(1) - at(-1)) / (2.0 * h)
        return (at(-2) - 8.0 * at(-1) + 8.0 * at(1) - at(2)) / (12.0 * h)

    def directional(self, fn, X: TangentField, u, v):
        """X^i d_i fn at (u, v), skipping zero coefficients."""
        x = np.asarray(X(u, v), dtype=float)
        out = 0.0
        for i in (0, 1):
            if x[i] != 0.0:
                out = out + x[i] * self.diff(fn, u, v, i)
        return out

    def split(self, vec, u, v):
        """Tangent coefficients and normal remainder of an ambient vector."""
        fr = self.frame(u, v)
        gram = fr @ fr.T
        coeffs = np.linalg.solve(gram, fr @ vec)
        return coeffs, vec - coeffs @ fr

    def cov(self, X: TangentField, Y: TangentField, u, v):
        yamb = lambda a, b: self.ambient(Y, a, b)  # noqa: E731
        flat = self.directional(yamb, X, u, v)
        flat = np.zeros(3) + flat
        snm = flat + self.ambient(Y, u, v)[2] * self.ambient(X, u, v)
        return self.split(snm, u, v)

    def bracket(self, X: TangentField, Y: TangentField, u, v) -> np.ndarray:
        fy = lambda a, b: np.asarray(Y(a, b), dtype=float)  # noqa: E731
        fx = lambda a, b: np.asarray(X(a, b), dtype=float)  # noqa: E731
        return np.zeros(2) + self.directional(fy, X, u, v) - self.directional(fx, Y, u, v)

    def curvature(self, X, Y, Z, u, v) -> np.ndarray:
        def cov_field(A, B):
            return lambda a, b: self.cov(A, B, a, b)[0]

        r = (self.cov(X, cov_field(Y, Z), u, v)[0]
             - self.cov(Y, cov_field(X, Z), u, v)[0])
        br = self.bracket(X, Y, u, v)
        if np.any(br != 0.0):
            r = r - self.cov(lambda a, b: br, Z, u, v)[0]
        return r


def _check_footprint(s, p, cfg, depth):
    u, v = p
    r = depth * cfg.reach * cfg.step
    for du in (-r, r):
        for dv in (-r, r):
            if not s.contains(u + du, v + dv):
                raise StencilError(
                    f"point {p} is closer than {r} to the boundary of {s.domain}")


def induced_cov_deriv(s: TranslationSurface, X: TangentField, Y: TangentField, p,
                      cfg: OracleConfig = OracleConfig()):
    """nabla_X Y at parameter point p.

    Returns ``(coefficients, normal)``: the tangent part in the coordinate frame
    (d psi/du, d psi/dv) and the ambient normal remainder (the second
    fundamental form h(X, Y)).
    """
    _check_footprint(s, p, cfg, 1)
    return _Patch(s, cfg).cov(X, Y, float(p[0]), float(p[1]))


def curvature_fd(s: TranslationSurface, X, Y, Z, p, cfg: OracleConfig = OracleConfig()) -> np.ndarray:
    """Tangent coefficients of R(X, Y)Z at p."""
    _check_footprint(s, p, cfg, 2)
    return _Patch(s, cfg).curvature(X, Y, Z, float(p[0]), float(p[1]))


def intrinsic_K_fd(s: TranslationSurface, p, cfg: OracleConfig = OracleConfig()) -> float:
    """Sectional curvature at p from R(e1,e2)e2 and R(e2,e1)e1 in the coordinate frame."""
    _check_footprint(s, p, cfg, 2)
    patch = _Patch(s, cfg)
    u, v = float(p[0]), float(p[1])
    fr = patch.frame(u, v)
    gram = fr @ fr.T
    r1 = patch.curvature(E1, E2, E2, u, v)  # coefficients
    r2 = patch.curvature(E2, E1, E1, u, v)
    num = r1 @ gram[:, 0] + r2 @ gram[:, 1]
    k = num / (2.0 * (gram[0, 0] * gram[1, 1] - gram[0, 1] ** 2))
    if not math.isfinite(k):
        raise NonFiniteError(f"non-finite curvature at {p}")
    return float(k)


def intrinsic_K_orthonormal(s: TranslationSurface, p, cfg: OracleConfig = OracleConfig()) -> float:
    """Same quantity from a Gram-Schmidt orthonormal frame field.

    The frame coefficients vary from point to point, so the bracket term is
    present and differentiated numerically like everything else.
    """
    _check_footprint(s, p, cfg, 2)
    patch = _Patch(s, cfg)

    def coeffs(a, b):
        fr = patch.frame(a, b)
        n1 = np.linalg.norm(fr[0])
        c1 = np.array([1.0 / n1, 0.0])
        t = fr[1] - (fr[1] @ fr[0]) / (n1 * n1) * fr[0]
        nt = np.linalg.norm(t)
        c2 = np.array([-(fr[1] @ fr[0]) / (n1 * n1) / nt, 1.0 / nt])
        return c1, c2

    X = lambda a, b: coeffs(a, b)[0]  # noqa: E731
    Y = lambda a, b: coeffs(a, b)[1]  # noqa: E731
    u, v = float(p[0]), float(p[1])
    fr = patch.frame(u, v)
    x_amb = X(u, v) @ fr
    y_amb = Y(u, v) @ fr
    r1 = patch.curvature(X, Y, Y, u, v) @ fr
    r2 = patch.curvature(Y, X, X, u, v) @ fr
    return float(0.5 * (r1 @ x_amb + r2 @ y_amb))


def compare(s: TranslationSurface, grid, cfg: OracleConfig = OracleConfig(), *,
            closed=sectional_curvature_closed, gauss=sectional_curvature_gauss) -> CurvatureReport:
    """Oracle K against the closed form and the Gauss route at every grid point."""
    report = CurvatureReport(tolerance=cfg.tol)
    for u, v in grid:
        kc = closed(s, u, v)
        kg = gauss(s, u, v)
        ko = intrinsic_K_fd(s, (u, v), cfg)
        ec, eg = abs(kc - ko), abs(kg - ko)
        scale = max(abs(ko), 1e-300)
        report.points.append(PointRecord(
            u=u, v=v, K_closed=kc, K_gauss=kg, K_oracle=ko,
            err_closed=ec, err_gauss=eg,
            rel_err_closed=ec / scale, rel_err_gauss=eg / scale,
            passed=bool(ec <= cfg.tol and eg <= cfg.tol),
        ))
    return report
