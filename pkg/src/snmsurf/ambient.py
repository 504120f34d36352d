"""The canonical semi-symmetric non-metric connection on R^3.

    nabla~_X Y = D_X Y + <dz, Y> X

with D the flat derivative.  Everything here is computed from that definition:
covariant derivatives of fields, torsion, the curvature tensor and sectional
curvatures of planes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .jets import Jet3, NonFiniteError

__all__ = [
    "DZ",
    "vec3",
    "AmbientField",
    "PlaneSection",
    "DegeneratePlaneError",
    "cov_deriv",
    "bracket",
    "torsion",
    "torsion_formula",
    "curvature",
    "sectional_curvature_plane",
]

DZ = np.array([0.0, 0.0, 1.0])


def vec3(c1, c2, c3) -> np.ndarray:
    return np.array([c1, c2, c3], dtype=float)


def _finite(v: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(v)):
        raise NonFiniteError(f"non-finite {what}: {v}")
    return v


def _part(c, k: int) -> float:
    # derivative slot k of a jet, or of a plain constant
    if isinstance(c, Jet3):
        return (c.v0, c.v1, c.v2)[k]
    return float(c) if k == 0 else 0.0


class AmbientField:
    """A vector field on R^3.

    ``components(x, y, z)`` returns three scalars.  For analytic fields it must
    accept jets as coordinates; derivatives are then exact (jets along lines).
    Black-box fields are differentiated by centered differences with ``step``.
    """

    def __init__(self, components: Callable, *, analytic: bool = True, step: float = 1e-5):
        self.components = components
        self.analytic = analytic
        self.step = step

    @classmethod
    def constant(cls, v) -> "AmbientField":
        v = tuple(float(c) for c in v)
        return cls(lambda x, y, z: v)

    @classmethod
    def black_box(cls, fn: Callable, step: float = 1e-5) -> "AmbientField":
        return cls(fn, analytic=False, step=step)

    def __call__(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        c = self.components(p[0], p[1], p[2])
        return _finite(np.array([_part(ci, 0) for ci in c]), "field value")

    def _line(self, p, d):
        p = np.asarray(p, dtype=float)
        d = np.asarray(d, dtype=float)
        return self.components(*(Jet3(p[i], d[i], 0.0, 0.0) for i in range(3)))

    def derivative(self, p, d) -> np.ndarray:
        """Flat directional derivative D_d F at p."""
        if self.analytic:
            c = self._line(p, d)
            out = np.array([_part(ci, 1) for ci in c])
        else:
            p = np.asarray(p, dtype=float)
            d = np.asarray(d, dtype=float)
            h = self.step
            out = (self._eval(p + h * d) - self._eval(p - h * d)) / (2.0 * h)
        return _finite(out, "derivative")

    def second_derivative(self, p, a, b) -> np.ndarray:
        """D^2 F(p)[a, b]."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        if self.analytic:
            def d2(d):
                return np.array([_part(ci, 2) for ci in self._line(p, d)])
            out = 0.5 * (d2(a + b) - d2(a) - d2(b))
        else:
            p = np.asarray(p, dtype=float)
            h = self.step
            out = (self._eval(p + h * a + h * b) - self._eval(p + h * a - h * b)
                   - self._eval(p - h * a + h * b) + self._eval(p - h * a - h * b)) / (4.0 * h * h)
        return _finite(out, "second derivative")

    def _eval(self, p):
        return np.array([_part(ci, 0) for ci in self.components(p[0], p[1], p[2])])


def cov_deriv(X: AmbientField, Y: AmbientField, p) -> np.ndarray:
    x = X(p)
    y = Y(p)
    return Y.derivative(p, x) + y[2] * x


def bracket(X: AmbientField, Y: AmbientField, p) -> np.ndarray:
    return Y.derivative(p, X(p)) - X.derivative(p, Y(p))


def torsion(X: AmbientField, Y: AmbientField, p) -> np.ndarray:
    return cov_deriv(X, Y, p) - cov_deriv(Y, X, p) - bracket(X, Y, p)


def torsion_formula(x, y) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return y[2] * x - x[2] * y


def _cov_cov(X, Y, Z, p) -> np.ndarray:
    """nabla~_X (nabla~_Y Z) at p, via the product rule on V = D_Y Z + Z_3 Y."""
    x, y, z = X(p), Y(p), Z(p)
    dxy = Y.derivative(p, x)
    dxz = Z.derivative(p, x)
    v = Z.derivative(p, y) + z[2] * y
    dxv = Z.second_derivative(p, x, y) + Z.derivative(p, dxy) + dxz[2] * y + z[2] * dxy
    return dxv + v[2] * x


def curvature(X: AmbientField, Y: AmbientField, Z: AmbientField, p) -> np.ndarray:
    """R~(X,Y)Z = nabla~_X nabla~_Y Z - nabla~_Y nabla~_X Z - nabla~_[X,Y] Z."""
    br = bracket(X, Y, p)
    z = Z(p)
    along_bracket = Z.derivative(p, br) + z[2] * br
    out = _cov_cov(X, Y, Z, p) - _cov_cov(Y, X, Z, p) - along_bracket
    return _finite(out, "curvature")


class DegeneratePlaneError(ValueError):
    pass


@dataclass(frozen=True)
class PlaneSection:
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float)
        v = np.asarray(self.v, dtype=float)
        if u.shape != (3,) or v.shape != (3,):
            raise ValueError("plane basis vectors must have three components")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)
        uu, vv = u @ u, v @ v
        gram = uu * vv - (u @ v) ** 2
        if not gram > 1e-14 * uu * vv or not math.isfinite(gram):
            raise DegeneratePlaneError("plane basis vectors are linearly dependent")

    @property
    def gram(self) -> float:
        u, v = self.u, self.v
        return (u @ u) * (v @ v) - (u @ v) ** 2

    def orthonormal(self) -> tuple[np.ndarray, np.ndarray]:
        e1 = self.u / np.linalg.norm(self.u)
        w = self.v - (self.v @ e1) * e1
        return e1, w / np.linalg.norm(w)


def sectional_curvature_plane(plane: PlaneSection, method: str = "tensor") -> float:
    """Sectional curvature of a plane of R^3 under the canonical connection.

    ``method="orthonormal"`` applies K = (u3^2 + v3^2)/2 to a Gram-Schmidt basis;
    ``method="tensor"`` builds the curvature tensor on constant fields and uses
    the symmetrized general-basis quotient.
    """
    if method == "orthonormal":
        e1, e2 = plane.orthonormal()
        return 0.5 * (e1[2] ** 2 + e2[2] ** 2)
    if method != "tensor":
        raise ValueError(f"unknown method {method!r}")
    u, v = plane.u, plane.v
    U = AmbientField.constant(u)
    V = AmbientField.constant(v)
    p = np.zeros(3)
    r1 = curvature(U, V, V, p) @ u
    r2 = curvature(V, U, U, p) @ v
    return float((r1 + r2) / (2.0 * plane.gram))
