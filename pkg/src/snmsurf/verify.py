"""Seeded verification suites shared by the CLI and the acceptance tests."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .expr import Add, Mul, Num, Pow, Var, num
from .oracle import OracleConfig, compare
from .profiles import (
    FAMILY_TAGS,
    classification_property_test,
    k1_obstruction,
    quadrature_profile,
    random_family,
)
from .surface import (
    TranslationSurface,
    second_form_equality_check,
    sectional_curvature_closed,
    sectional_curvature_printed,
)

__all__ = [
    "SuiteResult",
    "random_polynomial",
    "random_polynomial_surfaces",
    "interior_grid",
    "oracle_suite",
    "second_form_suite",
    "cylinder_check",
    "cylinder_suite",
    "classification_suite",
    "k1_suite",
    "SUITES",
]


@dataclass
class SuiteResult:
    suite: str
    n: int
    failures: list = field(default_factory=list)
    max_errors: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"suite": self.suite, "n": self.n, "passed": self.passed,
                "failures": self.failures, "max_errors": self.max_errors,
                "details": self.details}


def random_polynomial(rng, name: str, degree: int = 4):
    """sum_k c_k t^k with c_k ~ U[-1, 1]."""
    coeffs = rng.uniform(-1.0, 1.0, degree + 1)
    t = Var(name)
    out = num(coeffs[0])
    for k in range(1, degree + 1):
        term = t if k == 1 else Pow(t, Num(float(k)))
        out = Add(out, Mul(num(coeffs[k]), term))
    return out


def random_polynomial_surfaces(seed: int, n: int, kind: str, degree: int = 4):
    rng = np.random.default_rng([seed, 0 if kind == "I" else 1])
    names = ("x", "y") if kind == "I" else ("y", "z")
    return [TranslationSurface(kind, random_polynomial(rng, names[0], degree),
                               random_polynomial(rng, names[1], degree),
                               ((-1.0, 1.0), (-1.0, 1.0)))
            for _ in range(n)]


def interior_grid(n: int = 5, radius: float = 0.8):
    ticks = np.linspace(-radius, radius, n)
    return [(float(u), float(v)) for u in ticks for v in ticks]


def oracle_suite(seed: int = 0, n: int = 100, tol: str = "loose",
                 gauss_tol: float = 1e-8, stencil_order: int | None = None) -> SuiteResult:
    """n type I + n type II random polynomial surfaces: closed form vs oracle vs Gauss.

    The strict profile needs the 4th-order stencil; loose runs on the 2nd-order one.
    """
    if stencil_order is None:
        stencil_order = 4 if tol == "strict" else 2
    cfg = OracleConfig(step=1e-4, stencil_order=stencil_order, tolerance=tol)
    res = SuiteResult("oracle", n)
    grid = interior_grid()
    worst = {"closed_vs_oracle": 0.0, "gauss_vs_oracle": 0.0, "closed_vs_gauss": 0.0}
    for kind in ("I", "II"):
        for s in random_polynomial_surfaces(seed, n, kind):
            rep = compare(s, grid, cfg)
            for p in rep.points:
                cg = abs(p.K_closed - p.K_gauss)
                worst["closed_vs_oracle"] = max(worst["closed_vs_oracle"], p.err_closed)
                worst["gauss_vs_oracle"] = max(worst["gauss_vs_oracle"], p.err_gauss)
                worst["closed_vs_gauss"] = max(worst["closed_vs_gauss"], cg)
                if not p.passed or not cg <= gauss_tol:
                    res.failures.append({"kind": kind, "f": str(s.f), "g": str(s.g),
                                         "u": p.u, "v": p.v, "err_closed": p.err_closed,
                                         "err_gauss": p.err_gauss, "closed_vs_gauss": cg})
    res.max_errors = worst
    res.details = {"tolerance": cfg.tol, "gauss_tolerance": gauss_tol, "step": cfg.step,
                   "stencil_order": cfg.stencil_order}
    return res


def second_form_suite(seed: int = 0, n: int = 100, tol: float = 1e-10) -> SuiteResult:
    res = SuiteResult("second_form", n)
    worst = 0.0
    for kind in ("I", "II"):
        for s in random_polynomial_surfaces(seed, n, kind):
            for u, v in interior_grid():
                d = second_form_equality_check(s, u, v)
                worst = max(worst, d)
                if not d <= tol:
                    res.failures.append({"kind": kind, "f": str(s.f), "g": str(s.g),
                                         "u": u, "v": v, "deviation": d})
    res.max_errors = {"h_minus_h0": worst}
    return res


def cylinder_check(fam, samples: int = 25, identity: str = "true", fraction: float = 0.9):
    """(spread, |mean - K0/2|) of K over the lifted profile on the interior of the domain."""
    lo, hi = fam.domain.window(fraction)
    curve = quadrature_profile(fam, np.linspace(lo, hi, samples))
    s = curve.lift()
    use_printed = identity == "printed" and fam.identity == "printed"
    kfun = sectional_curvature_printed if use_printed else sectional_curvature_closed
    ks = np.array([kfun(s, *curve.surface_point(i)) for i in range(len(curve.samples))])
    return float(np.ptp(ks)), float(abs(ks.mean() - 0.5 * fam.K0))


def cylinder_suite(seed: int = 0, n: int = 50, identity: str = "true", tol: float = 1e-7,
                   tags=None) -> SuiteResult:
    """n random valid draws per family tag; K must be constant K0/2 on each lifted profile."""
    tags = list(FAMILY_TAGS) if tags is None else list(tags)
    res = SuiteResult("cylinders", n)
    per_tag = {}
    for k, tag in enumerate(tags):
        rng = np.random.default_rng([seed, 100 + k])
        worst_spread = worst_mean = 0.0
        bad = 0
        for _ in range(n):
            fam = random_family(tag, rng)
            try:
                spread, mean_err = cylinder_check(fam, identity=identity)
            except (ArithmeticError, ValueError) as exc:
                spread = mean_err = math.inf
                err = str(exc)
            else:
                err = None
            worst_spread = max(worst_spread, spread)
            worst_mean = max(worst_mean, mean_err)
            if not (spread <= tol and mean_err <= tol):
                bad += 1
                rec = {"tag": tag, "family": fam.to_json(), "spread": spread, "mean_error": mean_err}
                if err:
                    rec["error"] = err
                res.failures.append(rec)
        per_tag[tag] = {"max_spread": worst_spread, "max_mean_error": worst_mean,
                        "failed_draws": bad}
    res.max_errors = {
        "spread": max((v["max_spread"] for v in per_tag.values()), default=0.0),
        "mean_error": max((v["max_mean_error"] for v in per_tag.values()), default=0.0),
    }
    res.details = {"identity": identity, "tolerance": tol, "per_tag": per_tag}
    return res


def classification_suite(seed: int = 0, n: int = 500) -> SuiteResult:
    rep = classification_property_test(seed, n)
    res = SuiteResult("classification", n, failures=list(rep.candidates))
    res.max_errors = {"min_spread": rep.min_spread}
    res.details = {"threshold": rep.threshold, "controls": rep.controls}
    return res


def k1_suite(seed: int = 0, n: int = 1000, tol: float = 1e-12) -> SuiteResult:
    """c3 = 1/(2 c5), c4 = 1/(2 c6): A0 = A1 = A2 and A1 + A2 - A3 = 3 as printed.

    Also records the worst |A1 + A2 - 3|, the identity the coefficients actually satisfy.
    """
    rng = np.random.default_rng([seed, 7])
    res = SuiteResult("k1", n)
    worst = {"A0_minus_A1": 0.0, "A0_minus_A2": 0.0, "printed_identity": 0.0,
             "A1_plus_A2_minus_3": 0.0}
    for _ in range(n):
        c5, c6 = rng.uniform(0.1, 3.0, 2) * rng.choice([-1.0, 1.0], 2)
        c3, c4 = 1.0 / (2.0 * c5), 1.0 / (2.0 * c6)
        A0, A1, A2, A3 = k1_obstruction(c3, c4, c5, c6)
        e = {"A0_minus_A1": abs(A0 - A1), "A0_minus_A2": abs(A0 - A2),
             "printed_identity": abs(A1 + A2 - A3 - 3.0),
             "A1_plus_A2_minus_3": abs(A1 + A2 - 3.0)}
        for k, v in e.items():
            worst[k] = max(worst[k], v)
        if not (e["A0_minus_A1"] <= tol and e["A0_minus_A2"] <= tol
                and e["printed_identity"] <= tol):
            res.failures.append({"c5": float(c5), "c6": float(c6), "A": [A0, A1, A2, A3], **e})
    res.max_errors = worst
    res.details = {"tolerance": tol}
    return res


SUITES = {
    "oracle": oracle_suite,
    "cylinders": cylinder_suite,
    "classification": classification_suite,
    "k1": k1_suite,
}
