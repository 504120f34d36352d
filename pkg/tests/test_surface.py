import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from snmsurf.expr import eval_jet
from snmsurf.jets import DomainError
from snmsurf.surface import (
    TranslationSurface, ambient_curvature_terms, curvature_grid, fundamental_data, grid_points,
    second_form_equality_check, sectional_curvature_closed, sectional_curvature_gauss,
    sectional_curvature_printed,
)
from snmsurf.verify import random_polynomial_surfaces

pt = st.floats(-0.9, 0.9)


def test_fundamental_data_example():
    d = fundamental_data(TranslationSurface("I", "x^2", "y^3"), 1.0, 1.0)
    assert (d.E, d.F, d.G, d.w) == (5.0, 6.0, 10.0, 14.0)


def test_fundamental_data_plane():
    d = fundamental_data(TranslationSurface("I", "0", "0"), 0.3, -2.0)
    assert (d.E, d.F, d.G, d.w) == (1.0, 0.0, 1.0, 1.0)
    assert np.array_equal(d.xi, [0.0, 0.0, 1.0])
    assert (d.h11, d.h12, d.h22) == (0.0, 0.0, 0.0)


def test_fundamental_data_paraboloid():
    d = fundamental_data(TranslationSurface("I", "x^2", "y^2"), 0.0, 0.0)
    assert (d.h11, d.h12, d.h22) == (2.0, 0.0, 2.0)


@pytest.mark.parametrize("kind,f,g", [("I", "sin(x) + x^3", "exp(y/2)"),
                                      ("II", "y^4 - y", "cos(z)*2")])
@given(u=pt, v=pt)
def test_fundamental_invariants(kind, f, g, u, v):
    d = fundamental_data(TranslationSurface(kind, f, g), u, v)
    assert abs(d.w - (d.E * d.G - d.F ** 2)) <= 1e-12 * d.w
    assert d.w >= 1.0
    assert abs(np.linalg.norm(d.xi) - 1.0) <= 1e-12
    assert abs(d.xi @ d.e1) <= 1e-12 and abs(d.xi @ d.e2) <= 1e-12
    assert d.h12 == 0.0


def test_closed_form_examples():
    assert sectional_curvature_closed(TranslationSurface("I", "0", "0"), 0.2, 0.9) == 0.0
    assert sectional_curvature_closed(TranslationSurface("II", "0", "0"), 0.2, 0.9) == 0.5
    assert sectional_curvature_closed(TranslationSurface("I", "x^2", "y^2"), 0.0, 0.0) == 2.0
    plane = TranslationSurface("I", "0", "1*y")
    assert abs(sectional_curvature_closed(plane, 0.5, 0.5) - 0.25) <= 1e-15


@given(st.floats(-3, 3))
def test_tilted_plane(a):
    s = TranslationSurface("I", "0", f"{a!r}*y" if a >= 0 else f"-{-a!r}*y")
    assert abs(sectional_curvature_closed(s, 0.1, 0.2) - a * a / (2 * (1 + a * a))) <= 1e-15


def test_coordinate_planes_exact():
    for u, v in [(0, 0), (1.5, -2), (-3, 0.25)]:
        assert sectional_curvature_closed(TranslationSurface("I", "0", "0"), u, v) == 0.0
        assert sectional_curvature_closed(TranslationSurface("II", "0", "0"), u, v) == 0.5
        assert sectional_curvature_closed(TranslationSurface("I", "2", "-1"), u, v) == 0.0
        assert sectional_curvature_closed(TranslationSurface("II", "3", "0"), u, v) == 0.5


def test_gauss_examples():
    assert abs(sectional_curvature_gauss(TranslationSurface("I", "x^2", "y^2"), 0, 0) - 2) <= 1e-13
    assert abs(sectional_curvature_gauss(TranslationSurface("II", "0", "0"), 0.4, 1) - 0.5) <= 1e-15


@given(u=pt, v=pt)
def test_ambient_term_of_type_one(u, v):
    s = TranslationSurface("I", "x^3 + x", "sin(2*y)")
    r12, r21 = ambient_curvature_terms(s, u, v)
    fp = eval_jet(s.f, u).v1
    gp = eval_jet(s.g, v).v1
    assert abs(r12 - gp * gp) <= 1e-12 * max(1, gp * gp)
    assert abs(r21 - fp * fp) <= 1e-12 * max(1, fp * fp)


@pytest.mark.parametrize("f,g,p", [("x^2", "y^3", (0.5, 0.5)), ("0", "0", (0.1, 0.1)),
                                   ("log(cos(x))", "0", (0.3, 0.0))])
def test_second_form_equality_examples(f, g, p):
    assert second_form_equality_check(TranslationSurface("I", f, g), *p) <= 1e-10


@pytest.mark.parametrize("kind", ["I", "II"])
def test_closed_matches_gauss_on_random_surfaces(kind):
    worst = 0.0
    for s in random_polynomial_surfaces(3, 25, kind):
        for u, v in grid_points(-0.8, -0.8, 0.8, 0.8, 5, 5):
            worst = max(worst, abs(sectional_curvature_closed(s, u, v)
                                   - sectional_curvature_gauss(s, u, v)))
    assert worst <= 1e-8


@given(u=pt, v=pt)
def test_type_one_symmetry(u, v):
    s = TranslationSurface("I", "x^4 - 2*x", "exp(y) - y^2")
    t = TranslationSurface("I", "exp(x) - x^2", "y^4 - 2*y")
    assert abs(sectional_curvature_closed(s, u, v) - sectional_curvature_closed(t, v, u)) <= 1e-12
    assert sectional_curvature_closed(s.swapped(), v, u) == pytest.approx(
        sectional_curvature_closed(s, u, v), abs=1e-12)


def test_type_two_is_not_symmetric():
    s = TranslationSurface("II", "y^2", "0")
    t = s.swapped()
    k_s = sectional_curvature_closed(s, 0.3, 0.0)
    k_t = sectional_curvature_closed(t, 0.0, 0.3)
    assert abs(k_s - k_t) > 0.1
    # the same holds on the Gauss route
    assert abs(sectional_curvature_gauss(s, 0.3, 0.0) - sectional_curvature_gauss(t, 0.0, 0.3)) > 0.1


@given(st.floats(-1.2, 1.2), st.floats(-2, 2))
def test_type_two_cylinders_over_y_have_half(u, v):
    # x = f(y): the z-direction is a ruling along the canonical field, K = 1/2
    s = TranslationSurface("II", "y^3 - sin(3*y)", "0")
    assert abs(sectional_curvature_closed(s, u, v) - 0.5) <= 1e-12
    assert abs(sectional_curvature_gauss(s, u, v) - 0.5) <= 1e-12


def test_printed_variant_differs_only_in_type_two():
    s1 = TranslationSurface("I", "x^3", "y^2 + y")
    assert sectional_curvature_printed(s1, 0.3, 0.4) == sectional_curvature_closed(s1, 0.3, 0.4)
    s2 = TranslationSurface("II", "y^3", "z^2 + z")
    assert abs(sectional_curvature_printed(s2, 0.3, 0.4)
               - sectional_curvature_closed(s2, 0.3, 0.4)) > 1e-2
    # the Gauss route sides with the closed form
    assert abs(sectional_curvature_gauss(s2, 0.3, 0.4)
               - sectional_curvature_closed(s2, 0.3, 0.4)) <= 1e-12


def test_surface_construction_errors():
    with pytest.raises(ValueError):
        TranslationSurface("III", "0", "0")
    with pytest.raises(ValueError):
        TranslationSurface("I", "0", "0", ((1, 0), (0, 1)))
    with pytest.raises(TypeError):
        TranslationSurface("I", 3, "0")
    s = TranslationSurface("I", "x", "y", ((0, 1), (0, 1)))
    with pytest.raises(DomainError):
        sectional_curvature_closed(s, 2.0, 0.5)


def test_grid_order_and_flags():
    pts = grid_points(0, 0, 1, 1, 2, 3)
    assert pts == [(0, 0), (0, 0.5), (0, 1), (1, 0), (1, 0.5), (1, 1)]
    s = TranslationSurface("I", "log(x)", "exp(y)")
    recs = curvature_grid(s, [(1.0, 0.0), (-1.0, 0.0), (1.0, 800.0)], gauss=True)
    assert [r.flag for r in recs][0] == "ok"
    assert recs[1].flag.startswith("domain")
    assert recs[2].flag == "overflow"
    assert len(recs) == 3 and not recs[1].passed


def test_point_is_generic():
    s = TranslationSurface("II", "y^2", "z")
    assert s.point(2.0, 3.0) == (7.0, 2.0, 3.0)
    assert TranslationSurface("I", "x", "y").parameter_names == ("x", "y")
