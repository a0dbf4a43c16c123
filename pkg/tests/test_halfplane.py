import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from oracles import blaschke_direct, central_difference, winding_number
from rieszcalc import (BlaschkeProduct, PoleError, Resolvent, StripFunction, blaschke_deriv,
                       blaschke_eval, example_counterexample, separation, shift_to_halfplane)


class TestShift:
    def test_translation(self):
        assert np.allclose(shift_to_halfplane([1j, -0.5 + 1j], 1.0), [1 + 1j, 0.5 + 1j])

    def test_counterexample(self):
        _, s = example_counterexample(4)
        mu = shift_to_halfplane(s.eigenvalues, 1.0)
        assert np.all(mu.real == 1.0)

    def test_boundary_rejected(self):
        with pytest.raises(ValueError, match="outside the strip"):
            shift_to_halfplane([1.0 + 0j], 1.0)


class TestBlaschke:
    def test_single_zero_values(self):
        b = BlaschkeProduct([1.0])
        assert blaschke_eval(b, 1.0) == 0
        assert blaschke_eval(b, 3.0) == pytest.approx(0.5)

    def test_derivative_closed_form(self):
        # d/ds (s-1)/(s+1) = 2/(s+1)^2
        b = BlaschkeProduct([1.0])
        assert blaschke_deriv(b, 1.0, 1) == pytest.approx(0.5)
        assert blaschke_deriv(b, 1.0, 2) == pytest.approx(-0.5)

    def test_pole_guard(self):
        b = BlaschkeProduct([1.0 + 1j])
        with pytest.raises(PoleError):
            blaschke_eval(b, -1.0 + 1j)

    def test_bad_order(self):
        with pytest.raises(ValueError):
            blaschke_deriv(BlaschkeProduct([1.0]), 1.0, 3)

    def test_zero_in_left_half_plane(self):
        with pytest.raises(ValueError):
            BlaschkeProduct([-1.0])

    def test_repeated_needs_flag(self):
        with pytest.raises(ValueError, match="allow_repeated"):
            BlaschkeProduct([1.0, 1.0])
        b = BlaschkeProduct([1.0, 1.0], allow_repeated=True)
        assert blaschke_deriv(b, 1.0, 1) == 0

    def test_empty_product(self):
        assert blaschke_eval(BlaschkeProduct([]), 2.0) == 1.0


class TestSeparation:
    def test_counterexample_points(self):
        euclid, rho = separation([1 + 1j, 1 + 2j, 1 + 2.5j])
        assert euclid == pytest.approx(0.5)
        assert 0 < rho < 1

    def test_needs_two(self):
        with pytest.raises(ValueError):
            separation([1.0])


# ---------------------------------------------------------------- properties

right = st.builds(complex, st.floats(0.05, 3.0), st.floats(-5.0, 5.0))
zero_lists = st.lists(right, min_size=1, max_size=6, unique=True)


@given(zero_lists, right)
def test_modulus_below_one(zeros, s):
    b = BlaschkeProduct(zeros)
    val = blaschke_eval(b, s)
    assert abs(val) < 1 or np.min(np.abs(np.array(zeros) - s)) == 0
    assert val == pytest.approx(blaschke_direct(zeros, s), abs=1e-12)


@given(zero_lists, st.floats(0.0, 1.0), st.floats(-4.0, 4.0), st.floats(0.5, 3.0))
def test_argument_principle(zeros, x0, y0, side):
    b = BlaschkeProduct(zeros)
    lo, hi = complex(0.02 + x0, y0), complex(0.02 + x0 + side, y0 + side)
    z = np.asarray(zeros)
    inside = (z.real > lo.real) & (z.real < hi.real) & (z.imag > lo.imag) & (z.imag < hi.imag)
    margin = min(np.min(np.abs(z.real - lo.real)), np.min(np.abs(z.real - hi.real)),
                 np.min(np.abs(z.imag - lo.imag)), np.min(np.abs(z.imag - hi.imag)))
    assume(margin >= 1e-3)
    t = np.linspace(0, 1, 4000, endpoint=False)
    corners = [lo, complex(hi.real, lo.imag), hi, complex(lo.real, hi.imag), lo]
    path = np.concatenate([a + (c - a) * t for a, c in zip(corners[:-1], corners[1:])])
    assert winding_number(blaschke_eval(b, path)) == int(inside.sum())


@given(zero_lists, right, st.sampled_from([1, 2]))
def test_derivatives_match_finite_differences(zeros, s, order):
    b = BlaschkeProduct(zeros)
    assume(np.min(np.abs(np.array(zeros) - s)) >= 1e-3)
    h = 1e-5 if order == 1 else 1e-4
    fd = central_difference(lambda x: blaschke_direct(zeros, x), s, h, order)
    exact = blaschke_deriv(b, s, order)
    assert abs(exact - fd) <= 1e-6 * max(1.0, abs(exact))


@given(st.lists(st.builds(complex, st.floats(-0.99, 0.99), st.floats(-50, 50)), min_size=1,
                max_size=10), st.floats(1.0, 4.0))
def test_shift_then_subtract_is_identity(lam, alpha):
    lam = [complex(z.real * alpha, z.imag) for z in lam]
    assert np.allclose(shift_to_halfplane(lam, alpha) - alpha, lam, rtol=0, atol=1e-14)


@given(right, st.floats(0.2, 3.0))
def test_strip_function_sup_consistent(pole, alpha):
    g = Resolvent(-pole)  # analytic on Re s > -Re pole
    f = StripFunction(g, alpha)
    y = np.linspace(-20, 20, 801)
    strip_grid = np.concatenate([-alpha * 0.999 + 1j * y, 1j * y, alpha * 0.999 + 1j * y])
    assert np.max(np.abs(f(strip_grid))) == pytest.approx(
        np.max(np.abs(g(strip_grid + alpha))), rel=1e-14)
