import numpy as np
import pytest

from bandflow.coefficients import ConstantPair, RationalBumpPair, Requirement, TabulatedPair, condition_integral, validate
from bandflow.errors import CoefficientDomainError, HypothesisViolationError


def test_constant_pair_values():
    """ test constant coefficients and their derivatives """
    pair = ConstantPair(alpha=2.0, beta=0.5)
    a, b, da, db = pair.eval(3.0)
    assert (a, b, da, db) == (2.0, -0.5, 0.0, 0.0)
    a, b, _, _ = pair.eval(np.linspace(-5, 5, 11))
    assert a.shape == (11,)
    np.testing.assert_array_equal(b, -0.5)


def test_degenerate_flag_consistency():
    """ test that b = 0 needs the degenerate flag and vice versa """
    with pytest.raises(CoefficientDomainError):
        ConstantPair(alpha=1.0, beta=0.0)
    with pytest.raises(CoefficientDomainError):
        ConstantPair(alpha=1.0, beta=0.5, degenerate=True)
    assert ConstantPair(alpha=1.0, beta=0.0, degenerate=True).degenerate


def test_eval_rejects_infinite_slopes(constant_pair):
    """ test that slopes must be finite """
    with pytest.raises(ValueError):
        constant_pair.eval(np.inf)


def test_rational_bump_derivatives(bump_pair):
    """ test the analytic derivatives against central differences """
    p = np.linspace(-4, 4, 17)
    step = 1e-6
    _, _, da, db = bump_pair.eval(p)
    a_hi, b_hi, _, _ = bump_pair.eval(p + step)
    a_lo, b_lo, _, _ = bump_pair.eval(p - step)
    np.testing.assert_allclose(da, (a_hi - a_lo) / (2 * step), atol=1e-8)
    np.testing.assert_allclose(db, (b_hi - b_lo) / (2 * step), atol=1e-8)


def test_rational_bump_extrema(bump_pair):
    """ test that the extrema bracket sampled values """
    ext = bump_pair.extrema()
    assert (ext.a0, ext.a_sup) == pytest.approx((1.0, 1.3))
    assert (ext.b0, ext.b_sup) == pytest.approx((-0.6, -0.5))
    a, b, _, _ = bump_pair.eval(np.linspace(-100, 100, 1001))
    assert np.all((a >= ext.a0) & (a <= ext.a_sup))
    assert np.all((b >= ext.b0) & (b <= ext.b_sup))
    assert ext.dominant


def test_non_finite_parameter_is_named():
    """ test that a non-finite parameter is reported by name """
    pair = RationalBumpPair(alpha=1.0, eps=np.nan, beta=0.5)
    with pytest.raises(CoefficientDomainError, match="eps"):
        pair.eval(0.0)


def test_tabulated_pair_interpolates(skewed_pair):
    """ test the tabulated pair at table nodes and its asymmetry """
    omega = skewed_pair.omega[10]
    a, b, _, _ = skewed_pair.eval(np.tan(omega))
    assert a == pytest.approx(1.0 + 0.1 * np.sin(omega), abs=1e-12)
    assert b == pytest.approx(-0.5 - 0.05 * np.sin(omega), abs=1e-12)
    assert not skewed_pair.symmetric
    assert not validate(skewed_pair, Requirement.EVEN).passed


def test_tabulated_pair_must_cover_the_angles():
    """ test that a table not reaching +-pi/2 is rejected """
    omega = np.linspace(-1.0, 1.0, 20)
    with pytest.raises(CoefficientDomainError):
        TabulatedPair(omega, np.ones(20), -np.ones(20))


def test_tabulated_pair_from_csv(tmp_path):
    """ test reading a tabulated pair """
    omega = np.linspace(-np.pi / 2, np.pi / 2, 33)
    path = tmp_path / "pair.csv"
    np.savetxt(path, np.column_stack([omega, 1 + 0 * omega, -0.5 + 0 * omega]), delimiter=",", header="omega,a,b", comments="")
    pair = TabulatedPair.from_csv(path, symmetric=True)
    assert pair.eval(0.7)[0] == pytest.approx(1.0)
    assert validate(pair).passed


def test_validate_reference_pairs(constant_pair, bump_pair, grim_reaper_pair):
    """ test that the reference pairs satisfy every requirement """
    for pair in (constant_pair, bump_pair, grim_reaper_pair):
        report = validate(pair)
        assert report.passed, report.failures()
        report.require()


def test_condition_integral_constant(constant_pair):
    """ test int a dr / (-b (1+r^2)^(3/2)) = a / (-b) for constant coefficients """
    assert condition_integral(constant_pair, 1) == pytest.approx(2.0, rel=1e-10)
    assert condition_integral(constant_pair, -1) == pytest.approx(2.0, rel=1e-10)


def test_validate_reports_failures():
    """ test that dominance and the integral conditions fail for a weak a """
    pair = ConstantPair(alpha=0.4, beta=0.5)
    report = validate(pair)
    failed = {item.requirement for item in report.failures()}
    assert Requirement.DOMINANCE in failed
    assert Requirement.RIGHT_INTEGRAL in failed
    with pytest.raises(HypothesisViolationError, match="a0 > -b0"):
        validate(pair, Requirement.DOMINANCE).require()


def test_constant_bounds(bump_pair):
    """ test the constant pairs built on the extrema """
    lower, upper = bump_pair.constant_bounds()
    assert (lower.alpha, lower.beta) == pytest.approx((1.0, 0.6))
    assert (upper.alpha, upper.beta) == pytest.approx((1.3, 0.5))
    assert "rational-bump" == bump_pair.describe()["family"]
