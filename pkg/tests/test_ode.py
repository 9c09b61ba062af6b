"""Linear closed-form and general RK4 solver tests."""

import math

import pytest

from _support import assert_close
from mfrac.errors import ConvergenceError, DomainError, ValidationError
from mfrac.fracderiv import FracParams
from mfrac.ode import LinearOdeProblem, TermSign, solve_general, solve_linear, verify_linear


def problem(mu_sq, sign, c, alpha, beta):
    return LinearOdeProblem(mu_sq, sign, c, FracParams(alpha, beta))


class TestLinear:
    def test_classical_decay(self):
        sol = solve_linear(problem(1.0, TermSign.PLUS, 1.0, 1.0, 1.0))
        assert_close(sol(1.0), math.exp(-1.0), 1e-14)
        assert "exp" in sol.description

    def test_initial_value_recovered_near_zero(self):
        sol = solve_linear(problem(2.0, TermSign.PLUS, 3.5, 0.5, 1.5))
        assert sol(1e-30) == pytest.approx(3.5, rel=1e-12)

    def test_minus_sign_grows(self):
        sol = solve_linear(problem(1.0, TermSign.MINUS, 1.0, 0.5, 1.0))
        assert sol(4.0) > 1.0

    def test_heat_mode_time_factor(self):
        # mu^2 = pi^2 * k reproduces the leading separable time factor.
        k = 0.003
        alpha, beta = 0.5, 0.5
        sol = solve_linear(problem(math.pi**2 * k, TermSign.PLUS, 1.0, alpha, beta))
        t = 150.0
        expected = math.exp(-math.gamma(beta + 1.0) * math.pi**2 * k / alpha * t**alpha)
        assert_close(sol(t), expected, 1e-12)

    def test_residual_grid(self):
        ts = (0.1, 1.0, 10.0)
        for mu_sq in (0.1, 1.0, 10.0):
            for alpha in (0.25, 0.5, 0.9):
                for beta in (0.5, 1.0, 2.0):
                    for sign in (TermSign.PLUS, TermSign.MINUS):
                        prob = problem(mu_sq, sign, 1.3, alpha, beta)
                        sol = solve_linear(prob)
                        bound = 1e-9 * (1.0 + max(abs(sol(t)) for t in ts))
                        assert verify_linear(sol, prob, ts) <= bound

    def test_zero_scale_gives_zero_residual(self):
        prob = problem(1.0, TermSign.PLUS, 0.0, 0.5, 1.0)
        assert verify_linear(solve_linear(prob), prob, (0.5, 2.0)) == 0.0

    def test_sign_error_is_detected(self):
        plus = problem(1.0, TermSign.PLUS, 1.0, 0.5, 1.0)
        minus = problem(1.0, TermSign.MINUS, 1.0, 0.5, 1.0)
        sol = solve_linear(plus)
        residual = verify_linear(sol, minus, (1.0,))
        assert residual >= plus.mu_sq * abs(sol(1.0))

    def test_classical_limit_formula(self):
        for sign, expo in ((TermSign.PLUS, -1.0), (TermSign.MINUS, 1.0)):
            sol = solve_linear(problem(2.5, sign, 1.7, 1.0, 1.0))
            for t in (0.3, 1.0, 2.0):
                expected = 1.7 * math.exp(expo * 2.5 * t)
                assert abs(sol(t) - expected) <= 1e-12 * abs(expected)

    def test_validation(self):
        with pytest.raises(ValidationError):
            problem(0.0, TermSign.PLUS, 1.0, 0.5, 1.0)
        with pytest.raises(ValidationError):
            problem(1.0, "plus", 1.0, 0.5, 1.0)
        with pytest.raises(ValidationError):
            problem(1.0, TermSign.PLUS, 1.0, 1.5, 1.0)
        sol = solve_linear(problem(1.0, TermSign.PLUS, 1.0, 0.5, 1.0))
        with pytest.raises(DomainError):
            sol(0.0)


class TestGeneral:
    def test_reproduces_linear_closed_form(self):
        prob = problem(1.0, TermSign.PLUS, 1.0, 0.5, 1.0)
        closed = solve_linear(prob)
        v0 = closed(0.1)
        sampled = solve_general(lambda t, v: -v, 0.1, v0, 2.0, prob.p, 1000)
        assert abs(sampled(2.0) - closed(2.0)) <= 1e-8
        for t in (0.37, 1.234, 1.999):
            assert abs(sampled(t) - closed(t)) <= 1e-8

    def test_zero_rhs_is_constant(self):
        sol = solve_general(lambda t, v: 0.0, 0.5, 4.2, 3.0, FracParams(0.7, 2.0), 16)
        for t in (0.5, 1.1, 2.6, 3.0):
            assert sol(t) == 4.2

    def test_transform_cancellation_gives_unit_slope(self):
        # g = t^(1-alpha)/Gamma(beta+1) turns the transformed equation into v' = 1.
        alpha, beta = 0.6, 1.8
        scale = math.gamma(beta + 1.0)
        sol = solve_general(
            lambda t, v: t ** (1.0 - alpha) / scale, 0.5, 2.0, 2.5, FracParams(alpha, beta), 64
        )
        assert_close(sol(2.5), 4.0, 1e-10)

    def test_fourth_order_convergence(self):
        prob = problem(1.0, TermSign.PLUS, 1.0, 0.5, 1.0)
        closed = solve_linear(prob)
        v0 = closed(0.5)
        errors = []
        for steps in (40, 80):
            sampled = solve_general(lambda t, v: -v, 0.5, v0, 2.5, prob.p, steps)
            errors.append(abs(sampled(2.5) - closed(2.5)))
        ratio = errors[0] / errors[1]
        assert 12.0 <= ratio <= 20.0, ratio

    def test_divergence_raises(self):
        with pytest.raises(ConvergenceError):
            solve_general(lambda t, v: v * v, 1.0, 100.0, 5.0, FracParams(0.5, 1.0), 100)

    def test_step_count_validated(self):
        with pytest.raises(ValidationError):
            solve_general(lambda t, v: 0.0, 1.0, 1.0, 2.0, FracParams(0.5, 1.0), 3)

    def test_range_enforced(self):
        sol = solve_general(lambda t, v: 0.0, 1.0, 1.0, 2.0, FracParams(0.5, 1.0), 8)
        with pytest.raises(DomainError):
            sol(0.9)
        with pytest.raises(DomainError):
            sol(2.1)

    def test_requires_positive_start(self):
        with pytest.raises(ValidationError):
            solve_general(lambda t, v: 0.0, 0.0, 1.0, 2.0, FracParams(0.5, 1.0), 8)
