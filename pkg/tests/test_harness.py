import math
from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from fracverify.core import BumpPerturbation, Constant, EvalConfig, Exponential, Power, ShiftedPower, Sine, SmoothFunction
from fracverify.errors import DomainError
from fracverify.harness import (
    LOCAL_CEILING,
    NONLOCAL_FLOOR,
    STANDARD_ALPHAS,
    STANDARD_TIMES,
    STATE_AUGMENTED,
    OperatorKind,
    OperatorSpec,
    TestedEquation,
    TestRecord,
    Verdict,
    accelerator_multiplier_check,
    classify_operator,
    expected_verdict,
    initial_point_dependence,
    leibniz_residual,
    locality_probe,
    ode_equivalence_check,
    reduction_check,
    series_convergence_study,
    standard_bumps,
    standard_functions,
)
from fracverify.local_ops import conformable_reduced

from . import oracles

LOCAL = ("conformable", "katugampola", "mfractional", "kg")
ALL = LOCAL + ("cf", "rl-gl")
LINEAR = SmoothFunction(Power(1))
SQUARE = SmoothFunction(Power(2))
GRID = (0.1, 0.5, 1.0, 1.5, 2.0)


def op(kind, alpha=0.5, **kw):
    return OperatorSpec(kind, alpha, **kw)


class TestReductionCheck:
    @pytest.mark.parametrize("kind", ["conformable", "katugampola"])
    def test_standard_sweep_passes(self, cfg, kind):
        rec = reduction_check(op(kind), standard_functions(), STANDARD_ALPHAS, STANDARD_TIMES, cfg)
        assert rec.passed
        assert rec.value <= 1e-6

    def test_cf_rejects_first_order_form(self, cfg):
        rec = reduction_check(op("cf"), [LINEAR], [0.5], [1.0], cfg,
                              reduced=lambda f, a, t: conformable_reduced(f, a, t))
        assert not rec.passed
        assert rec.value >= 0.1

    def test_empty_sweep(self, cfg):
        with pytest.raises(ValueError):
            reduction_check(op("conformable"), [], [0.5], [1.0], cfg)

    def test_nonconvergence_is_failure(self):
        cfg = EvalConfig(eps_ladder=(1e-1, 5e-2, 2e-2, 1e-2), abs_tol=1e-14, rel_tol=1e-14)
        f = SmoothFunction(Sine(40.0))
        rec = reduction_check(op("conformable"), [f], [0.5], [1.0], cfg)
        assert not rec.passed
        assert "sin" in rec.detail


class TestLeibniz:
    @pytest.mark.parametrize("kind", ["conformable", "katugampola", "mfractional"])
    @pytest.mark.parametrize("t", [1.0, 2.0])
    def test_local_operators_obey(self, cfg, kind, t):
        assert abs(leibniz_residual(op(kind), LINEAR, SQUARE, t, cfg)) <= 1e-6

    def test_rl_violates(self, cfg):
        f = SmoothFunction(ShiftedPower(1, 0.0))
        ref = 2 / oracles.gamma(2.5) - 2 / oracles.gamma(1.5)
        assert ref == pytest.approx(-0.7523, abs=1e-4)
        assert leibniz_residual(op("rl-gl"), f, f, 1.0, cfg) == pytest.approx(ref, abs=2e-3)

    def test_cf_violates(self, cfg):
        res = leibniz_residual(op("cf"), LINEAR, LINEAR, 1.0, cfg)
        ref = oracles.cf_quad(lambda tau: 2 * tau, 0.5, 0.0, 1.0) - 2 * oracles.cf_linear(0.5, 0.0, 1.0)
        assert res == pytest.approx(ref, abs=1e-9)
        assert abs(res) >= 0.05


class TestLocalityProbe:
    bump = BumpPerturbation(0.3, 0.05, 0.1)

    def test_conformable_exact_zero(self, cfg):
        assert locality_probe(op("conformable"), SQUARE, self.bump, 1.0, cfg).delta == 0.0

    @pytest.mark.parametrize("kind", ["cf", "rl-gl"])
    def test_nonlocal_detects(self, cfg, kind):
        p = locality_probe(op(kind), SQUARE, self.bump, 1.0, cfg)
        assert p.delta > 1e-3
        assert p.delta == abs(p.perturbed - p.baseline)

    def test_cf_delta_against_quadrature(self, cfg):
        p = locality_probe(op("cf"), SQUARE, self.bump, 1.0, cfg)
        ref = oracles.cf_quad(lambda tau: oracles.bump_derivative(0.3, 0.05, 0.1, tau, 1), 0.5, 0.0, 1.0,
                              breaks=(0.25, 0.3, 0.35))
        assert p.delta == pytest.approx(abs(ref), rel=1e-6)

    @pytest.mark.parametrize("kind", LOCAL)
    @pytest.mark.parametrize("bump", standard_bumps(), ids=lambda b: f"c={b.center}")
    def test_battery_local(self, cfg, kind, bump):
        assert locality_probe(op(kind), SQUARE, bump, 1.0, cfg).delta <= LOCAL_CEILING

    @pytest.mark.parametrize("kind", ["cf", "rl-gl"])
    @pytest.mark.parametrize("bump", standard_bumps(), ids=lambda b: f"c={b.center}")
    def test_battery_nonlocal(self, cfg, kind, bump):
        assert locality_probe(op(kind), SQUARE, bump, 1.0, cfg).delta >= NONLOCAL_FLOOR

    @pytest.mark.parametrize("kind", ALL)
    def test_null_probe(self, cfg, kind):
        for b in standard_bumps(0.0):
            assert locality_probe(op(kind), SQUARE, b, 1.0, cfg).delta == 0.0

    def test_cf_scaling(self, cfg):
        full = locality_probe(op("cf"), SQUARE, self.bump, 1.0, cfg).delta
        half = locality_probe(op("cf"), SQUARE, replace(self.bump, amplitude=0.05), 1.0, cfg).delta
        assert half == pytest.approx(full / 2, rel=1e-2)

    @pytest.mark.parametrize("center", [0.85, 0.78, 0.04])
    def test_gap_enforced(self, cfg, center):
        with pytest.raises(DomainError):
            locality_probe(op("cf"), SQUARE, BumpPerturbation(center, 0.05, 0.1), 1.0, cfg)


class TestInitialPoint:
    def test_conformable_zero(self, cfg):
        rec = initial_point_dependence(op("conformable"), SmoothFunction(Sine(1.0)), 1.0, (0.0, 0.25, 0.5), cfg)
        assert rec.value == 0.0 and rec.passed

    def test_cf_spread(self, cfg):
        rec = initial_point_dependence(op("cf"), LINEAR, 1.0, (0.0, 0.25, 0.5), cfg)
        ref = oracles.cf_linear(0.5, 0.0, 1.0) - oracles.cf_linear(0.5, 0.5, 1.0)
        assert rec.value == pytest.approx(ref, abs=1e-9)
        assert rec.value == pytest.approx(0.4773, abs=1e-4)
        assert not rec.passed

    def test_rl_spread(self, cfg):
        rec = initial_point_dependence(op("rl-gl"), SmoothFunction(Constant(1.0)), 1.0, (0.0, 0.25, 0.5), cfg)
        ref = (0.5**-0.5 - 1.0) / oracles.gamma(0.5)
        assert ref == pytest.approx(0.2337, abs=1e-4)
        assert rec.value == pytest.approx(ref, abs=1e-5)

    def test_needs_three(self, cfg):
        with pytest.raises(ValueError):
            initial_point_dependence(op("cf"), LINEAR, 1.0, (0.0, 0.5), cfg)

    def test_t0_below_t(self, cfg):
        with pytest.raises(DomainError):
            initial_point_dependence(op("cf"), LINEAR, 1.0, (0.0, 0.5, 1.0), cfg)


class TestStateEquation:
    @pytest.mark.parametrize("f, alpha, lam", [(LINEAR, 0.5, 1.0), (SmoothFunction(Exponential(1.0)), 0.25, 2.0),
                                              (SmoothFunction(Sine(1.0)), 0.5, 1.0)])
    def test_ode_equivalence(self, cfg, f, alpha, lam):
        rec = ode_equivalence_check(f, alpha, lam, 0.0, GRID, cfg)
        assert rec.passed and rec.value <= 1e-5

    def test_ode_constant_trivial(self, cfg):
        assert ode_equivalence_check(SmoothFunction(Constant(3.0)), 0.5, 1.0, 0.0, GRID, cfg).value <= 1e-12

    @pytest.mark.parametrize("f", [LINEAR, SmoothFunction(Sine(1.0))], ids=["linear", "sine"])
    def test_accelerator(self, cfg, f):
        rec = accelerator_multiplier_check(f, 0.5, 1.0, 0.0, GRID, cfg)
        assert rec.passed and rec.value <= 1e-5

    def test_accelerator_zero(self, cfg):
        assert accelerator_multiplier_check(SmoothFunction(Constant(0.0)), 0.5, 1.0, 0.0, GRID, cfg).value == 0.0

    def test_grid_too_close(self, cfg):
        with pytest.raises(DomainError):
            ode_equivalence_check(LINEAR, 0.5, 1.0, 0.0, (5e-5,), cfg)


class TestSeriesStudy:
    def test_square_flat(self, cfg):
        rows = series_convergence_study(SmoothFunction(ShiftedPower(2, 0.0)), 0.5, 0.0, 1.0, range(2, 7), cfg)
        errs = {r[3] for r in rows}
        assert len(errs) == 1 and max(errs) <= 1e-5

    def test_constant_single_term(self, cfg):
        (row,) = series_convergence_study(SmoothFunction(Constant(1.0)), 0.5, 0.0, 1.0, [0], cfg)
        assert row[0] == 0 and row[3] <= 1e-6

    def test_exponential_t1(self, cfg):
        rows = series_convergence_study(SmoothFunction(Exponential(1.0)), 0.5, 0.0, 1.0, [2, 4, 6, 8], cfg)
        errs = [r[3] for r in rows]
        assert all(b < a for a, b in zip(errs, errs[1:]))
        ref = [abs(float(oracles.rl_exp_series(0.5, 0.0, 1.0, K)) - oracles.rl_exp(0.5, 0.0, 1.0)) for K in (2, 4, 6, 8)]
        assert errs == pytest.approx(ref, abs=1e-6)

    def test_exponential_t2_nontermination(self, cfg):
        rows = series_convergence_study(SmoothFunction(Exponential(1.0)), 0.5, 0.0, 2.0, range(2, 9), cfg)
        errs = [r[3] for r in rows]
        assert all(b < a for a, b in zip(errs, errs[1:]))
        assert errs[-1] > 1e-4


class TestClassification:
    @pytest.mark.parametrize("kind", ALL)
    def test_expected_verdicts(self, cfg, kind):
        report = classify_operator(op(kind), cfg)
        assert report.verdict is expected_verdict(OperatorKind(kind))
        if kind == "cf":
            assert report.qualifier == STATE_AUGMENTED
            assert not report.pointwise_local
            assert report.test("probe_min_delta").passed
        elif kind == "rl-gl":
            assert report.qualifier == ""
            assert report.test("series_nontermination").passed
        else:
            assert report.pointwise_local and report.qualifier == ""

    def test_reduces_requires_passing_tests(self, cfg):
        for kind in LOCAL:
            r = classify_operator(op(kind), cfg)
            assert all(t.passed for t in r.tests if t.role in ("reduction", "locality", "t0", "null"))

    def test_abs_tol_separation_enforced(self):
        with pytest.raises(ValueError):
            classify_operator(op("conformable"), EvalConfig(abs_tol=2e-4))

    @pytest.mark.parametrize("kind", ALL)
    def test_tightening_never_yields_nonlocal(self, kind):
        loose = classify_operator(op(kind), EvalConfig(abs_tol=1e-4))
        tight = classify_operator(op(kind), EvalConfig(abs_tol=1e-14))
        if loose.verdict is Verdict.REDUCES:
            assert tight.verdict in (Verdict.REDUCES, Verdict.INCONCLUSIVE)

    def test_evaluator_failure_is_inconclusive(self):
        report = classify_operator(op("conformable"), EvalConfig(abs_tol=1e-30, rel_tol=1e-30))
        assert report.verdict is Verdict.INCONCLUSIVE
        assert any(math.isinf(t.value) and not t.passed for t in report.tests)

    def test_deterministic(self, cfg):
        assert classify_operator(op("cf"), cfg) == classify_operator(op("cf"), cfg)

    def test_record_directions(self):
        assert TestRecord.at_most("a", "r", 1.0, 1.0).passed
        assert not TestRecord.at_least("a", "r", 0.5, 1.0).passed
        assert math.isinf(TestRecord("a", "r", float("inf"), 1.0, False).value)


class TestTestedEquation:
    def test_lambda_nonzero(self):
        with pytest.raises(DomainError):
            TestedEquation(0.0, op("cf"))

    def test_cf_state_residual(self, cfg):
        # lam*CF(x) - Y = 0 when Y is the state built from x
        eq = TestedEquation(2.0, op("cf"), nu=lambda t: -1.0)
        y = SmoothFunction(Constant(2.0 * oracles.cf_linear(0.5, 0.0, 1.0)))
        assert eq.residual(LINEAR, y, 1.0, cfg) == pytest.approx(0.0, abs=1e-9)


@settings(max_examples=15, deadline=None)
@given(alpha=st.floats(0.1, 0.9), t=st.floats(0.2, 5.0))
def test_conformable_leibniz_property(alpha, t):
    cfg = EvalConfig()
    res = leibniz_residual(op("conformable", alpha), LINEAR, SmoothFunction(Sine(1.0)), t, cfg)
    assert abs(res) <= 1e-6 * max(1.0, t)


@settings(max_examples=10, deadline=None)
@given(amplitude=st.floats(-1.0, 1.0).filter(lambda a: abs(a) > 1e-3), center=st.floats(0.15, 0.6))
def test_cf_probe_linear_in_amplitude(amplitude, center):
    cfg = EvalConfig()
    base = locality_probe(op("cf"), SQUARE, BumpPerturbation(center, 0.05, 1.0), 1.0, cfg).delta
    scaled = locality_probe(op("cf"), SQUARE, BumpPerturbation(center, 0.05, amplitude), 1.0, cfg).delta
    assert scaled == pytest.approx(abs(amplitude) * base, rel=1e-6, abs=1e-12)
