"""Executable locality tests and per-operator verdicts.

An operator is classified from three kinds of evidence:

* reduction checks: the raw definition agrees with a finite integer-order
  form (or, for Caputo-Fabrizio, with a first-order ODE in an extra state);
* history probes: a bump placed well before the evaluation time changes the
  value, and moving the lower terminal ``t0`` changes the value;
* series non-termination: truncating the Riemann-Liouville expansion in
  integer-order derivatives leaves a residual no finite order removes.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .core.config import EvalConfig
from .core.functions import (
    K_MAX,
    BumpPerturbation,
    Constant,
    Exponential,
    Polynomial,
    Power,
    ShiftedPower,
    Sine,
    SmoothFunction,
    apply_bump,
)
from .errors import DomainError, FracVerifyError
from .local_ops import (
    KG_ZERO_THRESHOLD,
    conformable_limit,
    conformable_reduced,
    katugampola_limit,
    kg_local_derivative,
    mfractional_limit,
    mfractional_reduced,
)
from .nonlocal_ops import (
    CFSpec,
    caputo_fabrizio,
    cf_constants,
    cf_via_ode,
    rl_grunwald_letnikov,
    rl_series,
    unit_normalization,
)

__all__ = [
    "LOCAL_CEILING",
    "NONLOCAL_FLOOR",
    "OperatorKind",
    "OperatorSpec",
    "ProbeResult",
    "TestRecord",
    "TestedEquation",
    "Verdict",
    "VerificationReport",
    "accelerator_multiplier_check",
    "classify_operator",
    "expected_verdict",
    "initial_point_dependence",
    "leibniz_residual",
    "locality_probe",
    "ode_equivalence_check",
    "reduction_check",
    "series_convergence_study",
    "standard_bumps",
    "standard_functions",
]

LOCAL_CEILING = 1e-10
NONLOCAL_FLOOR = 1e-3
STATE_AUGMENTED = "state-augmented"
DIFF_STEP = 1e-4

STANDARD_ALPHAS = (0.1, 0.3, 0.5, 0.7, 0.9)
STANDARD_TIMES = (0.5, 1.0, 2.0, 4.0)


def standard_functions() -> tuple[SmoothFunction, ...]:
    return tuple(SmoothFunction(k) for k in (Power(1), Power(2), Power(3), Exponential(1.0), Sine(1.0)))


def catalog_functions() -> tuple[SmoothFunction, ...]:
    """One representative of every catalog member (all smooth)."""
    kinds = (
        Constant(2.0),
        Power(1),
        Power(2),
        Power(3),
        ShiftedPower(2, 0.25),
        Exponential(1.0),
        Sine(1.0),
        Polynomial((1.0, -2.0, 0.5, 1.0)),
    )
    return tuple(SmoothFunction(k) for k in kinds)


def standard_bumps(amplitude: float = 0.1) -> tuple[BumpPerturbation, ...]:
    return tuple(BumpPerturbation(c, 0.05, amplitude) for c in (0.2, 0.3, 0.5))


class OperatorKind(str, enum.Enum):
    CONFORMABLE = "conformable"
    KATUGAMPOLA = "katugampola"
    MFRACTIONAL = "mfractional"
    KOLWANKAR_GANGAL = "kg"
    CAPUTO_FABRIZIO = "cf"
    RIEMANN_LIOUVILLE = "rl-gl"


LOCAL_KINDS = frozenset(
    {OperatorKind.CONFORMABLE, OperatorKind.KATUGAMPOLA, OperatorKind.MFRACTIONAL, OperatorKind.KOLWANKAR_GANGAL}
)


@dataclass(frozen=True)
class OperatorSpec:
    """Any of the six operators, evaluable through one interface.

    ``t0`` is ignored by the operators that have no lower terminal; for the
    Kolwankar-Gangal operator the evaluation time is the base point.
    """

    kind: OperatorKind
    alpha: float
    t0: float = 0.0
    beta: float = 1.0
    m: int = 1
    normalization: Callable[[float], float] = unit_normalization

    def __post_init__(self):
        object.__setattr__(self, "kind", OperatorKind(self.kind))
        if self.kind in (OperatorKind.KOLWANKAR_GANGAL, OperatorKind.RIEMANN_LIOUVILLE):
            if not self.alpha > 0 or float(self.alpha).is_integer():
                raise DomainError(f"{self.kind.value} order must be positive and non-integer, got {self.alpha}")
        elif not 0 < self.alpha < 1:
            raise DomainError(f"{self.kind.value} order must lie in (0, 1), got {self.alpha}")

    def with_t0(self, t0: float) -> "OperatorSpec":
        return OperatorSpec(self.kind, self.alpha, t0, self.beta, self.m, self.normalization)

    def evaluate(self, f: SmoothFunction, t: float, cfg: EvalConfig) -> float:
        k = self.kind
        if k is OperatorKind.CONFORMABLE:
            return conformable_limit(f, self.alpha, t, cfg)
        if k is OperatorKind.KATUGAMPOLA:
            return katugampola_limit(f, self.alpha, t, cfg)
        if k is OperatorKind.MFRACTIONAL:
            return mfractional_limit(f, self.alpha, self.beta, self.m, t, cfg)
        if k is OperatorKind.KOLWANKAR_GANGAL:
            return kg_local_derivative(f, self.alpha, t, cfg)
        if k is OperatorKind.CAPUTO_FABRIZIO:
            return caputo_fabrizio(f, CFSpec(self.alpha, self.t0, self.normalization), t, cfg)
        return rl_grunwald_letnikov(f, self.alpha, self.t0, t, cfg.gl_steps)

    def reduced(self, f: SmoothFunction, t: float) -> float:
        """Value of the claimed integer-order form (zero for KG on smooth input)."""
        k = self.kind
        if k in (OperatorKind.CONFORMABLE, OperatorKind.KATUGAMPOLA):
            return conformable_reduced(f, self.alpha, t)
        if k is OperatorKind.MFRACTIONAL:
            return mfractional_reduced(f, self.alpha, self.beta, t)
        if k is OperatorKind.KOLWANKAR_GANGAL:
            return 0.0
        raise DomainError(f"no finite integer-order form is claimed for {k.value}")

    def to_dict(self) -> dict:
        d = {"kind": self.kind.value, "alpha": self.alpha}
        if self.kind in (OperatorKind.CAPUTO_FABRIZIO, OperatorKind.RIEMANN_LIOUVILLE):
            d["t0"] = self.t0
        if self.kind is OperatorKind.MFRACTIONAL:
            d["beta"] = self.beta
            d["m"] = self.m
        if self.kind is OperatorKind.CAPUTO_FABRIZIO:
            d["normalization"] = getattr(self.normalization, "__name__", repr(self.normalization))
        return d


@dataclass(frozen=True)
class TestedEquation:
    """Coefficients of ``lam*D(X)(t) + mu(t)X(t) + nu(t)Y(t) + eta(t,t0)Y(t0) = 0``."""

    __test__ = False

    lam: float
    operator: OperatorSpec
    mu: Callable[[float], float] = lambda t: 0.0
    nu: Callable[[float], float] = lambda t: 1.0
    eta: Callable[[float, float], float] = lambda t, t0: 0.0

    def __post_init__(self):
        if self.lam == 0:
            raise DomainError("the tested operator must appear: lam != 0")

    def residual(self, x: SmoothFunction, y: SmoothFunction, t: float, cfg: EvalConfig) -> float:
        op = self.operator
        return (
            self.lam * op.evaluate(x, t, cfg)
            + self.mu(t) * x(t)
            + self.nu(t) * y(t)
            + self.eta(t, op.t0) * y(op.t0)
        )


class Verdict(str, enum.Enum):
    REDUCES = "ReducesToIntegerOrder"
    NONLOCAL = "ExhibitsNonlocality"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class TestRecord:
    """One named check.  ``passed`` means the check met its threshold in the
    direction given by ``kind``: ``"max"`` (value <= threshold) or ``"min"``
    (value >= threshold)."""

    __test__ = False

    name: str
    role: str
    value: float
    threshold: float
    passed: bool
    kind: str = "max"
    detail: str = ""

    @classmethod
    def at_most(cls, name: str, role: str, value: float, threshold: float, detail: str = "") -> "TestRecord":
        return cls(name, role, float(value), float(threshold), bool(value <= threshold), "max", detail)

    @classmethod
    def at_least(cls, name: str, role: str, value: float, threshold: float, detail: str = "") -> "TestRecord":
        return cls(name, role, float(value), float(threshold), bool(value >= threshold), "min", detail)


@dataclass(frozen=True)
class ProbeResult:
    baseline: float
    perturbed: float
    delta: float
    bump: BumpPerturbation
    evaluation_time: float


@dataclass(frozen=True)
class VerificationReport:
    operator: dict
    tests: tuple[TestRecord, ...]
    verdict: Verdict
    qualifier: str = ""
    pointwise_local: bool = True
    config: dict = field(default_factory=dict)
    notes: tuple[str, ...] = ()

    def test(self, name: str) -> TestRecord:
        for rec in self.tests:
            if rec.name == name:
                return rec
        raise KeyError(name)


def reduction_check(
    op: OperatorSpec,
    f_set: Iterable[SmoothFunction],
    alpha_set: Iterable[float],
    t_set: Iterable[float],
    cfg: EvalConfig,
    reduced: Callable[[SmoothFunction, float, float], float] | None = None,
    name: str = "reduction",
) -> TestRecord:
    """Largest ``|definition - reduced form|`` over the sweep.

    Each point must satisfy ``|diff| <= rel_tol * max(1, |reduced|)``; the
    KG zero branch uses :data:`KG_ZERO_THRESHOLD` instead.  ``reduced`` takes
    ``(f, alpha, t)`` and defaults to the operator's own reduced form.
    Evaluator failures count as a failed check.
    """
    f_set, alpha_set, t_set = tuple(f_set), tuple(alpha_set), tuple(t_set)
    if not (f_set and alpha_set and t_set):
        raise ValueError("reduction sweep sets must be non-empty")
    is_kg = op.kind is OperatorKind.KOLWANKAR_GANGAL and reduced is None
    worst, worst_at, ok = 0.0, "", True
    for f, alpha, t in itertools.product(f_set, alpha_set, t_set):
        spec = OperatorSpec(op.kind, alpha, op.t0, op.beta, op.m, op.normalization)
        try:
            lhs = spec.evaluate(f, t, cfg)
            rhs = reduced(f, alpha, t) if reduced else spec.reduced(f, t)
        except FracVerifyError as exc:
            return TestRecord(name, "reduction", float("inf"), cfg.rel_tol, False, "max",
                              f"{f.descriptor} alpha={alpha!r} t={t!r}: {exc}")
        diff = abs(lhs - rhs)
        limit = KG_ZERO_THRESHOLD if is_kg else cfg.rel_tol * max(1.0, abs(rhs))
        ok &= diff <= limit
        if diff >= worst:
            worst, worst_at = diff, f"{f.descriptor} alpha={alpha!r} t={t!r}"
    threshold = KG_ZERO_THRESHOLD if is_kg else cfg.rel_tol
    return TestRecord(name, "reduction", worst, threshold, bool(ok), "max", f"worst at {worst_at}")


def leibniz_residual(op: OperatorSpec, f: SmoothFunction, g: SmoothFunction, t: float, cfg: EvalConfig) -> float:
    """``op(f*g)(t) - f(t)*op(g)(t) - g(t)*op(f)(t)``."""
    return op.evaluate(f * g, t, cfg) - f(t) * op.evaluate(g, t, cfg) - g(t) * op.evaluate(f, t, cfg)


def locality_probe(
    op: OperatorSpec, f: SmoothFunction, bump: BumpPerturbation, t: float, cfg: EvalConfig
) -> ProbeResult:
    """Evaluate ``op`` on ``f`` and on ``f`` plus a bump placed in the past.

    The bump support must lie strictly inside ``(t0, t - 4*radius)``.
    """
    lo, hi = bump.support
    gap = 4.0 * bump.radius
    if not (lo > op.t0 and hi < t - gap):
        raise DomainError(
            f"bump support [{lo}, {hi}] must lie strictly inside ({op.t0}, {t - gap}) for t={t}"
        )
    baseline = op.evaluate(f, t, cfg)
    perturbed = op.evaluate(apply_bump(f, bump), t, cfg)
    return ProbeResult(baseline, perturbed, abs(perturbed - baseline), bump, t)


def initial_point_dependence(
    op: OperatorSpec, f: SmoothFunction, t: float, t0_set: Sequence[float], cfg: EvalConfig
) -> TestRecord:
    """Largest pairwise difference of ``op`` values across lower terminals."""
    if len(t0_set) < 3:
        raise ValueError("t0_set needs at least three members")
    if any(t0 >= t for t0 in t0_set):
        raise DomainError("every t0 must be below t")
    values = [op.with_t0(t0).evaluate(f, t, cfg) for t0 in t0_set]
    spread = max(values) - min(values)
    return TestRecord.at_most("t0_spread", "t0", spread, cfg.abs_tol,
                              f"{f.descriptor} t={t!r} t0={list(t0_set)!r}")


def _state(f: SmoothFunction, spec: CFSpec, lam: float, t: float, cfg: EvalConfig) -> float:
    # Y(t) = eta(t,t0)*Y(t0) + lam*CF(f)(t) with Y(t0) = 0
    return lam * caputo_fabrizio(f, spec, t, cfg)


def ode_equivalence_check(
    f: SmoothFunction,
    alpha: float,
    lam: float,
    t0: float,
    t_grid: Sequence[float],
    cfg: EvalConfig,
    normalization: Callable[[float], float] = unit_normalization,
    threshold: float = 1e-5,
) -> TestRecord:
    """Max over ``t_grid`` of ``|Y' - A*Y - B*f'|`` with ``Y = lam*CF(f)``."""
    spec = CFSpec(alpha, t0, normalization)
    c = cf_constants(alpha, lam, normalization)
    worst = 0.0
    for t in t_grid:
        if t - DIFF_STEP <= t0:
            raise DomainError(f"grid point {t} too close to t0={t0} for central differences")
        dy = (_state(f, spec, lam, t + DIFF_STEP, cfg) - _state(f, spec, lam, t - DIFF_STEP, cfg)) / (2 * DIFF_STEP)
        res = dy - c.A * _state(f, spec, lam, t, cfg) - c.B * f.derivative(t, 1)
        worst = max(worst, abs(res))
    return TestRecord.at_most("ode_equivalence", "ode", worst, threshold,
                              f"{f.descriptor} alpha={alpha!r} lam={lam!r}")


def accelerator_multiplier_check(
    f: SmoothFunction,
    alpha: float,
    lam: float,
    t0: float,
    t_grid: Sequence[float],
    cfg: EvalConfig,
    normalization: Callable[[float], float] = unit_normalization,
    threshold: float = 1e-5,
) -> TestRecord:
    """Max over ``t_grid`` of ``|Z' - A*Z - C*f|`` with ``Z = Y - B*f``."""
    spec = CFSpec(alpha, t0, normalization)
    c = cf_constants(alpha, lam, normalization)

    def z(t: float) -> float:
        return _state(f, spec, lam, t, cfg) - c.B * f(t)

    worst = 0.0
    for t in t_grid:
        if t - DIFF_STEP <= t0:
            raise DomainError(f"grid point {t} too close to t0={t0} for central differences")
        dz = (z(t + DIFF_STEP) - z(t - DIFF_STEP)) / (2 * DIFF_STEP)
        worst = max(worst, abs(dz - c.A * z(t) - c.C * f(t)))
    return TestRecord.at_most("accelerator_multiplier", "ode", worst, threshold,
                              f"{f.descriptor} alpha={alpha!r} lam={lam!r}")


def series_convergence_study(
    f: SmoothFunction, alpha: float, t0: float, t: float, K_range: Iterable[int], cfg: EvalConfig
) -> list[tuple[int, float, float, float]]:
    """Rows ``(K, series value, GL reference, |difference|)``."""
    ref = rl_grunwald_letnikov(f, alpha, t0, t, cfg.gl_steps)
    rows = []
    for K in K_range:
        s = rl_series(f, alpha, t0, t, K)
        rows.append((K, s, ref, abs(s - ref)))
    return rows


def _two_route_check(op: OperatorSpec, cfg: EvalConfig) -> TestRecord:
    worst = 0.0
    for f, alpha, t in itertools.product(catalog_functions(), (0.25, 0.5, 0.75), (0.5, 1.0, 2.0)):
        spec = CFSpec(alpha, 0.0, op.normalization)
        worst = max(worst, abs(caputo_fabrizio(f, spec, t, cfg) - cf_via_ode(f, spec, 1.0, t, cfg)))
    return TestRecord.at_most("cf_two_route", "ode", worst, 1e-7, "quadrature vs RK4 state equation")


def expected_verdict(kind: OperatorKind) -> Verdict:
    return Verdict.NONLOCAL if OperatorKind(kind) is OperatorKind.RIEMANN_LIOUVILLE else Verdict.REDUCES


def classify_operator(op: OperatorSpec, cfg: EvalConfig | None = None) -> VerificationReport:
    """Run the test battery for ``op`` and derive a verdict.

    ``ReducesToIntegerOrder``: every reduction check passes and probes and
    t0-spreads stay below ``cfg.abs_tol`` (pointwise local), or the operator
    matches a first-order system with one extra state (qualifier
    ``"state-augmented"``).  ``ExhibitsNonlocality``: probes and t0-spread
    reach :data:`NONLOCAL_FLOOR` and the truncated integer-order series never
    reaches the reference.  Anything else is ``Inconclusive``.
    """
    cfg = cfg or EvalConfig()
    if cfg.abs_tol * 10 > NONLOCAL_FLOOR:
        raise ValueError(f"abs_tol={cfg.abs_tol} must stay 10x below the nonlocal floor {NONLOCAL_FLOOR}")
    op = op.with_t0(0.0)
    tests: list[TestRecord] = []
    notes: list[str] = []
    t_eval = 1.0

    if op.kind in LOCAL_KINDS:
        if op.kind is OperatorKind.KOLWANKAR_GANGAL:
            tests.append(reduction_check(op, catalog_functions(), (op.alpha,), (0.5, 1.0, 2.0), cfg))
            notes.append("reduction: smooth inputs land on the zero branch")
        else:
            tests.append(reduction_check(op, standard_functions(), (op.alpha,), STANDARD_TIMES, cfg))

    if op.kind is OperatorKind.CAPUTO_FABRIZIO:
        grid = (0.1, 0.5, 1.0, 1.5, 2.0)
        tests.append(_two_route_check(op, cfg))
        for f in (SmoothFunction(Power(1)), SmoothFunction(Exponential(1.0)), SmoothFunction(Sine(1.0))):
            rec = ode_equivalence_check(f, op.alpha, 1.0, 0.0, grid, cfg, op.normalization)
            tests.append(_renamed(rec, f"ode_equivalence[{f.descriptor}]"))
            rec = accelerator_multiplier_check(f, op.alpha, 1.0, 0.0, grid, cfg, op.normalization)
            tests.append(_renamed(rec, f"accelerator_multiplier[{f.descriptor}]"))
        notes.append("state equation uses Y(t0) = 0; the memory factor rate is taken equal to A(alpha)")
        notes.append(f"normalization m(alpha): {getattr(op.normalization, '__name__', 'custom')}")

    probe_f = SmoothFunction(Power(2))
    try:
        deltas = [locality_probe(op, probe_f, b, t_eval, cfg).delta for b in standard_bumps()]
        null = max(locality_probe(op, probe_f, b, t_eval, cfg).delta for b in standard_bumps(0.0))
        tests.append(TestRecord.at_most("probe_max_delta", "locality", max(deltas), cfg.abs_tol,
                                        f"{probe_f.descriptor} t={t_eval!r} battery centers 0.2,0.3,0.5"))
        tests.append(TestRecord.at_least("probe_min_delta", "history", min(deltas), NONLOCAL_FLOOR))
        tests.append(TestRecord.at_most("probe_null", "null", null, 0.0))
    except FracVerifyError as exc:
        tests.append(_failed("probe", "locality", exc))

    try:
        spread = initial_point_dependence(op, SmoothFunction(Power(1)), t_eval, (0.0, 0.25, 0.5), cfg)
        tests.append(spread)
        tests.append(TestRecord.at_least("t0_spread_floor", "history", spread.value, NONLOCAL_FLOOR))
    except FracVerifyError as exc:
        tests.append(_failed("t0_spread", "t0", exc))

    f, g = SmoothFunction(Power(1)), SmoothFunction(Power(2))
    leib_tol = KG_ZERO_THRESHOLD if op.kind is OperatorKind.KOLWANKAR_GANGAL else cfg.rel_tol
    for t in (1.0, 2.0):
        try:
            res = leibniz_residual(op, f, g, t, cfg)
        except FracVerifyError as exc:
            tests.append(_failed(f"leibniz[t={t!r}]", "leibniz", exc))
            continue
        tests.append(TestRecord.at_most(f"leibniz[t={t!r}]", "leibniz", abs(res), leib_tol, "power:1 * power:2"))

    if op.kind is OperatorKind.RIEMANN_LIOUVILLE:
        rows = series_convergence_study(SmoothFunction(Exponential(1.0)), op.alpha, 0.0, 2.0, range(2, K_MAX + 1), cfg)
        errs = [r[3] for r in rows]
        decreasing = all(b < a for a, b in zip(errs, errs[1:]))
        tests.append(TestRecord("series_nontermination", "series", errs[-1], 1e-4,
                                bool(decreasing and errs[-1] >= 1e-4), "min",
                                f"exp:1.0 t0=0 t=2 K=2..{K_MAX}; decreasing={decreasing}"))
        notes.append("series coefficients use (t-t0)**(k-alpha)/Gamma(k-alpha+1)")

    by_role: dict[str, list[TestRecord]] = {}
    for rec in tests:
        by_role.setdefault(rec.role, []).append(rec)
    passed = lambda role: role in by_role and all(r.passed for r in by_role[role])
    pointwise_local = passed("locality") and passed("t0")
    history = passed("history")

    qualifier = ""
    if passed("reduction") and pointwise_local:
        verdict = Verdict.REDUCES
    elif passed("ode"):
        verdict, qualifier = Verdict.REDUCES, STATE_AUGMENTED
    elif history and passed("series"):
        verdict = Verdict.NONLOCAL
    else:
        verdict = Verdict.INCONCLUSIVE

    return VerificationReport(
        operator=op.to_dict(),
        tests=tuple(tests),
        verdict=verdict,
        qualifier=qualifier,
        pointwise_local=pointwise_local,
        config=cfg.to_dict(),
        notes=tuple(notes),
    )


def _renamed(rec: TestRecord, name: str) -> TestRecord:
    return TestRecord(name, rec.role, rec.value, rec.threshold, rec.passed, rec.kind, rec.detail)


def _failed(name: str, role: str, exc: Exception) -> TestRecord:
    return TestRecord(name, role, float("inf"), 0.0, False, "max", f"{type(exc).__name__}: {exc}")
