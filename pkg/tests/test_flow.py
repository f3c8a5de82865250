"""Flow simulator: exact solutions, numeric integration, monitors, terminal events."""

import numpy as np
import pytest

from pinchflow import (
    Axisymmetric,
    DomainError,
    FixedPointError,
    FlowConfig,
    GeodesicSphere,
    PinchingParams,
    ProductSn1S1,
    TerminalKind,
    curvature_of,
    default_epsilon,
    flow_axisymmetric,
    flow_ode_numeric,
    flow_product_exact,
    monitors_update,
)
from pinchflow.axisym import perturbed_product_profile, product_profile
from pinchflow.flow import initial_r1sq, product_r1sq_exact
from pinchflow.verify import reaction_residuals

P10 = PinchingParams(n=10, c=1.0)


def test_exact_product_reference_trajectory():
    # d = 1/6 and collapse at log(6)/20 for the quarter-split initial radius
    initial = ProductSn1S1.from_r1sq(0.75, P10)
    trace = flow_product_exact(initial, P10, FlowConfig(epsilon=0.0, t_max=1.0))
    assert trace.terminal.kind is TerminalKind.GREAT_CIRCLE_COLLAPSE
    assert trace.terminal.time == pytest.approx(np.log(6.0) / 20.0, abs=1e-14)
    ts = trace.times
    expected = 0.9 * (1.0 - np.exp(20.0 * ts) / 6.0)
    got = np.array([initial_r1sq(s.state, P10) for s in trace.samples])
    assert np.max(np.abs(got - expected)) < 1e-12


def test_exact_product_rejects_stationary_and_fat_states():
    with pytest.raises(FixedPointError):
        flow_product_exact(ProductSn1S1.from_r1sq(0.9, P10), P10)
    with pytest.raises(DomainError):
        flow_product_exact(ProductSn1S1.from_r1sq(0.95, P10), P10)


def test_numeric_product_matches_exact():
    initial = ProductSn1S1.from_r1sq(0.75, P10)
    config = FlowConfig(epsilon=0.0, tol=1e-12, t_max=1.0)
    trace = flow_ode_numeric(initial, P10, config)
    assert trace.terminal.kind is TerminalKind.GREAT_CIRCLE_COLLAPSE
    assert trace.terminal.time == pytest.approx(np.log(6.0) / 20.0, abs=1e-7)
    kept = [s for s in trace.samples if s.t <= 0.089]
    errs = [
        abs(initial_r1sq(s.state, P10) - product_r1sq_exact(initial, P10, s.t)) for s in kept
    ]
    assert max(errs) <= 1e-8


def test_minimal_torus_is_stationary():
    minimal = ProductSn1S1.from_r1sq(0.9, P10)
    trace = flow_ode_numeric(minimal, P10, FlowConfig(epsilon=0.0, tol=1e-12, t_max=1.0))
    drift = max(abs(initial_r1sq(s.state, P10) - 0.9) for s in trace.samples)
    assert drift <= 1e-10
    assert trace.terminal.kind is TerminalKind.HORIZON_REACHED


@pytest.mark.parametrize("n,c,rho_frac", [(3, 1.0, 0.3), (10, 1.0, 0.35), (5, 0.25, 0.4)])
def test_sphere_collapse_time_analytic(n, c, rho_frac):
    params = PinchingParams(n=n, c=c)
    rho0 = rho_frac * np.pi / np.sqrt(c)
    trace = flow_ode_numeric(GeodesicSphere(rho=rho0), params, FlowConfig(tol=1e-12, t_max=10.0 / c))
    expected = -np.log(np.cos(np.sqrt(c) * rho0)) / (n * c)
    assert trace.terminal.kind is TerminalKind.ROUND_POINT
    assert trace.terminal.time == pytest.approx(expected, abs=1e-8 / c)


def test_equatorial_sphere_reports_totally_geodesic():
    params = PinchingParams(n=3, c=1.0)
    trace = flow_ode_numeric(
        GeodesicSphere(rho=np.pi / 2.0), params, FlowConfig(epsilon=0.0, t_max=2.0)
    )
    assert trace.terminal.kind is TerminalKind.TOTALLY_GEODESIC


def test_large_sphere_collapses_to_antipodal_point():
    params = PinchingParams(n=4, c=1.0)
    trace = flow_ode_numeric(
        GeodesicSphere(rho=0.7 * np.pi), params, FlowConfig(tol=1e-12, t_max=10.0)
    )
    assert trace.terminal.kind is TerminalKind.ROUND_POINT


def test_fat_product_blows_up():
    trace = flow_ode_numeric(
        ProductSn1S1.from_r1sq(0.95, P10), P10, FlowConfig(epsilon=0.0, tol=1e-10, t_max=5.0)
    )
    assert trace.terminal.kind is TerminalKind.BLOWUP


def test_reaction_equations_along_trajectories():
    config = FlowConfig(epsilon=0.0, tol=1e-12, t_max=10.0, dt_initial=2e-4)
    for state in (ProductSn1S1.from_r1sq(0.72, P10), GeodesicSphere(rho=1.1)):
        trace = flow_ode_numeric(state, P10, config)
        res_H, res_h2 = reaction_residuals(trace, P10)
        assert res_H.max() < 1e-6
        assert res_h2.max() < 1e-6


def test_weak_equality_preserved_along_product_flow():
    trace = flow_product_exact(
        ProductSn1S1.from_r1sq(0.75, P10), P10, FlowConfig(epsilon=0.0, t_max=1.0)
    )
    h2 = np.array([m.h2_max for m in trace.monitors])
    gam = np.array([m.gamma_min for m in trace.monitors])
    assert np.max(np.abs(h2 - gam) / gam) < 1e-7


def test_default_epsilon_gives_factor_two_slack():
    state = GeodesicSphere(rho=0.6)
    eps = default_epsilon(state, P10)
    data = curvature_of(state, P10)
    record = monitors_update(P10, FlowConfig(epsilon=eps), data, 0.0)
    from pinchflow.thresholds import family

    x = float(data.H) ** 2
    g, _, _, _ = family(P10).gamma(x)
    assert record.U_max == pytest.approx(-0.5 * (g - float(data.h_norm2)), rel=1e-9)


def test_monitor_umbilic_state_has_zero_decay_ratio():
    data = curvature_of(GeodesicSphere(rho=0.9), P10)
    record = monitors_update(P10, FlowConfig(epsilon=0.0), data, 0.3)
    assert record.f_sigma == 0.0
    assert record.g_sigma == 0.0


def test_monitor_weak_equality_flags_epsilon_slack():
    data = curvature_of(ProductSn1S1.from_r1sq(0.75, P10), P10)
    eps = 0.02
    record = monitors_update(P10, FlowConfig(epsilon=eps), data, 0.0)
    from pinchflow.thresholds import family

    w, _, _ = family(P10).omega(float(data.H) ** 2)
    assert record.U_max == pytest.approx(eps * w, rel=1e-9)
    assert record.U_max > 0.0  # outside the strict regime, report-only


def test_sphere_flows_preserve_pinching():
    for n, c, frac in [(3, 1.0, 0.3), (10, 1.0, 0.45), (7, 4.0, 0.25)]:
        params = PinchingParams(n=n, c=c)
        trace = flow_ode_numeric(
            GeodesicSphere(rho=frac * np.pi / np.sqrt(c)), params,
            FlowConfig(tol=1e-10, t_max=2.0 / c),
        )
        U = np.array([m.U_max for m in trace.monitors])
        assert np.all(U < 0.0)


def test_axisymmetric_circle_tracks_exact_product():
    phi, xi = product_profile(P10, 0.75, n_points=128)
    t_stop = np.log((1.0 - 0.1 / 0.9) / (1.0 / 6.0)) / 20.0  # r1^2 reaches 0.1
    trace = flow_axisymmetric(
        Axisymmetric(np.stack([phi, xi], axis=1)), P10, FlowConfig(epsilon=0.0, t_max=t_stop)
    )
    initial = ProductSn1S1.from_r1sq(0.75, P10)
    rel = [
        abs(float(np.mean(np.sin(s.state.phi) ** 2)) - product_r1sq_exact(initial, P10, s.t))
        / product_r1sq_exact(initial, P10, s.t)
        for s in trace.samples
    ]
    assert max(rel) <= 1e-3


def test_axisymmetric_minimal_torus_stationary():
    phi, xi = product_profile(P10, 0.9, n_points=64)
    trace = flow_axisymmetric(
        Axisymmetric(np.stack([phi, xi], axis=1)), P10, FlowConfig(epsilon=0.0, t_max=1.0)
    )
    drift = max(abs(float(np.mean(np.sin(s.state.phi) ** 2)) - 0.9) for s in trace.samples)
    assert drift <= 1e-5
    assert trace.terminal.kind is TerminalKind.HORIZON_REACHED


def test_axisymmetric_collapse_detected_with_accurate_time():
    phi, xi = product_profile(P10, 0.75, n_points=128)
    trace = flow_axisymmetric(
        Axisymmetric(np.stack([phi, xi], axis=1)), P10, FlowConfig(epsilon=0.0, t_max=0.2)
    )
    assert trace.terminal.kind is TerminalKind.GREAT_CIRCLE_COLLAPSE
    assert trace.terminal.time == pytest.approx(np.log(6.0) / 20.0, abs=1e-5)


def test_integrator_error_scales_at_design_order():
    # halving the step bound must shrink the numeric-vs-exact error far
    # faster than linearly (embedded 5(4) pair)
    initial = ProductSn1S1.from_r1sq(0.7, P10)
    errors = []
    for h in (4e-3, 2e-3):
        config = FlowConfig(epsilon=0.0, tol=1e-3, t_max=0.05, dt_initial=h)
        trace = flow_ode_numeric(initial, P10, config)
        errors.append(
            max(
                abs(initial_r1sq(s.state, P10) - product_r1sq_exact(initial, P10, s.t))
                for s in trace.samples
            )
        )
    assert errors[0] / errors[1] > 8.0


def test_perturbed_circle_is_flagged_not_strict():
    # no torus-type state can be strictly pinched; the monitor reports U > 0
    phi, xi = perturbed_product_profile(P10, 0.75, amplitude=0.05, mode=3, n_points=96)
    state = Axisymmetric(np.stack([phi, xi], axis=1))
    trace = flow_axisymmetric(state, P10, FlowConfig(epsilon=0.01, t_max=0.02))
    U = np.array([m.U_max for m in trace.monitors])
    assert np.all(U > 0.0)


def test_step_underflow_raises():
    from pinchflow import StepUnderflow

    phi, xi = product_profile(P10, 0.75, n_points=64)
    state = Axisymmetric(np.stack([phi, xi], axis=1))
    with pytest.raises(StepUnderflow):
        flow_axisymmetric(state, P10, FlowConfig(epsilon=0.0, t_max=0.1, dt_min=1.0))


def test_flow_config_validation():
    with pytest.raises(DomainError):
        FlowConfig(sigma=1.5).validate(P10)
    with pytest.raises(DomainError):
        FlowConfig(eta=0.2).validate(P10)  # 1/n = 0.1
    with pytest.raises(DomainError):
        FlowConfig(epsilon=-0.1).validate(P10)


def test_trace_times_strictly_increase():
    trace = flow_ode_numeric(
        ProductSn1S1.from_r1sq(0.75, P10), P10, FlowConfig(epsilon=0.0, tol=1e-10, t_max=1.0)
    )
    ts = trace.times
    assert np.all(np.diff(ts) > 0.0)
    # curvature data stored in samples is recomputable from the state
    mid = trace.samples[len(trace.samples) // 2]
    fresh = curvature_of(mid.state, P10)
    assert float(fresh.h_norm2) == pytest.approx(float(mid.curvature.h_norm2), rel=1e-12)
