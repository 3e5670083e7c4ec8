"""Python binding smoke tests: each main operation is reachable and sane."""

import math

import numpy as np
import pytest

import esclab


def test_quartic_cost_values():
    cost = esclab.builtin_cost("quartic2d")
    assert cost.dim == 2
    assert cost(np.array([0.0, 0.0])) == 0.0
    assert cost(np.array([1.0, 1.0])) == 17.0
    np.testing.assert_allclose(cost.grad(np.array([1.0, 0.0])), [8.0, 4.0])
    np.testing.assert_allclose(
        cost.hess(np.array([1.0, 0.0])), [[24.0, 12.0], [12.0, 12.0]]
    )


def test_quadratic_cost_requires_spd():
    Q = np.array([[3.0, 1.0], [1.0, 2.0]])
    cost = esclab.builtin_cost("quadratic", Q=Q)
    theta = np.array([0.5, -1.0])
    assert cost(theta) == pytest.approx(0.5 * theta @ Q @ theta)
    with pytest.raises(ValueError):
        esclab.builtin_cost("quadratic", Q=np.array([[1.0, 2.0], [2.0, 1.0]]))


def test_growth_bounds_and_gain():
    b1, b2 = esclab.growth_bounds(esclab.builtin_cost("quartic2d"))
    assert b1 == pytest.approx(0.0778, abs=1e-3)
    assert b2 == pytest.approx(4.286, abs=1e-2)
    assert esclab.ultimate_bound_gain(b1, b2, 1.0) == pytest.approx(29.31, abs=0.01)


def test_validate_rates():
    good = esclab.validate_rates([1, 3], "first")
    assert good["valid"]
    bad = esclab.validate_rates([1, 2], "first")
    assert not bad["valid"]
    assert bad["violations"][0]["rule"] == "double-rate"
    flagged = esclab.validate_rates([1, 3], "second")
    assert flagged["valid"]
    assert flagged["nondistinct_warnings"]


def test_dither_spec_and_normalization():
    np.testing.assert_allclose(
        esclab.normalize_amplitudes(np.array([3.0, 4.0])), [0.6, 0.8]
    )
    spec = esclab.make_dither_spec([1, 3], np.array([12.0, 1.0]), a=0.1, omega=100.0)
    assert np.linalg.norm(spec.rel_amplitudes) == pytest.approx(1.0)
    assert np.allclose(spec(0.0), [0.0, 0.0])
    assert esclab.common_period([2, 6]) == pytest.approx(math.pi)


def test_estimators_average_to_truth():
    Q = np.array([[3.0, 1.0], [1.0, 2.0]])
    cost = esclab.builtin_cost("quadratic", Q=Q)
    spec = esclab.make_dither_spec(
        [1, 4], np.array([1.0, 1.0]), a=0.3, omega=1.0, order="second"
    )
    theta = np.array([0.7, -0.3])
    taus = np.arange(4096) * 2 * math.pi / 4096
    g = sum(esclab.gradient_estimate(cost, spec, theta, t) for t in taus) / len(taus)
    np.testing.assert_allclose(g, Q @ theta, atol=1e-8)
    H = sum(esclab.hessian_estimate(cost, spec, theta, t) for t in taus) / len(taus)
    np.testing.assert_allclose(H, Q, atol=1e-8)


def test_matrix_calculus_round_trips():
    X = np.array([[1.0, 2.0], [2.0, 3.0]])
    np.testing.assert_allclose(esclab.vech(X), [1.0, 2.0, 3.0])
    np.testing.assert_allclose(esclab.unvech(np.array([1.0, 2.0, 3.0])), X)
    G = X @ X.T + np.eye(2)
    np.testing.assert_allclose(esclab.exp_sym(esclab.log_spd(G)), G, atol=1e-10)
    D = esclab.duplication_matrix(3)
    L = esclab.elimination_matrix(3)
    np.testing.assert_allclose(L @ D, np.eye(6))
    C = esclab.dalecki_krein_C(np.diag([1.0, math.e]))
    assert C[0, 1] == pytest.approx(1.0 / (math.e - 1.0))


def test_closed_form_A_known_values():
    s = math.sqrt(145.0)
    A = esclab.closed_form_A(12.0 / s, 1.0 / s)
    np.testing.assert_allclose(
        145.0 * A, [[834.0, 402.0], [-2589.0, -861.0]], atol=1e-9
    )


def test_simulate_and_ultimate_bound():
    cost = esclab.builtin_cost("quartic2d")
    spec = esclab.make_dither_spec([1, 3], np.array([12.0, 1.0]), a=0.1, omega=1.0)
    traj = esclab.simulate(
        "gesc-average", cost, spec, np.array([1.0, 1.0]), T=30.0, stride=10
    )
    assert not traj.diverged
    assert traj.states.shape[1] == 2
    assert np.linalg.norm(traj.states[-1]) < np.linalg.norm(traj.states[0])
    assert esclab.ultimate_bound(traj) < 1.0


def test_linearize_and_spectrum_reproduce_the_example():
    cost = esclab.builtin_cost("quartic2d")
    spec = esclab.make_dither_spec([1, 3], np.array([12.0, 1.0]), a=0.1, omega=1.0)
    J = esclab.linearize_field(
        "gesc-average", cost, spec, np.zeros(2), h=1e-6
    )
    expected = -(0.01 / 145.0) * np.array([[834.0, 402.0], [-2589.0, -861.0]])
    np.testing.assert_allclose(J, expected, rtol=1e-5)
    eigs = esclab.spectrum(J)
    assert eigs[0].real == pytest.approx(27.0 * 0.01 / 290.0, rel=1e-5)
    assert abs(eigs[0].imag) == pytest.approx(
        9.0 * 0.01 * math.sqrt(15927.0) / 290.0, rel=1e-5
    )


def test_nesc_log_chart_round_trip():
    theta = np.array([1.0, -2.0])
    gamma = np.array([[2.0, 0.3], [0.3, 1.0]])
    x = esclab.pack_nesc_state(theta, gamma)
    th, gm = esclab.unpack_nesc_state(x, 2)
    np.testing.assert_allclose(th, theta)
    np.testing.assert_allclose(gm, gamma)
