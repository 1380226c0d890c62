import numpy as np
import pytest

from py_qutrit_correlations.entanglement import (
    LOG2_3,
    REFERENCE_COEFF_PAIRS,
    SCAN_MIN_COEFF,
    delta_q_grid,
    deviation_from_measures,
    deviation_report,
    entanglement_entropy,
    eof,
    find_nonmonotonic_pair,
    measure_gradients,
    negativity,
    negativity_from_mp,
    negativity_from_pcc,
    negativity_partial_transpose,
    scan_max_delta_q,
)
from py_qutrit_correlations.errors import BoundaryError, DimensionError, DomainError
from py_qutrit_correlations.states import (
    maximally_entangled_state,
    new_schmidt_state,
    random_schmidt_state,
    state_from_two_coeffs,
)

# (E, N, Q_E, Q_N, Delta Q) for each tabulated coefficient pair
PUBLISHED_DEVIATIONS = [
    (0.1614, 0.2080, 89.8142, 79.2010, 10.6132),
    (1.2347, 0.8116, 22.0964, 18.8423, 3.2540),
    (1.5850, 1.0000, 0.0, 0.0, 0.0),
    (1.5755, 0.9950, 0.6001, 0.5020, 0.0982),
    (0.8911, 0.6495, 43.7784, 35.0527, 8.7257),
]


@pytest.mark.parametrize("pair, expected", zip(REFERENCE_COEFF_PAIRS, PUBLISHED_DEVIATIONS))
def test_published_deviation_table(pair, expected):
    report = deviation_report(state_from_two_coeffs(*pair))
    computed = (report.e, report.n, report.q_e, report.q_n, report.delta_q)
    assert np.allclose(computed, expected, atol=1e-3, rtol=0)


def test_known_measure_values():
    state = state_from_two_coeffs(0.5, 0.1)
    assert eof(state) == pytest.approx(0.887897, abs=1e-6)
    assert negativity(state) == pytest.approx(0.566139, abs=1e-6)
    state = state_from_two_coeffs(0.4, 0.9)
    assert eof(state) == pytest.approx(0.821029, abs=1e-6)
    assert negativity(state) == pytest.approx(0.585167, abs=1e-6)


def test_maximally_entangled_extremes():
    state = maximally_entangled_state()
    assert negativity(state) == pytest.approx(1.0, abs=1e-12)
    assert eof(state) == pytest.approx(LOG2_3, abs=1e-12)
    product = state_from_two_coeffs(1.0, 0.0)
    assert negativity(product) == 0.0
    assert eof(product) == 0.0


def test_negativity_matches_partial_transpose(random_qutrits):
    for state in random_qutrits:
        assert negativity(state) == pytest.approx(
            negativity_partial_transpose(state), abs=1e-10
        )


def test_eof_matches_reduced_state_entropy(random_qutrits):
    for state in random_qutrits:
        assert eof(state) == pytest.approx(entanglement_entropy(state), abs=1e-10)


@pytest.mark.parametrize("dim", [2, 4])
def test_oracles_in_other_dimensions(rng, dim):
    for _ in range(100):
        state = random_schmidt_state(rng, dim)
        assert eof(state) == pytest.approx(entanglement_entropy(state), abs=1e-10)
        c = state.array
        expected = (np.sum(c) ** 2 - 1.0) / 2.0
        assert negativity_partial_transpose(state) == pytest.approx(expected, abs=1e-10)


def test_closed_form_negativity_is_for_qutrits():
    with pytest.raises(DimensionError):
        negativity(maximally_entangled_state(4))


def test_negativity_from_correlators():
    assert negativity_from_pcc(0.848) == 0.848
    assert negativity_from_mp(1.0 / 3.0) == pytest.approx(0.0, abs=1e-15)
    assert negativity_from_mp(1.0) == pytest.approx(1.0)
    assert negativity_from_mp(0.899) == pytest.approx(0.8485)
    with pytest.raises(DomainError):
        negativity_from_mp(0.2)
    with pytest.raises(DomainError):
        negativity_from_pcc(1.2)


def test_deviation_from_measured_values():
    report = deviation_from_measures(e=1.233, n=0.848)
    assert report.q_n == pytest.approx(15.2, abs=1e-9)
    assert report.q_e == pytest.approx(22.206, abs=1e-3)
    assert report.delta_q == pytest.approx(report.q_e - report.q_n)


def _finite_differences(c0, c1, step=1e-6):
    def measures(a, b):
        state = state_from_two_coeffs(a, b)
        return np.array([eof(state), negativity(state)])

    d_c0 = (measures(c0 + step, c1) - measures(c0 - step, c1)) / (2 * step)
    d_c1 = (measures(c0, c1 + step) - measures(c0, c1 - step)) / (2 * step)
    return d_c0, d_c1


def test_gradients_match_finite_differences(rng):
    n_checked = 0
    while n_checked < 100:
        c0, c1 = rng.uniform(0.05, 0.95, size=2)
        if c0**2 + c1**2 > 0.99:
            continue
        grad = measure_gradients(state_from_two_coeffs(c0, c1))
        d_c0, d_c1 = _finite_differences(c0, c1)
        assert grad.d_e_dc0 == pytest.approx(d_c0[0], abs=1e-5)
        assert grad.d_n_dc0 == pytest.approx(d_c0[1], abs=1e-5)
        assert grad.d_e_dc1 == pytest.approx(d_c1[0], abs=1e-5)
        assert grad.d_n_dc1 == pytest.approx(d_c1[1], abs=1e-5)
        n_checked += 1


def test_gradients_vanish_at_maximal_entanglement():
    grad = measure_gradients(maximally_entangled_state())
    for value in (grad.d_e_dc0, grad.d_e_dc1, grad.d_n_dc0, grad.d_n_dc1):
        assert abs(value) < 1e-9


def test_gradients_undefined_on_boundary():
    with pytest.raises(BoundaryError):
        measure_gradients(state_from_two_coeffs(0.6, 0.8))


def test_nonmonotonic_pair_found():
    first = state_from_two_coeffs(0.4, 0.9)
    second = state_from_two_coeffs(0.5, 0.1)
    pairs = find_nonmonotonic_pair([first, second])
    assert pairs == [(first, second)]


def test_monotonic_states_give_no_pair():
    states = [state_from_two_coeffs(c, c) for c in (0.2, 0.3, 0.4)]
    assert find_nonmonotonic_pair(states) == []


def test_symmetric_scan_maximum():
    c0, c1, value = scan_max_delta_q(0.001)
    assert c0 == c1
    assert value == pytest.approx(12.148, abs=0.01)
    assert c0 == pytest.approx(0.1712, abs=2e-3)


def test_unrestricted_scan_reaches_beyond_symmetric_line():
    _, _, symmetric = scan_max_delta_q(0.01)
    c0, c1, value = scan_max_delta_q(0.01, symmetric=False)
    assert value >= symmetric
    assert c0**2 + c1**2 < 1.0


def test_delta_q_grid_is_symmetric():
    table = delta_q_grid(0.01)
    assert table.shape[1] == 7
    lookup = {(round(r[0], 6), round(r[1], 6)): r[6] for r in table}
    for (c0, c1), value in lookup.items():
        assert lookup[(c1, c0)] == pytest.approx(value, abs=1e-12)


@pytest.mark.parametrize("step", [0.0, 0.02, -0.001])
def test_grid_step_domain(step):
    with pytest.raises(DomainError):
        delta_q_grid(step)


def test_measures_invariant_under_coefficient_permutation(random_qutrits):
    orders = [(0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]
    for state in random_qutrits[:200]:
        for order in orders:
            permuted = new_schmidt_state([state.coeffs[i] for i in order])
            assert negativity(permuted) == pytest.approx(negativity(state), abs=1e-12)
            assert eof(permuted) == pytest.approx(eof(state), abs=1e-12)


def test_measures_stay_in_range(rng):
    for _ in range(10_000):
        state = random_schmidt_state(rng, 3)
        assert -1e-12 <= negativity(state) <= 1.0 + 1e-12
        assert -1e-12 <= eof(state) <= LOG2_3 + 1e-12


def test_measures_peak_together_at_equal_coefficients():
    table = delta_q_grid(0.001)
    c = 1.0 / np.sqrt(3.0)
    e_best = table[np.argmax(table[:, 2]), :2]
    n_best = table[np.argmax(table[:, 3]), :2]
    assert np.allclose(e_best, [c, c], atol=2e-3, rtol=0)
    assert np.allclose(n_best, [c, c], atol=2e-3, rtol=0)

    away = np.max(np.abs(table[:, :2] - c), axis=1) > 2e-3
    assert np.all(table[away, 2] < LOG2_3 - 1e-9)
    assert np.all(table[away, 3] < 1.0 - 1e-9)


def test_unrestricted_scan_stays_off_the_edge():
    c0, c1, _ = scan_max_delta_q(0.01, symmetric=False)
    assert min(c0, c1) >= SCAN_MIN_COEFF
