"""Trajectory, progress-measure, bound, and sweep tests.

Quantum expectations are frozen from the independent closed-form route: with
t = arcsin(1/sqrt(N)), per-item success after k queries is sin((2k+1) t)^2
and the divergence is 2 N sin(2 k t)^2. The simulation never sees these
formulas; they only gate its output here.
"""

import io
import math

import numpy as np
import pytest

from hoisearch.models import (
    LinearMap,
    StateVector,
    classical_model,
    coherence_projector,
    lift_unitary_conjugation,
    quantum_model,
    sign_flip_oracle,
    synthetic_model,
)
from hoisearch.search import (
    analytic_crossing_floor,
    check_lower_bound,
    check_upper_bound,
    constant_schedule,
    diffusion_unitary,
    default_k_max,
    grover_schedule,
    make_schedule,
    oracle_displacement,
    progress_measures,
    quantum_grover_report,
    random_schedule,
    reflection_about,
    reports_to_json,
    run_search,
    scaling_sweep,
    success_probability,
    sweep_to_json,
    uniform_start,
    write_report_csv,
    write_sweep_csv,
    REPORT_CSV_COLUMNS,
)


def grover_run(n, k_max):
    model = quantum_model(n)
    return model, progress_measures(model, run_search(model, grover_schedule(model), k_max))


# ---------------------------------------------------------------------------
# Elementary pieces
# ---------------------------------------------------------------------------

def test_uniform_start_success_is_one_over_n():
    for model in (classical_model(4), quantum_model(4), synthetic_model(4, 3)):
        start = uniform_start(model)
        for x in range(4):
            assert success_probability(model, start, x) == pytest.approx(0.25)


def test_success_probability_on_target_state():
    model = quantum_model(3)
    assert success_probability(model, model.basis_states[1], 1) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        success_probability(model, model.uniform_state, 3)


def test_reflection_fixes_axis_and_is_an_orthogonal_involution():
    model = synthetic_model(4, 3)
    reflection = reflection_about(model, model.uniform_state)
    fixed = reflection.apply(model.uniform_state)
    assert np.max(np.abs(fixed.coords - model.uniform_state.coords)) < 1e-12
    assert reflection.orthogonality_defect() < 1e-12
    squared = (reflection @ reflection).matrix
    assert np.max(np.abs(squared - np.eye(model.space.total_dim))) < 1e-12
    with pytest.raises(ValueError):
        reflection_about(model, StateVector(model.space, np.zeros(model.space.total_dim)))


def test_sector_reflection_differs_from_lifted_diffusion():
    # both fix the embedded uniform state, but they are different orthogonal
    # maps; quantum schedules must use the lifted conjugation
    model = quantum_model(3)
    lifted = lift_unitary_conjugation(model, diffusion_unitary(3))
    reflected = reflection_about(model, model.uniform_state)
    assert np.max(np.abs(lifted.matrix - reflected.matrix)) > 0.1
    fixed = lifted.apply(model.uniform_state)
    assert np.max(np.abs(fixed.coords - model.uniform_state.coords)) < 1e-12


def test_make_schedule_dispatch_and_validation():
    model = quantum_model(3)
    assert make_schedule(model, "grover").name == "grover"
    assert make_schedule(model, "reflect").name == "reflect"
    assert make_schedule(model, "random", 5).name == "random:5"
    with pytest.raises(ValueError):
        make_schedule(classical_model(3), "grover")
    with pytest.raises(ValueError):
        make_schedule(model, "annealing")


def test_random_schedule_is_deterministic_with_distinct_steps():
    model = synthetic_model(4, 2)
    schedule = random_schedule(model, 7)
    again = random_schedule(model, 7)
    assert np.array_equal(schedule.step(1).matrix, again.step(1).matrix)
    assert not np.array_equal(schedule.step(1).matrix, schedule.step(2).matrix)
    with pytest.raises(ValueError):
        schedule.step(0)


# ---------------------------------------------------------------------------
# run_search
# ---------------------------------------------------------------------------

def test_trajectories_start_at_the_start_state():
    model = quantum_model(4)
    pair = run_search(model, grover_schedule(model), 2)
    for i in range(4):
        assert np.array_equal(pair.states_with_oracle[0, i], model.uniform_state.coords)
    assert np.array_equal(pair.states_without_oracle[0], model.uniform_state.coords)


def test_trajectory_norm_conservation():
    for model in (quantum_model(4), synthetic_model(5, 3)):
        schedule = random_schedule(model, 3)
        pair = run_search(model, schedule, 6)
        norms = np.linalg.norm(pair.states_with_oracle, axis=2)
        assert np.max(np.abs(norms - 1.0)) < 1e-9


def test_classical_oracle_never_separates_trajectories():
    model = classical_model(6)
    pair = run_search(model, random_schedule(model, 11), 8)
    assert np.max(np.abs(
        pair.states_with_oracle - pair.states_without_oracle[:, None, :]
    )) == 0.0


def test_run_search_rejects_irreversible_steps():
    model = quantum_model(3)
    bad = constant_schedule(LinearMap(model.space, 2.0 * np.eye(9)), "bad")
    with pytest.raises(ValueError, match="not reversible"):
        run_search(model, bad, 1)


def test_run_search_marked_subset_and_accessors():
    model = quantum_model(4)
    pair = run_search(model, grover_schedule(model), 1, marked=(2,))
    assert pair.marked == (2,)
    state = pair.state_with_oracle(1, 2)
    assert success_probability(model, state, 2) == pytest.approx(1.0, abs=1e-9)
    assert pair.state_without_oracle(0).coords == pytest.approx(model.uniform_state.coords)


def test_run_search_rejects_foreign_start_state():
    model = quantum_model(3)
    other = quantum_model(4)
    with pytest.raises(ValueError):
        run_search(model, grover_schedule(model), 1, start=other.uniform_state)


# ---------------------------------------------------------------------------
# Progress measures: frozen quantum values
# ---------------------------------------------------------------------------

def test_single_iteration_exactness_at_four_items():
    _, report = grover_run(4, 2)
    assert report.success[1] == pytest.approx(np.ones(4), abs=1e-9)
    assert report.divergence[1] == pytest.approx(6.0, abs=1e-9)
    assert report.upper_bound[1] == 8.0
    assert report.divergence[0] == 0.0
    # all oracle-driven states are pure: distance to target vanishes at k=1
    assert report.gap_with_oracle[1] == pytest.approx(0.0, abs=1e-9)


def test_quantum_success_and_divergence_match_trigonometry():
    n, k_max = 16, 8
    theta = math.asin(1.0 / math.sqrt(n))
    _, report = grover_run(n, k_max)
    for k in range(k_max + 1):
        expected_success = math.sin((2 * k + 1) * theta) ** 2
        assert report.success[k] == pytest.approx(
            np.full(n, expected_success), abs=1e-9
        ), k
        expected_divergence = 2 * n * math.sin(2 * k * theta) ** 2
        assert report.divergence[k] == pytest.approx(expected_divergence, abs=1e-9), k


def test_fast_path_matches_dense_simulation():
    for n in (4, 8):
        _, dense = grover_run(n, default_k_max(n))
        fast = quantum_grover_report(n, default_k_max(n))
        for attr in (
            "divergence",
            "upper_bound",
            "gap_with_oracle",
            "gap_without_oracle",
            "pair_lower_bound",
        ):
            assert getattr(dense, attr) == pytest.approx(getattr(fast, attr), abs=1e-9)
        assert dense.success == pytest.approx(fast.success, abs=1e-9)


def test_pure_state_distance_identity():
    # for unit-norm trajectories the target gap collapses to 2 sum (1 - success)
    _, report = grover_run(8, 6)
    expected = 2.0 * np.sum(1.0 - report.success, axis=1)
    assert report.gap_with_oracle == pytest.approx(expected, abs=1e-9)


def test_divergence_dominates_pair_lower_bound():
    for model, schedule in (
        (quantum_model(4), None),
        (synthetic_model(5, 3), None),
        (classical_model(5), None),
    ):
        schedule = random_schedule(model, 17)
        report = progress_measures(model, run_search(model, schedule, 6))
        assert np.all(report.divergence >= report.pair_lower_bound - 1e-9)


def test_one_step_recursion_inequality():
    # D_{k+1} <= (sqrt(D_k) + sqrt(displacement of the control state))^2
    for model in (quantum_model(4), synthetic_model(4, 4), classical_model(6)):
        pair = run_search(model, random_schedule(model, 23), 7)
        report = progress_measures(model, pair)
        for k in range(pair.k_max):
            moved = oracle_displacement(model, pair.state_without_oracle(k))
            ceiling = (math.sqrt(report.divergence[k]) + math.sqrt(moved)) ** 2
            assert report.divergence[k + 1] <= ceiling + 1e-9


def test_first_crossing_and_first_peak():
    _, report = grover_run(16, 8)
    assert report.first_crossing() == 2
    assert report.first_peak() == 3
    flat = progress_measures(
        classical_model(8),
        run_search(classical_model(8), make_schedule(classical_model(8), "reflect"), 5),
    )
    assert flat.first_crossing() is None
    assert flat.first_peak() == 5  # flat series degenerates to the last index


def test_success_modes():
    _, report = grover_run(4, 1)
    assert report.first_crossing(mode="averaged") == report.first_crossing(mode="per-item")
    with pytest.raises(ValueError):
        report.success_series("median")


# ---------------------------------------------------------------------------
# Bound checks
# ---------------------------------------------------------------------------

def test_upper_bound_check_on_grover_runs():
    for n in (4, 8, 16):
        _, report = grover_run(n, default_k_max(n))
        check = check_upper_bound(report)
        assert check.holds, check


def test_upper_bound_check_flags_violations():
    _, report = grover_run(4, 2)
    report.divergence[2] = report.upper_bound[2] + 1.0
    check = check_upper_bound(report)
    assert not check.holds and check.worst_k == 2


def test_analytic_crossing_floor_frozen_values():
    assert analytic_crossing_floor(4) == pytest.approx(0.0, abs=1e-12)
    assert analytic_crossing_floor(16) == pytest.approx(0.8081641154691505, abs=1e-9)
    assert analytic_crossing_floor(1024) == pytest.approx(157.30464623102907, abs=1e-9)


def test_lower_bound_check_at_crossing():
    _, report = grover_run(16, 8)
    check = check_lower_bound(report)
    assert check.crossed and check.crossing_k == 2
    assert check.measured == pytest.approx(float(report.divergence[2]))
    assert check.holds


def test_lower_bound_check_is_vacuous_without_crossing():
    model = classical_model(8)
    report = progress_measures(model, run_search(model, make_schedule(model, "reflect"), 4))
    check = check_lower_bound(report)
    assert not check.crossed and check.holds and check.crossing_k is None


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

def test_quantum_sweep_counts_and_floor():
    result = scaling_sweep("quantum", [4, 16, 64], "grover")
    stars = [row.k_star for row in result.rows]
    peaks = [row.k_peak for row in result.rows]
    assert stars == [1, 2, 3]
    assert peaks == [1, 3, 6]
    for row in result.rows:
        assert row.floor == pytest.approx(math.sqrt(0.17 * row.n_slits / 8.0))
        assert not row.saturated
    assert result.exponent("crossing") is not None


def test_classical_sweep_saturates():
    result = scaling_sweep("classical", [4, 8], "reflect")
    assert all(row.saturated for row in result.rows)
    assert result.exponent("crossing") is None


def test_synthetic_sweep_records_without_asserting_success():
    result = scaling_sweep("synthetic", [4, 6], "reflect", order=3)
    assert len(result.rows) == 2
    assert all(row.order == 3 for row in result.rows)


def test_sweep_validation():
    with pytest.raises(ValueError):
        scaling_sweep("synthetic", [4], "reflect")  # order missing
    with pytest.raises(ValueError):
        scaling_sweep("thermal", [4])


# ---------------------------------------------------------------------------
# Serialisation
# ---------------------------------------------------------------------------

def test_report_csv_is_deterministic_and_pinned():
    _, report = grover_run(4, 2)
    config = {"command": "search", "n": 4}
    first, second = io.StringIO(), io.StringIO()
    write_report_csv(report, first, config=config)
    write_report_csv(report, second, config=config)
    assert first.getvalue() == second.getvalue()
    lines = first.getvalue().splitlines()
    assert lines[0].startswith("# version: hoisearch ")
    assert lines[1].startswith("# config: ")
    assert lines[2] == ",".join(REPORT_CSV_COLUMNS)
    assert lines[3].startswith("quantum,4,2,grover,,0,0.0,0.0,")


def test_report_json_round_trips():
    import json

    _, report = grover_run(4, 1)
    payload = json.loads(reports_to_json(report, config={"n": 4}))
    assert payload["version"]
    assert payload["reports"][0]["model"]["kind"] == "quantum"
    assert payload["reports"][0]["rows"][1]["D_k"] == pytest.approx(6.0)


def test_sweep_serialisation():
    import json

    result = scaling_sweep("quantum", [4, 16], "grover")
    buf = io.StringIO()
    write_sweep_csv(result, buf, config={"command": "sweep"})
    text = buf.getvalue()
    assert "# exponent_crossing: " in text
    assert "k_star" in text
    payload = json.loads(sweep_to_json(result))
    assert len(payload["rows"]) == 2
