import numpy as np
import pytest

from hubbard_ucc.hamiltonian import HubbardParams
from hubbard_ucc.spectrum import ground_energy_cubic
from hubbard_ucc.stateprep import Mode, exact_sequence, prepare
from hubbard_ucc.vqe import (
    MaxEvaluationsExceeded,
    VqeConfig,
    VqeProblem,
    energy,
    minimize,
    recipe_problem,
)


@pytest.fixture(scope="module")
def u4_result():
    return minimize(recipe_problem(HubbardParams(4.0)), VqeConfig(seed=1))


def test_energy_of_reference():
    assert energy(recipe_problem(HubbardParams(0.0)), [0, 0, 0, 0]) == pytest.approx(-4.0, abs=1e-12)


def test_energy_at_closed_form_angles(backend):
    r = prepare(4.0)
    assert energy(recipe_problem(HubbardParams(4.0)), r.angles) == pytest.approx(ground_energy_cubic(4.0), abs=1e-9)


def test_variational_bound_random_angles():
    rng = np.random.default_rng(3)
    problem = recipe_problem(HubbardParams(4.0))
    e0 = ground_energy_cubic(4.0)
    assert all(energy(problem, rng.uniform(-np.pi, np.pi, 4)) >= e0 - 1e-9 for _ in range(200))


def test_slot_counts():
    assert recipe_problem(HubbardParams(1.0)).n_free == 4
    assert recipe_problem(HubbardParams(1.0), Mode.DOUBLES).n_free == 3
    seq = exact_sequence([0.1, 0.2, 0.3, 0.4])
    assert VqeProblem.independent(HubbardParams(1.0), seq, frozen=(3,)).n_free == 8


def test_problem_validation():
    seq = exact_sequence([0, 0, 0, 0])
    with pytest.raises(ValueError):
        VqeProblem(HubbardParams(1.0), seq, ((0, 1.0),))
    with pytest.raises(ValueError):
        VqeProblem(HubbardParams(1.0), seq, tuple((1, 1.0) for _ in seq))
    with pytest.raises(ValueError):
        energy(recipe_problem(HubbardParams(1.0)), [0.0])


def test_exact_recovery(u4_result):
    assert u4_result.best_energy == pytest.approx(ground_energy_cubic(4.0), abs=1e-7)
    assert u4_result.evaluations <= 20_000
    assert u4_result.converged
    assert np.allclose(u4_result.best_angles, prepare(4.0).angles, atol=1e-4)


def test_gradient_vanishes_at_optimum(u4_result):
    problem = recipe_problem(HubbardParams(4.0))
    h = 1e-5
    for k in range(4):
        step = np.zeros(4)
        step[k] = h
        grad = (energy(problem, u4_result.best_angles + step) - energy(problem, u4_result.best_angles - step)) / (2 * h)
        assert abs(grad) < 1e-5


def test_running_minimum_monotone(u4_result):
    run = u4_result.running_minimum()
    assert np.all(np.diff(run) <= 0)
    assert run[-1] == u4_result.best_energy


def test_reproducible():
    a = minimize(recipe_problem(HubbardParams(2.0)), VqeConfig(seed=5))
    b = minimize(recipe_problem(HubbardParams(2.0)), VqeConfig(seed=5))
    assert len(a.history) == len(b.history)
    assert all(np.array_equal(x[0], y[0]) and x[1] == y[1] for x, y in zip(a.history, b.history))


def test_doubles_optimization_improves_closed_form():
    closed = prepare(8.0, Mode.DOUBLES).energy
    r = minimize(recipe_problem(HubbardParams(8.0), Mode.DOUBLES), VqeConfig(seed=1))
    assert r.best_energy <= closed
    assert r.best_energy >= ground_energy_cubic(8.0) - 1e-9


def test_all_frozen():
    seq = exact_sequence(prepare(4.0).angles)
    problem = VqeProblem(HubbardParams(4.0), seq, tuple((None, 1.0) for _ in seq))
    r = minimize(problem)
    assert r.evaluations == 1 and r.converged
    assert r.best_energy == pytest.approx(ground_energy_cubic(4.0), abs=1e-9)


def test_budget_exhaustion():
    problem = recipe_problem(HubbardParams(4.0))
    r = minimize(problem, VqeConfig(max_evaluations=25))
    assert r.evaluations == 25 and not r.converged
    with pytest.raises(MaxEvaluationsExceeded) as info:
        minimize(problem, VqeConfig(max_evaluations=25, raise_on_budget=True))
    assert info.value.result.evaluations == 25
