"""CMA-ES sanity benchmarks and the determinism contract."""
import numpy as np
import pytest

from spingrad.cmaes import cma_es_minimize, default_popsize


def sphere(x):
    return float(x @ x)


def rosenbrock(x):
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (1 - x[:-1]) ** 2))


def test_default_popsize():
    assert default_popsize(10) == 4 + int(3 * np.log(10))


def test_sphere_dim10():
    res = cma_es_minimize(sphere, dim=10, sigma0=0.3, seed=1, max_evals=5000)
    assert res.fun < 1e-8
    assert res.evaluations <= 5000 + default_popsize(10)


def test_rosenbrock_dim5():
    res = cma_es_minimize(rosenbrock, dim=5, sigma0=0.3, seed=3, max_evals=20000)
    assert res.fun < 1e-4


def test_seed_determinism():
    a = cma_es_minimize(rosenbrock, dim=4, sigma0=0.5, seed=11, max_evals=3000)
    b = cma_es_minimize(rosenbrock, dim=4, sigma0=0.5, seed=11, max_evals=3000)
    assert a.trajectory == b.trajectory
    np.testing.assert_array_equal(a.x, b.x)
    assert a.fun == b.fun


def test_trajectory_is_best_so_far():
    res = cma_es_minimize(sphere, dim=6, sigma0=0.3, seed=2, max_evals=2000)
    traj = np.array(res.trajectory)
    assert np.all(np.diff(traj) <= 0)
    assert res.fun == traj[-1]


def test_start_point_enters_bookkeeping():
    x0 = np.full(3, 0.2)
    res = cma_es_minimize(sphere, dim=3, sigma0=0.3, seed=5, max_evals=1,
                          x0=x0)
    assert res.trajectory[0] == pytest.approx(sphere(x0))
    assert res.fun <= sphere(x0)


def test_generation_cap():
    res = cma_es_minimize(sphere, dim=8, sigma0=0.3, seed=9, max_evals=10 ** 6,
                          max_generations=25)
    assert res.generations == 25


def test_non_finite_fitness_is_worst():
    calls = {"n": 0}

    def spiky(x):
        calls["n"] += 1
        if calls["n"] % 7 == 0:
            return float("nan")
        return sphere(x)

    res = cma_es_minimize(spiky, dim=4, sigma0=0.3, seed=4, max_evals=4000)
    assert np.isfinite(res.fun)
    assert res.fun < 1e-6


def test_bad_arguments():
    with pytest.raises(ValueError):
        cma_es_minimize(sphere, dim=0, sigma0=0.3, seed=1)
    with pytest.raises(ValueError):
        cma_es_minimize(sphere, dim=3, sigma0=0.3, seed=1, x0=np.zeros(4))
