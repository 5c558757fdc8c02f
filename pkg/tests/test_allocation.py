import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nlcast.allocation import (DegenerateChunkError, allocate_nonlinear, allocate_softcast,
                               model_distortion, predicted_distortion)
from nlcast.chunks import ChunkStats


def mk(std1, std2, std0=None, a=1.2):
    std0 = std1 if std0 is None else std0
    return [ChunkStats(0.0, s0 ** 2, s1 ** 2, s2 ** 2, a) for s0, s1, s2 in zip(std0, std1, std2)]


def grid_oracle(std1, std2, P):
    """Brute-force minimizer of sum var2/b^2 on the two-chunk constraint curve."""
    b1 = np.linspace(1e-4, np.sqrt(P) / std1[0] - 1e-9, 2_000_001)
    b2 = np.sqrt(P - b1 ** 2 * std1[0] ** 2) / std1[1]
    d = std2[0] ** 2 / b1 ** 2 + std2[1] ** 2 / b2 ** 2
    k = np.argmin(d)
    return b1[k], b2[k]


def test_two_chunk_example():
    stats = mk([2, 1], [1, 1])
    plan = allocate_nonlinear(stats, 10.0, 1.2)
    np.testing.assert_allclose(plan.b, [1.290994, 1.825742], atol=1e-6)
    np.testing.assert_allclose(plan.b, grid_oracle([2, 1], [1, 1], 10.0), atol=1e-3)
    assert plan.power(stats) == pytest.approx(10.0, rel=1e-12)
    assert plan.alpha == pytest.approx((3 / 10) ** 2)


def test_single_chunk():
    plan = allocate_nonlinear(mk([1], [0.7]), 4.0, 1.3)
    assert plan.b[0] == pytest.approx(2.0)


def test_a1_example_and_softcast():
    stats = [ChunkStats(0.0, 4.0, 4.0, 1.0, 1.0), ChunkStats(0.0, 1.0, 1.0, 1.0, 1.0)]
    plan = allocate_nonlinear(stats, 3.0, 1.0)
    np.testing.assert_allclose(plan.b, [0.707107, 1.0], atol=1e-6)
    np.testing.assert_allclose(plan.b, grid_oracle([2, 1], [1, 1], 3.0), atol=1e-3)
    g = allocate_softcast(stats, 3.0)
    np.testing.assert_array_equal(g.b, plan.b)
    np.testing.assert_allclose(g.b, [2 ** -0.5 * np.sqrt(3 / 3), 1.0])


def test_softcast_equal_variances():
    stats = [ChunkStats(0.0, 2.25, 0.0, 0.0, 1.3)] * 5
    g = allocate_softcast(stats, 7.0)
    # the constraint forces M * g^2 * var0 = P
    np.testing.assert_allclose(g.b ** 2, 7.0 / (5 * 2.25))


def test_softcast_matches_nonlinear_a1(rng):
    for _ in range(20):
        v = rng.uniform(0.01, 100, size=rng.integers(1, 10))
        stats = [ChunkStats(0.0, x, x, 1.0, 1.0) for x in v]
        P = rng.uniform(0.1, 50)
        np.testing.assert_array_equal(allocate_softcast(stats, P).b, allocate_nonlinear(stats, P, 1.0).b)


def test_degenerate_chunk():
    stats = mk([1, 0], [1, 0])
    with pytest.raises(DegenerateChunkError):
        allocate_nonlinear(stats, 2.0, 1.2)
    plan = allocate_nonlinear(stats, 2.0, 1.2, skip_degenerate=True)
    assert plan.b[1] == 0 and plan.power(stats) == pytest.approx(2.0)


def test_invalid_inputs():
    with pytest.raises(ValueError):
        allocate_nonlinear(mk([1], [1]), 0.0, 1.2)
    with pytest.raises(ValueError):
        allocate_nonlinear(mk([1], [1]), 1.0, 0.9)


positive = st.floats(1e-3, 1e3)


@settings(max_examples=60)
@given(st.lists(st.tuples(positive, positive), min_size=1, max_size=8), positive,
       st.floats(1.0, 2.0), st.floats(0.1, 10))
def test_constraint_kkt_and_scaling(pairs, P, a, c):
    std1, std2 = zip(*pairs)
    stats = mk(std1, std2, a=a)
    plan = allocate_nonlinear(stats, P, a)
    assert np.all(plan.b > 0)
    assert plan.power(stats) == pytest.approx(P, rel=1e-9)
    marginal = np.array(std2) ** 2 / (plan.b ** 4 * np.array(std1) ** 2)
    np.testing.assert_allclose(marginal, plan.alpha, rtol=1e-9)
    scaled = allocate_nonlinear(stats, P * c * c, a)
    np.testing.assert_allclose(scaled.b, plan.b * c, rtol=1e-12)


def test_beats_random_feasible(rng):
    for _ in range(10):
        m = rng.integers(3, 6)
        std1, std2 = rng.uniform(0.1, 10, m), rng.uniform(0.1, 10, m)
        P, a = rng.uniform(1, 20), rng.uniform(1, 1.5)
        plan = allocate_nonlinear(mk(std1, std2, a=a), P, a)
        best = model_distortion(std2 ** 2, plan.b, a, 1.0)
        w = rng.dirichlet(np.ones(m), size=10_000)  # power shares
        b = np.sqrt(w * P) / std1
        assert best <= model_distortion(std2 ** 2, b, a, 1.0).min() * (1 + 1e-9)


def test_predicted_distortion_values():
    stats = [ChunkStats(0.0, 4.0, 4.0, 1.0, 1.0)]
    plan = allocate_nonlinear(stats, 4.0, 1.0)
    plan = type(plan)(1.0, 4.0, np.array([1.0]), plan.alpha, plan.unit_distortion)
    total, per = predicted_distortion(stats, plan, 1.0)
    assert total == pytest.approx(0.8) and per[0] == pytest.approx(0.8)
    assert predicted_distortion(stats, plan, 0.0)[0] == 0.0


def test_predicted_distortion_decreasing_in_b(rng):
    stats = mk([1.5, 2.0], [0.8, 1.1], std0=[2.0, 3.0], a=1.3)
    plan = allocate_nonlinear(stats, 2.0, 1.3)
    prev = np.inf
    for s in np.linspace(0.5, 3, 20):
        b = plan.b.copy()
        b[0] *= s
        d, _ = predicted_distortion(stats, type(plan)(1.3, 2.0, b, 0.0, b), 0.3)
        assert d < prev
        prev = d


def test_predicted_distortion_unpowered_chunk():
    stats = mk([1.0, 0.0], [1.0, 0.0], std0=[1.0, 0.0])
    plan = allocate_nonlinear(stats, 1.0, 1.2, skip_degenerate=True)
    _, per = predicted_distortion(stats, plan, 0.5)
    assert per[1] == 0.0
