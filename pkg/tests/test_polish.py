import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gvsmooth.domain import ScalarField, build_grid_domain, build_path_domain
from gvsmooth.errors import InvalidArgument
from gvsmooth.polish import (
    PolishConfig,
    general_slope_residual,
    polish_1d,
    polish_grid,
    second_difference_residual,
)


def free_residuals_1d(s, guiding):
    return [abs(2 * s[j] - s[j - 1] - s[j + 1]) for j in range(1, len(s) - 1) if not guiding[j]]


def test_second_difference_residual():
    assert second_difference_residual([0, 3, 0], 0) == 6
    assert second_difference_residual([0, 1, 2], 0) == 0
    assert second_difference_residual([1, 1, 1], 0) == 0
    with pytest.raises(InvalidArgument):
        second_difference_residual([1, 2, 3], 1)


def test_general_slope_residual():
    assert general_slope_residual([0, 1, 3], [0, 1, 3], 0) == 0
    assert general_slope_residual([0, 3, 0], [0, 1, 2], 0) == 6
    with pytest.raises(InvalidArgument):
        general_slope_residual([0, 1, 2], [0, 2, 1], 0)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(-10**6, 10**6), min_size=3, max_size=20), st.data())
def test_slope_residual_reduces_on_unit_spacing(seq, data):
    i = data.draw(st.integers(0, len(seq) - 3))
    assert general_slope_residual(seq, np.arange(len(seq)), i) == second_difference_residual(seq, i)
    scaled = [v / 7 for v in seq]
    assert general_slope_residual(scaled, np.arange(len(seq)), i) == pytest.approx(
        second_difference_residual(scaled, i), abs=1e-9)


def test_config_validation():
    with pytest.raises(InvalidArgument):
        PolishConfig(0.0)
    with pytest.raises(InvalidArgument):
        PolishConfig(1e-3, relaxation=0)
    with pytest.raises(InvalidArgument):
        PolishConfig(1e-3, relaxation=1.5)
    with pytest.raises(InvalidArgument):
        PolishConfig(1e-3, max_iters=0)
    assert PolishConfig.for_values([0.0, 4.0]).epsilon == 4e-6
    assert PolishConfig.for_values([2.0, 2.0]).epsilon > 0


def test_spike_one_sweep():
    out = polish_1d([0.0, 3.0, 0.0], [True, False, True], PolishConfig(1e-9, relaxation=1.0))
    assert out.field.tolist() == [0.0, 0.0, 0.0]
    assert out.converged and out.iterations == 1 and out.max_residual == 0


def test_already_smooth_is_fixpoint():
    seq = np.array([0.0, 1.0, 2.0, 3.0])
    out = polish_1d(seq, None, PolishConfig(1e-9))
    assert out.iterations == 0 and out.converged
    assert out.field.tobytes() == seq.tobytes()


def test_all_guiding():
    seq = [0.0, 5.0, 0.0, 1.0]
    out = polish_1d(seq, [True] * 4, PolishConfig(1e-9))
    assert out.field.tolist() == seq
    assert out.converged  # no free point has a stencil to check
    assert out.iterations == 0


def test_polish_accepts_scalar_field():
    f = ScalarField(build_path_domain(5), [0, 4, 0, 4, 0])
    out = polish_1d(f, cfg=PolishConfig(1e-10))
    assert isinstance(out.field, ScalarField) and out.converged
    np.testing.assert_allclose(out.field.values, 0, atol=1e-9)
    assert f.values.tolist() == [0, 4, 0, 4, 0]


def test_non_convergence_is_reported():
    seq = np.r_[0.0, np.full(60, 10.0), 0.0]
    out = polish_1d(seq, None, PolishConfig(1e-12, max_iters=5))
    assert not out.converged and out.iterations == 5
    assert out.max_residual > 1e-12


def test_relaxation_below_one_converges():
    seq = [0.0, 7.0, -3.0, 5.0, 1.0, 0.0]
    out = polish_1d(seq, [True, False, False, False, False, True], PolishConfig(1e-8, relaxation=0.6))
    assert out.converged
    assert max(free_residuals_1d(out.field, [True] + [False] * 4 + [True])) <= 1e-8


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10**9))
def test_polish_1d_properties(seed):
    r = np.random.default_rng(seed)
    n = int(r.integers(3, 40))
    seq = r.normal(scale=5, size=n)
    guiding = r.random(n) < 0.25
    cfg = PolishConfig.for_values(seq, relaxation=float(r.choice([1.0, 0.8])))
    out = polish_1d(seq, guiding, cfg)
    s = out.field
    assert np.all(s[guiding] == seq[guiding])
    assert s[0] == seq[0] and s[-1] == seq[-1]
    assert s.min() >= seq.min() and s.max() <= seq.max()
    res = free_residuals_1d(s, guiding)
    assert out.converged == (max(res, default=0) <= cfg.epsilon)
    if out.converged:
        again = polish_1d(s, guiding, cfg)
        assert again.iterations == 0 and again.field.tobytes() == s.tobytes()


def test_grid_constant_fixpoint():
    a = np.full((5, 6), 2.0)
    out = polish_grid(a, None, PolishConfig(1e-9))
    assert out.iterations == 0 and out.converged
    assert np.array_equal(out.field, a)


def test_grid_free_spike_decays():
    a = np.zeros((7, 7))
    a[3, 3] = 5.0
    out = polish_grid(a, None, PolishConfig(1e-9))
    assert out.converged
    assert np.max(np.abs(out.field)) <= 1e-8
    c = out.field
    rx = np.abs(2 * c[1:-1, 1:-1] - c[1:-1, :-2] - c[1:-1, 2:])
    ry = np.abs(2 * c[1:-1, 1:-1] - c[:-2, 1:-1] - c[2:, 1:-1])
    assert max(rx.max(), ry.max()) <= 1e-9


def test_grid_guided_spike_is_preserved():
    a = np.zeros((7, 7))
    a[3, 3] = 5.0
    mask = np.zeros_like(a, dtype=bool)
    mask[3, 3] = True
    out = polish_grid(a, mask, PolishConfig(1e-9, max_iters=300))
    assert out.field[3, 3] == 5.0
    # neighbours are pulled up toward the spike, but a single frozen peak
    # cannot have both row and column residuals below epsilon around it
    assert out.field[3, 2] > 0 and out.field[2, 3] > 0
    assert not out.converged and out.iterations == 300
    assert out.field.min() >= 0 and out.field.max() <= 5


def test_grid_planar_guides_converge():
    y, x = np.mgrid[0:6, 0:8].astype(float)
    plane = 0.5 * x - 0.25 * y + 1
    noisy = plane + np.random.default_rng(0).normal(scale=0.3, size=plane.shape)
    mask = np.zeros_like(plane, dtype=bool)
    mask[[0, -1], :] = True
    mask[:, [0, -1]] = True
    noisy[mask] = plane[mask]
    out = polish_grid(noisy, mask, PolishConfig(1e-10))
    assert out.converged
    np.testing.assert_allclose(out.field, plane, atol=1e-8)


def test_grid_field_wrapping_and_guards():
    dom = build_grid_domain(4, 3)
    f = ScalarField(dom, np.arange(12.0) ** 2)
    out = polish_grid(f, np.zeros((3, 4), bool), PolishConfig(1e-6))
    assert isinstance(out.field, ScalarField) and out.field.domain is dom
    with pytest.raises(InvalidArgument):
        polish_grid(np.zeros((2, 5)))
    with pytest.raises(InvalidArgument):
        polish_grid(ScalarField(build_path_domain(9), np.zeros(9)))
    with pytest.raises(InvalidArgument):
        polish_grid(np.zeros((4, 4)), np.zeros((3, 3), bool))
