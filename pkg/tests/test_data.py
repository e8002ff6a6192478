import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qnnbench.data import (
    Dataset,
    dataset_to_csv,
    make_dataset,
    make_task,
    target,
    target_batch,
    uniform_grid,
)


class TestUniformGrid:
    def test_two_points(self):
        np.testing.assert_array_equal(uniform_grid(2), [-1.0, 1.0])

    def test_three_points(self):
        np.testing.assert_array_equal(uniform_grid(3), [-1.0, 0.0, 1.0])

    def test_twenty_point_spacing(self):
        g = uniform_grid(20)
        assert g[0] == -1.0
        assert g[-1] == 1.0
        np.testing.assert_allclose(np.diff(g), 2 / 19, atol=1e-15)

    def test_rejects_fewer_than_two(self):
        with pytest.raises(ValueError):
            uniform_grid(1)

    @settings(deadline=None, max_examples=30)
    @given(n=st.integers(2, 500))
    def test_endpoints_and_monotonicity(self, n):
        g = uniform_grid(n)
        assert g[0] == -1.0 and g[-1] == 1.0
        assert np.all(np.diff(g) > 0)
        assert len(g) == n


class TestTarget:
    def test_sine_peak(self):
        assert target("sine", 0.5) == pytest.approx(1.0)

    def test_heaviside_at_zero_is_one(self):
        assert target("heaviside", 0.0) == 1.0

    def test_heaviside_negative(self):
        assert target("heaviside", -0.3) == 0.0

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            target("step", 0.0)

    @settings(deadline=None, max_examples=50)
    @given(x=st.floats(-1, 1, allow_nan=False))
    def test_sine_odd(self, x):
        assert abs(target("sine", -x) + target("sine", x)) < 1e-15

    def test_heaviside_values_binary(self):
        ys = target_batch("heaviside", uniform_grid(200))
        assert set(np.unique(ys)) <= {0.0, 1.0}

    def test_batch_matches_scalar(self):
        xs = uniform_grid(50)
        for kind in ("sine", "heaviside"):
            np.testing.assert_array_equal(
                target_batch(kind, xs), [target(kind, x) for x in xs]
            )


class TestDatasets:
    def test_task_shapes(self):
        task = make_task("sine")
        assert len(task.train) == 20
        assert len(task.test) == 200
        assert task.train.target_kind == "sine"

    def test_train_grid_excludes_origin(self):
        # 20 inclusive-endpoint points are symmetric about 0 without hitting it
        task = make_task("heaviside")
        assert 0.0 not in task.train.inputs
        assert np.min(np.abs(task.train.inputs)) > 0.05

    def test_targets_match_generator(self):
        ds = make_dataset("sine", 20)
        np.testing.assert_array_equal(ds.targets, np.sin(np.pi * ds.inputs))

    def test_grids_within_domain(self):
        for n in (20, 200):
            ds = make_dataset("sine", n)
            assert ds.inputs[0] == -1.0 and ds.inputs[-1] == 1.0

    def test_rejects_unsorted_inputs(self):
        with pytest.raises(ValueError, match="increasing"):
            Dataset(np.array([0.5, -0.5]), np.array([0.0, 0.0]), "sine")

    def test_rejects_out_of_domain(self):
        with pytest.raises(ValueError, match="within"):
            Dataset(np.array([-1.5, 0.5]), np.array([0.0, 0.0]), "sine")

    def test_rejects_length_mismatch(self):
        with pytest.raises(ValueError, match="length"):
            Dataset(np.array([0.0, 0.5]), np.array([1.0]), "sine")

    def test_csv_roundtrip(self, tmp_path):
        ds = make_dataset("heaviside", 20)
        path = tmp_path / "train.csv"
        dataset_to_csv(ds, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "x,y"
        assert len(lines) == 21
        xs = np.array([float(line.split(",")[0]) for line in lines[1:]])
        ys = np.array([float(line.split(",")[1]) for line in lines[1:]])
        np.testing.assert_array_equal(xs, ds.inputs)
        np.testing.assert_array_equal(ys, ds.targets)
