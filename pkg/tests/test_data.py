import math

import numpy as np
import pytest

from vqsvm.data import (ClusterSpec, DatasetFormatError, generate, read_csv,
                        write_csv, _uniforms)


def test_generate_is_deterministic():
    spec = ClusterSpec(r=2.0, theta_seed=7, point_seed=13, n_red=5, n_blue=6)
    a = generate(spec)
    b = generate(spec)
    np.testing.assert_array_equal(a.points, b.points)
    np.testing.assert_array_equal(a.labels, b.labels)


def test_generate_labels_and_counts():
    spec = ClusterSpec(r=2.0, theta_seed=1, point_seed=2, n_red=31, n_blue=32)
    d = generate(spec)
    assert d.n_points == 63
    assert (d.labels[:31] == 1).all()
    assert (d.labels[31:] == -1).all()


def test_generate_seeds_are_independent():
    base = ClusterSpec(r=2.0, theta_seed=1, point_seed=2, n_red=4, n_blue=4)
    other_theta = ClusterSpec(r=2.0, theta_seed=9, point_seed=2, n_red=4, n_blue=4)
    other_points = ClusterSpec(r=2.0, theta_seed=1, point_seed=9, n_red=4, n_blue=4)
    assert not np.array_equal(generate(base).points, generate(other_theta).points)
    assert not np.array_equal(generate(base).points, generate(other_points).points)


def test_cluster_centroids_obey_law_of_large_numbers():
    r = 2.0
    n = 10_000
    spec = ClusterSpec(r=r, theta_seed=7, point_seed=13, n_red=n, n_blue=n)
    d = generate(spec)
    theta = 2.0 * math.pi * next(_uniforms(7))
    center = np.array([r * math.cos(theta), r * math.sin(theta)])
    bound = 3.0 * math.sqrt(r / n)
    red_err = np.abs(d.points[:n].mean(axis=0) - center)
    blue_err = np.abs(d.points[n:].mean(axis=0) + center)
    assert (red_err < bound).all()
    assert (blue_err < bound).all()


def test_sigma_mode_controls_spread():
    r = 4.0
    n = 4000
    narrow = generate(ClusterSpec(r=r, theta_seed=3, point_seed=5, n_red=n, n_blue=1))
    wide = generate(ClusterSpec(r=r, theta_seed=3, point_seed=5, n_red=n, n_blue=1,
                                sigma_mode="stddev"))
    narrow_std = narrow.points[:n].std(axis=0).mean()
    wide_std = wide.points[:n].std(axis=0).mean()
    assert narrow_std == pytest.approx(math.sqrt(r), rel=0.1)   # sigma^2 = r
    assert wide_std == pytest.approx(r, rel=0.1)                # sigma = r


def test_cluster_spec_validation():
    with pytest.raises(ValueError):
        ClusterSpec(r=0.0, theta_seed=0, point_seed=0, n_red=1, n_blue=1)
    with pytest.raises(ValueError):
        ClusterSpec(r=1.0, theta_seed=0, point_seed=0, n_red=0, n_blue=1)
    with pytest.raises(ValueError):
        ClusterSpec(r=1.0, theta_seed=0, point_seed=0, n_red=1, n_blue=1,
                    sigma_mode="bogus")


def test_csv_round_trip(tmp_path):
    spec = ClusterSpec(r=2.0, theta_seed=4, point_seed=8, n_red=6, n_blue=5)
    d = generate(spec)
    path = tmp_path / "d.csv"
    write_csv(d, path)
    back = read_csv(path)
    np.testing.assert_array_equal(back.points, d.points)
    np.testing.assert_array_equal(back.labels, d.labels)


def test_csv_rejects_zero_label(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("x1,x2,label\n1.0,2.0,0\n")
    with pytest.raises(DatasetFormatError) as err:
        read_csv(path)
    assert err.value.line == 2
    assert "line 2" in str(err.value)


def test_csv_rejects_short_row(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("x1,x2,label\n1.0,2.0,1\n1.0,-1\n")
    with pytest.raises(DatasetFormatError) as err:
        read_csv(path)
    assert err.value.line == 3


def test_csv_rejects_bad_number(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("x1,x2,label\n1.0,spam,1\n")
    with pytest.raises(DatasetFormatError) as err:
        read_csv(path)
    assert err.value.line == 2


def test_csv_rejects_bad_header(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("a,b,label\n1.0,2.0,1\n")
    with pytest.raises(DatasetFormatError):
        read_csv(path)
