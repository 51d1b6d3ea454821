import hashlib
import math

import numpy as np
import pytest

from sol_geodesics.closedform import eval as cf_eval
from sol_geodesics.sphere import (
    THREADS_ENV,
    covector_from_grid,
    export_cloud,
    sample_sphere,
    thread_count,
)

from oracles import dop853


def test_covector_from_grid_examples():
    c = covector_from_grid(math.pi / 2, 0.0)
    assert (c.a, c.b, c.pz0) == pytest.approx((0.0, 0.0, 1.0), abs=1e-16)
    c = covector_from_grid(0.0, 0.0)
    assert (c.a, c.b, c.pz0) == (0.5, 0.5, 0.0)
    c = covector_from_grid(math.pi / 2, math.sqrt(2))
    assert (c.a, c.b, c.pz0) == pytest.approx((-0.5, 0.5, 1.0), abs=1e-15)


def test_mu_is_initial_acceleration_of_x_plus_y():
    # one-sided second difference of x + y along the oracle trajectory
    for theta, mu in [(math.pi / 2, math.sqrt(2)), (1.0, -3.0), (2.2, 10.0)]:
        c = covector_from_grid(theta, mu)
        h = 1e-4
        s = dop853(c.a, c.b, c.pz0, [0.0, h, 2 * h])
        f = s[:, 0] + s[:, 1]
        assert (f[2] - 2 * f[1] + f[0]) / h ** 2 == pytest.approx(mu, rel=1e-3, abs=1e-3)


def test_covector_from_grid_domain():
    with pytest.raises(ValueError):
        covector_from_grid(0.0, 1.0)
    with pytest.raises(ValueError):
        covector_from_grid(math.pi, -2.0)


def test_default_grid_sizes():
    g = sample_sphere(0.15)
    assert len(g.points) == 1024 and g.xyz().shape == (1024, 3)
    assert g.n_failed == 0 and g.n_fallback == 0
    assert g.points[0].theta == pytest.approx(math.pi / 6)
    assert g.points[-1].mu == 45.0


def test_points_are_closed_form_endpoints():
    g = sample_sphere(0.25, n_theta=5, n_mu=7)
    for p in g.points:
        ref = cf_eval(covector_from_grid(p.theta, p.mu), 0.25).point
        assert (p.x, p.y, p.z) == tuple(ref)


def test_small_radius_bound():
    for r in (1e-3, 1e-2, 0.1, 0.25):
        norms = np.linalg.norm(sample_sphere(r, n_theta=9, n_mu=9).xyz(), axis=1)
        # unit speed in a metric squeezed by at most e^{|z|}, |z| <= r
        assert np.max(norms) <= r * math.sqrt(math.cosh(2 * r))
    tiny = sample_sphere(1e-3, n_theta=4, n_mu=4).xyz()
    assert np.max(np.linalg.norm(tiny, axis=1)) <= 1e-3 + 1e-9


def test_monotone_inclusion():
    inner = np.linalg.norm(sample_sphere(0.15, n_theta=8, n_mu=8).xyz(), axis=1)
    assert np.max(inner) <= 0.25


def test_mirror_property():
    g = sample_sphere(0.25, n_theta=8, n_mu=8)
    lo, hi = g.theta_range
    m = sample_sphere(0.25, theta_range=(-lo, -hi), n_theta=8, n_mu=8)
    for p, q in zip(g.points, m.points):
        assert q.theta == -p.theta and q.mu == p.mu
        assert (q.x, q.y, q.z) == pytest.approx((p.y, p.x, -p.z), abs=1e-8)


def test_subsample_against_oracle():
    g = sample_sphere(0.15, n_theta=10, n_mu=10)
    rng = np.random.default_rng(1)
    for i in rng.choice(len(g.points), 10, replace=False):
        p = g.points[i]
        c = covector_from_grid(p.theta, p.mu)
        ref = dop853(c.a, c.b, c.pz0, [0.0, 0.15])[-1, :3]
        assert (p.x, p.y, p.z) == pytest.approx(tuple(ref), abs=1e-6)


def test_failed_nodes_are_recorded():
    # theta range through 0 with nonzero mu hits sin(theta) = 0
    g = sample_sphere(0.1, theta_range=(-1.0, 1.0), mu_range=(1.0, 2.0), n_theta=3, n_mu=2)
    assert g.n_failed == 2
    bad = [p for p in g.points if p.method == "failed"]
    assert all(p.theta == 0.0 and math.isnan(p.x) and p.error for p in bad)


def test_sample_sphere_validation():
    with pytest.raises(ValueError):
        sample_sphere(0.0)
    with pytest.raises(ValueError):
        sample_sphere(0.1, n_theta=1)


def _digest(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


def test_csv_export(tmp_path):
    g = sample_sphere(0.15, n_theta=2, n_mu=2)
    out = tmp_path / "s.csv"
    export_cloud(g, out)
    lines = out.read_text().split("\n")
    assert lines[0] == "theta,mu,x,y,z" and lines[-1] == ""
    assert len(lines) - 2 == 4
    export_cloud(g, tmp_path / "e.csv", exp_z=True)
    row = (tmp_path / "e.csv").read_text().split("\n")[1].split(",")
    assert float(row[4]) == pytest.approx(math.exp(g.points[0].z), rel=1e-15)


def test_obj_export(tmp_path):
    g = sample_sphere(0.25)
    out = tmp_path / "s.obj"
    export_cloud(g, out, fmt="obj")
    lines = out.read_text().splitlines()
    verts = [ln for ln in lines if ln.startswith("v ")]
    faces = [ln for ln in lines if ln.startswith("f ")]
    assert len(verts) == 1024 and len(faces) == 31 * 31
    idx = [int(v) for f in faces for v in f.split()[1:]]
    assert min(idx) == 1 and max(idx) == 1024
    assert faces[0] == "f 1 33 34 2"


def test_export_is_deterministic(tmp_path, monkeypatch):
    paths = []
    for n, threads in enumerate(("1", "4")):
        monkeypatch.setenv(THREADS_ENV, threads)
        p = tmp_path / f"run{n}.obj"
        export_cloud(sample_sphere(0.15, n_theta=12, n_mu=12), p, fmt="obj")
        paths.append(p)
    assert _digest(paths[0]) == _digest(paths[1])


def test_export_errors(tmp_path):
    g = sample_sphere(0.15, n_theta=2, n_mu=2)
    with pytest.raises(ValueError):
        export_cloud(g, tmp_path / "x.ply", fmt="ply")
    with pytest.raises(OSError, match="missing"):
        export_cloud(g, tmp_path / "missing" / "x.csv")


def test_thread_count(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, "3")
    assert thread_count() == 3
    monkeypatch.setenv(THREADS_ENV, "0")
    assert thread_count() >= 1
    monkeypatch.setenv(THREADS_ENV, "-1")
    with pytest.raises(ValueError):
        thread_count()
