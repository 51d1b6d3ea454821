"""Sampling of geodesic spheres on a (theta, mu) grid of initial covectors.

theta fixes the split between horizontal and vertical initial momentum,
``a + b = cos(theta)`` and ``pz0 = sin(theta)``; mu is the initial second
derivative of x + y, ``mu = sqrt(2) * pz0 * (b - a)``.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .closedform import ClosedFormGeodesic
from .flow import IntegrationError, integrate
from .model import SQRT2, NormalizedCovector

THETA_RANGE = (math.pi / 6, 5 * math.pi / 6)
MU_RANGE = (-45.0, 45.0)
THREADS_ENV = "SOL_GEODESICS_THREADS"


def covector_from_grid(theta: float, mu: float) -> NormalizedCovector:
    s, c = math.sin(theta), math.cos(theta)
    if abs(s) < 1e-15:
        s = 0.0
        if mu != 0.0:
            raise ValueError(f"mu = {mu!r} needs sin(theta) != 0 (theta = {theta!r})")
        spread = 0.0
    else:
        spread = mu / (SQRT2 * s)          # b - a
    a, b = 0.5 * (c - spread), 0.5 * (c + spread)
    return NormalizedCovector(a, b, s)


@dataclass(frozen=True)
class SpherePoint:
    theta: float
    mu: float
    x: float
    y: float
    z: float
    method: str = "closed"      # "closed", "ode" (fallback) or "failed"
    error: str | None = None


@dataclass(frozen=True)
class SphereGrid:
    radius: float
    theta_range: tuple
    mu_range: tuple
    n_theta: int
    n_mu: int
    points: list = field(repr=False)

    def xyz(self) -> np.ndarray:
        """Endpoints as an (n_theta * n_mu, 3) array, row-major in (theta, mu)."""
        return np.array([(p.x, p.y, p.z) for p in self.points])

    @property
    def n_failed(self) -> int:
        return sum(p.method == "failed" for p in self.points)

    @property
    def n_fallback(self) -> int:
        return sum(p.method == "ode" for p in self.points)


def _endpoint(theta, mu, radius):
    try:
        c = covector_from_grid(theta, mu)
    except ValueError as exc:
        return SpherePoint(theta, mu, math.nan, math.nan, math.nan, "failed", str(exc))
    try:
        s = ClosedFormGeodesic(c)(radius)
        if all(math.isfinite(v) for v in s[:3]):
            return SpherePoint(theta, mu, s.x, s.y, s.z)
        err = "non-finite closed-form value"
    except (ValueError, ArithmeticError) as exc:
        err = str(exc)
    try:
        tr = integrate(c, radius, 1e-12, times=[0.0, radius])
        x, y, z = tr.states[-1, :3]
        return SpherePoint(theta, mu, float(x), float(y), float(z), "ode", err)
    except (ValueError, IntegrationError) as exc:
        return SpherePoint(theta, mu, math.nan, math.nan, math.nan, "failed", str(exc))


def thread_count() -> int:
    """Worker count from $SOL_GEODESICS_THREADS (0 or unset = auto)."""
    raw = os.environ.get(THREADS_ENV, "0").strip() or "0"
    n = int(raw)
    if n < 0:
        raise ValueError(f"{THREADS_ENV} must be >= 0, got {raw!r}")
    return n or min(8, os.cpu_count() or 1)


def sample_sphere(radius: float, theta_range=THETA_RANGE, mu_range=MU_RANGE,
                  n_theta: int = 32, n_mu: int = 32, threads: int | None = None) -> SphereGrid:
    """Endpoints at arc length ``radius`` over a uniform (theta, mu) grid.

    Points are stored row-major with theta as the slow index.  Nodes that
    cannot be evaluated are kept with ``method == "failed"`` and NaN
    coordinates.
    """
    if not radius > 0:
        raise ValueError(f"radius must be positive, got {radius!r}")
    if n_theta < 2 or n_mu < 2:
        raise ValueError("grid needs at least 2 nodes per axis")
    thetas = np.linspace(theta_range[0], theta_range[1], n_theta)
    mus = np.linspace(mu_range[0], mu_range[1], n_mu)
    nodes = [(float(t), float(m)) for t in thetas for m in mus]
    workers = thread_count() if threads is None else max(1, threads)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            points = list(pool.map(lambda n: _endpoint(n[0], n[1], radius), nodes))
    else:
        points = [_endpoint(t, m, radius) for t, m in nodes]
    return SphereGrid(float(radius), (float(theta_range[0]), float(theta_range[1])),
                      (float(mu_range[0]), float(mu_range[1])), n_theta, n_mu, points)


def _fmt(v):
    return format(float(v), ".17g")


def export_cloud(g: SphereGrid, path, fmt: str = "csv", exp_z: bool = False):
    """Write the point cloud as CSV (``theta,mu,x,y,z``) or a quad-mesh OBJ.

    With ``exp_z`` the third coordinate is written as e^z.
    """
    if not g.points:
        raise ValueError("empty sphere grid")
    if fmt not in ("csv", "obj"):
        raise ValueError(f"unknown format {fmt!r}")
    third = (lambda z: math.exp(z)) if exp_z else (lambda z: z)
    lines = []
    if fmt == "csv":
        lines.append("theta,mu,x,y," + ("exp_z" if exp_z else "z"))
        for p in g.points:
            lines.append(",".join(_fmt(v) for v in (p.theta, p.mu, p.x, p.y, third(p.z))))
    else:
        lines.append(f"# geodesic sphere r={_fmt(g.radius)} grid={g.n_theta}x{g.n_mu}")
        for p in g.points:
            lines.append("v " + " ".join(_fmt(v) for v in (p.x, p.y, third(p.z))))
        for i in range(g.n_theta - 1):
            for j in range(g.n_mu - 1):
                v00 = i * g.n_mu + j + 1
                v01, v10 = v00 + 1, v00 + g.n_mu
                lines.append(f"f {v00} {v10} {v10 + 1} {v01}")
    text = "\n".join(lines) + "\n"
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write point cloud to {path}: {exc}") from exc
