"""Randomised invariant suites behind ``sol-geodesics verify``.

Each suite returns a JSON-ready dict with the worst residual per check, the
tolerance it is held to, and up to ``MAX_FAILURES`` offending inputs for
replay.
"""

import math
import random

import numpy as np

from . import elliptic
from .closedform import eval_trajectory
from .flow import integrate, invariant_drift
from .model import NormalizedCovector, swap_reflect

MAX_FAILURES = 20
SUITES = ("elliptic", "conservation", "oracle", "symmetry")


class _Check:
    def __init__(self, name, tol):
        self.name, self.tol = name, tol
        self.worst = 0.0
        self.failures = []

    def record(self, value, **params):
        value = float(value)
        if not math.isfinite(value) or value > self.worst:
            self.worst = value if math.isfinite(value) else math.inf
        if not value <= self.tol and len(self.failures) < MAX_FAILURES:
            self.failures.append({**params, "residual": value})

    @property
    def passed(self):
        return self.worst <= self.tol

    def as_dict(self):
        return {"worst": self.worst, "tol": self.tol, "passed": self.passed,
                "failures": self.failures}


def _report(suite, n, seed, checks):
    return {"suite": suite, "n": n, "seed": seed,
            "passed": all(c.passed for c in checks),
            "checks": {c.name: c.as_dict() for c in checks}}


def random_covector(rng: random.Random, generic=False) -> NormalizedCovector:
    """Random admissible covector.

    With ``generic``: 1e-3 <= |a|, |b| <= 1 (log-uniform magnitudes, random
    signs) and ab < 1/4 - 1e-3.
    """
    sign = 1 if rng.random() < 0.5 else -1
    if not generic:
        theta = rng.uniform(-math.pi, math.pi)
        h = math.cos(theta)
        spread = rng.uniform(-2.0, 2.0)
        return NormalizedCovector.from_ab(0.5 * (h - spread), 0.5 * (h + spread), sign)
    while True:
        a = rng.choice((-1, 1)) * 10 ** rng.uniform(-3, 0)
        b = rng.choice((-1, 1)) * 10 ** rng.uniform(-3, 0)
        if abs(a + b) <= 1.0 and a * b < 0.25 - 1e-3:
            return NormalizedCovector.from_ab(a, b, sign)


def suite_elliptic(n=10_000, seed=0):
    rng = random.Random(seed)
    ident_sc = _Check("sn2_plus_cn2", 1e-12)
    ident_dn = _Check("dn2_plus_k2sn2", 1e-12)
    roundtrip = _Check("F_of_am_roundtrip", 1e-10)
    period = _Check("periodicity", 1e-10)
    deriv = _Check("derivatives_fd_rel", 1e-6)
    h = 1e-6
    for i in range(n):
        u = rng.uniform(-10.0, 10.0)
        k = rng.uniform(0.0, 0.999)
        m = elliptic.EllipticModulus.from_k(k)
        sn, cn, dn, am = elliptic.jacobi(u, m)
        ident_sc.record(abs(sn * sn + cn * cn - 1.0), u=u, k=k)
        ident_dn.record(abs(dn * dn + k * k * sn * sn - 1.0), u=u, k=k)
        if i % 10:
            continue
        kk = elliptic.complete_K(m)
        v = rng.uniform(0.0, kk)
        roundtrip.record(abs(elliptic.incomplete_F(elliptic.jacobi(v, m).am, m) - v), u=v, k=k)
        s4 = elliptic.jacobi(u + 4 * kk, m)
        d2 = elliptic.jacobi(u + 2 * kk, m)
        period.record(max(abs(s4.sn - sn), abs(d2.dn - dn)), u=u, k=k)
        jp, jm = elliptic.jacobi(u + h, m), elliptic.jacobi(u - h, m)
        exact = (cn * dn, -sn * dn, -k * k * sn * cn)
        fd = ((jp.sn - jm.sn) / (2 * h), (jp.cn - jm.cn) / (2 * h), (jp.dn - jm.dn) / (2 * h))
        # relative to the derivative scale; FD roundoff is ~1e-10 absolute
        rel = max(abs(f - e) / max(abs(e), 1e-3) for f, e in zip(fd, exact))
        deriv.record(rel, u=u, k=k)
    return _report("elliptic", n, seed, [ident_sc, ident_dn, roundtrip, period, deriv])


def suite_conservation(n=100, seed=0, t_max=10.0):
    rng = random.Random(seed)
    hc = _Check("H_drift", 1e-9)
    pc = _Check("px_py_drift", 1e-12)
    sc = _Check("speed_err", 1e-8)
    ac = _Check("adm_err", 1e-8)
    for _ in range(n):
        c = random_covector(rng)
        d = invariant_drift(integrate(c, t_max, 1e-12))
        params = {"a": c.a, "b": c.b, "pz0": c.pz0}
        hc.record(d.H, **params)
        pc.record(max(d.px, d.py), **params)
        sc.record(d.speed, **params)
        ac.record(d.admissibility, **params)
    return _report("conservation", n, seed, [hc, pc, sc, ac])


def suite_oracle(n=200, seed=0, t_max=5.0, samples=64):
    rng = random.Random(seed)
    dev = _Check("closed_vs_ode", 1e-6)
    times = np.linspace(0.0, t_max, samples)
    for _ in range(n):
        c = random_covector(rng, generic=True)
        d = np.max(np.abs(eval_trajectory(c, times).states
                          - integrate(c, t_max, 1e-12, times=times).states))
        dev.record(d, a=c.a, b=c.b, pz0=c.pz0)
    return _report("oracle", n, seed, [dev])


def suite_symmetry(n=50, seed=0, t_max=5.0, samples=32):
    rng = random.Random(seed)
    closed = _Check("swap_closed", 1e-8)
    ode = _Check("swap_ode", 1e-8)
    times = np.linspace(0.0, t_max, samples)
    for _ in range(n):
        c = random_covector(rng, generic=True)
        cs = c.swapped()
        params = {"a": c.a, "b": c.b, "pz0": c.pz0}
        for check, run in ((closed, lambda v: eval_trajectory(v, times)),
                           (ode, lambda v: integrate(v, t_max, 1e-12, times=times))):
            mapped = np.array([swap_reflect(s) for s in run(c).states])
            check.record(np.max(np.abs(mapped - run(cs).states)), **params)
    return _report("symmetry", n, seed, [closed, ode])


_RUNNERS = {"elliptic": suite_elliptic, "conservation": suite_conservation,
            "oracle": suite_oracle, "symmetry": suite_symmetry}


def run_suite(suite: str, n: int | None = None, seed: int = 0) -> dict:
    """Run one suite (or ``"all"``); ``n=None`` uses each suite's default."""
    if suite == "all":
        reports = [run_suite(s, n, seed) for s in SUITES]
        return {"suite": "all", "seed": seed, "passed": all(r["passed"] for r in reports),
                "suites": reports}
    if suite not in _RUNNERS:
        raise ValueError(f"unknown suite {suite!r}")
    kwargs = {"seed": seed}
    if n is not None:
        kwargs["n"] = n
    return _RUNNERS[suite](**kwargs)
