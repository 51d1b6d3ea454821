"""Explicit normal geodesics from the identity.

With u = e^z the vertical equation becomes

    udot^2 = u^2 - (a + b u^2)^2 = -b^2 (u^2 - sigma1^2)(u^2 - sigma2^2),

so in the generic case (a, b != 0, ab < 1/4) u oscillates between the
turning points sigma2 <= 1 <= sigma1 and

    u(t) = sigma1 * dn(s, k),   s = sigma1 |b| (t - t0),
    k^2 = 1 - sigma2^2/sigma1^2.

The phase shift t0 puts u(0) = 1 on the branch where the sign of zdot(0)
matches pz0.  x and y then follow by quadrature:

    y = [a t + sgn(b) sigma1 (E(am s) - E(am s0))] / sqrt2
    x = [b t + (|b| sigma1 / a) (G(s) - G(s0))] / sqrt2,
    G(s) = E(am s) - k^2 sn s cn s / dn s.

The four degenerate families (a = b = 0; a = 0; b = 0; ab = 1/4) are
elementary.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import elliptic
from .flow import Trajectory
from .model import SQRT2, NormalizedCovector, PhaseState

DEFAULT_EPS = 1e-9


class GeodesicCase(enum.Enum):
    GENERIC = "generic"
    VERTICAL = "vertical"   # a = b = 0
    A_ZERO = "a_zero"       # a = 0, b != 0
    B_ZERO = "b_zero"       # b = 0, a != 0
    LINE = "line"           # ab = 1/4, i.e. a = b = +-1/2


def classify(c: NormalizedCovector, eps: float = DEFAULT_EPS) -> GeodesicCase:
    if not 0.0 < eps <= 1e-3:
        raise ValueError(f"eps must lie in (0, 1e-3], got {eps!r}")
    a0, b0 = abs(c.a) < eps, abs(c.b) < eps
    if a0 and b0:
        return GeodesicCase.VERTICAL
    if a0:
        return GeodesicCase.A_ZERO
    if b0:
        return GeodesicCase.B_ZERO
    if abs(c.a * c.b - 0.25) < eps:
        return GeodesicCase.LINE
    return GeodesicCase.GENERIC


@dataclass(frozen=True)
class GenericParams:
    a: float
    b: float
    pz0: float
    sigma1: float
    sigma2: float
    modulus: elliptic.EllipticModulus
    t0: float
    s0: float        # elliptic argument at t = 0
    freq: float      # sigma1 |b|, ds/dt
    x_const: float
    y_const: float

    @property
    def period(self) -> float:
        """Period of z(t): 2K(k) / (sigma1 |b|)."""
        return 2.0 * elliptic.complete_K(self.modulus) / self.freq


def generic_params(c: NormalizedCovector) -> GenericParams:
    a, b, pz0 = c.a, c.b, c.pz0
    if a == 0.0 or b == 0.0:
        raise ValueError("generic formulas need a != 0 and b != 0")
    ab = a * b
    disc = 1.0 - 4.0 * ab
    if not disc > 0.0:
        raise ValueError(f"generic formulas need ab < 1/4, got ab = {ab!r}")
    rd = math.sqrt(disc)
    b2 = b * b
    s1sq = (1.0 - 2.0 * ab + rd) / (2.0 * b2)
    s2sq = (a * a / b2) / s1sq                      # Vieta: sigma1^2 sigma2^2 = a^2/b^2
    sigma1, sigma2 = math.sqrt(s1sq), math.sqrt(s2sq)
    # k^2 = (sigma1^2 - sigma2^2)/sigma1^2, k'^2 = sigma2^2/sigma1^2, both cancellation-free
    modulus = elliptic.EllipticModulus.from_squares(rd / (b2 * s1sq), s2sq / s1sq)

    # u(0) = 1: alpha = sigma1^2 - 1 and beta = 1 - sigma2^2 are >= 0 with
    # alpha + beta = sqrt(D)/b^2, alpha - beta = (1 - 2ab - 2b^2)/b^2 and
    # alpha * beta = pz0^2/b^2.  The larger comes from the sum, the smaller
    # from the product.
    total = rd / b2
    diff = (1.0 - 2.0 * ab - 2.0 * b2) / b2
    prod = pz0 * pz0 / b2
    if diff >= 0.0:
        alpha = 0.5 * (total + diff)
        beta = prod / alpha if alpha > 0.0 else 0.0
    else:
        beta = 0.5 * (total - diff)
        alpha = prod / beta if beta > 0.0 else 0.0
    # dn(v*) = 1/sigma1 with am(v*) = phi*, sin^2 phi* = alpha/(alpha + beta)
    phi_star = math.atan2(math.sqrt(max(alpha, 0.0)), math.sqrt(max(beta, 0.0)))
    v_star = elliptic.incomplete_F(phi_star, modulus)
    # dn decreases on [0, K]; start at -v* to move upward (pz0 > 0)
    s0 = -v_star if pz0 > 0.0 else v_star
    freq = sigma1 * abs(b)
    t0 = -s0 / freq

    jt = elliptic.jacobi(s0, modulus)
    e0 = elliptic.incomplete_E(jt.am, modulus)
    g0 = e0 - modulus.m * jt.sn * jt.cn / jt.dn
    y_const = -math.copysign(sigma1, b) * e0 / SQRT2
    x_const = -(abs(b) * sigma1 / a) * g0 / SQRT2
    return GenericParams(a, b, pz0, sigma1, sigma2, modulus, t0, s0, freq, x_const, y_const)


def _eval_generic(p: GenericParams, t: float) -> PhaseState:
    s = p.s0 + p.freq * t
    m = p.modulus
    sn, cn, dn, am = elliptic.jacobi(s, m)
    e = elliptic.incomplete_E(am, m)
    g = e - m.m * sn * cn / dn
    x = (p.b * t + (abs(p.b) * p.sigma1 / p.a) * g) / SQRT2 + p.x_const
    y = (p.a * t + math.copysign(p.sigma1, p.b) * e) / SQRT2 + p.y_const
    z = math.log(p.sigma1 * dn)
    pz = -p.freq * m.m * sn * cn / dn
    return PhaseState(x, y, z, SQRT2 * p.a, SQRT2 * p.b, pz)


def _log_cosh(v):
    v = abs(v)
    return v + math.log1p(math.exp(-2.0 * v)) - math.log(2.0)


def _eval_a_zero(b, pz0, t):
    # u = sech(t - t1)/|b| with cosh t1 = 1/|b|, tanh t1 = pz0
    ab_ = abs(b)
    t1 = math.copysign(math.log((1.0 + math.sqrt((1.0 - ab_) * (1.0 + ab_))) / ab_), pz0)
    w = t - t1
    x = b * t / SQRT2
    y = (math.tanh(w) + math.tanh(t1)) / (SQRT2 * b)
    z = -math.log(ab_) - _log_cosh(w)
    pz = -math.tanh(w)
    return PhaseState(x, y, z, 0.0, SQRT2 * b, pz)


def _eval_b_zero(a, pz0, t):
    # swap image of the a = 0 family: u = |a| cosh(t + t1), tanh t1 = pz0
    aa = abs(a)
    t1 = math.copysign(math.log((1.0 + math.sqrt((1.0 - aa) * (1.0 + aa))) / aa), pz0)
    w = t + t1
    x = (math.tanh(w) - math.tanh(t1)) / (SQRT2 * a)
    y = a * t / SQRT2
    z = math.log(aa) + _log_cosh(w)
    pz = math.tanh(w)
    return PhaseState(x, y, z, SQRT2 * a, 0.0, pz)


class ClosedFormGeodesic:
    """Closed-form geodesic of one covector; parameters are computed once."""

    def __init__(self, c: NormalizedCovector, eps: float = DEFAULT_EPS):
        self.covector = c
        self.case = classify(c, eps)
        self.params = generic_params(c) if self.case is GeodesicCase.GENERIC else None

    def __call__(self, t: float) -> PhaseState:
        if not math.isfinite(t):
            raise ValueError(f"t must be finite, got {t!r}")
        c, case = self.covector, self.case
        if case is GeodesicCase.GENERIC:
            return _eval_generic(self.params, t)
        if case is GeodesicCase.VERTICAL:
            sgn = 1.0 if c.pz0 >= 0.0 else -1.0
            return PhaseState(0.0, 0.0, sgn * t, 0.0, 0.0, sgn)
        if case is GeodesicCase.A_ZERO:
            return _eval_a_zero(c.b, c.pz0, t)
        if case is GeodesicCase.B_ZERO:
            return _eval_b_zero(c.a, c.pz0, t)
        sgn = 1.0 if c.a + c.b > 0.0 else -1.0
        v = sgn * t / SQRT2
        return PhaseState(v, v, 0.0, sgn / SQRT2, sgn / SQRT2, 0.0)

    def metadata(self) -> dict:
        p = self.params
        c = self.covector
        return {
            "a": c.a, "b": c.b, "pz0": c.pz0, "case": self.case.value,
            "sigma1": p.sigma1 if p else None,
            "sigma2": p.sigma2 if p else None,
            "k": p.modulus.k if p else None,
            "t0": p.t0 if p else None,
        }


def eval(c: NormalizedCovector, t: float, eps: float = DEFAULT_EPS) -> PhaseState:  # noqa: A001
    """Point and momenta at arc length ``t`` along the geodesic of ``c``."""
    return ClosedFormGeodesic(c, eps)(t)


def eval_trajectory(c: NormalizedCovector, times, eps: float = DEFAULT_EPS) -> Trajectory:
    times = np.asarray(times, dtype=float)
    if times.size == 0 or times[0] != 0.0 or np.any(np.diff(times) <= 0):
        raise ValueError("times must be strictly increasing and start at 0")
    geo = ClosedFormGeodesic(c, eps)
    return Trajectory(times, np.array([geo(t) for t in times]))
