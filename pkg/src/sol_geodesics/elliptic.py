"""Jacobi elliptic functions and Legendre elliptic integrals of the first and
second kind, for real arguments and real modulus 0 <= k < 1.

Pure Python (``math`` only).  The integrals use Carlson's symmetric forms
R_F and R_D with duplication; sn, cn, dn and the amplitude use the
descending AGM / Gauss transformation ladder.  The amplitude is always the
continuous branch, ``am(u + 2K) = am(u) + pi``.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

__all__ = [
    "EllipticDomainError",
    "EllipticModulus",
    "JacobiTriple",
    "carlson_rf",
    "carlson_rd",
    "complete_K",
    "complete_E",
    "incomplete_F",
    "incomplete_E",
    "jacobi",
    "inverse_dn",
]

_EPS = 2.220446049250313e-16


class EllipticDomainError(ValueError):
    """Argument or modulus outside the supported real domain."""


@dataclass(frozen=True)
class EllipticModulus:
    """Modulus ``k`` and complementary modulus ``kprime``.

    Build with :meth:`from_k` in the ordinary case.  When ``kprime`` is known
    more accurately than ``sqrt(1 - k**2)`` (k close to 1), use
    :meth:`from_squares` with both squares computed independently.
    """

    k: float
    kprime: float

    def __post_init__(self):
        k, kp = self.k, self.kprime
        if not (math.isfinite(k) and math.isfinite(kp)):
            raise EllipticDomainError(f"non-finite modulus k={k!r}, k'={kp!r}")
        if not (0.0 <= k < 1.0) or not (0.0 < kp <= 1.0):
            raise EllipticDomainError(f"modulus must satisfy 0 <= k < 1, got k={k!r}, k'={kp!r}")
        if abs(k * k + kp * kp - 1.0) > 4 * _EPS:
            raise EllipticDomainError(f"k^2 + k'^2 = {k * k + kp * kp!r} != 1")

    @classmethod
    def from_k(cls, k: float) -> "EllipticModulus":
        k = abs(float(k))
        if not k < 1.0:
            raise EllipticDomainError(f"modulus must satisfy 0 <= k < 1, got {k!r}")
        return cls(k, math.sqrt((1.0 - k) * (1.0 + k)))

    @classmethod
    def from_squares(cls, k2: float, kp2: float) -> "EllipticModulus":
        """From k^2 and k'^2, renormalised so that they sum to one."""
        s = k2 + kp2
        if not (k2 >= 0.0 and kp2 > 0.0 and math.isfinite(s)):
            raise EllipticDomainError(f"invalid modulus squares k^2={k2!r}, k'^2={kp2!r}")
        return cls(math.sqrt(k2 / s), math.sqrt(kp2 / s))

    @property
    def m(self) -> float:
        """Parameter m = k^2."""
        return self.k * self.k


class JacobiTriple(NamedTuple):
    sn: float
    cn: float
    dn: float
    am: float


def _as_modulus(m) -> EllipticModulus:
    if isinstance(m, EllipticModulus):
        return m
    return EllipticModulus.from_k(m)


def _check_finite(name, v):
    if not math.isfinite(v):
        raise EllipticDomainError(f"{name} must be finite, got {v!r}")


# ---- Carlson symmetric integrals ----

def carlson_rf(x: float, y: float, z: float) -> float:
    """R_F(x, y, z) for non-negative arguments, at most one of them zero."""
    if min(x, y, z) < 0.0 or min(x + y, x + z, y + z) == 0.0:
        raise EllipticDomainError(f"R_F({x}, {y}, {z}) undefined")
    a = (x + y + z) / 3.0
    q = max(abs(a - x), abs(a - y), abs(a - z)) / (3.0 * _EPS) ** (1.0 / 6.0)
    while q >= abs(a):
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx * sy + sx * sz + sy * sz
        x, y, z = 0.25 * (x + lam), 0.25 * (y + lam), 0.25 * (z + lam)
        a = 0.25 * (a + lam)
        q *= 0.25
    # A_n - x_n shrinks by exactly 4 per step, so the current values give the
    # scaled deviations directly.
    X = (a - x) / a
    Y = (a - y) / a
    Z = -(X + Y)
    e2 = X * Y - Z * Z
    e3 = X * Y * Z
    return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / math.sqrt(a)


def carlson_rd(x: float, y: float, z: float) -> float:
    """R_D(x, y, z) for x, y >= 0 (not both zero) and z > 0."""
    if min(x, y) < 0.0 or x + y == 0.0 or not z > 0.0:
        raise EllipticDomainError(f"R_D({x}, {y}, {z}) undefined")
    a = (x + y + 3.0 * z) / 5.0
    q = max(abs(a - x), abs(a - y), abs(a - z)) / (0.25 * _EPS) ** (1.0 / 6.0)
    total = 0.0
    p4 = 1.0
    while q >= abs(a):
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx * sy + sx * sz + sy * sz
        total += p4 / (sz * (z + lam))
        p4 *= 0.25
        x, y, z = 0.25 * (x + lam), 0.25 * (y + lam), 0.25 * (z + lam)
        a = 0.25 * (a + lam)
        q *= 0.25
    X = (a - x) / a
    Y = (a - y) / a
    Z = -(X + Y) / 3.0
    xy, zz = X * Y, Z * Z
    e2 = xy - 6.0 * zz
    e3 = (3.0 * xy - 8.0 * zz) * Z
    e4 = 3.0 * (xy - zz) * zz
    e5 = xy * zz * Z
    series = (1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0 - 3.0 * e4 / 22.0
              - 9.0 * e2 * e3 / 52.0 + 3.0 * e5 / 26.0)
    return p4 * series / (a * math.sqrt(a)) + 3.0 * total


# ---- complete and incomplete integrals ----

@lru_cache(maxsize=4096)
def _agm_ladder(k: float, kp: float):
    """Descending AGM ladder (a_n, c_n) started from (1, k'), c_0 = k."""
    a, b, c = 1.0, kp, k
    aa, cc = [a], [c]
    for _ in range(64):
        if abs(c) <= _EPS * a:
            break
        a_next = 0.5 * (a + b)
        c = c * c / (4.0 * a_next)
        b = math.sqrt(a * b)
        a = a_next
        aa.append(a)
        cc.append(c)
    return tuple(aa), tuple(cc)


def complete_K(m) -> float:
    """Complete integral of the first kind K(k) = F(pi/2, k)."""
    m = _as_modulus(m)
    aa, _ = _agm_ladder(m.k, m.kprime)
    return math.pi / (2.0 * aa[-1])


def complete_E(m) -> float:
    """Complete integral of the second kind E(k) = E(pi/2, k)."""
    m = _as_modulus(m)
    kp2 = m.kprime * m.kprime
    return carlson_rf(0.0, kp2, 1.0) - m.m * carlson_rd(0.0, kp2, 1.0) / 3.0


def _reduce_phi(phi):
    """phi = n*pi + r with |r| <= pi/2."""
    n = round(phi / math.pi)
    return n, phi - n * math.pi


def _legendre_reduced(r, m: EllipticModulus, second_kind: bool):
    s, c = math.sin(r), math.cos(r)
    c2 = c * c
    s2 = s * s
    # 1 - k^2 sin^2 written without cancellation for k near 1
    delta2 = c2 + m.kprime * m.kprime * s2
    rf = carlson_rf(c2, delta2, 1.0)
    if not second_kind:
        return s * rf
    return s * rf - m.m * s * s2 * carlson_rd(c2, delta2, 1.0) / 3.0


def incomplete_F(phi: float, m) -> float:
    """F(phi, k) = integral_0^phi da / sqrt(1 - k^2 sin^2 a), any real phi."""
    m = _as_modulus(m)
    _check_finite("phi", phi)
    if m.k == 0.0:
        return float(phi)
    n, r = _reduce_phi(phi)
    val = _legendre_reduced(r, m, False)
    if n:
        val += 2 * n * complete_K(m)
    return val


def incomplete_E(phi: float, m) -> float:
    """E(phi, k) = integral_0^phi sqrt(1 - k^2 sin^2 a) da, any real phi."""
    m = _as_modulus(m)
    _check_finite("phi", phi)
    if m.k == 0.0:
        return float(phi)
    n, r = _reduce_phi(phi)
    val = _legendre_reduced(r, m, True)
    if n:
        val += 2 * n * complete_E(m)
    return val


# ---- Jacobi functions ----

def _am_agm(u, aa, cc):
    n = len(aa) - 1
    phi = math.ldexp(aa[n] * u, n)
    for i in range(n, 0, -1):
        phi = 0.5 * (phi + math.asin(cc[i] / aa[i] * math.sin(phi)))
    return phi


def jacobi(u: float, m) -> JacobiTriple:
    """Return (sn u, cn u, dn u, am u) for real ``u``.

    ``m`` is an :class:`EllipticModulus` or a bare modulus k.  The amplitude
    is continuous in ``u`` and is not reduced modulo 2 pi.
    """
    m = _as_modulus(m)
    _check_finite("u", u)
    aa, cc = _agm_ladder(m.k, m.kprime)
    if len(aa) == 1:
        phi = u  # k == 0
    else:
        two_k = math.pi / aa[-1]
        n = round(u / two_k)
        r = u - n * two_k
        phi = _am_agm(r, aa, cc) + n * math.pi
    sn, cn = math.sin(phi), math.cos(phi)
    dn = math.sqrt(cn * cn + m.kprime * m.kprime * sn * sn)
    return JacobiTriple(sn, cn, dn, phi)


def inverse_dn(w: float, m) -> float:
    """Smallest v >= 0 with dn(v, k) = w, for k' <= w <= 1.

    Result lies in [0, K(k)]; ``w = k'`` gives the quarter period.
    """
    m = _as_modulus(m)
    _check_finite("w", w)
    kp = m.kprime
    slack = 8 * _EPS
    if w > 1.0 + slack or w < kp - slack:
        raise EllipticDomainError(f"dn never equals {w!r} for k={m.k!r} (range [{kp!r}, 1])")
    w = min(max(w, kp), 1.0)
    if m.k == 0.0:
        return 0.0
    # sin^2(am) = (1 - w^2)/k^2, cos^2(am) = (w^2 - k'^2)/k^2
    phi = math.atan2(math.sqrt((1.0 - w) * (1.0 + w)), math.sqrt((w - kp) * (w + kp)))
    return incomplete_F(phi, m)
