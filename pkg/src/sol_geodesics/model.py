"""The group SOLV^- in global coordinates (x, y, z), its left-invariant
sub-Riemannian structure and the normal Hamiltonian.

Group element::

    [[exp(-z), 0,      x],
     [0,       exp(z), y],
     [0,       0,      1]]

The distribution is spanned by the left translations of a1 = e1 + e2 and
a3 = e3, i.e. by ``exp(-z) d/dx + exp(z) d/dy`` and ``d/dz``, with
<a1, a1> = 2, <a3, a3> = 1.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

SQRT2 = math.sqrt(2.0)


class GroupPoint(NamedTuple):
    x: float
    y: float
    z: float


class PhaseState(NamedTuple):
    """Point of the cotangent bundle, flattened as (x, y, z, px, py, pz)."""

    x: float
    y: float
    z: float
    px: float
    py: float
    pz: float

    @property
    def point(self) -> GroupPoint:
        return GroupPoint(self.x, self.y, self.z)


@dataclass(frozen=True)
class NormalizedCovector:
    """Initial covector at the identity, scaled so that H = 1/2.

    ``a = px/sqrt(2)``, ``b = py/sqrt(2)``, ``pz0`` is the initial vertical
    momentum; they satisfy ``(a + b)**2 + pz0**2 = 1``.
    """

    a: float
    b: float
    pz0: float

    def __post_init__(self):
        a, b, p = self.a, self.b, self.pz0
        if not all(math.isfinite(v) for v in (a, b, p)):
            raise ValueError(f"non-finite covector {(a, b, p)!r}")
        resid = (a + b) ** 2 + p * p - 1.0
        if abs(resid) > 1e-12:
            raise ValueError(f"covector not on H = 1/2: (a+b)^2 + pz0^2 - 1 = {resid:.3e}")

    @classmethod
    def from_ab(cls, a: float, b: float, pz_sign: int = 1) -> "NormalizedCovector":
        """Covector with given (a, b); pz0 = pz_sign * sqrt(1 - (a+b)^2).

        Raises ValueError unless |a + b| <= 1.
        """
        s = a + b
        if not abs(s) <= 1.0:
            raise ValueError(f"inadmissible covector: need |a + b| <= 1, got a + b = {s!r}")
        pz = math.sqrt((1.0 - s) * (1.0 + s))
        return cls(float(a), float(b), -pz if pz_sign < 0 else pz)

    @property
    def px(self) -> float:
        return SQRT2 * self.a

    @property
    def py(self) -> float:
        return SQRT2 * self.b

    def initial_state(self) -> PhaseState:
        return PhaseState(0.0, 0.0, 0.0, self.px, self.py, self.pz0)

    def swapped(self) -> "NormalizedCovector":
        """Image under the swap-reflection (a, b, pz0) -> (b, a, -pz0)."""
        return NormalizedCovector(self.b, self.a, -self.pz0)


def hamiltonian(s) -> float:
    x, y, z, px, py, pz = s
    return (0.25 * math.exp(-2.0 * z) * px * px + 0.5 * px * py
            + 0.25 * math.exp(2.0 * z) * py * py + 0.5 * pz * pz)


def sub_riemannian_speed(s, v) -> float:
    """Length of the tangent vector ``v = (xdot, ydot, zdot)`` at ``s``.

    Uses the left-invariant metric diag(e^{2z}, e^{-2z}, 1); only meaningful
    for admissible ``v``.
    """
    z = s[2]
    xd, yd, zd = v
    return math.sqrt(math.exp(2.0 * z) * xd * xd + math.exp(-2.0 * z) * yd * yd + zd * zd)


def admissibility_residual(s, v) -> float:
    """``ydot - e^{2z} xdot``; zero iff ``v`` lies in the distribution."""
    return v[1] - math.exp(2.0 * s[2]) * v[0]


def normalize_covector(px: float, py: float, pz: float) -> NormalizedCovector:
    """Rescale a covector at the identity to H = 1/2 and return (a, b, pz0)."""
    h = hamiltonian((0.0, 0.0, 0.0, px, py, pz))
    if not (math.isfinite(h) and h > 0.0):
        raise ValueError(f"cannot normalise covector {(px, py, pz)!r} (H = {h!r})")
    lam = math.sqrt(0.5 / h)
    return NormalizedCovector(lam * px / SQRT2, lam * py / SQRT2, lam * pz)


def group_multiply(g, h) -> GroupPoint:
    """Product g*h of two group elements given in coordinates."""
    x1, y1, z1 = g
    x2, y2, z2 = h
    return GroupPoint(x1 + math.exp(-z1) * x2, y1 + math.exp(z1) * y2, z1 + z2)


def swap_reflect(s):
    """(x, y, z, px, py, pz) -> (y, x, -z, py, px, -pz); preserves H."""
    x, y, z, px, py, pz = s
    return PhaseState(y, x, -z, py, px, -pz)
