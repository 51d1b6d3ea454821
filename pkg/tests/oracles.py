"""Independent reference computations used by the tests.

Nothing here calls into the package's elliptic kernel or integrator.
"""

import math

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.optimize import brentq


def quad_F(phi, k):
    """First-kind integral by adaptive quadrature of its defining integrand."""
    return quad(lambda a: 1.0 / math.sqrt(1.0 - (k * math.sin(a)) ** 2), 0.0, phi,
                epsabs=1e-15, epsrel=1e-13, limit=400)[0]


def quad_E(phi, k):
    return quad(lambda a: math.sqrt(1.0 - (k * math.sin(a)) ** 2), 0.0, phi,
                epsabs=1e-15, epsrel=1e-13, limit=400)[0]


def quad_am(u, k):
    """Amplitude by root-finding on the quadrature of the first-kind integral."""
    hi = abs(u) + 1.0
    return brentq(lambda p: quad_F(p, k) - u, -hi, hi, xtol=1e-15, rtol=1e-15)


def rhs(t, y):
    x, yy, z, px, py, pz = y
    em, ep = math.exp(-2 * z), math.exp(2 * z)
    return [0.5 * em * px + 0.5 * py, 0.5 * ep * py + 0.5 * px, pz, 0.0, 0.0,
            0.5 * em * px * px - 0.5 * ep * py * py]


def dop853(a, b, pz0, times):
    """High-order reference integration from the identity (scipy DOP853)."""
    y0 = [0.0, 0.0, 0.0, math.sqrt(2) * a, math.sqrt(2) * b, pz0]
    times = np.asarray(times, dtype=float)
    sol = solve_ivp(rhs, (0.0, float(times[-1])), y0, method="DOP853", rtol=3e-14,
                    atol=1e-14, t_eval=times)
    assert sol.success
    return sol.y.T


# Elementary solutions in their rational-exponential form, independent of the
# tanh/logcosh rewriting used by the package (valid for b > 0 resp. a > 0, pz0 > 0)

def case2_rational(b, t):
    r = 1.0 + math.sqrt(1.0 - b * b)
    x = b * t / math.sqrt(2)
    y = (-math.sqrt(2) * (2 * r - b * b) / (2 * b * r - b ** 3 + b ** 3 * math.exp(2 * t))
         + math.sqrt(2) * (2 * r - b * b) / (2 * b * r))
    z = math.log(2 * r * math.exp(t) / (2 * r - b * b + b * b * math.exp(2 * t)))
    return x, y, z


def case3_rational(a, t):
    r = 1.0 + math.sqrt(1.0 - a * a)
    x = (-math.sqrt(2) * a / (math.exp(2 * t) * (2 * r - a * a) + a * a)
         + math.sqrt(2) * a / (2 * r))
    y = a * t / math.sqrt(2)
    z = math.log(a * a / (2 * r * math.exp(t)) + r * math.exp(t) / 2)
    return x, y, z
