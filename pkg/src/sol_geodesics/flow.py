"""Numerical integration of the normal Hamiltonian flow from the identity.

This is the reference evaluator that the closed-form geodesics are checked
against.  The integrator is a Dormand-Prince 5(4) pair with PI step control
and its fourth-order continuous extension for output at arbitrary times.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .model import NormalizedCovector, PhaseState

CSV_HEADER = "t,x,y,z,px,py,pz,H,speed_err,adm_err"


class IntegrationError(RuntimeError):
    """Step size underflow; ``trajectory`` holds the samples reached so far."""

    def __init__(self, msg, trajectory=None):
        super().__init__(msg)
        self.trajectory = trajectory


def hamiltonian_rhs(s):
    """Right-hand side (xdot, ydot, zdot, pxdot, pydot, pzdot) of the flow."""
    x, y, z, px, py, pz = s
    em = math.exp(-2.0 * z)
    ep = math.exp(2.0 * z)
    return (0.5 * em * px + 0.5 * py,
            0.5 * ep * py + 0.5 * px,
            pz,
            0.0,
            0.0,
            0.5 * em * px * px - 0.5 * ep * py * py)


def _residuals(states):
    """Per-sample H, unit-speed error and admissibility residual.

    Velocities are those of the Hamiltonian vector field at each state.
    """
    z, px, py, pz = states[:, 2], states[:, 3], states[:, 4], states[:, 5]
    em, ep = np.exp(-2.0 * z), np.exp(2.0 * z)
    h = 0.25 * em * px * px + 0.5 * px * py + 0.25 * ep * py * py + 0.5 * pz * pz
    xd = 0.5 * em * px + 0.5 * py
    yd = 0.5 * ep * py + 0.5 * px
    speed = np.sqrt(ep * xd * xd + em * yd * yd + pz * pz)
    adm = yd - ep * xd
    return h, speed - 1.0, adm


@dataclass(frozen=True)
class Trajectory:
    """Time-stamped geodesic samples; ``states`` has shape (n, 6)."""

    times: np.ndarray
    states: np.ndarray
    H: np.ndarray = field(init=False)
    speed_err: np.ndarray = field(init=False)
    adm_err: np.ndarray = field(init=False)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        states = np.asarray(self.states, dtype=float).reshape(-1, 6)
        if times.shape[0] != states.shape[0]:
            raise ValueError("times and states differ in length")
        times.flags.writeable = False
        states.flags.writeable = False
        h, se, ae = _residuals(states)
        for name, val in (("times", times), ("states", states), ("H", h),
                          ("speed_err", se), ("adm_err", ae)):
            object.__setattr__(self, name, val)

    def __len__(self):
        return self.times.shape[0]

    def state(self, i) -> PhaseState:
        return PhaseState(*map(float, self.states[i]))

    @property
    def points(self) -> np.ndarray:
        return self.states[:, :3]

    def to_csv(self, stream, extra=None):
        """Write the trajectory as CSV (17 significant digits, ``\\n`` endings).

        ``extra`` is an optional ``(name, values)`` column appended at the end.
        """
        header = CSV_HEADER if extra is None else CSV_HEADER + "," + extra[0]
        stream.write(header + "\n")
        cols = np.column_stack([self.times, self.states, self.H, self.speed_err, self.adm_err])
        if extra is not None:
            cols = np.column_stack([cols, np.asarray(extra[1], dtype=float)])
        for row in cols:
            stream.write(",".join(_fmt(v) for v in row) + "\n")


def _fmt(v):
    return format(float(v), ".17g")


@dataclass(frozen=True)
class DriftReport:
    H: float
    px: float
    py: float
    speed: float
    admissibility: float

    def as_dict(self):
        return {"H_drift": self.H, "px_drift": self.px, "py_drift": self.py,
                "speed_err": self.speed, "adm_err": self.admissibility}


def invariant_drift(traj: Trajectory) -> DriftReport:
    """Worst deviation of the first integrals and geometric residuals."""
    if len(traj) == 0:
        raise ValueError("empty trajectory")
    st = traj.states
    return DriftReport(
        H=float(np.max(np.abs(traj.H - 0.5))),
        px=float(np.max(np.abs(st[:, 3] - st[0, 3]))),
        py=float(np.max(np.abs(st[:, 4] - st[0, 4]))),
        speed=float(np.max(np.abs(traj.speed_err))),
        admissibility=float(np.max(np.abs(traj.adm_err))),
    )


# Dormand-Prince 5(4) tableau
_C2, _C3, _C4, _C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
_E1, _E3, _E4, _E5, _E6, _E7 = (71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200,
                                22 / 525, -1 / 40)
_D1, _D3, _D4, _D5, _D6, _D7 = (-12715105075 / 11282082432, 87487479700 / 32700410799,
                                -10690763975 / 1880347072, 701980252875 / 199316789632,
                                -1453857185 / 822651844, 69997945 / 29380423)


def _comb(y, h, *terms):
    """y + h * sum(coef * k) over (coef, k) pairs, componentwise."""
    out = list(y)
    for coef, k in terms:
        hc = h * coef
        for i in range(6):
            out[i] += hc * k[i]
    return out


def _dp_step(f, y, k1, h):
    k2 = f(_comb(y, h, (_A21, k1)))
    k3 = f(_comb(y, h, (_A31, k1), (_A32, k2)))
    k4 = f(_comb(y, h, (_A41, k1), (_A42, k2), (_A43, k3)))
    k5 = f(_comb(y, h, (_A51, k1), (_A52, k2), (_A53, k3), (_A54, k4)))
    k6 = f(_comb(y, h, (_A61, k1), (_A62, k2), (_A63, k3), (_A64, k4), (_A65, k5)))
    y1 = _comb(y, h, (_B1, k1), (_B3, k3), (_B4, k4), (_B5, k5), (_B6, k6))
    k7 = f(y1)
    err = [h * (_E1 * k1[i] + _E3 * k3[i] + _E4 * k4[i] + _E5 * k5[i] + _E6 * k6[i]
                + _E7 * k7[i]) for i in range(6)]
    return y1, k7, err, (k1, k3, k4, k5, k6, k7)


def _dense_coeffs(y0, y1, h, ks):
    k1, k3, k4, k5, k6, k7 = ks
    r2 = [y1[i] - y0[i] for i in range(6)]
    r3 = [h * k1[i] - r2[i] for i in range(6)]
    r4 = [r2[i] - h * k7[i] - r3[i] for i in range(6)]
    r5 = [h * (_D1 * k1[i] + _D3 * k3[i] + _D4 * k4[i] + _D5 * k5[i] + _D6 * k6[i]
               + _D7 * k7[i]) for i in range(6)]
    return r2, r3, r4, r5


def _dense_eval(y0, coeffs, theta):
    r2, r3, r4, r5 = coeffs
    s1 = 1.0 - theta
    return [y0[i] + theta * (r2[i] + s1 * (r3[i] + theta * (r4[i] + s1 * r5[i])))
            for i in range(6)]


def _initial_step(f, y0, f0, tol):
    sc = [tol + tol * abs(v) for v in y0]
    d0 = math.sqrt(sum((y0[i] / sc[i]) ** 2 for i in range(6)) / 6)
    d1 = math.sqrt(sum((f0[i] / sc[i]) ** 2 for i in range(6)) / 6)
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    y1 = [y0[i] + h0 * f0[i] for i in range(6)]
    f1 = f(y1)
    d2 = math.sqrt(sum(((f1[i] - f0[i]) / sc[i]) ** 2 for i in range(6)) / 6) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100 * h0, h1)


def solve_dopri5(f, y0, t_eval, tol, h_max=math.inf, max_steps=10_000_000):
    """Integrate ``y' = f(y)`` from t=0 and return states at ``t_eval``.

    ``t_eval`` must be non-decreasing and start at or after 0.  The local
    error per step is held below ``tol * (1 + |y|)`` in the RMS norm.

    Returns ``(states, n_steps)``.  Raises :class:`IntegrationError` with the
    samples reached so far on step-size underflow.
    """
    t_eval = np.asarray(t_eval, dtype=float)
    out = np.empty((t_eval.shape[0], 6))
    y = [float(v) for v in y0]
    t = 0.0
    t_end = float(t_eval[-1]) if t_eval.size else 0.0
    j = 0
    while j < t_eval.shape[0] and t_eval[j] <= 0.0:
        out[j] = y
        j += 1
    if j == t_eval.shape[0]:
        return out, 0
    k1 = f(y)
    h = min(_initial_step(f, y, k1, tol), h_max, t_end)
    safe, beta, alpha = 0.9, 0.08, 0.14
    err_prev = 1e-4
    steps = 0
    while j < t_eval.shape[0]:
        if steps >= max_steps:
            raise IntegrationError(f"step budget exhausted at t={t}",
                                   (t_eval[:j], out[:j].copy()))
        if h <= 16 * _EPS_T * max(1.0, abs(t)):
            raise IntegrationError(f"step size underflow at t={t:.17g} (h={h:.3e})",
                                   (t_eval[:j], out[:j].copy()))
        last = t + h >= t_end
        if last:
            h = t_end - t
        y1, k7, e, ks = _dp_step(f, y, k1, h)
        err = math.sqrt(sum((e[i] / (tol + tol * max(abs(y[i]), abs(y1[i])))) ** 2
                            for i in range(6)) / 6)
        if not math.isfinite(err):
            h *= 0.2
            continue
        if err <= 1.0:
            t_new = t_end if last else t + h
            coeffs = None
            while j < t_eval.shape[0] and t_eval[j] <= t_new:
                if t_eval[j] == t_new:
                    out[j] = y1
                else:
                    if coeffs is None:
                        coeffs = _dense_coeffs(y, y1, h, ks)
                    out[j] = _dense_eval(y, coeffs, (t_eval[j] - t) / h)
                j += 1
            t, y, k1 = t_new, y1, k7
            steps += 1
            err = max(err, 1e-10)
            fac = safe * err ** -alpha * err_prev ** beta
            err_prev = err
            h = min(h * min(5.0, max(0.2, fac)), h_max)
        else:
            h *= max(0.2, safe * err ** -0.2)
    return out, steps


_EPS_T = 2.220446049250313e-16


def integrate(c: NormalizedCovector, t_max: float, tol: float = 1e-12, times=None,
              n_samples: int = 101) -> Trajectory:
    """Geodesic of covector ``c`` from the identity, by direct integration.

    Samples at ``times`` (increasing, starting at 0) or at ``n_samples``
    uniform times on [0, t_max].
    """
    if not t_max > 0:
        raise ValueError(f"t_max must be positive, got {t_max!r}")
    if not 1e-13 <= tol <= 1e-3:
        raise ValueError(f"tol must lie in [1e-13, 1e-3], got {tol!r}")
    if times is None:
        times = np.linspace(0.0, t_max, n_samples)
    times = np.asarray(times, dtype=float)
    if times.size == 0 or times[0] != 0.0 or np.any(np.diff(times) <= 0):
        raise ValueError("times must be strictly increasing and start at 0")
    if times[-1] > t_max * (1 + 1e-14):
        raise ValueError("requested sample time beyond t_max")
    try:
        states, _ = solve_dopri5(hamiltonian_rhs, c.initial_state(), times, tol)
    except IntegrationError as exc:
        t_part, s_part = exc.trajectory
        raise IntegrationError(str(exc), Trajectory(t_part, s_part)) from None
    return Trajectory(times, states)
