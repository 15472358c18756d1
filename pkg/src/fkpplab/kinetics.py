"""Logistic reaction kinetics and the auxiliary ODE semiflow.

The reaction of the scaled equation is f(u) = u(1-u).  The barrier
constructions need two companions:

* a bistable extension that agrees with u(1-u) on u >= -1/2 and adds a
  stable zero at u = -1, so the auxiliary ODE is well behaved on negative
  data, and
* an epsilon-modification whose unstable zero sits at eps*|ln eps| instead
  of 0: near the origin the rate is the slow linear (u - eps|ln eps|)/|ln eps|,
  blended back into the bistable rate by a C2 cutoff psi, and the modified
  rate never exceeds the unmodified one.

The semiflow w(s, xi) of the modified rate, together with its first and
second xi-derivatives, drives the interface-generation barriers.

The cutoff support is tied to the epsilon scales: psi = 1 on
[-eps/2, min(cutoff_inner, 3 eps|ln eps|)] and vanishes outside
[-eps, min(cutoff_outer, 6 eps|ln eps|)].  A fixed, epsilon-independent
support cannot work: on the negative side the slow linear rate would exceed
u(1-u) (breaking the one-sided modification inequality), and on the positive
side the slow zone would widen as eps -> 0, destroying the eps-uniform
generation time.  Validity is checked at construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import ConfigurationError, DomainError, NumericalError
from .smoothing import smoothstep, smoothstep_d1, smoothstep_d2

EPS_MAX = 1.0 / math.e  # |ln eps| > 1 to the left of this


def eps_log(epsilon):
    """The generation scale eps * |ln eps|."""
    return epsilon * abs(math.log(epsilon))


@dataclass(frozen=True)
class KineticsParams:
    """Layer parameter eps plus the cutoff / extension geometry."""

    epsilon: float
    cutoff_inner: float = 0.25
    cutoff_outer: float = 0.5
    extension_knee: float = -0.5

    def __post_init__(self):
        if not 0.0 < self.epsilon < EPS_MAX:
            raise ConfigurationError("epsilon must lie in (0, 1/e)")
        if not 0.0 < self.cutoff_inner < self.cutoff_outer:
            raise ConfigurationError("need 0 < cutoff_inner < cutoff_outer")
        if not -1.0 < self.extension_knee < 0.0:
            raise ConfigurationError("extension knee must lie in (-1, 0)")
        if eps_log(self.epsilon) >= self.cutoff_inner:
            raise ConfigurationError(
                "eps|ln eps| must stay below cutoff_inner (epsilon too large)"
            )
        u = np.linspace(-2.0, 2.0, 10_000)
        gap = modified_logistic(u, self) - bistable_logistic(u)
        if float(gap.max()) > 1e-12:
            raise ConfigurationError(
                "modified rate exceeds the bistable rate (epsilon too large)"
            )

    @property
    def log_eps(self):
        return abs(math.log(self.epsilon))

    @property
    def threshold(self):
        return eps_log(self.epsilon)

    # psi support edges; positive side follows the eps|ln eps| scale,
    # negative side the eps scale (see module docstring).
    @property
    def pos_inner(self):
        return min(self.cutoff_inner, 3.0 * self.threshold)

    @property
    def pos_outer(self):
        return min(self.cutoff_outer, 6.0 * self.threshold)

    @property
    def neg_inner(self):
        return 0.5 * self.epsilon

    @property
    def neg_outer(self):
        return self.epsilon


def logistic_flow(xi, s):
    """Exact solution at time s of z' = z(1-z), z(0) = xi, for xi in [0, 1]."""
    xi = np.asarray(xi, dtype=float)
    if np.any(xi < 0.0) or np.any(xi > 1.0):
        raise DomainError("logistic_flow needs xi in [0, 1]; use semiflow otherwise")
    if s < 0.0:
        raise DomainError("s must be nonnegative")
    # xi e^s / (1 + xi (e^s - 1)) rewritten to avoid overflow for large s
    out = xi / (xi + (1.0 - xi) * np.exp(-s))
    return out if out.ndim else float(out)


def _extension_factor(u, knee=-0.5):
    """q(u): 1 on u >= knee, 1 - ((knee-u)/(knee+1))^3 below, so q(-1) = 0
    with q'(-1) > 0 and C2 matching at the knee."""
    u = np.asarray(u, dtype=float)
    v = (knee - u) / (knee + 1.0)
    return np.where(u >= knee, 1.0, 1.0 - v**3)


def bistable_logistic(u, knee=-0.5):
    """u(1-u) extended bistably: zeros at -1, 0, 1 with -1 and 1 stable."""
    u = np.asarray(u, dtype=float)
    out = u * (1.0 - u) * _extension_factor(u, knee)
    return out if out.ndim else float(out)


def _bistable_derivs(u, knee=-0.5):
    """(f, f', f'') of the bistable extension."""
    u = np.asarray(u, dtype=float)
    s = 1.0 / (knee + 1.0)
    v = (knee - u) * s
    below = u < knee
    q = np.where(below, 1.0 - v**3, 1.0)
    q1 = np.where(below, 3.0 * s * v**2, 0.0)
    q2 = np.where(below, -6.0 * s * s * v, 0.0)
    core = u * (1.0 - u)
    core1 = 1.0 - 2.0 * u
    f = core * q
    f1 = core1 * q + core * q1
    f2 = -2.0 * q + 2.0 * core1 * q1 + core * q2
    return f, f1, f2


def _cutoff_derivs(u, p: KineticsParams):
    """(psi, psi', psi'') of the C2 cutoff; 1 near [0, eps|ln eps|], 0 far out."""
    u = np.asarray(u, dtype=float)
    psi = np.ones_like(u)
    psi1 = np.zeros_like(u)
    psi2 = np.zeros_like(u)

    a, b = p.pos_inner, p.pos_outer
    pos = (u > a) & (u < b)
    t = (u - a) / (b - a)
    psi = np.where(pos, 1.0 - smoothstep(t), psi)
    psi1 = np.where(pos, -smoothstep_d1(t) / (b - a), psi1)
    psi2 = np.where(pos, -smoothstep_d2(t) / (b - a) ** 2, psi2)
    psi = np.where(u >= b, 0.0, psi)

    a, b = p.neg_inner, p.neg_outer
    neg = (u < -a) & (u > -b)
    t = (-u - a) / (b - a)
    psi = np.where(neg, 1.0 - smoothstep(t), psi)
    psi1 = np.where(neg, smoothstep_d1(t) / (b - a), psi1)
    psi2 = np.where(neg, -smoothstep_d2(t) / (b - a) ** 2, psi2)
    psi = np.where(u <= -b, 0.0, psi)
    return psi, psi1, psi2


def modified_logistic(u, p: KineticsParams):
    """The eps-modified rate: slow linear near the origin, bistable outside.

    Vanishes at u = eps|ln eps|; never exceeds bistable_logistic (checked at
    construction of KineticsParams).
    """
    u = np.asarray(u, dtype=float)
    psi, _, _ = _cutoff_derivs(u, p)
    linear = (u - p.threshold) / p.log_eps
    out = psi * linear + (1.0 - psi) * bistable_logistic(u, p.extension_knee)
    return out if out.ndim else float(out)


def _modified_derivs(u, p: KineticsParams):
    """(f, f', f'') of the modified rate, for the variational equations."""
    u = np.asarray(u, dtype=float)
    psi, psi1, psi2 = _cutoff_derivs(u, p)
    f, f1, f2 = _bistable_derivs(u, p.extension_knee)
    lin = (u - p.threshold) / p.log_eps
    lin1 = 1.0 / p.log_eps
    g = psi * lin + (1.0 - psi) * f
    g1 = psi1 * (lin - f) + psi * lin1 + (1.0 - psi) * f1
    g2 = psi2 * (lin - f) + 2.0 * psi1 * (lin1 - f1) + (1.0 - psi) * f2
    return g, g1, g2


_ODE_KW = dict(method="DOP853", rtol=1e-10, atol=1e-12)


def semiflow(s, xi, p: KineticsParams):
    """w(s, xi): value at time s of dw/ds = modified rate, w(0) = xi.

    xi may be a scalar or an array (trajectories are decoupled and
    integrated jointly).
    """
    if s < 0.0:
        raise DomainError("s must be nonnegative")
    xi_arr = np.atleast_1d(np.asarray(xi, dtype=float))
    if s == 0.0:
        out = xi_arr.copy()
    else:
        sol = solve_ivp(
            lambda _, w: _modified_derivs(w, p)[0], (0.0, s), xi_arr, **_ODE_KW
        )
        if not sol.success:
            raise NumericalError(f"semiflow integration failed: {sol.message}")
        out = sol.y[:, -1]
    return out.reshape(np.shape(xi)) if np.ndim(xi) else float(out[0])


def positivity_time(xi, p: KineticsParams):
    """Time at which the semiflow started from xi in (0, eps|ln eps|) hits zero.

    Closed form of the slow linear rate: |ln eps| * |ln(1 - xi/(eps|ln eps|))|.
    """
    if not 0.0 < xi < p.threshold:
        raise DomainError("xi must lie strictly between 0 and eps|ln eps|")
    return p.log_eps * abs(math.log(1.0 - xi / p.threshold))


def semiflow_sensitivity(s, xi, p: KineticsParams):
    """(w_xi, w_xixi) at (s, xi), via the joint variational system."""
    if s < 0.0:
        raise DomainError("s must be nonnegative")
    if s == 0.0:
        return 1.0, 0.0

    def rhs(_, y):
        w, d1, d2 = y
        f, f1, f2 = _modified_derivs(w, p)
        return [float(f), float(f1 * d1), float(f1 * d2 + f2 * d1 * d1)]

    sol = solve_ivp(rhs, (0.0, s), [float(xi), 1.0, 0.0], **_ODE_KW)
    if not sol.success:
        raise NumericalError(f"sensitivity integration failed: {sol.message}")
    return float(sol.y[1, -1]), float(sol.y[2, -1])


def fitted_generation_alpha(p: KineticsParams, xi_hi=2.0):
    """Smallest alpha with w(alpha |ln eps|, 3 eps|ln eps|) >= 1 - eps and
    w(alpha |ln eps|, xi_hi) <= 1 + eps, found by event integration."""
    eps = p.epsilon

    def crossing(target, xi0, direction):
        ev = lambda _, w: w[0] - target
        ev.terminal = True
        ev.direction = direction
        sol = solve_ivp(
            lambda _, w: _modified_derivs(w, p)[0],
            (0.0, 60.0 * p.log_eps),
            [xi0],
            events=ev,
            **_ODE_KW,
        )
        if not sol.success or len(sol.t_events[0]) == 0:
            raise NumericalError("no threshold crossing found")
        return float(sol.t_events[0][0])

    s_low = crossing(1.0 - eps, 3.0 * p.threshold, +1)
    s_high = crossing(1.0 + eps, float(xi_hi), -1) if xi_hi > 1.0 + eps else 0.0
    return max(s_low, s_high) / p.log_eps
