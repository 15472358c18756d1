"""Time integration of u_t = eps*Lap(u) + u(1-u)/eps by Strang splitting.

The reaction substep is the exact logistic flow with rate dt/eps, so the
1/eps stiffness never meets the time stepper; the diffusion substep is
Crank-Nicolson with Neumann walls (one tridiagonal solve per line, ADI in
plane mode, L'Hopital regularization N*u_rr at the radial origin).  Both
substeps preserve ordering when eps*dt/dx^2 <= 1 (see default_dt), which
makes the composed scheme comparison-preserving and keeps
0 <= u <= max(1, sup u0) to rounding.

Line-mode Neumann rows use the telescoping form (u1 - u0)/dx^2 so the plain
sum of values is conserved exactly; the radial outer wall uses the mirror
form, which is what second-order accuracy wants there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConfigurationError, DomainError, NumericalError
from .geometry import ConvexBody
from .grids import Field, Grid, interpolate, solve_tridiagonal
from .kinetics import eps_log


@dataclass(frozen=True)
class InitialData:
    """Recipe for u0: compactly supported bump, optionally with an
    exponentially small far tail, or the algebraic-tail family."""

    variant: str  # "compact" | "algebraic"
    body: ConvexBody | None = None
    amplitude: float = 0.0  # plateau height A, in (0, 1]
    width: float = 0.0  # ramp width w; edge slope is 3A/w
    tail: tuple | None = None  # (lam >= 1, M > 0): M exp(-lam ||x|| / eps)
    m: float = 0.0  # algebraic family m / (1 + ||x/eps||^n)
    n: float = 0.0
    cap: float = 0.0  # upper bound M on the data

    @classmethod
    def compact(cls, body, amplitude, width, tail=None):
        if not 0.0 < amplitude <= 1.0:
            raise ConfigurationError("amplitude must lie in (0, 1]")
        if width <= 0.0:
            raise ConfigurationError("width must be positive")
        if tail is not None:
            lam, M = tail
            if lam < 1.0 or M <= 0.0:
                raise ConfigurationError("tail needs lam >= 1 and M > 0")
            tail = (float(lam), float(M))
        return cls("compact", body=body, amplitude=float(amplitude),
                   width=float(width), tail=tail)

    @classmethod
    def algebraic(cls, m, n, cap):
        if m <= 0.0 or n <= 0.0:
            raise ConfigurationError("m and n must be positive")
        if cap < m:
            raise ConfigurationError("the cap must dominate the plateau m")
        return cls("algebraic", m=float(m), n=float(n), cap=float(cap))

    @property
    def sup_norm(self):
        """Upper bound on sup u0."""
        if self.variant == "compact":
            return self.amplitude + (self.tail[1] if self.tail else 0.0)
        return self.m

    @property
    def g_sup(self):
        """sup of the compact part g alone."""
        return self.amplitude if self.variant == "compact" else 0.0

    @property
    def tail_cap(self):
        return self.tail[1] if (self.variant == "compact" and self.tail) else 0.0

    @property
    def slope_floor(self):
        """|dg/dn| on the support boundary (the cubic ramp gives 3A/w)."""
        if self.variant != "compact":
            raise DomainError("slope floor applies to compact data only")
        return 3.0 * self.amplitude / self.width


def _grid_points_nd(grid: Grid):
    """Grid coordinates as points suitable for the body's signed distance."""
    if grid.mode == "plane":
        return grid.points()
    return grid.axis(0)


def _radii(grid: Grid):
    """||x|| per node."""
    if grid.mode == "plane":
        return np.linalg.norm(grid.points(), axis=-1)
    return np.abs(grid.axis(0))


def _body_distance_on_grid(body: ConvexBody, grid: Grid):
    if grid.mode == "line":
        if body.shape != "interval":
            raise ConfigurationError("line mode needs an interval region")
        return body.signed_distance(grid.axis(0))
    if grid.mode == "radial":
        if body.shape != "ball" or any(c != 0.0 for c in body.params[0]):
            raise ConfigurationError("radial mode needs an origin-centred ball")
        return grid.axis(0) - body.params[1]
    return body.signed_distance(grid.points())


def compact_profile(initial: InitialData, grid: Grid):
    """The compact part g: A(1 - (1-s)^3), s = clamp(-d0(x)/w, 0, 1)."""
    d = _body_distance_on_grid(initial.body, grid)
    s = np.clip(-d / initial.width, 0.0, 1.0)
    return initial.amplitude * (1.0 - (1.0 - s) ** 3)


def compact_value(initial: InitialData, x):
    """g at arbitrary points (coordinates in line mode, radii in radial mode,
    points in plane mode)."""
    if initial.variant != "compact":
        raise DomainError("g is defined for compact data only")
    d = initial.body.signed_distance(x)
    s = np.clip(-d / initial.width, 0.0, 1.0)
    return initial.amplitude * (1.0 - (1.0 - s) ** 3)


def build_initial(initial: InitialData, grid: Grid, epsilon: float) -> Field:
    """Sample u0 on the grid."""
    if initial.variant == "compact":
        d = _body_distance_on_grid(initial.body, grid)
        if float(d.min()) > -initial.width / 4:
            raise ConfigurationError("grid does not cover the support of g")
        if float(d.max()) < 0.0:
            raise ConfigurationError("the support of g reaches the grid boundary")
        vals = compact_profile(initial, grid)
        if initial.tail is not None:
            lam, M = initial.tail
            vals = vals + M * np.exp(-lam * _radii(grid) / epsilon)
        return Field(grid, vals)
    r = _radii(grid)
    return Field(grid, initial.m / (1.0 + (r / epsilon) ** initial.n))


def default_dt(grid: Grid, epsilon: float):
    """Largest step that keeps Crank-Nicolson order-preserving: the explicit
    half-factor (I + a L) must stay entrywise nonnegative, eps dt/dx^2 <= 1/N
    (N = radial dimension; 1 otherwise).  Capped by the accuracy rule dx/2."""
    k = grid.dim if grid.mode == "radial" else 1
    return min(grid.dx / 2.0, grid.dx**2 / (epsilon * k))


@dataclass(frozen=True)
class SimConfig:
    epsilon: float
    grid: Grid
    initial: InitialData
    t_end: float
    dt: float = 0.0  # 0 selects default_dt
    checkpoint_times: tuple = ()
    boundary: str = "neumann"
    record: tuple = ("sup", "min", "front_half")

    def __post_init__(self):
        if self.boundary != "neumann":
            raise ConfigurationError("only Neumann walls are implemented")
        if not 0.0 < self.epsilon < 1.0 / math.e:
            raise ConfigurationError("epsilon must lie in (0, 1/e)")
        if self.t_end <= 0.0:
            raise ConfigurationError("t_end must be positive")
        if self.grid.dx > self.epsilon / 8.0 + 1e-12:
            raise ConfigurationError("resolution rule dx <= epsilon/8 violated")
        if self.dt == 0.0:
            object.__setattr__(self, "dt", default_dt(self.grid, self.epsilon))
        if self.dt > self.grid.dx / 2.0 + 1e-12:
            raise ConfigurationError("accuracy rule dt <= dx/2 violated")
        margin = self._required_extent()
        for lo, hi in self.grid.extents:
            reach = hi if self.grid.mode == "radial" else min(-lo, hi)
            if reach + 1e-9 < margin:
                raise ConfigurationError(
                    f"domain reach {reach:g} below the outflow margin {margin:g}"
                )
        for tc in self.checkpoint_times:
            if not 0.0 <= tc <= self.t_end + 1e-12:
                raise ConfigurationError("checkpoint outside [0, t_end]")

    def _required_extent(self):
        diam = self.initial.body.diameter if self.initial.variant == "compact" else 0.0
        return diam / 2.0 + 2.0 * self.t_end + 10.0 * eps_log(self.epsilon)


@dataclass
class Trajectory:
    config: SimConfig
    checkpoints: list  # [(t, Field)]
    series: dict  # name -> (times, values) arrays

    def checkpoint_at(self, t):
        """Checkpoint nearest the requested time (within half a step)."""
        for tc, fld in self.checkpoints:
            if abs(tc - t) <= 0.51 * self.config.dt + 1e-9:
                return fld
        raise KeyError(f"no checkpoint near t={t}")


def reaction_substep(fld: Field, dt: float, epsilon: float) -> Field:
    """Exact logistic flow u <- u e^s / (1 + u(e^s - 1)), s = dt/eps.

    Monotone in u and unconditionally stable; input must be nonnegative.
    """
    u = fld.values
    if float(u.min()) < 0.0:
        raise NumericalError("reaction substep received negative values")
    s = dt / epsilon
    new = u / (u + (1.0 - u) * np.exp(-s))
    return Field(fld.grid, new)


@lru_cache(maxsize=32)
def _lap_coeffs(grid: Grid, axis: int):
    """(sub, diag, sup) of the Neumann Laplacian along one axis, unscaled
    (multiply by 1/dx^2)."""
    n = grid.shape[axis]
    sub = np.ones(n - 1)
    diag = np.full(n, -2.0)
    sup = np.ones(n - 1)
    if grid.mode == "radial":
        N = grid.dim
        i = np.arange(1, n - 1, dtype=float)
        sub[: n - 2] = 1.0 - (N - 1) / (2.0 * i)
        sup[1:] = 1.0 + (N - 1) / (2.0 * i)
        diag[0] = -2.0 * N  # Lap u = N u_rr at r = 0
        sup[0] = 2.0 * N
        sub[-1] = 2.0  # mirror wall at r = R (radial term drops out)
    else:
        diag[0] = -1.0  # telescoping Neumann rows: exact sum conservation
        diag[-1] = -1.0
    return sub, diag, sup


def _apply_lap(coeffs, u, axis):
    sub, diag, sup = coeffs
    u = np.moveaxis(u, axis, 0)
    out = diag.reshape(-1, *([1] * (u.ndim - 1))) * u
    out[:-1] += sup.reshape(-1, *([1] * (u.ndim - 1))) * u[1:]
    out[1:] += sub.reshape(-1, *([1] * (u.ndim - 1))) * u[:-1]
    return np.moveaxis(out, 0, axis)


def _cn_1d(coeffs, u, a, axis):
    """One Crank-Nicolson line solve: (I - a L) u+ = (I + a L) u along axis."""
    sub, diag, sup = coeffs
    rhs = u + a * _apply_lap(coeffs, u, axis)
    rhs = np.moveaxis(rhs, axis, 0)
    shape = rhs.shape
    y = solve_tridiagonal(
        -a * sub, 1.0 - a * diag, -a * sup, rhs.reshape(shape[0], -1)
    )
    return np.moveaxis(y.reshape(shape), 0, axis)


def diffusion_substep(fld: Field, dt: float, epsilon: float) -> Field:
    """Crank-Nicolson step of u_t = eps Lap u with Neumann walls.

    Plane mode uses Peaceman-Rachford ADI (two half-steps, alternating
    directions), which keeps second-order accuracy with only line solves.
    """
    g = fld.grid
    a = epsilon * dt / 2.0 / g.dx**2
    if g.mode == "plane":
        # Peaceman-Rachford: each directional half-step carries the same
        # eps dt / (2 dx^2) factor as plain Crank-Nicolson
        cx = _lap_coeffs(g, 0)
        cy = _lap_coeffs(g, 1)
        u = fld.values
        u = u + a * _apply_lap(cy, u, 1)
        u = _solve_lines(cx, u, a, 0)
        u = u + a * _apply_lap(cx, u, 0)
        u = _solve_lines(cy, u, a, 1)
        return Field(g, u)
    coeffs = _lap_coeffs(g, 0)
    return Field(g, _cn_1d(coeffs, fld.values, a, 0))


def _solve_lines(coeffs, rhs, a, axis):
    sub, diag, sup = coeffs
    rhs = np.moveaxis(rhs, axis, 0)
    shape = rhs.shape
    y = solve_tridiagonal(
        -a * sub, 1.0 - a * diag, -a * sup, rhs.reshape(shape[0], -1)
    )
    return np.moveaxis(y.reshape(shape), 0, axis)


def step(fld: Field, dt: float, epsilon: float) -> Field:
    """One Strang step: reaction(dt/2) o diffusion(dt) o reaction(dt/2)."""
    fld = reaction_substep(fld, dt / 2.0, epsilon)
    fld = diffusion_substep(fld, dt, epsilon)
    return reaction_substep(fld, dt / 2.0, epsilon)


def front_position(fld: Field, level: float, rays=None):
    """Outermost crossing of the level along the scan axis (line / radial)
    or along each requested unit-vector ray (plane; default +x axis).

    Returns the interpolated coordinate, None when the level is not
    attained (recorded as an absent observable, not an error).
    """
    g = fld.grid
    if g.mode == "plane":
        if rays is None:
            rays = [(1.0, 0.0)]
        out = []
        for ray in rays:
            ray = np.asarray(ray, dtype=float)
            ray /= np.linalg.norm(ray)
            smax = _ray_reach(g, ray)
            svals = np.arange(0.0, smax, g.dx / 2.0)
            u = np.array([interpolate(fld, s * ray) for s in svals])
            out.append(_outermost_crossing(svals, u, level))
        return out
    x = g.axis(0)
    return _outermost_crossing(x, fld.values, level)


def _ray_reach(grid, ray):
    reach = np.inf
    for ax in range(2):
        if ray[ax] > 1e-14:
            reach = min(reach, grid.extents[ax][1] / ray[ax])
        elif ray[ax] < -1e-14:
            reach = min(reach, grid.extents[ax][0] / ray[ax])
    return reach

def _outermost_crossing(x, u, level):
    du = u - level
    sign_change = du[:-1] * du[1:] <= 0.0
    nontrivial = (du[:-1] != 0.0) | (du[1:] != 0.0)
    idx = np.nonzero(sign_change & nontrivial)[0]
    if idx.size == 0:
        return None
    i = idx[-1]
    frac = du[i] / (du[i] - du[i + 1])
    return float(x[i] + frac * (x[i + 1] - x[i]))


def layer_thickness(fld: Field, epsilon: float):
    """Width between the outermost u = eps crossing and the outermost
    u = 1 - 2 eps crossing; positive for a decreasing front."""
    outer = front_position(fld, epsilon)
    inner = front_position(fld, 1.0 - 2.0 * epsilon)
    if outer is None or inner is None:
        return None
    if isinstance(outer, list):
        return [
            (o - i) if o is not None and i is not None else None
            for o, i in zip(outer, inner)
        ]
    return outer - inner


def _observable(name, fld, ctx):
    if name == "sup":
        return float(fld.values.max())
    if name == "min":
        return float(fld.values.min())
    if name == "front_half":
        pos = front_position(fld, 0.5)
        return math.nan if pos is None else (pos[0] if isinstance(pos, list) else pos)
    if name == "layer_width":
        w = layer_thickness(fld, ctx["epsilon"])
        return math.nan if w is None else (w[0] if isinstance(w, list) else w)
    if name == "threshold_min":
        mask = ctx.get("threshold_mask")
        if mask is None or not mask.any():
            return math.nan
        return float(fld.values[mask].min())
    raise ConfigurationError(f"unknown observable {name!r}")


def run(config: SimConfig) -> Trajectory:
    """Integrate to t_end, recording the requested observables each step and
    the checkpoint fields at the requested times (snapped to the step grid)."""
    fld = build_initial(config.initial, config.grid, config.epsilon)
    n_steps = max(1, math.ceil(config.t_end / config.dt - 1e-12))
    dt = config.t_end / n_steps

    ctx = {"epsilon": config.epsilon}
    if config.initial.variant == "compact" and "threshold_min" in config.record:
        g = compact_profile(config.initial, config.grid)
        ctx["threshold_mask"] = g >= 3.0 * eps_log(config.epsilon)

    checkpoint_idx = {}
    for tc in config.checkpoint_times:
        checkpoint_idx.setdefault(int(round(tc / dt)), []).append(tc)

    times = np.empty(n_steps + 1)
    series = {name: np.empty(n_steps + 1) for name in config.record}
    checkpoints = []

    def record(k, t, f):
        times[k] = t
        for name in config.record:
            series[name][k] = _observable(name, f, ctx)
        if k in checkpoint_idx:
            checkpoints.append((t, f.copy()))

    record(0, 0.0, fld)
    for k in range(1, n_steps + 1):
        fld = step(fld, dt, config.epsilon)
        t = k * dt
        if k % 25 == 0 or k == n_steps:
            if not np.all(np.isfinite(fld.values)):
                raise NumericalError(
                    f"solution lost finiteness near t={t:g}", diagnostic=(t, fld)
                )
        record(k, t, fld)

    sup0 = max(1.0, float(series["sup"][0])) if "sup" in series else None
    if sup0 is not None and float(np.max(series["sup"])) > sup0 + 1e-8:
        raise NumericalError("sup-norm bound violated", diagnostic=(config, series))

    return Trajectory(config, checkpoints, {"t": times, **series})


def dump_checkpoint(fld: Field, t: float, path):
    """CSV checkpoint: '# t=<value>' header, then coordinate(s), u rows."""
    g = fld.grid
    with open(path, "w") as fh:
        fh.write(f"# t={t:.17g}\n")
        if g.mode == "plane":
            fh.write("x0,x1,u\n")
            x0, x1 = g.axis(0), g.axis(1)
            for i in range(g.shape[0]):
                for j in range(g.shape[1]):
                    fh.write(f"{x0[i]:.17g},{x1[j]:.17g},{fld.values[i, j]:.17g}\n")
        else:
            name = "r" if g.mode == "radial" else "x"
            fh.write(f"{name},u\n")
            for x, u in zip(g.axis(0), fld.values):
                fh.write(f"{x:.17g},{u:.17g}\n")
