"""Numerics for the corrected per-capita growth model.

State is capital per capita ``k`` and consumption per capita ``c``::

    kdot = a0 k^alpha - (n + delta) k - c
    cdot = (c / theta) (a0 alpha k^(alpha - 1) - (rho + n + delta))

with CRRA utility of constant elasticity ``theta``.  Everything here is a
pure function of its arguments; trajectories live on uniform time grids.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence, TextIO

import numpy as np

from .dimcore import as_rational


class GrowthError(Exception):
    pass


class InvalidParams(GrowthError, ValueError):
    pass


class DomainError(GrowthError, ValueError):
    pass


class NoSteadyState(GrowthError):
    pass


class StepTooLarge(GrowthError):
    pass


class GridTooShort(GrowthError, ValueError):
    pass


class ShootingFailed(GrowthError):
    def __init__(self, iterations: int, bracket: tuple[float, float], reason: str = ""):
        super().__init__(f"shooting failed after {iterations} iterations, bracket {bracket}: {reason}")
        self.iterations = iterations
        self.bracket = bracket


@dataclass(frozen=True)
class GrowthParams:
    """Model parameters; rates are per unit time, alpha and theta are pure numbers."""

    alpha: float = 1 / 3
    a0: float = 1.0
    rho: float = 0.05
    n: float = 0.01
    delta: float = 0.05
    theta: float = 2.0
    alpha_exact: Fraction = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        exact = as_rational(self.alpha) if isinstance(self.alpha, (Fraction, int, str)) else None
        for name in ("alpha", "a0", "rho", "n", "delta", "theta"):
            v = getattr(self, name)
            v = float(as_rational(v)) if isinstance(v, str) else float(v)
            if not math.isfinite(v):
                raise InvalidParams(f"{name} must be finite")
            object.__setattr__(self, name, v)
        if exact is None:
            exact = as_rational(self.alpha)
        object.__setattr__(self, "alpha_exact", exact)
        if not 0 < self.alpha < 1:
            raise InvalidParams(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.a0 <= 0:
            raise InvalidParams(f"a0 must be positive, got {self.a0}")
        if self.rho <= 0:
            raise InvalidParams(f"rho must be strictly positive, got {self.rho}")
        if self.theta <= 0:
            raise InvalidParams(f"theta must be positive, got {self.theta}")
        if self.delta < 0:
            raise InvalidParams(f"delta must be nonnegative, got {self.delta}")
        if self.rho + self.n + self.delta <= 0:
            raise InvalidParams("rho + n + delta must be positive")

    @property
    def discount(self) -> float:
        """rho + n + delta, the marginal product of capital at the steady state."""
        return self.rho + self.n + self.delta


@dataclass(frozen=True)
class State:
    k: float
    c: float

    def __iter__(self):
        yield self.k
        yield self.c


@dataclass(frozen=True)
class SteadyState:
    k: float
    c: float
    r: float

    @property
    def state(self) -> State:
        return State(self.k, self.c)


def _check_k(k):
    if np.any(np.asarray(k) <= 0):
        raise DomainError("capital per capita must be positive")


def production(k, p: GrowthParams):
    """Cobb-Douglas output per capita ``a0 k^alpha``."""
    _check_k(k)
    return p.a0 * np.power(k, p.alpha) if isinstance(k, np.ndarray) else p.a0 * k**p.alpha


def marginal_product(k, p: GrowthParams):
    _check_k(k)
    return p.a0 * p.alpha * np.power(k, p.alpha - 1) if isinstance(k, np.ndarray) else p.a0 * p.alpha * k ** (p.alpha - 1)


def crra_utility(c, theta: float):
    """Return ``(u, u')`` for CRRA utility; ``theta == 1`` is the log limit."""
    if np.any(np.asarray(c) <= 0):
        raise DomainError("consumption must be positive")
    c = np.asarray(c, dtype=float) if isinstance(c, (np.ndarray, list)) else float(c)
    if theta == 1:
        return np.log(c), 1.0 / c
    return c ** (1 - theta) / (1 - theta), c ** (-theta)


def rhs(s: State, p: GrowthParams) -> tuple[float, float]:
    k, c = s
    if k <= 0:
        raise DomainError("capital per capita must be positive")
    y = p.a0 * k**p.alpha
    kdot = y - (p.n + p.delta) * k - c
    cdot = (c / p.theta) * (p.alpha * y / k - p.discount)
    return kdot, cdot


def steady_state(p: GrowthParams) -> SteadyState:
    k = (p.alpha * p.a0 / p.discount) ** (1 / (1 - p.alpha))
    c = p.a0 * k**p.alpha - (p.n + p.delta) * k
    if c <= 0:
        raise NoSteadyState(f"steady-state consumption {c} is not positive")
    r = p.a0 * p.alpha * k ** (p.alpha - 1) - p.delta
    kd, cd = rhs(State(k, c), p)
    scale = max(1.0, p.a0 * k**p.alpha)
    if abs(kd) > 1e-10 * scale or abs(cd) > 1e-10 * scale:
        raise ArithmeticError(f"steady-state residual ({kd}, {cd}) exceeds tolerance")
    return SteadyState(k, c, r)


def jacobian(s: State, p: GrowthParams) -> np.ndarray:
    k, c = s
    if k <= 0:
        raise DomainError("capital per capita must be positive")
    fp = p.a0 * p.alpha * k ** (p.alpha - 1)
    fpp = p.a0 * p.alpha * (p.alpha - 1) * k ** (p.alpha - 2)
    return np.array(
        [
            [fp - (p.n + p.delta), -1.0],
            [(c / p.theta) * fpp, (fp - p.discount) / p.theta],
        ]
    )


@dataclass(frozen=True)
class Eigen2:
    values: tuple[float, float]
    vectors: tuple[np.ndarray, np.ndarray]

    @property
    def is_saddle(self) -> bool:
        return self.values[0] < 0 < self.values[1]


@dataclass(frozen=True)
class ComplexEigenvalues:
    real: float
    imag: float


def _unit(v: np.ndarray) -> np.ndarray:
    v = v / np.hypot(v[0], v[1])
    first = v[0] if v[0] != 0 else v[1]
    return -v if first < 0 else v


def eigen2(J) -> Eigen2 | ComplexEigenvalues:
    """Eigen-decomposition of a real 2x2 matrix, values ascending.

    Complex pairs come back as :class:`ComplexEigenvalues`, not an exception.
    """
    J = np.asarray(J, dtype=float)
    a, b = J[0]
    c, d = J[1]
    tr = a + d
    det = a * d - b * c
    disc = tr * tr - 4 * det
    if disc < 0:
        return ComplexEigenvalues(tr / 2, math.sqrt(-disc) / 2)
    sq = math.sqrt(disc)
    q = (tr + math.copysign(sq, tr)) / 2
    if q == 0:
        l1 = l2 = 0.0
    else:
        l1, l2 = q, det / q
    lo, hi = sorted((l1, l2))

    def vec(lam):
        cand1 = np.array([b, lam - a])
        cand2 = np.array([lam - d, c])
        n1, n2 = np.hypot(*cand1), np.hypot(*cand2)
        if max(n1, n2) <= 1e-14 * max(1.0, abs(lam)):
            return None
        return _unit(cand1 if n1 >= n2 else cand2)

    v1, v2 = vec(lo), vec(hi)
    if v1 is None or v2 is None:
        # scalar multiple of the identity: every vector is an eigenvector
        v1, v2 = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    return Eigen2((lo, hi), (v1, v2))


# --------------------------------------------------------------------------
# integration
# --------------------------------------------------------------------------


def rk4_solve(f: Callable[[float, np.ndarray], np.ndarray], y0, h: float, n_steps: int) -> tuple[np.ndarray, np.ndarray]:
    """Classical RK4 on a uniform grid for a generic system ``y' = f(t, y)``."""
    y = np.array(y0, dtype=float, ndmin=1)
    t = np.arange(n_steps + 1) * h
    out = np.empty((n_steps + 1, y.size))
    out[0] = y
    for i in range(n_steps):
        ti = t[i]
        k1 = f(ti, y)
        k2 = f(ti + h / 2, y + h / 2 * k1)
        k3 = f(ti + h / 2, y + h / 2 * k2)
        k4 = f(ti + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        out[i + 1] = y
    return t, out


@dataclass
class Trajectory:
    t: np.ndarray
    k: np.ndarray
    c: np.ndarray
    h: float
    params: GrowthParams
    status: str = "completed"  # completed | k_exit | c_exit

    def __post_init__(self):
        if not (len(self.t) == len(self.k) == len(self.c)):
            raise ValueError("series lengths differ")

    @property
    def last_index(self) -> int:
        return len(self.t) - 1

    @property
    def completed(self) -> bool:
        return self.status == "completed"

    def y(self) -> np.ndarray:
        return production(self.k, self.params)

    def r(self) -> np.ndarray:
        return marginal_product(self.k, self.params) - self.params.delta

    def w(self) -> np.ndarray:
        p = self.params
        f = production(self.k, p)
        labour = f - self.k * marginal_product(self.k, p)
        with np.errstate(divide="ignore", invalid="ignore"):
            return labour / p.n if p.n != 0 else np.full_like(f, np.nan)

    def mu(self) -> np.ndarray:
        return crra_utility(self.c, self.params.theta)[1]

    def distance_to(self, ss: SteadyState) -> np.ndarray:
        return np.hypot(self.k - ss.k, self.c - ss.c)

    def write_csv(self, out: TextIO):
        cols = [self.t, self.k, self.c, self.y(), self.r(), self.w(), self.mu()]
        write_csv(out, ["t", "k", "c", "y", "r", "w", "mu"], zip(*cols))


def _step(k, c, h, a0, alpha, nd, disc, theta):
    """One RK4 step, scalar and allocation-free.  Returns None if a stage has k <= 0."""
    if k <= 0:
        return None
    y = a0 * k**alpha
    k1 = y - nd * k - c
    c1 = c / theta * (alpha * y / k - disc)
    kk = k + 0.5 * h * k1
    if kk <= 0:
        return None
    cc = c + 0.5 * h * c1
    y = a0 * kk**alpha
    k2 = y - nd * kk - cc
    c2 = cc / theta * (alpha * y / kk - disc)
    kk = k + 0.5 * h * k2
    if kk <= 0:
        return None
    cc = c + 0.5 * h * c2
    y = a0 * kk**alpha
    k3 = y - nd * kk - cc
    c3 = cc / theta * (alpha * y / kk - disc)
    kk = k + h * k3
    if kk <= 0:
        return None
    cc = c + h * c3
    y = a0 * kk**alpha
    k4 = y - nd * kk - cc
    c4 = cc / theta * (alpha * y / kk - disc)
    return k + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4), c + h / 6 * (c1 + 2 * c2 + 2 * c3 + c4)


def _n_steps(h: float, t_max: float) -> int:
    if h <= 0 or t_max <= 0:
        raise ValueError("step and horizon must be positive")
    return int(round(t_max / h))


def integrate(s0: State, p: GrowthParams, h: float = 0.01, t_max: float = 200.0) -> Trajectory:
    """RK4 from ``s0``; stops at the last grid point with k > 0 and c > 0."""
    k, c = s0
    if k <= 0 or c < 0:
        raise DomainError("initial state must have k > 0 and c >= 0")
    n = _n_steps(h, t_max)
    ks = np.empty(n + 1)
    cs = np.empty(n + 1)
    ks[0], cs[0] = k, c
    args = (h, p.a0, p.alpha, p.n + p.delta, p.discount, p.theta)
    status = "completed"
    last = n
    for i in range(n):
        nxt = _step(k, c, *args)
        if nxt is None:
            if i == 0:
                raise StepTooLarge(f"a Runge-Kutta stage left k > 0 on the first step (h={h})")
            status, last = "k_exit", i
            break
        k, c = nxt
        if k <= 0:
            status, last = "k_exit", i
            break
        if c <= 0:
            status, last = "c_exit", i
            break
        ks[i + 1], cs[i + 1] = k, c
    t = np.arange(last + 1) * h
    return Trajectory(t, ks[: last + 1].copy(), cs[: last + 1].copy(), h, p, status)


def constant_consumption_path(k0: float, c0: float, p: GrowthParams, h: float = 0.01, t_max: float = 200.0) -> Trajectory:
    """Feasible comparison policy: consumption frozen at ``c0``, capital accumulates.

    Capital follows the same RK4 scheme with ``cdot = 0``; the path stops if
    capital is exhausted.
    """
    if k0 <= 0 or c0 <= 0:
        raise DomainError("k0 and c0 must be positive")
    n = _n_steps(h, t_max)
    nd = p.n + p.delta

    def kdot(k):
        return p.a0 * k**p.alpha - nd * k - c0

    ks = np.empty(n + 1)
    ks[0] = k = k0
    last, status = n, "completed"
    for i in range(n):
        k1 = kdot(k)
        stages = [k + 0.5 * h * k1]
        if stages[-1] <= 0:
            status, last = "k_exit", i
            break
        k2 = kdot(stages[-1])
        stages.append(k + 0.5 * h * k2)
        if stages[-1] <= 0:
            status, last = "k_exit", i
            break
        k3 = kdot(stages[-1])
        stages.append(k + h * k3)
        if stages[-1] <= 0:
            status, last = "k_exit", i
            break
        k4 = kdot(stages[-1])
        k = k + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if k <= 0:
            status, last = "k_exit", i
            break
        ks[i + 1] = k
    t = np.arange(last + 1) * h
    return Trajectory(t, ks[: last + 1].copy(), np.full(last + 1, float(c0)), h, p, status)


# --------------------------------------------------------------------------
# saddle-path shooting
# --------------------------------------------------------------------------


@dataclass
class SaddlePath:
    trajectory: Trajectory
    c0: float
    iterations: int
    terminal_distance: float
    converged_in_ball: bool


def _classify(k, c, p: GrowthParams, ss: SteadyState, h: float, n: int, eps: float) -> tuple[str, bool]:
    """Integrate without storing; return ('high'|'low'|'none', stayed_in_ball).

    'high' means consumption started too high (capital collapses), 'low'
    means too low (capital overshoots while consumption decays).
    """
    a0, alpha, nd, disc, theta = p.a0, p.alpha, p.n + p.delta, p.discount, p.theta
    kss, css = ss.k, ss.c
    entered = left = False
    eps2 = eps * eps
    for _ in range(n):
        nxt = _step(k, c, h, a0, alpha, nd, disc, theta)
        if nxt is None:
            return "high", False
        k, c = nxt
        if k <= 0:
            return "high", False
        if c <= 0:
            return "low", False
        kdot = a0 * k**alpha - nd * k - c
        if k < kss and kdot < 0:
            return "high", False
        if k > kss and kdot > 0:
            return "low", False
        if (k - kss) ** 2 + (c - css) ** 2 < eps2:
            entered = True
        elif entered:
            left = True
    return "none", entered and not left


def saddle_path(
    p: GrowthParams,
    k0: float,
    h: float = 0.01,
    t_shoot: float = 200.0,
    eps_ss: float = 1e-6,
    max_iter: int = 200,
) -> SaddlePath:
    """Bisection shooting on c(0) for the stable arm through ``k0``."""
    ss = steady_state(p)
    if k0 <= 0:
        raise DomainError("k0 must be positive")
    if k0 == ss.k:
        raise ValueError("k0 equals the steady-state capital; the path is the steady state")
    n = _n_steps(h, t_shoot)
    lo = 0.0
    hi = p.a0 * k0**p.alpha
    iterations = 0
    # the arm can sit above output for large k0; widen until the top diverges high
    while _classify(k0, hi, p, ss, h, n, eps_ss)[0] != "high":
        iterations += 1
        if iterations > 60:
            raise ShootingFailed(iterations, (lo, hi), "upper bracket never diverged high")
        hi *= 2
    best = None
    while iterations < max_iter:
        iterations += 1
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        side, stayed = _classify(k0, mid, p, ss, h, n, eps_ss)
        if side == "none" and stayed:
            best = mid
            break
        if side == "high":
            hi = mid
        elif side == "low":
            lo = mid
        else:
            # undecided within the horizon but not settled: keep the bracket honest
            best = mid
            side_lo = _classify(k0, 0.5 * (lo + mid), p, ss, h, n, eps_ss)[0]
            if side_lo == "high":
                hi = mid
            else:
                lo = mid
    else:
        raise ShootingFailed(iterations, (lo, hi), "iteration limit")
    if best is not None:
        tr = integrate(State(k0, best), p, h, t_shoot)
    else:
        tr = _blend(k0, lo, hi, p, h, t_shoot, ss)
    if not tr.completed:
        raise ShootingFailed(iterations, (lo, hi), "no candidate stays in the domain")
    dist = float(tr.distance_to(ss)[-1])
    return SaddlePath(tr, float(tr.c[0]), iterations, dist, dist < eps_ss)


def _blend(k0, lo, hi, p, h, t_shoot, ss) -> Trajectory:
    """Combine the two bracket trajectories once c(0) is resolved to adjacent floats.

    Their terminal deviations point along the unstable direction with opposite
    signs; the affine weight cancelling it approximates the arm between the two
    representable initial values.  Deviations are ~1e-5, so the combination
    satisfies the dynamics to second order in that size.
    """
    paths = [integrate(State(k0, c0), p, h, t_shoot) for c0 in (lo, hi) if c0 > 0]
    done = [tr for tr in paths if tr.completed]
    if len(done) < 2:
        if not done:
            return paths[-1] if paths else integrate(State(k0, hi), p, h, t_shoot)
        return done[0]
    a, b = done
    da = np.array([a.k[-1] - ss.k, a.c[-1] - ss.c])
    db = np.array([b.k[-1] - ss.k, b.c[-1] - ss.c])
    diff = da - db
    denom = float(diff @ diff)
    w = 0.5 if denom == 0 else float(np.clip(-(db @ diff) / denom, 0.0, 1.0))
    mk = w * a.k + (1 - w) * b.k
    mk[0] = k0
    mixed = Trajectory(a.t, mk, w * a.c + (1 - w) * b.c, h, p)
    best = min((a, b, mixed), key=lambda tr: float(tr.distance_to(ss)[-1]))
    return best


# --------------------------------------------------------------------------
# welfare and residual diagnostics
# --------------------------------------------------------------------------


def simpson(values: np.ndarray, h: float) -> float:
    """Composite Simpson; an odd interval count ends with a 3/8 panel."""
    v = np.asarray(values, dtype=float)
    m = len(v) - 1
    if m < 1:
        return 0.0
    if m == 1:
        return h * (v[0] + v[1]) / 2
    if m == 2:
        return h / 3 * (v[0] + 4 * v[1] + v[2])
    end = m if m % 2 == 0 else m - 3
    total = 0.0
    if end >= 2:
        s = v[: end + 1]
        total = h / 3 * (s[0] + 4 * s[1:-1:2].sum() + 2 * s[2:-1:2].sum() + s[-1])
    if end != m:
        s = v[end:]
        total += 3 * h / 8 * (s[0] + 3 * s[1] + 3 * s[2] + s[3])
    return float(total)


@dataclass(frozen=True)
class Welfare:
    integral: float
    tail: float

    @property
    def total(self) -> float:
        return self.integral + self.tail


def discounted_utility(traj: Trajectory, p: GrowthParams | None = None) -> Welfare:
    """Present value of utility over the grid plus a constant-consumption tail."""
    p = p or traj.params
    if np.any(traj.c <= 0):
        raise DomainError("consumption must be positive along the trajectory")
    u, _ = crra_utility(traj.c, p.theta)
    integrand = u * np.exp(-p.rho * traj.t)
    integral = simpson(integrand, traj.h)
    tail = float(u[-1] * math.exp(-p.rho * traj.t[-1]) / p.rho)
    return Welfare(integral, tail)


def _central(x: np.ndarray, h: float) -> np.ndarray:
    return (x[2:] - x[:-2]) / (2 * h)


def euler_residual(traj: Trajectory, p: GrowthParams | None = None) -> tuple[float, float]:
    """Max residuals of the costate equation (R1) and capital accumulation (R2).

    The costate is ``mu = u'(c)``; derivatives are central differences at the
    interior grid points.
    """
    p = p or traj.params
    if len(traj.t) < 3:
        raise GridTooShort("need at least 3 grid points")
    k, c, h = traj.k, traj.c, traj.h
    mu = crra_utility(c, p.theta)[1]
    fp = marginal_product(k, p)
    r1 = _central(mu, h) - mu[1:-1] * (p.discount - fp[1:-1])
    kdot = production(k, p) - (p.n + p.delta) * k - c
    r2 = _central(k, h) - kdot[1:-1]
    return float(np.max(np.abs(r1))), float(np.max(np.abs(r2)))


def decomposition_residual(r: Sequence[float], w: Sequence[float], k: Sequence[float], n: float, h: float) -> float:
    """Gap between both sides of the growth-decomposition identity.

    Output per capita is ``y = r k + w n`` and the capital share is
    ``beta = r k / y``; the identity is exact, so the gap is differencing error.
    """
    r, w, k = (np.asarray(x, dtype=float) for x in (r, w, k))
    if len(r) < 3:
        raise GridTooShort("need at least 3 grid points")
    y = r * k + w * n
    beta = (r * k / y)[1:-1]
    lhs = _central(y, h) / y[1:-1]
    rhs_ = (
        beta * _central(r, h) / r[1:-1]
        + beta * _central(k, h) / k[1:-1]
        + (1 - beta) * _central(w, h) / w[1:-1]
    )
    return float(np.max(np.abs(lhs - rhs_)))


def integrate_share_identity(k: Sequence[float], alpha: float, h: float, y0: float) -> np.ndarray:
    """Integrate ``ydot/y = alpha kdot/k`` along a capital path from ``y0``.

    With constant factor prices and a constant capital share this recovers
    ``y = a0 k^alpha`` with ``a0 = y0 / k0^alpha``.
    """
    k = np.asarray(k, dtype=float)
    if len(k) < 3:
        raise GridTooShort("need at least 3 grid points")
    g = alpha * np.gradient(k, h, edge_order=2) / k
    logy = np.log(y0) + np.concatenate([[0.0], np.cumsum(h * (g[1:] + g[:-1]) / 2)])
    return np.exp(logy)


# --------------------------------------------------------------------------
# phase plane
# --------------------------------------------------------------------------


@dataclass
class PhaseGrid:
    k: np.ndarray
    c: np.ndarray
    kdot: np.ndarray  # shape (len(k), len(c))
    cdot: np.ndarray
    k_nullcline: np.ndarray  # rows (k, c) where kdot = 0
    c_nullcline: np.ndarray  # rows (k, c) where cdot = 0
    intersection: tuple[float, float]

    def field_rows(self):
        for i, kv in enumerate(self.k):
            for j, cv in enumerate(self.c):
                yield kv, cv, self.kdot[i, j], self.cdot[i, j]


def phase_grid(p: GrowthParams, k_range: tuple[float, float], c_range: tuple[float, float], nk: int = 40, nc: int = 40) -> PhaseGrid:
    k_lo, k_hi = k_range
    c_lo, c_hi = c_range
    if not (0 < k_lo < k_hi) or not (0 <= c_lo < c_hi):
        raise DomainError("ranges must be positive and nonempty")
    if nk < 2 or nc < 2:
        raise ValueError("need at least 2 points per axis")
    ss = steady_state(p)
    ks = np.linspace(k_lo, k_hi, nk)
    cs = np.linspace(c_lo, c_hi, nc)
    K, C = np.meshgrid(ks, cs, indexing="ij")
    y = p.a0 * K**p.alpha
    kdot = y - (p.n + p.delta) * K - C
    cdot = C / p.theta * (p.alpha * y / K - p.discount)

    kn = np.unique(np.append(ks, ss.k) if k_lo <= ss.k <= k_hi else ks)
    k_null = np.column_stack([kn, p.a0 * kn**p.alpha - (p.n + p.delta) * kn])
    cn = np.unique(np.append(cs, ss.c) if c_lo <= ss.c <= c_hi else cs)
    c_null = np.column_stack([np.full_like(cn, ss.k), cn])
    # the cdot = 0 locus is the vertical line through the steady-state capital
    ci = p.a0 * ss.k**p.alpha - (p.n + p.delta) * ss.k
    return PhaseGrid(ks, cs, kdot, cdot, k_null, c_null, (ss.k, ci))


# --------------------------------------------------------------------------
# CSV and certification
# --------------------------------------------------------------------------


def fmt_float(x: float) -> str:
    return repr(float(x))


def write_csv(out: TextIO, header: Sequence[str], rows):
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(v if isinstance(v, str) else fmt_float(v) for v in row) + "\n")


def read_trajectory_csv(text: str, p: GrowthParams) -> Trajectory:
    """Read a ``t,k,c[,...]`` CSV on a uniform grid.  Raises ValueError if malformed."""
    lines = [ln for ln in io.StringIO(text).read().splitlines() if ln.strip()]
    if len(lines) < 2:
        raise ValueError("trajectory CSV needs a header and at least one row")
    header = [h.strip() for h in lines[0].split(",")]
    try:
        it, ik, ic = header.index("t"), header.index("k"), header.index("c")
    except ValueError:
        raise ValueError("trajectory CSV must have t, k and c columns") from None
    rows = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != len(header):
            raise ValueError(f"row has {len(parts)} fields, header has {len(header)}")
        rows.append((float(parts[it]), float(parts[ik]), float(parts[ic])))
    arr = np.array(rows)
    t = arr[:, 0]
    if len(t) < 2:
        raise ValueError("need at least two grid points")
    steps = np.diff(t)
    h = float(steps[0])
    if h <= 0 or not np.allclose(steps, h, rtol=1e-9, atol=1e-12):
        raise ValueError("time grid must be uniform and increasing")
    if not np.all(np.isfinite(arr)):
        raise ValueError("non-finite values in trajectory")
    return Trajectory(t - t[0], arr[:, 1], arr[:, 2], h, p)


def certification_model(p: GrowthParams) -> str:
    """The equations integrated here, written in the model language.

    Checking this text certifies that the numerics implement a
    dimensionally homogeneous system for the given capital share.
    """
    a = p.alpha_exact
    th = as_rational(p.theta)
    return "\n".join(
        [
            "dims QK QP U T",
            "var k : QK/QP",
            "var c : QK/(QP*T)",
            "var y : QK/(QP*T)",
            "var mu : U/QK",
            "var a0 : infer",
            f"param alpha : 1 = {a.numerator}/{a.denominator}",
            f"param alpha_m1 : 1 = {(a - 1).numerator}/{(a - 1).denominator}",
            f"param theta : 1 = {th.numerator}/{th.denominator}",
            "param rho : 1/T",
            "param n : 1/T",
            "param delta : 1/T",
            "fn fp(QK/QP) -> 1/T",
            "fn du(QK/(QP*T)) -> U/QK",
            "eq production: y = a0*k^alpha",
            "eq capital: der(k) = a0*k^alpha - (n + delta)*k - c",
            "eq consumption: der(c) = c/theta*(a0*alpha*k^alpha_m1 - (rho + n + delta))",
            "eq costate: der(mu) = mu*(rho + n + delta - a0*alpha*k^alpha_m1)",
            "eq marginal_utility: du(c) = mu",
            "eq euler: der(c) = c/theta*(fp(k) - (rho + n + delta))",
            "",
        ]
    )
