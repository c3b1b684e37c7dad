"""Interacting driving functions for the multi-slit Loewner equation.

Three systems share one integrator:

``multiple_sle``
    dV_k = sum_{j != k} 2 (lam_k + lam_j) / (V_k - V_j) dt + sqrt(kappa lam_k) dB_k
``simultaneous``
    the same system with every lam_k = 1/N (a Dyson-type process)
``quad_diff``
    dV_k/dt = sum_{j != k} 2 lam_j / (V_k - V_j) + 2 Re sum_j alpha_j lam_k / (V_k - S_j),
    with the poles carried by the flow, dS_j/dt = sum_k 2 lam_k / (S_j - V_k).

Time stepping
-------------
Each reported grid step of length ``dt`` is split into dyadic substeps of
length ``dt / 2**m``. The level ``m`` is raised until the step is inside the
explicit stability region (Gershgorin bound on the drift Jacobian), keeps every
adjacent gap above ``10 sqrt(kappa lam dt_sub)``, and does not reorder the
drivers. The drift is advanced with classical RK4 (or plain Euler with
``scheme="euler"``); the noise enters as the exact Brownian increment over the
substep, which for this additive noise is the Euler-Maruyama term.

Noise
-----
Brownian paths are generated on a virtual dyadic tree: the value of driver
``k`` at the dyadic point ``i / 2**m`` of grid step ``n`` is a Brownian-bridge
refinement whose Gaussian comes from a counter-based generator keyed on
``(seed, n, m, i, k)``. A path is therefore fixed by the seed alone, whatever
substeps the controller happens to take.
"""
from dataclasses import dataclass, field, replace
import logging

import numpy as np

from . import kernels
from .measures import AtomicMeasure

log = logging.getLogger(__name__)

KINDS = ("multiple_sle", "simultaneous", "quad_diff")
SCHEMES = ("rk4", "euler")
MAX_LEVEL = 40
COLLISION_GAP = 1e-9
GAP_SIGMAS = 10.0
_STAB = {"rk4": 2.5, "euler": 1.8}  # fractions of the real-axis stability limits 2.785 and 2


class OrderViolation(RuntimeError):
    """Two drivers would meet or cross even at the finest substep."""

    def __init__(self, time, message):
        super().__init__(f"t={time:.17g}: {message}")
        self.time = time


# -- counter-based Gaussians -------------------------------------------------

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def _mix64(x):
    """SplitMix64 finalizer on a uint64 array (wrapping arithmetic)."""
    x = (x ^ (x >> np.uint64(30))) * _M1
    x = (x ^ (x >> np.uint64(27))) * _M2
    return x ^ (x >> np.uint64(31))


def counter_gaussians(seed, step, level, index, n):
    """``n`` standard normals keyed on ``(seed, step, level, index, k)``.

    The key words are absorbed one at a time, ``h <- mix64(h + gamma ^ word)``,
    and driver ``k`` draws two further mixes of ``h`` that feed Box-Muller.
    """
    h = np.array([seed & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64)
    for word in (step, level, index):
        h = _mix64((h + _GAMMA) ^ np.uint64(word & 0xFFFFFFFFFFFFFFFF))
    k = np.arange(n, dtype=np.uint64)
    a = _mix64(h ^ ((np.uint64(2) * k + np.uint64(1)) * _GAMMA))
    b = _mix64(h ^ ((np.uint64(2) * k + np.uint64(2)) * _GAMMA))
    u1 = ((a >> np.uint64(11)).astype(np.float64) + 1.0) * 2.0 ** -53
    u2 = (b >> np.uint64(11)).astype(np.float64) * 2.0 ** -53
    return np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)


class BrownianStep:
    """Brownian motion of ``n`` drivers on one grid step, sampled at dyadic times.

    ``root`` is the increment over the whole step; finer points are bridge
    refinements drawn from :func:`counter_gaussians`.
    """

    def __init__(self, dt, root, seed, step):
        self.dt = dt
        self.seed = seed
        self.step = step
        self.n = root.size
        self._cache = {(0, 0): np.zeros(self.n), (0, 1): np.asarray(root, dtype=float)}

    @classmethod
    def keyed(cls, dt, n, seed, step):
        return cls(dt, np.sqrt(dt) * counter_gaussians(seed, step, 0, 0, n), seed, step)

    def at(self, level, index):
        while level > 0 and index % 2 == 0:
            level -= 1
            index //= 2
        key = (level, index)
        w = self._cache.get(key)
        if w is None:
            mid = 0.5 * (self.at(level, index - 1) + self.at(level, index + 1))
            sd = np.sqrt(self.dt / 2.0 ** (level + 1))
            w = mid + sd * counter_gaussians(self.seed, self.step, level, index, self.n)
            self._cache[key] = w
        return w

    def increment(self, pos, level):
        """W(end) - W(start) for the substep of ``level`` starting at ``pos``.

        ``pos`` counts units of ``dt / 2**MAX_LEVEL``.
        """
        unit = 1 << (MAX_LEVEL - level)
        i = pos // unit
        return self.at(level, i + 1) - self.at(level, i)


# -- state -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DriverSystem:
    """Driver positions and parameters at one instant."""

    kind: str
    V: np.ndarray
    lambdas: np.ndarray
    kappa: float = 0.0
    S: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    alpha: np.ndarray = field(default_factory=lambda: np.zeros(0))
    t: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown system kind {self.kind!r}")
        V = np.asarray(self.V, dtype=float)
        lam = np.asarray(self.lambdas, dtype=float)
        S = np.asarray(self.S, dtype=complex)
        alpha = np.asarray(self.alpha, dtype=float)
        if V.ndim != 1 or V.shape != lam.shape:
            raise ValueError("V and lambdas must be vectors of equal length")
        if V.size > 1 and np.any(np.diff(V) <= 0):
            raise ValueError("driver positions must be strictly increasing")
        if np.any(lam < 0) or abs(lam.sum() - 1.0) > 1e-12:
            raise ValueError("lambdas must be nonnegative and sum to 1")
        if not 0.0 <= self.kappa <= 4.0:
            raise ValueError("kappa must lie in [0, 4]")
        if self.kind == "simultaneous" and np.ptp(lam) > 1e-15:
            raise ValueError("the simultaneous system needs equal weights")
        kappa = float(self.kappa)
        if self.kind == "quad_diff":
            if S.shape != alpha.shape:
                raise ValueError("poles S and orders alpha must have equal length")
            if np.any(S.imag <= 0):
                raise ValueError("poles must lie in the upper half-plane")
            if kappa != 0.0:
                log.warning("quad_diff is deterministic; kappa=%g ignored", kappa)
                kappa = 0.0
        elif S.size:
            raise ValueError("poles are only meaningful for kind='quad_diff'")
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "lambdas", lam)
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "kappa", kappa)

    @property
    def n(self):
        return self.V.size


def _check_gaps(V):
    if V.size > 1 and np.min(np.diff(V)) < COLLISION_GAP:
        raise OrderViolation(float("nan"), "drivers closer than the collision threshold")


def drift_multiple_sle(V, lambdas):
    """sum_{j != k} 2 (lam_k + lam_j) / (V_k - V_j) for every k."""
    V = np.asarray(V, dtype=float)
    _check_gaps(V)
    return kernels.drift_sle(V, np.asarray(lambdas, dtype=float))[0]


def drift_quad_diff(V, lambdas, S, alpha):
    """Driver velocities of the quadratic-differential system (always real)."""
    V = np.asarray(V, dtype=float)
    S = np.asarray(S, dtype=complex)
    _check_gaps(V)
    if np.any(S.imag <= 0):
        raise ValueError("poles must lie in the upper half-plane")
    return kernels.drift_quad(V, np.asarray(lambdas, dtype=float), S, np.asarray(alpha, dtype=float))[0]


def pole_field(S, V, lambdas):
    """Loewner velocity sum_k 2 lam_k / (S_j - V_k) of points carried by the flow."""
    return kernels.pole_velocity(np.asarray(S, dtype=complex), np.asarray(V, dtype=float),
                                 np.asarray(lambdas, dtype=float))


# -- integrator --------------------------------------------------------------

class _Dynamics:
    """Right-hand side of one system with its parameters frozen."""

    def __init__(self, sys):
        self.lam = sys.lambdas
        self.alpha = sys.alpha
        self.quad = sys.kind == "quad_diff"
        self.sigma = np.sqrt(sys.kappa * sys.lambdas)
        self.noisy = sys.kappa > 0.0
        if self.noisy and sys.n > 1:
            pair = np.maximum(self.lam[1:], self.lam[:-1])
            self.gap_scale = GAP_SIGMAS ** 2 * sys.kappa * pair
        else:
            self.gap_scale = None

    def rhs(self, V, S):
        if self.quad:
            dV, rho = kernels.drift_quad(V, self.lam, S, self.alpha)
            return dV, kernels.pole_velocity(S, V, self.lam), rho
        dV, rho = kernels.drift_sle(V, self.lam)
        return dV, S, rho

    def propose(self, V, S, h, k1, scheme):
        dV1, dS1 = k1
        if scheme == "euler":
            return V + h * dV1, S + h * dS1
        dV2, dS2, _ = self.rhs(V + 0.5 * h * dV1, S + 0.5 * h * dS1)
        dV3, dS3, _ = self.rhs(V + 0.5 * h * dV2, S + 0.5 * h * dS2)
        dV4, dS4, _ = self.rhs(V + h * dV3, S + h * dS3)
        return (V + h / 6.0 * (dV1 + 2.0 * dV2 + 2.0 * dV3 + dV4),
                S + h / 6.0 * (dS1 + 2.0 * dS2 + 2.0 * dS3 + dS4))


def _level_for(dt, h_max):
    if h_max >= dt:
        return 0
    return int(np.ceil(np.log2(dt / h_max)))


def _advance(dyn, V, S, t0, dt, brownian, scheme):
    """Integrate over one grid step; returns (V, S, substeps)."""
    full = 1 << MAX_LEVEL
    pos = 0
    count = 0
    while pos < full:
        dV, dS, rho = dyn.rhs(V, S)
        level = 0 if pos == 0 else MAX_LEVEL - ((pos & -pos).bit_length() - 1)
        if rho > 0.0:
            level = max(level, _level_for(dt, _STAB[scheme] / rho))
        if dyn.gap_scale is not None:
            gaps = np.diff(V)
            level = max(level, _level_for(dt, float(np.min(gaps * gaps / dyn.gap_scale))))
        while True:
            if level > MAX_LEVEL:
                raise OrderViolation(t0 + dt * pos / full,
                                     f"no admissible substep after {MAX_LEVEL} halvings")
            h = dt / (1 << level)
            V_new, S_new = dyn.propose(V, S, h, (dV, dS), scheme)
            if dyn.noisy:
                V_new = V_new + dyn.sigma * brownian.increment(pos, level)
            ok = V_new.size < 2 or np.min(np.diff(V_new)) >= COLLISION_GAP
            if ok and S_new.size:
                ok = bool(np.all(S_new.imag > 0.0))
            if ok and np.all(np.isfinite(V_new)):
                break
            level += 1
        V, S = V_new, S_new
        pos += 1 << (MAX_LEVEL - level)
        count += 1
    return V, S, count


def step(sys, dt, noise=None, *, seed=0, counter=0, scheme="rk4"):
    """Advance ``sys`` by ``dt`` and return the new :class:`DriverSystem`.

    ``noise`` holds N standard Gaussians for the full step (ignored when
    kappa = 0). Substeps needed for stability or ordering refine the
    Brownian path by bridges keyed on ``(seed, counter)``.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if scheme not in SCHEMES:
        raise ValueError(f"scheme must be one of {SCHEMES}")
    dyn = _Dynamics(sys)
    brownian = None
    if dyn.noisy:
        if noise is None:
            raise ValueError("noise is required when kappa > 0")
        brownian = BrownianStep(dt, np.sqrt(dt) * np.asarray(noise, dtype=float), seed, counter)
    V, S, _ = _advance(dyn, sys.V, sys.S, sys.t, dt, brownian, scheme)
    return replace(sys, V=V, S=S, t=sys.t + dt)


@dataclass(frozen=True, eq=False)
class DriverPath:
    """Sampled driver trajectories on a uniform time grid."""

    times: np.ndarray
    V: np.ndarray
    lambdas: np.ndarray
    kind: str
    kappa: float
    seed: int
    dt: float
    scheme: str
    substeps: np.ndarray
    S: np.ndarray = None
    alpha: np.ndarray = None

    @property
    def n(self):
        return self.V.shape[1]

    @property
    def horizon(self):
        return float(self.times[-1])

    def index_of(self, t):
        i = int(round(t / self.dt))
        if i < 0 or i >= self.times.size or abs(self.times[i] - t) > 1e-9 * max(1.0, abs(t)):
            raise ValueError(f"t={t} is not on the time grid")
        return i

    def state_at(self, t):
        """Driver positions at time ``t``, linear between grid samples."""
        return np.array([np.interp(t, self.times, self.V[:, k]) for k in range(self.n)])

    def measure(self, i):
        """sum_k lam_k delta_{V_k(t_i)}."""
        return AtomicMeasure(self.V[i], self.lambdas)

    def empirical(self, i):
        """sum_k (1/N) delta_{V_k(t_i)}."""
        return AtomicMeasure.uniform(self.V[i])


def simulate(config):
    """Integrate the driver system described by ``config`` on its grid.

    ``config`` is a :class:`loewnerlab.scenarios.ScenarioConfig` (anything with
    ``resolve()``, ``T``, ``dt``, ``seed`` and ``scheme`` works).
    """
    spec = config.resolve()
    sys = DriverSystem(spec["kind"], spec["x0"], spec["lambdas"], spec["kappa"],
                       spec.get("S0", np.zeros(0, dtype=complex)), spec.get("alpha", np.zeros(0)))
    T, dt = float(config.T), float(config.dt)
    if dt <= 0 or T < 0:
        raise ValueError("need dt > 0 and T >= 0")
    n_steps = int(round(T / dt))
    if abs(n_steps * dt - T) > 1e-9 * max(1.0, T):
        raise ValueError(f"T={T} is not a multiple of dt={dt}")
    scheme = getattr(config, "scheme", "rk4")
    if scheme not in SCHEMES:
        raise ValueError(f"scheme must be one of {SCHEMES}")
    seed = int(config.seed)
    dyn = _Dynamics(sys)
    times = np.arange(n_steps + 1) * dt
    Vs = np.empty((n_steps + 1, sys.n))
    Ss = np.empty((n_steps + 1, sys.S.size), dtype=complex) if sys.kind == "quad_diff" else None
    counts = np.zeros(n_steps, dtype=np.int64)
    V, S = sys.V, sys.S
    Vs[0] = V
    if Ss is not None:
        Ss[0] = S
    for n in range(n_steps):
        brownian = BrownianStep.keyed(dt, sys.n, seed, n) if dyn.noisy else None
        V, S, counts[n] = _advance(dyn, V, S, times[n], dt, brownian, scheme)
        Vs[n + 1] = V
        if Ss is not None:
            Ss[n + 1] = S
    return DriverPath(times=times, V=Vs, lambdas=sys.lambdas, kind=sys.kind, kappa=sys.kappa,
                      seed=seed, dt=dt, scheme=scheme, substeps=counts, S=Ss,
                      alpha=sys.alpha if Ss is not None else None)
