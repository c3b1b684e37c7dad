"""Named experiments: the worked examples, the figure set-ups and their diagnostics."""
from dataclasses import asdict, dataclass, field, replace
import json
from pathlib import Path
from typing import NamedTuple, Optional

import numpy as np

from . import drivers, loewner
from .measures import AtomicMeasure, cauchy

FAMILIES = ("prince_charles", "johnny", "molly", "semicircle", "uniform", "custom")
QUAD_NAMES = ("fig7", "fig8", "quad_uniform")
BUILTINS = ("prince_charles", "johnny", "molly", "semicircle", "fig2", "fig3") + QUAD_NAMES


def prince_charles_data(n):
    """``x_k = k/N^2``, ``lam_k = (1 + k/N) / (S_N N)``, ``S_N = 1 + (N+1)/(2N)``."""
    k = np.arange(1, n + 1)
    s_n = 1.0 + (n + 1) / (2.0 * n)
    return k / n ** 2, (1.0 + k / n) / (s_n * n)


def johnny_data(n):
    """Points ``k/N`` of weight ``1/(2(N-1))`` and one point at 2 of weight 1/2."""
    if n < 2:
        raise ValueError("johnny needs N >= 2")
    x = np.arange(1, n + 1) / n
    x[-1] = 2.0
    lam = np.full(n, 1.0 / (2 * (n - 1)))
    lam[-1] = 0.5
    return x, lam


def molly_data(n):
    """``N = 2K+1`` points, mirrored pairs in ``[-2,-1] u [1,2]``, mass 1/2 at 0.

    The left points are ``-2 + (k - 1/2)/K``; the right ones are their exact
    negatives, so the configuration is symmetric in floating point.
    """
    if n < 3 or n % 2 == 0:
        raise ValueError("molly needs odd N = 2K+1 with K >= 1")
    K = (n - 1) // 2
    left = -2.0 + (np.arange(1, K + 1) - 0.5) / K
    x = np.concatenate((left, [0.0], -left[::-1]))
    lam = np.full(n, 1.0 / (4 * K))
    lam[K] = 0.5
    return x, lam


def semicircle_data(n):
    """Equal weights on ``N`` equispaced points in ``[-1e-3, 1e-3]``."""
    x = np.linspace(-1e-3, 1e-3, n) if n > 1 else np.zeros(1)
    return x, np.full(n, 1.0 / n)


def uniform_data(n):
    """Equal weights on ``N`` equispaced points in ``[-1, 1]`` (0 for N = 1)."""
    x = np.linspace(-1.0, 1.0, n) if n > 1 else np.zeros(1)
    return x, np.full(n, 1.0 / n)


_DATA = {
    "prince_charles": prince_charles_data,
    "johnny": johnny_data,
    "molly": molly_data,
    "semicircle": semicircle_data,
    "uniform": uniform_data,
}


@dataclass(frozen=True)
class ScenarioConfig:
    """A driver-system experiment.

    Positions and weights come from ``family`` and ``n`` unless
    ``family == "custom"``, in which case ``positions`` and ``weights`` are used.
    """

    name: str
    family: str
    n: int
    kind: str = "multiple_sle"
    kappa: float = 0.0
    T: float = 1.0
    dt: float = 1e-3
    seed: int = 0
    scheme: str = "rk4"
    positions: Optional[list] = None
    weights: Optional[list] = None
    highlight: Optional[int] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.kind not in ("multiple_sle", "simultaneous"):
            raise ValueError("scenario kind must be multiple_sle or simultaneous")
        if self.family == "custom" and (self.positions is None or self.weights is None):
            raise ValueError("custom scenarios need positions and weights")

    def initial(self):
        """``(x, lambdas)`` at time 0."""
        if self.family == "custom":
            x, lam = np.asarray(self.positions, dtype=float), np.asarray(self.weights, dtype=float)
            if x.size != self.n or lam.size != self.n:
                raise ValueError("positions and weights must have length n")
        else:
            x, lam = _DATA[self.family](self.n)
        if self.n > 1 and np.any(np.diff(x) <= 0):
            raise ValueError("initial positions must be strictly increasing")
        if abs(lam.sum() - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1")
        return x, lam

    def resolve(self):
        x, lam = self.initial()
        return {"kind": self.kind, "x0": x, "lambdas": lam, "kappa": self.kappa}

    def highlight_index(self):
        """Index of the distinguished (mass 1/2) driver, if any."""
        if self.highlight is not None:
            return self.highlight
        if self.family == "johnny":
            return self.n - 1
        if self.family == "molly":
            return (self.n - 1) // 2
        return None

    def with_(self, **changes):
        return replace(self, **{k: v for k, v in changes.items() if v is not None})

    def to_dict(self):
        return {"type": "scenario", **asdict(self)}


@dataclass(frozen=True)
class QuadDiffConfig:
    """Quadratic differential with double zeros at ``roots`` and conjugate pole pairs.

    ``Q(z) = prod_k (z - x_k)^2 prod_j (z - s_j)^a_j (z - conj s_j)^a_j``.
    """

    name: str
    roots: list
    poles: list = field(default_factory=list)
    alpha: list = field(default_factory=list)
    weights: Optional[list] = None
    T: float = 0.2
    dt: float = 1e-3
    seed: int = 0
    scheme: str = "rk4"

    def __post_init__(self):
        s = np.asarray([complex(*p) if isinstance(p, (list, tuple)) else complex(p) for p in self.poles],
                       dtype=complex)
        if s.size != len(self.alpha):
            raise ValueError("each pole needs an order")
        if np.any(s.imag <= 0):
            raise ValueError("poles must lie in the upper half-plane")
        if any(int(a) != a for a in self.alpha):
            raise ValueError("orders must be integers")
        object.__setattr__(self, "poles", [[float(p.real), float(p.imag)] for p in s])
        object.__setattr__(self, "alpha", [int(a) for a in self.alpha])
        object.__setattr__(self, "roots", [float(r) for r in self.roots])

    @property
    def n(self):
        return len(self.roots)

    @property
    def kappa(self):
        return 0.0

    def pole_array(self):
        return np.array([complex(re, im) for re, im in self.poles], dtype=complex)

    def lambdas(self):
        if self.weights is None:
            return np.full(self.n, 1.0 / self.n)
        return np.asarray(self.weights, dtype=float)

    def resolve(self):
        return {"kind": "quad_diff", "x0": np.asarray(self.roots), "lambdas": self.lambdas(), "kappa": 0.0,
                "S0": self.pole_array(), "alpha": np.asarray(self.alpha, dtype=float)}

    def with_(self, **changes):
        return replace(self, **{k: v for k, v in changes.items() if v is not None})

    def to_dict(self):
        return {"type": "quad_diff", **asdict(self)}


def from_dict(d):
    d = dict(d)
    kind = d.pop("type", "scenario")
    if kind == "quad_diff":
        return QuadDiffConfig(**d)
    if kind == "scenario":
        return ScenarioConfig(**d)
    raise ValueError(f"unknown config type {kind!r}")


def to_json(cfg):
    return json.dumps(cfg.to_dict(), indent=2, sort_keys=True)


def load(path):
    """Read a scenario JSON file."""
    with open(Path(path)) as fh:
        return from_dict(json.load(fh))


def save(cfg, path):
    Path(path).write_text(to_json(cfg) + "\n")


def _fig_roots():
    return [2.0 * k / 9.0 - 1.0 for k in range(10)]


def builtin(name, n=None):
    """Configuration of a named experiment; ``n`` overrides the default size."""
    if name == "prince_charles":
        return ScenarioConfig(name, "prince_charles", n or 100, T=0.25, dt=1e-4)
    if name == "johnny":
        return ScenarioConfig(name, "johnny", n or 51, T=0.5, dt=1e-3)
    if name == "molly":
        return ScenarioConfig(name, "molly", n or 51, T=0.5, dt=1e-3)
    if name == "semicircle":
        return ScenarioConfig(name, "semicircle", n or 400, kind="simultaneous", T=0.25, dt=1e-4, scheme="euler")
    if name == "fig2":
        return ScenarioConfig(name, "johnny", n or 51, kappa=1.0, T=1.0, dt=1e-3, seed=1)
    if name == "fig3":
        return ScenarioConfig(name, "molly", n or 51, kappa=1.0, T=1.0, dt=1e-3, seed=1)
    if name == "fig7":
        return QuadDiffConfig(name, _fig_roots(), poles=[[0.0, 1.0]], alpha=[-10])
    if name == "fig8":
        return QuadDiffConfig(name, _fig_roots(), poles=[[0.0, 1.0]], alpha=[10])
    if name == "quad_uniform":
        x, _ = uniform_data(n or 50)
        return QuadDiffConfig(name, list(x))
    raise ValueError(f"unknown builtin {name!r}; choose from {', '.join(BUILTINS)}")


# -- diagnostics --------------------------------------------------------------

class EscapeReport(NamedTuple):
    ns: np.ndarray
    t: float
    values: np.ndarray
    slope: float
    monotone: bool


def johnny_escape_diagnostic(paths, t):
    """Growth of the heavy driver ``V_N(t) - 2`` across system sizes.

    ``paths`` are deterministic runs with increasing N. The slope is the
    log-log regression exponent in N; ``monotone`` reports whether every run
    has the heavy driver strictly increasing on ``[0, t]``.
    """
    ns, vals, mono = [], [], True
    for p in paths:
        i = p.index_of(t)
        heavy = p.V[: i + 1, -1]
        mono &= bool(np.all(np.diff(heavy) > 0))
        ns.append(p.n)
        vals.append(heavy[-1])
    ns, vals = np.array(ns), np.array(vals)
    slope = float(np.polyfit(np.log(ns), np.log(vals - 2.0), 1)[0]) if t > 0 and ns.size > 1 else 0.0
    return EscapeReport(ns, float(t), vals, slope, mono)


class BlowupRow(NamedTuple):
    n: int
    pair_sum: float
    identity: float
    bound: float
    derivative: float


def prince_charles_blowup(ns):
    """Rows of the t = 0 blow-up quantities for the weights ``lam_k = (1+k/N)/(S_N N)``.

    ``pair_sum`` evaluates ``sum_{j != k} (lam_k^2 - lam_j^2)/(x_k - x_j)``
    directly, ``identity`` is ``sum_{j != k} (lam_k + lam_j)/S_N`` and
    ``bound`` is ``(N^2 - N)(1/N + 1/N^2)/S_N^2``. ``derivative`` is
    ``d/dt int f dmu`` at 0 for any f with ``f' = 1`` on [0, 1].
    """
    rows = []
    for n in ns:
        x, lam = prince_charles_data(n)
        s_n = 1.0 + (n + 1) / (2.0 * n)
        dx = x[:, None] - x[None, :]
        np.fill_diagonal(dx, np.inf)
        pair_sum = float(np.sum((lam[:, None] ** 2 - lam[None, :] ** 2) / dx))
        lsum = lam[:, None] + lam[None, :]
        np.fill_diagonal(lsum, 0.0)
        identity = float(lsum.sum() / s_n)
        bound = (n * n - n) * (1.0 / n + 1.0 / n ** 2) / s_n ** 2
        drift = drivers.drift_multiple_sle(x, lam)
        rows.append(BlowupRow(int(n), pair_sum, identity, bound, float(np.dot(lam, drift))))
    return rows


def q_arg(cfg, z):
    """``arg Q(z)`` as a sum of factor arguments (no overflow from high orders)."""
    z = np.asarray(z, dtype=complex)
    out = np.zeros(z.shape)
    for r in cfg.roots:
        out += 2.0 * np.angle(z - r)
    for s, a in zip(cfg.pole_array(), cfg.alpha):
        out += a * (np.angle(z - s) + np.angle(z - np.conj(s)))
    return out


def quad_field(cfg, grid):
    """Trajectory direction ``theta = -arg Q / 2 mod pi`` at every grid point."""
    return np.mod(-0.5 * q_arg(cfg, grid), np.pi)


def angle_error(theta, target):
    """Distance between directions, modulo pi."""
    d = np.mod(np.asarray(theta) - target + 0.5 * np.pi, np.pi) - 0.5 * np.pi
    return np.abs(d)


def field_grid(nx=200, ny=100, x_range=(-2.5, 2.5), y_max=2.5):
    """Grid over ``[-2.5, 2.5] x (0, 2.5]``, avoiding the real axis."""
    x = np.linspace(*x_range, nx)
    y = np.linspace(y_max / ny, y_max, ny)
    return x[None, :] + 1j * y[:, None]


class CharacteristicsRow(NamedTuple):
    n: int
    defect: float


def characteristics_defect(path, grid, t):
    """``max |M_{N,t}(g_{N,t}(z)) - M_{N,0}(z)|`` over ``grid`` for one run."""
    z = np.asarray(grid, dtype=complex).ravel()
    i = path.index_of(t)
    field_ = loewner.grid_flow(path, z, t)
    if not np.all(field_.alive):
        raise ValueError("a grid point was swallowed; move the grid up")
    m0 = cauchy(path.measure(0), z)
    mt = cauchy(path.measure(i), field_.g)
    return float(np.max(np.abs(mt - m0)))


def characteristics_check(ns, t=0.2, grid=None, dt=1e-3):
    """Conservation defect of the pole-free quad system with equal weights."""
    if grid is None:
        grid = np.linspace(-2.0, 2.0, 9)[None, :] + 1j * np.linspace(1.0, 2.0, 3)[:, None]
    rows = []
    for n in ns:
        cfg = builtin("quad_uniform", n).with_(T=t, dt=dt)
        rows.append(CharacteristicsRow(int(n), characteristics_defect(drivers.simulate(cfg), grid, t)))
    return rows


def molly_asymmetry(path):
    """``max_t max_k |V_{2K+2-k} + V_k|`` and ``max_t |V_{K+1}|``."""
    V = path.V
    K = (path.n - 1) // 2
    return float(np.max(np.abs(V + V[:, ::-1]))), float(np.max(np.abs(V[:, K])))


def profile_reconstruction_error(cfg):
    """``max |F - L_N o G|`` weight error for the measure at time 0."""
    from .measures import WeightProfile, compose_profile

    x, lam = cfg.initial()
    rebuilt = compose_profile(WeightProfile.from_lambdas(lam), AtomicMeasure.uniform(x))
    target = AtomicMeasure(x, lam)
    if not np.array_equal(rebuilt.positions, target.positions):
        return float("inf")
    return float(np.max(np.abs(rebuilt.weights - target.weights)))
