"""Non-crossing pairings of 2N boundary points and their Dyck paths.

A pairing ``(a, b)`` opens at ``a`` and closes at ``b``; the Dyck path puts
slope ``+1`` at every opener and ``-1`` at every closer. Nesting becomes a
run of equal slopes and adjacent pairs become a ``(+1, -1)`` peak.
"""
from dataclasses import dataclass
import math

import numpy as np


def catalan(n):
    """Exact Catalan number ``(2n)! / ((n+1)! n!)``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return math.comb(2 * n, n) // (n + 1)


def log_catalan(n):
    """Natural log of the n-th Catalan number, for sizes where only ratios matter."""
    return math.lgamma(2 * n + 1) - math.lgamma(n + 2) - math.lgamma(n + 1)


@dataclass(frozen=True, eq=False)
class DyckPath:
    """Slopes ``+-1`` of length 2N with nonnegative prefix sums ending at 0."""

    slopes: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.slopes, dtype=np.int8).ravel()
        if s.size % 2 or not np.all(np.abs(s) == 1):
            raise ValueError("a Dyck path has an even number of +-1 slopes")
        h = np.cumsum(s, dtype=np.int64)
        if s.size and (h.min() < 0 or h[-1] != 0):
            raise ValueError("prefix sums must stay nonnegative and end at 0")
        s.setflags(write=False)
        object.__setattr__(self, "slopes", s)

    @property
    def n(self):
        return self.slopes.size // 2

    def heights(self):
        """``d(0), ..., d(2N)``."""
        return np.concatenate(([0], np.cumsum(self.slopes, dtype=np.int64)))

    def __eq__(self, other):
        return isinstance(other, DyckPath) and np.array_equal(self.slopes, other.slopes)

    def __hash__(self):
        return hash(self.slopes.tobytes())


@dataclass(frozen=True)
class Configuration:
    """Non-crossing perfect matching of ``1..2N`` as sorted pairs ``(a, b)``, ``a < b``."""

    pairs: tuple

    def __post_init__(self):
        pairs = tuple(sorted((int(a), int(b)) if a < b else (int(b), int(a)) for a, b in self.pairs))
        partner = {}
        for a, b in pairs:
            partner[a], partner[b] = b, a
        if sorted(partner) != list(range(1, 2 * len(pairs) + 1)):
            raise ValueError("pairs must cover 1..2N exactly once")
        stack = []
        for i in range(1, 2 * len(pairs) + 1):
            if partner[i] > i:
                stack.append(i)
            elif stack.pop() != partner[i]:
                raise ValueError(f"pair {(partner[i], i)} crosses another pair")
        object.__setattr__(self, "pairs", pairs)

    @property
    def n(self):
        return len(self.pairs)


def encode(config):
    """Configuration -> Dyck path."""
    s = np.empty(2 * config.n, dtype=np.int8)
    for a, b in config.pairs:
        s[a - 1] = 1
        s[b - 1] = -1
    return DyckPath(s)


def decode(path):
    """Dyck path -> configuration, matching each closer with the latest open opener."""
    if not isinstance(path, DyckPath):
        path = DyckPath(path)
    stack, pairs = [], []
    for i, s in enumerate(path.slopes, start=1):
        if s == 1:
            stack.append(i)
        else:
            pairs.append((stack.pop(), i))
    return Configuration(tuple(pairs))


def enumerate_paths(n):
    """All n-Dyck paths in lexicographic order (``+1`` before ``-1``)."""
    out = []
    buf = np.empty(2 * n, dtype=np.int8)

    def rec(i, h, ups):
        if i == 2 * n:
            out.append(DyckPath(buf.copy()))
            return
        if ups < n:
            buf[i] = 1
            rec(i + 1, h + 1, ups + 1)
        if h > 0:
            buf[i] = -1
            rec(i + 1, h - 1, ups)

    rec(0, 0, 0)
    return out


def sample_batch(n, size, seed, chunk=2048):
    """``size`` independent uniform n-Dyck paths as an int8 array ``(size, 2n)``.

    Cycle lemma: a uniform arrangement of n up-steps and n+1 down-steps has
    exactly one rotation whose proper prefixes stay nonnegative. It starts
    right after the first minimum of the prefix sums, and dropping its
    final down-step leaves a uniform Dyck path.
    """
    if n < 1:
        raise ValueError("n must be positive")
    rng = np.random.default_rng(seed)
    m = 2 * n + 1
    base = np.concatenate((np.ones(n, dtype=np.int8), -np.ones(n + 1, dtype=np.int8)))
    out = np.empty((size, 2 * n), dtype=np.int8)
    cols = np.arange(m)
    for a in range(0, size, chunk):
        k = min(chunk, size - a)
        words = rng.permuted(np.broadcast_to(base, (k, m)), axis=1)
        start = np.argmin(np.cumsum(words, axis=1, dtype=np.int32), axis=1) + 1
        idx = (start[:, None] + cols[None, :]) % m
        out[a:a + k] = np.take_along_axis(words, idx, axis=1)[:, :-1]
    return out


def sample_uniform(n, seed):
    """One uniform n-Dyck path."""
    return DyckPath(sample_batch(n, 1, seed)[0])


@dataclass(frozen=True, eq=False)
class NormalizedPath:
    """Piecewise-affine path through ``(p_k, e_k)``."""

    breakpoints: np.ndarray
    gamma: float
    values: np.ndarray

    def __call__(self, t):
        return np.interp(t, self.breakpoints, self.values)

    def max(self):
        return float(self.values.max())


def uniform_breakpoints(n):
    return np.arange(2 * n + 1) / (2 * n)


def normalized_values(heights, breakpoints, gamma):
    """``e(p_k)`` for one path or a batch of height rows.

    On ``[p_k, p_{k+1}]`` the path rises by ``(d(k+1) - d(k)) (dp)^(1-gamma)``.
    """
    dp = np.diff(breakpoints)
    inc = np.diff(heights, axis=-1) * dp ** (1.0 - gamma)
    zero = np.zeros(inc.shape[:-1] + (1,))
    return np.concatenate((zero, np.cumsum(inc, axis=-1)), axis=-1)


def normalize(path, breakpoints=None, gamma=1.0):
    """``e_N(t) = e_N(p_k) + (t - p_k) (d(k+1) - d(k)) / (p_{k+1} - p_k)^gamma``."""
    p = uniform_breakpoints(path.n) if breakpoints is None else np.asarray(breakpoints, dtype=float)
    if p.size != 2 * path.n + 1 or p[0] != 0.0 or p[-1] > 1.0 or np.any(np.diff(p) <= 0):
        raise ValueError("need 2N+1 strictly increasing breakpoints from 0 inside [0, 1]")
    if not 0.0 < gamma <= 1.0:
        raise ValueError("gamma must lie in (0, 1]")
    return NormalizedPath(p, float(gamma), normalized_values(path.heights(), p, gamma))


def batch_max(n, size, seed, gamma=0.5):
    """Maxima of normalized uniform paths on uniform breakpoints."""
    scale = (1.0 / (2 * n)) ** (1.0 - gamma)
    heights = np.cumsum(sample_batch(n, size, seed), axis=1, dtype=np.int32)
    return heights.max(axis=1) * scale


def expected_max_height(n):
    """Exact mean of ``max d`` over uniform n-Dyck paths.

    ``P(max <= h)`` is the ratio of walk probabilities with and without a
    ceiling at ``h``, each from a forward recursion on the heights.
    """
    def bridge_prob(ceiling):
        p = np.zeros(ceiling + 2)
        p[0] = 1.0
        for _ in range(2 * n):
            q = np.zeros_like(p)
            q[1:ceiling + 1] += 0.5 * p[:ceiling]
            q[:ceiling] += 0.5 * p[1:ceiling + 1]
            p = q
        return p[0]

    total = bridge_prob(n)
    mean = 0.0
    for h in range(n):
        tail = 1.0 - bridge_prob(h) / total
        mean += tail
        if tail < 1e-17:
            break
    return mean


def excursion_mean_max():
    """Mean maximum of the standard Brownian excursion, ``sqrt(pi/2)``."""
    return math.sqrt(math.pi / 2.0)


def partition_weight(points, kappa, kind):
    """Boundary partition weight of a pair or of curves growing to infinity.

    ``pair``: ``|y - x|^(-2b)`` with ``b = (6 - kappa) / (2 kappa)``.
    ``to_infinity``: ``prod_{j<k} |x_k - x_j|^(2/kappa)``.
    """
    if not 0.0 < kappa <= 4.0:
        raise ValueError("kappa must lie in (0, 4]")
    x = np.asarray(points, dtype=float)
    if kind == "pair":
        if x.size != 2:
            raise ValueError("a pair weight needs exactly two points")
        d = abs(x[1] - x[0])
        if d == 0:
            raise ValueError("coincident points")
        b = (6.0 - kappa) / (2.0 * kappa)
        return float(d ** (-2.0 * b))
    if kind == "to_infinity":
        d = np.abs(x[None, :] - x[:, None])[np.triu_indices(x.size, 1)]
        if np.any(d == 0):
            raise ValueError("coincident points")
        return float(np.prod(d ** (2.0 / kappa)))
    raise ValueError(f"unknown kind {kind!r}")


def configuration_probabilities(weights):
    """Normalize partition weights into configuration probabilities."""
    w = np.asarray(weights, dtype=float)
    if np.any(w < 0):
        raise ValueError("weights must be nonnegative")
    total = w.sum()
    if total <= 0:
        raise ValueError("at least one weight must be positive")
    return w / total
