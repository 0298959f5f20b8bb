"""Laws of the random column-stochastic switch matrix A.

A realization is stored as the pair ``(a11, a12)``; the second row is
``a21 = 1 - a11`` and ``a22 = 1 - a12``. Every expectation over A in the
asymptotic formulas goes through :meth:`SwitchLaw.expect` or, when the
integrand only involves one column, the cheaper :meth:`SwitchLaw.expect_column`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Tuple

import numpy as np
from scipy import special

from .errors import ConfigError, QuadratureNoConvergence

BETA_REL_TOL = 1e-8
BETA_LEVELS = (8, 16, 32, 64, 128, 256, 512)


class SwitchLaw:
    kind = "abstract"

    def expect(self, h: Callable[[np.ndarray, np.ndarray], np.ndarray]) -> float:
        """E[h(A11, A12)] for a vectorized ``h``."""
        raise NotImplementedError

    def expect_column(self, j: int, h: Callable[[np.ndarray], np.ndarray], rel_tol: float = BETA_REL_TOL,
                      breakpoints: Tuple[float, ...] = ()) -> float:
        """E[h(A_1j)] using only the marginal law of column ``j`` (1 or 2).

        ``h`` maps a 1-d array of entries to values with one leading row per
        entry; extra trailing axes are kept, so vector-valued integrands work.
        ``breakpoints`` lists interior points where ``h`` has a kink; continuous
        laws split their quadrature there.
        """
        raise NotImplementedError

    def mean_entries(self) -> Tuple[float, float]:
        raise NotImplementedError

    def row_sup(self, i: int, j: int) -> float:
        """Supremum of A_ij over the support (0 when A_ij vanishes a.s.)."""
        lo, hi = self.column_support(j)
        return hi if i == 1 else 1.0 - lo

    def column_support(self, j: int) -> Tuple[float, float]:
        """Smallest interval holding A_1j almost surely."""
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, size=None):
        raise NotImplementedError

    def matrix(self, a11, a12) -> np.ndarray:
        return np.array([[a11, a12], [1.0 - a11, 1.0 - a12]])

    def to_dict(self) -> dict:
        raise NotImplementedError


class _Atomic(SwitchLaw):
    """Laws with finitely many atoms; expectations are exact weighted sums."""

    def atoms(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        raise NotImplementedError

    def expect(self, h):
        a11, a12, w = self.atoms()
        return float(np.dot(w, np.broadcast_to(np.asarray(h(a11, a12), dtype=float), w.shape)))

    def column_atoms(self, j):
        a11, a12, w = self.atoms()
        col = a11 if j == 1 else a12
        values, inverse = np.unique(col, return_inverse=True)
        weights = np.bincount(inverse, weights=w)
        return values, weights

    def expect_column(self, j, h, rel_tol=BETA_REL_TOL, breakpoints=()):
        values, weights = self.column_atoms(j)
        return _weighted(weights, h(values))

    def mean_entries(self):
        a11, a12, w = self.atoms()
        return float(np.dot(w, a11)), float(np.dot(w, a12))

    def column_support(self, j):
        values, _ = self.column_atoms(j)
        return float(values.min()), float(values.max())


@dataclass(frozen=True)
class Deterministic(_Atomic):
    d1: float
    d2: float
    kind = "deterministic"

    def __post_init__(self):
        for name in ("d1", "d2"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ConfigError("must lie in [0, 1]", name)

    def atoms(self):
        return np.array([self.d1]), np.array([self.d2]), np.array([1.0])

    def sample(self, rng, size=None):
        if size is None:
            return self.d1, self.d2
        return np.full(size, self.d1), np.full(size, self.d2)

    def to_dict(self):
        return {"type": "deterministic", "d1": self.d1, "d2": self.d2}


@dataclass(frozen=True)
class Bernoulli(_Atomic):
    """Jobs are never split: A11 ~ Bernoulli(p), A12 ~ Bernoulli(q), independent."""

    p: float
    q: float
    kind = "bernoulli"

    def __post_init__(self):
        for name in ("p", "q"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ConfigError("must lie in [0, 1]", name)

    def atoms(self):
        p, q = self.p, self.q
        a11 = np.array([1.0, 1.0, 0.0, 0.0])
        a12 = np.array([1.0, 0.0, 1.0, 0.0])
        w = np.array([p * q, p * (1 - q), (1 - p) * q, (1 - p) * (1 - q)])
        keep = w > 0
        return a11[keep], a12[keep], w[keep]

    def sample(self, rng, size=None):
        a11 = (rng.random(size) < self.p).astype(float)
        a12 = (rng.random(size) < self.q).astype(float)
        if size is None:
            return float(a11), float(a12)
        return a11, a12

    def to_dict(self):
        return {"type": "bernoulli", "p": self.p, "q": self.q}


@dataclass(frozen=True, eq=False)
class DiscreteMixture(_Atomic):
    """Finitely many ``(a11, a12, weight)`` atoms; allows dependent columns."""

    atom_list: Tuple[Tuple[float, float, float], ...]
    kind = "discrete"

    def __post_init__(self):
        arr = np.asarray(self.atom_list, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 3 or len(arr) == 0:
            raise ConfigError("atoms must be a non-empty list of [a11, a12, weight]", "atoms")
        if np.any(arr[:, :2] < 0) or np.any(arr[:, :2] > 1):
            raise ConfigError("atom entries must lie in [0, 1]", "atoms")
        if np.any(arr[:, 2] <= 0) or abs(arr[:, 2].sum() - 1.0) > 1e-12:
            raise ConfigError("weights must be positive and sum to 1", "atoms")
        object.__setattr__(self, "atom_list", tuple(tuple(map(float, row)) for row in arr))

    def atoms(self):
        arr = np.asarray(self.atom_list)
        return arr[:, 0].copy(), arr[:, 1].copy(), arr[:, 2].copy()

    def sample(self, rng, size=None):
        a11, a12, w = self.atoms()
        idx = rng.choice(len(w), size=size, p=w)
        return (float(a11[idx]), float(a12[idx])) if size is None else (a11[idx], a12[idx])

    def to_dict(self):
        return {"type": "discrete", "atoms": [list(a) for a in self.atom_list]}


def _frozen(*arrays):
    for arr in arrays:
        arr.setflags(write=False)
    return arrays


@lru_cache(maxsize=256)
def _beta_rule(beta: float, gamma: float, n: int):
    # Gauss-Jacobi weight (1-t)^(gamma-1) (1+t)^(beta-1) on [-1, 1] maps to the Beta density on [0, 1]
    with np.errstate(invalid="ignore", divide="ignore"):
        t, w = special.roots_jacobi(n, gamma - 1.0, beta - 1.0)
    return _frozen(0.5 * (1.0 + t), w / w.sum())


@lru_cache(maxsize=256)
def _split_beta_rule(beta: float, gamma: float, cuts: Tuple[float, ...], n: int):
    """Composite rule for the Beta density, split at ``cuts``.

    The end pieces keep the endpoint singularity in a Gauss-Jacobi weight;
    interior pieces use Gauss-Legendre on the full density.
    """
    edges = (0.0,) + cuts + (1.0,)
    log_norm = special.betaln(beta, gamma)
    xs, ws = [], []
    with np.errstate(invalid="ignore", divide="ignore"):
        for k, (lo, hi) in enumerate(zip(edges[:-1], edges[1:])):
            if k == 0:
                t, w = special.roots_jacobi(n, 0.0, beta - 1.0)
                x = hi * 0.5 * (1.0 + t)
                w = w * (0.5 * hi) ** beta * (1.0 - x) ** (gamma - 1.0)
            elif k == len(edges) - 2:
                t, w = special.roots_jacobi(n, gamma - 1.0, 0.0)
                x = 1.0 - (1.0 - lo) * 0.5 * (1.0 - t)
                w = w * (0.5 * (1.0 - lo)) ** gamma * x ** (beta - 1.0)
            else:
                t, w = special.roots_legendre(n)
                x = lo + (hi - lo) * 0.5 * (1.0 + t)
                w = w * 0.5 * (hi - lo) * x ** (beta - 1.0) * (1.0 - x) ** (gamma - 1.0)
            xs.append(x)
            ws.append(w * np.exp(-log_norm))
    return _frozen(np.concatenate(xs), np.concatenate(ws))


def _weighted(w, vals):
    """Weighted sum over the leading (node) axis; ``vals`` may carry extra trailing axes."""
    vals = np.asarray(vals, dtype=float)
    if vals.ndim == 0:
        vals = np.broadcast_to(vals, w.shape)
    out = np.tensordot(w, vals, axes=1)
    return float(out) if np.ndim(out) == 0 else out


def _escalate(estimate, levels, rel_tol, what):
    previous = None
    for n in levels:
        value = estimate(n)
        if previous is not None and np.all(np.abs(value - previous) <= rel_tol * np.abs(value) + 1e-300):
            return value
        previous_level, previous = previous, value
    raise QuadratureNoConvergence(
        f"{what}: Gauss-Jacobi levels up to {levels[-1]} nodes disagree "
        f"({previous_level!r} vs {previous!r})", previous=previous_level, last=previous)


@dataclass(frozen=True)
class Beta(SwitchLaw):
    """A11 ~ Beta(beta1, gamma1) and A12 ~ Beta(beta2, gamma2), independent."""

    beta1: float
    gamma1: float
    beta2: float
    gamma2: float
    kind = "beta"

    def __post_init__(self):
        for name in ("beta1", "gamma1", "beta2", "gamma2"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ConfigError("beta parameters must be positive", name)

    def _params(self, j):
        return (self.beta1, self.gamma1) if j == 1 else (self.beta2, self.gamma2)

    def expect(self, h, rel_tol=BETA_REL_TOL):
        def at_level(n):
            x1, w1 = _beta_rule(self.beta1, self.gamma1, n)
            x2, w2 = _beta_rule(self.beta2, self.gamma2, n)
            g1, g2 = np.meshgrid(x1, x2, indexing="ij")
            vals = np.broadcast_to(np.asarray(h(g1, g2), dtype=float), g1.shape)
            return float(w1 @ vals @ w2)
        return _escalate(at_level, BETA_LEVELS[:6], rel_tol, "beta switch expectation")

    def expect_column(self, j, h, rel_tol=BETA_REL_TOL, breakpoints=()):
        b, g = self._params(j)
        cuts = tuple(sorted({float(k) for k in breakpoints if 0.0 < k < 1.0}))

        def at_level(n):
            x, w = _split_beta_rule(b, g, cuts, n) if cuts else _beta_rule(b, g, n)
            return _weighted(w, h(x))
        return _escalate(at_level, BETA_LEVELS, rel_tol, f"beta switch column {j} expectation")

    def mean_entries(self):
        return self.beta1 / (self.beta1 + self.gamma1), self.beta2 / (self.beta2 + self.gamma2)

    def column_support(self, j):
        return 0.0, 1.0

    def sample(self, rng, size=None):
        a11 = rng.beta(self.beta1, self.gamma1, size)
        a12 = rng.beta(self.beta2, self.gamma2, size)
        return (float(a11), float(a12)) if size is None else (a11, a12)

    def to_dict(self):
        return {"type": "beta", "a11": [self.beta1, self.gamma1], "a12": [self.beta2, self.gamma2]}


def switch_from_dict(data: dict, path: str = "switch") -> SwitchLaw:
    if not isinstance(data, dict):
        raise ConfigError("expected an object", path)
    kind = data.get("type")
    try:
        if kind == "deterministic":
            return Deterministic(float(data["d1"]), float(data["d2"]))
        if kind == "bernoulli":
            return Bernoulli(float(data["p"]), float(data["q"]))
        if kind == "beta":
            (b1, g1), (b2, g2) = data["a11"], data["a12"]
            return Beta(float(b1), float(g1), float(b2), float(g2))
        if kind == "discrete":
            return DiscreteMixture(tuple(tuple(a) for a in data["atoms"]))
    except KeyError as exc:
        raise ConfigError("missing field", f"{path}.{exc.args[0]}") from None
    except ConfigError as exc:
        raise ConfigError(exc.detail, f"{path}.{exc.path}" if exc.path else path) from None
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value: {exc}", path) from None
    raise ConfigError(f"unknown switch type {kind!r}", f"{path}.type")
