"""Epsilon-constrained polishing with frozen guiding points.

The target is a bound on the jump between consecutive divided slopes,
which on unit spacing is the centered second difference
``|2 f[j] - f[j-1] - f[j+1]| <= epsilon``. Free (non-guiding) interior
points are relaxed toward their neighbour average in ascending index order,
in place, until every free point meets the bound or ``max_iters`` sweeps
have run. Guiding points and the domain boundary are never written.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from gvsmooth.domain import ScalarField
from gvsmooth.errors import InvalidArgument

__all__ = [
    "PolishConfig",
    "PolishOutcome",
    "second_difference_residual",
    "general_slope_residual",
    "polish_1d",
    "polish_grid",
    "max_free_residual_1d",
    "max_free_residual_grid",
]


@dataclass(frozen=True)
class PolishConfig:
    epsilon: float
    max_iters: int = 10_000
    relaxation: float = 1.0

    def __post_init__(self):
        if not self.epsilon > 0:
            raise InvalidArgument("epsilon must be positive")
        if self.max_iters < 1:
            raise InvalidArgument("max_iters must be positive")
        if not 0 < self.relaxation <= 1:
            raise InvalidArgument("relaxation must lie in (0, 1]")

    @classmethod
    def for_values(cls, values, rel_epsilon: float = 1e-6, **kwargs) -> "PolishConfig":
        """Config with ``epsilon = rel_epsilon * range(values)``.

        A constant input has zero range; it falls back to ``rel_epsilon``
        itself so that epsilon stays positive.
        """
        v = np.asarray(values, dtype=float)
        span = float(v.max() - v.min()) if v.size else 0.0
        return cls(epsilon=rel_epsilon * span if span > 0 else rel_epsilon, **kwargs)


@dataclass(frozen=True)
class PolishOutcome:
    field: object  # ScalarField, or ndarray when a bare array was polished
    converged: bool
    iterations: int
    max_residual: float


def second_difference_residual(seq, i: int) -> float:
    s = np.asarray(seq, dtype=float)
    if not 0 <= i <= len(s) - 3:
        raise InvalidArgument(f"index {i} needs a full 3-point stencil in a sequence of {len(s)}")
    return float(abs(2 * s[i + 1] - s[i] - s[i + 2]))


def general_slope_residual(seq, xs, i: int) -> float:
    """Jump between the divided slopes over ``[x_i, x_i+1]`` and ``[x_i+1, x_i+2]``."""
    s = np.asarray(seq, dtype=float)
    x = np.asarray(xs, dtype=float)
    if x.shape != s.shape:
        raise InvalidArgument("coordinates and values must have the same length")
    if np.any(np.diff(x) <= 0):
        raise InvalidArgument("coordinates must be strictly increasing")
    if not 0 <= i <= len(s) - 3:
        raise InvalidArgument(f"index {i} needs a full 3-point stencil in a sequence of {len(s)}")
    left = (s[i + 1] - s[i]) / (x[i + 1] - x[i])
    right = (s[i + 2] - s[i + 1]) / (x[i + 2] - x[i + 1])
    return float(abs(left - right))


def _mask(guiding_mask, shape) -> np.ndarray:
    if guiding_mask is None:
        return np.zeros(shape, dtype=bool)
    m = np.asarray(guiding_mask, dtype=bool)
    if m.shape != shape:
        raise InvalidArgument(f"guiding mask shape {m.shape} does not match field shape {shape}")
    return m


def _unwrap(field):
    if isinstance(field, ScalarField):
        return field, np.array(field.as_array(), dtype=float)
    return None, np.array(field, dtype=float)


def _wrap(src, values):
    return values if src is None else ScalarField(src.domain, values.reshape(-1))


def _relax(v, target, w):
    if w == 1:
        return target
    # convex combination; clip guards against round-off past either end
    return min(max((1 - w) * v + w * target, min(v, target)), max(v, target))


def max_free_residual_1d(s: np.ndarray, guiding: np.ndarray) -> float:
    """Largest centered residual over free interior indices (0 if there are none)."""
    if len(s) < 3:
        return 0.0
    r = np.abs(2 * s[1:-1] - s[:-2] - s[2:])
    r = r[~guiding[1:-1]]
    return float(r.max()) if r.size else 0.0


def polish_1d(seq, guiding_mask=None, cfg: PolishConfig | None = None) -> PolishOutcome:
    """Smooth a sequence until every free centered residual is within epsilon.

    Parameters
    ----------
    seq : array_like or ScalarField
        Values on a path. A ScalarField in gives a ScalarField out.
    guiding_mask : array_like of bool, optional
        True where the value is frozen. Default: nothing frozen besides the
        two endpoints, which have no full stencil.
    cfg : PolishConfig, optional
        Defaults to :meth:`PolishConfig.for_values`.

    Returns
    -------
    PolishOutcome
        ``iterations`` counts sweeps; 0 when the input already satisfies the
        bound. Non-convergence is reported through ``converged``.
    """
    src, s = _unwrap(seq)
    if s.ndim != 1:
        raise InvalidArgument("polish_1d needs a 1-D sequence")
    guiding = _mask(guiding_mask, s.shape)
    cfg = cfg or PolishConfig.for_values(s)
    eps, w = cfg.epsilon, cfg.relaxation
    free = [j for j in range(1, len(s) - 1) if not guiding[j]]

    iterations = 0
    residual = max_free_residual_1d(s, guiding)
    while residual > eps and iterations < cfg.max_iters:
        for j in free:
            if abs(2 * s[j] - s[j - 1] - s[j + 1]) > eps:
                s[j] = _relax(s[j], (s[j - 1] + s[j + 1]) / 2, w)
        iterations += 1
        residual = max_free_residual_1d(s, guiding)
    return PolishOutcome(_wrap(src, s), residual <= eps, iterations, residual)


def max_free_residual_grid(a: np.ndarray, guiding: np.ndarray) -> float:
    """Largest row or column centered residual over free interior vertices."""
    if min(a.shape) < 3:
        return 0.0
    c = a[1:-1, 1:-1]
    rx = np.abs(2 * c - a[1:-1, :-2] - a[1:-1, 2:])
    ry = np.abs(2 * c - a[:-2, 1:-1] - a[2:, 1:-1])
    r = np.maximum(rx, ry)[~guiding[1:-1, 1:-1]]
    return float(r.max()) if r.size else 0.0


def polish_grid(field, guiding_mask=None, cfg: PolishConfig | None = None) -> PolishOutcome:
    """Grid version of :func:`polish_1d`.

    ``field`` is a grid ScalarField or a ``(height, width)`` array. The
    bound is checked along rows and columns separately; a free vertex that
    violates either is moved toward its 4-neighbour average. That average
    can settle while the row and column residuals stay large with opposite
    signs (``x**2 - y**2``), so guiding data that is not linear along both
    axes may stop the run at ``max_iters`` with ``converged=False``.
    """
    src, a = _unwrap(field)
    if src is not None and not src.domain.is_grid:
        raise InvalidArgument("polish_grid needs a grid domain")
    if a.ndim != 2 or min(a.shape) < 3:
        raise InvalidArgument("polish_grid needs a grid of at least 3x3")
    guiding = _mask(guiding_mask, a.shape)
    cfg = cfg or PolishConfig.for_values(a)
    eps, w = cfg.epsilon, cfg.relaxation
    h, wd = a.shape
    free = [(y, x) for y in range(1, h - 1) for x in range(1, wd - 1) if not guiding[y, x]]

    iterations = 0
    residual = max_free_residual_grid(a, guiding)
    while residual > eps and iterations < cfg.max_iters:
        for y, x in free:
            v = a[y, x]
            left, right, up, down = a[y, x - 1], a[y, x + 1], a[y - 1, x], a[y + 1, x]
            if abs(2 * v - left - right) > eps or abs(2 * v - up - down) > eps:
                a[y, x] = _relax(v, (left + right + up + down) / 4, w)
        iterations += 1
        residual = max_free_residual_grid(a, guiding)
    return PolishOutcome(_wrap(src, a), residual <= eps, iterations, residual)
