"""Gradually varied functions on graphs.

A level-indexed function is gradually varied when the indices at the two
ends of every edge differ by at most one. Samples with indices ``i_p`` on
vertices ``p`` admit a gradually varied extension exactly when
``d(p, q) >= |i_p - i_q|`` for every pair of samples.

The fill is built from two distance envelopes::

    lower(v) = max(1, max_p i_p - d(v, p))
    upper(v) = min(n, min_p i_p + d(v, p))

Both are 1-Lipschitz in the hop metric, agree with the samples when the
instance is feasible, and bound every gradually varied interpolant.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from gvsmooth.domain import Domain, LevelSequence, SampleSet, ScalarField, multi_source_distances
from gvsmooth.errors import InfeasibleFillError, InvalidArgument

__all__ = [
    "GvfStrategy",
    "FeasibilityVerdict",
    "gvf_feasible",
    "gvf_envelopes",
    "gvf_fill",
    "is_gradually_varied",
]


class GvfStrategy(str, enum.Enum):
    INF_ENVELOPE = "inf_envelope"
    SUP_ENVELOPE = "sup_envelope"
    MID_ENVELOPE = "mid_envelope"


@dataclass(frozen=True)
class FeasibilityVerdict:
    feasible: bool
    witness: tuple[int, int, int, int] | None = None  # (x, y, i, j)
    distance: int | None = None

    def __bool__(self):
        return self.feasible


def _indices(samples: SampleSet, levels: LevelSequence) -> np.ndarray:
    idx = []
    for v in samples.values:
        if isinstance(v, (float, np.floating)) and float(v).is_integer():
            v = int(v)
        if isinstance(v, (bool, np.bool_)) or not isinstance(v, (int, np.integer)):
            raise InvalidArgument(f"level index must be an integer, got {v!r}")
        idx.append(levels.check_index(v))
    return np.asarray(idx, dtype=np.int64)


def _sample_distances(samples: SampleSet, dom: Domain) -> np.ndarray:
    samples.check_in(dom)
    return np.stack([multi_source_distances(dom, [p]) for p in samples.vertices])


def gvf_feasible(samples: SampleSet, dom: Domain, levels: LevelSequence) -> FeasibilityVerdict:
    """Check ``d(x, y) >= |i - j|`` for every pair of level-indexed samples.

    On failure the verdict carries the first violating pair in sample order.
    """
    idx = _indices(samples, levels)
    dist = _sample_distances(samples, dom)[:, list(samples.vertices)]
    bad = dist < np.abs(idx[:, None] - idx[None, :])
    if not bad.any():
        return FeasibilityVerdict(True)
    a, b = map(int, np.argwhere(bad)[0])
    x, y = samples.vertices[a], samples.vertices[b]
    return FeasibilityVerdict(False, (x, y, int(idx[a]), int(idx[b])), int(dist[a, b]))


def gvf_envelopes(samples: SampleSet, dom: Domain, levels: LevelSequence):
    """Clamped lower and upper envelopes as int arrays over the vertices."""
    idx = _indices(samples, levels)
    dist = _sample_distances(samples, dom)
    lower = np.max(idx[:, None] - dist, axis=0)
    upper = np.min(idx[:, None] + dist, axis=0)
    return np.maximum(lower, 1), np.minimum(upper, len(levels))


def gvf_fill(samples: SampleSet, dom: Domain, levels: LevelSequence,
             strategy=GvfStrategy.MID_ENVELOPE) -> ScalarField:
    """Gradually varied extension of level-indexed samples.

    Returns a level-indexed :class:`ScalarField`; use
    ``field.to_real(levels)`` for the level values.

    Raises
    ------
    InfeasibleFillError
        With the violating sample pair, when no extension exists.
    """
    try:
        strategy = GvfStrategy(strategy)
    except ValueError:
        raise InvalidArgument(f"unknown gvf strategy {strategy!r}") from None
    verdict = gvf_feasible(samples, dom, levels)
    if not verdict.feasible:
        x, y, i, j = verdict.witness
        raise InfeasibleFillError(
            f"({x},{y}): d={verdict.distance} < |{i}-{j}|={abs(i - j)}",
            verdict.witness,
            verdict.distance,
        )
    lower, upper = gvf_envelopes(samples, dom, levels)
    if strategy is GvfStrategy.INF_ENVELOPE:
        out = lower
    elif strategy is GvfStrategy.SUP_ENVELOPE:
        out = upper
    else:
        # floor division keeps |a - b| <= 1 across edges
        out = (lower + upper) // 2
    return ScalarField(dom, out, is_level_indexed=True)


def is_gradually_varied(field: ScalarField, dom: Domain | None = None,
                        levels: LevelSequence | None = None):
    """Return ``(ok, edge)`` where ``edge`` is the first violating edge or None."""
    dom = field.domain if dom is None else dom
    vals = np.asarray(field.values)
    if levels is not None and vals.size:
        if vals.min() < 1 or vals.max() > len(levels):
            raise InvalidArgument("field contains level indices outside 1..n")
    for u, w in dom.edges():
        if abs(int(vals[u]) - int(vals[w])) > 1:
            return False, (u, w)
    return True, None
