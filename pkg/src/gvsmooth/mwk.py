"""McShane-Whitney-Kirszbraun extensions on a discrete domain.

Given guiding samples ``f`` on ``J`` and a constant ``lip`` at least as large
as the samples' own Lipschitz constant::

    inf(x) = max_{a in J} f(a) - lip * d(a, x)     (lower / minimal extension)
    sup(x) = min_{a in J} f(a) + lip * d(a, x)     (upper / maximal extension)
    mid(x) = (inf(x) + sup(x)) / 2

All three interpolate ``f`` and are ``lip``-Lipschitz in the metric ``d``.
Every other ``lip``-Lipschitz interpolant lies between ``inf`` and ``sup``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from gvsmooth.domain import Domain, SampleSet, ScalarField, multi_source_distances
from gvsmooth.errors import InfeasibleLipschitzError, InvalidArgument

__all__ = [
    "Metric",
    "LipschitzEstimate",
    "sample_distances",
    "lipschitz_constant",
    "mwk_inf_extension",
    "mwk_sup_extension",
    "mwk_mid_extension",
    "mwk_extension",
]

# relative slack when comparing a caller's lip against the tight constant
_LIP_RTOL = 1e-12


class Metric(str, enum.Enum):
    GEODESIC = "geodesic"
    EUCLIDEAN = "euclidean"


@dataclass(frozen=True)
class LipschitzEstimate:
    lip: float
    witness: tuple[int, int] | None  # None for a single sample


def _metric(metric) -> Metric:
    try:
        return Metric(metric)
    except ValueError:
        raise InvalidArgument(f"unknown metric {metric!r}") from None


def sample_distances(samples: SampleSet, dom: Domain, metric=Metric.GEODESIC) -> np.ndarray:
    """Distance from each sample vertex to every vertex, shape ``(len(J), V)``."""
    metric = _metric(metric)
    samples.check_in(dom)
    if metric is Metric.GEODESIC:
        return np.stack([multi_source_distances(dom, [a]) for a in samples.vertices]).astype(float)
    if dom.kind == "graph":
        raise InvalidArgument("euclidean metric needs a path or grid domain")
    xy = dom.coords()
    diff = xy[list(samples.vertices)][:, None, :] - xy[None, :, :]
    return np.sqrt((diff ** 2).sum(axis=-1))


def lipschitz_constant(samples: SampleSet, dom: Domain, metric=Metric.GEODESIC) -> LipschitzEstimate:
    """Smallest ``L`` with ``|f(x) - f(y)| <= L d(x, y)`` over all sample pairs."""
    vals = samples.real_values()
    if len(samples) == 1:
        return LipschitzEstimate(0.0, None)
    dist = sample_distances(samples, dom, metric)[:, list(samples.vertices)]
    gaps = np.abs(vals[:, None] - vals[None, :])
    iu, ju = np.triu_indices(len(samples), k=1)
    d, g = dist[iu, ju], gaps[iu, ju]
    if np.any((d == 0) & (g > 0)):
        k = int(np.flatnonzero((d == 0) & (g > 0))[0])
        raise InfeasibleLipschitzError(
            "two samples at zero distance carry different values",
            required=np.inf,
            witness=(samples.vertices[iu[k]], samples.vertices[ju[k]]),
        )
    with np.errstate(invalid="ignore", divide="ignore"):
        ratios = np.where(d > 0, g / np.where(d > 0, d, 1.0), 0.0)
    k = int(np.argmax(ratios))
    return LipschitzEstimate(float(ratios[k]), (samples.vertices[iu[k]], samples.vertices[ju[k]]))


def _prepare(samples, dom, lip, metric):
    vals = samples.real_values()
    if not np.all(np.isfinite(vals)):
        raise InvalidArgument("sample values must be finite reals")
    tight = lipschitz_constant(samples, dom, metric)
    if lip is None:
        lip = tight.lip
    lip = float(lip)
    if lip < 0 or not np.isfinite(lip):
        raise InvalidArgument(f"lip must be a finite nonnegative number, got {lip}")
    if lip < tight.lip * (1 - _LIP_RTOL):
        raise InfeasibleLipschitzError(
            f"lip={lip!r} is below the samples' Lipschitz constant {tight.lip!r} "
            f"(witness pair {tight.witness})",
            required=tight.lip,
            witness=tight.witness,
        )
    return vals, lip, sample_distances(samples, dom, metric)


def _envelopes(samples, dom, lip, metric):
    vals, lip, dist = _prepare(samples, dom, lip, metric)
    lo = np.max(vals[:, None] - lip * dist, axis=0)
    hi = np.min(vals[:, None] + lip * dist, axis=0)
    # lo <= hi holds exactly in real arithmetic; at a tight lip round-off can
    # cross them by an ulp, so meet in the middle there
    crossed = lo > hi
    if crossed.any():
        lo[crossed] = hi[crossed] = (lo[crossed] + hi[crossed]) / 2
    # and they equal f on J; pin to drop round-off in f(b) -/+ lip * d(a, b)
    lo[list(samples.vertices)] = vals
    hi[list(samples.vertices)] = vals
    return lo, hi


def mwk_inf_extension(samples: SampleSet, dom: Domain, lip=None, metric=Metric.GEODESIC) -> ScalarField:
    """Pointwise minimal ``lip``-Lipschitz extension of the samples.

    Parameters
    ----------
    samples : SampleSet
        Real-valued guiding points.
    dom : Domain
    lip : float, optional
        Lipschitz constant of the extension; defaults to the tight constant
        of the samples. Larger values give a steeper, more tent-like surface.
    metric : {"geodesic", "euclidean"}

    Raises
    ------
    InfeasibleLipschitzError
        If ``lip`` is smaller than the samples' own Lipschitz constant.
    """
    return ScalarField(dom, _envelopes(samples, dom, lip, metric)[0])


def mwk_sup_extension(samples: SampleSet, dom: Domain, lip=None, metric=Metric.GEODESIC) -> ScalarField:
    """Pointwise maximal ``lip``-Lipschitz extension; see :func:`mwk_inf_extension`."""
    return ScalarField(dom, _envelopes(samples, dom, lip, metric)[1])


def mwk_mid_extension(samples: SampleSet, dom: Domain, lip=None, metric=Metric.GEODESIC) -> ScalarField:
    """Average of the minimal and maximal extensions."""
    lo, hi = _envelopes(samples, dom, lip, metric)
    return ScalarField(dom, (lo + hi) / 2)


def mwk_extension(method: str, samples, dom, lip=None, metric=Metric.GEODESIC) -> ScalarField:
    funcs = {"inf": mwk_inf_extension, "sup": mwk_sup_extension, "mid": mwk_mid_extension}
    if method not in funcs:
        raise InvalidArgument(f"unknown extension method {method!r}; expected inf, sup or mid")
    return funcs[method](samples, dom, lip, metric)
