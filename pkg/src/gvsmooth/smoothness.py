"""Discrete smoothness measures.

* natural smoothness of a 1-D sequence from the sign changes of its first
  differences, and of a 2-D field from the number of definite-Hessian
  extreme points of a reconstruction;
* the ladder of iterated differences ``f^(k+1)(x) = f^(k)(x+1) - f^(k)(x)``
  with ``lip[k] = max |f^(k+1)|`` and the ladder-based classification
  (absolute / almost / K-order discrete smooth);
* splitting a field into a coarse reconstruction plus a fine residual.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral

import numpy as np

from gvsmooth.domain import Domain, LevelSequence, SampleSet, ScalarField
from gvsmooth.errors import InvalidArgument
from gvsmooth.gvf import GvfStrategy, gvf_fill
from gvsmooth.mwk import mwk_mid_extension

__all__ = [
    "NaturalSmoothness1D",
    "NaturalSmoothnessKD",
    "DifferenceLadder",
    "SmoothnessClass",
    "Decomposition",
    "derivative_sign_changes",
    "natural_smoothness_1d",
    "count_extreme_points",
    "natural_smoothness_kd",
    "difference_ladder",
    "lip_pairwise",
    "classify_discrete_smoothness",
    "decompose_micro_macro",
]

DEFAULT_KMAX = 16


def _sequence(seq) -> np.ndarray:
    """Integer input stays exact (object array of Python ints); anything else is float64."""
    items = list(np.asarray(seq).reshape(-1).tolist()) if isinstance(seq, np.ndarray) else list(seq)
    if len(items) < 2:
        raise InvalidArgument("sequence needs at least two values")
    if all(isinstance(v, Integral) and not isinstance(v, bool) for v in items):
        return np.array([int(v) for v in items], dtype=object)
    arr = np.asarray(items, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise InvalidArgument("sequence values must be finite")
    return arr


# ---------------------------------------------------------------------------
# natural smoothness


@dataclass(frozen=True)
class NaturalSmoothness1D:
    n_samples: int
    sign_changes: int
    ratio: float


@dataclass(frozen=True)
class NaturalSmoothnessKD:
    """``ratio`` is ``(sn - en) / en``; None when ``en == 0`` (perfectly smooth).

    ``ratio_alt`` is ``(sn - en) / sn``, normalised like the 1-D ratio.
    """

    sn: int
    en: int
    ratio: float | None
    ratio_alt: float

    @property
    def perfectly_smooth(self) -> bool:
        return self.en == 0


def derivative_sign_changes(seq) -> int:
    """Sign flips between consecutive nonzero first differences."""
    d = np.diff(np.asarray(_sequence(seq), dtype=float))
    signs = np.sign(d)
    signs = signs[signs != 0]
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def natural_smoothness_1d(seq) -> NaturalSmoothness1D:
    n = len(_sequence(seq))
    changes = derivative_sign_changes(seq)
    return NaturalSmoothness1D(n, changes, (n - changes) / n)


def _grid_array(field: ScalarField) -> np.ndarray:
    dom = field.domain
    if not dom.is_grid:
        raise InvalidArgument("extreme-point counting needs a grid domain")
    if dom.width < 3 or dom.height < 3:
        raise InvalidArgument("grid must be at least 3x3 to have interior vertices")
    return np.asarray(field.as_array(), dtype=float)


def _extreme_kinds(a: np.ndarray, grad_tol: float, det_tol: float) -> np.ndarray:
    """+1 for minima, -1 for maxima, 0 otherwise, on the interior of ``a``.

    Central differences on a unit-spaced grid; ``a`` is indexed ``[y, x]``.
    """
    c = a[1:-1, 1:-1]
    gx = (a[1:-1, 2:] - a[1:-1, :-2]) / 2
    gy = (a[2:, 1:-1] - a[:-2, 1:-1]) / 2
    hxx = a[1:-1, 2:] - 2 * c + a[1:-1, :-2]
    hyy = a[2:, 1:-1] - 2 * c + a[:-2, 1:-1]
    hxy = (a[2:, 2:] - a[2:, :-2] - a[:-2, 2:] + a[:-2, :-2]) / 4
    det = hxx * hyy - hxy * hxy
    trace = hxx + hyy
    critical = (np.abs(gx) <= grad_tol) & (np.abs(gy) <= grad_tol)
    definite = critical & (det > det_tol)
    kinds = np.zeros_like(c, dtype=int)
    kinds[definite & (trace > 0)] = 1
    kinds[definite & (trace < 0)] = -1
    return kinds


def _count_components(kinds: np.ndarray) -> int:
    # 8-connected runs of the same extremum type count once
    h, w = kinds.shape
    seen = np.zeros_like(kinds, dtype=bool)
    count = 0
    for y0, x0 in zip(*np.nonzero(kinds)):
        if seen[y0, x0]:
            continue
        count += 1
        kind = kinds[y0, x0]
        stack = [(y0, x0)]
        seen[y0, x0] = True
        while stack:
            y, x = stack.pop()
            for dy in (-1, 0, 1):
                for dx in (-1, 0, 1):
                    yy, xx = y + dy, x + dx
                    if 0 <= yy < h and 0 <= xx < w and not seen[yy, xx] and kinds[yy, xx] == kind:
                        seen[yy, xx] = True
                        stack.append((yy, xx))
    return count


def count_extreme_points(field: ScalarField, grad_rtol: float = 1e-9, det_rtol: float = 1e-9) -> int:
    """Number of interior extreme points of a grid field.

    A vertex qualifies when both central-difference gradient components are
    at most ``grad_rtol * range`` in magnitude and the central-difference
    Hessian is positive or negative definite (determinant above
    ``det_rtol * range**2``). Saddles and degenerate points are skipped, and
    a connected patch of extrema of the same type counts once.
    """
    a = _grid_array(field)
    span = float(a.max() - a.min())
    kinds = _extreme_kinds(a, grad_rtol * span, det_rtol * span * span)
    return _count_components(kinds)


def natural_smoothness_kd(sn: int, field: ScalarField, **tolerances) -> NaturalSmoothnessKD:
    """Natural smoothness of a grid reconstruction built from ``sn`` samples."""
    if sn < 1:
        raise InvalidArgument("sample count sn must be positive")
    en = count_extreme_points(field, **tolerances)
    ratio = (sn - en) / en if en else None
    return NaturalSmoothnessKD(sn, en, ratio, (sn - en) / sn)


# ---------------------------------------------------------------------------
# difference ladder


@dataclass(frozen=True)
class DifferenceLadder:
    """Iterated differences; ``rows[0]`` is the input and ``lip[k] = max|rows[k+1]|``."""

    rows: tuple
    lip: tuple
    decrease_onset: int | None


def _decrease_onset(lip) -> int | None:
    if len(lip) < 2 or not lip[-2] > lip[-1]:
        return None
    k0 = len(lip) - 2
    while k0 > 0 and lip[k0 - 1] > lip[k0]:
        k0 -= 1
    return k0


def difference_ladder(seq, kmax: int = DEFAULT_KMAX) -> DifferenceLadder:
    """Difference rows down to depth ``kmax`` or until a row has one element.

    Integer input is differenced exactly; float input in float64.
    """
    if kmax < 1:
        raise InvalidArgument("kmax must be positive")
    row = _sequence(seq)
    rows, lip = [row], []
    while len(lip) < kmax and len(row) > 1:
        row = row[1:] - row[:-1]
        rows.append(row)
        lip.append(abs(row).max())
    lip = [int(v) if isinstance(v, Integral) else float(v) for v in lip]
    return DifferenceLadder(tuple(rows), tuple(lip), _decrease_onset(lip))


def lip_pairwise(seq):
    """``max |f(x) - f(y)| / |x - y|`` over all index pairs.

    Exact (int or :class:`~fractions.Fraction`) for integer sequences.
    """
    a = _sequence(seq)
    exact = a.dtype == object
    best = 0
    for gap in range(1, len(a)):
        m = abs(a[gap:] - a[:-gap]).max()
        q = Fraction(int(m), gap) if exact else float(m) / gap
        if q > best:
            best = q
    if exact:
        return int(best) if best.denominator == 1 else best
    return float(best)


@dataclass(frozen=True)
class SmoothnessClass:
    """One of ``absolute``, ``almost``, ``k_order`` or ``unclassified``."""

    kind: str
    K: int | None
    c1: float
    c2: float


def classify_discrete_smoothness(ladder: DifferenceLadder, c1: float | None = None,
                                 c2: float | None = None) -> SmoothnessClass:
    """Classify a ladder against the bound ``lip[k] < c2 / 2**(k - c1)``.

    ``absolute``: smallest K with ``lip[k] == 0`` for every computed k > K
    (reported as at least 0). ``almost``: smallest K with the bound holding
    for every computed k > K. ``k_order``: largest K with the bound holding
    for all k <= K. At least one computed k > K is required for the first
    two, so a ladder cannot qualify vacuously.

    Defaults: ``c1 = 0`` and ``c2 = max(lip[0], 1)``.
    """
    lip = ladder.lip
    if len(lip) < 2:
        raise InvalidArgument("classification needs a ladder of depth >= 2")
    c1 = 0.0 if c1 is None else float(c1)
    c2 = max(float(lip[0]), 1.0) if c2 is None else float(c2)
    if not c2 > 0:
        raise InvalidArgument("c2 must be positive")

    n = len(lip)
    for K in range(n - 1):
        if all(lip[k] == 0 for k in range(K + 1, n)):
            # a constant input (zero from lip[0] on) is reported as K = 0
            return SmoothnessClass("absolute", K, c1, c2)

    ok = [lip[k] < c2 / 2.0 ** (k - c1) for k in range(n)]
    for K in range(n - 1):
        if all(ok[K + 1:]):
            return SmoothnessClass("almost", K, c1, c2)
    if not ok[0]:
        return SmoothnessClass("unclassified", None, c1, c2)
    K = 0
    while K + 1 < n and ok[K + 1]:
        K += 1
    return SmoothnessClass("k_order", K, c1, c2)


# ---------------------------------------------------------------------------
# micro / macro split


@dataclass(frozen=True)
class Decomposition:
    macro: ScalarField
    micro: ScalarField
    stride: int


def _axis_samples(extent: int, stride: int) -> list[int]:
    idx = list(range(0, extent, stride))
    if idx[-1] != extent - 1:
        idx.append(extent - 1)
    return idx


def subsample_vertices(dom: Domain, stride: int) -> list[int]:
    """Every ``stride``-th vertex per axis, boundary vertices always included."""
    if stride < 1:
        raise InvalidArgument("stride must be a positive integer")
    if dom.kind == "path":
        extents = (dom.n_vertices,)
    elif dom.is_grid:
        extents = (dom.width, dom.height)
    else:
        raise InvalidArgument("decomposition needs a path or grid domain")
    if stride > 1 and any(stride >= e for e in extents):
        raise InvalidArgument(
            f"stride {stride} leaves fewer than two samples on an axis of extent {min(extents)}"
        )
    if dom.kind == "path":
        return _axis_samples(dom.n_vertices, stride)
    xs = _axis_samples(dom.width, stride)
    ys = _axis_samples(dom.height, stride)
    return [dom.vertex_at(x, y) for y in ys for x in xs]


def decompose_micro_macro(field: ScalarField, stride: int, strategy="mwk_mid") -> Decomposition:
    """Split ``field`` into a coarse reconstruction and its residual.

    ``macro`` is rebuilt from the stride subsample with the MWK mid
    function (tight Lipschitz constant) or a gradually varied fill;
    ``micro = field - macro``. For the gradually varied route the levels are
    the distinct subsample values, and an infeasible subsample raises
    :class:`~gvsmooth.errors.InfeasibleFillError`.
    """
    dom = field.domain
    verts = subsample_vertices(dom, stride)
    vals = np.asarray(field.values, dtype=float)
    if stride == 1:
        macro_vals = vals.copy()
    elif strategy == "mwk_mid":
        samples = SampleSet(tuple(verts), tuple(vals[verts]))
        macro_vals = mwk_mid_extension(samples, dom).values
    else:
        try:
            strategy = GvfStrategy(strategy)
        except ValueError:
            raise InvalidArgument(f"unknown decomposition strategy {strategy!r}") from None
        levels = LevelSequence(tuple(np.unique(vals[verts])))
        ranks = np.searchsorted(np.asarray(levels.levels), vals[verts]) + 1
        samples = SampleSet(tuple(verts), tuple(int(r) for r in ranks))
        macro_vals = gvf_fill(samples, dom, levels, strategy).to_real(levels).values
    micro_vals = vals - macro_vals
    return Decomposition(ScalarField(dom, macro_vals), ScalarField(dom, micro_vals), stride)
