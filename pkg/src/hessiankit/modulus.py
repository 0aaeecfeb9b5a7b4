"""Moduli of continuity: estimation, concave majorants, scaling bounds, fits.

A modulus is represented by a sampled curve: knots 0 = t_0 < ... < t_K with
values w_i, w_0 = 0, w nondecreasing, interpolated piecewise linearly in
between.  The least concave majorant of such a curve is the upper concave
envelope of its knots, which is again piecewise linear and is computed
exactly by a monotone-chain hull scan.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, ExtrapolationError

PAIR_SUBSAMPLE_THRESHOLD = 20000
PAIR_BUDGET = 20_000_000


class ModulusCurve:
    """Piecewise-linear nondecreasing curve on [0, l] with value 0 at 0."""

    __slots__ = ("t", "w")

    def __init__(self, t, w):
        t = np.asarray(t, dtype=float)
        w = np.asarray(w, dtype=float)
        if t.ndim != 1 or t.shape != w.shape or t.size < 2:
            raise ArgumentError("curve needs matching 1-d knots with >= 2 points")
        if t[0] != 0.0 or w[0] != 0.0:
            raise ArgumentError("curve must start at (0, 0)")
        if np.any(np.diff(t) <= 0):
            raise ArgumentError("knot abscissae must be strictly increasing")
        if np.any(np.diff(w) < 0) or np.any(w < 0):
            raise ArgumentError("curve values must be nonnegative and nondecreasing")
        self.t = t
        self.w = w

    @property
    def length(self) -> float:
        return float(self.t[-1])

    def __call__(self, x):
        return np.interp(x, self.t, self.w)

    def __len__(self):
        return self.t.size

    def __eq__(self, other):
        return (
            isinstance(other, ModulusCurve)
            and self.t.shape == other.t.shape
            and bool(np.all(self.t == other.t))
            and bool(np.all(self.w == other.w))
        )

    def __repr__(self):
        return f"ModulusCurve({len(self)} knots on [0, {self.length!r}])"

    # -- serialization: 17 significant digits round-trip float64 exactly

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("t,w\n")
        for ti, wi in zip(self.t, self.w):
            buf.write(f"{ti:.17g},{wi:.17g}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "ModulusCurve":
        lines = [ln for ln in text.strip().splitlines() if ln]
        if not lines or lines[0].strip() != "t,w":
            raise ArgumentError("curve CSV must start with a 't,w' header")
        rows = [ln.split(",") for ln in lines[1:]]
        t = np.array([float(r[0]) for r in rows])
        w = np.array([float(r[1]) for r in rows])
        return cls(t, w)

    def to_json(self) -> str:
        return json.dumps({"t": self.t.tolist(), "w": self.w.tolist()})

    @classmethod
    def from_json(cls, text: str) -> "ModulusCurve":
        obj = json.loads(text)
        return cls(obj["t"], obj["w"])


def linear_curve(slope: float, length: float, knots: int = 257) -> ModulusCurve:
    """Exact sampled curve of t -> slope * t on [0, length]."""
    t = np.linspace(0.0, length, knots)
    return ModulusCurve(t, slope * t)


def sampled_curve(func, length: float, knots: int = 257) -> ModulusCurve:
    """Sample a nondecreasing function with f(0) = 0 onto a uniform grid."""
    t = np.linspace(0.0, length, knots)
    w = np.array([float(func(x)) for x in t])
    w[0] = 0.0
    return ModulusCurve(t, np.maximum.accumulate(w))


def estimate_modulus(
    points,
    values,
    bins: int | np.ndarray = 200,
    t_max: float | None = None,
    *,
    seed: int = 0,
    pair_threshold: int = PAIR_SUBSAMPLE_THRESHOLD,
    pair_budget: int = PAIR_BUDGET,
) -> ModulusCurve:
    """Empirical modulus of a sampled function.

    Forms pairwise (|x - y|, |v(x) - v(y)|), takes the supremum of the value
    gaps inside each distance bin on [0, t_max], then a running maximum to
    enforce monotonicity.  All pairs are used up to ``pair_threshold``
    points; beyond that a seeded random subset of ``pair_budget`` pairs.

    ``bins`` may be a count (linear bins) or an ascending array of positive
    bin right-edges, e.g. geometric edges when small separations matter.
    """
    pts = np.asarray(points, dtype=float)
    vals = np.asarray(values, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    n = pts.shape[0]
    if n < 2 or vals.shape != (n,):
        raise ArgumentError("need >= 2 points with one value per point")

    if np.isscalar(bins) or np.ndim(bins) == 0:
        k = int(bins)
        if k < 1:
            raise ArgumentError("bin count must be >= 1")
        if t_max is None:
            t_max = _diameter_estimate(pts)
        edges = np.linspace(0.0, float(t_max), k + 1)[1:]
    else:
        edges = np.asarray(bins, dtype=float)
        if edges.ndim != 1 or edges.size < 1 or edges[0] <= 0 or np.any(np.diff(edges) <= 0):
            raise ArgumentError("bin edges must be positive and increasing")
        if t_max is not None and abs(edges[-1] - t_max) > 1e-12 * max(1.0, t_max):
            raise ArgumentError("explicit edges must end at t_max")

    sup = np.zeros(edges.size)
    if n <= pair_threshold:
        # keeps the (block, n, d) difference intermediates under ~100 MB
        block = max(1, int(2e6 // max(n, 1)))
        for a in range(0, n - 1, block):
            b = min(a + block, n - 1)
            # row block against the tail; keeps memory at O(block * n * d)
            d2 = ((pts[a:b, None, :] - pts[None, a + 1 :, :]) ** 2).sum(-1)
            dv = np.abs(vals[a:b, None] - vals[None, a + 1 :])
            # mask out the lower triangle duplicated inside the block
            cols = np.arange(a + 1, n)
            mask = cols[None, :] > np.arange(a, b)[:, None]
            dist = np.sqrt(d2[mask])
            gaps = dv[mask]
            _accumulate(sup, edges, dist, gaps)
    else:
        rng = np.random.default_rng(seed)
        remaining = int(pair_budget)
        chunk = 2_000_000
        while remaining > 0:
            m = min(chunk, remaining)
            i = rng.integers(0, n, m)
            j = (i + 1 + rng.integers(0, n - 1, m)) % n
            dist = np.sqrt(((pts[i] - pts[j]) ** 2).sum(-1))
            gaps = np.abs(vals[i] - vals[j])
            _accumulate(sup, edges, dist, gaps)
            remaining -= m

    w = np.maximum.accumulate(sup)
    t = np.concatenate(([0.0], edges))
    return ModulusCurve(t, np.concatenate(([0.0], w)))


def _accumulate(sup, edges, dist, gaps):
    keep = dist <= edges[-1]
    idx = np.searchsorted(edges, dist[keep], side="left")
    np.maximum.at(sup, idx, gaps[keep])


def _diameter_estimate(pts) -> float:
    lo = pts.min(axis=0)
    hi = pts.max(axis=0)
    d = float(np.sqrt(((hi - lo) ** 2).sum()))
    if d <= 0:
        d = 1.0
    return d


def concave_majorant(curve: ModulusCurve) -> ModulusCurve:
    """Least concave majorant: the upper concave envelope of the knots.

    Monotone-chain scan over the knots in increasing t; a knot is dropped
    exactly when it lies strictly below the chord of its hull neighbours, so
    concave inputs (including collinear runs) come back unchanged and the
    operation is idempotent.
    """
    t = curve.t
    w = curve.w
    hull_t = [t[0]]
    hull_w = [w[0]]
    for i in range(1, t.size):
        while len(hull_t) >= 2:
            cross = (hull_t[-1] - hull_t[-2]) * (w[i] - hull_w[-2]) - (
                hull_w[-1] - hull_w[-2]
            ) * (t[i] - hull_t[-2])
            if cross > 0.0:  # middle knot strictly below the chord
                hull_t.pop()
                hull_w.pop()
            else:
                break
        hull_t.append(t[i])
        hull_w.append(w[i])
    return ModulusCurve(np.array(hull_t), np.array(hull_w))


@dataclass
class ScalingBound:
    """Values entering the majorant scaling bound at (eta, t)."""

    omega_scaled: float  # omega(eta t)
    majorant_scaled: float  # omega_bar(eta t)
    bound: float  # (1 + eta) omega(t)
    margin_lower: float  # omega_bar(eta t) - omega(eta t)
    margin_upper: float  # (1 + eta) omega(t) - omega_bar(eta t)


def scaling_bound_check(curve: ModulusCurve, eta: float, t: float) -> ScalingBound:
    """Evaluate omega(eta t) <= omega_bar(eta t) <= (1 + eta) omega(t).

    The upper inequality requires subadditivity of the underlying modulus;
    binned empirical curves may violate it mildly, which shows up as a
    negative ``margin_upper``.
    """
    if eta <= 0 or t <= 0:
        raise ArgumentError("eta and t must be positive")
    s = eta * t
    if s > curve.length * (1 + 1e-12) or t > curve.length * (1 + 1e-12):
        raise ExtrapolationError(
            f"eta*t={s} beyond curve domain [0, {curve.length}]"
        )
    if curve(t) <= 0.0:
        raise ArgumentError("scaling bound needs omega(t) > 0")
    bar = concave_majorant(curve)
    omega_s = float(curve(s))
    bar_s = float(bar(s))
    bound = (1.0 + eta) * float(curve(t))
    return ScalingBound(
        omega_scaled=omega_s,
        majorant_scaled=bar_s,
        bound=bound,
        margin_lower=bar_s - omega_s,
        margin_upper=bound - bar_s,
    )


@dataclass
class HolderFit:
    """Log-log least squares fit of a curve over a window."""

    exponent: float
    constant: float
    r_squared: float
    fit_window: tuple[float, float]
    knots_used: int


def holder_fit(curve: ModulusCurve, window: tuple[float, float]) -> HolderFit:
    """Fit w ~ constant * t^exponent over knots with t in window and w > 0."""
    t_min, t_max = window
    if not 0 < t_min < t_max:
        raise ArgumentError("window must satisfy 0 < t_min < t_max")
    mask = (curve.t >= t_min) & (curve.t <= t_max) & (curve.w > 0)
    if int(mask.sum()) < 5:
        raise ArgumentError(
            f"need >= 5 positive knots in window, found {int(mask.sum())}"
        )
    x = np.log(curve.t[mask])
    y = np.log(curve.w[mask])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - float((resid**2).sum()) / ss_tot if ss_tot > 0 else 1.0
    return HolderFit(
        exponent=float(slope),
        constant=float(np.exp(intercept)),
        r_squared=r2,
        fit_window=(float(t_min), float(t_max)),
        knots_used=int(mask.sum()),
    )
