"""Scaling experiments: eigenvalue counting, plunge growth, and the
density-autocorrelation integrals that drive the large-``r`` analysis.

A scaling run dilates one region through a list of scales, assembles and
diagonalizes the operator at each, and records the counting statistics.  The
time step is frozen across scales (auto-chosen from the largest one) so the
discretization error stays comparable and fits measure geometry, not the grid.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy.integrate
import scipy.special

from .errors import CoverageError, DomainError, NormalizationError, NumericalError
from .grids import SampleGrid
from .operators import assemble, eigendecompose
from .regions import Rect, Region, region_label
from .windows import Window

__all__ = [
    "ScalingRow",
    "ScalingReport",
    "auto_grid",
    "scaling_experiment",
    "plunge_fit",
    "hs_error_rate",
    "GaussianDensity",
    "CustomDensity",
    "SELF_DUAL_SIGMA",
    "standard_density",
    "autocorr_integral",
    "decay_condition_check",
    "decay_condition_margins",
]

#: dense eigensolves beyond this order are a design non-goal
_N_CAP = 2048


def _max_workers(requested: int | None, n_jobs: int) -> int:
    cap = os.environ.get("TFC_THREADS")
    limit = int(cap) if cap else (os.cpu_count() or 1)
    if requested is not None:
        limit = min(limit, requested)
    return max(1, min(limit, n_jobs))


def _halfwidths(region: Region) -> tuple[float, float]:
    t_lo, t_hi, s_lo, s_hi = region.bounding_box()
    return max(abs(t_lo), abs(t_hi)), max(abs(s_lo), abs(s_hi))


def auto_grid(
    window: Window,
    region: Region,
    *,
    dt: float | None = None,
    margin: float = 1.0,
) -> SampleGrid:
    """Sample grid sized for one window/region pair.

    The time step resolves the largest modulation in play (region frequency
    extent plus window bandwidth, half-cell slack); the half-width covers the
    region's time extent plus the window tail plus ``margin``.  ``n`` is odd
    so 0 is a sample.  Orders beyond 2048 raise CoverageError -- dense
    eigensolves past that are out of scope, coarsen or shrink instead.
    """
    t_half, s_half = _halfwidths(region)
    if dt is None:
        dt = 0.5 / (s_half + window.bandwidth_radius + 0.5)
    half_width = t_half + window.essential_radius + margin
    n = int(math.ceil(2.0 * half_width / dt)) + 1
    if n % 2 == 0:
        n += 1
    if n > _N_CAP:
        raise CoverageError(
            f"auto grid wants n={n} > {_N_CAP} (dt={dt:.4g}, half-width "
            f"{half_width:.4g}); coarsen dt or shrink the region"
        )
    if 2.0 * s_half >= 1.0 / dt:
        raise CoverageError(
            f"region frequency extent {s_half:.4g} exceeds the band of dt={dt:.4g}"
        )
    return SampleGrid(n, dt)


@dataclass(frozen=True, eq=False)
class ScalingRow:
    """One scale's worth of spectral statistics."""

    r: float
    area: float  # analytic area of the dilated region
    raster_area: float
    trace: float
    sum_sq: float
    n_lambda: int
    n_plunge: int
    eigenvalues: np.ndarray
    grid_n: int


@dataclass(frozen=True, eq=False)
class ScalingReport:
    window_label: str
    region_label: str
    lam: float
    plunge_band: tuple[float, float]
    rows: tuple[ScalingRow, ...]  # sorted by r


def scaling_experiment(
    window: Window,
    region: Region,
    scales,
    lam: float = 0.5,
    *,
    plunge_band: tuple[float, float] = (0.1, 0.9),
    dt: float | None = None,
    margin: float = 1.0,
    max_workers: int | None = None,
) -> ScalingReport:
    """Assemble and diagonalize across dilations, collecting counting data.

    ``window`` is a prototype; each scale rebuilds the same family on its own
    auto-sized grid (fixed dt).  Scales run in a thread pool (the heavy lifting
    is in BLAS which drops the GIL); ``TFC_THREADS`` caps the pool.  Coverage
    failures surface per scale, tagged with the offending ``r``.
    """
    scales = sorted(float(r) for r in scales)
    if not scales:
        raise DomainError("need at least one scale")
    if any(r <= 0 for r in scales):
        raise DomainError(f"scales must be positive, got {scales}")
    if not 0.0 < lam < 1.0:
        raise DomainError(f"lam must be in (0, 1), got {lam}")
    lo, hi = plunge_band
    if not 0.0 < lo < hi < 1.0:
        raise DomainError(f"plunge band must satisfy 0 < lo < hi < 1, got {plunge_band}")

    if dt is None:
        dt = auto_grid(window, region.scale(scales[-1]), margin=margin).dt

    def run(r: float) -> ScalingRow:
        region_r = region.scale(r)
        try:
            grid_r = auto_grid(window, region_r, dt=dt, margin=margin)
            window_r = window.rebuild(grid_r)
            op = assemble(window_r, region_r)
        except CoverageError as exc:
            raise CoverageError(f"scale r={r:g}: {exc}") from exc
        spectrum = eigendecompose(op)
        clamped = spectrum.clamped
        return ScalingRow(
            r=r,
            area=region_r.area(),
            raster_area=op.raster.area,
            trace=op.trace,
            sum_sq=float(np.sum(spectrum.eigenvalues**2)),
            n_lambda=int(np.sum(clamped >= lam)),
            n_plunge=int(np.sum((clamped >= lo) & (clamped <= hi))),
            eigenvalues=spectrum.eigenvalues,
            grid_n=grid_r.n,
        )

    with ThreadPoolExecutor(_max_workers(max_workers, len(scales))) as pool:
        rows = tuple(pool.map(run, scales))
    return ScalingReport(window.label, region_label(region), lam, (lo, hi), rows)


def _fit_loglog(xs: np.ndarray, ys: np.ndarray) -> tuple[float, float, float]:
    """OLS fit of log y against log x; returns (slope, intercept, r2)."""
    lx = np.log(xs)
    ly = np.log(ys)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_res = float(np.sum(resid**2))
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    if ss_tot < 1e-30:
        r2 = 1.0 if ss_res < 1e-30 else 0.0
    else:
        r2 = 1.0 - ss_res / ss_tot
    return float(slope), float(intercept), r2


def plunge_fit(report: ScalingReport, lam: float, mu: float) -> dict:
    """Log-log fit of the plunge count against scale.

    Counts eigenvalues in ``[lam, mu]`` per row from the stored spectra; rows
    with fewer than 2 such eigenvalues are dropped (single-eigenvalue counts
    are discretization noise).  Needs >= 3 scales and >= 2 usable rows, else
    DomainError -- a one-point fit would be fiction.
    """
    if not 0.0 < lam < mu < 1.0:
        raise DomainError(f"need 0 < lam < mu < 1, got lam={lam}, mu={mu}")
    if len(report.rows) < 3:
        raise DomainError(f"plunge fit needs >= 3 scales, got {len(report.rows)}")
    rs, counts = [], []
    for row in report.rows:
        clamped = np.clip(row.eigenvalues, 0.0, 1.0)
        c = int(np.sum((clamped >= lam) & (clamped <= mu)))
        if c >= 2:
            rs.append(row.r)
            counts.append(c)
    if len(rs) < 2:
        raise DomainError("plunge fit underdetermined: fewer than 2 usable rows")
    slope, intercept, r2 = _fit_loglog(np.array(rs), np.array(counts, dtype=float))
    return {"slope": slope, "intercept": intercept, "r2": r2, "rows_used": len(rs)}


def hs_error_rate(
    window: Window,
    region: Region,
    scales,
    *,
    report: ScalingReport | None = None,
    max_workers: int | None = None,
) -> dict:
    """Growth rate of the plunge deficit ``trace - sum lambda^2``.

    The deficit is the Hilbert-Schmidt shortfall concentrated along the
    region's boundary; its absolute size should grow like ``r`` (area grows
    r^2, relative deficit shrinks like 1/r).  Returns the fitted log-log slope.
    An existing report for the same window/region can be passed to skip the
    recompute.
    """
    if report is None:
        scales = list(scales)
        if len(scales) < 3:
            raise DomainError("hs_error_rate needs >= 3 scales")
        report = scaling_experiment(window, region, scales, max_workers=max_workers)
    elif len(report.rows) < 3:
        raise DomainError("hs_error_rate needs >= 3 scales")
    rs, deficits = [], []
    for row in report.rows:
        d = row.trace - row.sum_sq
        if d > 1e-12 * max(1.0, row.trace):
            rs.append(row.r)
            deficits.append(d)
    if len(rs) < 2:
        return {"rate": float("nan"), "r2": float("nan"), "rows_used": 0,
                "flag": "degenerate"}
    slope, _, r2 = _fit_loglog(np.array(rs), np.array(deficits))
    return {"rate": slope, "r2": r2, "rows_used": len(rs), "flag": None}


# ---------------------------------------------------------------------------
# densities and the Lemma-style integrals


@dataclass(frozen=True)
class GaussianDensity:
    """Centered isotropic Gaussian probability density on the plane.

    ``amplitude`` rescales the total mass away from 1 -- useful only for
    exercising the normalization guard.
    """

    sigma: float = 1.0
    amplitude: float = 1.0

    def __post_init__(self) -> None:
        if not self.sigma > 0:
            raise DomainError(f"sigma must be positive, got {self.sigma}")

    def __call__(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        s2 = self.sigma**2
        return self.amplitude / (2.0 * math.pi * s2) * np.exp(-(x * x + y * y) / (2.0 * s2))

    @property
    def extent(self) -> float:
        """Radius holding all but ~1e-14 of the mass."""
        return 8.5 * self.sigma

    def mass_on_rect(self, x_lo, x_hi, y_lo, y_hi):
        """Exact integral over an axis-aligned rectangle (product of erfs)."""
        root2 = math.sqrt(2.0) * self.sigma

        def cdf(z):
            return 0.5 * (1.0 + scipy.special.erf(np.asarray(z) / root2))

        return self.amplitude * (cdf(x_hi) - cdf(x_lo)) * (cdf(y_hi) - cdf(y_lo))


#: Width at which GaussianDensity equals exp(-pi (x^2+y^2)) -- the spectrogram
#: of the unit Gaussian window, and the reference density for the scaling
#: experiments.  (2 pi sigma^2 = 1.)
SELF_DUAL_SIGMA = 1.0 / math.sqrt(2.0 * math.pi)


def standard_density() -> GaussianDensity:
    """The self-dual Gaussian density exp(-pi |u|^2), mass exactly 1."""
    return GaussianDensity(sigma=SELF_DUAL_SIGMA)


@dataclass(frozen=True, eq=False)
class CustomDensity:
    """Wrap a plain callable density with an extent hint.

    ``extent`` should cover the bulk of the mass; it splits the normalization
    quadrature and bounds the inner-integral sampling in autocorr_integral,
    so heavy tails beyond it are the caller's responsibility.
    """

    fn: object
    extent: float

    def __call__(self, x, y):
        return np.asarray(self.fn(np.asarray(x, dtype=float), np.asarray(y, dtype=float)))


_N_THETA = 64
_THETAS = 2.0 * math.pi * np.arange(_N_THETA) / _N_THETA
_COS = np.cos(_THETAS)
_SIN = np.sin(_THETAS)


def _ring_mean(f, rho: float) -> float:
    return float(np.mean(f(rho * _COS, rho * _SIN)))


def _disc_mass(f, radius: float) -> float:
    """Integral of ``f`` over the centered disc, by polar quadrature.

    The angular trapezoid rule is spectrally accurate for smooth densities;
    the radial integral goes to adaptive quadrature.
    """
    val, _ = scipy.integrate.quad(
        lambda rho: rho * _ring_mean(f, rho), 0.0, radius, limit=200
    )
    return 2.0 * math.pi * val


def _total_mass(f) -> float:
    extent = float(getattr(f, "extent", 10.0))
    inner, _ = scipy.integrate.quad(
        lambda rho: rho * _ring_mean(f, rho), 0.0, extent, limit=200
    )
    outer, _ = scipy.integrate.quad(
        lambda rho: rho * _ring_mean(f, rho), extent, np.inf, limit=200
    )
    return 2.0 * math.pi * (inner + outer)


def _check_density(f) -> None:
    mass = _total_mass(f)
    if not abs(mass - 1.0) <= 1e-6:
        raise NormalizationError(f"density mass {mass!r} is not 1 within 1e-6")


def autocorr_integral(
    f,
    q: Region,
    r: float,
    *,
    eta_per_axis: int = 128,
    u_per_axis: int = 96,
) -> float:
    """``r^-2`` times the double integral of ``f(x - y)`` over ``rQ x rQ``.

    Computed in the substituted form: the outer variable runs over ``Q`` on a
    midpoint lattice, the inner integral of ``f`` over ``r(Q - eta)`` is exact
    (erf products) for rectangles with analytic densities, else a sampled sum
    over the density's support.  The value can never exceed ``area(Q)`` since
    each inner mass is at most the density's total.
    """
    if not r > 0:
        raise DomainError(f"scale r must be positive, got {r}")
    _check_density(f)
    area = q.area()
    if area == 0.0:
        return 0.0

    t_lo, t_hi, s_lo, s_hi = q.bounding_box()
    hx = (t_hi - t_lo) / eta_per_axis
    hy = (s_hi - s_lo) / eta_per_axis
    eta_x = t_lo + (np.arange(eta_per_axis) + 0.5) * hx
    eta_y = s_lo + (np.arange(eta_per_axis) + 0.5) * hy

    if isinstance(q, Rect) and hasattr(f, "mass_on_rect"):
        masses = f.mass_on_rect(
            r * (t_lo - eta_x)[:, None],
            r * (t_hi - eta_x)[:, None],
            r * (s_lo - eta_y)[None, :],
            r * (s_hi - eta_y)[None, :],
        )
        value = float(hx * hy * masses.sum())
        bound = area
    else:
        extent = float(getattr(f, "extent", 10.0))
        h_u = 2.0 * extent / u_per_axis
        u = -extent + (np.arange(u_per_axis) + 0.5) * h_u
        uu, vv = np.meshgrid(u, u, indexing="ij")
        f_vals = (f(uu, vv) * h_u * h_u).ravel()
        if np.min(f_vals) < -1e-12:
            raise DomainError("density takes negative values")
        keep = f_vals > 1e-18 * max(f_vals.max(), 1e-300)
        du_x = (uu.ravel()[keep]) / r
        du_y = (vv.ravel()[keep]) / r
        f_keep = f_vals[keep]

        ex, ey = np.meshgrid(eta_x, eta_y, indexing="ij")
        centers = np.column_stack([ex.ravel(), ey.ravel()])
        inside_q = q.contains(centers[:, 0], centers[:, 1])
        centers = centers[inside_q]
        total = 0.0
        for start in range(0, len(centers), 128):
            batch = centers[start : start + 128]
            px = batch[:, 0][:, None] + du_x[None, :]
            py = batch[:, 1][:, None] + du_y[None, :]
            total += float(np.sum(q.contains(px, py).astype(float) @ f_keep))
        value = hx * hy * total
        bound = max(area, float(np.sum(inside_q)) * hx * hy)

    if value > bound * (1.0 + 1e-6):
        raise NumericalError(
            f"autocorr value {value!r} exceeds the area bound {bound!r}"
        )
    return value


def decay_condition_margins(f, p: float, C: float, radii) -> list[dict]:
    """Per-radius tail-versus-bound ledger for the polynomial decay condition.

    Each entry reports ``tail = |1 - mass(B_r)|``, the bound ``C / r^p``, and
    whether the condition holds there.
    """
    _check_density(f)
    out = []
    for r in radii:
        r = float(r)
        if r <= 0:
            raise DomainError(f"radii must be positive, got {r}")
        tail = abs(1.0 - _disc_mass(f, r))
        bound = C / r**p
        out.append({"r": r, "tail": tail, "bound": bound, "ok": tail <= bound + 1e-12})
    return out


def decay_condition_check(f, p: float, C: float, radii) -> bool:
    """True iff ``|1 - integral of f over B_r| <= C / r^p`` at every radius."""
    return all(row["ok"] for row in decay_condition_margins(f, p, C, radii))
