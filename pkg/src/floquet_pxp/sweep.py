"""Drive-parameter sweeps, revival-law fits and crest tracking."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.special
from scipy.signal import find_peaks, peak_widths

from .basis import enumerate_basis
from .exceptions import FitError, FloquetPXPError
from .floquet import DEFAULT_ETA, decompose, dominant_spacing, overlaps, revival_index
from .operators import DriveParams
from .propagation import DEFAULT_STEPS, NORM_DRIFT_LIMIT, batched_fidelities, one_period_propagator
from .states import parse_state
from .validation import check_1d

J0_ZEROS = (2.404825557695773, 5.520078110286311)
FIT_H_MIN = 1.0
FIT_RATIO_MAX = 2.2048
REGRESSOR_GUARD = 1e-3
MODELS = ("with_offset", "proportional")


def bessel_j0(x):
    """Bessel function of the first kind of order zero."""
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("bessel_j0 needs finite arguments")
    out = scipy.special.j0(x)
    return float(out) if out.ndim == 0 else out


def _map_ordered(func, items, n_jobs: int):
    """``[func(i) for i in items]`` on up to ``n_jobs`` threads, in input order."""
    items = list(items)
    if n_jobs <= 1 or len(items) <= 1:
        return [func(i) for i in items]
    with ThreadPoolExecutor(max_workers=n_jobs) as pool:
        return list(pool.map(func, items))


@dataclass(frozen=True)
class SweepGrid:
    L: int
    h: tuple[float, ...]
    omega_d: tuple[float, ...]
    n: tuple[int, ...]
    state: str = "neel"
    steps: int = DEFAULT_STEPS

    def __post_init__(self):
        h = check_1d(self.h, "h", ascending=True)
        w = check_1d(self.omega_d, "omega_d", ascending=True)
        if np.any(h < 0):
            raise ValueError("h values must be non-negative")
        if np.any(w <= 0):
            raise ValueError("omega_d values must be positive")
        n = [int(k) for k in self.n]
        if not n or min(n) < 0:
            raise ValueError("n must be a non-empty list of non-negative integers")
        object.__setattr__(self, "h", tuple(h.tolist()))
        object.__setattr__(self, "omega_d", tuple(w.tolist()))
        object.__setattr__(self, "n", tuple(n))


@dataclass(frozen=True, eq=False)
class SweepResult:
    """Fidelities ``F(nT)`` on a grid, indexed ``[omega_d, h, n]``.

    ``flagged`` marks cells whose integration drifted beyond tolerance; their
    fidelities are NaN.
    """

    grid: SweepGrid
    fidelity: np.ndarray
    flagged: np.ndarray
    max_norm_drift: float = 0.0

    def rows(self):
        """``(L, state, omega_d, h, n, fidelity)`` in grid order."""
        g = self.grid
        for a, w in enumerate(g.omega_d):
            for b, h in enumerate(g.h):
                for c, n in enumerate(g.n):
                    yield g.L, g.state, w, h, n, float(self.fidelity[a, b, c])

    def slice(self, omega_d: float, n: int) -> np.ndarray:
        a = self.grid.omega_d.index(omega_d)
        return self.fidelity[a, :, self.grid.n.index(n)]


def fidelity_sweep(grid: SweepGrid, n_jobs: int = 1) -> SweepResult:
    """Stroboscopic fidelity of ``grid.state`` for every ``(omega_d, h, n)``.

    Each drive frequency is one task: all of its amplitudes are evolved
    together because they share the static kernel.
    """
    basis = enumerate_basis(grid.L)
    psi0 = parse_state(grid.state, basis).amplitudes
    n_max = max(grid.n)
    cols = list(grid.n)

    def run(w):
        F, drift = batched_fidelities(grid.L, psi0, grid.h, w, n_max, grid.steps)
        return F[:, cols], drift

    results = _map_ordered(run, grid.omega_d, n_jobs)
    fid = np.stack([r[0] for r in results])
    drift = np.stack([r[1] for r in results])
    flagged = drift > NORM_DRIFT_LIMIT
    fid[flagged] = np.nan
    return SweepResult(grid, fid, flagged, float(drift.max()))


def nrev_point(L: int, h: float, omega_d: float, eta: float = DEFAULT_ETA, state: str = "neel",
               steps: int = DEFAULT_STEPS) -> float:
    """Revival index ``omega_d / delta_eps`` at one drive setting."""
    basis = enumerate_basis(L)
    U = one_period_propagator(basis, DriveParams(h, omega_d), steps)
    profile = overlaps(decompose(U), parse_state(state, basis))
    return revival_index(dominant_spacing(profile, eta), omega_d)


def nrev_profile(h_values, omega_d: float, L: int, eta: float = DEFAULT_ETA, state: str = "neel",
                 steps: int = DEFAULT_STEPS, n_jobs: int = 1) -> list[tuple[float, float]]:
    """``(h, n_rev)`` pairs; points where no revival scale is found carry NaN."""
    h_values = check_1d(h_values, "h")

    def run(h):
        try:
            return float(h), nrev_point(L, float(h), omega_d, eta, state, steps)
        except FloquetPXPError:
            return float(h), math.nan

    return _map_ordered(run, h_values, n_jobs)


@dataclass(frozen=True)
class FitResult:
    """Parameters of ``n_rev = omega_d / (gamma J0(h/omega_d)) + alpha``.

    For the ``proportional`` model ``gamma`` holds the proportionality
    factor and ``alpha`` is fixed to zero.
    """

    model: str
    gamma: float
    alpha: float
    gamma_err: float
    alpha_err: float
    residual_norm: float
    omega_d: float
    window: tuple[float, float]
    n_points: int
    h_used: tuple[float, ...] = field(default=(), repr=False)

    def predict(self, h):
        x = self.omega_d / bessel_j0(np.asarray(h, dtype=float) / self.omega_d)
        return x / self.gamma + self.alpha

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "omega_d": self.omega_d,
            "gamma": self.gamma,
            "gamma_err": self.gamma_err,
            "alpha": self.alpha,
            "alpha_err": self.alpha_err,
            "residual_norm": self.residual_norm,
            "window": list(self.window),
            "n_points": self.n_points,
        }


def default_window(omega_d: float) -> tuple[float, float]:
    return FIT_H_MIN, FIT_RATIO_MAX * omega_d


def fit_nrev(points, omega_d: float, model: str = "with_offset", window=None) -> FitResult:
    """Least-squares fit of the revival law in the regressor ``x = omega_d / J0(h / omega_d)``.

    The law is linear in ``(1/gamma, alpha)``, so the fit is an ordinary
    linear least-squares solve. Standard errors come from the residual
    variance ``RSS / (N - p)``; the error of ``gamma`` follows from that of
    ``1/gamma`` to first order.

    Raises:
        FitError: fewer usable points than parameters + 1, or a singular design.
    """
    if model not in MODELS:
        raise ValueError(f"model must be one of {MODELS}, got {model!r}")
    window = default_window(omega_d) if window is None else tuple(map(float, window))
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    h, n_rev = pts[:, 0], pts[:, 1]
    j0 = bessel_j0(h / omega_d)
    keep = (
        (h >= window[0]) & (h <= window[1]) & np.isfinite(n_rev)
        & (np.abs(j0) >= REGRESSOR_GUARD)
    )
    h, n_rev, j0 = h[keep], n_rev[keep], j0[keep]
    n_par = 2 if model == "with_offset" else 1
    if h.size < max(3, n_par + 1):
        raise FitError(f"need at least 3 usable points, got {h.size}")
    x = omega_d / j0
    A = np.column_stack([x, np.ones_like(x)]) if n_par == 2 else x[:, None]
    gram = A.T @ A
    if np.linalg.cond(gram) > 1e14:
        raise FitError("singular design matrix")
    coef, *_ = np.linalg.lstsq(A, n_rev, rcond=None)
    resid = n_rev - A @ coef
    dof = h.size - n_par
    cov = (resid @ resid / dof) * np.linalg.inv(gram)
    slope = coef[0]
    if slope == 0:
        raise FitError("zero slope, gamma is undefined")
    gamma = 1.0 / slope
    gamma_err = math.sqrt(cov[0, 0]) / slope**2
    alpha, alpha_err = (coef[1], math.sqrt(cov[1, 1])) if n_par == 2 else (0.0, 0.0)
    return FitResult(
        model, float(gamma), float(alpha), float(gamma_err), float(alpha_err),
        float(np.linalg.norm(resid)), float(omega_d), window, int(h.size), tuple(h.tolist()),
    )


def min_revival_index(fit: FitResult, omega_d: float) -> float:
    """Revival index where ``J0 = 1``: ``omega_d / gamma + alpha``."""
    return omega_d / fit.gamma + fit.alpha


@dataclass(frozen=True)
class Peak:
    h: float
    height: float
    width: float
    index: int


def track_peaks(h, values, min_height: float = 0.1, min_separation: int = 2) -> list[Peak]:
    """Local maxima of a fidelity slice along ``h``.

    Peaks lower than ``min_height`` or closer than ``min_separation`` grid
    points to a taller one are dropped. ``width`` is the full width at half
    prominence, in units of ``h``.
    """
    h = check_1d(h, "h", ascending=True)
    f = np.asarray(values, dtype=float)
    if f.shape != h.shape:
        raise ValueError("h and values must have the same length")
    idx, _ = find_peaks(f, height=min_height, distance=max(1, int(min_separation)))
    if idx.size == 0:
        return []
    _, _, left, right = peak_widths(f, idx, rel_height=0.5)
    grid = np.arange(h.size)
    widths = np.interp(right, grid, h) - np.interp(left, grid, h)
    return [Peak(float(h[i]), float(f[i]), float(w), int(i)) for i, w in zip(idx, widths)]


def peak_signal(n_points: int, peaks: list[Peak]) -> np.ndarray:
    """Signal that is zero except for the peak heights at their grid indices."""
    out = np.zeros(n_points)
    for p in peaks:
        out[p.index] = p.height
    return out


def crest_trajectory(h, fidelity_by_n: dict[int, np.ndarray], h_max: float | None = None,
                     min_height: float = 0.1, min_separation: int = 2) -> dict[int, Peak | None]:
    """Tallest peak below ``h_max`` at every stroboscopic index.

    ``h_max`` keeps the slow-dynamics bump at the spectrum narrowing out of
    the crest that travels towards it.
    """
    h = check_1d(h, "h", ascending=True)
    out = {}
    for n, f in fidelity_by_n.items():
        peaks = [p for p in track_peaks(h, f, min_height, min_separation)
                 if h_max is None or p.h <= h_max]
        out[n] = max(peaks, key=lambda p: p.height) if peaks else None
    return out
