"""Steady-state linear response of the ladder medium to a weak probe.

The central object is the complex susceptibility

    chi(w) = -(N |d_ab|^2 / (hbar eps0))
             / [ (w - delta1 + i gamma_ab)
                 - |Omega2|^2 / (w - delta1 + delta2 + i gamma_bc) ]

where w is the probe spectral offset from its carrier.  With this sign
convention Im chi > 0 means absorption.  The transparency window sits at
two-photon resonance, w = delta1 - delta2.

Derivatives are taken analytically (quotient rule on the rational
response); a finite-difference fallback exists for cross-checks only.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .constants import CONST
from .medium import FieldDrive, LadderSystem


class EvaluationError(ArithmeticError):
    """Raised when the response is evaluated exactly on a pole."""


def _as_grid(omega):
    w = np.asarray(omega, dtype=float)
    return w.ndim == 0, np.atleast_1d(w)


def chi(omega, system: LadderSystem, drive: FieldDrive):
    """Complex susceptibility at probe offset ``omega`` (rad/s).

    Accepts a scalar or an array.  When gamma_bc = 0 the value exactly at
    two-photon resonance is taken as its analytic limit (0 for a nonzero
    control field).  An exact pole, reachable only with all dampings zero,
    raises :class:`EvaluationError` rather than returning an infinity.
    """
    scalar, w = _as_grid(omega)
    pref = system.chi_prefactor
    om2_sq = abs(drive.Omega2) ** 2
    one = w - drive.delta1 + 1j * system.gamma_ab
    inner = w - drive.delta1 + drive.delta2 + 1j * system.gamma_bc

    out = np.zeros(w.shape, dtype=complex)
    if om2_sq == 0.0:
        if np.any(one == 0):
            raise EvaluationError("probe exactly on an undamped resonance")
        out = -pref / one
    else:
        ok = inner != 0  # inner == 0 only when gamma_bc = 0; limit is chi = 0
        denom = one[ok] - om2_sq / inner[ok]
        if np.any(denom == 0):
            raise EvaluationError("susceptibility evaluated exactly on a pole")
        out[ok] = -pref / denom
    return complex(out[0]) if scalar else out


def chi_derivative(omega, system: LadderSystem, drive: FieldDrive):
    """Analytic d chi / d omega at probe offset ``omega`` (units s)."""
    scalar, w = _as_grid(omega)
    pref = system.chi_prefactor
    om2_sq = abs(drive.Omega2) ** 2
    one = w - drive.delta1 + 1j * system.gamma_ab
    inner = w - drive.delta1 + drive.delta2 + 1j * system.gamma_bc

    out = np.zeros(w.shape, dtype=complex)
    if om2_sq == 0.0:
        if np.any(one == 0):
            raise EvaluationError("probe exactly on an undamped resonance")
        out = pref / one**2
    else:
        ok = inner != 0
        # limit of D'/D^2 as inner -> 0 with Omega2 != 0
        out[~ok] = pref / om2_sq
        denom = one[ok] - om2_sq / inner[ok]
        if np.any(denom == 0):
            raise EvaluationError("susceptibility derivative evaluated on a pole")
        dden = 1.0 + om2_sq / inner[ok] ** 2
        out[ok] = pref * dden / denom**2
    return complex(out[0]) if scalar else out


def group_index(omega, system: LadderSystem, drive: FieldDrive):
    """Group index n_g = 1 + (omega1/2) d Re(chi)/d omega."""
    return 1.0 + 0.5 * drive.omega1 * np.real(chi_derivative(omega, system, drive))


def group_index_fd(omega, system: LadderSystem, drive: FieldDrive, rel_step: float = 1e-6):
    """Finite-difference group index, for cross-checking the analytic path."""
    scale = max(system.gamma_ab, system.gamma_bc, abs(drive.Omega2), 1.0)
    h = rel_step * scale
    dre = (np.real(chi(np.asarray(omega) + h, system, drive))
           - np.real(chi(np.asarray(omega) - h, system, drive))) / (2.0 * h)
    return 1.0 + 0.5 * drive.omega1 * dre


def group_velocity(omega, system: LadderSystem, drive: FieldDrive):
    """Group velocity c / (1 + Re(chi)/2 + (omega1/2) d Re(chi)/d omega).

    Negative values (anomalous dispersion) are returned as-is.
    """
    denom = (1.0 + 0.5 * np.real(chi(omega, system, drive))
             + 0.5 * drive.omega1 * np.real(chi_derivative(omega, system, drive)))
    if np.any(np.asarray(denom) == 0):
        raise EvaluationError("group velocity denominator vanished")
    return CONST.c / denom


@dataclass
class SpectrumTable:
    """Sampled (omega, chi', chi'', n_g) records plus the producing config."""

    omega_grid: np.ndarray
    chi_re: np.ndarray
    chi_im: np.ndarray
    n_g: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        n = len(self.omega_grid)
        if not (len(self.chi_re) == len(self.chi_im) == len(self.n_g) == n):
            raise ValueError("spectrum arrays must share one length")
        if n > 1 and not np.all(np.diff(self.omega_grid) > 0):
            raise ValueError("omega grid must be strictly increasing")
        if n and np.max(np.abs(self.chi_im)) > 0:
            floor = -1e-12 * np.max(np.abs(self.chi_im))
            if np.min(self.chi_im) < floor:
                raise ValueError("spectrum shows spurious gain (Im chi < 0)")


def compute_spectrum(system: LadderSystem, drive: FieldDrive, omega_grid) -> SpectrumTable:
    """Evaluate chi and n_g over a strictly increasing offset grid."""
    w = np.asarray(omega_grid, dtype=float)
    x = chi(w, system, drive)
    return SpectrumTable(
        omega_grid=w,
        chi_re=x.real,
        chi_im=x.imag,
        n_g=np.asarray(group_index(w, system, drive)),
        metadata={**system.params_dict(), **drive.params_dict()},
    )


@dataclass(frozen=True)
class WindowMetrics:
    """Transparency-window figures of merit at two-photon resonance."""

    center_abs: float       # Im chi at the window center
    width: float            # span where Im chi < half of the bare peak, rad/s
    ng_center: float        # group index at the center
    slope: float            # d Re(chi)/d omega at the center, s


def _scan_span(system: LadderSystem, drive: FieldDrive) -> float:
    return max(10.0 * system.gamma_ab, 4.0 * abs(drive.Omega2))


def window_metrics(system: LadderSystem, drive: FieldDrive, scan_points: int = 4001) -> WindowMetrics:
    """Locate the transparency window around two-photon resonance.

    The window edges are where Im chi crosses half of the bare (control
    off) Lorentzian peak N|d|^2/(hbar eps0 gamma_ab); the crossing is
    refined by root bracketing after a coarse scan.  With the control off,
    or while the dip floor still sits above the half level, the window is
    reported absent (width 0).  If the absorption never comes back up to
    the half level inside the scan span the width is capped at the span.
    """
    center = drive.delta1 - drive.delta2
    bare_peak = system.chi_prefactor / system.gamma_ab
    half = 0.5 * bare_peak
    center_abs = float(np.imag(chi(center, system, drive)))
    ng_center = float(group_index(center, system, drive))
    slope = float(np.real(chi_derivative(center, system, drive)))

    if abs(drive.Omega2) == 0.0 or center_abs >= half:
        return WindowMetrics(center_abs=center_abs, width=0.0,
                             ng_center=ng_center, slope=slope)

    span = _scan_span(system, drive)

    def half_edge(sign: float) -> float:
        grid = center + sign * np.linspace(0.0, span, scan_points)
        vals = np.imag(chi(grid, system, drive)) - half
        above = np.nonzero(vals > 0)[0]
        if len(above) == 0:
            return span
        j = above[0]
        f = lambda w: float(np.imag(chi(w, system, drive))) - half
        lo, hi = sorted((grid[j - 1], grid[j]))
        return abs(brentq(f, lo, hi, xtol=1e-6 * max(span, 1.0)) - center)

    width = half_edge(+1.0) + half_edge(-1.0)
    return WindowMetrics(center_abs=center_abs, width=width,
                         ng_center=ng_center, slope=slope)


def dressed_peaks(system: LadderSystem, drive: FieldDrive) -> tuple[float, float]:
    """Predicted absorption-maximum offsets for a resonant control field.

    Valid only at control resonance (delta2 = 0), where the dressed pair
    splits the bare line by +-|Omega2| about the probe resonance.
    """
    if drive.delta2 != 0.0:
        raise ValueError("dressed-state prediction requires delta2 = 0")
    om2 = abs(drive.Omega2)
    return (drive.delta1 - om2, drive.delta1 + om2)


def locate_absorption_peaks(system: LadderSystem, drive: FieldDrive,
                            scan_points: int = 4001) -> tuple[float, ...]:
    """Numerically locate the maxima of Im chi on a refined grid search.

    Returns the peak offsets sorted ascending; one entry when the doublet
    has merged into a single line.
    """
    center = drive.delta1 - drive.delta2
    span = _scan_span(system, drive)
    grid = np.linspace(center - span, center + span, scan_points)
    vals = np.imag(chi(grid, system, drive))
    interior = np.nonzero((vals[1:-1] > vals[:-2]) & (vals[1:-1] >= vals[2:]))[0] + 1

    peaks = []
    for j in interior:
        res = minimize_scalar(
            lambda w: -float(np.imag(chi(w, system, drive))),
            bounds=(grid[j - 1], grid[j + 1]),
            method="bounded",
            options={"xatol": 1e-8 * span},
        )
        peaks.append(float(res.x))
    if not peaks:  # monotone edges only; fall back to the grid argmax
        peaks = [float(grid[np.argmax(vals)])]
    peaks.sort()
    # merge near-duplicates from adjacent coarse cells
    merged = [peaks[0]]
    for p in peaks[1:]:
        if abs(p - merged[-1]) > 1e-6 * span:
            merged.append(p)
    return tuple(merged)


@dataclass
class ControlSweep:
    """Window-center response across a control-field grid."""

    omega2_grid: np.ndarray
    ng_center: np.ndarray
    chi_im_center: np.ndarray
    argmax_omega2: float
    ng_max: float


def sweep_control(system: LadderSystem, drive: FieldDrive, omega2_grid,
                  threads: int = 1) -> ControlSweep:
    """Evaluate n_g and Im chi at the window center across an Omega2 grid.

    Grid points are distributed over a thread pool when ``threads`` > 1;
    results are keyed by grid index so the output ordering is
    deterministic regardless of scheduling.
    """
    om2 = np.asarray(omega2_grid, dtype=float)
    if om2.size == 0:
        raise ValueError("omega2 grid must be non-empty")
    if om2.size > 1 and not np.all(np.diff(om2) > 0):
        raise ValueError("omega2 grid must be strictly increasing")

    center = drive.delta1 - drive.delta2

    def at(value: float) -> tuple[float, float]:
        d = drive.with_control(value)
        return (float(group_index(center, system, d)),
                float(np.imag(chi(center, system, d))))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(at, om2))
    else:
        results = [at(v) for v in om2]

    ng = np.array([r[0] for r in results])
    ab = np.array([r[1] for r in results])
    i = int(np.argmax(ng))
    return ControlSweep(
        omega2_grid=om2,
        ng_center=ng,
        chi_im_center=ab,
        argmax_omega2=float(om2[i]),
        ng_max=float(ng[i]),
    )
