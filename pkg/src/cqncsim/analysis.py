"""Cancellation-condition diagnostics, coupling optimization, and sub-SQL scans."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import DriveParams, SystemParams, chi_atom_gen, chi_mech, coupling_to_power
from .spectra import cqnc_psd_approx, sql_psd, standard_psd

#: default mismatch tolerances: coupling, damping, susceptibility (times 1/Q for the last)
COUPLING_TOL = 1e-6
DAMPING_TOL = 1e-6
SUSCEPTIBILITY_TOL_Q = 3.0  # tolerance is 3/Q


def default_frequency_grid(p: SystemParams, n_log: int = 2001, n_refine: int = 401):
    """Log grid over [1e-2, 1e2]*omega_m plus a linear refinement of the
    resonance, omega_m +- 10*gamma_m. Sorted ascending."""
    wide = p.omega_m * np.logspace(-2.0, 2.0, n_log)
    local = np.linspace(p.omega_m - 10.0 * p.gamma_m, p.omega_m + 10.0 * p.gamma_m, n_refine)
    return np.sort(np.concatenate([wide, local]))


@dataclass(frozen=True)
class CqncReport:
    """How far a parameter set is from the ideal noise-cancellation point."""

    coupling_mismatch: float        # |g - g_prime| / g
    damping_mismatch: float         # |Gamma - 2*gamma_m| / (2*gamma_m)
    susceptibility_residual: float  # sup |g^2 chi_m + g'^2 chi_d'| / (g^2 |chi_m|) on the grid
    ideal: bool


def cqnc_check(p: SystemParams, grid=None, exact_surrogate: bool = False) -> CqncReport:
    """Evaluate the three cancellation mismatch metrics on a frequency grid."""
    if p.g <= 0:
        raise ValueError("cqnc_check requires g > 0")
    if grid is None:
        grid = np.linspace(0.5 * p.omega_m, 1.5 * p.omega_m, 801)
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("empty frequency grid")

    coupling = abs(p.g - p.g_prime) / p.g
    damping = abs(p.Gamma - 2.0 * p.gamma_m) / (2.0 * p.gamma_m)
    cm = chi_mech(grid, p)
    cd = -cm if exact_surrogate else chi_atom_gen(grid, p)
    # residual of the weighted cancellation sum, referred to the mechanical term
    residual = float(np.max(np.abs(p.g**2 * cm + p.g_prime**2 * cd) / (p.g**2 * np.abs(cm))))
    q = p.quality_factor
    ideal = (coupling < COUPLING_TOL
             and damping < DAMPING_TOL
             and residual < SUSCEPTIBILITY_TOL_Q / q)
    return CqncReport(coupling, damping, residual, ideal)


@dataclass(frozen=True)
class OptimumReport:
    g_opt: float      # rad/s
    p_opt: float      # W
    s_min: float      # normalized PSD at the optimum
    omega: float      # probe frequency (rad/s)
    monotone: bool = False  # set when the optimum sits on a search boundary


def _psd_at_g(omega: float, p: SystemParams, model: str, g: float) -> float:
    pp = p.replace(g=g, g_prime=g)
    if model == "standard":
        return standard_psd(omega, pp, temperature=0.0)
    return cqnc_psd_approx(omega, pp, temperature=0.0)


def optimize_coupling(omega: float, p: SystemParams, drive: DriveParams,
                      model: str = "standard", bounds=None) -> OptimumReport:
    """Minimize the zero-temperature PSD over the coupling g.

    Coarse log scan to bracket, then golden-section search on log(g) to a
    relative 1e-6 in g. When the scan minimum sits on a bound (the
    cancellation-regime PSD is monotone in g) the boundary value is reported
    with the monotone flag set instead of a fake interior optimum.
    """
    if model not in ("standard", "cqnc"):
        raise ValueError(f"unknown model: {model!r}")
    if bounds is None:
        gs = g_sql_analytic(omega, p)
        bounds = (1e-3 * gs, 1e3 * gs)
    lo, hi = float(bounds[0]), float(bounds[1])
    if not (0 < lo < hi):
        raise ValueError("bounds must satisfy 0 < lo < hi")

    f = lambda lg: _psd_at_g(omega, p, model, math.exp(lg))
    a, b = math.log(lo), math.log(hi)
    scan = np.linspace(a, b, 64)
    vals = [f(x) for x in scan]
    k = int(np.argmin(vals))
    if k == 0 or k == len(scan) - 1:
        g_opt = math.exp(scan[k])
        return OptimumReport(g_opt, coupling_to_power(g_opt, drive, p.kappa),
                             vals[k], omega, monotone=True)

    # golden section inside the bracketing pair of scan points
    a, b = scan[k - 1], scan[k + 1]
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > 1e-7:  # log-space width; 1e-7 < log(1 + 1e-6)
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
    g_opt = math.exp(0.5 * (a + b))
    return OptimumReport(g_opt, coupling_to_power(g_opt, drive, p.kappa),
                         _psd_at_g(omega, p, model, g_opt), omega)


def g_sql_analytic(omega: float, p: SystemParams) -> float:
    """Coupling that minimizes the standard shot/back-action trade-off:
    sqrt(kappa) / (2 sqrt(|chi_m(omega)|))."""
    return math.sqrt(p.kappa) / (2.0 * math.sqrt(abs(chi_mech(omega, p))))


def g_sql_opa(omega: float, p: SystemParams) -> float:
    """Optimal coupling with a zero-phase parametric pump:
    |kappa - 4G| / (2 sqrt(kappa |chi_m(omega)|)). Reduces to g_sql_analytic at G = 0."""
    return abs(p.kappa - 4.0 * p.G_opa) / (2.0 * math.sqrt(p.kappa * abs(chi_mech(omega, p))))


def sub_sql_bandwidth(p: SystemParams, g: float, G: float, grid=None):
    """Frequency intervals where the cancellation-regime PSD beats the SQL.

    Contiguous grid runs with endpoints refined by bisection until the two
    curves agree to 1e-6 relative at each crossing. Returns a list of
    (omega_lo, omega_hi) tuples in rad/s.
    """
    if grid is None:
        grid = default_frequency_grid(p)
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("empty frequency grid")
    pp = p.replace(g=g, g_prime=g, G_opa=G)

    def gap(w):
        return cqnc_psd_approx(w, pp, temperature=0.0) - sql_psd(w, pp)

    below = np.array([gap(w) < 0.0 for w in grid])

    def refine(w_in: float, w_out: float) -> float:
        # bisect between an in-set and an out-of-set point
        for _ in range(200):
            mid = 0.5 * (w_in + w_out)
            s = sql_psd(mid, pp)
            d = gap(mid)
            if abs(d) <= 1e-6 * s:
                return mid
            if d < 0.0:
                w_in = mid
            else:
                w_out = mid
        return 0.5 * (w_in + w_out)

    intervals = []
    i = 0
    n = grid.size
    while i < n:
        if not below[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and below[j + 1]:
            j += 1
        lo = grid[i] if i == 0 else refine(grid[i], grid[i - 1])
        hi = grid[j] if j == n - 1 else refine(grid[j], grid[j + 1])
        intervals.append((float(lo), float(hi)))
        i = j + 1
    return intervals
