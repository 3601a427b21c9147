"""Physical parameters, unit conversions, and the linear response functions of the
hybrid force sensor (mechanical oscillator + negative-mass atomic mode + cavity
with a degenerate parametric amplifier).

All rates and frequencies are angular (rad/s) internally. Conversions from Hz
happen at the config boundary only (see from_config).
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

# CODATA 2018 / exact SI values
HBAR = 1.054571817e-34  # J s
KB = 1.380649e-23       # J/K

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SystemParams:
    """All rates and couplings of the hybrid system, angular units (rad/s)."""

    omega_m: float          # mechanical resonance
    gamma_m: float          # mechanical damping
    kappa: float            # cavity decay
    Gamma: float            # collective atomic decay
    g: float                # effective optomechanical coupling
    g_prime: float          # effective atom-field coupling
    G_opa: float = 0.0      # parametric amplifier gain
    theta: float = 0.0      # OPA pump phase (rad)
    phi: float = 0.0        # intracavity field phase (rad)
    Delta: float = 0.0      # cavity detuning
    temperature: float = 0.0  # bath temperature (K)

    def __post_init__(self):
        if self.omega_m <= 0 or self.gamma_m <= 0 or self.kappa <= 0:
            raise ValueError("omega_m, gamma_m, kappa must be positive")
        if self.Gamma < 0 or self.G_opa < 0 or self.temperature < 0:
            raise ValueError("Gamma, G_opa, temperature must be nonnegative")
        if not self.omega_m / self.gamma_m > 1:
            raise ValueError("quality factor omega_m/gamma_m must exceed 1")

    @property
    def quality_factor(self) -> float:
        return self.omega_m / self.gamma_m

    def replace(self, **kw) -> "SystemParams":
        return dataclasses.replace(self, **kw)

    def is_stable(self) -> bool:
        # amplified cavity quadrature decays at kappa/2 - 2G
        return self.G_opa < self.kappa / 4


@dataclass(frozen=True)
class DriveParams:
    """Laser drive bookkeeping for coupling <-> power conversion."""

    power: float            # W
    omega_L: float          # laser angular frequency (rad/s)
    g0: float               # single-photon optomechanical coupling (rad/s)
    mass: float = 50e-12    # oscillator mass (kg), metadata only
    hbar: float = HBAR
    kB: float = KB

    def __post_init__(self):
        if self.power < 0:
            raise ValueError("power must be nonnegative")
        if self.omega_L <= 0 or self.g0 <= 0:
            raise ValueError("omega_L and g0 must be positive")


def table1_defaults() -> tuple[SystemParams, DriveParams]:
    """Reference parameter set of the hybrid sensor (Q = 1e4, matched damping).

    The effective coupling defaults to the standard-quantum-limit optimum at
    mechanical resonance, sqrt(kappa*gamma_m)/2; the recorded drive power is
    the 100 mW laser source and is not synchronized with that coupling.
    """
    omega_m = TWO_PI * 3e5
    gamma_m = TWO_PI * 30.0
    kappa = TWO_PI * 1e6
    g = math.sqrt(kappa * gamma_m) / 2.0
    p = SystemParams(
        omega_m=omega_m,
        gamma_m=gamma_m,
        kappa=kappa,
        Gamma=2.0 * gamma_m,   # matched-damping cancellation condition
        g=g,
        g_prime=g,             # matched-coupling cancellation condition
        G_opa=0.0,
        theta=0.0,
        phi=0.0,
        Delta=0.0,
        temperature=0.0,
    )
    d = DriveParams(power=0.1, omega_L=TWO_PI * 3.84e14, g0=TWO_PI * 300.0)
    return p, d


def power_to_coupling(drive: DriveParams, kappa: float) -> float:
    """Effective coupling from drive power: g = g0*sqrt(P/(2*hbar*omega_L*kappa))."""
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    if drive.omega_L <= 0:
        raise ValueError("omega_L must be positive")
    return drive.g0 * math.sqrt(drive.power / (2.0 * drive.hbar * drive.omega_L * kappa))


def coupling_to_power(g: float, drive: DriveParams, kappa: float) -> float:
    """Inverse of power_to_coupling: P = 2*hbar*omega_L*kappa*(g/g0)^2."""
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    if drive.omega_L <= 0:
        raise ValueError("omega_L must be positive")
    return 2.0 * drive.hbar * drive.omega_L * kappa * (g / drive.g0) ** 2


def thermal_force_weight(temperature: float, omega_m: float, quantum: bool = False) -> float:
    """Normalized thermal force noise weight.

    Default is the classical white form kB*T/(hbar*omega_m). With quantum=True
    the full symmetrized occupation (n_bar + 1/2) is used instead, which keeps
    the zero-point half quantum at T = 0.
    """
    if not quantum:
        return KB * temperature / (HBAR * omega_m)
    if temperature == 0.0:
        return 0.5
    x = HBAR * omega_m / (KB * temperature)
    n_bar = 1.0 / math.expm1(x)
    return n_bar + 0.5


# ---------------------------------------------------------------------------
# response functions; Fourier convention d/dt -> +i*omega


def chi_mech(omega, p: SystemParams):
    """Mechanical susceptibility omega_m / (omega_m^2 - omega^2 + i*omega*gamma_m)."""
    w = np.asarray(omega, dtype=float)
    out = p.omega_m / (p.omega_m**2 - w**2 + 1j * w * p.gamma_m)
    return out if out.ndim else complex(out)


def chi_cav(omega, p: SystemParams):
    """Bare cavity response 1 / (i*omega + kappa/2)."""
    w = np.asarray(omega, dtype=float)
    out = 1.0 / (1j * w + p.kappa / 2.0)
    return out if out.ndim else complex(out)


def chi_atom(omega, p: SystemParams):
    """Bare atomic-mode response 1 / (i*omega + Gamma/2)."""
    w = np.asarray(omega, dtype=float)
    if p.Gamma == 0.0 and np.any(w == 0.0):
        raise ValueError("pole: omega = 0 with Gamma = 0")
    out = 1.0 / (1j * w + p.Gamma / 2.0)
    return out if out.ndim else complex(out)


def _atom_gen_denom(omega, p: SystemParams):
    w = np.asarray(omega, dtype=float)
    return p.omega_m**2 - w**2 + 1j * w * p.Gamma / 2.0 + p.Gamma**2 / 4.0


def chi_atom_gen(omega, p: SystemParams):
    """Generalized (dressed) atomic susceptibility seen by the cavity drive.

    -omega_m / (omega_m^2 - omega^2 + i*omega*Gamma/2 + Gamma^2/4). For
    Gamma = 2*gamma_m this is the negative of chi_mech with the resonance
    pulled up by gamma_m^2, which is what makes the back-action cancellation
    work to order 1/Q.
    """
    den = _atom_gen_denom(omega, p)
    if np.any(den == 0.0):
        raise ValueError("pole: omega hits the dressed atomic resonance with Gamma = 0")
    out = -p.omega_m / den
    return out if out.ndim else complex(out)


def lambda_pm(omega, p: SystemParams):
    """OPA-split cavity quadrature responses (lambda_plus, lambda_minus).

    lambda_+ = 1/(i*omega + kappa/2 - 2G) for the amplified quadrature,
    lambda_- = 1/(i*omega + kappa/2 + 2G) for the squeezed one. They satisfy
    1/lambda_+ + 1/lambda_- = 2*i*omega + kappa identically.
    """
    w = np.asarray(omega, dtype=float)
    dp = 1j * w + p.kappa / 2.0 - 2.0 * p.G_opa
    dm = 1j * w + p.kappa / 2.0 + 2.0 * p.G_opa
    if np.any(dp == 0.0):
        raise ValueError("pole: omega = 0 at the instability threshold G = kappa/4")
    lp = 1.0 / dp
    lm = 1.0 / dm
    if lp.ndim:
        return lp, lm
    return complex(lp), complex(lm)


def xi_factor(omega, p: SystemParams):
    """Atomic feedback factor 1 / (i*omega + Gamma/2 + omega_m^2 * chi_atom)."""
    w = np.asarray(omega, dtype=float)
    out = 1.0 / (1j * w + p.Gamma / 2.0 + p.omega_m**2 * chi_atom(omega, p))
    return out if out.ndim else complex(out)


# ---------------------------------------------------------------------------
# config boundary: frequencies in Hz, temperatures in K, powers in W


def from_config(cfg: dict) -> tuple[SystemParams, DriveParams]:
    """Build parameter sets from a plain config mapping (Hz at the boundary).

    Unknown keys are rejected so typos fail loudly.
    """
    known = {
        "omega_m_hz", "gamma_m_hz", "kappa_hz", "Gamma_hz", "g_rad_s",
        "g_over_gsql", "g_prime_over_g", "G_over_kappa", "theta_rad",
        "phi_rad", "Delta_hz", "temperature_K", "power_W", "laser_freq_hz",
        "g0_hz", "mass_kg",
    }
    extra = set(cfg) - known
    if extra:
        raise ValueError(f"unknown config keys: {sorted(extra)}")

    base, drive = table1_defaults()
    omega_m = TWO_PI * float(cfg.get("omega_m_hz", base.omega_m / TWO_PI))
    gamma_m = TWO_PI * float(cfg.get("gamma_m_hz", base.gamma_m / TWO_PI))
    kappa = TWO_PI * float(cfg.get("kappa_hz", base.kappa / TWO_PI))
    Gamma = TWO_PI * float(cfg["Gamma_hz"]) if "Gamma_hz" in cfg else 2.0 * gamma_m

    if "g_rad_s" in cfg:
        g = float(cfg["g_rad_s"])
    else:
        # default coupling convention: multiple of the SQL-optimal coupling
        # at mechanical resonance
        gsql = math.sqrt(kappa * gamma_m) / 2.0
        g = float(cfg.get("g_over_gsql", 1.0)) * gsql
    g_prime = float(cfg.get("g_prime_over_g", 1.0)) * g

    p = SystemParams(
        omega_m=omega_m,
        gamma_m=gamma_m,
        kappa=kappa,
        Gamma=Gamma,
        g=g,
        g_prime=g_prime,
        G_opa=float(cfg.get("G_over_kappa", 0.0)) * kappa,
        theta=float(cfg.get("theta_rad", 0.0)),
        phi=float(cfg.get("phi_rad", 0.0)),
        Delta=TWO_PI * float(cfg.get("Delta_hz", 0.0)),
        temperature=float(cfg.get("temperature_K", 0.0)),
    )
    d = DriveParams(
        power=float(cfg.get("power_W", drive.power)),
        omega_L=TWO_PI * float(cfg.get("laser_freq_hz", drive.omega_L / TWO_PI)),
        g0=TWO_PI * float(cfg.get("g0_hz", drive.g0 / TWO_PI)),
        mass=float(cfg.get("mass_kg", drive.mass)),
    )
    return p, d
