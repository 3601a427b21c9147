"""Independent state-space verification engine.

Builds the six-dimensional quadrature model of the hybrid sensor directly as a
real drift matrix plus input matrices, and computes every transfer function by
solving the complex linear system (i*omega*I - A) x = b per frequency. No
closed-form susceptibility shortcuts are used here, so agreement with the
spectra module is a genuine cross-check of two independent derivations.

State order: (X, P, x_a, p_a, x_d, p_d).
Noise input order: (F_th, x_a_in, p_a_in, x_d_in, p_d_in).
Readout: p_a_out = sqrt(kappa) * p_a - p_a_in.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import SystemParams, thermal_force_weight

_RESIDUAL_TOL = 1e-12


@dataclass(frozen=True)
class StateSpaceModel:
    drift: np.ndarray          # (6, 6) real
    noise_input: np.ndarray    # (6, 5) real
    signal_input: np.ndarray   # (6,) real, external force column
    input_weights: np.ndarray  # (5,) symmetrized input PSD weights
    kappa: float               # needed by the readout
    omega_m: float             # needed to rescale the thermal weight
    mode: str = "resonant"

    def __post_init__(self):
        # freeze the arrays so the model is genuinely immutable
        for a in (self.drift, self.noise_input, self.signal_input, self.input_weights):
            a.setflags(write=False)


@dataclass(frozen=True)
class StabilityReport:
    eigen_real_parts: np.ndarray  # 6 values, sorted ascending
    stable: bool
    margin: float                 # smallest |Re(lambda)| (rad/s)


def build_statespace(p: SystemParams, mode: str = "resonant") -> StateSpaceModel:
    """Assemble drift and input matrices from the linearized quadrature dynamics.

    mode="resonant" is the zero-detuning, zero-phase working point and rejects
    parameter sets with nonzero angles; mode="general" keeps the detuning,
    pump-phase, and field-phase couplings.

    The atomic 2x2 block carries its damping on the momentum quadrature only,
    with the position restoring rate raised to omega_m + Gamma^2/(4*omega_m).
    This is the oscillator whose drive response is exactly the dressed atomic
    susceptibility -omega_m/(omega_m^2 - omega^2 + i*omega*Gamma/2 + Gamma^2/4)
    used by the closed forms, i.e. a true damped negative-mass twin of the
    mechanical mode; a symmetrically damped block cannot realize that response
    with real coefficients.
    """
    if mode not in ("resonant", "general"):
        raise ValueError(f"unknown mode: {mode!r}")
    if mode == "resonant" and (p.Delta != 0.0 or p.theta != 0.0 or p.phi != 0.0):
        raise ValueError("resonant mode requires Delta = theta = phi = 0")

    if mode == "resonant":
        cos_phi, sin_phi = 1.0, 0.0
        c_plus = p.kappa / 2.0 + 2.0 * p.G_opa
        c_minus = -p.kappa / 2.0 + 2.0 * p.G_opa
        s_plus = 0.0
        s_minus = 0.0
    else:
        cos_phi, sin_phi = np.cos(p.phi), np.sin(p.phi)
        c_plus = p.kappa / 2.0 + 2.0 * p.G_opa * np.cos(p.theta)
        c_minus = -p.kappa / 2.0 + 2.0 * p.G_opa * np.cos(p.theta)
        s_plus = p.Delta + 2.0 * p.G_opa * np.sin(p.theta)
        s_minus = -p.Delta + 2.0 * p.G_opa * np.sin(p.theta)

    A = np.zeros((6, 6))
    A[0, 1] = p.omega_m
    A[1, 0] = -p.omega_m
    A[1, 1] = -p.gamma_m
    A[1, 2] = -p.g * cos_phi
    A[1, 3] = p.g * sin_phi
    A[2, 0] = p.g * sin_phi
    A[2, 2] = c_minus
    A[2, 3] = s_plus
    A[3, 0] = -p.g * cos_phi
    A[3, 2] = s_minus
    A[3, 3] = -c_plus
    A[3, 4] = -p.g_prime
    A[4, 5] = -p.omega_m
    A[5, 2] = -p.g_prime
    A[5, 4] = p.omega_m + p.Gamma**2 / (4.0 * p.omega_m)
    A[5, 5] = -p.Gamma / 2.0

    B = np.zeros((6, 5))
    B[1, 0] = np.sqrt(2.0 * p.gamma_m)
    B[2, 1] = np.sqrt(p.kappa)
    B[3, 2] = np.sqrt(p.kappa)
    B[4, 3] = np.sqrt(p.Gamma)
    B[5, 4] = np.sqrt(p.Gamma)

    sig = np.zeros(6)
    sig[1] = np.sqrt(2.0 * p.gamma_m)

    weights = np.array([
        thermal_force_weight(p.temperature, p.omega_m),
        0.5, 0.5, 0.5, 0.5,
    ])
    return StateSpaceModel(A, B, sig, weights, kappa=p.kappa, omega_m=p.omega_m, mode=mode)


def frequency_response(m: StateSpaceModel, omega: float) -> np.ndarray:
    """Resolvent applied to all input columns: (i*omega*I - A)^(-1) [B | signal].

    Solved as one complex linear system with partial pivoting, never via an
    explicit inverse. Returns a 6x6 complex array whose first five columns are
    the noise-input responses and whose last column is the force response.
    Raises if the solve residual exceeds 1e-12 relative.
    """
    M = 1j * omega * np.eye(6) - m.drift
    rhs = np.column_stack([m.noise_input, m.signal_input]).astype(complex)
    try:
        x = np.linalg.solve(M, rhs)
    except np.linalg.LinAlgError as e:
        raise ValueError(f"singular system at omega = {omega!r}") from e
    # normwise backward error per column; O(eps) for a pivoted solve
    resid = np.linalg.norm(M @ x - rhs, axis=0)
    scale = np.linalg.norm(M, 2) * np.linalg.norm(x, axis=0) + np.linalg.norm(rhs, axis=0)
    bad = resid > _RESIDUAL_TOL * np.where(scale > 0, scale, 1.0)
    if np.any(bad):
        raise ValueError(f"solve residual above {_RESIDUAL_TOL} at omega = {omega!r}")
    return x


def output_transfers(m: StateSpaceModel, omega: float):
    """Transfers from (noise inputs, force) to the detected output quadrature.

    Returns (t_signal, t_noise) with t_noise of length 5; the p_a_in channel
    includes the -1 input feedthrough of the readout.
    """
    x = frequency_response(m, omega)
    sk = np.sqrt(m.kappa)
    t_noise = sk * x[3, :5].copy()
    t_noise[2] -= 1.0  # direct p_a_in feedthrough
    t_signal = sk * x[3, 5]
    return t_signal, t_noise


def stability(m: StateSpaceModel) -> StabilityReport:
    """Eigenvalue stability of the drift matrix."""
    ev = np.linalg.eigvals(m.drift)
    re = np.sort(ev.real)
    return StabilityReport(
        eigen_real_parts=re,
        stable=bool(np.all(re < 0.0)),
        margin=float(np.min(np.abs(re))),
    )


def added_force_psd_oracle(m: StateSpaceModel, omega, temperature: float | None = None,
                           quantum_thermal: bool = False):
    """Added force noise PSD computed purely from the state-space transfers.

    Every noise channel is referred to the force input by dividing by the
    force-to-output transfer, then summed with the model's symmetrized input
    weights. Unstable models and zero signal transfer are rejected.
    """
    rep = stability(m)
    if not rep.stable:
        raise ValueError("unstable drift matrix; spectra are not defined")
    weights = m.input_weights.copy()
    if temperature is not None:
        weights[0] = thermal_force_weight(temperature, m.omega_m, quantum=quantum_thermal)
    elif quantum_thermal:
        raise ValueError("pass temperature explicitly to change the thermal model")

    def one(w: float) -> float:
        t_sig, t_noise = output_transfers(m, w)
        if t_sig == 0.0:
            raise ValueError("zero force-to-output transfer (g = 0)")
        referred = t_noise / t_sig
        return float(np.sum(weights * np.abs(referred) ** 2))

    if np.ndim(omega) == 0:
        return one(float(omega))
    return np.array([one(float(w)) for w in np.asarray(omega, dtype=float)])
