"""Force-sensing noise spectra for a hybrid optomechanical sensor with
coherent back-action cancellation, plus an independent state-space oracle."""

__version__ = "0.1.0"

from .core import (  # noqa: F401
    HBAR,
    KB,
    DriveParams,
    SystemParams,
    chi_atom,
    chi_atom_gen,
    chi_cav,
    chi_mech,
    coupling_to_power,
    from_config,
    lambda_pm,
    power_to_coupling,
    table1_defaults,
    thermal_force_weight,
    xi_factor,
)
from .spectra import (  # noqa: F401
    OutputCoefficients,
    added_noise_psd_exact,
    cqnc_floor_psd,
    cqnc_psd_approx,
    output_coefficients,
    sql_psd,
    standard_psd,
)
from .oracle import (  # noqa: F401
    StabilityReport,
    StateSpaceModel,
    added_force_psd_oracle,
    build_statespace,
    frequency_response,
    output_transfers,
    stability,
)
from .analysis import (  # noqa: F401
    CqncReport,
    OptimumReport,
    cqnc_check,
    default_frequency_grid,
    g_sql_analytic,
    g_sql_opa,
    optimize_coupling,
    sub_sql_bandwidth,
)
