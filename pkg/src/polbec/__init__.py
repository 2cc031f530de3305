"""Stationary-light dark-state polariton condensation toolkit."""

__version__ = "0.1.0"

from .medium import (  # noqa: F401
    AdiabaticityReport,
    DerivedScales,
    MediumParams,
    ParameterError,
    derive_scales,
    validate_adiabaticity,
)
from .thermo import (  # noqa: F401
    MassTensor,
    TcReport,
    condensate_fraction,
    critical_temperature,
    mass_tensor,
    thermal_wavelengths,
)
