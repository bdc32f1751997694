from app.errors import ValidationFailure
from .schemas import MeanEnergyParams

SET_G = MeanEnergyParams(b=0.383, gamma_mu=3.7, epsilon_mu=618.0, source_label="set_g")
SET_H = MeanEnergyParams(b=0.4, gamma_mu=3.77, epsilon_mu=693.0, source_label="set_h")

MEAN_ENERGY_PARAMS: dict[str, MeanEnergyParams] = {p.source_label: p for p in (SET_G, SET_H)}

# Sea-level vertical intensity (1/(cm^2 s sr)) and mean energy (GeV)
SURFACE_INTENSITY = 1.14e-2
SURFACE_MEAN_ENERGY_GEV = 4.0

# Blanket relative uncertainty on the mean-energy parameters
DEFAULT_PARAM_ERROR = 0.04


def get_mean_energy_params(name: str) -> MeanEnergyParams:
    try:
        return MEAN_ENERGY_PARAMS[name]
    except KeyError:
        raise ValidationFailure(
            f"Unknown mean-energy parameter set '{name}'; choose from {sorted(MEAN_ENERGY_PARAMS)}"
        )
