import logging
from typing import Optional

from app.project_schemas import CommandResult, RunConfig
from modules.V1.thermalbolometer.models import CUORE, THERMAL_PRESETS, get_thermal_preset
from modules.V1.thermalbolometer.services import BolometerService
from .models import get_constants, get_detector
from .schemas import CslParams
from .services import CslService

logger = logging.getLogger(__name__)


# ------------------------ CSL HEATING CONTROLLER ------------------------
def csl_heating_controller(
    cfg: RunConfig,
    collapse_rate: float,
    r_c: float,
    preset: str,
    thermal: Optional[str] = None,
) -> CommandResult[dict]:
    constants = get_constants(cfg.constants)
    det = get_detector(preset)
    thermal_preset = (
        get_thermal_preset(thermal)
        if thermal
        else next((p for p in THERMAL_PRESETS.values() if p.detector == preset), CUORE)
    )
    params = CslParams.of(collapse_rate, r_c)

    power = CslService.csl_power(params, det.mass_kg, constants)
    per_mass = CslService.csl_heating_per_mass(params, constants)
    gradient = BolometerService.steady_gradient(thermal_preset.spec, power)
    logger.info("CSL power %.4e W on %.4g kg (%s)", power, det.mass_kg, preset)

    return CommandResult.success(
        message="CSL heating computed",
        data={
            "preset": preset,
            "material": det.material.name,
            "mass_kg": det.mass_kg,
            "lambda_per_s": params.collapse_rate,
            "r_c_m": params.r_c,
            "power_W": power,
            "heating_W_per_kg": per_mass,
            "thermal_preset": thermal_preset.name,
            "thermal_resistance_K_per_W": thermal_preset.spec.thermal_resistance,
            "steady_gradient_K": gradient,
            "constants": constants.profile,
        },
    )
