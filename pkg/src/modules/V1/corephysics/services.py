import logging

from app.errors import DomainError

from .models import PAPER_CONSTANTS
from .schemas import EXCITATION_PER_Z_MEV, Constants, CslParams, require_finite

logger = logging.getLogger(__name__)


class CslService:
    # -------------------- Heating Rate --------------------

    @staticmethod
    def csl_power(
        params: CslParams, mass: float, constants: Constants = PAPER_CONSTANTS
    ) -> float:
        """
        CSL heating power of a body of `mass` kg, in watts:
        (3/4) * lambda * hbar^2 / r_c^2 * M / m_N^2.
        """
        require_finite("mass", mass, minimum=0.0)
        params = CslParams.of(params.collapse_rate, params.r_c)
        power = (
            0.75 * params.collapse_rate * constants.hbar**2 / params.r_c**2
        ) * mass / constants.m_N**2
        return power

    @staticmethod
    def csl_heating_per_mass(
        params: CslParams, constants: Constants = PAPER_CONSTANTS
    ) -> float:
        """Heating rate per unit mass H = dE/(M dt), W/kg."""
        return CslService.csl_power(params, 1.0, constants)

    @staticmethod
    def heating_coefficient(
        r_c: float = 1e-7, constants: Constants = PAPER_CONSTANTS
    ) -> float:
        """H / lambda in J/kg at the given correlation length."""
        return CslService.csl_heating_per_mass(CslParams.of(1.0, r_c), constants)

    @staticmethod
    def lambda_for_power(
        power: float, mass: float, r_c: float, constants: Constants = PAPER_CONSTANTS
    ) -> float:
        """Closed-form inverse of csl_power in lambda."""
        require_finite("power", power, minimum=0.0)
        require_finite("mass", mass)
        if mass <= 0:
            raise DomainError("absorber mass must be > 0 to invert the CSL heating rate")
        params = CslParams.of(0.0, r_c)
        return power * params.r_c**2 * constants.m_N**2 / (0.75 * constants.hbar**2 * mass)

    # -------------------- Materials --------------------

    @staticmethod
    def mean_excitation_energy(Z: float) -> float:
        """I = (10 eV) * Z, in MeV."""
        return EXCITATION_PER_Z_MEV * Z
