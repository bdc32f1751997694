from app.errors import ValidationFailure
from .schemas import ThermalPreset, ThermalSpec

CUORE = ThermalPreset(
    name="cuore",
    spec=ThermalSpec(heat_capacity=2e-9, thermal_resistance=2e8, bath_temperature=10e-3),
    absorber_mass=0.75,
    relative_accuracy=0.05,
    detector="cuore",
    description="CUORE-like TeO2 cube: 750 g at 10 mK, PTFE supports, noise thermometry at 5 %",
)

# Extrapolation: mass x10, bath 10 mK -> 1 mK. Contact resistance ~ T^-3 gives R x10^3,
# accuracy improves x10. Heat capacity follows mass and the Debye T^3 law.
UPGRADED = ThermalPreset(
    name="upgraded",
    spec=ThermalSpec(
        heat_capacity=2e-9 * 10 * (1e-3 / 10e-3) ** 3,
        thermal_resistance=2e8 * 1e3,
        bath_temperature=1e-3,
    ),
    absorber_mass=7.5,
    relative_accuracy=0.005,
    detector="cuore_upgraded",
    description="Extrapolated CUORE-like setup: 7.5 kg at 1 mK (not a measured configuration)",
)

THERMAL_PRESETS: dict[str, ThermalPreset] = {p.name: p for p in (CUORE, UPGRADED)}


def get_thermal_preset(name: str) -> ThermalPreset:
    try:
        return THERMAL_PRESETS[name]
    except KeyError:
        raise ValidationFailure(
            f"Unknown thermal preset '{name}'; choose from {sorted(THERMAL_PRESETS)}"
        )
