from app.errors import ValidationFailure
from .schemas import Constants, DetectorSpec, Material

# ------------------------------------------ Constant Profiles ------------------------------------------

# Shared by both profiles (CODATA 2018 exact / recommended values)
_HBAR = 1.054571817e-34
_PROTON_MASS = 1.67262192369e-27
_AVOGADRO = 6.02214076e23
_BOLTZMANN = 1.380649e-23
_MEV_TO_J = 1.602176634e-13

PAPER_CONSTANTS = Constants(
    profile="paper",
    hbar=_HBAR,
    m_N=_PROTON_MASS,
    m_e_c2=0.511,
    m_mu_c2=106.0,
    r_0=2.82e-13,
    N_A=_AVOGADRO,
    k_B=_BOLTZMANN,
    MeV_to_J=_MEV_TO_J,
)

CODATA_CONSTANTS = Constants(
    profile="codata",
    hbar=_HBAR,
    m_N=_PROTON_MASS,
    m_e_c2=0.51099895,
    m_mu_c2=105.6583755,
    r_0=2.8179403262e-13,
    N_A=_AVOGADRO,
    k_B=_BOLTZMANN,
    MeV_to_J=_MEV_TO_J,
)

CONSTANT_PROFILES: dict[str, Constants] = {
    "paper": PAPER_CONSTANTS,
    "codata": CODATA_CONSTANTS,
}


def get_constants(profile: str = "paper") -> Constants:
    try:
        return CONSTANT_PROFILES[profile]
    except KeyError:
        raise ValidationFailure(
            f"Unknown constant profile '{profile}'; choose from {sorted(CONSTANT_PROFILES)}"
        )


# ------------------------------------------ Materials ------------------------------------------

GERMANIUM = Material(name="germanium", Z=32, A=72.63, rho=5.67)
LEAD = Material(name="lead", Z=82, A=207.2, rho=11.35)
STANDARD_ROCK = Material(name="standard_rock", Z=11, A=22, rho=2.65)
TELLURIUM_DIOXIDE = Material(name="teo2", Z=68, A=159.6, rho=6.02)

MATERIALS: dict[str, Material] = {
    m.name: m for m in (GERMANIUM, LEAD, STANDARD_ROCK, TELLURIUM_DIOXIDE)
}

# ------------------------------------------ Detectors ------------------------------------------

DETECTOR_PRESETS: dict[str, DetectorSpec] = {
    "ge10": DetectorSpec(material=GERMANIUM, side=10.0),
    "cuore": DetectorSpec(material=TELLURIUM_DIOXIDE, side=5.0),
    # 7.52 kg, the absorber of the "upgraded" thermal preset
    "cuore_upgraded": DetectorSpec(material=TELLURIUM_DIOXIDE, side=10.77),
}


def get_material(name: str) -> Material:
    try:
        return MATERIALS[name]
    except KeyError:
        raise ValidationFailure(
            f"Unknown material '{name}'; choose from {sorted(MATERIALS)}"
        )


def get_detector(preset: str) -> DetectorSpec:
    try:
        return DETECTOR_PRESETS[preset]
    except KeyError:
        raise ValidationFailure(
            f"Unknown detector preset '{preset}'; choose from {sorted(DETECTOR_PRESETS)}"
        )
