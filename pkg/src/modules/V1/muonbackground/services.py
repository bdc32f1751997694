import logging
import math
from typing import Optional, Sequence

import numpy as np

from app.errors import DomainError, OutOfRangeError, ValidationFailure
from modules.V1.corephysics.models import PAPER_CONSTANTS
from modules.V1.corephysics.schemas import Constants, DetectorSpec, Material, require_finite
from . import montecarlo
from .models import DEFAULT_PARAM_ERROR, SURFACE_INTENSITY, SURFACE_MEAN_ENERGY_GEV
from .schemas import (
    DepthIntensityTable,
    EventRate,
    FacesConvention,
    MeanChordResult,
    MeanEnergyParams,
    MuonPowerResult,
    MuonState,
    PathModel,
)

logger = logging.getLogger(__name__)

LN10 = math.log(10.0)


class MuonService:
    # -------------------- Stopping Power --------------------

    @staticmethod
    def max_transferable_energy(state: MuonState, constants: Constants = PAPER_CONSTANTS) -> float:
        """E'_m = 2 m_e p^2 / (m_e^2 + m_mu^2 + 2 m_e sqrt(p^2 + m_mu^2)), MeV."""
        m_e = constants.m_e_c2
        p2 = state.p_mu_c**2
        return 2.0 * m_e * p2 / (m_e**2 + state.rest_energy**2 + 2.0 * m_e * state.total_energy)

    @staticmethod
    def stopping_power(
        state: MuonState, mat: Material, constants: Constants = PAPER_CONSTANTS
    ) -> float:
        """
        Bethe-Bloch mass stopping power in MeV cm^2/g, without density or
        shell corrections:

            (2 C m_e / beta^2) [ln(2 m_e E'_m beta^2 / ((1 - beta^2) I^2)) - 2 beta^2]
            C = pi r_0^2 N_A Z / A
        """
        m_e = constants.m_e_c2
        coefficient = math.pi * constants.r_0**2 * constants.N_A * mat.Z / mat.A
        e_max = MuonService.max_transferable_energy(state, constants)
        beta_sq = state.beta_sq
        # beta^2 / (1 - beta^2) == (beta gamma)^2
        argument = 2.0 * m_e * e_max * state.beta_gamma_sq / mat.mean_excitation_I**2
        if argument <= 1.0:
            raise DomainError(
                f"Bethe-Bloch logarithm argument {argument:.3g} <= 1 at T = "
                f"{state.kinetic_energy:g} MeV in {mat.name}; the formula needs a "
                "relativistic muon (T of order 10 MeV or more)"
            )
        value = (2.0 * coefficient * m_e / beta_sq) * (math.log(argument) - 2.0 * beta_sq)
        if not value > 0:
            raise DomainError(
                f"stopping power is not positive at T = {state.kinetic_energy:g} MeV in {mat.name}"
            )
        return value

    @staticmethod
    def mean_energy_deposit(
        det: DetectorSpec,
        kinetic_energy: float,
        path_length: Optional[float] = None,
        constants: Constants = PAPER_CONSTANTS,
    ) -> float:
        """Energy (MeV) a muon of kinetic energy T leaves along one path through the cube."""
        state = MuonState.of(kinetic_energy, constants)
        length = det.side if path_length is None else path_length
        return MuonService.stopping_power(state, det.material, constants) * det.material.rho * length

    # -------------------- Flux Geometry --------------------

    @staticmethod
    def horizontal_flux(intensity: float) -> float:
        """J1 = (pi/2) I_v through a horizontal unit area."""
        return (math.pi / 2.0) * intensity

    @staticmethod
    def tilted_flux(intensity: float, theta_a: float) -> float:
        """J = (pi/2) I_v (cos(theta_a) + (pi/4) sin(theta_a))"""
        return (math.pi / 2.0) * intensity * (math.cos(theta_a) + (math.pi / 4.0) * math.sin(theta_a))

    @staticmethod
    def vertical_flux(intensity: float) -> float:
        """J3 = (pi^2/8) I_v through a vertical unit area."""
        return (math.pi**2 / 8.0) * intensity

    @staticmethod
    def event_rate(
        det: DetectorSpec,
        intensity: float,
        intensity_err: float = 0.0,
        faces: FacesConvention = "top+sides",
        chord: Optional[MeanChordResult] = None,
    ) -> EventRate:
        """
        Muons per second crossing the cube.

        top+sides: J1 on the top face, J3 on the four lateral faces.
        all: bottom face counted as a second horizontal face.
        top: horizontal top face only.
        With a Monte Carlo chord result the rate per unit intensity is sampled
        instead (top+sides geometry).
        """
        require_finite("intensity", intensity, minimum=0.0)
        require_finite("intensity_err", intensity_err, minimum=0.0)
        if chord is not None:
            per_intensity = chord.rate_per_intensity
        else:
            horizontal = MuonService.horizontal_flux(1.0) * det.face_area
            vertical = MuonService.vertical_flux(1.0) * 4.0 * det.face_area
            if faces == "top+sides":
                per_intensity = horizontal + vertical
            elif faces == "all":
                per_intensity = 2.0 * horizontal + vertical
            else:
                per_intensity = horizontal
        return EventRate(rate=per_intensity * intensity, rate_err=per_intensity * intensity_err)

    # -------------------- Depth Dependence --------------------

    @staticmethod
    def mean_muon_energy(depth: float, params: MeanEnergyParams) -> float:
        """<E> = eps (1 - exp(-b d)) / (gamma - 2), GeV."""
        require_finite("depth", depth, minimum=0.0)
        return params.epsilon_mu * -math.expm1(-params.b * depth) / (params.gamma_mu - 2.0)

    @staticmethod
    def interpolate_intensity(table: DepthIntensityTable, depth: float) -> tuple[float, float]:
        """Linear in (depth, log10 I_v); the relative error is interpolated the same way."""
        require_finite("depth", depth)
        low, high = table.depth_range
        if depth < low or depth > high:
            raise OutOfRangeError(
                f"depth {depth} km.w.e outside the {table.site} table range [{low}, {high}] km.w.e"
            )
        depths = np.array([row.depth for row in table.rows])
        intensities = np.array([row.intensity for row in table.rows])
        errors = np.array([row.intensity_err for row in table.rows])
        node = np.flatnonzero(depths == depth)
        if node.size:
            return float(intensities[node[0]]), float(errors[node[0]])
        intensity = 10.0 ** float(np.interp(depth, depths, np.log10(intensities)))
        rel_err = float(np.interp(depth, depths, errors / intensities))
        return intensity, rel_err * intensity

    # -------------------- Deposited Power --------------------

    @staticmethod
    def muon_power_for_intensity(
        det: DetectorSpec,
        intensity: float,
        intensity_err: float,
        mean_energy: float,
        faces: FacesConvention = "top+sides",
        param_error: float = DEFAULT_PARAM_ERROR,
        chord: Optional[MeanChordResult] = None,
        depth: Optional[float] = None,
        constants: Constants = PAPER_CONSTANTS,
    ) -> MuonPowerResult:
        """
        P = S(<E>) * rate * rho * l * MeV_to_J in watts. <E> is in GeV and
        taken as the muon kinetic energy. The error combines the intensity
        error and a relative `param_error` on <E> in quadrature on log10 P.
        """
        if not 0 <= param_error < 1:
            raise ValidationFailure("param_error must lie in [0, 1)")
        state = MuonState.of(mean_energy * 1e3, constants)
        stopping = MuonService.stopping_power(state, det.material, constants)
        rate = MuonService.event_rate(det, intensity, intensity_err, faces, chord)
        length = det.side if chord is None else chord.mean_chord
        power = stopping * rate.rate * det.material.rho * length * constants.MeV_to_J

        if power > 0:
            shifted = MuonState.of(mean_energy * 1e3 * (1.0 + param_error), constants)
            sigma_param = abs(
                math.log10(MuonService.stopping_power(shifted, det.material, constants) / stopping)
            )
            sigma_intensity = rate.rate_err / rate.rate / LN10
            power_err = power * LN10 * math.hypot(sigma_intensity, sigma_param)
        else:
            power_err = 0.0

        return MuonPowerResult(
            depth=depth,
            intensity=intensity,
            mean_energy=mean_energy,
            stopping_power=stopping,
            path_length=length,
            event_rate=rate.rate,
            event_rate_err=rate.rate_err,
            power=power,
            power_err=power_err,
        )

    @staticmethod
    def muon_power(
        det: DetectorSpec,
        depth: float,
        table: DepthIntensityTable,
        params: MeanEnergyParams,
        faces: FacesConvention = "top+sides",
        param_error: float = DEFAULT_PARAM_ERROR,
        chord: Optional[MeanChordResult] = None,
        constants: Constants = PAPER_CONSTANTS,
    ) -> MuonPowerResult:
        intensity, intensity_err = MuonService.interpolate_intensity(table, depth)
        mean_energy = MuonService.mean_muon_energy(depth, params)
        if mean_energy <= 0:
            raise DomainError(f"mean muon energy vanishes at depth {depth} km.w.e")
        return MuonService.muon_power_for_intensity(
            det,
            intensity,
            intensity_err,
            mean_energy,
            faces=faces,
            param_error=param_error,
            chord=chord,
            depth=depth,
            constants=constants,
        )

    @staticmethod
    def surface_muon_power(
        det: DetectorSpec,
        faces: FacesConvention = "top+sides",
        chord: Optional[MeanChordResult] = None,
        constants: Constants = PAPER_CONSTANTS,
    ) -> MuonPowerResult:
        return MuonService.muon_power_for_intensity(
            det,
            SURFACE_INTENSITY,
            0.0,
            SURFACE_MEAN_ENERGY_GEV,
            faces=faces,
            chord=chord,
            depth=0.0,
            constants=constants,
        )

    @staticmethod
    def muon_depth_scan(
        det: DetectorSpec,
        table: DepthIntensityTable,
        params: MeanEnergyParams,
        depths: Sequence[float],
        faces: FacesConvention = "top+sides",
        param_error: float = DEFAULT_PARAM_ERROR,
        chord: Optional[MeanChordResult] = None,
        constants: Constants = PAPER_CONSTANTS,
    ) -> list[MuonPowerResult]:
        if not depths:
            raise ValidationFailure("at least one depth is required")
        rows = [
            MuonService.muon_power(
                det, d, table, params, faces, param_error, chord, constants
            )
            for d in depths
        ]
        logger.debug("Muon depth scan over %d depths at %s", len(rows), table.site)
        return rows

    @staticmethod
    def depth_grid(table: DepthIntensityTable, step: float = 0.5) -> list[float]:
        """Table depths plus evenly spaced points; sorted and de-duplicated."""
        if step <= 0:
            raise ValidationFailure("depth step must be > 0")
        low, high = table.depth_range
        count = int(math.floor((high - low) / step + 1e-9))
        grid = {round(low + i * step, 12) for i in range(count + 1)}
        grid.update(row.depth for row in table.rows)
        return sorted(d for d in grid if low <= d <= high)

    # -------------------- Path Model --------------------

    @staticmethod
    def mean_chord_monte_carlo(
        det: DetectorSpec, samples: int, seed: int, workers: int = 4
    ) -> MeanChordResult:
        return montecarlo.mean_chord_monte_carlo(det.side, samples, seed, workers)

    @staticmethod
    def resolve_chord(
        det: DetectorSpec, path_model: PathModel, samples: int, seed: int, workers: int
    ) -> Optional[MeanChordResult]:
        if path_model == "side":
            return None
        return MuonService.mean_chord_monte_carlo(det, samples, seed, workers)
