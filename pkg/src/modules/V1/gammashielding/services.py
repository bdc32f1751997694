import logging
import math
from typing import Optional, Sequence

import numpy as np

from app.errors import DomainError, OutOfRangeError, ValidationFailure
from modules.V1.corephysics.models import PAPER_CONSTANTS
from modules.V1.corephysics.schemas import Constants, DetectorSpec, Material, require_finite
from .schemas import (
    AreaConvention,
    AttenuationTable,
    CoefficientKind,
    DetectorPath,
    GammaBinPower,
    GammaPowerResult,
    GammaSpectrum,
    ShieldScanRow,
    ShieldSpec,
)

logger = logging.getLogger(__name__)

AREA_FACES: dict[str, int] = {"all": 6, "top+sides": 5, "top": 1}

# Energy ranges (MeV) of the piecewise-linear power fit
PAPER_FIT_RANGES: tuple[tuple[float, float], ...] = ((0.0, 0.5), (0.5, 1.0), (1.0, 2.0), (2.0, 3.0))


class GammaService:
    # -------------------- Coefficients --------------------

    @staticmethod
    def lookup_coefficient(
        table: AttenuationTable, energy: float, kind: CoefficientKind = "total"
    ) -> float:
        """Log-log linear interpolation of mu/rho (cm^2/g); exact at table nodes."""
        require_finite("energy", energy)
        low, high = table.energy_range
        if energy < low or energy > high:
            raise OutOfRangeError(
                f"energy {energy} MeV outside the {table.material.name} table range "
                f"[{low}, {high}] MeV"
            )
        energies = np.array([row.energy for row in table.rows])
        values = np.array(
            [
                row.mu_over_rho_total if kind == "total" else row.mu_en_over_rho
                for row in table.rows
            ]
        )
        node = np.flatnonzero(energies == energy)
        if node.size:
            return float(values[node[0]])
        return float(np.exp(np.interp(np.log(energy), np.log(energies), np.log(values))))

    # -------------------- Single Energy Factors --------------------

    @staticmethod
    def shield_transmission(shield: ShieldSpec, table: AttenuationTable, energy: float) -> float:
        """s = exp(-(mu/rho) rho_x l_x)"""
        mu = GammaService.lookup_coefficient(table, energy, "total")
        return math.exp(-mu * shield.material.rho * shield.thickness)

    @staticmethod
    def path_length(det: DetectorSpec, path: DetectorPath = "side") -> float:
        return det.side if path == "side" else det.mean_chord

    @staticmethod
    def detector_absorption_fraction(
        det: DetectorSpec, table: AttenuationTable, energy: float, path: DetectorPath = "side"
    ) -> float:
        """p = 1 - exp(-(mu/rho)_tot rho_d l_d)"""
        mu = GammaService.lookup_coefficient(table, energy, "total")
        return -math.expm1(-mu * det.material.rho * GammaService.path_length(det, path))

    @staticmethod
    def energy_absorbed_fraction(
        det: DetectorSpec, table: AttenuationTable, energy: float, path: DetectorPath = "side"
    ) -> float:
        """E_abs/E_gamma = 1 - exp(-(mu/rho)_en rho_d l_d)"""
        mu_en = GammaService.lookup_coefficient(table, energy, "energy_absorption")
        return -math.expm1(-mu_en * det.material.rho * GammaService.path_length(det, path))

    @staticmethod
    def incident_area(det: DetectorSpec, faces: AreaConvention = "all") -> float:
        return AREA_FACES[faces] * det.face_area

    # -------------------- Spectrum Integration --------------------

    @staticmethod
    def gamma_power(
        det: DetectorSpec,
        shield: ShieldSpec,
        spectrum: GammaSpectrum,
        pb_table: AttenuationTable,
        det_table: AttenuationTable,
        faces: AreaConvention = "all",
        path: DetectorPath = "side",
        paper_fit: bool = False,
        constants: Constants = PAPER_CONSTANTS,
    ) -> GammaPowerResult:
        """
        P = sum over bins of E_mid * J * A * s * p * (E_abs/E_gamma), in watts.
        Bin errors come from flux_err and are added in quadrature.
        """
        if not spectrum.rows:
            raise DomainError("gamma spectrum has no bins")
        area = GammaService.incident_area(det, faces)

        bins: list[GammaBinPower] = []
        for index, gamma_bin in enumerate(spectrum.rows, start=1):
            energy = gamma_bin.e_mid
            try:
                s = GammaService.shield_transmission(shield, pb_table, energy)
                p = GammaService.detector_absorption_fraction(det, det_table, energy, path)
                f = GammaService.energy_absorbed_fraction(det, det_table, energy, path)
            except OutOfRangeError as exc:
                raise OutOfRangeError(
                    f"spectrum bin {index} [{gamma_bin.e_low}, {gamma_bin.e_high}] MeV "
                    f"is not covered: {exc.message}"
                ) from exc
            per_photon = energy * area * s * p * f * constants.MeV_to_J
            bins.append(
                GammaBinPower(
                    e_mid=energy,
                    flux=gamma_bin.flux,
                    transmission=s,
                    absorption=p,
                    energy_absorbed=f,
                    power=gamma_bin.flux * per_photon,
                    power_err=gamma_bin.flux_err * per_photon,
                )
            )

        if paper_fit:
            total, error = GammaService._paper_fit_total(spectrum, bins)
            mode = "paper_fit"
        else:
            total = math.fsum(b.power for b in bins)
            error = math.sqrt(math.fsum(b.power_err**2 for b in bins))
            mode = "bins"
        logger.debug(
            "Gamma power %.4e W (thickness %.3g cm, %d bins, mode %s)",
            total,
            shield.thickness,
            len(bins),
            mode,
        )
        return GammaPowerResult(power=total, power_err=error, bins=tuple(bins), mode=mode)

    @staticmethod
    def _paper_fit_total(
        spectrum: GammaSpectrum, bins: Sequence[GammaBinPower]
    ) -> tuple[float, float]:
        """
        Fit power density (W/MeV) with a straight line inside each fixed energy
        range and integrate the line over the range. The error is the
        residual-based uncertainty of each integral, added in quadrature.
        """
        widths = np.array([b.width for b in spectrum.rows])
        mids = np.array([b.e_mid for b in bins])
        density = np.array([b.power for b in bins]) / widths

        total = 0.0
        variance = 0.0
        for low, high in PAPER_FIT_RANGES:
            mask = (mids >= low) & (mids < high)
            n = int(mask.sum())
            if n == 0:
                continue
            if n == 1:
                total += float(density[mask][0] * widths[mask][0])
                continue
            x, y = mids[mask], density[mask]
            design = np.column_stack([np.ones(n), x])
            coef, _, _, _ = np.linalg.lstsq(design, y, rcond=None)
            integral_row = np.array([high - low, 0.5 * (high**2 - low**2)])
            integral = max(float(integral_row @ coef), 0.0)
            total += integral
            dof = n - 2
            if dof > 0:
                residual = y - design @ coef
                sigma2 = float(residual @ residual) / dof
                cov = sigma2 * np.linalg.inv(design.T @ design)
                variance += float(integral_row @ cov @ integral_row)
        return total, math.sqrt(variance)

    # -------------------- Thickness Scan --------------------

    @staticmethod
    def shield_scan(
        det: DetectorSpec,
        spectrum: GammaSpectrum,
        pb_table: AttenuationTable,
        det_table: AttenuationTable,
        thicknesses: Sequence[float],
        faces: AreaConvention = "all",
        path: DetectorPath = "side",
        paper_fit: bool = False,
        shield_material: Optional[Material] = None,
        constants: Constants = PAPER_CONSTANTS,
    ) -> list[ShieldScanRow]:
        if not thicknesses:
            raise ValidationFailure("at least one shield thickness is required")
        if any(t < 0 or not math.isfinite(t) for t in thicknesses):
            raise ValidationFailure("shield thicknesses must be finite and >= 0")
        if any(b < a for a, b in zip(thicknesses, thicknesses[1:])):
            raise ValidationFailure("shield thicknesses must be sorted in increasing order")

        material = shield_material or pb_table.material
        rows = []
        for thickness in thicknesses:
            result = GammaService.gamma_power(
                det,
                ShieldSpec(material=material, thickness=thickness),
                spectrum,
                pb_table,
                det_table,
                faces=faces,
                path=path,
                paper_fit=paper_fit,
                constants=constants,
            )
            rows.append(
                ShieldScanRow(thickness=thickness, power=result.power, power_err=result.power_err)
            )
        return rows
