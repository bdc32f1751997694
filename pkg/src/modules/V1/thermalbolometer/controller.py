import logging
import math
from typing import Optional

from app.errors import ValidationFailure
from app.project_schemas import CommandResult, RunConfig
from app.utility import write_csv
from modules.V1.corephysics.models import get_constants, get_detector
from modules.V1.corephysics.schemas import CslParams
from modules.V1.corephysics.services import CslService
from modules.V1.datastore.services import DataService
from modules.V1.muonbackground.models import get_mean_energy_params
from modules.V1.muonbackground.services import MuonService
from .models import get_thermal_preset
from .schemas import TraceConfig
from .services import BolometerService

logger = logging.getLogger(__name__)

TRACE_HEADER = ("time_s", "temperature_K")
EVENT_HEADER = ("time_s", "energy_MeV")
THRESHOLD_SIGMAS = 10.0
MASS_TOLERANCE = 0.05


# ------------------------ BOLOMETER CONTROLLER ------------------------
def bolometer_controller(
    cfg: RunConfig,
    thermal: str = "cuore",
    preset: Optional[str] = None,
    duration: float = 100.0,
    sample_interval: float = 0.01,
    event_rate: float = 0.0,
    event_energy: Optional[float] = None,
    collapse_rate: float = 0.0,
    r_c: float = 1e-7,
    noise: bool = False,
    threshold: Optional[float] = None,
    site: Optional[str] = None,
    depth: Optional[float] = None,
    ensemble: int = 0,
) -> CommandResult[dict]:
    constants = get_constants(cfg.constants)
    thermal_preset = get_thermal_preset(thermal)
    spec = thermal_preset.spec

    if (site is None) != (depth is None):
        raise ValidationFailure("--site and --depth must be given together")
    preset = preset or thermal_preset.detector
    det = get_detector(preset)
    absorber_mass = thermal_preset.absorber_mass
    if abs(det.mass_kg - absorber_mass) > MASS_TOLERANCE * absorber_mass:
        raise ValidationFailure(
            f"detector preset '{preset}' ({det.mass_kg:.3g} kg) does not match the "
            f"{thermal_preset.name} absorber ({absorber_mass:.3g} kg); "
            f"use --preset {thermal_preset.detector} or omit it"
        )
    if site is not None:
        table = DataService(cfg.data_dir).depth_intensity(site)
        muon = MuonService.muon_power(
            det, depth, table, get_mean_energy_params("set_g"), cfg.faces, constants=constants
        )
        event_rate = muon.event_rate
        if event_energy is None:
            event_energy = MuonService.mean_energy_deposit(
                det, muon.mean_energy * 1e3, constants=constants
            )
        logger.info(
            "Muon background at %s, %.2f km.w.e: %.3e events/s of %.1f MeV",
            table.site,
            depth,
            event_rate,
            event_energy,
        )

    csl_power = CslService.csl_power(
        CslParams.of(collapse_rate, r_c), thermal_preset.absorber_mass, constants
    )
    trace_cfg = TraceConfig(
        duration=duration,
        sample_interval=sample_interval,
        event_rate=event_rate,
        event_energy=1.0 if event_energy is None else event_energy,
        csl_power=csl_power,
        rng_seed=cfg.seed,
        include_fluctuation_noise=noise,
    )
    trace = BolometerService.simulate_trace(spec, trace_cfg, constants)

    floor = BolometerService.fluctuation_floor(spec, spec.bath_temperature, constants)
    detection_threshold = THRESHOLD_SIGMAS * floor if threshold is None else threshold
    subtraction = BolometerService.subtract_events(spec, trace, detection_threshold, constants)
    expected = BolometerService.steady_gradient(spec, csl_power)

    out = cfg.out_dir
    metadata = {**trace.metadata, "thermal_preset": thermal_preset.name, "csl_power_W": csl_power}
    trace_path = write_csv(
        out / "trace.csv", TRACE_HEADER, zip(trace.times.tolist(), trace.temperatures.tolist()), metadata
    )
    events_path = write_csv(out / "events.csv", EVENT_HEADER, [(e.time, e.energy) for e in trace.events])

    report = {
        "thermal_preset": thermal_preset.name,
        "detector_preset": preset,
        "tau_s": spec.time_constant,
        "pulse_peak_K": BolometerService.pulse_peak(
            spec, trace_cfg.event_energy * constants.MeV_to_J
        ),
        "fluctuation_floor_K": floor,
        "expected_gradient_K": expected,
        "recovered_gradient_K": subtraction.recovered_gradient,
        "events_injected": len(trace.events),
        "events_detected": len(subtraction.detected),
        "undersampled": trace.metadata["undersampled"],
        "pileup_probability": BolometerService.pileup_probability(event_rate, spec.time_constant),
        "resolvable_lambda_per_s": BolometerService.resolvable_lambda(
            spec, thermal_preset.absorber_mass, thermal_preset.relative_accuracy, r_c, constants
        ),
        "files": {"trace": str(trace_path), "events": str(events_path)},
    }

    if ensemble > 0:
        seeds = list(range(cfg.seed, cfg.seed + ensemble))
        gradients = [
            BolometerService.subtract_events(spec, t, detection_threshold, constants).recovered_gradient
            for t in BolometerService.simulate_ensemble(spec, trace_cfg, seeds)
        ]
        mean = math.fsum(gradients) / len(gradients)
        spread = math.sqrt(math.fsum((g - mean) ** 2 for g in gradients) / max(len(gradients) - 1, 1))
        report["ensemble"] = {
            "seeds": len(seeds),
            "mean_gradient_K": mean,
            "standard_error_K": spread / math.sqrt(len(gradients)),
        }

    logger.info(
        "Recovered gradient %.4e K (expected %.4e K)", subtraction.recovered_gradient, expected
    )
    return CommandResult.success(message="Bolometer trace simulated", data=report)
