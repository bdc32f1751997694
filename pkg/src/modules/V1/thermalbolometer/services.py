import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import numpy as np

from app.errors import ValidationFailure
from modules.V1.corephysics.models import PAPER_CONSTANTS
from modules.V1.corephysics.schemas import Constants, require_finite
from modules.V1.corephysics.services import CslService
from .schemas import (
    SubtractionResult,
    ThermalSpec,
    TraceConfig,
    TraceEvent,
    TraceResult,
)

logger = logging.getLogger(__name__)

# Detection thresholds below this multiple of the fluctuation floor are refused
MIN_THRESHOLD_SIGMAS = 5.0


class BolometerService:
    # -------------------- Closed-Form Response --------------------

    @staticmethod
    def time_constant(spec: ThermalSpec) -> float:
        return spec.time_constant

    @staticmethod
    def pulse_peak(spec: ThermalSpec, event_energy: float) -> float:
        """Peak temperature rise E/C in kelvin, energy in joules."""
        require_finite("event_energy", event_energy, minimum=0.0)
        return event_energy / spec.heat_capacity

    @staticmethod
    def steady_gradient(spec: ThermalSpec, power: float) -> float:
        """T - T0 = R W for a constant power W."""
        require_finite("power", power, minimum=0.0)
        return spec.thermal_resistance * power

    @staticmethod
    def fluctuation_floor(
        spec: ThermalSpec, temperature: float, constants: Constants = PAPER_CONSTANTS
    ) -> float:
        """Thermodynamic fluctuation sqrt(k_B T^2 / C) in kelvin."""
        require_finite("temperature", temperature, minimum=0.0)
        return math.sqrt(constants.k_B * temperature**2 / spec.heat_capacity)

    @staticmethod
    def resolvable_lambda(
        spec: ThermalSpec,
        mass: float,
        relative_accuracy: float,
        r_c: float = 1e-7,
        constants: Constants = PAPER_CONSTANTS,
    ) -> float:
        """Smallest lambda whose gradient R W reaches relative_accuracy * T0."""
        if not 0 < relative_accuracy < 1:
            raise ValidationFailure("relative_accuracy must lie in (0, 1)")
        power = relative_accuracy * spec.bath_temperature / spec.thermal_resistance
        return CslService.lambda_for_power(power, mass, r_c, constants)

    @staticmethod
    def pileup_probability(event_rate: float, tau: float, window_taus: float = 10.0) -> float:
        """Chance that a further event lands within window_taus * tau of a given one."""
        require_finite("event_rate", event_rate, minimum=0.0)
        require_finite("tau", tau, minimum=0.0)
        return -math.expm1(-event_rate * window_taus * tau)

    # -------------------- Trace Simulation --------------------

    @staticmethod
    def sample_times(cfg: TraceConfig) -> np.ndarray:
        n = int(math.floor(cfg.duration / cfg.sample_interval + 1e-9)) + 1
        return np.arange(n, dtype=np.float64) * cfg.sample_interval

    @staticmethod
    def draw_events(cfg: TraceConfig, rng: np.random.Generator) -> list[TraceEvent]:
        """
        Poisson background events. Draw order on the generator is fixed:
        count ~ Poisson(rate * duration), then uniform times on [0, duration),
        then energy indices when a distribution is given.
        """
        count = int(rng.poisson(cfg.event_rate * cfg.duration)) if cfg.event_rate > 0 else 0
        times = np.sort(rng.uniform(0.0, cfg.duration, size=count))
        if cfg.energy_distribution is not None and count:
            dist = cfg.energy_distribution
            picks = rng.choice(len(dist.values), size=count, p=np.asarray(dist.probabilities))
            energies = [dist.values[i] for i in picks]
        else:
            energies = [cfg.event_energy] * count
        return [TraceEvent(time=float(t), energy=float(e)) for t, e in zip(times, energies)]

    @staticmethod
    def add_pulses(
        spec: ThermalSpec,
        times: np.ndarray,
        temperatures: np.ndarray,
        events: Sequence[TraceEvent],
        constants: Constants = PAPER_CONSTANTS,
    ) -> None:
        tau = spec.time_constant
        for event in events:
            start = int(np.searchsorted(times, event.time, side="left"))
            if start >= len(times):
                continue
            amplitude = BolometerService.pulse_peak(spec, event.energy * constants.MeV_to_J)
            temperatures[start:] += amplitude * np.exp(-(times[start:] - event.time) / tau)

    @staticmethod
    def simulate_trace(
        spec: ThermalSpec, cfg: TraceConfig, constants: Constants = PAPER_CONSTANTS
    ) -> TraceResult:
        """
        T(t) = T0 + R W_csl + sum_i (E_i / C) exp(-(t - t_i) / tau) [t >= t_i] + noise.

        Deterministic in cfg.rng_seed (numpy PCG64 via default_rng). After the
        event draws the generator produces one normal variate per sample when
        fluctuation noise is on.
        """
        rng = np.random.default_rng(cfg.rng_seed)
        times = BolometerService.sample_times(cfg)
        baseline = spec.bath_temperature + BolometerService.steady_gradient(spec, cfg.csl_power)
        temperatures = np.full(times.shape, baseline, dtype=np.float64)

        drawn = BolometerService.draw_events(cfg, rng)
        injected = [TraceEvent(time=t, energy=e) for t, e in cfg.injected_events]
        events = sorted(injected + drawn, key=lambda ev: ev.time)
        BolometerService.add_pulses(spec, times, temperatures, events, constants)

        sigma = BolometerService.fluctuation_floor(spec, spec.bath_temperature, constants)
        if cfg.include_fluctuation_noise:
            temperatures += rng.normal(0.0, sigma, size=times.shape)

        undersampled = cfg.sample_interval > spec.time_constant / 2
        if undersampled:
            logger.warning(
                "Sample interval %.3g s exceeds tau/2 = %.3g s; pulses are undersampled",
                cfg.sample_interval,
                spec.time_constant / 2,
            )
        logger.debug("Simulated %d samples with %d events", len(times), len(events))

        metadata = {
            "seed": cfg.rng_seed,
            "tau_s": spec.time_constant,
            "bath_temperature_K": spec.bath_temperature,
            "steady_gradient_K": baseline - spec.bath_temperature,
            "fluctuation_floor_K": sigma,
            "noise": cfg.include_fluctuation_noise,
            "n_events": len(events),
            "undersampled": undersampled,
            "rng": "numpy.PCG64",
        }
        return TraceResult(
            times=times, temperatures=temperatures, events=tuple(events), metadata=metadata
        )

    @staticmethod
    def simulate_ensemble(
        spec: ThermalSpec, cfg: TraceConfig, seeds: Sequence[int], workers: int = 4
    ) -> list[TraceResult]:
        """One independent trace per seed, returned in seed order."""
        configs = [cfg.model_copy(update={"rng_seed": seed}) for seed in seeds]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda c: BolometerService.simulate_trace(spec, c), configs))

    # -------------------- Event Subtraction --------------------

    @staticmethod
    def subtract_events(
        spec: ThermalSpec,
        trace: TraceResult,
        detection_threshold: float,
        constants: Constants = PAPER_CONSTANTS,
        passes: int = 2,
    ) -> SubtractionResult:
        """
        Remove exponential pulses and estimate the steady gradient.

        Onsets are samples where the one-step innovation
        r_k - exp(-dt/tau) r_{k-1} of the baseline-subtracted trace exceeds the
        threshold. Each pulse amplitude is a least-squares fit of
        amplitude * exp(-(t - t_k)/tau) over the samples up to the next onset,
        subtracted from t_k onward.
        """
        floor = BolometerService.fluctuation_floor(spec, spec.bath_temperature, constants)
        if detection_threshold < MIN_THRESHOLD_SIGMAS * floor:
            raise ValidationFailure(
                f"detection threshold {detection_threshold:.3e} K is below "
                f"{MIN_THRESHOLD_SIGMAS:g} x the fluctuation floor ({floor:.3e} K); "
                f"use at least {MIN_THRESHOLD_SIGMAS * floor:.3e} K"
            )

        times = trace.times
        raw = trace.temperatures
        tau = spec.time_constant
        if len(times) < 2:
            raise ValidationFailure("trace needs at least two samples")
        decay = math.exp(-(times[1] - times[0]) / tau)

        baseline = float(np.median(raw))
        cleaned = raw - baseline
        detected: list[TraceEvent] = []
        for _ in range(passes):
            residual = raw - baseline
            innovation = np.empty_like(residual)
            innovation[0] = residual[0]
            innovation[1:] = residual[1:] - decay * residual[:-1]
            onsets = np.flatnonzero(innovation > detection_threshold)

            cleaned = residual.copy()
            detected = []
            bounds = list(onsets[1:]) + [len(times)]
            for onset, stop in zip(onsets, bounds):
                shape = np.exp(-(times[onset:] - times[onset]) / tau)
                window = shape[: stop - onset]
                amplitude = float(np.dot(cleaned[onset:stop], window) / np.dot(window, window))
                cleaned[onset:] -= amplitude * shape
                detected.append(
                    TraceEvent(
                        time=float(times[onset]),
                        energy=amplitude * spec.heat_capacity / constants.MeV_to_J,
                    )
                )
            baseline = baseline + float(np.mean(cleaned))

        logger.debug("Subtracted %d pulses", len(detected))
        return SubtractionResult(
            cleaned=cleaned + (baseline - float(np.mean(cleaned))),
            recovered_gradient=baseline - spec.bath_temperature,
            detected=tuple(detected),
        )

