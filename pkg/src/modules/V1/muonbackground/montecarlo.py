"""
Ray sampling through a cube [0, l]^3 under a cos^2(theta) angular law.

Directions come from the upper hemisphere (muons travel downwards) with
pdf ~ cos^2(theta) sin(theta); impact points are uniform on a disk of
radius l*sqrt(3)/2 perpendicular to the direction and centred on the cube,
so every chord through the cube is reachable. Each worker owns a substream
spawned from one SeedSequence and partial sums are reduced in worker order.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import NamedTuple

import numpy as np

from app.errors import ValidationFailure
from .schemas import MeanChordResult

logger = logging.getLogger(__name__)

# Integral of cos^2(theta) over the upper hemisphere, sr
COS2_SOLID_ANGLE = 2.0 * math.pi / 3.0


class BatchTally(NamedTuple):
    samples: int
    hits: int
    top_hits: int
    chord_sum: float
    chord_sq_sum: float


def batch_sizes(samples: int, workers: int) -> list[int]:
    per_worker, remainder = divmod(samples, workers)
    return [per_worker + (1 if i < remainder else 0) for i in range(workers)]


def sample_directions(rng: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Unit direction of travel and polar angle of arrival for n rays."""
    cos_theta = rng.random(n) ** (1.0 / 3.0)
    phi = rng.uniform(0.0, 2.0 * math.pi, n)
    sin_theta = np.sqrt(1.0 - cos_theta**2)
    direction = np.column_stack([sin_theta * np.cos(phi), sin_theta * np.sin(phi), -cos_theta])
    return direction, phi


def chord_lengths(
    side: float, origin: np.ndarray, direction: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Slab intersection. Returns chord length (0 on a miss) and entry axis per ray."""
    with np.errstate(divide="ignore", invalid="ignore"):
        t_low = (0.0 - origin) / direction
        t_high = (side - origin) / direction
    t_near = np.minimum(t_low, t_high)
    t_far = np.maximum(t_low, t_high)

    parallel = direction == 0.0
    inside = (origin >= 0.0) & (origin <= side)
    t_near = np.where(parallel, np.where(inside, -np.inf, np.inf), t_near)
    t_far = np.where(parallel, np.where(inside, np.inf, -np.inf), t_far)

    entry = t_near.max(axis=1)
    exit_ = t_far.min(axis=1)
    chord = np.clip(exit_ - entry, 0.0, None)
    return chord, t_near.argmax(axis=1)


def run_batch(side: float, n: int, seed_seq: np.random.SeedSequence) -> BatchTally:
    rng = np.random.default_rng(seed_seq)
    radius = side * math.sqrt(3.0) / 2.0
    centre = np.full(3, side / 2.0)

    direction, phi = sample_directions(rng, n)
    # Orthonormal pair spanning the plane perpendicular to each direction
    e1 = np.column_stack([-np.sin(phi), np.cos(phi), np.zeros(n)])
    e2 = np.cross(direction, e1)

    r = radius * np.sqrt(rng.random(n))
    psi = rng.uniform(0.0, 2.0 * math.pi, n)
    offset = (r * np.cos(psi))[:, None] * e1 + (r * np.sin(psi))[:, None] * e2
    origin = centre + offset - 2.0 * radius * direction

    chord, entry_axis = chord_lengths(side, origin, direction)
    hit = chord > 0.0
    return BatchTally(
        samples=n,
        hits=int(hit.sum()),
        top_hits=int((hit & (entry_axis == 2)).sum()),
        chord_sum=float(chord[hit].sum()),
        chord_sq_sum=float((chord[hit] ** 2).sum()),
    )


def mean_chord_monte_carlo(
    side: float, samples: int, seed: int, workers: int = 4
) -> MeanChordResult:
    """
    Mean chord and entry rates per unit vertical intensity.

    Identical (side, samples, seed, workers) give identical results.
    """
    if samples < 1:
        raise ValidationFailure("Monte Carlo needs at least one sample")
    if workers < 1:
        raise ValidationFailure("Monte Carlo needs at least one worker")
    if seed < 0:
        raise ValidationFailure("seed must be >= 0")

    sizes = batch_sizes(samples, workers)
    streams = np.random.SeedSequence(seed).spawn(workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        tallies = list(pool.map(lambda job: run_batch(side, *job), zip(sizes, streams)))

    hits = sum(t.hits for t in tallies)
    top_hits = sum(t.top_hits for t in tallies)
    chord_sum = math.fsum(t.chord_sum for t in tallies)
    chord_sq_sum = math.fsum(t.chord_sq_sum for t in tallies)
    if hits == 0:
        raise ValidationFailure(f"no ray hit the cube in {samples} samples; increase the sample count")

    mean = chord_sum / hits
    variance = max(chord_sq_sum / hits - mean**2, 0.0)
    mean_err = math.sqrt(variance / hits)

    # Rays per unit intensity cross the launch disk at rate (2pi/3) * pi R^2
    launch_rate = COS2_SOLID_ANGLE * math.pi * (side * math.sqrt(3.0) / 2.0) ** 2
    fraction = hits / samples
    rate = launch_rate * fraction
    rate_err = launch_rate * math.sqrt(fraction * (1.0 - fraction) / samples)
    top_rate = launch_rate * top_hits / samples

    logger.debug(
        "Monte Carlo chord: %d/%d hits, mean %.5g +- %.2g cm", hits, samples, mean, mean_err
    )
    return MeanChordResult(
        samples=samples,
        hits=hits,
        mean_chord=mean,
        mean_chord_err=mean_err,
        rate_per_intensity=rate,
        rate_per_intensity_err=rate_err,
        top_rate_per_intensity=top_rate,
        lateral_rate_per_intensity=rate - top_rate,
        seed=seed,
    )
