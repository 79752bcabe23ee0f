"""Deterministic synthetic grayscale test images for the codec harness."""

from __future__ import annotations

import numpy as np

from .codec import GrayImage


def gradient_image(width: int = 512, height: int = 512) -> GrayImage:
    """Smooth diagonal ramp, 0 at one corner to 255 at the opposite one."""
    yy, xx = np.mgrid[0:height, 0:width].astype(np.float64)
    ramp = (xx / max(width - 1, 1) + yy / max(height - 1, 1)) / 2.0
    return GrayImage.from_array(np.round(ramp * 255.0).astype(np.uint8))


def zone_plate(size: int = 512) -> GrayImage:
    """Circular chirp pattern sweeping from low to high spatial frequency."""
    yy, xx = np.mgrid[0:size, 0:size].astype(np.float64)
    cy = cx = (size - 1) / 2.0
    r2 = (xx - cx) ** 2 + (yy - cy) ** 2
    v = 0.5 * (1.0 + np.cos(np.pi * r2 / size))
    return GrayImage.from_array(np.round(v * 255.0).astype(np.uint8))


def seeded_texture(size: int = 512, seed: int = 7) -> GrayImage:
    """Band-limited pseudo-random texture; same seed, same pixels."""
    rng = np.random.default_rng(seed)
    noise = rng.uniform(0.0, 1.0, size=(size, size))
    # a few separable box-blur passes tame the spectrum without scipy
    for _ in range(3):
        noise = (noise + np.roll(noise, 1, axis=0) + np.roll(noise, -1, axis=0)) / 3.0
        noise = (noise + np.roll(noise, 1, axis=1) + np.roll(noise, -1, axis=1)) / 3.0
    lo, hi = noise.min(), noise.max()
    v = (noise - lo) / (hi - lo)
    return GrayImage.from_array(np.round(v * 255.0).astype(np.uint8))


def photo_proxy(size: int = 512, seed: int = 7) -> GrayImage:
    """Photograph stand-in: ramp + rings + texture, deterministic.

    Mixes low-frequency shading, mid-frequency structure and fine texture
    so quantization quality factors separate cleanly in PSNR.
    """
    ramp = gradient_image(size, size).samples.astype(np.float64)
    rings = zone_plate(size).samples.astype(np.float64)
    grain = seeded_texture(size, seed).samples.astype(np.float64)
    v = 0.55 * ramp + 0.25 * rings + 0.20 * grain
    return GrayImage.from_array(np.round(np.clip(v, 0, 255)).astype(np.uint8))


def bundled_corpus(size: int = 512) -> dict[str, GrayImage]:
    return {
        "gradient": gradient_image(size, size),
        "zone_plate": zone_plate(size),
        "texture": seeded_texture(size),
        "photo_proxy": photo_proxy(size),
    }
