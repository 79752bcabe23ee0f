"""Shared fixtures and hypothesis profiles."""

import os

import pytest
from hypothesis import HealthCheck, Verbosity, settings

from cordic_dct.images import photo_proxy

settings.register_profile("ci", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("dev", max_examples=25, deadline=None)
settings.register_profile(
    "debug", max_examples=25, deadline=None, verbosity=Verbosity.verbose
)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "ci"))


@pytest.fixture(scope="session")
def photo512():
    """The 512x512 deterministic evaluation image."""
    return photo_proxy(512)


@pytest.fixture(scope="session")
def photo256():
    """Smaller variant for module-level codec checks."""
    return photo_proxy(256)
