"""Shared fixtures. Codes are session-scoped: the catalog entries run a
coset enumeration on construction and the larger ones are reused by many
tests."""

import pytest

from hypsc import builders
from hypsc.surface import derive_code


@pytest.fixture(scope="session")
def toric3_code():
    return derive_code(builders.toric(3))


@pytest.fixture(scope="session")
def toric4_code():
    return derive_code(builders.toric(4))


@pytest.fixture(scope="session")
def rotated4_code():
    return derive_code(builders.rotated_toric(4))


@pytest.fixture(scope="session")
def rotated6_code():
    return derive_code(builders.rotated_toric(6))


@pytest.fixture(scope="session")
def hyp60_surface():
    return builders.from_catalog("hyp45-60")


@pytest.fixture(scope="session")
def hyp60_code(hyp60_surface):
    return derive_code(hyp60_surface)


@pytest.fixture(scope="session")
def hyp160_surface():
    return builders.from_catalog("hyp45-160")


@pytest.fixture(scope="session")
def hyp160_code(hyp160_surface):
    return derive_code(hyp160_surface)


@pytest.fixture(scope="session")
def sstd_code():
    return derive_code(builders.from_catalog("small-stellated-dodecahedron"))
