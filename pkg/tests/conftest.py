from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import settings

from qbundle.laurent import QLaurent
from qbundle.presets import load_preset

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


@pytest.fixture(scope="session")
def suq2():
    return load_preset("suq2")


@pytest.fixture(scope="session")
def su2():
    return load_preset("su2")


@pytest.fixture(scope="session")
def u1():
    return load_preset("u1")


@pytest.fixture(scope="session")
def grid():
    from qbundle.pwnum import S3Grid

    return S3Grid.build(16, 16, 16)


def q(k: int = 1, c=1) -> QLaurent:
    return QLaurent.monomial(k, Fraction(c))
