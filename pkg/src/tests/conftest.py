"""Pytest configuration and fixtures."""

import shutil
import tempfile
from fractions import Fraction
from pathlib import Path
from typing import Generator

import pytest
import yaml

from schreier_lab.family import A, S
from schreier_lab.norms import Baernstein, ExplicitLayers, GeometricRule, Mixed, Schreier


@pytest.fixture
def temp_dir() -> Generator[Path, None, None]:
    """Create a temporary directory for tests."""
    temp_path = Path(tempfile.mkdtemp())
    yield temp_path
    shutil.rmtree(temp_path)


@pytest.fixture
def schreier_one() -> Schreier:
    """The Schreier space of S(1)."""
    return Schreier(S(1))


@pytest.fixture
def geometric_space() -> Mixed:
    """The 1-well-constructed space with base A(2) and theta 1/2."""
    return Mixed(GeometricRule(A(2), Fraction(1, 2)))


@pytest.fixture
def two_layer_space() -> Mixed:
    """An explicit two-layer mixed Schreier space."""
    return Mixed(ExplicitLayers(((S(0), Fraction(1)), (S(1), Fraction(3, 4)))))


@pytest.fixture
def l2_space() -> Baernstein:
    """Baernstein space of S(0) with p=2, i.e. l_2."""
    return Baernstein(S(0), 2)


@pytest.fixture
def sz_data_file(temp_dir: Path) -> Path:
    """A YAML file of Szlenk bounds n: Sz(A, 1/2^n)."""
    path = temp_dir / "sz.yml"
    with open(path, "w") as f:
        yaml.dump({1: "w", 2: "w^{3}", 3: "w^{5}"}, f)
    return path
