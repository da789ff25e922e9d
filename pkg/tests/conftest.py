import json
from pathlib import Path

import pytest

from pxp.param_space import ChoiceDim, FloatDim, IntDim, ParamSpec

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def float_spec():
    return ParamSpec([(f"x{i}", FloatDim(0.0, 1.0)) for i in range(7)])


@pytest.fixture
def mixed_spec():
    """7-D mixed float/int space, the shape used throughout the sim fixtures."""
    return ParamSpec(
        [
            ("scale", FloatDim(0.5, 3.0)),
            ("pinch", FloatDim(0.1, 5.0)),
            ("twist", FloatDim(0.0, 6.283)),
            ("noise", FloatDim(0.0, 1.0)),
            ("symmetry", IntDim(2, 12)),
            ("layers", IntDim(1, 8)),
            ("detail", IntDim(3, 40)),
        ]
    )


@pytest.fixture
def tiny_spec():
    return ParamSpec(
        [
            ("x", FloatDim(0.0, 10.0)),
            ("k", IntDim(1, 5)),
            ("c", ChoiceDim(("a", "b", "c", "d"))),
        ]
    )


@pytest.fixture
def peaks_fixture_path():
    return FIXTURES / "peaks_7d_5.json"


@pytest.fixture
def sphere_fixture_path():
    return FIXTURES / "sphere_5d.json"


def roundtrip_state(state: dict) -> dict:
    """Force a state document through JSON bytes, like the store does."""
    return json.loads(json.dumps(state))
