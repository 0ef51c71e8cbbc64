import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from aperiodic_qw import (
    InitialStateSpec,
    LatticeIndexError,
    ValidationError,
    WalkerState,
    make_localized_state,
    position_probabilities,
    state_from_json,
    state_to_json,
)


def test_localized_n0_40():
    state = make_localized_state(InitialStateSpec(40, 1, 0), 200)
    assert state.up[40] == 1
    assert np.count_nonzero(state.up) == 1
    assert np.count_nonzero(state.down) == 0
    assert state.n_sites == 200


def test_minimal_lattice_spin_down():
    state = make_localized_state(InitialStateSpec(0, 0, 1), 2)
    np.testing.assert_array_equal(state.up, [0, 0])
    np.testing.assert_array_equal(state.down, [1, 0])


def test_superposed_spinor_norm():
    r = 1 / math.sqrt(2)
    state = make_localized_state(InitialStateSpec(5, r, 1j * r), 16)
    assert abs(state.norm() - 1.0) < 1e-15


@pytest.mark.parametrize("n0", [-1, 16, 100])
def test_n0_out_of_range(n0):
    with pytest.raises(LatticeIndexError):
        make_localized_state(InitialStateSpec(n0, 1, 0), 16)


def test_unnormalized_spinor_rejected():
    with pytest.raises(ValidationError):
        InitialStateSpec(3, 1.0, 0.5)


def test_shape_validation():
    with pytest.raises(ValidationError):
        WalkerState(np.zeros(3), np.zeros(4))
    with pytest.raises(ValidationError):
        WalkerState(np.zeros(1), np.zeros(1))


def test_probabilities_split():
    up = np.zeros(5, complex)
    down = np.zeros(5, complex)
    up[1] = down[3] = 1 / math.sqrt(2)
    p = position_probabilities(WalkerState(up, down))
    np.testing.assert_allclose(p, [0, 0.5, 0, 0.5, 0], atol=1e-15)


@given(st.integers(2, 40), st.data())
def test_probabilities_nonnegative_and_sum_to_one(n, data):
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    v = rng.normal(size=2 * n) + 1j * rng.normal(size=2 * n)
    v /= np.linalg.norm(v)
    p = position_probabilities(WalkerState.from_vector(v))
    assert np.all(p >= 0)
    assert abs(p.sum() - 1) < 1e-10


def test_json_roundtrip(tmp_path):
    rng = np.random.default_rng(3)
    v = rng.normal(size=12) + 1j * rng.normal(size=12)
    state = WalkerState.from_vector(v / np.linalg.norm(v))
    text = state_to_json(state)
    back = state_from_json(text)
    np.testing.assert_array_equal(back.up, state.up)
    np.testing.assert_array_equal(back.down, state.down)
    path = tmp_path / "s.json"
    path.write_text(text)
    assert state_from_json(path).n_sites == 6


def test_json_schema():
    import json

    payload = json.loads(state_to_json(make_localized_state(InitialStateSpec(1, 1, 0), 3)))
    assert payload["n_sites"] == 3
    assert payload["up"][1] == [1.0, 0.0]
    assert payload["down"] == [[0.0, 0.0]] * 3


def test_json_malformed():
    with pytest.raises(ValidationError):
        state_from_json('{"n_sites": 3, "up": [[1, 0]], "down": [[0, 0]]}')
