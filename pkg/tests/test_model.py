import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from msifield.errors import (
    InvalidHurstPrimeError,
    InvalidScaleError,
    LengthMismatchError,
    NegativeValueError,
)
from msifield.io import model_from_json, model_to_json
from msifield.model import (
    Breakpoints,
    GridField,
    MsiModel,
    StripSeries,
    validate_model,
)


def test_valid_model_is_returned_unchanged():
    m = MsiModel(lam=(2, 2), hurst=(0.5, 0.5), hprime1=(0.5, 0.5), hprime2=(0.5,),
                 breakpoints_a=Breakpoints((0, 1, 2)), breakpoints_b=Breakpoints((0, 3)))
    assert validate_model(m) is m


def test_validate_model_is_idempotent():
    m = MsiModel(lam=(1.5, 1.5), hurst=(1.0, 1.0), hprime1=(0.3,), hprime2=(0.7,))
    assert validate_model(validate_model(m)) is m


def test_case_study_model_rejected_for_simulation(case_study_model):
    # the fitted horizontal exponent 1.14 escapes (0, 1)
    assert case_study_model.simulatable is False
    with pytest.raises(InvalidHurstPrimeError):
        validate_model(case_study_model)


def test_unit_scale_rejected():
    with pytest.raises(InvalidScaleError):
        MsiModel(lam=(1.0, 1.3), hurst=(0.5, 0.5), hprime1=(0.5,), hprime2=(0.5,))


def test_hprime_breakpoint_length_mismatch():
    with pytest.raises(LengthMismatchError):
        MsiModel(lam=(2, 2), hurst=(0.5, 0.5), hprime1=(0.5, 0.5), hprime2=(0.5,),
                 breakpoints_a=Breakpoints((0, 1)), breakpoints_b=Breakpoints((0, 1)))


def test_simulatable_flag():
    good = MsiModel(lam=(2, 2), hurst=(1.0, 1.0), hprime1=(0.4,), hprime2=(0.6,))
    assert good.simulatable
    edge = MsiModel(lam=(2, 2), hurst=(1.0, 1.0), hprime1=(1.0,), hprime2=(0.6,))
    assert not edge.simulatable  # the boundary value 1.0 is excluded


@settings(max_examples=50, deadline=None)
@given(
    lam=st.tuples(st.floats(1.0001, 10), st.floats(1.0001, 10)),
    hurst=st.tuples(st.floats(0.01, 5), st.floats(0.01, 5)),
    hp=st.lists(st.floats(0.01, 0.99), min_size=1, max_size=4),
)
def test_model_json_round_trip_bit_identical(lam, hurst, hp):
    m = MsiModel(lam=lam, hurst=hurst, hprime1=tuple(hp), hprime2=tuple(hp))
    doc = json.loads(json.dumps(model_to_json(m)))
    back = model_from_json(doc)
    assert back.lam == m.lam
    assert back.hurst == m.hurst
    assert back.hprime1 == m.hprime1
    assert back.hprime2 == m.hprime2
    assert back.breakpoints_a.points == m.breakpoints_a.points
    assert back.simulatable == m.simulatable


def test_grid_field_invariants():
    g = GridField([[1, 2], [3, 4]], cell_size=2.0)
    assert g.rows == 2 and g.cols == 2
    with pytest.raises(NegativeValueError):
        GridField([[1, -2], [3, 4]])
    with pytest.raises(ValueError):
        GridField([[np.inf, 0], [0, 0]])
    with pytest.raises(ValueError):
        GridField([[1, 2]], cell_size=0.0)


def test_strip_series_invariants():
    s = StripSeries("vertical", [1.0, 2.0, 3.0])
    assert len(s) == 3
    with pytest.raises(ValueError):
        StripSeries("vertical", [1.0])
    with pytest.raises(NegativeValueError):
        StripSeries("time", [1.0, -1.0])


def test_breakpoints_invariants():
    b = Breakpoints((0, 14, 31, 52))
    assert b.n_intervals == 3
    assert b.interval(2) == (14, 31)
    assert b.lengths() == (14, 17, 21)
    with pytest.raises(ValueError):
        Breakpoints((0, 5, 5))
    with pytest.raises(ValueError):
        Breakpoints((3,))
