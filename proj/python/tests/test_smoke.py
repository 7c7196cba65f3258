import math

import numpy as np
import pytest

import multibeam


def test_symmetric_family():
    assert multibeam.reduced_visibility(math.pi / 2) == pytest.approx(1 / math.sqrt(3), abs=1e-12)
    assert multibeam.analytic_D(2 * math.pi / 3) == pytest.approx(0.5, abs=1e-12)
    assert multibeam.pvm_distinguishability(math.pi / 3) == pytest.approx(0.5, abs=1e-10)


def test_search_matches_closed_form():
    t = 5 * math.pi / 6
    assert multibeam.distinguishability(t, restarts=4) == pytest.approx(multibeam.analytic_D(t), abs=1e-6)


def test_beam_state_round_trip():
    s = multibeam.lambda_example(0.5)
    assert s.beam_count == 3
    assert multibeam.traditional_visibility(s) == pytest.approx(0.6, abs=1e-9)
    pure = multibeam.BeamState(np.full((3, 3), 1 / 3, dtype=complex))
    assert multibeam.duality_slack(pure) == pytest.approx(0.0, abs=1e-12)


def test_errors_surface():
    with pytest.raises(multibeam.Error):
        multibeam.lambda_example(1.5)
    with pytest.raises(multibeam.Error):
        multibeam.BeamState(np.eye(2, dtype=complex))


def test_scan():
    rows = multibeam.theta_scan(5)
    assert len(rows) == 5
    assert rows[-1]["duality_sum"] == pytest.approx(7 / 9)
