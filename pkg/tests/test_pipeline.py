import numpy as np
import pytest

from coxthompson import forward, reconstruct
from coxthompson.core import ParityError, PhaseShiftSet
from coxthompson.newton import NewtonOptions
from coxthompson.pipeline import ZERO_OFFSET, SolveFailure, invert


def round_trip_error(inv, phases):
    back = forward.phase_shifts(inv.curve.with_origin(0.0), phases.ls)
    return np.max(np.abs(back.deltas - phases.deltas))


@pytest.mark.parametrize("mode, subset", [("general", None), ("semianalytic", "even"),
                                          ("semianalytic", "odd")])
def test_fine_grid_round_trip(gaussian_phases, fine_grid, mode, subset):
    phases = gaussian_phases if subset is None else gaussian_phases.subset(subset)
    inv = invert(phases, mode, fine_grid)
    assert round_trip_error(inv, phases) < 1e-4
    assert inv.flagged_points == 0


def test_approximate_is_sum_of_halves(gaussian_phases):
    x = reconstruct.make_grid()
    inv = invert(gaussian_phases, "approximate", x)
    even = invert(gaussian_phases.subset("even"), "semianalytic", x)
    odd = invert(gaussian_phases.subset("odd"), "semianalytic", x)
    assert np.allclose(inv.curve.q, even.curve.q + odd.curve.q, rtol=0, atol=1e-13)
    # dropping the even-odd coupling costs accuracy, but stays at the 0.1-0.3 rad level
    err = round_trip_error(inv, gaussian_phases)
    assert 1e-2 < err < 0.3


def test_approximate_splits_initial_values(table1):
    inv = invert(table1.phases, "approximate", T0=table1.L_a)
    assert [r.ls for r in inv.reports] == [(0, 2, 4), (1, 3)]


def test_zero_phase_shifts():
    phases = PhaseShiftSet((0, 1, 2), np.zeros(3))
    inv = invert(phases, "general")
    rep = inv.reports[0]
    assert rep.converged
    assert np.allclose(rep.solution, np.array([0, 1, 2]) - ZERO_OFFSET)
    assert np.max(np.abs(inv.curve.q)) < 1e-6


def test_failure_carries_reports(gaussian_phases):
    with pytest.raises(SolveFailure) as exc:
        invert(gaussian_phases, "general", options=NewtonOptions(max_iter=1))
    assert exc.value.reports and not exc.value.reports[0].converged


def test_mode_validation(gaussian_phases, even_phases):
    with pytest.raises(ParityError):
        invert(gaussian_phases, "semianalytic")
    with pytest.raises(ParityError):
        invert(even_phases, "approximate")
    with pytest.raises(ValueError):
        invert(even_phases, "nonsense")


def test_report_dict(gaussian_phases):
    d = invert(gaussian_phases, "general").report_dict()
    assert d["mode"] == "general" and d["solves"][0]["converged"]
    assert d["solves"][0]["max_condition"] > 1
