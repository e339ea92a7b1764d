import numpy as np
import pytest
from hypothesis import settings

from coxthompson import forward
from coxthompson.core import PhaseShiftSet

# fixed example generation so every run of the suite sees the same cases
settings.register_profile("repro", derandomize=True, print_blob=True)
settings.load_profile("repro")

GAUSS_AMPLITUDE = -1.0
GAUSS_WIDTH = 2.0
# round-trip grid: the reconstructed tail needs room to decay before matching
FINE_GRID = (0.05, 40.0, 4000)

_criteria: dict[str, list[tuple[str, bool, str]]] = {}


def record(criterion: str, label: str, ok: bool, detail: str = ""):
    _criteria.setdefault(criterion, []).append((label, bool(ok), detail))


@pytest.fixture
def criterion():
    return record


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for key in sorted(_criteria, key=lambda k: int(k)):
        parts = _criteria[key]
        ok = all(p[1] for p in parts)
        tr.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}")
        for label, good, detail in parts:
            tr.write_line(f"    [{'ok' if good else 'xx'}] {label} {detail}")


@pytest.fixture(scope="session")
def gaussian():
    return forward.gaussian(GAUSS_AMPLITUDE, GAUSS_WIDTH)


@pytest.fixture(scope="session")
def gaussian_phases(gaussian):
    """Forward-solved Gaussian phase shifts for l = 0..4."""
    res = forward.phase_shifts(gaussian, range(5), tail="off")
    return PhaseShiftSet(res.ls, res.deltas.real)


@pytest.fixture(scope="session")
def even_phases(gaussian_phases):
    return gaussian_phases.subset("even")


@pytest.fixture(scope="session")
def odd_phases(gaussian_phases):
    return gaussian_phases.subset("odd")


@pytest.fixture(scope="session")
def fine_grid():
    return np.linspace(*FINE_GRID)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


class Table1:
    """n + 12C at 12 MeV (lab): input phase shifts and published columns."""

    ls = (0, 1, 2, 3, 4)
    re_delta = np.array([0.522, -0.737, -0.689, 0.172, 0.021])
    eta = np.array([0.580, 1.000, 0.560, 0.643, 0.831])
    L_g = np.array([-0.615 - 0.068j, 1.152 + 0.011j, 2.613 - 0.338j, 2.905 + 0.037j,
                    4.099 - 0.146j])
    L_a = np.array([-0.516 + 0.010j, 1.480 - 0.033j, 2.476 - 0.209j, 3.011 - 0.129j,
                    4.095 - 0.145j])
    delta_g = np.array([0.042, 0.044, 0.130, 0.128, 0.093])
    xi_g = np.array([0.043, 0.130, 0.013, 0.054, 0.009])
    delta_a = np.array([0.039, 0.303, 0.251, 0.163, 0.018])
    xi_a = np.array([0.125, 0.383, 0.005, 0.048, 0.007])

    @property
    def phases(self):
        return PhaseShiftSet.from_elasticities(self.ls, self.re_delta, self.eta)


@pytest.fixture(scope="session")
def table1():
    return Table1()
