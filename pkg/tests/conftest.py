import math

import pytest

from spinspace.fock import FockState, Statistics, mode_set
from spinspace.optics import BeamSplitter
from spinspace.scenarios import ScenarioSpec, output_state

OUTPUT_MODES = mode_set((1, 2), ("C", "D"))
LOG2_3 = math.log2(3)


def random_state(rng, statistics, modes=OUTPUT_MODES, per_side=(2, 2), n_terms=6):
    """Random normalized state with a fixed particle count per side."""
    statistics = Statistics(statistics)
    modes = tuple(modes)
    by_side = {s: [i for i, m in enumerate(modes) if m.side == s] for s in (1, 2)}
    amps = {}
    while len(amps) < n_terms:
        occ = [0] * len(modes)
        for side, count in zip((1, 2), per_side):
            if statistics is Statistics.FERMION:
                picks = rng.choice(by_side[side], size=count, replace=False)
            else:
                picks = rng.choice(by_side[side], size=count, replace=True)
            for i in picks:
                occ[i] += 1
        amps[tuple(occ)] = complex(rng.normal(), rng.normal())
    state = FockState(statistics, modes, amps)
    return state.scaled(1 / state.norm)


@pytest.fixture(scope="session")
def fifty_fifty():
    return BeamSplitter.fifty_fifty()


@pytest.fixture(scope="session")
def outputs(fifty_fifty):
    """Post-beam-splitter states for both statistics and both sign classes at 50/50."""
    return {
        (st, signs): output_state(ScenarioSpec.from_signs(st, signs, fifty_fifty))
        for st in ("fermion", "boson")
        for signs in ("++", "+-", "-+", "--")
    }


# one "PASS/FAIL criterion: detail" line per acceptance check, echoed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
