import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinspace.entanglement import (
    SchmidtResult,
    entanglement_entropy,
    entropy_ebits,
    path_amplitudes,
    reconstruct,
    schmidt,
    spatial_entropy_ebits,
    tensor,
)
from spinspace.fock import (
    ZeroStateError,
    build_from_monomials,
    mode,
    mode_set,
    normalize,
)
from spinspace.measurement import project_sx_zero
from spinspace.optics import apply_mode_map, random_unitary, unitary_map
from spinspace.scenarios import SIGN_CHOICES, ScenarioSpec, initial_state

from conftest import LOG2_3, OUTPUT_MODES, random_state

SEEDS = st.integers(0, 2**32 - 1)
STATS = st.sampled_from(["fermion", "boson"])
SIDE1 = mode_set((1,), "CD")
SIDE2 = mode_set((2,), "CD")


def _state(statistics, terms, modes=OUTPUT_MODES):
    return normalize(build_from_monomials(
        [(c, [mode(x) for x in ops.split()]) for c, ops in terms], statistics, modes))[0]


def test_product_state_rank_one():
    left = _state("fermion", [(1, "C1up D1dn"), (1j, "C1dn D1up")], SIDE1)
    right = _state("fermion", [(1, "C2up C2dn"), (-1, "D2up D2dn")], SIDE2)
    res = schmidt(tensor(left, right))
    assert res.rank == 1
    assert entropy_ebits(res) == 0.0


@pytest.mark.parametrize("statistics", ["fermion", "boson"])
@pytest.mark.parametrize("signs", SIGN_CHOICES)
def test_initial_state_schmidt(statistics, signs):
    res = schmidt(initial_state(ScenarioSpec.from_signs(statistics, signs)))
    assert res.rank == 4
    assert res.coefficients == pytest.approx([0.5] * 4, abs=1e-12)
    assert entropy_ebits(res) == pytest.approx(2.0, abs=1e-12)


def test_three_term_state():
    h = 0.5
    psi = _state("fermion", [
        (h, "C1up D1dn C2up D2dn"), (h, "C1up D1dn C2dn D2up"),
        (h, "C1dn D1up C2up D2dn"), (h, "C1dn D1up C2dn D2up"),
        (-1, "C1up D1up C2dn D2dn"), (-1, "C1dn D1dn C2up D2up")])
    res = schmidt(psi)
    assert res.rank == 3
    assert res.coefficients == pytest.approx([1 / math.sqrt(3)] * 3, abs=1e-12)
    assert entropy_ebits(res) == pytest.approx(LOG2_3, abs=1e-12)
    assert LOG2_3 == pytest.approx(1.584962500721156, abs=1e-15)


def test_entropy_of_given_coefficients():
    assert entropy_ebits(SchmidtResult(np.array([1.0]), (), ())) == 0.0
    assert entropy_ebits(SchmidtResult(np.full(4, 0.5), (), ())) == pytest.approx(2.0)
    assert entropy_ebits(SchmidtResult(np.full(3, 3 ** -0.5), (), ())) == pytest.approx(LOG2_3)


def test_unnormalized_state_rejected():
    psi = build_from_monomials([(2, [mode("C1up"), mode("C2up")])], "boson", OUTPUT_MODES)
    with pytest.raises(ZeroStateError):
        schmidt(psi)
    with pytest.raises(ZeroStateError):
        spatial_entropy_ebits(psi)


@pytest.mark.parametrize("statistics", ["fermion", "boson"])
def test_spatial_entropy_of_sx_zero_post_state(outputs, statistics):
    post = project_sx_zero(outputs[statistics, "++"]).state
    mat, pats1, pats2 = path_amplitudes(post)
    assert len(pats1) == len(pats2) == 3
    assert spatial_entropy_ebits(post) == pytest.approx(1.0, abs=1e-9)


def test_spatial_entropy_of_path_product_state():
    psi = _state("fermion", [(1, "C1up C1dn C2up C2dn")])
    assert spatial_entropy_ebits(psi) == 0.0
    psi = _state("boson", [(1, "C1up C1dn C2up C2dn"), (1, "C1up C1dn C2up C2up")])
    assert spatial_entropy_ebits(psi) == pytest.approx(0.0, abs=1e-12)


def test_spatial_entropy_equals_schmidt_when_spin_is_common():
    # same spin content in both path branches, path entangled across sides
    psi = _state("boson", [(1, "C1up C1dn C2up C2dn"), (1, "D1up D1dn D2up D2dn")])
    assert spatial_entropy_ebits(psi) == pytest.approx(1.0, abs=1e-12)
    assert entanglement_entropy(psi) == pytest.approx(1.0, abs=1e-12)


def test_spatial_entropy_with_pattern_spin_labels():
    # spin content differs between patterns but is fixed by each side's pattern
    psi = _state("fermion", [(1, "C1up D1up C2up C2dn"), (1, "C1up C1dn D2up D2dn")])
    assert spatial_entropy_ebits(psi) == pytest.approx(1.0, abs=1e-12)


def test_spatial_entropy_undefined_when_spin_and_path_entangled():
    # one path block carries spin entanglement, the other does not
    psi = _state("fermion", [(1, "C1up D1dn C2up D2dn"), (1, "C1dn D1up C2dn D2up"),
                             (1, "C1up C1dn C2up C2dn")])
    with pytest.raises(ValueError):
        spatial_entropy_ebits(psi)


# --- properties ------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(seed=SEEDS, statistics=STATS)
def test_schmidt_reconstruction(seed, statistics):
    psi = random_state(np.random.default_rng(seed), statistics, n_terms=8)
    res = schmidt(psi)
    assert sum(res.coefficients ** 2) == pytest.approx(1.0, abs=1e-9)
    assert list(res.coefficients) == sorted(res.coefficients, reverse=True)
    back = reconstruct(res).with_modes(psi.modes)
    assert all(abs(back.amplitudes.get(c, 0) - a) < 1e-9 for c, a in psi.amplitudes.items())
    assert all(abs(psi.amplitudes.get(c, 0) - a) < 1e-9 for c, a in back.amplitudes.items())


def _local_modes(kind):
    if kind == "spin":
        return mode_set((1,), "C")
    if kind == "path":
        return tuple(m for m in SIDE1 if m.spin == 0)
    return SIDE1


@settings(max_examples=40, deadline=None)
@given(seed=SEEDS, statistics=STATS, kind=st.sampled_from(["spin", "path", "both"]),
       side=st.sampled_from([1, 2]))
def test_entropy_invariant_under_local_unitary(seed, statistics, kind, side):
    rng = np.random.default_rng(seed)
    psi = random_state(rng, statistics, n_terms=8)
    modes = _local_modes(kind)
    if side == 2:
        modes = tuple(type(m)(2, m.path, m.spin) for m in modes)
    u = random_unitary(len(modes), rng)
    out = apply_mode_map(psi, unitary_map(modes, u))
    out = normalize(out)[0]
    assert entanglement_entropy(out) == pytest.approx(entanglement_entropy(psi), abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(seed=SEEDS, statistics=STATS)
def test_entropy_bounds(seed, statistics):
    psi = random_state(np.random.default_rng(seed), statistics, n_terms=12)
    res = schmidt(psi)
    assert 0.0 <= entropy_ebits(res) <= math.log2(res.rank) + 1e-12


@pytest.mark.parametrize("statistics", ["fermion", "boson"])
def test_entropies_in_range_for_scenarios(outputs, statistics):
    from spinspace.report import build_report

    for signs in SIGN_CHOICES:
        rep = build_report(ScenarioSpec.from_signs(statistics, signs))
        for b in rep["branches"]:
            for key in ("post_state_entropy_ebits", "spatial_entropy_ebits"):
                if b[key] is not None:
                    assert -1e-12 <= b[key] <= 2.0 + 1e-12
