import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
import numpy as np

from spinspace.fock import (
    FockState,
    ModeMismatchError,
    Statistics,
    ZeroStateError,
    apply_creation,
    build_from_monomials,
    inner_product,
    mode,
    mode_set,
    normalize,
    occupation_overlap,
)

from conftest import OUTPUT_MODES, random_state

C1U, C1D, D1U, D1D = mode("C1up"), mode("C1dn"), mode("D1up"), mode("D1dn")
SEEDS = st.integers(0, 2**32 - 1)
STATS = st.sampled_from(list(Statistics))


def vac(statistics):
    return FockState.vacuum(statistics, OUTPUT_MODES)


def test_mode_order_is_side_path_spin():
    labels = ["D2dn", "A1up", "C1dn", "C1up", "B2up", "A2dn"]
    ordered = sorted(mode(s) for s in labels)
    assert [str(m) for m in ordered] == ["A1up", "C1up", "C1dn", "A2dn", "B2up", "D2dn"]


def test_mode_label_round_trip():
    for m in mode_set((1, 2), "ABCD"):
        assert mode(str(m)) == m
    with pytest.raises(ValueError):
        mode("E1up")


def test_fermion_double_creation_vanishes():
    psi = apply_creation(apply_creation(vac("fermion"), C1U), C1U)
    assert psi.is_zero()


def test_boson_double_creation():
    psi = apply_creation(apply_creation(vac("boson"), C1U), C1U)
    (cfg, amp), = psi
    assert dict(psi.occupied(cfg)) == {C1U: 2}
    assert amp == pytest.approx(math.sqrt(2))
    assert psi.norm ** 2 == pytest.approx(2.0)


def test_fermion_operator_order_sign():
    forward = apply_creation(apply_creation(vac("fermion"), D1D), C1U)
    backward = apply_creation(apply_creation(vac("fermion"), C1U), D1D)
    (_, a), = forward
    (_, b), = backward
    assert a == 1
    assert b == -1


def test_unknown_mode_rejected():
    psi = FockState.vacuum("fermion", [C1U, C1D])
    with pytest.raises(ModeMismatchError):
        apply_creation(psi, D1U)


@pytest.mark.parametrize("statistics,ops,expected", [
    ("fermion", [C1U, D1D], {(C1U, 1), (D1D, 1)}),
    ("boson", [C1U, C1U], {(C1U, 2)}),
])
def test_build_from_monomials_single_term(statistics, ops, expected):
    psi = build_from_monomials([(1, ops)], statistics)
    (cfg, amp), = psi
    assert set(psi.occupied(cfg)) == expected
    assert amp == pytest.approx(1.0 if statistics == "fermion" else math.sqrt(2))


def test_build_from_monomials_pauli():
    assert build_from_monomials([(1, [C1U, C1U])], "fermion", OUTPUT_MODES).is_zero()


def test_build_from_monomials_is_not_renormalized():
    psi = build_from_monomials([(1, [C1U]), (1, [D1U])], "boson")
    assert psi.norm == pytest.approx(math.sqrt(2))


def test_inner_product_vacuum():
    assert inner_product(vac("boson"), vac("boson")) == 1


def test_inner_product_rejects_mismatch():
    with pytest.raises(ModeMismatchError):
        inner_product(vac("boson"), vac("fermion"))
    with pytest.raises(ModeMismatchError):
        inner_product(vac("boson"), FockState.vacuum("boson", [C1U]))


def test_normalize():
    psi = FockState("boson", (C1U,), {(1,): 2.0})
    unit, norm = normalize(psi)
    assert norm == 2.0
    assert unit.amplitudes == {(1,): 1.0}
    with pytest.raises(ZeroStateError):
        normalize(FockState.zero("boson", (C1U,)))


def test_pruning_drops_dust():
    psi = FockState("boson", (C1U,), {(0,): 1.0, (1,): 1e-13})
    assert len(psi) == 1


def test_fermion_occupancy_validated():
    with pytest.raises(ValueError):
        FockState("fermion", (C1U,), {(2,): 1.0})


def test_occupation_overlap_across_statistics():
    f = build_from_monomials([(1, [C1U, D1D])], "fermion", OUTPUT_MODES)
    b = build_from_monomials([(1, [C1U, D1D])], "boson", OUTPUT_MODES)
    assert occupation_overlap(f, b) == pytest.approx(1.0)
    b2 = build_from_monomials([(1 / math.sqrt(2), [C1U, C1U])], "boson", OUTPUT_MODES)
    assert occupation_overlap(f, b2) == 0


# --- properties ----------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(seed=SEEDS, k=st.integers(0, len(OUTPUT_MODES) - 1))
def test_fermion_creation_is_nilpotent(seed, k):
    rng = np.random.default_rng(seed)
    psi = random_state(rng, "fermion", per_side=(1, 1))
    m = OUTPUT_MODES[k]
    assert apply_creation(apply_creation(psi, m), m).is_zero()


@settings(max_examples=40, deadline=None)
@given(seed=SEEDS, statistics=STATS,
       pair=st.lists(st.integers(0, len(OUTPUT_MODES) - 1), min_size=2, max_size=2, unique=True))
def test_exchange_sign(seed, statistics, pair):
    rng = np.random.default_rng(seed)
    psi = random_state(rng, statistics, per_side=(1, 1))
    i, j = (OUTPUT_MODES[k] for k in pair)
    ij = apply_creation(apply_creation(psi, j), i)
    ji = apply_creation(apply_creation(psi, i), j)
    sign = -1 if statistics is Statistics.FERMION else 1
    diff = ij - ji.scaled(sign)
    assert diff.norm < 1e-12


@settings(max_examples=40, deadline=None)
@given(seed=SEEDS, statistics=STATS)
def test_inner_product_hermitian(seed, statistics):
    rng = np.random.default_rng(seed)
    a = random_state(rng, statistics)
    b = random_state(rng, statistics)
    assert inner_product(a, b) == pytest.approx(inner_product(b, a).conjugate(), abs=1e-12)
    assert inner_product(a, a) == pytest.approx(1.0, abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(seed=SEEDS, statistics=STATS)
def test_monomial_order_independence(seed, statistics):
    rng = np.random.default_rng(seed)
    terms = []
    for _ in range(5):
        k = rng.integers(1, 4)
        ops = [OUTPUT_MODES[i] for i in rng.integers(0, len(OUTPUT_MODES), size=k)]
        terms.append((complex(rng.normal(), rng.normal()), ops))
    a = build_from_monomials(terms, statistics, OUTPUT_MODES)
    b = build_from_monomials([terms[i] for i in rng.permutation(len(terms))], statistics, OUTPUT_MODES)
    assert (a - b).norm < 1e-12
