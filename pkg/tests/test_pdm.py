import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import SWAP, I2, X, Z, brute_negativity, brute_pdm, brute_two_time
from qcausal import linalg, model
from qcausal.errors import DimensionError, IncompleteTableError, NonPositiveMarginalError
from qcausal.linalg import PauliString, pauli_matrix
from qcausal.pdm import (
    PDM,
    ExpectationTable,
    build_pdm,
    generate_table,
    marginal_at_time,
    negativity,
    reduce_pdm,
    sample_table,
    time_reverse,
    two_time_expectation,
)


def identity_scenario():
    return model.ScenarioConfig("cause_effect", rho=I2 / 2, channel=model.identity_channel())


def random_cause_effect(rng, n=1):
    d = 2**n
    return model.ScenarioConfig(
        "cause_effect",
        rho=model.random_density_matrix(d, rng),
        channel=model.random_channel(d, rng),
    )


def test_two_time_expectation_examples():
    ident = model.identity_channel()
    mp = model.measure_prepare_channel()
    assert abs(two_time_expectation(I2 / 2, ident, "I", "I") - 1) < 1e-12
    assert abs(two_time_expectation(I2 / 2, ident, "Z", "Z") - 1) < 1e-12
    plus = model.lambda_plus_state(1)
    assert abs(two_time_expectation(plus, mp, "X", "X")) < 1e-12
    assert abs(brute_two_time(plus, mp.kraus, X, X)) < 1e-12
    with pytest.raises(DimensionError):
        two_time_expectation(np.eye(4) / 4, ident, "ZZ", "Z")


@settings(max_examples=20)
@given(st.integers(0, 2**32 - 1))
def test_two_time_expectation_matches_outcome_enumeration(seed):
    r = np.random.default_rng(seed)
    sc = random_cause_effect(r)
    for s1 in linalg.all_pauli_strings(1):
        for s2 in linalg.all_pauli_strings(1):
            got = two_time_expectation(sc.rho, sc.channel, s1, s2)
            want = brute_two_time(sc.rho, sc.channel.kraus, pauli_matrix(s1), pauli_matrix(s2))
            assert abs(got - want) < 1e-12
            assert -1 - 1e-12 <= got <= 1 + 1e-12


def test_common_cause_product_table_factorizes(rng):
    ra, rb = model.random_density_matrix(2, rng), model.random_density_matrix(2, rng)
    t = generate_table(model.ScenarioConfig("common_cause", joint=np.kron(ra, rb)))
    for s1 in linalg.all_pauli_strings(1):
        for s2 in linalg.all_pauli_strings(1):
            want = np.trace(pauli_matrix(s1) @ ra).real * np.trace(pauli_matrix(s2) @ rb).real
            assert abs(t[s1, s2] - want) < 1e-12


def test_decohering_table_at_lambda_one():
    t = generate_table(model.decohering_scenario(1.0))
    nonzero = {
        (PauliString.from_index(1, a).labels, PauliString.from_index(1, b).labels): v
        for (a, b), v in t.values.items()
        if abs(v) > 1e-12
    }
    assert nonzero.keys() == {("I", "I"), ("X", "I"), ("Z", "Z")}
    assert all(abs(v - 1) < 1e-12 for v in nonzero.values())


def test_mixture_endpoint_reproduces_cause_effect():
    kw = dict(rho=model.lambda_plus_state(0.7), channel=model.measure_prepare_channel())
    ce = generate_table(model.ScenarioConfig("cause_effect", **kw))
    mix = generate_table(model.ScenarioConfig("mixture", joint=model.bell_state(), p=1.0, **kw))
    assert mix.values == ce.values


def test_build_pdm_identity_channel_is_half_swap():
    r = build_pdm(generate_table(identity_scenario()))
    assert np.abs(r.matrix - SWAP / 2).max() < 1e-15


@pytest.mark.parametrize("lam", [0.0, 0.3, 0.7, 1.0])
def test_build_pdm_decohering_closed_form(lam):
    r = build_pdm(generate_table(model.decohering_scenario(lam)))
    want = (np.eye(4) + lam * np.kron(X, I2) + np.kron(Z, Z)) / 4
    assert np.abs(r.matrix - want).max() < 1e-15


def test_build_pdm_common_cause_recovers_joint_state(rng):
    joint = model.random_density_matrix(4, rng)
    r = build_pdm(generate_table(model.ScenarioConfig("common_cause", joint=joint)))
    assert np.abs(r.matrix - joint).max() < 1e-12
    assert negativity(r.matrix) < 1e-9


def test_build_pdm_matches_label_loop_oracle(rng):
    sc = random_cause_effect(rng, n=2)
    t = generate_table(sc)
    oracle = brute_pdm(lambda a, b: t[a, b], 2, 2)
    assert np.abs(build_pdm(t).matrix - oracle).max() < 1e-12


def test_build_pdm_rejects_incomplete_or_unnormalized():
    t = generate_table(model.decohering_scenario(0.5))
    del t.values[(1, 3)]
    with pytest.raises(IncompleteTableError) as err:
        build_pdm(t)
    assert ("X", "Z") in err.value.missing
    t = generate_table(model.decohering_scenario(0.5))
    t["I", "I"] = 0.9
    with pytest.raises(ValueError, match="normalization"):
        build_pdm(t)


@settings(max_examples=20)
@given(st.integers(0, 2**32 - 1), st.floats(0, 1))
def test_build_pdm_is_linear(seed, p):
    r = np.random.default_rng(seed)
    t1, t2 = generate_table(random_cause_effect(r)), generate_table(random_cause_effect(r))
    lhs = build_pdm(t1.combine(t2, p)).matrix
    rhs = p * build_pdm(t1).matrix + (1 - p) * build_pdm(t2).matrix
    assert np.abs(lhs - rhs).max() < 1e-12


@settings(max_examples=20)
@given(st.integers(0, 2**32 - 1))
def test_correlator_round_trip_and_pdm_invariants(seed):
    r = np.random.default_rng(seed)
    sc = random_cause_effect(r)
    t = generate_table(sc)
    pdm = build_pdm(t)
    for (a, b), v in t.values.items():
        assert abs(pdm.expectation(PauliString.from_index(1, a), PauliString.from_index(1, b)) - v) < 1e-10
    assert linalg.hermiticity_residual(pdm.matrix) < 1e-10
    assert abs(np.trace(pdm.matrix) - 1) < 1e-9
    assert np.abs(marginal_at_time(pdm, 1) - sc.rho).max() < 1e-10


def test_negativity_examples():
    assert abs(negativity(SWAP / 2) - 1) < 1e-12
    assert abs(negativity(model.bell_state())) < 1e-12
    for lam in np.linspace(0, 1, 6):
        r = build_pdm(generate_table(model.decohering_scenario(lam)))
        brute = brute_negativity(r.matrix)
        assert abs(brute - (math.sqrt(1 + lam**2) - 1)) < 1e-12
        assert abs(negativity(r) - brute) < 1e-12


@settings(max_examples=30)
@given(st.integers(0, 2**32 - 1))
def test_negativity_zero_iff_psd(seed):
    r = np.random.default_rng(seed)
    rho = model.random_density_matrix(4, r)
    assert abs(negativity(rho)) < 1e-9
    a = r.standard_normal((4, 4)) + 1j * r.standard_normal((4, 4))
    h = a + a.conj().T
    f = negativity(h)
    assert f >= -1e-9
    assert (f > 1e-9) == (np.linalg.eigvalsh(h)[0] < -1e-9)


def test_time_reverse():
    half_swap = PDM(SWAP / 2, 1, 1)
    assert np.abs(time_reverse(half_swap).matrix - SWAP / 2).max() == 0
    r = build_pdm(generate_table(model.decohering_scenario(0.4)))
    back = time_reverse(time_reverse(r))
    assert np.array_equal(back.matrix, r.matrix)
    assert time_reverse(r).slots == ("t2", "t1")
    with pytest.raises(DimensionError):
        time_reverse(PDM(np.eye(8) / 8, 1, 2))


@settings(max_examples=20)
@given(st.integers(0, 2**32 - 1))
def test_time_reverse_preserves_negativity(seed):
    r = build_pdm(generate_table(random_cause_effect(np.random.default_rng(seed))))
    assert abs(negativity(time_reverse(r)) - negativity(r)) < 1e-10


def test_time_reverse_matches_swapped_table(rng):
    t = generate_table(random_cause_effect(rng))
    assert np.abs(time_reverse(build_pdm(t)).matrix - build_pdm(t.swapped()).matrix).max() < 1e-12


def acdb_scenario(lam=0.9, theta=3 * np.pi / 8):
    # (A, C) at t1 map onto (D, B) at t2: partial swap A -> B, C -> D untouched
    ch = model.tensor_channels(model.partial_swap_channel(theta), model.identity_channel())
    ch = model.permute_output(ch, [2, 2], [1, 0])
    rho = np.kron(model.lambda_plus_state(lam), model.basis_state("0"))
    return model.ScenarioConfig("cause_effect", rho=rho, channel=ch)


def test_reduce_pdm_matches_direct_construction():
    full = build_pdm(generate_table(acdb_scenario()))
    reduced = reduce_pdm(full, [0], [1])
    direct = build_pdm(generate_table(model.partial_swap_scenario(0.9, 3 * np.pi / 8)))
    assert np.abs(reduced.matrix - direct.matrix).max() < 1e-10
    via_table = build_pdm(generate_table(acdb_scenario()).subtable([0], [1]))
    assert np.abs(reduced.matrix - via_table.matrix).max() < 1e-10
    assert abs(np.trace(reduced.matrix) - 1) < 1e-12


def test_reduce_pdm_keep_all_and_errors():
    full = build_pdm(generate_table(acdb_scenario()))
    assert np.abs(reduce_pdm(full, [0, 1], [0, 1]).matrix - full.matrix).max() == 0
    with pytest.raises(DimensionError):
        reduce_pdm(full, [2], [0])
    with pytest.raises(DimensionError):
        reduce_pdm(full, [], [0])


def test_subtable_needs_only_identity_padded_entries():
    t = generate_table(acdb_scenario())
    keep = {
        (a, b): v
        for (a, b), v in t.values.items()
        if PauliString.from_index(2, a).labels[1] == "I" and PauliString.from_index(2, b).labels[0] == "I"
    }
    partial = ExpectationTable(2, 2, keep)
    assert not partial.is_complete()
    sub = partial.subtable([0], [1])
    assert sub.is_complete()
    assert np.abs(build_pdm(sub).matrix - build_pdm(t.subtable([0], [1])).matrix).max() == 0


def test_marginals():
    half_swap = PDM(SWAP / 2, 1, 1)
    for slot in (1, 2):
        assert np.abs(marginal_at_time(half_swap, slot) - I2 / 2).max() < 1e-15
    r = build_pdm(generate_table(model.decohering_scenario(0.7)))
    assert np.abs(marginal_at_time(r, 1) - (I2 + 0.7 * X) / 2).max() < 1e-15
    joint = model.bell_state("psi-")
    r = build_pdm(generate_table(model.ScenarioConfig("common_cause", joint=joint)))
    assert np.abs(marginal_at_time(r, 2) - linalg.partial_trace(joint, [2, 2], [1])).max() < 1e-12
    bad = PDM(np.diag([1.2, 0, -0.2, 0]).astype(complex), 1, 1)
    with pytest.raises(NonPositiveMarginalError):
        marginal_at_time(bad, 1)


def test_table_csv_round_trip(tmp_path):
    t = generate_table(acdb_scenario())
    path = tmp_path / "table.csv"
    t.to_csv(path)
    assert path.read_text().splitlines()[0] == "i1_labels,i2_labels,value"
    back = ExpectationTable.from_csv(path)
    assert (back.n1, back.n2) == (2, 2)
    assert back.values == t.values


def test_sampled_table_is_noisy_but_close(rng):
    exact = generate_table(model.decohering_scenario(0.7))
    noisy = sample_table(exact, 20000, rng)
    err = max(abs(noisy.values[k] - exact.values[k]) for k in exact.values)
    assert 0 < err < 0.05
    assert noisy[("I", "I")] == 1.0
    again = generate_table(model.decohering_scenario(0.7), shots=100, rng=np.random.default_rng(1))
    assert again.values == generate_table(
        model.decohering_scenario(0.7), shots=100, rng=np.random.default_rng(1)
    ).values
