"""Unit and property tests for the finite-alphabet probability core."""

import math
from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mtsc_bounds import (
    Channel,
    InvalidDistributionError,
    JointPmf,
    VariableError,
    binary_entropy,
    conditional_mutual_information,
    entropy,
    mutual_information,
)

LN2 = math.log(2.0)


def uniform_bit(name):
    return JointPmf(((name, 2),), np.array([0.5, 0.5]))


# ---------------------------------------------------------------------------
# Construction contracts
# ---------------------------------------------------------------------------


def test_joint_rejects_negative_entries():
    with pytest.raises(InvalidDistributionError):
        JointPmf((("A", 2),), np.array([1.1, -0.1]))


def test_joint_rejects_bad_normalization():
    with pytest.raises(InvalidDistributionError):
        JointPmf((("A", 2),), np.array([0.6, 0.5]))


def test_joint_rejects_duplicate_names():
    with pytest.raises(VariableError):
        JointPmf((("A", 2), ("A", 2)), np.full(4, 0.25))


def test_joint_rejects_wrong_length():
    with pytest.raises(InvalidDistributionError):
        JointPmf((("A", 2), ("B", 2)), np.array([0.5, 0.5]))


def test_channel_rejects_nonstochastic_rows():
    with pytest.raises(InvalidDistributionError):
        Channel((("A", 2),), ("B", 2), np.array([[0.5, 0.5], [0.7, 0.2]]))
    with pytest.raises(InvalidDistributionError):
        Channel((("A", 2),), ("B", 2), np.array([[1.2, -0.2], [0.5, 0.5]]))


def test_probs_are_immutable():
    joint = uniform_bit("A")
    with pytest.raises(ValueError):
        joint.probs[0] = 0.3


# ---------------------------------------------------------------------------
# extend / marginalize / product
# ---------------------------------------------------------------------------


def test_extend_identity_channel_copies():
    joint = uniform_bit("Y")
    ident = Channel((("Y", 2),), ("U", 2), np.eye(2))
    out = joint.extend(ident)
    table = out.table
    assert table[0, 0] == 0.5 and table[1, 1] == 0.5
    assert table[0, 1] == 0.0 and table[1, 0] == 0.0


def test_extend_erasure_channel_hits_p_exactly():
    p = 0.3
    joint = uniform_bit("Y")
    # output symbols: 0 -> copy of Y=0, 1 -> erasure, 2 -> copy of Y=1
    rows = np.array([[1 - p, p, 0.0], [0.0, p, 1 - p]])
    out = joint.extend(Channel((("Y", 2),), ("U", 3), rows))
    assert out.marginalize(("U",)).table[1] == p


def test_extend_validates_inputs():
    joint = uniform_bit("Y")
    with pytest.raises(VariableError):
        joint.extend(Channel((("Q", 2),), ("U", 2), np.eye(2)))
    with pytest.raises(VariableError):
        joint.extend(Channel((("Y", 2),), ("Y", 2), np.eye(2)))


def test_extend_twice_with_correlated_selectors_gives_three_fifths():
    # Binary erasure CEO instance (p = 1/2, two encoders) with the
    # correlated on/off pair (W1, W2) ~ [[1/5, 2/5], [2/5, 0]]:
    # Pr(U1 = 0, U2 = 0) = Pr(N1 W1 = 0, N2 W2 = 0) = 3/5.
    y0 = JointPmf((("Y0", 2),), np.array([0.5, 0.5]))
    noisy = np.array([[0.5, 0.5, 0.0], [0.0, 0.5, 0.5]])  # Y_l = N_l * Y0
    joint = y0.extend(Channel((("Y0", 2),), ("Y1", 3), noisy))
    joint = joint.extend(Channel((("Y0", 2),), ("Y2", 3), noisy))
    w = JointPmf((("W", 4),), np.array([0.2, 0.4, 0.4, 0.0]))  # w = 2*w1 + w2
    joint = joint.product(w)
    for l in (1, 2):
        rows = np.zeros((3 * 4, 3))
        for y in range(3):
            for wv in range(4):
                w_l = (wv >> 1) & 1 if l == 1 else wv & 1
                rows[y * 4 + wv, (y - 1) * w_l + 1] = 1.0
        joint = joint.extend(Channel(((f"Y{l}", 3), ("W", 4)), (f"U{l}", 3), rows))
    pu = joint.marginalize(("U1", "U2")).table
    assert pu[1, 1] == pytest.approx(0.6, abs=1e-15)


def test_marginalize_independent_pair():
    a = JointPmf((("A", 2),), np.array([0.25, 0.75]))
    b = JointPmf((("B", 3),), np.array([0.2, 0.3, 0.5]))
    joint = a.product(b)
    np.testing.assert_allclose(joint.marginalize(("A",)).probs, a.probs, atol=0)
    np.testing.assert_allclose(joint.marginalize(("B",)).probs, b.probs, atol=0)


def test_marginalize_selector_pair_gives_marginal():
    w = JointPmf((("W1", 2), ("W2", 2)), np.array([0.2, 0.4, 0.4, 0.0]))
    np.testing.assert_allclose(w.marginalize(("W1",)).probs, [0.6, 0.4], atol=1e-15)


def test_marginalize_all_vars_is_identity():
    w = JointPmf((("W1", 2), ("W2", 2)), np.array([0.2, 0.4, 0.4, 0.0]))
    out = w.marginalize(("W1", "W2"))
    np.testing.assert_array_equal(out.probs, w.probs)
    assert out.variables == w.variables


def test_marginalize_errors():
    joint = uniform_bit("A")
    with pytest.raises(VariableError):
        joint.marginalize(())
    with pytest.raises(VariableError):
        joint.marginalize(("Q",))


def test_product_rejects_shared_names():
    with pytest.raises(VariableError):
        uniform_bit("A").product(uniform_bit("A"))


def test_reordered_permutes():
    w = JointPmf((("A", 2), ("B", 3)), np.arange(6) / 15.0)
    out = w.reordered(("B", "A"))
    np.testing.assert_array_equal(out.table, w.table.T)


# ---------------------------------------------------------------------------
# Information measures
# ---------------------------------------------------------------------------


def test_mi_independent_bits_is_zero():
    joint = uniform_bit("Y1").product(uniform_bit("Y2"))
    assert abs(mutual_information(joint, ("Y1",), ("Y2",))) <= 1e-15


def test_mi_copied_bit_is_ln2():
    joint = JointPmf((("Y1", 2), ("Y2", 2)), np.array([0.5, 0.0, 0.0, 0.5]))
    assert mutual_information(joint, ("Y1",), ("Y2",)) == pytest.approx(LN2, abs=1e-15)


def test_cmi_validates_sets():
    joint = uniform_bit("A").product(uniform_bit("B"))
    with pytest.raises(VariableError):
        conditional_mutual_information(joint, ("A",), ())
    with pytest.raises(VariableError):
        conditional_mutual_information(joint, ("A",), ("A",))
    with pytest.raises(VariableError):
        conditional_mutual_information(joint, ("A",), ("B",), ("A",))
    with pytest.raises(VariableError):
        conditional_mutual_information(joint, ("A",), ("Q",))


def test_entropy_basic_identities():
    joint = uniform_bit("A").product(uniform_bit("B"))
    assert entropy(joint, ("A",)) == pytest.approx(LN2, abs=1e-15)
    assert entropy(joint, ("A", "B")) == pytest.approx(2 * LN2, abs=1e-15)
    assert entropy(joint, ("A",), ("B",)) == pytest.approx(LN2, abs=1e-15)


def test_binary_entropy_endpoints_and_half():
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(0.5) == pytest.approx(LN2, abs=1e-15)
    with pytest.raises(ValueError):
        binary_entropy(-0.01)
    with pytest.raises(ValueError):
        binary_entropy(1.01)


def test_binary_entropy_against_extended_precision():
    # Independent oracle: the same formula evaluated in extended precision.
    x = 0.774597
    xl = np.longdouble(x)
    want = float(-xl * np.log(xl) - (1 - xl) * np.log(1 - xl))
    assert binary_entropy(x) == pytest.approx(want, abs=1e-15)
    assert binary_entropy(x) == pytest.approx(0.5336617905842673, abs=1e-12)


# ---------------------------------------------------------------------------
# Property tests
# ---------------------------------------------------------------------------


def joints(min_vars=3, max_vars=4):
    """Random dense joints over 2-3 sized alphabets."""

    @st.composite
    def build(draw):
        n_vars = draw(st.integers(min_vars, max_vars))
        sizes = [draw(st.sampled_from([2, 3])) for _ in range(n_vars)]
        total = int(np.prod(sizes))
        weights = draw(
            st.lists(
                st.floats(0.01, 1.0, allow_nan=False), min_size=total, max_size=total
            )
        )
        probs = np.asarray(weights)
        probs = probs / probs.sum()
        names = [f"V{i}" for i in range(n_vars)]
        return JointPmf(tuple(zip(names, sizes)), probs)

    return build()


@settings(max_examples=60, deadline=None)
@given(joints())
def test_chain_rule(joint):
    names = joint.names
    a, b, c, d = [names[0]], [names[1]], [names[2]], list(names[3:])
    lhs = conditional_mutual_information(joint, a, b + c, d)
    rhs = conditional_mutual_information(joint, a, b, d) + conditional_mutual_information(
        joint, a, c, b + d
    )
    assert lhs == pytest.approx(rhs, abs=1e-10)


@settings(max_examples=60, deadline=None)
@given(joints())
def test_nonnegativity(joint):
    names = joint.names
    assert conditional_mutual_information(joint, [names[0]], [names[1]], list(names[2:])) >= -1e-12
    assert entropy(joint, [names[0]], list(names[1:])) >= -1e-12


@settings(max_examples=40, deadline=None)
@given(joints(min_vars=2, max_vars=3), st.integers(0, 2**32 - 1))
def test_data_processing_on_composed_channels(joint, seed):
    rng = np.random.default_rng(seed)
    b_name, b_size = joint.variables[-1]
    rows = rng.dirichlet(np.ones(2), size=b_size)
    extended = joint.extend(Channel(((b_name, b_size),), ("C", 2), rows))
    a = [joint.names[0]]
    i_ab = mutual_information(extended, a, [b_name])
    i_ac = mutual_information(extended, a, ["C"])
    assert i_ac <= i_ab + 1e-10


@settings(max_examples=40, deadline=None)
@given(joints(min_vars=2, max_vars=3), st.integers(0, 2**32 - 1))
def test_extend_marginalize_round_trip(joint, seed):
    rng = np.random.default_rng(seed)
    name, size = joint.variables[0]
    rows = rng.dirichlet(np.ones(3), size=size)
    extended = joint.extend(Channel(((name, size),), ("NEW", 3), rows))
    back = extended.marginalize(joint.names)
    assert np.max(np.abs(back.probs - joint.probs)) <= 1e-12
    assert back.variables == joint.variables


def test_extend_conditional_law_matches_rows():
    rng = np.random.default_rng(5)
    joint = uniform_bit("A").product(JointPmf((("B", 3),), np.array([0.2, 0.5, 0.3])))
    rows = rng.dirichlet(np.ones(2), size=6)
    chan = Channel((("A", 2), ("B", 3)), ("C", 2), rows)
    table = joint.extend(chan).table
    for a, b in product(range(2), range(3)):
        mass = table[a, b].sum()
        np.testing.assert_allclose(table[a, b] / mass, rows[a * 3 + b], atol=1e-12)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------


def test_json_round_trip_bit_exact():
    rng = np.random.default_rng(11)
    probs = rng.dirichlet(np.ones(12))
    joint = JointPmf((("A", 2), ("B", 2), ("C", 3)), probs)
    again = JointPmf.from_json(joint.to_json())
    assert np.array_equal(again.probs, joint.probs)
    assert again.variables == joint.variables

    rows = rng.dirichlet(np.ones(3), size=4)
    chan = Channel((("A", 2), ("B", 2)), ("C", 3), rows)
    again = Channel.from_json(chan.to_json())
    assert np.array_equal(again.rows, chan.rows)
    assert again.inputs == chan.inputs and again.output == chan.output


def test_cmi_against_fraction_oracle():
    # Brute-force oracle with exact rational masses on a handcrafted joint.
    atoms = {}
    for a, b, c in product(range(2), range(2), range(2)):
        atoms[(a, b, c)] = Fraction(1 + a + 2 * b * c, 14)
    total = sum(atoms.values())
    atoms = {k: v / total for k, v in atoms.items()}

    def h_of(fn):
        masses = {}
        for atom, m in atoms.items():
            key = fn(atom)
            masses[key] = masses.get(key, Fraction(0)) + m
        return -sum(float(m) * math.log(float(m)) for m in masses.values() if m > 0)

    want = (
        h_of(lambda t: (t[0], t[2]))
        + h_of(lambda t: (t[1], t[2]))
        - h_of(lambda t: t)
        - h_of(lambda t: t[2])
    )
    probs = np.array([float(atoms[(a, b, c)]) for a, b, c in product(range(2), repeat=3)])
    joint = JointPmf((("A", 2), ("B", 2), ("C", 2)), probs)
    got = conditional_mutual_information(joint, ("A",), ("B",), ("C",))
    assert got == pytest.approx(want, abs=1e-14)
