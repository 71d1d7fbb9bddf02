import numpy as np
import pytest

from roughrisk import DecisionTable, attribute_weights, conditional_entropy, entropy, significance
from roughrisk.decision_table import partition
from roughrisk.weights import mutual_information, weights_from_significance

import oracles

H_BLOCKS_3113 = 1.8112781244591328  # H(3/8, 1/8, 1/8, 3/8)
H_D_GIVEN_AB = 0.6887218755408672   # 0.75 * H(2/3, 1/3)
H_D = 1.0
SIG_A = 0.12255624891826566
SIG_B = 0.31127812445913283


def test_entropy_example(t8):
    p = partition(t8, ("a", "b"))
    assert entropy(p, t8.n_objects) == pytest.approx(H_BLOCKS_3113, abs=1e-12)


def test_entropy_trivial_cases(t8):
    assert entropy(partition(t8, ()), 8) == 0.0
    # uniform split maximizes: the decision partition is 4/4
    assert entropy(partition(t8, ("d",)), 8) == pytest.approx(1.0, abs=0)


def test_entropy_coverage_validated(t8):
    p = partition(t8, ("a",))
    with pytest.raises(ValueError):
        entropy(p, 9)


def test_conditional_entropy_examples(t8):
    assert conditional_entropy(t8, ("a", "b")) == \
        pytest.approx(H_D_GIVEN_AB, abs=1e-12)
    assert conditional_entropy(t8, ("a",)) == pytest.approx(1.0, abs=0)
    assert conditional_entropy(t8, ("b",)) == \
        pytest.approx(1.0 - 0.18872187554086717, abs=1e-12)


def test_mutual_information_examples(t8):
    assert mutual_information(t8, ("a", "b")) == \
        pytest.approx(1.0 - H_D_GIVEN_AB, abs=1e-12)
    assert mutual_information(t8, ("b",)) == \
        pytest.approx(0.18872187554086717, abs=1e-12)


def test_significance_examples(t8):
    assert significance(t8, "a", ("a", "b")) == pytest.approx(SIG_A, abs=1e-12)
    assert significance(t8, "b", ("a", "b")) == pytest.approx(SIG_B, abs=1e-12)
    with pytest.raises(ValueError):
        significance(t8, "a", ("b",))


def test_weights_example(t8):
    w = attribute_weights(t8, ("a", "b"))
    assert w.attrs == ("a", "b")
    assert w.epsilon[0] == pytest.approx(0.28250, abs=1e-4)
    assert w.epsilon[1] == pytest.approx(0.71750, abs=1e-4)
    assert sum(w.epsilon) == pytest.approx(1.0, abs=1e-12)


def test_weights_ratio_is_geometric(t8):
    # with two attributes sqrt(s_b/s_a) / sqrt(s_a/s_b) = s_b/s_a
    w = attribute_weights(t8, ("a", "b"))
    assert w.epsilon[1] / w.epsilon[0] == pytest.approx(SIG_B / SIG_A, rel=1e-12)


def test_duplicated_attribute_zero_significance(t8):
    # a duplicate column changes no partition, so its removal changes
    # no entropy; the floor keeps weights positive
    dup = DecisionTable(
        objects=t8.objects,
        condition_attrs=("a", "b", "b2"),
        decision_attr="d",
        condition_values=np.column_stack(
            [t8.condition_values, t8.condition_values[:, 1]]
        ),
        decision_values=t8.decision_values,
    )
    assert significance(dup, "b2", ("a", "b", "b2")) == 0.0
    w = attribute_weights(dup, ("a", "b", "b2"))
    assert all(e > 0 for e in w.epsilon)
    assert sum(w.epsilon) == pytest.approx(1.0, abs=1e-12)


def test_independent_attribute_exactly_zero_mi():
    # perfectly balanced contingency: the integer short-circuit makes
    # the mutual information an exact float zero
    cond = np.array([[i % 3] for i in range(12)])
    dec = np.array([i // 6 for i in range(12)])
    dt = DecisionTable(
        objects=tuple(f"x{i}" for i in range(12)),
        condition_attrs=("a",), decision_attr="d",
        condition_values=cond, decision_values=dec,
    )
    assert mutual_information(dt, ("a",)) == 0.0


def test_entropy_bounds_property():
    # criterion 3: 0 <= H(D|X) <= H(D), and I = H(D) - H(D|X) >= 0
    rng = np.random.default_rng(401)
    for _ in range(1000):
        dt = oracles.random_table(rng)
        h_d = conditional_entropy(dt, ())
        k = int(rng.integers(0, len(dt.condition_attrs) + 1))
        attrs = tuple(
            dt.condition_attrs[i]
            for i in sorted(rng.choice(len(dt.condition_attrs), size=k,
                                       replace=False))
        )
        h = conditional_entropy(dt, attrs)
        assert -1e-12 <= h <= h_d + 1e-12
        assert mutual_information(dt, attrs) >= -1e-12


def test_conditional_entropy_nonincreasing_property():
    # criterion 3: refining the condition partition cannot raise H(D|X)
    rng = np.random.default_rng(402)
    for _ in range(1000):
        dt = oracles.random_table(rng)
        attrs = list(dt.condition_attrs)
        prev = conditional_entropy(dt, ())
        for i in range(len(attrs)):
            cur = conditional_entropy(dt, tuple(attrs[: i + 1]))
            assert cur <= prev + 1e-12
            prev = cur


def test_weights_sum_to_one_property():
    # criterion 3: normalization exact to 1e-12 on random tables
    rng = np.random.default_rng(403)
    for _ in range(1000):
        dt = oracles.random_table(rng)
        w = attribute_weights(dt, dt.condition_attrs)
        assert abs(sum(w.epsilon)) - 1.0 <= 1e-12
        assert all(e > 0 for e in w.epsilon)


def test_weights_from_significance_direct():
    w = weights_from_significance((0.2, 0.2))
    assert list(w) == [0.5, 0.5]
    with pytest.raises(ValueError):
        weights_from_significance(())
