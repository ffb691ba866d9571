import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ocell.rootsys import (
    Weight,
    bruhat_leq,
    build_root_system,
    dot_action,
    dot_action_matrix,
    from_label,
    is_dot_antidominant,
    l_lambda,
    orbit_data,
)

from oracles import bruhat_leq_by_subwords, roots_by_reflection_closure

ALL_LABELS = ["A1", "A2", "A3", "B2", "G2"]
EXPECTED_POSITIVE_COUNT = {"A1": 1, "A2": 3, "A3": 6, "B2": 4, "G2": 6}


@pytest.mark.parametrize("label", ALL_LABELS)
def test_cartan_matrix_shape(label):
    rs = from_label(label)
    for i in range(rs.rank):
        assert rs.cartan_matrix[i][i] == 2
        for j in range(rs.rank):
            if i != j:
                assert rs.cartan_matrix[i][j] <= 0


@pytest.mark.parametrize("label", ALL_LABELS)
def test_positive_root_counts_and_heights(label):
    rs = from_label(label)
    assert rs.num_positive == EXPECTED_POSITIVE_COUNT[label]
    heights = [rs.height(k) for k in range(rs.num_positive)]
    assert heights == sorted(heights)


def test_positive_roots_against_reflection_closure():
    for label in ALL_LABELS:
        rs = from_label(label)
        assert sorted(rs.positive_roots) == roots_by_reflection_closure(rs.cartan_matrix)


def test_a2_positive_roots_order():
    rs = from_label("A2")
    assert rs.positive_roots == ((0, 1), (1, 0), (1, 1)) or rs.positive_roots == ((1, 0), (0, 1), (1, 1))
    # height order puts alpha1 + alpha2 last
    assert rs.positive_roots[2] == (1, 1)


def test_g2_max_height():
    rs = from_label("G2")
    assert max(rs.height(k) for k in range(rs.num_positive)) == 5


def test_symmetrizer_symmetrizes():
    for label in ALL_LABELS:
        rs = from_label(label)
        n = rs.rank
        for i in range(n):
            for j in range(n):
                assert rs.symmetrizer[i] * rs.cartan_matrix[i][j] == rs.symmetrizer[j] * rs.cartan_matrix[j][i]


def test_weyl_group_orders():
    orders = {"A1": 2, "A2": 6, "A3": 24, "B2": 8, "G2": 12}
    for label, n in orders.items():
        assert len(from_label(label).weyl_elements()) == n


def test_longest_element_involution():
    for label in ALL_LABELS:
        rs = from_label(label)
        w0 = rs.longest_element()
        lengths = [w.length for w in rs.weyl_elements()]
        assert lengths.count(w0.length) == 1
        assert w0.length == rs.num_positive
        assert rs.multiply(w0, w0).length == 0


def test_dot_action_sl2():
    rs = from_label("A1")
    s = rs.element_from_word((0,))
    assert dot_action(rs, s, Weight((0,))).as_ints() == (-2,)
    assert dot_action(rs, s, Weight((-1,))).as_ints() == (-1,)


def test_dot_action_a2_longest():
    rs = from_label("A2")
    w0 = rs.longest_element()
    assert dot_action(rs, w0, Weight((0, 0))).as_ints() == (-2, -2)


@pytest.mark.parametrize("label", ALL_LABELS)
def test_dot_action_word_vs_matrix(label):
    rs = from_label(label)
    lam = Weight(tuple(range(-2, -2 + rs.rank)))
    for w in rs.weyl_elements():
        assert dot_action(rs, w, lam) == dot_action_matrix(rs, w, lam)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(min_value=-4, max_value=4), min_size=2, max_size=2),
       st.data())
def test_dot_action_inverse_roundtrip(coords, data):
    label = data.draw(st.sampled_from(["A2", "B2", "G2"]))
    rs = from_label(label)
    lam = Weight(tuple(coords))
    for w in rs.weyl_elements():
        winv = rs.inverse(w)
        assert dot_action(rs, w, dot_action(rs, winv, lam)) == lam


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(min_value=-3, max_value=3), min_size=2, max_size=2))
def test_dot_action_respects_braid_relations_b2(coords):
    # s1 s2 s1 s2 = s2 s1 s2 s1 in B2; apply both words letter by letter
    rs = from_label("B2")
    lam = Weight(tuple(coords))
    w1 = rs.element_from_word((0, 1, 0, 1))
    w2 = rs.element_from_word((1, 0, 1, 0))
    assert w1 == w2
    assert dot_action(rs, w1, lam) == dot_action(rs, w2, lam)


def test_orbit_data_sl2():
    rs = from_label("A1")
    orbit, stab, reps = orbit_data(rs, Weight((-4,)))
    assert sorted(w.as_ints() for w in orbit) == [(-4,), (2,)]
    assert [w.length for w in stab] == [0]
    assert sorted(r.reduced_word for r in reps) == [(), (0,)]

    orbit, stab, reps = orbit_data(rs, Weight((-1,)))
    assert [w.as_ints() for w in orbit] == [(-1,)]
    assert len(stab) == 2


def test_orbit_data_a2_regular():
    rs = from_label("A2")
    orbit, stab, reps = orbit_data(rs, Weight((-2, -2)))
    assert len(orbit) == 6
    assert len(stab) == 1
    assert len({r.matrix for r in reps}) == 6


def test_l_lambda_values():
    rs = from_label("A1")
    assert l_lambda(rs, Weight((-4,))) == 1
    assert l_lambda(rs, Weight((-1,))) == 0
    rs2 = from_label("A2")
    assert l_lambda(rs2, Weight((-2, -2))) == 3


def test_dot_antidominance():
    rs = from_label("A1")
    assert is_dot_antidominant(rs, Weight((-1,)))
    assert is_dot_antidominant(rs, Weight((-4,)))
    assert not is_dot_antidominant(rs, Weight((0,)))


def test_bruhat_trivial_cases():
    rs = from_label("A2")
    e = rs.identity_element()
    s1s2 = rs.element_from_word((0, 1))
    s1 = rs.element_from_word((0,))
    s2 = rs.element_from_word((1,))
    assert bruhat_leq(rs, e, s1s2)
    assert not bruhat_leq(rs, s1, s2)


def test_bruhat_a3_subword_case():
    rs = from_label("A3")
    x = rs.element_from_word((1,))
    w = rs.element_from_word((1, 0, 2, 1))
    assert w.length == 4
    assert bruhat_leq(rs, x, w) == bruhat_leq_by_subwords(rs, x, w) is True


@pytest.mark.parametrize("label", ["A2", "B2"])
def test_bruhat_against_subword_oracle(label):
    rs = from_label(label)
    for x in rs.weyl_elements():
        for w in rs.weyl_elements():
            assert bruhat_leq(rs, x, w) == bruhat_leq_by_subwords(rs, x, w)


def test_bruhat_interval_below_longest_is_whole_group():
    for label in ALL_LABELS:
        rs = from_label(label)
        w0 = rs.longest_element()
        below = [w for w in rs.weyl_elements() if bruhat_leq(rs, w, w0)]
        assert len(below) == len(rs.weyl_elements())


def test_unsupported_type_raises():
    with pytest.raises(ValueError):
        build_root_system("E", 8)
    with pytest.raises(ValueError):
        from_label("Z9")


def test_reduced_words_are_lex_smallest_and_minimal():
    rs = from_label("B2")
    for w in rs.weyl_elements():
        # every strictly shorter word fails to represent w
        for k in range(w.length):
            for word in itertools.product(range(2), repeat=k):
                assert rs.element_from_word(word).matrix != w.matrix or k == w.length
        # no lexicographically smaller word of the same length represents w
        for word in itertools.product(range(2), repeat=w.length):
            if word < w.reduced_word:
                assert rs.element_from_word(word).matrix != w.matrix
            else:
                break
