from fractions import Fraction

import pytest

from ocell.characters import (
    FormalCharacter,
    big_proj_char,
    block_coset_reps,
    cartan_matrix_block,
    kl_poly,
    kostant_partition,
    mult_verma_simple,
    simple_char_in_block,
    verma_char,
    weyl_char,
    weyl_char_finite,
    weyl_denominator,
)
from ocell.rootsys import Weight, dot_action_matrix, from_label, orbit_data

from oracles import HeckeOracle, kostant_by_enumeration, weyl_dimension

A1 = from_label("A1")
A2 = from_label("A2")
A3 = from_label("A3")
B2 = from_label("B2")


def test_kostant_against_enumeration():
    for rs in (A2, B2):
        for c1 in range(5):
            for c2 in range(5):
                assert kostant_partition(rs, (c1, c2)) == kostant_by_enumeration(rs.positive_roots, (c1, c2))


def test_verma_char_sl2_truncation():
    ch = verma_char(A1, Weight((0,)))
    tc = ch.truncate([Weight((0,))], 3)
    assert tc.as_sorted_items() == [((-6,), 1), ((-4,), 1), ((-2,), 1), ((0,), 1)]


def test_verma_char_a2_inner_multiplicity():
    ch = verma_char(A2, Weight((0, 0)))
    # alpha1 + alpha2 below zero: partitions {a1+a2}, {a1, a2}
    mu = Weight((0, 0)) - A2.root_weight(2)
    assert ch.multiplicity(mu) == 2


def test_verma_highest_weight_multiplicity_is_one():
    for rs, lam in ((A1, Weight((5,))), (A2, Weight((-2, 3))), (B2, Weight((1, -4)))):
        assert verma_char(rs, lam).multiplicity(lam) == 1


def test_weyl_char_sl2():
    tc = weyl_char_finite(A1, Weight((2,)))
    assert tc.num_dict() == {(2,): 1, (0,): 1, (-2,): 1}
    assert weyl_char_finite(A1, Weight((0,))).num_dict() == {(0,): 1}


def test_weyl_char_dimension_matches_weyl_formula():
    cases = [(A2, Weight((1, 1))), (A2, Weight((2, 0))), (B2, Weight((1, 0))), (B2, Weight((0, 1)))]
    for rs, lam in cases:
        fin = weyl_char_finite(rs, lam)
        assert sum(c for _, c in fin.numerator) == weyl_dimension(rs, lam)
    assert weyl_dimension(A2, Weight((1, 1))) == 8


def test_weyl_char_truncation_nonnegative_and_w_invariant():
    for rs, lam in ((A2, Weight((1, 1))), (B2, Weight((1, 1)))):
        fin = weyl_char_finite(rs, lam)
        assert all(c > 0 for _, c in fin.numerator)
        for w in rs.weyl_elements():
            for mu, c in fin.numerator:
                assert fin.multiplicity(w.apply(Weight(mu))) == c


def test_weyl_char_rejects_nondominant():
    with pytest.raises(ValueError):
        weyl_char(A1, Weight((-3,)))


def test_closed_vs_finite_equality_cross_multiplication():
    lam = Weight((1, 1))
    assert weyl_char(A2, lam).equals(weyl_char_finite(A2, lam))
    assert not weyl_char(A2, lam).equals(verma_char(A2, lam))


def test_big_proj_char_sl2():
    ch = big_proj_char(A1, Weight((-4,)))
    expect = verma_char(A1, Weight((-4,))) + verma_char(A1, Weight((2,)))
    assert ch.equals(expect)
    chs = big_proj_char(A1, Weight((-1,)))
    assert chs.equals(verma_char(A1, Weight((-1,))))
    with pytest.raises(ValueError):
        big_proj_char(A1, Weight((0,)))


def test_big_proj_char_a2_orbit_sum():
    lam = Weight((-2, -2))
    ch = big_proj_char(A2, lam)
    orbit, _, reps = orbit_data(A2, lam)
    assert len(reps) == 6
    acc = verma_char(A2, dot_action_matrix(A2, reps[0], lam))
    for w in reps[1:]:
        acc = acc + verma_char(A2, dot_action_matrix(A2, w, lam))
    assert ch.equals(acc)


def test_big_proj_char_via_reciprocity():
    # independent route: sum_w (P : M_w) ch M_w with the flag counts from
    # the Kazhdan-Lusztig path
    for rs, lam in ((A1, Weight((-4,))), (A2, Weight((-2, -2)))):
        reps = block_coset_reps(rs, lam)
        e = rs.identity_element()
        acc = None
        for w in reps:
            flag = mult_verma_simple(rs, lam, e, w)
            assert flag == 1
            term = verma_char(rs, dot_action_matrix(rs, w, lam)).scaled(flag)
            acc = term if acc is None else acc + term
        assert big_proj_char(rs, lam).equals(acc)


def test_kl_normalization_and_a2_values():
    oracle = HeckeOracle(A2)
    for w in A2.weyl_elements():
        assert kl_poly(A2, w, w).coefficients == (1,)
        for x in A2.weyl_elements():
            ours = kl_poly(A2, x, w).coefficients
            assert ours == oracle.kl_polynomial(x, w)
            if ours:
                assert ours == (1,)


def test_kl_b2_against_hecke_oracle():
    oracle = HeckeOracle(B2)
    for x in B2.weyl_elements():
        for w in B2.weyl_elements():
            assert kl_poly(B2, x, w).coefficients == oracle.kl_polynomial(x, w)


def test_kl_a3_nontrivial_polynomial():
    x = A3.element_from_word((1,))
    w = A3.element_from_word((1, 0, 2, 1))
    p = kl_poly(A3, x, w)
    assert p.coefficients == (1, 1)
    assert str(p) == "1+q"
    oracle = HeckeOracle(A3)
    assert oracle.kl_polynomial(x, w) == (1, 1)


def test_kl_a3_degree_bound_full():
    oracle = HeckeOracle(A3)
    elems = A3.weyl_elements()
    for x in elems:
        for w in elems:
            p = kl_poly(A3, x, w).coefficients
            assert p == oracle.kl_polynomial(x, w)
            if p and x.matrix != w.matrix:
                assert 2 * (len(p) - 1) <= w.length - x.length - 1
            assert all(c >= 0 for c in p)


def test_mult_verma_simple_sl2():
    lam = Weight((-4,))
    e = A1.identity_element()
    s = A1.element_from_word((0,))
    assert mult_verma_simple(A1, lam, e, s) == 1   # [M_{s.lam} : L_lam]
    assert mult_verma_simple(A1, lam, s, e) == 0   # [M_lam : L_{s.lam}]
    assert mult_verma_simple(A1, lam, e, e) == 1
    assert mult_verma_simple(A1, lam, s, s) == 1


def test_character_identity_pins_convention():
    # ch M_{y.lam} = sum_x [M_y : L_x] ch L_{x.lam}, checked at depth 8
    for rs, lam in ((A1, Weight((-4,))), (A2, Weight((-2, -2)))):
        reps = block_coset_reps(rs, lam)
        for y in reps:
            target = verma_char(rs, dot_action_matrix(rs, y, lam))
            acc = None
            for x in reps:
                m = mult_verma_simple(rs, lam, x, y)
                if not m:
                    continue
                term = simple_char_in_block(rs, lam, x).scaled(m)
                acc = term if acc is None else acc + term
            base = [dot_action_matrix(rs, w, lam) for w in reps]
            t_target = target.truncate(base, 8)
            t_acc = acc.truncate(base, 8)
            assert t_target.as_sorted_items() == t_acc.as_sorted_items()


def test_a2_multiplicities_are_bruhat_indicator():
    lam = Weight((-2, -2))
    reps = block_coset_reps(A2, lam)
    from ocell.rootsys import bruhat_leq
    for x in reps:
        for y in reps:
            expected = 1 if bruhat_leq(A2, x, y) else 0
            assert mult_verma_simple(A2, lam, x, y) == expected


def test_cartan_matrix_block_sl2():
    assert cartan_matrix_block(A1, Weight((-4,))) == ((2, 1), (1, 1))
    assert cartan_matrix_block(A1, Weight((-1,))) == ((1,),)


def test_cartan_matrix_block_a2():
    m = cartan_matrix_block(A2, Weight((-2, -2)))
    assert len(m) == 6
    for i in range(6):
        for j in range(6):
            assert m[i][j] == m[j][i]
        assert m[i][i] == max(m[i])


def test_bgg_reciprocity_all_blocks_rank_le_2():
    cases = [(A1, Weight((-4,))), (A1, Weight((-1,))), (A2, Weight((-2, -2))),
             (A2, Weight((-1, -3))), (B2, Weight((-2, -2)))]
    for rs, lam in cases:
        reps = block_coset_reps(rs, lam)
        for x in reps:
            for y in reps:
                # (P_x : M_y) = [M_y : L_x] is definitional here; the content
                # is symmetry of the resulting Cartan matrix
                pass
        cm = cartan_matrix_block(rs, lam)
        for i in range(len(reps)):
            for j in range(len(reps)):
                assert cm[i][j] == cm[j][i]


def test_denominator_bookkeeping():
    lam = Weight((2,))
    closed = weyl_char(A1, lam)
    fin = weyl_char_finite(A1, lam)
    with pytest.raises(ValueError):
        closed + fin
    prod = closed.mul_finite(fin)
    assert prod.denominator_power == 1
    with pytest.raises(ValueError):
        fin.mul_finite(closed)


def test_weyl_denominator_is_alternating_orbit_sum():
    # prod (1 - e^{-beta}) = sum_w (-1)^{l(w)} e^{w.0}
    den = weyl_denominator(A2)
    expected = {}
    for w in A2.weyl_elements():
        mu = dot_action_matrix(A2, w, Weight((0, 0))).coords
        expected[mu] = expected.get(mu, 0) + (-1) ** w.length
    assert den == {k: v for k, v in expected.items() if v}
