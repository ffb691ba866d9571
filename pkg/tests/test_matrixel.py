from fractions import Fraction

import pytest

from ocell.bigcell import BigCellPoly, apply_pbw_word, block_component_sl2, theta_map
from ocell.category_o import simple_sl2_finite, verma
from ocell.enveloping import pbw_engine
from ocell.matrixel import (
    Functional,
    block_composition_multiplicities,
    block_space,
    block_space_dims,
    block_bidegree_oracle,
    convolve,
    endo_algebra_sl2,
    exponential_functional,
    functional_generated_module,
    kernel_vs_ideal_sl2,
    koszul_tensor_check_sl2,
    loewy_filtration_sl2,
    matrix_element,
    module_matrix_elements,
    unit_functional,
)
from ocell.rootsys import Weight, from_label

A1 = from_label("A1")
A2 = from_label("A2")


def wt(*c):
    return Weight(tuple(c))


def test_matrix_element_trivial_module():
    triv = simple_sl2_finite(0)
    phi = matrix_element(triv, wt(0), (Fraction(1),), wt(0), (Fraction(1),), 4)
    assert phi.value((0,), (0,), (0,)) == 1
    assert phi.value((0,), (3,), (0,)) == 0      # <0,h>^3 = 0
    assert phi.value((1,), (0,), (0,)) == 0
    assert phi.value((0,), (0,), (2,)) == 0


def test_matrix_element_verma_top_values():
    m = verma(A1, wt(2), 6)
    phi = matrix_element(m, wt(2), (Fraction(1),), wt(2), (Fraction(1),), 6)
    eng = pbw_engine("A1")
    E = eng.from_generator(('e', 0))
    F = eng.from_generator(('f', 0))
    fe = eng.multiply(F, E)
    ef = eng.multiply(E, F)
    assert phi.value_on_pbw(fe) == 0
    assert phi.value_on_pbw(ef) == 2


def test_matrix_element_bilinearity():
    m = verma(A1, wt(2), 5)
    cov = (Fraction(1),)
    p1 = matrix_element(m, wt(0), cov, wt(0), (Fraction(1),), 5)
    p2 = matrix_element(m, wt(0), cov, wt(-2), (Fraction(1),), 5)
    lin = matrix_element(m, wt(0), cov, wt(0), (Fraction(2),), 5) + \
        matrix_element(m, wt(0), cov, wt(-2), (Fraction(3),), 5)
    combo = p1.scaled(2) + p2.scaled(3)
    assert lin.data == combo.data


def test_convolution_exponentials_and_unit():
    e_mu = exponential_functional("A1", wt(3), 5)
    e_nu = exponential_functional("A1", wt(-5), 5)
    prod = convolve(e_mu, e_nu)
    assert prod.data == exponential_functional("A1", wt(-2), 5).data
    unit = unit_functional("A1", 5)
    phi = theta_map("A1", BigCellPoly.monomial(A1, yexp=(2,), zwt=(1,)), 4)
    assert convolve(phi, unit).data == phi.data
    assert convolve(unit, phi).data == phi.data


def test_convolution_commutative():
    psi1 = theta_map("A1", BigCellPoly.monomial(A1, xexp=(1,), zwt=(2,)), 4)
    psi2 = theta_map("A1", BigCellPoly.monomial(A1, yexp=(1,), zwt=(-1,)), 4)
    ab = convolve(psi1, psi2)
    ba = convolve(psi2, psi1)
    assert ab.data == ba.data


def test_theta_basic_values():
    one = theta_map("A1", BigCellPoly.one(A1), 4)
    assert one.value((0,), (0,), (0,)) == 1
    assert one.value((0,), (2,), (0,)) == 0
    zlam = theta_map("A1", BigCellPoly.monomial(A1, zwt=(7,)), 4)
    assert zlam.value((0,), (1,), (0,)) == 7
    y = theta_map("A1", BigCellPoly.monomial(A1, yexp=(1,)), 4)
    assert y.value((0,), (0,), (1,)) == 1
    assert y.value((1,), (0,), (0,)) == 0


@pytest.mark.parametrize("label", ["A1", "A2"])
def test_theta_multiplicative_on_products(label):
    rs = from_label(label)
    m = rs.num_positive
    samples = [
        BigCellPoly.monomial(rs, xexp=(1,) + (0,) * (m - 1), zwt=(1,) * rs.rank),
        BigCellPoly.monomial(rs, yexp=(0,) * (m - 1) + (1,), zwt=(-1,) * rs.rank),
        BigCellPoly.one(rs) + BigCellPoly.monomial(rs, yexp=(1,) + (0,) * (m - 1)),
    ]
    depth = 3
    for p1 in samples:
        for p2 in samples:
            lhs = theta_map(label, p1 * p2, depth)
            rhs = convolve(theta_map(label, p1, depth), theta_map(label, p2, depth))
            assert lhs.data == rhs.data


@pytest.mark.parametrize("label", ["A1", "A2"])
def test_theta_intertwines_both_actions(label):
    from ocell.bigcell import regular_action
    rs = from_label(label)
    poly = BigCellPoly.monomial(rs, yexp=(1,) + (0,) * (rs.num_positive - 1),
                                zwt=tuple(-1 for _ in range(rs.rank)))
    depth = 3
    phi = theta_map(label, poly, depth + 1)
    for i in range(rs.rank):
        for kind in ("e", "h", "f"):
            op = regular_action(label, "right", kind, i)
            lhs = theta_map(label, op.apply(poly), depth)
            rhs = phi.act_right((kind, i))
            for a in [(0,) * rs.num_positive]:
                for b in [(0,) * rs.rank, (1,) + (0,) * (rs.rank - 1)]:
                    for c in [(0,) * rs.num_positive, (1,) + (0,) * (rs.num_positive - 1)]:
                        assert lhs.value(a, b, c) == rhs.value(a, b, c), (kind, i)
            opl = regular_action(label, "left", kind, i)
            lhs_l = theta_map(label, opl.apply(poly), depth)
            rhs_l = phi.act_left((kind, i)).scaled(-1)
            # rho1 on functionals: (rho1(xi) phi)(u) = -phi(xi u) = act_left
            rhs_l = phi.act_left((kind, i))
            for a in [(0,) * rs.num_positive, (1,) + (0,) * (rs.num_positive - 1)]:
                for b in [(0,) * rs.rank]:
                    for c in [(0,) * rs.num_positive]:
                        assert lhs_l.value(a, b, c) == rhs_l.value(a, b, c), ("left", kind, i)


def test_theta_injective_depth_truncations_a1():
    # full rank on the span of monomials with bounded exponents and a
    # window of torus weights
    polys = []
    for a in range(3):
        for c in range(3):
            for mzw in range(-2, 3):
                polys.append(BigCellPoly.monomial(A1, xexp=(a,), zwt=(mzw,), yexp=(c,)))
    fns = [theta_map("A1", p, 5) for p in polys]
    keys = sorted({k for f in fns for k in f.data})
    rows = [tuple(f.data.get(k, Fraction(0)) for k in keys) for f in fns]
    from ocell import linalg
    assert linalg.span_dim(rows) == len(polys)


def test_block_space_dims_match_oracle():
    lam = wt(-4)
    got = block_space_dims(lam, 4)
    want = block_bidegree_oracle(lam, 4)
    assert got == want


def test_block_space_composition_count():
    mult = block_composition_multiplicities(wt(-4), 6)
    assert sum(mult.values()) == 5
    assert mult[("L(-4)", "L(-4)")] == 2
    assert mult[("L(-4)", "L(2)")] == 1
    assert mult[("L(2)", "L(-4)")] == 1
    assert mult[("L(2)", "L(2)")] == 1


def test_block_space_singular():
    mult = block_composition_multiplicities(wt(-1), 5)
    assert mult == {("L(-1)", "L(-1)"): 1}


def test_theta_image_of_block_component_equals_block_space():
    lam = wt(-2)
    depth = 3
    diameter = 1
    key_depth = depth + diameter + 1  # align with the block_space key box
    table = block_component_sl2(lam, depth)
    bl = block_space(lam, depth)
    from ocell import linalg
    for bd, (dim, polys) in table.items():
        key = ((bd[0],), (bd[1],))
        fns_theta = [theta_map("A1", p, key_depth) for p in polys]
        fns_block = bl.get(key, [])
        keys = sorted({k for f in fns_theta + fns_block for k in f.data})
        rows_t = [tuple(f.data.get(k, Fraction(0)) for k in keys) for f in fns_theta]
        rows_b = [tuple(f.data.get(k, Fraction(0)) for k in keys) for f in fns_block]
        assert linalg.subspace_equal(rows_t, rows_b), bd


def test_kernel_vs_ideal_regular():
    # the kernel has the 1 / 2 / 1 layered structure: two copies of
    # L*(x)L from the antidominant simple and one of each mixed product
    # (consistent with 3*3 pairs minus the 5 block constituents)
    rep = kernel_vs_ideal_sl2(wt(-2), 6)
    assert rep["pass"]
    assert rep["kernel_composition_count"] == 4
    assert rep["kernel_composition_multiplicities"] == {
        ("L(-2)", "L(-2)"): 2, ("L(-2)", "L(0)"): 1, ("L(0)", "L(-2)"): 1}


def test_kernel_vs_ideal_singular_is_zero():
    rep = kernel_vs_ideal_sl2(wt(-1), 5)
    assert rep["pass"]
    assert all(entry["kernel_dim"] == 0 for entry in rep["bidegree"].values())
    assert rep["kernel_composition_count"] == 0


def test_endo_algebra_regular():
    res = endo_algebra_sl2(wt(-4))
    assert res["dimension"] == 5
    assert res["graded_dims"] == (2, 2, 1)
    assert res["q_squared_zero"]
    assert res["pass"]


def test_endo_algebra_singular():
    res = endo_algebra_sl2(wt(-1))
    assert res["dimension"] == 1
    assert res["pass"]


def test_loewy_filtration_block():
    rep = loewy_filtration_sl2(wt(-2), 4)
    assert rep["loewy_length_socle"] == 3
    assert rep["loewy_length_radical"] == 3
    assert rep["pass"], rep


def test_koszul_tensor_check():
    rep = koszul_tensor_check_sl2(wt(-2), 4)
    assert rep["pass"], {k: v for k, v in rep["bidegree"].items() if
                         v["quotient_dim"] != v["block_dim"]}


def test_functional_generated_module_exponential():
    phi = theta_map("A1", BigCellPoly.monomial(A1, zwt=(-2,)), 5)
    rep = functional_generated_module(phi, 5)
    assert rep["self_representation"]
    # weights live in the block cone below the orbit top s.(-2) = 0
    for nu in rep["weights"]:
        assert nu[0] % 2 == 0 and nu[0] <= 0


def test_functional_generated_module_trivial():
    phi = unit_functional("A1", 5)
    rep = functional_generated_module(phi, 5)
    assert rep["weight_dims"] == {(0,): 1}
    assert rep["self_representation"]
