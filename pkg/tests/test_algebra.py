import numpy as np
import pytest

from choimetric import (
    LinearFunctional,
    as_trace,
    build_algebra,
    density_from_functional,
    diagonal_algebra,
    evaluate_mu_tau,
    matrix_algebra,
    opposite_algebra,
    scalar_algebra,
    swap_element,
    swap_functional,
    swap_op_element,
    tensor_algebra,
    tensor_trace,
)
from choimetric.algebra import functional_from_element, selfadjoint_basis
from choimetric.errors import (
    LinearlyDependentBasis,
    NoUnit,
    NotATrace,
    NotClosedUnderAdjoint,
    NotClosedUnderProduct,
    NotFaithful,
)


def unit_matrix(n, i, j):
    m = np.zeros((n, n), dtype=complex)
    m[i, j] = 1.0
    return m


def test_matrix_algebra_units(m2):
    assert m2.dim == 4 and m2.ambient_dim == 2
    assert np.allclose(m2.unit_coords, [1, 0, 0, 1])


def test_diagonal_algebra(d2):
    assert d2.dim == 2
    assert np.allclose(d2.unit_coords, [1, 1])
    assert d2.is_commutative()


def test_scalar_algebra_is_tensor_unit(m2):
    c = scalar_algebra()
    t = tensor_algebra(c, m2)
    assert t.dim == m2.dim
    assert np.allclose(t.basis, m2.basis)


def test_rejects_non_closed_adjoint():
    basis = np.array([unit_matrix(2, 0, 0), unit_matrix(2, 0, 1)])
    with pytest.raises(NotClosedUnderAdjoint):
        build_algebra(basis)


def test_rejects_non_closed_product():
    # span{1, e12 + e21} in M_2: closed under adjoint but (e12+e21)^2 = 1...
    # use span{e11, e12+e21} instead, whose square leaves the span
    basis = np.array([unit_matrix(2, 0, 0),
                      unit_matrix(2, 0, 1) + unit_matrix(2, 1, 0)])
    with pytest.raises(NotClosedUnderProduct):
        build_algebra(basis)


def test_rejects_dependent_basis():
    basis = np.array([unit_matrix(2, 0, 0), 2 * unit_matrix(2, 0, 0)])
    with pytest.raises(LinearlyDependentBasis):
        build_algebra(basis)


def test_rejects_span_without_unit():
    basis = np.array([unit_matrix(2, 0, 1) * 0 + unit_matrix(2, 0, 0) * 0
                      + np.diag([0.0, 0.0])])
    basis[0][0, 0] = 0.0
    # the span {e12 ... } nilpotent: use strictly upper triangular 1-dim span
    nil = np.zeros((1, 2, 2), dtype=complex)
    nil[0, 0, 1] = 1.0
    with pytest.raises((NoUnit, NotClosedUnderAdjoint)):
        build_algebra(nil)


def test_structure_constants_reconstruct_products(m3, rng):
    x = rng.standard_normal(9) + 1j * rng.standard_normal(9)
    y = rng.standard_normal(9) + 1j * rng.standard_normal(9)
    lhs = m3.realize(m3.multiply_coords(x, y))
    rhs = m3.realize(x) @ m3.realize(y)
    assert np.abs(lhs - rhs).max() < 1e-12


def test_tensor_algebra_kron_order(m2, d2):
    t = tensor_algebra(m2, d2)
    assert t.dim == 8
    assert np.allclose(t.basis[0 * 2 + 1], np.kron(m2.basis[0], d2.basis[1]))
    unit = t.realize(t.unit_coords)
    assert np.abs(unit - np.eye(4)).max() < 1e-12


def test_tensor_associativity_reindex(m2, d2):
    left = tensor_algebra(tensor_algebra(m2, d2), d2)
    right = tensor_algebra(m2, tensor_algebra(d2, d2))
    # same flattened factor order -> identical structure data
    assert np.abs(left.basis - right.basis).max() < 1e-12
    assert np.abs(left.structure - right.structure).max() < 1e-12


def test_opposite_realizes_transpose(m2):
    op = opposite_algebra(m2)
    assert np.allclose(op.basis[1], m2.basis[1].T)      # e12 -> e21
    assert opposite_algebra(op) is m2


def test_opposite_product_law(m3, rng):
    op = opposite_algebra(m3)
    b = rng.standard_normal(9) + 1j * rng.standard_normal(9)
    c = rng.standard_normal(9) + 1j * rng.standard_normal(9)
    lhs = op.multiply_coords(b, c)            # b^op c^op
    rhs = m3.multiply_coords(c, b)            # (cb) -> identical coordinates
    assert np.abs(lhs - rhs).max() < 1e-12


def test_opposite_of_commutative_is_identical(d2):
    op = opposite_algebra(d2)
    assert np.abs(op.structure - d2.structure).max() == 0.0


def test_swap_involution(m2, d2, rng):
    t = tensor_algebra(m2, d2)
    x = t.element(rng.standard_normal(8) + 1j * rng.standard_normal(8))
    y = swap_element(swap_element(x, 0, 1), 0, 1)
    assert np.abs(y.coords - x.coords).max() == 0.0


def test_swap_three_factors_index_permutation(m2, d2):
    t = tensor_algebra(tensor_algebra(m2, m2), d2)
    x = t.zero().coords.copy()
    # basis index (i, j, k) = (1, 2, 0) moves to (1, 0, 2) under Sigma_[23]
    idx = (1 * 4 + 2) * 2 + 0
    x[idx] = 1.0
    swapped = swap_element(t.element(x), 1, 2)
    tgt_idx = (1 * 2 + 0) * 4 + 2
    assert swapped.coords[tgt_idx] == 1.0
    assert np.count_nonzero(swapped.coords) == 1


def test_swap_preserves_positivity(m2, rng):
    t = tensor_algebra(m2, m2)
    r = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    vals = np.einsum("xy,byx->b", r @ r.conj().T, t.basis)
    phi = LinearFunctional(t, vals)
    assert phi.is_positive()
    assert swap_functional(phi, 0, 1).is_positive()


def test_swap_op_pairing(m2, rng):
    # phi(Sigma^op(x)) equals the hand-expanded pairing on rank-one coords
    op = opposite_algebra(m2)
    t = tensor_algebra(m2, op)
    a = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    b = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    x = t.element(np.outer(a, b).reshape(-1))          # a (x) b^op
    sw = swap_op_element(x, 0, 1)                       # b (x) a^op
    expected = np.outer(b, a).reshape(-1)
    assert np.abs(sw.coords - expected).max() < 1e-12


def test_mu_tau_matrix_units(m2, tr2):
    mu = evaluate_mu_tau(m2, tr2)
    vals = mu.values.reshape(4, 4)
    assert abs(vals[0, 0] - 1) < 1e-12                 # e11 e11
    assert abs(vals[0, 3]) < 1e-12                     # e11 e22
    assert mu.is_positive()


def test_mu_tau_diagonal_algebra(d2):
    tau = as_trace(LinearFunctional(d2, np.array([1.0, 1.0], dtype=complex)))
    mu = evaluate_mu_tau(d2, tau)
    assert np.allclose(mu.values.reshape(2, 2), np.eye(2))


def test_mu_tau_requires_trace(m2):
    phi = LinearFunctional(m2, np.array([1, 2, 3, 4], dtype=complex))
    with pytest.raises(NotATrace):
        as_trace(phi)


def test_trace_predicates(m2, tr2):
    assert tr2.faithful
    assert tr2.is_positive()
    # rank-one "trace" on diag2 is a trace but not faithful
    d2 = diagonal_algebra(2)
    tau = as_trace(LinearFunctional(d2, np.array([1.0, 0.0], dtype=complex)))
    assert not tau.faithful
    with pytest.raises(NotFaithful):
        density_from_functional(tau, tau)


def test_density_rank_one(m2, tr2):
    phi = LinearFunctional(m2, np.array([1.0, 0, 0, 0], dtype=complex))
    b, member = density_from_functional(phi, tr2)
    assert np.abs(b.ambient() - np.diag([1.0, 0.0])).max() < 1e-12
    assert member


def test_density_of_trace_itself_not_normalized(m2, tr2):
    b, member = density_from_functional(tr2, tr2)
    assert np.abs(b.ambient() - np.eye(2)).max() < 1e-12
    assert not member


def test_density_round_trip(m3, tr3, rng):
    phi = LinearFunctional(m3, rng.standard_normal(9) + 1j * rng.standard_normal(9))
    b, _ = density_from_functional(phi, tr3)
    back = functional_from_element(b, tr3)
    assert np.abs(back.values - phi.values).max() < 1e-10


def test_positivity_predicate_matches_density_psd(m3, tr3, rng):
    for _ in range(20):
        vals = rng.standard_normal(9) + 1j * rng.standard_normal(9)
        if rng.random() < 0.5:
            r = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
            vals = np.einsum("xy,byx->b", r @ r.conj().T, m3.basis)
        phi = LinearFunctional(m3, vals)
        b, _ = density_from_functional(phi, tr3)
        assert phi.is_positive() == b.is_positive()


def test_tensor_trace_factorizes(m2, tr2, d2):
    tau_d = as_trace(LinearFunctional(d2, np.array([1.0, 1.0], dtype=complex)))
    prod = tensor_trace(tr2, tau_d)
    vals = prod.values.reshape(4, 2)
    for i in range(4):
        for j in range(2):
            assert abs(vals[i, j] - tr2.values[i] * tau_d.values[j]) < 1e-12


def test_selfadjoint_basis_dimension(m3):
    rows = selfadjoint_basis(m3)
    assert rows.shape == (9, 9)
    for r in rows:
        amb = m3.realize(r)
        assert np.abs(amb - amb.conj().T).max() < 1e-10


def test_pullback_functional(m2, rng):
    phi = LinearFunctional(m2, rng.standard_normal(4) + 1j * rng.standard_normal(4))
    cmap = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    pulled = phi.pullback(cmap, m2)
    x = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    assert abs(pulled(m2.element(x)) - phi(m2.element(cmap @ x))) < 1e-12


def test_mu_tau_positive_across_corpus():
    # every algebra/trace pair in the default corpus yields a positive mu
    from choimetric import canonical_trace, cyclic_group, twisted_group_algebra
    from choimetric import direct_product, klein_twist_cocycle
    from choimetric import standard_matrix_trace
    m2 = matrix_algebra(2)
    d3 = diagonal_algebra(3)
    k4 = direct_product(cyclic_group(2), cyclic_group(2))
    twisted = twisted_group_algebra(k4, klein_twist_cocycle(k4))
    corpus = [
        (m2, standard_matrix_trace(m2)),
        (d3, standard_matrix_trace(d3)),
        (twisted.algebra, canonical_trace(twisted)),
    ]
    for alg, tau in corpus:
        assert evaluate_mu_tau(alg, tau).is_positive()


def test_swap_requires_tensor_structure(m2, rng):
    from choimetric.errors import FactorMismatch, NotATensorAlgebra
    x = m2.element(rng.standard_normal(4).astype(complex))
    with pytest.raises(NotATensorAlgebra):
        swap_element(x, 0, 1)
    t = tensor_algebra(m2, m2)    # both factors plain: no op position
    y = t.element(np.zeros(16, dtype=complex))
    with pytest.raises(FactorMismatch):
        swap_op_element(y, 0, 1)
    with pytest.raises(FactorMismatch):
        swap_element(y, 0, 5)
