import numpy as np
import pytest

from choimetric import (
    AmbientNormSeminorm,
    CommutatorSeminorm,
    PullbackSeminorm,
    SpectralTriple,
    SumSeminorm,
    diagonal_algebra,
    kasparov_product,
    left_tensor_seminorm,
    opposite_seminorm,
    right_tensor_seminorm,
    seminorm_domination_check,
    tensor_algebra,
    tensor_sum_seminorm,
)
from choimetric.errors import InvalidSpectralTriple
from choimetric.experiments import _kernel_identity_cases, _toy_triples
from choimetric.geometry import gradient_dirac_triple, state_sup_lower_bound

X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
Z = np.diag([1.0, -1.0]).astype(complex)


def two_point_triple(scale=1.0):
    d2 = diagonal_algebra(2)
    return SpectralTriple(d2, d2.basis, X / scale).validate()


def test_triple_validation_catches_bad_dirac(d2):
    bad = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    with pytest.raises(InvalidSpectralTriple):
        SpectralTriple(d2, d2.basis, bad).validate()


def test_triple_validation_catches_bad_grading(d2):
    # X does not commute with the diagonal representation
    with pytest.raises(InvalidSpectralTriple):
        SpectralTriple(d2, d2.basis, Z, X).validate()
    # Z does not anticommute with a diagonal Dirac
    with pytest.raises(InvalidSpectralTriple):
        SpectralTriple(d2, d2.basis, Z, Z).validate()


def test_two_point_seminorm(d2):
    lip = CommutatorSeminorm(two_point_triple())
    assert abs(lip.eval_coords(np.array([3.0, 1.0])) - 2.0) < 1e-12
    assert lip.eval_coords(d2.unit_coords) < 1e-14


def test_seminorm_axioms_random(rng, d2, m2):
    for lip in (CommutatorSeminorm(two_point_triple()),
                AmbientNormSeminorm(m2)):
        alg = lip.algebra
        for _ in range(25):
            x = rng.standard_normal(alg.dim) + 1j * rng.standard_normal(alg.dim)
            y = rng.standard_normal(alg.dim) + 1j * rng.standard_normal(alg.dim)
            a = rng.standard_normal() + 1j * rng.standard_normal()
            assert lip.eval_coords(x + y) <= lip.eval_coords(x) + lip.eval_coords(y) + 1e-10
            assert abs(lip.eval_coords(a * x) - abs(a) * lip.eval_coords(x)) < 1e-9
            star = alg.adjoint_of_coords(x)
            assert abs(lip.eval_coords(star) - lip.eval_coords(x)) < 1e-9


def test_unit_in_kernel_of_lipschitz_seminorms(m2, z2_algebra, z2_length):
    from choimetric.experiments import length_dirac
    lip = CommutatorSeminorm(length_dirac(z2_algebra, z2_length))
    assert lip.eval_coords(z2_algebra.algebra.unit_coords) < 1e-14
    assert abs(lip.eval_coords(np.array([0.0, 1.0])) - 1.0) < 1e-12


def test_zero_length_degenerates(z2_algebra):
    from choimetric.experiments import length_dirac
    from choimetric.groups import LengthFunction
    zero = LengthFunction(z2_algebra.group, np.zeros(2))
    lip = CommutatorSeminorm(length_dirac(z2_algebra, zero))
    assert lip.eval_coords(np.array([0.0, 1.0])) == 0.0


def test_opposite_seminorm_identity(rng, z2_algebra, z2_length):
    from choimetric.experiments import length_dirac
    lip = CommutatorSeminorm(length_dirac(z2_algebra, z2_length))
    lop = opposite_seminorm(lip)
    x = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    assert lop.eval_coords(x) == lip.eval_coords(x)


def test_kasparov_even_even_toy():
    toys = _toy_triples()
    product = kasparov_product(toys["even"], toys["even"])
    lam = np.linalg.eigvalsh(product.dirac)
    assert np.abs(np.abs(lam) - np.sqrt(2.0)).max() < 1e-12
    # grading anticommutation is part of validate(); assert numerically anyway
    g, d = product.grading, product.dirac
    assert np.abs(g @ d + d @ g).max() < 1e-12


def test_kasparov_all_parities_validate():
    toys = _toy_triples()
    for pa in ("odd", "even"):
        for pb in ("odd", "even"):
            product = kasparov_product(toys[pa], toys[pb])
            product.validate()
            assert product.even == (pa == pb)


def test_odd_odd_group_value(z2_algebra, z2_length):
    from choimetric.experiments import length_dirac, length_dirac_op
    t = length_dirac(z2_algebra, z2_length)
    top = length_dirac_op(z2_algebra, z2_length)
    product = kasparov_product(t, top)
    lip = CommutatorSeminorm(product)
    coords = np.zeros(4, dtype=complex)
    coords[3] = 1.0                        # lambda_1 (x) lambda_1^op
    assert abs(lip.eval_coords(coords) - np.sqrt(2.0)) < 1e-12


def test_domination(rng):
    toys = _toy_triples()
    from choimetric.experiments import length_dirac
    from choimetric import twisted_group_algebra, cyclic_group, word_length
    ga = twisted_group_algebra(cyclic_group(2))
    t_g = length_dirac(ga, word_length(cyclic_group(2)))
    report = seminorm_domination_check(toys["odd_m2"], t_g, samples=100, rng=rng)
    assert report.violations == 0
    # on x = 1 (x) b the left factor seminorm equals L_B(b)
    carrier = tensor_algebra(toys["odd_m2"].algebra, ga.algebra)
    right = right_tensor_seminorm(toys["odd_m2"].algebra, t_g,
                                  rep_a=toys["odd_m2"].rep, carrier=carrier)
    lip_b = CommutatorSeminorm(t_g)
    b = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    embedded = np.outer(toys["odd_m2"].algebra.unit_coords, b).reshape(-1)
    assert abs(right.eval_coords(embedded) - lip_b.eval_coords(b)) < 1e-10


def test_stability_kernel_identity_all_parities():
    for parities, worst in _kernel_identity_cases(0):
        assert worst < 1e-9, parities


def test_state_sup_is_lower_bound(rng):
    toys = _toy_triples()
    from choimetric import twisted_group_algebra, cyclic_group
    ga = twisted_group_algebra(cyclic_group(2))
    lt = left_tensor_seminorm(toys["odd_m2"], ga.algebra)
    lip_a = CommutatorSeminorm(toys["odd_m2"])
    for _ in range(30):
        z = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        lb = state_sup_lower_bound(z, "left", lip_a, ga.algebra,
                                   samples=60, rng=rng)
        assert lb <= lt.eval_coords(z) + 1e-9


def test_sum_seminorm_members(d2):
    t = two_point_triple()
    lip = CommutatorSeminorm(t)
    s = SumSeminorm(SumSeminorm(lip, lip), lip)
    assert len(s.members()) == 3
    x = np.array([1.0, -1.0], dtype=complex)
    assert abs(s.eval_coords(x) - 3 * lip.eval_coords(x)) < 1e-12


def test_tensor_sum_seminorm(rng):
    toys = _toy_triples()
    s = tensor_sum_seminorm(toys["odd"], toys["odd"])
    left, right = s.members()
    x = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    assert abs(s.eval_coords(x)
               - left.eval_coords(x) - right.eval_coords(x)) < 1e-12


def test_pullback_seminorm(rng, m2):
    lip = AmbientNormSeminorm(m2)
    cmap = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    pb = PullbackSeminorm(lip, cmap, m2)
    x = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    assert abs(pb.eval_coords(x) - lip.eval_coords(cmap @ x)) < 1e-12
    mats = pb.linear_matrices()
    assert np.abs(np.tensordot(x, mats, axes=1)
                  - m2.realize(cmap @ x)).max() < 1e-12


def test_gradient_dirac_triple_seminorm(rng, m2):
    ls = [np.diag([1.0, -1.0]).astype(complex), X]
    lip = CommutatorSeminorm(gradient_dirac_triple(ls, algebra=m2))
    for _ in range(10):
        a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        a = 0.5 * (a + a.conj().T)
        stacked = np.vstack([l @ a - a @ l for l in ls])
        expect = np.linalg.norm(stacked, 2)
        got = lip.eval_coords(m2.coords_of(a))
        assert abs(got - expect) < 1e-10
