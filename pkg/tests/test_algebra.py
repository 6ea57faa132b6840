import numpy as np
import pytest

from hilbext.algebra import (
    AlgebraElement,
    Automorphism,
    BlockAlgebra,
    CentralUnitary,
    compose_block_permutations,
    gauge_normalize,
    intertwiner_space,
    relative_commutant,
    solve_inner_cocycle,
)
from hilbext.errors import NoSolutionError, StructuralError

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)

M2 = BlockAlgebra([2])
C2 = BlockAlgebra([1, 1])
M2M2 = BlockAlgebra([2, 2])


def rng(seed=0):
    return np.random.default_rng(seed)


def test_mul_identity():
    a = M2.random_element(rng())
    assert (M2.identity() * a).allclose(a)
    assert (a * M2.identity()).allclose(a)


def test_mul_componentwise_scalars():
    x = C2.element([[[2.0]], [[3.0]]])
    y = C2.element([[[5.0]], [[7.0]]])
    z = x * y
    assert z.blocks[0][0, 0] == 10.0 and z.blocks[1][0, 0] == 21.0


def test_mul_rank_one():
    e01 = M2.element([np.array([[0, 1], [0, 0]])])
    e10 = M2.element([np.array([[0, 0], [1, 0]])])
    assert (e01 * e10).allclose(M2.element([np.array([[1, 0], [0, 0]])]))


def test_norm_identity_and_scalars():
    assert M2.identity().norm() == 1.0
    assert C2.element([[[3.0]], [[4.0]]]).norm() == 4.0


def test_norm_matches_direct_svd():
    a = M2.element([np.array([[0, 2], [0, 0]])])
    # Independent oracle: singular values straight from numpy on the block.
    sv = np.linalg.svd(np.array([[0, 2], [0, 0]]), compute_uv=False)
    assert sv[0] == 2.0 and sv[1] == 0.0
    assert a.norm() == 2.0


def test_cstar_identity_on_random_sample():
    algebra = BlockAlgebra([2, 3, 1])
    r = rng(1)
    for _ in range(1000):
        a = algebra.random_element(r)
        n = a.norm()
        assert abs((a.adjoint() * a).norm() - n * n) <= 1e-10 * n * n


def test_adjoint_involutive():
    a = M2M2.random_element(rng(2))
    assert a.adjoint().adjoint().allclose(a)


def test_apply_identity_automorphism():
    a = M2M2.random_element(rng(3))
    assert Automorphism.identity(M2M2).apply(a).allclose(a)


def test_apply_block_swap_scalars():
    swap = Automorphism(C2, (1, 0), [np.eye(1), np.eye(1)])
    a = C2.element([[[2.0]], [[5.0]]])
    b = swap.apply(a)
    assert b.blocks[0][0, 0] == 5.0 and b.blocks[1][0, 0] == 2.0


def test_apply_pauli_conjugation():
    ad_x = Automorphism.inner(M2.element([SX]))
    out = ad_x.apply(M2.element([SZ]))
    # Oracle: direct conjugation of the diagonal matrix.
    assert out.allclose(M2.element([SX @ SZ @ SX]))
    assert np.allclose(out.blocks[0], np.diag([-1, 1]))


def test_automorphism_isometric_multiplicative():
    r = rng(4)
    w = M2M2.random_unitary(r)
    alpha = Automorphism(M2M2, (1, 0), w.blocks)
    for _ in range(50):
        a, b = M2M2.random_element(r), M2M2.random_element(r)
        assert abs(alpha.apply(a).norm() - a.norm()) <= 1e-12
        assert alpha.apply(a * b).allclose(alpha.apply(a) * alpha.apply(b), tol=1e-10)
        assert alpha.apply(a.adjoint()).allclose(alpha.apply(a).adjoint(), tol=1e-10)


def test_apply_dimension_mismatch_rejected():
    with pytest.raises(StructuralError):
        Automorphism(BlockAlgebra([2, 1]), (1, 0), [np.eye(2), np.eye(1)])


def test_compose_with_inverse_is_identity():
    r = rng(5)
    alpha = Automorphism(M2M2, (1, 0), M2M2.random_unitary(r).blocks)
    assert alpha.compose(alpha.inverse()).extensionally_equal(
        Automorphism.identity(M2M2), tol=1e-12
    )
    assert alpha.inverse().compose(alpha).extensionally_equal(
        Automorphism.identity(M2M2), tol=1e-12
    )


def test_two_swaps_compose_to_identity():
    swap = Automorphism(C2, (1, 0), [np.eye(1), np.eye(1)])
    assert swap.compose(swap).extensionally_equal(Automorphism.identity(C2))


def test_inner_compose_as_unitary_product():
    r = rng(6)
    u, v = M2.random_unitary(r), M2.random_unitary(r)
    lhs = Automorphism.inner(u).compose(Automorphism.inner(v))
    rhs = Automorphism.inner(u * v)
    # Checked extensionally on the full matrix-unit basis.
    assert lhs.defect(rhs) <= 1e-12


def test_extensional_composition_contract():
    r = rng(7)
    alpha = Automorphism(M2M2, (1, 0), M2M2.random_unitary(r).blocks)
    beta = Automorphism.inner(M2M2.random_unitary(r))
    composed = alpha.compose(beta)
    for e in M2M2.matrix_units():
        assert composed.apply(e).allclose(alpha.apply(beta.apply(e)), tol=1e-12)


def test_outer_class_homomorphism():
    r = rng(8)
    a4 = BlockAlgebra([1, 1, 1, 1])
    p1, p2 = (1, 2, 3, 0), (2, 0, 3, 1)
    alpha = Automorphism(a4, p1, [np.eye(1)] * 4)
    beta = Automorphism(a4, p2, [np.eye(1)] * 4)
    assert alpha.compose(beta).outer_class == compose_block_permutations(p1, p2)
    assert Automorphism.inner(a4.random_unitary(r)).outer_class == (0, 1, 2, 3)
    swap = Automorphism(M2M2, (1, 0), [np.eye(2)] * 2)
    assert swap.outer_class == (1, 0)
    assert swap.compose(swap).outer_class == (0, 1)


def test_solve_inner_cocycle_same_automorphism():
    r = rng(9)
    beta = Automorphism(M2M2, (1, 0), M2M2.random_unitary(r).blocks)
    u = solve_inner_cocycle(beta, beta)
    assert u.allclose(M2M2.identity(), tol=1e-12)


def test_solve_inner_cocycle_pauli():
    r = rng(10)
    beta = Automorphism.inner(M2.random_unitary(r))
    alpha = Automorphism.inner(M2.element([SX])).compose(beta)
    u = solve_inner_cocycle(alpha, beta)
    # The solution is sigma-x up to phase; our gauge makes it exactly sigma-x.
    assert u.allclose(M2.element([SX]), tol=1e-12)
    # Extensional postcondition on the full matrix-unit basis.
    ad_u = Automorphism.inner(u)
    for e in M2.matrix_units():
        assert alpha.apply(e).allclose(ad_u.apply(beta.apply(e)), tol=1e-12)


def test_solve_inner_cocycle_abelian_algebra():
    beta = Automorphism(C2, (1, 0), [np.eye(1), np.eye(1)])
    alpha = Automorphism(C2, (1, 0), [-np.eye(1), 1j * np.eye(1)])
    u = solve_inner_cocycle(alpha, beta)
    assert u.allclose(C2.identity(), tol=1e-12)


def test_solve_inner_cocycle_requires_matching_class():
    swap = Automorphism(C2, (1, 0), [np.eye(1), np.eye(1)])
    with pytest.raises(NoSolutionError):
        solve_inner_cocycle(swap, Automorphism.identity(C2))


def test_intertwiner_identity_pair_is_center():
    basis = intertwiner_space(Automorphism.identity(M2), Automorphism.identity(M2))
    assert len(basis) == 1
    assert basis[0].allclose(M2.identity(), tol=1e-10)


def test_intertwiner_disjoint_swap():
    swap = Automorphism(C2, (1, 0), [np.eye(1), np.eye(1)])
    assert intertwiner_space(Automorphism.identity(C2), swap) == []


def test_intertwiner_schur_span():
    r = rng(11)
    u = M2.random_unitary(r)
    basis = intertwiner_space(Automorphism.identity(M2), Automorphism.inner(u))
    assert len(basis) == 1
    x = basis[0].blocks[0]
    # Oracle: the intertwiner equation itself, on random elements.
    for _ in range(20):
        a = M2.random_element(r)
        assert np.linalg.norm(x @ a.blocks[0] - (u * a * u.adjoint()).blocks[0] @ x) <= 1e-9


def test_inner_iff_nonzero_self_intertwiner():
    r = rng(12)
    for _ in range(10):
        if r.random() < 0.5:
            alpha = Automorphism.inner(M2M2.random_unitary(r))
        else:
            alpha = Automorphism(M2M2, (1, 0), M2M2.random_unitary(r).blocks)
        nonzero = len(intertwiner_space(Automorphism.identity(M2M2), alpha)) > 0
        assert nonzero == (alpha.outer_class == (0, 1))


def test_relative_commutant_full_matrix_algebra():
    gens = [b.blocks[0] for b in M2.matrix_units()]
    basis = relative_commutant(gens)
    assert len(basis) == 1


def test_relative_commutant_diagonal_in_m2():
    diag = [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]
    basis = relative_commutant(diag)
    assert len(basis) == 2
    for b in basis:
        assert abs(b[0, 1]) <= 1e-10 and abs(b[1, 0]) <= 1e-10


def test_gauge_normalize_fixes_leading_phase():
    u = gauge_normalize(M2.element([-1j * SX]))
    assert u.allclose(M2.element([SX]), tol=1e-12)


def test_central_unitary_roundtrip():
    cu = CentralUnitary(M2M2, (1j, -1))
    elem = cu.to_element()
    back = CentralUnitary.from_element(elem)
    assert back.allclose(cu)
    assert (cu * cu.inverse()).allclose(CentralUnitary.one(M2M2))
