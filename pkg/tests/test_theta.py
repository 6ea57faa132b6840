import numpy as np
import pytest

from hilbext.algebra import Automorphism, BlockAlgebra, CentralUnitary, solve_inner_cocycle
from hilbext.cohomology import CentralCochain, coboundary, is_central_cocycle
from hilbext.errors import ConsistencyError, NoSolutionError, PreconditionError
from hilbext.groups import FiniteAbelianGroup
from hilbext.theta import (
    CocycleTable,
    OuterAction,
    associativity_obstruction,
    central_quotient_cochain,
    cocycle_from_representatives,
    epsilon_from_unitaries,
    equal_mod_center,
    normalize_cocycle,
    obstruction_is_trivial,
    permutator,
    term_inv,
    term_mul,
    unitary_intertwiner,
    validate_outer_action,
    verify_cocycle,
    verify_dr_permutator_system,
    verify_lifting_certificate,
    verify_permutator_relations,
)

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)

Z2 = FiniteAbelianGroup([2])
Z2Z2 = FiniteAbelianGroup([2, 2])
M2 = BlockAlgebra([2])
C2 = BlockAlgebra([1, 1])
M2M2 = BlockAlgebra([2, 2])


def swap_action():
    """Scalar blocks swapped by the nontrivial element of Z2."""
    swap = Automorphism(C2, (1, 0), [np.eye(1), np.eye(1)])
    return OuterAction(Z2, C2, {(1,): swap})


def pauli_rep_action():
    """Inner representatives by the Pauli unitaries on a full matrix block."""
    reps = {
        (1, 0): Automorphism.inner(M2.element([SX])),
        (0, 1): Automorphism.inner(M2.element([SZ])),
        (1, 1): Automorphism.inner(M2.element([SX @ SZ])),
    }
    return OuterAction(Z2Z2, M2, reps)


def trivial_action_m2():
    return OuterAction.trivial(Z2Z2, M2)


def pauli_cochain(modulus=2):
    entries = {
        (a, b): ((a[1] * b[0]) % 2 * (modulus // 2),)
        for a in Z2Z2.elements()
        for b in Z2Z2.elements()
    }
    return CentralCochain(Z2Z2, 2, modulus, entries=entries)


def block_swap_action(unitaries=None):
    w = unitaries or [np.eye(2), np.eye(2)]
    swap = Automorphism(M2M2, (1, 0), w)
    return OuterAction(Z2, M2M2, {(1,): swap})


def test_validate_swap_action():
    report = validate_outer_action(swap_action())
    assert report.passed
    assert swap_action().is_injective


def test_validate_trivial_theta():
    action = pauli_rep_action()
    report = validate_outer_action(action)
    assert report.passed
    assert action.outer_kernel() == Z2Z2.elements()
    assert not action.is_injective


def test_validate_block_swap_with_unitaries():
    r = np.random.default_rng(0)
    q = np.linalg.qr(r.standard_normal((2, 2)) + 1j * r.standard_normal((2, 2)))[0]
    action = block_swap_action([q, q.conj().T])
    assert validate_outer_action(action).passed
    assert action.is_injective


def test_validate_rejects_non_homomorphic_permutations():
    c3 = BlockAlgebra([1, 1, 1])
    cyc = Automorphism(c3, (1, 2, 0), [np.eye(1)] * 3)
    action = OuterAction(Z2, c3, {(1,): cyc})
    report = validate_outer_action(action)
    assert not report.passed
    failing = [c for c in report.checks if not c.passed]
    assert failing[0].name == "outer-homomorphism"
    assert "(1,)" in failing[0].detail


def test_cocycle_of_lifting_is_identity():
    action = swap_action()
    table = cocycle_from_representatives(action)
    one = C2.identity()
    for (a, b), u in table.entries.items():
        assert u.allclose(one, tol=1e-14)


def test_cocycle_pauli_representatives_anticommutation():
    # Raw (ungauged) solutions reproduce the Pauli sign: the two orders of
    # composing ad(sx) and ad(sz) differ by -1.
    action = pauli_rep_action()
    b = {x: action.representative(x) for x in Z2Z2.elements()}
    raw_ab = solve_inner_cocycle(
        b[(1, 0)].compose(b[(0, 1)]), b[(1, 1)], normalize=False
    )
    raw_ba = solve_inner_cocycle(
        b[(0, 1)].compose(b[(1, 0)]), b[(1, 1)], normalize=False
    )
    q = raw_ab * raw_ba.inverse()
    assert q.allclose(-M2.identity(), tol=1e-12) or q.allclose(M2.identity(), tol=1e-12)
    assert (raw_ab * raw_ba.inverse() + raw_ba * raw_ab.inverse()).norm() <= 2 + 1e-12
    # After the deterministic gauge the table is exactly trivial: the Pauli
    # conjugations form a genuine lifting.
    table = cocycle_from_representatives(action)
    for u in table.entries.values():
        assert u.allclose(M2.identity(), tol=1e-13)


def test_verify_cocycle_passes_for_liftings_and_twists():
    for action in (swap_action(), pauli_rep_action(), block_swap_action()):
        table = cocycle_from_representatives(action)
        assert verify_cocycle(action, table).passed
    twisted = cocycle_from_representatives(trivial_action_m2()).twisted(pauli_cochain())
    report = verify_cocycle(trivial_action_m2(), twisted)
    assert report.passed
    assert report.worst_residual() <= 1e-12


def test_verify_cocycle_fault_injection_names_triple():
    action = trivial_action_m2()
    table = cocycle_from_representatives(action).twisted(pauli_cochain())
    bad = table.perturbed({((0, 1), (1, 0)): -1.0})
    report = verify_cocycle(action, bad)
    failing = {c.name for c in report.failures()}
    assert "cocycle-equation" in failing
    eq = next(c for c in report.checks if c.name == "cocycle-equation")
    assert "worst at ((" in eq.detail


def test_obstruction_trivial_for_valid_tables():
    action = pauli_rep_action()
    table = cocycle_from_representatives(action)
    gamma = associativity_obstruction(action, table)
    assert len(gamma) == 64
    assert obstruction_is_trivial(gamma)


def test_obstruction_equals_injected_coboundary():
    action = trivial_action_m2()
    table = cocycle_from_representatives(action)
    rng = np.random.default_rng(5)
    nonid = [x for x in Z2Z2.elements() if x != Z2Z2.identity]
    t = CentralCochain(
        Z2Z2, 2, 4, entries={(a, b): (int(rng.integers(0, 4)),) for a in nonid for b in nonid}
    )
    gamma = associativity_obstruction(action, table.twisted(t))
    expected = -coboundary(t)
    for key, cu in gamma.items():
        want = np.exp(2j * np.pi * expected.entry(*key)[0] / 4)
        assert abs(cu.phases[0] - want) <= 1e-10


def test_normalize_cocycle_removes_removable_obstruction():
    action = trivial_action_m2()
    table = cocycle_from_representatives(action)
    rng = np.random.default_rng(6)
    nonid = [x for x in Z2Z2.elements() if x != Z2Z2.identity]
    t = CentralCochain(
        Z2Z2, 2, 4, entries={(a, b): (int(rng.integers(0, 4)),) for a in nonid for b in nonid}
    )
    perturbed = table.twisted(t)
    fixed, report = normalize_cocycle(action, perturbed)
    assert report.passed or not report.checks[0].passed  # obstruction found
    assert verify_cocycle(action, fixed).passed


def test_normalize_cocycle_keeps_valid_tables():
    action = swap_action()
    table = cocycle_from_representatives(action)
    fixed, report = normalize_cocycle(action, table)
    assert fixed is table
    assert report.passed


def test_permutator_commuting_and_self():
    swap = swap_action().representative((1,))
    assert permutator(swap, swap).allclose(C2.identity(), tol=1e-13)
    ident = Automorphism.identity(C2)
    assert permutator(ident, swap).allclose(C2.identity(), tol=1e-13)


def test_permutator_pauli_class():
    ad_x = Automorphism.inner(M2.element([SX]))
    ad_z = Automorphism.inner(M2.element([SZ]))
    raw = (
        ad_x.compose(ad_z).compose(ad_x.inverse()).compose(ad_z.inverse())
    ).implementing_unitary()
    # The raw commutator unitary is the Pauli sign -1; its class modulo the
    # center is trivial, which the gauge normalization makes explicit.
    assert raw.allclose(-M2.identity(), tol=1e-12)
    assert permutator(ad_x, ad_z).allclose(M2.identity(), tol=1e-12)


def test_permutator_requires_inner_commutator():
    c3 = BlockAlgebra([1, 1, 1])
    rot = Automorphism(c3, (1, 2, 0), [np.eye(1)] * 3)
    swap01 = Automorphism(c3, (1, 0, 2), [np.eye(1)] * 3)
    with pytest.raises(NoSolutionError):
        permutator(rot, swap01)


def test_permutator_class_gauge_invariant():
    # Regauging the implementing unitaries by central phases does not move
    # the permutator class modulo the center.
    rng = np.random.default_rng(7)
    action = block_swap_action()
    g1 = action.representative((1,))
    for _ in range(5):
        phases = np.exp(2j * np.pi * rng.random(2))
        regauged = Automorphism(
            M2M2, g1.block_perm, [p * w for p, w in zip(phases, g1.block_unitaries)]
        )
        ok, defect = equal_mod_center(permutator(g1, regauged), permutator(g1, g1))
        assert ok, defect


def test_permutator_relations_pauli_family():
    family = [
        ("ad_sx", Automorphism.inner(M2.element([SX]))),
        ("ad_sz", Automorphism.inner(M2.element([SZ]))),
        ("ad_sxsz", Automorphism.inner(M2.element([SX @ SZ]))),
    ]
    report = verify_permutator_relations(family)
    assert report.passed


def test_permutator_relations_commutative_algebra():
    # Regular Klein-four permutations of the coordinates: pairwise commuting.
    c4 = BlockAlgebra([1, 1, 1, 1])
    family = [
        ("t10", Automorphism(c4, (1, 0, 3, 2), [np.eye(1)] * 4)),
        ("t01", Automorphism(c4, (2, 3, 0, 1), [np.eye(1)] * 4)),
        ("t11", Automorphism(c4, (3, 2, 1, 0), [np.eye(1)] * 4)),
    ]
    report = verify_permutator_relations(family)
    assert report.passed
    for name, g1 in family:
        for _, g2 in family:
            assert permutator(g1, g2).allclose(c4.identity(), tol=1e-13)


def test_permutator_relations_block_swap_family():
    rng = np.random.default_rng(8)
    action = block_swap_action()
    u = M2M2.random_unitary(rng)
    family = [
        ("swap", action.representative((1,))),
        ("ad_u", Automorphism.inner(u)),
        ("ad_u_swap", Automorphism.inner(u).compose(action.representative((1,)))),
    ]
    report = verify_permutator_relations(family)
    assert report.passed


def test_lifting_certificate_trivial_cases():
    action = swap_action()
    table = cocycle_from_representatives(action)
    cert = {x: C2.identity() for x in Z2.elements()}
    ok, report = verify_lifting_certificate(action, table, cert)
    assert ok and report.passed


def test_lifting_certificate_rejects_bad_v():
    action = trivial_action_m2()
    table = cocycle_from_representatives(action).twisted(pauli_cochain())
    rng = np.random.default_rng(9)
    cert = {x: M2.identity() for x in Z2Z2.elements()}
    # Commuting diagonal unitaries that do not compose coherently.
    for x in Z2Z2.elements():
        if x != Z2Z2.identity:
            cert[x] = M2.element([np.diag(np.exp(2j * np.pi * rng.random(2)))])
    ok, report = verify_lifting_certificate(action, table, cert)
    assert not ok
    hom = next(c for c in report.checks if c.name == "corrected-family-homomorphism")
    assert "worst at" in hom.detail


def test_lifting_certificate_accepts_identity_on_twisted_table():
    # The table carries a central twist; the identity certificate still
    # certifies that the outer action lifts (twists live in cohomology).
    action = trivial_action_m2()
    table = cocycle_from_representatives(action).twisted(pauli_cochain())
    cert = {x: M2.identity() for x in Z2Z2.elements()}
    ok, _ = verify_lifting_certificate(action, table, cert)
    assert ok


def test_lifting_certificate_precondition():
    action = swap_action()
    table = cocycle_from_representatives(action)
    bad = {x: C2.scalar([1j, 1j]) for x in Z2.elements()}
    with pytest.raises(PreconditionError):
        verify_lifting_certificate(action, table, bad)


def test_term_algebra_inverse():
    action = pauli_rep_action()
    table = cocycle_from_representatives(action)
    t = (M2.element([SX @ SZ]), (1, 0))
    prod = term_mul(action, table, t, term_inv(action, table, t))
    assert prod[1] == Z2Z2.identity
    assert prod[0].allclose(M2.identity(), tol=1e-12)


def test_dr_system_pauli_exact_signs():
    action = trivial_action_m2()
    table = cocycle_from_representatives(action).twisted(pauli_cochain())
    coeffs = {x: M2.identity() for x in Z2Z2.elements()}
    eps = epsilon_from_unitaries(action, table, coeffs)
    # Exact Pauli commutation signs: (-1)^(a2 b1 - a1 b2).
    for a in Z2Z2.elements():
        for b in Z2Z2.elements():
            sign = (-1.0) ** (a[1] * b[0] + a[0] * b[1])
            assert eps[(a, b)].allclose(sign * M2.identity(), tol=1e-12)
    report = verify_dr_permutator_system(action, table, eps)
    assert report.passed


def test_dr_system_trivial_lifting():
    action = OuterAction.trivial(Z2, M2)
    table = cocycle_from_representatives(action)
    eps = {(a, b): M2.identity() for a in Z2.elements() for b in Z2.elements()}
    assert verify_dr_permutator_system(action, table, eps).passed


def test_dr_system_fault_injection():
    action = trivial_action_m2()
    table = cocycle_from_representatives(action).twisted(pauli_cochain())
    coeffs = {x: M2.identity() for x in Z2Z2.elements()}
    eps = epsilon_from_unitaries(action, table, coeffs)
    eps[((1, 0), (0, 1))] = -1.0 * eps[((1, 0), (0, 1))]
    report = verify_dr_permutator_system(action, table, eps)
    failing = {c.name for c in report.failures()}
    assert failing, "sign flip must be caught"
    assert failing <= {"antisymmetry", "composition", "skew-match"}


def test_dr_system_naturality_across_regauged_family():
    action = trivial_action_m2()
    table = cocycle_from_representatives(action).twisted(pauli_cochain())
    rng = np.random.default_rng(10)
    coeffs = {x: M2.identity() for x in Z2Z2.elements()}
    coeffs2 = {
        x: (M2.identity() if x == Z2Z2.identity else M2.random_unitary(rng))
        for x in Z2Z2.elements()
    }
    eps = epsilon_from_unitaries(action, table, coeffs)
    eps2 = epsilon_from_unitaries(action, table, coeffs2)
    intertwiners = {x: coeffs2[x] * coeffs[x].inverse() for x in Z2Z2.elements()}
    report = verify_dr_permutator_system(
        action, table, eps, primed=(action, eps2, intertwiners)
    )
    assert report.passed


def test_dr_system_requires_trivial_center():
    action = swap_action()
    table = cocycle_from_representatives(action)
    eps = {(a, b): C2.identity() for a in Z2.elements() for b in Z2.elements()}
    with pytest.raises(PreconditionError):
        verify_dr_permutator_system(action, table, eps)


def test_central_quotient_recovers_twist():
    action = trivial_action_m2()
    base = cocycle_from_representatives(action)
    lam = pauli_cochain()
    twisted = base.twisted(lam)
    recovered = central_quotient_cochain(twisted, base, modulus=2)
    assert recovered.entries == lam.entries
    assert is_central_cocycle(recovered)


def test_unitary_intertwiner_closed_form():
    rng = np.random.default_rng(11)
    action = block_swap_action()
    g1 = action.representative((1,))
    u = M2M2.random_unitary(rng)
    g2 = Automorphism.inner(u).compose(g1)
    x = unitary_intertwiner(g1, g2)
    assert x is not None and x.is_unitary()
    for e in M2M2.matrix_units():
        assert (x * g1.apply(e) - g2.apply(e) * x).norm() <= 1e-12
    assert unitary_intertwiner(g1, Automorphism.identity(M2M2)) is None
