"""Outer actions on block algebras and their unitary 2-cocycle calculus.

An outer action of a finite abelian group on a block algebra is given by
one representative automorphism per group element, identity at the group
identity, such that the permutation parts form a group homomorphism.  The
representatives need not compose on the nose; the failure is measured by
a table of unitaries,

    beta[x] . beta[y] = ad(omega(x, y)) . beta[x y],

and `cocycle_from_representatives` produces exactly this table in a
deterministic gauge.  Associativity of triple compositions forces a
center-valued obstruction out of the table; the extension construction in
`hilbext.extension` is available precisely when that obstruction is
trivial, i.e. when omega satisfies the full 2-cocycle identity.  The
verification routines below check every identity the table is supposed to
satisfy, the commutator (permutator) relations of implemented
automorphisms modulo the central unitaries, lifting certificates, and the
sharper exact relations available over a trivial center.

Equality "mod the central unitaries" is always tested as: the quotient of
the two sides must be a unitary central element within tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import (
    AlgebraElement,
    Automorphism,
    BlockAlgebra,
    CentralUnitary,
    compose_block_permutations,
    gauge_normalize,
    solve_inner_cocycle,
)
from .cohomology import CentralCochain, obstruction_solve, snap_phase_vector
from .errors import (
    ConsistencyError,
    PreconditionError,
    StructuralError,
    UndecidableError,
)
from .groups import Element, FiniteAbelianGroup
from .reporting import Report

#: Default tolerance for mod-center comparisons and validation.
MOD_CENTER_TOL = 1e-10

#: Default tolerance for the exact cocycle identities.
COCYCLE_TOL = 1e-12


class OuterAction:
    """Group of outer classes realized by chosen representative automorphisms.

    ``representatives`` maps every group element to an `Automorphism`; the
    identity may be omitted and defaults to the identity automorphism.
    Construction only checks shapes; run `validate_outer_action` for the
    mathematical requirements (identity representative, permutation
    homomorphism).
    """

    __slots__ = ("group", "algebra", "representatives")

    def __init__(
        self,
        group: FiniteAbelianGroup,
        algebra: BlockAlgebra,
        representatives: dict[Element, Automorphism],
    ):
        reps = {}
        for chi, beta in representatives.items():
            chi = group.element(chi)
            if beta.algebra.block_dims != algebra.block_dims:
                raise StructuralError(f"representative at {chi} lives on {beta.algebra}")
            reps[chi] = beta
        reps.setdefault(group.identity, Automorphism.identity(algebra))
        missing = [x for x in group.elements() if x not in reps]
        if missing:
            raise StructuralError(f"no representative for {missing}")
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "representatives", reps)

    def __setattr__(self, name, value):
        raise AttributeError("OuterAction is immutable")

    @classmethod
    def trivial(cls, group: FiniteAbelianGroup, algebra: BlockAlgebra) -> "OuterAction":
        """Every group element represented by the identity automorphism."""
        ident = Automorphism.identity(algebra)
        return cls(group, algebra, {x: ident for x in group.elements()})

    def representative(self, chi: Element) -> Automorphism:
        return self.representatives[self.group.element(chi)]

    def outer_kernel(self) -> list[Element]:
        """Group elements whose representative is inner."""
        return [x for x in self.group.elements() if self.representative(x).is_inner]

    @property
    def is_injective(self) -> bool:
        return self.outer_kernel() == [self.group.identity]

    def center_action(self) -> dict[Element, tuple[int, ...]]:
        """How each group element permutes the center coordinates.

        Inner parts act trivially on the center, so this is just the block
        permutation of each representative; it is the coefficient action
        used by the center-valued cohomology.
        """
        return {x: self.representative(x).block_perm for x in self.group.elements()}

    def compatible(self, other: "OuterAction") -> bool:
        return (
            self.group.cyclic_orders == other.group.cyclic_orders
            and self.algebra.block_dims == other.algebra.block_dims
        )


def validate_outer_action(action: OuterAction, tol: float = MOD_CENTER_TOL) -> Report:
    """Identity representative, permutation homomorphism, kernel summary."""
    report = Report("outer action validation")
    g = action.group
    ident = action.representative(g.identity)
    report.check_residual(
        "identity-representative",
        ident.defect(Automorphism.identity(action.algebra)),
        tol,
    )
    bad = None
    for x in g.elements():
        for y in g.elements():
            expected = compose_block_permutations(
                action.representative(x).block_perm, action.representative(y).block_perm
            )
            if action.representative(g.compose(x, y)).block_perm != expected:
                bad = (x, y)
                break
        if bad:
            break
    report.add(
        "outer-homomorphism",
        bad is None,
        detail="" if bad is None else f"violated at {bad[0]} {bad[1]}",
    )
    kernel = action.outer_kernel()
    report.add(
        "outer-kernel",
        True,
        detail=f"kernel size {len(kernel)}; "
        + ("injective" if action.is_injective else "not injective"),
    )
    return report


class CocycleTable:
    """Unitary table measuring the composition defect of representatives."""

    __slots__ = ("action", "entries")

    def __init__(self, action: OuterAction, entries: dict):
        g = action.group
        table = {}
        for (a, b), u in entries.items():
            key = (g.element(a), g.element(b))
            if not isinstance(u, AlgebraElement):
                raise StructuralError(f"entry at {key} is not an algebra element")
            table[key] = u
        for a in g.elements():
            for b in g.elements():
                if (a, b) not in table:
                    raise StructuralError(f"missing entry at ({a}, {b})")
        object.__setattr__(self, "action", action)
        object.__setattr__(self, "entries", table)

    def __setattr__(self, name, value):
        raise AttributeError("CocycleTable is immutable")

    def entry(self, a: Element, b: Element) -> AlgebraElement:
        g = self.action.group
        return self.entries[(g.element(a), g.element(b))]

    def twisted(self, lam: CentralCochain) -> "CocycleTable":
        """Entrywise product with an exact central 2-cochain."""
        if lam.degree != 2:
            raise StructuralError("twist requires a 2-cochain")
        if lam.m != self.action.algebra.num_blocks:
            raise StructuralError("cochain coordinates do not match the center")
        out = {}
        for (a, b), u in self.entries.items():
            phases = lam.phases(a, b)
            out[(a, b)] = CentralUnitary(self.action.algebra, phases).to_element() * u
        return CocycleTable(self.action, out)

    def perturbed(self, multipliers: dict) -> "CocycleTable":
        """Entrywise scalar multipliers (used for fault injection)."""
        g = self.action.group
        out = dict(self.entries)
        for (a, b), z in multipliers.items():
            key = (g.element(a), g.element(b))
            out[key] = complex(z) * out[key]
        return CocycleTable(self.action, out)


def cocycle_from_representatives(action: OuterAction) -> CocycleTable:
    """Solve ``beta[x] . beta[y] = ad(omega(x, y)) . beta[x y]`` for omega.

    Entries come out gauge-normalized; boundary entries are forced to the
    identity, matching the normalization of the defining equation.
    """
    g = action.group
    one = action.algebra.identity()
    entries = {}
    for a in g.elements():
        for b in g.elements():
            if a == g.identity or b == g.identity:
                entries[(a, b)] = one
                continue
            composed = action.representative(a).compose(action.representative(b))
            entries[(a, b)] = solve_inner_cocycle(
                composed, action.representative(g.compose(a, b))
            )
    return CocycleTable(action, entries)


def equal_mod_center(
    left: AlgebraElement, right: AlgebraElement, tol: float = MOD_CENTER_TOL
) -> tuple[bool, float]:
    """Test ``left == z * right`` for some central unitary ``z``.

    Returns the verdict together with the defect: how far the quotient is
    from being a unitary central element.
    """
    q = left * right.inverse()
    defect = q.central_defect()
    for b in q.blocks:
        d = b.shape[0]
        c = complex(b.trace() / d)
        defect = max(defect, abs(abs(c) - 1.0))
    return defect <= tol, defect


def associativity_obstruction(
    action: OuterAction, table: CocycleTable, tol: float = MOD_CENTER_TOL
) -> dict[tuple[Element, Element, Element], CentralUnitary]:
    """Center-valued triple defect of the table.

    For each triple, ``omega(a,b) omega(ab,c)`` and
    ``beta_a(omega(b,c)) omega(a,bc)`` implement the same automorphism, so
    their quotient must be central; non-centrality within tolerance means
    the input table is inconsistent and raises.  The table satisfies the
    2-cocycle identity exactly when every value here is the identity.
    """
    g = action.group
    out = {}
    for a in g.elements():
        for b in g.elements():
            for c in g.elements():
                lhs = table.entry(a, b) * table.entry(g.compose(a, b), c)
                rhs = action.representative(a).apply(table.entry(b, c)) * table.entry(
                    a, g.compose(b, c)
                )
                q = lhs * rhs.inverse()
                if q.central_defect() > tol:
                    raise ConsistencyError(
                        f"triple defect at ({a}, {b}, {c}) is not central "
                        f"(defect {q.central_defect():.3e}); invalid table"
                    )
                out[(a, b, c)] = CentralUnitary.from_element(q, tol)
    return out


def obstruction_is_trivial(gamma: dict, tol: float = COCYCLE_TOL) -> bool:
    one = 1.0 + 0.0j
    return all(
        max(abs(p - one) for p in cu.phases) <= tol for cu in gamma.values()
    )


def obstruction_cochain(
    action: OuterAction, gamma: dict, modulus: int
) -> CentralCochain:
    """Exact-phase form of an obstruction table; raises if phases do not snap."""
    entries = {}
    for key, cu in gamma.items():
        entries[key] = snap_phase_vector(cu.phases, modulus)
    return CentralCochain(
        action.group, 3, modulus, action.algebra.num_blocks, action.center_action(), entries
    )


def normalize_cocycle(
    action: OuterAction, table: CocycleTable, tol: float = MOD_CENTER_TOL
) -> tuple[CocycleTable, Report]:
    """Remove a removable obstruction by re-choosing the table.

    If the triple defect is nontrivial but is the coboundary of a central
    2-cochain, the table is twisted by the inverse of that cochain and the
    result satisfies the cocycle identity.  When the obstruction is not a
    coboundary there is no consistent re-choice at all, and the returned
    report says so.  Irrational obstruction phases raise
    `UndecidableError` with the snap distance.
    """
    report = Report("cocycle normalization")
    gamma = associativity_obstruction(action, table, tol)
    worst = max(
        max(abs(p - 1) for p in cu.phases) for cu in gamma.values()
    )
    if worst <= COCYCLE_TOL:
        report.add("obstruction-trivial", True, residual=worst, tolerance=COCYCLE_TOL)
        return table, report
    report.add("obstruction-trivial", False, residual=worst, tolerance=COCYCLE_TOL)
    modulus = action.group.order ** 2
    cochain = obstruction_cochain(action, gamma, modulus)
    witness = obstruction_solve(cochain)
    if witness is None:
        report.add(
            "obstruction-removable",
            False,
            detail="obstruction class is not a coboundary; no consistent table exists",
        )
        return table, report
    report.add("obstruction-removable", True, detail=f"witness modulus {witness.modulus}")
    # Twisting by z changes the triple defect by minus the coboundary of z,
    # so the witness with coboundary gamma removes the obstruction.
    fixed = table.twisted(witness)
    gamma_fixed = associativity_obstruction(action, fixed, tol)
    worst_fixed = max(
        max(abs(p - 1) for p in cu.phases) for cu in gamma_fixed.values()
    )
    report.check_residual("obstruction-after-twist", worst_fixed, COCYCLE_TOL)
    return fixed, report


def verify_cocycle(
    action: OuterAction, table: CocycleTable, tol: float = COCYCLE_TOL
) -> Report:
    """All identities a generalized unitary 2-cocycle must satisfy.

    Checks, each with its worst residual and the argument tuple achieving
    it: unitarity of the entries, the intertwining relation against the
    composed representatives, the boundary normalization, the 2-cocycle
    equation over all triples, and the commutator (skew) relation tying
    ``omega(a,b) omega(b,a)*`` to the commutator automorphism.
    """
    report = Report("generalized 2-cocycle verification")
    g = action.group
    one = action.algebra.identity()
    units = action.algebra.matrix_units()

    worst, where = 0.0, None
    for (a, b), u in table.entries.items():
        r = (u.adjoint() * u - one).norm()
        if r > worst:
            worst, where = r, (a, b)
    report.check_residual("unitarity", worst, tol, detail=f"worst at {where}")

    worst, where = 0.0, None
    for (a, b), u in table.entries.items():
        composed = action.representative(a).compose(action.representative(b))
        target = action.representative(g.compose(a, b))
        for e in units:
            r = (u * target.apply(e) - composed.apply(e) * u).norm()
            if r > worst:
                worst, where = r, (a, b)
    report.check_residual("intertwining", worst, tol, detail=f"worst at {where}")

    worst = 0.0
    for x in g.elements():
        worst = max(
            worst,
            (table.entry(g.identity, x) - one).norm(),
            (table.entry(x, g.identity) - one).norm(),
        )
    report.check_residual("boundary", worst, tol)

    worst, where = 0.0, None
    for a in g.elements():
        for b in g.elements():
            for c in g.elements():
                lhs = table.entry(a, b) * table.entry(g.compose(a, b), c)
                rhs = action.representative(a).apply(table.entry(b, c)) * table.entry(
                    a, g.compose(b, c)
                )
                r = (lhs - rhs).norm()
                if r > worst:
                    worst, where = r, (a, b, c)
    report.check_residual("cocycle-equation", worst, tol, detail=f"worst at {where}")

    worst, where = 0.0, None
    for a in g.elements():
        for b in g.elements():
            skew = table.entry(a, b) * table.entry(b, a).inverse()
            ba, bb = action.representative(a), action.representative(b)
            commutator = ba.compose(bb).compose(ba.inverse()).compose(bb.inverse())
            if not skew.is_unitary(1e-8) or commutator.block_perm != tuple(
                range(action.algebra.num_blocks)
            ):
                r = float("inf")
            else:
                ad_skew = Automorphism.inner(gauge_normalize(skew))
                r = commutator.defect(ad_skew)
            if r > worst:
                worst, where = r, (a, b)
    report.check_residual("skew-relation", worst, tol, detail=f"worst at {where}")
    return report


# ---------------------------------------------------------------------------
# Permutators


def permutator(gamma1: Automorphism, gamma2: Automorphism) -> AlgebraElement:
    """Gauge-normalized unitary implementing the commutator of two automorphisms.

    Defined when the commutator ``g1 . g2 . g1^-1 . g2^-1`` is inner,
    which holds whenever the two permutation parts commute.  The result is
    canonical modulo central unitaries, and the deterministic gauge picks
    one representative of that class.
    """
    commutator = (
        gamma1.compose(gamma2).compose(gamma1.inverse()).compose(gamma2.inverse())
    )
    return gauge_normalize(commutator.implementing_unitary())


def unitary_intertwiner(
    gamma1: Automorphism, gamma2: Automorphism
) -> AlgebraElement | None:
    """Canonical unitary in the intertwiner space of two automorphisms.

    Exists exactly when the permutation parts agree; built blockwise in
    closed form from the implementing unitaries.
    """
    if gamma1.block_perm != gamma2.block_perm:
        return None
    blocks = [
        w2 @ w1.conj().T
        for w1, w2 in zip(gamma1.block_unitaries, gamma2.block_unitaries)
    ]
    return AlgebraElement(gamma1.algebra, blocks)


def verify_permutator_relations(
    automorphisms: list[tuple[str, Automorphism]],
    tol: float = MOD_CENTER_TOL,
) -> Report:
    """Commutator-unitary relations over a family, modulo the center.

    On all pairs and triples of the family (with the identity adjoined):
    antisymmetry, triviality against the identity, the composition rule
    ``g1(eps(g2,g3)) eps(g1,g3) = eps(g1 g2, g3)``, and naturality under
    unitary intertwiners between same-class members.  Every identity is
    required modulo a central unitary only; the number of genuinely
    nontrivial central quotients is reported as a detail.
    """
    if not automorphisms:
        raise PreconditionError("need at least one automorphism")
    algebra = automorphisms[0][1].algebra
    family = [("id", Automorphism.identity(algebra))] + list(automorphisms)
    report = Report("permutator relations")
    nontrivial = 0

    worst, where = 0.0, None
    for n1, g1 in family:
        for n2, g2 in family:
            prod = permutator(g1, g2) * permutator(g2, g1)
            ok, defect = equal_mod_center(prod, algebra.identity(), tol)
            if (prod - algebra.identity()).norm() > tol:
                nontrivial += 1
            if defect > worst:
                worst, where = defect, (n1, n2)
    report.check_residual("antisymmetry", worst, tol, detail=f"worst at {where}")

    worst = 0.0
    one = algebra.identity()
    for name, g in family:
        worst = max(
            worst,
            (permutator(family[0][1], g) - one).norm(),
            (permutator(g, family[0][1]) - one).norm(),
        )
    report.check_residual("identity-boundary", worst, tol)

    worst, where = 0.0, None
    for n1, g1 in family:
        for n2, g2 in family:
            for n3, g3 in family:
                lhs = g1.apply(permutator(g2, g3)) * permutator(g1, g3)
                rhs = permutator(g1.compose(g2), g3)
                ok, defect = equal_mod_center(lhs, rhs, tol)
                if defect > worst:
                    worst, where = defect, (n1, n2, n3)
    report.check_residual("composition", worst, tol, detail=f"worst at {where}")

    worst, where = 0.0, None
    pairs = [
        (n, g, n2, g2)
        for n, g in family
        for n2, g2 in family
        if g.block_perm == g2.block_perm
    ]
    for n1, g1, n1p, g1p in pairs:
        a = unitary_intertwiner(g1, g1p)
        for n2, g2, n2p, g2p in pairs:
            b = unitary_intertwiner(g2, g2p)
            lhs = a * g1.apply(b) * permutator(g1, g2)
            rhs = permutator(g1p, g2p) * b * g2.apply(a)
            ok, defect = equal_mod_center(lhs, rhs, tol)
            if defect > worst:
                worst, where = defect, (n1, n1p, n2, n2p)
    report.check_residual("naturality", worst, tol, detail=f"worst at {where}")
    report.add(
        "central-quotients",
        True,
        detail=f"{nontrivial} antisymmetry products are nontrivial central unitaries",
    )
    return report


# ---------------------------------------------------------------------------
# Lifting certificates


def verify_lifting_certificate(
    action: OuterAction,
    table: CocycleTable,
    certificate: dict[Element, AlgebraElement],
    tol: float = MOD_CENTER_TOL,
) -> tuple[bool, Report]:
    """Does ``chi -> ad(V_chi) . beta_chi`` straighten the action to a lifting?

    Two equivalent criteria are evaluated and must agree: the corrected
    family composes on the nose, and the table matches
    ``beta_a(V_b^-1) V_a^-1 V_ab`` modulo central unitaries for all pairs.
    """
    g = action.group
    cert = {g.element(x): v for x, v in certificate.items()}
    missing = [x for x in g.elements() if x not in cert]
    if missing:
        raise PreconditionError(f"certificate misses {missing}")
    if (cert[g.identity] - action.algebra.identity()).norm() > tol:
        raise PreconditionError("certificate must be the identity at the group identity")
    for x, v in cert.items():
        if not v.is_unitary(tol):
            raise PreconditionError(f"certificate at {x} is not unitary")

    report = Report("lifting certificate")
    corrected = {
        x: Automorphism.inner(cert[x]).compose(action.representative(x))
        for x in g.elements()
    }
    worst, where = 0.0, None
    for a in g.elements():
        for b in g.elements():
            lhs = corrected[a].compose(corrected[b])
            rhs = corrected[g.compose(a, b)]
            r = lhs.defect(rhs) if lhs.block_perm == rhs.block_perm else float("inf")
            if r > worst:
                worst, where = r, (a, b)
    hom = report.check_residual(
        "corrected-family-homomorphism", worst, tol, detail=f"worst at {where}"
    )

    worst, where = 0.0, None
    for a in g.elements():
        for b in g.elements():
            predicted = (
                action.representative(a).apply(cert[b].inverse())
                * cert[a].inverse()
                * cert[g.compose(a, b)]
            )
            ok, defect = equal_mod_center(table.entry(a, b), predicted, tol)
            if defect > worst:
                worst, where = defect, (a, b)
    form = report.check_residual(
        "cocycle-of-certificate-form", worst, tol, detail=f"worst at {where}"
    )

    if hom.passed != form.passed:
        raise ConsistencyError(
            "the two equivalent lifting criteria disagree; tolerances too tight "
            "or inconsistent input data"
        )
    return hom.passed, report


# ---------------------------------------------------------------------------
# Single-term arithmetic and the trivial-center (exact) permutator system


def term_mul(action, table, t1, t2):
    """Product of single terms ``(A, a) ~ A U_a`` in the extension algebra."""
    (a_coeff, a), (b_coeff, b) = t1, t2
    coeff = a_coeff * action.representative(a).apply(b_coeff) * table.entry(a, b)
    return coeff, action.group.compose(a, b)


def term_inv(action, table, t):
    """Inverse of a single term, using the explicit basis-unitary inverse."""
    coeff, a = t
    a_inv = action.group.inverse(a)
    new_coeff = action.representative(a_inv).apply(
        (coeff * table.entry(a, a_inv)).inverse()
    )
    return new_coeff, a_inv


def epsilon_from_unitaries(
    action: OuterAction,
    table: CocycleTable,
    coefficients: dict[Element, AlgebraElement],
) -> dict[tuple[Element, Element], AlgebraElement]:
    """Exact permutator system from implementing unitaries of the extension.

    Each group element carries a unitary ``V_x = C_x U_x``; the system is
    ``eps(x, y) = V_x V_y V_x^-1 V_y^-1``, computed in the term algebra and
    landing in the coefficient algebra because the group is abelian.
    """
    g = action.group
    out = {}
    for x in g.elements():
        for y in g.elements():
            t = term_mul(action, table, (coefficients[x], x), (coefficients[y], y))
            t = term_mul(action, table, t, term_inv(action, table, (coefficients[x], x)))
            t = term_mul(action, table, t, term_inv(action, table, (coefficients[y], y)))
            coeff, rest = t
            if rest != g.identity:
                raise ConsistencyError("term commutator escaped the coefficient algebra")
            out[(x, y)] = coeff
    return out


def verify_dr_permutator_system(
    action: OuterAction,
    table: CocycleTable,
    epsilon: dict[tuple[Element, Element], AlgebraElement],
    primed: tuple | None = None,
    tol: float = MOD_CENTER_TOL,
) -> Report:
    """Exact (not mod-center) permutator relations over a trivial center.

    Requires a single-block algebra.  Checks antisymmetry, the boundary
    values, the composition rule indexed along the group, and the skew
    match ``omega(x,y) omega(y,x)^-1 == eps(x,y)`` against the supplied
    cocycle table.  When ``primed = (action2, epsilon2, intertwiners)`` is
    given, the cross-system naturality relation is checked as well, with
    ``intertwiners[x]`` a unitary intertwiner from ``beta_x`` to
    ``beta'_x``.
    """
    if action.algebra.num_blocks != 1:
        raise PreconditionError(
            "exact permutator systems require a trivial center (single block)"
        )
    g = action.group
    one = action.algebra.identity()
    report = Report("trivial-center permutator system")

    def eps(x, y):
        return epsilon[(g.element(x), g.element(y))]

    worst, where = 0.0, None
    for x in g.elements():
        for y in g.elements():
            r = (eps(x, y) * eps(y, x) - one).norm()
            if r > worst:
                worst, where = r, (x, y)
    report.check_residual("antisymmetry", worst, tol, detail=f"worst at {where}")

    worst = 0.0
    for x in g.elements():
        worst = max(
            worst,
            (eps(g.identity, x) - one).norm(),
            (eps(x, g.identity) - one).norm(),
        )
    report.check_residual("identity-boundary", worst, tol)

    worst, where = 0.0, None
    for x in g.elements():
        for y in g.elements():
            for z in g.elements():
                lhs = action.representative(x).apply(eps(y, z)) * eps(x, z)
                rhs = eps(g.compose(x, y), z)
                r = (lhs - rhs).norm()
                if r > worst:
                    worst, where = r, (x, y, z)
    report.check_residual("composition", worst, tol, detail=f"worst at {where}")

    worst, where = 0.0, None
    for x in g.elements():
        for y in g.elements():
            r = (table.entry(x, y) * table.entry(y, x).inverse() - eps(x, y)).norm()
            if r > worst:
                worst, where = r, (x, y)
    report.check_residual("skew-match", worst, tol, detail=f"worst at {where}")

    if primed is not None:
        action2, epsilon2, intertwiners = primed
        worst, where = 0.0, None
        for x in g.elements():
            for y in g.elements():
                a, b = intertwiners[x], intertwiners[y]
                lhs = a * action.representative(x).apply(b) * eps(x, y)
                rhs = epsilon2[(x, y)] * b * action.representative(y).apply(a)
                r = (lhs - rhs).norm()
                if r > worst:
                    worst, where = r, (x, y)
        report.check_residual("naturality", worst, tol, detail=f"worst at {where}")
    return report


# ---------------------------------------------------------------------------
# Center-valued comparison of tables


def central_quotient_cochain(
    table1: CocycleTable,
    table2: CocycleTable,
    modulus: int,
    tol: float = MOD_CENTER_TOL,
) -> CentralCochain:
    """Entrywise quotient of two tables over the same action, as exact phases.

    The quotient of two valid tables is central by the shared intertwining
    relation; non-central quotients raise, irrational phases raise
    `UndecidableError`.
    """
    action = table1.action
    if table2.action is not action and not action.compatible(table2.action):
        raise StructuralError("tables live over incompatible actions")
    entries = {}
    for (a, b), u in table1.entries.items():
        q = u * table2.entry(a, b).inverse()
        cu = CentralUnitary.from_element(q, tol)
        entries[(a, b)] = snap_phase_vector(cu.phases, modulus)
    return CentralCochain(
        action.group, 2, modulus, action.algebra.num_blocks, action.center_action(), entries
    )
