"""The extension algebra: a twisted algebra of group-indexed unitaries.

Given a verified outer action and cocycle table, the extension is the
finite-dimensional *-algebra spanned by formal products ``A U_x`` with
``A`` in the coefficient algebra and ``x`` in the group, subject to

    U_x A   = beta[x](A) U_x
    U_x U_y = omega(x, y) U_{x y}
    U_x*    = omega(x^-1, x)* U_{x^-1}

The cocycle identity makes the product associative, the boundary
normalization makes the identity of the coefficient algebra the unit, and
the basis unitaries are genuinely unitary for the induced involution.
The dual group acts by ``U_x -> <x, g> U_x``; coefficients at the group
identity are exactly the fixed points.  The algebra carries a coefficient-
algebra-valued inner product ``<F, G> = sum_x beta[x]^-1(A_x* B_x)`` whose
induced C*-norm is computed through the concrete realization in
`hilbext.representation` (primary route) and, as an independent oracle,
through left multiplication on the tracial GNS space of the coefficient
algebra (`module_norm_oracle`).

No completion step appears anywhere: with a finite group and finite-
dimensional coefficients the algebra is already complete.
"""

from __future__ import annotations

import numpy as np

from .algebra import AlgebraElement, CentralUnitary
from .cohomology import CentralCochain
from .errors import ConsistencyError, PreconditionError, StructuralError
from .groups import Element
from .reporting import Report
from .representation import rep_operator_norm, represent
from .theta import CocycleTable, OuterAction, verify_cocycle

#: Default tolerance on the defining identities when building a context.
CONTEXT_TOL = 1e-10


class ExtensionContext:
    """Validated pair (outer action, cocycle table) driving the extension."""

    __slots__ = ("action", "table", "elements")

    def __init__(self, action: OuterAction, table: CocycleTable, check: bool = True):
        if table.action is not action:
            raise StructuralError("table was built over a different action object")
        if check:
            report = verify_cocycle(action, table, tol=CONTEXT_TOL)
            if not report.passed:
                names = ", ".join(c.name for c in report.failures())
                raise PreconditionError(f"cocycle table fails verification: {names}")
        object.__setattr__(self, "action", action)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "elements", action.group.elements())

    def __setattr__(self, name, value):
        raise AttributeError("ExtensionContext is immutable")

    @property
    def dim(self) -> int:
        """Linear dimension: group order times coefficient dimension."""
        return len(self.elements) * self.action.algebra.dim

    def zero(self) -> "ExtensionElement":
        return ExtensionElement(self, {})

    def one(self) -> "ExtensionElement":
        return self.embed(self.action.algebra.identity())

    def embed(self, coeff: AlgebraElement) -> "ExtensionElement":
        """The coefficient algebra sits at the group identity."""
        return ExtensionElement(self, {self.action.group.identity: coeff})

    def basis_unitary(self, x: Element) -> "ExtensionElement":
        x = self.action.group.element(x)
        return ExtensionElement(self, {x: self.action.algebra.identity()})

    def random_element(
        self, rng: np.random.Generator, scale: float = 1.0
    ) -> "ExtensionElement":
        coeffs = {
            x: self.action.algebra.random_element(rng, scale) for x in self.elements
        }
        return ExtensionElement(self, coeffs)

    def compatible_with(self, other: "ExtensionContext", tol: float = CONTEXT_TOL) -> bool:
        """Same group, same algebra, extensionally equal representatives."""
        if not self.action.compatible(other.action):
            return False
        return all(
            self.action.representative(x).defect(other.action.representative(x)) <= tol
            for x in self.elements
        )


class ExtensionElement:
    """Finitely supported coefficient map ``x -> A_x``, i.e. ``sum A_x U_x``."""

    __slots__ = ("context", "coefficients")

    def __init__(self, context: ExtensionContext, coefficients: dict):
        group = context.action.group
        coeffs = {}
        for x, a in coefficients.items():
            x = group.element(x)
            if not isinstance(a, AlgebraElement):
                raise StructuralError(f"coefficient at {x} is not an algebra element")
            if a.algebra.block_dims != context.action.algebra.block_dims:
                raise StructuralError(f"coefficient at {x} lives on {a.algebra}")
            if a.norm() > 0.0:
                coeffs[x] = a
        object.__setattr__(self, "context", context)
        object.__setattr__(self, "coefficients", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("ExtensionElement is immutable")

    @property
    def support(self) -> list[Element]:
        order = self.context.action.group.index
        return sorted(self.coefficients, key=order)

    def coefficient(self, x: Element) -> AlgebraElement:
        x = self.context.action.group.element(x)
        return self.coefficients.get(x, self.context.action.algebra.zero())

    def _same_context(self, other: "ExtensionElement") -> None:
        if not isinstance(other, ExtensionElement):
            raise StructuralError(f"expected ExtensionElement, got {type(other)!r}")
        if other.context is not self.context:
            raise StructuralError("elements belong to different extension contexts")

    def __add__(self, other):
        self._same_context(other)
        out = dict(self.coefficients)
        for x, a in other.coefficients.items():
            out[x] = out[x] + a if x in out else a
        return ExtensionElement(self.context, out)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __rmul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return ExtensionElement(
            self.context, {x: scalar * a for x, a in self.coefficients.items()}
        )

    def __mul__(self, other):
        """Twisted convolution: ``A U_x . B U_y = A beta[x](B) omega(x,y) U_{xy}``."""
        if np.isscalar(other):
            return other * self
        self._same_context(other)
        ctx = self.context
        group = ctx.action.group
        out: dict = {}
        for x, a in self.coefficients.items():
            beta_x = ctx.action.representative(x)
            for y, b in other.coefficients.items():
                z = group.compose(x, y)
                term = a * beta_x.apply(b) * ctx.table.entry(x, y)
                out[z] = out[z] + term if z in out else term
        return ExtensionElement(ctx, out)

    def adjoint(self) -> "ExtensionElement":
        """``(A U_x)* = omega(x^-1, x)* beta[x^-1](A*) U_{x^-1}``."""
        ctx = self.context
        group = ctx.action.group
        out = {}
        for x, a in self.coefficients.items():
            x_inv = group.inverse(x)
            coeff = ctx.table.entry(x_inv, x).adjoint() * ctx.action.representative(
                x_inv
            ).apply(a.adjoint())
            out[x_inv] = out[x_inv] + coeff if x_inv in out else coeff
        return ExtensionElement(ctx, out)

    def act(self, g: Element) -> "ExtensionElement":
        """Dual-group automorphism: coefficient at ``x`` picks up ``<x, g>``."""
        return self.twist_by_character(g)

    def twist_by_character(self, g: Element) -> "ExtensionElement":
        group = self.context.action.group
        g = group.element(g)
        return ExtensionElement(
            self.context,
            {x: group.pairing(x, g) * a for x, a in self.coefficients.items()},
        )

    def project(self, x: Element) -> "ExtensionElement":
        """Single-term part at ``x`` (coefficient-extraction route)."""
        x = self.context.action.group.element(x)
        if x not in self.coefficients:
            return self.context.zero()
        return ExtensionElement(self.context, {x: self.coefficients[x]})

    def norm(self) -> float:
        return cstar_norm(self)

    def distance(self, other: "ExtensionElement") -> float:
        return (self - other).norm()

    def allclose(self, other: "ExtensionElement", tol: float = 1e-12) -> bool:
        diff = self - other
        return all(a.norm() <= tol for a in diff.coefficients.values())

    def __repr__(self) -> str:
        return f"ExtensionElement(support={self.support})"


def spectral_projection(f: ExtensionElement, x: Element) -> ExtensionElement:
    """Isotypic component at ``x`` by averaging over the dual group.

    The finite average ``|G|^-1 sum_g conj(<x, g>) alpha_g(F)`` is an
    independent route to the single-term part `ExtensionElement.project`
    extracts directly from the coefficients.
    """
    ctx = f.context
    group = ctx.action.group
    x = group.element(x)
    total = ctx.zero()
    for g in ctx.elements:
        total = total + np.conjugate(group.pairing(x, g)) * f.act(g)
    return (1.0 / len(ctx.elements)) * total


def inner_product(f1: ExtensionElement, f2: ExtensionElement) -> AlgebraElement:
    """Coefficient-valued pairing ``sum_x beta[x]^-1(A_x* B_x)``.

    Hermitian, positive definite, invariant under the dual-group action,
    and equal to the identity component of ``F1* F2``.
    """
    f1._same_context(f2)
    ctx = f1.context
    total = ctx.action.algebra.zero()
    for x, a in f1.coefficients.items():
        b = f2.coefficients.get(x)
        if b is None:
            continue
        total = total + ctx.action.representative(x).inverse().apply(a.adjoint() * b)
    return total


def cstar_norm(f: ExtensionElement) -> float:
    """Intrinsic C*-norm, computed as the represented operator norm.

    A faithful state of the coefficient algebra always exists here (the
    normalized trace), which makes the concrete realization isometric for
    the intrinsic norm; `module_norm_oracle` is the independent second
    route to the same value.
    """
    return rep_operator_norm(represent(f.context, f))


def _trace_state(a: AlgebraElement) -> float | complex:
    return sum(complex(b.trace()) for b in a.blocks) / a.algebra.matrix_dim


def _basis_elements(ctx: ExtensionContext):
    for x in ctx.elements:
        for e in ctx.action.algebra.matrix_units():
            yield ExtensionElement(ctx, {x: e})


def _coordinates(ctx: ExtensionContext, f: ExtensionElement) -> np.ndarray:
    out = np.zeros(ctx.dim, dtype=complex)
    d = ctx.action.algebra.dim
    for k, x in enumerate(ctx.elements):
        a = f.coefficients.get(x)
        if a is None:
            continue
        flat = np.concatenate([b.ravel() for b in a.blocks])
        out[k * d : (k + 1) * d] = flat
    return out


def module_norm_oracle(ctx: ExtensionContext, f: ExtensionElement) -> float:
    """Norm of left multiplication on the tracial GNS space.

    The normalized trace of the coefficient algebra is faithful; composing
    it with the coefficient-valued inner product turns the extension into
    a Hilbert space on which left multiplication acts.  The operator norm
    of that action is the intrinsic C*-norm, independently of the
    concrete realization used by `cstar_norm`.
    """
    basis = list(_basis_elements(ctx))
    n = len(basis)
    gram = np.zeros((n, n), dtype=complex)
    for i, bi in enumerate(basis):
        for j, bj in enumerate(basis):
            gram[i, j] = _trace_state(inner_product(bi, bj))
    mat = np.zeros((n, n), dtype=complex)
    for j, bj in enumerate(basis):
        mat[:, j] = _coordinates(ctx, f * bj)
    # Basis coordinates -> orthonormal GNS coordinates via the Gram root.
    w, v = np.linalg.eigh(gram)
    if w.min() <= 1e-13:
        raise ConsistencyError("tracial Gram matrix is not positive definite")
    root = v @ np.diag(np.sqrt(w)) @ v.conj().T
    inv_root = v @ np.diag(1.0 / np.sqrt(w)) @ v.conj().T
    return rep_operator_norm(root @ mat @ inv_root)


def structure_constant_rows(ctx: ExtensionContext):
    """Rows of the multiplication table over the canonical basis.

    Yields ``(i, j, coords)`` where ``coords`` are the coordinates of the
    product of basis elements ``i`` and ``j``; the basis is ordered group
    element first, then matrix units block by block.
    """
    basis = list(_basis_elements(ctx))
    for i, bi in enumerate(basis):
        for j, bj in enumerate(basis):
            yield i, j, _coordinates(ctx, bi * bj)


# ---------------------------------------------------------------------------
# Isomorphisms of extensions over the same action


def central_unitaries_from_cochain(
    cochain: CentralCochain, algebra
) -> dict[Element, CentralUnitary]:
    """Degree-1 exact cochain as a family of central unitaries."""
    if cochain.degree != 1:
        raise StructuralError("expected a 1-cochain")
    if cochain.m != algebra.num_blocks:
        raise StructuralError("cochain coordinates do not match the center")
    out = {}
    for x in cochain.group.elements():
        out[x] = CentralUnitary(algebra, cochain.phases(x))
    return out


class ModuleIsomorphism:
    """Coefficient-fixing isomorphism ``A U_x -> A Z(x) V_x`` between extensions.

    ``source`` and ``target`` must share the outer action; ``cochain``
    maps group elements to central unitaries with identity at the group
    identity, and its coboundary must connect the two cocycle tables.
    """

    __slots__ = ("source", "target", "cochain")

    def __init__(self, source, target, cochain: dict):
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "cochain", cochain)

    def __setattr__(self, name, value):
        raise AttributeError("ModuleIsomorphism is immutable")

    def apply(self, f: ExtensionElement) -> ExtensionElement:
        if f.context is not self.source:
            raise StructuralError("element does not live in the source extension")
        out = {
            x: a * self.cochain[x].to_element() for x, a in f.coefficients.items()
        }
        return ExtensionElement(self.target, out)

    def verify(self, rng: np.random.Generator, samples: int = 20, tol: float = 1e-10) -> Report:
        """The five defining properties, on random elements."""
        report = Report("module isomorphism verification")
        ctx1, ctx2 = self.source, self.target

        def coeff_norm(elem):
            return max((a.norm() for a in elem.coefficients.values()), default=0.0)

        worst = 0.0
        for _ in range(samples):
            a = ctx1.action.algebra.random_element(rng)
            worst = max(worst, coeff_norm(self.apply(ctx1.embed(a)) - ctx2.embed(a)))
        report.check_residual("identity-on-coefficients", worst, tol)

        worst = 0.0
        for _ in range(samples):
            f1, f2 = ctx1.random_element(rng), ctx1.random_element(rng)
            worst = max(worst, coeff_norm(self.apply(f1 * f2) - self.apply(f1) * self.apply(f2)))
        report.check_residual("multiplicative", worst, tol)

        worst = 0.0
        for _ in range(samples):
            f = ctx1.random_element(rng)
            worst = max(worst, coeff_norm(self.apply(f.adjoint()) - self.apply(f).adjoint()))
        report.check_residual("star-preserving", worst, tol)

        worst = 0.0
        for _ in range(samples // 2 + 1):
            f = ctx1.random_element(rng)
            for g in ctx1.elements:
                worst = max(worst, coeff_norm(self.apply(f.act(g)) - self.apply(f).act(g)))
        report.check_residual("equivariant", worst, tol)

        worst = 0.0
        for _ in range(samples):
            f1, f2 = ctx1.random_element(rng), ctx1.random_element(rng)
            lhs = inner_product(self.apply(f1), self.apply(f2))
            rhs = inner_product(f1, f2)
            worst = max(worst, (lhs - rhs).norm())
            worst = max(
                worst, abs(cstar_norm(self.apply(f1)) - cstar_norm(f1)) / max(1.0, cstar_norm(f1))
            )
        report.check_residual("inner-product-isometric", worst, tol)
        return report


def build_module_isomorphism(
    ctx1: ExtensionContext,
    ctx2: ExtensionContext,
    cochain: dict[Element, CentralUnitary],
    tol: float = 1e-12,
) -> ModuleIsomorphism:
    """Isomorphism from a central 1-cochain connecting the two tables.

    Requires ``omega_1 == (coboundary of the cochain) * omega_2`` entrywise;
    the first failing pair is named otherwise.
    """
    if not ctx1.compatible_with(ctx2):
        raise PreconditionError("extensions do not share the outer action")
    group = ctx1.action.group
    z = {group.element(x): cu for x, cu in cochain.items()}
    missing = [x for x in ctx1.elements if x not in z]
    if missing:
        raise PreconditionError(f"cochain misses {missing}")
    one = CentralUnitary.one(ctx1.action.algebra)
    if not z[group.identity].allclose(one, tol=1e-10):
        raise PreconditionError("cochain must be the identity at the group identity")
    for x in ctx1.elements:
        for y in ctx1.elements:
            beta_x = ctx1.action.representative(x)
            bz = CentralUnitary.from_element(beta_x.apply(z[y].to_element()))
            predicted = (
                z[x] * bz * z[group.compose(x, y)].inverse()
            ).to_element() * ctx2.table.entry(x, y)
            if (ctx1.table.entry(x, y) - predicted).norm() > tol:
                raise PreconditionError(
                    f"tables are not coboundary-related at ({x}, {y})"
                )
    return ModuleIsomorphism(ctx1, ctx2, z)


def extract_coboundary(
    ctx1: ExtensionContext,
    ctx2: ExtensionContext,
    images: dict[Element, ExtensionElement],
    tol: float = 1e-10,
) -> dict[Element, CentralUnitary]:
    """Recover the connecting 1-cochain from images of the basis unitaries.

    For a candidate isomorphism given by ``U_x -> images[x]``, the product
    ``images[x] V_x*`` must be a central unitary coefficient at the group
    identity; the extracted family is verified to connect the two tables.
    Anything else is rejected as not a coefficient-fixing isomorphism.
    """
    if not ctx1.compatible_with(ctx2):
        raise PreconditionError("extensions do not share the outer action")
    group = ctx1.action.group
    z: dict[Element, CentralUnitary] = {}
    for x in ctx1.elements:
        if x not in images:
            raise PreconditionError(f"no image supplied for the basis unitary at {x}")
        candidate = images[x] * ctx2.basis_unitary(x).adjoint()
        if set(candidate.support) - {group.identity}:
            raise ConsistencyError(
                f"not a module isomorphism: image at {x} is not a multiple "
                "of the target basis unitary"
            )
        coeff = candidate.coefficient(group.identity)
        if coeff.central_defect() > tol:
            raise ConsistencyError(
                f"not a module isomorphism: extracted value at {x} is not central"
            )
        z[x] = CentralUnitary.from_element(coeff, tol)
    build_module_isomorphism(ctx1, ctx2, z, tol=max(tol, 1e-12))
    return z
