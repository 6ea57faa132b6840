"""Finite-dimensional C*-algebra kernel.

The algebras handled here are finite direct sums of full matrix algebras,
``A = M_{d_1} + ... + M_{d_m}`` (one complex matrix per block).  This file
provides the element arithmetic, the C*-norm (largest singular value over
the blocks), the center as a tuple of per-block phases, and automorphisms
in their normal form: every *-automorphism of a block algebra is a block
permutation composed with per-block unitary conjugations.  The permutation
part is the complete outer invariant -- an automorphism is inner exactly
when its permutation is trivial -- and the unitary cocycle connecting two
automorphisms in the same outer class is produced by `solve_inner_cocycle`
in a deterministic gauge.

Conventions
-----------
* ``Automorphism.block_perm`` uses the *pull* convention: block ``i`` of
  the image is ``W_i @ A[block_perm[i]] @ W_i*``.
* Block permutations compose left-to-right, ``(p * q)[i] = q[p[i]]``,
  which is exactly how the permutation parts of composed automorphisms
  combine; see `compose_block_permutations`.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, NoSolutionError, StructuralError

#: Absolute tolerance for "is unitary" / "is automorphism data" validation.
VALIDATION_TOL = 1e-10

#: Default tolerance for numerical equality of elements.
EQUALITY_TOL = 1e-12


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class BlockAlgebra:
    """Direct sum of full matrix algebras, described by its block sizes."""

    block_dims: tuple[int, ...]

    def __init__(self, block_dims):
        dims = tuple(int(d) for d in block_dims)
        if len(dims) == 0 or any(d < 1 for d in dims):
            raise StructuralError(f"invalid block dimensions {dims}")
        object.__setattr__(self, "block_dims", dims)

    @property
    def num_blocks(self) -> int:
        return len(self.block_dims)

    @property
    def matrix_dim(self) -> int:
        """Size of the defining representation, ``D = sum d_i``."""
        return sum(self.block_dims)

    @property
    def dim(self) -> int:
        """Linear dimension, ``sum d_i^2``."""
        return sum(d * d for d in self.block_dims)

    @property
    def center_dim(self) -> int:
        return self.num_blocks

    def element(self, blocks) -> "AlgebraElement":
        return AlgebraElement(self, blocks)

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, [np.zeros((d, d)) for d in self.block_dims])

    def identity(self) -> "AlgebraElement":
        return AlgebraElement(self, [np.eye(d) for d in self.block_dims])

    def scalar(self, phases) -> "AlgebraElement":
        """Central element with the given scalar on each block."""
        phases = list(phases)
        if len(phases) != self.num_blocks:
            raise StructuralError("one scalar per block required")
        return AlgebraElement(
            self, [c * np.eye(d) for c, d in zip(phases, self.block_dims)]
        )

    def matrix_units(self) -> list["AlgebraElement"]:
        """Linear basis of the algebra: all matrix units, block by block."""
        units = []
        for b, d in enumerate(self.block_dims):
            for r in range(d):
                for c in range(d):
                    blocks = [np.zeros((e, e)) for e in self.block_dims]
                    blocks[b] = np.zeros((d, d))
                    blocks[b][r, c] = 1.0
                    units.append(AlgebraElement(self, blocks))
        return units

    def random_element(self, rng: np.random.Generator, scale: float = 1.0) -> "AlgebraElement":
        blocks = [
            scale * (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))
            for d in self.block_dims
        ]
        return AlgebraElement(self, blocks)

    def random_unitary(self, rng: np.random.Generator) -> "AlgebraElement":
        """Haar-ish random unitary, deterministic for a given generator state."""
        blocks = []
        for d in self.block_dims:
            z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
            q, r = np.linalg.qr(z)
            q = q * (np.diag(r) / np.abs(np.diag(r)))
            blocks.append(q)
        return AlgebraElement(self, blocks)

    def __str__(self) -> str:
        return " + ".join(f"M{d}" for d in self.block_dims)


class AlgebraElement:
    """Element of a `BlockAlgebra`: one complex matrix per block.

    Values are immutable after construction; all operations return fresh
    elements.  The product is the blockwise matrix product, the adjoint the
    blockwise conjugate transpose, and the norm the largest singular value
    over all blocks, which satisfies the C*-identity
    ``norm(a.adjoint() * a) == norm(a) ** 2``.
    """

    __slots__ = ("algebra", "blocks")

    def __init__(self, algebra: BlockAlgebra, blocks):
        blocks = tuple(_freeze(np.asarray(b)) for b in blocks)
        if len(blocks) != algebra.num_blocks:
            raise StructuralError(
                f"expected {algebra.num_blocks} blocks, got {len(blocks)}"
            )
        for b, d in zip(blocks, algebra.block_dims):
            if b.shape != (d, d):
                raise StructuralError(f"block of shape {b.shape}, expected ({d}, {d})")
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "blocks", blocks)

    def __setattr__(self, name, value):
        raise AttributeError("AlgebraElement is immutable")

    def _compatible(self, other: "AlgebraElement") -> None:
        if not isinstance(other, AlgebraElement):
            raise StructuralError(f"expected AlgebraElement, got {type(other)!r}")
        if other.algebra.block_dims != self.algebra.block_dims:
            raise StructuralError(
                f"algebra mismatch: {self.algebra} vs {other.algebra}"
            )

    def __add__(self, other):
        self._compatible(other)
        return AlgebraElement(self.algebra, [a + b for a, b in zip(self.blocks, other.blocks)])

    def __sub__(self, other):
        self._compatible(other)
        return AlgebraElement(self.algebra, [a - b for a, b in zip(self.blocks, other.blocks)])

    def __neg__(self):
        return AlgebraElement(self.algebra, [-a for a in self.blocks])

    def __mul__(self, other):
        if np.isscalar(other):
            return AlgebraElement(self.algebra, [other * a for a in self.blocks])
        self._compatible(other)
        return AlgebraElement(self.algebra, [a @ b for a, b in zip(self.blocks, other.blocks)])

    def __rmul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        return AlgebraElement(self.algebra, [scalar * a for a in self.blocks])

    def adjoint(self) -> "AlgebraElement":
        return AlgebraElement(self.algebra, [a.conj().T for a in self.blocks])

    def inverse(self) -> "AlgebraElement":
        try:
            return AlgebraElement(self.algebra, [np.linalg.inv(a) for a in self.blocks])
        except np.linalg.LinAlgError as exc:
            raise NoSolutionError("element is not invertible") from exc

    def norm(self) -> float:
        """C*-norm: maximum over blocks of the largest singular value."""
        return max(float(np.linalg.norm(b, 2)) for b in self.blocks)

    def dense(self) -> np.ndarray:
        """Block-diagonal matrix of the defining representation."""
        dim = self.algebra.matrix_dim
        out = np.zeros((dim, dim), dtype=complex)
        at = 0
        for b in self.blocks:
            d = b.shape[0]
            out[at : at + d, at : at + d] = b
            at += d
        return out

    def allclose(self, other: "AlgebraElement", tol: float = EQUALITY_TOL) -> bool:
        self._compatible(other)
        return self.distance(other) <= tol

    def distance(self, other: "AlgebraElement") -> float:
        """C*-norm of the difference."""
        return (self - other).norm()

    def is_unitary(self, tol: float = VALIDATION_TOL) -> bool:
        return all(
            np.linalg.norm(b.conj().T @ b - np.eye(b.shape[0]), 2) <= tol
            for b in self.blocks
        )

    def central_defect(self) -> float:
        """Distance to the nearest central element (scalar per block)."""
        defect = 0.0
        for b in self.blocks:
            d = b.shape[0]
            c = np.trace(b) / d
            defect = max(defect, float(np.linalg.norm(b - c * np.eye(d), 2)))
        return defect

    def is_central(self, tol: float = VALIDATION_TOL) -> bool:
        return self.central_defect() <= tol

    def central_phases(self, tol: float = VALIDATION_TOL) -> tuple[complex, ...]:
        """Per-block scalars of a central element; error when not central."""
        defect = self.central_defect()
        if defect > tol:
            raise ConsistencyError(f"element is not central (defect {defect:.3e})")
        return tuple(complex(np.trace(b) / b.shape[0]) for b in self.blocks)

    def __repr__(self) -> str:
        return f"AlgebraElement({self.algebra}, norm={self.norm():.6g})"


@dataclass(frozen=True)
class CentralUnitary:
    """Unitary central element, stored as one unit-modulus phase per block."""

    algebra: BlockAlgebra
    phases: tuple[complex, ...]

    def __init__(self, algebra: BlockAlgebra, phases):
        phases = tuple(complex(p) for p in phases)
        if len(phases) != algebra.num_blocks:
            raise StructuralError("one phase per block required")
        for p in phases:
            if abs(abs(p) - 1.0) > VALIDATION_TOL:
                raise StructuralError(f"phase {p} is not unit modulus")
        phases = tuple(p / abs(p) for p in phases)
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "phases", phases)

    @classmethod
    def from_element(cls, elem: AlgebraElement, tol: float = VALIDATION_TOL) -> "CentralUnitary":
        phases = elem.central_phases(tol)
        for p in phases:
            if abs(abs(p) - 1.0) > tol:
                raise ConsistencyError(f"central element has non-unitary phase {p}")
        return cls(elem.algebra, phases)

    @classmethod
    def one(cls, algebra: BlockAlgebra) -> "CentralUnitary":
        return cls(algebra, (1.0,) * algebra.num_blocks)

    def to_element(self) -> AlgebraElement:
        return self.algebra.scalar(self.phases)

    def __mul__(self, other: "CentralUnitary") -> "CentralUnitary":
        if self.algebra.block_dims != other.algebra.block_dims:
            raise StructuralError("algebra mismatch")
        return CentralUnitary(self.algebra, [a * b for a, b in zip(self.phases, other.phases)])

    def inverse(self) -> "CentralUnitary":
        return CentralUnitary(self.algebra, [p.conjugate() for p in self.phases])

    def allclose(self, other: "CentralUnitary", tol: float = EQUALITY_TOL) -> bool:
        return max(abs(a - b) for a, b in zip(self.phases, other.phases)) <= tol

    def phase_angles(self) -> tuple[float, ...]:
        """Principal-branch arguments in turns (fractions of a full circle)."""
        return tuple(cmath.phase(p) / (2 * cmath.pi) % 1.0 for p in self.phases)


def identity_permutation(m: int) -> tuple[int, ...]:
    return tuple(range(m))


def compose_block_permutations(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    """Left-to-right composition ``(p * q)[i] = q[p[i]]``.

    With the pull convention used by `Automorphism.apply`, the permutation
    part of ``compose(alpha, beta)`` is exactly
    ``compose_block_permutations(alpha.block_perm, beta.block_perm)``, so
    the permutation part is a group homomorphism for this product.
    """
    if len(p) != len(q):
        raise StructuralError("permutation length mismatch")
    return tuple(q[i] for i in p)


def invert_permutation(p: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


class Automorphism:
    """*-automorphism of a block algebra in (permutation, unitaries) form.

    ``apply`` sends block ``i`` of the argument to
    ``W_i @ A[block_perm[i]] @ W_i*``; the permutation must match block
    dimensions.  The automorphism is inner exactly when the permutation is
    the identity, and `outer_class` returns the permutation as the complete
    invariant modulo inner automorphisms.
    """

    __slots__ = ("algebra", "block_perm", "block_unitaries")

    def __init__(self, algebra: BlockAlgebra, block_perm, block_unitaries, _validate=True):
        perm = tuple(int(i) for i in block_perm)
        unitaries = tuple(_freeze(np.asarray(w)) for w in block_unitaries)
        if _validate:
            if sorted(perm) != list(range(algebra.num_blocks)):
                raise StructuralError(f"{perm} is not a permutation of the blocks")
            dims = algebra.block_dims
            for i, j in enumerate(perm):
                if dims[i] != dims[j]:
                    raise StructuralError(
                        f"permutation maps block {j} (dim {dims[j]}) onto "
                        f"slot {i} (dim {dims[i]})"
                    )
            if len(unitaries) != algebra.num_blocks:
                raise StructuralError("one unitary per block required")
            for w, d in zip(unitaries, algebra.block_dims):
                if w.shape != (d, d):
                    raise StructuralError(f"unitary of shape {w.shape}, expected ({d}, {d})")
                if np.linalg.norm(w.conj().T @ w - np.eye(d), 2) > VALIDATION_TOL:
                    raise StructuralError("block unitary fails the unitarity check")
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "block_perm", perm)
        object.__setattr__(self, "block_unitaries", unitaries)

    def __setattr__(self, name, value):
        raise AttributeError("Automorphism is immutable")

    @classmethod
    def identity(cls, algebra: BlockAlgebra) -> "Automorphism":
        return cls(
            algebra,
            identity_permutation(algebra.num_blocks),
            [np.eye(d) for d in algebra.block_dims],
            _validate=False,
        )

    @classmethod
    def inner(cls, unitary: AlgebraElement) -> "Automorphism":
        """The inner automorphism ``a -> U a U*``."""
        if not unitary.is_unitary():
            raise StructuralError("inner automorphisms need a unitary element")
        return cls(
            unitary.algebra,
            identity_permutation(unitary.algebra.num_blocks),
            unitary.blocks,
        )

    @property
    def is_inner(self) -> bool:
        return self.block_perm == identity_permutation(self.algebra.num_blocks)

    @property
    def outer_class(self) -> tuple[int, ...]:
        """Permutation part: the invariant modulo inner automorphisms."""
        return self.block_perm

    def apply(self, elem: AlgebraElement) -> AlgebraElement:
        if elem.algebra.block_dims != self.algebra.block_dims:
            raise StructuralError("element belongs to a different algebra")
        blocks = [
            w @ elem.blocks[j] @ w.conj().T
            for w, j in zip(self.block_unitaries, self.block_perm)
        ]
        return AlgebraElement(self.algebra, blocks)

    def compose(self, other: "Automorphism") -> "Automorphism":
        """``self`` after ``other``: ``compose(a, b).apply(x) == a.apply(b.apply(x))``."""
        if other.algebra.block_dims != self.algebra.block_dims:
            raise StructuralError("automorphisms over different algebras")
        perm = compose_block_permutations(self.block_perm, other.block_perm)
        unitaries = [
            w @ other.block_unitaries[j]
            for w, j in zip(self.block_unitaries, self.block_perm)
        ]
        return Automorphism(self.algebra, perm, unitaries, _validate=False)

    def inverse(self) -> "Automorphism":
        inv = invert_permutation(self.block_perm)
        unitaries = [self.block_unitaries[inv[j]].conj().T for j in range(len(inv))]
        return Automorphism(self.algebra, inv, unitaries, _validate=False)

    def implementing_unitary(self) -> AlgebraElement:
        """For an inner automorphism, a unitary ``U`` with ``self == ad(U)``."""
        if not self.is_inner:
            raise NoSolutionError("automorphism permutes blocks, hence is not inner")
        return AlgebraElement(self.algebra, self.block_unitaries)

    def defect(self, other: "Automorphism") -> float:
        """Largest deviation of the two images over a matrix-unit basis."""
        return max(
            self.apply(e).distance(other.apply(e))
            for e in self.algebra.matrix_units()
        )

    def extensionally_equal(self, other: "Automorphism", tol: float = EQUALITY_TOL) -> bool:
        return self.block_perm == other.block_perm and self.defect(other) <= tol

    def __repr__(self) -> str:
        return f"Automorphism({self.algebra}, perm={self.block_perm})"


def gauge_normalize(u: AlgebraElement) -> AlgebraElement:
    """Fix the free phase of each block deterministically.

    Each block is scaled by a unit-modulus number so that its first entry
    (row-major) of maximal modulus becomes positive real.  Central
    regauging is exactly the freedom this removes, which keeps cocycle
    tables reproducible across runs.
    """
    blocks = []
    for b in u.blocks:
        flat = b.ravel()
        mags = np.abs(flat)
        top = float(mags.max())
        if top == 0.0:
            blocks.append(b)
            continue
        lead = flat[np.nonzero(mags >= top - 1e-9 * max(top, 1.0))[0][0]]
        blocks.append(b * (lead.conjugate() / abs(lead)))
    return AlgebraElement(u.algebra, blocks)


def solve_inner_cocycle(
    alpha: Automorphism, beta: Automorphism, normalize: bool = True
) -> AlgebraElement:
    """Unitary ``U`` with ``alpha == ad(U) . beta``.

    Exists iff the two automorphisms share their outer class; ``U`` is
    unique up to a central unitary and is returned in the deterministic
    gauge of `gauge_normalize` unless ``normalize=False``.
    """
    if alpha.algebra.block_dims != beta.algebra.block_dims:
        raise StructuralError("automorphisms over different algebras")
    if alpha.block_perm != beta.block_perm:
        raise NoSolutionError(
            f"outer classes differ: {alpha.block_perm} vs {beta.block_perm}"
        )
    delta = alpha.compose(beta.inverse())
    u = delta.implementing_unitary()
    return gauge_normalize(u) if normalize else u


def _vec_constraint(left: np.ndarray | None, right: np.ndarray | None, d: int) -> np.ndarray:
    """Matrix of ``X -> left-multiplication minus right-multiplication`` on vec(X)."""
    eye = np.eye(d)
    out = np.zeros((d * d, d * d), dtype=complex)
    if left is not None:
        out += np.kron(eye, left.T)
    if right is not None:
        out -= np.kron(right, eye)
    return out


def _nullspace(mat: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Orthonormal basis (columns) of the nullspace of ``mat``."""
    if mat.shape[0] == 0:
        return np.eye(mat.shape[1], dtype=complex)
    _, s, vh = np.linalg.svd(mat)
    if s.size:
        cutoff = tol * max(1.0, float(s[0]))
    else:
        cutoff = tol
    rank = int(np.sum(s > cutoff))
    return vh[rank:].conj().T


def intertwiner_space(
    alpha: Automorphism, beta: Automorphism, tol: float = 1e-10
) -> list[AlgebraElement]:
    """Basis of ``{X in A : X alpha(a) = beta(a) X for all a}``.

    Solved blockwise as a linear system over matrix units.  An empty basis
    means the two automorphisms are disjoint.  Each basis element is scaled
    to be unitary on its supporting block and gauge-normalized.
    """
    if alpha.algebra.block_dims != beta.algebra.block_dims:
        raise StructuralError("automorphisms over different algebras")
    algebra = alpha.algebra
    basis: list[AlgebraElement] = []
    for i, d in enumerate(algebra.block_dims):
        j_a, j_b = alpha.block_perm[i], beta.block_perm[i]
        if j_a != j_b:
            # X_i annihilates an arbitrary block, hence vanishes.
            continue
        wa, wb = alpha.block_unitaries[i], beta.block_unitaries[i]
        dj = algebra.block_dims[j_a]
        rows = []
        for r in range(dj):
            for c in range(dj):
                e = np.zeros((dj, dj), dtype=complex)
                e[r, c] = 1.0
                rows.append(_vec_constraint(wa @ e @ wa.conj().T, wb @ e @ wb.conj().T, d))
        null = _nullspace(np.vstack(rows), tol)
        for k in range(null.shape[1]):
            x = null[:, k].reshape(d, d)
            # Schur: any nonzero solution is a multiple of a unitary.
            x = x * np.sqrt(d) / np.linalg.norm(x, "fro")
            blocks = [np.zeros((e, e)) for e in algebra.block_dims]
            blocks[i] = x
            basis.append(gauge_normalize(AlgebraElement(algebra, blocks)))
    return basis


def relative_commutant(
    generators: list[np.ndarray],
    ambient_basis: list[np.ndarray] | None = None,
    tol: float = 1e-8,
) -> list[np.ndarray]:
    """Basis of the commutant of ``generators`` inside a concrete algebra.

    ``ambient_basis`` spans the algebra in which the commutant is taken; if
    omitted the ambient is the full matrix algebra.  The result is computed
    as the nullspace of the stacked commutation equations, restricted to
    the ambient span.
    """
    if not generators:
        raise StructuralError("need at least one generator")
    k = generators[0].shape[0]
    eye = np.eye(k)
    constraint = np.vstack(
        [np.kron(eye, np.asarray(g, dtype=complex).T) - np.kron(np.asarray(g, dtype=complex), eye)
         for g in generators]
    )
    if ambient_basis is None:
        null = _nullspace(constraint, tol)
        return [null[:, i].reshape(k, k) for i in range(null.shape[1])]
    span = np.stack([np.asarray(b, dtype=complex).ravel() for b in ambient_basis], axis=1)
    # Orthonormalise the ambient span first so coefficients are well scaled.
    q, r = np.linalg.qr(span)
    keep = np.abs(np.diag(r)) > tol * max(1.0, float(np.abs(np.diag(r)).max(initial=0.0)))
    q = q[:, keep]
    coeff_null = _nullspace(constraint @ q, tol)
    return [(q @ coeff_null[:, i]).reshape(k, k) for i in range(coeff_null.shape[1])]
