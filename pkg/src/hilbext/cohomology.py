"""Exact cohomology of finite abelian groups with central torus coefficients.

Coefficients are the unitary center of a block algebra, a torus T^m on
which the group acts by permuting coordinates.  Cochains are normalized
(any argument equal to the identity maps to zero) and store their values
as exact phases: an integer vector ``v`` modulo ``L`` encodes the central
unitary with phases ``exp(2 pi i v_i / L)``.

Torus coefficients reduce to finite moduli.  The second cohomology of a
finite group of order ``q`` with divisible coefficients is ``q``-torsion,
so every class has a representative with values in the ``q``-th roots of
unity, and a mod-``q`` cocycle that bounds over the torus already bounds
with a witness in the ``q^2``-th roots of unity (divisibility headroom:
raise the torus witness to the ``q``-th power, trivialize the resulting
crossed homomorphism by a norm argument, and absorb the correction into a
coboundary of a zero-cochain).  The computation below therefore fixes
cocycle modulus ``L = q`` and witness modulus ``L * q`` and works with
integer matrices throughout; `h2_compute` re-runs itself with doubled
moduli and asserts an identical answer as a guard on this reduction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    CapacityError,
    ConsistencyError,
    StructuralError,
    UndecidableError,
    UnsupportedDegreeError,
)
from .groups import Element, FiniteAbelianGroup
from .modular import cokernel_invariant_factors, kernel_mod, solve_mod

#: Largest group order `h2_compute` accepts by default.
DEFAULT_H2_BOUND = 16

#: Largest number of cochains `h2_oracle` will enumerate.
ORACLE_ENUMERATION_CAP = 1 << 22

#: Phases are snapped to the exact modulus grid within this distance.
SNAP_TOL = 1e-8


def _normalize_action(
    group: FiniteAbelianGroup, action, m: int
) -> dict[Element, tuple[int, ...]]:
    """Validate an action of the group on m torus coordinates.

    ``action`` maps group elements to coordinate permutations in the pull
    convention (``(chi . v)[i] = v[perm[i]]``); ``None`` means trivial.
    Composition must match the group in right-action order:
    ``perm[a b] == compose(perm[a], perm[b])`` with ``compose(p, q)[i] = q[p[i]]``.
    """
    elems = group.elements()
    ident = tuple(range(m))
    if action is None:
        return {x: ident for x in elems}
    table = {}
    for x in elems:
        perm = tuple(int(i) for i in action[x]) if x in action else ident
        if sorted(perm) != list(range(m)):
            raise StructuralError(f"action at {x} is not a permutation of {m} coordinates")
        table[x] = perm
    if table[group.identity] != ident:
        raise StructuralError("action of the identity must be trivial")
    for a in elems:
        for b in elems:
            composed = tuple(table[b][i] for i in table[a])
            if table[group.compose(a, b)] != composed:
                raise StructuralError(f"action is not a homomorphism at ({a}, {b})")
    return table


@dataclass(frozen=True)
class CentralCochain:
    """Normalized cochain with values in (Z mod L)^m.

    ``entries`` holds integer vectors keyed by argument tuples; missing
    keys are zero, and keys containing the group identity must be zero
    (normalization).  ``action`` permutes the coordinates as the group
    acts on the torus.
    """

    group: FiniteAbelianGroup
    degree: int
    modulus: int
    m: int
    action: dict[Element, tuple[int, ...]]
    entries: dict[tuple[Element, ...], tuple[int, ...]]

    def __init__(self, group, degree, modulus, m=1, action=None, entries=None):
        if degree not in (0, 1, 2, 3):
            raise UnsupportedDegreeError(f"degree {degree} not supported")
        if modulus < 1:
            raise StructuralError("modulus must be >= 1")
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "degree", int(degree))
        object.__setattr__(self, "modulus", int(modulus))
        object.__setattr__(self, "m", int(m))
        object.__setattr__(self, "action", _normalize_action(group, action, m))
        table = {}
        for key, vec in (entries or {}).items():
            key = tuple(group.element(x) for x in key)
            if len(key) != degree:
                raise StructuralError(f"key {key} has wrong arity for degree {degree}")
            vec = tuple(int(v) % self.modulus for v in vec)
            if len(vec) != m:
                raise StructuralError(f"value at {key} must have {m} coordinates")
            if group.identity in key:
                if any(vec):
                    raise StructuralError(f"normalized cochain must vanish at {key}")
                continue
            if any(vec):
                table[key] = vec
        object.__setattr__(self, "entries", table)

    def entry(self, *args: Element) -> tuple[int, ...]:
        key = tuple(self.group.element(x) for x in args)
        if len(key) != self.degree:
            raise StructuralError(f"expected {self.degree} arguments")
        return self.entries.get(key, (0,) * self.m)

    def act(self, chi: Element, vec) -> tuple[int, ...]:
        perm = self.action[self.group.element(chi)]
        return tuple(vec[perm[i]] for i in range(self.m))

    def is_zero(self) -> bool:
        return not self.entries

    def __add__(self, other: "CentralCochain") -> "CentralCochain":
        self._match(other)
        keys = set(self.entries) | set(other.entries)
        table = {k: tuple((a + b) % self.modulus for a, b in zip(self.entry(*k), other.entry(*k)))
                 for k in keys}
        return self._with_entries(table)

    def __sub__(self, other: "CentralCochain") -> "CentralCochain":
        self._match(other)
        keys = set(self.entries) | set(other.entries)
        table = {k: tuple((a - b) % self.modulus for a, b in zip(self.entry(*k), other.entry(*k)))
                 for k in keys}
        return self._with_entries(table)

    def __neg__(self) -> "CentralCochain":
        table = {k: tuple(-a % self.modulus for a in v) for k, v in self.entries.items()}
        return self._with_entries(table)

    def _match(self, other: "CentralCochain") -> None:
        if (
            other.group.cyclic_orders != self.group.cyclic_orders
            or other.degree != self.degree
            or other.modulus != self.modulus
            or other.m != self.m
        ):
            raise StructuralError("cochain shapes do not match")

    def _with_entries(self, table) -> "CentralCochain":
        return CentralCochain(
            self.group, self.degree, self.modulus, self.m, self.action, table
        )

    def rescaled(self, new_modulus: int) -> "CentralCochain":
        """Same torus values re-encoded with a modulus multiple."""
        if new_modulus % self.modulus:
            raise StructuralError("new modulus must be a multiple of the old one")
        k = new_modulus // self.modulus
        table = {key: tuple(k * v for v in vec) for key, vec in self.entries.items()}
        return CentralCochain(self.group, self.degree, new_modulus, self.m, self.action, table)

    def phases(self, *args: Element) -> tuple[complex, ...]:
        """Unit-modulus values encoded by the entry at ``args``."""
        vec = self.entry(*args)
        return tuple(np.exp(2j * np.pi * v / self.modulus) for v in vec)


def coboundary(cochain: CentralCochain) -> CentralCochain:
    """Bar-complex coboundary with the permutation action; degrees 0..2."""
    if cochain.degree >= 3:
        raise UnsupportedDegreeError("coboundary implemented for degrees 0, 1, 2")
    g = cochain.group
    L = cochain.modulus
    nonid = [x for x in g.elements() if x != g.identity]
    table: dict[tuple[Element, ...], tuple[int, ...]] = {}

    def sub(a, b):
        return tuple((x - y) % L for x, y in zip(a, b))

    def add(a, b):
        return tuple((x + y) % L for x, y in zip(a, b))

    if cochain.degree == 0:
        v = cochain.entry()
        for a in nonid:
            table[(a,)] = sub(cochain.act(a, v), v)
    elif cochain.degree == 1:
        for a in nonid:
            for b in nonid:
                val = add(cochain.entry(a), cochain.act(a, cochain.entry(b)))
                val = sub(val, cochain.entry(g.compose(a, b)))
                table[(a, b)] = val
    else:
        for a in nonid:
            for b in nonid:
                for c in nonid:
                    val = cochain.act(a, cochain.entry(b, c))
                    val = sub(val, cochain.entry(g.compose(a, b), c))
                    val = add(val, cochain.entry(a, g.compose(b, c)))
                    val = sub(val, cochain.entry(a, b))
                    table[(a, b, c)] = val
    return CentralCochain(
        g, cochain.degree + 1, L, cochain.m, cochain.action, table
    )


def is_central_cocycle(lam: CentralCochain) -> bool:
    """True iff the degree-2 cochain has vanishing coboundary (exactly)."""
    if lam.degree != 2:
        raise StructuralError("cocycle test expects a 2-cochain")
    return coboundary(lam).is_zero()


@dataclass(frozen=True)
class CohomologyGroup:
    """Finite abelian group in invariant-factor form (empty = trivial)."""

    invariant_factors: tuple[int, ...]

    def __init__(self, invariant_factors):
        factors = tuple(int(d) for d in invariant_factors)
        if any(d <= 1 for d in factors):
            raise StructuralError("invariant factors must be > 1")
        for a, b in zip(factors, factors[1:]):
            if b % a:
                raise StructuralError("each invariant factor must divide the next")
        object.__setattr__(self, "invariant_factors", factors)

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "trivial"
        return " x ".join(f"Z{d}" for d in self.invariant_factors)


# ---------------------------------------------------------------------------
# Coboundary matrices over the integers


def _pair_index(group, nonid, m):
    pairs = [(a, b) for a in nonid for b in nonid]
    index = {p: k for k, p in enumerate(pairs)}

    def col(a, b, coord):
        return index[(a, b)] * m + coord

    return pairs, index, col


def _d1_matrix(group, action, m):
    """Integer matrix of the degree-1 coboundary on normalized cochains."""
    nonid = [x for x in group.elements() if x != group.identity]
    singles = {x: k for k, x in enumerate(nonid)}
    pairs, _, col = _pair_index(group, nonid, m)
    mat = np.zeros((len(pairs) * m, len(nonid) * m), dtype=np.int64)
    for (a, b) in pairs:
        pa = action[a]
        for coord in range(m):
            row = col(a, b, coord)
            mat[row, singles[a] * m + coord] += 1
            mat[row, singles[b] * m + pa[coord]] += 1
            ab = group.compose(a, b)
            if ab != group.identity:
                mat[row, singles[ab] * m + coord] -= 1
    return mat


def _d2_matrix(group, action, m):
    """Integer matrix of the degree-2 coboundary on normalized cochains."""
    nonid = [x for x in group.elements() if x != group.identity]
    pairs, _, col = _pair_index(group, nonid, m)
    triples = [(a, b, c) for a in nonid for b in nonid for c in nonid]
    mat = np.zeros((len(triples) * m, len(pairs) * m), dtype=np.int64)
    for t, (a, b, c) in enumerate(triples):
        pa = action[a]
        ab = group.compose(a, b)
        bc = group.compose(b, c)
        for coord in range(m):
            row = t * m + coord
            mat[row, col(b, c, pa[coord])] += 1
            if ab != group.identity:
                mat[row, col(ab, c, coord)] -= 1
            if bc != group.identity:
                mat[row, col(a, bc, coord)] += 1
            mat[row, col(a, b, coord)] -= 1
    return mat


def _cochain_to_vector(lam: CentralCochain) -> np.ndarray:
    g = lam.group
    nonid = [x for x in g.elements() if x != g.identity]
    _, _, col = _pair_index(g, nonid, lam.m)
    vec = np.zeros(len(nonid) ** 2 * lam.m, dtype=np.int64)
    for (a, b), val in lam.entries.items():
        for coord in range(lam.m):
            vec[col(a, b, coord)] = val[coord]
    return vec


def _vector_to_cochain(group, action, m, modulus, vec, degree=1) -> CentralCochain:
    nonid = [x for x in group.elements() if x != group.identity]
    table = {}
    if degree == 1:
        for k, x in enumerate(nonid):
            table[(x,)] = tuple(int(v) for v in vec[k * m : (k + 1) * m])
    else:
        pairs, _, _ = _pair_index(group, nonid, m)
        for k, p in enumerate(pairs):
            table[p] = tuple(int(v) for v in vec[k * m : (k + 1) * m])
    return CentralCochain(group, degree, modulus, m, action, table)


# ---------------------------------------------------------------------------
# H^2 via exact modular linear algebra


def _h2_invariant_factors(group, action_table, m, cocycle_modulus):
    """Invariant factors of mod-``L`` cocycles by torus coboundaries."""
    L = cocycle_modulus
    q = group.order
    M = L * q
    d2 = _d2_matrix(group, action_table, m)
    d1 = _d1_matrix(group, action_table, m)
    n_pairs = d2.shape[1]
    kernel = kernel_mod(d2, L)
    # Coboundary side: w bounds over the torus iff q*w lifts through the
    # degree-1 map at modulus M = L*q (divisibility headroom).
    lift = np.hstack([d1, -q * np.eye(n_pairs, dtype=np.int64)])
    sols = kernel_mod(lift, M)
    bound = sols[:, d1.shape[1] :] % L if sols.size else np.zeros((0, n_pairs), dtype=np.int64)
    if bound.size:
        if np.any((d2 @ bound.T) % L):
            raise ConsistencyError("coboundary generators fail the cocycle equations")
    if kernel.shape[0] == 0:
        return []
    # Relations of the kernel generators modulo the coboundary subgroup.
    stacked = np.vstack([kernel, bound]) if bound.size else kernel
    coeffs = kernel_mod(stacked.T, L)
    relations = coeffs[:, : kernel.shape[0]] if coeffs.size else np.zeros((0, kernel.shape[0]), dtype=np.int64)
    return cokernel_invariant_factors(relations, kernel.shape[0], L)


def h2_compute(
    group: FiniteAbelianGroup,
    action=None,
    m: int = 1,
    bound: int = DEFAULT_H2_BOUND,
) -> CohomologyGroup:
    """Second cohomology with coefficients in the torus T^m.

    Computed twice, with cocycle moduli ``q`` and ``2q`` (q the group
    order); the doubled run must reproduce the invariant factors, which
    guards the finite-modulus reduction described in the module docstring.
    """
    if group.order > bound:
        raise CapacityError(f"group order {group.order} exceeds bound {bound}")
    action_table = _normalize_action(group, action, m)
    factors = _h2_invariant_factors(group, action_table, m, group.order)
    stabilized = _h2_invariant_factors(group, action_table, m, 2 * group.order)
    if factors != stabilized:
        raise ConsistencyError(
            f"modulus stabilization failed: {factors} vs {stabilized}"
        )
    return CohomologyGroup(factors)


def coboundary_solve(lam: CentralCochain) -> CentralCochain | None:
    """A 1-cochain ``z`` with coboundary ``lam``, or None (nontrivial class).

    The witness is searched at modulus ``lam.modulus * |X|``; by the
    divisibility headroom this is exhaustive for torus coefficients, so
    ``None`` certifies that the class of ``lam`` is nontrivial.  The input
    must be an exact-phase cocycle.
    """
    if lam.degree != 2:
        raise StructuralError("coboundary_solve expects a 2-cochain")
    if not is_central_cocycle(lam):
        raise StructuralError("input is not a 2-cocycle")
    g = lam.group
    q = g.order
    M = lam.modulus * q
    d1 = _d1_matrix(g, lam.action, lam.m)
    target = (q * _cochain_to_vector(lam)) % M
    sol = solve_mod(d1, target, M)
    if sol is None:
        return None
    witness = _vector_to_cochain(g, lam.action, lam.m, M, sol, degree=1)
    if not (coboundary(witness) - lam.rescaled(M)).is_zero():
        raise ConsistencyError("modular solver returned an invalid witness")
    return witness


def obstruction_solve(gamma: CentralCochain) -> CentralCochain | None:
    """A 2-cochain whose coboundary is the given 3-cochain, if one exists.

    Same headroom rule as `coboundary_solve`, one degree up: the witness
    modulus is ``gamma.modulus * |X|``.  Used to decide whether an
    associativity obstruction can be removed by re-choosing the cocycle.
    """
    if gamma.degree != 3:
        raise StructuralError("obstruction_solve expects a 3-cochain")
    g = gamma.group
    q = g.order
    M = gamma.modulus * q
    d2 = _d2_matrix(g, gamma.action, gamma.m)
    nonid = [x for x in g.elements() if x != g.identity]
    vec = np.zeros(len(nonid) ** 3 * gamma.m, dtype=np.int64)
    triples = [(a, b, c) for a in nonid for b in nonid for c in nonid]
    for t, key in enumerate(triples):
        val = gamma.entry(*key)
        for coord in range(gamma.m):
            vec[t * gamma.m + coord] = val[coord]
    sol = solve_mod(d2, (q * vec) % M, M)
    if sol is None:
        return None
    witness = _vector_to_cochain(g, gamma.action, gamma.m, M, sol, degree=2)
    if not (coboundary(witness) - gamma.rescaled(M)).is_zero():
        raise ConsistencyError("modular solver returned an invalid witness")
    return witness


# ---------------------------------------------------------------------------
# Independent oracle and closed form


def _factorint(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _structure_from_order_counts(order_counts: dict[int, int], size: int) -> list[int]:
    """Invariant factors from the counts of elements killed by each k."""
    if size == 1:
        return []
    exps_by_prime = {}
    for p in sorted(_factorint(size)):
        s = []
        j = 1
        while True:
            f = order_counts.get(p**j)
            if f is None:
                break
            s.append(round(np.log(f) / np.log(p)))
            if f == size or (len(s) > 1 and s[-1] == s[-2]):
                break
            j += 1
        s = [0] + s
        counts_ge = [s[j] - s[j - 1] for j in range(1, len(s))]
        exps = []
        for j, t in enumerate(counts_ge, start=1):
            nxt = counts_ge[j] if j < len(counts_ge) else 0
            exps.extend([j] * (t - nxt))
        exps_by_prime[p] = sorted(exps, reverse=True)
    return _merge_prime_exponents(exps_by_prime)


def _merge_prime_exponents(exps_by_prime: dict[int, list[int]]) -> list[int]:
    width = max((len(v) for v in exps_by_prime.values()), default=0)
    factors = []
    for i in range(width):
        d = 1
        for p, exps in exps_by_prime.items():
            if i < len(exps):
                d *= p ** exps[i]
        factors.append(d)
    return sorted(d for d in factors if d > 1)


def h2_oracle(
    group: FiniteAbelianGroup, action=None, m: int = 1
) -> CohomologyGroup:
    """Brute-force H^2: enumerate cochains, filter cocycles, quotient.

    Cochains run over modulus ``q = |X|`` and coboundaries come from
    enumerated 1-cochains modulo ``q^2``; the resulting quotient structure
    is reconstructed from element-order counts.  Only viable for tiny
    instances (order <= 4, m <= 2, and a hard cap on the enumeration).
    """
    q = group.order
    if q > 4 or m > 2:
        raise CapacityError("oracle bound is |X| <= 4 and m <= 2")
    action_table = _normalize_action(group, action, m)
    L, M = q, q * q
    nonid = [x for x in group.elements() if x != group.identity]
    n_vars = len(nonid) ** 2 * m
    total = L**n_vars
    if total > ORACLE_ENUMERATION_CAP:
        raise CapacityError(f"enumeration of {total} cochains exceeds the cap")
    d2 = _d2_matrix(group, action_table, m)
    d1 = _d1_matrix(group, action_table, m)
    codes = np.arange(total, dtype=np.int64)
    weights = L ** np.arange(n_vars, dtype=np.int64)
    cochains = (codes[:, None] // weights[None, :]) % L
    cocycles = cochains[~np.any((cochains @ d2.T) % L, axis=1)]
    n1 = len(nonid) * m
    total1 = M**n1
    if total1 > ORACLE_ENUMERATION_CAP:
        raise CapacityError(f"enumeration of {total1} 1-cochains exceeds the cap")
    codes1 = np.arange(total1, dtype=np.int64)
    weights1 = M ** np.arange(n1, dtype=np.int64)
    ones = (codes1[:, None] // weights1[None, :]) % M
    bounds = (ones @ d1.T) % M
    bounds = bounds[~np.any(bounds % q, axis=1)] // q
    encode = L ** np.arange(n_vars, dtype=np.int64)
    bound_codes = np.unique(bounds @ encode)
    cocycle_codes = cocycles @ encode
    if not np.all(np.isin(bound_codes, cocycle_codes)):
        raise ConsistencyError("oracle: coboundaries are not all cocycles")
    size = cocycle_codes.size // bound_codes.size
    counts = {}
    for k in range(1, L + 1):
        if L % k == 0:
            killed = np.isin(((k * cocycles) % L) @ encode, bound_codes)
            counts[k] = int(np.count_nonzero(killed)) // bound_codes.size
    return CohomologyGroup(_structure_from_order_counts(counts, size))


def schur_multiplier(orders) -> CohomologyGroup:
    """Closed form for trivial-action H^2 of a product of cyclic groups.

    For ``Z_{n_1} x ... x Z_{n_k}`` with coefficients in the circle and
    trivial action, the group is the direct sum of ``Z_{gcd(n_i, n_j)}``
    over pairs ``i < j``, returned in invariant-factor form.
    """
    orders = [int(n) for n in orders]
    cyclic = []
    for i in range(len(orders)):
        for j in range(i + 1, len(orders)):
            g = math.gcd(orders[i], orders[j])
            if g > 1:
                cyclic.append(g)
    exps_by_prime: dict[int, list[int]] = {}
    for d in cyclic:
        for p, e in _factorint(d).items():
            exps_by_prime.setdefault(p, []).append(e)
    for p in exps_by_prime:
        exps_by_prime[p].sort(reverse=True)
    return CohomologyGroup(_merge_prime_exponents(exps_by_prime))


def snap_phase_vector(phases, modulus: int) -> tuple[int, ...]:
    """Exact grid coordinates of unit-modulus phases, or an error.

    Each phase must lie within `SNAP_TOL` (measured in turns) of a
    ``modulus``-th root of unity; otherwise the vector is reported as
    irrational with its nearest-grid distance.
    """
    out = []
    for z in phases:
        turn = float(np.angle(z)) / (2 * np.pi) % 1.0
        scaled = turn * modulus
        nearest = round(scaled)
        dist = abs(scaled - nearest) / modulus
        if dist > SNAP_TOL:
            raise UndecidableError(
                f"phase {z} is {dist:.2e} turns away from the mod-{modulus} grid"
            )
        out.append(int(nearest) % modulus)
    return tuple(out)
