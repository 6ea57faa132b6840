"""Finite abelian groups, their duals, and the character pairing.

Every group handled by the workbench is presented explicitly as a product
of cyclic groups ``Z_{n_1} x ... x Z_{n_k}``; elements are integer tuples
``(x_1, ..., x_k)`` with ``0 <= x_j < n_j`` and composition is
componentwise addition.  The dual group has the same coordinate shape, a
character ``chi`` pairs with a group element ``g`` through

    <chi, g> = exp(2 pi i sum_j chi_j g_j / n_j),

which is a unit-modulus complex number, multiplicative in both arguments
and non-degenerate.  Enumeration order is lexicographic with the identity
first; it is part of the stable external contract (matrix layouts and
reports rely on it).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import CapacityError, StructuralError

Element = tuple[int, ...]
Character = tuple[int, ...]

#: Largest group order `elements` will enumerate by default.
DEFAULT_ENUMERATION_BOUND = 64

_EXACT_PHASES = {
    Fraction(0): 1 + 0j,
    Fraction(1, 4): 1j,
    Fraction(1, 2): -1 + 0j,
    Fraction(3, 4): -1j,
}


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Product of cyclic groups with componentwise arithmetic.

    The same object models both the group and its dual (characters are
    tuples of the identical shape); `pairing` connects the two.
    """

    cyclic_orders: tuple[int, ...]

    def __init__(self, cyclic_orders):
        orders = tuple(int(n) for n in cyclic_orders)
        if len(orders) == 0:
            raise StructuralError("group needs at least one cyclic factor")
        if any(n < 1 for n in orders):
            raise StructuralError(f"cyclic orders must be >= 1, got {orders}")
        object.__setattr__(self, "cyclic_orders", orders)

    @property
    def rank(self) -> int:
        return len(self.cyclic_orders)

    @property
    def order(self) -> int:
        return math.prod(self.cyclic_orders)

    @property
    def identity(self) -> Element:
        return (0,) * self.rank

    def element(self, coords) -> Element:
        """Reduce integer coordinates into the canonical representative."""
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.rank:
            raise StructuralError(
                f"element {coords} has rank {len(coords)}, group has rank {self.rank}"
            )
        return tuple(c % n for c, n in zip(coords, self.cyclic_orders))

    def contains(self, x) -> bool:
        return (
            isinstance(x, tuple)
            and len(x) == self.rank
            and all(0 <= c < n for c, n in zip(x, self.cyclic_orders))
        )

    def _check(self, x) -> Element:
        if not self.contains(x):
            raise StructuralError(f"{x!r} is not an element of {self}")
        return x

    def compose(self, x: Element, y: Element) -> Element:
        """Componentwise sum modulo the cyclic orders."""
        self._check(x)
        self._check(y)
        return tuple((a + b) % n for a, b, n in zip(x, y, self.cyclic_orders))

    def inverse(self, x: Element) -> Element:
        self._check(x)
        return tuple((-a) % n for a, n in zip(x, self.cyclic_orders))

    def elements(self, bound: int = DEFAULT_ENUMERATION_BOUND) -> list[Element]:
        """All elements in lexicographic order, identity first."""
        if self.order > bound:
            raise CapacityError(
                f"group order {self.order} exceeds enumeration bound {bound}"
            )
        return list(itertools.product(*(range(n) for n in self.cyclic_orders)))

    def index(self, x: Element) -> int:
        """Position of ``x`` in the canonical enumeration (mixed radix)."""
        self._check(x)
        idx = 0
        for c, n in zip(x, self.cyclic_orders):
            idx = idx * n + c
        return idx

    def pairing_exponent(self, chi: Character, g: Element) -> Fraction:
        """Exact phase ``sum_j chi_j g_j / n_j`` reduced modulo 1."""
        self._check(chi)
        self._check(g)
        t = sum(
            (Fraction(c * a, n) for c, a, n in zip(chi, g, self.cyclic_orders)),
            Fraction(0),
        )
        return t % 1

    def pairing(self, chi: Character, g: Element) -> complex:
        """Unit-modulus value ``<chi, g>``; exact on fourth roots of unity."""
        t = self.pairing_exponent(chi, g)
        exact = _EXACT_PHASES.get(t)
        if exact is not None:
            return exact
        return complex(math.cos(2 * math.pi * t), math.sin(2 * math.pi * t))

    def __str__(self) -> str:
        return " x ".join(f"Z{n}" for n in self.cyclic_orders)
