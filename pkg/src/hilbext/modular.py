"""Exact linear algebra over Z/n and Z.

The cohomology computations need three primitives, all exact:

* a canonical generating set for the row span of an integer matrix over
  Z/n (a Howell-style echelon form, which unlike plain echelon forms is
  complete over rings with zero divisors),
* kernels and particular solutions of linear systems modulo n,
* invariant factors (Smith normal form diagonal) of an integer matrix.

Matrices are numpy integer arrays; all reductions happen on full rows at
a time.  Entries stay below the modulus in the Z/n routines.  The Smith
reduction runs on int64 with a pessimistic overflow guard and falls back
to exact Python integers when the guard trips.
"""

from __future__ import annotations

import math

import numpy as np


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) >= 0``."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = int(a), int(b)
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


def _unit_lifting(a: int, n: int) -> tuple[int, int]:
    """Unit ``w`` mod ``n`` and ``g = gcd(a, n)`` with ``w*a % n == g``."""
    g, s, _ = xgcd(a, n)
    s %= n
    step = n // g
    w = s
    while math.gcd(w, n) != 1:
        w += step
    return w % n, g


class _RowReducer:
    """Incremental echelon reduction of rows over Z/n.

    Only columns ``< pivot_limit`` are eligible as pivot columns; rows
    that reduce to zero on the pivot range land in ``residue`` untouched.
    Annihilator multiples of every pivot row are fed back in, which gives
    the reduced set the completeness property needed over Z/n (every row
    of the span with a given zero prefix is reachable from the output).
    """

    def __init__(self, width: int, n: int, pivot_limit: int | None = None):
        self.n = int(n)
        self.width = width
        self.pivot_limit = width if pivot_limit is None else pivot_limit
        self.pivots: list[tuple[int, np.ndarray]] = []  # (column, row) sorted
        self.residue: list[np.ndarray] = []

    def add(self, row: np.ndarray) -> None:
        n = self.n
        queue = [np.asarray(row, dtype=np.int64) % n]
        while queue:
            r = queue.pop()
            k = 0
            while True:
                nz = np.nonzero(r[: self.pivot_limit])[0]
                if nz.size == 0:
                    if np.any(r):
                        self.residue.append(r)
                    break
                col = int(nz[0])
                while k < len(self.pivots) and self.pivots[k][0] < col:
                    k += 1
                if k == len(self.pivots) or self.pivots[k][0] > col:
                    # New pivot; queue its annihilator multiple.
                    self.pivots.insert(k, (col, r))
                    ann = n // math.gcd(int(r[col]), n)
                    if ann > 1:
                        queue.append((r * ann) % n)
                    break
                # Combine with the existing pivot row at this column.
                _, p = self.pivots[k]
                a, b = int(p[col]), int(r[col])
                if b % a == 0:
                    r = (r - (b // a) * p) % n
                else:
                    g, s, t = xgcd(a, b)
                    new_p = (s * p + t * r) % n
                    r = ((a // g) * r - (b // g) * p) % n
                    self.pivots[k] = (col, new_p)
                    ann = n // math.gcd(g, n)
                    if ann > 1:
                        queue.append((new_p * ann) % n)

    def normalized_pivot_rows(self) -> np.ndarray:
        """Canonical form: unit-scaled pivots, entries above pivots reduced."""
        n = self.n
        rows = [r.copy() for _, r in self.pivots]
        cols = [c for c, _ in self.pivots]
        for i, (col, r) in enumerate(zip(cols, rows)):
            w, g = _unit_lifting(int(r[col]), n)
            rows[i] = (r * w) % n
        for i in range(len(rows) - 1, -1, -1):
            col, piv = cols[i], int(rows[i][cols[i]])
            for j in range(i):
                q = int(rows[j][col]) // piv
                if q:
                    rows[j] = (rows[j] - q * rows[i]) % n
        if not rows:
            return np.zeros((0, self.width), dtype=np.int64)
        return np.array(rows, dtype=np.int64)


def howell_form(mat: np.ndarray, n: int) -> np.ndarray:
    """Canonical generating rows of the row span of ``mat`` over Z/n."""
    mat = np.atleast_2d(np.asarray(mat, dtype=np.int64))
    if n == 1 or mat.size == 0:
        return np.zeros((0, mat.shape[1]), dtype=np.int64)
    red = _RowReducer(mat.shape[1], n)
    for row in mat:
        red.add(row)
    return red.normalized_pivot_rows()


def kernel_mod(mat: np.ndarray, n: int) -> np.ndarray:
    """Rows generating ``{x : mat @ x == 0 (mod n)}`` as a Z/n-module."""
    mat = np.atleast_2d(np.asarray(mat, dtype=np.int64))
    rows, cols = mat.shape
    if n == 1:
        return np.zeros((0, cols), dtype=np.int64)
    # Track coefficients: row i of the workspace is (column i of mat | e_i),
    # so any row combination reads ((mat @ x).T | x.T).
    work = np.hstack([mat.T % n, np.eye(cols, dtype=np.int64)])
    red = _RowReducer(rows + cols, n, pivot_limit=rows)
    for row in work:
        red.add(row)
    tails = [r[rows:] for r in red.residue]
    if not tails:
        return np.zeros((0, cols), dtype=np.int64)
    return howell_form(np.array(tails, dtype=np.int64), n)


def solve_mod(mat: np.ndarray, rhs: np.ndarray, n: int) -> np.ndarray | None:
    """One solution of ``mat @ x == rhs (mod n)``, or None if there is none."""
    mat = np.atleast_2d(np.asarray(mat, dtype=np.int64))
    rhs = np.asarray(rhs, dtype=np.int64) % n
    rows, cols = mat.shape
    if n == 1:
        return np.zeros(cols, dtype=np.int64)
    work = np.hstack([mat.T % n, np.eye(cols, dtype=np.int64)])
    red = _RowReducer(rows + cols, n, pivot_limit=rows)
    for row in work:
        red.add(row)
    probe = np.concatenate([rhs, np.zeros(cols, dtype=np.int64)])
    for col, p in red.pivots:
        b = int(probe[col])
        if b == 0:
            continue
        a = int(p[col])
        g = math.gcd(a, n)
        if b % g:
            return None
        _, s, _ = xgcd(a, n)
        k = (b // g) * s % (n // g)
        probe = (probe - k * p) % n
    if np.any(probe[:rows]):
        return None
    return (-probe[rows:]) % n


def _smith_reduce(a: list[list[int]]) -> list[int]:
    """Diagonal of the Smith form of a dense integer matrix (Python ints)."""
    rows, cols = len(a), len(a[0]) if a else 0
    diag: list[int] = []
    top = 0
    while top < min(rows, cols):
        # Locate the smallest nonzero entry in the remaining block.
        best = None
        for i in range(top, rows):
            for j in range(top, cols):
                v = abs(a[i][j])
                if v and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            break
        _, bi, bj = best
        a[top], a[bi] = a[bi], a[top]
        for row in a:
            row[top], row[bj] = row[bj], row[top]
        while True:
            piv = a[top][top]
            dirty = False
            for i in range(top + 1, rows):
                if a[i][top]:
                    q = a[i][top] // piv
                    a[i] = [x - q * y for x, y in zip(a[i], a[top])]
                    if a[i][top]:
                        a[top], a[i] = a[i], a[top]
                        dirty = True
                        piv = a[top][top]
            for j in range(top + 1, cols):
                if a[top][j]:
                    q = a[top][j] // piv
                    for row in a:
                        row[j] -= q * row[top]
                    if a[top][j]:
                        for row in a:
                            row[top], row[j] = row[j], row[top]
                        dirty = True
                        piv = a[top][top]
            if not dirty:
                break
        diag.append(abs(a[top][top]))
        top += 1
    # Divisibility fix-up.
    changed = True
    while changed:
        changed = False
        for i in range(len(diag) - 1):
            x, y = diag[i], diag[i + 1]
            if y % x:
                g = math.gcd(x, y)
                diag[i], diag[i + 1] = g, x * y // g
                changed = True
    return diag


def smith_invariant_factors(mat: np.ndarray) -> list[int]:
    """Nonzero diagonal of the Smith normal form, each dividing the next."""
    mat = np.atleast_2d(np.asarray(mat, dtype=object))
    if mat.size == 0:
        return []
    rows = [[int(v) for v in row] for row in mat]
    return [d for d in _smith_reduce(rows) if d != 0]


def cokernel_invariant_factors(relation_rows: np.ndarray, dim: int, n: int) -> list[int]:
    """Invariant factors (> 1) of ``(Z/n)^dim`` modulo the given relation rows.

    ``relation_rows`` are relations modulo ``n``; the lattice they span
    together with ``n * Z^dim`` presents the quotient group.
    """
    relation_rows = np.atleast_2d(np.asarray(relation_rows, dtype=np.int64))
    reduced = howell_form(relation_rows, n)
    stacked = np.vstack([reduced, n * np.eye(dim, dtype=np.int64)])
    return [d for d in smith_invariant_factors(stacked) if d > 1]
