import itertools

import numpy as np
import pytest

from hilbext.modular import (
    cokernel_invariant_factors,
    howell_form,
    kernel_mod,
    smith_invariant_factors,
    solve_mod,
    xgcd,
)


def span_mod(rows, n):
    """Brute-force row span over Z/n (set of tuples)."""
    rows = [tuple(int(v) % n for v in r) for r in np.atleast_2d(rows)]
    if not rows or not rows[0]:
        return {tuple()}
    out = set()
    for coeffs in itertools.product(range(n), repeat=len(rows)):
        v = tuple(
            sum(c * r[j] for c, r in zip(coeffs, rows)) % n for j in range(len(rows[0]))
        )
        out.add(v)
    return out


@pytest.mark.parametrize("a,b", [(12, 18), (0, 5), (7, 0), (-4, 6), (1, 1)])
def test_xgcd(a, b):
    g, s, t = xgcd(a, b)
    assert s * a + t * b == g
    assert g == abs(np.gcd(a, b))


@pytest.mark.parametrize("n", [2, 3, 4, 6, 8, 12])
def test_howell_form_preserves_span(n):
    rng = np.random.default_rng(n)
    for _ in range(8):
        mat = rng.integers(0, n, size=(3, 3))
        h = howell_form(mat, n)
        assert span_mod(mat, n) == span_mod(h if h.size else np.zeros((1, 3)), n)


@pytest.mark.parametrize("n", [2, 4, 6, 8, 9])
def test_kernel_mod_brute_force(n):
    rng = np.random.default_rng(10 + n)
    for _ in range(8):
        mat = rng.integers(0, n, size=(2, 3))
        gens = kernel_mod(mat, n)
        expect = {
            x
            for x in itertools.product(range(n), repeat=3)
            if not np.any(np.asarray(mat) @ np.array(x) % n)
        }
        got = span_mod(gens if gens.size else np.zeros((1, 3)), n)
        assert got == expect


def test_kernel_mod_zero_divisors():
    # 2x = 0 mod 4 has the nontrivial solution x = 2; naive echelon misses it.
    gens = kernel_mod(np.array([[2]]), 4)
    assert span_mod(gens, 4) == {(0,), (2,)}


@pytest.mark.parametrize("n", [2, 4, 6, 9, 12])
def test_solve_mod_matches_brute_force(n):
    rng = np.random.default_rng(20 + n)
    for _ in range(12):
        mat = rng.integers(0, n, size=(3, 2))
        rhs = rng.integers(0, n, size=3)
        sol = solve_mod(mat, rhs, n)
        solutions = [
            x
            for x in itertools.product(range(n), repeat=2)
            if not np.any((np.asarray(mat) @ np.array(x) - rhs) % n)
        ]
        if sol is None:
            assert not solutions
        else:
            assert not np.any((mat @ sol - rhs) % n)
            assert solutions


def test_smith_invariant_factors_known():
    assert smith_invariant_factors(np.diag([2, 3])) == [1, 6]
    assert smith_invariant_factors(np.diag([2, 2])) == [2, 2]
    assert smith_invariant_factors(np.array([[0, 0], [0, 0]])) == []


def test_smith_invariant_factors_against_sympy():
    sympy = pytest.importorskip("sympy")
    from sympy.matrices.normalforms import smith_normal_form

    rng = np.random.default_rng(3)
    for _ in range(10):
        mat = rng.integers(-4, 5, size=(4, 5))
        ours = smith_invariant_factors(mat)
        snf = smith_normal_form(sympy.Matrix(mat.tolist()))
        theirs = [abs(int(snf[i, i])) for i in range(min(snf.shape))]
        theirs = [d for d in theirs if d != 0]
        assert ours == theirs


def test_cokernel_invariant_factors_small():
    # (Z/6)^2 modulo <(2, 0)> is Z2 x Z6 ... presented as Z^2 / <(2,0), 6Z^2>.
    facs = cokernel_invariant_factors(np.array([[2, 0]]), dim=2, n=6)
    assert facs == [2, 6]
    assert cokernel_invariant_factors(np.zeros((0, 2)), dim=2, n=4) == [4, 4]
