import math
import random
from fractions import Fraction

import pytest

from weylfan.exactlat import (
    Lattice,
    det_int,
    elementary_divisors,
    hermite_normal_form,
    integer_kernel,
    lattice_index,
    lattice_plus_subspace_intersect,
    mat_mul,
    nullspace,
    primitive_vector,
    smith_normal_form,
    solve_unique,
    vec,
)

A2_CARTAN = ((2, -1), (-1, 2))
B2_CARTAN = ((2, -1), (-2, 2))
G2_CARTAN = ((2, -3), (-1, 2))


def snf_diag_oracle(a):
    """Independent invariant-factor oracle: d_k = gcd of k-minors ratios."""
    m, n = len(a), len(a[0])
    from itertools import combinations

    def minor_gcd(k):
        g = 0
        for rows in combinations(range(m), k):
            for cols in combinations(range(n), k):
                sub = [[a[i][j] for j in cols] for i in rows]
                g = math.gcd(g, abs(det_int(sub)))
        return g

    prev = 1
    out = []
    for k in range(1, min(m, n) + 1):
        g = minor_gcd(k)
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return tuple(out)


def test_snf_a2_cartan():
    res = smith_normal_form(A2_CARTAN)
    assert res.diagonal() == (1, 3)
    assert snf_diag_oracle(A2_CARTAN) == (1, 3)


def test_snf_identity():
    res = smith_normal_form(((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    assert res.d == ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def test_snf_b2_cartan():
    res = smith_normal_form(B2_CARTAN)
    assert res.diagonal() == (1, 2)
    assert snf_diag_oracle(B2_CARTAN) == (1, 2)


def test_snf_transforms_and_chain_random():
    rng = random.Random(20260809)
    for _ in range(60):
        m = rng.randint(1, 4)
        n = rng.randint(1, 4)
        a = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]
        res = smith_normal_form(a)
        assert mat_mul(res.u, mat_mul(a, res.v)) == res.d
        assert abs(det_int(res.u)) == 1
        assert abs(det_int(res.v)) == 1
        diag = [x for x in res.diagonal() if x != 0]
        for x, y in zip(diag, diag[1:]):
            assert y % x == 0
        assert tuple(diag) == snf_diag_oracle(a)
        for i in range(m):
            for j in range(n):
                if i != j:
                    assert res.d[i][j] == 0


def test_primitive_vector_paper_rows():
    assert primitive_vector((-2, 2)) == (-1, 1)
    assert primitive_vector((2, -3)) == (2, -3)
    assert primitive_vector((5, 0, 0)) == (1, 0, 0)


def test_primitive_vector_zero_rejected():
    with pytest.raises(ValueError, match="zero ray"):
        primitive_vector((0, 0))


def test_primitive_vector_idempotent():
    rng = random.Random(7)
    for _ in range(100):
        v = tuple(rng.randint(-20, 20) for _ in range(3))
        if all(x == 0 for x in v):
            continue
        p = primitive_vector(v)
        assert primitive_vector(p) == p


def test_hnf_canonical():
    h = hermite_normal_form(((2, 4), (3, 6)))
    assert h == ((1, 2),)
    h = hermite_normal_form(((0, 0), (0, 0)))
    assert h == ()


def test_integer_kernel_saturated():
    k = integer_kernel(((1, 2, 3),))
    assert len(k) == 2
    for row in k:
        assert sum(a * b for a, b in zip(row, (1, 2, 3))) == 0
    # saturation: (1,1,-1) is in the kernel and must be an integer combination
    target = (1, 1, -1)
    sol = solve_unique([[Fraction(x) for x in col] for col in zip(*k)], target)
    assert sol is not None and all(x.denominator == 1 for x in sol)


def coroot_lattice(cartan):
    return Lattice.from_rows(cartan, len(cartan))


def coweight_lattice(n):
    return Lattice.standard(n)


def test_lattice_index_a2():
    q = coroot_lattice(A2_CARTAN)
    p = coweight_lattice(2)
    assert lattice_index(q, p) == 3
    assert abs(det_int(A2_CARTAN)) == 3


def test_lattice_index_equal():
    p = coweight_lattice(3)
    assert lattice_index(p, p) == 1


def test_lattice_index_g2():
    q = coroot_lattice(G2_CARTAN)
    p = coweight_lattice(2)
    assert lattice_index(q, p) == 1
    assert abs(det_int(G2_CARTAN)) == 1


def test_lattice_index_infinite_and_error():
    sub = Lattice.from_rows([(1, 0)], 2)
    sup = coweight_lattice(2)
    assert lattice_index(sub, sup) == math.inf
    bad = Lattice.from_rows([(Fraction(1, 2), 0)], 2)
    with pytest.raises(ValueError, match="not a sublattice"):
        lattice_index(bad, sup)


def test_lattice_membership_and_equality():
    l1 = Lattice.from_rows([(2, 0), (1, 1)], 2)
    l2 = Lattice.from_rows([(1, 1), (2, 0)], 2)
    assert l1 == l2
    assert l1.contains((3, 1))
    assert not l1.contains((1, 0))
    assert l1.contains((Fraction(2), Fraction(0)))


def test_sp_lattice_a2():
    # Span(alpha1^vee) cap (P^vee + Span(omega2^vee)) is generated by alpha1^vee / 2
    alpha1 = (2, -1)
    got = lattice_plus_subspace_intersect([alpha1], Lattice.standard(2), [(0, 1)])
    want = Lattice.from_rows([(1, Fraction(-1, 2))], 2)
    assert got == want


def test_sp_trivial_cases():
    lam = coroot_lattice(B2_CARTAN)
    full = lattice_plus_subspace_intersect(((1, 0), (0, 1)), lam, [])
    assert full == lam
    zero = lattice_plus_subspace_intersect([], lam, [(1, 0)])
    assert zero.rank == 0


def test_sp_full_span_gives_whole_lattice():
    # U = ambient, V0 = 0, Lambda = P^vee: intersection is P^vee itself
    got = lattice_plus_subspace_intersect(((2, -1), (-1, 2)), Lattice.standard(2), [])
    assert got == Lattice.standard(2)


def test_sp_closed_under_group_ops():
    rng = random.Random(11)
    lam = Lattice.standard(2)
    sp = lattice_plus_subspace_intersect([(2, -1)], lam, [(0, 1)])
    basis = sp.basis()
    for _ in range(100):
        c1 = rng.randint(-4, 4)
        c2 = rng.randint(-4, 4)
        v = tuple(c1 * a + c2 * b for a, b in zip(basis[0], basis[0]))
        v = tuple(c1 * a for a in basis[0])
        w = tuple(c2 * a for a in basis[0])
        s = tuple(a + b for a, b in zip(v, w))
        assert sp.contains(s)
        assert sp.contains(tuple(-a for a in s))


def test_sp_not_discrete_raises():
    with pytest.raises(ValueError, match="not discrete"):
        lattice_plus_subspace_intersect([(1, 0)], Lattice.standard(2), [(1, 0)])


def test_nullspace_and_solve():
    ns = nullspace([(1, 2, 3)])
    assert len(ns) == 2
    sol = solve_unique(((2, 0), (0, 3)), (4, 9))
    assert sol == (Fraction(2), Fraction(3))
    assert solve_unique(((1, 0), (1, 0)), (0, 1)) is None


def test_lattice_reduce_canonical():
    lat = Lattice.from_rows([(1, 0), (0, 1)], 2)
    r = lat.reduce((Fraction(7, 3), Fraction(-1, 4)))
    assert r == (Fraction(1, 3), Fraction(3, 4))
    assert lat.reduce(r) == r
