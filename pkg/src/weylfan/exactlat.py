"""Exact integer/rational linear algebra: normal forms, lattices, primitive vectors.

Everything runs on Python ints and fractions.Fraction; no floats anywhere.
Matrices are tuples of row tuples, vectors are tuples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

IntVec = tuple[int, ...]
IntMatrix = tuple[IntVec, ...]
Vec = tuple[Fraction, ...]


def vec(values: Iterable) -> Vec:
    return tuple(Fraction(x) for x in values)


def dot(x: Sequence, y: Sequence) -> Fraction:
    if len(x) != len(y):
        raise ValueError("dimension mismatch")
    return sum((Fraction(a) * Fraction(b) for a, b in zip(x, y)), Fraction(0))


def vec_add(x: Sequence, y: Sequence) -> Vec:
    return tuple(Fraction(a) + Fraction(b) for a, b in zip(x, y))


def vec_sub(x: Sequence, y: Sequence) -> Vec:
    return tuple(Fraction(a) - Fraction(b) for a, b in zip(x, y))


def vec_scale(c, x: Sequence) -> Vec:
    c = Fraction(c)
    return tuple(c * Fraction(a) for a in x)


def mat_vec(m: Sequence[Sequence], x: Sequence) -> Vec:
    return tuple(dot(row, x) for row in m)


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    bt = list(zip(*b))
    return tuple(tuple(sum(ra[k] * col[k] for k in range(len(ra))) for col in bt) for ra in a)


def identity_matrix(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(m: Sequence[Sequence]) -> tuple:
    return tuple(zip(*m))


def det_int(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix (fraction-free Bareiss)."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def vec_gcd(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = math.gcd(g, abs(int(x)))
    return g


def primitive_vector(v: Sequence[int]) -> IntVec:
    """Divide an integer vector by the gcd of its coordinates."""
    g = vec_gcd(v)
    if g == 0:
        raise ValueError("zero ray")
    return tuple(int(x) // g for x in v)


def primitive_direction(v: Sequence) -> IntVec:
    """Primitive integer vector on the ray through a rational vector."""
    fr = [Fraction(x) for x in v]
    den = math.lcm(*(f.denominator for f in fr)) if fr else 1
    return primitive_vector([int(f * den) for f in fr])


def is_primitive(v: Sequence[int]) -> bool:
    return vec_gcd(v) == 1


# ---------------------------------------------------------------------------
# Smith normal form with transforms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SNFResult:
    """D = U * A * V with U, V unimodular and D diagonal with d1 | d2 | ..."""

    d: IntMatrix
    u: IntMatrix
    v: IntMatrix

    def diagonal(self) -> IntVec:
        return tuple(self.d[i][i] for i in range(min(len(self.d), len(self.d[0]) if self.d else 0)))


def _swap_rows(a, i, j):
    a[i], a[j] = a[j], a[i]


def _negate_row(a, i):
    a[i] = [-x for x in a[i]]


def _add_row(a, i, j, q):
    # row_i += q * row_j
    a[i] = [x + q * y for x, y in zip(a[i], a[j])]


def _swap_cols(a, i, j):
    for row in a:
        row[i], row[j] = row[j], row[i]


def _negate_col(a, j):
    for row in a:
        row[j] = -row[j]


def _add_col(a, i, j, q):
    # col_i += q * col_j
    for row in a:
        row[i] = row[i] + q * row[j]


def smith_normal_form(a: Sequence[Sequence[int]]) -> SNFResult:
    """Smith normal form with unimodular transforms.

    Pivot rule: smallest absolute nonzero entry of the working submatrix,
    ties broken in row-major scan order, so the computation is deterministic.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    d = [[int(x) for x in row] for row in a]
    u = [list(row) for row in identity_matrix(m)]
    v = [list(row) for row in identity_matrix(n)]

    t = 0
    while t < min(m, n):
        pi = pj = -1
        best = None
        for i in range(t, m):
            for j in range(t, n):
                e = d[i][j]
                if e != 0 and (best is None or abs(e) < best):
                    best = abs(e)
                    pi, pj = i, j
        if best is None:
            break
        if pi != t:
            _swap_rows(d, t, pi)
            _swap_rows(u, t, pi)
        if pj != t:
            _swap_cols(d, t, pj)
            _swap_cols(v, t, pj)
        while True:
            if d[t][t] < 0:
                _negate_row(d, t)
                _negate_row(u, t)
            p = d[t][t]
            restart = False
            for i in range(t + 1, m):
                if d[i][t] != 0:
                    q = d[i][t] // p
                    if q:
                        _add_row(d, i, t, -q)
                        _add_row(u, i, t, -q)
                    if d[i][t] != 0:
                        _swap_rows(d, t, i)
                        _swap_rows(u, t, i)
                        restart = True
                        break
            if restart:
                continue
            for j in range(t + 1, n):
                if d[t][j] != 0:
                    q = d[t][j] // p
                    if q:
                        _add_col(d, j, t, -q)
                        _add_col(v, j, t, -q)
                    if d[t][j] != 0:
                        _swap_cols(d, t, j)
                        _swap_cols(v, t, j)
                        restart = True
                        break
            if restart:
                continue
            break
        p = d[t][t]
        offender = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if d[i][j] % p != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            _add_row(d, t, offender, 1)
            _add_row(u, t, offender, 1)
            continue
        t += 1

    res = SNFResult(tuple(tuple(r) for r in d), tuple(tuple(r) for r in u), tuple(tuple(r) for r in v))
    assert mat_mul(res.u, mat_mul(a, res.v)) == res.d
    assert abs(det_int(res.u)) == 1 and abs(det_int(res.v)) == 1
    return res


def elementary_divisors(a: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Nonzero diagonal of the Smith form (with divisibility chain)."""
    return tuple(x for x in smith_normal_form(a).diagonal() if x != 0)


# ---------------------------------------------------------------------------
# Hermite normal form and integer kernels
# ---------------------------------------------------------------------------

def hermite_normal_form(rows: Sequence[Sequence[int]]) -> IntMatrix:
    """Canonical row-style HNF basis of the row span (zero rows dropped).

    Pivots are positive and increase in column index; entries above a pivot
    are reduced into [0, pivot).
    """
    a = [[int(x) for x in row] for row in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if a[i][c] != 0 and (piv is None or abs(a[i][c]) < abs(a[piv][c])):
                piv = i
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        while True:
            done = True
            for i in range(r + 1, m):
                if a[i][c] != 0:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    if a[i][c] != 0:
                        a[r], a[i] = a[i], a[r]
                        done = False
            if done:
                break
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
        for i in range(r):
            q = a[i][c] // a[r][c]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == m:
            break
    return tuple(tuple(row) for row in a[:r] if any(row))


def integer_kernel(a: Sequence[Sequence[int]]) -> IntMatrix:
    """Basis of {x in Z^n : a x = 0}, saturated (= Z^n cap ker_Q)."""
    m = len(a)
    n = len(a[0]) if m else 0
    if m == 0:
        return identity_matrix(n)
    snf = smith_normal_form(a)
    rank = len([x for x in snf.diagonal() if x != 0])
    cols = transpose(snf.v)
    return tuple(cols[j] for j in range(rank, n))


# ---------------------------------------------------------------------------
# Rational Gaussian elimination helpers
# ---------------------------------------------------------------------------

def rref(rows: Sequence[Sequence]) -> tuple[tuple[Vec, ...], tuple[int, ...]]:
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    a = [[Fraction(x) for x in row] for row in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    pivots = []
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if a[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return tuple(tuple(row) for row in a[:r]), tuple(pivots)


def rational_rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[0])


def nullspace(rows: Sequence[Sequence]) -> tuple[Vec, ...]:
    """Basis of {x : rows . x = 0}, deterministic (free-variable form)."""
    if not rows:
        raise ValueError("ambient dimension unknown for empty matrix")
    n = len(rows[0])
    red, pivots = rref(rows)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for c in free:
        x = [Fraction(0)] * n
        x[c] = Fraction(1)
        for r, pc in enumerate(pivots):
            x[pc] = -red[r][c]
        basis.append(tuple(x))
    return tuple(basis)


def solve_unique(rows: Sequence[Sequence], rhs: Sequence) -> Vec | None:
    """Unique exact solution of rows . x = rhs, or None if inconsistent.

    Raises if the system is underdetermined.
    """
    n = len(rows[0]) if rows else 0
    aug = [list(row) + [Fraction(r)] for row, r in zip(rows, rhs)]
    red, pivots = rref(aug)
    for row in red:
        if all(x == 0 for x in row[:-1]) and row[-1] != 0:
            return None
    if len([p for p in pivots if p < n]) < n:
        raise ValueError("underdetermined system")
    x = [Fraction(0)] * n
    for r, pc in enumerate(pivots):
        if pc < n:
            x[pc] = red[r][-1]
    return tuple(x)


# ---------------------------------------------------------------------------
# Lattices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Lattice:
    """Finitely generated subgroup of Q^n, stored as den and HNF of den*L.

    Equality is syntactic: the representation is canonical.
    """

    ambient: int
    den: int
    rows: IntMatrix

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], ambient: int) -> "Lattice":
        fr = [[Fraction(x) for x in row] for row in rows]
        for row in fr:
            if len(row) != ambient:
                raise ValueError("row length != ambient rank")
        dens = [f.denominator for row in fr for f in row]
        den = math.lcm(*dens) if dens else 1
        int_rows = [[int(f * den) for f in row] for row in fr]
        h = hermite_normal_form(int_rows)
        g = den
        for row in h:
            for x in row:
                g = math.gcd(g, abs(x))
        if h and g > 1:
            den //= g
            h = tuple(tuple(x // g for x in row) for row in h)
        if not h:
            den = 1
        return cls(ambient, den, h)

    @classmethod
    def standard(cls, n: int) -> "Lattice":
        return cls(n, 1, identity_matrix(n))

    @property
    def rank(self) -> int:
        return len(self.rows)

    def basis(self) -> tuple[Vec, ...]:
        return tuple(tuple(Fraction(x, self.den) for x in row) for row in self.rows)

    def _pivot_cols(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(row) if x != 0) for row in self.rows)

    def contains(self, v: Sequence) -> bool:
        w = [Fraction(x) * self.den for x in v]
        if len(w) != self.ambient:
            raise ValueError("dimension mismatch")
        for row, c in zip(self.rows, self._pivot_cols()):
            if w[c] == 0:
                continue
            q = w[c] / row[c]
            if q.denominator != 1:
                return False
            w = [x - q * y for x, y in zip(w, row)]
        return all(x == 0 for x in w)

    def reduce(self, v: Sequence) -> Vec:
        """Canonical representative of v modulo this lattice (full-rank use)."""
        w = [Fraction(x) for x in v]
        for row, c in zip(self.rows, self._pivot_cols()):
            q = (w[c] * self.den / row[c]).__floor__()
            if q:
                w = [x - Fraction(q * y, self.den) for x, y in zip(w, row)]
        return tuple(w)

    def coordinates(self, v: Sequence) -> Vec:
        """Coordinates of v in this lattice's basis (v must lie in the span)."""
        sol = solve_unique(transpose(self.basis()), v)
        if sol is None:
            raise ValueError("vector not in lattice span")
        return sol


def lattice_index(sub: Lattice, sup: Lattice):
    """[sup : sub]; math.inf when the ranks differ; error if sub is no sublattice."""
    if sub.ambient != sup.ambient:
        raise ValueError("ambient ranks differ")
    for row in sub.basis():
        if not sup.contains(row):
            raise ValueError("not a sublattice")
    if sub.rank < sup.rank:
        return math.inf
    coords = []
    for row in sub.basis():
        c = sup.coordinates(row)
        assert all(x.denominator == 1 for x in c)
        coords.append([int(x) for x in c])
    divisors = elementary_divisors(coords)
    idx = 1
    for d in divisors:
        idx *= abs(d)
    return idx


def lattice_plus_subspace_intersect(u_rows: Sequence[Sequence], lat: Lattice,
                                    v0_rows: Sequence[Sequence]) -> Lattice:
    """Basis of U cap (lat + V0) where U = span(u_rows), V0 = span(v0_rows).

    The intersection must be discrete (U cap V0 = 0), which holds in every
    realizable face pattern; otherwise ValueError is raised.
    """
    n = lat.ambient
    if lat.rank != n:
        raise ValueError("lattice must be full rank")
    u_rows = [vec(r) for r in u_rows if any(Fraction(x) != 0 for x in r)]
    if not u_rows:
        return Lattice.from_rows([], n)
    v0_rows = [vec(r) for r in v0_rows if any(Fraction(x) != 0 for x in r)]
    if v0_rows:
        f_rows = nullspace(v0_rows)
    else:
        f_rows = tuple(vec(r) for r in identity_matrix(n))
    if not f_rows:
        raise ValueError("intersection is not discrete")
    # m[i][j] = f_i . u_j maps U-coordinates into Q^k modulo F(lat)
    m = [[dot(f, u) for u in u_rows] for f in f_rows]
    if nullspace(m):
        raise ValueError("intersection is not discrete")
    img = Lattice.from_rows([mat_vec(f_rows, b) for b in lat.basis()], len(f_rows))
    # condition on u: coordinates of (M u) in img's basis are integral
    bt = transpose(img.basis())
    a = [solve_unique(bt, col) for col in transpose(m)]
    a_cols = [c for c in a]  # a_cols[j] = img-coordinates of M e_j
    a_mat = transpose(a_cols)
    # integer points of the column space of a_mat
    den = math.lcm(*(x.denominator for row in a_mat for x in row)) if a_mat else 1
    a_int = [[int(x * den) for x in row] for row in a_mat]
    left_null = nullspace(transpose(a_int)) if a_int else ()
    k = len(a_mat)
    if left_null:
        e_den = math.lcm(*(x.denominator for row in left_null for x in row))
        e_int = [[int(x * e_den) for x in row] for row in left_null]
        w_basis = integer_kernel(e_int)
    else:
        w_basis = identity_matrix(k)
    out = []
    for w in w_basis:
        uc = solve_unique(a_mat, w)
        assert uc is not None
        x = [Fraction(0)] * n
        for c, u in zip(uc, u_rows):
            x = [xi + c * ui for xi, ui in zip(x, u)]
        out.append(tuple(x))
    return Lattice.from_rows(out, n)
