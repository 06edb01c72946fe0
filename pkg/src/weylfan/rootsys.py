"""Root systems of types A-G: Cartan data, positive roots, Weyl groups,
fundamental-domain reduction.

Coordinates are fixed so that the fundamental coweights are the standard
basis on the N side; the simple coroot alpha_i^vee is then the i-th row of
the Cartan matrix, and M-side vectors carry simple-root coordinates.
Indices in the public API are 1-based, matching [n] = {1, ..., n}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .exactlat import (
    IntMatrix,
    IntVec,
    Vec,
    det_int,
    dot,
    identity_matrix,
    mat_mul,
    mat_vec,
    transpose,
)

Word = tuple[int, ...]


def _chain(n: int) -> list[list[int]]:
    c = [[0] * n for _ in range(n)]
    for i in range(n):
        c[i][i] = 2
        if i + 1 < n:
            c[i][i + 1] = -1
            c[i + 1][i] = -1
    return c


def _cartan_matrix(family: str, rank: int) -> IntMatrix:
    n = rank
    if family == "A" and n >= 1:
        c = _chain(n)
    elif family == "B" and n >= 2:
        c = _chain(n)
        c[n - 1][n - 2] = -2
    elif family == "C" and n >= 2:
        c = _chain(n)
        c[n - 2][n - 1] = -2
    elif family == "D" and n >= 4:
        c = _chain(n - 1)
        for row in c:
            row.append(0)
        c.append([0] * n)
        c[n - 1][n - 1] = 2
        c[n - 2][n - 1] = 0
        c[n - 1][n - 2] = 0
        c[n - 3][n - 1] = -1
        c[n - 1][n - 3] = -1
        c[n - 2][n - 3] = -1
        c[n - 3][n - 2] = -1
    elif family == "E" and n in (6, 7, 8):
        edges = [(1, 3), (3, 4), (4, 5), (5, 6), (2, 4)]
        if n >= 7:
            edges.append((6, 7))
        if n == 8:
            edges.append((7, 8))
        c = [[0] * n for _ in range(n)]
        for i in range(n):
            c[i][i] = 2
        for a, b in edges:
            c[a - 1][b - 1] = -1
            c[b - 1][a - 1] = -1
    elif family == "F" and n == 4:
        c = _chain(4)
        c[2][1] = -2
    elif family == "G" and n == 2:
        c = [[2, -3], [-1, 2]]
    else:
        raise ValueError(f"unknown type {family}{rank}")
    return tuple(tuple(row) for row in c)


@dataclass(frozen=True)
class RootSystem:
    """Irreducible root system in Bourbaki numbering."""

    family: str
    rank: int
    cartan: IntMatrix

    def __str__(self):
        return f"{self.family}{self.rank}"

    def coroot(self, i: int) -> IntVec:
        """alpha_i^vee in coweight coordinates (i is 1-based)."""
        return self.cartan[i - 1]

    def cartan_det(self) -> int:
        return det_int(self.cartan)


def build_root_system(family: str, rank: int) -> RootSystem:
    family = family.upper()
    return RootSystem(family, rank, _cartan_matrix(family, rank))


@dataclass(frozen=True)
class WeylElement:
    """Group element as a word in simple reflections plus its exact matrices.

    nmat acts on N-side (coweight) coordinates, mmat on M-side (root)
    coordinates; equality and hashing go through nmat (words are provenance).
    """

    word: Word
    nmat: IntMatrix
    mmat: IntMatrix

    def __eq__(self, other):
        return isinstance(other, WeylElement) and self.nmat == other.nmat

    def __hash__(self):
        return hash(self.nmat)

    def apply_n(self, v: Sequence) -> tuple:
        return mat_vec(self.nmat, v)

    def apply_m(self, v: Sequence) -> tuple:
        return mat_vec(self.mmat, v)

    @property
    def length_hint(self) -> int:
        return len(self.word)


def _reflection_matrices(cartan: IntMatrix):
    """Per-generator (nmat, mmat) pairs.

    s_i on N coordinates: v -> v - v_i * alpha_i^vee;
    s_i on M coordinates: x -> x - <x, alpha_i^vee> * alpha_i.
    """
    n = len(cartan)
    ngens = []
    mgens = []
    for i in range(n):
        nmat = tuple(tuple(int(r == c) - (cartan[i][r] if c == i else 0) for c in range(n)) for r in range(n))
        mmat = tuple(tuple(int(r == c) - (cartan[i][c] if r == i else 0) for c in range(n)) for r in range(n))
        ngens.append(nmat)
        mgens.append(mmat)
    return tuple(ngens), tuple(mgens)


def enumerate_group(ngens: Sequence[IntMatrix], mgens: Sequence[IntMatrix],
                    gen_ids: Sequence[int], n: int) -> tuple[WeylElement, ...]:
    """Breadth-first closure of the generators; shortlex-minimal words.

    gen_ids are the 1-based labels attached to the provided generators and
    n is the ambient rank (needed when there are no generators at all).
    """
    ident = identity_matrix(n)
    elements = [WeylElement((), ident, ident)]
    seen = {ident}
    frontier = [elements[0]]
    while frontier:
        nxt = []
        for el in frontier:
            for gid, ng, mg in zip(gen_ids, ngens, mgens):
                nmat = mat_mul(el.nmat, ng)
                if nmat in seen:
                    continue
                seen.add(nmat)
                new = WeylElement(el.word + (gid,), nmat, mat_mul(el.mmat, mg))
                elements.append(new)
                nxt.append(new)
        frontier = nxt
    return tuple(elements)


@dataclass(frozen=True)
class ParabolicSubgroup:
    """W_K with its complete element list in deterministic shortlex order."""

    k: frozenset[int]
    elements: tuple[WeylElement, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def nmats(self) -> frozenset[IntMatrix]:
        return frozenset(el.nmat for el in self.elements)

    def __contains__(self, el: WeylElement) -> bool:
        return el.nmat in self.nmats()


def weyl_group(rs: RootSystem, k: Iterable[int] | None = None) -> ParabolicSubgroup:
    """Enumerate W_K (K 1-based; None means the full group)."""
    if k is None:
        kset = frozenset(range(1, rs.rank + 1))
    else:
        kset = frozenset(int(i) for i in k)
    for i in kset:
        if not 1 <= i <= rs.rank:
            raise ValueError(f"generator index {i} out of range")
    ngens, mgens = _reflection_matrices(rs.cartan)
    ids = sorted(kset)
    els = enumerate_group([ngens[i - 1] for i in ids], [mgens[i - 1] for i in ids], ids, rs.rank)
    return ParabolicSubgroup(kset, els)


def simple_reflection(rs: RootSystem, i: int) -> WeylElement:
    ngens, mgens = _reflection_matrices(rs.cartan)
    return WeylElement((i,), ngens[i - 1], mgens[i - 1])


def positive_roots_with_coroots(rs: RootSystem) -> tuple[tuple[IntVec, IntVec], ...]:
    """(root in root coords, coroot in coweight coords) pairs, sorted by height."""
    ngens, mgens = _reflection_matrices(rs.cartan)
    n = rs.rank
    simple = [(tuple(int(i == j) for j in range(n)), rs.cartan[i]) for i in range(n)]
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for root, coroot in frontier:
            for ng, mg in zip(ngens, mgens):
                pair = (tuple(int(x) for x in mat_vec(mg, root)),
                        tuple(int(x) for x in mat_vec(ng, coroot)))
                if pair not in seen:
                    seen.add(pair)
                    nxt.append(pair)
        frontier = nxt
    pos = [p for p in seen if all(c >= 0 for c in p[0])]
    pos.sort(key=lambda p: (sum(p[0]), p[0]))
    return tuple(pos)


def positive_roots(rs: RootSystem) -> tuple[IntVec, ...]:
    return tuple(root for root, _ in positive_roots_with_coroots(rs))


def highest_root(rs: RootSystem) -> IntVec:
    """The unique positive root dominating all others coefficientwise."""
    pos = positive_roots(rs)
    top = [r for r in pos if all(all(a >= b for a, b in zip(r, s)) for s in pos)]
    assert len(top) == 1
    return top[0]


def pair_with_coroot(rs: RootSystem, v: Sequence, i: int) -> Fraction:
    """<v, alpha_i^vee> for an M-side vector v."""
    return dot(v, rs.coroot(i))


def pair_with_root(v: Sequence, i: int) -> Fraction:
    """<alpha_i, v> for an N-side vector v (alpha_i is the i-th dual basis form)."""
    return Fraction(v[i - 1])


def to_fundamental_domain(rs: RootSystem, v: Sequence, k: Iterable[int] | None = None,
                          side: str = "m") -> tuple[Vec, WeylElement]:
    """Reduce v into the closed W_K-chamber; returns (v_dom, w) with w(v) = v_dom.

    side "m" reduces an M-side vector (pairings against coroots), side "n" an
    N-side vector (pairings against roots). Repeatedly reflects at the
    smallest-index violated wall; terminates because each step moves v closer
    to the dominant cone.
    """
    if k is None:
        kset = sorted(range(1, rs.rank + 1))
    else:
        kset = sorted(int(i) for i in k)
    ngens, mgens = _reflection_matrices(rs.cartan)
    cur = tuple(Fraction(x) for x in v)
    word: list[int] = []
    while True:
        for i in kset:
            val = pair_with_coroot(rs, cur, i) if side == "m" else pair_with_root(cur, i)
            if val < 0:
                cur = mat_vec(mgens[i - 1] if side == "m" else ngens[i - 1], cur)
                word.append(i)
                break
        else:
            break
    n = rs.rank
    nmat, mmat = identity_matrix(n), identity_matrix(n)
    for i in reversed(word):
        nmat = mat_mul(nmat, ngens[i - 1])
        mmat = mat_mul(mmat, mgens[i - 1])
    w = WeylElement(tuple(reversed(word)), nmat, mmat)
    assert (w.apply_m(v) if side == "m" else w.apply_n(v)) == cur
    return cur, w


def stabilizer(rs: RootSystem, v: Sequence, side: str = "m") -> ParabolicSubgroup:
    """W_I for I = {i : the i-th wall pairing vanishes}; v must be dominant."""
    pairings = [
        pair_with_coroot(rs, v, i) if side == "m" else pair_with_root(v, i)
        for i in range(1, rs.rank + 1)
    ]
    if any(p < 0 for p in pairings):
        raise ValueError("not dominant")
    return weyl_group(rs, [i + 1 for i, p in enumerate(pairings) if p == 0])
