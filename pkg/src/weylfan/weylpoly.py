"""Weyl polytopes Conv(W(a)), their parabolic quotients P cap C_K-bar,
face lattices, and combinatorial checks (simplicity, cube equivalence).

A Frame fixes the coordinates for one lattice mode:

  ROOT mode    polytope in root coordinates (M = root lattice),
               normals in coweight coordinates (N = coweight lattice = Z^n);
  WEIGHT mode  polytope in weight coordinates (M = weight lattice),
               normals in coroot coordinates (N = coroot lattice = Z^n).

In both frames the N-lattice is the standard Z^n and the M/N pairing is the
plain dot product, so every downstream computation is mode-agnostic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .exactlat import (
    IntMatrix,
    IntVec,
    Vec,
    dot,
    identity_matrix,
    mat_mul,
    mat_vec,
    primitive_direction,
    rational_rank,
    solve_unique,
    transpose,
    vec,
    vec_sub,
)
from .rootsys import ParabolicSubgroup, RootSystem, WeylElement, enumerate_group

ROOT = "root"
WEIGHT = "weight"


class Frame:
    """Exact coordinate frame for one root system and lattice mode."""

    def __init__(self, rs: RootSystem, mode: str = ROOT):
        if mode not in (ROOT, WEIGHT):
            raise ValueError(f"unknown lattice mode {mode!r}")
        self.rs = rs
        self.mode = mode
        self.n = rs.rank
        c = rs.cartan
        n = self.n
        if mode == ROOT:
            self._root_m = identity_matrix(n)
            self._coroot_n = c
        else:
            self._root_m = transpose(c)
            self._coroot_n = identity_matrix(n)
        self._coweight_n = transpose(_invert(self._root_m))
        self._mgens = tuple(
            tuple(tuple(int(r == s) - self._root_m[i][r] * self._coroot_n[i][s] for s in range(n))
                  for r in range(n))
            for i in range(n))
        self._ngens = tuple(
            tuple(tuple(int(r == s) - self._coroot_n[i][r] * self._root_m[i][s] for s in range(n))
                  for r in range(n))
            for i in range(n))
        self._groups: dict[frozenset, ParabolicSubgroup] = {}

    def root_m(self, i: int) -> IntVec:
        return self._root_m[i - 1]

    def coroot_n(self, i: int) -> IntVec:
        return self._coroot_n[i - 1]

    def coweight_n(self, j: int) -> Vec:
        return self._coweight_n[j - 1]

    def pair_coroot(self, x: Sequence, k: int) -> Fraction:
        return dot(x, self.coroot_n(k))

    def pair_coweight(self, x: Sequence, j: int) -> Fraction:
        return dot(x, self.coweight_n(j))

    def group(self, k: Iterable[int] | None = None) -> ParabolicSubgroup:
        kset = frozenset(range(1, self.n + 1)) if k is None else frozenset(int(i) for i in k)
        if kset not in self._groups:
            ids = sorted(kset)
            els = enumerate_group([self._ngens[i - 1] for i in ids],
                                  [self._mgens[i - 1] for i in ids], ids, self.n)
            self._groups[kset] = ParabolicSubgroup(kset, els)
        return self._groups[kset]

    def positive_roots_nm(self) -> tuple[tuple[Vec, Vec], ...]:
        """(root in M-coords, coroot in N-coords) pairs for R+, frame coords."""
        n = self.n
        simple = [(vec(self._root_m[i]), vec(self._coroot_n[i])) for i in range(n)]
        seen = set(simple)
        frontier = list(simple)
        while frontier:
            nxt = []
            for root, coroot in frontier:
                for mg, ng in zip(self._mgens, self._ngens):
                    pair = (mat_vec(mg, root), mat_vec(ng, coroot))
                    if pair not in seen:
                        seen.add(pair)
                        nxt.append(pair)
            frontier = nxt
        # positivity: nonnegative coefficients in the simple-root basis
        rm = transpose(self._root_m)
        out = []
        for root, coroot in sorted(seen):
            coeffs = solve_unique(rm, root)
            assert coeffs is not None
            if all(x >= 0 for x in coeffs):
                out.append((root, coroot, coeffs))
        out.sort(key=lambda t: (sum(t[2]), t[2]))
        return tuple((root, coroot) for root, coroot, _ in out)

    def default_weight(self) -> IntVec:
        """Canonical regular point of the mode's M-lattice.

        ROOT: the sum of the positive roots; WEIGHT: the sum of the
        fundamental weights (all-ones in weight coordinates).
        """
        if self.mode == WEIGHT:
            return tuple(1 for _ in range(self.n))
        total = [0] * self.n
        for root, _ in self.positive_roots_nm():
            for j in range(self.n):
                total[j] += int(root[j])
        return tuple(total)

    def check_weight(self, a: Sequence) -> IntVec:
        av = [Fraction(x) for x in a]
        if len(av) != self.n or any(x.denominator != 1 for x in av):
            raise ValueError("weight not regular")
        ai = tuple(int(x) for x in av)
        if any(self.pair_coroot(ai, i) <= 0 for i in range(1, self.n + 1)):
            raise ValueError("weight not regular")
        return ai


def _invert(m: IntMatrix) -> tuple:
    """Exact inverse of a square integer matrix, as row tuples of Fractions."""
    n = len(m)
    cols = []
    for j in range(n):
        rhs = [Fraction(int(i == j)) for i in range(n)]
        col = solve_unique(m, rhs)
        assert col is not None
        cols.append(col)
    return tuple(zip(*[tuple(c) for c in cols]))


@lru_cache(maxsize=None)
def _frame_cache(rs: RootSystem, mode: str) -> Frame:
    return Frame(rs, mode)


def get_frame(rs: RootSystem, mode: str = ROOT) -> Frame:
    return _frame_cache(rs, mode)


@dataclass(frozen=True)
class Facet:
    """Inward halfspace <x, normal> >= offset supporting one facet."""

    normal: IntVec
    offset: Fraction
    i: int
    coset_word: tuple[int, ...]


@dataclass(frozen=True)
class WeylPolytope:
    frame: Frame
    a: IntVec
    vertices: tuple[tuple[WeylElement, Vec], ...]
    facets: tuple[Facet, ...]

    @property
    def rank(self) -> int:
        return self.frame.n

    def vertex_points(self) -> tuple[Vec, ...]:
        return tuple(v for _, v in self.vertices)

    def tight_facets(self, point: Sequence) -> tuple[int, ...]:
        p = vec(point)
        return tuple(idx for idx, f in enumerate(self.facets) if dot(p, f.normal) == f.offset)

    def contains(self, point: Sequence) -> bool:
        p = vec(point)
        return all(dot(p, f.normal) >= f.offset for f in self.facets)


def weyl_polytope(rs: RootSystem, a: Sequence | None = None, mode: str = ROOT) -> WeylPolytope:
    """Conv(W(a)) with exact vertex map and facet halfspaces."""
    frame = get_frame(rs, mode)
    ai = frame.check_weight(a if a is not None else frame.default_weight())
    grp = frame.group()
    verts = []
    seen = set()
    for el in grp.elements:
        p = el.apply_m(ai)
        assert p not in seen, "regular weight must have a free orbit"
        seen.add(p)
        verts.append((el, vec(p)))
    facets = {}
    for i in range(1, frame.n + 1):
        base = tuple(-x for x in frame.coweight_n(i))
        for el in grp.elements:
            normal = primitive_direction(el.apply_n(base))
            offset = dot(el.apply_m(ai), normal)
            key = (normal, offset)
            if key not in facets:
                facets[key] = Facet(normal, offset, i, el.word)
    ordered = tuple(facets[k] for k in sorted(facets, key=lambda k: (k[0], k[1])))
    poly = WeylPolytope(frame, ai, tuple(verts), ordered)
    for _, v in poly.vertices:
        assert poly.contains(v)
    return poly


# ---------------------------------------------------------------------------
# Face lattice
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FaceData:
    i_set: frozenset[int]
    coset_word: tuple[int, ...]
    dim: int
    vertices: tuple[Vec, ...]


def face_lattice(p: WeylPolytope) -> dict[tuple[frozenset[int], tuple[int, ...]], FaceData]:
    """All proper faces of P, indexed by (I, shortlex-min coset rep of s W_I).

    The face for (I, s) is s(Conv(W_I(a))), of dimension |I|; the identity
    coset gives the dominant face.
    """
    frame = p.frame
    n = frame.n
    grp = frame.group()
    out: dict[tuple[frozenset[int], tuple[int, ...]], FaceData] = {}
    for r in range(n):
        for i_tuple in itertools.combinations(range(1, n + 1), r):
            i_set = frozenset(i_tuple)
            sub = frame.group(i_set)
            sub_mats = [el.nmat for el in sub.elements]
            orbit = sorted({el.apply_m(p.a) for el in sub.elements})
            done = set()
            for el in grp.elements:
                if el.nmat in done:
                    continue
                for um in sub_mats:
                    done.add(mat_mul(el.nmat, um))
                verts = tuple(sorted(mat_vec(el.mmat, v) for v in orbit))
                face = FaceData(i_set, el.word, r, verts)
                assert _affine_dim(verts) == r
                out[(i_set, el.word)] = face
    # distinctness of all faces (Corollary: the correspondence is one-to-one)
    seen = {}
    for key, face in out.items():
        assert face.vertices not in seen, (key, seen[face.vertices])
        seen[face.vertices] = key
    return out


def _affine_dim(points: Sequence[Sequence]) -> int:
    if len(points) <= 1:
        return 0
    base = points[0]
    return rational_rank([vec_sub(q, base) for q in points[1:]])


def face_lattice_json(p: WeylPolytope) -> dict:
    faces = face_lattice(p)
    items = []
    for (i_set, word), face in sorted(faces.items(), key=lambda kv: (len(kv[0][0]), sorted(kv[0][0]), kv[0][1])):
        items.append({
            "I": sorted(i_set),
            "coset_word": list(word),
            "dim": face.dim,
            "vertices": [[str(x) for x in v] for v in face.vertices],
        })
    return {"faces": items}


# ---------------------------------------------------------------------------
# Quotient polytopes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Halfspace:
    normal: IntVec
    offset: Fraction
    kind: tuple  # ("wall", k) or ("facet", i, coset_word)


@dataclass(frozen=True)
class HPolytope:
    """Halfspace description with cached exact vertices and tight sets."""

    rank: int
    halfspaces: tuple[Halfspace, ...]
    vertices: tuple[Vec, ...]
    tight: tuple[frozenset[int], ...]
    facet_idx: tuple[int, ...]

    def tight_facets(self, point: Sequence) -> tuple[int, ...]:
        p = vec(point)
        return tuple(i for i in self.facet_idx
                     if dot(p, self.halfspaces[i].normal) == self.halfspaces[i].offset)

    def contains(self, point: Sequence) -> bool:
        p = vec(point)
        return all(dot(p, h.normal) >= h.offset for h in self.halfspaces)

    def facet_halfspaces(self) -> tuple[Halfspace, ...]:
        return tuple(self.halfspaces[i] for i in self.facet_idx)


def _enumerate_vertices(halfspaces: Sequence[Halfspace], n: int) -> tuple[Vec, ...]:
    points = set()
    for combo in itertools.combinations(range(len(halfspaces)), n):
        rows = [halfspaces[i].normal for i in combo]
        rhs = [halfspaces[i].offset for i in combo]
        try:
            x = solve_unique(rows, rhs)
        except ValueError:
            continue
        if x is None:
            continue
        if all(dot(x, h.normal) >= h.offset for h in halfspaces):
            points.add(x)
    return tuple(sorted(points))


def hpolytope_from_halfspaces(pairs: Sequence[tuple[Sequence[int], Fraction]], n: int) -> HPolytope:
    """HPolytope from raw (normal, offset) inward halfspaces (test/CLI helper)."""
    halves = [Halfspace(tuple(int(x) for x in normal), Fraction(offset), ("raw", i))
              for i, (normal, offset) in enumerate(pairs)]
    verts = _enumerate_vertices(halves, n)
    assert verts, "polytope is empty"
    tight = tuple(
        frozenset(i for i, h in enumerate(halves) if dot(v, h.normal) == h.offset)
        for v in verts)
    facet_idx = tuple(
        i for i in range(len(halves))
        if _affine_dim([v for v, t in zip(verts, tight) if i in t] or [verts[0]]) == n - 1
        and any(i in t for t in tight))
    return HPolytope(n, tuple(halves), verts, tight, facet_idx)


def quotient_polytope(p: WeylPolytope, k: Iterable[int]) -> HPolytope:
    """P cap C_K-bar as an H-polytope with brute-force exact vertices."""
    frame = p.frame
    n = frame.n
    kset = sorted(frozenset(int(i) for i in k))
    halves: list[Halfspace] = []
    seen = set()
    for kk in kset:
        normal = primitive_direction(frame.coroot_n(kk))
        key = (normal, Fraction(0))
        if key not in seen:
            seen.add(key)
            halves.append(Halfspace(normal, Fraction(0), ("wall", kk)))
    for f in p.facets:
        key = (f.normal, f.offset)
        if key not in seen:
            seen.add(key)
            halves.append(Halfspace(f.normal, f.offset, ("facet", f.i, f.coset_word)))
    verts = _enumerate_vertices(halves, n)
    assert verts, "quotient polytope is empty"
    assert _affine_dim(verts) == n, "quotient polytope is not full-dimensional"
    tight = tuple(
        frozenset(i for i, h in enumerate(halves) if dot(v, h.normal) == h.offset)
        for v in verts)
    # keep only halfspaces meeting the region; facets are those of dimension n-1
    active = sorted({i for t in tight for i in t})
    facet_idx = []
    for i in active:
        pts = [v for v, t in zip(verts, tight) if i in t]
        if pts and _affine_dim(pts) == n - 1:
            facet_idx.append(i)
    kept = [i for i in active]
    remap = {old: new for new, old in enumerate(kept)}
    halves_kept = tuple(halves[i] for i in kept)
    tight_kept = tuple(frozenset(remap[i] for i in t if i in remap) for t in tight)
    facet_kept = tuple(remap[i] for i in facet_idx)
    return HPolytope(n, halves_kept, verts, tight_kept, facet_kept)


def is_simple(obj) -> tuple[bool, Vec | None]:
    """True iff every vertex lies on exactly n facets; else (False, witness)."""
    if isinstance(obj, WeylPolytope):
        n = obj.rank
        for _, v in obj.vertices:
            if len(obj.tight_facets(v)) != n:
                return False, v
        return True, None
    n = obj.rank
    for v in obj.vertices:
        tight = [i for i in obj.facet_idx
                 if dot(v, obj.halfspaces[i].normal) == obj.halfspaces[i].offset]
        if len(tight) != n:
            return False, v
    return True, None


# ---------------------------------------------------------------------------
# Faces of an H-polytope and the cube check
# ---------------------------------------------------------------------------

def hpolytope_faces(q: HPolytope) -> list[tuple[frozenset[int], int]]:
    """Proper nonempty faces as (vertex-index set, dimension), sorted."""
    vsets = {frozenset(i for i, v in enumerate(q.vertices) if fi in q.tight[i])
             for fi in q.facet_idx}
    faces = set(vsets)
    frontier = set(vsets)
    while frontier:
        nxt = set()
        for a in frontier:
            for b in vsets:
                c = a & b
                if c and c not in faces:
                    faces.add(c)
                    nxt.add(c)
        frontier = nxt
    out = []
    for f in faces:
        pts = [q.vertices[i] for i in sorted(f)]
        out.append((f, _affine_dim(pts)))
    out.sort(key=lambda t: (t[1], sorted(t[0])))
    return out


def cube_check(p: WeylPolytope) -> bool:
    """Face poset of P cap C-bar versus the standard n-cube.

    Uses the explicit correspondence sending the face cut out by the walls
    H_i (i in I) and the dominant facets F_j (j in J) to the cube face with
    {0} in the I slots and {1} in the J slots.
    """
    n = p.rank
    q = quotient_polytope(p, range(1, n + 1))
    wall_of = {}
    dom_of = {}
    for idx in q.facet_idx:
        h = q.halfspaces[idx]
        if h.kind[0] == "wall":
            wall_of[h.kind[1]] = idx
        elif h.kind[0] == "facet" and h.kind[2] == ():
            dom_of[h.kind[1]] = idx
    if set(wall_of) != set(range(1, n + 1)) or set(dom_of) != set(range(1, n + 1)):
        return False
    if len(q.facet_idx) != 2 * n:
        return False
    assigned = {}
    for i_tuple in _subsets(range(1, n + 1)):
        i_set = frozenset(i_tuple)
        for j_tuple in _subsets(sorted(set(range(1, n + 1)) - i_set)):
            j_set = frozenset(j_tuple)
            need = {wall_of[i] for i in i_set} | {dom_of[j] for j in j_set}
            members = frozenset(vi for vi in range(len(q.vertices)) if need <= q.tight[vi])
            if not members:
                return False
            pts = [q.vertices[i] for i in sorted(members)]
            if _affine_dim(pts) != n - len(i_set) - len(j_set):
                return False
            key = members
            if key in assigned:
                return False
            assigned[key] = (i_set, j_set)
    faces = hpolytope_faces(q)
    if len(faces) + 1 != 3 ** n:  # proper faces plus the polytope itself
        return False
    for f, _ in faces:
        if f not in assigned:
            return False
    # order reversal: containment of faces matches containment of index pairs
    keys = list(assigned)
    for f1 in keys:
        for f2 in keys:
            (i1, j1), (i2, j2) = assigned[f1], assigned[f2]
            if (f1 <= f2) != (i1 >= i2 and j1 >= j2):
                return False
    return True


def _subsets(items):
    items = list(items)
    for r in range(len(items) + 1):
        yield from itertools.combinations(items, r)
