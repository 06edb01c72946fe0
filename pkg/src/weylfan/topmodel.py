"""Finite simplicial models of the toric identification spaces.

Spaces built here realize (S_N x P)/~ style quotients: a triangulated torus
is producted with a triangulated polytope and vertices are collapsed into
exact equivalence classes. Safety checks guard the collapse: a same-class
vertex pair inside a simplex must span a geometrically collapsed edge, and
distinct simplices with one image must be pointwise identified; failures
trigger barycentric subdivision retries.

Torus models: a staircase-triangulated m-grid for the plain subtorus
relations, and the affine-Weyl alcove decomposition modulo N (invariant
under the Weyl matrices) for the relations that also fold by a finite
group, where a non-invariant triangulation could not quotient simplicially.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .exactlat import (
    IntVec,
    Lattice,
    Vec,
    dot,
    identity_matrix,
    mat_vec,
    nullspace,
    primitive_direction,
    solve_unique,
    vec,
    vec_scale,
    vec_sub,
)
from .rootsys import RootSystem
from .weylpoly import (
    ROOT,
    Frame,
    HPolytope,
    WeylPolytope,
    face_lattice,
    get_frame,
    hpolytope_faces,
    quotient_polytope,
    weyl_polytope,
)

XP = "XP"
XP_MOD_WK = "XP_MOD_WK"
X_QUOTIENT_POLYTOPE = "X_QUOTIENT_POLYTOPE"

_GRID_CANDIDATES = (3, 4, 5, 6, 7, 8, 9, 10, 11, 12)
_ALCOVE_CANDIDATES = (2, 3)
_WALK_BOUND = 100000


class SubdivisionError(RuntimeError):
    pass


class DeskScaleError(RuntimeError):
    pass


class QuotientSafetyError(RuntimeError):
    pass


@dataclass(frozen=True)
class SpaceKind:
    tag: str
    k: frozenset[int] = frozenset()
    mode: str = ROOT


# ---------------------------------------------------------------------------
# Simplicial objects
# ---------------------------------------------------------------------------

@dataclass
class SimplicialObject:
    """Downward-closed simplicial complex with labeled vertices."""

    vertex_labels: tuple
    simplices: dict  # dim -> tuple of sorted vertex-id tuples
    meta: dict = field(default_factory=dict)

    @classmethod
    def from_maximal(cls, labels: Sequence, maximal: Iterable[tuple[int, ...]],
                     meta: dict | None = None) -> "SimplicialObject":
        by_dim: dict[int, set] = {}
        for simplex in maximal:
            s = tuple(sorted(set(simplex)))
            for r in range(1, len(s) + 1):
                level = by_dim.setdefault(r - 1, set())
                for sub in itertools.combinations(s, r):
                    level.add(sub)
        simplices = {d: tuple(sorted(by_dim[d])) for d in sorted(by_dim)}
        return cls(tuple(labels), simplices, meta or {})

    @property
    def dim(self) -> int:
        return max(self.simplices) if self.simplices else -1

    def counts(self) -> tuple[int, ...]:
        return tuple(len(self.simplices.get(d, ())) for d in range(self.dim + 1))

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * c for d, c in enumerate(self.counts()))

    def to_text(self) -> str:
        lines = [f"vertices {len(self.vertex_labels)}"]
        for i, label in enumerate(self.vertex_labels):
            lines.append(f"v{i}\t{label}")
        lines.append(f"simplices dim<= {self.dim}")
        for d in range(self.dim + 1):
            for s in self.simplices.get(d, ()):
                lines.append(" ".join(str(i) for i in s))
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "vertices": [str(label) for label in self.vertex_labels],
            "simplices": {str(d): [list(s) for s in self.simplices.get(d, ())]
                          for d in range(self.dim + 1)},
        }


# ---------------------------------------------------------------------------
# Geometric complexes with per-simplex lifts
# ---------------------------------------------------------------------------

@dataclass
class GeomComplex:
    """Delta-complex with exact vertex labels and per-simplex coordinate lifts.

    Labels are reduced mod 1 in the coordinates flagged by mod1; lifts keep
    the actual straight-simplex geometry (coherent within each simplex).
    """

    mod1: tuple[bool, ...]
    labels: list
    index: dict
    maxsimps: list  # each: tuple of (vid, lift Vec) slots

    @classmethod
    def empty(cls, mod1: Sequence[bool]) -> "GeomComplex":
        return cls(tuple(mod1), [], {}, [])

    def norm_label(self, point: Sequence) -> Vec:
        return tuple(Fraction(x) % 1 if flag else Fraction(x)
                     for x, flag in zip(point, self.mod1))

    def vertex_id(self, point: Sequence) -> int:
        label = self.norm_label(point)
        vid = self.index.get(label)
        if vid is None:
            vid = len(self.labels)
            self.labels.append(label)
            self.index[label] = vid
        return vid

    def add_simplex(self, lifts: Sequence[Sequence]) -> None:
        self.maxsimps.append(tuple((self.vertex_id(p), vec(p)) for p in lifts))

    def is_simplicial(self) -> bool:
        seen = set()
        for s in self.maxsimps:
            ids = tuple(sorted(v for v, _ in s))
            if len(set(ids)) != len(ids) or ids in seen:
                return False
            seen.add(ids)
        return True


def circle_complex(m: int) -> GeomComplex:
    gc = GeomComplex.empty((True,))
    for i in range(m):
        gc.add_simplex([(Fraction(i, m),), (Fraction(i + 1, m),)])
    return gc


def product_complex(a: GeomComplex, b: GeomComplex) -> GeomComplex:
    """Staircase triangulation of |a| x |b| (factors must be simplicial)."""
    out = GeomComplex.empty(a.mod1 + b.mod1)
    for sa in a.maxsimps:
        pa = sorted(sa, key=lambda t: t[0])
        assert len({v for v, _ in pa}) == len(pa), "product factor must be simplicial"
        for sb in b.maxsimps:
            pb = sorted(sb, key=lambda t: t[0])
            assert len({v for v, _ in pb}) == len(pb), "product factor must be simplicial"
            for path in _monotone_paths(len(pa) - 1, len(pb) - 1):
                out.add_simplex([pa[i][1] + pb[j][1] for i, j in path])
    return out


def _monotone_paths(p: int, q: int):
    """Monotone lattice paths from (0,0) to (p,q)."""
    def rec(i, j, acc):
        if i == p and j == q:
            yield acc
            return
        if i < p:
            yield from rec(i + 1, j, acc + ((i + 1, j),))
        if j < q:
            yield from rec(i, j + 1, acc + ((i, j + 1),))

    yield from rec(0, 0, ((0, 0),))


def barycentric_subdivision(gc: GeomComplex) -> GeomComplex:
    out = GeomComplex.empty(gc.mod1)
    for s in gc.maxsimps:
        k = len(s)
        lifts = [lift for _, lift in s]
        barys = {}
        for r in range(1, k + 1):
            for subset in itertools.combinations(range(k), r):
                total = lifts[subset[0]]
                for idx in subset[1:]:
                    total = tuple(x + y for x, y in zip(total, lifts[idx]))
                barys[frozenset(subset)] = vec_scale(Fraction(1, r), total)
        for perm in itertools.permutations(range(k)):
            chain = [frozenset(perm[:r]) for r in range(1, k + 1)]
            out.add_simplex([barys[f] for f in chain])
    return out


def map_affine(gc: GeomComplex, fn: Callable[[Vec], Vec], mod1: Sequence[bool]) -> GeomComplex:
    out = GeomComplex.empty(mod1)
    for s in gc.maxsimps:
        out.add_simplex([fn(lift) for _, lift in s])
    assert len(out.labels) == len(gc.labels), "affine map must be injective on vertices"
    return out


# ---------------------------------------------------------------------------
# Polytope complexes: cone over the barycentric subdivision of the boundary
# ---------------------------------------------------------------------------

def _order_complex_cone(vertex_coords: Sequence[Vec], faces: Sequence[tuple[frozenset[int], int]],
                        rank: int) -> GeomComplex:
    """Triangulate the solid polytope: apex at the vertex centroid over the
    order complex of the proper-face poset. Every face is a subcomplex."""
    n_coords = len(vertex_coords[0])
    gc = GeomComplex.empty((False,) * n_coords)
    barys = {}
    for fset, fdim in faces:
        pts = [vertex_coords[i] for i in sorted(fset)]
        total = pts[0]
        for p in pts[1:]:
            total = tuple(x + y for x, y in zip(total, p))
        barys[fset] = vec_scale(Fraction(1, len(pts)), total)
    apex_total = vertex_coords[0]
    for p in vertex_coords[1:]:
        apex_total = tuple(x + y for x, y in zip(apex_total, p))
    apex = vec_scale(Fraction(1, len(vertex_coords)), apex_total)
    by_dim: dict[int, list] = {}
    for fset, fdim in faces:
        by_dim.setdefault(fdim, []).append(fset)
    if rank == 0:
        raise ValueError("rank-0 polytope")

    def chains(face, fdim):
        if fdim == rank - 1:
            yield (face,)
            return
        for bigger in by_dim.get(fdim + 1, []):
            if face < bigger:
                for rest in chains(bigger, fdim + 1):
                    yield (face,) + rest

    for v in by_dim.get(0, []):
        for chain in chains(v, 0):
            gc.add_simplex([barys[f] for f in chain] + [apex])
    return gc


def weyl_polytope_complex(p: WeylPolytope) -> GeomComplex:
    verts = list(p.vertex_points())
    vindex = {v: i for i, v in enumerate(verts)}
    faces = []
    for face in face_lattice(p).values():
        faces.append((frozenset(vindex[v] for v in face.vertices), face.dim))
    return _order_complex_cone(verts, faces, p.rank)


def hpolytope_complex(q: HPolytope) -> GeomComplex:
    faces = hpolytope_faces(q)
    proper = [(f, d) for f, d in faces if d < q.rank]
    return _order_complex_cone(list(q.vertices), proper, q.rank)


# ---------------------------------------------------------------------------
# Torus models
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TorusModel:
    """Staircase-triangulated fundamental cube of N_R / N at grid pitch 1/m."""

    rank: int
    m: int
    complex: GeomComplex


def grid_torus(rank: int, m: int) -> TorusModel:
    if m < 1:
        raise ValueError("subdivision m must be >= 1")
    gc = circle_complex(m)
    for _ in range(rank - 1):
        gc = product_complex(gc, circle_complex(m))
    return TorusModel(rank, m, gc)


def alcove_torus(frame: Frame, rounds: int) -> GeomComplex:
    """Torus triangulated by affine-Weyl alcoves mod Z^n, barycentrically
    subdivided `rounds` times; invariant under all frame Weyl matrices."""
    n = frame.n
    pos = frame.positive_roots_nm()
    base = _fundamental_alcove_vertices(frame)
    start = tuple(base)
    seen = {}
    gc = GeomComplex.empty((True,) * n)

    def canon(verts):
        total = verts[0]
        for v in verts[1:]:
            total = tuple(x + y for x, y in zip(total, v))
        bary = vec_scale(Fraction(1, len(verts)), total)
        shift = tuple(x.__floor__() for x in bary)
        return tuple(sorted(tuple(x - s for x, s in zip(v, shift)) for v in verts))

    frontier = [start]
    seen[canon(start)] = True
    while frontier:
        nxt = []
        for alc in frontier:
            gc.add_simplex(list(alc))
            for omit in range(len(alc)):
                wall = _facet_wall(alc, omit, pos)
                reflected = tuple(
                    _affine_reflect(v, wall) if i == omit else v
                    for i, v in enumerate(alc))
                key = canon(reflected)
                if key not in seen:
                    seen[key] = True
                    nxt.append(key)
        frontier = nxt
    for _ in range(rounds):
        gc = barycentric_subdivision(gc)
    return gc


def _fundamental_alcove_vertices(frame: Frame) -> list[Vec]:
    n = frame.n
    pos = frame.positive_roots_nm()
    theta_idx = _highest_root_index(frame, pos)
    theta_m = pos[theta_idx][0]
    verts = [vec([0] * n)]
    for i in range(1, n + 1):
        cw = frame.coweight_n(i)
        c = dot(theta_m, cw)
        assert c >= 1
        verts.append(vec_scale(Fraction(1) / c, cw))
    return verts


def _highest_root_index(frame: Frame, pos) -> int:
    coeffs = []
    rm = tuple(zip(*[frame.root_m(i) for i in range(1, frame.n + 1)]))
    for root, _ in pos:
        c = solve_unique(rm, root)
        coeffs.append(c)
    best = None
    for i, c in enumerate(coeffs):
        if all(all(a >= b for a, b in zip(c, other)) for other in coeffs):
            best = i
    assert best is not None
    return best


def _facet_wall(alc, omit, pos):
    """The root hyperplane H_{alpha,k} through the facet opposite slot omit."""
    facet = [v for i, v in enumerate(alc) if i != omit]
    for root, coroot in pos:
        vals = {dot(root, v) for v in facet}
        if len(vals) == 1:
            k = vals.pop()
            if k.denominator == 1 and dot(root, alc[omit]) != k:
                return (root, coroot, int(k))
    raise AssertionError("alcove facet is not on a root hyperplane")


def _affine_reflect(x: Vec, wall) -> Vec:
    root, coroot, k = wall
    c = dot(root, x) - k
    return tuple(a - c * b for a, b in zip(x, coroot))


# ---------------------------------------------------------------------------
# Identification relations
# ---------------------------------------------------------------------------

@dataclass
class _Pattern:
    f_rows: tuple  # integer annihilator rows of the collapse span; () = collapse all
    lat: Lattice | None
    gmats: tuple


class FaceCollapseRelation:
    """(t, p) ~ (t', p) iff g(t) - t' lies in span(sigma_p) + Z^n for some g."""

    def __init__(self, nt: int, pattern_for_point: Callable[[Vec], _Pattern]):
        self.nt = nt
        self._pattern_fn = pattern_for_point
        self._patterns: dict[Vec, _Pattern] = {}

    def split(self, point: Sequence) -> tuple[Vec, Vec]:
        return vec(point[:self.nt]), vec(point[self.nt:])

    def pattern(self, p: Vec) -> _Pattern:
        pat = self._patterns.get(p)
        if pat is None:
            pat = self._pattern_fn(p)
            self._patterns[p] = pat
        return pat

    def class_key(self, label: Vec):
        t, p = self.split(label)
        pat = self.pattern(p)
        if not pat.f_rows:
            return (p, ())
        best = None
        for g in pat.gmats:
            y = pat.lat.reduce(mat_vec(pat.f_rows, mat_vec(g, t)))
            if best is None or y < best:
                best = y
        return (p, best)

    def edge_collapse_ok(self, lift1: Vec, lift2: Vec) -> bool:
        t1, p1 = self.split(lift1)
        t2, p2 = self.split(lift2)
        assert p1 == p2
        pat = self.pattern(p1)
        if not pat.f_rows:
            return True
        d = vec_sub(t2, t1)
        zero = tuple(Fraction(0) for _ in pat.f_rows)
        for g in pat.gmats:
            if mat_vec(pat.f_rows, mat_vec(g, d)) != zero:
                continue
            w = mat_vec(pat.f_rows, vec_sub(mat_vec(g, t1), t1))
            if pat.lat.reduce(w) == zero:
                return True
        return False

    def simplices_identified(self, lifts1: Sequence[Vec], lifts2: Sequence[Vec]) -> bool:
        ts1, ps1 = zip(*(self.split(l) for l in lifts1))
        ts2, ps2 = zip(*(self.split(l) for l in lifts2))
        if ps1 != ps2:
            return False
        total = ps1[0]
        for p in ps1[1:]:
            total = tuple(x + y for x, y in zip(total, p))
        pbar = vec_scale(Fraction(1, len(ps1)), total)
        pat = self.pattern(pbar)
        if not pat.f_rows:
            return True
        zero = tuple(Fraction(0) for _ in pat.f_rows)
        for g in pat.gmats:
            w0 = None
            ok = True
            for t1, t2 in zip(ts1, ts2):
                w = mat_vec(pat.f_rows, vec_sub(mat_vec(g, t1), t2))
                if w0 is None:
                    w0 = w
                elif w != w0:
                    ok = False
                    break
            if ok and pat.lat.reduce(w0) == zero:
                return True
        return False


@dataclass(frozen=True)
class AffineMap:
    linear: tuple
    shift: Vec

    def __call__(self, x: Sequence) -> Vec:
        return tuple(a + b for a, b in zip(mat_vec(self.linear, x), self.shift))

    def compose(self, other: "AffineMap") -> "AffineMap":
        from .exactlat import mat_mul

        lin = mat_mul(self.linear, other.linear)
        lin = tuple(tuple(Fraction(x) for x in row) for row in lin)
        return AffineMap(lin, self(other.shift))


class OrbitRelation:
    """Quotient by a finite group of exact affine transformations."""

    def __init__(self, maps: Sequence[AffineMap]):
        self.maps = tuple(maps)

    def class_key(self, label: Vec):
        return min(g(label) for g in self.maps)

    def edge_collapse_ok(self, lift1: Vec, lift2: Vec) -> bool:
        return vec(lift1) == vec(lift2)

    def simplices_identified(self, lifts1: Sequence[Vec], lifts2: Sequence[Vec]) -> bool:
        l1 = [vec(x) for x in lifts1]
        l2 = [vec(x) for x in lifts2]
        for g in self.maps:
            if all(g(a) == b for a, b in zip(l1, l2)):
                return True
        return False


def _make_pattern(span_rows: Sequence[Sequence], n: int, gmats: Sequence) -> _Pattern:
    rows = [vec(r) for r in span_rows if any(Fraction(x) != 0 for x in r)]
    if not rows:
        f_rows = identity_matrix(n)
    else:
        ann = nullspace(rows)
        if not ann:
            return _Pattern((), None, tuple(gmats))
        f_rows = tuple(primitive_direction(f) for f in ann)
    lat = Lattice.from_rows([col for col in zip(*f_rows)], len(f_rows))
    return _Pattern(tuple(f_rows), lat, tuple(gmats))


# ---------------------------------------------------------------------------
# Quotient with safety checks
# ---------------------------------------------------------------------------

def quotient_complex(gc: GeomComplex, relation, retries: int = 0,
                     meta: dict | None = None) -> SimplicialObject:
    for attempt in range(retries + 1):
        problem = _safety_problem(gc, relation)
        if problem is None:
            break
        if attempt == retries:
            raise QuotientSafetyError(problem)
        gc = barycentric_subdivision(gc)
    keys = [relation.class_key(label) for label in gc.labels]
    uniq = sorted(set(keys))
    key_id = {k: i for i, k in enumerate(uniq)}
    classes = [key_id[k] for k in keys]
    maximal = []
    for s in gc.maxsimps:
        maximal.append(tuple(sorted({classes[v] for v, _ in s})))
    return SimplicialObject.from_maximal(uniq, maximal, meta)


def _safety_problem(gc: GeomComplex, relation) -> str | None:
    keys = [relation.class_key(label) for label in gc.labels]
    # condition 1: same-class vertex pairs must span collapsed edges
    for s in gc.maxsimps:
        for (v1, l1), (v2, l2) in itertools.combinations(s, 2):
            if keys[v1] == keys[v2]:
                if not relation.edge_collapse_ok(l1, l2):
                    return f"uncollapsed edge between classes at {gc.labels[v1]} / {gc.labels[v2]}"
    # condition 2: distinct nondegenerate simplices with one image must be identified
    top = max(len(s) for s in gc.maxsimps) if gc.maxsimps else 0
    for size in range(2, top + 1):
        groups: dict[tuple, tuple | None] = {}
        seen_ids: dict[tuple, set] = {}
        for s in gc.maxsimps:
            for sub in itertools.combinations(s, size):
                ids = tuple(sorted(v for v, _ in sub))
                cls = tuple(sorted(keys[v] for v, _ in sub))
                if len(set(cls)) != size:
                    continue
                seen = seen_ids.setdefault(cls, set())
                seen.add(ids)
        collisions = {cls for cls, ids in seen_ids.items() if len(ids) > 1}
        if not collisions:
            continue
        reps: dict[tuple, dict[tuple, tuple]] = {c: {} for c in collisions}
        for s in gc.maxsimps:
            for sub in itertools.combinations(s, size):
                ids = tuple(sorted(v for v, _ in sub))
                cls = tuple(sorted(keys[v] for v, _ in sub))
                if cls not in reps or len(set(cls)) != size:
                    continue
                if ids not in reps[cls]:
                    ordered = tuple(lift for _, lift in sorted(sub, key=lambda t: keys[t[0]]))
                    reps[cls][ids] = ordered
        for cls, members in reps.items():
            items = sorted(members.items())
            base = items[0][1]
            for _, other in items[1:]:
                if not relation.simplices_identified(base, other):
                    return f"unidentified simplices sharing image classes {cls}"
    return None
