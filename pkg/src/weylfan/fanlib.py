"""Normal fans of Weyl polytopes and their quotients, with exact
smooth/simplicial/complete decisions and the rank-2 coroot-ray table.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .exactlat import (
    IntVec,
    det_int,
    dot,
    primitive_direction,
    rational_rank,
    solve_unique,
    vec,
)
from .rootsys import RootSystem, build_root_system
from .weylpoly import ROOT, HPolytope, WeylPolytope, quotient_polytope

DEFAULT_SEED = 714025
_PROBES = 100


@dataclass(frozen=True)
class Cone:
    """Cone spanned by primitive, sorted ray generators."""

    rays: tuple[IntVec, ...]
    tag: tuple = ()

    @staticmethod
    def from_rays(rays: Iterable[Sequence[int]], tag: tuple = ()) -> "Cone":
        rset = sorted({primitive_direction(r) for r in rays})
        return Cone(tuple(rset), tag)

    @property
    def nrays(self) -> int:
        return len(self.rays)

    def dim(self) -> int:
        return rational_rank(self.rays) if self.rays else 0

    def is_simplicial(self) -> bool:
        return self.dim() == self.nrays

    def contains(self, x: Sequence) -> bool:
        """Exact membership; the cone must be simplicial."""
        if not self.rays:
            return all(Fraction(v) == 0 for v in x)
        assert self.is_simplicial()
        rows = list(zip(*self.rays))
        lam = solve_unique(rows, x)
        if lam is None:
            return False
        return all(c >= 0 for c in lam)


@dataclass
class Fan:
    """Set of maximal cones; validity is checked eagerly at rank <= 3."""

    rank: int
    mode: str
    max_cones: tuple[Cone, ...]
    validity_checked: bool = False
    validity_skipped: bool = False

    def cone_set(self) -> frozenset[tuple[IntVec, ...]]:
        return frozenset(c.rays for c in self.max_cones)

    def rays(self) -> tuple[IntVec, ...]:
        return tuple(sorted({r for c in self.max_cones for r in c.rays}))


class FanValidityError(AssertionError):
    pass


def _finish_fan(fan: Fan) -> Fan:
    if fan.rank <= 3:
        validate_fan(fan)
        fan.validity_checked = True
    else:
        fan.validity_skipped = True
    return fan


def normal_fan(p: WeylPolytope) -> Fan:
    """One maximal cone per vertex, spanned by the inward normals there."""
    cones = []
    for el, v in p.vertices:
        idxs = p.tight_facets(v)
        assert len(idxs) == p.rank
        cones.append(Cone.from_rays([p.facets[i].normal for i in idxs], tag=("vertex", el.word)))
    fan = Fan(p.rank, p.frame.mode, tuple(sorted(cones, key=lambda c: c.rays)))
    return _finish_fan(fan)


def quotient_normal_fan(p: WeylPolytope, k: Iterable[int]) -> Fan:
    """Normal fan of P cap C_K-bar from the active facet normals per vertex."""
    q = quotient_polytope(p, k)
    return hpolytope_normal_fan(q, p.frame.mode)


def hpolytope_normal_fan(q: HPolytope, mode: str = ROOT) -> Fan:
    cones = []
    for vi, v in enumerate(q.vertices):
        idxs = [i for i in q.facet_idx if i in q.tight[vi]]
        assert len(idxs) == q.rank, "polytope is not simple at a vertex"
        cones.append(Cone.from_rays([q.halfspaces[i].normal for i in idxs], tag=("vertex", vi)))
    fan = Fan(q.rank, mode, tuple(sorted(cones, key=lambda c: c.rays)))
    return _finish_fan(fan)


def fan_properties(fan: Fan, seed: int = DEFAULT_SEED) -> dict:
    """{smooth, simplicial, complete}, all decided exactly."""
    simplicial = all(c.is_simplicial() for c in fan.max_cones)
    smooth = simplicial
    if simplicial:
        for c in fan.max_cones:
            if c.nrays != fan.rank or abs(det_int(c.rays)) != 1:
                smooth = False
                break
    complete = _complete(fan, seed)
    return {"smooth": smooth, "simplicial": simplicial, "complete": complete}


def _complete(fan: Fan, seed: int) -> bool:
    """Facet-pairing criterion for pure simplicial fans plus generic probes."""
    if any(c.nrays != fan.rank or not c.is_simplicial() for c in fan.max_cones):
        return False
    ridge_count: dict[frozenset, int] = {}
    for c in fan.max_cones:
        for ridge in itertools.combinations(c.rays, fan.rank - 1):
            key = frozenset(ridge)
            ridge_count[key] = ridge_count.get(key, 0) + 1
    if any(v != 2 for v in ridge_count.values()):
        return False
    forms = [_inequality_forms(c) for c in fan.max_cones]
    rng = random.Random(seed)
    for _ in range(_PROBES):
        x = tuple(Fraction(rng.randint(-999, 999), rng.randint(1, 7)) for _ in range(fan.rank))
        if not any(all(dot(f, x) >= 0 for f in fs) for fs in forms):
            return False
    return True


def _inequality_forms(c: Cone) -> list:
    """Rows f_j with f_j(ray_k) = delta_jk; x in cone iff all f_j(x) >= 0."""
    out = []
    for j in range(len(c.rays)):
        rhs = [Fraction(int(i == j)) for i in range(len(c.rays))]
        f = solve_unique([list(r) for r in c.rays], rhs)
        assert f is not None
        out.append(f)
    return out


def validate_fan(fan: Fan) -> None:
    """Pairwise check: the intersection of two cones is a face of each."""
    for c1, c2 in itertools.combinations(fan.max_cones, 2):
        common1 = [r for r in c1.rays if c2.contains(r)]
        common2 = [r for r in c2.rays if c1.contains(r)]
        if sorted(common1) != sorted(common2):
            raise FanValidityError(f"cone intersection mismatch: {c1.rays} vs {c2.rays}")
        face = Cone.from_rays(common1) if common1 else Cone((), ())
        for ray in _intersection_extreme_rays(c1, c2, fan.rank):
            if not face.contains(ray):
                raise FanValidityError(
                    f"intersection of {c1.rays} and {c2.rays} is not a common face")


def _intersection_extreme_rays(c1: Cone, c2: Cone, n: int) -> list[IntVec]:
    """Extreme rays of c1 cap c2 via brute force over tight constraint subsets.

    Both cones are simplicial full-dimensional, so each is cut out by n
    inequalities (the rows of the inverse ray matrix).
    """
    ineqs = []
    for c in (c1, c2):
        ineqs.extend(_inequality_forms(c))
    out = []
    for combo in itertools.combinations(range(len(ineqs)), n - 1):
        rows = [ineqs[i] for i in combo]
        ker = _kernel(rows, n)
        if len(ker) != 1:
            continue
        for sign in (1, -1):
            cand = tuple(sign * x for x in ker[0])
            if all(dot(f, cand) >= 0 for f in ineqs):
                if any(Fraction(x) != 0 for x in cand):
                    out.append(primitive_direction(cand))
    return sorted(set(out))


def _kernel(rows, n):
    from .exactlat import nullspace

    if not rows:
        return []
    return list(nullspace(rows))


# ---------------------------------------------------------------------------
# Table of primitive coroot ray generators for the rank-2 types
# ---------------------------------------------------------------------------

TABLE1_EXPECTED = {
    "A2": (((2, -1), (2, -1)), ((-1, 2), (-1, 2))),
    "B2": (((2, -1), (2, -1)), ((-2, 2), (-1, 1))),
    "G2": (((2, -3), (2, -3)), ((-1, 2), (-1, 2))),
}


def table1_report() -> dict:
    """Generators and primitive generators of Cone(alpha_1^vee, alpha_2^vee)
    for A2, B2, G2 in coweight coordinates, checked against the expected rows.
    """
    rows = []
    all_ok = True
    for label in ("A2", "B2", "G2"):
        rs = build_root_system(label[0], int(label[1]))
        entries = []
        ok = True
        for i in (1, 2):
            gen = rs.coroot(i)
            prim = primitive_direction(gen)
            want_gen, want_prim = TABLE1_EXPECTED[label][i - 1]
            ok = ok and gen == want_gen and prim == want_prim
            entries.append({"generator": gen, "primitive": prim,
                            "expected_generator": want_gen, "expected_primitive": want_prim})
        rows.append({"type": label, "entries": entries, "ok": ok})
        all_ok = all_ok and ok
    return {"rows": rows, "ok": all_ok}


def fan_json(fan: Fan) -> dict:
    rays = fan.rays()
    index = {r: i for i, r in enumerate(rays)}
    return {
        "mode": fan.mode,
        "rays": [[str(x) for x in r] for r in rays],
        "max_cones": [sorted(index[r] for r in c.rays) for c in fan.max_cones],
    }
