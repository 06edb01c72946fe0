"""Integral simplicial homology via Smith normal form.

Boundary matrices are eliminated sparsely: unit pivots are consumed first
with a fill-minimizing heuristic, and whatever dense core remains goes
through the exact Smith reduction. Only ranks and elementary divisors are
needed here, so no transform matrices are carried.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from math import comb

from .fanlib import Fan


@dataclass(frozen=True)
class ChainComplex:
    """Boundary matrices as {column -> {row -> coefficient}} per degree."""

    counts: tuple[int, ...]
    boundaries: tuple[dict, ...]  # boundaries[k] is del_{k+1}: C_{k+1} -> C_k


@dataclass(frozen=True)
class HomologyGroups:
    """Per degree: (betti, sorted tuple of elementary divisors > 1)."""

    groups: tuple[tuple[int, tuple[int, ...]], ...]

    def betti(self) -> tuple[int, ...]:
        return tuple(b for b, _ in self.groups)

    def torsion(self) -> tuple[tuple[int, ...], ...]:
        return tuple(t for _, t in self.groups)

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * b for k, (b, _) in enumerate(self.groups))

    def trimmed(self) -> tuple[tuple[int, tuple[int, ...]], ...]:
        out = list(self.groups)
        while out and out[-1] == (0, ()):
            out.pop()
        return tuple(out)


def chain_complex(obj) -> ChainComplex:
    """Alternating-sign boundary maps from sorted-vertex orientations."""
    dims = sorted(obj.simplices)
    top = dims[-1] if dims else 0
    index = {}
    counts = []
    for k in range(top + 1):
        simps = obj.simplices.get(k, ())
        counts.append(len(simps))
        index[k] = {s: i for i, s in enumerate(simps)}
    boundaries = []
    for k in range(1, top + 1):
        cols: dict[int, dict[int, int]] = {}
        lower = index[k - 1]
        for ci, simplex in enumerate(obj.simplices.get(k, ())):
            col: dict[int, int] = {}
            for omit in range(len(simplex)):
                face = simplex[:omit] + simplex[omit + 1:]
                col[lower[face]] = 1 if omit % 2 == 0 else -1
            cols[ci] = col
        boundaries.append(cols)
    cc = ChainComplex(tuple(counts), tuple(boundaries))
    assert boundary_squares_to_zero(cc)
    return cc


def boundary_squares_to_zero(cc: ChainComplex) -> bool:
    for k in range(1, len(cc.boundaries)):
        outer = cc.boundaries[k]
        inner = cc.boundaries[k - 1]
        for col in outer.values():
            acc: dict[int, int] = {}
            for mid, c1 in col.items():
                for row, c2 in inner[mid].items():
                    acc[row] = acc.get(row, 0) + c1 * c2
            if any(v != 0 for v in acc.values()):
                return False
    return True


def sparse_elementary_divisors(cols: dict) -> tuple[int, ...]:
    """Elementary divisors of a sparse integer matrix given as column dicts."""
    rows: dict[int, dict[int, int]] = {}
    colmap: dict[int, dict[int, int]] = {}
    for ci, col in cols.items():
        for ri, val in col.items():
            if val:
                rows.setdefault(ri, {})[ci] = val
                colmap.setdefault(ci, {})[ri] = val
    ones = 0
    heap: list[tuple[int, int, int]] = []

    def push(ri, ci):
        val = rows.get(ri, {}).get(ci)
        if val in (1, -1):
            score = (len(rows[ri]) - 1) * (len(colmap[ci]) - 1)
            heapq.heappush(heap, (score, ri, ci))

    for ri, row in rows.items():
        for ci, val in row.items():
            if val in (1, -1):
                score = (len(row) - 1) * (len(colmap[ci]) - 1)
                heap.append((score, ri, ci))
    heapq.heapify(heap)

    while heap:
        score, ri, ci = heapq.heappop(heap)
        val = rows.get(ri, {}).get(ci)
        if val not in (1, -1):
            continue
        cur = (len(rows[ri]) - 1) * (len(colmap[ci]) - 1)
        if cur > score:
            heapq.heappush(heap, (cur, ri, ci))
            continue
        # eliminate: clear column ci with row ops, then drop row ri / col ci
        pivot_row = rows.pop(ri)
        for cj in pivot_row:
            if cj != ci:
                del colmap[cj][ri]
        targets = [rj for rj in colmap[ci] if rj != ri]
        for rj in targets:
            factor = rows[rj][ci] * val
            rowj = rows[rj]
            for cj, pv in pivot_row.items():
                if cj == ci:
                    del rowj[cj]
                    del colmap[cj][rj]
                    continue
                new = rowj.get(cj, 0) - factor * pv
                if new:
                    rowj[cj] = new
                    colmap[cj][rj] = new
                    if new in (1, -1):
                        heapq.heappush(heap, ((len(rowj) - 1) * (len(colmap[cj]) - 1), rj, cj))
                elif cj in rowj:
                    del rowj[cj]
                    del colmap[cj][rj]
            if not rowj:
                del rows[rj]
        del colmap[ci]
        ones += 1

    divisors = [1] * ones
    if rows:
        live_rows = sorted(rows)
        live_cols = sorted({cj for row in rows.values() for cj in row})
        rix = {r: i for i, r in enumerate(live_rows)}
        cix = {c: i for i, c in enumerate(live_cols)}
        dense = [[0] * len(live_cols) for _ in live_rows]
        for ri, row in rows.items():
            for cj, val in row.items():
                dense[rix[ri]][cix[cj]] = val
        divisors.extend(_dense_divisors(dense))
    return tuple(divisors)


def _dense_divisors(a: list[list[int]]) -> list[int]:
    m = len(a)
    n = len(a[0]) if m else 0
    out = []
    t = 0
    while t < min(m, n):
        best = None
        pi = pj = -1
        for i in range(t, m):
            for j in range(t, n):
                e = a[i][j]
                if e and (best is None or abs(e) < best):
                    best = abs(e)
                    pi, pj = i, j
        if best is None:
            break
        a[t], a[pi] = a[pi], a[t]
        for row in a:
            row[t], row[pj] = row[pj], row[t]
        while True:
            if a[t][t] < 0:
                a[t] = [-x for x in a[t]]
            p = a[t][t]
            restart = False
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // p
                    if q:
                        a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        restart = True
                        break
            if restart:
                continue
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // p
                    if q:
                        for row in a:
                            row[j] -= q * row[t]
                    if a[t][j]:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        restart = True
                        break
            if restart:
                continue
            break
        p = a[t][t]
        offender = None
        for i in range(t + 1, m):
            if any(a[i][j] % p for j in range(t + 1, n)):
                offender = i
                break
        if offender is not None:
            a[t] = [x + y for x, y in zip(a[t], a[offender])]
            continue
        out.append(p)
        t += 1
    return out


def homology(obj) -> HomologyGroups:
    """H_k = Z^betti + sum Z/d via Smith form of the boundary maps."""
    cc = chain_complex(obj)
    top = len(cc.counts) - 1
    divs = [()] * (top + 2)
    for k in range(1, top + 1):
        divs[k] = sparse_elementary_divisors(cc.boundaries[k - 1])
    ranks = [len(d) for d in divs]
    groups = []
    for k in range(top + 1):
        betti = cc.counts[k] - ranks[k] - ranks[k + 1]
        torsion = tuple(sorted(d for d in divs[k + 1] if d > 1))
        groups.append((betti, torsion))
    hg = HomologyGroups(tuple(groups))
    assert hg.betti()[0] >= 1 or cc.counts[0] == 0
    euler = sum((-1) ** k * c for k, c in enumerate(cc.counts))
    assert hg.euler_characteristic() == euler
    return hg


def compare(ha: HomologyGroups, hb: HomologyGroups) -> tuple[bool, list[dict]]:
    """Degreewise equality of betti and torsion, with a diff report."""
    ga = ha.trimmed()
    gb = hb.trimmed()
    depth = max(len(ga), len(gb))
    diffs = []
    for k in range(depth):
        a = ga[k] if k < len(ga) else (0, ())
        b = gb[k] if k < len(gb) else (0, ())
        if a != b:
            diffs.append({"degree": k, "left": a, "right": b})
    return not diffs, diffs


def reduced_homology_trivial(h: HomologyGroups) -> bool:
    g = h.trimmed()
    if not g:
        return False
    if g[0] != (1, ()):
        return False
    return all(x == (0, ()) for x in g[1:])


def rational_betti_oracle(fan: Fan) -> tuple[int, ...]:
    """h-vector betti numbers of a complete simplicial fan's toric space.

    b_{2k} = h_k from the ray-set simplicial complex; odd betti are zero.
    """
    n = fan.rank
    faces = set()
    for c in fan.max_cones:
        if not c.is_simplicial():
            raise ValueError("fan is not simplicial")
        rays = c.rays
        for r in range(len(rays) + 1):
            for sub in itertools.combinations(rays, r):
                faces.add(frozenset(sub))
    f = [0] * (n + 1)  # f[i] = number of i-element faces (f_{i-1})
    for face in faces:
        if len(face) <= n:
            f[len(face)] += 1
    h = [0] * (n + 1)
    for i in range(n + 1):
        for k in range(n + 1):
            # coefficient of t^{n-k} in (t-1)^{n-i}
            j = n - k
            if j <= n - i:
                h[k] += f[i] * comb(n - i, j) * (-1) ** (n - i - j)
    betti = []
    for k in range(2 * n + 1):
        betti.append(h[k // 2] if k % 2 == 0 else 0)
    return tuple(betti)


def homology_json(h: HomologyGroups) -> list[dict]:
    out = []
    for k, (betti, torsion) in enumerate(h.trimmed()):
        out.append({"degree": k, "betti": str(betti), "torsion": [str(t) for t in torsion]})
    return out
