"""Brute-force ground truth: exhaustive map and tree enumeration.

Map census
----------
The census enumerates rotation systems directly.  Fix the edge involution as
alpha(d) = d ^ 1 on 2E darts and build the face permutation phi cycle by
cycle with the face degrees prescribed; sigma = phi o alpha then determines
the map.  Counts are normalized by 2^E * E!:

    A corner-marked connected map is rigid, so the group of dart relabelings
    commuting with alpha (wreath product of S_E with E factors of S_2, order
    2^E * E!) acts freely on triples (sigma, face numbering, corner marks).
    Every unlabeled marked map therefore appears exactly 2^E * E! times in
    the labeled enumeration, and dividing by that constant converts labeled
    totals into honest counts of marked maps.

Prescribing phi's cycle type is what makes the search feasible: only
permutations whose face degrees already match the query are ever built, and
genus, connectivity and (for p >= 3) the dark/light coloring are checked per
candidate.

Tree census
-----------
``oracle_mobiles`` counts corner-rooted p-mobiles by recursion over the root
branch with memoized budgets; bud arrangements are enumerated slot by slot,
not through binomial shortcuts, so the count is independent of the kernel
series it is checked against.  ``MobileCensus`` materializes small mobiles
outright (rooted generation, then canonical deduplication for unrooted and
marked families); it backs the family-cardinality identities and the
map-bijection certification.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Sequence, Tuple

from .exactnum import falling
from .mobiles import (
    BLACK,
    BUD,
    DARK,
    WHITE,
    MNode,
    MobileClass,
    big_bud,
    black_degree_multiset,
    bud,
    canon_unrooted,
    classify_mobile,
    degree,
    iter_nodes,
    prune,
    validate_mobile,
    white_count,
)


class BudgetExceeded(RuntimeError):
    """The request is larger than the configured search ceiling."""


@dataclass(frozen=True)
class Budget:
    """Ceilings for the exhaustive searches."""

    max_edges_p2: int = 4
    max_epsilon: int = 6
    max_whites: int = 8

    def check_edges(self, p: int, edges: int) -> None:
        cap = self.max_edges_p2 if p == 2 else self.max_epsilon
        if edges > cap:
            raise BudgetExceeded(
                f"{edges} edges exceeds the configured ceiling {cap} for p={p}"
            )

    def check_whites(self, whites: int) -> None:
        if whites > self.max_whites:
            raise BudgetExceeded(
                f"{whites} white vertices exceed the ceiling {self.max_whites}"
            )


DEFAULT_BUDGET = Budget()


# ---------------------------------------------------------------------------
# map census
# ---------------------------------------------------------------------------

_CENSUS_CACHE: Dict[Tuple, Dict] = {}


def _phi_with_cycle_type(degrees: Sequence[int]):
    """Yield (phi, fid) for every permutation of the 2E darts whose cycle
    type is exactly ``degrees``; fid[d] is the index into ``degrees`` of the
    cycle through d.  Cycles are anchored at their smallest uncovered dart,
    which enumerates each permutation exactly once."""
    n = sum(degrees)
    phi = [0] * n
    fid = [0] * n
    remaining = sorted(range(len(degrees)), key=lambda i: degrees[i])

    def rec(unused: frozenset, faces_left: Tuple[int, ...], out):
        if not unused:
            out()
            return
        m = min(unused)
        rest = unused - {m}
        tried = set()
        for pos, f in enumerate(faces_left):
            length = degrees[f]
            if length in tried:
                continue
            tried.add(length)
            nxt_faces = faces_left[:pos] + faces_left[pos + 1 :]
            if length == 1:
                phi[m] = m
                fid[m] = f
                rec(rest, nxt_faces, out)
                continue
            for tail in itertools.permutations(sorted(rest), length - 1):
                prev = m
                for d in tail:
                    phi[prev] = d
                    fid[prev] = f
                    prev = d
                phi[prev] = m
                fid[prev] = f
                rec(rest - set(tail), nxt_faces, out)

    collected = []

    def emit():
        collected.append((tuple(phi), tuple(fid)))

    # Generator protocol via collected list would hold everything in memory;
    # use an explicit iterative driver instead.
    stack_results: List[Tuple[Tuple[int, ...], Tuple[int, ...]]] = []

    def driver():
        results = []

        def out():
            results.append((list(phi), list(fid)))

        rec(frozenset(range(n)), tuple(range(len(degrees))), out)
        return results

    # For the sizes used here (n <= 12) an eager list is acceptable only for
    # small n; beyond that we stream through a callback in census().
    raise NotImplementedError  # replaced by _for_each_phi below


def _for_each_phi(degrees: Sequence[int], callback) -> None:
    """Call ``callback(phi, fid)`` for every permutation of the darts with
    cycle type ``degrees`` (phi and fid are reused lists; do not retain)."""
    n = sum(degrees)
    phi = [0] * n
    fid = [0] * n
    degs = tuple(degrees)
    nfaces = len(degs)
    used = [False] * n

    def rec(uncovered: int, faces_left: Tuple[int, ...]):
        if uncovered == 0:
            callback(phi, fid)
            return
        m = used.index(False)
        used[m] = True
        rest = [d for d in range(m + 1, n) if not used[d]]
        tried = set()
        for pos, f in enumerate(faces_left):
            length = degs[f]
            if length in tried:
                continue
            tried.add(length)
            nxt_faces = faces_left[:pos] + faces_left[pos + 1 :]
            if length == 1:
                phi[m] = m
                fid[m] = f
                rec(uncovered - 1, nxt_faces)
            else:
                for tail in itertools.permutations(rest, length - 1):
                    prev = m
                    ok = True
                    for d in tail:
                        phi[prev] = d
                        fid[prev] = f
                        used[d] = True
                        prev = d
                    phi[prev] = m
                    fid[prev] = f
                    rec(uncovered - length, nxt_faces)
                    for d in tail:
                        used[d] = False
        used[m] = False

    rec(n, tuple(range(nfaces)))


def map_census(p: int, face_degrees: Tuple[int, ...]) -> Dict[Tuple, int]:
    """Labeled census keyed by (vertex count, sorted light-face degrees).

    For p = 2 every face is light.  For p >= 3 each valid dark/light face
    coloring of each labeled map contributes one entry (a hypermap's
    coloring is part of the structure), restricted to colorings whose dark
    faces all have degree p.  Values are raw labeled counts; divide by
    2^E * E! after weighting by numbering/corner choices.
    """
    key = (p, tuple(sorted(face_degrees)))
    if key in _CENSUS_CACHE:
        return _CENSUS_CACHE[key]
    degrees = tuple(sorted(face_degrees))
    n = sum(degrees)
    if n % 2 != 0:
        _CENSUS_CACHE[key] = {}
        return {}
    n_edges = n // 2
    n_faces = len(degrees)
    counts: Dict[Tuple, int] = {}
    edge_pairs = [(2 * k, 2 * k + 1) for k in range(n_edges)]

    def callback(phi, fid):
        # sigma = phi o alpha; count sigma cycles (= vertices).
        sigma = [0] * n
        for d in range(n):
            sigma[d] = phi[d ^ 1]
        seen = 0
        vid = [-1] * n
        nv = 0
        while seen < n:
            start = vid.index(-1)
            d = start
            while vid[d] == -1:
                vid[d] = nv
                seen += 1
                d = sigma[d]
            nv += 1
        # Planarity: V - E + F = 2.
        if nv - n_edges + n_faces != 2:
            return
        # Connectivity via union-find on vertices along edges.
        parent = list(range(nv))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        comps = nv
        for a, b in edge_pairs:
            ra, rb = find(vid[a]), find(vid[b])
            if ra != rb:
                parent[ra] = rb
                comps -= 1
        if comps != 1:
            return
        if p == 2:
            k = (nv, degrees)
            counts[k] = counts.get(k, 0) + 1
            return
        # 2-color faces; adjacent across each edge must differ.
        fcolor = [-1] * n_faces
        fcolor[0] = 0
        stack = [0]
        fadj: List[List[int]] = [[] for _ in range(n_faces)]
        for a, b in edge_pairs:
            fa, fb = fid[a], fid[b]
            if fa == fb:
                return
            fadj[fa].append(fb)
            fadj[fb].append(fa)
        while stack:
            f = stack.pop()
            for g in fadj[f]:
                if fcolor[g] == -1:
                    fcolor[g] = 1 - fcolor[f]
                    stack.append(g)
                elif fcolor[g] == fcolor[f]:
                    return
        for darkside in (0, 1):
            lights = tuple(
                sorted(degrees[f] for f in range(n_faces) if fcolor[f] != darkside)
            )
            darks_ok = all(
                degrees[f] == p for f in range(n_faces) if fcolor[f] == darkside
            )
            if darks_ok:
                k = (nv, lights)
                counts[k] = counts.get(k, 0) + 1

    _for_each_phi(degrees, callback)
    _CENSUS_CACHE[key] = counts
    return counts


def _numbering_weight(lights: Tuple[int, ...], boundaries: Sequence[int]) -> int:
    """Injective assignments of the numbered boundaries to light faces of
    matching degree, times the corner choices, or 0 if impossible."""
    from collections import Counter

    have = Counter(lights)
    need = Counter(boundaries)
    weight = 1
    for deg, k in need.items():
        weight *= falling(have.get(deg, 0), k)
    if weight == 0:
        return 0
    for l in boundaries:
        weight *= l
    return weight


def _query_weight(
    counts: Dict[Tuple, int],
    boundaries: Sequence[int],
    internal: Sequence[int],
    v: int | None,
) -> Fraction:
    want_lights = tuple(sorted(tuple(boundaries) + tuple(internal)))
    total = 0
    for (nv, lights), c in counts.items():
        if lights != want_lights:
            continue
        if v is not None and nv != v:
            continue
        total += c * _numbering_weight(lights, boundaries)
    return Fraction(total)


def _normalizer(edges: int) -> int:
    return (2 ** edges) * falling(edges, edges)


def _census_edges(p: int, boundaries: Sequence[int], internal: Sequence[int]) -> Tuple[int, Tuple[int, ...]]:
    light_total = sum(boundaries) + sum(internal)
    if p == 2:
        if light_total % 2 != 0:
            raise ValueError("total face degree must be even")
        return light_total // 2, tuple(sorted(tuple(boundaries) + tuple(internal)))
    if light_total % p != 0:
        raise ValueError(f"total light degree must be a multiple of p={p}")
    n_dark = light_total // p
    faces = tuple(sorted(tuple(boundaries) + tuple(internal) + (p,) * n_dark))
    return light_total, faces


def oracle_slicings(
    p: int, boundaries: Sequence[int], budget: Budget = DEFAULT_BUDGET
) -> int:
    """Count maps whose light faces are exactly the numbered, corner-marked
    boundaries, by exhaustive search."""
    edges, faces = _census_edges(p, boundaries, ())
    budget.check_edges(p, edges)
    counts = map_census(p, faces)
    total = _query_weight(counts, boundaries, (), None)
    value = total / _normalizer(edges)
    assert value.denominator == 1
    return int(value)


def oracle_gf_coeff(
    p: int,
    boundaries: Sequence[int],
    internal_profile: Dict[int, int],
    v: int,
    budget: Budget = DEFAULT_BUDGET,
) -> int:
    """Count maps with numbered corner-marked boundaries, unmarked internal
    light faces matching {degree p*i: n_i}, and exactly v vertices."""
    internal: List[int] = []
    for i, ni in sorted(internal_profile.items()):
        internal.extend([p * i] * ni)
    edges, faces = _census_edges(p, boundaries, internal)
    budget.check_edges(p, edges)
    counts = map_census(p, faces)
    total = _query_weight(counts, boundaries, internal, v)
    value = total / _normalizer(edges)
    assert value.denominator == 1
    return int(value)


def oracle_rooted_maps(
    p: int,
    profile: Dict[int, int],
    v: int,
    budget: Budget = DEFAULT_BUDGET,
) -> int:
    """Corner-rooted maps (root corner in a light face) with v vertices whose
    light faces all are unmarked and match {degree p*i: n_i} exactly."""
    lights: List[int] = []
    for i, ni in sorted(profile.items()):
        lights.extend([p * i] * ni)
    if not lights:
        raise ValueError("profile must contain at least one face")
    edges, faces = _census_edges(p, lights, ())
    budget.check_edges(p, edges)
    counts = map_census(p, faces)
    want = tuple(sorted(lights))
    total = 0
    corner_choices = sum(lights)
    for (nv, ls), c in counts.items():
        if ls == want and nv == v:
            total += c * corner_choices
    value = Fraction(total, _normalizer(edges))
    assert value.denominator == 1
    return int(value)


# ---------------------------------------------------------------------------
# rooted mobile counting (memoized recursion, no binomials)
# ---------------------------------------------------------------------------


def _profile_key(profile: Dict[int, int]) -> Tuple[Tuple[int, int], ...]:
    return tuple(sorted((i, n) for i, n in profile.items() if n))


@lru_cache(maxsize=None)
def _count_planted(p: int, whites: int, profile: Tuple[Tuple[int, int], ...]) -> int:
    """Corner-rooted p-mobiles with exactly ``whites`` round vertices and
    light-square degree profile ``profile`` (as (i, count) pairs).

    Decomposition at the root white vertex: either bare (no branches), or a
    first branch (a light square with its slot arrangement) followed by the
    rest of the root's branches, which again form a rooted mobile on the
    same root.
    """
    if whites < 1:
        return 0
    if whites == 1 and not profile:
        return 1
    total = 0
    for i, cnt in profile:
        rest = _dec_profile(profile, i)
        total += _count_branch_then_rest(p, i, whites, rest)
    return total


def _dec_profile(profile: Tuple[Tuple[int, int], ...], i: int) -> Tuple[Tuple[int, int], ...]:
    out = []
    for j, n in profile:
        if j == i:
            if n > 1:
                out.append((j, n - 1))
        else:
            out.append((j, n))
    return tuple(out)


@lru_cache(maxsize=None)
def _count_branch_then_rest(
    p: int, i: int, whites: int, profile: Tuple[Tuple[int, int], ...]
) -> int:
    """First branch = light square of degree p*i (consuming one x_i), times
    the remaining branches of the root; the root white is shared, so the
    split hands ``w`` whites to the branch's subtrees and whites - w ... the
    bookkeeping is done slot by slot in _count_slots."""
    total = 0
    # slots: p*i - 1 positions after the parent edge; i of them are (big)
    # buds, (p-1)*i - 1 carry rooted sub-mobiles.
    total += _count_slots(p, p * i - 1, i, whites, profile, True)
    return total


@lru_cache(maxsize=None)
def _count_slots(
    p: int,
    slots: int,
    buds_left: int,
    whites: int,
    profile: Tuple[Tuple[int, int], ...],
    root_pending: bool,
) -> int:
    """Fill ``slots`` ordered positions with ``buds_left`` (big) buds and
    rooted sub-mobiles, distributing ``whites`` whites and ``profile`` among
    the sub-mobiles and, when ``root_pending``, the continuation of the root
    vertex (the rest of its branch list), which consumes the root white."""
    if slots == 0:
        if buds_left:
            return 0
        # Continuation: the root's remaining branches form a rooted mobile.
        return _count_planted(p, whites, profile)
    total = 0
    if buds_left:
        total += _count_slots(p, slots - 1, buds_left - 1, whites, profile, root_pending)
    # Or the slot carries a sub-mobile: split whites/profile between it and
    # the remainder.
    for w_sub in range(1, whites + 1):
        for sub_prof in _sub_profiles(profile):
            c_sub = _count_planted(p, w_sub, sub_prof)
            if c_sub == 0:
                continue
            rest_prof = _profile_diff(profile, sub_prof)
            c_rest = _count_slots(
                p, slots - 1, buds_left, whites - w_sub, rest_prof, root_pending
            )
            total += c_sub * c_rest
    return total


@lru_cache(maxsize=None)
def _sub_profiles(profile: Tuple[Tuple[int, int], ...]) -> Tuple[Tuple[Tuple[int, int], ...], ...]:
    items = list(profile)
    ranges = [range(n + 1) for _, n in items]
    out = []
    for picks in itertools.product(*ranges):
        sub = tuple((items[k][0], picks[k]) for k in range(len(items)) if picks[k])
        out.append(sub)
    return tuple(out)


def _profile_diff(
    a: Tuple[Tuple[int, int], ...], b: Tuple[Tuple[int, int], ...]
) -> Tuple[Tuple[int, int], ...]:
    db = dict(b)
    out = []
    for i, n in a:
        m = n - db.get(i, 0)
        if m < 0:
            raise ValueError("profile underflow")
        if m:
            out.append((i, m))
    return tuple(out)


def oracle_mobiles(
    p: int,
    whites: int,
    profile: Dict[int, int],
    rooted: bool = True,
    budget: Budget = DEFAULT_BUDGET,
) -> int:
    """Count p-mobiles with the given round-vertex count and light-square
    profile: corner-rooted by default, unrooted (up to plane isomorphism)
    with ``rooted=False``."""
    budget.check_whites(whites)
    if rooted:
        return _count_planted(p, whites, _profile_key(profile))
    reps = mobile_census(p).unrooted(whites, _profile_key(profile))
    return len(reps)


# ---------------------------------------------------------------------------
# materialized small-mobile census
# ---------------------------------------------------------------------------


def _gen_planted(p: int, max_whites: int, max_squares: int, max_arity: int):
    """All corner-rooted p-mobiles within the budget, as MNodes rooted at a
    white vertex (buds explicit, big buds for p >= 3)."""

    @lru_cache(maxsize=None)
    def roots(whites: int, squares: int) -> Tuple[MNode, ...]:
        # rooted mobiles with exactly `whites` whites, at most `squares` squares
        if whites < 1:
            return ()
        out = []
        if whites == 1:
            out.append(white())
        for first_i in range(1, max_arity + 1):
            if squares < 1:
                break
            for branch, bw, bs in branches(first_i, whites - 1 + 1, squares - 1):
                # branch consumes bw whites and bs squares; continuation takes rest
                for cont in roots(whites - bw, squares - 1 - bs):
                    out.append(white((branch,) + cont.children))
        return tuple(out)

    @lru_cache(maxsize=None)
    def branches(i: int, whites_cap: int, squares_cap: int):
        """Light squares of degree p*i with every slot arrangement; yields
        (branch MNode, whites used, extra squares used)."""
        slots = p * i - 1
        out: List[Tuple[MNode, int, int]] = []

        def fill(pos: int, buds_left: int, parts: Tuple[MNode, ...], wuse: int, suse: int):
            if pos == slots:
                if buds_left == 0:
                    out.append((black(parts), wuse, suse))
                return
            if buds_left:
                unit = bud() if p == 2 else big_bud(p)
                fill(pos + 1, buds_left - 1, parts + (unit,), wuse, suse)
            for w_sub in range(1, whites_cap - wuse + 1):
                for s_sub in range(0, squares_cap - suse + 1):
                    for sub in roots(w_sub, s_sub):
                        if _squares_in(sub) != s_sub:
                            continue
                        fill(pos + 1, buds_left, parts + (sub,), wuse + w_sub, suse + s_sub)

        fill(0, i, (), 0, 0)
        return tuple(out)

    def _squares_in(node: MNode) -> int:
        return sum(1 for n in iter_nodes(node) if n.color == BLACK)

    result = []
    for w in range(1, max_whites + 1):
        for node in roots(w, max_squares):
            result.append(node)
    return result


class MobileCensus:
    """Materialized mobiles for one p within a fixed budget, with canonical
    unrooted deduplication and family extraction."""

    def __init__(self, p: int, max_whites: int = 3, max_squares: int = 4, max_arity: int = 3):
        self.p = p
        self.max_whites = max_whites
        self.max_squares = max_squares
        self.max_arity = max_arity
        self._planted = None
        self._unrooted = None

    def planted(self) -> List[MNode]:
        if self._planted is None:
            self._planted = _gen_planted(
                self.p, self.max_whites, self.max_squares, self.max_arity
            )
        return self._planted

    def unrooted_all(self) -> Dict[Tuple, MNode]:
        """Canonical encoding -> representative, over all generated mobiles."""
        if self._unrooted is None:
            reps: Dict[Tuple, MNode] = {}
            for m in self.planted():
                key = canon_unrooted(m)
                reps.setdefault(key, m)
            self._unrooted = reps
        return self._unrooted

    def unrooted(self, whites: int, profile: Tuple[Tuple[int, int], ...]) -> List[MNode]:
        out = []
        for key, rep in self.unrooted_all().items():
            if white_count(rep) != whites:
                continue
            degs = black_degree_multiset(rep)
            want = []
            for i, n in profile:
                want.extend([self.p * i] * n)
            if tuple(sorted(want)) == degs:
                out.append(rep)
        return out


_MOBILE_CENSUS: Dict[Tuple[int, int, int, int], MobileCensus] = {}


def mobile_census(
    p: int, max_whites: int = 3, max_squares: int = 4, max_arity: int = 3
) -> MobileCensus:
    key = (p, max_whites, max_squares, max_arity)
    if key not in _MOBILE_CENSUS:
        _MOBILE_CENSUS[key] = MobileCensus(p, max_whites, max_squares, max_arity)
    return _MOBILE_CENSUS[key]
