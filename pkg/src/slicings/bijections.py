"""Constructive correspondences: map -> mobile, forest aggregation, and the
blossoming-tree <-> mobile isomorphism.

bdg_forward
    The distance-labeled construction turning a vertex-pointed planar map
    into a mobile: orient each edge toward the endpoint farther from the
    pointed vertex, drop a black vertex into each face, apply one local rule
    per edge, delete the pointed vertex.  Side convention fixed here: an
    oriented edge contributes the mobile edge at the black vertex of the face
    on its *left* (left as seen walking toward the far endpoint, with faces
    read off phi = sigma o alpha) and a bud at the black vertex of the face
    on its right.  Flipping the convention mirrors every mobile and changes
    no count.

aggregate / disaggregate
    The grouping-and-merging process between forests of rooted mobiles with
    r-1 marked white vertices and single pruned mobiles with r marked black
    vertices, rooted at one of them.  Both directions take an explicit choice
    sequence (r-i alternatives at step i).  The two sequences are matched
    encodings, not literally equal lists: undoing merges in the order the
    choices dictate refers to eligible sets that, in general, differ between
    the two sides, so ``aggregate_trace`` also returns the choice list that
    makes ``disaggregate`` the exact inverse of that particular run.

blossoming_to_mobile / mobile_to_blossoming
    The recursive isomorphism induced by the fact that blossoming p-trees and
    corner-rooted p-mobiles satisfy the same decomposition equation.  Bud
    patterns on the two sides are matched by lexicographic rank.
"""

from __future__ import annotations

from typing import Dict, List, Sequence, Tuple

from .exactnum import binomial
from .maps import MapError, PlanarMap, bfs_distances
from .mobiles import (
    BLACK,
    BUD,
    DARK,
    WHITE,
    BlossomingTree,
    MNode,
    MobileError,
    MobileForest,
    big_bud,
    bud,
    canonical_representative,
    is_big_bud,
    white,
)


class BijectionError(ValueError):
    """Invalid input to one of the constructive correspondences."""


# ---------------------------------------------------------------------------
# map -> mobile
# ---------------------------------------------------------------------------


def bdg_forward(pmap: PlanarMap, v0: int) -> MNode:
    """Mobile of the planar map ``pmap`` pointed at vertex ``v0``.

    Returns the mobile re-rooted at its canonical corner, so equal pointed
    maps (in any dart labeling) give byte-identical mobiles.
    """
    pmap.require_planar()
    if not (0 <= v0 < pmap.vertex_count()):
        raise MapError(f"vertex {v0} out of range")
    dist = bfs_distances(pmap, v0)
    faces = pmap.faces()
    fid: Dict[int, int] = {}
    for i, cyc in enumerate(faces):
        for d in cyc:
            fid[d] = i

    n_vertices = pmap.vertex_count()
    n_faces = len(faces)
    # Mobile node ids: 0..n_vertices-1 whites (v0 later deleted), then blacks.
    black_of = lambda f: n_vertices + f

    def kind(d: int) -> str:
        a, b = pmap.vertex_of_dart(d), pmap.vertex_of_dart(d ^ 1)
        if dist[a] + 1 == dist[b]:
            return "forward"
        if dist[b] + 1 == dist[a]:
            return "backward"
        if dist[a] == dist[b]:
            return "flat"
        raise MapError("distance labels differ by more than one across an edge")

    # Items around each black vertex follow the face traversal; an item is
    # ("edge", white id, anchor dart at the white) for a forward dart,
    # ("bud",) for a backward dart, ("bb", other face) for a flat dart.
    black_items: List[List[tuple]] = [[] for _ in range(n_faces)]
    # Mobile edges incident to each white, keyed by their anchor dart.
    white_edges: Dict[int, Dict[int, int]] = {v: {} for v in range(n_vertices)}
    for f, cyc in enumerate(faces):
        for d in cyc:
            k = kind(d)
            if k == "forward":
                head = pmap.vertex_of_dart(d ^ 1)
                black_items[f].append(("edge", head, d ^ 1))
                white_edges[head][d ^ 1] = f
            elif k == "backward":
                black_items[f].append(("bud",))
            else:
                black_items[f].append(("bb", fid[d ^ 1], d))

    # Assemble the unrooted mobile as an adjacency structure with cyclic
    # neighbor orders, then peel it off as a rooted tree from one black.
    # Around a white vertex the anchors follow sigma's rotation.
    neighbor_order: Dict[int, List[tuple]] = {}
    for v in range(n_vertices):
        if v == v0:
            continue
        order = []
        for d in pmap.vertices()[v]:
            if d in white_edges[v]:
                order.append(("black", black_of(white_edges[v][d]), d))
        neighbor_order[v] = order
    for f in range(n_faces):
        order = []
        for item in black_items[f]:
            if item[0] == "edge":
                order.append(("white", item[1], item[2]))
            elif item[0] == "bud":
                order.append(("budleaf",))
            else:
                order.append(("black", black_of(item[1]), item[2]))
        neighbor_order[black_of(f)] = order

    # Tree sanity: whites (minus v0) + blacks, one fewer edges than nodes.
    n_nodes = (n_vertices - 1) + n_faces
    n_edges = sum(
        1 for v, order in neighbor_order.items() for it in order if it[0] != "budleaf"
    )
    if n_edges != 2 * (n_nodes - 1):
        raise MapError("construction did not produce a tree; map data corrupt")

    root = black_of(0)
    visiting = set()

    def build(node_id: int, parent_key: tuple | None) -> MNode:
        if node_id in visiting:
            raise MapError("cycle while assembling the mobile; map data corrupt")
        visiting.add(node_id)
        order = neighbor_order[node_id]
        k = len(order)
        if parent_key is None:
            rotated = list(order)
        else:
            pi = order.index(parent_key)
            rotated = [order[(pi + 1 + off) % k] for off in range(k - 1)]
        children = []
        for item in rotated:
            if item[0] == "budleaf":
                children.append(bud())
            else:
                _, other, anchor = item
                if node_id >= n_vertices:  # black side; mirror key at the other end
                    if item[0] == "white":
                        back = ("black", node_id, anchor)
                    else:
                        back = ("black", node_id, anchor ^ 1)
                else:
                    back = ("white", node_id, anchor)
                children.append(build(other, back))
        color = WHITE if node_id < n_vertices else BLACK
        return MNode(color, tuple(children))

    tree = build(root, None)
    if sum(1 for _ in _iter_real(tree)) != n_nodes:
        raise MapError("mobile is disconnected; map data corrupt")
    return canonical_representative(tree)


def _iter_real(root: MNode):
    stack = [root]
    while stack:
        n = stack.pop()
        if n.color != BUD:
            yield n
        stack.extend(n.children)


# ---------------------------------------------------------------------------
# forest aggregation
# ---------------------------------------------------------------------------


class _Vert:
    __slots__ = ("color", "children", "mark", "uid")

    def __init__(self, color, mark=None, uid=None):
        self.color = color
        self.children: List["_Vert"] = []
        self.mark = mark
        self.uid = uid


def _thaw(node: MNode, counter: List[int]) -> _Vert:
    v = _Vert(node.color, node.mark, counter[0])
    counter[0] += 1
    v.children = [_thaw(c, counter) for c in node.children]
    return v


def _freeze(v: _Vert) -> MNode:
    return MNode(v.color, tuple(_freeze(c) for c in v.children), v.mark)


def _find(v: _Vert, pred) -> List[List[int]]:
    out = []

    def walk(node: _Vert, path: List[int]):
        if pred(node):
            out.append(list(path))
        for i, c in enumerate(node.children):
            path.append(i)
            walk(c, path)
            path.pop()

    walk(v, [])
    return out


def _node_at(v: _Vert, path: Sequence[int]) -> _Vert:
    for i in path:
        v = v.children[i]
    return v


def aggregate_trace(
    forest: MobileForest, groups: Sequence[int], choices: Sequence[int], p: int = 2
) -> Tuple[MNode, Tuple[int, ...]]:
    """Run the aggregation and also return the matching undo choices.

    Step 1 binds consecutive runs of (p-1)*a_k components under new marked
    black vertices b_1..b_r.  Step i of the merge phase (i = 1..r-1) takes
    the i-th mark from the *end* of the forest's mark list, picks the
    eligible component given by ``choices[i-1]`` (components not containing
    that mark, ordered by their root's mark number), and fuses the rightmost
    white neighbour u of the chosen root into the marked white: the chosen
    root's last child edge becomes its parent edge and u's branches are
    appended after it at the receiving vertex.  The returned undo choices
    drive :func:`disaggregate` through the exact inverse splits (last merge
    undone first).
    """
    groups = tuple(groups)
    r = len(groups)
    if any(a < 1 for a in groups):
        raise BijectionError("group sizes must be positive")
    if p < 2:
        raise BijectionError("p must be at least 2")
    s = (p - 1) * sum(groups)
    if len(forest.components) != s:
        raise BijectionError(
            f"forest has {len(forest.components)} components, groups need {s}"
        )
    if len(forest.marks) != r - 1:
        raise BijectionError(f"need {r - 1} marks, got {len(forest.marks)}")
    if len(choices) != r - 1:
        raise BijectionError(f"need {r - 1} choices, got {len(choices)}")

    counter = [0]
    comps = [_thaw(c, counter) for c in forest.components]
    mark_nodes = [_node_at(comps[ci], path) for ci, path in forest.marks]

    # Bind groups under new black vertices b_1..b_r (marks are 1-based).
    roots: List[_Vert] = []
    pos = 0
    for k, a in enumerate(groups, start=1):
        b = _Vert(BLACK, mark=k)
        b.children = comps[pos : pos + (p - 1) * a]
        pos += (p - 1) * a
        roots.append(b)

    comp_of: Dict[int, _Vert] = {}  # root-mark -> root vert
    for b in roots:
        comp_of[b.mark] = b

    def root_of(marked_white: _Vert) -> int:
        for mk, b in comp_of.items():
            if _contains(b, marked_white):
                return mk
        raise BijectionError("mark lost during aggregation")

    merged_marks: List[int] = []  # chosen root mark per merge step
    for i in range(1, r):
        w = mark_nodes[r - 1 - i]  # w_{r-i}
        home = root_of(w)
        eligible = sorted(mk for mk in comp_of if mk != home)
        idx = choices[i - 1]
        if not (0 <= idx < len(eligible)):
            raise BijectionError(
                f"choice {idx} out of range at step {i} ({len(eligible)} eligible)"
            )
        chosen = eligible[idx]
        b = comp_of.pop(chosen)
        # Fuse the root's rightmost white neighbour into w: the last child
        # edge of b turns into its parent edge, u's branches follow it.
        u = b.children[-1]
        if u.color != WHITE:
            raise BijectionError("component root's rightmost child is not white")
        b.children = b.children[:-1]
        w.children.append(b)
        w.children.extend(u.children)
        # The fused vertex keeps u's mark duties, if any.
        for k, mn in enumerate(mark_nodes):
            if mn is u:
                mark_nodes[k] = w
        merged_marks.append(chosen)

    ((_, final_root),) = comp_of.items()
    mobile = _freeze(final_root)

    # Matching disaggregate choices: undo merges last-first; at undo step j
    # the eligible marked blacks are the non-roots, ordered by mark number.
    done: set = set()
    undo_choices: List[int] = []
    for j in range(r - 1, 0, -1):
        target = merged_marks[j - 1]
        eligible = sorted(mk for mk in merged_marks if mk not in done)
        undo_choices.append(eligible.index(target))
        done.add(target)
    return mobile, tuple(undo_choices)


def _contains(root: _Vert, node: _Vert) -> bool:
    stack = [root]
    while stack:
        v = stack.pop()
        if v is node:
            return True
        stack.extend(v.children)
    return False


def aggregate(
    forest: MobileForest, groups: Sequence[int], choices: Sequence[int], p: int = 2
) -> MNode:
    """The aggregated pruned mobile (see :func:`aggregate_trace`)."""
    return aggregate_trace(forest, groups, choices, p)[0]


def disaggregate(mobile: MNode, choices: Sequence[int], p: int = 2) -> MobileForest:
    """Split a rooted pruned mobile with r marked blacks back into a forest.

    choices[i] picks which marked black vertex, among those not currently
    the root of their component (ordered by mark number), is split at step
    i.  Splitting black b at its parent white V detaches b together with
    every branch of V after it (that is exactly the segment that arrived
    with b); those later branches become the branches of the re-created
    white vertex u, reattached as b's last child, and V is the white vertex
    recovered as the step's mark.  A mark recovered at V by an earlier step
    whose segment starts after b's edge rides along to u, which is what
    makes splits in any order exact inverses of merges.

    The step-i split recovers mark w_i; under the choice list returned by
    :func:`aggregate_trace` (merges undone last-first) the result is the
    original forest.
    """
    if mobile.mark is None or mobile.color != BLACK:
        raise BijectionError("mobile must be rooted at a marked black vertex")
    counter = [0]
    root = _thaw(mobile, counter)

    marked: Dict[int, _Vert] = {}

    def index_marks(v: _Vert):
        if v.color == BLACK and v.mark is not None:
            if v.mark in marked:
                raise BijectionError(f"duplicate mark {v.mark}")
            marked[v.mark] = v
        for c in v.children:
            index_marks(c)

    index_marks(root)
    r = len(marked)
    if r < 1:
        raise BijectionError("no marked black vertices")
    if len(choices) != r - 1:
        raise BijectionError(f"need {r - 1} choices, got {len(choices)}")

    def parent_of(target: _Vert):
        def walk(v):
            for i, c in enumerate(v.children):
                if c is target:
                    return (v, i)
                got = walk(c)
                if got:
                    return got
            return None

        for b in component_root_verts:
            got = walk(b)
            if got:
                return got
        return None

    component_roots = {root.mark}
    component_root_verts = [root]
    # Recovered marks as [vertex, segment-start index]; index is the position
    # the mark's merge segment occupied in vertex.children when recovered.
    recovered: List[List] = []
    for step, idx in enumerate(choices, start=1):
        eligible = sorted(mk for mk in marked if mk not in component_roots)
        if not (0 <= idx < len(eligible)):
            raise BijectionError(
                f"choice {idx} out of range at step {step} ({len(eligible)} eligible)"
            )
        mk = eligible[idx]
        b = marked[mk]
        got = parent_of(b)
        if got is None:
            raise BijectionError("marked black vertex has no parent; corrupt mobile")
        v, i = got
        if v.color != WHITE:
            raise BijectionError("marked black vertex does not hang from a white vertex")
        u = _Vert(WHITE)
        u.children = v.children[i + 1 :]
        v.children = v.children[:i]
        b.children.append(u)
        # Earlier-recovered marks whose segment sat after b's edge move to u.
        for rec in recovered:
            if rec[0] is v and rec[1] > i:
                rec[0] = u
                rec[1] = rec[1] - (i + 1)
        recovered.append([v, i])
        component_roots.add(mk)
        component_root_verts.append(b)

    # Strip the marked blacks: each component root's children are its group.
    comps: List[MNode] = []
    vert_location: Dict[int, Tuple[int, Tuple[int, ...]]] = {}

    def record_paths(node: _Vert, comp_idx: int, path: Tuple[int, ...]):
        vert_location[id(node)] = (comp_idx, path)
        for ci, c in enumerate(node.children):
            record_paths(c, comp_idx, path + (ci,))

    out_index = 0
    for mk in sorted(marked):
        b = marked[mk]
        for child in b.children:
            record_paths(child, out_index, ())
            comps.append(_freeze(child))
            out_index += 1

    marks: List[Tuple[int, Tuple[int, ...]]] = []
    for vert, _seg in recovered:
        loc = vert_location.get(id(vert))
        if loc is None:
            raise BijectionError("recovered mark fell outside every component")
        marks.append(loc)
    return MobileForest(tuple(comps), tuple(marks))


# ---------------------------------------------------------------------------
# blossoming trees <-> rooted mobiles
# ---------------------------------------------------------------------------


def _subset_rank_list(n: int, k: int) -> List[Tuple[int, ...]]:
    from itertools import combinations

    return list(combinations(range(n), k))


def blossoming_to_mobile(tree: BlossomingTree) -> MNode:
    """Corner-rooted p-mobile matching a blossoming p-tree.

    Recursion: a leaf becomes a bare round vertex; an internal node of
    degree p*i becomes the first branch of the image of its last subtree,
    carrying the images of the other subtrees, with the two bud patterns
    (which subtree slots are buds vs which branch slots are big buds)
    matched by lexicographic rank.
    """
    p = tree.p
    return _blossom_to_planted(tree.top, p)


def _blossom_to_planted(node: MNode, p: int) -> MNode:
    if node.color == WHITE:
        return white()
    if p == 2:
        slots = node.children
        i = sum(1 for c in slots if not c.is_bud)
        sub_positions = tuple(j for j, c in enumerate(slots) if not c.is_bud)
        subtrees = [c for c in slots if not c.is_bud]
        pat_rank = _subset_rank_list(2 * i - 1, i).index(sub_positions)
        bud_positions = _subset_rank_list(2 * i - 1, i)[pat_rank]
        arity = i
        dpos = 0
    else:
        light = None
        dpos = -1
        for j, c in enumerate(node.children):
            if c.color == BLACK:
                light, dpos = c, j
        if light is None:
            raise MobileError("intermediate dark square lost its light child")
        slots = light.children
        bigbud_positions = tuple(j for j, c in enumerate(slots) if is_big_bud(c, p))
        subtrees = [c for c in slots if not is_big_bud(c, p)]
        i = (len(slots) + 1) // p
        t_patterns = [
            (d, s)
            for d in range(p - 1)
            for s in _subset_rank_list(p * i - 1, i - 1)
        ]
        pat_rank = t_patterns.index((dpos, bigbud_positions))
        bud_positions = _subset_rank_list(p * i - 1, i)[pat_rank]
        arity = (p - 1) * i

    # Build the mobile branch: a black of degree p*i whose non-parent slots
    # hold buds at bud_positions and whites elsewhere.
    last = _blossom_to_planted(subtrees[-1], p)
    firsts = [_blossom_to_planted(c, p) for c in subtrees[:-1]]
    unit = bud if p == 2 else (lambda: big_bud(p))
    branch_children: List[MNode] = []
    wi = 0
    total_slots = len(slots) if p == 2 else len(slots)
    for j in range(total_slots):
        if j in bud_positions:
            branch_children.append(unit())
        else:
            branch_children.append(firsts[wi])
            wi += 1
    if wi != len(firsts):
        raise MobileError("bud pattern mismatch while rebuilding branch")
    branch = MNode(BLACK, tuple(branch_children))
    return MNode(WHITE, (branch,) + last.children)


def mobile_to_blossoming(mobile: MNode, p: int) -> BlossomingTree:
    """Inverse of :func:`blossoming_to_mobile`."""
    return BlossomingTree(p, _planted_to_blossom(mobile, p))


def _planted_to_blossom(node: MNode, p: int) -> MNode:
    if node.color != WHITE:
        raise MobileError("rooted mobiles are rooted at a round vertex")
    if not node.children:
        return white()
    branch = node.children[0]
    rest = MNode(WHITE, node.children[1:])
    if branch.color != BLACK:
        raise MobileError("round vertices may only carry light-square branches")
    slots = branch.children
    if p == 2:
        bud_positions = tuple(j for j, c in enumerate(slots) if c.is_bud)
        whites_below = [c for c in slots if not c.is_bud]
        i = len(bud_positions)
        if len(slots) != 2 * i - 1:
            raise MobileError(f"branch of degree {len(slots) + 1} is not even")
        pat_rank = _subset_rank_list(2 * i - 1, i).index(bud_positions)
        sub_positions = _subset_rank_list(2 * i - 1, i)[pat_rank]
        images = [_planted_to_blossom(c, p) for c in whites_below] + [
            _planted_to_blossom(rest, p)
        ]
        children: List[MNode] = []
        si = 0
        for j in range(2 * i - 1):
            if j in sub_positions:
                children.append(images[si])
                si += 1
            else:
                children.append(bud())
        return MNode(BLACK, tuple(children))
    bigbud_positions = tuple(j for j, c in enumerate(slots) if is_big_bud(c, p))
    whites_below = [c for c in slots if not is_big_bud(c, p)]
    i = len(bigbud_positions)
    deg = len(slots) + 1
    if deg != p * i or any(c.color != WHITE for c in whites_below):
        raise MobileError(f"branch of degree {deg} is not a valid p-mobile branch")
    pat_rank = _subset_rank_list(p * i - 1, i).index(bigbud_positions)
    t_patterns = [
        (d, s) for d in range(p - 1) for s in _subset_rank_list(p * i - 1, i - 1)
    ]
    dpos, bb_positions = t_patterns[pat_rank]
    images = [_planted_to_blossom(c, p) for c in whites_below] + [
        _planted_to_blossom(rest, p)
    ]
    light_children: List[MNode] = []
    si = 0
    for j in range(p * i - 1):
        if j in bb_positions:
            light_children.append(big_bud(p))
        else:
            light_children.append(images[si])
            si += 1
    light = MNode(BLACK, tuple(light_children))
    dark_children: List[MNode] = []
    for j in range(p - 1):
        if j == dpos:
            dark_children.append(light)
        else:
            dark_children.append(bud())
    return MNode(DARK, tuple(dark_children))
